//! Sufficient statistics of the four configuration models.
//!
//! Symmetric matrices are stored once per unordered pair of types, keyed
//! with the smaller type first for degree classes and joint types, and with
//! the outer (larger) layer first for layer pairs.
//!
//! Stubs are colored from the point of view of their own node in layer `l`:
//! red when the other end sits in a layer `>= l`, black when it sits in
//! `l - 1`, green when it sits deeper than that. Both ends of a within-layer
//! edge, and both stubs of a self-loop, are red.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DegreeHistogram, Graph};
use crate::onion::OnionDecomposition;

/// A node type of the layered models: degree and onion layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct JointType {
    pub degree: usize,
    pub layer: usize,
}

impl JointType {
    pub fn new(degree: usize, layer: usize) -> Self {
        Self { degree, layer }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum StubColor {
    Red,
    Green,
    Black,
}

/// Color of a stub at a node of layer `from` whose edge ends in layer `to`.
pub fn stub_color(from: usize, to: usize) -> StubColor {
    if to >= from {
        StubColor::Red
    } else if to + 1 == from {
        StubColor::Black
    } else {
        StubColor::Green
    }
}

/// Per-node tally of stub colors, `red + green + black == degree`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ColorSplit {
    pub red: usize,
    pub green: usize,
    pub black: usize,
}

impl ColorSplit {
    pub fn new(red: usize, green: usize, black: usize) -> Self {
        Self { red, green, black }
    }

    pub fn total(&self) -> usize {
        self.red + self.green + self.black
    }

    fn add(&mut self, color: StubColor) {
        match color {
            StubColor::Red => self.red += 1,
            StubColor::Green => self.green += 1,
            StubColor::Black => self.black += 1,
        }
    }
}

fn check_matches(g: &Graph, d: &OnionDecomposition) {
    assert_eq!(
        g.node_count(),
        d.node_count(),
        "decomposition does not belong to this graph"
    );
}

/// Colors of both endpoints of every edge, in [`Graph::edges`] order.
pub fn color_stubs(g: &Graph, d: &OnionDecomposition) -> Vec<[StubColor; 2]> {
    check_matches(g, d);
    g.edges()
        .iter()
        .map(|&(u, v)| {
            let (lu, lv) = (d.layer(u), d.layer(v));
            [stub_color(lu, lv), stub_color(lv, lu)]
        })
        .collect()
}

/// Colored split of every node.
pub fn node_splits(g: &Graph, d: &OnionDecomposition) -> Vec<ColorSplit> {
    let mut splits = vec![ColorSplit::default(); g.node_count()];
    for (&(u, v), [cu, cv]) in g.edges().iter().zip(color_stubs(g, d)) {
        splits[u].add(cu);
        splits[v].add(cv);
    }
    splits
}

fn ordered<T: Ord>(a: T, b: T) -> (T, T) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn log_choose(n: usize, k: usize) -> f64 {
    use crate::numeric::log_factorial;
    log_factorial(n as u64) - log_factorial(k as u64) - log_factorial((n - k) as u64)
}

fn binomial_pmf(n: usize, k: usize, p: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    let term = |x: usize, q: f64| if x == 0 { 0.0 } else { x as f64 * q.ln() };
    (log_choose(n, k) + term(k, p) + term(n - k, 1.0 - p)).exp()
}

// ---------------------------------------------------------------------------
// CCM

/// Degree histogram plus the degree-class edge matrix `e(k, k')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcmStats {
    histogram: DegreeHistogram,
    edges: BTreeMap<(usize, usize), usize>,
}

pub fn extract_ccm(g: &Graph) -> CcmStats {
    let degrees = g.degrees();
    let mut edges = BTreeMap::new();
    for &(u, v) in g.edges() {
        *edges.entry(ordered(degrees[u], degrees[v])).or_insert(0) += 1;
    }
    CcmStats {
        histogram: DegreeHistogram::from_degrees(&degrees),
        edges,
    }
}

impl CcmStats {
    /// Assembles statistics without checking them; see [`CcmStats::check`].
    pub fn from_parts(
        histogram: DegreeHistogram,
        edges: impl IntoIterator<Item = ((usize, usize), usize)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for ((a, b), n) in edges {
            if n > 0 {
                *map.entry(ordered(a, b)).or_insert(0) += n;
            }
        }
        Self {
            histogram,
            edges: map,
        }
    }

    pub fn histogram(&self) -> &DegreeHistogram {
        &self.histogram
    }

    /// Non-zero entries keyed `(k, k')` with `k <= k'`.
    pub fn edges(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.edges
    }

    pub fn edge(&self, k: usize, k2: usize) -> usize {
        self.edges.get(&ordered(k, k2)).copied().unwrap_or(0)
    }

    pub fn num_classes(&self) -> usize {
        self.histogram.num_classes()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().sum()
    }

    /// Stub conservation: each class's edge ends add up to `k * N_k`.
    pub fn check(&self) -> Result<()> {
        let mut ends: BTreeMap<usize, usize> = BTreeMap::new();
        for (&(a, b), &n) in &self.edges {
            *ends.entry(a).or_insert(0) += n;
            *ends.entry(b).or_insert(0) += n;
        }
        if let Some(k) = ends.keys().find(|&&k| self.histogram.count(k) == 0) {
            return Err(Error::InconsistentStats(format!(
                "edges reference empty degree class {k}"
            )));
        }
        for (&k, &count) in self.histogram.counts() {
            let stubs = ends.get(&k).copied().unwrap_or(0);
            if stubs != k * count {
                return Err(Error::InconsistentStats(format!(
                    "degree class {k} has {} stubs but its edges use {stubs}",
                    k * count
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// shared layered tallies

fn split_counts(
    g: &Graph,
    d: &OnionDecomposition,
) -> (
    BTreeMap<JointType, usize>,
    BTreeMap<(JointType, ColorSplit), usize>,
    Vec<JointType>,
) {
    let degrees = g.degrees();
    let splits = node_splits(g, d);
    let mut joint = BTreeMap::new();
    let mut colored = BTreeMap::new();
    let mut types = Vec::with_capacity(degrees.len());
    for (v, split) in splits.into_iter().enumerate() {
        let t = JointType::new(degrees[v], d.layer(v));
        types.push(t);
        if t.degree == 0 {
            continue;
        }
        *joint.entry(t).or_insert(0) += 1;
        *colored.entry((t, split)).or_insert(0) += 1;
    }
    (joint, colored, types)
}

fn layer_coreness(d: &OnionDecomposition) -> BTreeMap<usize, usize> {
    d.layer_table()
        .iter()
        .map(|row| (row.layer, row.coreness))
        .collect()
}

fn check_splits(
    joint: &BTreeMap<JointType, usize>,
    splits: &BTreeMap<(JointType, ColorSplit), usize>,
) -> Result<()> {
    let mut per_type: BTreeMap<JointType, usize> = BTreeMap::new();
    for (&(t, split), &n) in splits {
        if split.total() != t.degree {
            return Err(Error::InconsistentStats(format!(
                "split {split:?} does not add up to degree {}",
                t.degree
            )));
        }
        *per_type.entry(t).or_insert(0) += n;
    }
    if &per_type != joint {
        return Err(Error::InconsistentStats(
            "colored degree counts disagree with joint counts".into(),
        ));
    }
    Ok(())
}

/// Shared accessors of the two layered models.
pub trait LayeredStats {
    /// `N_{k,l}` for every non-empty joint type.
    fn joint_counts(&self) -> &BTreeMap<JointType, usize>;

    /// `N_{k_r,k_g,k_b | k,l}`.
    fn colored_counts(&self) -> &BTreeMap<(JointType, ColorSplit), usize>;

    fn layer_coreness(&self) -> &BTreeMap<usize, usize>;

    fn edge_count(&self) -> usize;

    fn node_count(&self) -> usize {
        self.joint_counts().values().sum()
    }

    /// Number of non-empty joint degree-layer classes.
    fn num_joint_types(&self) -> usize {
        self.joint_counts().len()
    }

    fn degree_histogram(&self) -> DegreeHistogram {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for (t, &n) in self.joint_counts() {
            *counts.entry(t.degree).or_insert(0) += n;
        }
        DegreeHistogram::from_counts(counts).expect("joint types have positive degree")
    }
}

// ---------------------------------------------------------------------------
// LCM

/// Joint degree-layer counts, layer edge matrix and colored tallies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcmStats {
    joint: BTreeMap<JointType, usize>,
    layer_edges: BTreeMap<(usize, usize), usize>,
    splits: BTreeMap<(JointType, ColorSplit), usize>,
    coreness: BTreeMap<usize, usize>,
}

pub fn extract_lcm(g: &Graph, d: &OnionDecomposition) -> LcmStats {
    check_matches(g, d);
    let (joint, splits, _) = split_counts(g, d);
    let mut layer_edges = BTreeMap::new();
    for &(u, v) in g.edges() {
        let (inner, outer) = ordered(d.layer(u), d.layer(v));
        *layer_edges.entry((outer, inner)).or_insert(0) += 1;
    }
    LcmStats {
        joint,
        layer_edges,
        splits,
        coreness: layer_coreness(d),
    }
}

impl LcmStats {
    /// Assembles statistics without checking them; see [`LcmStats::check`].
    pub fn from_parts(
        joint: BTreeMap<JointType, usize>,
        layer_edges: impl IntoIterator<Item = ((usize, usize), usize)>,
        splits: BTreeMap<(JointType, ColorSplit), usize>,
        coreness: BTreeMap<usize, usize>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for ((a, b), n) in layer_edges {
            if n > 0 {
                let (inner, outer) = ordered(a, b);
                *map.entry((outer, inner)).or_insert(0) += n;
            }
        }
        Self {
            joint,
            layer_edges: map,
            splits,
            coreness,
        }
    }

    /// Non-zero entries keyed `(l, l')` with `l >= l'`.
    pub fn layer_edges(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.layer_edges
    }

    pub fn layer_edge(&self, l: usize, l2: usize) -> usize {
        let (inner, outer) = ordered(l, l2);
        self.layer_edges.get(&(outer, inner)).copied().unwrap_or(0)
    }

    /// Layers present in the joint counts, ascending.
    pub fn layers(&self) -> Vec<usize> {
        let mut layers: Vec<usize> = self.joint.keys().map(|t| t.layer).collect();
        layers.sort_unstable();
        layers.dedup();
        layers
    }

    /// Number of non-empty layers, the edge-matrix dimension `g`.
    pub fn num_layers(&self) -> usize {
        self.layers().len()
    }

    /// Red stubs of layer `l`: ends of edges to outer layers plus both
    /// ends of within-layer edges.
    pub fn red(&self, l: usize) -> usize {
        self.layer_edges
            .iter()
            .map(|(&(outer, inner), &n)| match () {
                _ if outer == l && inner == l => 2 * n,
                _ if inner == l => n,
                _ => 0,
            })
            .sum()
    }

    pub fn green(&self, l: usize) -> usize {
        self.layer_edges
            .iter()
            .filter(|(&(outer, inner), _)| outer == l && inner + 1 < l)
            .map(|(_, &n)| n)
            .sum()
    }

    pub fn black(&self, l: usize) -> usize {
        if l < 2 {
            0
        } else {
            self.layer_edge(l, l - 1)
        }
    }

    /// Total stubs of layer `l`.
    pub fn layer_stubs(&self, l: usize) -> usize {
        self.joint
            .iter()
            .filter(|(t, _)| t.layer == l)
            .map(|(t, &n)| t.degree * n)
            .sum()
    }

    fn layer_nodes(&self, l: usize) -> usize {
        self.joint
            .iter()
            .filter(|(t, _)| t.layer == l)
            .map(|(_, &n)| n)
            .sum()
    }

    /// Probability that one of the `c(l)` constrained stubs of a layer-`l`
    /// node is red. `None` when the layer has no constrained stubs.
    pub fn red_fraction(&self, l: usize) -> Option<f64> {
        let c = *self.coreness.get(&l)?;
        let slots = c * self.layer_nodes(l);
        (slots > 0).then(|| self.red(l) as f64 / slots as f64)
    }

    /// Probability that one of the `k - c(l)` free stubs of a layer-`l`
    /// node is green. `None` when the layer has no free stubs.
    pub fn green_fraction(&self, l: usize) -> Option<f64> {
        let c = *self.coreness.get(&l)?;
        let slots: usize = self
            .joint
            .iter()
            .filter(|(t, _)| t.layer == l)
            .map(|(t, &n)| t.degree.saturating_sub(c) * n)
            .sum();
        (slots > 0).then(|| self.green(l) as f64 / slots as f64)
    }

    /// Binomial model of the colored split of a degree-`k` node in layer
    /// `l`, parametrized by [`LcmStats::red_fraction`] and
    /// [`LcmStats::green_fraction`]. When `k_r = c(l) = c(l-1)` one free
    /// stub is forced black and drops out of the green trials.
    pub fn colored_split_probability(&self, split: ColorSplit, k: usize, l: usize) -> f64 {
        colored_split_probability(
            split,
            k,
            l,
            &self.coreness,
            self.red_fraction(l).unwrap_or(0.0),
            self.green_fraction(l).unwrap_or(0.0),
        )
    }

    pub fn check(&self) -> Result<()> {
        check_splits(&self.joint, &self.splits)?;
        let layers = self.layers();
        for (&(outer, inner), _) in &self.layer_edges {
            if !layers.contains(&outer) || !layers.contains(&inner) {
                return Err(Error::InconsistentStats(format!(
                    "edge matrix references empty layer pair ({outer}, {inner})"
                )));
            }
        }
        for l in layers {
            let mut colored = ColorSplit::default();
            for (&(t, split), &n) in &self.splits {
                if t.layer == l {
                    colored.red += split.red * n;
                    colored.green += split.green * n;
                    colored.black += split.black * n;
                }
            }
            let expected = ColorSplit::new(self.red(l), self.green(l), self.black(l));
            if colored != expected {
                return Err(Error::InconsistentStats(format!(
                    "layer {l}: colored degrees give {colored:?}, edge matrix gives {expected:?}"
                )));
            }
        }
        Ok(())
    }
}

fn colored_split_probability(
    split: ColorSplit,
    k: usize,
    l: usize,
    coreness: &BTreeMap<usize, usize>,
    p_red: f64,
    p_green: f64,
) -> f64 {
    let Some(&c) = coreness.get(&l) else {
        return 0.0;
    };
    if split.total() != k || split.red > c || k < c {
        return 0.0;
    }
    let forced = usize::from(split.red == c && l > 1 && coreness.get(&(l - 1)) == Some(&c));
    let Some(trials) = (k - c).checked_sub(forced) else {
        return 0.0;
    };
    binomial_pmf(c, split.red, p_red) * binomial_pmf(trials, split.green, p_green)
}

impl LayeredStats for LcmStats {
    fn joint_counts(&self) -> &BTreeMap<JointType, usize> {
        &self.joint
    }

    fn colored_counts(&self) -> &BTreeMap<(JointType, ColorSplit), usize> {
        &self.splits
    }

    fn layer_coreness(&self) -> &BTreeMap<usize, usize> {
        &self.coreness
    }

    fn edge_count(&self) -> usize {
        self.layer_edges.values().sum()
    }
}

// ---------------------------------------------------------------------------
// LCCM

/// Joint degree-layer counts, the full joint-type edge matrix and colored
/// tallies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LccmStats {
    joint: BTreeMap<JointType, usize>,
    type_edges: BTreeMap<(JointType, JointType), usize>,
    splits: BTreeMap<(JointType, ColorSplit), usize>,
    coreness: BTreeMap<usize, usize>,
}

pub fn extract_lccm(g: &Graph, d: &OnionDecomposition) -> LccmStats {
    check_matches(g, d);
    let (joint, splits, types) = split_counts(g, d);
    let mut type_edges = BTreeMap::new();
    for &(u, v) in g.edges() {
        *type_edges.entry(ordered(types[u], types[v])).or_insert(0) += 1;
    }
    LccmStats {
        joint,
        type_edges,
        splits,
        coreness: layer_coreness(d),
    }
}

impl LccmStats {
    /// Assembles statistics without checking them; see [`LccmStats::check`].
    pub fn from_parts(
        joint: BTreeMap<JointType, usize>,
        type_edges: impl IntoIterator<Item = ((JointType, JointType), usize)>,
        splits: BTreeMap<(JointType, ColorSplit), usize>,
        coreness: BTreeMap<usize, usize>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for ((a, b), n) in type_edges {
            if n > 0 {
                *map.entry(ordered(a, b)).or_insert(0) += n;
            }
        }
        Self {
            joint,
            type_edges: map,
            splits,
            coreness,
        }
    }

    /// Non-zero entries keyed by ordered type pairs.
    pub fn type_edges(&self) -> &BTreeMap<(JointType, JointType), usize> {
        &self.type_edges
    }

    pub fn type_edge(&self, a: JointType, b: JointType) -> usize {
        self.type_edges.get(&ordered(a, b)).copied().unwrap_or(0)
    }

    /// Sums the joint matrix over degrees, keyed like
    /// [`LcmStats::layer_edges`].
    pub fn layer_marginal(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for (&(a, b), &n) in &self.type_edges {
            let (inner, outer) = ordered(a.layer, b.layer);
            *out.entry((outer, inner)).or_insert(0) += n;
        }
        out
    }

    /// Colored stub totals of every type touched by the edge matrix.
    pub fn stub_tallies(&self) -> BTreeMap<JointType, ColorSplit> {
        let mut tallies: BTreeMap<JointType, ColorSplit> = BTreeMap::new();
        for (&(a, b), &n) in &self.type_edges {
            if a == b {
                tallies.entry(a).or_default().red += 2 * n;
                continue;
            }
            for (here, there) in [(a, b), (b, a)] {
                let tally = tallies.entry(here).or_default();
                match stub_color(here.layer, there.layer) {
                    StubColor::Red => tally.red += n,
                    StubColor::Green => tally.green += n,
                    StubColor::Black => tally.black += n,
                }
            }
        }
        tallies
    }

    fn stub_tally(&self, t: JointType) -> ColorSplit {
        self.stub_tallies().get(&t).copied().unwrap_or_default()
    }

    /// `R(k,l)`: stubs of type `t` reaching layers `>= l`; edges inside the
    /// type contribute both ends.
    pub fn red(&self, t: JointType) -> usize {
        self.stub_tally(t).red
    }

    pub fn green(&self, t: JointType) -> usize {
        self.stub_tally(t).green
    }

    pub fn black(&self, t: JointType) -> usize {
        self.stub_tally(t).black
    }

    pub fn red_fraction(&self, t: JointType) -> Option<f64> {
        let c = *self.coreness.get(&t.layer)?;
        let slots = c * self.joint.get(&t).copied().unwrap_or(0);
        (slots > 0).then(|| self.red(t) as f64 / slots as f64)
    }

    pub fn green_fraction(&self, t: JointType) -> Option<f64> {
        let c = *self.coreness.get(&t.layer)?;
        let slots = t.degree.saturating_sub(c) * self.joint.get(&t).copied().unwrap_or(0);
        (slots > 0).then(|| self.green(t) as f64 / slots as f64)
    }

    /// As [`LcmStats::colored_split_probability`], with fractions
    /// conditioned on the joint type.
    pub fn colored_split_probability(&self, split: ColorSplit, t: JointType) -> f64 {
        colored_split_probability(
            split,
            t.degree,
            t.layer,
            &self.coreness,
            self.red_fraction(t).unwrap_or(0.0),
            self.green_fraction(t).unwrap_or(0.0),
        )
    }

    pub fn check(&self) -> Result<()> {
        check_splits(&self.joint, &self.splits)?;
        for &(a, b) in self.type_edges.keys() {
            if !self.joint.contains_key(&a) || !self.joint.contains_key(&b) {
                return Err(Error::InconsistentStats(format!(
                    "edge matrix references empty type pair ({a:?}, {b:?})"
                )));
            }
        }
        let mut colored: BTreeMap<JointType, ColorSplit> = BTreeMap::new();
        for (&(t, split), &n) in &self.splits {
            let entry = colored.entry(t).or_default();
            entry.red += split.red * n;
            entry.green += split.green * n;
            entry.black += split.black * n;
        }
        let tallies = self.stub_tallies();
        for (t, tally) in colored {
            let expected = tallies.get(&t).copied().unwrap_or_default();
            if tally != expected {
                return Err(Error::InconsistentStats(format!(
                    "type {t:?}: colored degrees give {tally:?}, edge matrix gives {expected:?}"
                )));
            }
        }
        Ok(())
    }
}

impl LayeredStats for LccmStats {
    fn joint_counts(&self) -> &BTreeMap<JointType, usize> {
        &self.joint
    }

    fn colored_counts(&self) -> &BTreeMap<(JointType, ColorSplit), usize> {
        &self.splits
    }

    fn layer_coreness(&self) -> &BTreeMap<usize, usize> {
        &self.coreness
    }

    fn edge_count(&self) -> usize {
        self.type_edges.values().sum()
    }
}
