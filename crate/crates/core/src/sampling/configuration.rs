//! Stub-shuffling samplers for the four configuration models.
//!
//! Output node identifiers are assigned type by type in ascending key order.
//! Loops and parallel edges are kept.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use super::rng_from_seed;
use crate::error::{Error, Result};
use crate::graph::{DegreeHistogram, Graph};
use crate::onion::onion_decompose;
use crate::stats::{
    stub_color, CcmStats, ColorSplit, JointType, LayeredStats, LccmStats, LcmStats, StubColor,
};

fn pair_adjacent(stubs: &[usize], edges: &mut Vec<(usize, usize)>) {
    edges.extend(stubs.chunks_exact(2).map(|p| (p[0], p[1])));
}

/// Shuffles one stub list built from the degree sequence and joins
/// adjacent stubs.
pub fn sample_cm(h: &DegreeHistogram, seed: u64) -> Result<Graph> {
    let stubs = h.stub_count();
    if stubs % 2 == 1 {
        return Err(Error::OddStubTotal(stubs));
    }
    let degrees = h.degree_sequence();
    if degrees.is_empty() {
        return Err(Error::NoNodes);
    }
    let mut rng = rng_from_seed(seed);
    let mut list: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &k)| std::iter::repeat(v).take(k))
        .collect();
    list.shuffle(&mut rng);
    let mut edges = Vec::with_capacity(stubs / 2);
    pair_adjacent(&list, &mut edges);
    Graph::new(degrees.len(), edges)
}

/// One shuffled stub list per degree class; `e(k, k')` pairs are consumed
/// in ascending key order.
pub fn sample_ccm(s: &CcmStats, seed: u64) -> Result<Graph> {
    s.check()?;
    let h = s.histogram();
    if h.node_count() == 0 {
        return Err(Error::NoNodes);
    }
    let mut rng = rng_from_seed(seed);
    let mut lists: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut next = 0;
    for (&k, &count) in h.counts() {
        let list = lists.entry(k).or_default();
        for v in next..next + count {
            list.extend(std::iter::repeat(v).take(k));
        }
        next += count;
        list.shuffle(&mut rng);
    }
    let mut cursor: BTreeMap<usize, usize> = BTreeMap::new();
    let mut take = |k: usize, n: usize| -> Vec<usize> {
        let at = cursor.entry(k).or_insert(0);
        let slice = lists[&k][*at..*at + n].to_vec();
        *at += n;
        slice
    };
    let mut edges = Vec::with_capacity(s.edge_count());
    for (&(a, b), &n) in s.edges() {
        if a == b {
            pair_adjacent(&take(a, 2 * n), &mut edges);
        } else {
            let left = take(a, n);
            let right = take(b, n);
            edges.extend(left.into_iter().zip(right));
        }
    }
    Graph::new(next, edges)
}

/// One batch of edges between two colored stub lists. `left == right`
/// pairs stubs within a single list.
#[derive(Debug, Clone)]
struct Pairing<G> {
    left: (G, StubColor),
    right: (G, StubColor),
    count: usize,
}

/// Everything a layered sampler needs, independent of the random draw.
#[derive(Debug, Clone)]
struct LayeredPlan<G> {
    /// Target type of every output node.
    node_types: Vec<JointType>,
    /// Colored splits to hand out among the nodes of each type.
    splits: BTreeMap<JointType, Vec<ColorSplit>>,
    pairings: Vec<Pairing<G>>,
    group: fn(JointType) -> G,
}

impl<G: Ord + Copy> LayeredPlan<G> {
    fn new(
        stats: &impl LayeredStats,
        pairings: Vec<Pairing<G>>,
        group: fn(JointType) -> G,
    ) -> Self {
        let mut node_types = Vec::with_capacity(stats.node_count());
        for (&t, &n) in stats.joint_counts() {
            node_types.extend(std::iter::repeat(t).take(n));
        }
        let mut splits: BTreeMap<JointType, Vec<ColorSplit>> = BTreeMap::new();
        for (&(t, split), &n) in stats.colored_counts() {
            splits
                .entry(t)
                .or_default()
                .extend(std::iter::repeat(split).take(n));
        }
        Self {
            node_types,
            splits,
            pairings,
            group,
        }
    }

    /// One unvalidated draw.
    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<Graph> {
        let mut lists: BTreeMap<(G, StubColor), Vec<usize>> = BTreeMap::new();
        let mut node = 0;
        for (&t, splits) in &self.splits {
            let mut splits = splits.clone();
            splits.shuffle(rng);
            let g = (self.group)(t);
            for split in splits {
                for (color, times) in [
                    (StubColor::Red, split.red),
                    (StubColor::Green, split.green),
                    (StubColor::Black, split.black),
                ] {
                    lists
                        .entry((g, color))
                        .or_default()
                        .extend(std::iter::repeat(node).take(times));
                }
                node += 1;
            }
        }
        debug_assert_eq!(node, self.node_types.len());
        for list in lists.values_mut() {
            list.shuffle(rng);
        }
        let mut cursor: BTreeMap<(G, StubColor), usize> = BTreeMap::new();
        let mut take = |key: (G, StubColor), n: usize| -> Result<Vec<usize>> {
            let at = cursor.entry(key).or_insert(0);
            let list = lists.get(&key).map(Vec::as_slice).unwrap_or(&[]);
            let slice = list.get(*at..*at + n).ok_or_else(|| {
                Error::InconsistentStats("colored stub list exhausted".into())
            })?;
            *at += n;
            Ok(slice.to_vec())
        };
        let mut edges = Vec::new();
        for p in &self.pairings {
            if p.left == p.right {
                pair_adjacent(&take(p.left, 2 * p.count)?, &mut edges);
            } else {
                let left = take(p.left, p.count)?;
                let right = take(p.right, p.count)?;
                edges.extend(left.into_iter().zip(right));
            }
        }
        Graph::new(self.node_types.len(), edges)
    }

    fn preserves_layers(&self, g: &Graph) -> bool {
        let d = onion_decompose(g);
        self.node_types
            .iter()
            .enumerate()
            .all(|(v, t)| d.layer(v) == t.layer)
    }

    fn attempt(&self, rng: &mut ChaCha8Rng) -> Result<Option<Graph>> {
        let g = self.draw(rng)?;
        Ok(self.preserves_layers(&g).then_some(g))
    }

    fn sample(&self, seed: u64, max_attempts: usize) -> Result<Graph> {
        if max_attempts == 0 {
            return Err(Error::InvalidParameter("max_attempts must be at least 1".into()));
        }
        if self.node_types.is_empty() {
            return Err(Error::NoNodes);
        }
        let mut rng = rng_from_seed(seed);
        for _ in 0..max_attempts {
            if let Some(g) = self.attempt(&mut rng)? {
                return Ok(g);
            }
        }
        Err(Error::AttemptsExhausted {
            attempts: max_attempts,
        })
    }
}

fn lcm_plan(s: &LcmStats) -> Result<LayeredPlan<usize>> {
    s.check()?;
    let pairings = s
        .layer_edges()
        .iter()
        .map(|(&(outer, inner), &count)| {
            let outer_color = stub_color(outer, inner);
            Pairing {
                left: (outer, outer_color),
                right: (inner, StubColor::Red),
                count,
            }
        })
        .collect();
    Ok(LayeredPlan::new(s, pairings, |t| t.layer))
}

fn lccm_plan(s: &LccmStats) -> Result<LayeredPlan<JointType>> {
    s.check()?;
    let pairings = s
        .type_edges()
        .iter()
        .map(|(&(a, b), &count)| Pairing {
            left: (a, stub_color(a.layer, b.layer)),
            right: (b, stub_color(b.layer, a.layer)),
            count,
        })
        .collect();
    Ok(LayeredPlan::new(s, pairings, |t| t))
}

/// Layered configuration model sample.
///
/// Colored splits are dealt to the nodes of each joint type by a random
/// permutation of the recorded splits, so the red, green and black totals
/// are met exactly. Green and black stubs of layer `l` pair with red stubs
/// of earlier layers following `e(l, l')`, and red stubs pair among
/// themselves for `e(l, l)`. A draw is accepted only if its onion
/// decomposition puts every node back in its target layer.
///
/// With exact splits the check never fails: a node of layer `l` keeps
/// exactly `k_r + k_b` live edges when wave `l - 1` runs, above that wave's
/// threshold, and `k_r <= c(l)` at wave `l`, wherever its green stubs land.
/// The retry loop is a guard, not a repair step.
pub fn sample_lcm(s: &LcmStats, seed: u64, max_attempts: usize) -> Result<Graph> {
    lcm_plan(s)?.sample(seed, max_attempts)
}

/// Single draw of [`sample_lcm`]; `Ok(None)` when the layers came out wrong.
pub fn try_sample_lcm(s: &LcmStats, rng: &mut ChaCha8Rng) -> Result<Option<Graph>> {
    lcm_plan(s)?.attempt(rng)
}

/// As [`sample_lcm`], with stub lists per joint degree-layer type and
/// pairings following `e({k,l}, {k',l'})`.
pub fn sample_lccm(s: &LccmStats, seed: u64, max_attempts: usize) -> Result<Graph> {
    lccm_plan(s)?.sample(seed, max_attempts)
}

pub fn try_sample_lccm(s: &LccmStats, rng: &mut ChaCha8Rng) -> Result<Option<Graph>> {
    lccm_plan(s)?.attempt(rng)
}

/// True iff the onion decomposition of `g` yields exactly the `(degree,
/// layer)` counts in `target`.
pub fn validate_layers(g: &Graph, target: &BTreeMap<JointType, usize>) -> bool {
    let d = onion_decompose(g);
    let degrees = g.degrees();
    let mut found: BTreeMap<JointType, usize> = BTreeMap::new();
    for (v, &k) in degrees.iter().enumerate() {
        *found.entry(JointType::new(k, d.layer(v))).or_insert(0) += 1;
    }
    &found == target
}
