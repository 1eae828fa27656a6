//! Jensen-Shannon divergences between the CM, CCM, LCM and LCCM
//! representations of two graphs (the network onion divergence).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::Graph;
use crate::onion::onion_decompose;

/// A probability distribution over canonical keys.
#[derive(Debug, Clone, PartialEq)]
pub struct TypedDistribution<K: Ord> {
    mass: BTreeMap<K, f64>,
}

impl<K: Ord> TypedDistribution<K> {
    /// Normalizes integer counts. Returns `None` when they sum to zero.
    pub fn from_counts(counts: impl IntoIterator<Item = (K, usize)>) -> Option<Self> {
        let mut tally: BTreeMap<K, usize> = BTreeMap::new();
        for (k, n) in counts {
            if n > 0 {
                *tally.entry(k).or_insert(0) += n;
            }
        }
        let total: usize = tally.values().sum();
        if total == 0 {
            return None;
        }
        let mass = tally
            .into_iter()
            .map(|(k, n)| (k, n as f64 / total as f64))
            .collect();
        Some(Self { mass })
    }

    /// Takes masses as given after dropping zeros. Returns `None` unless they
    /// are non-negative and sum to 1 within `1e-12`.
    pub fn from_masses(masses: impl IntoIterator<Item = (K, f64)>) -> Option<Self> {
        let mut mass = BTreeMap::new();
        for (k, p) in masses {
            if !(p >= 0.0) || !p.is_finite() {
                return None;
            }
            if p > 0.0 {
                *mass.entry(k).or_insert(0.0) += p;
            }
        }
        let total: f64 = mass.values().sum();
        ((total - 1.0).abs() <= 1e-12).then_some(Self { mass })
    }

    pub fn mass(&self, key: &K) -> f64 {
        self.mass.get(key).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.mass.keys()
    }
}

/// Jensen-Shannon divergence in bits, so the result lies in `[0, 1]`.
/// Supports are aligned on their union with implicit zeros.
pub fn jsd<K: Ord>(p: &TypedDistribution<K>, q: &TypedDistribution<K>) -> f64 {
    let half_kl = |a: f64, m: f64| if a > 0.0 { 0.5 * a * (a / m).log2() } else { 0.0 };
    let mut total = 0.0;
    let mut left = p.mass.iter().peekable();
    let mut right = q.mass.iter().peekable();
    loop {
        let (a, b) = match (left.peek(), right.peek()) {
            (None, None) => break,
            (Some(_), None) => (*left.next().unwrap().1, 0.0),
            (None, Some(_)) => (0.0, *right.next().unwrap().1),
            (Some((ka, _)), Some((kb, _))) => match ka.cmp(kb) {
                std::cmp::Ordering::Less => (*left.next().unwrap().1, 0.0),
                std::cmp::Ordering::Greater => (0.0, *right.next().unwrap().1),
                std::cmp::Ordering::Equal => (*left.next().unwrap().1, *right.next().unwrap().1),
            },
        };
        let m = 0.5 * (a + b);
        total += half_kl(a, m) + half_kl(b, m);
    }
    total.clamp(0.0, 1.0)
}

/// How layers of two graphs are matched when keys include a layer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum LayerAlignment {
    /// Layer 1 matches layer 1, and so on.
    #[default]
    Index,
    /// Layers are replaced by their coreness before matching.
    Coreness,
}

type TypeKey = (usize, usize);

/// The four distributions a graph maps to. Edge-based ones are `None` for
/// graphs without edges.
#[derive(Debug, Clone)]
pub struct NetworkProfile {
    pub nodes: TypedDistribution<usize>,
    pub degree_pairs: Option<TypedDistribution<(usize, usize)>>,
    pub joint_nodes: TypedDistribution<TypeKey>,
    pub joint_pairs: Option<TypedDistribution<(TypeKey, TypeKey)>>,
}

impl NetworkProfile {
    /// Builds the profile after dropping degree-0 nodes.
    pub fn new(g: &Graph, alignment: LayerAlignment) -> Self {
        let (g, _) = g.without_isolated();
        let degrees = g.degrees();
        let d = onion_decompose(&g);
        let types: Vec<TypeKey> = (0..g.node_count())
            .map(|v| {
                let key = match alignment {
                    LayerAlignment::Index => d.layer(v),
                    LayerAlignment::Coreness => d.coreness(v),
                };
                (degrees[v], key)
            })
            .collect();
        let nodes = TypedDistribution::from_counts(degrees.iter().map(|&k| (k, 1)))
            .expect("graph has nodes");
        let joint_nodes = TypedDistribution::from_counts(types.iter().map(|&t| (t, 1)))
            .expect("graph has nodes");
        let degree_pairs = TypedDistribution::from_counts(
            g.edges()
                .iter()
                .map(|&(u, v)| (ordered(degrees[u], degrees[v]), 1)),
        );
        let joint_pairs = TypedDistribution::from_counts(
            g.edges().iter().map(|&(u, v)| (ordered(types[u], types[v]), 1)),
        );
        Self {
            nodes,
            degree_pairs,
            joint_nodes,
            joint_pairs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub d_cm: f64,
    /// `None` when either graph has no edges.
    pub d_ccm: Option<f64>,
    pub d_lcm: f64,
    pub d_lccm: Option<f64>,
}

fn ordered<T: Ord>(a: T, b: T) -> (T, T) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn edge_jsd<K: Ord>(
    a: &Option<TypedDistribution<K>>,
    b: &Option<TypedDistribution<K>>,
) -> Option<f64> {
    Some(jsd(a.as_ref()?, b.as_ref()?))
}

pub fn compare_profiles(a: &NetworkProfile, b: &NetworkProfile) -> DivergenceReport {
    DivergenceReport {
        d_cm: jsd(&a.nodes, &b.nodes),
        d_ccm: edge_jsd(&a.degree_pairs, &b.degree_pairs),
        d_lcm: jsd(&a.joint_nodes, &b.joint_nodes),
        d_lccm: edge_jsd(&a.joint_pairs, &b.joint_pairs),
    }
}

/// Network onion divergence with layers matched by index.
pub fn nod(a: &Graph, b: &Graph) -> DivergenceReport {
    nod_with(a, b, LayerAlignment::Index)
}

pub fn nod_with(a: &Graph, b: &Graph, alignment: LayerAlignment) -> DivergenceReport {
    compare_profiles(
        &NetworkProfile::new(a, alignment),
        &NetworkProfile::new(b, alignment),
    )
}
