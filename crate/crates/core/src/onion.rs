//! Onion decomposition: k-core peeling where every simultaneous removal
//! wave forms its own layer.

use serde::Serialize;

use crate::graph::Graph;

/// Summary row for one onion layer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerSummary {
    pub layer: usize,
    pub coreness: usize,
    pub count: usize,
    /// Fraction of all nodes in this layer.
    pub fraction: f64,
    pub mean_degree: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnionDecomposition {
    layer: Vec<usize>,
    coreness: Vec<usize>,
    table: Vec<LayerSummary>,
}

impl OnionDecomposition {
    /// Layer of each node, starting at 1.
    pub fn layers(&self) -> &[usize] {
        &self.layer
    }

    pub fn layer(&self, node: usize) -> usize {
        self.layer[node]
    }

    pub fn coreness(&self, node: usize) -> usize {
        self.coreness[node]
    }

    pub fn layer_table(&self) -> &[LayerSummary] {
        &self.table
    }

    pub fn num_layers(&self) -> usize {
        self.table.len()
    }

    /// Coreness of layer `l` (1-based).
    pub fn layer_coreness(&self, l: usize) -> usize {
        self.table[l - 1].coreness
    }

    pub fn node_count(&self) -> usize {
        self.layer.len()
    }
}

/// Node-indexed coreness values.
pub fn coreness_map(d: &OnionDecomposition) -> &[usize] {
    &d.coreness
}

/// Peels `g` into onion layers.
///
/// The threshold starts at the minimum degree. Each iteration removes, as
/// one layer, every node whose residual degree is at most the threshold;
/// when none qualifies the threshold rises to the smallest residual degree
/// left. Degrees follow the multigraph convention (loops count 2).
pub fn onion_decompose(g: &Graph) -> OnionDecomposition {
    let n = g.node_count();
    let adj = g.adjacency();
    let degrees = g.degrees();
    let mut residual = degrees.clone();
    let mut removed = vec![false; n];
    let mut layer = vec![0usize; n];
    let mut coreness = vec![0usize; n];

    let mut threshold = residual.iter().copied().min().unwrap_or(0);
    let mut current: Vec<usize> = (0..n).filter(|&v| residual[v] <= threshold).collect();
    let mut remaining = n;
    let mut table = Vec::new();
    let mut queued = vec![false; n];

    while remaining > 0 {
        if current.is_empty() {
            // runs once per distinct coreness value
            threshold = (0..n)
                .filter(|&v| !removed[v])
                .map(|v| residual[v])
                .min()
                .expect("nodes remain");
            current = (0..n)
                .filter(|&v| !removed[v] && residual[v] <= threshold)
                .collect();
        }
        let index = table.len() + 1;
        for &v in &current {
            removed[v] = true;
            layer[v] = index;
            coreness[v] = threshold;
        }
        remaining -= current.len();
        let mut next = Vec::new();
        for &v in &current {
            for &w in &adj[v] {
                if removed[w] {
                    continue;
                }
                residual[w] -= 1;
                if residual[w] <= threshold && !queued[w] {
                    queued[w] = true;
                    next.push(w);
                }
            }
        }
        let degree_sum: usize = current.iter().map(|&v| degrees[v]).sum();
        table.push(LayerSummary {
            layer: index,
            coreness: threshold,
            count: current.len(),
            fraction: current.len() as f64 / n as f64,
            mean_degree: degree_sum as f64 / current.len() as f64,
        });
        next.sort_unstable();
        current = next;
    }

    OnionDecomposition {
        layer,
        coreness,
        table,
    }
}
