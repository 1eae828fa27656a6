//! Erdős-Rényi, Barabási-Albert and uniform labeled-tree generators.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;

use super::rng_from_seed;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Fixed-edge-count random multigraph: each of the `edges` edges is an
/// independent uniform draw from the `N(N+1)/2` unordered node pairs,
/// self-pairs included.
pub fn sample_er(nodes: usize, edges: usize, seed: u64) -> Result<Graph> {
    if nodes == 0 {
        return Err(Error::NoNodes);
    }
    let mut rng = rng_from_seed(seed);
    let n = nodes as u64;
    let pairs = n * (n + 1) / 2;
    let drawn = (0..edges).map(|_| unordered_pair(rng.gen_range(0..pairs)));
    Graph::new(nodes, drawn.collect::<Vec<_>>())
}

/// Maps `0..N(N+1)/2` onto pairs `(i, j)` with `i <= j`, row by row.
fn unordered_pair(index: u64) -> (usize, usize) {
    let mut j = (((8 * index + 1) as f64).sqrt() as u64).saturating_sub(1) / 2;
    while (j + 1) * (j + 2) / 2 <= index {
        j += 1;
    }
    while j * (j + 1) / 2 > index {
        j -= 1;
    }
    let i = index - j * (j + 1) / 2;
    (i as usize, j as usize)
}

/// Preferential attachment. Nodes `0..=m` start as a clique (a single edge
/// when `m = 1`); each later node links to `m` distinct earlier nodes
/// chosen with probability proportional to degree.
pub fn sample_ba(nodes: usize, m: usize, seed: u64) -> Result<Graph> {
    if m == 0 || nodes <= m {
        return Err(Error::InvalidParameter(format!(
            "preferential attachment needs N > m >= 1, got N={nodes}, m={m}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::with_capacity(m * nodes);
    // every edge endpoint, so a uniform pick is degree-proportional
    let mut ends: Vec<usize> = Vec::with_capacity(2 * m * nodes);
    for u in 0..=m {
        for v in 0..u {
            edges.push((v, u));
            ends.extend([v, u]);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for new in (m + 1)..nodes {
        targets.clear();
        while targets.len() < m {
            let pick = ends[rng.gen_range(0..ends.len() as u64) as usize];
            if !targets.contains(&pick) {
                targets.push(pick);
            }
        }
        for &t in &targets {
            edges.push((t, new));
            ends.extend([t, new]);
        }
    }
    Graph::new(nodes, edges)
}

/// Labeled tree drawn uniformly from all `N^(N-2)` trees by decoding a
/// uniform Prüfer sequence.
pub fn sample_uniform_tree(nodes: usize, seed: u64) -> Result<Graph> {
    if nodes < 2 {
        return Err(Error::InvalidParameter(format!(
            "a random tree needs at least 2 nodes, got {nodes}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let code: Vec<usize> = (0..nodes - 2)
        .map(|_| rng.gen_range(0..nodes as u64) as usize)
        .collect();
    Graph::new(nodes, decode_prufer(nodes, &code))
}

/// Edges of the labeled tree with Prüfer code `code`.
pub fn decode_prufer(nodes: usize, code: &[usize]) -> Vec<(usize, usize)> {
    debug_assert_eq!(code.len() + 2, nodes);
    let mut remaining = vec![1usize; nodes];
    for &c in code {
        remaining[c] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> = (0..nodes)
        .filter(|&v| remaining[v] == 1)
        .map(Reverse)
        .collect();
    let mut edges = Vec::with_capacity(nodes - 1);
    for &c in code {
        let Reverse(leaf) = leaves.pop().expect("a tree code always leaves a leaf");
        edges.push((leaf, c));
        remaining[c] -= 1;
        if remaining[c] == 1 {
            leaves.push(Reverse(c));
        }
    }
    let Reverse(a) = leaves.pop().expect("two nodes remain");
    let Reverse(b) = leaves.pop().expect("two nodes remain");
    edges.push((a, b));
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::largest_component;
    use std::collections::HashMap;

    #[test]
    fn pair_index_covers_triangle() {
        let n = 7u64;
        let pairs: Vec<_> = (0..n * (n + 1) / 2).map(unordered_pair).collect();
        let mut expected = Vec::new();
        for j in 0..n as usize {
            for i in 0..=j {
                expected.push((i, j));
            }
        }
        assert_eq!(pairs, expected);
        // large indices stay exact
        let big = 1_000_000u64;
        let idx = big * (big + 1) / 2 + 17;
        assert_eq!(unordered_pair(idx), (17, big as usize));
    }

    #[test]
    fn er_sizes() {
        let g = sample_er(250, 311, 1).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (250, 311));
        let g = sample_er(2, 1, 9).unwrap();
        assert_eq!(g.edge_count(), 1);
        let g = sample_er(1000, 1000, 3).unwrap();
        assert_eq!(g.mean_degree(), 2.0);
        assert_eq!(sample_er(50, 60, 5).unwrap(), sample_er(50, 60, 5).unwrap());
    }

    #[test]
    fn ba_trees() {
        for seed in 0..5 {
            let g = sample_ba(200, 1, seed).unwrap();
            assert_eq!(g.edge_count(), 199);
            assert_eq!(largest_component(&g).len(), 200);
        }
        let g = sample_ba(5, 1, 0).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (5, 4));
        let g = sample_ba(100, 3, 2).unwrap();
        assert_eq!(g.edge_count(), 6 + 96 * 3);
        assert_eq!(g.simple_adjacency().iter().map(Vec::len).sum::<usize>(), 2 * g.edge_count());
        assert!(sample_ba(3, 3, 0).is_err());
        assert!(sample_ba(3, 0, 0).is_err());
    }

    #[test]
    fn ba_is_heavier_tailed_than_er() {
        let mut wins = 0;
        for seed in 0..20 {
            let ba = sample_ba(1000, 1, seed).unwrap();
            let er = sample_er(1000, 999, seed).unwrap();
            let max = |g: &Graph| g.degrees().into_iter().max().unwrap();
            if max(&ba) > 2 * max(&er) {
                wins += 1;
            }
        }
        assert_eq!(wins, 20);
    }

    #[test]
    fn small_trees() {
        let g = sample_uniform_tree(2, 4).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        for seed in 0..10 {
            let g = sample_uniform_tree(3, seed).unwrap();
            let mut degrees = g.degrees();
            degrees.sort_unstable();
            assert_eq!(degrees, [1, 1, 2]);
        }
        assert!(sample_uniform_tree(1, 0).is_err());
    }

    #[test]
    fn prufer_decoding_is_a_bijection_on_four_nodes() {
        let mut trees = HashMap::new();
        for a in 0..4 {
            for b in 0..4 {
                let g = Graph::new(4, decode_prufer(4, &[a, b])).unwrap();
                assert_eq!(largest_component(&g).len(), 4);
                *trees.entry(g.sorted_edges()).or_insert(0) += 1;
            }
        }
        assert_eq!(trees.len(), 16);
    }

    #[test]
    fn trees_are_connected() {
        for seed in 0..10 {
            let g = sample_uniform_tree(300, seed).unwrap();
            assert_eq!(g.edge_count(), 299);
            assert_eq!(largest_component(&g).len(), 300);
        }
    }
}
