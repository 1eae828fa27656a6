//! Simple-graph metrics: average local clustering and mean shortest path.
//!
//! Both are computed on the simplified graph, with loops dropped and
//! parallel edges collapsed.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Mean local clustering coefficient over all nodes. Nodes with fewer than
/// two distinct neighbours contribute 0.
pub fn clustering_coefficient(g: &Graph) -> f64 {
    let adj = g.simple_adjacency();
    let mut mark = vec![usize::MAX; adj.len()];
    let mut total = 0.0;
    for (node, neighbours) in adj.iter().enumerate() {
        let d = neighbours.len();
        if d < 2 {
            continue;
        }
        for &u in neighbours {
            mark[u] = node;
        }
        let mut links = 0usize;
        for &u in neighbours {
            links += adj[u].iter().filter(|&&w| w > u && mark[w] == node).count();
        }
        total += 2.0 * links as f64 / (d * (d - 1)) as f64;
    }
    total / adj.len() as f64
}

/// Nodes of the largest connected component, ascending. Ties go to the
/// component holding the smallest node identifier.
pub fn largest_component(g: &Graph) -> Vec<usize> {
    let adj = g.simple_adjacency();
    let mut seen = vec![false; adj.len()];
    let mut best: Vec<usize> = Vec::new();
    for start in 0..adj.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut component = vec![start];
        let mut head = 0;
        while head < component.len() {
            let v = component[head];
            head += 1;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    component.push(w);
                }
            }
        }
        if component.len() > best.len() {
            best = component;
        }
    }
    best.sort_unstable();
    best
}

/// Average BFS distance over unordered node pairs of the largest
/// connected component.
pub fn mean_shortest_path(g: &Graph) -> Result<f64> {
    let component = largest_component(g);
    let n = component.len();
    if n < 2 {
        return Err(Error::DegenerateComponent(n));
    }
    let adj = g.simple_adjacency();
    let mut dist = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::with_capacity(n);
    let mut total: u64 = 0;
    for &source in &component {
        for &v in &component {
            dist[v] = usize::MAX;
        }
        dist[source] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let next = dist[v] + 1;
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = next;
                    total += next as u64;
                    queue.push_back(w);
                }
            }
        }
    }
    Ok(total as f64 / (n * (n - 1)) as f64)
}
