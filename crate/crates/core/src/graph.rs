//! Undirected multigraphs with dense node identifiers.
//!
//! Self-loops and parallel edges are allowed. A self-loop is one edge that
//! contributes 2 to the degree of its node, so the degree sum is always `2E`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// An immutable undirected multigraph on nodes `0..N`.
///
/// Edges are stored as `(min, max)` pairs in insertion order. An optional
/// label table maps dense identifiers back to the tokens they were parsed
/// from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    nodes: usize,
    edges: Vec<(usize, usize)>,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn new(nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::NoNodes);
        }
        let edges = edges
            .into_iter()
            .map(|(u, v)| {
                for node in [u, v] {
                    if node >= nodes {
                        return Err(Error::NodeOutOfRange { node, nodes });
                    }
                }
                Ok((u.min(v), u.max(v)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            nodes,
            edges,
            labels: None,
        })
    }

    /// Attaches a label per node. The label count must equal the node count.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.nodes {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.nodes
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of `node`, falling back to its dense identifier.
    pub fn label(&self, node: usize) -> String {
        match &self.labels {
            Some(labels) => labels[node].clone(),
            None => node.to_string(),
        }
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.nodes as f64
    }

    /// Multigraph degrees; a self-loop adds 2.
    pub fn degrees(&self) -> Vec<usize> {
        let mut degrees = vec![0; self.nodes];
        for &(u, v) in &self.edges {
            degrees[u] += 1;
            degrees[v] += 1;
        }
        degrees
    }

    /// Neighbour lists with multiplicity. Self-loops are omitted; use
    /// [`Graph::degrees`] for the loop contribution.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes];
        for &(u, v) in &self.edges {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        adj
    }

    /// Sorted, deduplicated neighbour lists of the simplified graph
    /// (loops removed, multiplicities collapsed).
    pub fn simple_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = self.adjacency();
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Removes degree-0 nodes, renumbering the rest in order. Returns the
    /// compacted graph and the number of nodes dropped. A graph with no
    /// edges is returned unchanged.
    pub fn without_isolated(&self) -> (Graph, usize) {
        if self.edges.is_empty() {
            return (self.clone(), 0);
        }
        let degrees = self.degrees();
        let mut remap = vec![usize::MAX; self.nodes];
        let mut kept = 0;
        for (node, &k) in degrees.iter().enumerate() {
            if k > 0 {
                remap[node] = kept;
                kept += 1;
            }
        }
        let dropped = self.nodes - kept;
        if dropped == 0 {
            return (self.clone(), 0);
        }
        let edges = self.edges.iter().map(|&(u, v)| (remap[u], remap[v])).collect();
        let labels = self.labels.as_ref().map(|labels| {
            labels
                .iter()
                .zip(&degrees)
                .filter(|(_, &k)| k > 0)
                .map(|(l, _)| l.clone())
                .collect()
        });
        (
            Graph {
                nodes: kept,
                edges,
                labels,
            },
            dropped,
        )
    }

    /// Applies a node permutation: node `i` becomes `perm[i]`. Labels follow
    /// their nodes.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        let mut seen = vec![false; self.nodes];
        if perm.len() != self.nodes {
            return Err(Error::InvalidParameter("permutation length mismatch".into()));
        }
        for &p in perm {
            if p >= self.nodes || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
        }
        let mut g = Graph::new(self.nodes, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))?;
        if let Some(labels) = &self.labels {
            let mut moved = vec![String::new(); self.nodes];
            for (i, l) in labels.iter().enumerate() {
                moved[perm[i]] = l.clone();
            }
            g.labels = Some(moved);
        }
        Ok(g)
    }

    /// Edges sorted ascending by `(min, max)` endpoint pair.
    pub fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        edges
    }

    /// Canonical edge-list text: dense identifiers, one edge per line,
    /// ascending order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edges.len() * 8);
        for (u, v) in self.sorted_edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn degree_histogram(&self) -> DegreeHistogram {
        DegreeHistogram::from_degrees(&self.degrees())
    }
}

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `#` or `%` are comments and blank lines are skipped.
/// Tokens are mapped to dense identifiers in order of first appearance.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: index + 1,
                message: format!("expected 2 node tokens, found {}", tokens.len()),
            });
        }
        let mut pair = [0usize; 2];
        for (slot, token) in pair.iter_mut().zip(&tokens) {
            let next = ids.len();
            *slot = *ids.entry(token).or_insert_with(|| {
                labels.push(token.to_string());
                next
            });
        }
        edges.push((pair[0], pair[1]));
    }
    if edges.is_empty() {
        return Err(Error::EmptyInput);
    }
    Graph::new(labels.len(), edges)?.with_labels(labels)
}

/// Parses an edge list from raw bytes, rejecting invalid UTF-8.
pub fn parse_edge_list_bytes(bytes: &[u8]) -> Result<Graph> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count(),
        message: "invalid UTF-8".into(),
    })?;
    parse_edge_list(text)
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    parse_edge_list_bytes(&bytes)
}

/// Node counts per non-empty degree class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeHistogram {
    counts: BTreeMap<usize, usize>,
    /// Degree-0 nodes seen but left out of `counts`.
    isolated: usize,
}

impl DegreeHistogram {
    pub fn from_degrees(degrees: &[usize]) -> Self {
        let mut counts = BTreeMap::new();
        let mut isolated = 0;
        for &k in degrees {
            if k == 0 {
                isolated += 1;
            } else {
                *counts.entry(k).or_insert(0) += 1;
            }
        }
        Self { counts, isolated }
    }

    /// Builds a histogram from `(degree, count)` pairs. Zero degrees and
    /// zero counts are rejected.
    pub fn from_counts(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (k, n) in pairs {
            if k == 0 || n == 0 {
                return Err(Error::InvalidParameter(format!(
                    "histogram entry {k}: {n} is empty"
                )));
            }
            *counts.entry(k).or_insert(0) += n;
        }
        Ok(Self {
            counts,
            isolated: 0,
        })
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn count(&self, degree: usize) -> usize {
        self.counts.get(&degree).copied().unwrap_or(0)
    }

    /// Number of non-empty degree classes.
    pub fn num_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn isolated(&self) -> usize {
        self.isolated
    }

    /// Nodes with degree at least 1.
    pub fn node_count(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn stub_count(&self) -> usize {
        self.counts.iter().map(|(k, n)| k * n).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.stub_count() / 2
    }

    /// Degrees in ascending order, one entry per node.
    pub fn degree_sequence(&self) -> Vec<usize> {
        self.counts
            .iter()
            .flat_map(|(&k, &n)| std::iter::repeat(k).take(n))
            .collect()
    }
}

/// A Cayley tree: the root has `z` children and every later internal node
/// has `z - 1`. `depth` counts edge generations from the root.
pub fn canonical_cayley_tree(z: usize, depth: usize) -> Result<Graph> {
    if z < 2 || depth < 1 {
        return Err(Error::InvalidParameter(format!(
            "cayley tree needs z >= 2 and depth >= 1, got z={z}, depth={depth}"
        )));
    }
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    let mut next_id = 1;
    for generation in 0..depth {
        let children = if generation == 0 { z } else { z - 1 };
        let mut next = Vec::with_capacity(frontier.len() * children);
        for &parent in &frontier {
            for _ in 0..children {
                edges.push((parent, next_id));
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
    Graph::new(next_id, edges)
}
