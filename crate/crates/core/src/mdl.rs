//! Ensemble entropies and description lengths of the four configuration
//! models, and model selection by minimum description length.
//!
//! Entropies count stub matchings of labeled nodes, so isomorphic
//! realizations are counted separately. All values are in nats unless a
//! name says otherwise.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DegreeHistogram, Graph};
use crate::numeric::{binary_entropy_h, log_factorial, multiset_sequence_cost};
use crate::onion::onion_decompose;
use crate::stats::{
    extract_ccm, extract_lccm, extract_lcm, CcmStats, ColorSplit, LayeredStats,
    LccmStats, LcmStats,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Model {
    #[serde(rename = "CM")]
    Cm,
    #[serde(rename = "CCM")]
    Ccm,
    #[serde(rename = "LCM")]
    Lcm,
    #[serde(rename = "LCCM")]
    Lccm,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::Cm, Model::Ccm, Model::Lcm, Model::Lccm];

    pub fn name(self) -> &'static str {
        match self {
            Model::Cm => "CM",
            Model::Ccm => "CCM",
            Model::Lcm => "LCM",
            Model::Lccm => "LCCM",
        }
    }

    /// Tie-break order, simplest first: CM, LCM, CCM, LCCM.
    pub fn parsimony_rank(self) -> u8 {
        match self {
            Model::Cm => 0,
            Model::Lcm => 1,
            Model::Ccm => 2,
            Model::Lccm => 3,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cm" => Ok(Model::Cm),
            "ccm" => Ok(Model::Ccm),
            "lcm" => Ok(Model::Lcm),
            "lccm" => Ok(Model::Lccm),
            _ => Err(Error::InvalidParameter(format!("unknown model {s:?}"))),
        }
    }
}

fn lf(n: usize) -> f64 {
    log_factorial(n as u64)
}

fn split_correction(split: &ColorSplit) -> f64 {
    lf(split.red) + lf(split.green) + lf(split.black)
}

fn colored_corrections(s: &impl LayeredStats) -> f64 {
    s.colored_counts()
        .iter()
        .map(|((_, split), &n)| n as f64 * split_correction(split))
        .sum()
}

/// `ln[(2E)!] - ln[E!] - E ln 2 - sum_k N_k ln[k!]`.
pub fn entropy_cm(h: &DegreeHistogram) -> f64 {
    let e = h.edge_count();
    if e == 0 {
        return 0.0;
    }
    let node_term: f64 = h.counts().iter().map(|(&k, &n)| n as f64 * lf(k)).sum();
    lf(2 * e) - lf(e) - e as f64 * std::f64::consts::LN_2 - node_term
}

/// One shuffled stub list per degree class, paired according to `e(k, k')`.
pub fn entropy_ccm(s: &CcmStats) -> f64 {
    let lists: f64 = s
        .histogram()
        .counts()
        .iter()
        .map(|(&k, &n)| lf(k * n) - n as f64 * lf(k))
        .sum();
    let pairs: f64 = s
        .edges()
        .iter()
        .map(|(&(a, b), &n)| {
            let loops = if a == b { n as f64 * std::f64::consts::LN_2 } else { 0.0 };
            lf(n) + loops
        })
        .sum();
    lists - pairs
}

/// Three colored stub lists per layer, paired according to `e(l, l')`.
pub fn entropy_lcm(s: &LcmStats) -> f64 {
    let lists: f64 = s
        .layers()
        .into_iter()
        .map(|l| lf(s.red(l)) + lf(s.green(l)) + lf(s.black(l)))
        .sum();
    let pairs: f64 = s
        .layer_edges()
        .iter()
        .map(|(&(outer, inner), &n)| {
            let loops = if outer == inner { n as f64 * std::f64::consts::LN_2 } else { 0.0 };
            lf(n) + loops
        })
        .sum();
    lists - pairs - colored_corrections(s)
}

/// Three colored stub lists per joint type, paired according to
/// `e({k,l}, {k',l'})`.
pub fn entropy_lccm(s: &LccmStats) -> f64 {
    let lists: f64 = s
        .stub_tallies()
        .values()
        .map(split_correction)
        .sum();
    let pairs: f64 = s
        .type_edges()
        .iter()
        .map(|(&(a, b), &n)| {
            let loops = if a == b { n as f64 * std::f64::consts::LN_2 } else { 0.0 };
            lf(n) + loops
        })
        .sum();
    lists - pairs - colored_corrections(s)
}

/// Cost of an edge matrix over `types` node types: `E h(m(m+1) / 2E)`.
pub fn matrix_cost(types: usize, edges: usize) -> f64 {
    if edges == 0 {
        return 0.0;
    }
    let pairs = (types * (types + 1)) as f64 / 2.0;
    let e = edges as f64;
    e * binary_entropy_h(pairs / e).expect("ratio is non-negative")
}

pub fn dl_cm(h: &DegreeHistogram) -> f64 {
    entropy_cm(h) + multiset_sequence_cost(h.num_classes() as u64, h.node_count() as u64)
}

pub fn dl_ccm(s: &CcmStats) -> f64 {
    let h = s.histogram();
    let t = h.num_classes();
    entropy_ccm(s)
        + matrix_cost(t, s.edge_count())
        + multiset_sequence_cost(t as u64, h.node_count() as u64)
}

pub fn dl_lcm(s: &LcmStats) -> f64 {
    entropy_lcm(s)
        + matrix_cost(s.num_layers(), s.edge_count())
        + multiset_sequence_cost(s.num_joint_types() as u64, s.node_count() as u64)
}

pub fn dl_lccm(s: &LccmStats) -> f64 {
    let t = s.num_joint_types();
    entropy_lccm(s)
        + matrix_cost(t, s.edge_count())
        + multiset_sequence_cost(t as u64, s.node_count() as u64)
}

/// Description length in bits relative to a plain edge list of
/// `2E log2 N` bits. `None` when that baseline is zero.
pub fn compression_factor(dl_bits: f64, nodes: usize, edges: usize) -> Option<f64> {
    if nodes < 2 || edges == 0 {
        return None;
    }
    Some(dl_bits / (2.0 * edges as f64 * (nodes as f64).log2()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelScore {
    pub model: Model,
    pub entropy_nats: f64,
    pub dl_nats: f64,
    pub dl_bits: f64,
    pub compression_factor: Option<f64>,
}

impl ModelScore {
    fn new(model: Model, entropy_nats: f64, dl_nats: f64, nodes: usize, edges: usize) -> Self {
        let dl_bits = dl_nats / std::f64::consts::LN_2;
        Self {
            model,
            entropy_nats,
            dl_nats,
            dl_bits,
            compression_factor: compression_factor(dl_bits, nodes, edges),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MdlReport {
    pub nodes: usize,
    pub edges: usize,
    pub mean_degree: f64,
    /// Degree-0 nodes removed before scoring.
    pub isolated_dropped: usize,
    /// Scores in CM, CCM, LCM, LCCM order.
    pub scores: Vec<ModelScore>,
    pub selected_model: Model,
    pub warnings: Vec<String>,
}

impl MdlReport {
    pub fn score(&self, model: Model) -> &ModelScore {
        self.scores
            .iter()
            .find(|s| s.model == model)
            .expect("every model is scored")
    }

    pub fn entropy(&self, model: Model) -> f64 {
        self.score(model).entropy_nats
    }
}

/// Picks the model with the smallest description length. Scores within
/// a relative `1e-9` of the minimum count as tied and go to the simpler
/// model.
pub fn argmin_model(scores: &[ModelScore]) -> Model {
    let best = scores.iter().map(|s| s.dl_nats).fold(f64::INFINITY, f64::min);
    let tolerance = 1e-9 * best.abs().max(1.0);
    scores
        .iter()
        .filter(|s| s.dl_nats - best <= tolerance)
        .min_by_key(|s| s.model.parsimony_rank())
        .map(|s| s.model)
        .unwrap_or(Model::Cm)
}

/// Pairs `(finer, coarser)` whose entropies should not increase.
const NESTING: [(Model, Model); 4] = [
    (Model::Lccm, Model::Lcm),
    (Model::Lcm, Model::Cm),
    (Model::Lccm, Model::Ccm),
    (Model::Ccm, Model::Cm),
];

/// Entropy orderings `S_finer <= S_coarser` that fail, if any.
pub fn nesting_violations(report: &MdlReport) -> Vec<(Model, Model)> {
    NESTING
        .iter()
        .copied()
        .filter(|&(fine, coarse)| report.entropy(fine) > report.entropy(coarse) + 1e-9)
        .collect()
}

/// Scores all four models on `g` and selects the most parsimonious.
pub fn select_model(g: &Graph) -> Result<MdlReport> {
    let mut warnings = Vec::new();
    let (g, isolated) = g.without_isolated();
    if isolated > 0 {
        warnings.push(format!("dropped {isolated} degree-0 node(s)"));
    }
    let (n, e) = (g.node_count(), g.edge_count());
    if e == 0 {
        warnings.push("graph has no edges; every model scores 0".into());
        let scores = Model::ALL
            .iter()
            .map(|&m| ModelScore::new(m, 0.0, 0.0, n, e))
            .collect();
        return Ok(MdlReport {
            nodes: n,
            edges: e,
            mean_degree: 0.0,
            isolated_dropped: isolated,
            scores,
            selected_model: Model::Cm,
            warnings,
        });
    }

    let d = onion_decompose(&g);
    let ccm = extract_ccm(&g);
    let lcm = extract_lcm(&g, &d);
    let lccm = extract_lccm(&g, &d);
    let h = ccm.histogram();

    let scores = vec![
        ModelScore::new(Model::Cm, entropy_cm(h), dl_cm(h), n, e),
        ModelScore::new(Model::Ccm, entropy_ccm(&ccm), dl_ccm(&ccm), n, e),
        ModelScore::new(Model::Lcm, entropy_lcm(&lcm), dl_lcm(&lcm), n, e),
        ModelScore::new(Model::Lccm, entropy_lccm(&lccm), dl_lccm(&lccm), n, e),
    ];
    let selected_model = argmin_model(&scores);
    let mut report = MdlReport {
        nodes: n,
        edges: e,
        mean_degree: g.mean_degree(),
        isolated_dropped: isolated,
        scores,
        selected_model,
        warnings,
    };
    for (fine, coarse) in nesting_violations(&report) {
        report.warnings.push(format!(
            "entropy nesting violated: S_{fine} = {:.3} > S_{coarse} = {:.3}",
            report.entropy(fine),
            report.entropy(coarse)
        ));
    }
    Ok(report)
}
