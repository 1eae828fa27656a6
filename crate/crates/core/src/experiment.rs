//! Batch experiments: ensemble dispersal of clustering and path length
//! around one anchor graph, and divergences between pairs of random graphs.
//!
//! Replicates run on the rayon pool; rows always come back in replicate
//! order. Replicate `i` of a run seeded `s` uses seed `s + i`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::divergence::{nod_with, DivergenceReport, LayerAlignment};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::{clustering_coefficient, mean_shortest_path};
use crate::onion::onion_decompose;
use crate::sampling::{
    rng_from_seed, sample_ba, sample_ccm, sample_cm, sample_er, sample_lccm, sample_lcm,
    sample_uniform_tree, DEFAULT_MAX_ATTEMPTS,
};
use crate::stats::{extract_ccm, extract_lccm, extract_lcm};

/// Ensembles compared in the dispersal experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Ensemble {
    #[serde(rename = "ER")]
    Er,
    #[serde(rename = "CM")]
    Cm,
    #[serde(rename = "CCM")]
    Ccm,
    #[serde(rename = "LCM")]
    Lcm,
    #[serde(rename = "LCCM")]
    Lccm,
}

impl Ensemble {
    pub const ALL: [Ensemble; 5] = [
        Ensemble::Er,
        Ensemble::Cm,
        Ensemble::Ccm,
        Ensemble::Lcm,
        Ensemble::Lccm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::Er => "ER",
            Ensemble::Cm => "CM",
            Ensemble::Ccm => "CCM",
            Ensemble::Lcm => "LCM",
            Ensemble::Lccm => "LCCM",
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ensemble::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown ensemble '{s}'")))
    }
}

#[derive(Debug, Clone)]
pub struct DispersalConfig {
    pub nodes: usize,
    pub edges: usize,
    pub samples: usize,
    pub seed: u64,
    pub ensembles: Vec<Ensemble>,
    pub max_attempts: usize,
}

impl Default for DispersalConfig {
    fn default() -> Self {
        Self {
            nodes: 250,
            edges: 311,
            samples: 1000,
            seed: 0,
            ensembles: vec![Ensemble::Er, Ensemble::Cm, Ensemble::Ccm, Ensemble::Lcm],
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersalRow {
    pub ensemble: Ensemble,
    pub replicate: usize,
    pub seed: u64,
    pub clustering: f64,
    pub mean_path: f64,
}

#[derive(Debug, Clone)]
pub struct Dispersal {
    /// The ER draw every configuration ensemble is fitted to, with
    /// isolated nodes dropped.
    pub anchor: Graph,
    pub anchor_clustering: f64,
    pub anchor_mean_path: f64,
    pub rows: Vec<DispersalRow>,
    /// Replicates whose layered sampler gave up, per ensemble.
    pub exhausted: Vec<(Ensemble, usize)>,
}

pub const DISPERSAL_HEADER: &str = "ensemble\treplicate\tseed\tclustering\tmean_shortest_path";

impl Dispersal {
    pub fn values(&self, ensemble: Ensemble) -> (Vec<f64>, Vec<f64>) {
        self.rows
            .iter()
            .filter(|r| r.ensemble == ensemble)
            .map(|r| (r.clustering, r.mean_path))
            .unzip()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!("{DISPERSAL_HEADER}\n");
        for r in &self.rows {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.ensemble, r.replicate, r.seed, r.clustering, r.mean_path
            )
            .expect("writing to a String");
        }
        out
    }
}

/// Draws the anchor from `ER(nodes, edges)` at `config.seed`, then
/// `config.samples` graphs per ensemble. Ensemble `j` (in config order)
/// seeds replicate `i` with `seed + 1 + j * samples + i`.
pub fn run_dispersal(config: &DispersalConfig) -> Result<Dispersal> {
    let (anchor, _) = sample_er(config.nodes, config.edges, config.seed)?.without_isolated();
    if anchor.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let d = onion_decompose(&anchor);
    let histogram = anchor.degree_histogram();
    let ccm = extract_ccm(&anchor);
    let lcm = extract_lcm(&anchor, &d);
    let lccm = extract_lccm(&anchor, &d);

    let jobs: Vec<(Ensemble, usize, u64)> = config
        .ensembles
        .iter()
        .enumerate()
        .flat_map(|(j, &e)| {
            (0..config.samples).map(move |i| {
                let offset = 1 + (j * config.samples + i) as u64;
                (e, i, config.seed.wrapping_add(offset))
            })
        })
        .collect();

    let results: Vec<Result<Option<DispersalRow>>> = jobs
        .par_iter()
        .map(|&(ensemble, replicate, seed)| {
            let drawn = match ensemble {
                Ensemble::Er => sample_er(config.nodes, config.edges, seed),
                Ensemble::Cm => sample_cm(&histogram, seed),
                Ensemble::Ccm => sample_ccm(&ccm, seed),
                Ensemble::Lcm => sample_lcm(&lcm, seed, config.max_attempts),
                Ensemble::Lccm => sample_lccm(&lccm, seed, config.max_attempts),
            };
            let g = match drawn {
                Ok(g) => g,
                Err(Error::AttemptsExhausted { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            Ok(Some(DispersalRow {
                ensemble,
                replicate,
                seed,
                clustering: clustering_coefficient(&g),
                mean_path: mean_shortest_path(&g)?,
            }))
        })
        .collect();

    let mut rows = Vec::with_capacity(jobs.len());
    let mut exhausted: Vec<(Ensemble, usize)> =
        config.ensembles.iter().map(|&e| (e, 0)).collect();
    for (result, &(ensemble, _, _)) in results.into_iter().zip(&jobs) {
        match result? {
            Some(row) => rows.push(row),
            None => {
                let slot = exhausted.iter_mut().find(|(e, _)| *e == ensemble);
                slot.expect("ensemble is configured").1 += 1;
            }
        }
    }
    Ok(Dispersal {
        anchor_clustering: clustering_coefficient(&anchor),
        anchor_mean_path: mean_shortest_path(&anchor)?,
        anchor,
        rows,
        exhausted,
    })
}

/// Unbiased sample variance; 0 for fewer than two values.
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

/// Standard error of the sample variance from `resamples` bootstrap draws.
pub fn bootstrap_variance_se(xs: &[f64], resamples: usize, seed: u64) -> f64 {
    if xs.len() < 2 || resamples < 2 {
        return 0.0;
    }
    let mut rng = rng_from_seed(seed);
    let mut buf = vec![0.0; xs.len()];
    let estimates: Vec<f64> = (0..resamples)
        .map(|_| {
            for slot in buf.iter_mut() {
                *slot = xs[rng.gen_range(0..xs.len() as u64) as usize];
            }
            sample_variance(&buf)
        })
        .collect();
    sample_variance(&estimates).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceEstimate {
    pub variance: f64,
    pub std_error: f64,
}

impl VarianceEstimate {
    pub fn new(xs: &[f64], resamples: usize, seed: u64) -> Self {
        Self {
            variance: sample_variance(xs),
            std_error: bootstrap_variance_se(xs, resamples, seed),
        }
    }

    /// `self <= other` allowing two combined standard errors of slack.
    pub fn at_most(&self, other: &VarianceEstimate) -> bool {
        let band = 2.0 * self.std_error.hypot(other.std_error);
        self.variance - other.variance <= band
    }
}

/// Random graph families of the divergence grid, all at mean degree 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    #[serde(rename = "ba")]
    Ba,
    #[serde(rename = "er")]
    Er,
    #[serde(rename = "rt")]
    Rt,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Ba, Family::Er, Family::Rt];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ba => "ba",
            Family::Er => "er",
            Family::Rt => "rt",
        }
    }

    /// ER with `E = N`, BA with `m = 1`, or a uniform tree.
    pub fn sample(self, nodes: usize, seed: u64) -> Result<Graph> {
        match self {
            Family::Ba => sample_ba(nodes, 1, seed),
            Family::Er => sample_er(nodes, nodes, seed),
            Family::Rt => sample_uniform_tree(nodes, seed),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown model '{s}'")))
    }
}

#[derive(Debug, Clone)]
pub struct GridConfig {
    pub nodes: usize,
    pub pairs: usize,
    pub seed: u64,
    pub families: Vec<Family>,
    pub alignment: LayerAlignment,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            nodes: 200,
            pairs: 100,
            seed: 0,
            families: Family::ALL.to_vec(),
            alignment: LayerAlignment::Index,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRow {
    pub model_a: Family,
    pub model_b: Family,
    pub seed_a: u64,
    pub seed_b: u64,
    #[serde(flatten)]
    pub divergence: DivergenceReport,
}

pub const GRID_HEADER: &str = "modelA\tmodelB\tseedA\tseedB\td_cm\td_ccm\td_lcm\td_lccm";

fn optional(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

pub fn grid_to_tsv(rows: &[GridRow]) -> String {
    let mut out = format!("{GRID_HEADER}\n");
    for r in rows {
        let d = &r.divergence;
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.model_a,
            r.model_b,
            r.seed_a,
            r.seed_b,
            d.d_cm,
            optional(d.d_ccm),
            d.d_lcm,
            optional(d.d_lccm)
        )
        .expect("writing to a String");
    }
    out
}

/// Unordered family pairs with repetition, in ascending order.
pub fn family_pairs(families: &[Family]) -> Vec<(Family, Family)> {
    let mut sorted = families.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut pairs = Vec::new();
    for (i, &a) in sorted.iter().enumerate() {
        for &b in &sorted[i..] {
            pairs.push((a, b));
        }
    }
    pairs
}

/// `pairs` rows per family pair. Row `r` (over the whole grid) draws its
/// graphs with seeds `seed + 2r` and `seed + 2r + 1`.
pub fn run_divergence_grid(config: &GridConfig) -> Result<Vec<GridRow>> {
    if config.pairs == 0 {
        return Err(Error::InvalidParameter("pair count must be at least 1".into()));
    }
    let jobs: Vec<(Family, Family, u64, u64)> = family_pairs(&config.families)
        .into_iter()
        .flat_map(|(a, b)| std::iter::repeat((a, b)).take(config.pairs))
        .enumerate()
        .map(|(r, (a, b))| {
            let base = config.seed.wrapping_add(2 * r as u64);
            (a, b, base, base.wrapping_add(1))
        })
        .collect();
    jobs.par_iter()
        .map(|&(model_a, model_b, seed_a, seed_b)| {
            let ga = model_a.sample(config.nodes, seed_a)?;
            let gb = model_b.sample(config.nodes, seed_b)?;
            Ok(GridRow {
                model_a,
                model_b,
                seed_a,
                seed_b,
                divergence: nod_with(&ga, &gb, config.alignment),
            })
        })
        .collect()
}
