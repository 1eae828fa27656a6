//! Random graph generators.
//!
//! Every sampler is a pure function of its parameters and a 64-bit seed.
//! Seeds drive a ChaCha8 stream (`rand_chacha`), expanded with
//! `SeedableRng::seed_from_u64`, so outputs are identical across platforms.

mod baseline;
mod configuration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graph::{DegreeHistogram, Graph};
use crate::stats::{CcmStats, LccmStats, LcmStats};

pub use baseline::{decode_prufer, sample_ba, sample_er, sample_uniform_tree};
pub use configuration::{
    sample_ccm, sample_cm, sample_lccm, sample_lcm, try_sample_lccm, try_sample_lcm,
    validate_layers,
};

pub const DEFAULT_MAX_ATTEMPTS: usize = 100;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// What to sample.
#[derive(Debug, Clone)]
pub enum SampleTarget {
    Er { nodes: usize, edges: usize },
    Ba { nodes: usize, m: usize },
    Tree { nodes: usize },
    Cm(DegreeHistogram),
    Ccm(CcmStats),
    Lcm(LcmStats),
    Lccm(LccmStats),
}

#[derive(Debug, Clone)]
pub struct SampleRequest {
    pub target: SampleTarget,
    pub seed: u64,
    /// Only used by the layered models.
    pub max_attempts: usize,
}

impl SampleRequest {
    pub fn new(target: SampleTarget, seed: u64) -> Self {
        Self {
            target,
            seed,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }

    pub fn sample(&self) -> Result<Graph> {
        let seed = self.seed;
        match &self.target {
            SampleTarget::Er { nodes, edges } => sample_er(*nodes, *edges, seed),
            SampleTarget::Ba { nodes, m } => sample_ba(*nodes, *m, seed),
            SampleTarget::Tree { nodes } => sample_uniform_tree(*nodes, seed),
            SampleTarget::Cm(h) => sample_cm(h, seed),
            SampleTarget::Ccm(s) => sample_ccm(s, seed),
            SampleTarget::Lcm(s) => sample_lcm(s, seed, self.max_attempts),
            SampleTarget::Lccm(s) => sample_lccm(s, seed, self.max_attempts),
        }
    }

    /// The request for replicate `index`, seeded `seed + index`.
    pub fn replicate(&self, index: u64) -> Self {
        Self {
            seed: self.seed.wrapping_add(index),
            ..self.clone()
        }
    }
}
