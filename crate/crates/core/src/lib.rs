//! Nested configuration models for undirected multigraphs.
//!
//! A graph is summarized four ways, each one a configuration model:
//!
//! * **CM**: the degree histogram `N_k`;
//! * **CCM**: adds the degree-class edge matrix `e(k, k')`;
//! * **LCM**: joint degree/onion-layer counts `N_{k,l}`, the layer edge
//!   matrix `e(l, l')` and red/green/black stub tallies that pin every node
//!   to its onion layer;
//! * **LCCM**: the full joint-type edge matrix `e({k,l}, {k',l'})`.
//!
//! [`mdl`] scores each model by ensemble entropy and description length,
//! [`divergence`] compares graphs through the same four representations,
//! and [`sampling`] draws random graphs from each ensemble.
//!
//! ```
//! use nod_core::{graph::canonical_cayley_tree, mdl::{select_model, Model}};
//!
//! let tree = canonical_cayley_tree(3, 6).unwrap();
//! let report = select_model(&tree).unwrap();
//! assert_eq!(report.selected_model, Model::Lcm);
//! ```

pub mod divergence;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod mdl;
pub mod metrics;
pub mod numeric;
pub mod onion;
pub mod sampling;
pub mod stats;

pub use error::{Error, Result};
pub use graph::Graph;
