//! Wavefunction dynamics over one-dimensional grids, a U(1) gauge layer,
//! dimensional analysis in a natural semantic unit system, and a toy
//! retrieval/embedding layer that maps token vectors onto wavepackets.

// `!(x > 0.0)` is used deliberately so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod error;
pub mod gauge;
pub mod io;
pub mod potentials;
pub mod propagator;
pub mod semantics;
pub mod state;
pub mod units;

pub use error::{Error, Result};
pub use gauge::{GaugeCheckReport, GaugeField, GaugeTransform, NoetherRecord};
pub use potentials::PotentialSpec;
pub use propagator::{Constants, EvolutionConfig, Method, Observables, Trajectory};
pub use semantics::{ChunkStore, ComplexEmbedding, PromptState, TokenSpace};
pub use state::{make_gaussian, normalize, Boundary, SpatialGrid, WaveFunction};
pub use units::Dimension;
