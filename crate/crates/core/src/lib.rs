//! Simulation and decoding for the [[23,1,7]] quantum Golay code.
//!
//! The crate builds the three Golay CSS codes from their generator
//! polynomials, a distance-`d` toric code for comparison, samples correlated
//! Pauli noise, and decodes with an exact syndrome table, a matching decoder,
//! a brute-force most-likely-error oracle, or an external process speaking a
//! small line protocol. [`harness`] drives Monte Carlo sweeps and datasets.

pub mod css;
pub mod decoders;
pub mod error;
pub mod gf2;
pub mod golay;
pub mod harness;
pub mod noise;
pub mod toric;

pub use css::{apply_correction, CssCode, LogicalPair, Pauli, PauliError, ResidualClass, Syndrome};
pub use error::{Error, Result};
pub use gf2::{BitMat, BitVec};
pub use golay::{build_golay_css, build_parity_matrix, PolyLabel};
pub use noise::{NoiseModel, StreamSeeder};
pub use toric::{build_toric, ToricLattice};
