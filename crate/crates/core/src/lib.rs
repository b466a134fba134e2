//! Conditional entropies, divergences and one-shot resource rates of
//! bipartite quantum channels.
//!
//! Channels are stored as Choi operators on `R_A A R_B B`. Min-entropy type
//! quantities are semidefinite programs solved by the dense interior-point
//! method in [`conic`]; everything else is closed form over eigendecompositions.
//! All logarithms are base 2.

pub mod chanent;
pub mod channels;
pub mod conic;
pub mod divergences;
pub mod error;
pub mod experiments;
pub mod matcore;
mod optimize;
pub mod random;
pub mod resource;

pub use error::{Error, Result};
pub use matcore::{CMatrix, DimSignature, HermitianOperator};
