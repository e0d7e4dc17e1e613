//! Dirac bound states in a shifted Deng-Fan well with a Yukawa-type tensor
//! coupling, in the exact spin and pseudospin symmetry limits.
//!
//! * [`model`]: parameters, potentials, quantum numbers and labels.
//! * [`spectrum`]: quantization conditions, root search and doublet tables.
//! * [`wavefunction`]: Jacobi polynomials, spinor components, normalization.
//! * [`oracle`]: independent checks (NU construction, shooting, approximation error).
//! * [`cli`]: the `sdf-dirac` command line.

pub mod cli;
pub mod error;
pub mod model;
pub mod oracle;
pub mod spectrum;
pub mod wavefunction;

pub use error::{Error, Result};
