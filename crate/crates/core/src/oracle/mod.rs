//! Independent checks of the closed-form results: the NU construction
//! rebuilt from scratch, shooting on the radial equation, explicit and
//! Rodrigues forms of the Jacobi polynomials, and the size of the
//! Pekeris-type approximation.

pub mod approx;
pub mod nu;
pub mod ode;
pub mod operator;
pub mod polynomial;
pub mod shooting;
pub mod verify;

pub use approx::{approx_curves, approximation_error_report, ApproxCurvePoint, ApproxReport};
pub use nu::{dual_ode_coefficients, nu_construct, nu_quantization_residual, NUProblem, NUSolution};
pub use operator::Centrifugal;
pub use polynomial::{jacobi_explicit_sum, rodrigues_coefficients};
pub use shooting::{mismatch, shoot_eigenvalue, ShootingConfig, ShootingResult};
pub use verify::{verify_all, verify_state, OracleChoice, StateReport, Tolerances};
