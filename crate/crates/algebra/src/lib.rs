//! Graded linear algebra over exact and floating-point fields: cochain
//! complexes, cohomology, shifted pairings and Lagrangian checks, together
//! with the small cellular and Fourier models used to build examples.

pub mod cellular;
pub mod cohomology;
pub mod error;
pub mod forms;
pub mod graded;
pub mod lagrangian;
pub mod matrix;
pub mod pairing;
pub mod scalar;

pub use cohomology::{check_chain_map, check_d_squared, cohomology, induced_map, is_quasi_iso, Cohomology, DSquaredReport, QuasiIsoReport};
pub use error::{AlgebraError, Result};
pub use graded::{tensor_maps, CochainComplex, GradedVectorSpace, LinearMap};
pub use lagrangian::{is_isotropic, is_lagrangian, IsotropyReport, LagrangianCandidate, LagrangianReport};
pub use matrix::{LinAlg, Matrix};
pub use pairing::{check_pairing, PairingReport, ShiftedPairing};
pub use scalar::{format_q, parse_q, q, q_to_f64, qi, Scalar, Tolerance, C64, DEFAULT_EPS, Q, QI};
