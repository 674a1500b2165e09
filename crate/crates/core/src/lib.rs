//! Defect constructions for factorization algebras of free BV theories,
//! modelled on finite complexes.

pub mod collapse;
pub mod error;
pub mod fact_line;
pub mod gauge;
pub mod scalar_defect;
pub mod ym;

pub use error::{DefectError, Result};
