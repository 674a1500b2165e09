//! Discretized minimal-coupling action for defect fields along a line.

use nalgebra::{DMatrix, DVector};

use super::dgla::Parity;
use crate::error::{domain, Result};

/// Samples of a `V`-valued field and a connection on a uniform grid.
#[derive(Debug, Clone)]
pub struct LineFields {
    pub spacing: f64,
    pub psi: Vec<DVector<f64>>,
    pub connection: Vec<DMatrix<f64>>,
}

/// Second-order finite differences, one-sided at the ends.
fn derivative(values: &[DVector<f64>], h: f64) -> Vec<DVector<f64>> {
    let n = values.len();
    (0..n)
        .map(|i| match i {
            0 => (-3.0 * &values[0] + 4.0 * &values[1] - &values[2]) / (2.0 * h),
            _ if i == n - 1 => (3.0 * &values[n - 1] - 4.0 * &values[n - 2] + &values[n - 3]) / (2.0 * h),
            _ => (&values[i + 1] - &values[i - 1]) / (2.0 * h),
        })
        .collect()
}

/// `S(ψ; A) = ∫ (ψ, (d + A)ψ)` by the trapezoid rule. The pairing must be
/// skew for odd defect fields and symmetric for even ones.
pub fn minimal_coupling_action(fields: &LineFields, pairing: &DMatrix<f64>, parity: Parity) -> Result<f64> {
    let n = fields.psi.len();
    if n < 3 {
        return domain("need at least three grid points");
    }
    if fields.connection.len() != n {
        return domain("connection and field grids differ");
    }
    if !(fields.spacing.is_finite() && fields.spacing > 0.0) {
        return domain("grid spacing must be positive");
    }
    let dim = pairing.nrows();
    if !pairing.is_square() || fields.psi.iter().any(|p| p.len() != dim) || fields.connection.iter().any(|a| a.shape() != (dim, dim)) {
        return domain("field values do not match the pairing");
    }
    let expected = match parity {
        Parity::Odd => -pairing.transpose(),
        Parity::Even => pairing.transpose(),
    };
    if (pairing - expected).amax() > 1e-12 {
        return domain("pairing symmetry does not match the parity");
    }
    let dpsi = derivative(&fields.psi, fields.spacing);
    let integrand: Vec<f64> = (0..n)
        .map(|i| {
            let cov = &dpsi[i] + &fields.connection[i] * &fields.psi[i];
            fields.psi[i].dot(&(pairing * cov))
        })
        .collect();
    let inner: f64 = integrand[1..n - 1].iter().sum();
    Ok(fields.spacing * (inner + 0.5 * (integrand[0] + integrand[n - 1])))
}
