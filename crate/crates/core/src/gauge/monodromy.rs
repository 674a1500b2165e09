//! Holonomy of piecewise-constant connections around a loop.
//!
//! Loops start at angle 0 and segments run counterclockwise; the holonomy is
//! the ordered product `exp(A_n Δ_n) ··· exp(A_1 Δ_1)`.

use defectwb_algebra::{q_to_f64, Matrix, QI};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::lie::Representation;
use crate::error::{domain, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Converts an exact matrix to a complex double matrix.
pub fn to_complex(m: &Matrix<QI>) -> CMatrix {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| Complex64::new(q_to_f64(&m[(r, c)].re), q_to_f64(&m[(r, c)].im)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopConnection {
    segments: Vec<(CMatrix, f64)>,
}

impl LoopConnection {
    pub fn new(segments: Vec<(CMatrix, f64)>) -> Result<Self> {
        let Some(n) = segments.first().map(|(a, _)| a.nrows()) else {
            return domain("a loop needs at least one segment");
        };
        for (a, len) in &segments {
            if !a.is_square() || a.nrows() != n {
                return domain("segment matrices must be square and of equal size");
            }
            if !(len.is_finite() && *len > 0.0) {
                return domain(format!("segment length {len} must be positive"));
            }
        }
        Ok(LoopConnection { segments })
    }

    /// Segments given by Lie algebra coordinates, realized through `rep`.
    pub fn from_coefficients(rep: &Representation, segments: &[(Vec<f64>, f64)]) -> Result<Self> {
        let mats: Vec<CMatrix> = rep.matrices.iter().map(to_complex).collect();
        let built = segments
            .iter()
            .map(|(x, len)| {
                if x.len() != mats.len() {
                    return domain("coefficient vector does not match the algebra");
                }
                let a = mats.iter().zip(x).fold(CMatrix::zeros(rep.dim, rep.dim), |acc, (m, c)| acc + m * Complex64::from(*c));
                Ok((a, *len))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(built)
    }

    pub fn segments(&self) -> &[(CMatrix, f64)] {
        &self.segments
    }

    pub fn size(&self) -> usize {
        self.segments[0].0.nrows()
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(|(_, l)| l).sum()
    }

    /// Constant gauge transformation `A ↦ h A h⁻¹`.
    pub fn conjugated(&self, h: &CMatrix) -> Result<Self> {
        let Some(hinv) = h.clone().try_inverse() else {
            return domain("gauge transformation is not invertible");
        };
        Self::new(self.segments.iter().map(|(a, l)| (h * a * &hinv, *l)).collect())
    }

    /// Splits every segment into `pieces` equal parts.
    pub fn subdivided(&self, pieces: usize) -> Self {
        let segments = self
            .segments
            .iter()
            .flat_map(|(a, l)| std::iter::repeat_n((a.clone(), l / pieces as f64), pieces))
            .collect();
        LoopConnection { segments }
    }
}

pub fn monodromy(c: &LoopConnection) -> CMatrix {
    c.segments.iter().fold(CMatrix::identity(c.size(), c.size()), |acc, (a, l)| (a * Complex64::from(*l)).exp() * acc)
}

/// Coefficients of `det(λI − g)`, leading coefficient first
/// (Faddeev–LeVerrier).
pub fn conjugacy_invariants(g: &CMatrix) -> Result<Vec<Complex64>> {
    if !g.is_square() {
        return domain("characteristic polynomial needs a square matrix");
    }
    let n = g.nrows();
    let mut coeffs = vec![Complex64::from(1.0)];
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n {
        m = g * &m + CMatrix::identity(n, n) * coeffs[k - 1];
        let c = -(g * &m).trace() / k as f64;
        coeffs.push(c);
    }
    Ok(coeffs)
}

/// Trace of the holonomy in `rep`.
pub fn wilson_loop(rep: &Representation, segments: &[(Vec<f64>, f64)]) -> Result<Complex64> {
    Ok(monodromy(&LoopConnection::from_coefficients(rep, segments)?).trace())
}

/// Piecewise-constant approximation of a smooth connection `a(s)`, sampled at
/// the midpoint of `pieces` equal parts of `[0, length]`.
pub fn sample_midpoints(a: &dyn Fn(f64) -> CMatrix, length: f64, pieces: usize) -> Result<LoopConnection> {
    let h = length / pieces as f64;
    LoopConnection::new((0..pieces).map(|i| (a((i as f64 + 0.5) * h), h)).collect())
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let num: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RefinementReport {
    pub pieces: Vec<usize>,
    pub errors: Vec<f64>,
    /// Slope of `log error` against `log(1/pieces)`; 2 for a second-order rule.
    pub order: f64,
}

/// Convergence of the midpoint holonomy under refinement `2^k`, `k ∈ levels`,
/// measured against `2^reference` pieces.
pub fn refinement_study(
    a: &dyn Fn(f64) -> CMatrix,
    length: f64,
    levels: std::ops::RangeInclusive<u32>,
    reference: u32,
) -> Result<RefinementReport> {
    let exact = monodromy(&sample_midpoints(a, length, 1 << reference)?);
    let mut pieces = Vec::new();
    let mut errors = Vec::new();
    for k in levels {
        let n = 1usize << k;
        let m = monodromy(&sample_midpoints(a, length, n)?);
        pieces.push(n);
        errors.push(max_abs(&(m - &exact)));
    }
    let xs: Vec<f64> = pieces.iter().map(|&n| -(n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    Ok(RefinementReport { order: fit_slope(&xs, &ys), pieces, errors })
}

/// `a(s) = Σ_i (c_i0 + c_i1 cos 2πs + c_i2 sin 4πs + c_i3 s) X_i` on the unit
/// loop, with `X_i` the generators of `rep`.
pub fn trig_connection(rep: &Representation, coeffs: &[[f64; 4]]) -> Result<impl Fn(f64) -> CMatrix> {
    if coeffs.len() != rep.matrices.len() {
        return domain("one coefficient row per generator is required");
    }
    let mats: Vec<CMatrix> = rep.matrices.iter().map(to_complex).collect();
    let coeffs = coeffs.to_vec();
    let n = rep.dim;
    Ok(move |s: f64| {
        let tau = std::f64::consts::TAU;
        mats.iter().zip(&coeffs).fold(CMatrix::zeros(n, n), |acc, (m, c)| {
            let x = c[0] + c[1] * (tau * s).cos() + c[2] * (2.0 * tau * s).sin() + c[3] * s;
            acc + m * Complex64::from(x)
        })
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConjugationReport {
    pub trials: usize,
    /// Characteristic polynomial of the holonomy, as `[re, im]` pairs.
    pub invariants: Vec<[f64; 2]>,
    /// Max deviation of `hol(h·A)` from `h hol(A) h⁻¹`.
    pub holonomy_residual: f64,
    pub invariant_residual: f64,
}

/// Compares holonomies and their invariants under `trials` random constant
/// gauge transformations `h = 2·1 + X`, `X` with entries uniform in the unit square.
pub fn conjugation_study(c: &LoopConnection, trials: usize, seed: u64) -> Result<ConjugationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = c.size();
    let m = monodromy(c);
    let base = conjugacy_invariants(&m)?;
    let mut holonomy_residual: f64 = 0.0;
    let mut invariant_residual: f64 = 0.0;
    for _ in 0..trials {
        let h = CMatrix::from_fn(n, n, |i, j| {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if i == j { z + 2.0 } else { z }
        });
        let Some(hinv) = h.clone().try_inverse() else { continue };
        let mh = monodromy(&c.conjugated(&h)?);
        holonomy_residual = holonomy_residual.max(max_abs(&(&mh - &h * &m * &hinv)));
        for (a, b) in base.iter().zip(conjugacy_invariants(&mh)?) {
            invariant_residual = invariant_residual.max((a - b).norm());
        }
    }
    Ok(ConjugationReport {
        trials,
        invariants: base.iter().map(|z| [z.re, z.im]).collect(),
        holonomy_residual,
        invariant_residual,
    })
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
