//! Degree-shifted bilinear forms on cochain complexes.
//!
//! A `k`-shifted pairing pairs degree `p` with degree `k - p`. Conventions:
//!
//! * graded skew-symmetry: `⟨a,b⟩ = −(−1)^{|a||b|} ⟨b,a⟩`
//! * compatibility with `d`: `⟨da,b⟩ + (−1)^{|a|} ⟨a,db⟩ = 0`

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cohomology::cohomology;
use crate::error::{AlgebraError, Result};
use crate::graded::CochainComplex;
use crate::matrix::{LinAlg, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct ShiftedPairing<F> {
    complex: CochainComplex<F>,
    shift: i32,
    /// `blocks[p]` has shape `dim C^p × dim C^{k-p}`.
    blocks: BTreeMap<i32, Matrix<F>>,
}

fn sign<F: Scalar>(exponent: i32) -> F {
    if exponent.rem_euclid(2) == 0 {
        F::one()
    } else {
        -F::one()
    }
}

impl<F: LinAlg> ShiftedPairing<F> {
    pub fn new(complex: CochainComplex<F>, shift: i32, blocks: BTreeMap<i32, Matrix<F>>) -> Result<Self> {
        let mut kept = BTreeMap::new();
        for (p, m) in blocks {
            let expected = (complex.dim(p), complex.dim(shift - p));
            if m.shape() != expected {
                return Err(AlgebraError::Degree(format!(
                    "pairing block for degree {p} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    expected.0,
                    expected.1
                )));
            }
            if expected.0 > 0 && expected.1 > 0 {
                kept.insert(p, m);
            }
        }
        Ok(ShiftedPairing { complex, shift, blocks: kept })
    }

    /// Builds the pairing from the blocks with `p <= k - p` and fills in the
    /// remaining blocks by graded skew-symmetry.
    pub fn from_half(complex: CochainComplex<F>, shift: i32, half: BTreeMap<i32, Matrix<F>>) -> Result<Self> {
        let mut blocks = BTreeMap::new();
        for (p, m) in half {
            let q = shift - p;
            if p > q {
                return Err(AlgebraError::Degree(format!("from_half expects p <= k-p, got p={p}")));
            }
            if p < q {
                let s: F = -sign::<F>(p * q);
                blocks.insert(q, m.transpose().scale(&s));
            }
            blocks.insert(p, m);
        }
        Self::new(complex, shift, blocks)
    }

    pub fn zero(complex: CochainComplex<F>, shift: i32) -> Self {
        ShiftedPairing { complex, shift, blocks: BTreeMap::new() }
    }

    pub fn complex(&self) -> &CochainComplex<F> {
        &self.complex
    }
    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn block(&self, p: i32) -> Matrix<F> {
        self.blocks
            .get(&p)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.complex.dim(p), self.complex.dim(self.shift - p)))
    }

    /// `⟨a, b⟩` for `a ∈ C^p`, `b ∈ C^{k-p}`.
    pub fn pair(&self, p: i32, a: &[F], b: &[F]) -> F {
        let wb = self.block(p).apply(b);
        a.iter().zip(wb).fold(F::zero(), |acc, (x, y)| acc + x.clone() * y)
    }

    /// Radical in degree `p`: `{b ∈ C^p : ⟨a,b⟩ = 0 for all a ∈ C^{k-p}}`.
    pub fn radical(&self, p: i32) -> Vec<Vec<F>> {
        self.block(self.shift - p).kernel(self.complex.eps())
    }

    pub fn skew_residual(&self) -> f64 {
        let k = self.shift;
        let mut worst: f64 = 0.0;
        for p in self.complex.space().degrees() {
            let q = k - p;
            let lhs = self.block(p);
            let rhs = self.block(q).transpose().scale(&-sign::<F>(p * q));
            worst = worst.max(lhs.sub(&rhs).max_abs());
        }
        worst
    }

    pub fn d_residual(&self) -> f64 {
        let k = self.shift;
        let c = &self.complex;
        let mut worst: f64 = 0.0;
        for p in c.degree_window() {
            let q = k - p - 1;
            if c.dim(p) == 0 || c.dim(q) == 0 {
                continue;
            }
            let first = c.d(p).transpose().mul(&self.block(p + 1));
            let second = self.block(p).mul(&c.d(q)).scale(&sign::<F>(p));
            worst = worst.max(first.add(&second).max_abs());
        }
        worst
    }

    /// Gram matrix of the induced pairing on cohomology representatives.
    pub fn cohomology_block(&self, reps_p: &[Vec<F>], reps_q: &[Vec<F>], p: i32) -> Matrix<F> {
        Matrix::from_fn(reps_p.len(), reps_q.len(), |i, j| self.pair(p, &reps_p[i], &reps_q[j]))
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PairingReport {
    pub shift: i32,
    pub skew: bool,
    pub skew_residual: f64,
    pub d_compatible: bool,
    pub d_residual: f64,
    /// Cochain-level radical dimension per degree.
    pub radical_dims: BTreeMap<i32, usize>,
    /// Radical of the induced pairing on cohomology (only when d-compatible).
    pub cohomology_radical_dims: Option<BTreeMap<i32, usize>>,
    pub nondegenerate: bool,
}

pub fn check_pairing<F: LinAlg>(p: &ShiftedPairing<F>) -> PairingReport {
    let eps = p.complex.eps();
    let skew_residual = p.skew_residual();
    let d_residual = p.d_residual();
    let skew = skew_residual <= eps;
    let d_compatible = d_residual <= eps;
    let degrees = p.complex.space().degrees();
    let radical_dims: BTreeMap<i32, usize> = degrees.iter().map(|&d| (d, p.radical(d).len())).collect();
    let cohomology_radical_dims = d_compatible.then(|| {
        let h = cohomology(&p.complex);
        degrees
            .iter()
            .map(|&d| {
                let q = p.shift - d;
                let g = p.cohomology_block(h.reps(q), h.reps(d), q);
                (d, h.dim(d) - g.rank(eps))
            })
            .collect()
    });
    let nondegenerate = radical_dims.values().all(|&n| n == 0);
    PairingReport {
        shift: p.shift,
        skew,
        skew_residual,
        d_compatible,
        d_residual,
        radical_dims,
        cohomology_radical_dims,
        nondegenerate,
    }
}
