//! d² checks, cohomology with representatives, chain-map and quasi-isomorphism tests.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{AlgebraError, Result};
use crate::graded::{CochainComplex, LinearMap};
use crate::matrix::{LinAlg, Matrix};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DSquaredReport {
    pub ok: bool,
    /// Max |d∘d| entry per degree of the source.
    pub residuals: BTreeMap<i32, f64>,
    pub offending: Vec<i32>,
}

/// Checks `d_{p+1} ∘ d_p = 0` in every degree.
pub fn check_d_squared<F: LinAlg>(c: &CochainComplex<F>) -> Result<DSquaredReport> {
    let mut residuals = BTreeMap::new();
    let mut offending = Vec::new();
    for p in c.degree_window() {
        let dd = c.d(p + 1).try_mul(&c.d(p)).map_err(|_| AlgebraError::Shape {
            degree: p,
            detail: "d_{p+1} and d_p do not compose".into(),
        })?;
        let r = dd.max_abs();
        if c.dim(p) > 0 {
            residuals.insert(p, r);
        }
        if !dd.is_zero(c.eps()) {
            offending.push(p);
        }
    }
    Ok(DSquaredReport { ok: offending.is_empty(), residuals, offending })
}

/// Cohomology: dimensions, cocycle representatives and boundary bases.
#[derive(Debug, Clone)]
pub struct Cohomology<F> {
    pub dims: BTreeMap<i32, usize>,
    pub reps: BTreeMap<i32, Vec<Vec<F>>>,
    pub boundaries: BTreeMap<i32, Vec<Vec<F>>>,
    eps: f64,
}

/// Indices of `candidates` that extend `base` to a linearly independent family.
fn extend_basis<F: LinAlg>(n: usize, base: &[Vec<F>], candidates: &[Vec<F>], eps: f64) -> Vec<usize> {
    if F::EXACT {
        let mut cols = base.to_vec();
        cols.extend_from_slice(candidates);
        let pivots = Matrix::from_columns(n, &cols).rref_with(0.0).pivots;
        let base_rank = Matrix::from_columns(n, base).rank(0.0);
        // Pivots among base columns come first; the remaining pivots pick candidates.
        pivots.into_iter().filter(|&p| p >= base.len()).map(|p| p - base.len()).take(n - base_rank).collect()
    } else {
        let mut current = base.to_vec();
        let mut rank = Matrix::from_columns(n, &current).rank(eps);
        let mut chosen = Vec::new();
        for (i, v) in candidates.iter().enumerate() {
            current.push(v.clone());
            let r = Matrix::from_columns(n, &current).rank(eps);
            if r > rank {
                rank = r;
                chosen.push(i);
            } else {
                current.pop();
            }
        }
        chosen
    }
}

/// `dim H^k = dim ker d_k − rank d_{k−1}` with representatives spanning a
/// complement of the image inside the kernel.
pub fn cohomology<F: LinAlg>(c: &CochainComplex<F>) -> Cohomology<F> {
    let eps = c.eps();
    let mut dims = BTreeMap::new();
    let mut reps = BTreeMap::new();
    let mut boundaries = BTreeMap::new();
    for p in c.space().degrees() {
        let n = c.dim(p);
        let cycles = c.d(p).kernel(eps);
        let bounds = c.d(p - 1).image(eps);
        let picks = extend_basis(n, &bounds, &cycles, eps);
        let r: Vec<Vec<F>> = picks.into_iter().map(|i| cycles[i].clone()).collect();
        dims.insert(p, r.len());
        reps.insert(p, r);
        boundaries.insert(p, bounds);
    }
    Cohomology { dims, reps, boundaries, eps }
}

impl<F: LinAlg> Cohomology<F> {
    pub fn dim(&self, p: i32) -> usize {
        self.dims.get(&p).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// Dimension list restricted to nonzero entries.
    pub fn nonzero_dims(&self) -> BTreeMap<i32, usize> {
        self.dims.iter().filter(|(_, n)| **n > 0).map(|(d, n)| (*d, *n)).collect()
    }

    pub fn reps(&self, p: i32) -> &[Vec<F>] {
        self.reps.get(&p).map_or(&[], Vec::as_slice)
    }

    /// Coordinates of the class of cocycle `v` in the representative basis.
    pub fn coords(&self, p: i32, v: &[F]) -> Option<Vec<F>> {
        let reps = self.reps(p);
        let bounds = self.boundaries.get(&p).map_or(&[][..], Vec::as_slice);
        let mut cols = reps.to_vec();
        cols.extend_from_slice(bounds);
        if cols.is_empty() {
            return if v.iter().all(|x| x.is_zero_tol(self.eps)) { Some(Vec::new()) } else { None };
        }
        let m = Matrix::from_columns(v.len(), &cols);
        let x = m.solve(v, self.eps)?;
        Some(x[..reps.len()].to_vec())
    }
}

/// Verifies `f ∘ d_A = d_B ∘ f` in every degree.
pub fn check_chain_map<F: LinAlg>(f: &LinearMap<F>, a: &CochainComplex<F>, b: &CochainComplex<F>) -> Result<()> {
    if f.source() != a.space() || f.target() != b.space() {
        return Err(AlgebraError::Degree("map does not connect the given complexes".into()));
    }
    if f.shift() != 0 {
        return Err(AlgebraError::Degree("chain maps have degree 0".into()));
    }
    let eps = a.eps().max(b.eps());
    for p in a.degree_window() {
        let lhs = f.block(p + 1).try_mul(&a.d(p))?;
        let rhs = b.d(p).try_mul(&f.block(p))?;
        let diff = lhs.sub(&rhs);
        if !diff.is_zero(eps) {
            return Err(AlgebraError::NotChainMap { degree: p, residual: diff.max_abs() });
        }
    }
    Ok(())
}

/// Matrix of `H^p(f)` in the representative bases.
pub fn induced_map<F: LinAlg>(
    f: &LinearMap<F>,
    ha: &Cohomology<F>,
    hb: &Cohomology<F>,
    p: i32,
) -> Result<Matrix<F>> {
    let block = f.block(p);
    let mut cols = Vec::new();
    for rep in ha.reps(p) {
        let image = block.apply(rep);
        let coords = hb.coords(p, &image).ok_or_else(|| AlgebraError::Domain(format!(
            "image of a degree-{p} cocycle is not a cocycle"
        )))?;
        cols.push(coords);
    }
    Ok(Matrix::from_columns(hb.dim(p), &cols))
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct QuasiIsoReport {
    pub ok: bool,
    pub source_dims: BTreeMap<i32, usize>,
    pub target_dims: BTreeMap<i32, usize>,
    /// Rank of the induced map per degree.
    pub induced_ranks: BTreeMap<i32, usize>,
}

/// True iff `f` induces isomorphisms on cohomology in every degree.
pub fn is_quasi_iso<F: LinAlg>(
    f: &LinearMap<F>,
    a: &CochainComplex<F>,
    b: &CochainComplex<F>,
) -> Result<QuasiIsoReport> {
    check_chain_map(f, a, b)?;
    let ha = cohomology(a);
    let hb = cohomology(b);
    let eps = a.eps().max(b.eps());
    let mut ok = true;
    let mut induced_ranks = BTreeMap::new();
    let degrees: std::collections::BTreeSet<i32> = a.space().degrees().into_iter().chain(b.space().degrees()).collect();
    for p in degrees {
        let (da, db) = (ha.dim(p), hb.dim(p));
        let rank = if da == 0 || db == 0 { 0 } else { induced_map(f, &ha, &hb, p)?.rank(eps) };
        induced_ranks.insert(p, rank);
        if da != db || rank != da {
            ok = false;
        }
    }
    Ok(QuasiIsoReport { ok, source_dims: ha.nonzero_dims(), target_dims: hb.nonzero_dims(), induced_ranks })
}
