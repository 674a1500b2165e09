//! BF theory: Lagrangian subspaces of `𝔤 ⊕ 𝔤*` and the equations of motion on
//! a cellular annulus.

use std::collections::BTreeMap;

use defectwb_algebra::{
    is_lagrangian, CochainComplex, GradedVectorSpace, LagrangianCandidate, LagrangianReport, Matrix, Scalar,
    ShiftedPairing, Q,
};
use defectwb_algebra::cellular::SimplicialComplex;
use serde::Serialize;

use super::lie::LieAlgebra;
use crate::error::{domain, Result};

/// `𝔤 ⊕ 𝔤*` in degree 0 with `ω((x,ξ),(y,η)) = ξ(y) − η(x)`; coordinates
/// `(x_1..x_n, ξ_1..ξ_n)`.
pub fn tstar_fiber(alg: &LieAlgebra) -> ShiftedPairing<Q> {
    let n = alg.dim();
    let labels: Vec<String> =
        alg.labels().iter().map(|l| l.to_string()).chain(alg.labels().iter().map(|l| format!("{l}*"))).collect();
    let space = GradedVectorSpace::from_labels(BTreeMap::from([(0, labels)])).expect("distinct labels");
    let form = Matrix::from_fn(2 * n, 2 * n, |r, c| {
        if r >= n && c == r - n {
            Q::one()
        } else if r < n && c == r + n {
            -Q::one()
        } else {
            Q::zero()
        }
    });
    ShiftedPairing::new(CochainComplex::discrete(space), 0, BTreeMap::from([(0, form)])).expect("square form")
}

#[derive(Debug, Clone)]
pub struct BfLagrangian {
    pub candidate: LagrangianCandidate<Q>,
    pub dim: usize,
    pub report: LagrangianReport,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BfLagrangianSummary {
    pub label: String,
    pub dim: usize,
    pub ambient_dim: usize,
    pub isotropic: bool,
    pub strict_self_perp: bool,
}

impl BfLagrangian {
    pub fn summary(&self, label: &str) -> BfLagrangianSummary {
        BfLagrangianSummary {
            label: label.into(),
            dim: self.dim,
            ambient_dim: self.candidate.map.target().total_dim(),
            isotropic: self.report.isotropic,
            strict_self_perp: self.report.strict_self_perp,
        }
    }
}

fn build(alg: &LieAlgebra, vectors: Vec<Vec<Q>>) -> Result<BfLagrangian> {
    let fiber = tstar_fiber(alg);
    let candidate = LagrangianCandidate::subcomplex(fiber.complex(), &BTreeMap::from([(0, vectors)]))?;
    let report = is_lagrangian(&candidate, &fiber)?;
    let dim = candidate.source.space().total_dim();
    Ok(BfLagrangian { candidate, dim, report })
}

/// `L_s = {(x, s·κ(x, ·))}`. `kappa` need not be symmetric; it must be
/// nondegenerate.
pub fn bf_lagrangian_graph(alg: &LieAlgebra, s: &Q, kappa: &Matrix<Q>) -> Result<BfLagrangian> {
    let n = alg.dim();
    if kappa.shape() != (n, n) {
        return domain("pairing has the wrong size");
    }
    if kappa.rank(0.0) < n {
        return domain("the pairing is degenerate");
    }
    let vectors = (0..n)
        .map(|i| {
            let mut v = vec![Q::zero(); 2 * n];
            v[i] = Q::one();
            for j in 0..n {
                v[n + j] = s.clone() * kappa[(i, j)].clone();
            }
            v
        })
        .collect();
    build(alg, vectors)
}

/// `L_𝔩 = 𝔩 ⊕ Ann(𝔩)`.
pub fn bf_lagrangian_subalgebra(alg: &LieAlgebra, basis: &[Vec<Q>]) -> Result<BfLagrangian> {
    alg.check_subalgebra(basis)?;
    let n = alg.dim();
    let ann = if basis.is_empty() {
        (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
    } else {
        Matrix::from_columns(n, basis).transpose().kernel(0.0)
    };
    let mut vectors: Vec<Vec<Q>> = basis
        .iter()
        .map(|x| x.iter().cloned().chain(std::iter::repeat_n(Q::zero(), n)).collect())
        .collect();
    vectors.extend(ann.into_iter().map(|xi: Vec<Q>| std::iter::repeat_n(Q::zero(), n).chain(xi).collect()));
    build(alg, vectors)
}

/// Named subalgebras of `sl2` in the basis `h, e, f`.
pub fn sl2_subalgebra(name: &str) -> Result<Vec<Vec<Q>>> {
    let e = |i: usize| (0..3).map(|j| if i == j { Q::one() } else { Q::zero() }).collect::<Vec<Q>>();
    match name {
        "zero" => Ok(vec![]),
        "cartan" => Ok(vec![e(0)]),
        "borel" => Ok(vec![e(0), e(1)]),
        "full" => Ok(vec![e(0), e(1), e(2)]),
        other => domain(format!("unknown sl2 subalgebra {other:?}")),
    }
}

/// Lie-algebra-valued cochains: `values[σ][a]` is the `e_a` component on simplex `σ`.
pub type CochainField = Vec<Vec<Q>>;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BfResiduals {
    pub curvature: f64,
    pub covariant_b: f64,
}

fn max_abs(v: &[Q]) -> f64 {
    v.iter().map(|x| defectwb_algebra::q_to_f64(x).abs()).fold(0.0, f64::max)
}

/// `F_A = dA + ½[A, A]` and `∇_A B = dB + A·B` with the coadjoint action
/// `(x·ξ)(y) = −ξ([x, y])`, using the Alexander–Whitney cup for wedges.
/// `a` is a 1-cochain, `b` a 0-cochain.
pub fn eom_residuals_bf(cx: &SimplicialComplex, alg: &LieAlgebra, a: &CochainField, b: &CochainField) -> Result<BfResiduals> {
    let n = alg.dim();
    if a.len() != cx.count(1) || b.len() != cx.count(0) || a.iter().chain(b).any(|v| v.len() != n) {
        return domain("fields do not match the cellular model");
    }
    let component = |f: &CochainField, i: usize| f.iter().map(|v| v[i].clone()).collect::<Vec<Q>>();
    let d0 = cx.coboundary::<Q>(0);
    let d1 = cx.coboundary::<Q>(1);
    let half = Q::from_ratio(1, 2);
    let ai: Vec<Vec<Q>> = (0..n).map(|i| component(a, i)).collect();
    let bi: Vec<Vec<Q>> = (0..n).map(|i| component(b, i)).collect();
    let mut curvature: f64 = 0.0;
    let mut covariant: f64 = 0.0;
    for k in 0..n {
        let mut f = d1.apply(&ai[k]);
        let mut g = d0.apply(&bi[k]);
        for i in 0..n {
            for j in 0..n {
                let c = &alg.structure(i, j)[k];
                if !c.is_exact_zero() {
                    let cup = cx.cup(1, &ai[i], 1, &ai[j]);
                    f.iter_mut().zip(cup).for_each(|(x, y)| *x += half.clone() * c.clone() * y);
                }
                // (A·B)_k = −Σ A^i B_j c^j_{ik}
                let cj = &alg.structure(i, k)[j];
                if !cj.is_exact_zero() {
                    let cup = cx.cup(1, &ai[i], 0, &bi[j]);
                    g.iter_mut().zip(cup).for_each(|(x, y)| *x -= cj.clone() * y);
                }
            }
        }
        curvature = curvature.max(max_abs(&f));
        covariant = covariant.max(max_abs(&g));
    }
    Ok(BfResiduals { curvature, covariant_b: covariant })
}

/// A closed 1-cochain on `cx` that is not exact, from a cohomology representative.
pub fn winding_cocycle(cx: &SimplicialComplex) -> Option<Vec<Q>> {
    let c: CochainComplex<Q> = cx.cochain_complex();
    defectwb_algebra::cohomology(&c).reps(1).first().cloned()
}

