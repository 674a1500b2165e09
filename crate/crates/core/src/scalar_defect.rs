//! The free scalar near a point defect in the plane.
//!
//! With `r = R + t` the Laplacian is `𝒟 = ∂_t² + g ∂_t + g² ∂_θ²`,
//! `g = 1/(R + t) = Σ_j (−1)^j t^j / R^{j+1}`. Jets `Σ a_{m,k} t^m e^{ikθ}`
//! are truncated at `t^M` and `|k| ≤ K`; `𝒟` is block diagonal in `k` and
//! exact up to order `M − 2`.

use std::collections::BTreeMap;

use defectwb_algebra::{
    is_isotropic, is_lagrangian, qi, CochainComplex, GradedVectorSpace, LagrangianCandidate, LagrangianReport,
    LinearMap, Matrix, PairingReport, Scalar, ShiftedPairing, Q, QI,
};
use serde::Serialize;

use crate::error::{domain, DefectError, Result};

/// Truncated Fourier × power-series coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierJet {
    pub radius: Q,
    pub order: usize,
    pub kmax: i64,
    /// `coeffs[&k][m]` is the coefficient of `t^m e^{ikθ}`.
    pub coeffs: BTreeMap<i64, Vec<QI>>,
    /// Orders above this are not exact.
    pub exact_order: usize,
}

impl FourierJet {
    pub fn zero(radius: Q, order: usize, kmax: i64) -> Self {
        let coeffs = (-kmax..=kmax).map(|k| (k, vec![QI::zero(); order + 1])).collect();
        FourierJet { radius, order, kmax, coeffs, exact_order: order }
    }

    pub fn get(&self, m: usize, k: i64) -> QI {
        self.coeffs.get(&k).and_then(|v| v.get(m)).cloned().unwrap_or_else(QI::zero)
    }

    pub fn set(&mut self, m: usize, k: i64, value: QI) {
        let slot = self.coeffs.get_mut(&k).expect("mode within the truncation");
        slot[m] = value;
    }

    /// True when every coefficient up to `exact_order` vanishes.
    pub fn vanishes_to_exact_order(&self) -> bool {
        self.coeffs.values().all(|v| v.iter().take(self.exact_order + 1).all(Scalar::is_exact_zero))
    }

    /// Jet of `r^{|k|} e^{ikθ}` about `r = R`.
    pub fn harmonic(radius: &Q, order: usize, kmax: i64, k: i64) -> Self {
        let mut j = Self::zero(radius.clone(), order, kmax);
        let n = k.unsigned_abs() as usize;
        for (m, c) in binomial_jet(radius, n as i64, order).into_iter().enumerate() {
            j.set(m, k, QI::real(c));
        }
        j
    }
}

/// Taylor coefficients of `(R + t)^n` for any integer `n`.
pub fn binomial_jet(radius: &Q, n: i64, order: usize) -> Vec<Q> {
    let mut out = Vec::with_capacity(order + 1);
    let mut coeff = Q::one();
    for m in 0..=order {
        // C(n, m) R^{n−m}
        out.push(coeff.clone() * pow(radius, n - m as i64));
        coeff = coeff * qi(n - m as i64) / qi(m as i64 + 1);
    }
    out
}

/// Taylor coefficients of `log(R + t) − log R`.
pub fn log_jet(radius: &Q, order: usize) -> Vec<Q> {
    (0..=order)
        .map(|m| {
            if m == 0 {
                Q::zero()
            } else {
                let sign = if m % 2 == 1 { Q::one() } else { -Q::one() };
                sign / (qi(m as i64) * pow(radius, m as i64))
            }
        })
        .collect()
}

fn pow(x: &Q, n: i64) -> Q {
    let base = if n < 0 { Q::one() / x.clone() } else { x.clone() };
    (0..n.unsigned_abs()).fold(Q::one(), |acc, _| acc * base.clone())
}

fn alternating(j: usize) -> Q {
    if j.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Matrix of `𝒟` on mode `k`, from orders `0..=M` to orders `0..=M`; rows
/// `M − 1` and `M` are incomplete since they would need `a_{M+1}, a_{M+2}`.
pub fn mode_matrix(radius: &Q, order: usize, k: i64) -> Matrix<Q> {
    let n = order + 1;
    let k2 = qi(k * k);
    let mut d = Matrix::zeros(n, n);
    for m in 0..n {
        if m + 2 < n {
            d[(m, m + 2)] += qi(((m + 2) * (m + 1)) as i64);
        }
        for j in 0..=m {
            let src = m - j + 1;
            if src < n {
                d[(m, src)] += alternating(j) * pow(radius, -(j as i64 + 1)) * qi(src as i64);
            }
            d[(m, m - j)] += -k2.clone() * qi(j as i64 + 1) * alternating(j) * pow(radius, -(j as i64 + 2));
        }
    }
    d
}

/// The operator at fixed truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct JetOperator {
    pub radius: Q,
    pub order: usize,
    pub kmax: i64,
    pub blocks: BTreeMap<i64, Matrix<Q>>,
}

impl JetOperator {
    pub fn new(radius: Q, order: usize, kmax: i64) -> Result<Self> {
        if order < 2 {
            return domain(format!("truncation order {order} must be at least 2"));
        }
        if radius <= Q::zero() {
            return domain("radius must be positive");
        }
        if kmax < 0 {
            return domain("mode cutoff must be non-negative");
        }
        let blocks = (-kmax..=kmax).map(|k| (k, mode_matrix(&radius, order, k))).collect();
        Ok(JetOperator { radius, order, kmax, blocks })
    }

    /// The exact part: orders `0..=M` onto orders `0..=M−2`.
    pub fn exact_block(&self, k: i64) -> Matrix<Q> {
        let b = &self.blocks[&k];
        b.submatrix(0..self.order - 1, 0..self.order + 1)
    }

    /// Dense matrix on the whole jet space, modes in increasing order, each
    /// mode's coefficients `t^0..t^M`.
    pub fn full_matrix(&self) -> Matrix<Q> {
        let n = self.order + 1;
        let modes = self.blocks.len();
        let mut m = Matrix::zeros(n * modes, n * modes);
        for (i, b) in self.blocks.values().enumerate() {
            for r in 0..n {
                for c in 0..n {
                    m[(i * n + r, i * n + c)] = b[(r, c)].clone();
                }
            }
        }
        m
    }
}

pub fn apply_d(op: &JetOperator, jet: &FourierJet) -> Result<FourierJet> {
    if jet.order != op.order || jet.kmax != op.kmax || jet.radius != op.radius {
        return domain("jet and operator truncations differ");
    }
    let mut out = FourierJet::zero(jet.radius.clone(), jet.order, jet.kmax);
    for (k, b) in &op.blocks {
        let bq: Matrix<QI> = b.map(QI::from_q);
        let image = bq.apply(&jet.coeffs[k]);
        out.coeffs.insert(*k, image);
    }
    out.exact_order = jet.order - 2;
    Ok(out)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ModeKernel {
    pub k: i64,
    pub dimension: usize,
    /// Indices `m` of the free coefficients `a_m`.
    pub free_coefficients: Vec<usize>,
    pub t0_projection_injective: bool,
    pub t0_image_dim: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct KernelReport {
    pub radius: String,
    pub order: usize,
    pub kmax: i64,
    pub modes: Vec<ModeKernel>,
    /// Dimension per mode implied by the claim that a kernel element is
    /// determined by its `t⁰` term.
    pub claimed_dimension: usize,
    pub matches_claim: bool,
}

pub fn kernel_report(radius: Q, kmax: i64, order: usize) -> Result<KernelReport> {
    let op = JetOperator::new(radius.clone(), order, kmax)?;
    let mut modes = Vec::new();
    for k in -kmax..=kmax {
        let b = op.exact_block(k);
        let kernel = b.kernel(0.0);
        // Pivot from the highest order down so the free columns are the lowest ones.
        let reversed = Matrix::from_fn(b.rows(), b.cols(), |r, c| b[(r, order - c)].clone());
        let pivots = reversed.rref_with(0.0).pivots;
        let free: Vec<usize> = (0..=order).filter(|c| !pivots.contains(&(order - c))).collect();
        let t0: Vec<Q> = kernel.iter().map(|v| v[0].clone()).collect();
        let t0_image_dim = usize::from(t0.iter().any(|x| !x.is_exact_zero()));
        modes.push(ModeKernel {
            k,
            dimension: kernel.len(),
            free_coefficients: free,
            t0_projection_injective: t0_image_dim == kernel.len(),
            t0_image_dim,
        });
    }
    let matches_claim = modes.iter().all(|m| m.dimension == 1);
    Ok(KernelReport { radius: defectwb_algebra::format_q(&radius), order, kmax, modes, claimed_dimension: 1, matches_claim })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SurjectivityReport {
    pub order: usize,
    pub target_dim: usize,
    pub ranks: BTreeMap<i64, usize>,
    pub cokernel_dims: BTreeMap<i64, usize>,
    pub surjective: bool,
}

/// Per-mode rank of `𝒟: orders ≤ M → orders ≤ M − 2`.
pub fn surjectivity_of(blocks: &BTreeMap<i64, Matrix<Q>>, order: usize) -> SurjectivityReport {
    let target_dim = order - 1;
    let ranks: BTreeMap<i64, usize> = blocks.iter().map(|(k, b)| (*k, b.rank(0.0))).collect();
    let cokernel_dims = ranks.iter().map(|(k, r)| (*k, target_dim - r)).collect();
    let surjective = ranks.values().all(|&r| r == target_dim);
    SurjectivityReport { order, target_dim, ranks, cokernel_dims, surjective }
}

pub fn surjectivity_report(radius: Q, kmax: i64, order: usize) -> Result<SurjectivityReport> {
    let op = JetOperator::new(radius, order, kmax)?;
    let blocks = (-kmax..=kmax).map(|k| (k, op.exact_block(k))).collect();
    Ok(surjectivity_of(&blocks, order))
}

/// `ω_D(e^{ikθ}, e^{ilθ})`: `sign(k)` when `l = −k`, else `0`.
pub fn omega_d(k: i64, l: i64) -> i64 {
    if l == -k {
        k.signum()
    } else {
        0
    }
}

/// The boundary functions `e^{ikθ}`, `|k| ≤ K`, as a complex concentrated in
/// degree 0, carrying `ω_D` as a 0-shifted pairing.
pub fn boundary_pairing(kmax: i64) -> Result<ShiftedPairing<Q>> {
    let labels: Vec<String> = (-kmax..=kmax).map(|k| format!("e^{{{k}iθ}}")).collect();
    let space = GradedVectorSpace::from_labels(BTreeMap::from([(0, labels)]))?;
    let complex = CochainComplex::discrete(space);
    let n = (2 * kmax + 1) as usize;
    let form = Matrix::from_fn(n, n, |i, j| qi(omega_d(i as i64 - kmax, j as i64 - kmax)));
    Ok(ShiftedPairing::new(complex, 0, BTreeMap::from([(0, form)]))?)
}

pub fn boundary_pairing_report(kmax: i64) -> Result<PairingReport> {
    Ok(defectwb_algebra::check_pairing(&boundary_pairing(kmax)?))
}

/// `S ⊂ {−K..K} ∖ {0}` containing exactly one of `k, −k` for each `k ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralSet {
    kmax: i64,
    modes: Vec<i64>,
}

impl SpectralSet {
    pub fn new(kmax: i64, mut modes: Vec<i64>) -> Result<Self> {
        modes.sort_unstable();
        modes.dedup();
        if modes.contains(&0) {
            return Err(DefectError::Invariant("spectral set contains the constant mode".into()));
        }
        if let Some(k) = modes.iter().find(|k| k.abs() > kmax) {
            return Err(DefectError::Invariant(format!("mode {k} exceeds the cutoff {kmax}")));
        }
        for k in 1..=kmax {
            if modes.contains(&k) == modes.contains(&-k) {
                return Err(DefectError::Invariant(format!("exactly one of ±{k} must be in the set")));
            }
        }
        Ok(SpectralSet { kmax, modes })
    }

    /// `S = {k < 0}`.
    pub fn negative(kmax: i64) -> Self {
        SpectralSet { kmax, modes: (-kmax..0).collect() }
    }

    pub fn modes(&self) -> &[i64] {
        &self.modes
    }

    /// All `2^K` valid sets.
    pub fn all(kmax: i64) -> Vec<SpectralSet> {
        (0u64..(1 << kmax))
            .map(|bits| {
                let modes = (1..=kmax).map(|k| if bits & (1 << (k - 1)) != 0 { k } else { -k }).collect();
                SpectralSet::new(kmax, modes).expect("one of each pair")
            })
            .collect()
    }

    /// Modes surviving the condition `f̂_n = 0, n ∈ S`, excluding the constant.
    pub fn surviving(&self) -> Vec<i64> {
        (-self.kmax..=self.kmax).filter(|k| *k != 0 && !self.modes.contains(k)).collect()
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SpectralReport {
    pub set: Vec<i64>,
    pub isotropic: bool,
    pub half_dimension: bool,
    pub lagrangian: LagrangianReport,
}

fn mode_vectors(kmax: i64, modes: &[i64]) -> Vec<Vec<Q>> {
    let n = (2 * kmax + 1) as usize;
    modes
        .iter()
        .map(|&k| (0..n).map(|i| if i as i64 - kmax == k { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn spectral_lagrangian_check(s: &SpectralSet) -> Result<SpectralReport> {
    let pairing = boundary_pairing(s.kmax)?;
    let modes = s.surviving();
    let cand = LagrangianCandidate::subcomplex(pairing.complex(), &BTreeMap::from([(0, mode_vectors(s.kmax, &modes))]))?;
    let lagrangian = is_lagrangian(&cand, &pairing)?;
    Ok(SpectralReport {
        set: s.modes.clone(),
        isotropic: lagrangian.isotropic,
        half_dimension: 2 * modes.len() == (2 * s.kmax) as usize,
        lagrangian,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct HarmonicReport {
    pub kmax: i64,
    pub order: usize,
    pub dimension: usize,
    pub in_kernel: bool,
    pub t0_image_dim: usize,
    pub t0_isotropic: bool,
    pub t0_residual: f64,
}

/// Span of the jets of `r^{|k|} e^{ikθ}`.
#[derive(Debug, Clone)]
pub struct HarmonicLagrangian {
    pub radius: Q,
    pub order: usize,
    pub kmax: i64,
    pub jets: Vec<FourierJet>,
    pub report: HarmonicReport,
}

impl HarmonicLagrangian {
    /// Whether `jet` lies in the span, solved mode by mode.
    pub fn contains(&self, jet: &FourierJet) -> bool {
        for k in -self.kmax..=self.kmax {
            let basis = &self.jets[(k + self.kmax) as usize].coeffs[&k];
            let target = &jet.coeffs[&k];
            let m = Matrix::from_columns(basis.len(), std::slice::from_ref(basis));
            if m.solve(target, 0.0).is_none() {
                return false;
            }
        }
        true
    }
}

pub fn harmonic_lagrangian(kmax: i64, order: usize, radius: Q) -> Result<HarmonicLagrangian> {
    let op = JetOperator::new(radius.clone(), order, kmax)?;
    let jets: Vec<FourierJet> = (-kmax..=kmax).map(|k| FourierJet::harmonic(&radius, order, kmax, k)).collect();
    let mut in_kernel = true;
    for j in &jets {
        in_kernel &= apply_d(&op, j)?.vanishes_to_exact_order();
    }
    // Boundary values: the t⁰ coefficient of each mode.
    let n = (2 * kmax + 1) as usize;
    let boundary: Vec<Vec<Q>> = jets
        .iter()
        .enumerate()
        .map(|(i, j)| (0..n).map(|r| if r == i { j.get(0, i as i64 - kmax).re.clone() } else { Q::zero() }).collect())
        .collect();
    let t0_image_dim = Matrix::from_columns(n, &boundary).rank(0.0);
    let pairing = boundary_pairing(kmax)?;
    let map = LinearMap::new(
        GradedVectorSpace::from_dims(&[(0, n)]),
        pairing.complex().space().clone(),
        0,
        BTreeMap::from([(0, Matrix::from_columns(n, &boundary))]),
    )?;
    let cand = LagrangianCandidate::new(CochainComplex::discrete(GradedVectorSpace::from_dims(&[(0, n)])), map);
    let iso = is_isotropic(&cand, &pairing)?;
    let report = HarmonicReport {
        kmax,
        order,
        dimension: jets.len(),
        in_kernel,
        t0_image_dim,
        t0_isotropic: iso.isotropic,
        t0_residual: iso.residual,
    };
    Ok(HarmonicLagrangian { radius, order, kmax, jets, report })
}
