//! Abelian first-order Yang–Mills on a Fourier-truncated flat 4-torus, its
//! boundary complex on `T³`, and the Dirac monopole.
//!
//! Per Fourier mode `k` the complex is
//!
//! ```text
//! deg −1: Ω⁰ ──∇──▶ deg 0: Ω¹ ──∇₊──▶ deg 1: Ω²₊
//!                        Ω²₊ ─────────────▶ Ω²₊   (−c·⋆)
//!                        Ω²₊ ──∇──▶ Ω³ ──∇──▶ deg 2: Ω⁴
//! ```
//!
//! with `∇ = i k ∧`. The self-dual forms are the `+1` eigenspace of the
//! supplied Hodge star on `Λ²`.

use std::collections::BTreeMap;

use defectwb_algebra::forms::{exterior_basis, hodge_star, modes, wedge_matrix};
use defectwb_algebra::{
    check_d_squared, check_pairing, cohomology, is_isotropic, is_lagrangian, q_to_f64, CochainComplex,
    GradedVectorSpace, IsotropyReport, LagrangianCandidate, LagrangianReport, Matrix, PairingReport, Scalar,
    ShiftedPairing, Q, QI,
};
use serde::Serialize;

use crate::error::{domain, DefectError, Result};
use crate::gauge::{coupled_dgla, fit_slope, wilson_loop, LieAlgebra, Parity, Representation};

fn covector(k: &[i64]) -> Vec<QI> {
    k.iter().map(|&x| QI::imag(Q::from_integer(x.into()))).collect()
}

fn block_matrix(rows: &[usize], cols: &[usize], blocks: &[((usize, usize), Matrix<QI>)]) -> Matrix<QI> {
    let (nr, nc) = (rows.iter().sum(), cols.iter().sum());
    let mut m = Matrix::zeros(nr, nc);
    for ((bi, bj), b) in blocks {
        let r0: usize = rows[..*bi].iter().sum();
        let c0: usize = cols[..*bj].iter().sum();
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                m[(r0 + r, c0 + c)] = b[(r, c)].clone();
            }
        }
    }
    m
}

/// Self-dual projector data for a Hodge star on `Λ²(R⁴)`.
#[derive(Debug, Clone)]
pub struct SelfDual {
    pub star: Matrix<QI>,
    pub projector: Matrix<QI>,
    /// Columns span `Λ²₊`.
    pub basis: Matrix<QI>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ProjectorReport {
    pub idempotent: bool,
    pub star_fixed: bool,
    pub rank: usize,
}

impl SelfDual {
    pub fn new(star: Matrix<QI>) -> Result<Self> {
        if star.shape() != (6, 6) {
            return domain("the Hodge star on 2-forms must be 6×6");
        }
        let id = Matrix::identity(6);
        if !star.mul(&star).sub(&id).is_zero(0.0) {
            return domain("the Hodge star must square to the identity on 2-forms");
        }
        let projector = id.add(&star).scale(&QI::real(Q::from_ratio(1, 2)));
        let cols = star.sub(&id).kernel(0.0);
        let basis = Matrix::from_columns(6, &cols);
        Ok(SelfDual { star, projector, basis })
    }

    pub fn flat() -> Self {
        Self::new(hodge_star(4, 2)).expect("flat star is an involution")
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Coordinates in `basis` of a self-dual 2-form.
    fn coords(&self, v: &[QI]) -> Vec<QI> {
        self.basis.solve(v, 0.0).expect("vector is self-dual")
    }

    /// Matrix of `v ↦ coords(P₊ M v)`.
    fn project(&self, m: &Matrix<QI>) -> Matrix<QI> {
        let cols: Vec<Vec<QI>> = self.projector.mul(m).columns().iter().map(|c| self.coords(c)).collect();
        Matrix::from_columns(self.dim(), &cols)
    }

    pub fn report(&self) -> ProjectorReport {
        let p = &self.projector;
        ProjectorReport {
            idempotent: p.mul(p).sub(p).is_zero(0.0),
            star_fixed: self.star.mul(p).sub(p).is_zero(0.0),
            rank: p.rank(0.0),
        }
    }
}

/// Blocks of the complex at one Fourier mode.
#[derive(Debug, Clone)]
pub struct ModeBlocks {
    pub mode: Vec<i64>,
    pub grad: Matrix<QI>,
    pub grad_plus: Matrix<QI>,
    pub cross: Matrix<QI>,
    pub d_b: Matrix<QI>,
    pub d3: Matrix<QI>,
}

impl ModeBlocks {
    /// Degree layout: −1: `Ω⁰`; 0: `Ω¹ ⊕ Ω²₊`; 1: `Ω²₊ ⊕ Ω³`; 2: `Ω⁴`.
    pub fn complex(&self, sd: usize) -> CochainComplex<QI> {
        let labels = BTreeMap::from([
            (-1, vec!["c".to_string()]),
            (0, (0..4).map(|i| format!("A{i}")).chain((0..sd).map(|i| format!("B{i}"))).collect()),
            (1, (0..sd).map(|i| format!("A*{i}")).chain((0..4).map(|i| format!("B*{i}"))).collect()),
            (2, vec!["c*".to_string()]),
        ]);
        let space = GradedVectorSpace::from_labels(labels).expect("distinct labels");
        let dm1 = block_matrix(&[4, sd], &[1], &[((0, 0), self.grad.clone())]);
        let d0 = block_matrix(
            &[sd, 4],
            &[4, sd],
            &[((0, 0), self.grad_plus.clone()), ((0, 1), self.cross.clone()), ((1, 1), self.d_b.clone())],
        );
        let d1 = block_matrix(&[1], &[sd, 4], &[((0, 1), self.d3.clone())]);
        CochainComplex::new(space, BTreeMap::from([(-1, dm1), (0, d0), (1, d1)])).expect("block shapes")
    }
}

#[derive(Debug, Clone)]
pub struct FirstOrderYm {
    pub cutoff: i64,
    pub coupling: Q,
    pub self_dual: SelfDual,
    pub blocks: Vec<ModeBlocks>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct YmReport {
    pub cutoff: i64,
    pub coupling: String,
    pub modes: usize,
    pub d_squared: bool,
    pub max_d_squared_residual: f64,
    /// True when no differential connects the A-row to the B-row.
    pub splits: bool,
    pub projector: ProjectorReport,
    pub zero_mode_cohomology: BTreeMap<i32, usize>,
    pub total_cohomology: BTreeMap<i32, usize>,
}

pub fn build_ym_complex(cutoff: i64, coupling: Q, star: Option<Matrix<QI>>) -> Result<FirstOrderYm> {
    if cutoff < 1 {
        return domain("mode cutoff must be at least 1");
    }
    let sd = match star {
        Some(s) => SelfDual::new(s)?,
        None => SelfDual::flat(),
    };
    let c = QI::from_q(&coupling);
    let blocks = modes(4, cutoff)
        .into_iter()
        .map(|k| {
            let v = covector(&k);
            let grad = wedge_matrix(4, 0, &v);
            let grad_plus = sd.project(&wedge_matrix(4, 1, &v));
            let star_b = sd.star.mul(&sd.basis);
            let cross = sd.project(&star_b).scale(&-c.clone());
            let d_b = wedge_matrix(4, 2, &v).mul(&sd.basis);
            let d3 = wedge_matrix(4, 3, &v);
            ModeBlocks { mode: k, grad, grad_plus, cross, d_b, d3 }
        })
        .collect();
    Ok(FirstOrderYm { cutoff, coupling, self_dual: sd, blocks })
}

impl FirstOrderYm {
    pub fn report(&self) -> Result<YmReport> {
        let sd = self.self_dual.dim();
        let mut ok = true;
        let mut worst: f64 = 0.0;
        let mut total = BTreeMap::new();
        let mut zero = BTreeMap::new();
        for b in &self.blocks {
            let cx = b.complex(sd);
            let r = check_d_squared(&cx)?;
            ok &= r.ok;
            worst = r.residuals.values().fold(worst, |m, x| m.max(*x));
            let h = cohomology(&cx).nonzero_dims();
            if b.mode.iter().all(|&x| x == 0) {
                zero = h.clone();
            }
            for (d, n) in h {
                *total.entry(d).or_insert(0) += n;
            }
        }
        let splits = self.blocks.iter().all(|b| b.cross.is_zero(0.0));
        Ok(YmReport {
            cutoff: self.cutoff,
            coupling: defectwb_algebra::format_q(&self.coupling),
            modes: self.blocks.len(),
            d_squared: ok,
            max_d_squared_residual: worst,
            splits,
            projector: self.self_dual.report(),
            zero_mode_cohomology: zero,
            total_cohomology: total,
        })
    }

    pub fn zero_fields(&self) -> YmFields {
        let n = self.blocks.len();
        YmFields { a: vec![vec![QI::zero(); 4]; n], b: vec![vec![QI::zero(); self.self_dual.dim()]; n] }
    }
}

/// Per-mode coefficients: `a[mode]` in `Λ¹`, `b[mode]` in the self-dual basis.
#[derive(Debug, Clone, PartialEq)]
pub struct YmFields {
    pub a: Vec<Vec<QI>>,
    pub b: Vec<Vec<QI>>,
}

fn modulus(z: &QI) -> f64 {
    q_to_f64(&z.re).hypot(q_to_f64(&z.im))
}

fn max_modulus(v: &[QI]) -> f64 {
    v.iter().map(modulus).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct YmResiduals {
    /// `‖∇₊A − cB‖`
    pub self_dual: f64,
    /// `‖∇B‖`
    pub bianchi: f64,
}

pub fn eom_residuals_ym(ym: &FirstOrderYm, f: &YmFields) -> Result<YmResiduals> {
    let n = ym.blocks.len();
    let sd = ym.self_dual.dim();
    if f.a.len() != n || f.b.len() != n || f.a.iter().any(|v| v.len() != 4) || f.b.iter().any(|v| v.len() != sd) {
        return domain("fields do not match the truncation");
    }
    let c = QI::from_q(&ym.coupling);
    let mut first: f64 = 0.0;
    let mut second: f64 = 0.0;
    for (i, b) in ym.blocks.iter().enumerate() {
        let ga = b.grad_plus.apply(&f.a[i]);
        let r: Vec<QI> = ga.iter().zip(&f.b[i]).map(|(x, y)| x.clone() - c.clone() * y.clone()).collect();
        first = first.max(max_modulus(&r));
        second = second.max(max_modulus(&b.d_b.apply(&f.b[i])));
    }
    Ok(YmResiduals { self_dual: first, bianchi: second })
}

/// `B := ∇₊A / c`, which solves the first equation by construction.
pub fn b_from_a(ym: &FirstOrderYm, a: &[Vec<QI>]) -> Result<Vec<Vec<QI>>> {
    if ym.coupling.is_exact_zero() {
        return domain("the coupling must be nonzero");
    }
    let inv = QI::from_q(&(Q::one() / ym.coupling.clone()));
    Ok(ym.blocks.iter().zip(a).map(|(b, x)| b.grad_plus.apply(x).into_iter().map(|y| y * inv.clone()).collect()).collect())
}

/// One `{k, −k}` block of the boundary complex on `T³`: `Ω⁰ → Ω¹` in degrees
/// −1, 0 and `zΩ² → zΩ³` in degrees 0, 1, with the wedge-and-integrate
/// pairing. The complex and the pairing are block diagonal in these sectors.
#[derive(Debug, Clone)]
pub struct BoundarySector {
    pub modes: Vec<Vec<i64>>,
    pub pairing: ShiftedPairing<QI>,
}

impl BoundarySector {
    fn new(modes: Vec<Vec<i64>>) -> Self {
        let nm = modes.len();
        let local_d = |p: usize| {
            let (bs, bt) = (exterior_basis(3, p).len(), exterior_basis(3, p + 1).len());
            let mut m = Matrix::zeros(nm * bt, nm * bs);
            for (i, k) in modes.iter().enumerate() {
                let local = wedge_matrix(3, p, &covector(k));
                for r in 0..bt {
                    for c in 0..bs {
                        m[(i * bt + r, i * bs + c)] = local[(r, c)].clone();
                    }
                }
            }
            m
        };
        // ∫ e^{ik·x} dx_I ∧ e^{il·x} dx_J on the unit torus.
        let wedge = |p: usize| {
            let (bp, bq) = (exterior_basis(3, p), exterior_basis(3, 3 - p));
            let mut m = Matrix::zeros(nm * bp.len(), nm * bq.len());
            for (a, ka) in modes.iter().enumerate() {
                for (b, kb) in modes.iter().enumerate() {
                    if ka.iter().zip(kb).any(|(x, y)| x + y != 0) {
                        continue;
                    }
                    for (i, &mi) in bp.iter().enumerate() {
                        for (j, &mj) in bq.iter().enumerate() {
                            if let Some((sign, _)) = defectwb_algebra::forms::wedge_masks(mi, mj) {
                                m[(a * bp.len() + i, b * bq.len() + j)] = QI::from_i64(sign as i64);
                            }
                        }
                    }
                }
            }
            m
        };
        let n1 = 3 * nm;
        let labels = BTreeMap::from([
            (-1, (0..nm).map(|i| format!("f{i}")).collect()),
            (0, (0..n1).map(|i| format!("A{i}")).chain((0..n1).map(|i| format!("zB{i}"))).collect()),
            (1, (0..nm).map(|i| format!("zG{i}")).collect()),
        ]);
        let space = GradedVectorSpace::from_labels(labels).expect("distinct labels");
        let dm1 = block_matrix(&[n1, n1], &[nm], &[((0, 0), local_d(0))]);
        let d0 = block_matrix(&[nm], &[n1, n1], &[((0, 1), local_d(2))]);
        let complex = CochainComplex::new(space, BTreeMap::from([(-1, dm1), (0, d0)])).expect("block shapes");
        // ⟨f, γ⟩ = −∫ f γ and ⟨(A,B),(A',B')⟩ = ∫ A∧B' − ∫ A'∧B.
        let (w0, w1) = (wedge(0), wedge(1));
        let neg = -QI::one();
        let b0 = block_matrix(&[n1, n1], &[n1, n1], &[((0, 1), w1.clone()), ((1, 0), w1.transpose().scale(&neg))]);
        let blocks = BTreeMap::from([(-1, w0.scale(&neg)), (0, b0), (1, w0.transpose().scale(&neg))]);
        let pairing = ShiftedPairing::new(complex, 0, blocks).expect("pairing shapes");
        BoundarySector { modes, pairing }
    }

    pub fn complex(&self) -> &CochainComplex<QI> {
        self.pairing.complex()
    }

    pub fn is_zero_mode(&self) -> bool {
        self.modes.len() == 1
    }

    /// Basis vectors of the A-row: all of degree −1 and the `Ω¹` part of degree 0.
    pub fn a_row(&self) -> BTreeMap<i32, Vec<Vec<QI>>> {
        let c = self.complex();
        let unit = |n: usize, i: usize| (0..n).map(|j| if i == j { QI::one() } else { QI::zero() }).collect::<Vec<QI>>();
        let (nm, n0) = (c.dim(-1), c.dim(0));
        BTreeMap::from([(-1, (0..nm).map(|i| unit(nm, i)).collect()), (0, (0..n0 / 2).map(|i| unit(n0, i)).collect())])
    }

    /// Degree-0 index of the `zB` coordinate for `dx_I` at the first mode.
    pub fn b_index(&self, component: usize) -> usize {
        3 * self.modes.len() + component
    }
}

/// The boundary complex on a Fourier-truncated `T³`, as its `{k, −k}` sectors.
#[derive(Debug, Clone)]
pub struct BoundaryYm {
    pub cutoff: i64,
    pub sectors: Vec<BoundarySector>,
}

impl BoundaryYm {
    pub fn new(cutoff: i64) -> Result<Self> {
        if cutoff < 0 {
            return domain("cutoff must be non-negative");
        }
        let all = modes(3, cutoff);
        // Modes are lexicographic and symmetric, so k pairs with the mirror index.
        let n = all.len();
        let sectors = (0..=n / 2)
            .map(|i| {
                let j = n - 1 - i;
                let ms = if i == j { vec![all[i].clone()] } else { vec![all[i].clone(), all[j].clone()] };
                BoundarySector::new(ms)
            })
            .collect();
        Ok(BoundaryYm { cutoff, sectors })
    }

    pub fn total_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for s in &self.sectors {
            for (d, n) in s.complex().space().dims() {
                *out.entry(d).or_insert(0) += n;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BoundaryReport {
    pub cutoff: i64,
    pub sectors: usize,
    pub pairing_skew: bool,
    pub pairing_d_compatible: bool,
    pub pairing_nondegenerate: bool,
    pub chain_map: bool,
    pub isotropic: bool,
    pub isotropy_residual: f64,
    pub strict_self_perp: bool,
    pub cohomology_lagrangian: bool,
    pub candidate_dims: BTreeMap<i32, usize>,
    pub ambient_dims: BTreeMap<i32, usize>,
    pub boundary_cohomology: usize,
    pub candidate_cohomology: usize,
    pub half_cohomology: bool,
}

/// `L_{B=0}`: inclusion of the A-row, checked against the boundary pairing.
pub fn boundary_condition_b0(boundary: &BoundaryYm) -> Result<(Vec<LagrangianCandidate<QI>>, BoundaryReport)> {
    check_candidate(boundary, &|s: &BoundarySector| s.a_row())
}

/// Runs the boundary checks on the span of `vectors(sector)` in each sector.
pub fn check_candidate(
    boundary: &BoundaryYm,
    vectors: &dyn Fn(&BoundarySector) -> BTreeMap<i32, Vec<Vec<QI>>>,
) -> Result<(Vec<LagrangianCandidate<QI>>, BoundaryReport)> {
    let mut report = BoundaryReport {
        cutoff: boundary.cutoff,
        sectors: boundary.sectors.len(),
        pairing_skew: true,
        pairing_d_compatible: true,
        pairing_nondegenerate: true,
        chain_map: true,
        isotropic: true,
        isotropy_residual: 0.0,
        strict_self_perp: true,
        cohomology_lagrangian: true,
        candidate_dims: BTreeMap::new(),
        ambient_dims: boundary.total_dims(),
        boundary_cohomology: 0,
        candidate_cohomology: 0,
        half_cohomology: false,
    };
    let mut candidates = Vec::new();
    for sector in &boundary.sectors {
        let pr: PairingReport = check_pairing(&sector.pairing);
        report.pairing_skew &= pr.skew;
        report.pairing_d_compatible &= pr.d_compatible;
        report.pairing_nondegenerate &= pr.nondegenerate;
        let cand = LagrangianCandidate::subcomplex(sector.complex(), &vectors(sector))?;
        report.chain_map &= defectwb_algebra::check_chain_map(&cand.map, &cand.source, sector.complex()).is_ok();
        let iso: IsotropyReport = is_isotropic(&cand, &sector.pairing)?;
        report.isotropic &= iso.isotropic;
        report.isotropy_residual = report.isotropy_residual.max(iso.residual);
        let lag: LagrangianReport = is_lagrangian(&cand, &sector.pairing)?;
        report.strict_self_perp &= lag.strict_self_perp;
        report.cohomology_lagrangian &= lag.cohomology_lagrangian;
        for (d, n) in cand.source.space().dims() {
            *report.candidate_dims.entry(d).or_insert(0) += n;
        }
        report.boundary_cohomology += cohomology(sector.complex()).total_dim();
        report.candidate_cohomology += cohomology(&cand.source).total_dim();
        candidates.push(cand);
    }
    report.half_cohomology = 2 * report.candidate_cohomology == report.boundary_cohomology;
    Ok((candidates, report))
}

/// `F = (m/2) sin θ dθ∧dφ`, the charge-`m` Dirac monopole on a linking sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MonopoleField {
    pub charge: i64,
}

impl MonopoleField {
    pub fn density(&self, theta: f64) -> f64 {
        0.5 * self.charge as f64 * theta.sin()
    }

    /// Radial field strength `B_r = m / (2 r²)` of the same monopole in `R³`.
    pub fn radial_field(&self, r: f64) -> f64 {
        0.5 * self.charge as f64 / (r * r)
    }

    /// Largest flux imbalance over cells `[1, 2] × [θ_i, θ_{i+1}] × [φ_j, φ_{j+1}]`
    /// of an `n × n` angular grid: the discrete `dF`. Only the two spherical
    /// faces carry flux since `F` has no radial leg.
    pub fn closedness_residual(&self, n: usize) -> f64 {
        let (ht, hp) = (std::f64::consts::PI / n as f64, std::f64::consts::TAU / n as f64);
        let face = |r: f64, i: usize| {
            let area = ((i as f64 * ht).cos() - ((i + 1) as f64 * ht).cos()) * hp;
            r * r * self.radial_field(r) * area
        };
        (0..n).map(|i| (face(2.0, i) - face(1.0, i)).abs()).fold(0.0, f64::max)
    }
}

/// `(1/2π) ∬ F` by the midpoint rule on an `n × n` grid in `(θ, φ)`.
pub fn midpoint_charge(f: &MonopoleField, n: usize) -> f64 {
    let (ht, hp) = (std::f64::consts::PI / n as f64, std::f64::consts::TAU / n as f64);
    let mut total = 0.0;
    for i in 0..n {
        let row = f.density((i as f64 + 0.5) * ht) * ht;
        for _ in 0..n {
            total += row * hp;
        }
    }
    total / std::f64::consts::TAU
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ChargeReport {
    pub charge: i64,
    pub grid: usize,
    pub estimate: f64,
    pub distance_to_integer: f64,
    pub midpoint: f64,
    pub closedness_residual: f64,
}

/// Richardson-extrapolated midpoint quadrature: `(4 M(n) − M(n/2)) / 3`.
pub fn magnetic_charge(f: &MonopoleField, n: usize) -> Result<ChargeReport> {
    if n < 8 || !n.is_multiple_of(2) {
        return Err(DefectError::Domain(format!("grid size {n} must be even and at least 8")));
    }
    let (fine, coarse) = (midpoint_charge(f, n), midpoint_charge(f, n / 2));
    let estimate = (4.0 * fine - coarse) / 3.0;
    Ok(ChargeReport {
        charge: f.charge,
        grid: n,
        estimate,
        distance_to_integer: (estimate - estimate.round()).abs(),
        midpoint: fine,
        closedness_residual: f.closedness_residual(n),
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConvergenceReport {
    pub grids: Vec<usize>,
    pub midpoint_errors: Vec<f64>,
    pub extrapolated_errors: Vec<f64>,
    /// Slope of `log error` against `log n`.
    pub midpoint_order: f64,
    pub extrapolated_order: f64,
}

pub fn charge_convergence(f: &MonopoleField, grids: &[usize]) -> Result<ConvergenceReport> {
    if f.charge == 0 {
        return domain("convergence is measured for a nonzero charge");
    }
    let m = f.charge as f64;
    let mut mid = Vec::new();
    let mut ext = Vec::new();
    for &n in grids {
        let r = magnetic_charge(f, n)?;
        mid.push((r.midpoint - m).abs());
        ext.push((r.estimate - m).abs());
    }
    let xs: Vec<f64> = grids.iter().map(|&n| (n as f64).ln()).collect();
    let log = |v: &[f64]| v.iter().map(|e| e.max(f64::MIN_POSITIVE).ln()).collect::<Vec<f64>>();
    Ok(ConvergenceReport {
        grids: grids.to_vec(),
        midpoint_order: fit_slope(&xs, &log(&mid)),
        extrapolated_order: fit_slope(&xs, &log(&ext)),
        midpoint_errors: mid,
        extrapolated_errors: ext,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DyonicDefect {
    pub magnetic: i64,
    pub electric: i64,
    pub trivial: bool,
    pub charge: ChargeReport,
    pub charge_ok: bool,
    pub coupling_jacobi: bool,
    /// `e^{i n ∮A}` for the supplied flux.
    pub wilson_phase: [f64; 2],
    pub passed: bool,
}

/// Monopole background of charge `m` combined with the `u(1) ⋉ V_n` line.
pub fn dyonic_label(m: i64, n: i64, flux: f64) -> Result<DyonicDefect> {
    let charge = magnetic_charge(&MonopoleField { charge: m }, 64)?;
    let charge_ok = (charge.estimate - m as f64).abs() < 1e-6;
    let (_, desc) = coupled_dgla(&LieAlgebra::u1(), &Representation::u1_charge(n), Parity::Even, 4, 1)?;
    let w = wilson_loop(&Representation::u1_weight(n), &[(vec![flux], 1.0)])?;
    Ok(DyonicDefect {
        magnetic: m,
        electric: n,
        trivial: m == 0 && n == 0,
        charge_ok,
        coupling_jacobi: desc.jacobi.passed,
        wilson_phase: [w.re, w.im],
        passed: charge_ok && desc.jacobi.passed,
        charge,
    })
}
