//! Collapse profiles `f_t`, the fiberwise map `F_t`, preimages of open sets
//! under `π_t` on the model line, and annulus-model restriction checks.

use std::collections::BTreeMap;

use defectwb_algebra::cellular::{cw_circle, cw_cube, SimplicialComplex};
use defectwb_algebra::{cohomology, is_quasi_iso, CochainComplex, GradedVectorSpace, LinearMap, Matrix, Scalar, Q};
use serde::Serialize;

use crate::error::{domain, Result};

/// Radius of the tubular neighbourhood on which profiles are defined.
pub const TUBE_RADIUS: f64 = 3.0;
/// Bisection tolerance for inverting a profile.
pub const INVERSE_TOL: f64 = 1e-12;

/// `f_t(s) = s · σ((s − t)/t)` on `[t, 2t]`, zero below and the identity
/// above. `σ` interpolates between the cubic and quintic smoothsteps, so
/// `f_t` is C¹ for every family parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollapseProfile {
    t: f64,
    family: f64,
}

fn smoothstep(lambda: f64, u: f64) -> f64 {
    let cubic = u * u * (3.0 - 2.0 * u);
    let quintic = u * u * u * (u * (6.0 * u - 15.0) + 10.0);
    (1.0 - lambda) * cubic + lambda * quintic
}

fn smoothstep_slope(lambda: f64, u: f64) -> f64 {
    let cubic = 6.0 * u * (1.0 - u);
    let quintic = 30.0 * u * u * (u - 1.0) * (u - 1.0);
    (1.0 - lambda) * cubic + lambda * quintic
}

pub fn make_profile(t: f64, family: f64) -> Result<CollapseProfile> {
    if !(t > 0.0 && t < 1.0) {
        return domain(format!("collapse parameter t = {t} outside (0, 1)"));
    }
    if !(0.0..=1.0).contains(&family) {
        return domain(format!("family parameter {family} outside [0, 1]"));
    }
    Ok(CollapseProfile { t, family })
}

impl CollapseProfile {
    pub fn t(&self) -> f64 {
        self.t
    }
    pub fn family(&self) -> f64 {
        self.family
    }

    pub fn eval(&self, s: f64) -> f64 {
        let t = self.t;
        if s <= t {
            0.0
        } else if s >= 2.0 * t {
            s
        } else {
            s * smoothstep(self.family, (s - t) / t)
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        let t = self.t;
        if s <= t {
            0.0
        } else if s >= 2.0 * t {
            1.0
        } else {
            let u = (s - t) / t;
            smoothstep(self.family, u) + s * smoothstep_slope(self.family, u) / t
        }
    }

    /// The unique `s > t` with `f_t(s) = y`, for `y > 0`.
    pub fn inverse(&self, y: f64) -> f64 {
        assert!(y > 0.0, "inverse is only single-valued on positive values");
        let t = self.t;
        if y >= 2.0 * t {
            return y;
        }
        let (mut lo, mut hi) = (t, 2.0 * t);
        while hi - lo > INVERSE_TOL {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// `π_t(x) = sign(x) f_t(|x|)` on the model line.
    pub fn pi(&self, x: f64) -> f64 {
        x.signum() * self.eval(x.abs())
    }

    /// `sup {x : π_t(x) ≤ a}`.
    fn upper_preimage(&self, a: f64) -> f64 {
        if a.is_infinite() {
            return a;
        }
        if a > 0.0 {
            self.inverse(a)
        } else if a == 0.0 {
            self.t
        } else {
            -self.inverse(-a)
        }
    }

    /// `inf {x : π_t(x) ≥ b}`.
    fn lower_preimage(&self, b: f64) -> f64 {
        if b.is_infinite() {
            return b;
        }
        if b > 0.0 {
            self.inverse(b)
        } else if b == 0.0 {
            -self.t
        } else {
            -self.inverse(-b)
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ProfileReport {
    pub t: f64,
    pub samples: usize,
    /// Max `|f_t(s)|` over samples in `[0, t]`.
    pub below_residual: f64,
    /// Max `|f_t(s) − s|` over samples in `[2t, 3]`.
    pub identity_residual: f64,
    pub monotone: bool,
    pub passed: bool,
}

/// Samples `f_t` at `samples` evenly spaced points of each region and checks
/// that it vanishes, is the identity and never decreases.
pub fn profile_contract(profile: &CollapseProfile, samples: usize, eps: f64) -> Result<ProfileReport> {
    if samples < 2 {
        return domain("need at least two samples");
    }
    let t = profile.t();
    let grid = |lo: f64, hi: f64| (0..samples).map(move |i| lo + (hi - lo) * i as f64 / (samples - 1) as f64);
    let below_residual = grid(0.0, t).map(|s| profile.eval(s).abs()).fold(0.0, f64::max);
    let identity_residual = grid(2.0 * t, TUBE_RADIUS).map(|s| (profile.eval(s) - s).abs()).fold(0.0, f64::max);
    let values: Vec<f64> = grid(0.0, TUBE_RADIUS).map(|s| profile.eval(s)).collect();
    let monotone = values.windows(2).all(|w| w[1] >= w[0]);
    Ok(ProfileReport {
        t,
        samples,
        below_residual,
        identity_residual,
        monotone,
        passed: monotone && below_residual <= eps && identity_residual <= eps,
    })
}

/// `(s, f_t(s))` at `rows` evenly spaced points of `[0, 3]`.
pub fn profile_table(profile: &CollapseProfile, rows: usize) -> Vec<(f64, f64)> {
    let rows = rows.max(2);
    (0..rows)
        .map(|i| {
            let s = TUBE_RADIUS * i as f64 / (rows - 1) as f64;
            (s, profile.eval(s))
        })
        .collect()
}

/// A point of the normal disk bundle: a base label and a normal vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalPoint {
    pub base: String,
    v: Vec<f64>,
    norm: f64,
}

impl NormalPoint {
    pub fn new(base: impl Into<String>, v: Vec<f64>) -> Result<Self> {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm < TUBE_RADIUS) {
            return domain(format!("normal vector of norm {norm} outside the radius-3 tube"));
        }
        Ok(NormalPoint { base: base.into(), v, norm })
    }
    pub fn v(&self) -> &[f64] {
        &self.v
    }
    pub fn norm(&self) -> f64 {
        self.norm
    }
}

/// `F_t(x, v) = (x, f_t(|v|) v/|v|)`.
pub fn collapse_point(p: &NormalPoint, profile: &CollapseProfile) -> NormalPoint {
    let target = profile.eval(p.norm);
    let v = if p.norm == 0.0 || target == 0.0 {
        vec![0.0; p.v.len()]
    } else if target == p.norm {
        p.v.clone()
    } else {
        p.v.iter().map(|x| x * target / p.norm).collect()
    };
    NormalPoint { base: p.base.clone(), v, norm: target }
}

/// Finite union of disjoint open intervals, sorted by left endpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpenSet1D {
    intervals: Vec<(f64, f64)>,
}

impl OpenSet1D {
    /// Normalizes the input: empty intervals are dropped and overlapping ones
    /// merged. Touching intervals `(a, b), (b, c)` stay separate.
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.iter().any(|(a, b)| a.is_nan() || b.is_nan()) {
            return domain("interval endpoint is NaN");
        }
        intervals.retain(|(a, b)| a < b);
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (a, b) in intervals {
            match merged.last_mut() {
                Some(last) if a < last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Ok(OpenSet1D { intervals: merged })
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, b)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains_point(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a < x && x < b)
    }

    /// `self ⊆ other`, with endpoints compared up to `eps`.
    pub fn is_subset(&self, other: &OpenSet1D, eps: f64) -> bool {
        self.intervals.iter().all(|&(a, b)| other.intervals.iter().any(|&(c, d)| c <= a + eps && b <= d + eps))
    }

    /// Disjointness up to `eps`: touching endpoints count as disjoint.
    pub fn is_disjoint(&self, other: &OpenSet1D, eps: f64) -> bool {
        self.intervals
            .iter()
            .all(|&(a, b)| other.intervals.iter().all(|&(c, d)| b <= c + eps || d <= a + eps))
    }

    /// Closure avoids `[-r, r]`.
    pub fn closure_avoids(&self, r: f64) -> bool {
        self.intervals.iter().all(|&(a, b)| a > r || b < -r)
    }
}

/// `π_t^{-1}(U)`; the preimage of each interval is again an interval since
/// `π_t` is monotone and continuous.
pub fn preimage_open(u: &OpenSet1D, profile: &CollapseProfile) -> OpenSet1D {
    let intervals =
        u.intervals.iter().map(|&(a, b)| (profile.upper_preimage(a), profile.lower_preimage(b))).collect();
    OpenSet1D::new(intervals).expect("endpoints are finite or infinite, never NaN")
}

/// Annular region `r < |v| < R` in the normal bundle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusSet {
    pub r: f64,
    pub big_r: f64,
}

impl AnnulusSet {
    pub fn new(r: f64, big_r: f64) -> Result<Self> {
        if !(0.0 < r && r < big_r && big_r < TUBE_RADIUS) {
            return domain(format!("annulus ({r}, {big_r}) needs 0 < r < R < 3"));
        }
        Ok(AnnulusSet { r, big_r })
    }
}

/// Field theories for which annulus models are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AnnulusTheory {
    /// Abelian Chern–Simons, `Ω^•[1] ⊗ g`.
    ChernSimons { lie_dim: usize },
    /// Abelian BF, `Ω^•[1] ⊗ (g ⊕ g*)`.
    Bf { lie_dim: usize },
    /// A mass term in the collar direction: radial 1-cochains are gapped out,
    /// leaving one independent value per radial vertex.
    Massive,
}

/// Grid used to refine the radial direction.
const RADIAL_STEP: f64 = 0.25;
const CIRCLE_VERTICES: usize = 4;

fn radial_vertices(lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    pts.extend(extra.iter().copied().filter(|&x| lo < x && x < hi));
    let mut k = (lo / RADIAL_STEP).floor() as i64 + 1;
    while (k as f64) * RADIAL_STEP < hi {
        pts.push(k as f64 * RADIAL_STEP);
        k += 1;
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    pts
}

fn radial_interval(pts: &[f64]) -> CochainComplex<Q> {
    let n = pts.len() - 1;
    let mut d = Matrix::zeros(n, n + 1);
    for e in 0..n {
        d[(e, e)] = -Q::one();
        d[(e, e + 1)] = Q::one();
    }
    let space = GradedVectorSpace::from_labels(BTreeMap::from([
        (0, pts.iter().map(|x| format!("r={x}")).collect()),
        (1, pts.windows(2).map(|w| format!("({},{})", w[0], w[1])).collect()),
    ]))
    .expect("distinct radii");
    CochainComplex::new(space, BTreeMap::from([(0, d)])).expect("shapes match")
}

/// Restriction from the radial interval on `big` to the one on `small`
/// (whose vertices are a subset): vertex values restrict, and a small edge
/// receives the sum over the big edges it covers.
fn radial_restriction(big: &[f64], small: &[f64]) -> (Matrix<Q>, Matrix<Q>) {
    let pos = |x: f64| big.iter().position(|&y| (y - x).abs() < 1e-12).expect("small vertex lies in big grid");
    let mut f0 = Matrix::zeros(small.len(), big.len());
    for (i, &x) in small.iter().enumerate() {
        f0[(i, pos(x))] = Q::one();
    }
    let mut f1 = Matrix::zeros(small.len() - 1, big.len() - 1);
    for i in 0..small.len() - 1 {
        for e in pos(small[i])..pos(small[i + 1]) {
            f1[(i, e)] = Q::one();
        }
    }
    (f0, f1)
}

fn copies(c: &CochainComplex<Q>, n: usize) -> CochainComplex<Q> {
    if n == 0 {
        return CochainComplex::discrete(GradedVectorSpace::new());
    }
    let internal =
        CochainComplex::discrete(GradedVectorSpace::from_labels(BTreeMap::from([(0, (0..n).map(|i| format!("g{i}")).collect())])).expect("distinct"));
    c.tensor(&internal).expect("tensor of finite complexes")
}

fn copies_map(f: &LinearMap<Q>, src: &CochainComplex<Q>, tgt: &CochainComplex<Q>, n: usize) -> LinearMap<Q> {
    let s = copies(src, n);
    let t = copies(tgt, n);
    let blocks = f.blocks().iter().map(|(p, m)| (*p, m.kron(&Matrix::identity(n)))).collect();
    LinearMap::new(s.space().clone(), t.space().clone(), 0, blocks).expect("shapes match")
}

/// Circle-by-interval model and the restriction map between two nested annuli.
pub struct AnnulusModels {
    pub big: CochainComplex<Q>,
    pub small: CochainComplex<Q>,
    pub restriction: LinearMap<Q>,
}

pub fn annulus_models(theory: AnnulusTheory, outer: AnnulusSet, inner: AnnulusSet) -> Result<AnnulusModels> {
    if !(outer.r <= inner.r && inner.big_r <= outer.big_r) {
        return domain("inner annulus must be contained in the outer one");
    }
    let big_pts = radial_vertices(outer.r, outer.big_r, &[inner.r, inner.big_r]);
    let small_pts = radial_vertices(inner.r, inner.big_r, &[]);
    let (f0, f1) = radial_restriction(&big_pts, &small_pts);
    let circle = cw_circle::<Q>(CIRCLE_VERTICES)?;
    let circle_id = LinearMap::identity(circle.space());

    let (radial_big, radial_small, radial_f) = match theory {
        AnnulusTheory::Massive => {
            let disc = |pts: &[f64]| {
                CochainComplex::discrete(
                    GradedVectorSpace::from_labels(BTreeMap::from([(0, pts.iter().map(|x| format!("r={x}")).collect())]))
                        .expect("distinct"),
                )
            };
            let (b, s) = (disc(&big_pts), disc(&small_pts));
            let f = LinearMap::new(b.space().clone(), s.space().clone(), 0, BTreeMap::from([(0, f0)]))?;
            (b, s, f)
        }
        _ => {
            let (b, s) = (radial_interval(&big_pts), radial_interval(&small_pts));
            let f = LinearMap::new(b.space().clone(), s.space().clone(), 0, BTreeMap::from([(0, f0), (1, f1)]))?;
            (b, s, f)
        }
    };
    let big = circle.tensor(&radial_big)?;
    let small = circle.tensor(&radial_small)?;
    let restriction = defectwb_algebra::tensor_maps(&circle_id, &radial_f, &big, &small)?;

    let fibre = match theory {
        AnnulusTheory::ChernSimons { lie_dim } => lie_dim,
        AnnulusTheory::Bf { lie_dim } => 2 * lie_dim,
        AnnulusTheory::Massive => 1,
    };
    let restriction = copies_map(&restriction, &big, &small, fibre);
    let big = copies(&big, fibre).shifted(1);
    let small = copies(&small, fibre).shifted(1);
    let restriction = LinearMap::new(
        big.space().clone(),
        small.space().clone(),
        0,
        restriction.blocks().iter().map(|(p, m)| (p - 1, m.clone())).collect(),
    )?;
    Ok(AnnulusModels { big, small, restriction })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AnnulusReport {
    pub quasi_iso: bool,
    pub big_cohomology: BTreeMap<i32, usize>,
    pub small_cohomology: BTreeMap<i32, usize>,
    pub big_cells: usize,
    pub small_cells: usize,
}

/// Builds both annulus models and checks that restriction is a quasi-isomorphism.
pub fn annulus_equivalence(theory: AnnulusTheory, outer: AnnulusSet, inner: AnnulusSet) -> Result<AnnulusReport> {
    let m = annulus_models(theory, outer, inner)?;
    let r = is_quasi_iso(&m.restriction, &m.big, &m.small)?;
    Ok(AnnulusReport {
        quasi_iso: r.ok,
        big_cohomology: r.source_dims,
        small_cohomology: r.target_dims,
        big_cells: m.big.space().total_dim(),
        small_cells: m.small.space().total_dim(),
    })
}

/// Cellular model of the boundary `S^{k−1} × D` of the blow-up along a
/// codimension-`k` flat `D ≅ R^{n−k}`.
#[derive(Debug, Clone)]
pub struct BlowupBoundary {
    pub n: usize,
    pub k: usize,
    pub sphere: CochainComplex<Q>,
    pub base: CochainComplex<Q>,
    pub model: CochainComplex<Q>,
}

impl BlowupBoundary {
    pub fn space(&self) -> &GradedVectorSpace {
        self.model.space()
    }
    pub fn cohomology_dims(&self) -> BTreeMap<i32, usize> {
        cohomology(&self.model).nonzero_dims()
    }
}

pub fn blowup_boundary(n: usize, k: usize) -> Result<BlowupBoundary> {
    if k == 0 {
        return domain("codimension k must be at least 1");
    }
    if k > n {
        return domain(format!("codimension {k} exceeds ambient dimension {n}"));
    }
    let sphere = SimplicialComplex::sphere_boundary(k)?.cochain_complex::<Q>();
    let base = cw_cube::<Q>(n - k)?;
    let model = sphere.tensor(&base)?;
    Ok(BlowupBoundary { n, k, sphere, base, model })
}
