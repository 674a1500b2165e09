use defectwb_algebra::cellular::SimplicialComplex;
use defectwb_algebra::{q, qi, Matrix, Scalar, Q, QI};
use defectwb_core::gauge::*;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn sl2_matrix(x: [f64; 3]) -> CMatrix {
    let rep = Representation::sl2_standard();
    rep.matrices.iter().zip(x).fold(CMatrix::zeros(2, 2), |acc, (m, a)| acc + to_complex(m) * c(a, 0.0))
}

/// Ordered exponential by many fourth-order Taylor steps.
fn taylor_holonomy(segments: &[(CMatrix, f64)], steps: usize) -> CMatrix {
    let n = segments[0].0.nrows();
    let mut out = CMatrix::identity(n, n);
    for (a, len) in segments {
        let h = a * c(len / steps as f64, 0.0);
        let h2 = &h * &h;
        let h3 = &h2 * &h;
        let h4 = &h3 * &h;
        let step = CMatrix::identity(n, n) + &h + h2 * c(0.5, 0.0) + h3 * c(1.0 / 6.0, 0.0) + h4 * c(1.0 / 24.0, 0.0);
        for _ in 0..steps {
            out = &step * out;
        }
    }
    out
}

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

#[test]
fn killing_form_matches_ad_traces() {
    let g = LieAlgebra::sl2();
    let ad = |i: usize| Matrix::from_fn(3, 3, |r, col| g.structure(i, col)[r].clone());
    let kappa = g.kappa().unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let m = ad(i).mul(&ad(j));
            let tr = (0..3).fold(Q::zero(), |acc, k| acc + m[(k, k)].clone());
            assert_eq!(kappa[(i, j)], tr);
        }
    }
    assert!(Representation::sl2_standard().module_failure(&g).is_none());
}

#[test]
fn jacobi_violation_is_rejected() {
    let bad = LieAlgebra::new("bad", &["a", "b", "c"], &[(0, 1, vec![(1, qi(1))]), (1, 2, vec![(0, qi(1))])], None);
    assert!(bad.is_err());
    assert!(LieAlgebra::by_name("abelian4").unwrap().dim() == 4);
    assert!(LieAlgebra::by_name("so3").is_err());
}

#[test]
fn zero_connection_has_trivial_monodromy() {
    let c0 = LoopConnection::new(vec![(CMatrix::zeros(2, 2), 1.0), (CMatrix::zeros(2, 2), 2.5)]).unwrap();
    assert_eq!(monodromy(&c0), CMatrix::identity(2, 2));
}

#[test]
fn abelian_holonomy_closed_form() {
    let rep = Representation::u1_weight(1);
    for (a, l) in [(0.7, 1.0), (1.3, 2.0), (-0.4, 6.0)] {
        let loop_ = LoopConnection::from_coefficients(&rep, &[(vec![a], l / 3.0), (vec![a], 2.0 * l / 3.0)]).unwrap();
        let m = monodromy(&loop_);
        assert!((m[(0, 0)] - c(0.0, a * l).exp()).norm() < 1e-10);
    }
}

#[test]
fn sl2_two_segments_against_taylor_product() {
    let segs = vec![(sl2_matrix([0.3, 1.1, -0.2]), 0.8), (sl2_matrix([-0.5, 0.0, 0.9]), 1.4)];
    let m = monodromy(&LoopConnection::new(segs.clone()).unwrap());
    assert!(max_diff(&m, &taylor_holonomy(&segs, 500)) < 1e-8);
    // SL2: det = 1.
    assert!((m.determinant() - c(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn invalid_loops_are_rejected() {
    assert!(LoopConnection::new(vec![]).is_err());
    assert!(LoopConnection::new(vec![(CMatrix::zeros(2, 3), 1.0)]).is_err());
    assert!(LoopConnection::new(vec![(CMatrix::zeros(2, 2), 1.0), (CMatrix::zeros(3, 3), 1.0)]).is_err());
    assert!(LoopConnection::new(vec![(CMatrix::zeros(2, 2), 0.0)]).is_err());
    assert!(conjugacy_invariants(&CMatrix::zeros(2, 3)).is_err());
}

#[test]
fn characteristic_polynomial_examples() {
    let id = conjugacy_invariants(&CMatrix::identity(2, 2)).unwrap();
    let expect = [1.0, -2.0, 1.0];
    for (a, b) in id.iter().zip(expect) {
        assert!((a - c(b, 0.0)).norm() < 1e-14);
    }
    let d = CMatrix::from_diagonal(&DVector::from_vec(vec![c(2.0, 0.0), c(0.5, 0.0)]));
    let inv = conjugacy_invariants(&d).unwrap();
    assert!((inv[1] + c(2.5, 0.0)).norm() < 1e-14);
    assert!((inv[2] - c(1.0, 0.0)).norm() < 1e-14);
    // 2×2 oracle: λ² − tr λ + det.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = random_matrix(&mut rng, 2);
    let inv = conjugacy_invariants(&g).unwrap();
    assert!((inv[1] + g.trace()).norm() < 1e-12);
    assert!((inv[2] - g.determinant()).norm() < 1e-12);
}

#[test]
fn invariants_survive_random_gauge_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let segs: Vec<(CMatrix, f64)> = (0..4).map(|_| (random_matrix(&mut rng, 3), rng.gen_range(0.1..1.0))).collect();
        let loop_ = LoopConnection::new(segs).unwrap();
        let h = random_matrix(&mut rng, 3) + CMatrix::identity(3, 3) * c(2.0, 0.0);
        let m = monodromy(&loop_);
        let mh = monodromy(&loop_.conjugated(&h).unwrap());
        let hinv = h.clone().try_inverse().unwrap();
        assert!(max_diff(&mh, &(&h * &m * &hinv)) < 1e-8);
        let (a, b) = (conjugacy_invariants(&m).unwrap(), conjugacy_invariants(&mh).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-8);
        }
    }
}

#[test]
fn midpoint_holonomy_converges_at_second_order() {
    let tau = std::f64::consts::TAU;
    let a = |s: f64| sl2_matrix([(tau * s).cos(), (2.0 * tau * s).sin(), 0.3 * s]);
    let rep = refinement_study(&a, 1.0, 1..=6, 12).unwrap();
    assert!(rep.order >= 1.9, "order {} errors {:?}", rep.order, rep.errors);
    assert!(rep.errors.windows(2).all(|w| w[1] < w[0]));
    // Subdividing a piecewise-constant loop changes nothing.
    let lc = sample_midpoints(&a, 1.0, 4).unwrap();
    assert!(max_diff(&monodromy(&lc), &monodromy(&lc.subdivided(8))) < 1e-12);
}

#[test]
fn conjugation_study_and_trig_connection() {
    let std = Representation::sl2_standard();
    let loop_ = LoopConnection::from_coefficients(&std, &[(vec![0.2, 0.5, -0.3], 1.0), (vec![1.0, 0.0, 0.4], 0.5)]).unwrap();
    let r = conjugation_study(&loop_, 20, 5).unwrap();
    assert!(r.holonomy_residual < 1e-8 && r.invariant_residual < 1e-8, "{r:?}");
    // det of an SL2 holonomy is 1.
    assert!((r.invariants[2][0] - 1.0).abs() < 1e-12 && r.invariants[2][1].abs() < 1e-12);
    let tau = std::f64::consts::TAU;
    let a = trig_connection(&std, &[[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 0.3]]).unwrap();
    let s = 0.37;
    assert!(max_abs(&(a(s) - sl2_matrix([(tau * s).cos(), (2.0 * tau * s).sin(), 0.3 * s]))) < 1e-15);
    assert!(trig_connection(&std, &[[0.0; 4]]).is_err());
}

#[test]
fn wilson_loop_examples() {
    let g = LieAlgebra::sl2();
    let triv = Representation::trivial(&g, 3);
    let w = wilson_loop(&triv, &[(vec![0.4, 1.0, -2.0], 1.0)]).unwrap();
    assert!((w - c(3.0, 0.0)).norm() < 1e-14);
    let w3 = wilson_loop(&Representation::u1_weight(3), &[(vec![0.7], 1.0)]).unwrap();
    assert!((w3 - c(0.0, 2.1).exp()).norm() < 1e-10);
    // Gauge invariance of the trace.
    let std = Representation::sl2_standard();
    let loop_ = LoopConnection::from_coefficients(&std, &[(vec![0.2, 0.5, -0.3], 1.0), (vec![1.0, 0.0, 0.4], 0.5)]).unwrap();
    let h = sl2_matrix([0.3, 0.7, 0.1]).exp();
    let t1 = monodromy(&loop_).trace();
    let t2 = monodromy(&loop_.conjugated(&h).unwrap()).trace();
    assert!((t1 - t2).norm() < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wilson_characters_multiply(n in -6i64..=6, fluxes in proptest::collection::vec(-2.0f64..2.0, 1..4)) {
        let segs: Vec<(Vec<f64>, f64)> = fluxes.iter().map(|f| (vec![*f], 0.5)).collect();
        let wn = wilson_loop(&Representation::u1_weight(n), &segs).unwrap();
        let w1 = wilson_loop(&Representation::u1_weight(1), &segs).unwrap();
        prop_assert!((wn - w1.powi(n as i32)).norm() < 1e-10);
    }

    #[test]
    fn graph_lagrangians_for_any_slope(num in -8i64..=8, den in 1i64..=4) {
        let g = LieAlgebra::sl2();
        let l = bf_lagrangian_graph(&g, &q(num, den), g.kappa().unwrap()).unwrap();
        prop_assert_eq!(l.dim, 3);
        prop_assert!(l.report.strict_self_perp);
    }
}

#[test]
fn bf_graph_family() {
    let g = LieAlgebra::sl2();
    for s in -2..=2 {
        let l = bf_lagrangian_graph(&g, &qi(s), g.kappa().unwrap()).unwrap();
        assert_eq!(l.dim, 3);
        assert!(l.report.strict_self_perp, "s = {s}");
        assert_eq!(l.summary("x").ambient_dim, 6);
    }
    let ab = LieAlgebra::abelian(4);
    assert!(bf_lagrangian_graph(&ab, &qi(3), ab.kappa().unwrap()).unwrap().report.strict_self_perp);
    // Non-symmetric pairing breaks isotropy.
    let skewed = Matrix::from_fn(3, 3, |i, j| if i <= j { qi(1) } else { Q::zero() });
    assert!(!bf_lagrangian_graph(&g, &qi(1), &skewed).unwrap().report.isotropic);
    assert!(bf_lagrangian_graph(&g, &qi(1), &Matrix::zeros(3, 3)).is_err());
}

#[test]
fn bf_subalgebra_family() {
    let g = LieAlgebra::sl2();
    for name in ["zero", "cartan", "borel", "full"] {
        let l = bf_lagrangian_subalgebra(&g, &sl2_subalgebra(name).unwrap()).unwrap();
        assert_eq!(l.dim, 3, "{name}");
        assert!(l.report.strict_self_perp, "{name}");
    }
    let ef = vec![vec![qi(0), qi(1), qi(0)], vec![qi(0), qi(0), qi(1)]];
    let err = bf_lagrangian_subalgebra(&g, &ef).unwrap_err().to_string();
    assert!(err.contains("not a subalgebra"), "{err}");
    let heis = LieAlgebra::heisenberg();
    for basis in [vec![], vec![vec![qi(0), qi(0), qi(1)]], vec![vec![qi(1), qi(0), qi(0)], vec![qi(0), qi(0), qi(1)]]] {
        let l = bf_lagrangian_subalgebra(&heis, &basis).unwrap();
        assert_eq!(l.dim, 3);
        assert!(l.report.strict_self_perp);
    }
}

fn annulus_fields(cx: &SimplicialComplex, dim: usize) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    (vec![vec![Q::zero(); dim]; cx.count(1)], vec![vec![Q::zero(); dim]; cx.count(0)])
}

#[test]
fn bf_equations_of_motion() {
    let cx = SimplicialComplex::annulus(4, 3).unwrap();
    let g = LieAlgebra::sl2();
    let (a, mut b) = annulus_fields(&cx, 3);
    for v in &mut b {
        *v = vec![qi(1), qi(2), qi(-1)];
    }
    let r = eom_residuals_bf(&cx, &g, &a, &b).unwrap();
    assert_eq!((r.curvature, r.covariant_b), (0.0, 0.0));

    // Flat abelian connection with monodromy.
    let w = winding_cocycle(&cx).unwrap();
    let ab = LieAlgebra::abelian(1);
    let a1: Vec<Vec<Q>> = w.iter().map(|x| vec![x.clone()]).collect();
    let b1 = vec![vec![Q::zero()]; cx.count(0)];
    let r = eom_residuals_bf(&cx, &ab, &a1, &b1).unwrap();
    assert_eq!((r.curvature, r.covariant_b), (0.0, 0.0));
    // The cocycle is not exact: it pairs nontrivially with the loop around the hole.
    let around: Q = (0..4).map(|i| {
        let e = [i, (i + 1) % 4];
        let (lo, hi) = (e[0].min(e[1]), e[0].max(e[1]));
        let sign = if lo == e[0] { qi(1) } else { qi(-1) };
        sign * w[cx.position(&[lo, hi]).unwrap()].clone()
    }).fold(Q::zero(), |x, y| x + y);
    assert!(!around.is_exact_zero());

    // Along the Cartan direction the same cocycle stays flat in sl2.
    let ah: Vec<Vec<Q>> = w.iter().map(|x| vec![x.clone(), Q::zero(), Q::zero()]).collect();
    let r = eom_residuals_bf(&cx, &g, &ah, &annulus_fields(&cx, 3).1).unwrap();
    assert_eq!(r.curvature, 0.0);

    let mut bad = a1.clone();
    bad[0][0] += qi(1);
    assert!(eom_residuals_bf(&cx, &ab, &bad, &b1).unwrap().curvature > 0.0);
    // A non-covariantly-constant B.
    let mut bb = b1.clone();
    bb[0][0] = q(1, 2);
    assert!(eom_residuals_bf(&cx, &ab, &a1, &bb).unwrap().covariant_b > 0.0);
    assert!(eom_residuals_bf(&cx, &ab, &a1[1..].to_vec(), &b1).is_err());
}

#[test]
fn truncated_forms_are_acyclic_above_degree_zero() {
    for (n, cap) in [(1, 3), (2, 2), (3, 2)] {
        let f = TruncatedForms::new(n, cap).unwrap();
        // d² = 0 and d preserves weight, so counting per degree gives the Euler characteristic.
        for i in 0..f.dim() {
            let mut acc = std::collections::BTreeMap::new();
            for (c1, k) in f.d(i) {
                for (c2, l) in f.d(k) {
                    *acc.entry(l).or_insert(0) += c1 * c2;
                }
            }
            assert!(acc.values().all(|&v| v == 0));
        }
        let chi: i64 = (0..f.dim()).map(|i| if f.degree(i) % 2 == 0 { 1 } else { -1 }).sum();
        assert_eq!(chi, 1, "n = {n}, cap = {cap}");
    }
}

#[test]
fn coupled_algebras_satisfy_jacobi() {
    for n in [-2, 0, 1, 3] {
        let (_, d) = coupled_dgla(&LieAlgebra::u1(), &Representation::u1_charge(n), Parity::Even, 4, 2).unwrap();
        assert!(d.jacobi.passed, "n = {n}: {:?}", d.jacobi.first_failure);
    }
    let g = LieAlgebra::sl2();
    for parity in [Parity::Odd, Parity::Even] {
        let (dg, d) = coupled_dgla(&g, &Representation::sl2_standard(), parity, 3, 1).unwrap();
        assert!(d.jacobi.passed, "{:?}", d.jacobi.first_failure);
        assert!(!d.trivial && d.module_failure.is_none());
        assert_eq!(dg.defect_len(), 3 * 2);
    }
    let (dg, d) = coupled_dgla(&g, &Representation::trivial(&g, 0), Parity::Odd, 3, 1).unwrap();
    assert!(d.trivial && d.jacobi.passed);
    assert_eq!(dg.defect_len(), 0);
}

#[test]
fn u1_bracket_matches_the_charge() {
    let (dg, _) = coupled_dgla(&LieAlgebra::u1(), &Representation::u1_charge(5), Parity::Even, 1, 0).unwrap();
    // Basis: 1⊗1 (bulk), 1⊗v0 (defect).
    assert_eq!(dg.bracket_basis(0, 1), &[(1, QI::from_i64(5))]);
    assert_eq!(dg.bracket_basis(1, 0), &[(1, QI::from_i64(-5))]);
    assert!(dg.bracket_basis(1, 1).is_empty());
}

#[test]
fn wrong_action_breaks_jacobi() {
    let g = LieAlgebra::sl2();
    let mut rep = Representation::sl2_standard();
    rep.matrices[1][(0, 1)] = QI::from_i64(2);
    let (_, d) = coupled_dgla(&g, &rep, Parity::Odd, 3, 1).unwrap();
    assert!(d.module_failure.is_some());
    assert!(!d.jacobi.passed);
    assert_eq!(d.jacobi.first_failure.as_ref().map(Vec::len), Some(3));
}

fn constant_fields(n: usize, h: f64, v: &[f64], a: &DMatrix<f64>) -> LineFields {
    LineFields { spacing: h, psi: vec![DVector::from_row_slice(v); n], connection: vec![a.clone(); n] }
}

#[test]
fn minimal_coupling_examples() {
    let skew = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    let zero = DMatrix::zeros(2, 2);
    let f = constant_fields(11, 0.1, &[0.0, 0.0], &zero);
    assert_eq!(minimal_coupling_action(&f, &skew, Parity::Odd).unwrap(), 0.0);
    let f = constant_fields(11, 0.1, &[1.0, 2.0], &zero);
    assert!(minimal_coupling_action(&f, &skew, Parity::Odd).unwrap().abs() < 1e-14);
    let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let f = constant_fields(21, 0.15, &[1.0, 2.0], &a);
    // L · (v, A v) with L = 20 · 0.15.
    let s = minimal_coupling_action(&f, &skew, Parity::Odd).unwrap();
    assert!((s - 3.0 * -4.0).abs() < 1e-10, "{s}");
    assert!(minimal_coupling_action(&f, &DMatrix::identity(2, 2), Parity::Odd).is_err());
    let mut short = f.clone();
    short.connection.pop();
    assert!(minimal_coupling_action(&short, &skew, Parity::Odd).is_err());
}

#[test]
fn minimal_coupling_quadrature_of_a_rotating_field() {
    // ψ = (cos s, sin s): (ψ, ψ') = 1 for the skew pairing, so S = L.
    let skew = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    let n = 401;
    let h = 2.0 / (n - 1) as f64;
    let psi = (0..n).map(|i| {
        let s = i as f64 * h;
        DVector::from_row_slice(&[s.cos(), s.sin()])
    }).collect();
    let f = LineFields { spacing: h, psi, connection: vec![DMatrix::zeros(2, 2); n] };
    let s = minimal_coupling_action(&f, &skew, Parity::Odd).unwrap();
    assert!((s - 2.0).abs() < 1e-4, "{s}");
}
