mod common;

use std::collections::BTreeMap;

use defectwb_algebra::cellular::{cw_circle, cw_cube, cw_interval, SimplicialComplex};
use defectwb_algebra::{
    check_chain_map, check_d_squared, cohomology, is_quasi_iso, CochainComplex, GradedVectorSpace, LinearMap, Matrix,
    Scalar, C64, Q,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dims(c: &CochainComplex<Q>) -> Vec<usize> {
    let h = cohomology(c);
    let top = c.space().degrees().into_iter().max().unwrap_or(0);
    (0..=top).map(|p| h.dim(p)).collect()
}

#[test]
fn two_vertex_circle_squares_to_zero() {
    let c = cw_circle::<Q>(2).unwrap();
    let r = check_d_squared(&c).unwrap();
    assert!(r.ok);
    // Hand-written boundary: each edge runs between the two vertices.
    let expected = Matrix::<Q>::from_i64_rows(&[&[-1, 1], &[1, -1]]);
    assert_eq!(c.d(0), expected);
}

#[test]
fn injected_identity_composite_is_flagged() {
    let space = GradedVectorSpace::from_dims(&[(0, 1), (1, 1), (2, 1)]);
    let one = Matrix::<Q>::identity(1);
    let c = CochainComplex::new(space, BTreeMap::from([(0, one.clone()), (1, one)])).unwrap();
    let r = check_d_squared(&c).unwrap();
    assert!(!r.ok);
    assert_eq!(r.offending, vec![0]);
    assert_eq!(r.residuals[&0], 1.0);
}

#[test]
fn basic_cohomology_dimensions() {
    assert_eq!(dims(&cw_circle(2).unwrap()), vec![1, 1]);
    assert_eq!(dims(&cw_circle(1).unwrap()), vec![1, 1]);
    assert_eq!(dims(&cw_interval(6).unwrap()), vec![1, 0]);
    assert_eq!(dims(&cw_cube(3).unwrap()), vec![1, 0, 0, 0]);

    let space = GradedVectorSpace::from_dims(&[(0, 2), (1, 2)]);
    let acyclic = CochainComplex::new(space, BTreeMap::from([(0, Matrix::<Q>::identity(2))])).unwrap();
    assert_eq!(cohomology(&acyclic).total_dim(), 0);
}

#[test]
fn simplicial_models_have_expected_betti_numbers() {
    let s2 = SimplicialComplex::sphere_boundary(3).unwrap().cochain_complex::<Q>();
    assert_eq!(dims(&s2), vec![1, 0, 1]);
    let s0 = SimplicialComplex::sphere_boundary(1).unwrap().cochain_complex::<Q>();
    assert_eq!(dims(&s0), vec![2]);
    let annulus = SimplicialComplex::annulus(4, 3).unwrap().cochain_complex::<Q>();
    assert_eq!(dims(&annulus), vec![1, 1, 0]);
    let circle = SimplicialComplex::circle(5).unwrap().cochain_complex::<Q>();
    assert_eq!(dims(&circle), vec![1, 1]);
}

#[test]
fn cup_product_satisfies_leibniz_on_annulus() {
    let x = SimplicialComplex::annulus(4, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, q) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)] {
        let f = common::random_matrix(&mut rng, x.count(p), 1).column(0);
        let g = common::random_matrix(&mut rng, x.count(q), 1).column(0);
        let lhs = x.coboundary::<Q>(p + q).apply(&x.cup(p, &f, q, &g));
        let df = x.coboundary::<Q>(p).apply(&f);
        let dg = x.coboundary::<Q>(q).apply(&g);
        let a = x.cup(p + 1, &df, q, &g);
        let b = x.cup(p, &f, q + 1, &dg);
        let sign = if p % 2 == 0 { Q::one() } else { -Q::one() };
        for i in 0..lhs.len() {
            assert_eq!(lhs[i], a[i].clone() + sign.clone() * b[i].clone(), "p={p} q={q} simplex {i}");
        }
    }
}

/// Restriction of cochains from a path with `big` cells to the subpath of
/// `small` cells starting at vertex `start`.
fn restriction(big: usize, small: usize, start: usize) -> (CochainComplex<Q>, CochainComplex<Q>, LinearMap<Q>) {
    let a = cw_interval::<Q>(big).unwrap();
    let b = cw_interval::<Q>(small).unwrap();
    let f0 = Matrix::from_fn(small + 1, big + 1, |i, j| if j == start + i { Q::one() } else { Q::zero() });
    let f1 = Matrix::from_fn(small, big, |i, j| if j == start + i { Q::one() } else { Q::zero() });
    let f = LinearMap::new(a.space().clone(), b.space().clone(), 0, BTreeMap::from([(0, f0), (1, f1)])).unwrap();
    (a, b, f)
}

#[test]
fn interval_restriction_is_quasi_iso() {
    let (a, b, f) = restriction(6, 2, 2);
    check_chain_map(&f, &a, &b).unwrap();
    let r = is_quasi_iso(&f, &a, &b).unwrap();
    assert!(r.ok);
    assert_eq!(r.source_dims, BTreeMap::from([(0, 1)]));
    let cone = CochainComplex::cone(&f, &a, &b).unwrap();
    assert!(check_d_squared(&cone).unwrap().ok);
    assert_eq!(cohomology(&cone).total_dim(), 0);
}

#[test]
fn zero_map_is_not_quasi_iso() {
    let a = cw_circle::<Q>(3).unwrap();
    let f = LinearMap::zero(a.space().clone(), a.space().clone(), 0);
    assert!(!is_quasi_iso(&f, &a, &a).unwrap().ok);
}

#[test]
fn non_chain_map_is_a_structural_error() {
    let a = cw_interval::<Q>(2).unwrap();
    let mut blocks = BTreeMap::new();
    blocks.insert(0, Matrix::<Q>::identity(3));
    let f = LinearMap::new(a.space().clone(), a.space().clone(), 0, blocks).unwrap();
    assert!(is_quasi_iso(&f, &a, &a).is_err());
}

#[test]
fn tensor_of_circles_is_torus() {
    let c = cw_circle::<Q>(2).unwrap();
    let t = c.tensor(&c).unwrap();
    assert!(check_d_squared(&t).unwrap().ok);
    assert_eq!(dims(&t), vec![1, 2, 1]);
}

#[test]
fn shifted_complex_moves_cohomology() {
    let c = cw_circle::<Q>(3).unwrap().shifted(1);
    let h = cohomology(&c);
    assert_eq!((h.dim(-1), h.dim(0)), (1, 1));
}

#[test]
fn json_round_trip() {
    let c = cw_circle::<Q>(3).unwrap();
    let back = CochainComplex::<Q>::from_json(&c.to_json()).unwrap();
    assert_eq!(c, back);
    let n = cw_circle::<C64>(3).unwrap();
    let back = CochainComplex::<C64>::from_json(&n.to_json()).unwrap();
    assert_eq!(n, back);
    assert!(CochainComplex::<C64>::from_json(&c.to_json()).is_err());
}

#[test]
fn numeric_cohomology_matches_exact() {
    let exact = SimplicialComplex::annulus(5, 3).unwrap().cochain_complex::<Q>();
    let numeric = SimplicialComplex::annulus(5, 3).unwrap().cochain_complex::<C64>();
    let (he, hn) = (cohomology(&exact), cohomology(&numeric));
    assert_eq!(he.dims, hn.dims);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cohomology_is_invariant_under_change_of_basis(seed in any::<u64>(), n0 in 0usize..5, n1 in 0usize..6, n2 in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = common::random_complex(&mut rng, [n0, n1, n2]);
        prop_assert!(check_d_squared(&c).unwrap().ok);
        let p: Vec<Matrix<Q>> = [n0, n1, n2].iter().map(|&n| common::random_invertible(&mut rng, n)).collect();
        let pinv: Vec<Matrix<Q>> = p.iter().map(|m| m.inverse(0.0).unwrap()).collect();
        let blocks = BTreeMap::from([
            (0, p[1].mul(&c.d(0)).mul(&pinv[0])),
            (1, p[2].mul(&c.d(1)).mul(&pinv[1])),
        ]);
        let conj = CochainComplex::new(c.space().clone(), blocks).unwrap();
        prop_assert_eq!(cohomology(&c).dims, cohomology(&conj).dims);
        // Rank–nullity oracle.
        let h = cohomology(&c);
        let (r0, r1) = (c.d(0).rank(0.0), c.d(1).rank(0.0));
        prop_assert_eq!(h.dim(0), n0 - r0);
        prop_assert_eq!(h.dim(1), n1 - r1 - r0);
        prop_assert_eq!(h.dim(2), n2 - r1);
    }

    #[test]
    fn quasi_iso_agrees_with_cone_acyclicity(seed in any::<u64>(), a in prop::array::uniform3(0usize..5), b in prop::array::uniform3(0usize..5)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ca = common::random_complex(&mut rng, a);
        let cb = common::random_complex(&mut rng, b);
        let f = common::random_chain_map(&mut rng, &ca, &cb);
        let report = is_quasi_iso(&f, &ca, &cb).unwrap();
        let cone = CochainComplex::cone(&f, &ca, &cb).unwrap();
        prop_assert!(check_d_squared(&cone).unwrap().ok);
        prop_assert_eq!(report.ok, cohomology(&cone).total_dim() == 0);
    }

    #[test]
    fn identity_and_basis_change_maps_are_quasi_isos(seed in any::<u64>(), n in prop::array::uniform3(0usize..5)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = common::random_complex(&mut rng, n);
        let id = LinearMap::identity(c.space());
        prop_assert!(is_quasi_iso(&id, &c, &c).unwrap().ok);
    }
}
