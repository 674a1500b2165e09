use defectwb_algebra::{q, qi, Matrix, Scalar, Q};
use defectwb_core::collapse::{make_profile, OpenSet1D};
use defectwb_core::fact_line::*;
use proptest::prelude::*;

fn plane() -> SymplecticVS {
    SymplecticVS::darboux(1)
}

fn w(e: &[u32]) -> WeylElement {
    WeylElement::monomial(e.to_vec())
}

fn poly(n: usize, terms: &[(&[u32], HPoly)]) -> Poly {
    terms.iter().fold(Poly::zero(n), |acc, (e, c)| acc.add(&Poly::term(n, e.to_vec(), c.clone())))
}

fn h(c: i64, k: usize) -> HPoly {
    HPoly::monomial(qi(c), k)
}

/// Matrix model on polynomials in `q` of degree `< size` at a fixed value of
/// ħ: `q` multiplies, `p` is `ħ d/dq`.
struct Oracle {
    size: usize,
    hbar: Q,
}

impl Oracle {
    fn q(&self) -> Matrix<Q> {
        Matrix::from_fn(self.size, self.size, |r, c| if r == c + 1 { Q::one() } else { Q::zero() })
    }
    fn p(&self) -> Matrix<Q> {
        Matrix::from_fn(self.size, self.size, |r, c| if c == r + 1 { qi(c as i64) * self.hbar.clone() } else { Q::zero() })
    }
    fn pow(m: &Matrix<Q>, k: u32) -> Matrix<Q> {
        (0..k).fold(Matrix::identity(m.rows()), |acc, _| acc.mul(m))
    }
    /// Image of a normal-ordered element under `q^i p^j ↦ P^j Q^i`.
    fn rho(&self, a: &Poly) -> Matrix<Q> {
        let mut out = Matrix::zeros(self.size, self.size);
        for (e, c) in a.terms() {
            let m = Self::pow(&self.p(), e[1]).mul(&Self::pow(&self.q(), e[0]));
            out = out.add(&m.scale(&c.eval(&self.hbar)));
        }
        out
    }
    /// Operator `q^i (ħ d/dq)^j` read left to right.
    fn operator(&self, a: &Poly) -> Matrix<Q> {
        let mut out = Matrix::zeros(self.size, self.size);
        for (e, c) in a.terms() {
            let m = Self::pow(&self.q(), e[0]).mul(&Self::pow(&self.p(), e[1]));
            out = out.add(&m.scale(&c.eval(&self.hbar)));
        }
        out
    }
}

/// Restricts a matrix to its action on polynomials of degree `≤ d`.
fn low(m: &Matrix<Q>, d: usize) -> Matrix<Q> {
    m.submatrix(0..m.rows(), 0..d + 1)
}

#[test]
fn canonical_commutator_and_unit() {
    let v = plane();
    let c = weyl_commutator(&v, &w(&[1, 0]), &w(&[0, 1]), 6);
    assert_eq!(c.poly, Poly::constant(2, HPoly::monomial(Q::one(), 1)));
    let x = WeylElement::new(poly(2, &[(&[2, 1], h(3, 0)), (&[0, 2], h(1, 2))]));
    assert_eq!(weyl_mul(&v, &WeylElement::one(2), &x, 6), x);
    assert_eq!(weyl_mul(&v, &x, &WeylElement::one(2), 6), x);
}

#[test]
fn q2_p2_product_and_its_operator_image() {
    let v = plane();
    let prod = weyl_mul(&v, &w(&[2, 0]), &w(&[0, 2]), 6);
    // Already normal ordered.
    assert_eq!(prod.poly, poly(2, &[(&[2, 2], h(1, 0))]));
    // The reversed product picks up the contractions.
    let rev = weyl_mul(&v, &w(&[0, 2]), &w(&[2, 0]), 6);
    assert_eq!(rev.poly, poly(2, &[(&[2, 2], h(1, 0)), (&[1, 1], h(-4, 1)), (&[0, 0], h(2, 2))]));
    // Under q ↦ q, p ↦ ħ d/dq (an anti-representation) the image of q²p² is the
    // operator q²p² + 4ħ qp + 2ħ² in left-to-right operator order.
    let o = Oracle { size: 9, hbar: q(3, 2) };
    let expected = poly(2, &[(&[2, 2], h(1, 0)), (&[1, 1], h(4, 1)), (&[0, 0], h(2, 2))]);
    assert_eq!(low(&o.rho(&prod.poly), 4), low(&o.operator(&expected), 4));
}

#[test]
fn cap_sets_truncation_flag() {
    let v = plane();
    let r = weyl_mul(&v, &w(&[3, 1]), &w(&[2, 1]), 6);
    assert!(r.truncated);
    assert!(r.poly.max_degree() <= 6);
    assert!(!weyl_mul(&v, &w(&[2, 1]), &w(&[2, 1]), 6).truncated);
}

#[test]
fn fock_examples() {
    let v = plane();
    let l = LagrangianSubspace::from_labels(&v, &["q"]).unwrap();
    let f = FockSpace::new(&v, &l).unwrap();
    assert_eq!(f.position_names(), vec!["q".to_string()]);
    let vac = f.vacuum();
    assert!(fock_act(&f, &vac, &w(&[0, 1]), Side::Right, 6).poly.is_zero());
    assert!(fock_act(&f, &vac, &w(&[0, 1]), Side::Left, 6).poly.is_zero());
    let u = FockVector::new(poly(1, &[(&[3], h(2, 0)), (&[1], h(1, 1))]));
    assert_eq!(fock_act(&f, &u, &WeylElement::one(2), Side::Right, 6).poly, u.poly);
    // q · (qp) against the matrix model: right action by a word is P Q applied.
    let qv = FockVector::new(Poly::var(1, 0));
    let got = fock_act(&f, &qv, &w(&[1, 1]), Side::Right, 6);
    assert_eq!(got.poly, poly(1, &[(&[1], h(2, 1))]));
    let o = Oracle { size: 7, hbar: q(5, 3) };
    let m = o.p().mul(&o.q());
    let image = m.apply(&[Q::zero(), Q::one(), Q::zero(), Q::zero(), Q::zero(), Q::zero(), Q::zero()]);
    let ours = got.poly.eval_hbar(&o.hbar);
    for (k, c) in image.iter().enumerate() {
        assert_eq!(ours.coeff(&[k as u32]).coeff(0), c.clone());
    }
}

#[test]
fn fock_graded_dims_match_symmetric_powers() {
    let v = SymplecticVS::darboux(2);
    let l = LagrangianSubspace::from_labels(&v, &["q1", "q2"]).unwrap();
    let f = FockSpace::new(&v, &l).unwrap();
    for d in 0..=6u32 {
        assert_eq!(f.graded_dim(d), d as usize + 1);
    }
    let v3 = SymplecticVS::darboux(3);
    let f3 = FockSpace::new(&v3, &LagrangianSubspace::from_labels(&v3, &["p1", "p2", "p3"]).unwrap()).unwrap();
    for d in 0..=6u32 {
        assert_eq!(f3.graded_dim(d), ((d + 1) * (d + 2) / 2) as usize);
    }
}

#[test]
fn non_lagrangian_is_rejected() {
    let v = SymplecticVS::darboux(2);
    assert!(LagrangianSubspace::from_labels(&v, &["q1", "p1"]).is_err());
    assert!(LagrangianSubspace::from_labels(&v, &["q1"]).is_err());
    assert!(LagrangianSubspace::from_labels(&v, &["x"]).is_err());
}

/// A Lagrangian that is not a coordinate subspace: span(q1 + p2, q2 + p1).
fn tilted(v: &SymplecticVS) -> LagrangianSubspace {
    let e = |xs: [i64; 4]| xs.iter().map(|&x| qi(x)).collect::<Vec<Q>>();
    LagrangianSubspace::new(v, vec![e([1, 0, 0, 1]), e([0, 1, 1, 0])]).unwrap()
}

fn small_monomial(n: usize) -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(0u32..=1, n)
}

proptest! {
    #[test]
    fn weyl_associative(a in proptest::collection::vec(0u32..=2, 4), b in small_monomial(4), c in small_monomial(4)) {
        let v = SymplecticVS::darboux(2);
        let (a, b, c) = (w(&a), w(&b), w(&c));
        let left = weyl_mul(&v, &weyl_mul(&v, &a, &b, 16), &c, 16);
        let right = weyl_mul(&v, &a, &weyl_mul(&v, &b, &c, 16), 16);
        prop_assert!(!left.truncated && !right.truncated);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn matrix_model_is_an_anti_representation(a in proptest::collection::vec(0u32..=2, 2), b in proptest::collection::vec(0u32..=2, 2)) {
        let v = plane();
        let o = Oracle { size: 12, hbar: q(-2, 7) };
        let prod = weyl_mul(&v, &w(&a), &w(&b), 12);
        let lhs = low(&o.rho(&prod.poly), 4);
        let rhs = low(&o.rho(&w(&b).poly).mul(&o.rho(&w(&a).poly)), 4);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fock_is_a_module_on_both_sides(a in small_monomial(4), b in small_monomial(4), u in proptest::collection::vec(0u32..=2, 2)) {
        let v = SymplecticVS::darboux(2);
        let f = FockSpace::new(&v, &tilted(&v)).unwrap();
        let u = FockVector::new(Poly::term(2, u, HPoly::one()));
        let (a, b) = (w(&a), w(&b));
        let ab = weyl_mul(&v, &a, &b, 12);
        let right = fock_act(&f, &fock_act(&f, &u, &a, Side::Right, 12), &b, Side::Right, 12);
        prop_assert_eq!(fock_act(&f, &u, &ab, Side::Right, 12).poly, right.poly);
        let left = fock_act(&f, &fock_act(&f, &u, &b, Side::Left, 12), &a, Side::Left, 12);
        prop_assert_eq!(fock_act(&f, &u, &ab, Side::Left, 12).poly, left.poly);
    }
}

#[test]
fn defect_configuration_matches_matrix_oracle() {
    let v = plane();
    let lm = LagrangianSubspace::from_labels(&v, &["q"]).unwrap();
    let lp = LagrangianSubspace::from_labels(&v, &["p"]).unwrap();
    let line = build_defect_prefact(&v, &lm, &lp, 0.25).unwrap();
    let inputs = vec![((-2.0, -1.0), Value::Algebra(Poly::var(2, 0))), ((1.0, 2.0), Value::Algebra(Poly::var(2, 1)))];
    let out = line.evaluate((-3.0, 3.0), &inputs).unwrap();
    // q acts on the left factor by multiplication; p multiplies the right one.
    // The position dual to the annihilator q of L₊ is ℓ = −p, so q ⊗ p = −q ⊗ ℓ.
    assert_eq!(line.fock_plus().unwrap().position_names(), vec!["(-1p)".to_string()]);
    assert_eq!(out.value, Value::Defect(poly(2, &[(&[1, 1], h(-1, 0))])));
    // Swapping the inputs: p annihilates the left vacuum, q the right one.
    let swapped = vec![((-2.0, -1.0), Value::Algebra(Poly::var(2, 1))), ((1.0, 2.0), Value::Algebra(Poly::var(2, 0)))];
    assert!(line.evaluate((-3.0, 3.0), &swapped).unwrap().value.poly().is_zero());
    // Empty configuration: unit insertion.
    assert_eq!(line.evaluate((-3.0, 3.0), &[]).unwrap().value, line.unit((-3.0, 3.0)));
    assert_eq!(line.evaluate((1.0, 3.0), &[]).unwrap().value, Value::Algebra(Poly::one(2)));
    // Wrong kinds and overlaps are rejected.
    assert!(line.evaluate((-3.0, 3.0), &[((-1.0, 1.0), Value::Algebra(Poly::one(2)))]).is_err());
    let overlap = vec![((1.0, 2.0), Value::Algebra(Poly::one(2))), ((1.5, 2.5), Value::Algebra(Poly::one(2)))];
    assert!(line.evaluate((0.5, 3.0), &overlap).is_err());
}

#[test]
fn axioms_hold_for_bulk_and_defect() {
    let v = plane();
    let bulk = PrefactLine::bulk(&v, Flavor::Quantum);
    let r = check_prefact_axioms(&bulk, (0.5, 8.5), 3).unwrap();
    assert!(r.passed, "{r:?}");
    assert_eq!(r.max_depth_seen, 3);
    let lm = LagrangianSubspace::from_labels(&v, &["q"]).unwrap();
    let lp = LagrangianSubspace::from_labels(&v, &["p"]).unwrap();
    let line = build_defect_prefact(&v, &lm, &lp, 0.25).unwrap();
    let r = check_prefact_axioms(&line, (-4.0, 5.0), 3).unwrap();
    assert!(r.passed, "{r:?}");
    assert!(!r.truncated);
    assert!(r.configurations >= 10 && r.configurations <= 24);
}

#[test]
fn axioms_hold_for_a_tilted_defect_in_dimension_four() {
    let v = SymplecticVS::darboux(2);
    let lm = tilted(&v);
    let lp = LagrangianSubspace::from_labels(&v, &["p1", "p2"]).unwrap();
    let line = build_defect_prefact(&v, &lm, &lp, 0.25).unwrap();
    let r = check_prefact_axioms(&line, (-4.0, 5.0), 3).unwrap();
    assert!(r.passed, "{r:?}");
    let classical = classical_defect_prefact(&v, &lm, &lp).unwrap();
    assert!(check_prefact_axioms(&classical, (-4.0, 5.0), 3).unwrap().passed);
}

#[test]
fn flipped_convention_fails() {
    let v = plane();
    let lm = LagrangianSubspace::from_labels(&v, &["q"]).unwrap();
    let lp = LagrangianSubspace::from_labels(&v, &["p"]).unwrap();
    let line = build_defect_prefact(&v, &lm, &lp, 0.25).unwrap().with_convention(ActionConvention::Flipped);
    let r = check_prefact_axioms(&line, (-4.0, 5.0), 3).unwrap();
    assert!(!r.passed);
    let fail = r.first_failure.unwrap();
    assert_ne!(fail.nested, fail.flat);
    // The failing configuration groups one left input with the defect.
    let tree = Tree::Node(
        (-4.0, 4.0),
        vec![
            Tree::Leaf((-3.5, -3.0), Value::Algebra(Poly::var(2, 0))),
            Tree::Node(
                (-2.0, 2.0),
                vec![Tree::Leaf((-1.5, -1.0), Value::Algebra(Poly::var(2, 1))), Tree::Leaf((-0.5, 0.5), Value::Defect(Poly::var(2, 0)))],
            ),
        ],
    );
    assert_ne!(evaluate_nested(&line, &tree).unwrap().value, evaluate_flat(&line, &tree).unwrap().value);
    let good = build_defect_prefact(&v, &lm, &lp, 0.25).unwrap();
    assert_eq!(evaluate_nested(&good, &tree).unwrap().value, evaluate_flat(&good, &tree).unwrap().value);
}

#[test]
fn locality_of_the_pushforward() {
    let v = plane();
    let lm = LagrangianSubspace::from_labels(&v, &["q"]).unwrap();
    let lp = LagrangianSubspace::from_labels(&v, &["p"]).unwrap();
    let line = build_defect_prefact(&v, &lm, &lp, 0.25).unwrap();
    let free = PrefactLine::bulk(&v, Flavor::Quantum);
    let profile = make_profile(0.25, 0.5).unwrap();
    let cases = sample_locality_cases(&v, 0.25, 50, 7);
    assert!(cases.iter().all(|c| c.open.closure_avoids(0.5)));
    let r = check_locality(&line, &free, profile, &cases).unwrap();
    assert!(r.passed, "{r:?}");
    assert_eq!(r.maps_equal, 50);
    // Near the defect the two assignments differ.
    let near = LocalityCase { open: OpenSet1D::interval(-0.1, 0.1).unwrap(), inputs: vec![] };
    assert!(!check_locality(&line, &free, profile, &[near]).unwrap().passed);
}

#[test]
fn restriction_to_far_opens_is_the_bulk_assignment() {
    let v = plane();
    let lm = LagrangianSubspace::from_labels(&v, &["q"]).unwrap();
    let line = build_defect_prefact(&v, &lm, &lm, 0.25).unwrap();
    let free = PrefactLine::bulk(&v, Flavor::Quantum);
    let u = OpenSet1D::new(vec![(-2.0, -0.75), (0.6, 1.9)]).unwrap();
    assert_eq!(line.space_of(&u), free.space_of(&u));
    assert_eq!(check_prefact_axioms(&line, (0.6, 2.9), 3).unwrap(), check_prefact_axioms(&free, (0.6, 2.9), 3).unwrap());
}

#[test]
fn hbar_expansion() {
    assert!(check_hbar_identity(&plane(), 4).passed);
    let r = check_hbar_identity(&SymplecticVS::darboux(2), 4);
    assert!(r.passed);
    assert!(r.pairs > 100);
}

#[test]
fn coisotropy() {
    let v = plane();
    let q = vec![vec![Q::one(), Q::zero()]];
    assert!(check_coisotropy(&v, &q, 3).closed);
    let v4 = SymplecticVS::darboux(2);
    let e = |i: usize| (0..4).map(|j| if i == j { Q::one() } else { Q::zero() }).collect::<Vec<Q>>();
    let r = check_coisotropy(&v4, &[e(0), e(2)], 2);
    assert!(!r.closed);
    assert!(check_coisotropy(&v4, &[e(0), e(1)], 2).closed);
    // Coisotropic but not Lagrangian: span(q1, q2, p2).
    assert!(check_coisotropy(&v4, &[e(0), e(1), e(3)], 2).closed);
}

#[test]
fn restriction_is_compatible_with_fock() {
    let v = SymplecticVS::darboux(2);
    let f = FockSpace::new(&v, &tilted(&v)).unwrap();
    let r = check_restriction(&f, 4);
    assert!(r.passed, "{r:?}");
    let f = FockSpace::new(&plane(), &LagrangianSubspace::from_labels(&plane(), &["q"]).unwrap()).unwrap();
    assert!(check_restriction(&f, 4).passed);
}

#[test]
fn domain_walls() {
    let u = OpenSet1D::new(vec![(-2.0, -1.0), (-0.5, 0.5)]).unwrap();
    let wall = domain_wall_assignment(&u, 1, None, None).unwrap();
    assert_eq!(wall.report.v_dim, 4);
    assert_eq!(wall.report.module_variables, (2, 2));
    assert_eq!(wall.report.kinds, vec![SpaceKind::Algebra, SpaceKind::Defect]);
    assert_eq!(wall.report.generators, vec![4, 4]);
    assert!(check_prefact_axioms(&wall.line, (-4.0, 5.0), 2).unwrap().passed);
    let empty = domain_wall_assignment(&u, 0, None, None).unwrap();
    assert!(empty.report.scalars_only);
    assert_eq!(empty.report.v_dim, 0);
    let r = check_prefact_axioms(&empty.line, (-4.0, 5.0), 3).unwrap();
    assert!(r.passed);
    let v = domain_wall_space(2, 3).unwrap();
    assert_eq!(v.omega().rank(0.0), 8);
}
