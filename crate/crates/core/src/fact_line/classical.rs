//! Checks on the classical (Poisson) defect line.

use defectwb_algebra::{Matrix, Scalar, Q};
use serde::Serialize;

use super::fock::{FockSpace, FockVector, Side};
use super::poly::{Exponent, HPoly, Poly};
use super::weyl::{monomials_up_to, poisson_bracket, weyl_commutator, SymplecticVS, WeylElement};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct HbarIdentityReport {
    pub max_total_degree: u32,
    pub pairs: usize,
    pub passed: bool,
    pub first_failure: Option<String>,
}

/// `a⋆b − b⋆a` has no `ħ⁰` term and `ħ¹` term `{a, b}`, for all monomial
/// pairs with `deg a + deg b ≤ max_total_degree`.
pub fn check_hbar_identity(v: &SymplecticVS, max_total_degree: u32) -> HbarIdentityReport {
    let n = v.dim();
    let monos = monomials_up_to(n, max_total_degree);
    let mut pairs = 0;
    let mut first_failure = None;
    for a in &monos {
        for b in &monos {
            if super::poly::total_degree(a) + super::poly::total_degree(b) > max_total_degree {
                continue;
            }
            pairs += 1;
            let (wa, wb) = (WeylElement::monomial(a.clone()), WeylElement::monomial(b.clone()));
            let c = weyl_commutator(v, &wa, &wb, max_total_degree);
            let bracket = poisson_bracket(v, &wa.poly, &wb.poly);
            let ok = !c.truncated && c.poly.hbar_part(0).is_zero() && c.poly.hbar_part(1) == bracket;
            if !ok && first_failure.is_none() {
                first_failure = Some(format!("{a:?}, {b:?}"));
            }
        }
    }
    HbarIdentityReport { max_total_degree, pairs, passed: first_failure.is_none(), first_failure }
}

/// Restriction of a polynomial on `V` to the span of `basis`, as a polynomial
/// in the coordinates of that basis.
pub fn restrict(f: &Poly, basis: &[Vec<Q>]) -> Poly {
    let k = basis.len();
    let linear: Vec<Poly> = (0..f.nvars())
        .map(|i| {
            (0..k).fold(Poly::zero(k), |acc, a| {
                acc.add(&Poly::var(k, a).scale(&basis[a][i]))
            })
        })
        .collect();
    let mut out = Poly::zero(k);
    for (e, c) in f.terms() {
        let mut m = Poly::constant(k, c.clone());
        for (i, &p) in e.iter().enumerate() {
            for _ in 0..p {
                m = m.mul_commutative(&linear[i]);
            }
        }
        out = out.add(&m);
    }
    out
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CoisotropyReport {
    pub subspace_dim: usize,
    pub ideal_generators: usize,
    pub closed: bool,
    pub first_failure: Option<String>,
}

/// Checks `{m_b, m_c·h} ∈ I` for the generators `m_b` of the vanishing ideal
/// `I` of `span(vectors)` and all monomials `h` of degree `≤ max_degree`.
/// Membership in `I` is tested by restricting to the subspace.
pub fn check_coisotropy(v: &SymplecticVS, vectors: &[Vec<Q>], max_degree: u32) -> CoisotropyReport {
    let n = v.dim();
    let basis = if vectors.is_empty() { Vec::new() } else { Matrix::from_columns(n, vectors).image(0.0) };
    let gens: Vec<Vec<Q>> = if basis.is_empty() {
        (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
    } else {
        Matrix::from_columns(n, &basis).transpose().kernel(0.0)
    };
    let linear = |c: &[Q]| (0..n).fold(Poly::zero(n), |acc, i| acc.add(&Poly::var(n, i).scale(&c[i])));
    let mut first_failure = None;
    'outer: for (b, mb) in gens.iter().enumerate() {
        for (c, mc) in gens.iter().enumerate() {
            for h in monomials_up_to(n, max_degree) {
                let h = Poly::term(n, h, HPoly::one());
                let g = linear(mc).mul_commutative(&h);
                let br = poisson_bracket(v, &linear(mb), &g);
                if !restrict(&br, &basis).is_zero() {
                    first_failure = Some(format!("{{m{b}, m{c}·h}} with h = {}", h.display(v.labels())));
                    break 'outer;
                }
            }
        }
    }
    CoisotropyReport { subspace_dim: basis.len(), ideal_generators: gens.len(), closed: first_failure.is_none(), first_failure }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RestrictionReport {
    pub max_degree: u32,
    pub multiplicative: bool,
    pub classical_limit: bool,
    pub first_order: bool,
    pub passed: bool,
}

/// The restriction `O(V) → O(L)` against the Fock module on `L`:
/// it is multiplicative, the `ħ⁰` part of `u·a` is `res(a)·u`, and for linear
/// `a` the `ħ¹` part of `u·a` is `res({s(u), a})` where `s` lifts `u` along
/// the position functions.
pub fn check_restriction(fock: &FockSpace, max_degree: u32) -> RestrictionReport {
    let v = fock.symplectic();
    let n = v.dim();
    let k = fock.nvars();
    let basis = fock.lagrangian().basis().to_vec();
    // Coordinates on L are dual to `basis`; the position functions restrict to
    // some invertible change of those coordinates.
    let pos_restricted: Vec<Poly> = fock
        .positions()
        .iter()
        .map(|f| restrict(&(0..n).fold(Poly::zero(n), |acc, i| acc.add(&Poly::var(n, i).scale(&f[i]))), &basis))
        .collect();
    let to_positions = |p: &Poly| -> Poly {
        // Express a polynomial in basis coordinates through the position variables.
        let m = Matrix::from_fn(k, k, |a, b| pos_restricted[a].coeff(&unit(k, b)).coeff(0));
        let inv = m.inverse(0.0).expect("positions are coordinates on L");
        let coords: Vec<Poly> =
            (0..k).map(|b| (0..k).fold(Poly::zero(k), |acc, a| acc.add(&Poly::var(k, a).scale(&inv[(b, a)])))).collect();
        let mut out = Poly::zero(k);
        for (e, c) in p.terms() {
            let mut t = Poly::constant(k, c.clone());
            for (i, &pw) in e.iter().enumerate() {
                for _ in 0..pw {
                    t = t.mul_commutative(&coords[i]);
                }
            }
            out = out.add(&t);
        }
        out
    };
    let res = |f: &Poly| to_positions(&restrict(f, &basis));
    let lift = |u: &Poly| -> Poly {
        let mut out = Poly::zero(n);
        let lin: Vec<Poly> =
            fock.positions().iter().map(|f| (0..n).fold(Poly::zero(n), |acc, i| acc.add(&Poly::var(n, i).scale(&f[i])))).collect();
        for (e, c) in u.terms() {
            let mut t = Poly::constant(n, c.clone());
            for (a, &pw) in e.iter().enumerate() {
                for _ in 0..pw {
                    t = t.mul_commutative(&lin[a]);
                }
            }
            out = out.add(&t);
        }
        out
    };

    let monos: Vec<Exponent> = monomials_up_to(n, max_degree);
    let mut multiplicative = true;
    for a in &monos {
        for b in &monos {
            if super::poly::total_degree(a) + super::poly::total_degree(b) > max_degree {
                continue;
            }
            let (pa, pb) = (Poly::term(n, a.clone(), HPoly::one()), Poly::term(n, b.clone(), HPoly::one()));
            if res(&pa.mul_commutative(&pb)) != res(&pa).mul_commutative(&res(&pb)) {
                multiplicative = false;
            }
        }
    }
    let mut classical_limit = true;
    let mut first_order = true;
    for u in monomials_up_to(k, max_degree) {
        let up = Poly::term(k, u.clone(), HPoly::one());
        for a in &monos {
            if super::poly::total_degree(&u) + super::poly::total_degree(a) > max_degree {
                continue;
            }
            let pa = Poly::term(n, a.clone(), HPoly::one());
            let acted = fock.act(&FockVector::new(up.clone()), &WeylElement::new(pa.clone()), Side::Right, max_degree);
            if acted.poly.hbar_part(0) != res(&pa).mul_commutative(&up) {
                classical_limit = false;
            }
            if super::poly::total_degree(a) == 1 {
                let expected = res(&poisson_bracket(v, &lift(&up), &pa));
                if acted.poly.hbar_part(1) != expected {
                    first_order = false;
                }
            }
        }
    }
    RestrictionReport {
        max_degree,
        multiplicative,
        classical_limit,
        first_order,
        passed: multiplicative && classical_limit && first_order,
    }
}

fn unit(k: usize, b: usize) -> Exponent {
    let mut e = vec![0; k];
    e[b] = 1;
    e
}
