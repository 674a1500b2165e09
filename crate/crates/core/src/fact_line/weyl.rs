//! Symplectic data, the Weyl algebra in normal-ordered form and its
//! classical Poisson counterpart.

use defectwb_algebra::{qi, Matrix, Scalar, Q};

use super::poly::{total_degree, Exponent, HPoly, Poly};
use crate::error::{domain, Result};

/// Default truncation degree for Weyl elements and Fock vectors.
pub const DEFAULT_CAP: u32 = 6;

/// A symplectic vector space with basis labels. The generators of the Weyl
/// algebra are the coordinate functions `x_i`; their commutators are
/// `[x_i, x_j] = ħ Π_ij` with `Π = −ω⁻¹`, so that `[q, p] = ħ` in a Darboux
/// basis with `ω(q, p) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticVS {
    labels: Vec<String>,
    omega: Matrix<Q>,
    pi: Matrix<Q>,
}

impl SymplecticVS {
    pub fn new(labels: Vec<String>, omega: Matrix<Q>) -> Result<Self> {
        let n = labels.len();
        if omega.shape() != (n, n) {
            return domain(format!("symplectic form must be {n}x{n}"));
        }
        if !omega.add(&omega.transpose()).is_zero(0.0) {
            return domain("symplectic form is not skew");
        }
        let inv = omega.inverse(0.0).ok_or_else(|| crate::DefectError::Domain("symplectic form is degenerate".into()))?;
        Ok(SymplecticVS { labels, omega, pi: inv.scale(&-Q::one()) })
    }

    /// `n` Darboux pairs labelled `q1..qn, p1..pn` (or `q, p` when `n = 1`),
    /// positions first.
    pub fn darboux(n: usize) -> Self {
        let name = |s: &str, i: usize| if n == 1 { s.to_string() } else { format!("{s}{}", i + 1) };
        let mut labels: Vec<String> = (0..n).map(|i| name("q", i)).collect();
        labels.extend((0..n).map(|i| name("p", i)));
        let mut omega = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            omega[(i, n + i)] = Q::one();
            omega[(n + i, i)] = -Q::one();
        }
        SymplecticVS::new(labels, omega).expect("Darboux form is symplectic")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn omega(&self) -> &Matrix<Q> {
        &self.omega
    }
    /// Commutator matrix of the coordinate generators.
    pub fn pi(&self) -> &Matrix<Q> {
        &self.pi
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `Π(f, g)` for linear functions given by coefficient vectors.
    pub fn pi_pair(&self, f: &[Q], g: &[Q]) -> Q {
        let pg = self.pi.apply(g);
        f.iter().zip(pg).fold(Q::zero(), |acc, (a, b)| acc + a.clone() * b)
    }

    pub fn omega_pair(&self, u: &[Q], v: &[Q]) -> Q {
        let wv = self.omega.apply(v);
        u.iter().zip(wv).fold(Q::zero(), |acc, (a, b)| acc + a.clone() * b)
    }
}

/// Lagrangian subspace of a symplectic space, spanned by vectors of `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianSubspace {
    basis: Vec<Vec<Q>>,
}

impl LagrangianSubspace {
    pub fn new(v: &SymplecticVS, vectors: Vec<Vec<Q>>) -> Result<Self> {
        let n = v.dim();
        if vectors.iter().any(|x| x.len() != n) {
            return domain("Lagrangian basis vector has the wrong length");
        }
        let basis = if vectors.is_empty() { Vec::new() } else { Matrix::from_columns(n, &vectors).image(0.0) };
        if 2 * basis.len() != n {
            return domain(format!("subspace of dimension {} is not half of {n}", basis.len()));
        }
        for a in &basis {
            for b in &basis {
                if !v.omega_pair(a, b).is_exact_zero() {
                    return domain("subspace is not isotropic");
                }
            }
        }
        Ok(LagrangianSubspace { basis })
    }

    /// Span of the named basis vectors.
    pub fn from_labels(v: &SymplecticVS, names: &[&str]) -> Result<Self> {
        let mut vectors = Vec::new();
        for name in names {
            let i = v.index_of(name).ok_or_else(|| crate::DefectError::Domain(format!("unknown basis label {name}")))?;
            let mut e = vec![Q::zero(); v.dim()];
            e[i] = Q::one();
            vectors.push(e);
        }
        Self::new(v, vectors)
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Element of `Weyl(V*)` stored by its normal-ordered symbol: the monomial
/// `x^e` means `x_0^{e_0} x_1^{e_1} ⋯` in the basis order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub poly: Poly,
    /// Set when a product produced terms beyond the degree cap.
    pub truncated: bool,
}

impl WeylElement {
    pub fn new(poly: Poly) -> Self {
        WeylElement { poly, truncated: false }
    }
    pub fn one(nvars: usize) -> Self {
        Self::new(Poly::one(nvars))
    }
    pub fn generator(nvars: usize, i: usize) -> Self {
        Self::new(Poly::var(nvars, i))
    }
    pub fn monomial(e: Exponent) -> Self {
        let n = e.len();
        Self::new(Poly::term(n, e, HPoly::one()))
    }
    pub fn add(&self, other: &WeylElement) -> WeylElement {
        WeylElement { poly: self.poly.add(&other.poly), truncated: self.truncated || other.truncated }
    }
    pub fn sub(&self, other: &WeylElement) -> WeylElement {
        WeylElement { poly: self.poly.sub(&other.poly), truncated: self.truncated || other.truncated }
    }
}

fn falling(n: u32, k: u32) -> Q {
    (0..k).fold(Q::one(), |acc, i| acc * qi((n - i) as i64))
}

fn factorial(k: u32) -> Q {
    (1..=k).fold(Q::one(), |acc, i| acc * qi(i as i64))
}

/// Normal-ordered product of two monomials: Wick's theorem with central
/// commutators gives `μ ∘ Π_{i>j} exp(ħ Π_ij ∂_i ⊗ ∂_j)`, each contraction
/// moving a generator `x_i` of the left factor past `x_j` of the right one.
fn mul_monomials(v: &SymplecticVS, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len();
    let mut pairs: Vec<(Exponent, Exponent, HPoly)> = vec![(a.to_vec(), b.to_vec(), HPoly::one())];
    for i in 0..n {
        for j in 0..i {
            let w = &v.pi()[(i, j)];
            if w.is_exact_zero() {
                continue;
            }
            let mut next = Vec::new();
            for (x, y, c) in pairs {
                for k in 0..=x[i].min(y[j]) {
                    let weight = falling(x[i], k) * falling(y[j], k) * num_pow(w, k) / factorial(k);
                    let mut x2 = x.clone();
                    let mut y2 = y.clone();
                    x2[i] -= k;
                    y2[j] -= k;
                    next.push((x2, y2, c.mul(&HPoly::monomial(weight, k as usize))));
                }
            }
            pairs = next;
        }
    }
    let mut out = Poly::zero(n);
    for (x, y, c) in pairs {
        out.add_term(x.iter().zip(&y).map(|(p, q)| p + q).collect(), c);
    }
    out
}

fn num_pow(x: &Q, k: u32) -> Q {
    (0..k).fold(Q::one(), |acc, _| acc * x.clone())
}

/// Normal-ordered product, truncated at `cap`.
pub fn weyl_mul(v: &SymplecticVS, a: &WeylElement, b: &WeylElement, cap: u32) -> WeylElement {
    let n = v.dim();
    assert_eq!(a.poly.nvars(), n, "left factor has a different parent");
    assert_eq!(b.poly.nvars(), n, "right factor has a different parent");
    let mut out = Poly::zero(n);
    for (ea, ca) in a.poly.terms() {
        for (eb, cb) in b.poly.terms() {
            out = out.add(&mul_monomials(v, ea, eb).scale_h(&ca.mul(cb)));
        }
    }
    let dropped = out.truncate(cap);
    WeylElement { poly: out, truncated: a.truncated || b.truncated || dropped }
}

/// Ordered product of several elements.
pub fn weyl_product(v: &SymplecticVS, factors: &[WeylElement], cap: u32) -> WeylElement {
    factors.iter().fold(WeylElement::one(v.dim()), |acc, x| weyl_mul(v, &acc, x, cap))
}

/// `[a, b] = ab − ba`.
pub fn weyl_commutator(v: &SymplecticVS, a: &WeylElement, b: &WeylElement, cap: u32) -> WeylElement {
    weyl_mul(v, a, b, cap).sub(&weyl_mul(v, b, a, cap))
}

/// Poisson bracket on `Sym(V*)`: `{f, g} = Σ Π_ij ∂_i f ∂_j g`.
pub fn poisson_bracket(v: &SymplecticVS, f: &Poly, g: &Poly) -> Poly {
    let n = v.dim();
    let mut out = Poly::zero(n);
    for i in 0..n {
        let fi = f.derivative(i);
        if fi.is_zero() {
            continue;
        }
        for j in 0..n {
            let w = &v.pi()[(i, j)];
            if w.is_exact_zero() {
                continue;
            }
            out = out.add(&fi.mul_commutative(&g.derivative(j)).scale(w));
        }
    }
    out
}

/// All exponent vectors in `nvars` variables with total degree `≤ max`.
pub fn monomials_up_to(nvars: usize, max: u32) -> Vec<Exponent> {
    let mut out = vec![Vec::new()];
    for _ in 0..nvars {
        let mut next = Vec::new();
        for e in &out {
            let used = total_degree(e);
            for k in 0..=(max - used) {
                let mut f = e.clone();
                f.push(k);
                next.push(f);
            }
        }
        out = next;
    }
    out.sort_by_key(|e| (total_degree(e), std::cmp::Reverse(e.clone())));
    out
}
