//! Polynomials with coefficients in `Q[ħ]`.

use std::collections::BTreeMap;
use std::fmt;

use defectwb_algebra::{format_q, Scalar, Q};

/// Polynomial in the formal parameter `ħ`; `coeffs[k]` multiplies `ħ^k`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct HPoly {
    coeffs: Vec<Q>,
}

impl HPoly {
    pub fn zero() -> Self {
        HPoly { coeffs: Vec::new() }
    }
    pub fn constant(c: Q) -> Self {
        HPoly { coeffs: vec![c] }.trimmed()
    }
    pub fn one() -> Self {
        Self::constant(Q::one())
    }
    /// `c ħ^k`.
    pub fn monomial(c: Q, k: usize) -> Self {
        let mut coeffs = vec![Q::zero(); k + 1];
        coeffs[k] = c;
        HPoly { coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(Scalar::is_exact_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &HPoly) -> HPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        HPoly { coeffs: (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect() }.trimmed()
    }

    pub fn sub(&self, other: &HPoly) -> HPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HPoly {
        HPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn mul(&self, other: &HPoly) -> HPoly {
        if self.is_zero() || other.is_zero() {
            return HPoly::zero();
        }
        let mut coeffs = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a.clone() * b.clone();
            }
        }
        HPoly { coeffs }.trimmed()
    }

    pub fn scale(&self, c: &Q) -> HPoly {
        HPoly { coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect() }.trimmed()
    }

    /// Multiplies by `ħ^k`.
    pub fn shift(&self, k: usize) -> HPoly {
        if self.is_zero() {
            return HPoly::zero();
        }
        let mut coeffs = vec![Q::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        HPoly { coeffs }
    }

    pub fn eval(&self, hbar: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * hbar.clone() + c.clone())
    }
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_exact_zero())
            .map(|(k, c)| match k {
                0 => format_q(c),
                1 => format!("{}ħ", format_q(c)),
                _ => format!("{}ħ^{k}", format_q(c)),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Exponent vector of a monomial.
pub type Exponent = Vec<u32>;

/// Sparse polynomial in `nvars` commuting symbols with `Q[ħ]` coefficients.
/// Used both for normal-ordered symbols of Weyl elements and for Fock vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, HPoly>,
}

pub fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: HPoly) -> Self {
        Self::term(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, HPoly::one())
    }

    pub fn term(nvars: usize, e: Exponent, c: HPoly) -> Self {
        assert_eq!(e.len(), nvars, "exponent length must match the number of variables");
        let mut p = Poly::zero(nvars);
        p.add_term(e, c);
        p
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::term(nvars, e, HPoly::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, HPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> HPoly {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, e: Exponent, c: HPoly) {
        if c.is_zero() {
            return;
        }
        let sum = self.terms.get(&e).map_or_else(|| c.clone(), |x| x.add(&c));
        if sum.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale_h(&HPoly::constant(-Q::one())))
    }

    pub fn scale_h(&self, c: &HPoly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x.mul(c));
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Poly {
        self.scale_h(&HPoly::constant(c.clone()))
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|e| total_degree(e)).max().unwrap_or(0)
    }

    /// Commutative product.
    pub fn mul_commutative(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(e, x.mul(y));
            }
        }
        out
    }

    /// `∂/∂x_i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c.scale(&defectwb_algebra::qi(e[i] as i64)));
            }
        }
        out
    }

    /// Drops terms of total degree above `cap`; returns whether anything was dropped.
    pub fn truncate(&mut self, cap: u32) -> bool {
        let before = self.terms.len();
        self.terms.retain(|e, _| total_degree(e) <= cap);
        self.terms.len() != before
    }

    /// Coefficient of `ħ^k` as a polynomial with constant coefficients.
    pub fn hbar_part(&self, k: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), HPoly::constant(c.coeff(k)));
        }
        out
    }

    pub fn eval_hbar(&self, hbar: &Q) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), HPoly::constant(c.eval(hbar)));
        }
        out
    }

    /// Human-readable form with the given variable names.
    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{k}", names[i]) })
                    .collect();
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c}){}", mono.join(""))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl Poly {
    /// Keeps the terms whose exponent satisfies `keep`; returns whether any were dropped.
    pub fn retain_exponents(&mut self, keep: impl Fn(&[u32]) -> bool) -> bool {
        let before = self.terms.len();
        self.terms.retain(|e, _| keep(e));
        self.terms.len() != before
    }
}
