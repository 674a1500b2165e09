//! Fock modules of the Weyl algebra attached to Lagrangian subspaces.

use defectwb_algebra::{Matrix, Scalar, Q};
use serde::Serialize;

use super::poly::{HPoly, Poly};
use super::weyl::{LagrangianSubspace, SymplecticVS, WeylElement};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// `Fock(L*)`, realized on `Sym` of `n = dim L` position variables `ℓ_a`.
///
/// `m_b` spans the linear functions vanishing on `L`; `ℓ_a` is a Lagrangian
/// complement with `Π(ℓ_a, m_b) = δ_ab`. Position variables act by
/// multiplication, `m_b` acts as `ħ ∂/∂ℓ_b` on the right and as `−ħ ∂/∂ℓ_b`
/// on the left, so the vacuum is annihilated from either side.
#[derive(Debug, Clone)]
pub struct FockSpace {
    v: SymplecticVS,
    l: LagrangianSubspace,
    ell: Vec<Vec<Q>>,
    m: Vec<Vec<Q>>,
    /// Generator `x_i = Σ_a alpha[i][a] ℓ_a + Σ_b beta[i][b] m_b`.
    alpha: Vec<Vec<Q>>,
    beta: Vec<Vec<Q>>,
}

/// Vector of a Fock module, a polynomial in the position variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockVector {
    pub poly: Poly,
    pub truncated: bool,
}

impl FockVector {
    pub fn new(poly: Poly) -> Self {
        FockVector { poly, truncated: false }
    }
}

impl FockSpace {
    pub fn new(v: &SymplecticVS, l: &LagrangianSubspace) -> Result<Self> {
        let dim = v.dim();
        let n = l.dim();
        let m: Vec<Vec<Q>> = if n == 0 {
            Vec::new()
        } else {
            Matrix::from_columns(dim, l.basis()).transpose().kernel(0.0)
        };
        // Complement of Ann(L) from standard basis vectors.
        let mut chosen = m.clone();
        let mut complement = Vec::new();
        for i in 0..dim {
            let mut e = vec![Q::zero(); dim];
            e[i] = Q::one();
            chosen.push(e.clone());
            if Matrix::from_columns(dim, &chosen).rank(0.0) == chosen.len() {
                complement.push(e);
            } else {
                chosen.pop();
            }
        }
        let c = Matrix::from_fn(n, n, |r, b| v.pi_pair(&complement[r], &m[b]));
        let x = c.inverse(0.0).expect("Π pairs a complement of Ann(L) with Ann(L) nondegenerately");
        let tilde: Vec<Vec<Q>> = (0..n)
            .map(|a| {
                (0..dim).map(|i| (0..n).fold(Q::zero(), |acc, r| acc + x[(a, r)].clone() * complement[r][i].clone())).collect()
            })
            .collect();
        let half = Q::from_ratio(1, 2);
        let ell: Vec<Vec<Q>> = (0..n)
            .map(|a| {
                (0..dim)
                    .map(|i| {
                        (0..n).fold(tilde[a][i].clone(), |acc, c| {
                            acc + half.clone() * v.pi_pair(&tilde[a], &tilde[c]) * m[c][i].clone()
                        })
                    })
                    .collect()
            })
            .collect();
        for a in 0..n {
            for b in 0..n {
                assert!(v.pi_pair(&ell[a], &ell[b]).is_exact_zero(), "position functions commute");
                assert!(v.pi_pair(&m[a], &m[b]).is_exact_zero(), "annihilators commute");
                let expect = if a == b { Q::one() } else { Q::zero() };
                assert_eq!(v.pi_pair(&ell[a], &m[b]), expect, "dual pairing of positions and annihilators");
            }
        }
        let mut cols = ell.clone();
        cols.extend(m.iter().cloned());
        let basis = Matrix::from_columns(dim, &cols);
        let inv = basis.inverse(0.0).expect("positions and annihilators form a basis");
        let alpha = (0..dim).map(|i| (0..n).map(|a| inv[(a, i)].clone()).collect()).collect();
        let beta = (0..dim).map(|i| (0..n).map(|b| inv[(n + b, i)].clone()).collect()).collect();
        Ok(FockSpace { v: v.clone(), l: l.clone(), ell, m, alpha, beta })
    }

    pub fn symplectic(&self) -> &SymplecticVS {
        &self.v
    }
    pub fn lagrangian(&self) -> &LagrangianSubspace {
        &self.l
    }
    pub fn nvars(&self) -> usize {
        self.ell.len()
    }
    pub fn positions(&self) -> &[Vec<Q>] {
        &self.ell
    }
    pub fn annihilators(&self) -> &[Vec<Q>] {
        &self.m
    }

    pub fn vacuum(&self) -> FockVector {
        FockVector::new(Poly::one(self.nvars()))
    }

    /// Dimension of the degree-`d` part, which equals that of `Sym^d(L*)`.
    pub fn graded_dim(&self, d: u32) -> usize {
        super::weyl::monomials_up_to(self.nvars(), d).iter().filter(|e| super::poly::total_degree(e) == d).count()
    }

    /// Generator names of the position variables.
    pub fn position_names(&self) -> Vec<String> {
        let labels = self.v.labels();
        self.ell
            .iter()
            .map(|f| {
                let nz: Vec<usize> = (0..f.len()).filter(|&i| !f[i].is_exact_zero()).collect();
                if nz.len() == 1 && f[nz[0]] == Q::one() {
                    labels[nz[0]].clone()
                } else {
                    let parts: Vec<String> =
                        nz.iter().map(|&i| format!("{}{}", defectwb_algebra::format_q(&f[i]), labels[i])).collect();
                    format!("({})", parts.join("+"))
                }
            })
            .collect()
    }

    /// Acts on the variables `offset..offset + n` of `u`, which may carry
    /// further variables (a tensor factor of a larger module).
    fn act_generator(&self, u: &Poly, i: usize, side: Side, offset: usize) -> Poly {
        let total = u.nvars();
        let mut out = Poly::zero(total);
        for a in 0..self.nvars() {
            let c = &self.alpha[i][a];
            if !c.is_exact_zero() {
                out = out.add(&u.mul_commutative(&Poly::var(total, offset + a)).scale(c));
            }
            let c = &self.beta[i][a];
            if !c.is_exact_zero() {
                let sign = match side {
                    Side::Right => c.clone(),
                    Side::Left => -c.clone(),
                };
                out = out.add(&u.derivative(offset + a).scale_h(&HPoly::monomial(sign, 1)));
            }
        }
        out
    }

    /// Classical limit of a generator: multiplication by its restriction to `L`.
    fn restrict_generator(&self, u: &Poly, i: usize, offset: usize) -> Poly {
        let total = u.nvars();
        let mut out = Poly::zero(total);
        for a in 0..self.nvars() {
            let c = &self.alpha[i][a];
            if !c.is_exact_zero() {
                out = out.add(&u.mul_commutative(&Poly::var(total, offset + a)).scale(c));
            }
        }
        out
    }

    /// Applies each normal-ordered monomial of `a` generator by generator:
    /// leftmost first on the right, rightmost first on the left. With
    /// `classical`, generators act through the restriction `O(V) → O(L)`.
    pub(crate) fn act_poly(&self, u: &Poly, a: &Poly, side: Side, offset: usize, classical: bool) -> Poly {
        let mut out = Poly::zero(u.nvars());
        for (e, c) in a.terms() {
            let mut word: Vec<usize> = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                word.extend(std::iter::repeat_n(i, k as usize));
            }
            if side == Side::Left {
                word.reverse();
            }
            let mut w = u.clone();
            for &i in &word {
                w = if classical { self.restrict_generator(&w, i, offset) } else { self.act_generator(&w, i, side, offset) };
            }
            out = out.add(&w.scale_h(c));
        }
        out
    }

    /// `u · a` (right) or `a · u` (left).
    pub fn act(&self, u: &FockVector, a: &WeylElement, side: Side, cap: u32) -> FockVector {
        let mut out = self.act_poly(&u.poly, &a.poly, side, 0, false);
        let dropped = out.truncate(cap);
        FockVector { poly: out, truncated: u.truncated || a.truncated || dropped }
    }
}

/// Action of `a` on `u` from the given side.
pub fn fock_act(space: &FockSpace, u: &FockVector, a: &WeylElement, side: Side, cap: u32) -> FockVector {
    space.act(u, a, side, cap)
}
