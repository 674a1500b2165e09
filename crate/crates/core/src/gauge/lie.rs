//! Finite-dimensional Lie algebras by structure constants, with optional
//! invariant pairing, and their representations.

use defectwb_algebra::{qi, Matrix, Scalar, Q, QI};
use serde::Serialize;

use crate::error::{DefectError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    name: String,
    labels: Vec<String>,
    /// `structure[i][j][k]`: coefficient of `e_k` in `[e_i, e_j]`.
    structure: Vec<Vec<Vec<Q>>>,
    kappa: Option<Matrix<Q>>,
}

/// A bracket `[e_i, e_j] = Σ c_k e_k` given as `(i, j, [(k, c_k)])`.
pub type BracketSpec = (usize, usize, Vec<(usize, Q)>);

impl LieAlgebra {
    /// Fills `[e_j, e_i] = −[e_i, e_j]` and checks the Jacobi identity and,
    /// when given, invariance of `κ`.
    pub fn new(name: &str, labels: &[&str], brackets: &[BracketSpec], kappa: Option<Matrix<Q>>) -> Result<Self> {
        let n = labels.len();
        let mut structure = vec![vec![vec![Q::zero(); n]; n]; n];
        for (i, j, terms) in brackets {
            if *i >= n || *j >= n || i == j {
                return Err(DefectError::Invariant(format!("bad bracket index ({i}, {j})")));
            }
            for (k, c) in terms {
                structure[*i][*j][*k] += c.clone();
                structure[*j][*i][*k] -= c.clone();
            }
        }
        let alg = LieAlgebra { name: name.into(), labels: labels.iter().map(|s| s.to_string()).collect(), structure, kappa };
        if let Some((i, j, k)) = alg.jacobi_failure() {
            return Err(DefectError::Invariant(format!("Jacobi fails on ({}, {}, {})", alg.labels[i], alg.labels[j], alg.labels[k])));
        }
        if let Some(k) = &alg.kappa {
            if k.shape() != (n, n) {
                return Err(DefectError::Invariant("pairing has the wrong size".into()));
            }
            if let Some((i, j, l)) = alg.invariance_failure(k) {
                return Err(DefectError::Invariant(format!(
                    "pairing not invariant on ({}, {}, {})",
                    alg.labels[i], alg.labels[j], alg.labels[l]
                )));
            }
        }
        Ok(alg)
    }

    pub fn abelian(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        Self::new(&format!("abelian{n}"), &refs, &[], Some(Matrix::identity(n))).expect("abelian algebra")
    }

    pub fn u1() -> Self {
        Self::new("u1", &["1"], &[], Some(Matrix::identity(1))).expect("u(1)")
    }

    /// Basis `h, e, f` with the Killing form.
    pub fn sl2() -> Self {
        let kappa = Matrix::from_fn(3, 3, |i, j| match (i, j) {
            (0, 0) => qi(8),
            (1, 2) | (2, 1) => qi(4),
            _ => Q::zero(),
        });
        Self::new(
            "sl2",
            &["h", "e", "f"],
            &[(0, 1, vec![(1, qi(2))]), (0, 2, vec![(2, qi(-2))]), (1, 2, vec![(0, qi(1))])],
            Some(kappa),
        )
        .expect("sl2")
    }

    /// `[x, y] = z`; it has no nondegenerate invariant pairing.
    pub fn heisenberg() -> Self {
        Self::new("heisenberg", &["x", "y", "z"], &[(0, 1, vec![(2, qi(1))])], None).expect("Heisenberg")
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "sl2" => Ok(Self::sl2()),
            "u1" => Ok(Self::u1()),
            "heisenberg" => Ok(Self::heisenberg()),
            other => match other.strip_prefix("abelian").map(str::parse::<usize>) {
                Some(Ok(n)) if n > 0 => Ok(Self::abelian(n)),
                _ => Err(DefectError::Domain(format!("unknown Lie algebra {other:?}"))),
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn kappa(&self) -> Option<&Matrix<Q>> {
        self.kappa.as_ref()
    }

    pub fn structure(&self, i: usize, j: usize) -> &[Q] {
        &self.structure[i][j]
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut out = vec![Q::zero(); n];
        for i in (0..n).filter(|&i| !x[i].is_exact_zero()) {
            for j in (0..n).filter(|&j| !y[j].is_exact_zero()) {
                let c = x[i].clone() * y[j].clone();
                for (k, s) in self.structure[i][j].iter().enumerate() {
                    if !s.is_exact_zero() {
                        out[k] += c.clone() * s.clone();
                    }
                }
            }
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<Q> {
        (0..self.dim()).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
    }

    fn jacobi_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (a, b, c) = (self.basis(i), self.basis(j), self.basis(k));
                    let t1 = self.bracket(&a, &self.bracket(&b, &c));
                    let t2 = self.bracket(&b, &self.bracket(&c, &a));
                    let t3 = self.bracket(&c, &self.bracket(&a, &b));
                    if (0..n).any(|l| !(t1[l].clone() + t2[l].clone() + t3[l].clone()).is_exact_zero()) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// `κ([x, y], z) + κ(y, [x, z]) = 0` on basis triples.
    fn invariance_failure(&self, kappa: &Matrix<Q>) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        let pair = |u: &[Q], v: &[Q]| {
            let kv = kappa.apply(v);
            u.iter().zip(kv).fold(Q::zero(), |acc, (a, b)| acc + a.clone() * b)
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (self.basis(i), self.basis(j), self.basis(k));
                    if !(pair(&self.bracket(&x, &y), &z) + pair(&y, &self.bracket(&x, &z))).is_exact_zero() {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Verifies that `basis` spans a subalgebra; the error names a bracket
    /// leaving the span.
    pub fn check_subalgebra(&self, basis: &[Vec<Q>]) -> Result<()> {
        let n = self.dim();
        if basis.iter().any(|v| v.len() != n) {
            return Err(DefectError::Domain("subalgebra vector has the wrong length".into()));
        }
        if basis.is_empty() {
            return Ok(());
        }
        let span = Matrix::from_columns(n, basis);
        for (a, x) in basis.iter().enumerate() {
            for (b, y) in basis.iter().enumerate().skip(a + 1) {
                let z = self.bracket(x, y);
                if span.solve(&z, 0.0).is_none() {
                    return Err(DefectError::Domain(format!(
                        "not a subalgebra: [v{a}, v{b}] = {} leaves the span",
                        format_vec(&z, &self.labels)
                    )));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn format_vec(v: &[Q], labels: &[String]) -> String {
    let terms: Vec<String> = v
        .iter()
        .zip(labels)
        .filter(|(c, _)| !c.is_exact_zero())
        .map(|(c, l)| format!("{}·{l}", defectwb_algebra::format_q(c)))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Matrices `ρ(e_i)` over the Gaussian rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub dim: usize,
    pub matrices: Vec<Matrix<QI>>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ModuleFailure {
    pub i: String,
    pub j: String,
}

impl Representation {
    pub fn new(dim: usize, matrices: Vec<Matrix<QI>>) -> Result<Self> {
        if matrices.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(DefectError::Domain("representation matrices have the wrong size".into()));
        }
        Ok(Representation { dim, matrices })
    }

    pub fn trivial(alg: &LieAlgebra, dim: usize) -> Self {
        Representation { dim, matrices: vec![Matrix::zeros(dim, dim); alg.dim()] }
    }

    /// `1 ↦ n` on a line, the module `V_n`.
    pub fn u1_charge(n: i64) -> Self {
        Representation { dim: 1, matrices: vec![Matrix::from_fn(1, 1, |_, _| QI::from_i64(n))] }
    }

    /// `1 ↦ i n`, the unitary weight-`n` character.
    pub fn u1_weight(n: i64) -> Self {
        Representation { dim: 1, matrices: vec![Matrix::from_fn(1, 1, |_, _| QI::imag(qi(n)))] }
    }

    /// The defining 2-dimensional representation of `sl2` in the basis `h, e, f`.
    pub fn sl2_standard() -> Self {
        let m = |a: [[i64; 2]; 2]| Matrix::from_fn(2, 2, |r, c| QI::from_i64(a[r][c]));
        Representation { dim: 2, matrices: vec![m([[1, 0], [0, -1]]), m([[0, 1], [0, 0]]), m([[0, 0], [1, 0]])] }
    }

    /// `ρ(x) = Σ x_i ρ(e_i)`.
    pub fn image(&self, x: &[Q]) -> Matrix<QI> {
        self.matrices
            .iter()
            .zip(x)
            .fold(Matrix::zeros(self.dim, self.dim), |acc, (m, c)| acc.add(&m.scale(&QI::from_q(c))))
    }

    /// First basis pair with `ρ([e_i, e_j]) ≠ [ρ(e_i), ρ(e_j)]`.
    pub fn module_failure(&self, alg: &LieAlgebra) -> Option<ModuleFailure> {
        if self.matrices.len() != alg.dim() {
            return Some(ModuleFailure { i: "*".into(), j: "*".into() });
        }
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let lhs = self.image(alg.structure(i, j));
                let (a, b) = (&self.matrices[i], &self.matrices[j]);
                let rhs = a.mul(b).sub(&b.mul(a));
                if !lhs.sub(&rhs).is_zero(0.0) {
                    return Some(ModuleFailure { i: alg.labels()[i].clone(), j: alg.labels()[j].clone() });
                }
            }
        }
        None
    }
}
