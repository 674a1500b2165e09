//! Finite cellular models: ordered simplicial complexes with the
//! Alexander–Whitney cup product, CW circles and cubes, and the
//! symmetrized-cup pairing on a circle.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{AlgebraError, Result};
use crate::graded::{CochainComplex, GradedVectorSpace};
use crate::matrix::Matrix;
use crate::pairing::ShiftedPairing;
use crate::scalar::{Scalar, Q};

/// Simplicial complex with totally ordered vertices; simplices are stored as
/// increasing vertex lists, which fixes orientations and the cup product.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialComplex {
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl SimplicialComplex {
    /// Closes the given facets under taking faces.
    pub fn from_facets(facets: &[Vec<usize>]) -> Result<Self> {
        let mut by_dim: BTreeMap<usize, BTreeSet<Vec<usize>>> = BTreeMap::new();
        for f in facets {
            let mut s = f.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != f.len() || s.is_empty() {
                return Err(AlgebraError::Domain(format!("invalid facet {f:?}")));
            }
            let n = s.len();
            for mask in 1u64..(1u64 << n) {
                let face: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
                by_dim.entry(face.len() - 1).or_default().insert(face);
            }
        }
        let top = by_dim.keys().next_back().copied().unwrap_or(0);
        let simplices: Vec<Vec<Vec<usize>>> =
            (0..=top).map(|k| by_dim.remove(&k).unwrap_or_default().into_iter().collect()).collect();
        let index = simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        Ok(SimplicialComplex { simplices, index })
    }

    /// Path with `n ≥ 2` vertices.
    pub fn path(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(AlgebraError::Domain("a path needs at least two vertices".into()));
        }
        Self::from_facets(&(0..n - 1).map(|i| vec![i, i + 1]).collect::<Vec<_>>())
    }

    /// Polygon with `n ≥ 3` vertices.
    pub fn circle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(AlgebraError::Domain("a simplicial circle needs at least three vertices".into()));
        }
        Self::from_facets(&(0..n).map(|i| vec![i, (i + 1) % n]).collect::<Vec<_>>())
    }

    /// Boundary of the `k`-simplex, a model of `S^{k-1}`.
    pub fn sphere_boundary(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(AlgebraError::Domain("codimension must be at least 1".into()));
        }
        let facets: Vec<Vec<usize>> = (0..=k).map(|skip| (0..=k).filter(|&v| v != skip).collect()).collect();
        Self::from_facets(&facets)
    }

    /// Triangulated annulus: a polygon with `around ≥ 3` vertices times a
    /// path with `radial ≥ 2` vertices. Vertex `(i, j)` has index `j·around + i`.
    pub fn annulus(around: usize, radial: usize) -> Result<Self> {
        if around < 3 || radial < 2 {
            return Err(AlgebraError::Domain("annulus needs around ≥ 3 and radial ≥ 2".into()));
        }
        let v = |i: usize, j: usize| j * around + (i % around);
        let mut facets = Vec::new();
        for j in 0..radial - 1 {
            for i in 0..around {
                let (a, b, c, d) = (v(i, j), v(i + 1, j), v(i, j + 1), v(i + 1, j + 1));
                facets.push(vec![a, b, d]);
                facets.push(vec![a, c, d]);
            }
        }
        Self::from_facets(&facets)
    }

    pub fn dimension(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn position(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex.len().checked_sub(1)?)?.get(simplex).copied()
    }

    /// Coboundary `δ_k: C^k → C^{k+1}`, `(δf)(σ) = Σ_i (−1)^i f(∂_i σ)`.
    pub fn coboundary<F: Scalar>(&self, k: usize) -> Matrix<F> {
        let mut m = Matrix::zeros(self.count(k + 1), self.count(k));
        for (row, s) in self.simplices(k + 1).iter().enumerate() {
            for i in 0..s.len() {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                let col = self.position(&face).expect("faces are present");
                let sign = if i % 2 == 0 { F::one() } else { -F::one() };
                m[(row, col)] += sign;
            }
        }
        m
    }

    pub fn cochain_complex<F: Scalar>(&self) -> CochainComplex<F> {
        let mut labels = BTreeMap::new();
        let mut blocks = BTreeMap::new();
        for k in 0..=self.dimension() {
            labels.insert(k as i32, self.simplices(k).iter().map(|s| format!("{s:?}")).collect());
            if k < self.dimension() {
                blocks.insert(k as i32, self.coboundary::<F>(k));
            }
        }
        let space = GradedVectorSpace::from_labels(labels).expect("simplices are distinct");
        CochainComplex::new(space, blocks).expect("coboundary shapes match")
    }

    /// Alexander–Whitney cup `(f ∪ g)(σ) = f(σ[0..p]) g(σ[p..p+q])`.
    pub fn cup<F: Scalar>(&self, p: usize, f: &[F], q: usize, g: &[F]) -> Vec<F> {
        self.simplices(p + q)
            .iter()
            .map(|s| {
                let front = self.position(&s[..=p]).expect("front face");
                let back = self.position(&s[p..]).expect("back face");
                f[front].clone() * g[back].clone()
            })
            .collect()
    }
}

/// CW circle with `n ≥ 1` vertices and `n` edges, edge `i` running from
/// vertex `i` to vertex `i+1 mod n`.
pub fn cw_circle<F: Scalar>(n: usize) -> Result<CochainComplex<F>> {
    if n == 0 {
        return Err(AlgebraError::Domain("a CW circle needs at least one vertex".into()));
    }
    let mut d = Matrix::zeros(n, n);
    for e in 0..n {
        d[(e, e)] += -F::one();
        d[(e, (e + 1) % n)] += F::one();
    }
    let space = GradedVectorSpace::from_labels(BTreeMap::from([
        (0, (0..n).map(|i| format!("v{i}")).collect()),
        (1, (0..n).map(|i| format!("e{i}")).collect()),
    ]))?;
    CochainComplex::new(space, BTreeMap::from([(0, d)]))
}

/// Cellular interval with `cells ≥ 1` edges.
pub fn cw_interval<F: Scalar>(cells: usize) -> Result<CochainComplex<F>> {
    if cells == 0 {
        return Err(AlgebraError::Domain("an interval needs at least one cell".into()));
    }
    let mut d = Matrix::zeros(cells, cells + 1);
    for e in 0..cells {
        d[(e, e)] = -F::one();
        d[(e, e + 1)] = F::one();
    }
    let space = GradedVectorSpace::from_labels(BTreeMap::from([
        (0, (0..=cells).map(|i| format!("v{i}")).collect()),
        (1, (0..cells).map(|i| format!("e{i}")).collect()),
    ]))?;
    CochainComplex::new(space, BTreeMap::from([(0, d)]))
}

/// Cellular `m`-cube as an `m`-fold tensor power of a one-cell interval; the
/// point when `m = 0`.
pub fn cw_cube<F: Scalar>(m: usize) -> Result<CochainComplex<F>> {
    let point = CochainComplex::discrete(GradedVectorSpace::from_labels(BTreeMap::from([(0, vec!["pt".into()])]))?);
    let interval = cw_interval::<F>(1)?;
    (0..m).try_fold(point, |acc, _| acc.tensor(&interval))
}

/// Wedge-and-integrate pairing on a CW circle, placed on the shifted complex
/// `C[1]` (degrees −1, 0) so that it is graded skew. The 0-cochain is averaged
/// over the two ends of each edge: `⟨f, g⟩ = Σ_e ½(f(s e) + f(t e)) g(e)`.
pub fn circle_pairing(n: usize) -> Result<ShiftedPairing<Q>> {
    let c = cw_circle::<Q>(n)?.shifted(1);
    let half = Q::from_ratio(1, 2);
    let mut w = Matrix::zeros(n, n);
    for e in 0..n {
        w[(e, e)] += half.clone();
        w[((e + 1) % n, e)] += half.clone();
    }
    ShiftedPairing::from_half(c, -1, BTreeMap::from([(-1, w)]))
}
