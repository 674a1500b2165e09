//! Graded vector spaces, degree-shifting linear maps and cochain complexes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{AlgebraError, Result};
use crate::matrix::{LinAlg, Matrix};
use crate::scalar::{Scalar, DEFAULT_EPS};

/// Finite-dimensional graded vector space described by its basis labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedVectorSpace {
    labels: BTreeMap<i32, Vec<String>>,
}

impl GradedVectorSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_labels(labels: BTreeMap<i32, Vec<String>>) -> Result<Self> {
        for (d, ls) in &labels {
            let unique: BTreeSet<&String> = ls.iter().collect();
            if unique.len() != ls.len() {
                return Err(AlgebraError::Degree(format!("duplicate basis label in degree {d}")));
            }
        }
        let labels = labels.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        Ok(GradedVectorSpace { labels })
    }

    /// Auto-labelled space `e{deg}_{i}`.
    pub fn from_dims(dims: &[(i32, usize)]) -> Self {
        let labels = dims
            .iter()
            .filter(|(_, n)| *n > 0)
            .map(|&(d, n)| (d, (0..n).map(|i| format!("e{d}_{i}")).collect()))
            .collect();
        GradedVectorSpace { labels }
    }

    pub fn with_degree(mut self, degree: i32, labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            self.labels.remove(&degree);
            return Ok(self);
        }
        let unique: BTreeSet<&String> = labels.iter().collect();
        if unique.len() != labels.len() {
            return Err(AlgebraError::Degree(format!("duplicate basis label in degree {degree}")));
        }
        self.labels.insert(degree, labels);
        Ok(self)
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.labels.get(&degree).map_or(0, Vec::len)
    }

    pub fn labels(&self, degree: i32) -> &[String] {
        self.labels.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn all_labels(&self) -> &BTreeMap<i32, Vec<String>> {
        &self.labels
    }

    /// Degrees with nonzero dimension, ascending.
    pub fn degrees(&self) -> Vec<i32> {
        self.labels.keys().copied().collect()
    }

    pub fn total_dim(&self) -> usize {
        self.labels.values().map(Vec::len).sum()
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.labels.iter().map(|(d, l)| (*d, l.len())).collect()
    }

    /// `V[k]` with `V[k]^n = V^{n+k}`.
    pub fn shifted(&self, k: i32) -> Self {
        GradedVectorSpace { labels: self.labels.iter().map(|(d, l)| (d - k, l.clone())).collect() }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut labels = self.labels.clone();
        for (d, ls) in &other.labels {
            let entry = labels.entry(*d).or_default();
            for l in ls {
                let mut name = l.clone();
                while entry.contains(&name) {
                    name.push('\'');
                }
                entry.push(name);
            }
        }
        GradedVectorSpace { labels }
    }

    /// Degree range spanned by both spaces (inclusive), padded by one on each side.
    pub(crate) fn span_with(&self, other: &Self) -> Vec<i32> {
        let ds: BTreeSet<i32> = self.labels.keys().chain(other.labels.keys()).copied().collect();
        match (ds.first(), ds.last()) {
            (Some(&lo), Some(&hi)) => (lo - 1..=hi + 1).collect(),
            _ => Vec::new(),
        }
    }
}

/// Linear map of a fixed degree between graded spaces. Missing blocks are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap<F> {
    source: GradedVectorSpace,
    target: GradedVectorSpace,
    shift: i32,
    blocks: BTreeMap<i32, Matrix<F>>,
}

impl<F: Scalar> LinearMap<F> {
    /// `blocks[p]` maps source degree `p` into target degree `p + shift`.
    pub fn new(
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        shift: i32,
        blocks: BTreeMap<i32, Matrix<F>>,
    ) -> Result<Self> {
        let mut kept = BTreeMap::new();
        for (p, m) in blocks {
            let expected = (target.dim(p + shift), source.dim(p));
            if m.shape() != expected {
                return Err(AlgebraError::Shape {
                    degree: p,
                    detail: format!(
                        "block {}x{} but target/source dims are {}x{}",
                        m.rows(),
                        m.cols(),
                        expected.0,
                        expected.1
                    ),
                });
            }
            if expected.0 > 0 && expected.1 > 0 {
                kept.insert(p, m);
            }
        }
        Ok(LinearMap { source, target, shift, blocks: kept })
    }

    pub fn zero(source: GradedVectorSpace, target: GradedVectorSpace, shift: i32) -> Self {
        LinearMap { source, target, shift, blocks: BTreeMap::new() }
    }

    pub fn identity(space: &GradedVectorSpace) -> Self {
        let blocks = space.degrees().into_iter().map(|d| (d, Matrix::identity(space.dim(d)))).collect();
        LinearMap { source: space.clone(), target: space.clone(), shift: 0, blocks }
    }

    pub fn source(&self) -> &GradedVectorSpace {
        &self.source
    }
    pub fn target(&self) -> &GradedVectorSpace {
        &self.target
    }
    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn block(&self, p: i32) -> Matrix<F> {
        self.blocks
            .get(&p)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.dim(p + self.shift), self.source.dim(p)))
    }

    pub fn blocks(&self) -> &BTreeMap<i32, Matrix<F>> {
        &self.blocks
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &LinearMap<F>) -> Result<LinearMap<F>> {
        if other.source != self.target {
            return Err(AlgebraError::Degree("composition: intermediate spaces differ".into()));
        }
        let mut blocks = BTreeMap::new();
        for p in self.source.degrees() {
            let m = other.block(p + self.shift).try_mul(&self.block(p))?;
            blocks.insert(p, m);
        }
        LinearMap::new(self.source.clone(), other.target.clone(), self.shift + other.shift, blocks)
    }

    pub fn sub(&self, other: &LinearMap<F>) -> Result<LinearMap<F>> {
        if self.source != other.source || self.target != other.target || self.shift != other.shift {
            return Err(AlgebraError::Degree("difference of maps with different signatures".into()));
        }
        let blocks =
            self.source.degrees().into_iter().map(|p| (p, self.block(p).sub(&other.block(p)))).collect();
        LinearMap::new(self.source.clone(), self.target.clone(), self.shift, blocks)
    }

    pub fn scale(&self, s: &F) -> LinearMap<F> {
        LinearMap {
            source: self.source.clone(),
            target: self.target.clone(),
            shift: self.shift,
            blocks: self.blocks.iter().map(|(p, m)| (*p, m.scale(s))).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.values().map(Matrix::max_abs).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        let blocks: Vec<Value> = self
            .blocks
            .iter()
            .map(|(p, m)| serde_json::json!({ "degree": p, "matrix": m.to_json() }))
            .collect();
        serde_json::json!({
            "kind": F::KIND,
            "shift": self.shift,
            "source": space_json(&self.source),
            "target": space_json(&self.target),
            "blocks": blocks,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let doc: MapDoc = serde_json::from_value(v.clone()).map_err(|e| AlgebraError::Parse(e.to_string()))?;
        check_kind::<F>(&doc.kind)?;
        let source = doc.source.into_space()?;
        let target = doc.target.into_space()?;
        let mut blocks = BTreeMap::new();
        for b in doc.blocks {
            let m = Matrix::from_json(&b.matrix, target.dim(b.degree + doc.shift), source.dim(b.degree))?;
            blocks.insert(b.degree, m);
        }
        LinearMap::new(source, target, doc.shift, blocks)
    }
}

/// Cochain complex: a graded space with a degree +1 differential.
#[derive(Debug, Clone, PartialEq)]
pub struct CochainComplex<F> {
    d: LinearMap<F>,
    eps: f64,
}

impl<F: Scalar> CochainComplex<F> {
    /// Builds the complex; `blocks[p]` is `d: C^p → C^{p+1}`.
    pub fn new(space: GradedVectorSpace, blocks: BTreeMap<i32, Matrix<F>>) -> Result<Self> {
        let d = LinearMap::new(space.clone(), space, 1, blocks)?;
        Ok(CochainComplex { d, eps: if F::EXACT { 0.0 } else { DEFAULT_EPS } })
    }

    pub fn from_differential(d: LinearMap<F>) -> Result<Self> {
        if d.source != d.target || d.shift != 1 {
            return Err(AlgebraError::Degree("differential must be an endomorphism of degree +1".into()));
        }
        Ok(CochainComplex { d, eps: if F::EXACT { 0.0 } else { DEFAULT_EPS } })
    }

    /// Complex with zero differential.
    pub fn discrete(space: GradedVectorSpace) -> Self {
        CochainComplex {
            d: LinearMap::zero(space.clone(), space, 1),
            eps: if F::EXACT { 0.0 } else { DEFAULT_EPS },
        }
    }

    /// Sets the numeric tolerance; ignored by exact fields.
    pub fn with_eps(mut self, eps: f64) -> Self {
        if !F::EXACT {
            self.eps = eps;
        }
        self
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn space(&self) -> &GradedVectorSpace {
        &self.d.source
    }
    pub fn dim(&self, p: i32) -> usize {
        self.d.source.dim(p)
    }
    pub fn differential(&self) -> &LinearMap<F> {
        &self.d
    }
    /// `d: C^p → C^{p+1}`.
    pub fn d(&self, p: i32) -> Matrix<F> {
        self.d.block(p)
    }

    /// Degrees to inspect: every nonzero degree plus one on each side.
    pub fn degree_window(&self) -> Vec<i32> {
        self.space().span_with(self.space())
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let space = self.space().direct_sum(other.space());
        let mut blocks = BTreeMap::new();
        for p in self.degree_window().into_iter().chain(other.degree_window()) {
            let a = self.d(p);
            let b = other.d(p);
            let m = Matrix::block2(
                &a,
                &Matrix::zeros(a.rows(), b.cols()),
                &Matrix::zeros(b.rows(), a.cols()),
                &b,
            );
            blocks.insert(p, m);
        }
        Ok(CochainComplex::new(space, blocks)?.with_eps(self.eps.max(other.eps)))
    }

    /// `C[k]` with differential `(-1)^k d`.
    pub fn shifted(&self, k: i32) -> Self {
        let space = self.space().shifted(k);
        let sign = if k.rem_euclid(2) == 0 { F::one() } else { -F::one() };
        let blocks = self.d.blocks.iter().map(|(p, m)| (p - k, m.scale(&sign))).collect();
        CochainComplex { d: LinearMap { source: space.clone(), target: space, shift: 1, blocks }, eps: self.eps }
    }

    /// Basis order in degree `n` of a tensor product: pairs `(p, n-p)` with `p`
    /// ascending, then row-major in the two factor bases.
    fn tensor_layout(a: &GradedVectorSpace, b: &GradedVectorSpace) -> BTreeMap<i32, Vec<(i32, usize, usize)>> {
        let mut layout: BTreeMap<i32, Vec<(i32, usize, usize)>> = BTreeMap::new();
        for p in a.degrees() {
            for q in b.degrees() {
                let entry = layout.entry(p + q).or_default();
                for i in 0..a.dim(p) {
                    for j in 0..b.dim(q) {
                        entry.push((p, i, j));
                    }
                }
            }
        }
        layout
    }

    /// Tensor product with the Koszul sign `d(a⊗b) = da⊗b + (-1)^{|a|} a⊗db`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let (a, b) = (self.space(), other.space());
        let layout = Self::tensor_layout(a, b);
        let mut labels = BTreeMap::new();
        for (n, cells) in &layout {
            labels.insert(
                *n,
                cells.iter().map(|&(p, i, j)| format!("{}⊗{}", a.labels(p)[i], b.labels(n - p)[j])).collect(),
            );
        }
        let space = GradedVectorSpace::from_labels(labels)?;
        let index = |n: i32, p: i32, i: usize, j: usize| -> Option<usize> {
            layout.get(&n)?.iter().position(|&c| c == (p, i, j))
        };
        let mut blocks = BTreeMap::new();
        for (n, cells) in &layout {
            let mut m = Matrix::zeros(space.dim(n + 1), space.dim(*n));
            for (col, &(p, i, j)) in cells.iter().enumerate() {
                let q = n - p;
                let da = self.d(p);
                for r in 0..da.rows() {
                    let x = &da[(r, i)];
                    if !x.is_exact_zero() {
                        if let Some(row) = index(n + 1, p + 1, r, j) {
                            m[(row, col)] += x.clone();
                        }
                    }
                }
                let db = other.d(q);
                let sign = if p.rem_euclid(2) == 0 { F::one() } else { -F::one() };
                for r in 0..db.rows() {
                    let x = &db[(r, j)];
                    if !x.is_exact_zero() {
                        if let Some(row) = index(n + 1, p, i, r) {
                            m[(row, col)] += sign.clone() * x.clone();
                        }
                    }
                }
            }
            blocks.insert(*n, m);
        }
        Ok(CochainComplex::new(space, blocks)?.with_eps(self.eps.max(other.eps)))
    }

    pub fn to_json(&self) -> Value {
        let blocks: Vec<Value> = self
            .d
            .blocks
            .iter()
            .map(|(p, m)| serde_json::json!({ "degree": p, "matrix": m.to_json() }))
            .collect();
        let mut doc = space_json(self.space());
        if let Value::Object(obj) = &mut doc {
            obj.insert("kind".into(), Value::String(F::KIND.into()));
            obj.insert("blocks".into(), Value::Array(blocks));
        }
        doc
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let doc: ComplexDoc = serde_json::from_value(v.clone()).map_err(|e| AlgebraError::Parse(e.to_string()))?;
        check_kind::<F>(&doc.kind)?;
        let space = SpaceDoc { degrees: doc.degrees, labels: doc.labels }.into_space()?;
        let mut blocks = BTreeMap::new();
        for b in doc.blocks {
            let m = Matrix::from_json(&b.matrix, space.dim(b.degree + 1), space.dim(b.degree))?;
            blocks.insert(b.degree, m);
        }
        CochainComplex::new(space, blocks)
    }
}

impl<F: LinAlg> CochainComplex<F> {
    /// Mapping cone of `f: A → B`: `A[1] ⊕ B` with `d(a, b) = (-da, f a + db)`.
    pub fn cone(f: &LinearMap<F>, a: &Self, b: &Self) -> Result<Self> {
        if f.source() != a.space() || f.target() != b.space() || f.shift() != 0 {
            return Err(AlgebraError::Degree("cone: map must be degree 0 between the given complexes".into()));
        }
        let space = a.space().shifted(1).direct_sum(b.space());
        let mut blocks = BTreeMap::new();
        let degrees: BTreeSet<i32> = a.degree_window().into_iter().map(|p| p - 1).chain(b.degree_window()).collect();
        for n in degrees {
            let da = a.d(n + 1).scale(&-F::one());
            let fa = f.block(n + 1);
            let db = b.d(n);
            let m = Matrix::block2(&da, &Matrix::zeros(da.rows(), db.cols()), &fa, &db);
            blocks.insert(n, m);
        }
        Ok(CochainComplex::new(space, blocks)?.with_eps(a.eps.max(b.eps)))
    }
}

/// `f ⊗ g` for degree-0 maps, compatible with [`CochainComplex::tensor`] layout.
pub fn tensor_maps<F: Scalar>(
    f: &LinearMap<F>,
    g: &LinearMap<F>,
    src: &CochainComplex<F>,
    tgt: &CochainComplex<F>,
) -> Result<LinearMap<F>> {
    if f.shift() != 0 || g.shift() != 0 {
        return Err(AlgebraError::Degree("tensor_maps expects degree-0 maps".into()));
    }
    let src_layout = CochainComplex::<F>::tensor_layout(f.source(), g.source());
    let tgt_layout = CochainComplex::<F>::tensor_layout(f.target(), g.target());
    let mut blocks = BTreeMap::new();
    for (n, cells) in &src_layout {
        let mut m = Matrix::zeros(tgt.dim(*n), src.dim(*n));
        let Some(tcells) = tgt_layout.get(n) else {
            blocks.insert(*n, m);
            continue;
        };
        for (col, &(p, i, j)) in cells.iter().enumerate() {
            let fb = f.block(p);
            let gb = g.block(n - p);
            for (row, &(tp, ti, tj)) in tcells.iter().enumerate() {
                if tp != p {
                    continue;
                }
                let x = fb[(ti, i)].clone() * gb[(tj, j)].clone();
                if !x.is_exact_zero() {
                    m[(row, col)] = x;
                }
            }
        }
        blocks.insert(*n, m);
    }
    LinearMap::new(src.space().clone(), tgt.space().clone(), 0, blocks)
}

#[derive(Serialize, Deserialize)]
struct SpaceDoc {
    degrees: Vec<(i32, usize)>,
    labels: Vec<Vec<String>>,
}

impl SpaceDoc {
    fn into_space(self) -> Result<GradedVectorSpace> {
        if self.degrees.len() != self.labels.len() {
            return Err(AlgebraError::Parse("degrees and labels differ in length".into()));
        }
        let mut map = BTreeMap::new();
        for ((d, n), ls) in self.degrees.into_iter().zip(self.labels) {
            if ls.len() != n {
                return Err(AlgebraError::Parse(format!("degree {d}: dimension {n} but {} labels", ls.len())));
            }
            map.insert(d, ls);
        }
        GradedVectorSpace::from_labels(map)
    }
}

#[derive(Deserialize)]
struct BlockDoc {
    degree: i32,
    matrix: Value,
}

#[derive(Deserialize)]
struct ComplexDoc {
    kind: String,
    degrees: Vec<(i32, usize)>,
    labels: Vec<Vec<String>>,
    blocks: Vec<BlockDoc>,
}

#[derive(Deserialize)]
struct MapDoc {
    kind: String,
    shift: i32,
    source: SpaceDoc,
    target: SpaceDoc,
    blocks: Vec<BlockDoc>,
}

fn space_json(s: &GradedVectorSpace) -> Value {
    let doc = SpaceDoc {
        degrees: s.labels.iter().map(|(d, l)| (*d, l.len())).collect(),
        labels: s.labels.values().cloned().collect(),
    };
    serde_json::to_value(doc).unwrap_or(Value::Null)
}

fn check_kind<F: Scalar>(kind: &str) -> Result<()> {
    if kind != F::KIND {
        return Err(AlgebraError::Parse(format!("expected {} entries, document holds {kind}", F::KIND)));
    }
    Ok(())
}
