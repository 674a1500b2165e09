//! Isotropy and Lagrangian checks for maps into a complex with a shifted pairing.
//!
//! Two decidable stand-ins for the derived nondegeneracy condition are
//! computed: degreewise self-perpendicularity of the image, and the same
//! condition for the induced map on cohomology. Both are taken modulo the
//! radical of the ambient pairing, which is always reported.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cohomology::{check_chain_map, cohomology, induced_map};
use crate::error::{AlgebraError, Result};
use crate::graded::{CochainComplex, LinearMap};
use crate::matrix::{LinAlg, Matrix};
use crate::pairing::ShiftedPairing;

/// A chain map `f: L → ambient` proposed as a boundary condition. In the
/// strict linear setting the trivialization of `f*ω` is the zero homotopy, so
/// no witness is stored.
#[derive(Debug, Clone)]
pub struct LagrangianCandidate<F> {
    pub source: CochainComplex<F>,
    pub map: LinearMap<F>,
}

impl<F: LinAlg> LagrangianCandidate<F> {
    pub fn new(source: CochainComplex<F>, map: LinearMap<F>) -> Self {
        LagrangianCandidate { source, map }
    }

    /// Inclusion of the span of `vectors[p]` (columns) in each degree, as a
    /// complex with the restricted differential. Fails if the span is not a
    /// subcomplex.
    pub fn subcomplex(ambient: &CochainComplex<F>, vectors: &BTreeMap<i32, Vec<Vec<F>>>) -> Result<Self> {
        let eps = ambient.eps();
        let mut labels = BTreeMap::new();
        let mut bases = BTreeMap::new();
        for (&p, vs) in vectors {
            let n = ambient.dim(p);
            if vs.iter().any(|v| v.len() != n) {
                return Err(AlgebraError::Shape { degree: p, detail: "subspace vector has wrong length".into() });
            }
            let m = Matrix::from_columns(n, vs);
            let basis = m.image(eps);
            labels.insert(p, (0..basis.len()).map(|i| format!("l{p}_{i}")).collect());
            bases.insert(p, Matrix::from_columns(n, &basis));
        }
        let space = crate::graded::GradedVectorSpace::from_labels(labels)?;
        let mut d_blocks = BTreeMap::new();
        for (&p, basis) in &bases {
            let Some(next) = bases.get(&(p + 1)) else {
                let image = ambient.d(p).mul(basis);
                if !image.is_zero(eps) && basis.cols() > 0 {
                    return Err(AlgebraError::Domain(format!("span in degree {p} is not closed under d")));
                }
                continue;
            };
            let image = ambient.d(p).mul(basis);
            let mut cols = Vec::new();
            for v in image.columns() {
                let x = next.solve(&v, eps).ok_or_else(|| {
                    AlgebraError::Domain(format!("span in degree {p} is not closed under d"))
                })?;
                cols.push(x);
            }
            d_blocks.insert(p, Matrix::from_columns(next.cols(), &cols));
        }
        let source = CochainComplex::new(space.clone(), d_blocks)?.with_eps(ambient.eps());
        let map = LinearMap::new(space, ambient.space().clone(), 0, bases)?;
        Ok(LagrangianCandidate { source, map })
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct IsotropyReport {
    pub isotropic: bool,
    pub residual: f64,
}

fn check_target<F: LinAlg>(l: &LagrangianCandidate<F>, p: &ShiftedPairing<F>) -> Result<()> {
    if l.map.target() != p.complex().space() {
        return Err(AlgebraError::Degree("candidate does not map into the paired complex".into()));
    }
    check_chain_map(&l.map, &l.source, p.complex())
}

/// True iff `⟨f x, f y⟩ = 0` for all basis pairs.
pub fn is_isotropic<F: LinAlg>(l: &LagrangianCandidate<F>, p: &ShiftedPairing<F>) -> Result<IsotropyReport> {
    check_target(l, p)?;
    let k = p.shift();
    let mut residual: f64 = 0.0;
    for d in l.source.space().degrees() {
        let fp = l.map.block(d);
        let fq = l.map.block(k - d);
        let g = fp.transpose().mul(&p.block(d)).mul(&fq);
        residual = residual.max(g.max_abs());
    }
    Ok(IsotropyReport { isotropic: residual <= p.complex().eps(), residual })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LagrangianReport {
    pub isotropic: bool,
    pub strict_self_perp: bool,
    pub cohomology_injective: bool,
    pub cohomology_lagrangian: bool,
    /// Ambient pairing radical per degree.
    pub radical_dims: BTreeMap<i32, usize>,
    pub degenerate_ambient: bool,
    /// `dim (image + radical)/radical` per degree.
    pub image_dims_mod_radical: BTreeMap<i32, usize>,
    /// `dim ambient/radical` per degree.
    pub ambient_dims_mod_radical: BTreeMap<i32, usize>,
    /// `Σ dim image/rad = ½ Σ dim ambient/rad`.
    pub half_dimension: bool,
}

/// Checks `span(image) + radical = image^⊥` degreewise, given bases in the
/// ambient coordinates. Returns (holds, dims of image mod radical, dims of ambient mod radical).
fn self_perp<F: LinAlg>(
    degrees: &[i32],
    dims: &BTreeMap<i32, usize>,
    image: &BTreeMap<i32, Vec<Vec<F>>>,
    form: &dyn Fn(i32) -> Matrix<F>,
    shift: i32,
    eps: f64,
) -> (bool, BTreeMap<i32, usize>, BTreeMap<i32, usize>) {
    let mut ok = true;
    let mut img_dims = BTreeMap::new();
    let mut amb_dims = BTreeMap::new();
    for &p in degrees {
        let n = dims.get(&p).copied().unwrap_or(0);
        let q = shift - p;
        // form(q): dim q × dim p, rows indexed by the partner degree.
        let w = form(q);
        let radical = w.kernel(eps);
        let img = image.get(&p).cloned().unwrap_or_default();
        let mut span = img.clone();
        span.extend(radical.iter().cloned());
        let span_rank = if span.is_empty() { 0 } else { Matrix::from_columns(n, &span).rank(eps) };
        let partner = image.get(&q).cloned().unwrap_or_default();
        let perp_dim = if partner.is_empty() {
            n
        } else {
            let rows = Matrix::from_columns(w.rows(), &partner).transpose().mul(&w);
            n - rows.rank(eps)
        };
        if span_rank != perp_dim {
            ok = false;
        }
        img_dims.insert(p, span_rank - radical.len());
        amb_dims.insert(p, n - radical.len());
    }
    (ok, img_dims, amb_dims)
}

pub fn is_lagrangian<F: LinAlg>(l: &LagrangianCandidate<F>, p: &ShiftedPairing<F>) -> Result<LagrangianReport> {
    let iso = is_isotropic(l, p)?;
    let amb = p.complex();
    let eps = amb.eps();
    let k = p.shift();
    let degrees: Vec<i32> = {
        let mut ds: Vec<i32> = amb.space().degrees();
        for d in amb.space().degrees() {
            if !ds.contains(&(k - d)) {
                ds.push(k - d);
            }
        }
        ds.sort_unstable();
        ds
    };

    let image: BTreeMap<i32, Vec<Vec<F>>> = degrees.iter().map(|&d| (d, l.map.block(d).image(eps))).collect();
    let dims = amb.space().dims();
    let form = |q: i32| p.block(q);
    let (perp_ok, img_dims, amb_dims) = self_perp(&degrees, &dims, &image, &form, k, eps);
    let strict_self_perp = iso.isotropic && perp_ok;

    let radical_dims: BTreeMap<i32, usize> =
        amb.space().degrees().into_iter().map(|d| (d, p.radical(d).len())).collect();
    let degenerate_ambient = radical_dims.values().any(|&n| n > 0);

    // Cohomology level.
    let hl = cohomology(&l.source);
    let ha = cohomology(amb);
    let mut injective = true;
    let mut h_image = BTreeMap::new();
    for &d in &degrees {
        if hl.dim(d) == 0 {
            continue;
        }
        let m = if ha.dim(d) == 0 { Matrix::zeros(0, hl.dim(d)) } else { induced_map(&l.map, &hl, &ha, d)? };
        if m.rank(eps) != hl.dim(d) {
            injective = false;
        }
        h_image.insert(d, m.image(eps));
    }
    let h_dims: BTreeMap<i32, usize> = degrees.iter().map(|&d| (d, ha.dim(d))).collect();
    let h_form = |q: i32| p.cohomology_block(ha.reps(q), ha.reps(k - q), q);
    let (h_perp_ok, _, _) = self_perp(&degrees, &h_dims, &h_image, &h_form, k, eps);
    let cohomology_lagrangian = iso.isotropic && injective && h_perp_ok;

    let img_total: usize = img_dims.values().sum();
    let amb_total: usize = amb_dims.values().sum();
    Ok(LagrangianReport {
        isotropic: iso.isotropic,
        strict_self_perp,
        cohomology_injective: injective,
        cohomology_lagrangian,
        radical_dims,
        degenerate_ambient,
        image_dims_mod_radical: img_dims,
        ambient_dims_mod_radical: amb_dims,
        half_dimension: 2 * img_total == amb_total,
    })
}
