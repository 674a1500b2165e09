//! Bulk gauge fields coupled to a line defect: the semidirect product
//! `(Ω•(U) ⊗ 𝔤) ⋉ (i_D)_*(Ω•(D) ⊗ V[−1])` on a finite model.
//!
//! Forms are polynomial forms in `n` variables truncated by weight
//! (polynomial degree plus form degree). The truncation is a graded
//! commutative dg algebra with the cohomology of a point, and restricting to
//! the first coordinate axis is a map of dg algebras, so the bracket tables
//! are exact rather than homotopy-coherent.

use std::collections::{BTreeMap, HashMap};

use defectwb_algebra::forms::wedge_masks;
use defectwb_algebra::{Scalar, QI};
use serde::Serialize;

use super::lie::{LieAlgebra, ModuleFailure, Representation};
use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Monomial {
    exps: Vec<u32>,
    mask: u32,
}

impl Monomial {
    fn weight(&self) -> u32 {
        self.exps.iter().sum::<u32>() + self.mask.count_ones()
    }
}

/// Polynomial forms `x^a dx_I` of weight `|a| + |I| ≤ cap` in `nvars` variables.
#[derive(Debug, Clone)]
pub struct TruncatedForms {
    nvars: usize,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl TruncatedForms {
    pub fn new(nvars: usize, cap: u32) -> Result<Self> {
        if nvars == 0 || nvars > 6 {
            return domain(format!("{nvars} variables outside 1..=6"));
        }
        let mut basis = Vec::new();
        let mut exps = vec![vec![]];
        for _ in 0..nvars {
            exps = exps.into_iter().flat_map(|p: Vec<u32>| (0..=cap).map(move |e| [p.clone(), vec![e]].concat())).collect();
        }
        for e in exps {
            for mask in 0u32..(1 << nvars) {
                let m = Monomial { exps: e.clone(), mask };
                if m.weight() <= cap {
                    basis.push(m);
                }
            }
        }
        basis.sort_by_key(|m| (m.mask.count_ones(), m.weight(), m.clone()));
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Ok(TruncatedForms { nvars, basis, index })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].mask.count_ones() as i32
    }

    pub fn label(&self, i: usize) -> String {
        let m = &self.basis[i];
        let mut parts: Vec<String> = m
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| if e == 1 { format!("x{j}") } else { format!("x{j}^{e}") })
            .collect();
        parts.extend((0..self.nvars).filter(|j| m.mask & (1 << j) != 0).map(|j| format!("dx{j}")));
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("·")
        }
    }

    /// Product of basis elements, dropped above the cap.
    pub fn product(&self, i: usize, j: usize) -> Option<(i64, usize)> {
        let (a, b) = (&self.basis[i], &self.basis[j]);
        let (sign, mask) = wedge_masks(a.mask, b.mask)?;
        let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
        self.index.get(&Monomial { exps, mask }).map(|&k| (sign as i64, k))
    }

    pub fn d(&self, i: usize) -> Vec<(i64, usize)> {
        let m = &self.basis[i];
        (0..self.nvars)
            .filter(|&j| m.exps[j] > 0)
            .filter_map(|j| {
                let (sign, mask) = wedge_masks(1 << j, m.mask)?;
                let mut exps = m.exps.clone();
                exps[j] -= 1;
                let k = self.index[&Monomial { exps, mask }];
                Some((sign as i64 * m.exps[j] as i64, k))
            })
            .collect()
    }

    /// Pullback to the first coordinate axis, as a map into `target` (one
    /// variable, same cap).
    pub fn restrict(&self, i: usize, target: &TruncatedForms) -> Option<usize> {
        let m = &self.basis[i];
        if m.exps[1..].iter().any(|&e| e > 0) || m.mask & !1 != 0 {
            return None;
        }
        target.index.get(&Monomial { exps: vec![m.exps[0]], mask: m.mask }).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// `ΠV[−1]`: fermionic defect fields.
    Odd,
    /// `V[−1]` without the parity shift.
    Even,
}

type Sparse = Vec<(usize, QI)>;

/// A finite graded Lie algebra with differential, by tables.
#[derive(Debug, Clone)]
pub struct CoupledDgla {
    pub labels: Vec<String>,
    pub degrees: Vec<i32>,
    /// Koszul parity used in the sign rule.
    pub parities: Vec<u8>,
    pub bulk_len: usize,
    table: Vec<Vec<Sparse>>,
    differential: Vec<Sparse>,
}

fn add_into(acc: &mut BTreeMap<usize, QI>, k: usize, c: QI) {
    let e = acc.entry(k).or_insert_with(QI::zero);
    *e += c;
    if e.is_exact_zero() {
        acc.remove(&k);
    }
}

impl CoupledDgla {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn defect_len(&self) -> usize {
        self.dim() - self.bulk_len
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &[(usize, QI)] {
        &self.table[a][b]
    }

    fn bracket_vec(&self, a: usize, v: &BTreeMap<usize, QI>, left: bool) -> BTreeMap<usize, QI> {
        let mut out = BTreeMap::new();
        for (&k, c) in v {
            let terms = if left { &self.table[a][k] } else { &self.table[k][a] };
            for (l, s) in terms {
                add_into(&mut out, *l, c.clone() * s.clone());
            }
        }
        out
    }

    fn sign(&self, a: usize, b: usize) -> QI {
        if self.parities[a] & self.parities[b] == 1 {
            -QI::one()
        } else {
            QI::one()
        }
    }

    /// Exhaustive checks on basis elements: graded antisymmetry, Jacobi,
    /// Leibniz and `d² = 0`.
    pub fn check(&self) -> JacobiReport {
        let n = self.dim();
        let name = |i: usize| self.labels[i].clone();
        let mut failure: Option<Vec<String>> = None;
        let mut antisymmetry = true;
        for a in 0..n {
            for b in 0..n {
                let mut sum: BTreeMap<usize, QI> = BTreeMap::new();
                for (k, c) in &self.table[a][b] {
                    add_into(&mut sum, *k, c.clone());
                }
                let s = self.sign(a, b);
                for (k, c) in &self.table[b][a] {
                    add_into(&mut sum, *k, s.clone() * c.clone());
                }
                if !sum.is_empty() && antisymmetry {
                    antisymmetry = false;
                    failure.get_or_insert_with(|| vec![name(a), name(b)]);
                }
            }
        }
        let mut jacobi = true;
        'outer: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    // [a,[b,c]] − [[a,b],c] − (−1)^{ab}[b,[a,c]]
                    let bc: BTreeMap<usize, QI> = self.table[b][c].iter().cloned().collect();
                    let mut total = self.bracket_vec(a, &bc, true);
                    let ab: BTreeMap<usize, QI> = self.table[a][b].iter().cloned().collect();
                    for (k, v) in self.bracket_vec(c, &ab, false) {
                        add_into(&mut total, k, -v);
                    }
                    let ac: BTreeMap<usize, QI> = self.table[a][c].iter().cloned().collect();
                    let s = self.sign(a, b);
                    for (k, v) in self.bracket_vec(b, &ac, true) {
                        add_into(&mut total, k, -(s.clone() * v));
                    }
                    if !total.is_empty() {
                        jacobi = false;
                        failure.get_or_insert_with(|| vec![name(a), name(b), name(c)]);
                        break 'outer;
                    }
                }
            }
        }
        let mut leibniz = true;
        'leib: for a in 0..n {
            for b in 0..n {
                let ab: BTreeMap<usize, QI> = self.table[a][b].iter().cloned().collect();
                let mut total = BTreeMap::new();
                for (k, c) in &ab {
                    for (l, s) in &self.differential[*k] {
                        add_into(&mut total, *l, c.clone() * s.clone());
                    }
                }
                let da: BTreeMap<usize, QI> = self.differential[a].iter().cloned().collect();
                for (k, v) in self.bracket_vec(b, &da, false) {
                    add_into(&mut total, k, -v);
                }
                let db: BTreeMap<usize, QI> = self.differential[b].iter().cloned().collect();
                let s = if self.parities[a] == 1 { -QI::one() } else { QI::one() };
                for (k, v) in self.bracket_vec(a, &db, true) {
                    add_into(&mut total, k, -(s.clone() * v));
                }
                if !total.is_empty() {
                    leibniz = false;
                    failure.get_or_insert_with(|| vec![name(a), name(b)]);
                    break 'leib;
                }
            }
        }
        let d_squared = (0..n).all(|a| {
            let mut total = BTreeMap::new();
            for (k, c) in &self.differential[a] {
                for (l, s) in &self.differential[*k] {
                    add_into(&mut total, *l, c.clone() * s.clone());
                }
            }
            total.is_empty()
        });
        JacobiReport {
            elements: n,
            triples: n * n * n,
            antisymmetry,
            jacobi,
            leibniz,
            d_squared,
            passed: antisymmetry && jacobi && leibniz && d_squared,
            first_failure: failure,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct JacobiReport {
    pub elements: usize,
    pub triples: usize,
    pub antisymmetry: bool,
    pub jacobi: bool,
    pub leibniz: bool,
    pub d_squared: bool,
    pub passed: bool,
    pub first_failure: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DefectDescriptor {
    pub algebra: String,
    pub bulk_dim: usize,
    pub module_dim: usize,
    pub parity: Parity,
    /// `V = 0`: only the bulk dg Lie algebra remains.
    pub trivial: bool,
    pub module_failure: Option<ModuleFailure>,
    pub jacobi: JacobiReport,
}

/// Builds the coupled algebra on a `bulk_dim`-dimensional bulk with the defect
/// along the first axis, and runs the exhaustive checks. An invalid module is
/// not rejected: the failure shows up in the returned reports.
pub fn coupled_dgla(
    alg: &LieAlgebra,
    rep: &Representation,
    parity: Parity,
    bulk_dim: usize,
    cap: u32,
) -> Result<(CoupledDgla, DefectDescriptor)> {
    if rep.matrices.len() != alg.dim() {
        return domain("representation does not match the algebra");
    }
    let bulk = TruncatedForms::new(bulk_dim, cap)?;
    let line = TruncatedForms::new(1, cap)?;
    let g = alg.dim();
    let v = rep.dim;
    let mut labels = Vec::new();
    let mut degrees = Vec::new();
    let mut parities = Vec::new();
    for f in 0..bulk.dim() {
        for x in alg.labels() {
            labels.push(format!("{}⊗{x}", bulk.label(f)));
            degrees.push(bulk.degree(f));
            parities.push((bulk.degree(f) & 1) as u8);
        }
    }
    let bulk_len = labels.len();
    let shift_parity = match parity {
        Parity::Odd => 0,
        Parity::Even => 1,
    };
    for f in 0..line.dim() {
        for i in 0..v {
            labels.push(format!("{}⊗v{i}", line.label(f)));
            degrees.push(line.degree(f) + 1);
            parities.push(((line.degree(f) + shift_parity) & 1) as u8);
        }
    }
    let n = labels.len();
    let bulk_idx = |f: usize, x: usize| f * g + x;
    let line_idx = |f: usize, i: usize| bulk_len + f * v + i;

    let mut table = vec![vec![Vec::new(); n]; n];
    for fa in 0..bulk.dim() {
        for fb in 0..bulk.dim() {
            let Some((sign, fc)) = bulk.product(fa, fb) else { continue };
            for x in 0..g {
                for y in 0..g {
                    let entries: Sparse = alg
                        .structure(x, y)
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_exact_zero())
                        .map(|(z, c)| (bulk_idx(fc, z), QI::from_q(c) * QI::from_i64(sign)))
                        .collect();
                    table[bulk_idx(fa, x)][bulk_idx(fb, y)] = entries;
                }
            }
        }
    }
    for fa in 0..bulk.dim() {
        let Some(ra) = bulk.restrict(fa, &line) else { continue };
        for fb in 0..line.dim() {
            let Some((sign, fc)) = line.product(ra, fb) else { continue };
            for x in 0..g {
                let rho = &rep.matrices[x];
                for i in 0..v {
                    let (a, b) = (bulk_idx(fa, x), line_idx(fb, i));
                    let entries: Sparse = (0..v)
                        .filter(|&j| !rho[(j, i)].is_exact_zero())
                        .map(|j| (line_idx(fc, j), rho[(j, i)].clone() * QI::from_i64(sign)))
                        .collect();
                    let flip = if parities[a] & parities[b] == 1 { QI::one() } else { -QI::one() };
                    table[b][a] = entries.iter().map(|(k, c)| (*k, c.clone() * flip.clone())).collect();
                    table[a][b] = entries;
                }
            }
        }
    }
    let mut differential = vec![Vec::new(); n];
    for f in 0..bulk.dim() {
        for x in 0..g {
            differential[bulk_idx(f, x)] =
                bulk.d(f).into_iter().map(|(c, k)| (bulk_idx(k, x), QI::from_i64(c))).collect();
        }
    }
    for f in 0..line.dim() {
        for i in 0..v {
            differential[line_idx(f, i)] =
                line.d(f).into_iter().map(|(c, k)| (line_idx(k, i), QI::from_i64(c))).collect();
        }
    }
    let dgla = CoupledDgla { labels, degrees, parities, bulk_len, table, differential };
    let jacobi = dgla.check();
    let descriptor = DefectDescriptor {
        algebra: alg.name().into(),
        bulk_dim,
        module_dim: v,
        parity,
        trivial: v == 0,
        module_failure: rep.module_failure(alg),
        jacobi,
    };
    Ok((dgla, descriptor))
}
