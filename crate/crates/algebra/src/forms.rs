//! Constant-coefficient exterior algebra and Fourier-truncated differential
//! forms on flat tori, over the Gaussian rationals.
//!
//! A form `e^{i k·x} dx_I` is stored per Fourier mode `k`; the twisted
//! differential is `d + i a` for a constant flat background `a`, which acts on
//! mode `k` as `i (k + a) ∧`.

use std::collections::BTreeMap;

use crate::error::{AlgebraError, Result};
use crate::graded::{CochainComplex, GradedVectorSpace};
use crate::matrix::Matrix;
use crate::pairing::ShiftedPairing;
use crate::scalar::{Scalar, Q, QI};

/// Basis of `Λ^p(R^n)` as bitmasks, ordered by increasing mask within each `p`.
pub fn exterior_basis(n: usize, p: usize) -> Vec<u32> {
    (0u32..(1 << n)).filter(|m| m.count_ones() as usize == p).collect()
}

/// `dx_I ∧ dx_J = sign · dx_{I∪J}`, or `None` when they overlap.
pub fn wedge_masks(i: u32, j: u32) -> Option<(i32, u32)> {
    if i & j != 0 {
        return None;
    }
    // Count inversions: pairs (a in I, b in J) with a > b.
    let mut swaps = 0;
    let mut rest = j;
    while rest != 0 {
        let b = rest.trailing_zeros();
        swaps += (i >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    Some((if swaps % 2 == 0 { 1 } else { -1 }, i | j))
}

pub fn mask_label(mask: u32) -> String {
    if mask == 0 {
        return "1".into();
    }
    (0..32).filter(|b| mask & (1 << b) != 0).map(|b| format!("dx{b}")).collect::<Vec<_>>().join("^")
}

/// Matrix of `v ∧ ·: Λ^p → Λ^{p+1}` for a 1-form `v` with components `v[j]`.
pub fn wedge_matrix<F: Scalar>(n: usize, p: usize, v: &[F]) -> Matrix<F> {
    let src = exterior_basis(n, p);
    let tgt = exterior_basis(n, p + 1);
    let mut m = Matrix::zeros(tgt.len(), src.len());
    for (c, &mi) in src.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            if let Some((s, out)) = wedge_masks(1 << j, mi) {
                let r = tgt.iter().position(|&t| t == out).expect("basis covers all masks");
                m[(r, c)] += F::from_i64(s as i64) * vj.clone();
            }
        }
    }
    m
}

/// Flat Hodge star on `Λ^p(R^n)` with the standard orientation:
/// `α ∧ ⋆β = ⟨α, β⟩ vol`.
pub fn hodge_star<F: Scalar>(n: usize, p: usize) -> Matrix<F> {
    let src = exterior_basis(n, p);
    let tgt = exterior_basis(n, n - p);
    let full = (1u32 << n) - 1;
    let mut m = Matrix::zeros(tgt.len(), src.len());
    for (c, &mi) in src.iter().enumerate() {
        let comp = full & !mi;
        let (s, _) = wedge_masks(mi, comp).expect("complement is disjoint");
        let r = tgt.iter().position(|&t| t == comp).expect("complement in basis");
        m[(r, c)] = F::from_i64(s as i64);
    }
    m
}

/// Lattice points `k ∈ Z^n` with `max |k_i| ≤ cutoff`, lexicographic.
pub fn modes(n: usize, cutoff: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for prefix in &out {
            for k in -cutoff..=cutoff {
                let mut v = prefix.clone();
                v.push(k);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

pub fn mode_label(k: &[i64]) -> String {
    let parts: Vec<String> = k.iter().map(i64::to_string).collect();
    format!("k=({})", parts.join(","))
}

/// `i (k + a)` as a covector with Gaussian rational entries.
pub fn twisted_covector(k: &[i64], background: &[Q]) -> Vec<QI> {
    k.iter()
        .enumerate()
        .map(|(j, &kj)| {
            let a = background.get(j).cloned().unwrap_or_else(<Q as Scalar>::zero);
            QI::imag(Q::from(num_bigint::BigInt::from(kj)) + a)
        })
        .collect()
}

/// Fourier-truncated de Rham complex of the flat `n`-torus in form degrees
/// `0..=n`. Basis in degree `p`: modes (lexicographic) × `Λ^p` masks.
#[derive(Debug, Clone)]
pub struct TorusForms {
    pub n: usize,
    pub cutoff: i64,
    pub background: Vec<Q>,
    modes: Vec<Vec<i64>>,
}

impl TorusForms {
    pub fn new(n: usize, cutoff: i64, background: Vec<Q>) -> Result<Self> {
        if n == 0 || n > 8 {
            return Err(AlgebraError::Domain(format!("torus dimension {n} outside 1..=8")));
        }
        if cutoff < 0 {
            return Err(AlgebraError::Domain("cutoff must be non-negative".into()));
        }
        if background.len() > n {
            return Err(AlgebraError::Domain("background has too many components".into()));
        }
        Ok(TorusForms { n, cutoff, background, modes: modes(n, cutoff) })
    }

    pub fn modes(&self) -> &[Vec<i64>] {
        &self.modes
    }

    /// Index of the mode `−k`, present because the mode set is symmetric.
    pub fn opposite(&self, idx: usize) -> usize {
        self.modes.len() - 1 - idx
    }

    pub fn space(&self) -> GradedVectorSpace {
        let mut labels = BTreeMap::new();
        for p in 0..=self.n {
            let basis = exterior_basis(self.n, p);
            let ls = self
                .modes
                .iter()
                .flat_map(|k| basis.iter().map(move |&m| format!("{} {}", mode_label(k), mask_label(m))))
                .collect();
            labels.insert(p as i32, ls);
        }
        GradedVectorSpace::from_labels(labels).expect("labels are distinct")
    }

    /// Global index of `(mode, mask)` in degree `p`.
    pub fn index(&self, p: usize, mode: usize, mask: u32) -> usize {
        let basis = exterior_basis(self.n, p);
        mode * basis.len() + basis.iter().position(|&m| m == mask).expect("mask of degree p")
    }

    /// Per-mode differential `Λ^p → Λ^{p+1}`.
    pub fn mode_d(&self, mode: usize, p: usize) -> Matrix<QI> {
        wedge_matrix(self.n, p, &twisted_covector(&self.modes[mode], &self.background))
    }

    pub fn complex(&self) -> CochainComplex<QI> {
        let space = self.space();
        let mut blocks = BTreeMap::new();
        for p in 0..self.n {
            let (bs, bt) = (exterior_basis(self.n, p).len(), exterior_basis(self.n, p + 1).len());
            let nm = self.modes.len();
            let mut m = Matrix::zeros(nm * bt, nm * bs);
            for mode in 0..nm {
                let local = self.mode_d(mode, p);
                for r in 0..bt {
                    for c in 0..bs {
                        m[(mode * bt + r, mode * bs + c)] = local[(r, c)].clone();
                    }
                }
            }
            blocks.insert(p as i32, m);
        }
        CochainComplex::new(space, blocks).expect("block shapes match")
    }

    /// `∫ α ∧ β` between form degrees `p` and `n − p`, normalized to unit volume.
    pub fn wedge_integral(&self, p: usize) -> Matrix<QI> {
        let q = self.n - p;
        let (bp, bq) = (exterior_basis(self.n, p), exterior_basis(self.n, q));
        let nm = self.modes.len();
        let mut m = Matrix::zeros(nm * bp.len(), nm * bq.len());
        for mode in 0..nm {
            let opp = self.opposite(mode);
            for (i, &a) in bp.iter().enumerate() {
                for (j, &b) in bq.iter().enumerate() {
                    if let Some((s, _)) = wedge_masks(a, b) {
                        m[(mode * bp.len() + i, opp * bq.len() + j)] = QI::from_i64(s as i64);
                    }
                }
            }
        }
        m
    }

    /// Wedge-and-integrate pairing `⟨α, β⟩ = (−1)^{|α|} ∫ α ∧ β` (form degree
    /// `|α|`) on the shifted complex `Ω[1]`; shift `n − 2`. Requires a zero
    /// background.
    pub fn shifted_pairing(&self) -> Result<ShiftedPairing<QI>> {
        if self.background.iter().any(|a| !a.is_exact_zero()) {
            return Err(AlgebraError::Domain("the untwisted pairing needs a zero background".into()));
        }
        let c = self.complex().shifted(1);
        let k = self.n as i32 - 2;
        // The sign (−1)^p makes the pairing graded skew and d-invariant on Ω[1].
        let blocks = (0..=self.n)
            .map(|p| {
                let w = self.wedge_integral(p);
                let w = if p % 2 == 1 { w.scale(&-QI::one()) } else { w };
                (p as i32 - 1, w)
            })
            .collect();
        ShiftedPairing::new(c, k, blocks)
    }
}
