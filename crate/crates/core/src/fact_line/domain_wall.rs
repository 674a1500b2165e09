//! BF domain walls compactified on a circle: `V = H•(S¹) ⊗ (g ⊕ g*)`.

use defectwb_algebra::cellular::cw_circle;
use defectwb_algebra::{cohomology, Matrix, Scalar, Q};
use serde::Serialize;

use super::prefact::{build_defect_prefact, PrefactLine, SpaceKind};
use super::weyl::{LagrangianSubspace, SymplecticVS};
use crate::collapse::OpenSet1D;
use crate::error::{domain, Result};

/// The compactified phase space. Basis `A0_i, A1_i, B0_i, B1_i` (cohomology
/// degree of the circle class, then Lie index) with `ω(A0_i, B1_i) =
/// ω(A1_i, B0_i) = 1`, the pairing of `H⁰ ⊗ H¹` by integration combined
/// with the canonical pairing of `g` and `g*`. The cohomological grading is
/// not tracked.
pub fn domain_wall_space(lie_dim: usize, circle_cells: usize) -> Result<SymplecticVS> {
    let h = cohomology(&cw_circle::<Q>(circle_cells.max(1))?);
    if h.dim(0) != 1 || h.dim(1) != 1 {
        return domain("circle model does not have the cohomology of a circle");
    }
    let d = lie_dim;
    let mut labels = Vec::new();
    for field in ["A", "B"] {
        for deg in 0..2 {
            for i in 0..d {
                labels.push(format!("{field}{deg}_{i}"));
            }
        }
    }
    let mut omega = Matrix::zeros(4 * d, 4 * d);
    let idx = |field: usize, deg: usize, i: usize| field * 2 * d + deg * d + i;
    for i in 0..d {
        for (da, db) in [(0, 1), (1, 0)] {
            let (a, b) = (idx(0, da, i), idx(1, db, i));
            omega[(a, b)] = Q::one();
            omega[(b, a)] = -Q::one();
        }
    }
    SymplecticVS::new(labels, omega)
}

/// The A-field summand, i.e. the condition `B = 0`.
pub fn a_field_lagrangian(v: &SymplecticVS) -> Result<LagrangianSubspace> {
    let names: Vec<&str> = v.labels().iter().filter(|l| l.starts_with('A')).map(String::as_str).collect();
    LagrangianSubspace::from_labels(v, &names)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DomainWallReport {
    pub lie_dim: usize,
    pub v_dim: usize,
    pub components: Vec<(f64, f64)>,
    pub kinds: Vec<SpaceKind>,
    /// Number of polynomial generators of each component's space.
    pub generators: Vec<usize>,
    pub module_variables: (usize, usize),
    pub scalars_only: bool,
}

pub struct DomainWall {
    pub line: PrefactLine,
    pub report: DomainWallReport,
}

/// The defect assignment for the wall on the open `u` of the collar.
pub fn domain_wall_assignment(u: &OpenSet1D, lie_dim: usize, l0: Option<LagrangianSubspace>, l1: Option<LagrangianSubspace>) -> Result<DomainWall> {
    let v = domain_wall_space(lie_dim, 2)?;
    let l0 = match l0 {
        Some(l) => l,
        None => a_field_lagrangian(&v)?,
    };
    let l1 = match l1 {
        Some(l) => l,
        None => a_field_lagrangian(&v)?,
    };
    let line = build_defect_prefact(&v, &l0, &l1, 0.25)?;
    let kinds = line.space_of(u);
    let (a, b) = line.defect_vars().expect("defect line");
    let generators = kinds
        .iter()
        .map(|k| match k {
            SpaceKind::Algebra => v.dim(),
            SpaceKind::Defect => a + b,
        })
        .collect::<Vec<_>>();
    let report = DomainWallReport {
        lie_dim,
        v_dim: v.dim(),
        components: u.intervals().to_vec(),
        kinds,
        scalars_only: generators.iter().all(|&g| g == 0),
        generators,
        module_variables: (a, b),
    };
    Ok(DomainWall { line, report })
}
