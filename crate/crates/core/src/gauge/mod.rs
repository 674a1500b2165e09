//! Gauge-theoretic defects: Lie algebra data, holonomy, BF Lagrangians, the
//! coupled bulk–defect dg Lie algebra and the minimal-coupling action.

pub mod action;
pub mod bf;
pub mod dgla;
pub mod lie;
pub mod monodromy;

pub use action::{minimal_coupling_action, LineFields};
pub use bf::{
    bf_lagrangian_graph, bf_lagrangian_subalgebra, eom_residuals_bf, sl2_subalgebra, tstar_fiber, winding_cocycle,
    BfLagrangian, BfLagrangianSummary, BfResiduals, CochainField,
};
pub use dgla::{coupled_dgla, CoupledDgla, DefectDescriptor, JacobiReport, Parity, TruncatedForms};
pub use lie::{LieAlgebra, ModuleFailure, Representation};
pub use monodromy::{
    conjugacy_invariants, conjugation_study, fit_slope, max_abs, monodromy, refinement_study, sample_midpoints, to_complex, wilson_loop, CMatrix,
    trig_connection, ConjugationReport, LoopConnection, RefinementReport,
};
