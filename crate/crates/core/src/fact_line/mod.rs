//! One-dimensional prefactorization algebras with a point defect.

pub mod classical;
pub mod domain_wall;
pub mod fock;
pub mod poly;
pub mod prefact;
pub mod weyl;

pub use classical::{check_coisotropy, check_hbar_identity, check_restriction, restrict};
pub use domain_wall::{domain_wall_assignment, domain_wall_space, DomainWall, DomainWallReport};
pub use fock::{fock_act, FockSpace, FockVector, Side};
pub use poly::{HPoly, Poly};
pub use prefact::{
    build_defect_prefact, check_locality, check_prefact_axioms, classical_defect_prefact, evaluate_flat, evaluate_nested,
    sample_locality_cases, ActionConvention, AxiomReport, Flavor, LocalityCase, LocalityReport, PrefactLine, Pushforward,
    SpaceKind, Tree, Value,
};
pub use weyl::{poisson_bracket, weyl_commutator, weyl_mul, LagrangianSubspace, SymplecticVS, WeylElement, DEFAULT_CAP};
