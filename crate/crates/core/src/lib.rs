//! Polynomial eigenfunctions of the transfer operator for congruence
//! subgroups of the modular group, computed as nullspaces of exact integer
//! linear systems and compared with Eichler cohomology dimensions.

pub mod eichler;
pub mod error;
pub mod induced;
pub mod lewis;
pub mod linalg;
pub mod poly;
pub mod psl2;
pub mod reference;

pub use eichler::{dim_automorphic, dim_cusp, dim_eichler, dim_upsilon_formula, eichler_prediction, EichlerPrediction};
pub use error::{Error, Result};
pub use induced::{chi_of_word, reflection, verify_relations, Generator, GeneratorWord, PermMatrix};
pub use lewis::{
    build_system, build_system_for_table, check_conjecture, dim_eigenspace, solve_system, DimOutcome, DimReport,
    Lambda, LewisSystem, SystemKind, UnknownLayout,
};
pub use linalg::{nullspace_basis, rank, rank_exact, rank_modular, IntMatrix, RankMethod, RankResult, RankStrategy};
pub use poly::{compile_slash, LinMap, PolyVec};
pub use psl2::{
    coset_table, group_index, surface_invariants, CosetTable, Family, GroupSpec, Mat2Z, ProjMat2ZN, SurfaceInvariants,
};
pub use reference::{compare_with_printed, Annotation, Comparison, ReferenceCell};

/// Version string recorded in outputs and cache keys.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
