//! General position graphs of flags: construction, closed-form counts,
//! permutation groups and automorphism search.

pub mod autsearch;
pub mod combinatorics;
pub mod error;
pub mod formulas;
pub mod graphs;
pub mod permgroup;
pub mod verify;

pub use autsearch::{aut_order, automorphism_generators, colour_refine, Colouring, SearchBudget};
pub use combinatorics::{
    binomial, enumerate_flags, enumerate_subsets, flag_count, Flag, FlagType, Subset,
};
pub use error::{Error, Result};
pub use graphs::{build_aig, build_gpg, build_kneser, Graph, GraphKind};
pub use permgroup::{group_order, Permutation, PermutationGroup};
pub use verify::{run_suite, Report, SuiteParams};
