//! Sparse SVM training through its linear-programming formulation.
//!
//! The hinge-loss + L1 objective is rewritten as an LP over nonnegative
//! variables ([`formulation`]), solved either exactly by a simplex method
//! ([`exact`]) or approximately by a norm-aware multiplicative-weights
//! primal-dual method ([`mwu`]) that reads the problem only through counted
//! oracles ([`oracle`]). [`datagen`] produces the synthetic problem families,
//! [`bounds`] evaluates the closed-form norm and risk bounds, and
//! [`experiments`] ties it together into file formats and sweep harnesses.

pub mod bounds;
pub mod datagen;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod formulation;
pub mod mwu;
pub mod oracle;
pub mod types;

pub use error::{Error, Result};
pub use exact::{solve_exact, solve_exact_working_set, support_vectors, ExactOptions, ExactSolution};
pub use mwu::{solve_mwu, MwuConfig, MwuSolution};
pub use formulation::{build_hard_lp, build_lp, build_soft_lp, hinge_objective, read_beta};
pub use oracle::OracleSet;
pub use types::{
    validate_dataset, BetaVector, Dataset, DualSolution, LpInstance, LpLayout, PrimalSolution,
    QueryLedger, SparseSvmConfig, VariableRef,
};
