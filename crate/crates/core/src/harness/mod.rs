//! Sweeps of the conjectured and proved inequalities over finite ranges.
//!
//! Each [`CheckId`] names one statement. [`run_sweep`] evaluates it on every
//! row of a range and streams [`BoundCheckRow`]s in `(e, k, i)` order.

pub mod checks;
pub mod report;
pub mod rowsum;
pub mod sweep;

pub use checks::{
    carry_bound_check, elementary_symmetric, harmonic_valuation_check, j1_dominance_check,
    lg_alpha_inequality_check, sumj_identity_check, t_term, Dominance,
};
pub use report::{
    BoundCheckRow, CheckId, EngineStats, LevelSummary, Relation, SweepParams, SweepReport,
};
pub use sweep::{
    conj1_check, conj2_check, default_jobs, run_sweep, run_sweep_collect,
    split_implication_failures, symm_i_check, symm_ii_check, thm_a_check, thm_b_check,
    thm_b_exact_valuation_check, SweepOptions,
};
