//! 2-adic integers `x = sum 2^(e_i)` and the sequence `f(x mod 2^j)`.
//!
//! Verdicts here are empirical readings of finite data. They can suggest,
//! never establish, whether `f(x)` is defined 2-adically.

pub mod hypothesis;
pub mod spec;
pub mod trace;

pub use hypothesis::{cor1_hypothesis, cor2_hypothesis, Hypothesis, TrendReport, Verdict};
pub use spec::{reduce, zero_one_excess, TwoAdicSpec};
pub use trace::{
    cauchy_verdict, trace, CauchyDiagnostic, CauchyLabel, ConvergenceTrace, TraceRow,
    DEFAULT_MAX_EXPONENT, MAX_EXPONENT_CAP,
};
