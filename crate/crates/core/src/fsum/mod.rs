//! The function `f(n) = sum_{k=0}^{n} C(n,k)^-1`: exact values, 2-adic
//! approximations, and valuations of differences `f(n1) - f(n2)`.

pub mod engine;
pub mod exact;
pub mod padic;

pub use engine::{
    diff_valuation, diff_valuation_padic, nu2_difference, shared_exact, DiffEngine, DiffOutcome,
    Engine, PrecisionPolicy, DEFAULT_PRECISION, PRECISION_CAP,
};
pub use exact::{
    ensure_recurrence_gate, f_direct, f_exact, f_recurrence, validate_recurrence, FRecurrence,
    FTable, RECURRENCE_GATE_LIMIT,
};
pub use padic::{f_padic, PadicApprox};
