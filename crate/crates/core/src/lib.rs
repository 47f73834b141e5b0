//! Exact 2-adic analysis of `f(n) = sum_k C(n,k)^-1`.
//!
//! * [`valuation`]: valuations, digit sums, binomials, carries.
//! * [`fsum`]: exact and 2-adic evaluation of `f` and of `nu2(f(a) - f(b))`.
//! * [`harness`]: exhaustive, deterministic sweeps of the inequalities and
//!   identities around `nu2(f(2^e + k) - f(k))`.
//! * [`explorer`]: 2-adic integers `x`, their reductions `x mod 2^j`, and the
//!   behaviour of `f(x mod 2^j)` as `j` grows.
//! * [`cli`]: the `binomsum` command line front end.
//!
//! Runnable walkthroughs live in `examples/`; start with
//! `cargo run --release --example eval_f`.

pub mod cli;
pub mod error;
pub mod explorer;
pub mod fsum;
pub mod harness;
pub mod valuation;

pub use error::{Error, Result};
pub use valuation::{
    alpha, binom, carry_count, kummer_identity_check, lg, nu, nu2, BigRational, Valuation,
};
