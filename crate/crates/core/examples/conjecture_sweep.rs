//! Sweep nu2(f(2^e+k) - f(k)) >= e - 2 alpha(k) - 2 and list the equality cases.
//!
//! cargo run --release --example conjecture_sweep -- 10

use binomsum::fsum::Engine;
use binomsum::harness::{run_sweep, CheckId, SweepOptions, SweepParams};

fn main() -> binomsum::Result<()> {
    let e_max: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    for check in [CheckId::Conj1, CheckId::Conj2] {
        let params = SweepParams::levels(1, e_max);
        let report = run_sweep(
            check,
            &params,
            Engine::Exact,
            &SweepOptions::default(),
            &mut |_| Ok(()),
        )?;
        println!(
            "{check}: {} rows, {} violations, {} ms",
            report.rows_total,
            report.violations.len(),
            report.duration_ms
        );
        for level in &report.levels {
            println!(
                "  e={:>2}  equality at k = {:?}",
                level.e,
                report.equality_ks(level.e)
            );
        }
    }
    Ok(())
}
