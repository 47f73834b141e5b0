//! Exhaustive identity suites: Kummer, the sigma_j expansion, the harmonic
//! segment, the carry bound, lg/alpha, and j = 1 dominance.

use binomsum::fsum::Engine;
use binomsum::harness::{run_sweep, CheckId, SweepOptions, SweepParams};
use binomsum::{carry_count, kummer_identity_check};

fn main() -> binomsum::Result<()> {
    println!("carries(3, 5) = {}", carry_count(3, 5));
    println!("kummer(3, 5): {}", kummer_identity_check(3, 5));
    for check in [
        CheckId::Kummer,
        CheckId::Sumj,
        CheckId::Harmonic,
        CheckId::CarryBound,
        CheckId::LgAlpha,
        CheckId::Dominance,
    ] {
        let params = SweepParams::defaults_for(check);
        let r = run_sweep(
            check,
            &params,
            Engine::Exact,
            &SweepOptions::default(),
            &mut |_| Ok(()),
        )?;
        println!(
            "{:<12} rows={:<8} failures={}",
            check.name(),
            r.rows_total,
            r.violations.len()
        );
    }
    Ok(())
}
