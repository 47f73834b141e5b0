//! The inequalities behind the second conjecture: both halves of the split
//! sum, the paired-term bound, and the even-term bound with its exact value.

use binomsum::fsum::Engine;
use binomsum::harness::{
    run_sweep, split_implication_failures, CheckId, SweepOptions, SweepParams,
};

fn main() -> binomsum::Result<()> {
    let opts = SweepOptions::default();
    for (check, e_max) in [
        (CheckId::SymmI, 9),
        (CheckId::SymmII, 9),
        (CheckId::ThmA, 9),
        (CheckId::ThmB, 10),
        (CheckId::ThmBExact, 9),
    ] {
        let params = SweepParams::levels(1, e_max);
        let r = run_sweep(check, &params, Engine::Exact, &opts, &mut |_| Ok(()))?;
        let tight: u64 = r.levels.iter().map(|l| l.equality_cases).sum();
        println!(
            "{:<12} e<={e_max:<3} rows={:<8} violations={:<3} tight={tight}",
            check.name(),
            r.rows_total,
            r.violations.len()
        );
    }
    let gaps = split_implication_failures(1, 9, &opts)?;
    println!(
        "split rows where both halves hold but the whole fails: {}",
        gaps.len()
    );
    Ok(())
}
