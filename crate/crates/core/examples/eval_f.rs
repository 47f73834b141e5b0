//! Exact values of f(n) = sum_k 1/C(n,k) and their 2-adic valuations.
//!
//! cargo run --release --example eval_f -- 40

use binomsum::fsum::{f_direct, FTable};
use binomsum::nu2;

fn main() -> binomsum::Result<()> {
    let max_n: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(16);
    let table = FTable::build(max_n)?;
    println!("{:>4}  {:>6}  f(n)", "n", "nu2");
    for n in 0..=max_n {
        let v = table.get(n).unwrap();
        println!("{n:>4}  {:>6}  {v}", nu2(v).to_string());
    }
    // the table comes from the recurrence; spot-check the direct sum
    assert_eq!(table.get(max_n).unwrap(), &f_direct(max_n));
    Ok(())
}
