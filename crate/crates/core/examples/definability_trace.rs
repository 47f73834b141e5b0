//! Follow f(x mod 2^j) for a few 2-adic integers x.
//!
//! cargo run --release --example definability_trace -- "affine:e1=0,a=3,b=1" 13

use binomsum::explorer::{cauchy_verdict, trace, TwoAdicSpec};
use binomsum::fsum::{DiffEngine, Engine};

fn main() -> binomsum::Result<()> {
    let mut args = std::env::args().skip(1);
    let specs: Vec<String> = match args.next() {
        Some(s) => vec![s],
        None => [
            "finite:6",
            "list:0,2,5,11",
            "affine:e1=0,a=3,b=1",
            "periodic:pre=,block=1",
        ]
        .map(String::from)
        .to_vec(),
    };
    let max_exponent: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(12);
    let engine = DiffEngine::new(Engine::Exact);
    for s in specs {
        let spec: TwoAdicSpec = s.parse()?;
        let t = trace(&spec, max_exponent, &engine)?;
        println!("{spec}");
        for r in &t.rows {
            println!(
                "  i={:<3} e={:<3} x={:<6} step={:<5} conj1>={:<4} conj2>={:<5} excess={}",
                r.i,
                r.e_i,
                r.x_prev,
                r.step_val.to_string(),
                r.conj1_bound,
                r.conj2_bound
                    .map(|b| b.to_string())
                    .unwrap_or_else(|| "-".into()),
                r.excess
            );
        }
        let d = cauchy_verdict(&t);
        println!("  {} (slope {:?}); {}", d.label.name(), d.slope, d.note);
    }
    Ok(())
}
