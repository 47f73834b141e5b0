//! Fixed-precision 2-adic evaluation of f next to exact arithmetic.

use binomsum::fsum::{diff_valuation, f_direct, f_padic, DiffEngine, Engine, PrecisionPolicy};

fn main() -> binomsum::Result<()> {
    for n in [2u64, 3, 10, 100] {
        let approx = f_padic(n, 16)?;
        println!(
            "f({n}) = {approx}   contains exact: {}",
            approx.contains(&f_direct(n))
        );
    }

    // differences lose precision to cancellation; the engine retries
    let engine = DiffEngine::new(Engine::Padic(PrecisionPolicy::with_initial(8)));
    for (a, b) in [(4u64, 0u64), (1027, 3), (2050, 2)] {
        let out = engine.diff(a, b)?;
        let exact = diff_valuation(a, b, Engine::Exact)?;
        println!(
            "nu2(f({a}) - f({b})) = {} (exact {exact}), precision {:?}, retries {}",
            out.valuation, out.precision, out.retries
        );
    }

    // f(3) = f(4): no precision separates them
    let strict = PrecisionPolicy {
        initial: 8,
        cap: 64,
        exact_fallback: false,
    };
    match DiffEngine::new(Engine::Padic(strict)).diff(3, 4) {
        Ok(o) => println!("f(3) - f(4): {}", o.valuation),
        Err(e) => println!("f(3) - f(4): {e}"),
    }
    Ok(())
}
