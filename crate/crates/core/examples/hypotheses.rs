//! Digit-count and exponent-gap hypotheses on finite horizons.

use binomsum::explorer::{cor1_hypothesis, cor2_hypothesis, TwoAdicSpec};

fn main() -> binomsum::Result<()> {
    for s in [
        "finite:6",
        "periodic:pre=,block=1",
        "periodic:pre=,block=100",
        "affine:e1=0,a=3,b=1",
        "affine:e1=0,a=2,b=2",
        "affine:e1=0,a=1,b=3",
    ] {
        let spec: TwoAdicSpec = s.parse()?;
        let c1 = cor1_hypothesis(&spec, 64)?;
        let c2 = cor2_hypothesis(&spec, 1000)?;
        println!(
            "{s:<26} cor1={:<13} cor2={:<14} (empirical {} / {})",
            c1.verdict.name(),
            c2.verdict.name(),
            c1.empirical.name(),
            c2.empirical.name()
        );
    }
    Ok(())
}
