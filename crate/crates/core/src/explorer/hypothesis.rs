use serde::Serialize;

use crate::error::Result;
use crate::explorer::spec::{zero_one_excess, TwoAdicSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Inconclusive,
    /// `x` is a natural number; the hypothesis concerns infinitely many exponents.
    NaturalNumber,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Inconsistent => "inconsistent",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NaturalNumber => "natural-number",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    /// zeros minus ones in `x mod 2^j` tends to infinity
    Cor1,
    /// `e_(i+1) - 2 e_i` tends to infinity
    Cor2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendReport {
    pub which: Hypothesis,
    pub spec: String,
    pub horizon: u64,
    /// `(index, value)`: `(j, excess)` for cor1, `(i, e_(i+1) - 2 e_i)` for cor2.
    pub values: Vec<(u64, i64)>,
    /// `min` of the values from each index on.
    pub running_min_after: Vec<i64>,
    /// Verdict from the finite data alone.
    pub empirical: Verdict,
    /// Final verdict; analytic where the spec admits it.
    pub verdict: Verdict,
    pub analytic: bool,
}

fn running_min_after(values: &[(u64, i64)]) -> Vec<i64> {
    let mut out: Vec<i64> = values
        .iter()
        .rev()
        .scan(i64::MAX, |m, v| {
            *m = (*m).min(v.1);
            Some(*m)
        })
        .collect();
    out.reverse();
    out
}

/// Consistent when the last value beats the one halfway and both are
/// positive; inconsistent when the last value is negative and falling.
fn empirical(values: &[(u64, i64)]) -> Verdict {
    if values.len() < 2 {
        return Verdict::Inconclusive;
    }
    let last = values[values.len() - 1].1;
    let mid = values[(values.len() - 1) / 2].1;
    if last > mid && mid > 0 {
        Verdict::Consistent
    } else if last < mid && last < 0 {
        Verdict::Inconsistent
    } else {
        Verdict::Inconclusive
    }
}

fn report(
    which: Hypothesis,
    spec: &TwoAdicSpec,
    horizon: u64,
    values: Vec<(u64, i64)>,
    analytic: Option<Verdict>,
) -> TrendReport {
    let emp = empirical(&values);
    TrendReport {
        which,
        spec: spec.to_string(),
        horizon,
        running_min_after: running_min_after(&values),
        empirical: emp,
        verdict: analytic.unwrap_or(emp),
        analytic: analytic.is_some(),
        values,
    }
}

/// Zeros minus ones in `x mod 2^j` for `j <= horizon`.
pub fn cor1_hypothesis(spec: &TwoAdicSpec, horizon: u64) -> Result<TrendReport> {
    let values = (0..=horizon)
        .map(|j| zero_one_excess(spec, j).map(|v| (j, v)))
        .collect::<Result<Vec<_>>>()?;
    let analytic = match spec {
        // leading zeros only add to the excess
        TwoAdicSpec::Finite(_) | TwoAdicSpec::ExponentList(_) => Some(Verdict::Consistent),
        TwoAdicSpec::AffineRule { a, b, .. } => Some(if *a >= 2 || *b >= 3 {
            Verdict::Consistent
        } else {
            Verdict::Inconsistent
        }),
        TwoAdicSpec::EventuallyPeriodic { block, .. } => {
            let zeros = block.iter().filter(|b| !**b).count();
            Some(if 2 * zeros > block.len() {
                Verdict::Consistent
            } else {
                Verdict::Inconsistent
            })
        }
    };
    Ok(report(Hypothesis::Cor1, spec, horizon, values, analytic))
}

/// `e_(i+1) - 2 e_i` over exponents `e_(i+1) <= horizon`.
pub fn cor2_hypothesis(spec: &TwoAdicSpec, horizon: u64) -> Result<TrendReport> {
    let exps: Vec<u64> = spec.exponents().take_while(|&e| e <= horizon).collect();
    let values = exps
        .windows(2)
        .enumerate()
        .map(|(idx, w)| (idx as u64 + 1, w[1] as i64 - 2 * w[0] as i64))
        .collect();
    let analytic = if spec.is_natural() {
        Some(Verdict::NaturalNumber)
    } else {
        match spec {
            TwoAdicSpec::AffineRule { a, .. } => Some(match a {
                1 => Verdict::Inconsistent,
                // constant difference b
                2 => Verdict::Inconclusive,
                _ => Verdict::Consistent,
            }),
            // gaps are bounded by the period while e_i grows
            TwoAdicSpec::EventuallyPeriodic { .. } => Some(Verdict::Inconsistent),
            _ => None,
        }
    };
    Ok(report(Hypothesis::Cor2, spec, horizon, values, analytic))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> TwoAdicSpec {
        s.parse().unwrap()
    }

    #[test]
    fn cor1_examples() {
        let r = cor1_hypothesis(&spec("finite:6"), 200).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        assert_eq!(r.empirical, Verdict::Consistent);
        let r = cor1_hypothesis(&TwoAdicSpec::minus_one(), 64).unwrap();
        assert_eq!(r.verdict, Verdict::Inconsistent);
        assert_eq!(r.empirical, Verdict::Inconsistent);
        assert_eq!(r.values[10], (10, -10));
        let r = cor1_hypothesis(&spec("periodic:pre=,block=100"), 60).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        assert!(r.analytic);
        let r = cor1_hypothesis(&spec("periodic:pre=,block=10"), 60).unwrap();
        assert_eq!(r.verdict, Verdict::Inconsistent);
    }

    #[test]
    fn cor1_running_min() {
        let r = cor1_hypothesis(&spec("list:0,2,5"), 8).unwrap();
        let excess: Vec<i64> = r.values.iter().map(|v| v.1).collect();
        assert_eq!(excess, vec![0, -1, 0, -1, 0, 1, 0, 1, 2]);
        assert_eq!(r.running_min_after, vec![-1, -1, -1, -1, 0, 0, 0, 1, 2]);
    }

    #[test]
    fn cor2_examples() {
        let r = cor2_hypothesis(&spec("affine:e1=0,a=3,b=1"), 40).unwrap();
        assert_eq!(r.values, vec![(1, 1), (2, 2), (3, 5), (4, 14)]);
        assert_eq!(r.verdict, Verdict::Consistent);
        assert_eq!(r.empirical, Verdict::Consistent);
        let r = cor2_hypothesis(&spec("affine:e1=0,a=2,b=2"), 100).unwrap();
        assert!(r.values.iter().all(|v| v.1 == 2));
        assert_eq!(r.verdict, Verdict::Inconclusive);
        let r = cor2_hypothesis(&spec("affine:e1=0,a=1,b=5"), 100).unwrap();
        assert_eq!(r.verdict, Verdict::Inconsistent);
        assert_eq!(
            cor2_hypothesis(&spec("finite:6"), 10).unwrap().verdict,
            Verdict::NaturalNumber
        );
        assert_eq!(
            cor2_hypothesis(&TwoAdicSpec::minus_one(), 10)
                .unwrap()
                .verdict,
            Verdict::Inconsistent
        );
    }
}
