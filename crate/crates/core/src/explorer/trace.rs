use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::explorer::spec::{reduce, TwoAdicSpec};
use crate::fsum::DiffEngine;
use crate::harness::sweep::{conj1_bound, conj2_bound};
use crate::valuation::Valuation;

pub const DEFAULT_MAX_EXPONENT: u32 = 14;
/// Largest `max_exponent` accepted; rows need `f` up to `2^(e+1)`.
pub const MAX_EXPONENT_CAP: u32 = 20;

/// One distinct point `x_(e_i) -> x_(e_(i+1))` of the reduction sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub i: usize,
    pub e_i: u64,
    /// `x mod 2^(e_i)`.
    pub x_prev: u64,
    /// `nu2(f(2^(e_i) + x_prev) - f(x_prev))`.
    pub step_val: Valuation,
    pub conj1_bound: i64,
    /// Only when `x_prev` is odd.
    pub conj2_bound: Option<i64>,
    /// `2^(-step_val)`, 0 for `+inf`.
    pub distance: f64,
    /// `e_i - 2 alpha(x_prev)`.
    pub excess: i64,
}

impl TraceRow {
    /// The next point, `2^(e_i) + x_prev`.
    pub fn x_next(&self) -> u64 {
        (1u64 << self.e_i) + self.x_prev
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTrace {
    pub spec: String,
    pub max_exponent: u32,
    pub rows: Vec<TraceRow>,
    /// `x` is a natural number whose every 1 bit is below `max_exponent`, so
    /// the reductions are constant from here on.
    pub natural: bool,
}

impl ConvergenceTrace {
    /// The last point reached, `x mod 2^(max_exponent + 1)`.
    pub fn last_point(&self) -> u64 {
        self.rows.last().map_or(0, TraceRow::x_next)
    }
}

pub(crate) fn distance(v: Valuation) -> f64 {
    match v {
        Valuation::Finite(v) => 2f64.powi(-(v.clamp(-1000, 1000) as i32)),
        Valuation::Infinite => 0.0,
    }
}

/// Trace `f(x_j)` along the reductions of `spec` with `e_i <= max_exponent`.
pub fn trace(
    spec: &TwoAdicSpec,
    max_exponent: u32,
    engine: &DiffEngine,
) -> Result<ConvergenceTrace> {
    if max_exponent > MAX_EXPONENT_CAP {
        return Err(Error::Horizon(format!(
            "max exponent {max_exponent} exceeds the cap {MAX_EXPONENT_CAP}"
        )));
    }
    let exps: Vec<u64> = spec
        .exponents()
        .take_while(|&e| e <= max_exponent as u64)
        .collect();
    if exps.is_empty() {
        return Err(domain(format!("{spec} has no exponent <= {max_exponent}")));
    }
    let mut rows = Vec::with_capacity(exps.len());
    for (idx, &e) in exps.iter().enumerate() {
        let x_prev = u64::try_from(reduce(spec, e)?).expect("below 2^20");
        let step_val = engine.diff_valuation((1u64 << e) + x_prev, x_prev)?;
        let e32 = e as u32;
        let conj2 = (x_prev % 2 == 1).then(|| conj2_bound(e32, (x_prev - 1) / 2));
        rows.push(TraceRow {
            i: idx + 1,
            e_i: e,
            x_prev,
            step_val,
            conj1_bound: conj1_bound(e32, x_prev),
            conj2_bound: conj2,
            distance: distance(step_val),
            excess: e as i64 - 2 * x_prev.count_ones() as i64,
        });
    }
    let natural = spec.is_natural() && spec.exponents().all(|e| e <= max_exponent as u64);
    Ok(ConvergenceTrace {
        spec: spec.to_string(),
        max_exponent,
        rows,
        natural,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CauchyLabel {
    ConvergingEvidence,
    DivergingEvidence,
    Inconclusive,
}

impl CauchyLabel {
    pub fn name(self) -> &'static str {
        match self {
            CauchyLabel::ConvergingEvidence => "converging-evidence",
            CauchyLabel::DivergingEvidence => "diverging-evidence",
            CauchyLabel::Inconclusive => "inconclusive",
        }
    }
}

pub const CAUCHY_NOTE: &str =
    "heuristic: tail = last half of rows; finite data cannot decide definability";

/// Empirical reading of a trace. Never a proof.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyDiagnostic {
    /// Minimum `step_val` over the last half of the rows.
    pub tail_min: Option<Valuation>,
    pub head_min: Option<Valuation>,
    /// Least-squares slope of finite `step_val` against `i`.
    pub slope: Option<f64>,
    pub label: CauchyLabel,
    /// The sequence is eventually constant (`x` is a natural number).
    pub degenerate: bool,
    pub note: &'static str,
}

fn slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn cauchy_verdict(trace: &ConvergenceTrace) -> CauchyDiagnostic {
    let rows = &trace.rows;
    let half = rows.len() / 2;
    let min_of = |r: &[TraceRow]| r.iter().map(|r| r.step_val).min();
    let head_min = min_of(&rows[..half]);
    let tail_min = min_of(&rows[half..]);
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.step_val.finite().map(|v| (r.i as f64, v as f64)))
        .collect();
    let slope = slope(&points);
    let label = if trace.natural {
        CauchyLabel::ConvergingEvidence
    } else {
        match (slope, head_min, tail_min) {
            (Some(s), Some(h), Some(t)) if s > 0.0 && t > h => CauchyLabel::ConvergingEvidence,
            (Some(s), Some(h), Some(t)) if s < 0.0 && t < h => CauchyLabel::DivergingEvidence,
            _ => CauchyLabel::Inconclusive,
        }
    };
    CauchyDiagnostic {
        tail_min,
        head_min,
        slope,
        label,
        degenerate: trace.natural,
        note: CAUCHY_NOTE,
    }
}
