//! Parallel, deterministic sweeps.
//!
//! The `(e, k)` grid is cut into contiguous k-stripes. Stripes are evaluated
//! in batches on a worker pool, and each batch is merged back in stripe order
//! before its rows reach the sink, so the row stream is the same for any
//! number of workers.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::fsum::exact::f_direct_unreduced;
use crate::fsum::{
    f_padic, nu2_difference, DiffEngine, Engine, FRecurrence, FTable, PrecisionPolicy,
};
use crate::harness::checks::{
    carry_bound, dominance_data, harmonic_segment_valuation, sumj_sides, thm_b_predicted,
};
use crate::harness::report::{
    BoundCheckRow, CheckId, EngineStats, LevelSummary, Relation, SweepParams, SweepReport,
};
use crate::harness::rowsum::{
    nu2_sub, paired_t_valuations, reciprocal_sigma_valuations, symm_i_valuation, symm_ii_valuation,
    t_valuation, Fraction,
};
use crate::valuation::{alpha, lg_pos, nu2, nu2_u64, nu2_uint, Valuation};

/// Levels at or above this are streamed rather than stored (exact `f` checks).
pub const STREAMING_LEVEL: u32 = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub jobs: usize,
    /// Stop after the first violating row (it is still reported).
    pub fail_fast: bool,
    pub stream_from_level: u32,
    /// Added to every bound; a positive value probes how tight a bound is.
    pub tighten: i64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            jobs: default_jobs(),
            fail_fast: false,
            stream_from_level: STREAMING_LEVEL,
            tighten: 0,
        }
    }
}

impl SweepOptions {
    pub fn with_jobs(jobs: usize) -> Self {
        SweepOptions {
            jobs: jobs.max(1),
            ..Self::default()
        }
    }
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

#[derive(Debug, Clone, Copy)]
struct Stripe {
    e: u32,
    lo: u64,
    hi: u64,
}

#[derive(Default)]
struct StripeOut {
    rows: Vec<BoundCheckRow>,
    exhausted: Vec<(u32, u64, Option<u64>)>,
    stats: EngineStats,
}

/// Exact values of `f`: the stored table plus, while streaming, a window of
/// consecutive values past its end.
struct FView<'a> {
    table: &'a FTable,
    window_start: u64,
    window: &'a [num_rational::BigRational],
}

impl FView<'_> {
    fn get(&self, n: u64) -> &num_rational::BigRational {
        if n <= self.table.max_n() {
            self.table.get(n).unwrap()
        } else {
            &self.window[(n - self.window_start) as usize]
        }
    }
}

struct Context {
    check: CheckId,
    params: SweepParams,
    engine: Engine,
    relation: Relation,
    tighten: i64,
    table: Option<Arc<FTable>>,
    diff: Option<DiffEngine>,
    sigma: Vec<Vec<Valuation>>,
    pairs: Vec<(u64, u64)>,
}

fn checked(parts: &[i64]) -> i64 {
    parts
        .iter()
        .try_fold(0i64, |acc, &p| acc.checked_add(p))
        .expect("bound overflow")
}

fn nu2_of(n: u64) -> i64 {
    nu2_u64(n).finite().expect("nu2 of zero")
}

pub fn conj1_bound(e: u32, k: u64) -> i64 {
    checked(&[e as i64, -2 * alpha(k) as i64, -2])
}

pub fn conj2_bound(e: u32, k: u64) -> i64 {
    checked(&[e as i64, -2 * lg_pos(k + 3), 2 * nu2_of(k + 1)])
}

pub fn symm_i_bound(e: u32, k: u64) -> i64 {
    checked(&[e as i64, -2 * lg_pos(k + 2), 2 * nu2_of(k + 1)])
}

pub fn symm_ii_bound(e: u32, k: u64) -> i64 {
    checked(&[e as i64, -2 * lg_pos(k + 3), 2 * nu2_of(k + 1), -1])
}

pub fn thm_a_bound(e: u32, k: u64) -> i64 {
    checked(&[e as i64, -2 * lg_pos(k + 1), 2 * nu2_of(k + 1)])
}

pub fn thm_b_bound(e: u32, k: u64) -> i64 {
    checked(&[e as i64, -2 * lg_pos(k + 2)])
}

/// Number of `k` values at level `e` for checks over `0 <= k < 2^(e-1)`.
fn half_level(e: u32) -> u64 {
    if e == 0 {
        0
    } else {
        1u64 << (e - 1)
    }
}

impl Context {
    fn limit(&self) -> u64 {
        self.params
            .limit
            .or(self.check.default_limit())
            .unwrap_or(0)
    }

    fn levels(&self) -> Vec<u32> {
        if self.check.uses_levels() {
            (self.params.e_min..=self.params.e_max).collect()
        } else {
            vec![0]
        }
    }

    /// The k-range `[lo, hi)` at level `e`.
    fn k_range(&self, e: u32) -> (u64, u64) {
        let limit = self.limit();
        match self.check {
            CheckId::Conj1 => (0, 1u64 << e),
            CheckId::Conj2 | CheckId::SymmI | CheckId::SymmII | CheckId::ThmA | CheckId::ThmB => {
                (0, half_level(e))
            }
            CheckId::ThmBExact | CheckId::Dominance => (2, half_level(e).max(2)),
            CheckId::Sumj | CheckId::CarryBound | CheckId::Kummer | CheckId::RecurrenceVsDirect => {
                (0, limit + 1)
            }
            CheckId::Harmonic | CheckId::LgAlpha => (1, limit + 1),
            CheckId::EnginesAgree => (0, self.pairs.len() as u64),
        }
    }

    fn stripe_width(&self) -> u64 {
        match self.check {
            CheckId::LgAlpha => 4096,
            CheckId::Conj1 | CheckId::Conj2 => 64,
            _ => 16,
        }
    }

    fn stripes(&self, e: u32) -> Vec<Stripe> {
        let (lo, hi) = self.k_range(e);
        let w = self.stripe_width();
        let mut out = Vec::new();
        let mut s = lo;
        while s < hi {
            out.push(Stripe {
                e,
                lo: s,
                hi: (s + w).min(hi),
            });
            s += w;
        }
        out
    }

    fn row(
        &self,
        e: u32,
        k: u64,
        i: Option<u64>,
        observed: Valuation,
        bound: i64,
    ) -> BoundCheckRow {
        BoundCheckRow::new(self.relation, e, k, i, observed, bound + self.tighten)
    }

    /// `(n1, n2)` compared by an `f` check at `(e, k)`.
    fn f_pair(&self, e: u32, k: u64) -> (u64, u64) {
        match self.check {
            CheckId::Conj1 => ((1u64 << e) + k, k),
            CheckId::Conj2 => ((1u64 << e) + 2 * k + 1, 2 * k + 1),
            _ => unreachable!(),
        }
    }

    fn f_bound(&self, e: u32, k: u64) -> i64 {
        match self.check {
            CheckId::Conj1 => conj1_bound(e, k),
            CheckId::Conj2 => conj2_bound(e, k),
            _ => unreachable!(),
        }
    }

    fn eval(&self, s: Stripe, view: Option<&FView<'_>>) -> Result<StripeOut> {
        let mut out = StripeOut::default();
        let e = s.e;
        match self.check {
            CheckId::Conj1 | CheckId::Conj2 => {
                for k in s.lo..s.hi {
                    let (n1, n2) = self.f_pair(e, k);
                    let observed = match (self.engine, view) {
                        (Engine::Exact, Some(v)) => nu2_difference(v.get(n1), v.get(n2)),
                        _ => {
                            let diff = self.diff.as_ref().expect("diff engine");
                            match diff.diff(n1, n2) {
                                Ok(o) => {
                                    out.stats.definite += u64::from(!o.fell_back);
                                    out.stats.within_one_retry +=
                                        u64::from(!o.fell_back && o.retries <= 1);
                                    out.stats.fell_back += u64::from(o.fell_back);
                                    o.valuation
                                }
                                Err(Error::PrecisionExhausted { .. }) => {
                                    out.stats.exhausted += 1;
                                    out.exhausted.push((e, k, None));
                                    continue;
                                }
                                Err(err) => return Err(err),
                            }
                        }
                    };
                    out.rows
                        .push(self.row(e, k, None, observed, self.f_bound(e, k)));
                }
            }
            CheckId::SymmI => {
                for k in s.lo..s.hi {
                    out.rows
                        .push(self.row(e, k, None, symm_i_valuation(e, k), symm_i_bound(e, k)));
                }
            }
            CheckId::SymmII => {
                for k in s.lo..s.hi {
                    out.rows.push(self.row(
                        e,
                        k,
                        None,
                        symm_ii_valuation(e, k),
                        symm_ii_bound(e, k),
                    ));
                }
            }
            CheckId::ThmA => {
                for k in s.lo..s.hi {
                    let bound = thm_a_bound(e, k);
                    for (i, v) in paired_t_valuations(e, k) {
                        out.rows.push(self.row(e, k, Some(i), v, bound));
                    }
                }
            }
            CheckId::ThmB => {
                for k in (s.lo..s.hi).filter(|k| k % 2 == 0) {
                    out.rows
                        .push(self.row(e, k, None, t_valuation(e, k, k), thm_b_bound(e, k)));
                }
            }
            CheckId::ThmBExact => {
                for k in (s.lo..s.hi).filter(|k| k % 2 == 0 && *k >= 2) {
                    let predicted = thm_b_predicted(e, k / 2);
                    out.rows
                        .push(self.row(e, k, None, t_valuation(e, k, k), predicted));
                }
            }
            CheckId::Dominance => {
                for k in (s.lo..s.hi).filter(|k| k % 2 == 0 && *k >= 2) {
                    let l = k / 2;
                    let data = dominance_data(e, &self.sigma[l as usize])
                        .filter(|d| (e as i64) > d.t)
                        .ok_or_else(|| domain(format!("dominance inapplicable at e={e} l={l}")))?;
                    let v1 = data.v[0].finite().expect("sigma_1 of positive values");
                    let rest = data.v[1..]
                        .iter()
                        .copied()
                        .min()
                        .unwrap_or(Valuation::Infinite);
                    out.rows.push(self.row(e, k, None, rest, v1 + 1));
                }
            }
            CheckId::Sumj => {
                for a in s.lo..s.hi {
                    for b in 0..=a {
                        let (lhs, rhs) = sumj_sides(e, a, b)?;
                        out.rows.push(self.row(e, a, Some(b), nu2(&(lhs - rhs)), 0));
                    }
                }
            }
            CheckId::Harmonic => {
                for l in s.lo..s.hi {
                    let bound = -lg_pos(l) - 2;
                    out.rows
                        .push(self.row(0, l, None, harmonic_segment_valuation(l)?, bound));
                }
            }
            CheckId::CarryBound => {
                for k in s.lo..s.hi {
                    let bound = carry_bound(k);
                    let mut c = BigUint::one();
                    for i in 0..=k {
                        out.rows.push(self.row(0, k, Some(i), nu2_uint(&c), bound));
                        c = c * (k - i) / (i + 1);
                    }
                }
            }
            CheckId::LgAlpha => {
                for l in s.lo..s.hi {
                    let observed = 2 * lg_pos(l + 1);
                    let bound = alpha(l) as i64 + lg_pos(l);
                    out.rows
                        .push(self.row(0, l, None, Valuation::Finite(observed), bound));
                }
            }
            CheckId::Kummer => {
                let limit = self.limit();
                for m in s.lo..s.hi {
                    let mut c = BigUint::one(); // C(m+n, m)
                    for n in 0..=limit {
                        let formula = alpha(m) as i64 + alpha(n) as i64 - alpha(m + n) as i64;
                        let observed = nu2_uint(&c);
                        let mut row = self.row(0, m, Some(n), observed, formula);
                        row.holds &= observed == crate::valuation::carry_count(m, n) as i64;
                        out.rows.push(row);
                        c = c * (m + n + 1) / (n + 1);
                    }
                }
            }
            CheckId::RecurrenceVsDirect => {
                let table = self.table.as_ref().expect("table");
                for n in s.lo..s.hi {
                    let rec = table.get(n).unwrap();
                    let (sum, fact) = f_direct_unreduced(n);
                    let direct = Fraction {
                        num: BigInt::from(sum),
                        den: fact,
                    };
                    let rec = Fraction {
                        num: rec.numer().clone(),
                        den: rec.denom().magnitude().clone(),
                    };
                    out.rows
                        .push(self.row(0, n, None, nu2_sub(&rec, &direct), 0));
                }
            }
            CheckId::EnginesAgree => {
                let table = self.table.as_ref().expect("table");
                let policy = match self.engine {
                    Engine::Padic(p) => p,
                    Engine::Exact => PrecisionPolicy::default(),
                };
                for idx in s.lo..s.hi {
                    let (n1, n2) = self.pairs[idx as usize];
                    let exact = nu2_difference(table.get(n1).unwrap(), table.get(n2).unwrap());
                    let mut precision = policy.initial.max(1);
                    let mut retries = 0;
                    let row = loop {
                        let d = f_padic(n1, precision)?.sub(&f_padic(n2, precision)?);
                        if let Some(v) = d.definite_valuation() {
                            out.stats.definite += 1;
                            out.stats.within_one_retry += u64::from(retries <= 1);
                            break self.row(0, n1, Some(n2), exact, v);
                        }
                        if precision >= policy.cap {
                            // only a lower bound is known: nu2 >= absolute precision
                            out.stats.exhausted += 1;
                            let lower = d.absolute_precision();
                            let mut row = self.row(0, n1, Some(n2), exact, lower);
                            row.holds = exact >= lower;
                            break row;
                        }
                        precision = (precision * 2).min(policy.cap);
                        retries += 1;
                    };
                    out.rows.push(row);
                }
            }
        }
        Ok(out)
    }
}

fn build_context(
    check: CheckId,
    params: &SweepParams,
    engine: Engine,
    opts: &SweepOptions,
) -> Result<Context> {
    let mut ctx = Context {
        check,
        params: *params,
        engine,
        relation: check.relation(),
        tighten: opts.tighten,
        table: None,
        diff: None,
        sigma: Vec::new(),
        pairs: Vec::new(),
    };
    match check {
        CheckId::Conj1 | CheckId::Conj2 => match engine {
            Engine::Exact => {
                let e = params.e_max;
                let max_n = if e >= opts.stream_from_level {
                    (1u64 << e) - 1
                } else {
                    (1u64 << (e + 1)) - 1
                };
                ctx.table = Some(Arc::new(FTable::build(max_n)?));
            }
            Engine::Padic(_) => ctx.diff = Some(DiffEngine::new(engine)),
        },
        CheckId::RecurrenceVsDirect => {
            ctx.table = Some(Arc::new(FTable::build(ctx.limit())?));
        }
        CheckId::EnginesAgree => {
            let limit = ctx.limit();
            if limit < 1 {
                return Err(domain("engines-agree needs a limit of at least 1"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            let mut pairs = BTreeSet::new();
            let target = params.samples.min(((limit + 1) * limit) as usize);
            while pairs.len() < target {
                let a = rng.gen_range(0..=limit);
                let b = rng.gen_range(0..=limit);
                if a != b {
                    pairs.insert((a, b));
                }
            }
            ctx.pairs = pairs.into_iter().collect();
            ctx.table = Some(Arc::new(FTable::build(limit)?));
        }
        CheckId::Dominance => {
            let top = half_level(params.e_max) / 2;
            ctx.sigma = (0..top.max(1))
                .into_par_iter()
                .map(|l| {
                    if l == 0 {
                        Vec::new()
                    } else {
                        let denoms: Vec<u64> = (2 * l + 2..=4 * l + 1).collect();
                        reciprocal_sigma_valuations(&denoms)
                    }
                })
                .collect();
        }
        _ => {}
    }
    Ok(ctx)
}

struct Accumulator {
    report: SweepReport,
    collect_equalities: bool,
}

impl Accumulator {
    fn push(&mut self, row: &BoundCheckRow) {
        let r = &mut self.report;
        r.rows_total += 1;
        if r.levels.last().map(|l| l.e) != Some(row.e) {
            r.levels.push(LevelSummary {
                e: row.e,
                rows: 0,
                violations: 0,
                equality_cases: 0,
                min_slack: None,
            });
        }
        let level = r.levels.last_mut().unwrap();
        level.rows += 1;
        let slack = row.slack();
        level.min_slack = Some(level.min_slack.map_or(slack, |m| m.min(slack)));
        if !row.holds {
            level.violations += 1;
            r.violations.push(row.clone());
        }
        if self.collect_equalities && row.is_equality() {
            level.equality_cases += 1;
            r.equality_cases.push(row.clone());
        }
    }
}

/// Run `check` over `params`, feeding every row, in `(e, k, i)` order, to `sink`.
///
/// Only violations, equality cases and per-level summaries are kept in the
/// returned report.
pub fn run_sweep(
    check: CheckId,
    params: &SweepParams,
    engine: Engine,
    opts: &SweepOptions,
    sink: &mut dyn FnMut(&BoundCheckRow) -> Result<()>,
) -> Result<SweepReport> {
    params.validate()?;
    let start = Instant::now();
    let engine = if check.uses_f() || check == CheckId::EnginesAgree {
        engine
    } else {
        Engine::Exact
    };
    let ctx = build_context(check, params, engine, opts)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;

    let mut acc = Accumulator {
        report: SweepReport {
            check,
            params: *params,
            engine,
            jobs: opts.jobs.max(1),
            rows_total: 0,
            violations: Vec::new(),
            equality_cases: Vec::new(),
            levels: Vec::new(),
            precision_exhausted: Vec::new(),
            engine_stats: EngineStats::default(),
            stopped_early: false,
            duration_ms: 0,
        },
        collect_equalities: matches!(ctx.relation, Relation::AtLeast | Relation::AtMost),
    };
    let batch = opts.jobs.max(1) * 4;

    'levels: for e in ctx.levels() {
        let stripes = ctx.stripes(e);
        let streaming = check.uses_f()
            && matches!(engine, Engine::Exact)
            && e >= opts.stream_from_level
            && e == params.e_max;
        let mut stream: Option<FRecurrence> = None;
        for chunk in stripes.chunks(batch) {
            let mut window = Vec::new();
            let mut window_start = 0;
            if let (true, Some(table)) = (streaming, ctx.table.as_ref()) {
                let cursor = stream.get_or_insert_with(|| table.stream_after());
                let first = chunk[0];
                let last = chunk[chunk.len() - 1];
                let (lo, _) = ctx.f_pair(e, first.lo);
                let (hi, _) = ctx.f_pair(e, last.hi - 1);
                window_start = lo.max(cursor.next_index());
                while cursor.next_index() <= hi {
                    let n = cursor.next_index();
                    let v = cursor.step();
                    if n >= window_start {
                        window.push(v);
                    }
                }
            }
            let view = ctx.table.as_ref().map(|t| FView {
                table: t,
                window_start,
                window: &window,
            });
            let outs: Vec<Result<StripeOut>> = pool.install(|| {
                chunk
                    .par_iter()
                    .map(|s| ctx.eval(*s, view.as_ref()))
                    .collect()
            });
            for out in outs {
                let out = out?;
                let stats = &mut acc.report.engine_stats;
                stats.definite += out.stats.definite;
                stats.within_one_retry += out.stats.within_one_retry;
                stats.fell_back += out.stats.fell_back;
                stats.exhausted += out.stats.exhausted;
                acc.report.precision_exhausted.extend(out.exhausted);
                for row in &out.rows {
                    sink(row)?;
                    acc.push(row);
                    if opts.fail_fast && !row.holds {
                        acc.report.stopped_early = true;
                        break 'levels;
                    }
                }
            }
        }
    }
    acc.report.duration_ms = start.elapsed().as_millis() as u64;
    Ok(acc.report)
}

/// [`run_sweep`] keeping every row in memory.
pub fn run_sweep_collect(
    check: CheckId,
    params: &SweepParams,
    engine: Engine,
    opts: &SweepOptions,
) -> Result<(SweepReport, Vec<BoundCheckRow>)> {
    let mut rows = Vec::new();
    let report = run_sweep(check, params, engine, opts, &mut |r| {
        rows.push(r.clone());
        Ok(())
    })?;
    Ok((report, rows))
}

fn level_check(check: CheckId, e_min: u32, e_max: u32) -> Result<SweepReport> {
    run_sweep(
        check,
        &SweepParams::levels(e_min, e_max),
        Engine::Exact,
        &SweepOptions::default(),
        &mut |_| Ok(()),
    )
}

/// `nu2(f(2^e+k) - f(k)) >= e - 2 alpha(k) - 2` for `0 <= k < 2^e`.
pub fn conj1_check(e_min: u32, e_max: u32) -> Result<SweepReport> {
    level_check(CheckId::Conj1, e_min, e_max)
}

/// `nu2(f(2^e+2k+1) - f(2k+1)) >= e - 2 lg(k+3) + 2 nu2(k+1)` for `0 <= k < 2^(e-1)`.
pub fn conj2_check(e_min: u32, e_max: u32) -> Result<SweepReport> {
    level_check(CheckId::Conj2, e_min, e_max)
}

pub fn symm_i_check(e_min: u32, e_max: u32) -> Result<SweepReport> {
    level_check(CheckId::SymmI, e_min, e_max)
}

/// The unproved half of the split; violations here are findings.
pub fn symm_ii_check(e_min: u32, e_max: u32) -> Result<SweepReport> {
    level_check(CheckId::SymmII, e_min, e_max)
}

pub fn thm_a_check(e_min: u32, e_max: u32) -> Result<SweepReport> {
    level_check(CheckId::ThmA, e_min, e_max)
}

pub fn thm_b_check(e_min: u32, e_max: u32) -> Result<SweepReport> {
    level_check(CheckId::ThmB, e_min, e_max)
}

pub fn thm_b_exact_valuation_check(e_min: u32, e_max: u32) -> Result<SweepReport> {
    level_check(CheckId::ThmBExact, e_min, e_max)
}

/// `(e, k)` where both halves of the split hold but the conj2 row does not.
///
/// Must be empty: the two halves together imply the conj2 bound.
pub fn split_implication_failures(
    e_min: u32,
    e_max: u32,
    opts: &SweepOptions,
) -> Result<Vec<(u32, u64)>> {
    let params = SweepParams::levels(e_min, e_max);
    let (_, first) = run_sweep_collect(CheckId::SymmI, &params, Engine::Exact, opts)?;
    let (_, second) = run_sweep_collect(CheckId::SymmII, &params, Engine::Exact, opts)?;
    let (_, whole) = run_sweep_collect(CheckId::Conj2, &params, Engine::Exact, opts)?;
    Ok(first
        .iter()
        .zip(&second)
        .zip(&whole)
        .filter(|((a, b), c)| {
            assert_eq!(a.key(), c.key());
            assert_eq!(b.key(), c.key());
            a.holds && b.holds && !c.holds
        })
        .map(|(_, c)| (c.e, c.k))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(
        check: CheckId,
        params: SweepParams,
        jobs: usize,
    ) -> (SweepReport, Vec<BoundCheckRow>) {
        run_sweep_collect(
            check,
            &params,
            Engine::Exact,
            &SweepOptions::with_jobs(jobs),
        )
        .unwrap()
    }

    #[test]
    fn conj1_small_rows() {
        let (report, rows) = collect(CheckId::Conj1, SweepParams::levels(2, 2), 2);
        assert_eq!(rows.len(), 4);
        let r2 = &rows[2];
        assert_eq!((r2.observed, r2.bound), (Valuation::Finite(-2), -2));
        assert!(r2.is_equality());
        let r1 = &rows[1];
        assert_eq!((r1.observed, r1.bound), (Valuation::Finite(0), -2));
        assert_eq!(r1.slack(), Valuation::Finite(2));
        assert!(report.violations.is_empty());
        assert_eq!(report.equality_ks(2), vec![0, 2]);
    }

    #[test]
    fn conj2_and_split_examples() {
        let (_, rows) = collect(CheckId::Conj2, SweepParams::levels(2, 3), 1);
        assert_eq!((rows[0].e, rows[0].k), (2, 0));
        assert_eq!(rows[0].observed, Valuation::Finite(0));
        assert!(rows[0].is_equality());
        let e3k1 = rows.iter().find(|r| r.e == 3 && r.k == 1).unwrap();
        assert_eq!(e3k1.bound, 1);
        assert!(e3k1.holds);

        let (_, rows) = collect(CheckId::SymmI, SweepParams::levels(2, 3), 1);
        assert_eq!(rows[0].observed, Valuation::Infinite);
        let e3k1 = rows.iter().find(|r| r.e == 3 && r.k == 1).unwrap();
        assert_eq!((e3k1.observed, e3k1.bound), (Valuation::Finite(3), 3));

        let (_, rows) = collect(CheckId::SymmII, SweepParams::levels(2, 3), 1);
        assert_eq!(
            (rows[0].observed, rows[0].bound),
            (Valuation::Finite(-1), -1)
        );
        let e3k0 = rows.iter().find(|r| r.e == 3 && r.k == 0).unwrap();
        assert_eq!(e3k0.bound, 0);
        assert!(e3k0.holds);
    }

    #[test]
    fn thm_examples() {
        let (_, rows) = collect(CheckId::ThmA, SweepParams::levels(3, 3), 1);
        assert!(rows.iter().all(|r| r.k != 0));
        let r = &rows[0];
        assert_eq!((r.e, r.k, r.i), (3, 1, Some(0)));
        assert_eq!((r.observed, r.bound), (Valuation::Finite(3), 3));

        let (_, rows) = collect(CheckId::ThmB, SweepParams::levels(3, 3), 1);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].observed, Valuation::Infinite);
        assert_eq!(
            (rows[1].observed, rows[1].bound),
            (Valuation::Finite(0), -1)
        );

        let (_, rows) = collect(CheckId::ThmBExact, SweepParams::levels(3, 4), 1);
        assert_eq!((rows[0].e, rows[0].k), (3, 2));
        assert_eq!((rows[0].observed, rows[0].bound), (Valuation::Finite(0), 0));
        assert_eq!((rows[1].e, rows[1].k), (4, 2));
        assert_eq!((rows[1].observed, rows[1].bound), (Valuation::Finite(1), 1));
    }

    #[test]
    fn row_counts() {
        let (report, _) = collect(CheckId::Conj1, SweepParams::levels(1, 8), 3);
        assert_eq!(report.rows_total, (1..=8).map(|e| 1u64 << e).sum::<u64>());
        let (report, _) = collect(CheckId::Kummer, SweepParams::levels(0, 0).with_limit(10), 3);
        assert_eq!(report.rows_total, 121);
        let (report, _) = collect(
            CheckId::CarryBound,
            SweepParams::levels(0, 0).with_limit(10),
            3,
        );
        assert_eq!(report.rows_total, (0..=10u64).map(|k| k + 1).sum::<u64>());
    }

    #[test]
    fn rows_are_ordered_and_worker_independent() {
        for check in [
            CheckId::Conj1,
            CheckId::ThmA,
            CheckId::Sumj,
            CheckId::Dominance,
        ] {
            let params = SweepParams::defaults_for(check);
            let params = SweepParams {
                e_max: params.e_min.clamp(5, 6),
                limit: params.limit.map(|l| l.min(8)),
                ..params
            };
            let (_, one) = collect(check, params, 1);
            let (_, many) = collect(check, params, 7);
            assert_eq!(one, many, "{check}");
            assert!(one.windows(2).all(|w| w[0].key() < w[1].key()), "{check}");
        }
    }

    #[test]
    fn streaming_matches_stored() {
        for check in [CheckId::Conj1, CheckId::Conj2] {
            let params = SweepParams::levels(1, 7);
            let stored =
                run_sweep_collect(check, &params, Engine::Exact, &SweepOptions::with_jobs(2))
                    .unwrap()
                    .1;
            let opts = SweepOptions {
                stream_from_level: 7,
                ..SweepOptions::with_jobs(3)
            };
            let streamed = run_sweep_collect(check, &params, Engine::Exact, &opts)
                .unwrap()
                .1;
            assert_eq!(stored, streamed);
        }
    }

    #[test]
    fn padic_sweep_matches_exact() {
        let params = SweepParams::levels(1, 7);
        let exact = collect(CheckId::Conj1, params, 2).1;
        let padic = run_sweep_collect(
            CheckId::Conj1,
            &params,
            Engine::Padic(PrecisionPolicy::default()),
            &SweepOptions::with_jobs(2),
        )
        .unwrap()
        .1;
        assert_eq!(exact, padic);
    }

    #[test]
    fn fail_fast_stops_at_first_violation() {
        // conj1 is tight at e=1, k=0
        let params = SweepParams::levels(1, 6);
        let opts = SweepOptions {
            tighten: 1,
            ..SweepOptions::with_jobs(2)
        };
        let (full, _) = run_sweep_collect(CheckId::Conj1, &params, Engine::Exact, &opts).unwrap();
        assert!(full.violations.len() > 1);
        assert!(!full.stopped_early);

        let opts = SweepOptions {
            fail_fast: true,
            ..opts
        };
        let (report, rows) =
            run_sweep_collect(CheckId::Conj1, &params, Engine::Exact, &opts).unwrap();
        assert!(report.stopped_early);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].key(), (1, 0, None));
        assert_eq!(rows.last().unwrap(), &report.violations[0]);
    }

    #[test]
    fn empty_range() {
        let err = run_sweep_collect(
            CheckId::Conj1,
            &SweepParams::levels(5, 4),
            Engine::Exact,
            &SweepOptions::default(),
        );
        assert!(err.is_err());
        let (report, rows) = collect(CheckId::ThmBExact, SweepParams::levels(1, 2), 1);
        assert_eq!(report.rows_total, 0);
        assert!(rows.is_empty());
    }

    #[test]
    fn split_implies_conj2() {
        assert!(
            split_implication_failures(1, 7, &SweepOptions::with_jobs(4))
                .unwrap()
                .is_empty()
        );
    }
}
