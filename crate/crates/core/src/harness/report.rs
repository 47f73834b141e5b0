use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error};
use crate::fsum::Engine;
use crate::valuation::Valuation;

/// Every verification the harness knows how to sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    Conj1,
    Conj2,
    SymmI,
    SymmII,
    ThmA,
    ThmB,
    ThmBExact,
    Sumj,
    Harmonic,
    CarryBound,
    LgAlpha,
    Kummer,
    Dominance,
    RecurrenceVsDirect,
    EnginesAgree,
}

/// How a row's observed valuation is compared with its bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `observed >= bound`
    AtLeast,
    /// `observed <= bound`
    AtMost,
    /// `observed == bound`, both finite
    Exactly,
    /// `observed == +inf` (an exact identity measured as `nu2(lhs - rhs)`); the
    /// bound column is a placeholder 0
    Vanishes,
}

impl CheckId {
    pub const ALL: [CheckId; 15] = [
        CheckId::Conj1,
        CheckId::Conj2,
        CheckId::SymmI,
        CheckId::SymmII,
        CheckId::ThmA,
        CheckId::ThmB,
        CheckId::ThmBExact,
        CheckId::Sumj,
        CheckId::Harmonic,
        CheckId::CarryBound,
        CheckId::LgAlpha,
        CheckId::Kummer,
        CheckId::Dominance,
        CheckId::RecurrenceVsDirect,
        CheckId::EnginesAgree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Conj1 => "conj1",
            CheckId::Conj2 => "conj2",
            CheckId::SymmI => "symm-i",
            CheckId::SymmII => "symm-ii",
            CheckId::ThmA => "thm-a",
            CheckId::ThmB => "thm-b",
            CheckId::ThmBExact => "thm-b-exact",
            CheckId::Sumj => "sumj",
            CheckId::Harmonic => "harmonic",
            CheckId::CarryBound => "carry-bound",
            CheckId::LgAlpha => "lg-alpha",
            CheckId::Kummer => "kummer",
            CheckId::Dominance => "dominance",
            CheckId::RecurrenceVsDirect => "recurrence-vs-direct",
            CheckId::EnginesAgree => "engines-agree",
        }
    }

    pub fn relation(self) -> Relation {
        match self {
            CheckId::CarryBound => Relation::AtMost,
            CheckId::ThmBExact | CheckId::Harmonic | CheckId::Kummer | CheckId::EnginesAgree => {
                Relation::Exactly
            }
            CheckId::Sumj | CheckId::RecurrenceVsDirect => Relation::Vanishes,
            _ => Relation::AtLeast,
        }
    }

    /// Statements that are conjectured (or exploratory) rather than proved.
    ///
    /// A violation of one of these is a mathematical finding; a violation of
    /// anything else is a defect in this library.
    pub fn is_conjecture(self) -> bool {
        matches!(
            self,
            CheckId::Conj1 | CheckId::Conj2 | CheckId::SymmII | CheckId::ThmBExact
        )
    }

    /// Rows are indexed by the level `e`; otherwise `e` is always 0 and the
    /// range is set by [`SweepParams::limit`].
    pub fn uses_levels(self) -> bool {
        matches!(
            self,
            CheckId::Conj1
                | CheckId::Conj2
                | CheckId::SymmI
                | CheckId::SymmII
                | CheckId::ThmA
                | CheckId::ThmB
                | CheckId::ThmBExact
                | CheckId::Sumj
                | CheckId::Dominance
        )
    }

    /// Checks whose rows compare values of `f`, and so honour the engine choice.
    pub fn uses_f(self) -> bool {
        matches!(self, CheckId::Conj1 | CheckId::Conj2)
    }

    /// Default level range `(e_min, e_max)`.
    pub fn default_levels(self) -> (u32, u32) {
        match self {
            CheckId::Conj1 | CheckId::Conj2 | CheckId::ThmA | CheckId::ThmB => (1, 12),
            CheckId::SymmI | CheckId::SymmII | CheckId::ThmBExact | CheckId::Dominance => (1, 10),
            CheckId::Sumj => (1, 6),
            _ => (0, 0),
        }
    }

    /// Default size parameter for checks that are not indexed by level.
    pub fn default_limit(self) -> Option<u64> {
        match self {
            CheckId::Sumj => Some(30),
            CheckId::Harmonic | CheckId::CarryBound => Some(2048),
            CheckId::LgAlpha => Some(1 << 16),
            CheckId::Kummer => Some(512),
            CheckId::RecurrenceVsDirect => Some(1500),
            CheckId::EnginesAgree => Some(4096),
            _ => None,
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let norm = s.replace('_', "-");
        CheckId::ALL
            .into_iter()
            .find(|c| c.name() == norm)
            .ok_or_else(|| domain(format!("unknown check `{s}`")))
    }
}

/// One verification outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheckRow {
    pub e: u32,
    pub k: u64,
    pub i: Option<u64>,
    pub observed: Valuation,
    pub bound: i64,
    /// Whether the checked claim holds on this row.
    pub holds: bool,
}

impl BoundCheckRow {
    pub fn new(
        relation: Relation,
        e: u32,
        k: u64,
        i: Option<u64>,
        observed: Valuation,
        bound: i64,
    ) -> Self {
        let holds = match relation {
            Relation::AtLeast => observed >= bound,
            Relation::AtMost => observed <= bound,
            Relation::Exactly => observed == bound,
            Relation::Vanishes => observed == Valuation::Infinite,
        };
        BoundCheckRow {
            e,
            k,
            i,
            observed,
            bound,
            holds,
        }
    }

    /// `observed - bound`, `+inf` when observed is `+inf`.
    pub fn slack(&self) -> Valuation {
        self.observed.minus(self.bound)
    }

    pub fn is_equality(&self) -> bool {
        self.observed == self.bound
    }

    pub fn key(&self) -> (u32, u64, Option<u64>) {
        (self.e, self.k, self.i)
    }
}

/// Parameters of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepParams {
    pub e_min: u32,
    pub e_max: u32,
    /// Size bound for checks not indexed by level (and `a` for `sumj`).
    pub limit: Option<u64>,
    /// Number of random pairs for `engines-agree`.
    pub samples: usize,
    pub seed: u64,
}

impl SweepParams {
    pub fn levels(e_min: u32, e_max: u32) -> Self {
        SweepParams {
            e_min,
            e_max,
            limit: None,
            samples: 500,
            seed: 0x5eed_f00d,
        }
    }

    pub fn defaults_for(check: CheckId) -> Self {
        let (lo, hi) = check.default_levels();
        SweepParams {
            limit: check.default_limit(),
            ..Self::levels(lo, hi)
        }
    }

    pub fn with_limit(mut self, limit: u64) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn validate(&self) -> crate::Result<()> {
        if self.e_min > self.e_max {
            return Err(domain(format!(
                "empty level range: e_min = {} > e_max = {}",
                self.e_min, self.e_max
            )));
        }
        if self.e_max > 40 {
            return Err(domain(format!(
                "e_max = {} is beyond exact reach",
                self.e_max
            )));
        }
        Ok(())
    }
}

/// Per-level totals kept in memory while rows stream to a sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSummary {
    pub e: u32,
    pub rows: u64,
    pub violations: u64,
    pub equality_cases: u64,
    pub min_slack: Option<Valuation>,
}

/// Counters for sweeps run on the 2-adic engine.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub definite: u64,
    /// Answers reached with at most one precision doubling.
    pub within_one_retry: u64,
    pub fell_back: u64,
    pub exhausted: u64,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub check: CheckId,
    pub params: SweepParams,
    pub engine: Engine,
    pub jobs: usize,
    pub rows_total: u64,
    pub violations: Vec<BoundCheckRow>,
    pub equality_cases: Vec<BoundCheckRow>,
    pub levels: Vec<LevelSummary>,
    /// Rows the 2-adic engine could not decide (no exact fallback).
    pub precision_exhausted: Vec<(u32, u64, Option<u64>)>,
    pub engine_stats: EngineStats,
    pub stopped_early: bool,
    pub duration_ms: u64,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.precision_exhausted.is_empty()
    }

    /// Equality-case `k` values at level `e`, in order.
    pub fn equality_ks(&self, e: u32) -> Vec<u64> {
        self.equality_cases
            .iter()
            .filter(|r| r.e == e)
            .map(|r| r.k)
            .collect()
    }
}
