use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fsum::exact::FTable;
use crate::fsum::padic::f_padic;
use crate::valuation::{nu2_int, BigRational, Valuation};

pub const DEFAULT_PRECISION: u32 = 64;
pub const PRECISION_CAP: u32 = 4096;

/// Retry schedule for the 2-adic engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub initial: u32,
    pub cap: u32,
    /// Answer with exact arithmetic once `cap` is exhausted.
    pub exact_fallback: bool,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            initial: DEFAULT_PRECISION,
            cap: PRECISION_CAP,
            exact_fallback: true,
        }
    }
}

impl PrecisionPolicy {
    pub fn with_initial(initial: u32) -> Self {
        PrecisionPolicy {
            initial: initial.max(1),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Exact,
    Padic(PrecisionPolicy),
}

impl Engine {
    pub fn name(&self) -> &'static str {
        match self {
            Engine::Exact => "exact",
            Engine::Padic(_) => "padic",
        }
    }

    pub fn precision(&self) -> Option<u32> {
        match self {
            Engine::Exact => None,
            Engine::Padic(p) => Some(p.initial),
        }
    }
}

/// `nu2(a - b)` by cross-multiplication; no gcd is taken.
pub fn nu2_difference(a: &BigRational, b: &BigRational) -> Valuation {
    let cross: BigInt = a.numer() * b.denom() - b.numer() * a.denom();
    match nu2_int(&cross) {
        Valuation::Infinite => Valuation::Infinite,
        v => {
            let dens = nu2_int(a.denom()) + nu2_int(b.denom());
            Valuation::Finite(v.finite().unwrap() - dens.finite().unwrap())
        }
    }
}

/// `nu2(f(n1) - f(n2))` at a single 2-adic precision.
pub fn diff_valuation_padic(n1: u64, n2: u64, precision: u32) -> Result<Valuation> {
    if n1 == n2 {
        return Ok(Valuation::Infinite);
    }
    let d = f_padic(n1, precision)?.sub(&f_padic(n2, precision)?);
    d.definite_valuation()
        .map(Valuation::Finite)
        .ok_or(Error::PrecisionExhausted { precision })
}

/// How a difference valuation was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiffOutcome {
    pub valuation: Valuation,
    /// Precision that produced the answer; `None` for exact arithmetic.
    pub precision: Option<u32>,
    /// Number of precision doublings before the answer.
    pub retries: u32,
    pub fell_back: bool,
}

/// Evaluates `nu2(f(n1) - f(n2))` with a chosen engine.
///
/// Exact values come from a shared [`FTable`] that is grown on demand by a
/// single writer and otherwise only read.
#[derive(Debug, Clone)]
pub struct DiffEngine {
    engine: Engine,
    table: Arc<RwLock<Option<Arc<FTable>>>>,
}

impl DiffEngine {
    pub fn new(engine: Engine) -> Self {
        DiffEngine {
            engine,
            table: Arc::new(RwLock::new(None)),
        }
    }

    /// Engine reading from an already materialized table.
    pub fn with_table(engine: Engine, table: Arc<FTable>) -> Self {
        DiffEngine {
            engine,
            table: Arc::new(RwLock::new(Some(table))),
        }
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    /// The exact table, covering at least `0..=max_n`.
    pub fn table(&self, max_n: u64) -> Result<Arc<FTable>> {
        if let Some(t) = self.table.read().unwrap().as_ref() {
            if t.max_n() >= max_n {
                return Ok(t.clone());
            }
        }
        let mut guard = self.table.write().unwrap();
        let grown = match guard.as_ref() {
            Some(t) if t.max_n() >= max_n => return Ok(t.clone()),
            Some(t) => {
                let mut t = (**t).clone();
                t.extend_to(max_n);
                t
            }
            None => FTable::build(max_n)?,
        };
        let grown = Arc::new(grown);
        *guard = Some(grown.clone());
        Ok(grown)
    }

    pub fn f(&self, n: u64) -> Result<BigRational> {
        Ok(self.table(n)?.get(n).unwrap().clone())
    }

    fn exact(&self, n1: u64, n2: u64) -> Result<Valuation> {
        let t = self.table(n1.max(n2))?;
        Ok(nu2_difference(t.get(n1).unwrap(), t.get(n2).unwrap()))
    }

    pub fn diff(&self, n1: u64, n2: u64) -> Result<DiffOutcome> {
        match self.engine {
            Engine::Exact => Ok(DiffOutcome {
                valuation: self.exact(n1, n2)?,
                precision: None,
                retries: 0,
                fell_back: false,
            }),
            Engine::Padic(policy) => {
                let mut precision = policy.initial.max(1);
                let mut retries = 0;
                loop {
                    match diff_valuation_padic(n1, n2, precision) {
                        Ok(valuation) => {
                            return Ok(DiffOutcome {
                                valuation,
                                precision: Some(precision),
                                retries,
                                fell_back: false,
                            })
                        }
                        Err(Error::PrecisionExhausted { .. }) if precision < policy.cap => {
                            precision = (precision * 2).min(policy.cap);
                            retries += 1;
                        }
                        Err(Error::PrecisionExhausted { .. }) if policy.exact_fallback => {
                            return Ok(DiffOutcome {
                                valuation: self.exact(n1, n2)?,
                                precision: None,
                                retries,
                                fell_back: true,
                            })
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }

    pub fn diff_valuation(&self, n1: u64, n2: u64) -> Result<Valuation> {
        self.diff(n1, n2).map(|o| o.valuation)
    }
}

/// `nu2(f(n1) - f(n2))` with a fresh engine.
///
/// Convenience for one-off queries; sweeps share a [`DiffEngine`].
pub fn diff_valuation(n1: u64, n2: u64, engine: Engine) -> Result<Valuation> {
    DiffEngine::new(engine).diff_valuation(n1, n2)
}

static SHARED_EXACT: OnceLock<DiffEngine> = OnceLock::new();

/// Process-wide exact engine, for callers that do not manage their own.
pub fn shared_exact() -> &'static DiffEngine {
    SHARED_EXACT.get_or_init(|| DiffEngine::new(Engine::Exact))
}
