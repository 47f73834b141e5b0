use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::valuation::BigRational;

/// Largest `n` for which the recurrence is checked against direct summation
/// before any table is built.
pub const RECURRENCE_GATE_LIMIT: u64 = 1500;

/// `f(n) = sum_k C(n,k)^-1` by direct summation, reduced.
pub fn f_direct(n: u64) -> BigRational {
    let (num, den) = f_direct_unreduced(n);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `f(n)` as `(sum_k k!(n-k)!) / n!`, with no gcd taken.
///
/// Uses `1/C(n,k) = k!(n-k)!/n!` and the exact step
/// `(k+1)!(n-k-1)! = k!(n-k)! * (k+1) / (n-k)`.
pub(crate) fn f_direct_unreduced(n: u64) -> (BigUint, BigUint) {
    let mut fact = BigUint::one();
    for m in 2..=n {
        fact *= m;
    }
    let mut term = fact.clone();
    let mut sum = term.clone();
    for k in 0..n {
        term *= k + 1;
        term /= n - k;
        sum += &term;
    }
    (sum, fact)
}

/// Sequential generator of `f(0), f(1), ...` via
/// `f(n) = ((n+1)/(2n)) f(n-1) + 1`, kept in lowest terms.
///
/// With `f(n-1) = N/D` reduced, the unreduced step is
/// `((n+1)N + 2nD) / (2nD)` and its gcd divides `2n(n+1)`, so reduction
/// only ever needs machine-word remainders.
#[derive(Debug, Clone)]
pub struct FRecurrence {
    next_n: u64,
    num: BigUint,
    den: BigUint,
}

impl Default for FRecurrence {
    fn default() -> Self {
        Self::new()
    }
}

impl FRecurrence {
    pub fn new() -> Self {
        FRecurrence {
            next_n: 0,
            num: BigUint::one(),
            den: BigUint::one(),
        }
    }

    /// Index of the value the next call to [`FRecurrence::step`] returns.
    pub fn next_index(&self) -> u64 {
        self.next_n
    }

    fn advance(&mut self) {
        let n = self.next_n;
        if n > 0 {
            let two_n = 2 * n;
            let num = &self.num * (n + 1) + &self.den * two_n;
            let den = &self.den * two_n;
            let modulus = two_n
                .checked_mul(n + 1)
                .expect("recurrence index too large");
            let a = (&num % modulus).to_u64().unwrap();
            let b = (&den % modulus).to_u64().unwrap();
            let g = a.gcd(&modulus).gcd(&b);
            if g > 1 {
                self.num = num / g;
                self.den = den / g;
            } else {
                self.num = num;
                self.den = den;
            }
        }
        self.next_n += 1;
    }

    /// Produce `f(next_index())` and move on.
    pub fn step(&mut self) -> BigRational {
        self.advance();
        BigRational::new_raw(
            BigInt::from(self.num.clone()),
            BigInt::from(self.den.clone()),
        )
    }
}

impl Iterator for FRecurrence {
    type Item = BigRational;

    fn next(&mut self) -> Option<BigRational> {
        Some(self.step())
    }
}

/// Compare the recurrence with direct summation for every `n <= limit`.
pub fn validate_recurrence(limit: u64) -> Result<()> {
    let recurrent: Vec<BigRational> = FRecurrence::new().take(limit as usize + 1).collect();
    let first_bad = recurrent
        .par_iter()
        .enumerate()
        .filter_map(|(n, value)| {
            let (sum, fact) = f_direct_unreduced(n as u64);
            let lhs = BigInt::from(sum) * value.denom();
            let rhs = value.numer() * BigInt::from(fact);
            (lhs != rhs).then_some(n as u64)
        })
        .min();
    match first_bad {
        Some(n) => Err(Error::RecurrenceGate { n }),
        None => Ok(()),
    }
}

/// Run [`validate_recurrence`] up to [`RECURRENCE_GATE_LIMIT`] once per process.
pub fn ensure_recurrence_gate() -> Result<()> {
    static GATE: OnceLock<Result<()>> = OnceLock::new();
    GATE.get_or_init(|| validate_recurrence(RECURRENCE_GATE_LIMIT))
        .clone()
}

/// `f(0..=max_n)`, materialized in one sequential pass and then read-only.
#[derive(Debug, Clone)]
pub struct FTable {
    values: Vec<BigRational>,
    cursor: FRecurrence,
}

impl FTable {
    /// Build the table; fails if the recurrence gate has not passed.
    pub fn build(max_n: u64) -> Result<Self> {
        ensure_recurrence_gate()?;
        let mut cursor = FRecurrence::new();
        let values = (&mut cursor).take(max_n as usize + 1).collect();
        Ok(FTable { values, cursor })
    }

    pub fn max_n(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn get(&self, n: u64) -> Option<&BigRational> {
        self.values.get(n as usize)
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Grow the table up to `n` (no-op if already covered).
    pub fn extend_to(&mut self, n: u64) {
        while self.max_n() < n {
            let v = self.cursor.step();
            self.values.push(v);
        }
    }

    /// A recurrence positioned just past the end of the table, for streaming
    /// values that are not worth storing.
    pub fn stream_after(&self) -> FRecurrence {
        self.cursor.clone()
    }
}

/// `f(n)` via the validated recurrence, extending `table` as needed.
pub fn f_recurrence(n: u64, table: &mut FTable) -> Result<BigRational> {
    ensure_recurrence_gate()?;
    table.extend_to(n);
    Ok(table.get(n).cloned().unwrap())
}

/// Exact rational `f(n)` for one argument.
pub fn f_exact(n: u64) -> Result<BigRational> {
    let mut table = FTable::build(0)?;
    f_recurrence(n, &mut table)
}

#[cfg(test)]
fn is_reduced(q: &BigRational) -> bool {
    q.numer().gcd(q.denom()).is_one() || num_traits::Zero::is_zero(q.numer())
}
