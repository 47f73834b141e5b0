//! Truncated 2-adic numbers with guaranteed precision.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::valuation::{alpha, nu2, odd_part, BigRational, Valuation};

/// A 2-adic number known up to a proven absolute precision.
///
/// Nonzero case: the set `{ x : x = 2^valuation * u, u = unit (mod 2^precision) }`.
/// Zero case: the set `{ x : nu2(x) >= valuation + precision }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicApprox {
    valuation: i64,
    unit: BigUint,
    precision: u32,
    zero: bool,
}

fn mask(bits: u32) -> BigUint {
    (BigUint::one() << bits) - 1u32
}

/// Inverse of an odd number modulo `2^bits` by Newton iteration.
pub(crate) fn inverse_mod_pow2(odd: &BigUint, bits: u32) -> BigUint {
    debug_assert!(odd.bit(0));
    let m = mask(bits);
    let two = BigUint::from(2u32);
    // odd * odd = 1 (mod 8)
    let mut y = odd & &m;
    let mut good = 3u32;
    while good < bits {
        let t = (odd * &y) & &m;
        y = (&y * ((&two + &m + 1u32 - t) & &m)) & &m;
        good *= 2;
    }
    y
}

impl PadicApprox {
    /// Build a nonzero approximation; `unit` must be odd.
    pub fn new(valuation: i64, unit: BigUint, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(domain("precision must be at least 1"));
        }
        if !unit.bit(0) {
            return Err(domain("unit must be odd"));
        }
        Ok(PadicApprox {
            valuation,
            unit: unit & mask(precision),
            precision,
            zero: false,
        })
    }

    /// The set of all `x` with `nu2(x) >= absolute`.
    pub fn zero_from(absolute: i64, precision: u32) -> Self {
        let precision = precision.max(1);
        PadicApprox {
            valuation: absolute - precision as i64,
            unit: BigUint::zero(),
            precision,
            zero: true,
        }
    }

    /// Approximate a rational to `precision` significant bits.
    ///
    /// Exact zero has no finite representative; it maps to `nu2 >= precision`.
    pub fn from_rational(q: &BigRational, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(domain("precision must be at least 1"));
        }
        let v = match nu2(q) {
            Valuation::Finite(v) => v,
            Valuation::Infinite => return Ok(Self::zero_from(precision as i64, precision)),
        };
        let unit = unit_of(q, precision);
        Self::new(v, unit, precision)
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// `valuation + precision`: every represented value agrees modulo `2^this`.
    pub fn absolute_precision(&self) -> i64 {
        self.valuation + self.precision as i64
    }

    /// Exact 2-adic valuation if it is determined, `None` in the zero case.
    pub fn definite_valuation(&self) -> Option<i64> {
        (!self.zero).then_some(self.valuation)
    }

    /// Whether the rational `q` lies in the represented set.
    pub fn contains(&self, q: &BigRational) -> bool {
        let vq = nu2(q);
        if self.zero {
            return vq.at_least(self.absolute_precision());
        }
        if vq != self.valuation {
            return false;
        }
        unit_of(q, self.precision) == self.unit
    }

    /// Forget all but the low `precision` bits of the unit.
    pub fn truncate(&self, precision: u32) -> Self {
        let precision = precision.clamp(1, self.precision);
        if self.zero {
            return Self::zero_from(self.absolute_precision(), precision);
        }
        PadicApprox {
            unit: &self.unit & mask(precision),
            precision,
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Self {
        if self.zero {
            return self.clone();
        }
        let m = mask(self.precision);
        let unit = ((&m + 1u32) - &self.unit) & m;
        PadicApprox {
            unit,
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        sum_aligned([self, other].into_iter())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.precision.min(other.precision);
        match (self.zero, other.zero) {
            (false, false) => {
                let unit = (&self.unit * &other.unit) & mask(p);
                PadicApprox {
                    valuation: self.valuation + other.valuation,
                    unit,
                    precision: p,
                    zero: false,
                }
            }
            (true, false) => Self::zero_from(self.absolute_precision() + other.valuation, p),
            (false, true) => Self::zero_from(other.absolute_precision() + self.valuation, p),
            (true, true) => {
                Self::zero_from(self.absolute_precision() + other.absolute_precision(), p)
            }
        }
    }
}

impl fmt::Display for PadicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "O(2^{})", self.absolute_precision())
        } else {
            write!(
                f,
                "2^{} * {} + O(2^{})",
                self.valuation,
                self.unit,
                self.absolute_precision()
            )
        }
    }
}

/// Odd part of a nonzero rational reduced modulo `2^bits`, sign included.
fn unit_of(q: &BigRational, bits: u32) -> BigUint {
    let strip = |n: &BigInt| {
        let m = n.magnitude();
        m >> m.trailing_zeros().unwrap_or(0)
    };
    let m = mask(bits);
    let unit = (strip(q.numer()) * inverse_mod_pow2(&strip(q.denom()), bits)) & &m;
    if q.numer() < &BigInt::zero() {
        ((&m + 1u32) - unit) & m
    } else {
        unit
    }
}

/// Sum 2-adic terms, tracking the worst-case loss of precision.
fn sum_aligned<'a>(terms: impl Iterator<Item = &'a PadicApprox>) -> PadicApprox {
    let terms: Vec<&PadicApprox> = terms.collect();
    let absolute = terms.iter().map(|t| t.absolute_precision()).min().unwrap();
    let min_precision = terms.iter().map(|t| t.precision).min().unwrap();
    let base = terms.iter().filter(|t| !t.zero).map(|t| t.valuation).min();
    let base = match base {
        Some(b) if b < absolute => b,
        _ => return PadicApprox::zero_from(absolute, min_precision),
    };
    let width = (absolute - base) as u32;
    let m = mask(width);
    let mut acc = BigUint::zero();
    for t in terms.iter().filter(|t| !t.zero) {
        let shift = t.valuation - base;
        if shift < width as i64 {
            acc += (&t.unit << shift as u32) & &m;
        }
    }
    normalize(base, acc & m, width)
}

/// Turn `2^base * s (mod 2^(base + width))` into canonical form.
fn normalize(base: i64, s: BigUint, width: u32) -> PadicApprox {
    match s.trailing_zeros() {
        None => PadicApprox::zero_from(base + width as i64, width),
        Some(w) => {
            let w = w as u32;
            let precision = width - w;
            PadicApprox {
                valuation: base + w as i64,
                unit: (s >> w) & mask(precision),
                precision,
                zero: false,
            }
        }
    }
}

/// `f(n)` as a 2-adic approximation carrying `precision` significant bits.
///
/// Each `C(n,k)^-1` is `2^-nu * (odd part)^-1`; the odd-part inverse is carried
/// from `k` to `k+1` through `C(n,k+1) = C(n,k) (n-k)/(k+1)`. Terms are summed
/// at the smallest term valuation, so a sum computed with `w` bits per term is
/// known to `min_k(v_k) + w` absolute bits, minus whatever cancellation eats.
/// Since `f(n) > 0` the cancellation is finite; the working width is raised
/// until `precision` significant bits survive.
pub fn f_padic(n: u64, precision: u32) -> Result<PadicApprox> {
    if precision == 0 {
        return Err(domain("precision must be at least 1"));
    }
    let mut working = precision;
    loop {
        let a = f_padic_working(n, working);
        if a.is_zero() {
            working = working.checked_mul(2).expect("working precision overflow");
            continue;
        }
        if a.precision() >= precision {
            return Ok(a.truncate(precision));
        }
        working += precision - a.precision();
    }
}

/// One pass of the term sum with `width` bits per term.
fn f_padic_working(n: u64, width: u32) -> PadicApprox {
    let m = mask(width);
    // nu2 C(n,k) = alpha(k) + alpha(n-k) - alpha(n)
    let nu_binom = |k: u64| alpha(k) as i64 + alpha(n - k) as i64 - alpha(n) as i64;
    let half = n / 2;
    let base = (0..=half).map(|k| -nu_binom(k)).min().unwrap();

    let mut acc = BigUint::zero();
    let mut inv_odd = BigUint::one();
    for k in 0..=half {
        if k > 0 {
            let up = odd_part(k);
            let down = inverse_mod_pow2(&BigUint::from(odd_part(n - k + 1)), width);
            inv_odd = (inv_odd * up * down) & &m;
        }
        let shift = (-nu_binom(k) - base) as u32;
        // C(n, n-k) = C(n, k): count the mirrored term unless k is the centre
        let copies = if 2 * k == n { 1u32 } else { 2u32 };
        if shift < width {
            acc += ((&inv_odd << shift) * copies) & &m;
        }
    }
    normalize(base, acc & m, width)
}
