//! Valuations, binary digit functions, binomial coefficients and carry counting.
//!
//! Everything here is a pure function of its arguments. The rational type is
//! [`num_rational::BigRational`], which keeps `gcd(num, den) = 1` and `den > 0`
//! after every operation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};

pub use num_rational::BigRational;

/// The value of a p-adic valuation: a finite exponent or `+inf` (for zero).
///
/// Every finite value compares below [`Valuation::Infinite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `self - bound`, staying at `+inf` for the zero case.
    pub fn minus(self, bound: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => {
                Valuation::Finite(v.checked_sub(bound).expect("slack overflow"))
            }
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    /// True when the measured value is at least `bound` (always for `+inf`).
    pub fn at_least(self, bound: i64) -> bool {
        self >= Valuation::Finite(bound)
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => {
                Valuation::Finite(a.checked_add(b).expect("valuation overflow"))
            }
            _ => Valuation::Infinite,
        }
    }
}

impl Add<i64> for Valuation {
    type Output = Valuation;

    fn add(self, rhs: i64) -> Valuation {
        self + Valuation::Finite(rhs)
    }
}

impl PartialEq<i64> for Valuation {
    fn eq(&self, other: &i64) -> bool {
        *self == Valuation::Finite(*other)
    }
}

impl PartialOrd<i64> for Valuation {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Valuation::Finite(*other)))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// A finite value is written as an integer, `+inf` as the string `"inf"`.
impl serde::Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Exponent of 2 in a nonzero natural number.
pub fn nu2_uint(n: &BigUint) -> Valuation {
    match n.trailing_zeros() {
        Some(t) => Valuation::Finite(t as i64),
        None => Valuation::Infinite,
    }
}

pub fn nu2_int(n: &BigInt) -> Valuation {
    nu2_uint(n.magnitude())
}

pub fn nu2_u64(n: u64) -> Valuation {
    if n == 0 {
        Valuation::Infinite
    } else {
        Valuation::Finite(n.trailing_zeros() as i64)
    }
}

/// 2-adic valuation of a rational number.
pub fn nu2(q: &BigRational) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinite;
    }
    let top = nu2_int(q.numer()).finite().unwrap();
    let bottom = nu2_int(q.denom()).finite().unwrap();
    Valuation::Finite(top - bottom)
}

fn nu_p_int(p: &BigInt, n: &BigInt) -> i64 {
    let mut count = 0;
    let mut rest = n.abs();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return count;
        }
        rest = q;
        count += 1;
    }
}

/// `nu_p(q)`: the exponent of the prime `p` in the rational `q`.
///
/// Primality of `p` is the caller's responsibility.
pub fn nu(p: u64, q: &BigRational) -> Valuation {
    assert!(p >= 2, "nu: p must be at least 2");
    if q.is_zero() {
        return Valuation::Infinite;
    }
    if p == 2 {
        return nu2(q);
    }
    let p = BigInt::from(p);
    Valuation::Finite(nu_p_int(&p, q.numer()) - nu_p_int(&p, q.denom()))
}

/// Number of 1's in the binary expansion of `n`.
pub fn alpha(n: u64) -> u32 {
    n.count_ones()
}

/// `floor(log2(n))`; undefined at 0.
pub fn lg(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(domain("lg(0) is undefined"));
    }
    Ok(63 - n.leading_zeros())
}

/// `lg` for call sites whose argument is statically positive.
pub(crate) fn lg_pos(n: u64) -> i64 {
    lg(n).expect("lg argument must be positive") as i64
}

/// Exact binomial coefficient, zero when `k > n`.
///
/// Running product `c <- c * (n - i) / (i + 1)`; every intermediate value is
/// itself a binomial coefficient, so each division is exact.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c *= n - i;
        c /= i + 1;
    }
    c
}

/// Number of carries when `m` and `n` are added in base 2.
pub fn carry_count(m: u64, n: u64) -> u32 {
    let (mut a, mut b) = (m as u128, n as u128);
    let mut carry = 0u128;
    let mut count = 0;
    while a > 0 || b > 0 || carry > 0 {
        let s = (a & 1) + (b & 1) + carry;
        carry = s >> 1;
        count += carry as u32;
        a >>= 1;
        b >>= 1;
    }
    count
}

/// The three quantities compared by Kummer's theorem for `C(m+n, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KummerValues {
    pub nu2_binom: i64,
    pub digit_sum_formula: i64,
    pub carries: i64,
}

impl KummerValues {
    pub fn agree(&self) -> bool {
        self.nu2_binom == self.digit_sum_formula && self.nu2_binom == self.carries
    }
}

pub fn kummer_values(m: u64, n: u64) -> KummerValues {
    let total = m.checked_add(n).expect("m + n overflows u64");
    let c = binom(total, m);
    KummerValues {
        nu2_binom: nu2_uint(&c).finite().expect("binomial is nonzero"),
        digit_sum_formula: alpha(m) as i64 + alpha(n) as i64 - alpha(total) as i64,
        carries: carry_count(m, n) as i64,
    }
}

/// `nu2(C(m+n, m)) = alpha(m) + alpha(n) - alpha(m+n) = carries(m, n)`.
///
/// A `false` return is a defect in this library, never a counterexample.
pub fn kummer_identity_check(m: u64, n: u64) -> bool {
    kummer_values(m, n).agree()
}

/// `nu2(C(n, k))` for `k <= n`, via the carry count of `k + (n - k)`.
pub fn nu2_binom(n: u64, k: u64) -> i64 {
    debug_assert!(k <= n);
    carry_count(k, n - k) as i64
}

/// Exponent of 2 in `n!` (Legendre).
pub fn nu2_factorial(n: u64) -> i64 {
    (n - alpha(n) as u64) as i64
}

/// Odd part of a nonzero machine integer.
pub(crate) fn odd_part(n: u64) -> u64 {
    debug_assert!(n != 0);
    n >> n.trailing_zeros()
}
