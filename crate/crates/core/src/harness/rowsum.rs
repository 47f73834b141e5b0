//! Exact sums of inverse binomial coefficients as unreduced integer fractions.
//!
//! Sweeps only ask for 2-adic valuations, so fractions are compared by
//! cross-multiplication and never reduced.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::valuation::{binom, nu2_binom, nu2_int, nu2_uint, BigRational, Valuation};

/// `num / den` with `den > 0`, not necessarily in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fraction {
    pub num: BigInt,
    pub den: BigUint,
}

impl Fraction {
    pub fn zero() -> Self {
        Fraction {
            num: BigInt::zero(),
            den: BigUint::one(),
        }
    }

    pub fn nu2(&self) -> Valuation {
        match nu2_int(&self.num) {
            Valuation::Infinite => Valuation::Infinite,
            v => v + -nu2_uint(&self.den).finite().unwrap(),
        }
    }

    pub fn add(&self, other: &Fraction) -> Fraction {
        Fraction {
            num: &self.num * BigInt::from(other.den.clone())
                + &other.num * BigInt::from(self.den.clone()),
            den: &self.den * &other.den,
        }
    }

    pub fn sub(&self, other: &Fraction) -> Fraction {
        self.add(&Fraction {
            num: -other.num.clone(),
            den: other.den.clone(),
        })
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), BigInt::from(self.den.clone()))
    }
}

/// `nu2(a - b)` without forming the reduced difference.
pub fn nu2_sub(a: &Fraction, b: &Fraction) -> Valuation {
    a.sub(b).nu2()
}

/// `sum_{i=lo}^{hi} C(n,i)^-1` for `hi <= n` (zero when `lo > hi`).
///
/// With `w_i = i!(n-i)! / (lo! (n-hi)!)`, each term is `w_i / D` where
/// `D = n! / (lo! (n-hi)!) = C(n,lo) * w_lo`, `w_lo = (n-lo)!/(n-hi)!`, and
/// `w_{i+1} = w_i (i+1) / (n-i)` exactly.
pub fn inverse_binomial_range_sum(n: u64, lo: u64, hi: u64) -> Fraction {
    assert!(hi <= n, "range end {hi} exceeds row {n}");
    if lo > hi {
        return Fraction::zero();
    }
    let mut w = BigUint::one();
    for m in (n - hi + 1)..=(n - lo) {
        w *= m;
    }
    let den = binom(n, lo) * &w;
    let mut sum = w.clone();
    for i in lo..hi {
        w *= i + 1;
        w /= n - i;
        sum += &w;
    }
    Fraction {
        num: BigInt::from(sum),
        den,
    }
}

/// `N = 2^e + 2k + 1`, the row paired with `2k + 1`.
pub fn paired_row(e: u32, k: u64) -> u64 {
    (1u64 << e) + 2 * k + 1
}

/// `nu2( sum_{i=0}^{k} T_i )`.
pub fn symm_i_valuation(e: u32, k: u64) -> Valuation {
    let big = inverse_binomial_range_sum(paired_row(e, k), 0, k);
    let small = inverse_binomial_range_sum(2 * k + 1, 0, k);
    nu2_sub(&big, &small)
}

/// `nu2( sum_{i=k+1}^{2^(e-1)+k} C(2^e+2k+1, i)^-1 )`, for `e >= 1`.
pub fn symm_ii_valuation(e: u32, k: u64) -> Valuation {
    let n = paired_row(e, k);
    inverse_binomial_range_sum(n, k + 1, (1u64 << (e - 1)) + k).nu2()
}

/// `nu2(1/A - 1/B)` for positive integers `A`, `B`.
fn nu2_reciprocal_difference(a: &BigUint, b: &BigUint) -> Valuation {
    if a == b {
        return Valuation::Infinite;
    }
    let diff = BigInt::from(b.clone()) - BigInt::from(a.clone());
    nu2_int(&diff) + -(nu2_uint(a) + nu2_uint(b)).finite().unwrap()
}

/// `nu2(T_i)` with `T_i = C(2^e+2k+1, i)^-1 - C(2k+1, i)^-1`, for `i <= 2k+1`.
pub fn t_valuation(e: u32, k: u64, i: u64) -> Valuation {
    debug_assert!(i <= 2 * k + 1);
    nu2_reciprocal_difference(&binom(paired_row(e, k), i), &binom(2 * k + 1, i))
}

/// `nu2(T_{2i} + T_{2i+1})` for `0 <= i <= (k-1)/2`, in order of `i`.
///
/// Walks both rows once, keeping the running binomials.
pub fn paired_t_valuations(e: u32, k: u64) -> Vec<(u64, Valuation)> {
    if k == 0 {
        return Vec::new();
    }
    let big_n = paired_row(e, k);
    let small_n = 2 * k + 1;
    let last = (k - 1) / 2;
    let mut out = Vec::with_capacity(last as usize + 1);
    let mut a = BigUint::one(); // C(N, j)
    let mut b = BigUint::one(); // C(n, j)
    for i in 0..=last {
        let j = 2 * i;
        let a_next = &a * (big_n - j) / (j + 1);
        let b_next = &b * (small_n - j) / (j + 1);
        // (a + a')/(a a') - (b + b')/(b b')
        let lhs = BigInt::from((&a + &a_next) * &b * &b_next);
        let rhs = BigInt::from((&b + &b_next) * &a * &a_next);
        let v = match nu2_int(&(lhs - rhs)) {
            Valuation::Infinite => Valuation::Infinite,
            Valuation::Finite(t) => Valuation::Finite(
                t - nu2_binom(big_n, j)
                    - nu2_binom(big_n, j + 1)
                    - nu2_binom(small_n, j)
                    - nu2_binom(small_n, j + 1),
            ),
        };
        out.push((i, v));
        a = &a_next * (big_n - j - 1) / (j + 2);
        b = &b_next * (small_n - j - 1) / (j + 2);
    }
    out
}

/// `sum_{m=lo}^{hi} 1/m` by binary splitting, unreduced.
pub fn reciprocal_sum(lo: u64, hi: u64) -> Fraction {
    assert!(lo >= 1);
    if lo > hi {
        return Fraction::zero();
    }
    fn split(lo: u64, hi: u64) -> (BigUint, BigUint) {
        if lo == hi {
            return (BigUint::one(), BigUint::from(lo));
        }
        let mid = lo + (hi - lo) / 2;
        let (p1, q1) = split(lo, mid);
        let (p2, q2) = split(mid + 1, hi);
        (p1 * &q2 + p2 * &q1, q1 * q2)
    }
    let (p, q) = split(lo, hi);
    Fraction {
        num: BigInt::from(p),
        den: q,
    }
}

/// Elementary symmetric polynomials `e_0..e_m` of the integers `values`,
/// i.e. the coefficients of `prod (x + a)` from the top.
pub fn integer_elementary_symmetric(values: &[u64]) -> Vec<BigUint> {
    let mut coeffs = vec![BigUint::one()];
    for &a in values {
        coeffs.push(BigUint::zero());
        for r in (1..coeffs.len()).rev() {
            let add = &coeffs[r - 1] * a;
            coeffs[r] += add;
        }
    }
    coeffs
}

/// `nu2(sigma_j(1/a_1, ..., 1/a_m))` for `j = 0..=m`.
///
/// Uses `sigma_j(1/a) = e_{m-j}(a) / prod a`.
pub fn reciprocal_sigma_valuations(denominators: &[u64]) -> Vec<Valuation> {
    let m = denominators.len();
    let coeffs = integer_elementary_symmetric(denominators);
    let prod_nu: i64 = denominators
        .iter()
        .map(|&a| a.trailing_zeros() as i64)
        .sum();
    (0..=m)
        .map(|j| nu2_uint(&coeffs[m - j]) + -prod_nu)
        .collect()
}
