//! Single-instance forms of the inequalities and identities swept by the harness.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::harness::rowsum::{paired_row, reciprocal_sum};
use crate::valuation::{alpha, binom, lg, lg_pos, nu2, nu2_u64, BigRational, Valuation};

fn inverse_binom(n: u64, k: u64) -> BigRational {
    let c = binom(n, k);
    if c.is_zero() {
        // C(n,k) = 0 for k > n; its "inverse" is taken to be 0
        BigRational::zero()
    } else {
        BigRational::new(BigInt::one(), BigInt::from(c))
    }
}

/// `T_i = C(2^e+2k+1, i)^-1 - C(2k+1, i)^-1`.
///
/// For `i > 2k+1` the second binomial vanishes and its term is taken as 0.
pub fn t_term(e: u32, k: u64, i: u64) -> Result<BigRational> {
    let n = paired_row(e, k);
    if i > n {
        return Err(domain(format!("T: i = {i} exceeds 2^e+2k+1 = {n}")));
    }
    Ok(inverse_binom(n, i) - inverse_binom(2 * k + 1, i))
}

/// All of `sigma_0..sigma_m` of `values`, exactly.
///
/// One pass over the values; after processing a prefix, `out[j]` is `sigma_j`
/// of that prefix.
pub fn elementary_symmetric_all(values: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    for v in values {
        out.push(BigRational::zero());
        for j in (1..out.len()).rev() {
            let add = &out[j - 1] * v;
            out[j] += add;
        }
    }
    out
}

/// `sigma_j(values)`; `sigma_0 = 1`.
pub fn elementary_symmetric(j: usize, values: &[BigRational]) -> Result<BigRational> {
    if j > values.len() {
        return Err(domain(format!(
            "sigma_{j} needs at least {j} values, got {}",
            values.len()
        )));
    }
    Ok(elementary_symmetric_all(values).swap_remove(j))
}

fn unit_fractions(denominators: impl Iterator<Item = u64>) -> Vec<BigRational> {
    denominators
        .map(|d| BigRational::new(BigInt::one(), BigInt::from(d)))
        .collect()
}

/// Both sides of
/// `C(2^e+a,b)^-1 - C(a,b)^-1 = -C(2^e+a,b)^-1 sum_{j>=1} 2^(je) sigma_j(1/a,...,1/(a-b+1))`.
pub fn sumj_sides(e: u32, a: u64, b: u64) -> Result<(BigRational, BigRational)> {
    if b > a {
        return Err(domain(format!("sumj: b = {b} exceeds a = {a}")));
    }
    let shifted = (1u64 << e) + a;
    let lhs = inverse_binom(shifted, b) - inverse_binom(a, b);
    if b == 0 {
        return Ok((lhs, BigRational::zero()));
    }
    let sigmas = elementary_symmetric_all(&unit_fractions(a - b + 1..=a));
    let two_e = BigRational::from_integer(BigInt::one() << e);
    let mut power = BigRational::one();
    let mut series = BigRational::zero();
    for sigma in &sigmas[1..] {
        power *= &two_e;
        series += &power * sigma;
    }
    let rhs = -(inverse_binom(shifted, b) * series);
    Ok((lhs, rhs))
}

/// Exact check of the `2^(je) sigma_j` expansion.
pub fn sumj_identity_check(e: u32, a: u64, b: u64) -> Result<bool> {
    let (lhs, rhs) = sumj_sides(e, a, b)?;
    Ok(lhs == rhs)
}

/// `1/(2l+2) + ... + 1/(4l+1)`.
pub fn harmonic_segment(l: u64) -> Result<BigRational> {
    if l == 0 {
        return Err(domain("harmonic segment needs l >= 1"));
    }
    Ok(reciprocal_sum(2 * l + 2, 4 * l + 1).to_rational())
}

/// `nu2` of the harmonic segment, computed without reduction.
pub fn harmonic_segment_valuation(l: u64) -> Result<Valuation> {
    if l == 0 {
        return Err(domain("harmonic segment needs l >= 1"));
    }
    Ok(reciprocal_sum(2 * l + 2, 4 * l + 1).nu2())
}

/// `nu2(1/(2l+2) + ... + 1/(4l+1)) = -lg(l) - 2`.
pub fn harmonic_valuation_check(l: u64) -> Result<bool> {
    Ok(harmonic_segment_valuation(l)? == -lg_pos(l) - 2)
}

/// Right-hand side of the carry bound: `lg(k+1) - nu2(k+1)`.
pub fn carry_bound(k: u64) -> i64 {
    lg_pos(k + 1) - nu2_u64(k + 1).finite().unwrap()
}

/// `nu2(C(k,i)) <= lg(k+1) - nu2(k+1)`.
pub fn carry_bound_check(k: u64, i: u64) -> Result<bool> {
    if i > k {
        return Err(domain(format!("carry bound: i = {i} exceeds k = {k}")));
    }
    Ok(crate::valuation::nu2_uint(&binom(k, i)) <= carry_bound(k))
}

/// `2 lg(l+1) >= alpha(l) + lg(l)`.
pub fn lg_alpha_inequality_check(l: u64) -> Result<bool> {
    if l == 0 {
        return Err(domain("lg/alpha inequality needs l >= 1"));
    }
    Ok(2 * lg(l + 1)? >= alpha(l) + lg(l)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    Holds,
    Fails {
        j: usize,
    },
    /// The hypotheses `sigma_1 != 0`, `e > t` are not met.
    Inapplicable,
}

/// The quantities in the `j = 1` dominance argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceData {
    /// `t = -nu2(sigma_1)`
    pub t: i64,
    /// `v_j = nu2(2^(je) sigma_j)` for `j = 1..=m` (index 0 holds `v_1`).
    pub v: Vec<Valuation>,
}

/// `v_j` for `j >= 1` from precomputed `nu2(sigma_j)`, `j = 0..=m`.
pub fn dominance_data(e: u32, sigma_valuations: &[Valuation]) -> Option<DominanceData> {
    let t = -sigma_valuations.get(1)?.finite()?;
    let v = sigma_valuations[1..]
        .iter()
        .enumerate()
        .map(|(idx, s)| *s + (idx as i64 + 1) * e as i64)
        .collect();
    Some(DominanceData { t, v })
}

/// Decide dominance from `nu2(sigma_j)`, `j = 0..=m`.
pub fn dominance_from_valuations(e: u32, sigma_valuations: &[Valuation]) -> Dominance {
    let data = match dominance_data(e, sigma_valuations) {
        Some(d) if (e as i64) > d.t => d,
        _ => return Dominance::Inapplicable,
    };
    let v1 = data.v[0];
    for (idx, vj) in data.v.iter().enumerate().skip(1) {
        // sigma_j = 0 gives v_j = +inf, which passes
        if *vj <= v1 {
            return Dominance::Fails { j: idx + 1 };
        }
    }
    Dominance::Holds
}

/// `v_j > v_1` for every `j >= 2`, with `v_j = nu2(2^(je) sigma_j(values))`.
pub fn j1_dominance_check(e: u32, values: &[BigRational]) -> Dominance {
    if values.is_empty() {
        return Dominance::Inapplicable;
    }
    let sigma_valuations: Vec<Valuation> =
        elementary_symmetric_all(values).iter().map(nu2).collect();
    dominance_from_valuations(e, &sigma_valuations)
}

/// The list `1/(2l+2), ..., 1/(4l+1)` used for `T_{2l}`.
pub fn part_b_values(l: u64) -> Vec<BigRational> {
    unit_fractions(2 * l + 2..=4 * l + 1)
}

/// Predicted `nu2(T_{2l}) = e - alpha(l) - lg(l) - 2`.
pub fn thm_b_predicted(e: u32, l: u64) -> i64 {
    e as i64 - alpha(l) as i64 - lg_pos(l) - 2
}
