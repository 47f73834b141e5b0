use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// A 2-adic integer `x = sum 2^(e_i)`, `e_1 < e_2 < ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoAdicSpec {
    Finite(u64),
    /// Finitely many exponents, strictly increasing.
    ExponentList(Vec<u64>),
    /// `e_(i+1) = a e_i + b`.
    AffineRule {
        e1: u64,
        a: u64,
        b: i64,
    },
    /// Bits least significant first: `preamble`, then `block` repeated.
    EventuallyPeriodic {
        preamble: Vec<bool>,
        block: Vec<bool>,
    },
}

fn parse_error(input: &str, reason: impl Into<String>) -> Error {
    Error::SpecParse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

impl TwoAdicSpec {
    pub fn exponent_list(exponents: Vec<u64>) -> Result<Self> {
        if exponents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(crate::error::domain(
                "exponents must be strictly increasing",
            ));
        }
        Ok(TwoAdicSpec::ExponentList(exponents))
    }

    /// Since `e_(i+1) - e_i = (a-1) e_i + b` never decreases, the whole
    /// sequence increases iff its first step does.
    pub fn affine(e1: u64, a: u64, b: i64) -> Result<Self> {
        if a == 0 {
            return Err(crate::error::domain("affine rule needs a >= 1"));
        }
        let first_step = (a as i128 - 1) * e1 as i128 + b as i128;
        if first_step <= 0 {
            return Err(crate::error::domain(format!(
                "affine rule e1={e1}, a={a}, b={b} is not strictly increasing"
            )));
        }
        Ok(TwoAdicSpec::AffineRule { e1, a, b })
    }

    pub fn periodic(preamble: Vec<bool>, block: Vec<bool>) -> Result<Self> {
        if block.is_empty() {
            return Err(crate::error::domain("periodic block must be nonempty"));
        }
        Ok(TwoAdicSpec::EventuallyPeriodic { preamble, block })
    }

    /// `x = -1`.
    pub fn minus_one() -> Self {
        TwoAdicSpec::EventuallyPeriodic {
            preamble: Vec::new(),
            block: vec![true],
        }
    }

    /// Whether `x` is a natural number (finitely many 1 bits).
    pub fn is_natural(&self) -> bool {
        match self {
            TwoAdicSpec::Finite(_) | TwoAdicSpec::ExponentList(_) => true,
            TwoAdicSpec::AffineRule { .. } => false,
            TwoAdicSpec::EventuallyPeriodic { block, .. } => !block.contains(&true),
        }
    }

    /// The exponents `e_1 < e_2 < ...`, possibly infinitely many.
    ///
    /// Affine sequences stop before overflowing `u64`.
    pub fn exponents(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match self {
            TwoAdicSpec::Finite(n) => {
                let n = *n;
                Box::new((0..64u64).filter(move |b| n >> b & 1 == 1))
            }
            TwoAdicSpec::ExponentList(v) => Box::new(v.iter().copied()),
            TwoAdicSpec::AffineRule { e1, a, b } => {
                let (a, b) = (*a as i128, *b as i128);
                Box::new(
                    std::iter::successors(Some(*e1 as i128), move |&e| Some(a * e + b))
                        .take_while(|&e| e <= u64::MAX as i128)
                        .map(|e| e as u64),
                )
            }
            TwoAdicSpec::EventuallyPeriodic { preamble, block } => {
                let pre = preamble.len() as u64;
                let ones_pre = preamble
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| **b)
                    .map(|(i, _)| i as u64);
                if !block.contains(&true) {
                    return Box::new(ones_pre);
                }
                let period = block.len() as u64;
                let tail = (pre..).filter(move |p| block[((p - pre) % period) as usize]);
                Box::new(ones_pre.chain(tail))
            }
        }
    }

    /// Bit `p` of `x`.
    pub fn bit(&self, p: u64) -> bool {
        match self {
            TwoAdicSpec::Finite(n) => p < 64 && n >> p & 1 == 1,
            TwoAdicSpec::ExponentList(v) => v.binary_search(&p).is_ok(),
            TwoAdicSpec::AffineRule { .. } => {
                self.exponents().take_while(|&e| e <= p).any(|e| e == p)
            }
            TwoAdicSpec::EventuallyPeriodic { preamble, block } => {
                let pre = preamble.len() as u64;
                if p < pre {
                    preamble[p as usize]
                } else {
                    block[((p - pre) % block.len() as u64) as usize]
                }
            }
        }
    }
}

/// `x mod 2^j`.
pub fn reduce(spec: &TwoAdicSpec, j: u64) -> Result<BigUint> {
    let mut x = BigUint::zero();
    match spec {
        TwoAdicSpec::EventuallyPeriodic { .. } => {
            for p in 0..j {
                if spec.bit(p) {
                    x.set_bit(p, true);
                }
            }
        }
        _ => {
            for e in spec.exponents().take_while(|&e| e < j) {
                x.set_bit(e, true);
            }
        }
    }
    Ok(x)
}

/// Zeros minus ones among the `j` low bits of `x`: `j - 2 alpha(x mod 2^j)`.
pub fn zero_one_excess(spec: &TwoAdicSpec, j: u64) -> Result<i64> {
    let ones = reduce(spec, j)?.count_ones() as i64;
    Ok(j as i64 - 2 * ones)
}

fn bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

impl FromStr for TwoAdicSpec {
    type Err = Error;

    /// `finite:<n>`, `list:<e1>,<e2>,...`, `affine:e1=<n>,a=<n>,b=<int>` or
    /// `periodic:pre=<bits>,block=<bits>` (bits least significant first).
    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| parse_error(s, "expected `<kind>:<body>`"))?;
        let wrap = |e: Error| match e {
            Error::Domain(reason) => parse_error(s, reason),
            other => other,
        };
        match kind.trim() {
            "finite" => body
                .trim()
                .parse()
                .map(TwoAdicSpec::Finite)
                .map_err(|_| parse_error(s, "expected a natural number")),
            "list" => {
                let exps = body
                    .split(',')
                    .map(|t| t.trim().parse::<u64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| parse_error(s, "expected comma-separated naturals"))?;
                TwoAdicSpec::exponent_list(exps).map_err(wrap)
            }
            "affine" => {
                let (mut e1, mut a, mut b) = (None, None, None);
                for part in body.split(',') {
                    let (key, value) = part.split_once('=').ok_or_else(|| {
                        parse_error(s, format!("expected key=value, got `{part}`"))
                    })?;
                    let bad = || parse_error(s, format!("bad value for `{}`", key.trim()));
                    match key.trim() {
                        "e1" => e1 = Some(value.trim().parse::<u64>().map_err(|_| bad())?),
                        "a" => a = Some(value.trim().parse::<u64>().map_err(|_| bad())?),
                        "b" => b = Some(value.trim().parse::<i64>().map_err(|_| bad())?),
                        other => return Err(parse_error(s, format!("unknown key `{other}`"))),
                    }
                }
                match (e1, a, b) {
                    (Some(e1), Some(a), Some(b)) => TwoAdicSpec::affine(e1, a, b).map_err(wrap),
                    _ => Err(parse_error(s, "affine needs e1, a and b")),
                }
            }
            "periodic" => {
                let (mut pre, mut block) = (None, None);
                for part in body.split(',') {
                    let (key, value) = part.split_once('=').ok_or_else(|| {
                        parse_error(s, format!("expected key=value, got `{part}`"))
                    })?;
                    let value =
                        bits(value.trim()).ok_or_else(|| parse_error(s, "bits must be 0 or 1"))?;
                    match key.trim() {
                        "pre" => pre = Some(value),
                        "block" => block = Some(value),
                        other => return Err(parse_error(s, format!("unknown key `{other}`"))),
                    }
                }
                let block = block.ok_or_else(|| parse_error(s, "periodic needs block"))?;
                TwoAdicSpec::periodic(pre.unwrap_or_default(), block).map_err(wrap)
            }
            other => Err(parse_error(s, format!("unknown kind `{other}`"))),
        }
    }
}

impl fmt::Display for TwoAdicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |v: &[bool]| {
            v.iter()
                .map(|b| if *b { '1' } else { '0' })
                .collect::<String>()
        };
        match self {
            TwoAdicSpec::Finite(n) => write!(f, "finite:{n}"),
            TwoAdicSpec::ExponentList(v) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "list:{}", parts.join(","))
            }
            TwoAdicSpec::AffineRule { e1, a, b } => write!(f, "affine:e1={e1},a={a},b={b}"),
            TwoAdicSpec::EventuallyPeriodic { preamble, block } => {
                write!(f, "periodic:pre={},block={}", bits(preamble), bits(block))
            }
        }
    }
}
