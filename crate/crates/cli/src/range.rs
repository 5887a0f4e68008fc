//! Inclusive parameter ranges `a..b` (or a single value `a`).

use thiserror::Error;

/// Longest range accepted on the command line.
pub const MAX_RANGE_LEN: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RangeError {
    #[error("empty range")]
    Empty,
    #[error("malformed range {0:?}: expected `a..b` or `a`")]
    Syntax(String),
    #[error("odd endpoint {0} in an even range")]
    Odd(i64),
    #[error("range {lo}..{hi} runs backwards")]
    Reversed { lo: i64, hi: i64 },
    #[error("range {lo}..{hi} has more than {MAX_RANGE_LEN} values")]
    TooLong { lo: i64, hi: i64 },
}

/// `lo, lo + step, …, hi`; `hi − lo` is a multiple of `step`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamRange {
    pub lo: i64,
    pub hi: i64,
    pub step: i64,
}

impl ParamRange {
    pub fn single(v: i64) -> Self {
        ParamRange { lo: v, hi: v, step: 1 }
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        let step = self.step;
        let hi = self.hi;
        std::iter::successors(Some(self.lo), move |&v| v.checked_add(step).filter(|&n| n <= hi))
    }

    pub fn len(&self) -> u64 {
        u64::try_from((self.hi as i128 - self.lo as i128) / self.step as i128 + 1).unwrap_or(u64::MAX)
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn parse_int(s: &str, whole: &str) -> Result<i64, RangeError> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(RangeError::Syntax(whole.to_string()));
    }
    s.parse().map_err(|_| RangeError::Syntax(whole.to_string()))
}

fn parse_bounds(s: &str) -> Result<(i64, i64), RangeError> {
    if s.is_empty() {
        return Err(RangeError::Empty);
    }
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse_int(a, s)?, parse_int(b, s)?),
        None => {
            let v = parse_int(s, s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(RangeError::Reversed { lo, hi });
    }
    Ok((lo, hi))
}

fn finish(lo: i64, hi: i64, step: i64) -> Result<ParamRange, RangeError> {
    let r = ParamRange { lo, hi, step };
    if r.len() > MAX_RANGE_LEN {
        return Err(RangeError::TooLong { lo, hi });
    }
    Ok(r)
}

/// Range over even integers; odd endpoints are an error.
pub fn parse_even_range(s: &str) -> Result<ParamRange, RangeError> {
    let (lo, hi) = parse_bounds(s)?;
    for v in [lo, hi] {
        if v % 2 != 0 {
            return Err(RangeError::Odd(v));
        }
    }
    finish(lo, hi, 2)
}

/// Range over all integers.
pub fn parse_int_range(s: &str) -> Result<ParamRange, RangeError> {
    let (lo, hi) = parse_bounds(s)?;
    finish(lo, hi, 1)
}
