//! Exact q-expansions: Bernoulli numbers, Eisenstein series, the discriminant
//! `Δ` and the modular invariant `j`, all over exact rationals.

mod series;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Integer, Rational};
use thiserror::Error;

pub use self::series::ExactSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("coefficient window mismatch: lead {lead}, trunc {trunc}, {len} coefficients")]
    BadWindow { lead: i64, trunc: i64, len: usize },
    #[error("series has no invertible leading coefficient")]
    NotInvertible,
    #[error("odd index {0} has no Bernoulli number in use here")]
    OddBernoulli(u32),
    #[error("weight {0} is not supported (need k = 0 or even k >= 4)")]
    BadWeight(i64),
    #[error("truncation {trunc} below the minimum {min}")]
    BadTrunc { trunc: i64, min: i64 },
}

/// Bernoulli number `B_n` with `B_1 = -1/2`, memoized.
///
/// Uses the recurrence `sum_{j<=n} C(n+1, j) B_j = 0`.
pub fn bernoulli(n: u32) -> Result<Rational, SeriesError> {
    if n > 1 && n % 2 == 1 {
        return Err(SeriesError::OddBernoulli(n));
    }
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)]));
    let mut table = cache.lock().expect("bernoulli cache poisoned");
    while table.len() <= n as usize {
        let m = table.len() as u32;
        let mut acc = Rational::new();
        for (j, b) in table.iter().enumerate() {
            if *b == 0 {
                continue;
            }
            let binom = Integer::from(Integer::binomial_u(m + 1, j as u32));
            acc += Rational::from(b * &binom);
        }
        table.push(-acc / (m + 1));
    }
    Ok(table[n as usize].clone())
}

/// Sum of `d^power` over the divisors `d` of `n`, by trial division.
pub fn divisor_sigma(power: u32, n: u64) -> Integer {
    let mut total = Integer::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += Integer::from(d).pow(power);
            let e = n / d;
            if e != d {
                total += Integer::from(e).pow(power);
            }
        }
        d += 1;
    }
    total
}

/// `E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n` through `q^trunc`; `E_0 = 1`.
pub fn eisenstein(k: i64, trunc: i64) -> Result<ExactSeries, SeriesError> {
    if trunc < 0 {
        return Err(SeriesError::BadTrunc { trunc, min: 0 });
    }
    if k == 0 {
        return Ok(ExactSeries::one(trunc));
    }
    if k < 4 || k % 2 != 0 {
        return Err(SeriesError::BadWeight(k));
    }
    let factor = -Rational::from(2 * k) / bernoulli(k as u32)?;
    let mut coeffs = Vec::with_capacity(trunc as usize + 1);
    coeffs.push(Rational::from(1));
    for n in 1..=trunc as u64 {
        let sigma = divisor_sigma(k as u32 - 1, n);
        coeffs.push(Rational::from(&factor * &sigma));
    }
    Ok(ExactSeries::from_coeffs(0, coeffs))
}

/// `Δ = (E_4^3 - E_6^2) / 1728`, lead `q^1`.
pub fn delta(trunc: i64) -> Result<ExactSeries, SeriesError> {
    if trunc < 1 {
        return Err(SeriesError::BadTrunc { trunc, min: 1 });
    }
    let e4 = eisenstein(4, trunc)?;
    let e6 = eisenstein(6, trunc)?;
    let diff = &e4.pow(3)? - &e6.pow(2)?;
    Ok(diff.scale(&Rational::from((1, 1728))).normalized())
}

/// `j = E_4^3 / Δ = q^{-1} + 744 + 196884 q + ...` through `q^trunc`.
pub fn jfunction(trunc: i64) -> Result<ExactSeries, SeriesError> {
    if trunc < -1 {
        return Err(SeriesError::BadTrunc { trunc, min: -1 });
    }
    let e4 = eisenstein(4, trunc + 1)?;
    let d = delta(trunc + 2)?;
    let j = &e4.pow(3)? * &d.inverse()?;
    Ok(j.truncated(trunc))
}

/// Which standard expansion to fetch from [`standard_series`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Standard {
    Eisenstein(i64),
    Delta,
    J,
}

/// Shared, memoized expansions used by the numerical evaluators. The
/// returned series is known through at least `q^trunc`.
pub fn standard_series(which: Standard, trunc: i64) -> Result<Arc<ExactSeries>, SeriesError> {
    type Cache = Mutex<HashMap<Standard, Arc<ExactSeries>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("series cache poisoned").get(&which) {
        if s.trunc() >= trunc {
            return Ok(Arc::clone(s));
        }
    }
    let fresh = Arc::new(match which {
        Standard::Eisenstein(k) => eisenstein(k, trunc)?,
        Standard::Delta => delta(trunc)?,
        Standard::J => jfunction(trunc)?,
    });
    let mut guard = cache.lock().expect("series cache poisoned");
    let entry = guard.entry(which).or_insert_with(|| Arc::clone(&fresh));
    if entry.trunc() < fresh.trunc() {
        *entry = Arc::clone(&fresh);
    }
    Ok(fresh)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Akiyama–Tanigawa; independent of the binomial recurrence. Gives
    /// `B_1 = +1/2`, which does not matter for even indices.
    fn bernoulli_oracle(n: usize) -> Rational {
        let mut a: Vec<Rational> = Vec::new();
        for m in 0..=n {
            a.push(Rational::from((1, m as u32 + 1)));
            for j in (1..=m).rev() {
                let diff = Rational::from(&a[j - 1] - &a[j]);
                a[j - 1] = diff * j as u32;
            }
        }
        a[0].clone()
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0).unwrap(), 1);
        assert_eq!(bernoulli(2).unwrap(), Rational::from((1, 6)));
        assert_eq!(bernoulli(4).unwrap(), Rational::from((-1, 30)));
        assert_eq!(bernoulli(12).unwrap(), Rational::from((-691, 2730)));
        assert!(matches!(bernoulli(7), Err(SeriesError::OddBernoulli(7))));
    }

    #[test]
    fn bernoulli_matches_independent_oracle() {
        for n in (0..=40).step_by(2) {
            assert_eq!(bernoulli(n).unwrap(), bernoulli_oracle(n as usize), "B_{n}");
        }
    }

    #[test]
    fn sigma_small() {
        assert_eq!(divisor_sigma(3, 2), 9);
        assert_eq!(divisor_sigma(1, 12), 28);
        assert_eq!(divisor_sigma(0, 36), 9);
    }

    #[test]
    fn eisenstein_examples() {
        assert_eq!(eisenstein(0, 5).unwrap(), ExactSeries::one(5));
        assert_eq!(
            eisenstein(4, 2).unwrap(),
            ExactSeries::from_integers(0, &[1, 240, 2160])
        );
        assert_eq!(
            eisenstein(6, 1).unwrap(),
            ExactSeries::from_integers(0, &[1, -504])
        );
        assert!(eisenstein(2, 3).is_err());
        assert!(eisenstein(5, 3).is_err());
        assert!(eisenstein(4, -1).is_err());
    }

    #[test]
    fn eisenstein_integral_for_small_weights() {
        for k in [4, 6, 8, 10, 14] {
            let e = eisenstein(k, 12).unwrap();
            assert!(e.coeffs().iter().all(|c| *c.denom() == 1), "E_{k}");
        }
        // E_12 is not integral: 65520/691
        let e12 = eisenstein(12, 1).unwrap();
        assert_eq!(e12.coeff(1).unwrap(), Rational::from((65520, 691)));
    }

    #[test]
    fn delta_expansion() {
        let d = delta(4).unwrap();
        assert_eq!(d, ExactSeries::from_integers(1, &[1, -24, 252, -1472]));
        assert!(delta(0).is_err());
    }

    #[test]
    fn j_expansion() {
        let j = jfunction(1).unwrap();
        assert_eq!(j, ExactSeries::from_integers(-1, &[1, 744, 196884]));
        assert_eq!(j.lead(), -1);
    }

    #[test]
    fn defining_identities_hold() {
        let t = 24;
        let e4 = eisenstein(4, t).unwrap();
        let e6 = eisenstein(6, t).unwrap();
        let d = delta(t).unwrap();
        let lhs = &e4.pow(3).unwrap() - &e6.pow(2).unwrap();
        assert!(lhs.agrees_with(&d.scale(&Rational::from(1728))));
        let j = jfunction(t).unwrap();
        assert!((&j * &d).agrees_with(&e4.pow(3).unwrap()));
        assert!((&d * &d.pow(-1).unwrap()).agrees_with(&ExactSeries::one(t - 1)));
    }

    #[test]
    fn standard_cache_extends() {
        let a = standard_series(Standard::Eisenstein(8), 5).unwrap();
        assert!(a.trunc() >= 5);
        let b = standard_series(Standard::Eisenstein(8), 30).unwrap();
        assert!(b.trunc() >= 30);
        assert!(a.agrees_with(&b));
        let e4 = eisenstein(4, 30).unwrap();
        assert!(b.agrees_with(&(&e4 * &e4)));
    }
}
