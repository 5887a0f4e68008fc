//! The canonical basis `f_{k,m} = q^{-m} + O(q^{ℓ+1})` of weakly holomorphic
//! forms of weight `k`, built as `Δ^ℓ E_{k'} F(j)`.

use rug::Rational;
use thiserror::Error;

use crate::poly::Poly;
use crate::qexact::{standard_series, ExactSeries, SeriesError, Standard};

/// Residues `k'` with `k = 12ℓ + k'`.
pub const KPRIME_SET: [i64; 6] = [0, 4, 6, 8, 10, 14];

/// The expansion cache reaches at least this exponent.
pub const MIN_CACHED_TRUNC: i64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasisError {
    #[error("weight {0} is odd")]
    OddWeight(i64),
    #[error("no basis element f_{{{k},{m}}}: need m >= {min}")]
    IndexOutOfRange { k: i64, m: i64, min: i64 },
    #[error("gap function needs even weight >= 4, got {0}")]
    NotGapWeight(i64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightSplit {
    pub k: i64,
    pub ell: i64,
    pub kprime: i64,
}

impl WeightSplit {
    /// Whether `E_{k'}` vanishes at `i`.
    pub fn vanishes_at_i(&self) -> bool {
        matches!(self.kprime, 6 | 10 | 14)
    }
}

pub fn split_weight(k: i64) -> Result<WeightSplit, BasisError> {
    if k % 2 != 0 {
        return Err(BasisError::OddWeight(k));
    }
    let r = k.rem_euclid(12);
    // r ∈ {0,2,4,6,8,10}; r = 2 is covered by k' = 14 one level down
    let kprime = if r == 2 { 14 } else { r };
    let ell = (k - kprime) / 12;
    Ok(WeightSplit { k, ell, kprime })
}

/// `f_{k,m}` with its polynomial `F` (coefficients low to high, monic of
/// degree `ℓ + m`) and an exact expansion cache.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisForm {
    pub split: WeightSplit,
    pub m: i64,
    poly: Poly,
    expansion: ExactSeries,
}

impl BasisForm {
    pub fn k(&self) -> i64 {
        self.split.k
    }

    pub fn ell(&self) -> i64 {
        self.split.ell
    }

    pub fn kprime(&self) -> i64 {
        self.split.kprime
    }

    pub fn degree(&self) -> usize {
        (self.split.ell + self.m) as usize
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn expansion(&self) -> &ExactSeries {
        &self.expansion
    }

    pub fn has_integer_polynomial(&self) -> bool {
        self.poly.is_integral()
    }

    /// Checks the defining normalization exactly: coefficient 1 at `q^{-m}`
    /// and 0 at `q^{-m+1}, …, q^ℓ`.
    pub fn is_normalized(&self) -> bool {
        let e = &self.expansion;
        if e.trunc() < self.split.ell {
            return false;
        }
        if e.coeff(-self.m - 1).is_some_and(|c| c != 0) || e.lead() < -self.m && e.coeffs()[0] != 0 {
            return false;
        }
        (-self.m..=self.split.ell).all(|n| {
            let c = e.coeff(n).unwrap_or_default();
            if n == -self.m {
                c == 1
            } else {
                c == 0
            }
        })
    }
}

fn base_series(split: &WeightSplit, trunc: i64) -> Result<ExactSeries, BasisError> {
    let ell = split.ell;
    // E has lead 0 and Δ^ℓ lead ℓ, so E is needed through trunc - ℓ.
    let e = standard_series(Standard::Eisenstein(split.kprime), (trunc - ell).max(0))?;
    if ell == 0 {
        return Ok(e.truncated(trunc));
    }
    // Δ^ℓ from Δ valid through t has trunc t + ℓ - 1 for ℓ > 0 and t - 1 + 3ℓ for ℓ < 0.
    let need = if ell > 0 {
        trunc - ell + 1
    } else {
        trunc - 3 * ell + 1
    };
    let d = standard_series(Standard::Delta, need.max(1) + 1)?;
    let dl = d.pow(ell)?;
    Ok((&dl * &e.truncated(trunc - ell)).truncated(trunc))
}

/// Builds `f_{k,m}` with the expansion valid through `q^{trunc}` (at least
/// `max(ℓ + 1, 16)`).
pub fn construct_with_trunc(k: i64, m: i64, trunc: i64) -> Result<BasisForm, BasisError> {
    let split = split_weight(k)?;
    let ell = split.ell;
    if m < -ell {
        return Err(BasisError::IndexOutOfRange { k, m, min: -ell });
    }
    let target = trunc.max(ell + 1).max(MIN_CACHED_TRUNC);
    let d = ell + m;

    // P_i = base·j^i has lead ℓ - i; P_d must still be valid through target.
    let base = base_series(&split, target + d)?;
    let j = standard_series(Standard::J, target + d - ell + 1)?;
    let mut powers = Vec::with_capacity(d as usize + 1);
    powers.push(base);
    for i in 0..d as usize {
        let next = &powers[i] * &*j;
        powers.push(next);
    }

    let mut coeffs = vec![Rational::new(); d as usize + 1];
    coeffs[d as usize] = Rational::from(1);
    let mut acc = powers[d as usize].clone();
    for i in (0..d).rev() {
        let c = -acc.coeff(ell - i).unwrap_or_default();
        if c != 0 {
            acc = &acc + &powers[i as usize].scale(&c);
        }
        coeffs[i as usize] = c;
    }
    debug_assert!(acc.trunc() >= target);
    let expansion = acc.truncated(target).normalized();
    Ok(BasisForm {
        split,
        m,
        poly: Poly::new(coeffs),
        expansion,
    })
}

pub fn construct(k: i64, m: i64) -> Result<BasisForm, BasisError> {
    construct_with_trunc(k, m, MIN_CACHED_TRUNC)
}

/// `G_k = f_{k,0} = 1 + O(q^{ℓ+1})`.
pub fn gap_function(k: i64) -> Result<BasisForm, BasisError> {
    if k < 4 || k % 2 != 0 {
        return Err(BasisError::NotGapWeight(k));
    }
    construct(k, 0)
}

/// Valence-weighted vanishing orders at `i` and at `ρ`: a zero of `f` of
/// true order `n` counts `n/2` at `i` and `n/3` at `ρ`.
pub fn endpoint_orders(form: &BasisForm) -> (Rational, Rational) {
    let at_i = form.poly.root_multiplicity(&Rational::from(1728)) as i64;
    let at_rho = form.poly.root_multiplicity(&Rational::new()) as i64;
    let half = if form.split.vanishes_at_i() { 1 } else { 0 };
    let third = match form.split.kprime {
        4 | 10 => 1,
        8 | 14 => 2,
        _ => 0,
    };
    (
        Rational::from((2 * at_i + half, 2)),
        Rational::from((3 * at_rho + third, 3)),
    )
}

/// Recomputes `Δ^ℓ E_{k'} F(j)` from scratch through `q^{trunc}`.
pub fn reconstruct(form: &BasisForm, trunc: i64) -> Result<ExactSeries, BasisError> {
    let d = form.degree() as i64;
    let ell = form.split.ell;
    let base = base_series(&form.split, trunc + d)?;
    let j = standard_series(Standard::J, trunc + d - ell + 1)?;
    // Horner in j: ((c_d j + c_{d-1}) j + …) with each step valid through
    // the required window.
    let c = form.poly.coeffs();
    let mut acc = ExactSeries::monomial(0, c[d as usize].clone(), trunc + d - ell);
    for i in (0..d as usize).rev() {
        acc = &(&acc * &*j) + &ExactSeries::monomial(0, c[i].clone(), acc.trunc());
    }
    Ok((&base * &acc).truncated(trunc))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense Gaussian elimination over the rationals: solve for
    /// `c_0..c_{d-1}` so that `base·(j^d + Σ c_i j^i)` vanishes at
    /// `q^{-m+1}..q^ℓ`. Shares nothing with the triangular back-substitution.
    fn elimination_oracle(k: i64, m: i64) -> Vec<Rational> {
        let split = split_weight(k).unwrap();
        let ell = split.ell;
        let d = (ell + m) as usize;
        let t = ell + 2 + m;
        let e = crate::qexact::eisenstein(split.kprime, t + d as i64 + 4).unwrap();
        let dl = crate::qexact::delta(t + d as i64 + 4 + 3 * ell.abs())
            .unwrap()
            .pow(ell)
            .unwrap();
        let base = &dl * &e;
        let j = crate::qexact::jfunction(t + d as i64 + 2).unwrap();
        let mut cols = vec![base.clone()];
        for i in 0..d {
            let next = &cols[i] * &j;
            cols.push(next);
        }
        // rows: exponents -m+1..=ell, unknowns c_0..c_{d-1}
        let rows: Vec<i64> = (-m + 1..=ell).collect();
        let mut a: Vec<Vec<Rational>> = rows
            .iter()
            .map(|&n| {
                let mut row: Vec<Rational> =
                    (0..d).map(|i| cols[i].coeff(n).unwrap_or_default()).collect();
                row.push(-cols[d].coeff(n).unwrap_or_default());
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| a[r][col] != 0).unwrap();
            a.swap(col, piv);
            let p = a[col][col].clone();
            for x in a[col].iter_mut() {
                *x /= &p;
            }
            for r in 0..d {
                if r != col && a[r][col] != 0 {
                    let f = a[r][col].clone();
                    for c in 0..=d {
                        let v = Rational::from(&f * &a[col][c]);
                        a[r][c] -= v;
                    }
                }
            }
        }
        let mut out: Vec<Rational> = (0..d).map(|i| a[i][d].clone()).collect();
        out.push(Rational::from(1));
        out
    }

    #[test]
    fn splits() {
        let s = |k| {
            let w = split_weight(k).unwrap();
            (w.ell, w.kprime)
        };
        assert_eq!(s(16), (1, 4));
        assert_eq!(s(132), (11, 0));
        assert_eq!(s(2), (-1, 14));
        assert_eq!(s(-12), (-1, 0));
        assert_eq!(s(26), (1, 14));
        assert!(split_weight(7).is_err());
        for k in (-60..=60).step_by(2) {
            let w = split_weight(k).unwrap();
            assert_eq!(12 * w.ell + w.kprime, k);
            assert!(KPRIME_SET.contains(&w.kprime));
        }
    }

    #[test]
    fn small_forms() {
        let f = construct(4, 0).unwrap();
        assert_eq!(f.poly(), &Poly::from_integers(&[1]));
        assert!(f.expansion().agrees_with(&crate::qexact::eisenstein(4, 16).unwrap()));

        let f = construct(12, 0).unwrap();
        assert_eq!(f.poly(), &Poly::from_integers(&[-720, 1]));
        assert_eq!(f.expansion().coeff(0).unwrap(), 1);
        assert_eq!(f.expansion().coeff(1).unwrap(), 0);
        assert_eq!(f.expansion().coeff(2).unwrap(), 196560);

        let f = construct(0, 1).unwrap();
        assert_eq!(f.poly(), &Poly::from_integers(&[-744, 1]));
        assert_eq!(f.expansion().coeff(-1).unwrap(), 1);
        assert_eq!(f.expansion().coeff(0).unwrap(), 0);
        assert_eq!(f.expansion().coeff(1).unwrap(), 196884);

        // j_2 = j^2 - 1488 j + 159768 = q^-2 + 42987520 q + …
        let f = construct(0, 2).unwrap();
        assert_eq!(f.poly(), &Poly::from_integers(&[159768, -1488, 1]));
        assert_eq!(f.expansion().coeff(1).unwrap(), 42987520);
    }

    #[test]
    fn gap_function_checks() {
        assert!(gap_function(2).is_err());
        let g = gap_function(16).unwrap();
        assert_eq!(g.expansion().coeff(0).unwrap(), 1);
        assert_eq!(g.expansion().coeff(1).unwrap(), 0);
        assert_ne!(g.expansion().coeff(2).unwrap(), 0);
    }

    #[test]
    fn index_range() {
        assert!(matches!(
            construct(12, -2),
            Err(BasisError::IndexOutOfRange { min: -1, .. })
        ));
        let f = construct(12, -1).unwrap();
        assert_eq!(f.poly(), &Poly::from_integers(&[1]));
        assert_eq!(f.expansion().lead(), 1);
    }

    #[test]
    fn negative_ell() {
        // weight 2: Δ^-1 E_14 F(j), f_{2,1} = q^-1 + O(1), deg F = 0
        let f = construct(2, 1).unwrap();
        assert!(f.is_normalized());
        assert_eq!(f.degree(), 0);
        let f = construct(-10, 3).unwrap();
        assert!(f.is_normalized());
        assert!(f.has_integer_polynomial());
    }

    #[test]
    fn normalization_and_integrality_sweep() {
        for k in (-24..=120).step_by(2) {
            let ell = split_weight(k).unwrap().ell;
            for m in (-ell).max(-1)..=(-ell).max(0) + 3 {
                let f = construct(k, m).unwrap();
                assert!(f.is_normalized(), "f_{{{k},{m}}}");
                assert!(f.has_integer_polynomial(), "f_{{{k},{m}}}");
                assert_eq!(f.poly().degree(), Some(f.degree()));
            }
        }
    }

    #[test]
    fn matches_elimination_oracle() {
        for (k, m) in [(12, 0), (24, 1), (40, 2), (0, 4), (70, 3), (-4, 5), (100, 0)] {
            let f = construct(k, m).unwrap();
            assert_eq!(f.poly().coeffs(), &elimination_oracle(k, m)[..], "f_{{{k},{m}}}");
        }
    }

    #[test]
    fn reconstruction_and_uniqueness() {
        for (k, m) in [(16, 0), (52, 2), (0, 6), (2, 3)] {
            let f = construct(k, m).unwrap();
            let g = construct(k, m).unwrap();
            assert_eq!(f, g);
            let r = reconstruct(&f, 16).unwrap();
            assert!(r.agrees_with(f.expansion()), "f_{{{k},{m}}}");
            assert!(r.trunc() >= 16);
        }
    }

    #[test]
    fn longer_expansion_extends_cache() {
        let a = construct(12, 0).unwrap();
        let b = construct_with_trunc(12, 0, 40).unwrap();
        assert!(b.expansion().trunc() >= 40);
        assert!(a.expansion().agrees_with(b.expansion()));
        assert_eq!(a.poly(), b.poly());
    }

    #[test]
    fn corner_orders() {
        let r = |n, d| Rational::from((n, d));
        assert_eq!(endpoint_orders(&construct(4, 0).unwrap()), (r(0, 1), r(1, 3)));
        assert_eq!(endpoint_orders(&construct(6, 0).unwrap()), (r(1, 2), r(0, 1)));
        assert_eq!(endpoint_orders(&construct(12, 0).unwrap()), (r(0, 1), r(0, 1)));
        assert_eq!(endpoint_orders(&construct(14, 0).unwrap()), (r(1, 2), r(2, 3)));
        // f_{12,-1} = Δ: no corner zeros
        assert_eq!(endpoint_orders(&construct(12, -1).unwrap()), (r(0, 1), r(0, 1)));
    }
}
