use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Assign, Rational};

use super::SeriesError;

/// A truncated Laurent series in `q` with exact rational coefficients.
///
/// `coeffs[i]` is the coefficient of `q^(lead + i)` and the expansion is
/// known through `q^trunc`; nothing is claimed about higher powers. A series
/// whose known window is empty has `lead == trunc + 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactSeries {
    lead: i64,
    coeffs: Vec<Rational>,
    trunc: i64,
}

impl ExactSeries {
    pub fn new(lead: i64, coeffs: Vec<Rational>, trunc: i64) -> Result<Self, SeriesError> {
        let expected = trunc - lead + 1;
        if expected < 0 || coeffs.len() as i64 != expected {
            return Err(SeriesError::BadWindow {
                lead,
                trunc,
                len: coeffs.len(),
            });
        }
        Ok(ExactSeries {
            lead,
            coeffs,
            trunc,
        })
    }

    /// Series whose known window is exactly the given coefficients.
    pub fn from_coeffs(lead: i64, coeffs: Vec<Rational>) -> Self {
        let trunc = lead + coeffs.len() as i64 - 1;
        ExactSeries {
            lead,
            coeffs,
            trunc,
        }
    }

    pub fn from_integers(lead: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(lead, coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero(trunc: i64) -> Self {
        ExactSeries {
            lead: trunc + 1,
            coeffs: Vec::new(),
            trunc,
        }
    }

    pub fn one(trunc: i64) -> Self {
        Self::monomial(0, Rational::from(1), trunc)
    }

    /// `c * q^exp`, known through `q^trunc`.
    pub fn monomial(exp: i64, c: Rational, trunc: i64) -> Self {
        if exp > trunc {
            return Self::zero(trunc);
        }
        let mut coeffs = vec![Rational::new(); (trunc - exp + 1) as usize];
        coeffs[0] = c;
        ExactSeries {
            lead: exp,
            coeffs,
            trunc,
        }
    }

    pub fn lead(&self) -> i64 {
        self.lead
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `q^n`, or `None` when `n` lies past the truncation.
    pub fn coeff(&self, n: i64) -> Option<Rational> {
        if n > self.trunc {
            None
        } else if n < self.lead {
            Some(Rational::new())
        } else {
            Some(self.coeffs[(n - self.lead) as usize].clone())
        }
    }

    /// Exponent of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| *c != 0)
            .map(|i| self.lead + i as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// Drops leading zero coefficients so that `lead` is the valuation.
    pub fn normalized(mut self) -> Self {
        match self.coeffs.iter().position(|c| *c != 0) {
            Some(0) => self,
            Some(i) => {
                self.coeffs.drain(..i);
                self.lead += i as i64;
                self
            }
            None => Self::zero(self.trunc),
        }
    }

    /// Forgets every coefficient above `q^new_trunc`.
    pub fn truncated(&self, new_trunc: i64) -> Self {
        if new_trunc >= self.trunc {
            return self.clone();
        }
        if new_trunc < self.lead {
            return Self::zero(new_trunc);
        }
        let keep = (new_trunc - self.lead + 1) as usize;
        ExactSeries {
            lead: self.lead,
            coeffs: self.coeffs[..keep].to_vec(),
            trunc: new_trunc,
        }
    }

    /// Returns `true` when both series agree on their common window.
    pub fn agrees_with(&self, other: &ExactSeries) -> bool {
        let hi = self.trunc.min(other.trunc);
        let lo = self.lead.min(other.lead);
        (lo..=hi).all(|n| self.coeff(n) == other.coeff(n))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| Rational::from(a * c))
            .collect();
        ExactSeries {
            lead: self.lead,
            coeffs,
            trunc: self.trunc,
        }
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        ExactSeries {
            lead: self.lead + shift,
            coeffs: self.coeffs.clone(),
            trunc: self.trunc + shift,
        }
    }

    pub fn add_series(&self, other: &ExactSeries) -> Self {
        self.combine(other, false)
    }

    pub fn sub_series(&self, other: &ExactSeries) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &ExactSeries, negate: bool) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let lead = self.lead.min(other.lead).min(trunc + 1);
        let mut coeffs = Vec::with_capacity((trunc - lead + 1).max(0) as usize);
        for n in lead..=trunc {
            let mut c = self.coeff(n).unwrap_or_default();
            let d = other.coeff(n).unwrap_or_default();
            if negate {
                c -= d;
            } else {
                c += d;
            }
            coeffs.push(c);
        }
        ExactSeries {
            lead,
            coeffs,
            trunc,
        }
    }

    /// Product. With valuations `va`, `vb`, the result is known through
    /// `min(a.trunc + vb, b.trunc + va)`.
    pub fn mul_series(&self, other: &ExactSeries) -> Self {
        let va = self.valuation().unwrap_or(self.trunc + 1);
        let vb = other.valuation().unwrap_or(other.trunc + 1);
        let trunc = (self.trunc + vb).min(other.trunc + va);
        let lead = va + vb;
        if lead > trunc {
            return Self::zero(trunc);
        }
        let a = &self.coeffs[(va - self.lead) as usize..];
        let b = &other.coeffs[(vb - other.lead) as usize..];
        let len = (trunc - lead + 1) as usize;
        let mut coeffs = Vec::with_capacity(len);
        let mut tmp = Rational::new();
        for n in 0..len {
            let mut acc = Rational::new();
            let lo = n.saturating_sub(b.len().saturating_sub(1));
            let hi = n.min(a.len().saturating_sub(1));
            for i in lo..=hi {
                let (x, y) = (&a[i], &b[n - i]);
                if *x == 0 || *y == 0 {
                    continue;
                }
                tmp.assign(x * y);
                acc += &tmp;
            }
            coeffs.push(acc);
        }
        ExactSeries {
            lead,
            coeffs,
            trunc,
        }
    }

    /// Laurent inverse: factor out the leading term `c q^v` and expand the
    /// unit part by the geometric recurrence. Relative precision is kept.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let v = self.valuation().ok_or(SeriesError::NotInvertible)?;
        let a = &self.coeffs[(v - self.lead) as usize..];
        let n_rel = (self.trunc - v) as usize;
        let inv_lead = Rational::from(1) / &a[0];
        let mut b: Vec<Rational> = Vec::with_capacity(n_rel + 1);
        b.push(inv_lead.clone());
        let mut tmp = Rational::new();
        for n in 1..=n_rel {
            let mut acc = Rational::new();
            for i in 1..=n.min(a.len() - 1) {
                if a[i] == 0 {
                    continue;
                }
                tmp.assign(&a[i] * &b[n - i]);
                acc += &tmp;
            }
            acc *= &inv_lead;
            b.push(-acc);
        }
        Ok(ExactSeries {
            lead: -v,
            coeffs: b,
            trunc: -v + n_rel as i64,
        })
    }

    /// Integer power; negative exponents go through [`ExactSeries::inverse`].
    pub fn pow(&self, e: i64) -> Result<Self, SeriesError> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let v = self.valuation().ok_or(SeriesError::NotInvertible);
        if e == 0 {
            // 1 is exact; keep the base's relative precision.
            let rel = match v {
                Ok(v) => self.trunc - v,
                Err(_) => self.trunc,
            };
            return Ok(Self::one(rel));
        }
        let mut base = self.clone().normalized();
        let mut acc: Option<ExactSeries> = None;
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul_series(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_series(&base);
            }
        }
        Ok(acc.expect("positive exponent"))
    }
}

impl fmt::Debug for ExactSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(q^{})", self, self.trunc + 1)
    }
}

impl fmt::Display for ExactSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let n = self.lead + i as i64;
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let unit = abs == 1;
            match (n, unit) {
                (0, _) => write!(f, "{}", abs)?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{}q", abs)?,
                (_, true) => write!(f, "q^{}", n)?,
                (_, false) => write!(f, "{}q^{}", abs, n)?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &ExactSeries {
    type Output = ExactSeries;
    fn add(self, rhs: &ExactSeries) -> ExactSeries {
        self.add_series(rhs)
    }
}

impl Sub for &ExactSeries {
    type Output = ExactSeries;
    fn sub(self, rhs: &ExactSeries) -> ExactSeries {
        self.sub_series(rhs)
    }
}

impl Mul for &ExactSeries {
    type Output = ExactSeries;
    fn mul(self, rhs: &ExactSeries) -> ExactSeries {
        self.mul_series(rhs)
    }
}

impl Neg for &ExactSeries {
    type Output = ExactSeries;
    fn neg(self) -> ExactSeries {
        self.scale(&Rational::from(-1))
    }
}
