//! Dense univariate polynomials over the rationals and certified real root
//! isolation by Descartes' rule of signs with interval bisection.

use std::cmp::Ordering;
use std::fmt;

use rug::{Assign, Float, Integer, Rational};

/// Dense polynomial, `coeffs[i]` multiplies `x^i`. Never has trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![Rational::from(-r), Rational::from(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| *c.denom() == 1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Horner evaluation in floating point. Returns the value and a bound on
    /// the accumulated rounding error, ignoring any error already in `x`.
    pub fn eval_float(&self, x: &Float, prec: u32) -> (Float, Float) {
        let mut acc = Float::new(prec);
        let mut mag = Float::new(prec);
        let ax = Float::with_val(prec, x.abs_ref());
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += Float::with_val(prec, c);
            mag *= &ax;
            mag += Float::with_val(prec, Rational::from(c.abs_ref()));
        }
        let n = self.coeffs.len().max(1) as u32;
        let ulp = Float::with_val(prec, Float::i_exp(1, 2 - prec as i32));
        let err = mag * ulp * (2 * n + 2);
        (acc, err)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u32))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&Rational::from(l.recip_ref())),
            None => Poly::default(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rational::new(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::default();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        let mut tmp = Rational::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                tmp.assign(a * b);
                out[i + j] += &tmp;
            }
        }
        Poly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = Rational::from(divisor.coeffs[dd].recip_ref());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::default(), self.clone());
        }
        let mut quot = vec![Rational::new(); rem.len() - dd];
        let mut tmp = Rational::new();
        for i in (0..quot.len()).rev() {
            let c = Rational::from(&rem[i + dd] * &lead_inv);
            if c != 0 {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    tmp.assign(&c * d);
                    rem[i + j] -= &tmp;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: &Rational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let mut p = self.clone();
        let mut mult = 0;
        loop {
            let (q, rem) = p.div_rem(&Poly::linear_root(r));
            if !rem.is_zero() {
                return mult;
            }
            mult += 1;
            p = q;
        }
    }

    /// Removes every factor `(x - r)`.
    pub fn deflate(&self, r: &Rational) -> Poly {
        let mut p = self.clone();
        loop {
            let (q, rem) = p.div_rem(&Poly::linear_root(r));
            if !rem.is_zero() || p.degree() == Some(0) {
                return p;
            }
            p = q;
        }
    }

    /// Yun's decomposition: `p = c * prod a_i^i` with each `a_i` monic and
    /// squarefree. Entry `i - 1` holds `a_i` (possibly constant 1).
    pub fn squarefree_decomposition(&self) -> Vec<Poly> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let dp = self.derivative();
        let b = self.gcd(&dp);
        let mut c = self.div_rem(&b).0;
        let mut d = dp.div_rem(&b).0.sub(&c.derivative());
        while c.degree().unwrap_or(0) > 0 {
            let a = c.gcd(&d);
            c = c.div_rem(&a).0;
            d = d.div_rem(&a).0.sub(&c.derivative());
            out.push(a);
        }
        out
    }

    pub fn squarefree_part(&self) -> Poly {
        self.squarefree_decomposition()
            .into_iter()
            .fold(Poly::constant(Rational::from(1)), |acc, a| acc.mul(&a))
    }

    /// `p(x + s)`
    pub fn taylor_shift(&self, s: &Rational) -> Poly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        let mut tmp = Rational::new();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                tmp.assign(&a[j + 1] * s);
                a[j] += &tmp;
            }
        }
        Poly::new(a)
    }

    /// `p(w x)`
    pub fn dilate(&self, w: &Rational) -> Poly {
        let mut pw = Rational::from(1);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(Rational::from(c * &pw));
            pw *= w;
        }
        Poly::new(out)
    }

    /// Primitive integer polynomial with the same roots and positive
    /// leading coefficient.
    pub fn primitive_integer(&self) -> Vec<Integer> {
        let mut lcm = Integer::from(1);
        for c in &self.coeffs {
            lcm.lcm_mut(c.denom());
        }
        let mut ints: Vec<Integer> = self
            .coeffs
            .iter()
            .map(|c| Integer::from(c.numer() * &lcm) / c.denom())
            .collect();
        let mut g = Integer::new();
        for c in &ints {
            g.gcd_mut(c);
        }
        if g != 0 {
            if ints.last().is_some_and(|l| *l < 0) {
                g = -g;
            }
            for c in ints.iter_mut() {
                *c /= &g;
            }
        }
        ints
    }

    /// Sign of `p` at `x`.
    pub fn sign_at(&self, x: &Rational) -> Ordering {
        self.eval(x).cmp0()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            match (i, abs == 1) {
                (0, _) => write!(f, "{}", abs)?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{}x", abs)?,
                (_, true) => write!(f, "x^{}", i)?,
                (_, false) => write!(f, "{}x^{}", abs, i)?,
            }
            first = false;
        }
        Ok(())
    }
}

/// An isolating interval for a single real root. `lo == hi` means the root
/// is exactly rational; otherwise the root lies in the open interval and the
/// polynomial has opposite, nonzero signs at the ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        Rational::from(&self.hi - &self.lo)
    }

    pub fn midpoint(&self) -> Rational {
        Rational::from(&self.lo + &self.hi) / 2u32
    }
}

fn sign_variations(coeffs: &[Integer]) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for c in coeffs {
        let s = c.cmp0();
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn taylor_shift_one(a: &mut [Integer]) {
    let n = a.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let (lo, hi) = a.split_at_mut(j + 1);
            lo[j] += &hi[0];
        }
    }
}

/// Upper bound on the number of roots of `q` in `(0, 1)`: sign variations
/// of `(x + 1)^n q(1 / (x + 1))`.
fn descartes_bound(q: &[Integer]) -> usize {
    let mut r: Vec<Integer> = q.iter().rev().cloned().collect();
    taylor_shift_one(&mut r);
    sign_variations(&r)
}

fn strip_endpoint_roots(q: &mut Vec<Integer>) {
    // root at t = 0
    while q.len() > 1 && q[0] == 0 {
        q.remove(0);
    }
    // root at t = 1: synthetic division by (t - 1)
    loop {
        let sum: Integer = q.iter().sum();
        if sum != 0 || q.len() <= 1 {
            break;
        }
        let n = q.len();
        let mut out = vec![Integer::new(); n - 1];
        let mut carry = Integer::new();
        for i in (1..n).rev() {
            carry += &q[i];
            out[i - 1].assign(&carry);
        }
        *q = out;
    }
}

/// Isolates the distinct real roots of `p` in the open interval `(lo, hi)`.
/// `p` need not be squarefree; its squarefree part is used.
pub fn isolate_real_roots(p: &Poly, lo: &Rational, hi: &Rational) -> Vec<RootInterval> {
    assert!(lo < hi, "empty interval");
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sf = p.squarefree_part();
    let width = Rational::from(hi - lo);
    let mut start: Vec<Integer> = sf.taylor_shift(lo).dilate(&width).primitive_integer();
    strip_endpoint_roots(&mut start);

    // (poly on (0,1), numerator c, depth k): interval (c/2^k, (c+1)/2^k)
    let mut stack = vec![(start, Integer::new(), 0u32)];
    let mut unit_roots: Vec<(Rational, Rational)> = Vec::new();
    while let Some((q, c, k)) = stack.pop() {
        if q.len() <= 1 {
            continue;
        }
        let v = descartes_bound(&q);
        let scale = Rational::from((Integer::from(1), Integer::from(1) << k));
        let left = Rational::from(&c * &scale);
        if v == 0 {
            continue;
        }
        if v == 1 {
            let right = Rational::from((Integer::from(&c + 1u32), Integer::from(1) << k));
            unit_roots.push((left, right));
            continue;
        }
        let n = q.len() - 1;
        let mut ql: Vec<Integer> = q
            .iter()
            .enumerate()
            .map(|(i, a)| Integer::from(a << (n - i) as u32))
            .collect();
        let mut qr = ql.clone();
        taylor_shift_one(&mut qr);
        let mid_is_root = qr[0] == 0;
        if mid_is_root {
            let mid = Rational::from((Integer::from(&c * 2u32) + 1u32, Integer::from(1) << (k + 1)));
            unit_roots.push((mid.clone(), mid));
        }
        strip_endpoint_roots(&mut ql);
        strip_endpoint_roots(&mut qr);
        stack.push((qr, Integer::from(&c * 2u32) + 1u32, k + 1));
        stack.push((ql, Integer::from(&c * 2u32), k + 1));
    }
    let mut out: Vec<RootInterval> = unit_roots
        .into_iter()
        .map(|(a, b)| RootInterval {
            lo: Rational::from(&a * &width) + lo,
            hi: Rational::from(&b * &width) + lo,
        })
        .collect();
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Number of distinct real roots in the open interval.
pub fn count_real_roots(p: &Poly, lo: &Rational, hi: &Rational) -> usize {
    isolate_real_roots(p, lo, hi).len()
}

/// Bisects an isolating interval of a squarefree `p` until its width is at
/// most `max_width` or the root is found exactly.
pub fn refine_root(p: &Poly, iv: &RootInterval, max_width: &Rational) -> RootInterval {
    let mut iv = iv.clone();
    if iv.is_exact() {
        return iv;
    }
    let s_lo = p.sign_at(&iv.lo);
    debug_assert_ne!(s_lo, Ordering::Equal);
    debug_assert_ne!(s_lo, p.sign_at(&iv.hi));
    while iv.width() > *max_width {
        let mid = iv.midpoint();
        match p.sign_at(&mid) {
            Ordering::Equal => {
                return RootInterval {
                    lo: mid.clone(),
                    hi: mid,
                }
            }
            s if s == s_lo => iv.lo = mid,
            _ => iv.hi = mid,
        }
    }
    iv
}

/// Cauchy bound: every real root lies in `(-B, B)`.
pub fn root_bound(p: &Poly) -> Rational {
    let lead = match p.leading() {
        Some(l) => Rational::from(l.abs_ref()),
        None => return Rational::from(1),
    };
    let mut m = Rational::new();
    for c in &p.coeffs()[..p.coeffs().len() - 1] {
        let r = Rational::from(c.abs_ref()) / &lead;
        if r > m {
            m = r;
        }
    }
    m + 1u32
}

/// Exact accounting of where the roots of a polynomial sit relative to the
/// real interval `[lo, hi]`. All counts include multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDisposition {
    pub degree: usize,
    pub inside: usize,
    pub at_lo: usize,
    pub at_hi: usize,
    pub real_outside: usize,
    pub nonreal: usize,
    /// True when some real root inside `(lo, hi)` is repeated.
    pub repeated_inside: bool,
}

pub fn root_disposition(p: &Poly, lo: &Rational, hi: &Rational) -> RootDisposition {
    let degree = p.degree().unwrap_or(0);
    let at_lo = p.root_multiplicity(lo);
    let at_hi = p.root_multiplicity(hi);
    let bound = root_bound(p);
    let (below, above) = (Rational::from(-&bound), bound);
    let mut inside = 0;
    let mut real_outside = 0;
    let mut repeated_inside = false;
    for (i, a) in p.squarefree_decomposition().iter().enumerate() {
        let mult = i + 1;
        let a = a.deflate(lo).deflate(hi);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let n_in = count_real_roots(&a, lo, hi);
        inside += mult * n_in;
        if n_in > 0 && mult > 1 {
            repeated_inside = true;
        }
        if below < *lo {
            real_outside += mult * count_real_roots(&a, &below, lo);
        }
        if *hi < above {
            real_outside += mult * count_real_roots(&a, hi, &above);
        }
    }
    let real = inside + at_lo + at_hi + real_outside;
    RootDisposition {
        degree,
        inside,
        at_lo,
        at_hi,
        real_outside,
        nonreal: degree - real,
        repeated_inside,
    }
}
