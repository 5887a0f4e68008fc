//! Zeros of `f_{k,m}` on the open arc and interlacing of two zero sets.
//!
//! Interior zeros are the roots of `F` in `(0, 1728)` pulled back through the
//! strictly decreasing map `θ ↦ j(e^{iθ})`. Corner zeros at `i` and `ρ` are
//! reported as orders, never as list entries.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rug::Rational;
use thiserror::Error;

use crate::arceval::{j_on_arc, real_trace, EvalConfig, EvalError, ARC_END, ARC_START};
use crate::basis::{endpoint_orders, BasisForm};
use crate::poly::{count_real_roots, isolate_real_roots, refine_root, root_disposition};

/// Zeros closer than this are reported as a multiplicity error.
pub const MIN_SEPARATION: f64 = 1e-12;

/// Bisection stops once a bracket is this narrow.
const BRACKET_WIDTH: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZeroError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("f_{{{k},{m}}}: polynomial path found {poly} zeros, sign scan {scan}: {detail}")]
    Mismatch {
        k: i64,
        m: i64,
        poly: usize,
        scan: usize,
        detail: String,
    },
    #[error("zeros at {a} and {b} closer than {MIN_SEPARATION:e} (multiplicity?)")]
    Multiplicity { a: f64, b: f64 },
    #[error("F has a repeated root inside (0, 1728)")]
    RepeatedRoot,
    #[error("sign of the trace undecided at theta = {theta} (|g| <= {est:e})")]
    UndecidedSign { theta: f64, est: f64 },
    #[error("certification intervals overlap: {a:?} and {b:?}")]
    Overlap { a: (f64, f64), b: (f64, f64) },
    #[error("zero sets live on different intervals")]
    IntervalMismatch,
    #[error("zero at {theta} straddles the window end {end}")]
    Straddle { theta: f64, end: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    PolyIsolation,
    SignScan,
}

/// A zero certified to lie in `[lo, hi]`; `theta` is the midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub theta: f64,
    pub radius: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Zero {
    fn from_bracket(lo: f64, hi: f64) -> Self {
        Zero {
            theta: 0.5 * (lo + hi),
            radius: 0.5 * (hi - lo),
            lo,
            hi,
        }
    }

    pub fn overlaps(&self, other: &Zero) -> bool {
        (self.theta - other.theta).abs() <= self.radius + other.radius
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    pub k: i64,
    pub m: i64,
    pub zeros: Vec<Zero>,
    pub endpoint_i: Rational,
    pub endpoint_rho: Rational,
    pub method: Method,
    /// Open window the zeros were collected on.
    pub interval: (f64, f64),
}

impl ZeroSet {
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.zeros.iter().map(|z| z.theta).collect()
    }

    pub fn max_radius(&self) -> f64 {
        self.zeros.iter().map(|z| z.radius).fold(0.0, f64::max)
    }

    /// Keeps the zeros inside `(interval.0, end)`. A zero whose bracket
    /// contains `end` is an error.
    pub fn restrict_upper(&self, end: f64) -> Result<ZeroSet, ZeroError> {
        let mut zeros = Vec::new();
        for z in &self.zeros {
            if z.hi < end {
                zeros.push(*z);
            } else if z.lo <= end {
                return Err(ZeroError::Straddle { theta: z.theta, end });
            }
        }
        Ok(ZeroSet {
            zeros,
            interval: (self.interval.0, end),
            ..self.clone()
        })
    }
}

/// Number of distinct real roots of `F` in `(0, 1728)`.
pub fn count_expected(form: &BasisForm) -> usize {
    count_real_roots(form.poly(), &Rational::new(), &Rational::from(1728))
}

/// Bisects on `θ` for the boundary of a monotone predicate that holds at
/// `lo` and fails at `hi`. Returns the final `(lo, hi)`.
fn bisect<P>(mut lo: f64, mut hi: f64, mut pred: P) -> Result<(f64, f64), ZeroError>
where
    P: FnMut(f64) -> Result<bool, ZeroError>,
{
    while hi - lo > BRACKET_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// `θ` bracket for the point where `j(e^{iθ})` passes through `[jl, jh]`.
fn pull_back(jl: f64, jh: f64, cfg: &EvalConfig) -> Result<Zero, ZeroError> {
    let j = |t: f64| -> Result<(f64, f64), ZeroError> {
        let v = j_on_arc(t, cfg)?;
        Ok((v.to_f64(), v.est_error))
    };
    let (mut lo, mut hi) = (ARC_START, ARC_END);
    while hi - lo > BRACKET_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (v, e) = j(mid)?;
        if v - e > jh {
            lo = mid;
        } else if v + e < jl {
            hi = mid;
        } else {
            // mid is within the bracket; tighten each side separately
            let (l, _) = bisect(lo, mid, |t| j(t).map(|(v, e)| v - e > jh))?;
            let (_, h) = bisect(mid, hi, |t| j(t).map(|(v, e)| !(v + e < jl)))?;
            return Ok(Zero::from_bracket(l, h));
        }
    }
    Ok(Zero::from_bracket(lo, hi))
}

fn check_separation(zeros: &[Zero]) -> Result<(), ZeroError> {
    for w in zeros.windows(2) {
        if w[1].theta - w[0].theta < MIN_SEPARATION || w[0].overlaps(&w[1]) {
            return Err(ZeroError::Multiplicity {
                a: w[0].theta,
                b: w[1].theta,
            });
        }
    }
    Ok(())
}

fn make_set(form: &BasisForm, zeros: Vec<Zero>, method: Method) -> ZeroSet {
    let (endpoint_i, endpoint_rho) = endpoint_orders(form);
    ZeroSet {
        k: form.k(),
        m: form.m,
        zeros,
        endpoint_i,
        endpoint_rho,
        method,
        interval: (ARC_START, ARC_END),
    }
}

/// Primary path: exact real-root isolation of `F` on `(0, 1728)`, then one
/// monotone bisection in `θ` per root.
pub fn isolate_zeros(form: &BasisForm, cfg: &EvalConfig) -> Result<ZeroSet, ZeroError> {
    cfg.validate()?;
    let lo = Rational::new();
    let hi = Rational::from(1728);
    if root_disposition(form.poly(), &lo, &hi).repeated_inside {
        return Err(ZeroError::RepeatedRoot);
    }
    let width = Rational::from((rug::Integer::from(1728), rug::Integer::from(1) << 80u32));
    let sf = form.poly().squarefree_part();
    let mut zeros = Vec::new();
    for iv in isolate_real_roots(form.poly(), &lo, &hi) {
        let fine = refine_root(&sf, &iv, &width);
        let jl = fine.lo.to_f64();
        let jh = fine.hi.to_f64();
        // widen by one ulp each way so the f64 bracket contains the exact one
        let jl = f64::from_bits(jl.to_bits().saturating_sub(1)).min(jl);
        let jh = next_up(jh);
        zeros.push(pull_back(jl, jh, cfg)?);
    }
    zeros.sort_by(|a, b| a.theta.partial_cmp(&b.theta).unwrap_or(Ordering::Equal));
    check_separation(&zeros)?;
    Ok(make_set(form, zeros, Method::PolyIsolation))
}

fn next_up(x: f64) -> f64 {
    if x == 0.0 {
        f64::MIN_POSITIVE
    } else if x > 0.0 {
        f64::from_bits(x.to_bits() + 1)
    } else {
        f64::from_bits(x.to_bits() - 1)
    }
}

/// Grid spacing for the sign scan.
pub fn scan_spacing(k: i64, m: i64) -> f64 {
    let denom = 4.0 * (k.unsigned_abs() as f64 + 2.0 * 3f64.sqrt() * PI * m.max(1) as f64);
    (PI / denom).min(1e-3)
}

fn scan_grid(k: i64, m: i64) -> Vec<f64> {
    let h = scan_spacing(k, m);
    let (a, b) = (ARC_START, ARC_END);
    let n = ((b - a) / h).ceil() as usize;
    let mut grid: Vec<f64> = (1..n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    // geometric refinement toward both corners
    let step = (b - a) / n as f64;
    for s in 1..=24 {
        let d = step / f64::from(1u32 << s);
        grid.push(a + d);
        grid.push(b - d);
    }
    grid.retain(|&t| t > a && t < b);
    grid.sort_by(|x, y| x.partial_cmp(y).unwrap());
    grid.dedup();
    grid
}

/// Cross-check path: sign changes of the real trace on a uniform grid,
/// each refined by bisection.
pub fn scan_zeros(form: &BasisForm, cfg: &EvalConfig) -> Result<ZeroSet, ZeroError> {
    cfg.validate()?;
    let sign = |t: f64| -> Result<Ordering, ZeroError> {
        let v = real_trace(form, t, cfg)?;
        if v.value.clone().abs() <= v.est_error {
            return Err(ZeroError::UndecidedSign {
                theta: t,
                est: v.est_error,
            });
        }
        Ok(v.value.cmp0().unwrap_or(Ordering::Equal))
    };
    let grid = scan_grid(form.k(), form.m);
    let mut zeros = Vec::new();
    let mut prev = (grid[0], sign(grid[0])?);
    for &t in &grid[1..] {
        let s = sign(t)?;
        if s != prev.1 {
            let s0 = prev.1;
            let (lo, hi) = bisect(prev.0, t, |x| sign(x).map(|v| v == s0))?;
            zeros.push(Zero::from_bracket(lo, hi));
        }
        prev = (t, s);
    }
    check_separation(&zeros)?;
    Ok(make_set(form, zeros, Method::SignScan))
}

/// Runs both paths and requires equal counts and pairwise overlapping
/// brackets. Returns `(poly, scan)`.
pub fn isolate_zeros_checked(
    form: &BasisForm,
    cfg: &EvalConfig,
) -> Result<(ZeroSet, ZeroSet), ZeroError> {
    let poly = isolate_zeros(form, cfg)?;
    let scan = scan_zeros(form, cfg)?;
    let mismatch = |detail: String| ZeroError::Mismatch {
        k: form.k(),
        m: form.m,
        poly: poly.len(),
        scan: scan.len(),
        detail,
    };
    if poly.len() != scan.len() {
        return Err(mismatch(
            "counts differ (insufficient precision or off-arc zeros)".into(),
        ));
    }
    for (i, (p, s)) in poly.zeros.iter().zip(&scan.zeros).enumerate() {
        if !p.overlaps(s) {
            return Err(mismatch(format!(
                "zero {i}: {} ± {:e} vs {} ± {:e}",
                p.theta, p.radius, s.theta, s.radius
            )));
        }
    }
    Ok((poly, scan))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Two zeros of the same set with no zero of the other set between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub side: Side,
    pub first: usize,
    pub second: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterlaceVerdict {
    pub ok: bool,
    pub witness: Option<Witness>,
    pub first_belongs_to: Option<Side>,
    pub last_belongs_to: Option<Side>,
}

impl InterlaceVerdict {
    pub fn swapped(&self) -> InterlaceVerdict {
        InterlaceVerdict {
            ok: self.ok,
            witness: self.witness.map(|w| Witness {
                side: w.side.flip(),
                ..w
            }),
            first_belongs_to: self.first_belongs_to.map(Side::flip),
            last_belongs_to: self.last_belongs_to.map(Side::flip),
        }
    }
}

/// Strict alternation test for the merged, sorted zeros of `a` and `b`.
pub fn interlace_check(a: &ZeroSet, b: &ZeroSet) -> Result<InterlaceVerdict, ZeroError> {
    if a.interval != b.interval {
        return Err(ZeroError::IntervalMismatch);
    }
    interlace_zeros(&a.zeros, &b.zeros)
}

/// As [`interlace_check`] on bare zero lists.
pub fn interlace_zeros(a: &[Zero], b: &[Zero]) -> Result<InterlaceVerdict, ZeroError> {
    let mut merged: Vec<(Zero, Side, usize)> = a
        .iter()
        .enumerate()
        .map(|(i, z)| (*z, Side::A, i))
        .chain(b.iter().enumerate().map(|(i, z)| (*z, Side::B, i)))
        .collect();
    merged.sort_by(|x, y| x.0.theta.partial_cmp(&y.0.theta).unwrap_or(Ordering::Equal));
    let mut witness = None;
    for w in merged.windows(2) {
        let ((za, sa, ia), (zb, sb, ib)) = (w[0], w[1]);
        if za.overlaps(&zb) {
            return Err(ZeroError::Overlap {
                a: (za.lo, za.hi),
                b: (zb.lo, zb.hi),
            });
        }
        if sa == sb && witness.is_none() {
            witness = Some(Witness {
                side: sa,
                first: ia,
                second: ib,
            });
        }
    }
    Ok(InterlaceVerdict {
        ok: witness.is_none(),
        witness,
        first_belongs_to: merged.first().map(|x| x.1),
        last_belongs_to: merged.last().map(|x| x.1),
    })
}
