//! Explicit constants, bound functions and threshold inequalities behind
//! the interlacing arguments, evaluated numerically.
//!
//! Closed forms (`C(k)`, `T`, `B`) are evaluated in MPFR at a caller-chosen
//! precision; the `f64` wrappers use [`CLOSED_FORM_PREC`]. Everything that
//! touches a modular form goes through [`crate::arceval`].

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{FRAC_PI_2, PI};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use thiserror::Error;

use crate::arceval::{eval_standard, j_on_arc, j_on_segment, real_trace, EvalConfig, EvalError, Point};
use crate::basis::{construct, split_weight, BasisError, BasisForm};
use crate::models::{
    cos_model_zeros, cosine_zeros_in, residue_model_zeros, CosModel, ModelError, Variant,
    ARC_HI, RESIDUE_LO,
};
use crate::qexact::Standard;
use crate::zeros::{isolate_zeros, ZeroError};

pub const CLOSED_FORM_PREC: u32 = 192;
/// Upper end of the first residue interval.
pub const INTERVAL_ONE_HI: f64 = 1.9;
/// Contour heights used on the two residue intervals.
pub const HEIGHT_ONE: f64 = 0.75;
pub const HEIGHT_TWO: f64 = 0.65;

pub const DELTA_ARC_MAX: f64 = 0.00481;
pub const DELTA_SEGMENT_MIN: f64 = 0.00721;
pub const DELTA_QUOTIENT: f64 = 0.66713;
/// Cap on `|g − 2cos(kθ/2)|` for `G_k` on the whole arc.
pub const GAP_TRACE_CAP: f64 = 1.985;
pub const DEFAULT_E: f64 = 0.6;
pub const DEFAULT_X_GRID: usize = 201;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("{0}")]
    Domain(String),
    #[error("k = {k} (k' = {kprime}) is not in family {family}")]
    WrongFamily { k: i64, kprime: i64, family: Family },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Zeros(#[from] ZeroError),
}

fn domain(msg: String) -> BoundsError {
    BoundsError::Domain(msg)
}

/// One evaluated inequality `lhs < rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs < rhs`, strict; false whenever either side is NaN.
    pub holds: bool,
    /// The asserted statement this report reproduces, if any.
    pub claim: Option<String>,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, params: &[(&str, f64)], lhs: f64, rhs: f64) -> Self {
        BoundReport {
            name: name.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            lhs,
            rhs,
            holds: lhs < rhs,
            claim: None,
        }
    }

    pub fn with_claim(mut self, claim: impl Into<String>) -> Self {
        self.claim = Some(claim.into());
        self
    }

    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }

    /// `(rhs − lhs)/|rhs|`.
    pub fn relative_slack(&self) -> f64 {
        self.slack() / self.rhs.abs()
    }
}

fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

fn dec(s: &str, prec: u32) -> Float {
    Float::with_val(prec, Float::parse(s).expect("decimal literal"))
}

fn even_weight(k: i64, min: i64) -> Result<(), BoundsError> {
    if k % 2 != 0 || k < min {
        return Err(domain(format!("weight {k} must be even and >= {min}")));
    }
    Ok(())
}

fn kprime_of(k: i64) -> Result<i64, BoundsError> {
    Ok(split_weight(k)?.kprime)
}

/// `C(k) = 2.97·0.66713^{(k−14)/12}` at `prec` bits.
pub fn c_of_k_at(k: i64, prec: u32) -> Float {
    let e = Float::with_val(prec, k - 14) / 12u32;
    dec("2.97", prec) * dec("0.66713", prec).pow(&e)
}

pub fn c_of_k(k: i64) -> f64 {
    c_of_k_at(k, CLOSED_FORM_PREC).to_f64()
}

/// `πC/(2k)`, the largest distance a zero can move under a perturbation
/// of size `C < 2` of `2cos(kθ/2)`.
pub fn epsilon_bound(c: f64, k: i64) -> Result<f64, BoundsError> {
    if !(c.is_finite() && c < 2.0) {
        return Err(domain(format!("perturbation {c} must be < 2")));
    }
    if k <= 0 {
        return Err(domain(format!("weight {k} must be positive")));
    }
    Ok(PI * c / (2.0 * k as f64))
}

/// Lower bound on the distance between zeros of `cos(kθ/2)` and
/// `cos((k+12)θ/2)` on `(π/2, 1.9]`.
pub fn interval1_gap(k: i64) -> Result<f64, BoundsError> {
    even_weight(k, 4)?;
    let kf = k as f64;
    let base = PI / kf - PI / (kf + 12.0);
    Ok(match kprime_of(k)? {
        6 | 10 | 14 => 2.0 * base,
        _ => base,
    })
}

/// Lower bound on the `(β, α)` intervals between zeros of `H_{k+12}` and
/// `H_k` on the second interval, one expression per `k'`.
pub fn beta_alpha_lower_bound(k: i64) -> Result<f64, BoundsError> {
    even_weight(k, 4)?;
    let a = k as f64;
    let b = a + 12.0;
    let lead = match kprime_of(k)? {
        0 => PI / a,
        4 => 5.0 * PI / (3.0 * a) - 2.0 * PI / (3.0 * b),
        6 => 3.0 * PI / (2.0 * a) - PI / (2.0 * b),
        8 => 4.0 * PI / (3.0 * a) - PI / (3.0 * b),
        10 => 7.0 * PI / (6.0 * a) - PI / (6.0 * b),
        14 => 11.0 * PI / (6.0 * a) - 5.0 * PI / (6.0 * b),
        other => unreachable!("k' = {other}"),
    };
    Ok(lead - PI / (3.0 * a) - PI / (3.0 * b))
}

/// Congruence families for the second-interval argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    F06,
    F410,
    F814,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::F06 => "0,6",
            Family::F410 => "4,10",
            Family::F814 => "8,14",
        })
    }
}

impl Family {
    pub const ALL: [Family; 3] = [Family::F06, Family::F410, Family::F814];

    pub fn of_kprime(kprime: i64) -> Family {
        match kprime {
            0 | 6 => Family::F06,
            4 | 10 => Family::F410,
            _ => Family::F814,
        }
    }

    pub fn of_weight(k: i64) -> Result<Family, BoundsError> {
        Ok(Family::of_kprime(kprime_of(k)?))
    }

    pub fn contains(self, kprime: i64) -> bool {
        match self {
            Family::F06 => kprime == 0 || kprime == 6,
            Family::F410 => kprime == 4 || kprime == 10,
            Family::F814 => kprime == 8 || kprime == 14,
        }
    }

    /// Largest `k'` of the family; the decay constant uses `(k − anchor)/12`.
    pub fn anchor(self) -> i64 {
        match self {
            Family::F06 => 6,
            Family::F410 => 10,
            Family::F814 => 14,
        }
    }

    /// Offset `a` (in units of `π/k`) of the `n`-th zero from `2π/3`.
    fn offset(self, n: u32, prec: u32) -> Float {
        let n = n as i64;
        match self {
            Family::F06 => Float::with_val(prec, 2 * n + 1),
            Family::F410 => Float::with_val(prec, 6 * n + 5) / 3u32,
            Family::F814 => Float::with_val(prec, 6 * n + 7) / 3u32,
        }
    }

    fn check(self, k: i64) -> Result<(), BoundsError> {
        even_weight(k, 4)?;
        let kprime = kprime_of(k)?;
        if !self.contains(kprime) {
            return Err(BoundsError::WrongFamily { k, kprime, family: self });
        }
        Ok(())
    }
}

/// Bound on the residue-term difference `(2cos(γ/2))^{-k}(1 − (2cos(γ/2))^{-12})`.
pub fn t_function_at(family: Family, k: i64, n: u32, prec: u32) -> Result<Float, BoundsError> {
    if k <= 0 {
        return Err(domain(format!("weight {k} must be positive")));
    }
    let a = family.offset(n, prec);
    let p = pi(prec);
    let rho = Float::with_val(prec, &p * 2u32) / 3u32;
    let th1 = Float::with_val(prec, &rho - Float::with_val(prec, &a * &p) / k);
    let th2 = Float::with_val(
        prec,
        &rho - Float::with_val(prec, &a * &p) / (k + 12) + Float::with_val(prec, &p / 3u32) / (k + 12),
    );
    let half_pi = Float::with_val(prec, &p / 2u32);
    for th in [&th1, &th2] {
        if !(*th > half_pi && *th < rho) {
            return Err(domain(format!(
                "T_{family}({k},{n}): angle {} outside (π/2, 2π/3)",
                th.to_f64()
            )));
        }
    }
    let c1 = Float::with_val(prec, th1 / 2u32).cos() * 2u32;
    let c2 = Float::with_val(prec, th2 / 2u32).cos() * 2u32;
    let num = Float::with_val(prec, 1) - c1.pow(-12i32);
    Ok(num / c2.pow(Float::with_val(prec, k)))
}

pub fn t_function(family: Family, k: i64, n: u32) -> Result<f64, BoundsError> {
    Ok(t_function_at(family, k, n, CLOSED_FORM_PREC)?.to_f64())
}

/// Lower bound on zero distance on the second interval for `k` in the
/// family, via the derivative bound `4k + 24`.
pub fn b_lower_bound_at(family: Family, k: i64, prec: u32) -> Result<Float, BoundsError> {
    family.check(k)?;
    let p = pi(prec);
    let k12 = Float::with_val(prec, k + 12);
    let (arg, t) = match family {
        Family::F06 => (Float::with_val(prec, &p * 3u32) / &k12, t_function_at(family, k, 1, prec)?),
        Family::F410 => (
            Float::with_val(prec, &p * 4u32) / (k12 * 3u32),
            t_function_at(family, k, 0, prec)?,
        ),
        Family::F814 => (Float::with_val(prec, &p * 7u32) / &k12, t_function_at(family, k, 0, prec)?),
    };
    Ok((arg.sin() - t) / (4 * k + 24))
}

pub fn b_lower_bound(family: Family, k: i64) -> Result<f64, BoundsError> {
    Ok(b_lower_bound_at(family, k, CLOSED_FORM_PREC)?.to_f64())
}

/// `2.24·0.44^{(k − anchor)/12}`: bound on `|g − H_k|` on the second
/// interval for `G_k`.
pub fn residue_constant(k: i64) -> Result<f64, BoundsError> {
    let anchor = Family::of_weight(k)?.anchor();
    Ok(2.24 * 0.44f64.powf((k - anchor) as f64 / 12.0))
}

/// The named threshold inequalities of the weight argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inequality {
    /// `πC(k)/(2k) < ½(π/k − π/(k+12))`.
    EpsilonShift,
    /// `2.24·0.44^{(k−s)/12}·20/(7k) < ½B(k)` for the family.
    ZeroMotion(Family),
    /// At least two zeros of the pair `cos(kθ/2)`, `cos((k+12)θ/2)` in
    /// `[7π/12, 1.9]`.
    Overlap,
}

impl Inequality {
    pub const ALL: [Inequality; 5] = [
        Inequality::EpsilonShift,
        Inequality::ZeroMotion(Family::F06),
        Inequality::ZeroMotion(Family::F410),
        Inequality::ZeroMotion(Family::F814),
        Inequality::Overlap,
    ];

    pub fn name(&self) -> String {
        match self {
            Inequality::EpsilonShift => "epsilon shift".into(),
            Inequality::ZeroMotion(f) => format!("zero motion {f}"),
            Inequality::Overlap => "overlap count".into(),
        }
    }

    /// Asserted onset: the inequality holds for every applicable even
    /// `k` at or above this weight.
    pub fn claimed_onset(&self) -> i64 {
        match self {
            Inequality::EpsilonShift => 118,
            Inequality::ZeroMotion(Family::F06) => 102,
            Inequality::ZeroMotion(Family::F410) => 128,
            Inequality::ZeroMotion(Family::F814) => 98,
            Inequality::Overlap => 94,
        }
    }

    pub fn applies(&self, k: i64) -> bool {
        if k < 4 || k % 2 != 0 {
            return false;
        }
        match self {
            Inequality::ZeroMotion(f) => kprime_of(k).map(|kp| f.contains(kp)).unwrap_or(false),
            _ => true,
        }
    }

    /// `None` when `k` is outside the inequality's congruence classes.
    pub fn report(&self, k: i64) -> Option<BoundReport> {
        if !self.applies(k) {
            return None;
        }
        let kf = k as f64;
        let claim = format!("holds for k >= {}", self.claimed_onset());
        let r = match self {
            Inequality::EpsilonShift => {
                let lhs = PI * c_of_k(k) / (2.0 * kf);
                let rhs = 0.5 * (PI / kf - PI / (kf + 12.0));
                BoundReport::new(self.name(), &[("k", kf)], lhs, rhs)
            }
            Inequality::ZeroMotion(f) => {
                let lhs = residue_constant(k).ok()? * 20.0 / (7.0 * kf);
                let rhs = 0.5 * b_lower_bound(*f, k).ok()?;
                BoundReport::new(self.name(), &[("k", kf)], lhs, rhs)
            }
            Inequality::Overlap => {
                let c = overlap_zero_count(k).ok()?;
                BoundReport::new(
                    self.name(),
                    &[("k", kf), ("own", c.own as f64), ("partner", c.partner as f64)],
                    1.0,
                    c.total() as f64,
                )
            }
        };
        Some(r.with_claim(claim))
    }
}

/// Outcome of an exhaustive threshold search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Threshold {
    /// Smallest tested parameter from which every tested parameter holds;
    /// `None` if the largest tested one fails.
    pub onset: Option<i64>,
    /// Tested parameters below the onset that hold anyway.
    pub exceptions: Vec<i64>,
    /// Tested parameters below the onset that fail.
    pub failures: Vec<i64>,
    pub tested: usize,
}

/// Evaluates `pred` on every parameter (in increasing order); `None`
/// means not applicable. No monotonicity is assumed.
pub fn threshold_search<I, P>(params: I, mut pred: P) -> Threshold
where
    I: IntoIterator<Item = i64>,
    P: FnMut(i64) -> Option<bool>,
{
    let results: Vec<(i64, bool)> = params
        .into_iter()
        .filter_map(|p| pred(p).map(|h| (p, h)))
        .collect();
    let cut = results.iter().rposition(|&(_, h)| !h);
    let onset = match cut {
        None => results.first().map(|r| r.0),
        Some(i) => results.get(i + 1).map(|r| r.0),
    };
    let below = &results[..cut.map_or(0, |i| i + 1)];
    Threshold {
        onset,
        exceptions: below.iter().filter(|r| r.1).map(|r| r.0).collect(),
        failures: below.iter().filter(|r| !r.1).map(|r| r.0).collect(),
        tested: results.len(),
    }
}

/// Threshold search for a named inequality over even weights in `[4, k_max]`.
pub fn inequality_threshold(ineq: Inequality, k_max: i64) -> Threshold {
    threshold_search((4..=k_max).step_by(2), |k| ineq.report(k).map(|r| r.holds))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverlapCount {
    pub k: i64,
    /// Zeros of `cos(kθ/2)` in `[7π/12, 1.9]`.
    pub own: usize,
    /// Zeros of `cos((k+12)θ/2)` there.
    pub partner: usize,
}

impl OverlapCount {
    pub fn total(&self) -> usize {
        self.own + self.partner
    }
}

pub fn overlap_zero_count(k: i64) -> Result<OverlapCount, BoundsError> {
    even_weight(k, 4)?;
    let count = |w: i64| {
        cosine_zeros_in(w, RESIDUE_LO, INTERVAL_ONE_HI)
            .into_iter()
            .filter(|&t| t <= INTERVAL_ONE_HI)
            .count()
    };
    Ok(OverlapCount {
        k,
        own: count(k),
        partner: count(k + 12),
    })
}

/// Sampled extremes of `|Δ|` on the arc and on horizontal segments.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaConstants {
    pub grid: usize,
    /// `max |Δ(e^{iθ})| < .00481`.
    pub arc_max: BoundReport,
    /// `.00721 < min |Δ(x + .75i)|`.
    pub segment_min: BoundReport,
    /// `max |Δ(e^{iθ})/Δ(x + .75i)| < .66713`.
    pub quotient: BoundReport,
    /// `min |Δ(x + .65i)|` and the matching quotient, which feed the
    /// second-interval constant.
    pub segment_min_two: f64,
    pub quotient_two: f64,
}

impl DeltaConstants {
    /// Margins relative to the asserted constants, in the order arc,
    /// segment, quotient. Positive means the sampled value is inside.
    pub fn margins(&self) -> [f64; 3] {
        [
            (DELTA_ARC_MAX - self.arc_max.lhs) / DELTA_ARC_MAX,
            (self.segment_min.rhs - DELTA_SEGMENT_MIN) / DELTA_SEGMENT_MIN,
            (DELTA_QUOTIENT - self.quotient.lhs) / DELTA_QUOTIENT,
        ]
    }
}

fn delta_abs(at: Point, cfg: &EvalConfig) -> Result<Float, BoundsError> {
    Ok(eval_standard(Standard::Delta, at, cfg.prec_bits, cfg.max_terms)?.abs())
}

fn uniform(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

pub fn verify_delta_constants(grid: usize, cfg: &EvalConfig) -> Result<DeltaConstants, BoundsError> {
    if grid < 2 {
        return Err(domain(format!("grid {grid} < 2")));
    }
    cfg.validate()?;
    let prec = cfg.prec_bits;
    let mut arc_max = Float::new(prec);
    for i in 0..grid {
        let theta = uniform(FRAC_PI_2, ARC_HI, grid, i);
        arc_max.max_mut(&delta_abs(Point::Arc { theta }, cfg)?);
    }
    let seg_min = |height: f64| -> Result<Float, BoundsError> {
        let mut best = Float::with_val(prec, rug::float::Special::Infinity);
        // |Δ(x + iy)| is even in x
        for i in 0..grid {
            let x = uniform(-0.5, 0.5, grid, i).abs();
            best.min_mut(&delta_abs(Point::Segment { x, height }, cfg)?);
        }
        Ok(best)
    };
    let min_one = seg_min(HEIGHT_ONE)?;
    let min_two = seg_min(HEIGHT_TWO)?;
    let q_one = Float::with_val(prec, &arc_max / &min_one).to_f64();
    let q_two = Float::with_val(prec, &arc_max / &min_two).to_f64();
    let g = [("grid", grid as f64)];
    Ok(DeltaConstants {
        grid,
        arc_max: BoundReport::new("arc max |Delta|", &g, arc_max.to_f64(), DELTA_ARC_MAX)
            .with_claim("|Delta(e^{i theta})| < .00481"),
        segment_min: BoundReport::new("segment min |Delta| at height .75", &g, DELTA_SEGMENT_MIN, min_one.to_f64())
            .with_claim("|Delta(x + .75i)| > .00721"),
        quotient: BoundReport::new("max Delta quotient at height .75", &g, q_one, DELTA_QUOTIENT)
            .with_claim("|Delta(e^{i theta})/Delta(x + .75i)| < .66713"),
        segment_min_two: min_two.to_f64(),
        quotient_two: q_two,
    })
}

/// Which residue inequality: the first interval `(π/2, 1.9]` at height
/// `.75`, or the second `[7π/12, 2π/3)` at height `.65` with the extra
/// residue term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interval {
    One,
    Two,
}

impl Interval {
    pub fn height(self) -> f64 {
        match self {
            Interval::One => HEIGHT_ONE,
            Interval::Two => HEIGHT_TWO,
        }
    }

    pub fn contains(self, theta: f64) -> bool {
        match self {
            Interval::One => theta > FRAC_PI_2 && theta <= INTERVAL_ONE_HI,
            Interval::Two => (RESIDUE_LO..ARC_HI).contains(&theta),
        }
    }

    pub fn range(self) -> (f64, f64) {
        match self {
            Interval::One => (FRAC_PI_2, INTERVAL_ONE_HI),
            Interval::Two => (RESIDUE_LO, ARC_HI),
        }
    }
}

/// `(−1)^m e^{−πm(2sinθ − tan(θ/2))}/(2cos(θ/2))^k`, the residue from
/// `τ = z/(z+1)`.
pub fn residue_term(k: i64, m: i64, theta: f64) -> f64 {
    let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let damp = (-PI * m as f64 * (2.0 * theta.sin() - (theta / 2.0).tan())).exp();
    sign * damp * (2.0 * (theta / 2.0).cos()).powf(-(k as f64))
}

#[derive(Debug, Clone, Copy)]
struct SegmentPoint {
    ln_e: f64,
    ln_delta: f64,
    j: (f64, f64),
}

/// Evaluates the residue inequalities, caching forms and segment values
/// across calls.
pub struct ResidueChecker {
    cfg: EvalConfig,
    x_grid: usize,
    forms: HashMap<(i64, i64), BasisForm>,
    // keyed by (weight of the segment Eisenstein factor, height bits, |x| bits)
    segment: HashMap<(i64, u64, u64), SegmentPoint>,
}

/// Both sides of a residue inequality at one angle.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueCheck {
    /// `|LHS| < RHS`.
    pub bound: BoundReport,
    /// Signed left-hand side before the absolute value.
    pub lhs_signed: f64,
    /// Maximizing `x` on the segment.
    pub argmax: f64,
}

impl ResidueChecker {
    pub fn new(cfg: EvalConfig, x_grid: usize) -> Result<Self, BoundsError> {
        cfg.validate()?;
        if x_grid < 3 {
            return Err(domain(format!("x grid {x_grid} < 3")));
        }
        Ok(ResidueChecker {
            cfg,
            x_grid,
            forms: HashMap::new(),
            segment: HashMap::new(),
        })
    }

    fn form(&mut self, k: i64, m: i64) -> Result<&BasisForm, BoundsError> {
        Ok(match self.forms.entry((k, m)) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => e.insert(construct(k, m)?),
        })
    }

    /// `g(θ)` of `f_{k,m}` at the checker's precision.
    pub fn trace(&mut self, k: i64, m: i64, theta: f64) -> Result<Float, BoundsError> {
        let cfg = self.cfg;
        let form = self.form(k, m)?;
        Ok(real_trace(form, theta, &cfg)?.value)
    }

    fn segment_point(&mut self, weight: i64, x: f64, height: f64) -> Result<SegmentPoint, BoundsError> {
        let x = x.abs();
        let key = (weight, height.to_bits(), x.to_bits());
        if let Some(p) = self.segment.get(&key) {
            return Ok(*p);
        }
        let at = Point::Segment { x, height };
        let prec = self.cfg.prec_bits;
        let e = eval_standard(Standard::Eisenstein(weight), at, prec, self.cfg.max_terms)?.abs();
        let d = delta_abs(at, &self.cfg)?;
        let j = j_on_segment(x, height, &self.cfg)?.value;
        let p = SegmentPoint {
            ln_e: e.ln().to_f64(),
            ln_delta: d.ln().to_f64(),
            j: (j.real().to_f64(), j.imag().to_f64()),
        };
        self.segment.insert(key, p);
        Ok(p)
    }

    /// Right-hand side: the maximum over `|x| ≤ 1/2` of the residue
    /// majorant, and the maximizing `x`.
    pub fn rhs(&mut self, k: i64, m: i64, theta: f64, interval: Interval) -> Result<(f64, f64), BoundsError> {
        let split = split_weight(k)?;
        let (ell, kp) = (split.ell as f64, split.kprime);
        let height = interval.height();
        let prec = self.cfg.prec_bits;
        let arc = Point::Arc { theta };
        let ln_d_arc = delta_abs(arc, &self.cfg)?.ln().to_f64();
        let ln_e_arc = eval_standard(Standard::Eisenstein(kp), arc, prec, self.cfg.max_terms)?
            .abs()
            .ln()
            .to_f64();
        let j_arc = j_on_arc(theta, &self.cfg)?.to_f64();
        let n = self.x_grid;
        let fixed = -2.0 * PI * m as f64 * (theta.sin() - height) + ell * ln_d_arc + ln_e_arc;
        let mut ln_at = |x: f64| -> Result<f64, BoundsError> {
            let s = self.segment_point(14 - kp, x, height)?;
            let dj = (s.j.0 - j_arc).hypot(s.j.1);
            Ok(fixed - ell * s.ln_delta + s.ln_e - s.ln_delta - dj.ln())
        };
        let mut best = (f64::NEG_INFINITY, 0.0, 0usize);
        for i in 0..n {
            let x = uniform(-0.5, 0.5, n, i);
            let v = ln_at(x)?;
            if v > best.0 {
                best = (v, x, i);
            }
        }
        // golden-section refinement on the neighbouring cells
        let lo_i = best.2.saturating_sub(1);
        let hi_i = (best.2 + 1).min(n - 1);
        let (mut a, mut b) = (uniform(-0.5, 0.5, n, lo_i), uniform(-0.5, 0.5, n, hi_i));
        let r = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - r * (b - a);
        let mut d = a + r * (b - a);
        let (mut fc, mut fd) = (ln_at(c)?, ln_at(d)?);
        for _ in 0..40 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = ln_at(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = ln_at(d)?;
            }
        }
        for (v, x) in [(fc, c), (fd, d)] {
            if v > best.0 {
                best = (v, x, best.2);
            }
        }
        Ok((best.0.exp(), best.1))
    }

    /// `g(θ) − 2cos(b(θ))`, minus the extra residue term on the second
    /// interval.
    pub fn lhs(&mut self, k: i64, m: i64, theta: f64, interval: Interval) -> Result<f64, BoundsError> {
        let prec = self.cfg.prec_bits;
        let g = self.trace(k, m, theta)?;
        let b = Float::with_val(prec, theta) * k / 2u32
            - Float::with_val(prec, theta).cos() * pi(prec) * (2 * m);
        let mut v = g - b.cos() * 2u32;
        if interval == Interval::Two {
            v -= residue_term(k, m, theta);
        }
        Ok(v.to_f64())
    }

    pub fn check(&mut self, k: i64, m: i64, theta: f64, interval: Interval) -> Result<ResidueCheck, BoundsError> {
        if !interval.contains(theta) {
            return Err(domain(format!("theta {theta} outside interval {interval:?}")));
        }
        let lhs = self.lhs(k, m, theta, interval)?;
        let (rhs, argmax) = self.rhs(k, m, theta, interval)?;
        let name = match interval {
            Interval::One => "residue inequality, interval one",
            Interval::Two => "residue inequality, interval two",
        };
        let bound = BoundReport::new(
            name,
            &[("k", k as f64), ("m", m as f64), ("theta", theta)],
            lhs.abs(),
            rhs,
        );
        Ok(ResidueCheck {
            bound,
            lhs_signed: lhs,
            argmax,
        })
    }

    /// `|g − 2cos(kθ/2)| < 1.985` for `G_k` at `θ` in the first interval.
    pub fn check_trace_cap(&mut self, k: i64, theta: f64) -> Result<BoundReport, BoundsError> {
        if !Interval::One.contains(theta) {
            return Err(domain(format!("theta {theta} outside interval One")));
        }
        let lhs = self.lhs(k, 0, theta, Interval::One)?;
        Ok(BoundReport::new(
            "gap trace cap",
            &[("k", k as f64), ("theta", theta)],
            lhs.abs(),
            GAP_TRACE_CAP,
        )
        .with_claim("|g - 2cos(k theta/2)| < 1.985"))
    }

    /// `|g − H_k| < 2.24·0.44^{(k−s)/12}` for `G_k` on the second interval.
    pub fn check_residue_constant(&mut self, k: i64, theta: f64) -> Result<BoundReport, BoundsError> {
        if !Interval::Two.contains(theta) {
            return Err(domain(format!("theta {theta} outside interval Two")));
        }
        let bound = residue_constant(k)?;
        let prec = self.cfg.prec_bits;
        let g = self.trace(k, 0, theta)?;
        let two_cos = Float::with_val(prec, theta / 2.0).cos() * 2u32;
        let h = Float::with_val(prec, Float::with_val(prec, theta) * k / 2u32).cos() * 2u32
            + two_cos.pow(Float::with_val(prec, -k));
        let diff = Float::with_val(prec, g - h).to_f64().abs();
        Ok(
            BoundReport::new("residue constant", &[("k", k as f64), ("theta", theta)], diff, bound)
                .with_claim("|g - H_k| < 2.24(.44)^{(k-s)/12}"),
        )
    }
}

/// One-shot residue inequality at the default `x` grid.
pub fn residue_inequality_check(
    k: i64,
    m: i64,
    theta: f64,
    interval: Interval,
    cfg: &EvalConfig,
) -> Result<ResidueCheck, BoundsError> {
    ResidueChecker::new(*cfg, DEFAULT_X_GRID)?.check(k, m, theta, interval)
}

/// Each isolated zero of `G_k` in `(π/2, 1.9]` lies within `πC(k)/(2k)`
/// of a zero of `2cos(kθ/2)`, radius included.
pub fn check_zero_shift(k: i64, cfg: &EvalConfig) -> Result<BoundReport, BoundsError> {
    even_weight(k, 4)?;
    let form = construct(k, 0)?;
    let zs = isolate_zeros(&form, cfg)?;
    let kf = k as f64;
    let mut worst: f64 = 0.0;
    for z in zs.zeros.iter().filter(|z| z.theta <= INTERVAL_ONE_HI) {
        let n = ((z.theta * kf / PI - 1.0) / 2.0).round();
        let c = (2.0 * n + 1.0) * PI / kf;
        worst = worst.max((z.theta - c).abs() + z.radius);
    }
    Ok(
        BoundReport::new("zero shift", &[("k", kf)], worst, PI * c_of_k(k) / (2.0 * kf))
            .with_claim("zeros move less than pi C(k)/(2k)"),
    )
}

/// Direction of the index step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `k → k + 12` at fixed `m`.
    Weight,
    /// `m → m + 1` at fixed `k`.
    Index,
}

impl Direction {
    pub fn variant(self) -> Variant {
        match self {
            Direction::Weight => Variant::KPlus12,
            Direction::Index => Variant::MPlus1,
        }
    }
}

fn curvature_term(k: f64, m1: f64) -> f64 {
    2.0 / (m1 * (k + 2.0 * PI * 3f64.sqrt() * m1))
}

/// Lower bound on the distance between the first zeros of the cosine
/// models of `f_{k,m}` and its successor, near `π/2`.
pub fn near_pi2_gap_bound(k: i64, m: i64, dir: Direction) -> Result<f64, BoundsError> {
    let (kf, mf) = (k as f64, m as f64);
    let s = kf + 4.0 * PI * mf;
    if m < 0 || s <= 0.0 {
        return Err(domain(format!("(k, m) = ({k}, {m}): need m >= 0 and k + 4πm > 0")));
    }
    Ok(match dir {
        Direction::Weight => PI / s - PI / (s + 12.0),
        Direction::Index => {
            let s1 = kf + 4.0 * PI * (mf + 1.0);
            PI * (2.0 + s) / (2.0 * s) - PI * (2.0 + s1) / (2.0 * s1) - curvature_term(kf, mf + 1.0)
        }
    })
}

/// The analogue near `2π/3`. With `s = k + 2√3πm` the tangent of `b` at
/// `2π/3` has slope `s/2`, and the last model zero before the corner sits
/// a phase `δ = π·frac(k/3 + m − 1/2)` below it, `δ ∈ {π/6, π/2, 5π/6}`;
/// `δ` is shared by the successor in both directions. The tangent zeros
/// are `2δ/s` and `2δ/s*` from the corner. `b` is concave and lies below
/// its tangent, so each true zero sits right of its tangent zero by at
/// most `4πmδ²/s³`, and only the earlier zero's shift is subtracted.
pub fn near_rho_gap_bound(k: i64, m: i64, dir: Direction) -> Result<f64, BoundsError> {
    let (kf, mf) = (k as f64, m as f64);
    let c = 2.0 * 3f64.sqrt() * PI;
    let s = kf + c * mf;
    if m < 0 || s <= 0.0 {
        return Err(domain(format!("(k, m) = ({k}, {m}): need m >= 0 and k + 2√3πm > 0")));
    }
    let s_next = match dir {
        Direction::Weight => s + 12.0,
        Direction::Index => s + c,
    };
    // 6·frac(k/3 + m − 1/2) ∈ {1, 3, 5}
    let sixths = (2 * k + 6 * m - 3).rem_euclid(6);
    let delta = PI * sixths as f64 / 6.0;
    Ok(2.0 * delta * (1.0 / s - 1.0 / s_next) - 4.0 * PI * mf * delta * delta / (s * s * s))
}

/// `M(k, m)`: the smaller of the two gap bounds for the direction.
pub fn gap_lower_bound(k: i64, m: i64, dir: Direction) -> Result<f64, BoundsError> {
    Ok(near_pi2_gap_bound(k, m, dir)?.min(near_rho_gap_bound(k, m, dir)?))
}

fn check_floor_constant(e: f64) -> Result<(), BoundsError> {
    if !(e > 0.0 && e < std::f64::consts::FRAC_1_SQRT_2) {
        return Err(domain(format!("derivative constant {e} must lie in (0, √2/2)")));
    }
    Ok(())
}

/// `E(k + 2√3πm)`.
pub fn derivative_floor(k: i64, m: i64, e: f64) -> Result<f64, BoundsError> {
    check_floor_constant(e)?;
    Ok(e * (k as f64 + 2.0 * 3f64.sqrt() * PI * m as f64))
}

/// Samples `|(k + 4πm sinθ) sin b(θ)|` on `α* ± π/(2(|k| + 4πm))` around
/// each zero `α*` of the cosine model and compares with the floor.
pub fn check_derivative_floor(k: i64, m: i64, e: f64, samples: usize) -> Result<BoundReport, BoundsError> {
    let floor = derivative_floor(k, m, e)?;
    let model = CosModel::new(k, m, Variant::Base);
    let half = PI / (2.0 * (k.abs() as f64 + 4.0 * PI * m as f64));
    let n = samples.max(2);
    let mut least = f64::INFINITY;
    for a in cos_model_zeros(&model)? {
        for i in 0..n {
            let t = uniform(a - half, a + half, n, i);
            let d = (k as f64 + 4.0 * PI * m as f64 * t.sin()) * model.phase(t).sin();
            least = least.min(d.abs());
        }
    }
    Ok(BoundReport::new(
        "derivative floor",
        &[("k", k as f64), ("m", m as f64), ("E", e)],
        floor,
        least,
    ))
}

/// `H_k'(θ)`.
pub fn residue_model_derivative(k: i64, theta: f64) -> f64 {
    let kf = k as f64;
    -kf * (kf * theta / 2.0).sin() + kf / 2.0 * (theta / 2.0).tan() * (2.0 * (theta / 2.0).cos()).powf(-kf)
}

/// Samples `|H_k'|` within `half_width` of each zero of `H_k` on the
/// second interval and compares with `7k/20`. The default window is the
/// motion bound `20C/(7k)` with `C = 2.24·0.44^{(k−s)/12}`.
pub fn check_residue_derivative_floor(
    k: i64,
    half_width: Option<f64>,
    samples: usize,
) -> Result<BoundReport, BoundsError> {
    even_weight(k, 4)?;
    let kf = k as f64;
    let half = match half_width {
        Some(h) => h,
        None => residue_constant(k)? * 20.0 / (7.0 * kf),
    };
    let n = samples.max(2);
    let mut least = f64::INFINITY;
    for a in residue_model_zeros(k)? {
        for i in 0..n {
            let t = uniform(a - half, a + half, n, i).clamp(RESIDUE_LO, ARC_HI);
            least = least.min(residue_model_derivative(k, t).abs());
        }
    }
    Ok(BoundReport::new(
        "residue derivative floor",
        &[("k", kf), ("half_width", half)],
        7.0 * kf / 20.0,
        least,
    )
    .with_claim("|H_k'| > 7k/20 near zeros of H_k"))
}

/// Tail bound on `|g − 2cos(b)|` on `𝒜_ε`:
/// `2.97·0.49^m·0.67^ℓ + e^{−πm(2sinρ − tan(ρ/2))}/(2cos(ρ/2))^k`, `ρ = 2π/3 − ε`.
pub fn decay_bound(k: i64, m: i64, epsilon: f64) -> Result<f64, BoundsError> {
    if !(epsilon > 0.0 && epsilon < PI / 6.0) {
        return Err(domain(format!("epsilon {epsilon} must lie in (0, π/6)")));
    }
    let ell = split_weight(k)?.ell;
    let rho = ARC_HI - epsilon;
    let head = 2.97 * 0.49f64.powi(m as i32) * 0.67f64.powi(ell as i32);
    Ok(head + residue_term(k, m, rho).abs())
}

/// The decay inequality certifying interlacing on `𝒜_ε`:
/// `decay_bound/(E(k + 2√3πm)) < ½M(k, m)`, with `M` taken for the step
/// direction.
pub fn decay_inequality(k: i64, m: i64, epsilon: f64, e: f64, dir: Direction) -> Result<BoundReport, BoundsError> {
    let floor = derivative_floor(k, m, e)?;
    if floor <= 0.0 {
        return Err(domain(format!("derivative floor {floor} not positive at ({k}, {m})")));
    }
    let lhs = decay_bound(k, m, epsilon)? / floor;
    let rhs = 0.5 * gap_lower_bound(k, m, dir)?;
    Ok(BoundReport::new(
        match dir {
            Direction::Weight => "decay inequality, weight step",
            Direction::Index => "decay inequality, index step",
        },
        &[("k", k as f64), ("m", m as f64), ("epsilon", epsilon), ("E", e)],
        lhs,
        rhs,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn c_of_k_values() {
        assert!(close(c_of_k(14), 2.97, 1e-15));
        assert!(close(c_of_k(26), 2.97 * 0.66713, 1e-15));
        for k in (4..=600).step_by(2) {
            let ell = split_weight(k).unwrap().ell;
            assert!(c_of_k(k) >= 2.97 * 0.66713f64.powi(ell as i32) * (1.0 - 1e-14), "k={k}");
        }
    }

    #[test]
    fn epsilon_bound_domain() {
        assert!(epsilon_bound(2.0, 10).is_err());
        assert!(close(epsilon_bound(2.0 - 1e-12, 10).unwrap(), PI / 10.0, 1e-11));
        let rep = Inequality::EpsilonShift.report(118).unwrap();
        assert!(rep.holds);
        assert!(!Inequality::EpsilonShift.report(60).unwrap().holds);
    }

    #[test]
    fn interval_one_gaps() {
        assert!(close(interval1_gap(24).unwrap(), PI / 24.0 - PI / 36.0, 1e-15));
        assert!(close(interval1_gap(30).unwrap(), 2.0 * (PI / 30.0 - PI / 42.0), 1e-15));
        assert!(close(interval1_gap(16).unwrap(), PI / 16.0 - PI / 28.0, 1e-15));
        assert!(interval1_gap(3).is_err());
    }

    #[test]
    fn beta_alpha_lines() {
        let v = beta_alpha_lower_bound(120).unwrap();
        assert!(close(v, PI / 120.0 - PI / 360.0 - PI / 396.0, 1e-14));
        let v = beta_alpha_lower_bound(104).unwrap();
        let want = 4.0 * PI / 312.0 - PI / 348.0 - PI / 312.0 - PI / 348.0;
        assert!(close(v, want, 1e-14));
        for k in (98..=600).step_by(2) {
            assert!(beta_alpha_lower_bound(k).unwrap() > 0.0, "k={k}");
        }
    }

    #[test]
    fn t_function_shape() {
        for k in [98, 150, 200, 400] {
            let mut prev = f64::INFINITY;
            for n in 0..6 {
                let t = t_function(Family::F06, k, n).unwrap();
                assert!(t < prev, "k={k} n={n}");
                prev = t;
            }
        }
        let t = t_function(Family::F06, 200, 1).unwrap();
        assert!(t > 0.0 && t < 1.0);
        let t = t_function(Family::F814, 98, 0).unwrap();
        assert!(t.is_finite() && t > 0.0);
        // offset pushes the angle below π/2
        assert!(t_function(Family::F06, 4, 3).is_err());
    }

    #[test]
    fn t_function_against_f64() {
        // independent f64 transcription of the closed form
        let k = 130.0f64;
        let a = 5.0 / 3.0;
        let th1 = 2.0 * PI / 3.0 - a * PI / k;
        let th2 = 2.0 * PI / 3.0 - a * PI / (k + 12.0) + PI / (3.0 * (k + 12.0));
        let want = (1.0 - (2.0 * (th1 / 2.0).cos()).powi(-12)) / (2.0 * (th2 / 2.0).cos()).powf(k);
        assert!(close(t_function(Family::F410, 130, 0).unwrap(), want, 1e-12));
    }

    #[test]
    fn b_bounds() {
        for k in (16..=600).step_by(2).filter(|k| Family::F410.contains(split_weight(*k).unwrap().kprime)) {
            assert!(b_lower_bound(Family::F410, k).unwrap() > 0.0, "k={k}");
        }
        assert!(b_lower_bound(Family::F06, 102).unwrap() > 0.0);
        assert!(b_lower_bound(Family::F814, 98).unwrap() > 0.0);
        assert!(matches!(
            b_lower_bound(Family::F06, 100),
            Err(BoundsError::WrongFamily { .. })
        ));
    }

    #[test]
    fn closed_forms_stable_under_precision() {
        for k in [98, 118, 226, 598] {
            let fam = Family::of_weight(k).unwrap();
            let pairs = [
                (c_of_k_at(k, 128), c_of_k_at(k, 256)),
                (t_function_at(fam, k, 0, 128).unwrap(), t_function_at(fam, k, 0, 256).unwrap()),
                (b_lower_bound_at(fam, k, 128).unwrap(), b_lower_bound_at(fam, k, 256).unwrap()),
            ];
            for (a, b) in pairs {
                let rel = Float::with_val(256, &a - &b).abs() / b.clone().abs();
                assert!(rel < 1e-20, "k={k}: {}", rel.to_f64());
            }
        }
    }

    #[test]
    fn claimed_thresholds() {
        for ineq in Inequality::ALL {
            let t = inequality_threshold(ineq, 600);
            assert!(t.onset.is_some(), "{}", ineq.name());
            assert!(
                t.failures.iter().all(|&k| k < ineq.claimed_onset()),
                "{}: failures {:?}",
                ineq.name(),
                t.failures
            );
        }
        // the first-interval shift inequality becomes true exactly at the claim
        assert_eq!(inequality_threshold(Inequality::EpsilonShift, 600).onset, Some(118));
    }

    #[test]
    fn threshold_search_records_exceptions() {
        let t = threshold_search(0..10, |p| if p == 5 { None } else { Some(p != 3 && p != 6) });
        assert_eq!(t.onset, Some(7));
        assert_eq!(t.failures, vec![3, 6]);
        assert_eq!(t.exceptions, vec![0, 1, 2, 4]);
        assert_eq!(t.tested, 9);
        let t = threshold_search(0..4, |_| Some(false));
        assert_eq!(t.onset, None);
    }

    #[test]
    fn overlap_counts() {
        // zeros of cos(6θ): (2n+1)π/12, of which 7π/12 lies in [7π/12, 1.9]
        let c = overlap_zero_count(12).unwrap();
        assert_eq!(c.own, 1);
        // cos(12θ): (2n+1)π/24 with 14 ≤ 2n+1 ≤ 14.5 ⇒ none... 15π/24 = 1.963 > 1.9
        assert_eq!(c.partner, 0);
        for k in (94..=600).step_by(2) {
            let c = overlap_zero_count(k).unwrap();
            assert!(c.total() >= 2 && c.own >= 1 && c.partner >= 1, "k={k}");
        }
        assert_eq!(overlap_zero_count(94).unwrap().own, 1);
    }

    #[test]
    fn gap_bounds() {
        for k in (4..200).step_by(2) {
            let w = near_pi2_gap_bound(k, 0, Direction::Weight).unwrap();
            assert!(close(w, PI / k as f64 - PI / (k as f64 + 12.0), 1e-14));
            let w2 = near_pi2_gap_bound(k + 2, 0, Direction::Weight).unwrap();
            assert!(w2 < w);
        }
        for m in 200..260 {
            assert!(near_pi2_gap_bound(12, m, Direction::Index).unwrap() > 0.0, "m={m}");
        }
        assert!(near_pi2_gap_bound(0, 0, Direction::Index).is_err());
    }

    #[test]
    fn rho_gap_bounds() {
        for k in (4i64..400).step_by(2) {
            let s = k as f64;
            let delta = match k.rem_euclid(6) {
                0 => PI / 2.0,
                2 => PI / 6.0,
                _ => 5.0 * PI / 6.0,
            };
            let want = 2.0 * delta * (1.0 / s - 1.0 / (s + 12.0));
            assert!(close(near_rho_gap_bound(k, 0, Direction::Weight).unwrap(), want, 1e-14), "k={k}");
        }
        for m in 1..500 {
            assert!(near_rho_gap_bound(0, m, Direction::Index).unwrap() > 0.0, "m={m}");
            assert!(near_rho_gap_bound(12, m, Direction::Weight).unwrap() > 0.0, "m={m}");
        }
    }

    #[test]
    fn derivative_floors() {
        assert!(derivative_floor(4, 0, 0.71).is_err());
        assert!(derivative_floor(4, 0, 0.0).is_err());
        for k in (4..100).step_by(2) {
            for m in 0..5 {
                assert!(derivative_floor(k, m, DEFAULT_E).unwrap() > 0.0);
            }
        }
        assert!(check_derivative_floor(200, 0, DEFAULT_E, 64).unwrap().holds);
        assert!(check_derivative_floor(0, 40, DEFAULT_E, 64).unwrap().holds);
    }

    #[test]
    fn residue_derivative_floor_large_k() {
        for k in (98..=300).step_by(2) {
            let r = check_residue_derivative_floor(k, None, 32).unwrap();
            assert!(r.holds, "k={k}: {} vs {}", r.rhs, r.lhs);
        }
    }

    #[test]
    fn decay_bound_vanishes() {
        let mut prev = f64::INFINITY;
        for k in (100..2000).step_by(120) {
            let v = decay_bound(k, 0, 0.1).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 1e-10);
        assert!(decay_bound(12, 0, 0.0).is_err());
    }

    #[test]
    fn decay_onsets_exist() {
        let t = threshold_search((4..=1200).step_by(2), |k| {
            Some(decay_inequality(k, 0, 0.1, DEFAULT_E, Direction::Weight).ok()?.holds)
        });
        assert!(t.onset.is_some_and(|k| k < 1200));
        let t = threshold_search(1..=400, |m| {
            Some(decay_inequality(0, m, 0.1, DEFAULT_E, Direction::Index).ok()?.holds)
        });
        assert!(t.onset.is_some_and(|m| m < 400));
        // the certified onsets used by the desk scans
        let t = threshold_search(1..=60, |m| {
            Some(decay_inequality(0, m, 0.1, DEFAULT_E, Direction::Index).ok()?.holds)
        });
        assert_eq!(t.onset, Some(7));
    }

    #[test]
    fn residue_checks_hold() {
        let cfg = EvalConfig::default();
        let mut rc = ResidueChecker::new(cfg, DEFAULT_X_GRID).unwrap();
        let r = rc.check(100, 0, 1.7, Interval::One).unwrap();
        assert!(r.bound.holds, "{r:?}");
        assert!(rc.check_trace_cap(100, 1.7).unwrap().holds);
        let r = rc.check(88, 2, 1.95, Interval::Two).unwrap();
        assert!(r.bound.holds, "{r:?}");
        assert!(rc.check(88, 2, 1.95, Interval::One).is_err());
    }

    #[test]
    fn residue_term_sign() {
        assert!(residue_term(12, 0, 2.0) > 0.0);
        assert!(residue_term(12, 1, 2.0) < 0.0);
        let want = (2.0 * (1.0f64).cos()).powf(-12.0);
        assert!(close(residue_term(12, 0, 2.0), want, 1e-15));
    }

    #[test]
    fn residue_constant_end_to_end() {
        let mut rc = ResidueChecker::new(EvalConfig::default(), DEFAULT_X_GRID).unwrap();
        for k in [52, 100, 148] {
            for i in 0..5 {
                let theta = RESIDUE_LO + (ARC_HI - RESIDUE_LO) * (i as f64 + 0.5) / 5.0;
                let r = rc.check_residue_constant(k, theta).unwrap();
                assert!(r.holds, "{r:?}");
            }
        }
    }

    #[test]
    fn zero_shift_at_onset() {
        let r = check_zero_shift(118, &EvalConfig::default()).unwrap();
        assert!(r.holds, "{r:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn report_holds_iff_strict(lhs in -1e3f64..1e3, rhs in -1e3f64..1e3) {
            let r = BoundReport::new("x", &[], lhs, rhs);
            prop_assert_eq!(r.holds, lhs < rhs);
        }

        #[test]
        fn families_partition(k in (2i64..400).prop_map(|k| 2 * k)) {
            let kp = split_weight(k).unwrap().kprime;
            let n = Family::ALL.iter().filter(|f| f.contains(kp)).count();
            prop_assert_eq!(n, 1);
            prop_assert!(Family::of_weight(k).unwrap().contains(kp));
        }

        #[test]
        fn weight_gap_bound_decreasing(k in (2i64..300).prop_map(|k| 2 * k), m in 0i64..20) {
            let a = near_pi2_gap_bound(k, m, Direction::Weight).unwrap();
            let b = near_pi2_gap_bound(k + 2, m, Direction::Weight).unwrap();
            prop_assert!(a > b && b > 0.0);
        }
    }
}
