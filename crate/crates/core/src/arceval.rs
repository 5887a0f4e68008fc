//! Arbitrary-precision evaluation on the arc `z = e^{iθ}`, `θ ∈ [π/2, 2π/3]`,
//! and on horizontal segments `z = x + iA'`.
//!
//! Forms are never summed from their own (fast-growing) expansions on the
//! hot path. The real trace is assembled from the real normalized factors
//! `e^{6iθ}Δ`, `e^{ik'θ/2}E_{k'}` and `F(j)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};
use thiserror::Error;

use crate::basis::BasisForm;
use crate::qexact::{standard_series, ExactSeries, SeriesError, Standard};

/// `2π/3` rounded to the nearest double, which lies inside the arc.
pub const ARC_END: f64 = 2.0 * PI / 3.0;
/// `π/2` rounded to the nearest double.
pub const ARC_START: f64 = FRAC_PI_2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("imaginary residue {imag:e} exceeds tolerance at {theta} (real part {real:e})")]
    ResidualImaginary { theta: f64, imag: f64, real: f64 },
    #[error("series not converged after {terms} terms (remaining bound {remaining:e})")]
    TruncationExhausted { terms: usize, remaining: f64 },
    #[error("{what} = {value} outside the admissible domain")]
    OutOfDomain { what: &'static str, value: f64 },
    #[error("estimated error {est:e} exceeds tol {tol:e} at {prec_bits} bits")]
    InsufficientPrecision { prec_bits: u32, est: f64, tol: f64 },
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub prec_bits: u32,
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            prec_bits: 256,
            tol: 1e-30,
            max_terms: 400,
        }
    }
}

impl EvalConfig {
    /// Default config at the given precision; `tol` is raised to the
    /// smallest admissible value when the default is too tight.
    pub fn with_prec(prec_bits: u32) -> Self {
        let d = Self::default();
        EvalConfig {
            prec_bits,
            tol: d.tol.max(2f64.powi(2 - prec_bits.min(1000) as i32)),
            ..d
        }
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        if self.prec_bits < 64 {
            return Err(EvalError::BadConfig(format!(
                "prec_bits {} < 64",
                self.prec_bits
            )));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(EvalError::BadConfig(format!("tol {} not positive", self.tol)));
        }
        if self.max_terms == 0 {
            return Err(EvalError::BadConfig("max_terms = 0".into()));
        }
        let floor = Float::with_val(64, Float::i_exp(1, 1 - self.prec_bits as i32));
        if Float::with_val(64, self.tol) < floor {
            return Err(EvalError::InsufficientPrecision {
                prec_bits: self.prec_bits,
                est: floor.to_f64(),
                tol: self.tol,
            });
        }
        Ok(())
    }
}

/// A real value on the arc with an absolute error estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcValue {
    pub theta: f64,
    pub value: Float,
    pub prec_bits: u32,
    pub est_error: f64,
}

impl ArcValue {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// A complex value of a series at some point, with an absolute error estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexValue {
    pub value: Complex,
    pub prec_bits: u32,
    pub est_error: f64,
}

impl ComplexValue {
    pub fn abs(&self) -> Float {
        Float::with_val(self.prec_bits, self.value.abs_ref())
    }
}

/// Where a series is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Arc { theta: f64 },
    Segment { x: f64, height: f64 },
}

impl Point {
    fn check(&self) -> Result<(), EvalError> {
        match *self {
            Point::Arc { theta } => {
                if !(ARC_START..=ARC_END).contains(&theta) {
                    return Err(EvalError::OutOfDomain {
                        what: "theta",
                        value: theta,
                    });
                }
            }
            Point::Segment { x, height } => {
                if !(-0.5..=0.5).contains(&x) {
                    return Err(EvalError::OutOfDomain { what: "x", value: x });
                }
                if !(height >= 0.5 && height.is_finite()) {
                    return Err(EvalError::OutOfDomain {
                        what: "height",
                        value: height,
                    });
                }
            }
        }
        Ok(())
    }

    /// `q = e^{2πiz}` at `prec` bits and `ln|q|` in double precision.
    fn nome(&self, prec: u32) -> (Complex, f64) {
        let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
        let (re, im, ln_abs) = match *self {
            Point::Arc { theta } => {
                let t = Float::with_val(prec, theta);
                let (s, c) = t.sin_cos(Float::new(prec));
                let ln_abs = -2.0 * PI * theta.sin();
                (-(Float::with_val(prec, &two_pi * &s)), two_pi * c, ln_abs)
            }
            Point::Segment { x, height } => {
                let re = -Float::with_val(prec, &two_pi * height);
                (re, two_pi * x, -2.0 * PI * height)
            }
        };
        (Complex::with_val(prec, (re, im)).exp(), ln_abs)
    }
}

fn ln_abs_rational(c: &rug::Rational) -> f64 {
    Float::with_val(64, c).abs().ln().to_f64()
}

/// Sums `Σ c_n q^n`, drawing coefficients from `fetch(trunc)`, until the
/// running-max majorant `A_n |q|^n` falls below `e^{target_ln}` on three
/// consecutive terms. Adds a geometric tail majorant to the error.
fn sum_q_series<F>(
    fetch: F,
    q: &Complex,
    ln_absq: f64,
    target_ln: Option<f64>,
    prec: u32,
    max_terms: usize,
) -> Result<(Complex, f64), EvalError>
where
    F: Fn(i64) -> Result<Arc<ExactSeries>, EvalError>,
{
    debug_assert!(ln_absq < 0.0);
    let digits_ln = prec as f64 * std::f64::consts::LN_2;
    let guess = ((digits_ln + 16.0 * digits_ln.ln()) / -ln_absq).ceil() as i64 + 8;
    let mut series = fetch(guess.min(max_terms as i64))?;
    let lead = match series.valuation() {
        Some(v) => v,
        None => return Ok((Complex::new(prec), 0.0)),
    };
    let lead_ln = ln_abs_rational(&series.coeff(lead).expect("valuation inside window"))
        + lead as f64 * ln_absq;
    let stop_ln = target_ln.unwrap_or(lead_ln - digits_ln) - 8f64.ln();

    let mut qn = Complex::with_val(prec, q.pow(lead as i32));
    let mut sum = Complex::new(prec);
    let mut amax_ln = f64::NEG_INFINITY;
    let mut abs_sum = 0f64;
    let mut small = 0;
    let mut n = lead;
    loop {
        let used = (n - lead) as usize;
        if used >= max_terms {
            return Err(EvalError::TruncationExhausted {
                terms: used,
                remaining: (amax_ln + n as f64 * ln_absq).exp(),
            });
        }
        if n > series.trunc() {
            let want = (lead + 2 * (used as i64 + 1)).min(lead + max_terms as i64);
            series = fetch(want)?;
            if n > series.trunc() {
                return Err(EvalError::TruncationExhausted {
                    terms: used,
                    remaining: (amax_ln + n as f64 * ln_absq).exp(),
                });
            }
        }
        let c = series.coeff(n).expect("inside window");
        if c != 0 {
            let cf = Float::with_val(prec, &c);
            let term = Complex::with_val(prec, &qn * &cf);
            sum += &term;
            let c_ln = ln_abs_rational(&c);
            amax_ln = amax_ln.max(c_ln);
            abs_sum += (c_ln + n as f64 * ln_absq).exp();
        }
        if amax_ln + n as f64 * ln_absq < stop_ln {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        qn *= q;
        n += 1;
    }
    let absq = ln_absq.exp();
    let ratio = absq * (16.0 / (n.max(1) as f64)).exp();
    if ratio >= 1.0 {
        return Err(EvalError::TruncationExhausted {
            terms: (n - lead) as usize,
            remaining: f64::INFINITY,
        });
    }
    let tail = (amax_ln + (n + 1) as f64 * ln_absq).exp() / (1.0 - ratio);
    let rounding = (n - lead + 2) as f64 * abs_sum * 2f64.powi(-(prec.min(1000) as i32));
    Ok((sum, tail + rounding))
}

fn fetch_standard(which: Standard) -> impl Fn(i64) -> Result<Arc<ExactSeries>, EvalError> {
    move |t| Ok(standard_series(which, t.max(1))?)
}

fn fetch_fixed(series: &ExactSeries) -> impl Fn(i64) -> Result<Arc<ExactSeries>, EvalError> + '_ {
    move |_| Ok(Arc::new(series.clone()))
}

/// Value of a standard expansion (`E_k`, `Δ` or `j`) at a point, at
/// `prec` bits, summed to roughly full precision.
pub fn eval_standard(
    which: Standard,
    at: Point,
    prec: u32,
    max_terms: usize,
) -> Result<ComplexValue, EvalError> {
    at.check()?;
    if let Standard::Eisenstein(0) = which {
        return Ok(ComplexValue {
            value: Complex::with_val(prec, 1),
            prec_bits: prec,
            est_error: 0.0,
        });
    }
    let (q, ln_absq) = at.nome(prec);
    let (value, est_error) = sum_q_series(fetch_standard(which), &q, ln_absq, None, prec, max_terms)?;
    Ok(ComplexValue {
        value,
        prec_bits: prec,
        est_error,
    })
}

/// Sums a fixed exact expansion at `z = x + i·height`. Fails if the cached
/// coefficients run out before the terms drop below `cfg.tol`.
pub fn eval_on_segment(
    series: &ExactSeries,
    x: f64,
    height: f64,
    cfg: &EvalConfig,
) -> Result<ComplexValue, EvalError> {
    cfg.validate()?;
    eval_fixed(series, Point::Segment { x, height }, cfg)
}

/// Sums a fixed exact expansion at `z = e^{iθ}`.
pub fn eval_on_arc(series: &ExactSeries, theta: f64, cfg: &EvalConfig) -> Result<ComplexValue, EvalError> {
    cfg.validate()?;
    eval_fixed(series, Point::Arc { theta }, cfg)
}

fn eval_fixed(series: &ExactSeries, at: Point, cfg: &EvalConfig) -> Result<ComplexValue, EvalError> {
    at.check()?;
    let (q, ln_absq) = at.nome(cfg.prec_bits);
    let target = (cfg.tol / 8.0).ln();
    let (value, est_error) = sum_q_series(
        fetch_fixed(series),
        &q,
        ln_absq,
        Some(target),
        cfg.prec_bits,
        cfg.max_terms,
    )?;
    Ok(ComplexValue {
        value,
        prec_bits: cfg.prec_bits,
        est_error,
    })
}

/// `e^{iwθ/2} g(e^{iθ})` for a standard series of weight `w`, as a real
/// number with its error. Rejects a residual imaginary part above
/// `tol · max(1, |value|)`.
fn real_factor(
    which: Standard,
    weight: i64,
    theta: f64,
    prec: u32,
    cfg: &EvalConfig,
) -> Result<(Float, f64), EvalError> {
    let v = eval_standard(which, Point::Arc { theta }, prec, cfg.max_terms)?;
    let half = Float::with_val(prec, theta) * weight / 2u32;
    let (s, c) = half.sin_cos(Float::new(prec));
    let phase = Complex::with_val(prec, (c, s));
    let z = Complex::with_val(prec, &v.value * &phase);
    let (re, im) = z.into_real_imag();
    let scale = re.to_f64().abs().max(1.0);
    let imag = im.to_f64();
    if imag.abs() > cfg.tol * scale {
        return Err(EvalError::ResidualImaginary {
            theta,
            imag,
            real: re.to_f64(),
        });
    }
    Ok((re, v.est_error))
}

/// `j(e^{iθ})`, real on the arc. Pinned to 1728 at `ARC_START` and to 0 at
/// `ARC_END`.
pub fn j_on_arc(theta: f64, cfg: &EvalConfig) -> Result<ArcValue, EvalError> {
    cfg.validate()?;
    let (value, est_error) = j_real(theta, cfg.prec_bits + 32, cfg)?;
    Ok(ArcValue {
        theta,
        value: Float::with_val(cfg.prec_bits, value),
        prec_bits: cfg.prec_bits,
        est_error: est_error + 1728.0 * 2f64.powi(-(cfg.prec_bits as i32)),
    })
}

fn j_real(theta: f64, prec: u32, cfg: &EvalConfig) -> Result<(Float, f64), EvalError> {
    Point::Arc { theta }.check()?;
    if theta == ARC_START {
        return Ok((Float::with_val(prec, 1728), 0.0));
    }
    if theta == ARC_END {
        return Ok((Float::new(prec), 0.0));
    }
    let (e4, e4_err) = real_factor(Standard::Eisenstein(4), 4, theta, prec, cfg)?;
    let (d, d_err) = real_factor(Standard::Delta, 12, theta, prec, cfg)?;
    let e4sq = Float::with_val(prec, e4.square_ref());
    let j = Float::with_val(prec, &e4sq * &e4) / &d;
    let df = d.to_f64().abs();
    let err = (3.0 * e4sq.to_f64() * e4_err + j.to_f64().abs() * d_err) / df;
    Ok((j, err))
}

/// `j(x + i·height)` as a complex number.
pub fn j_on_segment(x: f64, height: f64, cfg: &EvalConfig) -> Result<ComplexValue, EvalError> {
    cfg.validate()?;
    let prec = cfg.prec_bits;
    let at = Point::Segment { x, height };
    let e4 = eval_standard(Standard::Eisenstein(4), at, prec, cfg.max_terms)?;
    let d = eval_standard(Standard::Delta, at, prec, cfg.max_terms)?;
    let cube = Complex::with_val(prec, e4.value.square_ref()) * &e4.value;
    let value = cube / &d.value;
    let e4a = e4.abs().to_f64();
    let da = d.abs().to_f64();
    let ja = Float::with_val(prec, value.abs_ref()).to_f64();
    Ok(ComplexValue {
        value,
        prec_bits: prec,
        est_error: (3.0 * e4a * e4a * e4.est_error + ja * d.est_error) / da,
    })
}

/// `log2` of `Σ|c_i| 1728^i`, an upper bound for `|F|` on `[0, 1728]`.
fn poly_magnitude_bits(form: &BasisForm) -> u32 {
    let mut acc = Float::new(64);
    for c in form.poly().coeffs().iter().rev() {
        acc *= 1728u32;
        acc += Float::with_val(64, c).abs();
    }
    if acc <= 1 {
        0
    } else {
        acc.log2().to_f64().ceil() as u32
    }
}

/// Working precision used by [`real_trace`] for this form.
pub fn working_prec(form: &BasisForm, cfg: &EvalConfig) -> u32 {
    cfg.prec_bits + poly_magnitude_bits(form) + 64
}

/// `g(θ) = e^{ikθ/2} e^{-2πm sinθ} f_{k,m}(e^{iθ})` for `θ` strictly inside
/// the arc, assembled from real normalized factors.
pub fn real_trace(form: &BasisForm, theta: f64, cfg: &EvalConfig) -> Result<ArcValue, EvalError> {
    cfg.validate()?;
    if !(theta > ARC_START && theta < ARC_END) {
        return Err(EvalError::OutOfDomain {
            what: "theta",
            value: theta,
        });
    }
    let prec = working_prec(form, cfg);
    let ell = form.ell();
    let kp = form.kprime();
    let deg = form.degree();

    let (ek, ek_err) = if kp == 0 {
        (Float::with_val(prec, 1), 0.0)
    } else {
        real_factor(Standard::Eisenstein(kp), kp, theta, prec, cfg)?
    };

    let (dl, dl_err) = if ell == 0 {
        (Float::with_val(prec, 1), 0.0)
    } else {
        let (d, d_err) = real_factor(Standard::Delta, 12, theta, prec, cfg)?;
        let dl = Float::with_val(prec, (&d).pow(ell as i32));
        let rel = ell.unsigned_abs() as f64 * d_err / d.to_f64().abs();
        let err = dl.to_f64().abs() * rel;
        (dl, err)
    };

    let (fj, fj_err) = if deg == 0 {
        let c = Float::with_val(prec, &form.poly().coeffs()[0]);
        (c, 0.0)
    } else {
        let (j, j_err) = j_real(theta, prec, cfg)?;
        let (v, horner_err) = form.poly().eval_float(&j, prec);
        // |F'(j)| majorant for propagating the error in j
        let dpoly = form.poly().derivative();
        let mut dmag = Float::new(prec);
        let ja = Float::with_val(prec, j.abs_ref());
        for c in dpoly.coeffs().iter().rev() {
            dmag *= &ja;
            dmag += Float::with_val(prec, c).abs();
        }
        (v, horner_err.to_f64() + dmag.to_f64() * j_err)
    };

    let two_pi_m = Float::with_val(prec, Constant::Pi) * (2 * form.m);
    let s = Float::with_val(prec, theta).sin();
    let damp = (-(two_pi_m * s)).exp();

    let mut g = Float::with_val(prec, &dl * &ek);
    g *= &fj;
    g *= &damp;

    let (a, b, c, d) = (
        dl.to_f64().abs(),
        ek.to_f64().abs(),
        fj.to_f64().abs(),
        damp.to_f64(),
    );
    let ulp = 2f64.powi(-(prec.min(1000) as i32));
    let mut est = d * (b * c * dl_err + a * c * ek_err + a * b * fj_err) + a * b * c * d * 8.0 * ulp;
    let value = Float::with_val(cfg.prec_bits, &g);
    est += value.to_f64().abs() * 2f64.powi(1 - cfg.prec_bits as i32);
    if !est.is_finite() || est > cfg.tol {
        return Err(EvalError::InsufficientPrecision {
            prec_bits: cfg.prec_bits,
            est,
            tol: cfg.tol,
        });
    }
    Ok(ArcValue {
        theta,
        value,
        prec_bits: cfg.prec_bits,
        est_error: est,
    })
}

/// The same trace computed by direct summation of the form's own exact
/// expansion. Only practical for small forms; the expansion must hold
/// enough coefficients to reach `cfg.tol`.
pub fn real_trace_from_expansion(
    form: &BasisForm,
    theta: f64,
    cfg: &EvalConfig,
) -> Result<ArcValue, EvalError> {
    cfg.validate()?;
    if !(theta > ARC_START && theta < ARC_END) {
        return Err(EvalError::OutOfDomain {
            what: "theta",
            value: theta,
        });
    }
    let prec = cfg.prec_bits;
    let raw = eval_fixed(form.expansion(), Point::Arc { theta }, cfg)?;
    let t = Float::with_val(prec, theta);
    let half = Float::with_val(prec, &t * form.k()) / 2u32;
    let (s, c) = half.sin_cos(Float::new(prec));
    let two_pi_m = Float::with_val(prec, Constant::Pi) * (2 * form.m);
    let damp = (-(two_pi_m * t.sin())).exp();
    let phase = Complex::with_val(prec, (c * &damp, s * &damp));
    let z = Complex::with_val(prec, &raw.value * &phase);
    let (re, im) = z.into_real_imag();
    let est = raw.est_error * damp.to_f64();
    let scale = re.to_f64().abs().max(1.0);
    if im.to_f64().abs() > (cfg.tol + est) * scale {
        return Err(EvalError::ResidualImaginary {
            theta,
            imag: im.to_f64(),
            real: re.to_f64(),
        });
    }
    Ok(ArcValue {
        theta,
        value: re,
        prec_bits: prec,
        est_error: est,
    })
}
