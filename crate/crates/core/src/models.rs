//! Trigonometric surrogates for the real trace and checks of their zero
//! geometry.
//!
//! `b(θ) = kθ/2 − 2πm cosθ`; `2cos(b(θ))` approximates the trace away from
//! `ρ`, and `H_k(θ) = 2cos(kθ/2) + (2cos(θ/2))^{-k}` approximates `G_k` near
//! `ρ`. All zero finding is f64 bisection to `1e-15`.

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

use crate::basis::split_weight;

pub const ARC_LO: f64 = FRAC_PI_2;
pub const ARC_HI: f64 = 2.0 * PI / 3.0;
/// Left end of the window where the residue model is used.
pub const RESIDUE_LO: f64 = 7.0 * PI / 12.0;

const ROOT_TOL: f64 = 1e-15;
/// Zeros of the two cosine models closer than this count as shared.
pub const SHARED_ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("f_{{{k},{m}}}: need m >= |ℓ| - ℓ = {need}")]
    Hypothesis { k: i64, m: i64, need: i64 },
    #[error("weight-shift comparison needs k >= 0, got {0}")]
    NegativeWeight(i64),
    #[error("residue model needs even k >= 4, got {0}")]
    ResidueWeight(i64),
    #[error("odd weight {0}")]
    OddWeight(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Base,
    KPlus12,
    MPlus1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CosModel {
    pub k: i64,
    pub m: i64,
    pub variant: Variant,
}

impl CosModel {
    pub fn new(k: i64, m: i64, variant: Variant) -> Self {
        CosModel { k, m, variant }
    }

    /// `(k, m)` after applying the variant.
    pub fn effective(&self) -> (i64, i64) {
        match self.variant {
            Variant::Base => (self.k, self.m),
            Variant::KPlus12 => (self.k + 12, self.m),
            Variant::MPlus1 => (self.k, self.m + 1),
        }
    }

    pub fn phase(&self, theta: f64) -> f64 {
        let (k, m) = self.effective();
        k as f64 * theta / 2.0 - 2.0 * PI * m as f64 * theta.cos()
    }

    pub fn phase_derivative(&self, theta: f64) -> f64 {
        let (k, m) = self.effective();
        k as f64 / 2.0 + 2.0 * PI * m as f64 * theta.sin()
    }

    pub fn value(&self, theta: f64) -> f64 {
        2.0 * self.phase(theta).cos()
    }

    /// `b(π/2)/π = k/4` and `b(2π/3)/π = k/3 + m`, exactly.
    fn phase_range_over_pi(&self) -> (f64, f64) {
        let (k, m) = self.effective();
        (k as f64 / 4.0, k as f64 / 3.0 + m as f64)
    }
}

/// `m >= |ℓ| − ℓ` for the weight `k`.
pub fn check_hypothesis(k: i64, m: i64) -> Result<(), ModelError> {
    let ell = split_weight(k).map_err(|_| ModelError::OddWeight(k))?.ell;
    let need = ell.abs() - ell;
    if m < need {
        return Err(ModelError::Hypothesis { k, m, need });
    }
    Ok(())
}

/// Solves `f(θ) = target` for increasing `f` on `[lo, hi]`.
fn solve_increasing<F: Fn(f64) -> f64>(f: F, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Zeros of `cos(b(θ))` in the open arc: solutions of `b(θ) = tπ` for the
/// half-integers `t` strictly between `b(π/2)/π` and `b(2π/3)/π`.
pub fn cos_model_zeros(model: &CosModel) -> Result<Vec<f64>, ModelError> {
    check_hypothesis(model.k, model.m)?;
    let (lo, hi) = model.phase_range_over_pi();
    // smallest half-integer > lo, as 2t odd
    let mut two_t = (2.0 * lo).floor() as i64 + 1;
    if two_t % 2 == 0 {
        two_t += 1;
    }
    let mut out = Vec::new();
    while (two_t as f64) < 2.0 * hi {
        let target = two_t as f64 * PI / 2.0;
        out.push(solve_increasing(|t| model.phase(t), target, ARC_LO, ARC_HI));
        two_t += 2;
    }
    Ok(out)
}

/// Outcome of a model check: overall verdict plus one line per violated
/// condition.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelCheck {
    pub name: &'static str,
    pub k: i64,
    pub m: i64,
    pub variant: Variant,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl ModelCheck {
    fn new(name: &'static str, k: i64, m: i64, variant: Variant, failures: Vec<String>) -> Self {
        ModelCheck {
            name,
            k,
            m,
            variant,
            pass: failures.is_empty(),
            failures,
        }
    }
}

fn shifted(k: i64, m: i64, variant: Variant) -> (CosModel, CosModel) {
    (CosModel::new(k, m, Variant::Base), CosModel::new(k, m, variant))
}

/// The four sufficient conditions for the zeros of `cos(b)` and `cos(b_*)`
/// to interlace: both end zeros belong to `b_*`, no zero is shared, and
/// exactly one zero of `cos(b)` sits between consecutive zeros of `cos(b_*)`.
pub fn check_cosine_interlacing(k: i64, m: i64, variant: Variant) -> Result<ModelCheck, ModelError> {
    assert!(variant != Variant::Base, "compare against a shifted variant");
    let (base, star) = shifted(k, m, variant);
    let a = cos_model_zeros(&star)?;
    let b = cos_model_zeros(&base)?;
    let mut fails = Vec::new();
    if a.len() != b.len() + 1 {
        fails.push(format!("b_* has {} zeros, b has {}", a.len(), b.len()));
    }
    if let (Some(&fa), Some(&fb)) = (a.first(), b.first()) {
        if fb <= fa {
            fails.push(format!("first zero {fb} belongs to b"));
        }
    }
    if let (Some(&la), Some(&lb)) = (a.last(), b.last()) {
        if lb >= la {
            fails.push(format!("last zero {lb} belongs to b"));
        }
    }
    for &x in &b {
        if let Some(&y) = a.iter().find(|&&y| (x - y).abs() <= SHARED_ZERO_TOL) {
            fails.push(format!("shared zero near {x} / {y}"));
        }
    }
    for w in a.windows(2) {
        let n = b.iter().filter(|&&x| x > w[0] && x < w[1]).count();
        if n != 1 {
            fails.push(format!("{n} zeros of b in ({}, {})", w[0], w[1]));
        }
    }
    Ok(ModelCheck::new("cosine interlacing", k, m, variant, fails))
}

/// Upper bound `2π/(k + 2√3mπ)` on the gap between consecutive zeros.
pub fn max_gap_bound(k: i64, m: i64) -> Result<f64, ModelError> {
    check_hypothesis(k, m)?;
    Ok(2.0 * PI / (k as f64 + 2.0 * 3f64.sqrt() * m as f64 * PI))
}

/// Every consecutive gap of the zeros of `cos(b)` against [`max_gap_bound`],
/// allowing for the bisection error of the two endpoints.
pub fn check_max_gap(k: i64, m: i64) -> Result<ModelCheck, ModelError> {
    let bound = max_gap_bound(k, m)?;
    let z = cos_model_zeros(&CosModel::new(k, m, Variant::Base))?;
    let fails = z
        .windows(2)
        .filter(|w| w[1] - w[0] > bound + 2.0 * ROOT_TOL)
        .map(|w| format!("gap {} > {bound} at {}", w[1] - w[0], w[0]))
        .collect();
    Ok(ModelCheck::new("maximal gap", k, m, Variant::Base, fails))
}

/// For consecutive `α₁ < β₁ < α₂ < β₂ < α₃` (α from `b_*`, β from `b`):
/// `β₁ − α₁ < β₂ − α₂` and `α₂ − β₁ > α₃ − β₂`. Vacuous with fewer than
/// three zeros of `b_*`.
pub fn check_zero_drift(k: i64, m: i64, variant: Variant) -> Result<ModelCheck, ModelError> {
    assert!(variant != Variant::Base, "compare against a shifted variant");
    if variant == Variant::KPlus12 && k < 0 {
        return Err(ModelError::NegativeWeight(k));
    }
    let (base, star) = shifted(k, m, variant);
    let a = cos_model_zeros(&star)?;
    let b = cos_model_zeros(&base)?;
    let mut fails = Vec::new();
    for (i, w) in a.windows(3).enumerate() {
        let (a1, a2, a3) = (w[0], w[1], w[2]);
        let b1 = b.iter().copied().find(|&x| x > a1 && x < a2);
        let b2 = b.iter().copied().find(|&x| x > a2 && x < a3);
        let (Some(b1), Some(b2)) = (b1, b2) else {
            fails.push(format!("triple {i}: missing interleaved zero"));
            continue;
        };
        if !(b1 - a1 < b2 - a2) {
            fails.push(format!("triple {i}: left offsets {} >= {}", b1 - a1, b2 - a2));
        }
        if !(a2 - b1 > a3 - b2) {
            fails.push(format!("triple {i}: right offsets {} <= {}", a2 - b1, a3 - b2));
        }
    }
    Ok(ModelCheck::new("zero drift", k, m, variant, fails))
}

/// `H_k(θ) = 2cos(kθ/2) + (2cos(θ/2))^{-k}`.
pub fn residue_model(k: i64, theta: f64) -> f64 {
    2.0 * (k as f64 * theta / 2.0).cos() + (2.0 * (theta / 2.0).cos()).powf(-(k as f64))
}

/// Zeros of `H_k` in `[7π/12, 2π/3)`: sign scan at spacing `π/(4k)` then
/// bisection. The scan stops a quarter step short of `2π/3`, where `H_k`
/// vanishes for `k ≢ 0 mod 3`.
pub fn residue_model_zeros(k: i64) -> Result<Vec<f64>, ModelError> {
    if k < 4 || k % 2 != 0 {
        return Err(ModelError::ResidueWeight(k));
    }
    let h = PI / (4.0 * k as f64);
    let end = ARC_HI - h / 4.0;
    let mut grid: Vec<f64> = (0..)
        .map(|i| RESIDUE_LO + i as f64 * h)
        .take_while(|&t| t < end)
        .collect();
    grid.push(end);
    let mut out = Vec::new();
    for w in grid.windows(2) {
        let (fa, fb) = (residue_model(k, w[0]), residue_model(k, w[1]));
        if fa == 0.0 {
            out.push(w[0]);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            let (mut lo, mut hi) = (w[0], w[1]);
            while hi - lo > ROOT_TOL {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if residue_model(k, mid).signum() == fa.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
    }
    Ok(out)
}

/// Zeros `(2n+1)π/k` of `2cos(kθ/2)` in `[lo, hi)`.
pub fn cosine_zeros_in(k: i64, lo: f64, hi: f64) -> Vec<f64> {
    let kf = k as f64;
    let n0 = ((lo * kf / PI - 1.0) / 2.0).ceil().max(0.0) as i64;
    (n0..)
        .map(|n| (2 * n + 1) as f64 * PI / kf)
        .skip_while(|&t| t < lo)
        .take_while(|&t| t < hi)
        .collect()
}

/// Pairs each zero of `H_k` with the nearest zero of `2cos(kθ/2)` and
/// checks the distance against `π/(3k)`.
pub fn check_residue_shift(k: i64) -> Result<ModelCheck, ModelError> {
    let zs = residue_model_zeros(k)?;
    let cz = cosine_zeros_in(k, RESIDUE_LO - PI / k as f64, ARC_HI + PI / k as f64);
    let bound = PI / (3.0 * k as f64);
    let mut fails = Vec::new();
    for &a in &zs {
        let nearest = cz
            .iter()
            .copied()
            .min_by(|x, y| (x - a).abs().partial_cmp(&(y - a).abs()).unwrap());
        match nearest {
            Some(c) if (a - c).abs() < bound => {}
            Some(c) => fails.push(format!("zero {a} is {} from {c}", (a - c).abs())),
            None => fails.push(format!("zero {a} has no cosine partner")),
        }
    }
    // A cosine zero without an interior partner must be absorbed by the
    // corner zero of H_k at 2π/3 (present iff 3 ∤ k).
    for &c in cz.iter().filter(|&&c| (RESIDUE_LO..ARC_HI).contains(&c)) {
        if zs.iter().any(|&a| (a - c).abs() < bound) {
            continue;
        }
        let corner = k % 3 != 0 && ARC_HI - c <= bound * (1.0 + 1e-12);
        // a partner just left of the window edge sits outside the scan
        let left_edge = c - RESIDUE_LO < bound && {
            let (a, b) = (residue_model(k, c - bound), residue_model(k, (c + bound).min(ARC_HI)));
            a.signum() != b.signum()
        };
        if !corner && !left_edge {
            fails.push(format!("cosine zero {c} unmatched"));
        }
    }
    Ok(ModelCheck::new("residue shift", k, 0, Variant::Base, fails))
}

/// `L(θ) = kπ/4 + (k + 4mπ)/2 · (θ − π/2)`, the tangent line of `b` at `π/2`.
pub fn linear_model(k: i64, m: i64, theta: f64) -> f64 {
    k as f64 * PI / 4.0 + (k as f64 + 4.0 * m as f64 * PI) / 2.0 * (theta - FRAC_PI_2)
}

/// `L(θ) − b(θ)`; zero when `m = 0`.
pub fn linear_remainder(k: i64, m: i64, theta: f64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    linear_model(k, m, theta) - CosModel::new(k, m, Variant::Base).phase(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rug::ops::Pow;

    fn valid_pair() -> impl Strategy<Value = (i64, i64)> {
        (-10i64..=60, 0i64..=12).prop_map(|(h, extra)| {
            let k = 2 * h;
            let ell = split_weight(k).unwrap().ell;
            (k, ell.abs() - ell + extra)
        })
    }

    #[test]
    fn phase_endpoints() {
        let b = CosModel::new(20, 3, Variant::Base);
        assert!((b.phase(ARC_LO) - 5.0 * PI).abs() < 1e-12);
        let s = CosModel::new(20, 3, Variant::KPlus12);
        assert!((s.phase(ARC_LO) - 3.0 * PI - 5.0 * PI).abs() < 1e-12);
        let lin = CosModel::new(20, 0, Variant::Base);
        assert!((lin.phase(1.7) - 17.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_zeros() {
        let z = cos_model_zeros(&CosModel::new(12, 0, Variant::Base)).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0] - 7.0 * PI / 12.0).abs() < 1e-14);
        assert!(cos_model_zeros(&CosModel::new(4, 0, Variant::Base)).unwrap().is_empty());
    }

    #[test]
    fn index_only_zeros_match_bisection_oracle() {
        // cos(10π cosθ) = 0 ⇔ cosθ = -(2n+1)/20, closed form via acos
        let z = cos_model_zeros(&CosModel::new(0, 5, Variant::Base)).unwrap();
        let expected: Vec<f64> = (0..)
            .map(|n| (-(2 * n + 1) as f64 / 20.0).acos())
            .take_while(|&t| t < ARC_HI)
            .collect();
        assert_eq!(z.len(), expected.len());
        for (a, b) in z.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn lemma_examples() {
        assert!(check_cosine_interlacing(24, 0, Variant::KPlus12).unwrap().pass);
        assert!(check_cosine_interlacing(0, 3, Variant::MPlus1).unwrap().pass);
        assert!(matches!(
            check_cosine_interlacing(2, 0, Variant::MPlus1),
            Err(ModelError::Hypothesis { need: 2, .. })
        ));
    }

    #[test]
    fn gap_examples() {
        assert!((max_gap_bound(12, 0).unwrap() - PI / 6.0).abs() < 1e-15);
        assert!((max_gap_bound(0, 1).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!(check_max_gap(60, 2).unwrap().pass);
    }

    #[test]
    fn drift_examples() {
        assert!(check_zero_drift(48, 0, Variant::KPlus12).unwrap().pass);
        assert!(check_zero_drift(0, 6, Variant::MPlus1).unwrap().pass);
        let vacuous = check_zero_drift(4, 0, Variant::KPlus12).unwrap();
        assert!(vacuous.pass);
        assert!(matches!(
            check_zero_drift(-12, 4, Variant::KPlus12),
            Err(ModelError::NegativeWeight(-12))
        ));
    }

    #[test]
    fn residue_model_properties() {
        for k in [50, 60, 100, 108, 112, 300] {
            let r = check_residue_shift(k).unwrap();
            assert!(r.pass, "k = {k}: {:?}", r.failures);
            // H_k((2n+1)π/k) > 0, evaluated at 200 bits with exact π
            let n0 = cosine_zeros_in(k, RESIDUE_LO, ARC_HI).len();
            let first = ((RESIDUE_LO * k as f64 / PI - 1.0) / 2.0).ceil() as u32;
            for n in first..first + n0 as u32 {
                let pi = rug::Float::with_val(200, rug::float::Constant::Pi);
                let t = rug::Float::with_val(200, &pi * (2 * n + 1)) / k as u32;
                let cos_term = (rug::Float::with_val(200, &t * k as u32) / 2u32).cos() * 2u32;
                let half = rug::Float::with_val(200, &t / 2u32).cos() * 2u32;
                let h = cos_term + half.pow(-(k as i32));
                assert!(h > 0, "k = {k}, n = {n}");
            }
        }
        let a = residue_model_zeros(100).unwrap();
        let b = residue_model_zeros(112).unwrap();
        let merged = {
            let mut v: Vec<(f64, bool)> = a.iter().map(|&x| (x, false)).chain(b.iter().map(|&x| (x, true))).collect();
            v.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            v
        };
        assert!(merged.windows(2).all(|w| w[0].1 != w[1].1));
        assert!(residue_model_zeros(2).is_err());
    }

    #[test]
    fn linear_model_examples() {
        assert!((linear_model(40, 3, ARC_LO) - 10.0 * PI).abs() < 1e-12);
        assert_eq!(linear_remainder(40, 0, 1.8), 0.0);
        let mut last = 0.0;
        for i in 1..=100 {
            let t = ARC_LO + (ARC_HI - ARC_LO) * i as f64 / 100.0;
            let r = linear_remainder(10, 4, t);
            assert!(r > 0.0 && r > last);
            last = r;
        }
    }

    proptest! {
        #[test]
        fn sandwich_and_derivatives((k, m) in valid_pair(), i in 1usize..1000) {
            let t = ARC_LO + (ARC_HI - ARC_LO) * i as f64 / 1000.0;
            let b = CosModel::new(k, m, Variant::Base);
            let kp = CosModel::new(k, m, Variant::KPlus12);
            let mp = CosModel::new(k, m, Variant::MPlus1);
            prop_assert!(b.phase(t) < kp.phase(t) - 3.0 * PI);
            prop_assert!(kp.phase(t) - 3.0 * PI < b.phase(t) + PI);
            prop_assert!(b.phase(t) < mp.phase(t));
            prop_assert!(mp.phase(t) < b.phase(t) + PI);
            prop_assert!(b.phase_derivative(t) < kp.phase_derivative(t));
            prop_assert!(b.phase_derivative(t) < mp.phase_derivative(t));
        }

        #[test]
        fn endpoint_identities((k, m) in valid_pair()) {
            let b = CosModel::new(k, m, Variant::Base).phase(ARC_HI);
            let kp = CosModel::new(k, m, Variant::KPlus12).phase(ARC_HI);
            let mp = CosModel::new(k, m, Variant::MPlus1).phase(ARC_HI);
            let scale = b.abs().max(1.0);
            prop_assert!((kp - 3.0 * PI - (b + PI)).abs() < 1e-12 * scale);
            prop_assert!((mp - (b + PI)).abs() < 1e-12 * scale);
        }

        #[test]
        fn variants_add_one_zero((k, m) in valid_pair()) {
            let n = cos_model_zeros(&CosModel::new(k, m, Variant::Base)).unwrap().len();
            for v in [Variant::KPlus12, Variant::MPlus1] {
                prop_assert_eq!(cos_model_zeros(&CosModel::new(k, m, v)).unwrap().len(), n + 1);
            }
        }

        #[test]
        fn model_checks_pass((k, m) in valid_pair()) {
            prop_assert!(check_cosine_interlacing(k, m, Variant::MPlus1).unwrap().pass);
            prop_assert!(check_cosine_interlacing(k, m, Variant::KPlus12).unwrap().pass);
            prop_assert!(check_max_gap(k, m).unwrap().pass);
            prop_assert!(check_zero_drift(k, m, Variant::MPlus1).unwrap().pass);
            if k >= 0 {
                prop_assert!(check_zero_drift(k, m, Variant::KPlus12).unwrap().pass);
            }
        }
    }
}
