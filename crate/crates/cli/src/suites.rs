//! Verification suites shared by `mzl verify` and the acceptance harness.

use std::f64::consts::FRAC_PI_2;

use mzl_core::arceval::EvalConfig;
use mzl_core::basis::split_weight;
use mzl_core::bounds::{
    inequality_threshold, verify_delta_constants, BoundReport, BoundsError, Inequality, Interval, ResidueChecker,
    DEFAULT_X_GRID, INTERVAL_ONE_HI,
};
use mzl_core::models::{
    check_cosine_interlacing, check_max_gap, check_residue_shift, check_zero_drift, ModelCheck, ModelError, Variant,
    ARC_HI, RESIDUE_LO,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_DRAWS: usize = 200;
pub const THRESHOLD_K_MAX: i64 = 600;
/// `(k, m)` pairs the residue inequalities are sampled on.
pub const RESIDUE_PAIRS: [(i64, i64); 5] = [(52, 0), (100, 0), (148, 0), (0, 5), (0, 10)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Constants,
    Thresholds,
    Residue,
    Models,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Constants => "constants",
            Suite::Thresholds => "thresholds",
            Suite::Residue => "residue",
            Suite::Models => "models",
            Suite::All => "all",
        }
    }
}

/// The three sampled `Δ` constants; each report's params carry the
/// relative margin against the asserted constant.
pub fn constants(grid: usize, cfg: &EvalConfig) -> Result<Vec<BoundReport>, BoundsError> {
    let d = verify_delta_constants(grid, cfg)?;
    let margins = d.margins();
    let mut out = vec![d.arc_max, d.segment_min, d.quotient];
    for (r, m) in out.iter_mut().zip(margins) {
        r.params.insert("relative_margin".into(), m);
    }
    // height .65 values feed the second-interval constant; recorded only
    out[2].params.insert("segment_min_height_065".into(), d.segment_min_two);
    out[2].params.insert("quotient_height_065".into(), d.quotient_two);
    Ok(out)
}

/// One report per named threshold inequality: `lhs` is the largest
/// failing weight in `[4, k_max]` (0 if none), `rhs` the claimed onset.
pub fn thresholds(k_max: i64) -> Vec<BoundReport> {
    Inequality::ALL
        .iter()
        .map(|ineq| {
            let t = inequality_threshold(*ineq, k_max);
            let last_fail = t.failures.last().copied().unwrap_or(0);
            let onset = ineq.claimed_onset();
            let min_rel = (onset..=k_max)
                .filter_map(|k| ineq.report(k))
                .map(|r| r.relative_slack())
                .fold(f64::INFINITY, f64::min);
            let min_abs = (onset..=k_max)
                .filter_map(|k| ineq.report(k))
                .map(|r| r.slack())
                .fold(f64::INFINITY, f64::min);
            BoundReport::new(
                format!("threshold: {}", ineq.name()),
                &[
                    ("k_max", k_max as f64),
                    ("observed_onset", t.onset.map_or(f64::NAN, |k| k as f64)),
                    ("tested", t.tested as f64),
                    ("min_relative_slack", min_rel),
                    ("min_slack", min_abs),
                ],
                last_fail as f64,
                onset as f64,
            )
            .with_claim(format!("holds for all applicable k in [{onset}, {k_max}]"))
        })
        .collect()
}

/// `n` angles in `(π/2, 1.9]`, ending at 1.9.
pub fn interval_one_grid(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| FRAC_PI_2 + (INTERVAL_ONE_HI - FRAC_PI_2) * i as f64 / n as f64)
        .collect()
}

/// `n` angles in `[7π/12, 2π/3)`, starting at `7π/12`.
pub fn interval_two_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| RESIDUE_LO + (ARC_HI - RESIDUE_LO) * i as f64 / n as f64)
        .collect()
}

/// Residue inequalities on `thetas` angles per interval for every pair:
/// one report per `(k, m, interval)` with `lhs = max |LHS|/RHS` against 1,
/// plus the 1.985 cap for `m = 0`.
pub fn residue(pairs: &[(i64, i64)], thetas: usize, cfg: &EvalConfig) -> Result<Vec<BoundReport>, BoundsError> {
    let mut rc = ResidueChecker::new(*cfg, DEFAULT_X_GRID)?;
    let mut out = Vec::new();
    for &(k, m) in pairs {
        for (interval, grid) in [
            (Interval::One, interval_one_grid(thetas)),
            (Interval::Two, interval_two_grid(thetas)),
        ] {
            let mut worst = (0.0f64, f64::NAN);
            for &t in &grid {
                let r = rc.check(k, m, t, interval)?;
                let ratio = r.bound.lhs / r.bound.rhs;
                if !(ratio <= worst.0) {
                    worst = (ratio, t);
                }
            }
            let name = match interval {
                Interval::One => "residue inequality, interval one",
                Interval::Two => "residue inequality, interval two",
            };
            out.push(BoundReport::new(
                name,
                &[
                    ("k", k as f64),
                    ("m", m as f64),
                    ("samples", grid.len() as f64),
                    ("worst_theta", worst.1),
                ],
                worst.0,
                1.0,
            ));
            if m == 0 && interval == Interval::One {
                let mut cap = 0.0f64;
                for &t in &grid {
                    cap = cap.max(rc.check_trace_cap(k, t)?.lhs);
                }
                out.push(
                    BoundReport::new("gap trace cap", &[("k", k as f64)], cap, 1.985)
                        .with_claim("|g - 2cos(k theta/2)| < 1.985"),
                );
            }
        }
    }
    Ok(out)
}

/// Random `(k, m)` with `m >= |ℓ| − ℓ`: even `k` in `[-24, 240]`.
pub fn draw_pairs(seed: u64, n: usize) -> Vec<(i64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let k = 2 * rng.gen_range(-12i64..=120);
            let ell = split_weight(k).expect("even").ell;
            (k, ell.abs() - ell + rng.gen_range(0i64..=20))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelsSuite {
    pub draws: Vec<(i64, i64)>,
    pub reports: Vec<BoundReport>,
    /// One line per failing check.
    pub failures: Vec<String>,
}

/// Cosine-model properties on random draws and the residue shift on every
/// even `k` in `[50, 300]`. Each report counts failing checks against 1.
pub fn models(seed: u64, draws: usize) -> Result<ModelsSuite, ModelError> {
    let pairs = draw_pairs(seed, draws);
    let mut groups: Vec<(&str, Vec<ModelCheck>)> = vec![
        ("cosine interlacing", Vec::new()),
        ("maximal gap", Vec::new()),
        ("zero drift", Vec::new()),
        ("residue shift", Vec::new()),
    ];
    for &(k, m) in &pairs {
        for v in [Variant::KPlus12, Variant::MPlus1] {
            groups[0].1.push(check_cosine_interlacing(k, m, v)?);
            if v == Variant::MPlus1 || k >= 0 {
                groups[2].1.push(check_zero_drift(k, m, v)?);
            }
        }
        groups[1].1.push(check_max_gap(k, m)?);
    }
    for k in (50..=300).step_by(2) {
        groups[3].1.push(check_residue_shift(k)?);
    }
    let mut failures = Vec::new();
    let mut reports = Vec::new();
    for (name, checks) in &groups {
        let bad: Vec<&ModelCheck> = checks.iter().filter(|c| !c.pass).collect();
        for c in &bad {
            failures.push(format!("{} ({}, {}) {:?}: {}", c.name, c.k, c.m, c.variant, c.failures.join("; ")));
        }
        reports.push(BoundReport::new(
            format!("model property: {name}"),
            &[("checks", checks.len() as f64), ("seed", seed as f64)],
            bad.len() as f64,
            1.0,
        ));
    }
    Ok(ModelsSuite {
        draws: pairs,
        reports,
        failures,
    })
}
