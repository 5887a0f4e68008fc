//! Plot data: the real trace against its models and the residue bounds on
//! a uniform grid over the open arc.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use mzl_core::arceval::{EvalConfig, ARC_END};
use mzl_core::bounds::{residue_term, BoundsError, Interval, ResidueChecker, DEFAULT_X_GRID};
use mzl_core::models::{CosModel, Variant};
use thiserror::Error;

pub const COLUMNS: [&str; 6] = [
    "theta",
    "g",
    "cos_model",
    "h_model",
    "rhs_bound_interval1",
    "rhs_bound_interval2",
];

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("need at least 2 samples, got {0}")]
    Samples(usize),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotRow {
    pub theta: f64,
    pub g: f64,
    pub cos_model: f64,
    /// `2cos(b) + residue term` on `[7π/12, 2π/3)`.
    pub h_model: Option<f64>,
    pub rhs_one: Option<f64>,
    pub rhs_two: Option<f64>,
}

/// `samples` angles strictly inside `(π/2, 2π/3)`, equally spaced.
pub fn plot_grid(samples: usize) -> Vec<f64> {
    let step = (ARC_END - FRAC_PI_2) / (samples + 1) as f64;
    (1..=samples).map(|i| FRAC_PI_2 + step * i as f64).collect()
}

pub fn plot_rows(k: i64, m: i64, samples: usize, cfg: &EvalConfig) -> Result<Vec<PlotRow>, PlotError> {
    if samples < 2 {
        return Err(PlotError::Samples(samples));
    }
    let mut rc = ResidueChecker::new(*cfg, DEFAULT_X_GRID)?;
    let model = CosModel::new(k, m, Variant::Base);
    let mut rows = Vec::with_capacity(samples);
    for theta in plot_grid(samples) {
        let g = rc.trace(k, m, theta)?.to_f64();
        let cos_model = model.value(theta);
        let in_two = Interval::Two.contains(theta);
        let rhs_one = if Interval::One.contains(theta) {
            Some(rc.rhs(k, m, theta, Interval::One)?.0)
        } else {
            None
        };
        let rhs_two = if in_two {
            Some(rc.rhs(k, m, theta, Interval::Two)?.0)
        } else {
            None
        };
        rows.push(PlotRow {
            theta,
            g,
            cos_model,
            h_model: in_two.then(|| cos_model + residue_term(k, m, theta)),
            rhs_one,
            rhs_two,
        });
    }
    Ok(rows)
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// Header plus one record per row; missing values are empty cells.
pub fn write_csv<W: Write>(rows: &[PlotRow], out: W) -> Result<(), PlotError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record([
            format!("{:e}", r.theta),
            format!("{:e}", r.g),
            format!("{:e}", r.cos_model),
            cell(r.h_model),
            cell(r.rhs_one),
            cell(r.rhs_two),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_blank_cells() {
        let rows = vec![PlotRow {
            theta: 1.6,
            g: 0.5,
            cos_model: 0.25,
            h_model: None,
            rhs_one: Some(1e-3),
            rhs_two: None,
        }];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next().unwrap(), COLUMNS.join(","));
        assert_eq!(lines.next().unwrap(), "1.6e0,5e-1,2.5e-1,,1e-3,");
    }

    #[test]
    fn grid_is_interior() {
        let g = plot_grid(5);
        assert_eq!(g.len(), 5);
        assert!(g[0] > FRAC_PI_2 && g[4] < ARC_END);
        assert!(matches!(plot_rows(12, 0, 1, &EvalConfig::default()), Err(PlotError::Samples(1))));
    }
}
