//! Interlacing scans over pairs of basis forms.

use std::collections::HashMap;

use mzl_core::arceval::{EvalConfig, ARC_END};
use mzl_core::basis::{construct, BasisError};
use mzl_core::zeros::{interlace_check, isolate_zeros_checked, ZeroError, ZeroSet};
use thiserror::Error;

use crate::range::ParamRange;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Zeros(#[from] ZeroError),
}

/// Which neighbour each form is compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `f_{k,m}` against `f_{k+12,m}`.
    Weight,
    /// `f_{k,m}` against `f_{k,m+1}`.
    Index,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Weight => "weight",
            Mode::Index => "index",
        }
    }

    pub fn successor(self, (k, m): (i64, i64)) -> (i64, i64) {
        match self {
            Mode::Weight => (k + 12, m),
            Mode::Index => (k, m + 1),
        }
    }
}

/// Ordered by `(k, m)` of the first form.
pub fn pairs(mode: Mode, ks: &ParamRange, ms: &ParamRange) -> Vec<((i64, i64), (i64, i64))> {
    let mut out = Vec::new();
    for k in ks.iter() {
        for m in ms.iter() {
            out.push(((k, m), mode.successor((k, m))));
        }
    }
    out
}

/// Both isolation routes per form, computed once.
pub struct ZeroCache {
    cfg: EvalConfig,
    sets: HashMap<(i64, i64), Result<(ZeroSet, ZeroSet), ScanError>>,
}

impl ZeroCache {
    pub fn new(cfg: EvalConfig) -> Self {
        ZeroCache {
            cfg,
            sets: HashMap::new(),
        }
    }

    pub fn config(&self) -> &EvalConfig {
        &self.cfg
    }

    /// `(poly, scan)` zero sets of `f_{k,m}`; errors if the two routes
    /// disagree.
    pub fn checked(&mut self, k: i64, m: i64) -> Result<&(ZeroSet, ZeroSet), ScanError> {
        let cfg = self.cfg;
        self.sets
            .entry((k, m))
            .or_insert_with(|| {
                let form = construct(k, m)?;
                Ok(isolate_zeros_checked(&form, &cfg)?)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PairStatus {
    Pass,
    Fail(String),
    Error(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairOutcome {
    pub first: (i64, i64),
    pub second: (i64, i64),
    pub counts: (usize, usize),
    pub max_radius: Option<f64>,
    pub status: PairStatus,
}

/// Interlacing of the polynomial-route zeros of two forms on
/// `(π/2, 2π/3 − ε)`; `ε = 0` uses the whole open arc.
pub fn interlace_pair(cache: &mut ZeroCache, a: (i64, i64), b: (i64, i64), epsilon: f64) -> PairOutcome {
    let mut out = PairOutcome {
        first: a,
        second: b,
        counts: (0, 0),
        max_radius: None,
        status: PairStatus::Pass,
    };
    let restrict = |s: &ZeroSet| -> Result<ZeroSet, ScanError> {
        if epsilon > 0.0 {
            Ok(s.restrict_upper(ARC_END - epsilon)?)
        } else {
            Ok(s.clone())
        }
    };
    let sets = cache
        .checked(a.0, a.1)
        .and_then(|s| restrict(&s.0))
        .and_then(|za| Ok((za, restrict(&cache.checked(b.0, b.1)?.0)?)));
    let (za, zb) = match sets {
        Ok(s) => s,
        Err(e) => {
            out.status = PairStatus::Error(e.to_string());
            return out;
        }
    };
    out.counts = (za.len(), zb.len());
    out.max_radius = Some(za.max_radius().max(zb.max_radius()));
    out.status = match interlace_check(&za, &zb) {
        Ok(v) if v.ok => PairStatus::Pass,
        Ok(v) => PairStatus::Fail(match v.witness {
            Some(w) => format!(
                "zeros {} and {} of {:?} have no zero of the other form between them",
                w.first, w.second, w.side
            ),
            None => "alternation fails".into(),
        }),
        Err(e) => PairStatus::Error(e.to_string()),
    };
    out
}
