//! Versioned JSON documents emitted by every command.

use std::collections::BTreeMap;

use mzl_core::bounds::BoundReport;
use rug::Rational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("malformed rational {0:?}")]
    Syntax(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Strict `[-]digits[/digits]`.
pub fn parse_rational(s: &str) -> Result<Rational, RationalError> {
    let body = s.strip_prefix('-').unwrap_or(s);
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    if !is_digits(num) || den.is_some_and(|d| !is_digits(d)) {
        return Err(RationalError::Syntax(s.to_string()));
    }
    if den.is_some_and(|d| d.bytes().all(|b| b == b'0')) {
        return Err(RationalError::ZeroDenominator(s.to_string()));
    }
    s.parse::<Rational>().map_err(|_| RationalError::Syntax(s.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub command_line: Vec<String>,
    pub prec_bits: u32,
    pub tol: f64,
    pub max_terms: usize,
    pub grids: BTreeMap<String, u64>,
    pub tool_version: String,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub exp: i64,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisDoc {
    pub schema: u32,
    pub k: i64,
    pub m: i64,
    pub ell: i64,
    pub kprime: i64,
    pub coefficients: Vec<Coefficient>,
    /// `F` coefficients, constant term first.
    pub poly: Vec<String>,
    pub poly_integral: bool,
    pub metadata: RunMetadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZerosDoc {
    pub schema: u32,
    pub k: i64,
    pub m: i64,
    pub ell: i64,
    pub kprime: i64,
    pub zeros_theta: Vec<f64>,
    pub radii: Vec<f64>,
    /// Zero orders at `i` and `ρ`, as rationals.
    pub endpoint_i: String,
    pub endpoint_rho: String,
    pub method: String,
    /// `ok`, or `mismatch` when the two isolation routes disagree (the
    /// polynomial route's data is kept).
    pub status: String,
    pub warnings: Vec<String>,
    pub metadata: RunMetadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub first: (i64, i64),
    pub second: (i64, i64),
    pub counts: (usize, usize),
    /// `pass`, `fail` or `error`.
    pub status: String,
    pub max_radius: Option<f64>,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterlaceDoc {
    pub schema: u32,
    pub mode: String,
    pub epsilon: f64,
    pub pairs: Vec<PairVerdict>,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub metadata: RunMetadata,
}

/// A [`BoundReport`] with non-finite sides mapped to `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub holds: bool,
    pub claim: Option<String>,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl From<&BoundReport> for ReportDoc {
    fn from(r: &BoundReport) -> Self {
        ReportDoc {
            name: r.name.clone(),
            params: r.params.iter().filter(|(_, v)| v.is_finite()).map(|(k, v)| (k.clone(), *v)).collect(),
            lhs: finite(r.lhs),
            rhs: finite(r.rhs),
            holds: r.holds,
            claim: r.claim.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub schema: u32,
    pub suite: String,
    pub reports: Vec<ReportDoc>,
    pub all_hold: bool,
    pub metadata: RunMetadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Basis(BasisDoc),
    Zeros(ZerosDoc),
    Interlace(InterlaceDoc),
    Verify(VerifyDoc),
}

#[derive(Debug, Error)]
pub enum DocError {
    #[error("invalid JSON document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {0}")]
    Schema(u32),
    #[error("coefficient: {0}")]
    Rational(#[from] RationalError),
    #[error("{0}")]
    Inconsistent(String),
}

impl Document {
    pub fn schema(&self) -> u32 {
        match self {
            Document::Basis(d) => d.schema,
            Document::Zeros(d) => d.schema,
            Document::Interlace(d) => d.schema,
            Document::Verify(d) => d.schema,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    fn validate(&self) -> Result<(), DocError> {
        if self.schema() != SCHEMA {
            return Err(DocError::Schema(self.schema()));
        }
        match self {
            Document::Basis(d) => {
                for c in &d.coefficients {
                    parse_rational(&c.value)?;
                }
                for c in &d.poly {
                    parse_rational(c)?;
                }
            }
            Document::Zeros(d) => {
                parse_rational(&d.endpoint_i)?;
                parse_rational(&d.endpoint_rho)?;
                if d.zeros_theta.len() != d.radii.len() {
                    return Err(DocError::Inconsistent(format!(
                        "{} zeros but {} radii",
                        d.zeros_theta.len(),
                        d.radii.len()
                    )));
                }
            }
            Document::Interlace(_) | Document::Verify(_) => {}
        }
        Ok(())
    }
}

/// Parses and validates a document: schema version, rational strings and
/// parallel-array lengths.
pub fn decode_document(s: &str) -> Result<Document, DocError> {
    let d: Document = serde_json::from_str(s)?;
    d.validate()?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> RunMetadata {
        RunMetadata {
            command_line: vec!["mzl".into(), "zeros".into()],
            prec_bits: 256,
            tol: 1e-30,
            max_terms: 400,
            grids: BTreeMap::new(),
            tool_version: "0.1.0".into(),
            wall_time_s: 0.125,
        }
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), Rational::from((-1, 2)));
        assert_eq!(parse_rational("196560").unwrap(), 196560);
        for bad in ["", "-", "1/", "/2", "1/-2", "1.5", " 1", "1/2/3", "+1", "0x10"] {
            assert!(matches!(parse_rational(bad), Err(RationalError::Syntax(_))), "{bad}");
        }
        assert!(matches!(parse_rational("1/000"), Err(RationalError::ZeroDenominator(_))));
    }

    #[test]
    fn zeros_roundtrip() {
        let d = Document::Zeros(ZerosDoc {
            schema: SCHEMA,
            k: 12,
            m: 0,
            ell: 1,
            kprime: 0,
            zeros_theta: vec![1.8117295527079577],
            radii: vec![3.1e-15],
            endpoint_i: "0".into(),
            endpoint_rho: "0".into(),
            method: "poly-isolation".into(),
            status: "ok".into(),
            warnings: vec![],
            metadata: meta(),
        });
        let s = d.to_json();
        let back = decode_document(&s).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn decode_rejects() {
        let mut d = ZerosDoc {
            schema: 2,
            k: 4,
            m: 0,
            ell: 0,
            kprime: 4,
            zeros_theta: vec![],
            radii: vec![],
            endpoint_i: "0".into(),
            endpoint_rho: "1/3".into(),
            method: "poly-isolation".into(),
            status: "ok".into(),
            warnings: vec![],
            metadata: meta(),
        };
        let s = Document::Zeros(d.clone()).to_json();
        assert!(matches!(decode_document(&s), Err(DocError::Schema(2))));
        d.schema = 1;
        d.radii.push(0.1);
        let s = Document::Zeros(d.clone()).to_json();
        assert!(matches!(decode_document(&s), Err(DocError::Inconsistent(_))));
        d.radii.clear();
        d.endpoint_rho = "1/0".into();
        let s = Document::Zeros(d).to_json();
        assert!(matches!(decode_document(&s), Err(DocError::Rational(_))));
        assert!(matches!(decode_document("{\"kind\":\"nope\"}"), Err(DocError::Json(_))));
    }
}
