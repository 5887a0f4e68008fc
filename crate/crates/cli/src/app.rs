//! Argument parsing and command dispatch for the `mzl` binary.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use mzl_core::arceval::EvalConfig;
use mzl_core::basis::{construct_with_trunc, endpoint_orders, split_weight};
use mzl_core::bounds::{BoundReport, DEFAULT_X_GRID};
use mzl_core::models::check_hypothesis;
use mzl_core::zeros::{isolate_zeros, isolate_zeros_checked, Method, ZeroError, ZeroSet};
use thiserror::Error;

use crate::doc::{
    BasisDoc, Coefficient, Document, InterlaceDoc, PairVerdict, ReportDoc, RunMetadata, VerifyDoc, ZerosDoc, SCHEMA,
};
use crate::plot::{plot_rows, write_csv};
use crate::range::{parse_even_range, parse_int_range, ParamRange};
use crate::scan::{interlace_pair, pairs, Mode, PairStatus, ZeroCache};
use crate::suites::{self, Suite};

pub const PREC_ENV: &str = "MZL_PREC_BITS";

/// Stable exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    ClaimFailure = 1,
    Usage = 2,
    Numeric = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Usage(_) => Exit::Usage,
            CliError::Numeric(_) => Exit::Numeric,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn numeric(e: impl std::fmt::Display) -> CliError {
    CliError::Numeric(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "mzl", version, about = "Zeros of canonical modular-form bases on the unit arc")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Weight,
    Index,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Constants,
    Thresholds,
    Residue,
    Models,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact q-expansion of f_{k,m} and its polynomial F.
    Basis {
        #[arg(short, allow_negative_numbers = true)]
        k: i64,
        #[arg(short, allow_negative_numbers = true)]
        m: i64,
        /// Last exponent printed.
        #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
        terms: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Certified zeros of f_{k,m} on the open arc.
    Zeros {
        #[arg(short, allow_negative_numbers = true)]
        k: i64,
        #[arg(short, allow_negative_numbers = true)]
        m: i64,
        #[arg(long)]
        prec_bits: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Interlacing of consecutive forms over parameter ranges.
    Interlace {
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Even weight or inclusive even range `a..b`.
        #[arg(short, allow_hyphen_values = true)]
        k: String,
        /// Index or inclusive range `a..b`.
        #[arg(short, allow_hyphen_values = true)]
        m: String,
        /// Trim this much off the 2π/3 end of the arc.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long)]
        prec_bits: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate a suite of bounds and model properties.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        /// Sample count per Δ constant.
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        /// Angles per residue interval.
        #[arg(long, default_value_t = 50)]
        thetas: usize,
        #[arg(long, default_value_t = suites::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = suites::DEFAULT_DRAWS)]
        draws: usize,
        #[arg(long, default_value_t = suites::THRESHOLD_K_MAX)]
        k_max: i64,
        #[arg(long)]
        prec_bits: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// CSV of the real trace, its models and the residue bounds.
    Plot {
        #[arg(short, allow_negative_numbers = true)]
        k: i64,
        #[arg(short, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        prec_bits: Option<u32>,
    },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub warnings: Vec<String>,
    pub exit: Exit,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            warnings: Vec::new(),
            exit: Exit::Success,
        }
    }
}

/// Flag, then `MZL_PREC_BITS`, then the default.
pub fn resolve_config(flag: Option<u32>, env: Option<&str>) -> Result<EvalConfig, CliError> {
    let bits = match (flag, env) {
        (Some(b), _) => b,
        (None, Some(s)) => s
            .trim()
            .parse()
            .map_err(|_| usage(format!("{PREC_ENV}={s:?} is not a bit count")))?,
        (None, None) => EvalConfig::default().prec_bits,
    };
    if !(64..=65_536).contains(&bits) {
        return Err(usage(format!("precision {bits} outside [64, 65536]")));
    }
    let cfg = EvalConfig::with_prec(bits);
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

struct Ctx {
    args: Vec<String>,
    env_prec: Option<String>,
    start: Instant,
}

impl Ctx {
    fn config(&self, flag: Option<u32>) -> Result<EvalConfig, CliError> {
        resolve_config(flag, self.env_prec.as_deref())
    }

    fn metadata(&self, cfg: &EvalConfig, grids: &[(&str, u64)]) -> RunMetadata {
        RunMetadata {
            command_line: self.args.clone(),
            prec_bits: cfg.prec_bits,
            tol: cfg.tol,
            max_terms: cfg.max_terms,
            grids: grids.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s: self.start.elapsed().as_secs_f64(),
        }
    }
}

/// Runs a parsed command. `args` is echoed into the metadata; `env_prec`
/// is the value of `MZL_PREC_BITS`, if set.
pub fn run(cli: Cli, args: Vec<String>, env_prec: Option<String>) -> Result<Outcome, CliError> {
    let ctx = Ctx {
        args,
        env_prec,
        start: Instant::now(),
    };
    match cli.command {
        Command::Basis { k, m, terms, format } => cmd_basis(&ctx, k, m, terms, format),
        Command::Zeros { k, m, prec_bits, format } => cmd_zeros(&ctx, k, m, prec_bits, format),
        Command::Interlace {
            mode,
            k,
            m,
            epsilon,
            prec_bits,
            format,
        } => cmd_interlace(&ctx, mode, &k, &m, epsilon, prec_bits, format),
        Command::Verify {
            suite,
            grid,
            thetas,
            seed,
            draws,
            k_max,
            prec_bits,
            format,
        } => {
            let opts = VerifyOpts {
                grid,
                thetas,
                seed,
                draws,
                k_max,
            };
            cmd_verify(&ctx, suite, opts, prec_bits, format)
        }
        Command::Plot {
            k,
            m,
            samples,
            out,
            prec_bits,
        } => cmd_plot(&ctx, k, m, samples, &out, prec_bits),
    }
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
}

fn cmd_basis(ctx: &Ctx, k: i64, m: i64, terms: i64, format: Format) -> Result<Outcome, CliError> {
    if terms < -m {
        return Err(usage(format!("--terms {terms} is below the leading exponent {}", -m)));
    }
    let form = construct_with_trunc(k, m, terms).map_err(usage)?;
    let coefficients: Vec<Coefficient> = (-m..=terms)
        .map(|e| Coefficient {
            exp: e,
            value: form.expansion().coeff(e).expect("within truncation").to_string(),
        })
        .collect();
    let poly: Vec<String> = form.poly().coeffs().iter().map(|c| c.to_string()).collect();
    let stdout = match format {
        Format::Json => Document::Basis(BasisDoc {
            schema: SCHEMA,
            k,
            m,
            ell: form.ell(),
            kprime: form.kprime(),
            coefficients,
            poly,
            poly_integral: form.has_integer_polynomial(),
            metadata: ctx.metadata(&EvalConfig::default(), &[("terms", (terms + m + 1) as u64)]),
        })
        .to_json(),
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = coefficients
                .iter()
                .map(|c| vec!["q".into(), c.exp.to_string(), c.value.clone()])
                .collect();
            rows.extend(
                poly.iter()
                    .enumerate()
                    .map(|(i, c)| vec!["F".into(), i.to_string(), c.clone()]),
            );
            csv_string(&["series", "exp", "value"], &rows)
        }
        Format::Text => {
            let mut s = format!("f_{{{k},{m}}}  (ell = {}, k' = {})\n", form.ell(), form.kprime());
            for c in &coefficients {
                let _ = writeln!(s, "  q^{:<4} {}", c.exp, c.value);
            }
            let _ = writeln!(s, "F(x) = {}", form.poly());
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::PolyIsolation => "poly-isolation",
        Method::SignScan => "sign-scan",
    }
}

fn cmd_zeros(ctx: &Ctx, k: i64, m: i64, prec: Option<u32>, format: Format) -> Result<Outcome, CliError> {
    let cfg = ctx.config(prec)?;
    let split = split_weight(k).map_err(usage)?;
    let form = construct_with_trunc(k, m, 0).map_err(usage)?;
    let mut warnings = Vec::new();
    if let Err(e) = check_hypothesis(k, m) {
        warnings.push(format!(
            "{e}: F has degree {} but need not have all its roots in (0, 1728)",
            form.degree()
        ));
    }
    let (set, status): (ZeroSet, &str) = match isolate_zeros_checked(&form, &cfg) {
        Ok((poly, _)) => (poly, "ok"),
        Err(ZeroError::Mismatch { detail, .. }) => {
            warnings.push(format!("isolation routes disagree: {detail}"));
            (isolate_zeros(&form, &cfg).map_err(numeric)?, "mismatch")
        }
        Err(e) => return Err(numeric(e)),
    };
    if form.degree() > set.len() {
        warnings.push(format!("{} arc zeros for deg F = {}", set.len(), form.degree()));
    }
    let (ord_i, ord_rho) = endpoint_orders(&form);
    let stdout = match format {
        Format::Json => Document::Zeros(ZerosDoc {
            schema: SCHEMA,
            k,
            m,
            ell: split.ell,
            kprime: split.kprime,
            zeros_theta: set.thetas(),
            radii: set.zeros.iter().map(|z| z.radius).collect(),
            endpoint_i: ord_i.to_string(),
            endpoint_rho: ord_rho.to_string(),
            method: method_name(set.method).into(),
            status: status.into(),
            warnings: warnings.clone(),
            metadata: ctx.metadata(&cfg, &[]),
        })
        .to_json(),
        Format::Csv => {
            let rows: Vec<Vec<String>> = set
                .zeros
                .iter()
                .enumerate()
                .map(|(i, z)| vec![i.to_string(), format!("{:e}", z.theta), format!("{:e}", z.radius)])
                .collect();
            csv_string(&["index", "theta", "radius"], &rows)
        }
        Format::Text => {
            let mut s = format!(
                "f_{{{k},{m}}}: {} zeros on the open arc; order {ord_i} at i, {ord_rho} at rho ({status})\n",
                set.len()
            );
            for z in &set.zeros {
                let _ = writeln!(s, "  theta = {:.17} +- {:.1e}", z.theta, z.radius);
            }
            s
        }
    };
    Ok(Outcome {
        stdout,
        warnings,
        exit: if status == "ok" { Exit::Success } else { Exit::Numeric },
    })
}

fn cmd_interlace(
    ctx: &Ctx,
    mode: ModeArg,
    k: &str,
    m: &str,
    epsilon: f64,
    prec: Option<u32>,
    format: Format,
) -> Result<Outcome, CliError> {
    let cfg = ctx.config(prec)?;
    if !(0.0..PI / 6.0).contains(&epsilon) {
        return Err(usage(format!("epsilon {epsilon} outside [0, π/6)")));
    }
    let ks: ParamRange = parse_even_range(k).map_err(usage)?;
    let ms: ParamRange = parse_int_range(m).map_err(usage)?;
    let mode = match mode {
        ModeArg::Weight => Mode::Weight,
        ModeArg::Index => Mode::Index,
    };
    let mut cache = ZeroCache::new(cfg);
    let outcomes: Vec<_> = pairs(mode, &ks, &ms)
        .into_iter()
        .map(|(a, b)| interlace_pair(&mut cache, a, b, epsilon))
        .collect();
    let mut verdicts = Vec::new();
    let (mut passed, mut failed, mut errors) = (0, 0, 0);
    for o in &outcomes {
        let (status, detail) = match &o.status {
            PairStatus::Pass => {
                passed += 1;
                ("pass", None)
            }
            PairStatus::Fail(d) => {
                failed += 1;
                ("fail", Some(d.clone()))
            }
            PairStatus::Error(d) => {
                errors += 1;
                ("error", Some(d.clone()))
            }
        };
        verdicts.push(PairVerdict {
            first: o.first,
            second: o.second,
            counts: o.counts,
            status: status.into(),
            max_radius: o.max_radius,
            detail,
        });
    }
    let summary = format!(
        "{} pairs ({} mode, epsilon {epsilon}): {passed} pass, {failed} fail, {errors} error",
        verdicts.len(),
        mode.name()
    );
    let stdout = match format {
        Format::Json => Document::Interlace(InterlaceDoc {
            schema: SCHEMA,
            mode: mode.name().into(),
            epsilon,
            pairs: verdicts,
            passed,
            failed,
            errors,
            metadata: ctx.metadata(&cfg, &[]),
        })
        .to_json(),
        Format::Csv => {
            let rows: Vec<Vec<String>> = verdicts
                .iter()
                .map(|v| {
                    vec![
                        v.first.0.to_string(),
                        v.first.1.to_string(),
                        v.second.0.to_string(),
                        v.second.1.to_string(),
                        v.counts.0.to_string(),
                        v.counts.1.to_string(),
                        v.status.clone(),
                        v.max_radius.map(|r| format!("{r:e}")).unwrap_or_default(),
                    ]
                })
                .collect();
            csv_string(&["k1", "m1", "k2", "m2", "zeros1", "zeros2", "status", "max_radius"], &rows)
        }
        Format::Text => {
            let mut s = String::new();
            for v in &verdicts {
                let _ = write!(
                    s,
                    "({}, {}) vs ({}, {}): {} [{} / {} zeros]",
                    v.first.0, v.first.1, v.second.0, v.second.1, v.status, v.counts.0, v.counts.1
                );
                if let Some(d) = &v.detail {
                    let _ = write!(s, " {d}");
                }
                s.push('\n');
            }
            let _ = writeln!(s, "{summary}");
            s
        }
    };
    let exit = if errors > 0 {
        Exit::Numeric
    } else if failed > 0 {
        Exit::ClaimFailure
    } else {
        Exit::Success
    };
    Ok(Outcome {
        stdout,
        warnings: Vec::new(),
        exit,
    })
}

#[derive(Debug, Clone, Copy)]
struct VerifyOpts {
    grid: usize,
    thetas: usize,
    seed: u64,
    draws: usize,
    k_max: i64,
}

fn run_suite(suite: Suite, o: &VerifyOpts, cfg: &EvalConfig) -> Result<Vec<BoundReport>, CliError> {
    Ok(match suite {
        Suite::Constants => suites::constants(o.grid, cfg).map_err(numeric)?,
        Suite::Thresholds => suites::thresholds(o.k_max),
        Suite::Residue => suites::residue(&suites::RESIDUE_PAIRS, o.thetas, cfg).map_err(numeric)?,
        Suite::Models => suites::models(o.seed, o.draws).map_err(numeric)?.reports,
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::Constants, Suite::Thresholds, Suite::Residue, Suite::Models] {
                all.extend(run_suite(s, o, cfg)?);
            }
            all
        }
    })
}

fn cmd_verify(
    ctx: &Ctx,
    suite: SuiteArg,
    opts: VerifyOpts,
    prec: Option<u32>,
    format: Format,
) -> Result<Outcome, CliError> {
    let cfg = ctx.config(prec)?;
    if opts.grid < 2 || opts.thetas < 1 || opts.k_max < 4 {
        return Err(usage("--grid >= 2, --thetas >= 1 and --k-max >= 4 required"));
    }
    let suite = match suite {
        SuiteArg::Constants => Suite::Constants,
        SuiteArg::Thresholds => Suite::Thresholds,
        SuiteArg::Residue => Suite::Residue,
        SuiteArg::Models => Suite::Models,
        SuiteArg::All => Suite::All,
    };
    let reports = run_suite(suite, &opts, &cfg)?;
    let all_hold = reports.iter().all(|r| r.holds);
    let stdout = match format {
        Format::Json => Document::Verify(VerifyDoc {
            schema: SCHEMA,
            suite: suite.name().into(),
            reports: reports.iter().map(ReportDoc::from).collect(),
            all_hold,
            metadata: ctx.metadata(
                &cfg,
                &[
                    ("constants_grid", opts.grid as u64),
                    ("residue_thetas", opts.thetas as u64),
                    ("x_grid", DEFAULT_X_GRID as u64),
                    ("model_draws", opts.draws as u64),
                    ("seed", opts.seed),
                ],
            ),
        })
        .to_json(),
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        format!("{:e}", r.lhs),
                        format!("{:e}", r.rhs),
                        r.holds.to_string(),
                        r.claim.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            csv_string(&["name", "lhs", "rhs", "holds", "claim"], &rows)
        }
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(
                    s,
                    "[{}] {}: {:e} < {:e}  ({})",
                    if r.holds { "ok" } else { "FAILED" },
                    r.name,
                    r.lhs,
                    r.rhs,
                    params.join(", ")
                );
            }
            let _ = writeln!(
                s,
                "{}: {} of {} hold",
                suite.name(),
                reports.iter().filter(|r| r.holds).count(),
                reports.len()
            );
            s
        }
    };
    Ok(Outcome {
        stdout,
        warnings: Vec::new(),
        exit: if all_hold { Exit::Success } else { Exit::ClaimFailure },
    })
}

fn cmd_plot(
    ctx: &Ctx,
    k: i64,
    m: i64,
    samples: usize,
    out: &std::path::Path,
    prec: Option<u32>,
) -> Result<Outcome, CliError> {
    let cfg = ctx.config(prec)?;
    if samples < 2 {
        return Err(usage(format!("--samples {samples} < 2")));
    }
    construct_with_trunc(k, m, 0).map_err(usage)?;
    let file = std::fs::File::create(out).map_err(|e| usage(format!("{}: {e}", out.display())))?;
    let rows = plot_rows(k, m, samples, &cfg).map_err(numeric)?;
    write_csv(&rows, std::io::BufWriter::new(file)).map_err(|e| usage(format!("{}: {e}", out.display())))?;
    Ok(Outcome::ok(format!("wrote {} rows to {}\n", rows.len(), out.display())))
}
