use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use dehnfill_core::bivar::{newton_polygon, validate_apoly};
use dehnfill_core::fill::{left_chain_slopes, specialize, FillingSlope};
use dehnfill_core::lab::{
    load_fixture, records_jsonl, run_survey, IntRange, Quadrant, SectorStrategy, SweepPlan,
};
use dehnfill_core::measure::{length, mahler_with, MeasureConfig, Method};
use dehnfill_core::rootmodel::{near_unit_threshold_stats, root_geometry, solve_model};
use dehnfill_core::zfactor::{cyclotomic_split, factor, UniIntPoly};

#[derive(Parser)]
#[command(
    name = "dehnfill",
    version,
    about = "Dehn-filling polynomials of A-polynomials"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Newton polygon, top slope and left chain of a fixture.
    Newton {
        #[arg(allow_hyphen_values = true)]
        fixture: String,
    },
    /// Structural A-polynomial checks.
    Validate {
        #[arg(allow_hyphen_values = true)]
        fixture: String,
    },
    /// The filling polynomial A(t^-q, t^p).
    Specialize {
        #[arg(allow_hyphen_values = true)]
        fixture: String,
        #[command(flatten)]
        pq: PqArgs,
        /// Raw Laurent coefficients (sign kept) instead of the normalized
        /// polynomial.
        #[arg(long)]
        raw: bool,
    },
    /// Exact factorization over the integers.
    Factor {
        /// Coefficient file, JSON array or polynomial such as `x^2 - 1`.
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// Compact JSON (the default).
        #[arg(long, conflicts_with = "pretty")]
        json: bool,
        /// Indented JSON.
        #[arg(long)]
        pretty: bool,
    },
    /// Mahler measure.
    Mahler {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value = "roots")]
        method: Method,
        /// Precision floor in bits (otherwise `DEHNFILL_BITS` or 53).
        #[arg(long)]
        bits: Option<usize>,
    },
    /// Root moduli of a filling polynomial.
    Roots {
        #[arg(allow_hyphen_values = true)]
        fixture: String,
        #[command(flatten)]
        pq: PqArgs,
        /// Also classify roots near the unit circle at this epsilon.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Solutions of z^q (1+z)^p = 1 with |1+z| > 1 and |z| < eps.
    Model {
        #[command(flatten)]
        pq: PqArgs,
        #[arg(long)]
        eps: f64,
    },
    /// Sweep a fixture over coprime (p, q).
    Survey(SurveyArgs),
}

#[derive(Args)]
struct PqArgs {
    #[arg(short = 'p', allow_negative_numbers = true)]
    p: i64,
    #[arg(short = 'q', allow_negative_numbers = true)]
    q: i64,
}

#[derive(Args)]
struct SurveyArgs {
    /// Fixture path or inline polynomial; may come from the config file.
    fixture: Option<String>,
    /// TOML or JSON plan; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "p", short = 'p', allow_hyphen_values = true)]
    p_range: Option<IntRange>,
    #[arg(long = "q", short = 'q', allow_hyphen_values = true)]
    q_range: Option<IntRange>,
    /// Basis-changed specialization below the top slope, with cross-check.
    #[arg(long)]
    sector_aware: bool,
    /// Comma-separated subset of ++,+-,-+,--.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    quadrants: Option<Vec<Quadrant>>,
    /// Keep non-coprime pairs; they are recorded as failed cells.
    #[arg(long)]
    all_pairs: bool,
    #[arg(long)]
    jobs: Option<usize>,
    /// Comma-separated epsilon grid.
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    #[arg(long)]
    bits: Option<usize>,
    /// Run even if the fixture fails validation.
    #[arg(long)]
    force: bool,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

fn emit<T: Serialize>(v: &T, pretty: bool) -> Result<()> {
    let s = if pretty {
        serde_json::to_string_pretty(v)?
    } else {
        serde_json::to_string(v)?
    };
    write_stdout(&(s + "\n"))
}

/// A closed pipe downstream (`| head`) is not an error.
fn write_stdout(s: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(s.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn read_poly(src: &str) -> Result<UniIntPoly> {
    let text = if std::path::Path::new(src).is_file() {
        std::fs::read_to_string(src).with_context(|| format!("reading {src}"))?
    } else {
        src.to_string()
    };
    Ok(UniIntPoly::parse(&text)?)
}

fn slope(pq: &PqArgs) -> Result<FillingSlope> {
    Ok(FillingSlope::new(pq.p, pq.q)?)
}

fn coeff_strings(p: &UniIntPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn build_plan(a: SurveyArgs) -> Result<SweepPlan> {
    let mut plan = match &a.config {
        Some(path) => SweepPlan::from_file(path)?,
        None => {
            let (Some(p), Some(q)) = (a.p_range, a.q_range) else {
                bail!("--p and --q are required without --config");
            };
            let Some(fx) = &a.fixture else {
                bail!("a fixture is required without --config");
            };
            SweepPlan::new(fx.clone(), p, q)
        }
    };
    if let Some(fx) = a.fixture {
        plan.fixture = fx;
    }
    if let Some(p) = a.p_range {
        plan.p_range = p;
    }
    if let Some(q) = a.q_range {
        plan.q_range = q;
    }
    if a.sector_aware {
        plan.sector = SectorStrategy::BasisChange;
    }
    if let Some(qs) = a.quadrants {
        plan.quadrants = qs;
    }
    if a.all_pairs {
        plan.coprime_only = false;
    }
    if let Some(j) = a.jobs {
        plan.jobs = j;
    }
    if let Some(e) = a.eps {
        plan.epsilons = e;
    }
    if a.bits.is_some() {
        plan.min_bits = a.bits;
    }
    if a.force {
        plan.force = true;
    }
    if a.output.is_some() {
        plan.output = a.output;
    }
    Ok(plan)
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Newton { fixture } => {
            let (name, f) = load_fixture(&fixture)?;
            let np = newton_polygon(&f);
            let chain: Vec<String> = left_chain_slopes(&np)
                .iter()
                .map(|s| s.to_string())
                .collect();
            emit(
                &json!({
                    "name": name,
                    "top_slope": np.top_slope.map(|s| s.to_string()),
                    "left_chain_slopes": chain,
                    "polygon": np,
                }),
                true,
            )
        }
        Cmd::Validate { fixture } => {
            let (_, f) = load_fixture(&fixture)?;
            emit(&validate_apoly(&f), true)
        }
        Cmd::Specialize { fixture, pq, raw } => {
            let (_, f) = load_fixture(&fixture)?;
            let fp = specialize(&f, slope(&pq)?)?;
            let coeffs = if raw {
                coeff_strings(&fp.poly.scale(&fp.sign.into()))
            } else {
                coeff_strings(&fp.poly)
            };
            emit(
                &json!({ "coeffs": coeffs, "t_shift": fp.t_shift, "collision": fp.collision }),
                false,
            )
        }
        Cmd::Factor {
            poly,
            json: _,
            pretty,
        } => {
            let fac = cyclotomic_split(factor(&read_poly(&poly)?)?);
            emit(&fac, pretty)
        }
        Cmd::Mahler { poly, method, bits } => {
            let f = read_poly(&poly)?;
            let mut cfg = MeasureConfig::from_env();
            if let Some(b) = bits {
                cfg.min_bits = b.clamp(53, cfg.max_bits);
            }
            let m = mahler_with(&f, method, &cfg)?;
            emit(
                &json!({
                    "value": m.value,
                    "abs_error": m.abs_error,
                    "method": m.method,
                    "length": length(&f).to_string(),
                }),
                false,
            )
        }
        Cmd::Roots { fixture, pq, eps } => {
            let (_, f) = load_fixture(&fixture)?;
            let fp = specialize(&f, slope(&pq)?)?;
            let geo = root_geometry(&fp)?;
            let mut out = serde_json::to_value(&geo)?;
            if let Some(e) = eps {
                let stats = near_unit_threshold_stats(&f, &geo, e)?;
                if let Value::Object(m) = &mut out {
                    m.insert("near_unit".into(), serde_json::to_value(stats)?);
                }
            }
            emit(&out, false)
        }
        Cmd::Model { pq, eps } => emit(&solve_model(pq.p, pq.q, eps)?, false),
        Cmd::Survey(args) => {
            let plan = build_plan(args)?;
            let records = run_survey(&plan)?;
            match &plan.output {
                Some(dir) => {
                    let count = |s: &str| {
                        records
                            .iter()
                            .filter(|r| {
                                serde_json::to_value(r.status)
                                    .ok()
                                    .as_ref()
                                    .and_then(Value::as_str)
                                    == Some(s)
                            })
                            .count()
                    };
                    emit(
                        &json!({
                            "cells": records.len(),
                            "ok": count("ok"),
                            "degenerate": count("degenerate"),
                            "error": count("error"),
                            "output": dir,
                        }),
                        false,
                    )
                }
                None => write_stdout(&records_jsonl(&records)?),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
