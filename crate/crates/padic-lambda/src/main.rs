//! Batch CLI over the library: every analysis as a subcommand with exact
//! rational inputs and JSON/CSV output.
//!
//! Exit codes: 2 bad arguments, 3 regime violation / pole, 4 zero
//! partition (no measure), 5 precision exhausted, 6 enumeration guard,
//! 1 anything else.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;
use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

use padic_lambda::dynamics::{RationalMap, SearchWindow};
use padic_lambda::error::Error;
use padic_lambda::gibbs::{
    self, BoundaryField, InteractionSpec, ModelParams,
};
use padic_lambda::padic::{PAdic, DEFAULT_PRECISION};
use padic_lambda::residue::kth_roots_of_minus_one_mod_p;
use padic_lambda::subshift;

const PRECISION_ENV: &str = "PADIC_LAMBDA_PRECISION";

#[derive(Parser)]
#[command(
    name = "padic-lambda",
    about = "p-adic dynamics and generalized p-adic quasi Gibbs measures on Cayley trees",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Significant base-p digits carried by the arithmetic
    /// (env PADIC_LAMBDA_PRECISION overrides the default 64).
    #[arg(long)]
    precision: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Seed for any sampled verification.
    #[arg(long, default_value = "0")]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapChoice {
    Ising,
    Lambda,
}

#[derive(Subcommand)]
enum Command {
    /// p-adic norm and canonical expansion of an exact rational.
    Norm {
        #[arg(long)]
        p: u64,
        /// Exact rational "m/n" (or integer "m").
        #[arg(long)]
        value: String,
        #[command(flatten)]
        common: Common,
    },
    /// k-th roots of -1 mod p, the Sol_p set, and Q_p existence.
    Roots {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Fixed points of the Ising-Potts map or a lambda-table TI map.
    Fixpoints {
        #[arg(long, value_enum, default_value = "ising")]
        map: MapChoice,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        rho: String,
        /// Ising coupling N (map = ising).
        #[arg(long = "N")]
        coupling: Option<i64>,
        /// Interaction table "l11,l1m,lm1,lmm" (map = lambda).
        #[arg(long)]
        lambda: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Iterate the Ising-Potts map from a rational start point.
    Orbit {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        rho: String,
        #[arg(long = "N", default_value = "1")]
        coupling: i64,
        #[arg(long)]
        start: String,
        #[arg(long, default_value = "32")]
        steps: usize,
        /// Stop when within p^-tol of a fixed point.
        #[arg(long, default_value = "16")]
        tol: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Build the Ising repeller, verify scaling, and check the conjugacy
    /// witness for m = 1..3.
    Subshift {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        rho: String,
        #[arg(long = "N", default_value = "1")]
        coupling: i64,
        #[arg(long, default_value = "64")]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Census of translation-invariant generalized p-adic Gibbs measures.
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u8,
        #[arg(long)]
        rho: String,
        #[arg(long = "N")]
        coupling: Option<i64>,
        /// Interaction table "l11,l1m,lm1,lmm" (k = 2 analysis).
        #[arg(long)]
        lambda: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Check the Kolmogorov compatibility condition at depth n.
    Compat {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u8,
        #[arg(long)]
        rho: String,
        #[arg(long = "N", default_value = "1")]
        coupling: i64,
        /// Tree depth (checks levels n-1 against n).
        #[arg(long, default_value = "2")]
        n: u32,
        /// Explicit rational field "m/n"; default: every TI census field.
        #[arg(long)]
        h: Option<String>,
        /// Also check the perturbed field h + p (a counterexample witness).
        #[arg(long)]
        perturb: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Boundedness classification with the valuation profile.
    Bounded {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u8,
        #[arg(long)]
        rho: String,
        #[arg(long = "N", default_value = "1")]
        coupling: i64,
        /// Explicit rational field "m/n"; default: every TI census field.
        #[arg(long)]
        h: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Level-periodic boundary fields from m-cycles of the Ising-Potts map.
    Periodic {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u8,
        #[arg(long)]
        rho: String,
        #[arg(long = "N", default_value = "1")]
        coupling: i64,
        #[arg(long, default_value = "2")]
        m: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let parts: Vec<&str> = s.split('/').collect();
    let make = |t: &str| {
        BigInt::from_str(t.trim())
            .map_err(|_| Error::BadParameter(format!("not an integer: {t}")))
    };
    match parts.as_slice() {
        [num] => Ok(BigRational::from_integer(make(num)?)),
        [num, den] => {
            let d = make(den)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(make(num)?, d))
        }
        _ => Err(Error::BadParameter(format!("not a rational m/n: {s}"))),
    }
}

fn parse_lambda(s: &str) -> Result<[i64; 4], Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::BadParameter(
            "lambda table must be l11,l1m,lm1,lmm".into(),
        ));
    }
    let mut out = [0i64; 4];
    for (i, t) in parts.iter().enumerate() {
        out[i] = t
            .trim()
            .parse()
            .map_err(|_| Error::BadParameter(format!("not an integer: {t}")))?;
    }
    Ok(out)
}

fn precision_of(common: &Common) -> usize {
    common
        .precision
        .or_else(|| {
            std::env::var(PRECISION_ENV)
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_PRECISION)
}

fn emit(common: &Common, text: String) -> Result<(), Error> {
    match &common.output {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| Error::BadParameter(format!("cannot open output: {e}")))?;
            writeln!(f, "{text}").map_err(|e| Error::BadParameter(format!("write failed: {e}")))
        }
    }
}

fn emit_json<T: Serialize>(common: &Common, value: &T) -> Result<(), Error> {
    if common.format == Format::Csv {
        return Err(Error::BadParameter(
            "csv output is only available for `bounded`".into(),
        ));
    }
    emit(
        common,
        serde_json::to_string_pretty(value).expect("serializable"),
    )
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NotPrime(_)
        | Error::BadParameter(_)
        | Error::DivisionByZero
        | Error::OutOfDomain(_)
        | Error::NotSimpleRoot { .. }
        | Error::NotRootModP { .. }
        | Error::NotFixed { .. }
        | Error::IdenticalPrefix => 2,
        Error::RegimeViolation(_) | Error::PoleHit => 3,
        Error::ZeroPartition | Error::BadField(_) => 4,
        Error::PrecisionExhausted(_) => 5,
        Error::EnumerationGuard(_) => 6,
    }
}

fn norm_json(x: &PAdic) -> serde_json::Value {
    match x.valuation() {
        None => json!({ "exponent": null, "norm": "0" }),
        Some(v) => json!({ "exponent": v, "norm": x.norm().render(x.prime()) }),
    }
}

fn ti_fields(params: &ModelParams) -> Result<Vec<PAdic>, Error> {
    Ok(gibbs::hm_periodic_fields(params, 1)?
        .into_iter()
        .map(|f| match f {
            BoundaryField::TranslationInvariant { h } => h,
            BoundaryField::LevelPeriodic { .. } => unreachable!("m = 1"),
        })
        .collect())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Norm { p, value, common } => {
            let prec = precision_of(&common);
            let q = parse_rational(&value)?;
            let x = PAdic::from_rational(&q, p, prec)?;
            let report = json!({
                "prime": p,
                "input": value,
                "literal": x.literal(),
                "valuation": x.valuation(),
                "norm": norm_json(&x),
                "digits": x.digits(),
                "precision": prec,
            });
            emit_json(&common, &report)
        }
        Command::Roots { p, k, common } => {
            let report = kth_roots_of_minus_one_mod_p(p, k)?;
            emit_json(&common, &report)
        }
        Command::Fixpoints {
            map,
            p,
            k,
            rho,
            coupling,
            lambda,
            common,
        } => {
            let prec = precision_of(&common);
            let rho = parse_rational(&rho)?;
            let map = match map {
                MapChoice::Ising => {
                    let n = coupling.ok_or_else(|| {
                        Error::BadParameter("--N is required for the ising map".into())
                    })?;
                    RationalMap::ising_potts(p, k, &rho, n, prec)?
                }
                MapChoice::Lambda => {
                    let table = parse_lambda(&lambda.ok_or_else(|| {
                        Error::BadParameter("--lambda is required for the lambda map".into())
                    })?)?;
                    RationalMap::lambda_ti(p, k, &rho, table, prec)?
                }
            };
            let found = map.fixed_points(&SearchWindow::Auto)?;
            let report = json!({
                "prime": p,
                "k": k,
                "kind": map.kind,
                "warnings": map.warnings,
                "window": found.window,
                "fixed_points": found.reports.iter().map(|r| json!({
                    "point": r.point,
                    "literal": r.point.literal(),
                    "valuation": r.valuation,
                    "multiplier_norm": norm_json(&r.multiplier),
                    "class": r.class,
                    "in_unit_sphere": r.in_unit_sphere,
                    "in_ep": r.in_ep,
                })).collect::<Vec<_>>(),
                "inconclusive": found.inconclusive,
            });
            emit_json(&common, &report)
        }
        Command::Orbit {
            p,
            k,
            rho,
            coupling,
            start,
            steps,
            tol,
            common,
        } => {
            let prec = precision_of(&common);
            let rho = parse_rational(&rho)?;
            let map = RationalMap::ising_potts(p, k, &rho, coupling, prec)?;
            let x0 = PAdic::from_rational(&parse_rational(&start)?, p, prec)?;
            let targets: Vec<PAdic> = map
                .fixed_points(&SearchWindow::Auto)?
                .reports
                .into_iter()
                .map(|r| r.point)
                .collect();
            let trace = map.iterate_orbit(&x0, steps, tol, &targets);
            let report = json!({
                "start": trace.start.literal(),
                "steps": trace.iterates.len() - 1,
                "termination": trace.termination,
                "iterates": trace.iterates.iter().map(|x| x.literal()).collect::<Vec<_>>(),
                "norm_exponents": trace.iterates.iter().map(|x| x.valuation()).collect::<Vec<_>>(),
            });
            emit_json(&common, &report)
        }
        Command::Subshift {
            p,
            k,
            rho,
            coupling,
            samples,
            common,
        } => {
            let prec = precision_of(&common);
            let rho = parse_rational(&rho)?;
            let mut setup = subshift::build_ising_repeller(p, k, &rho, coupling, prec)?;
            setup.verify_scaling(samples, common.seed)?;
            let conjugacy = setup.verify_shift_conjugacy(3)?;
            let report = json!({
                "prime": p,
                "k": k,
                "balls": setup.balls.iter().map(|b| json!({
                    "center": b.center.literal(),
                    "radius_exponent": b.radius_exponent,
                })).collect::<Vec<_>>(),
                "scaling_exponents": setup.scaling_exponents,
                "repeller_class": setup.repeller_class,
                "scaling_verified": setup.scaling_verified,
                "scaling_witness": setup.scaling_witness,
                "seed": common.seed,
                "incidence": conjugacy.incidence,
                "conjugacy": conjugacy.rows,
            });
            emit_json(&common, &report)
        }
        Command::Census {
            p,
            k,
            rho,
            coupling,
            lambda,
            common,
        } => {
            let prec = precision_of(&common);
            let rho = parse_rational(&rho)?;
            match (coupling, lambda) {
                (Some(n), None) => {
                    let params = ModelParams::ising(p, k, rho, n, prec)?;
                    let census = gibbs::ti_census_ising(&params)?;
                    emit_json(&common, &census)
                }
                (None, Some(table)) => {
                    let spec = InteractionSpec::new(parse_lambda(&table)?);
                    let params = ModelParams::new(p, k, rho, spec, prec)?;
                    let analysis = gibbs::lambda_k2_analysis(&params)?;
                    emit_json(&common, &analysis)
                }
                _ => Err(Error::BadParameter(
                    "census needs exactly one of --N or --lambda".into(),
                )),
            }
        }
        Command::Compat {
            p,
            k,
            rho,
            coupling,
            n,
            h,
            perturb,
            common,
        } => {
            let prec = precision_of(&common);
            let rho = parse_rational(&rho)?;
            let params = ModelParams::ising(p, k, rho, coupling, prec)?;
            let fields: Vec<(String, PAdic)> = match h {
                Some(s) => {
                    let hv = PAdic::from_rational(&parse_rational(&s)?, p, prec)?;
                    vec![(format!("h = {s}"), hv)]
                }
                None => ti_fields(&params)?
                    .into_iter()
                    .enumerate()
                    .map(|(i, h)| (format!("census field {i}"), h))
                    .collect(),
            };
            let mut rows = Vec::new();
            for (label, hv) in &fields {
                let rep = gibbs::check_compatibility(
                    &params,
                    n,
                    &BoundaryField::ti(hv.clone()),
                )?;
                rows.push(json!({ "field": label, "report": rep }));
                if perturb {
                    let shifted = hv
                        .add(&PAdic::from_integer(p as i64, p, prec)?)?;
                    let rep = gibbs::check_compatibility(
                        &params,
                        n,
                        &BoundaryField::ti(shifted),
                    )?;
                    rows.push(json!({ "field": format!("{label} + p"), "report": rep }));
                }
            }
            emit_json(&common, &json!({ "n": n, "checks": rows }))
        }
        Command::Bounded {
            p,
            k,
            rho,
            coupling,
            h,
            common,
        } => {
            let prec = precision_of(&common);
            let rho = parse_rational(&rho)?;
            let params = ModelParams::ising(p, k, rho, coupling, prec)?;
            let fields: Vec<(String, PAdic)> = match h {
                Some(s) => {
                    let hv = PAdic::from_rational(&parse_rational(&s)?, p, prec)?;
                    vec![(format!("h = {s}"), hv)]
                }
                None => ti_fields(&params)?
                    .into_iter()
                    .enumerate()
                    .map(|(i, h)| (format!("census field {i}"), h))
                    .collect(),
            };
            let mut reports = Vec::new();
            for (label, hv) in &fields {
                reports.push((label.clone(), gibbs::boundedness_classify(&params, hv)?));
            }
            if common.format == Format::Csv {
                let mut text = String::from("field,n,valuation_of_measure_norm\n");
                for (label, rep) in &reports {
                    for (i, e) in rep.profile.exponents.iter().enumerate() {
                        // the profile stores norm exponents; the measure-norm
                        // valuation is the negative
                        text.push_str(&format!("{label},{},{}\n", i + 1, -e));
                    }
                }
                emit(&common, text.trim_end().to_string())
            } else {
                let rows: Vec<_> = reports
                    .iter()
                    .map(|(label, rep)| json!({ "field": label, "report": rep }))
                    .collect();
                emit_json(&common, &json!({ "classifications": rows }))
            }
        }
        Command::Periodic {
            p,
            k,
            rho,
            coupling,
            m,
            common,
        } => {
            let prec = precision_of(&common);
            let rho = parse_rational(&rho)?;
            let params = ModelParams::ising(p, k, rho, coupling, prec)?;
            let fields = gibbs::hm_periodic_fields(&params, m)?;
            let report = json!({
                "m": m,
                "count": fields.len(),
                "fields": fields.iter().map(|f| match f {
                    BoundaryField::TranslationInvariant { h } => json!({
                        "kind": "translation_invariant",
                        "h": h.literal(),
                    }),
                    BoundaryField::LevelPeriodic { cycle } => json!({
                        "kind": "level_periodic",
                        "cycle": cycle.iter().map(|h| h.literal()).collect::<Vec<_>>(),
                    }),
                }).collect::<Vec<_>>(),
            });
            emit_json(&common, &report)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
