//! Command-line front end: configuration I/O, analysis subcommands, and
//! deterministic JSON reports.
//!
//! Exit codes: 0 on success, 2 when the input fails validation (schema,
//! signature, preconditions), 3 when a computation gives up (optimizer,
//! quadrature, sampling budgets).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use conetheta::completion::{completed_theta_partial, e2, e2_centered_closed_form, E2Options, PlaneFrame};
use conetheta::cones::{compute_r_inf, enumerate_components};
use conetheta::incidence::{
    check_all, random_mixed_config, random_valid_config, ConeConfig, ConeConfigFile, GenMode,
};
use conetheta::matrix::RatMat;
use conetheta::quadform::{Lattice, QuadraticSpace};
use conetheta::rat::{rat_from_str, rat_to_string, sign, Rat};
use conetheta::signwalk::{
    evaluate_w, negative_regular_samples, path_constancy_check, wall_points, winding_count,
    ReferenceWeight,
};
use conetheta::theta::{divergence_witness_scan, theta_coefficients, theta_evaluate};
use conetheta::Error;

const EXIT_VALIDATION: u8 = 2;
const EXIT_COMPUTATIONAL: u8 = 3;

#[derive(Parser)]
#[command(name = "conetheta", version, about = "Indefinite theta series toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report rendering: canonical JSON or flattened text lines.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Exact incidence check of a configuration file.
    Check { input: PathBuf },
    /// Sign-component atlas and, for passing configurations, the
    /// convergence certificate.
    Cones {
        input: PathBuf,
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
    },
    /// Truncated q-expansion with evaluation at a point of the upper
    /// half plane.
    Theta {
        input: PathBuf,
        /// Largest exponent kept, as a rational like 13 or 81/8.
        #[arg(long, short = 'm')]
        truncation: String,
        /// Majorant-ball enumeration bound, as a rational.
        #[arg(long, short = 'b')]
        bound: String,
        #[arg(long, default_value_t = 0.0)]
        tau_re: f64,
        #[arg(long, default_value_t = 1.0)]
        tau_im: f64,
        /// Explicit weight baseline "a,b,c" (needed when the incidence
        /// check fails).
        #[arg(long)]
        reference_witness: Option<String>,
        /// Also compute partial sums of the completed series.
        #[arg(long)]
        completed: bool,
        /// Enumeration bound for the completed partial sums.
        #[arg(long, default_value = "4")]
        completed_bound: String,
    },
    /// Constancy, wall, and winding audits of the weight.
    Verify {
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 200)]
        wall_samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Divergence-witness scan paired with the third incidence verdict.
    Necessity {
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        radius: i64,
        #[arg(long)]
        reference_witness: Option<String>,
    },
    /// Smoothed sign product for one consecutive pair at a point.
    E2 {
        input: PathBuf,
        /// 1-based index j of the pair (C_j, C_{j+1}).
        #[arg(long, default_value_t = 1)]
        pair: usize,
        /// Evaluation point "a,b,c" with rational entries.
        #[arg(long, short = 'x')]
        x: String,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Generate a configuration file over diag(-1,-1,1,...,1).
    ConfigGen {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = GenModeArg::Planar)]
        mode: GenModeArg,
        /// Perturbation scale for the perturbed mode, as a rational.
        #[arg(long, default_value = "1/50")]
        scale: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenModeArg {
    Planar,
    Perturbed,
    /// First two conditions only; the third may fail.
    Mixed,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Optimizer(_)
        | Error::Quadrature(_)
        | Error::Budget(_)
        | Error::Audit(_)
        | Error::Generation { .. } => EXIT_COMPUTATIONAL,
        _ => EXIT_VALIDATION,
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_VALIDATION, message: message.into() }
}

struct Input {
    config: ConeConfig,
    lattice: Lattice,
    digest: String,
}

fn load(path: &PathBuf) -> Result<Input, Failure> {
    let bytes = fs::read(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    let digest = hex(&Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| invalid(format!("{} is not UTF-8", path.display())))?;
    let file = ConeConfigFile::parse(&text)?;
    Ok(Input { config: file.to_config()?, lattice: file.lattice()?, digest })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_rat(s: &str, what: &str) -> Result<Rat, Failure> {
    rat_from_str(s.trim()).map_err(|e| invalid(format!("bad {what} {s:?}: {e}")))
}

fn parse_vector(s: &str, dim: usize, what: &str) -> Result<Vec<Rat>, Failure> {
    let v: Vec<Rat> = s
        .split(',')
        .map(|p| parse_rat(p, what))
        .collect::<Result<_, _>>()?;
    if v.len() != dim {
        return Err(invalid(format!("{what} needs {dim} entries, got {}", v.len())));
    }
    Ok(v)
}

fn parse_reference(
    config: &ConeConfig,
    witness: &Option<String>,
) -> Result<Option<ReferenceWeight>, Failure> {
    match witness {
        None => Ok(None),
        Some(s) => {
            let v = parse_vector(s, config.dim(), "reference witness")?;
            Ok(Some(ReferenceWeight::explicit(config, v)?))
        }
    }
}

/// Exponent entries as [numerator, denominator, coefficient], numeric
/// when they fit in 64 bits and decimal strings otherwise.
fn coeff_rows(coeffs: &std::collections::BTreeMap<Rat, i64>) -> Vec<Value> {
    coeffs
        .iter()
        .map(|(m, &c)| {
            let num = m
                .numer()
                .to_i64()
                .map(Value::from)
                .unwrap_or_else(|| Value::from(m.numer().to_string()));
            let den = m
                .denom()
                .to_i64()
                .map(Value::from)
                .unwrap_or_else(|| Value::from(m.denom().to_string()));
            json!([num, den, c])
        })
        .collect()
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    match &cli.command {
        Command::Check { input } => {
            let inp = load(input)?;
            let report = check_all(&inp.config);
            Ok(json!({
                "input_digest": inp.digest,
                "n_vectors": inp.config.len(),
                "report": report,
            }))
        }
        Command::Cones { input, budget } => {
            let inp = load(input)?;
            let report = check_all(&inp.config);
            let atlas = enumerate_components(&inp.config, *budget)?;
            let certificate = if report.overall {
                Some(compute_r_inf(&inp.config)?)
            } else {
                None
            };
            Ok(json!({
                "input_digest": inp.digest,
                "budget": budget,
                "incidence_pass": report.overall,
                "atlas": atlas,
                "certificate": certificate,
                "certificate_note": if report.overall { Value::Null } else {
                    Value::from("skipped: configuration fails the incidence check")
                },
            }))
        }
        Command::Theta {
            input,
            truncation,
            bound,
            tau_re,
            tau_im,
            reference_witness,
            completed,
            completed_bound,
        } => {
            let inp = load(input)?;
            let m = parse_rat(truncation, "truncation")?;
            let b = parse_rat(bound, "bound")?;
            if *tau_im <= 0.0 {
                return Err(invalid("tau must lie in the upper half plane (tau-im > 0)"));
            }
            let reference = parse_reference(&inp.config, reference_witness)?;
            let expansion =
                theta_coefficients(&inp.config, &inp.lattice, &m, &b, reference.as_ref())?;
            let eval = theta_evaluate(&expansion, *tau_re, *tau_im)?;
            let completed_block = if *completed {
                let cb = parse_rat(completed_bound, "completed bound")?;
                let part = completed_theta_partial(
                    &inp.config,
                    &inp.lattice,
                    *tau_re,
                    *tau_im,
                    &cb,
                    &E2Options::default(),
                )?;
                json!({
                    "bound": rat_to_string(&cb),
                    "value": [part.value.re, part.value.im],
                    "value_doubled": [part.value_doubled.re, part.value_doubled.im],
                    "doubling_ratio": part.doubling_ratio,
                    "coplanar": part.coplanar,
                })
            } else {
                Value::Null
            };
            Ok(json!({
                "input_digest": inp.digest,
                "truncation": rat_to_string(&expansion.truncation),
                "bound": rat_to_string(&expansion.bound),
                "coeffs": coeff_rows(&expansion.coeffs),
                "completeness": expansion.completeness,
                "config_digest": expansion.config_digest,
                "dual_warning": expansion.dual_warning,
                "certificate": expansion.certificate,
                "tau": [tau_re, tau_im],
                "value_at_tau": [eval.value.re, eval.value.im],
                "tail_bound": eval.tail_bound,
                "completed": completed_block,
            }))
        }
        Command::Verify { input, samples, wall_samples, seed } => {
            let inp = load(input)?;
            let config = &inp.config;
            let n = config.len();

            let points = negative_regular_samples(config, *samples, *seed)?;
            let weights: std::collections::BTreeSet<i64> =
                points.iter().map(|x| evaluate_w(config, x)).collect();
            let constant = weights.len() == 1;

            let mut wall_product_failures = 0usize;
            for j in 0..n {
                for v in wall_points(config, j, *wall_samples, seed.wrapping_add(j as u64 + 1))? {
                    let sp = sign(&config.pairing(&v, (j + n - 1) % n));
                    let sn = sign(&config.pairing(&v, (j + 1) % n));
                    if sp * sn != -1 {
                        wall_product_failures += 1;
                    }
                }
            }

            let mut winding_failures = 0usize;
            for v in &points {
                let w = evaluate_w(config, v);
                let r = winding_count(config, v)?;
                if w != n as i64 - 4 * r {
                    winding_failures += 1;
                }
            }

            let path = match path_constancy_check(config, &points[..2.min(points.len())], 256) {
                Ok(outcome) => serde_json::to_value(outcome).unwrap(),
                Err(Error::PathEscapes(d)) => json!({"outcome": "skipped", "reason": d}),
                Err(e) => return Err(e.into()),
            };

            Ok(json!({
                "input_digest": inp.digest,
                "samples": samples,
                "wall_samples": wall_samples,
                "seed": seed,
                "weights_seen": weights,
                "constancy_pass": constant,
                "wall_product_failures": wall_product_failures,
                "winding_identity_failures": winding_failures,
                "path_audit": path,
                "overall_pass": constant && wall_product_failures == 0 && winding_failures == 0,
            }))
        }
        Command::Necessity { input, radius, reference_witness } => {
            let inp = load(input)?;
            let report = check_all(&inp.config);
            let reference = parse_reference(&inp.config, reference_witness)?;
            let witnesses =
                divergence_witness_scan(&inp.config, &inp.lattice, *radius, reference.as_ref())?;
            let i3_holds = report.i3.iter().all(|v| v.pass);
            Ok(json!({
                "input_digest": inp.digest,
                "radius": radius,
                "i3_holds": i3_holds,
                "i3_verdicts": report.i3,
                "witness_count": witnesses.len(),
                "witnesses": witnesses,
                // The third condition should hold exactly when no
                // negative-norm support exists in the box.
                "agreement": i3_holds == witnesses.is_empty(),
            }))
        }
        Command::E2 { input, pair, x, tolerance } => {
            let inp = load(input)?;
            let config = &inp.config;
            let n = config.len();
            if *pair < 1 || *pair > n {
                return Err(invalid(format!("pair index must be in 1..={n}")));
            }
            let j = *pair - 1;
            let point = parse_vector(x, config.dim(), "evaluation point")?;
            let frame = PlaneFrame::new(
                config.space(),
                &config.vectors()[j],
                &config.vectors()[(j + 1) % n],
            )?;
            let opts = E2Options { tolerance: *tolerance, ..E2Options::default() };
            let value = e2(&frame, &point, &opts)?;
            let p = frame.project_rat(&point);
            Ok(json!({
                "input_digest": inp.digest,
                "pair": pair,
                "tolerance": tolerance,
                "x": point.iter().map(rat_to_string).collect::<Vec<_>>(),
                "projection": [p[0], p[1]],
                "value": value.value,
                "error_estimate": value.error_estimate,
                "centered_closed_form": e2_centered_closed_form(&frame),
                "sign_product": sign(&config.pairing(&point, j))
                    * sign(&config.pairing(&point, (j + 1) % n)),
            }))
        }
        Command::ConfigGen { n, dim, mode, scale, seed } => {
            if *dim < 3 {
                return Err(invalid("dimension must be at least 3"));
            }
            let mut diag = vec![conetheta::rat::rat_int(-1); 2];
            diag.extend(std::iter::repeat(conetheta::rat::rat_int(1)).take(dim - 2));
            let space = QuadraticSpace::new_n2(RatMat::diagonal(&diag))?;
            let config = match mode {
                GenModeArg::Planar => random_valid_config(&space, *n, GenMode::Planar, *seed)?,
                GenModeArg::Perturbed => {
                    let s = parse_rat(scale, "scale")?;
                    random_valid_config(&space, *n, GenMode::Perturbed { scale: s }, *seed)?
                }
                GenModeArg::Mixed => random_mixed_config(&space, *n, *seed)?,
            };
            let file = ConeConfigFile::from_config(&config);
            let mut out = serde_json::to_value(&file).unwrap();
            // Extra metadata keys are ignored when the file is read back.
            out["generator"] = json!({
                "n": n,
                "dim": dim,
                "seed": seed,
                "mode": match mode {
                    GenModeArg::Planar => "planar",
                    GenModeArg::Perturbed => "perturbed",
                    GenModeArg::Mixed => "mixed",
                },
                "scale": if *mode == GenModeArg::Perturbed { Value::from(scale.clone()) } else { Value::Null },
                "incidence_pass": check_all(&config).overall,
            });
            Ok(out)
        }
    }
}

fn render_text(value: &Value, prefix: &str, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                render_text(v, &path, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                render_text(v, &format!("{prefix}[{i}]"), out);
            }
            if items.is_empty() {
                out.push_str(&format!("{prefix} = []\n"));
            }
        }
        other => out.push_str(&format!("{prefix} = {other}\n")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let rendered = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report).unwrap();
                    s.push('\n');
                    s
                }
                Format::Text => {
                    let mut s = String::new();
                    render_text(&report, "", &mut s);
                    s
                }
            };
            match &cli.output {
                Some(path) => {
                    if let Err(e) = fs::write(path, rendered) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(EXIT_COMPUTATIONAL);
                    }
                }
                None => print!("{rendered}"),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
