//! Command-line interface: quadratic-form, hermitian and unitary-involution
//! invariants plus the seeded check harness, with JSON or text output.
//!
//! Exit codes: 0 success, 1 computational precondition violation, 2 usage or
//! parse error, 3 check failures found.

use std::fmt::Display;
use std::path::Path;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use arason::arith::{Rat, SquareClass};
use arason::hermitian::{HermForm, SimilarityOutcome};
use arason::lab::{check, CheckName, GenConfig};
use arason::qform::QuadForm;
use arason::unitary::{
    classify_deg3, classify_deg4, classify_deg6, dec_deg8, e3_hyp, e3_td, f3, is_hyperbolic_deg6,
    orth_descent_rel, quad_ext_check, rank2_factor, rel_arason, symp_descent_e3, theta_lambda,
    Deg8Decomposition, UnitaryInv,
};

#[derive(Parser)]
#[command(
    name = "arason",
    version,
    about = "Exact invariants of quadratic forms over Q and unitary involutions over quadratic extensions"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Quadratic forms over Q.
    Qform {
        #[command(subcommand)]
        op: QformOp,
    },
    /// Hermitian forms over Q(sqrt(delta)).
    Herm {
        #[command(subcommand)]
        op: HermOp,
    },
    /// Unitary involutions on split algebras.
    Unitary {
        #[command(subcommand)]
        op: UnitaryOp,
    },
    /// Run a named randomized check.
    Check {
        /// Check name (for example order2, chasles, reciprocity).
        name: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 30)]
        height: u64,
    },
    /// Print the version.
    Version,
}

#[derive(Subcommand)]
enum QformOp {
    /// Dimension, signed discriminant, Hasse set and signature.
    Profile {
        q: String,
    },
    Isotropic {
        q: String,
    },
    Witt {
        q: String,
    },
    Isometric {
        q1: String,
        q2: String,
    },
    Similar {
        q1: String,
        q2: String,
    },
    E1 {
        q: String,
    },
    E2 {
        q: String,
    },
    E3 {
        q: String,
    },
}

#[derive(Subcommand)]
enum HermOp {
    /// Jacobson trace form.
    Trace {
        h: String,
    },
    /// Discriminant as a norm-class representative.
    Disc {
        h: String,
    },
    /// Brauer class of the discriminant algebra (even rank).
    Discalg {
        h: String,
    },
    Isometric {
        h1: String,
        h2: String,
    },
    Similar {
        h1: String,
        h2: String,
    },
    Hyperbolic {
        h: String,
    },
    /// Quadratic-extension invariant report.
    Quadext {
        h: String,
    },
}

#[derive(Subcommand)]
enum UnitaryOp {
    /// Relative Arason invariant of a pair with matching discriminant
    /// algebras.
    RelE3 { t0: String, t: String },
    /// Hyperbolic Arason invariant (even degree, split discriminant algebra).
    E3Hyp { t: String },
    /// Totally-decomposable Arason invariant (degree 8).
    E3Td { t: String },
    /// The f3 invariant (identically zero on split algebras).
    F3 { t0: String, t: String },
    /// Orthogonal sum theta_lambda of a pair.
    Theta {
        t0: String,
        t: String,
        lambda: String,
    },
    /// Split rank-2 factor <1,-lambda> (x) tau0 and its invariant.
    Rank2 { t0: String, lambda: String },
    /// Degree-3/4/6 classification by the relative invariant.
    Classify { t0: String, t: String },
    /// Degree-6 hyperbolicity by invariants.
    Hyp6 { t: String },
    /// Degree-8 total decomposability with witness slots.
    Dec8 { t: String },
    /// Two-path symplectic-descent comparison on quadratic forms.
    SympDescent {
        phi0: String,
        phi: String,
        a: String,
        delta: String,
    },
    /// Two-path orthogonal-descent comparison on quadratic forms.
    OrthDescent {
        q0: String,
        q: String,
        delta: String,
    },
}

enum CliError {
    Usage(String),
    Precondition(String),
}

impl From<arason::Error> for CliError {
    fn from(e: arason::Error) -> Self {
        CliError::Precondition(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Accept inline JSON or a path to a JSON file.
fn load_json(arg: &str) -> CliResult<Value> {
    let trimmed = arg.trim_start();
    let inline = trimmed.starts_with('{')
        || trimmed.starts_with('[')
        || trimmed.starts_with('-')
        || trimmed.chars().next().is_some_and(|c| c.is_ascii_digit());
    let text = if inline {
        arg.to_string()
    } else if Path::new(arg).exists() {
        std::fs::read_to_string(arg)
            .map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))?
    } else {
        return Err(CliError::Usage(format!(
            "no such file and not inline JSON: {arg}"
        )));
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("malformed JSON: {e}")))
}

fn parse_qform(arg: &str) -> CliResult<QuadForm> {
    let v = load_json(arg)?;
    let form: QuadForm = serde_json::from_value(v)
        .map_err(|e| CliError::Usage(format!("invalid quadratic form: {e}")))?;
    Ok(form)
}

fn parse_herm(arg: &str) -> CliResult<HermForm> {
    let v = load_json(arg)?;
    let delta = v
        .get("delta")
        .and_then(Value::as_i64)
        .ok_or_else(|| CliError::Usage("hermitian form needs an integer \"delta\"".into()))?;
    let diag: Vec<i64> = serde_json::from_value(
        v.get("diag")
            .cloned()
            .ok_or_else(|| CliError::Usage("missing \"diag\"".into()))?,
    )
    .map_err(|e| CliError::Usage(format!("invalid diag: {e}")))?;
    Ok(HermForm::from_ints(delta, &diag)?)
}

fn parse_unitary(arg: &str) -> CliResult<UnitaryInv> {
    let v = load_json(arg)?;
    let h = parse_herm(arg)?;
    if let Some(deg) = v.get("degree").and_then(Value::as_i64) {
        if deg as usize != h.rank() {
            return Err(CliError::Usage(format!(
                "degree {deg} does not match diagonal length {}",
                h.rank()
            )));
        }
    }
    Ok(UnitaryInv::new(h)?)
}

/// Scalars accept an integer, "p/q", or JSON number.
fn parse_rat(arg: &str) -> CliResult<Rat> {
    let s = arg.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| bad_rat(s))?;
        let d: i64 = den.trim().parse().map_err(|_| bad_rat(s))?;
        if d == 0 {
            return Err(bad_rat(s));
        }
        return Ok(arason::arith::rat(n, d));
    }
    let n: i64 = s.parse().map_err(|_| bad_rat(s))?;
    Ok(arason::arith::rat_int(n))
}

fn bad_rat(s: &str) -> CliError {
    CliError::Usage(format!(
        "expected an integer or \"p/q\" rational, got {s:?}"
    ))
}

fn parse_class(arg: &str) -> CliResult<SquareClass> {
    Ok(SquareClass::from_rat(&parse_rat(arg)?)?)
}

fn similarity_json(outcome: &SimilarityOutcome) -> Value {
    match outcome {
        SimilarityOutcome::Witness(l) => json!({"similar": true, "witness": l}),
        SimilarityOutcome::QuadraticOnly => {
            json!({"similar": true, "witness": null, "note": "trace forms similar, hermitian witness not found"})
        }
        SimilarityOutcome::NotSimilar => json!({"similar": false, "witness": null}),
    }
}

fn rel_json(v: &arason::unitary::RelArasonValue) -> Value {
    json!({
        "value": v.value(),
        "coset": v.coset().repr(),
        "space": {
            "alpha": v.space().alpha(),
            "beta": "split",
            "modulus": v.space().modulus(),
            "label": v.space().label(),
        }
    })
}

fn run(cli: Cli) -> CliResult<(Value, u8)> {
    let out = match cli.cmd {
        Cmd::Version => json!({
            "name": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
        }),
        Cmd::Qform { op } => match op {
            QformOp::Profile { q } => {
                serde_json::to_value(parse_qform(&q)?.profile()).expect("profile serializes")
            }
            QformOp::Isotropic { q } => json!({"isotropic": parse_qform(&q)?.is_isotropic()}),
            QformOp::Witt { q } => json!({"witt_index": parse_qform(&q)?.witt_index()}),
            QformOp::Isometric { q1, q2 } => {
                json!({"isometric": parse_qform(&q1)?.is_isometric(&parse_qform(&q2)?)})
            }
            QformOp::Similar { q1, q2 } => {
                let w = parse_qform(&q1)?.is_similar(&parse_qform(&q2)?);
                json!({"similar": w.is_some(), "witness": w})
            }
            QformOp::E1 { q } => json!({"e1": parse_qform(&q)?.e1()?}),
            QformOp::E2 { q } => json!({"e2": parse_qform(&q)?.e2()?}),
            QformOp::E3 { q } => json!({"e3": parse_qform(&q)?.e3()?}),
        },
        Cmd::Herm { op } => match op {
            HermOp::Trace { h } => {
                serde_json::to_value(parse_herm(&h)?.trace_form()).expect("form serializes")
            }
            HermOp::Disc { h } => {
                let form = parse_herm(&h)?;
                let d = form.disc();
                json!({"disc": d.repr, "delta": d.delta, "trivial": d.is_trivial()})
            }
            HermOp::Discalg { h } => json!({"disc_algebra": parse_herm(&h)?.disc_algebra()?}),
            HermOp::Isometric { h1, h2 } => {
                json!({"isometric": parse_herm(&h1)?.is_isometric(&parse_herm(&h2)?)?})
            }
            HermOp::Similar { h1, h2 } => {
                similarity_json(&parse_herm(&h1)?.similarity(&parse_herm(&h2)?)?)
            }
            HermOp::Hyperbolic { h } => {
                let form = parse_herm(&h)?;
                json!({"hyperbolic": form.is_hyperbolic(), "witt_index": form.witt_index()})
            }
            HermOp::Quadext { h } => {
                let report = quad_ext_check(&parse_herm(&h)?);
                let mut v = serde_json::to_value(&report).expect("report serializes");
                v["passed"] = json!(report.passed());
                v
            }
        },
        Cmd::Unitary { op } => match op {
            UnitaryOp::RelE3 { t0, t } => {
                rel_json(&rel_arason(&parse_unitary(&t0)?, &parse_unitary(&t)?)?)
            }
            UnitaryOp::E3Hyp { t } => rel_json(&e3_hyp(&parse_unitary(&t)?)?),
            UnitaryOp::E3Td { t } => rel_json(&e3_td(&parse_unitary(&t)?)?),
            UnitaryOp::F3 { t0, t } => {
                json!({"f3": f3(&parse_unitary(&t0)?, &parse_unitary(&t)?)?})
            }
            UnitaryOp::Theta { t0, t, lambda } => {
                let theta = theta_lambda(
                    &parse_unitary(&t0)?,
                    &parse_unitary(&t)?,
                    &parse_class(&lambda)?,
                )?;
                json!({
                    "delta": theta.delta(),
                    "degree": theta.degree(),
                    "diag": theta.rep().diag(),
                })
            }
            UnitaryOp::Rank2 { t0, lambda } => {
                let t0 = parse_unitary(&t0)?;
                let lam = parse_class(&lambda)?;
                let (inv, value) = rank2_factor(&t0, &lam)?;
                json!({
                    "unitary": {"delta": inv.delta(), "degree": inv.degree(), "diag": inv.rep().diag()},
                    "e3_hyp": value,
                    "cup": arason::brauer::h3_cup_sc(&lam, &t0.disc_algebra()?),
                })
            }
            UnitaryOp::Classify { t0, t } => {
                let a = parse_unitary(&t0)?;
                let b = parse_unitary(&t)?;
                let isomorphic = match a.degree() {
                    3 => classify_deg3(&a, &b)?,
                    4 => classify_deg4(&a, &b)?,
                    6 => classify_deg6(&a, &b)?,
                    d => {
                        return Err(CliError::Precondition(format!(
                            "classification by the relative invariant is implemented for degrees 3, 4 and 6, got {d}"
                        )))
                    }
                };
                json!({"degree": a.degree(), "isomorphic": isomorphic, "rel_e3": rel_json(&rel_arason(&a, &b)?)})
            }
            UnitaryOp::Hyp6 { t } => {
                json!({"hyperbolic": is_hyperbolic_deg6(&parse_unitary(&t)?)?})
            }
            UnitaryOp::Dec8 { t } => match dec_deg8(&parse_unitary(&t)?)? {
                Deg8Decomposition::Decomposable(slots) => {
                    json!({"decomposable": true, "slots": slots})
                }
                Deg8Decomposition::WitnessNotFound => {
                    json!({"decomposable": true, "slots": null, "note": "decision true, witness not found"})
                }
                Deg8Decomposition::NotDecomposable => {
                    json!({"decomposable": false, "slots": null})
                }
            },
            UnitaryOp::SympDescent {
                phi0,
                phi,
                a,
                delta,
            } => {
                let (symp, coset) = symp_descent_e3(
                    &parse_qform(&phi0)?,
                    &parse_qform(&phi)?,
                    &parse_class(&a)?,
                    &parse_class(&delta)?,
                )?;
                json!({
                    "symplectic": symp,
                    "unitary_coset": coset.repr(),
                    "space": coset.space().label(),
                })
            }
            UnitaryOp::OrthDescent { q0, q, delta } => {
                let (value, coset) =
                    orth_descent_rel(&parse_qform(&q0)?, &parse_qform(&q)?, &parse_class(&delta)?)?;
                json!({
                    "clifford_cup": value,
                    "unitary_coset": coset.repr(),
                    "space": coset.space().label(),
                })
            }
        },
        Cmd::Check {
            name,
            seed,
            trials,
            height,
        } => {
            let name = CheckName::from_str(&name).map_err(|e| CliError::Usage(e.to_string()))?;
            let cfg = GenConfig {
                seed,
                trials,
                height_bound: height,
                ..GenConfig::default()
            };
            let report = check(name, &cfg);
            let code = if report.passed() { 0 } else { 3 };
            let v = serde_json::to_value(&report).expect("report serializes");
            return Ok((v, code));
        }
    };
    Ok((out, 0))
}

fn render_text(v: &Value, indent: usize) -> String {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, val)| match val {
                Value::Object(_) | Value::Array(_) => {
                    format!("{pad}{k}:\n{}", render_text(val, indent + 1))
                }
                _ => format!("{pad}{k}: {}", plain(val)),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        Value::Array(items) if items.is_empty() => format!("{pad}[]"),
        Value::Array(items) => items
            .iter()
            .map(|item| match item {
                Value::Object(_) | Value::Array(_) => render_text(item, indent),
                _ => format!("{pad}- {}", plain(item)),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => format!("{pad}{}", plain(other)),
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn fail(msg: impl Display, code: u8) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok((value, code)) => {
            match format {
                Format::Json => println!("{value}"),
                Format::Text => println!("{}", render_text(&value, 0)),
            }
            ExitCode::from(code)
        }
        Err(CliError::Usage(msg)) => fail(msg, 2),
        Err(CliError::Precondition(msg)) => fail(msg, 1),
    }
}
