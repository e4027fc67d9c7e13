//! The command-line surface.
//!
//! One logical command per invocation:
//!
//! * `generate <bell|hardy|ghz|ks18|triangle|compatible>` — emit a built-in
//!   model (or schema, for `ks18`/`triangle`) in the interchange format;
//!   `compatible` samples a random compatible instance over an acyclic
//!   schema file (`--schema`, with a mandatory `--seed`).
//! * `check <file>` — pairwise compatibility report.
//! * `glue <file>` — the gluing analysis appropriate to the semiring:
//!   universal relation for Boolean tables, hidden-variable feasibility for
//!   probability tables.
//! * `classify <file>` — the full hierarchy classification with all
//!   intermediate witnesses and certificates.
//! * `schema <file> [--acyclicity] [--parity] [--ks]` — structural analyses
//!   (all three when no flag is given).
//! * `quantum <bell|ghz>` — Born-rule tables for the built-in states,
//!   as floats or rationalized with `--rationalize N`.
//!
//! `generate` and `quantum` print an interchange document so they can be
//! piped straight into the analysis commands; the analysis commands print a
//! single [`crate::report::Report`] JSON object. `-` names standard input.
//! Exit codes: 0 after a completed analysis (contextuality, infeasibility,
//! and cyclicity are findings, not failures), 2 for malformed input or
//! arguments, 3 when an enumeration cap is exceeded.

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gluing::{check_compatibility, classify, lhv_feasible, universal_relation};
use crate::interchange::{
    parse_model, parse_schema, serialize_float_model, serialize_model, serialize_schema,
};
use crate::models::{bell_model, ghz_model, hardy_model, ks18_schema, triangle_schema};
use crate::quantum::{
    bell_state, born_model, calibrated_bell_scenario, ghz_scenario, ghz_state, rationalize,
    MeasurementScenario, XyMeasurement,
};
use crate::report::{
    acyclicity_doc, check_doc, classify_doc, glue_doc, lhv_doc, parity_doc, tuple_doc,
    GlueCommandDoc, InputEcho, KsDoc, Report, SchemaAnalysisDoc,
};
use crate::schema::Attribute;
use crate::semiring::SemiringKind;
use crate::structure::{
    generate_compatible_instance_with, gyo_acyclicity, ks_global_section, parity_divisor_check,
    DEFAULT_MAX_DENOMINATOR,
};

#[derive(Debug, Parser)]
#[command(
    name = "contextdb",
    version,
    about = "Analyze semiring-valued tables over attribute covers: compatibility, gluing, hidden-variable feasibility, and the contextuality hierarchy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a built-in model or schema as an interchange document.
    Generate {
        target: GenerateTarget,
        /// Party count for `ghz` (default 3).
        #[arg(long)]
        n: Option<usize>,
        /// Schema file for `compatible` (`-` for standard input).
        #[arg(long)]
        schema: Option<String>,
        /// RNG seed for `compatible` (required there, ignored elsewhere).
        #[arg(long)]
        seed: Option<u64>,
        /// Denominator bound for `compatible`'s sampled weights.
        #[arg(long)]
        max_denominator: Option<u64>,
    },
    /// Check pairwise compatibility of a model file.
    Check { file: String },
    /// Glue a model file: universal relation (Boolean) or hidden-variable
    /// feasibility (probability).
    Glue { file: String },
    /// Locate a model file in the contextuality hierarchy.
    Classify { file: String },
    /// Run structural analyses on a schema (or model) file.
    Schema {
        file: String,
        /// Decide acyclicity by GYO reduction.
        #[arg(long)]
        acyclicity: bool,
        /// Apply the incidence-count divisor criterion.
        #[arg(long)]
        parity: bool,
        /// Search for a ONE-IN-k global section (binary domains only).
        #[arg(long)]
        ks: bool,
    },
    /// Emit Born-rule tables for a built-in state.
    Quantum {
        state: QuantumState,
        /// Party count for `ghz` (default 3; `bell` is fixed at 2).
        #[arg(long)]
        n: Option<usize>,
        /// Override the measurement angles: four comma-separated values
        /// a,a',b,b' for `bell`, two values X,Y for `ghz`. Accepts decimals
        /// and multiples of pi such as `pi/3`, `2pi/3`, `-pi/2`.
        #[arg(long)]
        angles: Option<String>,
        /// Replace each float by its best rational with denominator at most
        /// N and emit an exact model.
        #[arg(long)]
        rationalize: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenerateTarget {
    Bell,
    Hardy,
    Ghz,
    Ks18,
    Triangle,
    Compatible,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum QuantumState {
    Bell,
    Ghz,
}

/// Parse arguments, run one command, print to the standard streams, and
/// map errors to the exit-code policy.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(stdout) => {
            print!("{stdout}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::EnumerationTooLarge { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn execute(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Generate {
            target,
            n,
            schema,
            seed,
            max_denominator,
        } => generate(target, n, schema.as_deref(), seed, max_denominator),
        Command::Check { file } => {
            let start = Instant::now();
            let (text, input) = read_input(&file)?;
            let model = parse_model(&text)?;
            let result = check_doc(&model, &check_compatibility(&model));
            Ok(report("check", input, result, start))
        }
        Command::Glue { file } => {
            let start = Instant::now();
            let (text, input) = read_input(&file)?;
            let model = parse_model(&text)?;
            let result = match model.kind() {
                SemiringKind::Boolean => GlueCommandDoc {
                    semiring: model.kind().name().to_string(),
                    glue: Some(glue_doc(&universal_relation(&model)?)),
                    lhv: None,
                },
                SemiringKind::Probability => GlueCommandDoc {
                    semiring: model.kind().name().to_string(),
                    glue: None,
                    lhv: Some(lhv_doc(&lhv_feasible(&model)?)),
                },
                SemiringKind::MinPlus => {
                    return Err(Error::WrongSemiring {
                        expected: "boolean or probability",
                        found: "minplus",
                    })
                }
            };
            Ok(report("glue", input, result, start))
        }
        Command::Classify { file } => {
            let start = Instant::now();
            let (text, input) = read_input(&file)?;
            let model = parse_model(&text)?;
            let result = classify_doc(&classify(&model)?);
            Ok(report("classify", input, result, start))
        }
        Command::Schema {
            file,
            acyclicity,
            parity,
            ks,
        } => {
            let start = Instant::now();
            let (text, input) = read_input(&file)?;
            let schema = parse_schema(&text)?;
            let all = !(acyclicity || parity || ks);
            let ks_doc = if ks || all {
                match ks_global_section(&schema) {
                    Ok(outcome) => Some(KsDoc {
                        section_exists: outcome.is_witness(),
                        witness: outcome.witness().map(tuple_doc),
                    }),
                    // Without binary domains the section search does not
                    // apply; skip it when it was not explicitly requested.
                    Err(Error::NonBinaryDomain(_)) if !ks => None,
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            let result = SchemaAnalysisDoc {
                acyclicity: (acyclicity || all).then(|| acyclicity_doc(&gyo_acyclicity(&schema))),
                parity: (parity || all).then(|| parity_doc(&parity_divisor_check(&schema))),
                ks: ks_doc,
            };
            Ok(report("schema", input, result, start))
        }
        Command::Quantum {
            state,
            n,
            angles,
            rationalize: max_denominator,
        } => quantum(state, n, angles.as_deref(), max_denominator),
    }
}

fn generate(
    target: GenerateTarget,
    n: Option<usize>,
    schema: Option<&str>,
    seed: Option<u64>,
    max_denominator: Option<u64>,
) -> Result<String> {
    match target {
        GenerateTarget::Bell => Ok(serialize_model(&bell_model())),
        GenerateTarget::Hardy => Ok(serialize_model(&hardy_model())),
        GenerateTarget::Ghz => Ok(serialize_model(&ghz_model(n.unwrap_or(3))?)),
        GenerateTarget::Ks18 => Ok(serialize_schema(&ks18_schema())),
        GenerateTarget::Triangle => Ok(serialize_schema(&triangle_schema())),
        GenerateTarget::Compatible => {
            let path = schema.ok_or_else(|| {
                Error::InvalidArgument(
                    "`generate compatible` needs --schema <file>".to_string(),
                )
            })?;
            let seed = seed.ok_or_else(|| {
                Error::InvalidArgument(
                    "`generate compatible` needs an explicit --seed".to_string(),
                )
            })?;
            let (text, _) = read_input(path)?;
            let schema = parse_schema(&text)?;
            let model = generate_compatible_instance_with(
                &schema,
                seed,
                max_denominator.unwrap_or(DEFAULT_MAX_DENOMINATOR),
            )?;
            Ok(serialize_model(&model))
        }
    }
}

fn quantum(
    state: QuantumState,
    n: Option<usize>,
    angles: Option<&str>,
    max_denominator: Option<u64>,
) -> Result<String> {
    let (state, scenario) = match state {
        QuantumState::Bell => {
            if let Some(n) = n {
                if n != 2 {
                    return Err(Error::InvalidArgument(format!(
                        "the bell state has exactly 2 parties, got --n {n}"
                    )));
                }
            }
            let scenario = match angles {
                None => calibrated_bell_scenario(),
                Some(list) => {
                    let a = parse_angles(list, 4)?;
                    MeasurementScenario::new(vec![
                        vec![
                            (Attribute::from("a"), XyMeasurement::new(a[0])),
                            (Attribute::from("a'"), XyMeasurement::new(a[1])),
                        ],
                        vec![
                            (Attribute::from("b"), XyMeasurement::new(a[2])),
                            (Attribute::from("b'"), XyMeasurement::new(a[3])),
                        ],
                    ])?
                }
            };
            (bell_state(), scenario)
        }
        QuantumState::Ghz => {
            let n = n.unwrap_or(3);
            let scenario = match angles {
                None => ghz_scenario(n)?,
                Some(list) => {
                    let a = parse_angles(list, 2)?;
                    MeasurementScenario::new(
                        (1..=n)
                            .map(|party| {
                                vec![
                                    (
                                        Attribute::new(format!("X({party})")),
                                        XyMeasurement::new(a[0]),
                                    ),
                                    (
                                        Attribute::new(format!("Y({party})")),
                                        XyMeasurement::new(a[1]),
                                    ),
                                ]
                            })
                            .collect(),
                    )?
                }
            };
            (ghz_state(n)?, scenario)
        }
    };
    let float = born_model(&state, &scenario)?;
    match max_denominator {
        Some(bound) => Ok(serialize_model(&rationalize(&float, bound)?)),
        None => Ok(serialize_float_model(&float)),
    }
}

/// Read a model/schema file (`-` for standard input) and echo its identity.
fn read_input(path: &str) -> Result<(String, InputEcho)> {
    let text = if path == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|e| Error::InvalidArgument(format!("cannot read standard input: {e}")))?;
        buffer
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?
    };
    let digest = Sha256::digest(text.as_bytes());
    let sha256 = digest.iter().map(|b| format!("{b:02x}")).collect();
    Ok((
        text,
        InputEcho {
            path: path.to_string(),
            sha256,
        },
    ))
}

fn report<T: serde::Serialize>(
    command: &str,
    input: InputEcho,
    result: T,
    start: Instant,
) -> String {
    Report {
        command: command.to_string(),
        input: Some(input),
        result,
        elapsed_ms: start.elapsed().as_millis(),
    }
    .render()
}

/// Parse a comma-separated list of exactly `count` angles.
fn parse_angles(list: &str, count: usize) -> Result<Vec<f64>> {
    let angles: Result<Vec<f64>> = list.split(',').map(parse_angle).collect();
    let angles = angles?;
    if angles.len() != count {
        return Err(Error::InvalidArgument(format!(
            "expected {count} comma-separated angles, got {}",
            angles.len()
        )));
    }
    Ok(angles)
}

/// Parse one angle: a decimal (`0.7854`) or a rational multiple of pi
/// (`pi`, `pi/3`, `2pi/3`, `0.5pi`, `-pi/2`).
fn parse_angle(token: &str) -> Result<f64> {
    let bad = || Error::Syntax(format!("invalid angle `{}`", token.trim()));
    let t = token.trim();
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) => (-1.0, r),
        None => (1.0, t.strip_prefix('+').unwrap_or(t)),
    };
    match rest.find("pi") {
        None => rest.parse::<f64>().map(|v| sign * v).map_err(|_| bad()),
        Some(at) => {
            let coefficient = match rest[..at].trim_end_matches('*') {
                "" => 1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            let divisor = match &rest[at + 2..] {
                "" => 1.0,
                tail => {
                    let d = tail.strip_prefix('/').ok_or_else(bad)?;
                    let d = d.parse::<f64>().map_err(|_| bad())?;
                    if d == 0.0 {
                        return Err(bad());
                    }
                    d
                }
            };
            Ok(sign * coefficient * std::f64::consts::PI / divisor)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles_parse_in_both_notations() {
        assert_eq!(parse_angle("0").unwrap(), 0.0);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/3").unwrap(), PI / 3.0);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("0.5pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_angle("2*pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle(" 1.25 ").unwrap(), 1.25);
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("").is_err());
        assert!(parse_angles("0,pi/3", 4).is_err());
    }

    #[test]
    fn command_line_parses() {
        assert!(Cli::try_parse_from(["contextdb", "generate", "bell"]).is_ok());
        assert!(Cli::try_parse_from(["contextdb", "classify", "-"]).is_ok());
        assert!(Cli::try_parse_from([
            "contextdb", "schema", "x.json", "--parity", "--ks"
        ])
        .is_ok());
        assert!(Cli::try_parse_from([
            "contextdb",
            "quantum",
            "ghz",
            "--n",
            "4",
            "--rationalize",
            "16"
        ])
        .is_ok());
        assert!(Cli::try_parse_from(["contextdb", "frobnicate"]).is_err());
    }
}
