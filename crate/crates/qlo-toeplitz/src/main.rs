//! Thin command-line driver over the library: config in, report out.
//! Exit codes: 0 all enabled checks passed, 1 a check failed, 2 usage or
//! config error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qlo_toeplitz::config::{InstanceConfig, RunConfig};
use qlo_toeplitz::indicator::find_fesspe;
use qlo_toeplitz::parse::parse_algebra;
use qlo_toeplitz::report::CheckKind;
use qlo_toeplitz::runner;
use qlo_toeplitz::spectrum::enumerate_spectrum;
use qlo_toeplitz::truncation::{truncate, Truncation};

#[derive(Parser)]
#[command(name = "qlo-toeplitz", version, about = "Exact checks for Toeplitz-algebra combinatorics over quasi-lattice ordered monoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
struct CommonOpts {
    /// JSON config file; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Instance kind: free_monoid | free_abelian | divisibility | half_line.
    #[arg(long)]
    instance: Option<String>,
    /// Generator count for free_monoid and free_abelian.
    #[arg(long)]
    rank: Option<u8>,
    /// Enumeration denominator bound for half_line.
    #[arg(long)]
    denominator_bound: Option<u32>,
    /// Candidate lower-bound set, comma-separated element literals.
    #[arg(long, value_name = "ELEMS")]
    fesspe: Option<String>,
    /// Default ball radius.
    #[arg(long)]
    radius: Option<u32>,
    /// Seed for sampled sweeps.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here as well as stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Run every enabled check from the config.
    Run(CommonOpts),
    /// Order axioms and translated joins only.
    CheckQlo(CommonOpts),
    /// Search for a finite exhaustive set of strictly positive elements.
    FindFesspe {
        #[command(flatten)]
        common: CommonOpts,
        /// Largest candidate size to try.
        #[arg(long, default_value = "2")]
        max_size: usize,
    },
    /// The lemma suites (chi formula, commutation, rank-ones, ...).
    VerifyLemmas {
        #[command(flatten)]
        common: CommonOpts,
        /// One suite instead of all; see --lemma help.
        #[arg(long, value_name = "NAME")]
        lemma: Option<String>,
    },
    /// Parse an algebra expression and print its degree decomposition and
    /// conditional expectation.
    Grade {
        #[command(flatten)]
        common: CommonOpts,
        /// Expression such as "V(ab,b) + 2 V(a,a)".
        expr: String,
    },
    /// Census of hereditary directed subsets of a ball.
    Spectrum(CommonOpts),
    /// Print the exact truncation matrix of an expression on a ball.
    DumpMatrix {
        #[command(flatten)]
        common: CommonOpts,
        expr: String,
    },
}

fn usage_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn build_config(common: &CommonOpts) -> Result<RunConfig, String> {
    let mut config = match &common.config {
        Some(path) => RunConfig::load(path).map_err(|e| e.to_string())?,
        None => {
            let kind = common
                .instance
                .clone()
                .unwrap_or_else(|| "free_monoid".to_string());
            let mut instance = InstanceConfig {
                kind,
                rank: common.rank,
                denominator_bound: common.denominator_bound,
            };
            if instance.kind == "free_monoid" || instance.kind == "free_abelian" {
                instance.rank = instance.rank.or(Some(2));
            }
            if instance.kind == "half_line" {
                instance.denominator_bound = instance.denominator_bound.or(Some(4));
            }
            RunConfig::new(instance)
        }
    };
    if let Some(kind) = &common.instance {
        if common.config.is_some() {
            config.instance.kind = kind.clone();
        }
    }
    if let Some(rank) = common.rank {
        config.instance.rank = Some(rank);
    }
    if let Some(d) = common.denominator_bound {
        config.instance.denominator_bound = Some(d);
    }
    if let Some(radius) = common.radius {
        config.radius = radius;
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(list) = &common.fesspe {
        config.fesspe_candidates =
            vec![list.split(',').map(|s| s.trim().to_string()).collect()];
    }
    if common.out.is_some() {
        config.out = common.out.clone();
    }
    config.instance.to_monoid().map_err(|e| e.to_string())?;
    Ok(config)
}

fn run_and_report(config: &RunConfig, format: Format) -> ExitCode {
    let outcome = match runner::run(config) {
        Ok(outcome) => outcome,
        Err(e) => return usage_error(e),
    };
    for (check, time) in &outcome.timings {
        eprintln!("timing: {check} {}ms", time.as_millis());
    }
    let rendered = match format {
        Format::Text => outcome.report.render_text(),
        Format::Structured => outcome.report.to_json(),
    };
    print!("{rendered}");
    if let Some(path) = &config.out {
        // The file copy is always the structured form.
        if let Err(e) = std::fs::write(path, outcome.report.to_json()) {
            return usage_error(format!("cannot write {}: {e}", path.display()));
        }
    }
    if outcome.report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn lemma_checks(lemma: Option<&str>) -> Result<Vec<CheckKind>, String> {
    let all = vec![
        CheckKind::TranslatedJoins,
        CheckKind::Fesspe,
        CheckKind::ChiFormula,
        CheckKind::FourCaseCommutation,
        CheckKind::SumToIdentity,
        CheckKind::RankOneSystem,
        CheckKind::IdealClosure,
        CheckKind::CommutantDimension,
    ];
    let Some(name) = lemma else { return Ok(all) };
    let check = match name {
        "lub-products" => CheckKind::TranslatedJoins,
        "chi-formula" => CheckKind::ChiFormula,
        "four-case" => CheckKind::FourCaseCommutation,
        "sum-to-identity" => CheckKind::SumToIdentity,
        "rank-one" => CheckKind::RankOneSystem,
        "ideal-closure" => CheckKind::IdealClosure,
        "commutant" => CheckKind::CommutantDimension,
        other => {
            return CheckKind::from_name(other)
                .map(|c| vec![c])
                .ok_or_else(|| format!("unknown lemma {other:?}"));
        }
    };
    match check {
        CheckKind::TranslatedJoins | CheckKind::CommutantDimension => Ok(vec![check]),
        // Candidate-dependent suites still need the exhaustivity check to
        // resolve the working set visibly.
        c => Ok(vec![CheckKind::Fesspe, c]),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(common) => match build_config(&common) {
            Ok(config) => run_and_report(&config, common.format),
            Err(e) => usage_error(e),
        },
        Command::CheckQlo(common) => match build_config(&common) {
            Ok(mut config) => {
                config.checks = Some(vec![
                    CheckKind::QloAxioms.name().to_string(),
                    CheckKind::TranslatedJoins.name().to_string(),
                ]);
                run_and_report(&config, common.format)
            }
            Err(e) => usage_error(e),
        },
        Command::VerifyLemmas { common, lemma } => match build_config(&common) {
            Ok(mut config) => {
                let checks = match lemma_checks(lemma.as_deref()) {
                    Ok(checks) => checks,
                    Err(e) => return usage_error(e),
                };
                config.checks = Some(checks.iter().map(|c| c.name().to_string()).collect());
                run_and_report(&config, common.format)
            }
            Err(e) => usage_error(e),
        },
        Command::FindFesspe { common, max_size } => match build_config(&common) {
            Ok(config) => {
                let monoid = config.instance.to_monoid().expect("validated");
                match find_fesspe(&monoid, max_size, config.radius) {
                    Some(set) => {
                        println!("{set}");
                        ExitCode::SUCCESS
                    }
                    None => {
                        println!(
                            "no exhaustive set of size <= {max_size} within radius {}",
                            config.radius
                        );
                        ExitCode::SUCCESS
                    }
                }
            }
            Err(e) => usage_error(e),
        },
        Command::Grade { common, expr } => match build_config(&common) {
            Ok(config) => {
                let monoid = config.instance.to_monoid().expect("validated");
                let x = match parse_algebra(&monoid, &expr) {
                    Ok(x) => x,
                    Err(e) => return usage_error(e),
                };
                for (label, component) in x.grade() {
                    println!("degree {label}: {component}");
                }
                println!("expectation: {}", x.expectation());
                ExitCode::SUCCESS
            }
            Err(e) => usage_error(e),
        },
        Command::Spectrum(common) => match build_config(&common) {
            Ok(config) => {
                let monoid = config.instance.to_monoid().expect("validated");
                match enumerate_spectrum(&monoid, config.radius) {
                    Ok(points) => {
                        for p in &points {
                            println!("{p}");
                        }
                        let principal = points.iter().filter(|p| p.principal.is_some()).count();
                        println!("total {} points, {principal} principal", points.len());
                        ExitCode::SUCCESS
                    }
                    Err(e) => usage_error(e),
                }
            }
            Err(e) => usage_error(e),
        },
        Command::DumpMatrix { common, expr } => match build_config(&common) {
            Ok(config) => {
                let monoid = config.instance.to_monoid().expect("validated");
                let x = match parse_algebra(&monoid, &expr) {
                    Ok(x) => x,
                    Err(e) => return usage_error(e),
                };
                let s = Truncation::ball(monoid, config.radius);
                let op = truncate(&x, &s);
                match common.format {
                    Format::Text => {
                        println!(
                            "basis: {}",
                            s.elements()
                                .iter()
                                .map(|e| e.to_string())
                                .collect::<Vec<_>>()
                                .join(" ")
                        );
                        print!("{}", op.matrix);
                        if !op.escapes.is_empty() {
                            let cols: Vec<String> = op
                                .escapes
                                .iter()
                                .map(|&c| s.elements()[c].to_string())
                                .collect();
                            println!("escaped columns: {}", cols.join(" "));
                        }
                    }
                    Format::Structured => {
                        let dump = serde_json::json!({
                            "basis": s.elements().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                            "rows": op.matrix.dump(),
                            "escaped_columns": op.escapes.iter().map(|&c| s.elements()[c].to_string()).collect::<Vec<_>>(),
                        });
                        println!("{}", serde_json::to_string_pretty(&dump).expect("serializes"));
                    }
                }
                ExitCode::SUCCESS
            }
            Err(e) => usage_error(e),
        },
    }
}
