//! Command-line front end for the formal-degree library: per-block
//! analysis, adjoint gamma data, the conjectured right-hand side with
//! its identity chain, and the randomized identity sweep.
//!
//! Exit codes: 0 on success, 1 when an identity fails (a mathematical
//! finding), 2 for operational problems (unreadable input, malformed
//! data, resource limits).

use clap::{Parser, Subcommand};
use fdeg::blocks::{
    analyze, chain_check, formal_degree_rhs, AnalyzeReport, BlockData, ChainOutcome, ChainReport,
    FormalDegreeReport, HiiError,
};
use fdeg::input::{block_from_json, parameter_from_json, rational_to_string};
use fdeg::parameters::Parameter;
use fdeg::scalars::{Monomial, Scalar};
use fdeg::verify::{
    run_suite, run_suite_sequential, LatticeChoice, SuiteOptions, SuiteSummary,
    DEFAULT_SUITE_WEYL_LIMIT,
};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fdeg",
    version,
    about = "Exact formal-degree bookkeeping for principal-series blocks of split p-adic groups"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Conductors, filtration, stabilizer split, and volume report for a
    /// block file.
    Analyze {
        /// JSON block description.
        file: PathBuf,
    },
    /// Adjoint gamma data for an explicit parameter file.
    Gamma {
        /// JSON parameter description.
        file: PathBuf,
    },
    /// The conjectured right-hand side for a block, with the identity
    /// chain run wherever it applies.
    HiiRhs {
        /// JSON block description.
        file: PathBuf,
    },
    /// Randomized identity sweep over the named types.
    Verify {
        /// Largest rank of the named types to include.
        #[arg(long, default_value_t = 2)]
        max_rank: usize,
        /// Comma-separated character lattices: sc, ad.
        #[arg(long, default_value = "sc,ad", value_delimiter = ',', value_parser = parse_lattice)]
        lattices: Vec<LatticeChoice>,
        /// Trials per datum; zero prints an empty summary.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Weyl enumeration cap (a rank-8 sweep needs several hundred
        /// thousand elements and roughly half a gigabyte).
        #[arg(long, default_value_t = DEFAULT_SUITE_WEYL_LIMIT)]
        weyl_limit: usize,
        /// Run the trials on one thread even when the parallel runner is
        /// compiled in.
        #[arg(long)]
        sequential: bool,
    },
}

fn parse_lattice(s: &str) -> Result<LatticeChoice, String> {
    s.parse()
}

struct Failure {
    code: u8,
    message: String,
}

fn operational(e: impl std::fmt::Display) -> Failure {
    Failure { code: 2, message: e.to_string() }
}

fn from_hii(e: HiiError) -> Failure {
    Failure {
        code: if e.is_identity_violation() { 1 } else { 2 },
        message: e.to_string(),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| operational(format!("cannot read {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze { file } => cmd_analyze(file, cli.json),
        Command::Gamma { file } => cmd_gamma(file, cli.json),
        Command::HiiRhs { file } => cmd_hii_rhs(file, cli.json),
        Command::Verify {
            max_rank,
            lattices,
            trials,
            seed,
            weyl_limit,
            sequential,
        } => cmd_verify(*max_rank, lattices, *trials, *seed, *weyl_limit, *sequential, cli.json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn monomial_json(m: &Monomial) -> Value {
    let qhalf = if m.half_exp % 2 == 0 {
        format!("{}", m.half_exp / 2)
    } else {
        format!("{}/2", m.half_exp)
    };
    json!({ "qhalf": qhalf, "zeta": rational_to_string(m.zeta.fraction()) })
}

/// Scalars print as plain rationals whenever they are rational (every
/// squared modulus is); otherwise the symbolic form is kept.
fn scalar_json(s: &Scalar) -> Value {
    match s.to_rational() {
        Some(r) => Value::String(rational_to_string(&r)),
        None => Value::String(s.to_string()),
    }
}

fn scalar_text(s: &Scalar) -> String {
    match s.to_rational() {
        Some(r) => rational_to_string(&r),
        None => s.to_string(),
    }
}

fn strands_json(strands: &[(Monomial, u32)]) -> Value {
    Value::Array(
        strands
            .iter()
            .map(|(class, weight)| json!({ "class": monomial_json(class), "weight": weight }))
            .collect(),
    )
}

fn strands_text(strands: &[(Monomial, u32)]) -> String {
    if strands.is_empty() {
        return "none".into();
    }
    strands
        .iter()
        .map(|(class, weight)| format!("{class} (weight {weight})"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_analyze(file: &Path, as_json: bool) -> Result<(), Failure> {
    let block = block_from_json(&read_input(file)?).map_err(operational)?;
    let report = analyze(&block).map_err(from_hii)?;
    if as_json {
        println!(
            "{}",
            serde_json::to_string_pretty(&analyze_json(&block, &report)).expect("report is plain data")
        );
    } else {
        print_analyze(&block, &report);
    }
    if report.volumes.ratio_matches_epsilon() {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: format!(
                "identity violation (volume ratio): {} against root-number modulus {}",
                report.volumes.ratio, report.volumes.epsilon_abs
            ),
        })
    }
}

fn analyze_json(block: &BlockData, report: &AnalyzeReport) -> Value {
    let roots: Vec<Value> = (0..block.datum.num_roots())
        .map(|i| {
            json!({
                "root": block.datum.root(i),
                "conductor": report.conductors.values[i],
                "filtration": report.filtration.values[i],
            })
        })
        .collect();
    json!({
        "datum": report.datum_name,
        "rank": report.rank,
        "positive_count": report.positive_count,
        "roots": roots,
        "artin_exponent": report.volumes.artin_exponent,
        "capped_rule_divergences": report.filtration.displayed_rule_divergences,
        "subsystem": report.subsystem.as_ref().map(|s| json!({
            "name": s.name,
            "rank": s.rank,
            "positive_count": s.positive_count,
            "parent_indices": s.parent_indices,
        })),
        "stabilizer": {
            "full_order": report.stabilizer.full_order,
            "reflection_order": report.stabilizer.reflection_order,
            "diagram_order": report.stabilizer.diagram_order,
        },
        "volumes": {
            "iwahori": report.volumes.iwahori.to_string(),
            "unramified_iwahori": report.volumes.unramified_iwahori.to_string(),
            "compact_open": report.volumes.compact_open.to_string(),
            "index_exponent": report.volumes.index_exponent,
            "ratio": report.volumes.ratio.to_string(),
            "epsilon_abs": report.volumes.epsilon_abs.to_string(),
            "ratio_matches_epsilon": report.volumes.ratio_matches_epsilon(),
        },
        "condition": report.condition.as_ref().map(|c| json!({
            "components": c.components,
            "excluded_primes": c.excluded_primes,
            "p": c.prime,
            "satisfied": c.satisfied,
        })),
    })
}

fn print_analyze(block: &BlockData, report: &AnalyzeReport) {
    println!(
        "datum: {} (rank {}, {} positive roots)",
        report.datum_name, report.rank, report.positive_count
    );
    println!("root conductors and filtration values:");
    for i in 0..block.datum.num_roots() {
        println!(
            "  {:?}  c = {}  f = {}",
            block.datum.root(i),
            report.conductors.values[i],
            report.filtration.values[i]
        );
    }
    println!("adjoint Artin exponent: {}", report.volumes.artin_exponent);
    if report.filtration.displayed_rule_divergences.is_empty() {
        println!("capped-rule divergences: none");
    } else {
        let roots: Vec<String> = report
            .filtration
            .displayed_rule_divergences
            .iter()
            .map(|&i| format!("{:?}", block.datum.root(i)))
            .collect();
        println!(
            "capped-rule divergences (conductor at least 3) at: {}",
            roots.join(", ")
        );
    }
    match &report.subsystem {
        None => println!("unramified subsystem: none (every root is ramified)"),
        Some(s) => println!(
            "unramified subsystem: {} (rank {}, {} positive roots) on root indices {:?}",
            s.name, s.rank, s.positive_count, s.parent_indices
        ),
    }
    println!(
        "character stabilizer: order {} = {} reflections x {} diagram",
        report.stabilizer.full_order,
        report.stabilizer.reflection_order,
        report.stabilizer.diagram_order
    );
    println!("volumes:");
    println!("  iwahori            = {}", report.volumes.iwahori);
    println!("  unramified iwahori = {}", report.volumes.unramified_iwahori);
    println!("  compact open       = {}", report.volumes.compact_open);
    println!("  index in iwahori   = q^{}", report.volumes.index_exponent);
    println!(
        "  ratio = {}, root-number modulus = {} ({})",
        report.volumes.ratio,
        report.volumes.epsilon_abs,
        if report.volumes.ratio_matches_epsilon() {
            "match"
        } else {
            "MISMATCH"
        }
    );
    if let Some(c) = &report.condition {
        let verdict = match c.satisfied {
            Some(true) => "allowed",
            Some(false) => "excluded",
            None => "not tested",
        };
        println!(
            "condition: components {}; excluded primes {:?}; p = {} {}",
            c.components.join(" x "),
            c.excluded_primes,
            c.prime.map(|p| p.to_string()).unwrap_or_else(|| "?".into()),
            verdict
        );
    }
}

fn cmd_gamma(file: &Path, as_json: bool) -> Result<(), Failure> {
    let parameter = parameter_from_json(&read_input(file)?).map_err(operational)?;
    let gamma_abs_sq = parameter.gamma_abs_sq().map_err(operational)?;
    let unramified = parameter.gamma_unramified_part().map_err(operational)?;
    if as_json {
        println!(
            "{}",
            serde_json::to_string_pretty(&gamma_json(&parameter, &gamma_abs_sq, &unramified))
                .expect("report is plain data")
        );
    } else {
        print_gamma(&parameter, &gamma_abs_sq, &unramified);
    }
    Ok(())
}

fn gamma_json(parameter: &Parameter, gamma_abs_sq: &Scalar, unramified: &Scalar) -> Value {
    json!({
        "datum": parameter.datum().name(),
        "q": rational_to_string(parameter.q()),
        "artin_exponent": parameter.conductor_data().artin_exponent(),
        "ramified_lines": parameter.adjoint().ramified.len(),
        "strands": strands_json(parameter.strands()),
        "invariant_lines": parameter.invariant_line_count(),
        "discrete": parameter.is_discrete(),
        "gamma_abs_sq": scalar_json(gamma_abs_sq),
        "gamma_unramified_part": scalar_json(unramified),
    })
}

fn print_gamma(parameter: &Parameter, gamma_abs_sq: &Scalar, unramified: &Scalar) {
    println!(
        "datum: {} (rank {}), q = {}",
        parameter.datum().name(),
        parameter.datum().rank(),
        rational_to_string(parameter.q())
    );
    println!(
        "ramified adjoint lines: {} (Artin exponent {})",
        parameter.adjoint().ramified.len(),
        parameter.conductor_data().artin_exponent()
    );
    println!("inertia-fixed strings: {}", strands_text(parameter.strands()));
    println!(
        "discrete: {} ({} trivial strings)",
        parameter.is_discrete(),
        parameter.invariant_line_count()
    );
    println!("|gamma(0, Ad)|^2 = {}", scalar_text(gamma_abs_sq));
    println!("unramified-part gamma(0) = {}", scalar_text(unramified));
}

fn cmd_hii_rhs(file: &Path, as_json: bool) -> Result<(), Failure> {
    let block = block_from_json(&read_input(file)?).map_err(operational)?;
    let report = formal_degree_rhs(&block).map_err(from_hii)?;
    let chain = ChainStatus::from_block(&block);
    if as_json {
        println!(
            "{}",
            serde_json::to_string_pretty(&hii_rhs_json(&block, &report, &chain))
                .expect("report is plain data")
        );
    } else {
        print_hii_rhs(&block, &report, &chain);
    }
    chain.into_result()
}

/// Outcome of running the identity chain on a block that already has a
/// right-hand side.  A chain that cannot apply (no principal arc, or an
/// explicit non-principal parameter) is reported but is not an error.
enum ChainStatus {
    Checked(ChainReport),
    NotApplicable(String),
    Violation(String),
    Operational(String),
}

impl ChainStatus {
    fn from_block(block: &BlockData) -> ChainStatus {
        match chain_check(block) {
            Ok(report) => ChainStatus::Checked(report),
            Err(e) if e.is_identity_violation() => ChainStatus::Violation(e.to_string()),
            Err(
                HiiError::NotPrincipal(reason)
                | HiiError::NotDiscrete(reason)
                | HiiError::MissingEnhancement(reason),
            ) => ChainStatus::NotApplicable(reason),
            Err(e) => ChainStatus::Operational(e.to_string()),
        }
    }

    fn into_result(self) -> Result<(), Failure> {
        match self {
            ChainStatus::Checked(_) | ChainStatus::NotApplicable(_) => Ok(()),
            ChainStatus::Violation(message) => Err(Failure { code: 1, message }),
            ChainStatus::Operational(message) => Err(Failure { code: 2, message }),
        }
    }
}

fn hii_rhs_json(block: &BlockData, report: &FormalDegreeReport, chain: &ChainStatus) -> Value {
    let chain_value = match chain {
        ChainStatus::Checked(c) => json!({
            "status": match c.outcome {
                ChainOutcome::Verified => "verified",
                ChainOutcome::NoDiscreteParameters => "no-discrete-parameters",
            },
            "ratio": c.ratio.to_string(),
            "artin_exponent": c.artin_exponent,
        }),
        ChainStatus::NotApplicable(reason) => json!({ "status": "not-applicable", "detail": reason }),
        ChainStatus::Violation(detail) => json!({ "status": "violation", "detail": detail }),
        ChainStatus::Operational(detail) => json!({ "status": "error", "detail": detail }),
    };
    json!({
        "datum": block.datum.name(),
        "q": rational_to_string(&block.q),
        "principal": report.principal,
        "dim_rho": report.dim_rho,
        "s_sharp_order": report.s_sharp_order,
        "strands": strands_json(&report.strands),
        "gamma_abs_sq": scalar_json(&report.gamma_abs_sq),
        "rhs_sq": scalar_json(&report.rhs_sq),
        "chain": chain_value,
    })
}

fn print_hii_rhs(block: &BlockData, report: &FormalDegreeReport, chain: &ChainStatus) {
    println!(
        "datum: {} (rank {}), q = {}",
        block.datum.name(),
        block.datum.rank(),
        rational_to_string(&block.q)
    );
    println!(
        "parameter: {} (dim rho = {})",
        if report.principal { "principal arc" } else { "explicit member" },
        report.dim_rho
    );
    println!("inertia-fixed strings: {}", strands_text(&report.strands));
    println!("component order |S#| = {}", report.s_sharp_order);
    println!("|gamma(0, Ad)|^2 = {}", scalar_text(&report.gamma_abs_sq));
    println!("rhs^2 = {}", scalar_text(&report.rhs_sq));
    match chain {
        ChainStatus::Checked(c) => match c.outcome {
            ChainOutcome::Verified => println!(
                "identity chain: verified (ratio {} = root-number modulus, Artin exponent {})",
                c.ratio, c.artin_exponent
            ),
            ChainOutcome::NoDiscreteParameters => println!(
                "identity chain: volume clause only (ratio {}); the subsystem rank is too small for discrete parameters",
                c.ratio
            ),
        },
        ChainStatus::NotApplicable(reason) => println!("identity chain: not applicable ({reason})"),
        ChainStatus::Violation(detail) => println!("identity chain: VIOLATION ({detail})"),
        ChainStatus::Operational(detail) => println!("identity chain: failed to run ({detail})"),
    }
}

fn cmd_verify(
    max_rank: usize,
    lattices: &[LatticeChoice],
    trials: usize,
    seed: u64,
    weyl_limit: usize,
    sequential: bool,
    as_json: bool,
) -> Result<(), Failure> {
    if lattices.is_empty() {
        return Err(operational("at least one lattice is required (sc, ad)"));
    }
    let mut options = SuiteOptions::new(max_rank, lattices.to_vec(), trials, seed);
    options.weyl_limit = weyl_limit;
    let summary = if sequential {
        run_suite_sequential(&options)
    } else {
        run_suite(&options)
    };
    if as_json {
        println!(
            "{}",
            serde_json::to_string_pretty(&summary_json(&summary)).expect("summary is plain data")
        );
    } else {
        print!("{}", summary.render());
    }
    if summary.has_failures() {
        let (_, failures, _) = summary.totals();
        Err(Failure {
            code: 1,
            message: format!("identity sweep recorded {failures} failing checks"),
        })
    } else {
        Ok(())
    }
}

fn summary_json(summary: &SuiteSummary) -> Value {
    let checks: serde_json::Map<String, Value> = summary
        .stats
        .iter()
        .map(|(id, stats)| {
            (
                id.to_string(),
                json!({
                    "passes": stats.passes,
                    "failures": stats.failures,
                    "skips": stats.skips,
                    "first_failure": stats.first_failure,
                }),
            )
        })
        .collect();
    json!({
        "seed": summary.seed,
        "trials": summary.trials,
        "data": summary.datum_labels,
        "checks": checks,
        "failed": summary.has_failures(),
    })
}
