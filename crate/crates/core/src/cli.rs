//! Command-line driver.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain error (bad field order,
//! enumeration or search too large, incomplete search), 4 a checked
//! statement failed on the computed data.

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::besicovitch::{
    b0_config, b0_excess, conditional_check, incidence_report, triple_point_exceptions,
    LineConfig,
};
use crate::gf::{Felt, FieldTable};
use crate::report::{self, Format, Report};
use crate::search::{min_excess_search, verify_conjectures, SearchOptions};
use crate::stats;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_FALSIFIED: i32 = 4;

/// Largest order searched exhaustively without an explicit node budget.
pub const MAX_UNBUDGETED_SEARCH: usize = 13;

/// Largest order for which `field-check` runs the cubic axiom check.
const EXHAUSTIVE_AXIOM_LIMIT: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "kakeya", version, about = "Besicovitch sets in the finite plane")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct FieldArgs {
    /// Field characteristic.
    #[arg(long)]
    pub p: u32,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Debug, Args, Clone)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: u32,
    /// Stop after this many nodes; the result is then labelled non-exhaustive.
    #[arg(long)]
    pub node_budget: Option<u64>,
    /// Largest excess kept (defaults to the excess of B0).
    #[arg(long)]
    pub initial_bound: Option<u64>,
    /// Search all q^(q+1) configurations instead of translation representatives.
    #[arg(long)]
    pub no_normalize: bool,
    /// Leave out wall_ms so output is byte-reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the field tables and check the field axioms.
    FieldCheck(FieldArgs),
    /// Incidence report for the parabola-tangent configuration B0.
    B0(FieldArgs),
    /// Incidence report and structural checks for one configuration.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        /// q+1 comma-separated intercepts, vertical line last.
        #[arg(long)]
        intercepts: String,
    },
    /// Exhaustive minimum-excess search.
    Search {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Search, then check the size bound and the common-line property on
    /// every minimizer.
    Conjectures {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Exact mean and variance of the size of a random configuration.
    Moments {
        #[command(flatten)]
        field: FieldArgs,
        /// Also enumerate every configuration and compare.
        #[arg(long)]
        enumerate: bool,
    },
    /// Monte Carlo estimate of the size distribution.
    Sample {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        workers: u32,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    fn domain(e: impl std::fmt::Display) -> Self {
        Failure::Domain(e.to_string())
    }
}

struct Outcome {
    report: Report,
    falsified: bool,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self {
            report,
            falsified: false,
        }
    }
}

/// Parses `args` (program name first), runs the command, writes the report
/// to `out` and diagnostics to `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };

    match execute(&cli.command) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.report.emit(cli.format).as_bytes());
            if outcome.falsified {
                let _ = writeln!(err, "a checked statement failed; see report");
                EXIT_FALSIFIED
            } else {
                EXIT_OK
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DOMAIN
        }
    }
}

fn build_field(args: FieldArgs) -> Result<FieldTable, Failure> {
    FieldTable::new(args.p, args.k).map_err(Failure::domain)
}

fn execute(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::FieldCheck(fa) => field_check(&build_field(*fa)?),
        Command::B0(fa) => {
            let field = build_field(*fa)?;
            let config = b0_config(&field);
            let mut outcome = verify_config(&config)?;
            let expected = b0_excess(field.q());
            outcome.report.set("expected_excess", expected);
            let excess = outcome.report.fields["excess"].as_u64();
            outcome.falsified |= excess != Some(expected);
            Ok(outcome)
        }
        Command::Verify { field, intercepts } => {
            let field = build_field(*field)?;
            let config = LineConfig::parse(&field, intercepts)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            verify_config(&config)
        }
        Command::Search { field, search } => {
            let field = build_field(*field)?;
            let (outcome, ms) = run_search(&field, search)?;
            Ok(Outcome::ok(report::search(&outcome, ms)))
        }
        Command::Conjectures { field, search } => {
            let field = build_field(*field)?;
            let (outcome, ms) = run_search(&field, search)?;
            let verdict = verify_conjectures(&outcome).map_err(Failure::domain)?;
            let mut rep = report::search(&outcome, ms);
            report::conjectures(&mut rep, &verdict);
            Ok(Outcome {
                report: rep,
                falsified: !(verdict.conjecture1_holds && verdict.conjecture2_holds),
            })
        }
        Command::Moments { field, enumerate } => moments(&build_field(*field)?, *enumerate),
        Command::Sample {
            field,
            n,
            seed,
            workers,
        } => {
            let field = build_field(*field)?;
            let s = stats::monte_carlo_with_workers(&field, *n, *seed, *workers as usize)
                .map_err(Failure::domain)?;
            let cheb = (field.q() >= 3).then(|| stats::chebyshev_bound(field.q() as u64));
            let mut rep = report::sample(&field, &s, cheb.unwrap_or(f64::NAN));
            if cheb.is_none() {
                rep.set("chebyshev_bound", Option::<f64>::None);
            }
            Ok(Outcome::ok(rep))
        }
    }
}

fn field_check(field: &FieldTable) -> Result<Outcome, Failure> {
    let mut rep = Report::new(format!("GF({})", field.q()));
    report::field_header(&mut rep, field);
    let exhaustive = field.q() <= EXHAUSTIVE_AXIOM_LIMIT;
    let axioms = if exhaustive {
        field.check_axioms()
    } else {
        field.check_inverses()
    };
    let product = field.nonzero_product();
    let expected = if field.is_odd() {
        field.neg(Felt::ONE)
    } else {
        Felt::ONE
    };
    rep.set("axioms_checked", if exhaustive { "exhaustive" } else { "inverses" })
        .set("axioms_hold", axioms)
        .set("nonzero_product", product)
        .set("nonzero_product_expected", expected);
    Ok(Outcome {
        report: rep,
        falsified: !axioms || product != expected,
    })
}

fn verify_config(config: &LineConfig<'_>) -> Result<Outcome, Failure> {
    let field = config.field();
    let q = field.q();
    let inc = match incidence_report(config) {
        Ok(r) => r,
        Err(e) => {
            let mut rep = Report::new(format!("configuration {config}"));
            report::field_header(&mut rep, field);
            rep.set("error", e.to_string());
            return Ok(Outcome {
                report: rep,
                falsified: true,
            });
        }
    };
    let exceptions = triple_point_exceptions(config);
    let check = conditional_check(config);
    let mut rep = report::incidence(config, &inc);
    report::add_structure(&mut rep, &exceptions, &check);

    let odd = q % 2 == 1;
    let lemma = odd.then_some(exceptions.len() <= 1);
    let third = odd.then(|| 3 * inc.excess >= q as u64);
    let covering = check
        .bound_holds()
        .map(|holds| holds && (check.is_equality_case() == check.equality_shape()));
    let checks = serde_json::json!({
        "incidence_formula": true,
        "triple_point_lemma": lemma,
        "excess_at_least_q_over_3": third,
        "covering_line_bound": covering,
    });
    rep.set("checks", checks);
    let falsified = [lemma, third, covering].contains(&Some(false));
    Ok(Outcome {
        report: rep,
        falsified,
    })
}

fn run_search<'f>(
    field: &'f FieldTable,
    args: &SearchArgs,
) -> Result<(crate::search::SearchOutcome<'f>, Option<u64>), Failure> {
    if field.q() > MAX_UNBUDGETED_SEARCH && args.node_budget.is_none() {
        return Err(Failure::Domain(format!(
            "TooLarge: exhaustive search runs up to q = {MAX_UNBUDGETED_SEARCH}; pass --node-budget for q = {}",
            field.q()
        )));
    }
    let options = SearchOptions::new(field)
        .normalization(!args.no_normalize)
        .initial_bound(args.initial_bound)
        .workers(args.workers as usize)
        .node_budget(args.node_budget);
    let start = Instant::now();
    let outcome = min_excess_search(&options).map_err(Failure::domain)?;
    let ms = (!args.no_timing).then(|| start.elapsed().as_millis() as u64);
    Ok((outcome, ms))
}

fn moments(field: &FieldTable, enumerate: bool) -> Result<Outcome, Failure> {
    let q = field.q() as u64;
    let mean = stats::expected_cardinality(q);
    let variance = stats::variance_cardinality(q);
    let mut rep = Report::new(format!("size of a random configuration over GF({q})"));
    report::field_header(&mut rep, field);
    let q2 = (q * q) as f64;
    rep.set("mean", stats::ratio_string(&mean))
        .set("variance", stats::ratio_string(&variance))
        .set("mean_over_q2", stats::ratio_to_f64(&mean) / q2)
        .set("variance_over_q2", stats::ratio_to_f64(&variance) / q2)
        .set(
            "point_probability",
            stats::ratio_string(&stats::joint_point_probability(q, false)),
        )
        .set(
            "pair_probability",
            stats::ratio_string(&stats::joint_point_probability(q, true)),
        )
        .set(
            "chebyshev_bound",
            (q >= 3).then(|| stats::chebyshev_bound(q)),
        );
    let mut falsified = false;
    if enumerate {
        let m = stats::exact_moments_by_enumeration(field).map_err(Failure::domain)?;
        report::moments(&mut rep, "enumerated", &m);
        let matches = m.mean == mean && m.variance == variance;
        rep.set("closed_form_match", matches);
        falsified = !matches;
    }
    Ok(Outcome {
        report: rep,
        falsified,
    })
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
