//! Argument model and command implementations for the `parkstat` binary.
//!
//! Commands return their rendered output and an exit code, so tests can
//! drive them without spawning a process.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parkstat_core::airy::asymptotic_check;
use parkstat_core::counting::{count, count_symbolic};
use parkstat_core::exactalg::{Rat, Symbol};
use parkstat_core::fit::{
    fit_moment, FitResult, FitStatus, MomentAnsatz, SampleGrid, DEFAULT_MARGIN,
};
use parkstat_core::genfun::area_genfun_budgeted;
use parkstat_core::moments::{scaled_histogram, MomentTable};
use parkstat_core::parking::DEFAULT_BUDGET;
use parkstat_core::Error;

pub mod suites;

use suites::Check;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "parkstat",
    version,
    about = "Exact area and sum statistics of parking functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Length of the preference vectors
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Shift parameter of a-parking functions (default 1)
    #[arg(long, global = true)]
    pub a: Option<u32>,
    /// Moment order (default 2)
    #[arg(long, global = true)]
    pub k: Option<u32>,
    /// Comma-separated values of n for `airy`
    #[arg(long, global = true, value_delimiter = ',')]
    pub grid: Option<Vec<u32>>,
    /// Cap on enumerated vectors or on live big integers in a sweep
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Worker threads; output does not depend on it
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,
    /// Significant digits for decimal renderings
    #[arg(long, global = true, default_value_t = 15, value_parser = clap::value_parser!(u16).range(1..=1000))]
    pub precision: u16,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Number of a-parking functions of length n
    Count {
        /// Print the count as a polynomial in a
        #[arg(long)]
        symbolic: bool,
    },
    /// Area generating polynomial as an area,count table
    Genfun,
    /// Factorial, raw, central and scaled moments of the area
    Moments,
    /// Fit E_k = A + B E_1 with polynomial A, B; --n sets the largest fitted n
    Fit {
        /// Fit in n and a instead of n at fixed a
        #[arg(long)]
        general_a: bool,
    },
    /// Airy moments and the convergence E_k(n)/n^(3k/2) -> e_k
    Airy,
    /// Area histogram (counts for every area)
    Hist {
        /// Add standardized coordinates and densities
        #[arg(long)]
        scaled: bool,
    },
    /// Run self-checks; exit 4 if any fails
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    ClosedForm,
    Oracle,
    Jets,
    Expectation,
    All,
}

/// Rendered output and the exit code it should produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

/// A run that produced no output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub message: String,
    pub code: i32,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_RESOURCE,
            Error::ZeroVariance => EXIT_VERIFY,
            _ => EXIT_USAGE,
        };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: EXIT_USAGE,
    }
}

fn ok(output: String) -> Outcome {
    Outcome {
        output,
        code: EXIT_OK,
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn need_n(c: &Common, cmd: &str) -> Result<u32, Failure> {
    c.n.ok_or_else(|| usage(format!("{cmd} needs --n")))
}

fn need_a(c: &Common) -> Result<u32, Failure> {
    match c.a.unwrap_or(1) {
        0 => Err(usage("--a must be at least 1")),
        a => Ok(a),
    }
}

/// Runs one command on the current thread pool.
pub fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let c = &cli.common;
    let sig = c.precision as usize;
    match &cli.command {
        Command::Count { symbolic } => cmd_count(c, *symbolic),
        Command::Genfun => {
            let (n, a) = (need_n(c, "genfun")?, need_a(c)?);
            let g = area_genfun_budgeted(n, a, c.budget)?;
            Ok(ok(match c.format.unwrap_or(Format::Csv) {
                Format::Csv => g.to_csv(),
                Format::Json => pretty(&g.to_json()),
                Format::Text => format!("Q({n},{a})(x) = {}\n", g.poly),
            }))
        }
        Command::Moments => {
            let (n, a) = (need_n(c, "moments")?, need_a(c)?);
            let k = c.k.unwrap_or(2);
            if k == 0 {
                return Err(usage("--k must be at least 1"));
            }
            let t = MomentTable::compute(n, a, k, c.budget)?;
            Ok(ok(match c.format.unwrap_or(Format::Text) {
                Format::Csv => t.to_csv(sig),
                Format::Json => pretty(&t.to_json(sig)),
                Format::Text => t.to_text(sig),
            }))
        }
        Command::Fit { general_a } => cmd_fit(c, *general_a),
        Command::Airy => {
            let k = c.k.unwrap_or(2);
            let grid = c.grid.clone().unwrap_or_else(|| vec![100, 400]);
            let rep = asymptotic_check(k, &grid, &Rat::from((1, 4)), c.budget)?;
            Ok(ok(match c.format.unwrap_or(Format::Csv) {
                Format::Csv => rep.to_csv(),
                Format::Json => pretty(&rep.to_json()),
                Format::Text => rep.to_text(),
            }))
        }
        Command::Hist { scaled } => {
            let (n, a) = (need_n(c, "hist")?, need_a(c)?);
            let format = c.format.unwrap_or(Format::Csv);
            if *scaled {
                let h = scaled_histogram(n, a, sig, c.budget)?;
                Ok(ok(match format {
                    Format::Json => pretty(&h.to_json()),
                    Format::Csv => h.to_csv(),
                    Format::Text => h.to_csv().replace(',', " "),
                }))
            } else {
                let g = area_genfun_budgeted(n, a, c.budget)?;
                Ok(ok(match format {
                    Format::Json => pretty(&g.to_histogram().to_json()),
                    Format::Csv => g.to_csv(),
                    Format::Text => g.to_csv().replace(',', " "),
                }))
            }
        }
        Command::Verify { suite } => cmd_verify(c, *suite),
    }
}

fn cmd_count(c: &Common, symbolic: bool) -> Result<Outcome, Failure> {
    let n = need_n(c, "count")?;
    let format = c.format.unwrap_or(Format::Text);
    if symbolic {
        let p = count_symbolic(n);
        return Ok(ok(match format {
            Format::Text => format!("{p}\n"),
            Format::Csv => format!("n,polynomial\n{n},{p}\n"),
            Format::Json => {
                pretty(&serde_json::json!({"n": n, "polynomial": p, "text": p.to_string()}))
            }
        }));
    }
    let a = c.a.unwrap_or(1);
    let v = count(n, a);
    Ok(ok(match format {
        Format::Text => format!("{v}\n"),
        Format::Csv => format!("n,a,count\n{n},{a},{v}\n"),
        Format::Json => pretty(&serde_json::json!({"n": n, "a": a, "count": v.to_string()})),
    }))
}

fn fit_csv(fit: &FitResult) -> String {
    let names: Vec<&str> = fit.ansatz.symbols.iter().map(|s| s.name()).collect();
    let mut out = format!("poly,{},coeff\n", names.join(","));
    for (label, p) in [("A", &fit.a_poly), ("B", &fit.b_poly)] {
        for (e, coeff) in p.sorted_terms() {
            let exps: Vec<String> = e.iter().map(|d| d.to_string()).collect();
            writeln!(out, "{label},{},{coeff}", exps.join(",")).unwrap();
        }
    }
    out
}

fn cmd_fit(c: &Common, general_a: bool) -> Result<Outcome, Failure> {
    let k = c.k.unwrap_or(2);
    if k == 0 {
        return Err(usage("--k must be at least 1"));
    }
    let fit = if general_a {
        let ansatz = MomentAnsatz::initial(k, &[Symbol::N, Symbol::A]);
        fit_moment(
            &ansatz,
            &SampleGrid::general_a(&ansatz, DEFAULT_MARGIN),
            None,
            c.budget,
        )?
    } else {
        let a = need_a(c)?;
        let ansatz = MomentAnsatz::initial(k, &[Symbol::N]);
        let mut grid = SampleGrid::fixed_a(&ansatz, a, DEFAULT_MARGIN);
        if let Some(n_max) = c.n {
            let top = n_max + DEFAULT_MARGIN as u32;
            grid = SampleGrid {
                fit: (1..=n_max).map(|n| (n, a)).collect(),
                holdout: (n_max + 1..=top).map(|n| (n, a)).collect(),
            };
        }
        fit_moment(&ansatz, &grid, Some(a), c.budget)?
    };
    let output = match c.format.unwrap_or(Format::Text) {
        Format::Text => fit.to_text(),
        Format::Json => pretty(&fit.to_json()),
        Format::Csv => fit_csv(&fit),
    };
    let code = if fit.status == FitStatus::Verified {
        EXIT_OK
    } else {
        EXIT_VERIFY
    };
    Ok(Outcome { output, code })
}

fn render_checks(checks: &[Check], format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            for ch in checks {
                let mark = if ch.passed { "PASS" } else { "FAIL" };
                writeln!(out, "{mark} [{}] {}: {}", ch.suite, ch.name, ch.detail).unwrap();
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("suite,check,passed,detail\n");
            for ch in checks {
                writeln!(
                    out,
                    "{},\"{}\",{},\"{}\"",
                    ch.suite, ch.name, ch.passed, ch.detail
                )
                .unwrap();
            }
            out
        }
        Format::Json => pretty(&serde_json::json!({
            "passed": checks.iter().all(|c| c.passed),
            "checks": checks.iter().map(|c| serde_json::json!({
                "suite": c.suite,
                "check": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })),
    }
}

fn cmd_verify(c: &Common, suite: Suite) -> Result<Outcome, Failure> {
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::ClosedForm {
        checks.extend(suites::closed_form_suite(c.n.unwrap_or(200)));
    }
    if all || suite == Suite::Oracle {
        checks.extend(suites::oracle_suite(c.budget, Some(c.a.unwrap_or(10)))?);
    }
    if all || suite == Suite::Jets {
        checks.extend(suites::jets_suite(
            c.n.unwrap_or(40),
            c.k.unwrap_or(6),
            c.budget,
        )?);
    }
    if all || suite == Suite::Expectation {
        checks.extend(suites::expectation_suite(c.budget)?);
    }
    let code = if checks.iter().all(|ch| ch.passed) {
        EXIT_OK
    } else {
        EXIT_VERIFY
    };
    Ok(Outcome {
        output: render_checks(&checks, c.format.unwrap_or(Format::Text)),
        code,
    })
}

/// Parses nothing, runs `cli` on a pool of `--threads` workers.
pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    parkstat_core::with_threads(cli.common.threads as usize, || execute(cli))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Result<Outcome, Failure> {
        let mut full = vec!["parkstat"];
        full.extend_from_slice(args);
        run(&Cli::try_parse_from(full).unwrap())
    }

    #[test]
    fn count_outputs() {
        assert_eq!(go(&["count", "--n", "3"]).unwrap().output, "16\n");
        assert_eq!(
            go(&["count", "--n", "3", "--symbolic"]).unwrap().output,
            "a^3+6a^2+9a\n"
        );
        assert_eq!(
            go(&["count", "--n", "0", "--a", "9"]).unwrap().output,
            "1\n"
        );
        assert_eq!(
            go(&["count", "--n", "2", "--a", "2", "--format", "csv"])
                .unwrap()
                .output,
            "n,a,count\n2,2,8\n"
        );
    }

    #[test]
    fn missing_n_is_usage() {
        assert_eq!(go(&["genfun"]).unwrap_err().code, EXIT_USAGE);
        assert!(Cli::try_parse_from(["parkstat", "count", "--n", "x"]).is_err());
        assert!(Cli::try_parse_from(["parkstat", "count", "--threads", "0"]).is_err());
    }

    #[test]
    fn budget_trip_is_resource_error() {
        let err = go(&["genfun", "--n", "60", "--budget", "100"]).unwrap_err();
        assert_eq!(err.code, EXIT_RESOURCE);
    }

    #[test]
    fn genfun_rows() {
        assert_eq!(
            go(&["genfun", "--n", "3"]).unwrap().output,
            "area,count\n0,6\n1,6\n2,3\n3,1\n"
        );
        assert_eq!(
            go(&["genfun", "--n", "0"]).unwrap().output,
            "area,count\n0,1\n"
        );
    }

    #[test]
    fn fit_exit_codes() {
        let out = go(&["fit", "--k", "2"]).unwrap();
        assert_eq!(out.code, EXIT_OK);
        assert!(out.output.contains("-7/3n-7/3"));
        // four sample points cannot pin six unknowns
        assert_eq!(
            go(&["fit", "--k", "2", "--n", "4"]).unwrap_err().code,
            EXIT_USAGE
        );
    }

    #[test]
    fn verify_text() {
        let out = go(&["verify", "--suite", "closed-form", "--n", "50"]).unwrap();
        assert_eq!(out.code, EXIT_OK);
        assert_eq!(out.output.lines().count(), 3);
        assert!(out.output.lines().all(|l| l.starts_with("PASS")));
    }
}
