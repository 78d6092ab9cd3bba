//! `multiloc`: batch verifier and OPE calculator.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on errors
//! (bad arguments, engine errors, unwritable report).

mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use multiloc::catalog::checks::VirasoroFamily;
use multiloc::catalog::fields::{derived_field, Params};
use multiloc::catalog::systems::system_by_name;
use multiloc::fieldcalc::{canonicalize, parse_expr_with, FieldExpr};
use multiloc::fock::Cutoffs;
use multiloc::Scalar;

use report::{apply_golden, write_reports, Status};
use suites::{Settings, Suite};

#[derive(Parser)]
#[command(name = "multiloc", version, about = "Exact multilocal OPEs and Fock-space verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: ope, heisenberg, virasoro, iso, symplectic, appendix, fock or all.
    Verify(VerifyArgs),
    /// Print the OPE of two expressions in a named system, e.g. `ope chi2 "<beta_chi>" "<gamma_chi>"`.
    Ope {
        system: String,
        lhs: String,
        rhs: String,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name; `--suite` is accepted too.
    suite: Option<String>,
    #[arg(long = "suite", conflicts_with = "suite")]
    suite_flag: Option<String>,
    /// Single n for the symplectic and appendix suites.
    #[arg(long)]
    n: Option<u32>,
    /// Virasoro family: L1, L2, L3 or solitary.
    #[arg(long)]
    family: Option<String>,
    #[arg(long = "a", default_value = "0")]
    a: String,
    #[arg(long = "b", default_value = "0")]
    b: String,
    #[arg(long, default_value = "0")]
    lambda: String,
    #[arg(long, default_value = "0")]
    mu: String,
    #[arg(long, default_value = "0")]
    kappa: String,
    /// Single field for the fock suite, e.g. h_chi_utw or L3.
    #[arg(long)]
    field: Option<String>,
    /// Energy cutoff E.
    #[arg(long, default_value_t = 6)]
    cutoff_e: i64,
    /// Cap on zero-energy quanta per basis state.
    #[arg(long, default_value_t = 6)]
    cutoff_p: usize,
    #[arg(long, default_value_t = 12)]
    series_order: i32,
    /// Write the JSON report array here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Compare computed texts with `<dir>/<check id>.txt`.
    #[arg(long)]
    golden: Option<PathBuf>,
    /// Rewrite the golden files instead of comparing.
    #[arg(long, requires = "golden")]
    bless: bool,
}

/// Parameters are read in Q(ζ_4) so `i` can be written as `e^1`.
const PARAM_ORDER: u32 = 4;

fn settings(args: &VerifyArgs) -> Result<Settings, String> {
    let scalar = |name: &str, text: &str| Scalar::parse(text, PARAM_ORDER).map_err(|e| format!("--{name} {text}: {e}"));
    let params = Params {
        a: scalar("a", &args.a)?,
        b: scalar("b", &args.b)?,
        lambda: scalar("lambda", &args.lambda)?,
        mu: scalar("mu", &args.mu)?,
        kappa: scalar("kappa", &args.kappa)?,
        ..Params::default()
    };
    let family = args.family.as_deref().map(VirasoroFamily::parse).transpose().map_err(|e| e.to_string())?;
    if args.n == Some(0) {
        return Err("--n must be positive".into());
    }
    Ok(Settings {
        params,
        family,
        n: args.n,
        field: args.field.clone(),
        cutoffs: Cutoffs::new(2 * args.cutoff_e, Some(args.cutoff_p)),
        series_order: args.series_order,
    })
}

fn verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let name = args.suite.as_deref().or(args.suite_flag.as_deref()).unwrap_or("all");
    let suite: Suite = name.parse()?;
    let settings = settings(&args)?;
    let mut reports = settings.run(suite);
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    if let Some(dir) = &args.golden {
        apply_golden(dir, &mut reports, args.bless).map_err(|e| format!("golden files in {}: {e}", dir.display()))?;
    }
    if let Some(path) = &args.report {
        write_reports(path, &reports).map_err(|e| format!("cannot write report {}: {e}", path.display()))?;
    }
    for r in &reports {
        println!("{} {}: {}", r.status.label(), r.id, r.computed);
    }
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let (pass, fail, error) = (count(Status::Pass), count(Status::Fail), count(Status::Error));
    println!("{suite}: {pass} passed, {fail} failed, {error} errors");
    Ok(if error > 0 {
        ExitCode::from(2)
    } else if fail > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn ope(system: &str, lhs: &str, rhs: &str) -> Result<ExitCode, String> {
    let sys = system_by_name(system).map_err(|e| e.to_string())?;
    let resolve = |name: &str| -> multiloc::Result<FieldExpr> {
        let (home, e) = derived_field(name, &Params::default())?;
        if home.name() != sys.name() {
            return Err(multiloc::Error::SystemMismatch { left: home.name().into(), right: sys.name().into() });
        }
        Ok(e)
    };
    let field = |text: &str| {
        let e = parse_expr_with(text, sys.ambient_order(), &resolve).map_err(|e| format!("{text}: {e}"))?;
        canonicalize(&e, &sys).map_err(|e| e.to_string())
    };
    let (a, b) = (field(lhs)?, field(rhs)?);
    let result = a.ope(&b).map_err(|e| e.to_string())?;
    println!("{}", result.to_text());
    println!("locality {}", result.profile());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Ope { system, lhs, rhs } => ope(&system, &lhs, &rhs),
    };
    outcome.unwrap_or_else(|msg| {
        eprintln!("error: {msg}");
        ExitCode::from(2)
    })
}
