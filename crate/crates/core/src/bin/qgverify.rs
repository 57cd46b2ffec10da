use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qgverify::suite::{list_suites, run_suite, SuiteConfig, SuiteName};
use qgverify::{Error, HalfInt, Precision};

#[derive(Parser)]
#[command(name = "qgverify", version, about = "Verification suites for quantum SU(2), the Podleś sphere and FO(Q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite and write a JSON report.
    Run(RunArgs),
    /// Print the suite catalog with parameters and anchors.
    ListSuites,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<f64>,
    /// Truncation spin, "n" or "n/2".
    #[arg(long)]
    lmax: Option<HalfInt>,
    #[arg(long = "t-grid", default_value_t = 11)]
    t_grid: usize,
    #[arg(long, default_value_t = 3)]
    n: i64,
    /// Truncation degree of the Koszul complex.
    #[arg(long = "D", default_value_t = 10)]
    d: usize,
    #[arg(long = "tol-identity", default_value_t = 1e-10)]
    tol_identity: f64,
    #[arg(long = "tol-decay", default_value_t = 1e-8)]
    tol_decay: f64,
    /// Cut-off spin for the rotation tails (default floor(lmax/2)).
    #[arg(long = "l0")]
    l0: Option<HalfInt>,
    #[arg(long)]
    out: PathBuf,
    /// Directory for CSV plot data.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long = "inject-sign-fault", hide = true)]
    inject_sign_fault: bool,
}

fn needs_q(s: SuiteName) -> bool {
    !matches!(s, SuiteName::Koszul | SuiteName::Foq)
}

fn needs_lmax(s: SuiteName) -> bool {
    !matches!(s, SuiteName::Koszul | SuiteName::Fusion | SuiteName::Foq)
}

fn config(a: &RunArgs) -> Result<SuiteConfig, Error> {
    let suite: SuiteName = a.suite.parse()?;
    let q = match a.q {
        Some(q) => q,
        None if needs_q(suite) => return Err(Error::Usage(format!("suite {suite} needs --q"))),
        None => 0.5,
    };
    let lmax = match a.lmax {
        Some(l) => l,
        None if needs_lmax(suite) => return Err(Error::Usage(format!("suite {suite} needs --lmax"))),
        None => HalfInt::from_int(1),
    };
    let mut c = SuiteConfig::new(suite, q, lmax);
    c.t_grid = a.t_grid;
    c.n = a.n;
    c.d = a.d;
    c.precision = Precision::new(a.tol_identity, a.tol_decay)?;
    c.seed = a.seed;
    c.l0 = a.l0;
    c.sign_fault = a.inject_sign_fault;
    Ok(c)
}

fn run(a: &RunArgs) -> Result<bool, Error> {
    let c = config(a)?;
    let out = run_suite(&c)?;
    out.report.write_json(&a.out)?;
    if let Some(dir) = &a.csv {
        std::fs::create_dir_all(dir)?;
        for (name, body) in &out.csv {
            std::fs::write(dir.join(name), body)?;
        }
    }
    let r = &out.report;
    let failed: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    println!(
        "{}: {} ({} checks, {} failed) in {} ms",
        r.suite,
        if r.passed() { "pass" } else { "FAIL" },
        r.checks.len(),
        failed.len(),
        r.wall_time_ms
    );
    for f in failed {
        println!("  failed: {f}");
    }
    Ok(r.passed())
}

fn print_catalog() -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    for s in list_suites() {
        writeln!(out, "{:<11} {}", s.name.as_str(), s.summary)?;
        writeln!(out, "{:<11} parameters: {}", "", s.parameters)?;
        if !s.anchors.is_empty() {
            writeln!(out, "{:<11} anchors: {}", "", s.anchors.join("; "))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListSuites => match print_catalog() {
            // A closed pipe (e.g. `| head`) is not an error.
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
            _ => ExitCode::SUCCESS,
        },
        Command::Run(args) => match run(&args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
    }
}
