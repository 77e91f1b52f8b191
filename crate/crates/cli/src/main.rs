//! `g2verify`: runs the exact verification suites and writes reports.
//!
//! Exit status: 0 when every check passes, 1 when any check fails, 2 for
//! configuration errors.

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use g2core::registry::{catalog, RunConfig, Suite, SuiteSpec};
use g2core::report::{run_suite, with_threads, CheckReport, RunRecord, Status};

use config::{FileConfig, Format};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] g2core::Error),

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Parser, Debug)]
#[command(name = "g2verify", version, about = "Exact verification of G2-instanton identities on the 7-sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a suite: algebra, structures, appendix, instanton, deformation or all.
    Suite(SuiteArgs),
    /// Print every check id with its suite and what it verifies.
    List {
        /// Only list checks of this suite.
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(Args, Debug)]
struct SuiteArgs {
    name: String,
    /// Number of seeded sample points per check.
    #[arg(long)]
    points: Option<usize>,
    /// Seed for the sample point generator.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Report format: json or md.
    #[arg(long)]
    format: Option<Format>,
    /// Reject sample points on x = 0 or y = 0.
    #[arg(long)]
    exclude_axes: bool,
    /// Worker threads for point loops.
    #[arg(long)]
    parallel: Option<usize>,
    /// Record per-check wall time (makes reports nondeterministic).
    #[arg(long)]
    timings: bool,
    /// Flat key = value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra G2 structure for the instanton pair checks (repeatable).
    #[arg(long = "structure")]
    structures: Vec<String>,
    /// Extra connection for the instanton pair checks (repeatable).
    #[arg(long = "connection")]
    connections: Vec<String>,
}

const DEFAULT_POINTS: usize = 20;
const DEFAULT_SEED: u64 = 1;

struct Resolved {
    spec: SuiteSpec,
    report: Option<PathBuf>,
    format: Format,
    parallel: Option<usize>,
    timings: bool,
}

fn resolve(args: SuiteArgs) -> Result<Resolved, CliError> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let suite: Suite = args.name.parse()?;
    let points = args.points.or(file.points).unwrap_or(DEFAULT_POINTS);
    if points == 0 {
        return Err(CliError::Config("--points must be at least 1".into()));
    }
    let parallel = args.parallel.or(file.parallel);
    if parallel == Some(0) {
        return Err(CliError::Config("--parallel must be at least 1".into()));
    }
    let config = RunConfig {
        points,
        seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        exclude_axes: args.exclude_axes || file.exclude_axes.unwrap_or(false),
    };
    let mut spec = SuiteSpec::new(suite, config);
    spec.structures = if args.structures.is_empty() { file.structures.unwrap_or_default() } else { args.structures };
    spec.connections = if args.connections.is_empty() { file.connections.unwrap_or_default() } else { args.connections };
    Ok(Resolved {
        spec,
        report: args.report.or(file.report),
        format: args.format.or(file.format).unwrap_or_default(),
        parallel,
        timings: args.timings || file.timings.unwrap_or(false),
    })
}

fn progress(r: &RunRecord) {
    let status = match r.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skipped => "SKIP",
    };
    let mut line = format!("{status} {} ({} points)", r.check_id, r.points_tested);
    if let Some(w) = &r.witness {
        line.push_str(&format!(": {}", w.detail));
    }
    eprintln!("{line}");
}

fn render(report: &CheckReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Md => report.to_markdown(),
    }
}

fn run(args: SuiteArgs) -> Result<bool, CliError> {
    let r = resolve(args)?;
    // fail on bad labels before any work starts
    r.spec.plan()?;
    let go = || run_suite(&r.spec, r.timings, progress);
    let report = match r.parallel {
        Some(n) => with_threads(n, go)??,
        None => go()?,
    };
    let text = render(&report, r.format);
    match &r.report {
        Some(path) => std::fs::write(path, &text).map_err(|e| CliError::Io {
            path: path.clone(),
            source: e,
        })?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source: e,
            })?;
        }
    }
    let failed = report.failures().count();
    eprintln!("{} checks, {} failed", report.runs.len(), failed);
    Ok(failed == 0)
}

fn list(suite: Option<String>) -> Result<(), CliError> {
    let filter: Option<Suite> = suite.map(|s| s.parse()).transpose()?;
    for c in catalog() {
        if filter.map_or(true, |f| f == Suite::All || f == c.suite) {
            println!("{}\t{}\t{}", c.id, c.suite, c.anchor);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Suite(args) => run(args),
        Command::List { suite } => list(suite).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("g2verify: {e}");
            ExitCode::from(2)
        }
    }
}
