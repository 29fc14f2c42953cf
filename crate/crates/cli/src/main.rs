//! `ssw`: runs shear shallow water cases, convergence studies and the
//! randomized verification suite.

mod settings;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use ssw_core::cases::CaseSpec;
use ssw_core::grid::Dim;
use ssw_core::solver::{self, SolverError};
use ssw_core::{diagnostics, verify, SchemeOrder, WaveSpeeds};

use settings::{resolve_case, ConfigFile, Settings};

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_ABORT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "ssw", version, about = "Entropy stable solver for the shear shallow water equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a case and write the final field, entropy series and manifest.
    Run(RunArgs),
    /// Run a case with an exact solution on several meshes and tabulate L1(h).
    Converge(ConvergeArgs),
    /// Run the randomized invariant suite.
    Verify(VerifyArgs),
}

/// Overrides shared by `run` and `converge`; unset flags fall back to the
/// config file, then to the case defaults.
#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    case: Option<String>,
    /// o1, o2, o3 or o4.
    #[arg(long)]
    scheme: Option<SchemeOrder>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    tend: Option<f64>,
    /// rusanov or characteristic.
    #[arg(long)]
    wave_speeds: Option<WaveSpeeds>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// File of key=value lines.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Cells in x.
    #[arg(long)]
    n: Option<usize>,
    /// Cells in y; 2D only, defaults to square cells.
    #[arg(long)]
    ny: Option<usize>,
    /// Accepted for uniformity; runs are deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    #[command(flatten)]
    common: Common,
    /// Comma separated list of cell counts, e.g. 50,100,200.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Defaults to a clock-derived seed, which is printed.
    #[arg(long)]
    seed: Option<u64>,
    /// Multiplier on the number of random cases per check.
    #[arg(long, default_value_t = 1)]
    scale: usize,
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Solver(SolverError),
    Output(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Solver(SolverError::InvalidConfig(_)) => EXIT_CONFIG,
            CliError::Solver(_) => EXIT_ABORT,
            CliError::Output(_) => EXIT_FAILURE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Solver(e @ SolverError::Admissibility { neighbourhood, .. }) => {
                writeln!(f, "solver aborted: {e}")?;
                for c in neighbourhood {
                    writeln!(f, "  cell ({}, {}): U = {:?}", c.i, c.j, c.u)?;
                }
                Ok(())
            }
            CliError::Solver(e) => write!(f, "solver aborted: {e}"),
            CliError::Output(m) => write!(f, "{m}"),
        }
    }
}

impl From<diagnostics::DiagnosticsError> for CliError {
    fn from(e: diagnostics::DiagnosticsError) -> Self {
        CliError::Output(e.to_string())
    }
}

/// Case defaults, then the config file, then the flags.
fn resolve(common: &Common, n: Option<usize>, ny: Option<usize>) -> Result<(CaseSpec, Settings), CliError> {
    let file = match &common.config {
        Some(p) => ConfigFile::load(p).map_err(CliError::Config)?,
        None => ConfigFile::default(),
    };
    let base = resolve_case(common.case.as_deref(), &file).map_err(CliError::Config)?;
    let mut s = Settings::defaults(&base);
    s.apply_file(&file).map_err(CliError::Config)?;
    if let Some(v) = common.scheme {
        s.scheme = v;
    }
    if let Some(v) = common.cfl {
        s.cfl = v;
    }
    if let Some(v) = common.tend {
        s.tend = v;
    }
    if let Some(v) = common.wave_speeds {
        s.wave_speeds = v;
    }
    if let Some(v) = n {
        s.n = v;
    }
    if ny.is_some() {
        s.ny = ny;
    }
    let case = s.case_spec(&base).map_err(CliError::Config)?;
    Ok((case, s))
}

fn configure_threads() -> Result<usize, CliError> {
    if let Ok(v) = std::env::var("SSW_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| CliError::Config(format!("SSW_THREADS must be a positive integer, got '{v}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(rayon::current_num_threads())
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let (case, mut s) = resolve(&args.common, args.n, args.ny)?;
    let config = s.scheme_config().map_err(CliError::Config)?;
    let threads = configure_threads()?;
    let ny = s.ny.or(if s.n == case.default_nx { case.default_ny } else { None });
    let rec = solver::run::<f64>(&case, &config, s.n, ny).map_err(CliError::Solver)?;
    if case.dim == Dim::Two {
        s.ny = Some(rec.field.mesh.ny);
    }

    let dir = &args.common.out_dir;
    ensure_dir(dir)?;
    let stem = diagnostics::output_name(&s.case, s.scheme, s.n, None, "");
    let stem = stem.trim_end_matches('.');
    let csv = dir.join(format!("{stem}.csv"));
    let vtk = dir.join(format!("{stem}.vtk"));
    let ent = dir.join(format!("{stem}_entropy.csv"));
    let man = dir.join(format!("{stem}_manifest.txt"));
    diagnostics::write_csv(&rec.field, &csv)?;
    diagnostics::write_vtk(&rec.field, &vtk)?;
    diagnostics::write_entropy_csv(&rec.entropy, &ent)?;

    let mut m = s.to_config_text();
    let _ = writeln!(m, "# final_time={:?}", rec.time);
    let _ = writeln!(m, "# steps={}", rec.steps);
    let _ = writeln!(m, "# rejected_steps={}", rec.rejected);
    let _ = writeln!(m, "# threads={threads}");
    if let Some(seed) = args.seed {
        let _ = writeln!(m, "# seed={seed}");
    }
    write_text(&man, &m)?;

    let first = rec.entropy.first().map_or(0.0, |e| e.1);
    let last = rec.entropy.last().map_or(0.0, |e| e.1);
    println!(
        "{} {} N={} t={:.6} steps={} halved={} entropy {:.6e} -> {:.6e}",
        s.case, s.scheme, s.n, rec.time, rec.steps, rec.rejected, first, last
    );
    for p in [&csv, &vtk, &ent, &man] {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_converge(args: &ConvergeArgs) -> Result<(), CliError> {
    let (case, s) = resolve(&args.common, None, None)?;
    let exact = case
        .exact
        .clone()
        .ok_or_else(|| CliError::Config(format!("case '{}' has no exact solution", s.case)))?;
    if args.n.contains(&0) {
        return Err(CliError::Config("cell counts must be positive".into()));
    }
    let config = s.scheme_config().map_err(CliError::Config)?;
    configure_threads()?;
    let mut data = Vec::new();
    for &n in &args.n {
        let ny = (case.dim == Dim::Two).then_some(n);
        let rec = solver::run::<f64>(&case, &config, n, ny).map_err(CliError::Solver)?;
        let t = rec.time;
        let e = diagnostics::l1_error(&rec.field, |x, y| exact(x, y, t, &case.params), 0)?;
        data.push((n, e));
    }
    let rows = diagnostics::convergence_orders(&data);
    println!("{} {} wave speeds {}", s.case, s.scheme, s.wave_speeds);
    print!("{}", diagnostics::format_convergence_table(&rows));

    let dir = &args.common.out_dir;
    ensure_dir(dir)?;
    let mut csv = String::from("n,l1_error,order\n");
    for r in &rows {
        let order = r.order.map_or(String::new(), |o| format!("{o:?}"));
        let _ = writeln!(csv, "{},{:?},{}", r.n, r.l1_error, order);
    }
    let path = dir.join(format!("{}_{}_convergence.csv", s.case, s.scheme.name()));
    write_text(&path, &csv)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool, CliError> {
    if args.scale == 0 {
        return Err(CliError::Config("scale must be positive".into()));
    }
    let seed = args
        .seed
        .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos() as u64));
    let reports = verify::run_suite(seed, args.scale);
    print!("{}", verify::format_report(seed, &reports));
    let passed = reports.iter().filter(|r| r.passed()).count();
    println!("{passed} of {} checks passed", reports.len());
    Ok(passed == reports.len())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a).map(|_| true),
        Command::Converge(a) => cmd_converge(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILURE),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
