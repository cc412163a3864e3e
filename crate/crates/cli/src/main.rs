mod error;
mod input;
mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use drroots::experiments::{
    conjecture1_experiment, conjecture1_trials, conjecture2_experiment, conjecture3_experiment,
    cubic_scan, total_radians_experiment, write_quotient_csv, write_report, BasinAggregation,
    CubicScanConfig, ExperimentReport, TrialEnsembleConfig, DESK_TRIALS,
};
use drroots::geometry::{covered, dr_disks_from};
use drroots::{
    cascade_solve_about, critical_points, iota_for_root, CascadeConfig, Closeness, Complex64,
    RootForm,
};
use serde::Serialize;

use error::CliError;
use input::Polynomial;

#[derive(Parser)]
#[command(
    name = "drroots",
    version,
    about = "Derivative-root annuli and cascade root finding"
)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Increase log detail on stderr (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PolyArgs {
    /// Ascending coefficients as whitespace-separated "re,im" literals.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Roots of a monic polynomial as "re,im" literals.
    #[arg(long, allow_hyphen_values = true)]
    roots: Option<String>,
    /// File of coefficients, same grammar, `#` starts a comment.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl PolyArgs {
    fn polynomial(&self) -> Result<Polynomial, CliError> {
        Polynomial::from_sources(
            self.coeffs.as_deref(),
            self.roots.as_deref(),
            self.file.as_deref(),
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Find all roots with the derivative-chain cascade.
    Solve {
        #[command(flatten)]
        poly: PolyArgs,
        /// Coefficients are in powers of (z − center).
        #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
        center: Option<Complex64>,
        /// Extract one root at a time and deflate.
        #[arg(long)]
        deflate: bool,
        /// Write a JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate DR-disks and annuli, optionally drawing them.
    Annuli {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, default_value_t = 0.66)]
        iota1: f64,
        #[arg(long, default_value_t = 1.33)]
        iota2: f64,
        /// Write an SVG figure.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write a JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded experiment and write its report.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    C1,
    C2,
    C3,
    CubicScan,
    TotalRadians,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::C1 => "c1",
            Kind::C2 => "c2",
            Kind::C3 => "c3",
            Kind::CubicScan => "cubic-scan",
            Kind::TotalRadians => "total-radians",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Additive,
    Multiplicative,
}

#[derive(Clone, Copy, ValueEnum)]
enum Aggregation {
    BestCircle,
    EveryPair,
}

#[derive(Args)]
struct ExperimentArgs {
    kind: Kind,
    #[arg(long, default_value_t = 10)]
    degree: usize,
    #[arg(long, default_value_t = DESK_TRIALS)]
    trials: usize,
    #[arg(long, env = "DRROOTS_SEED", default_value_t = 1)]
    seed: u64,
    /// Lattice spacing for cubic-scan.
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    /// Largest |a| for cubic-scan.
    #[arg(long, default_value_t = 50.0)]
    radius_cap: f64,
    /// How a root picks its circle in c1.
    #[arg(long, value_enum, default_value_t = Metric::Additive)]
    metric: Metric,
    /// Reduction of basin counts in c2.
    #[arg(long, value_enum, default_value_t = Aggregation::BestCircle)]
    aggregation: Aggregation,
    /// Report path (default: <kind>.json).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-trial quotient extremes as CSV (c1 only).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Record start and finish times in the report.
    #[arg(long)]
    timestamps: bool,
}

fn parse_complex_arg(s: &str) -> Result<Complex64, String> {
    input::parse_complex(s).map_err(|e| e.to_string())
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Parse(format!("cannot serialize: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(io_error(path))
}

#[derive(Serialize)]
struct SolveReport {
    degree: usize,
    center: Complex64,
    deflate: bool,
    roots: Vec<Complex64>,
    residuals: Vec<f64>,
    clustered: Vec<bool>,
    per_level_iterations: Vec<usize>,
    per_level_starts: Vec<usize>,
}

fn solve(
    poly: &PolyArgs,
    center: Option<Complex64>,
    deflate: bool,
    out: Option<&Path>,
) -> Result<String, CliError> {
    let centre = center.unwrap_or_default();
    let local = match poly.polynomial()? {
        Polynomial::Coeffs(p) => p,
        Polynomial::Roots(r) => {
            // roots are absolute; express them about the centre
            let shifted: Vec<Complex64> = r.roots().iter().map(|z| z - centre).collect();
            RootForm::monic(shifted)?.to_coeffs()
        }
    };
    let cfg = CascadeConfig {
        deflate_mode: deflate,
        ..CascadeConfig::default()
    };
    let result = cascade_solve_about(&local, centre, &cfg)?;
    let mut text = String::from("# re im scaled_residual clustered\n");
    for ((z, r), cl) in result
        .roots
        .iter()
        .zip(&result.residuals)
        .zip(&result.clustered)
    {
        text.push_str(&format!("{} {} {:e} {}\n", z.re, z.im, r, cl));
    }
    if let Some(path) = out {
        write_json(
            &SolveReport {
                degree: result.roots.len(),
                center: centre,
                deflate,
                roots: result.roots.clone(),
                residuals: result.residuals.clone(),
                clustered: result.clustered.clone(),
                per_level_iterations: result.per_level_iterations.clone(),
                per_level_starts: result.per_level_starts.clone(),
            },
            path,
        )?;
    }
    Ok(text)
}

#[derive(Serialize)]
struct DiskRow {
    center: Complex64,
    rho: Option<f64>,
    inner: Option<f64>,
    outer: Option<f64>,
}

#[derive(Serialize)]
struct RootRow {
    root: Complex64,
    circle_index: usize,
    quotient: f64,
    covered: bool,
}

#[derive(Serialize)]
struct AnnuliReport {
    iota1: f64,
    iota2: f64,
    disks: Vec<DiskRow>,
    roots: Vec<RootRow>,
}

fn annuli(
    poly: &PolyArgs,
    iota1: f64,
    iota2: f64,
    svg_path: Option<&Path>,
    out: Option<&Path>,
) -> Result<String, CliError> {
    if !(iota1 > 0.0 && iota2 >= iota1 && iota2.is_finite()) {
        return Err(CliError::Usage(format!(
            "need 0 < iota1 <= iota2, got {iota1} and {iota2}"
        )));
    }
    let p = match poly.polynomial()? {
        Polynomial::Roots(r) => r,
        Polynomial::Coeffs(c) => {
            log::info!(
                "computing roots of the degree-{} input first",
                c.coeffs().len() - 1
            );
            let solved = cascade_solve_about(&c, Complex64::default(), &CascadeConfig::default())?;
            RootForm::new(solved.roots, c.leading())?
        }
    };
    let cs = critical_points(&p)?;
    let disks = dr_disks_from(&p, &cs);
    let annuli: Vec<_> = disks.iter().map(|d| d.annulus(iota1, iota2)).collect();

    let finite = |d: &drroots::DrDisk| d.radius.is_finite().then(|| d.radius.value());
    let disk_rows: Vec<DiskRow> = disks
        .iter()
        .map(|d| DiskRow {
            center: d.center,
            rho: finite(d),
            inner: finite(d).map(|r| iota1 * r),
            outer: finite(d).map(|r| iota2 * r),
        })
        .collect();
    let root_rows: Vec<RootRow> = p
        .roots()
        .iter()
        .map(|&z| {
            let rec = iota_for_root(z, &disks);
            RootRow {
                root: z,
                circle_index: rec.circle_index,
                quotient: rec.quotient,
                covered: covered(z, &disks, iota1, iota2),
            }
        })
        .collect();

    let opt = |v: Option<f64>| v.map_or("inf".to_string(), |x| x.to_string());
    let mut text = String::from("# zeta_re zeta_im rho inner outer\n");
    for d in &disk_rows {
        text.push_str(&format!(
            "{} {} {} {} {}\n",
            d.center.re,
            d.center.im,
            opt(d.rho),
            opt(d.inner),
            opt(d.outer)
        ));
    }
    text.push_str("# root_re root_im circle quotient covered\n");
    for r in &root_rows {
        text.push_str(&format!(
            "{} {} {} {} {}\n",
            r.root.re, r.root.im, r.circle_index, r.quotient, r.covered
        ));
    }
    let inside = root_rows.iter().filter(|r| r.covered).count();
    log::info!(
        "{inside} of {} roots inside the annulus union",
        root_rows.len()
    );

    if let Some(path) = svg_path {
        fs::write(path, svg::render(p.roots(), &cs.zetas, &annuli)).map_err(io_error(path))?;
    }
    if let Some(path) = out {
        write_json(
            &AnnuliReport {
                iota1,
                iota2,
                disks: disk_rows,
                roots: root_rows,
            },
            path,
        )?;
    }
    Ok(text)
}

fn experiment(args: &ExperimentArgs) -> Result<String, CliError> {
    let mut cfg = TrialEnsembleConfig::new(args.degree, args.trials, args.seed);
    cfg.closeness = match args.metric {
        Metric::Additive => Closeness::Additive,
        Metric::Multiplicative => Closeness::Multiplicative,
    };
    cfg.aggregation = match args.aggregation {
        Aggregation::BestCircle => BasinAggregation::BestCirclePerRoot,
        Aggregation::EveryPair => BasinAggregation::EveryPair,
    };
    if args.csv.is_some() && !matches!(args.kind, Kind::C1) {
        return Err(CliError::Usage("--csv applies to c1 only".into()));
    }
    let report: ExperimentReport = match args.kind {
        Kind::C1 => {
            let report = conjecture1_experiment(&cfg)?;
            if let Some(path) = &args.csv {
                let trials = conjecture1_trials(&cfg)?;
                write_quotient_csv(&trials, path).map_err(|e| match e {
                    drroots::Error::Csv(err) => CliError::Io {
                        path: path.clone(),
                        source: std::io::Error::other(err),
                    },
                    other => other.into(),
                })?;
            }
            report
        }
        Kind::C2 => conjecture2_experiment(&cfg)?,
        Kind::C3 => conjecture3_experiment(&cfg)?,
        Kind::TotalRadians => total_radians_experiment(&cfg)?,
        Kind::CubicScan => cubic_scan(&CubicScanConfig {
            grid_step: args.step,
            radius_cap: args.radius_cap,
        })?,
    };
    let report = if args.timestamps {
        report
    } else {
        report.without_timestamps()
    };
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.json", args.kind.name())));
    write_report(&report, &out)?;
    log::info!(
        "{} accepted, {} rejected; report at {}",
        report.accepted_trials,
        report.rejected_trials,
        out.display()
    );
    Ok(format!("{}\n", report.summary()))
}

fn run(cli: Cli) -> Result<String, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot set thread count: {e}")))?;
    }
    match &cli.command {
        Command::Solve {
            poly,
            center,
            deflate,
            out,
        } => solve(poly, *center, *deflate, out.as_deref()),
        Command::Annuli {
            poly,
            iota1,
            iota2,
            svg,
            out,
        } => annuli(poly, *iota1, *iota2, svg.as_deref(), out.as_deref()),
        Command::Experiment(args) => experiment(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .init();

    match run(cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(5);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("drroots: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
