use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use weakperf::cli::{
    cmd_content, cmd_generate, cmd_harmonic_bound, cmd_kernel_profile, cmd_poincare_profile,
    cmd_test_perfectness, cmd_verify_theorems, ContentArgs, GenerateArgs, HarmonicBoundArgs,
    TestPerfectnessArgs, VerifyArgs,
};
use weakperf::config::load_config;
use weakperf::report::{EXIT_CONFIG_ERROR, EXIT_NUMERIC_ERROR};
use weakperf::Error;

/// Constructs weakly uniformly perfect planar sets and numerically
/// certifies the kernel, density, harmonic-measure, and content
/// estimates they satisfy. Set `WEAKPERF_PRECISION=double|extended` to
/// select the arithmetic mode recorded in reports.
#[derive(Parser)]
#[command(name = "weakperf", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a Cantor-type set: point cloud, lengths, and tree dumps.
    Generate(GenerateCli),
    /// Test h-uniform perfectness of a set sample.
    TestPerfectness(TestPerfectnessCli),
    /// Emit the annulus kernel profile CSV.
    KernelProfile(KernelProfileCli),
    /// Emit a Poincare density profile CSV.
    PoincareProfile(PoincareProfileCli),
    /// Emit harmonic-measure bound CSV rows.
    HarmonicBound(HarmonicBoundCli),
    /// Content upper/lower estimates for a set and gauge.
    Content(ContentCli),
    /// Run the full verification harness.
    VerifyTheorems(VerifyCli),
}

#[derive(Args)]
struct GenerateCli {
    /// Set spec, e.g. u1:l0=0.1,alpha=2,depth=6
    #[arg(long)]
    set: String,
    /// Depth of the sampled disc-tree dump (0 = skip)
    #[arg(long, default_value_t = 0)]
    tree_depth: usize,
    /// Gauge coefficient for the tree construction
    #[arg(long, default_value_t = 0.5)]
    c0: f64,
    /// Sibling radius fraction, in (0, 1/2)
    #[arg(long, default_value_t = 0.4)]
    c_tilde: f64,
    /// Root scale of the tree (default l0/2)
    #[arg(long)]
    root_scale: Option<f64>,
    /// Output path prefix
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct TestPerfectnessCli {
    #[arg(long)]
    set: String,
    /// Gauge literal, e.g. h1:alpha=2,C=0.5
    #[arg(long)]
    gauge: Option<String>,
    /// Fit the gauge from this family instead: u1 | u2
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    r0: Option<f64>,
    /// Certificate JSON output path
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct KernelProfileCli {
    /// Comma-separated inner ratios (default acceptance grid)
    #[arg(long, default_value = "0.01,0.05,0.1,0.2,0.3,0.4,0.5")]
    r_grid: String,
    #[arg(long, default_value = "0.1,0.25,0.5")]
    t_grid: String,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// CSV output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PoincareProfileCli {
    /// Domain spec: sym:R=2 | cen:r=1,m=1 | punct
    #[arg(long)]
    domain: String,
    #[arg(long, default_value_t = 20)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HarmonicBoundCli {
    /// phi | chen | lhmd1 | lhmd2
    #[arg(long)]
    method: String,
    #[arg(long, default_value_t = 0.2)]
    r: f64,
    #[arg(long, default_value_t = 0.05)]
    kappa: f64,
    #[arg(long, default_value_t = 1.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    #[arg(long, default_value_t = 1.0)]
    c_kappa: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, default_value_t = 1.0)]
    c3: f64,
    #[arg(long, default_value_t = 10)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ContentCli {
    /// Gauge literal, e.g. g1:gamma=1,C2=0.05,cap=0.2
    #[arg(long)]
    gauge: String,
    #[arg(long)]
    set: String,
    /// Disc-tree depth for the mass-distribution lower bound
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0xC0FFEE)]
    seed: u64,
    #[arg(long, default_value_t = 18.0)]
    factor: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyCli {
    /// Config file with a [verify-theorems] section
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated check groups overriding the config
    #[arg(long)]
    checks: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// JSON report path
    #[arg(long)]
    out_json: Option<String>,
    /// CSV report path
    #[arg(long)]
    out_csv: Option<String>,
}

fn parse_grid(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("bad grid value `{x}`: {e}")))
        })
        .collect()
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn std::io::Write>, Error> {
    Ok(match path {
        Some(p) => {
            if let Some(parent) = p.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            Box::new(std::io::BufWriter::new(std::fs::File::create(p)?))
        }
        None => Box::new(std::io::stdout()),
    })
}

fn run() -> Result<i32, Error> {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout();
    match cli.command {
        Command::Generate(a) => {
            cmd_generate(
                &GenerateArgs {
                    set: a.set,
                    tree_depth: a.tree_depth,
                    c0: a.c0,
                    c_tilde: a.c_tilde,
                    root_scale: a.root_scale,
                    out_prefix: a.out,
                },
                &mut stdout,
            )?;
            Ok(0)
        }
        Command::TestPerfectness(a) => cmd_test_perfectness(
            &TestPerfectnessArgs {
                set: a.set,
                gauge: a.gauge,
                family: a.family,
                r0: a.r0,
                out_json: a.out,
            },
            &mut stdout,
        ),
        Command::KernelProfile(a) => {
            let mut w = open_out(&a.out)?;
            cmd_kernel_profile(
                &parse_grid(&a.r_grid)?,
                &parse_grid(&a.t_grid)?,
                a.tol,
                &mut w,
            )?;
            Ok(0)
        }
        Command::PoincareProfile(a) => {
            let mut w = open_out(&a.out)?;
            cmd_poincare_profile(&a.domain, a.points, &mut w)?;
            Ok(0)
        }
        Command::HarmonicBound(a) => {
            let mut w = open_out(&a.out)?;
            cmd_harmonic_bound(
                &HarmonicBoundArgs {
                    method: a.method,
                    r: a.r,
                    kappa: a.kappa,
                    alpha: a.alpha,
                    c: a.c,
                    c_kappa: a.c_kappa,
                    gamma: a.gamma,
                    eta: a.eta,
                    c3: a.c3,
                    points: a.points,
                },
                &mut w,
            )?;
            Ok(0)
        }
        Command::Content(a) => {
            let mut w = open_out(&a.out)?;
            cmd_content(
                &ContentArgs {
                    gauge: a.gauge,
                    set: a.set,
                    tree_depth: a.depth,
                    trials: a.trials,
                    seed: a.seed,
                    factor: a.factor,
                },
                &mut w,
            )?;
            Ok(0)
        }
        Command::VerifyTheorems(a) => {
            let cfg = match &a.config {
                Some(path) => load_config(path)?,
                None => Default::default(),
            };
            let mut args = VerifyArgs::from_config(&cfg)?;
            if let Some(checks) = &a.checks {
                args.checks = if checks.trim().is_empty() {
                    Vec::new()
                } else {
                    checks.split(',').map(|s| s.trim().to_string()).collect()
                };
            }
            if let Some(t) = a.trials {
                args.trials = t;
            }
            if let Some(s) = a.seed {
                args.seed = s;
            }
            if a.out_json.is_some() {
                args.out_json = a.out_json;
            }
            if a.out_csv.is_some() {
                args.out_csv = a.out_csv;
            }
            let report = cmd_verify_theorems(&args, &mut stdout)?;
            Ok(report.exit_code)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config(_) | Error::Io(_) => EXIT_CONFIG_ERROR,
                _ => EXIT_NUMERIC_ERROR,
            };
            ExitCode::from(code as u8)
        }
    }
}
