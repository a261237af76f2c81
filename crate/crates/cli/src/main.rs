use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use twistorlab_cli::output::render;
use twistorlab_cli::{run_analyze, run_oracle, run_scan_t, Analyses, CliError, Format, MetricSource, OracleSigns, RunConfig, TGrid};
use twistorlab_core::{CatalogParams, Orientation};

#[derive(Parser)]
#[command(name = "twistorlab", version, about = "Curvature blocks and twistor-space metric conditions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-point curvature, twistor and Chern-form report.
    Analyze(Args),
    /// Defects aggregated over samples along a grid of t.
    ScanT(Args),
    /// Numerical checks of the moving-frame formulas on twistor charts.
    Oracle(Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Standard,
    Reversed,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AnalysisArg {
    Blocks,
    Twistor,
    Chern,
}

#[derive(clap::Args)]
struct Args {
    /// Catalog entry: flat, sphere4, s2xs2, cp2_fs, perturbed_flat.
    #[arg(long, conflicts_with = "metric_file", required_unless_present = "metric_file")]
    manifold: Option<String>,
    /// Metric description file.
    #[arg(long)]
    metric_file: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 1.0)]
    r1: f64,
    #[arg(long, default_value_t = 1.0)]
    r2: f64,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[arg(long, value_enum, default_value = "standard")]
    orientation: OrientationArg,
    #[arg(long, conflicts_with_all = ["t_min", "t_max", "t_steps"])]
    t: Option<f64>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    t_steps: Option<usize>,
    /// Number of sample points.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative zero tolerance for the classification flags.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Stencil step of the chart oracle.
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Analyses to include in `analyze` reports.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "blocks,twistor,chern")]
    analyses: Vec<AnalysisArg>,
    /// Which Kähler form the oracle differentiates.
    #[arg(long, value_enum, default_value = "plus")]
    sign: SignArg,
    #[arg(long, hide = true)]
    corrupt_frame: Option<f64>,
}

impl Args {
    fn into_config(self, scan: bool, default_points: usize) -> RunConfig {
        let source = match (self.manifold, self.metric_file) {
            (_, Some(path)) => MetricSource::File(path),
            (Some(name), None) => MetricSource::Catalog {
                name,
                params: CatalogParams {
                    r: self.r,
                    r1: self.r1,
                    r2: self.r2,
                    eps: self.eps,
                    ..Default::default()
                },
            },
            (None, None) => unreachable!("clap requires a metric source"),
        };
        let grid = self.t_min.is_some() || self.t_max.is_some() || self.t_steps.is_some();
        let t = match self.t {
            Some(t) => TGrid::Single { t },
            None if grid || scan => TGrid::Range {
                min: self.t_min.unwrap_or(0.5),
                max: self.t_max.unwrap_or(2.0),
                steps: self.t_steps.unwrap_or(16),
            },
            None => TGrid::Single { t: 1.0 },
        };
        RunConfig {
            source,
            orientation: match self.orientation {
                OrientationArg::Standard => Orientation::Standard,
                OrientationArg::Reversed => Orientation::Reversed,
            },
            t,
            points: self.points.unwrap_or(default_points),
            seed: self.seed,
            tol: self.tol,
            h: self.h,
            format: match self.format {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
            },
            out: self.out,
            analyses: Analyses {
                blocks: self.analyses.contains(&AnalysisArg::Blocks),
                twistor: self.analyses.contains(&AnalysisArg::Twistor),
                chern: self.analyses.contains(&AnalysisArg::Chern),
            },
            signs: match self.sign {
                SignArg::Plus => OracleSigns::Plus,
                SignArg::Minus => OracleSigns::Minus,
                SignArg::Both => OracleSigns::Both,
            },
            corrupt_frame: self.corrupt_frame,
        }
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze(args) => {
            let cfg = args.into_config(false, 20);
            let report = run_analyze(&cfg)?;
            emit(&cfg, &render(&report, "/points", cfg.format)?)
        }
        Command::ScanT(args) => {
            let cfg = args.into_config(true, 20);
            let report = run_scan_t(&cfg)?;
            emit(&cfg, &render(&report, "/rows", cfg.format)?)
        }
        Command::Oracle(args) => {
            let cfg = args.into_config(false, 5);
            let report = run_oracle(&cfg)?;
            emit(&cfg, &render(&report, "/records", cfg.format)?)?;
            if report.pass {
                Ok(())
            } else {
                Err(CliError::numerical("oracle residuals exceed their thresholds"))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
