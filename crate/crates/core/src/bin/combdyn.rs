use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use combdyn::datagen::{FieldSample, Preset};
use combdyn::io::{
    export_arrows, export_critical, export_dot, read_field_csv, read_landmarks_csv, read_relation_csv, write_field_csv,
    Report,
};
use combdyn::pipeline::{build_complex, run_pipeline, ComplexKind, DowkerInput, GradientMode, PipelineConfig};

/// Thread count for cost evaluation.
const THREADS_VAR: &str = "COMBDYN_THREADS";

#[derive(Parser)]
#[command(
    name = "combdyn",
    version,
    about = "Combinatorial dynamical systems from sampled vector fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a built-in dataset as a field CSV.
    Gen {
        /// toy, gradient_toy, intro, lotka_volterra, sink, lorenz, lorenz_desk
        preset: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build, solve and analyse; write the JSON report.
    Run(RunArgs),
    /// Check a report against the complex rebuilt from its input.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        landmarks: Option<PathBuf>,
        #[arg(long)]
        relation: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Delaunay2d,
    Cubical,
    Voxel,
    Dowker,
}

#[derive(Clone, Copy, ValueEnum)]
enum GradientArg {
    Off,
    Sweep,
    Constraints,
}

#[derive(Args)]
struct RunArgs {
    /// Field CSV with header x1..xd,v1..vd.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "delaunay2d")]
    complex: KindArg,
    #[arg(long, default_value_t = 0.75)]
    alpha: f64,
    /// Rounds of barycentric subdivision.
    #[arg(long, default_value_t = 0)]
    subdivide: u32,
    #[arg(long, value_enum, default_value = "off")]
    gradient: GradientArg,
    /// Lattice pitch for cubical and voxel complexes.
    #[arg(long)]
    side: Option<f64>,
    /// Ball radius of the Dowker relation.
    #[arg(long)]
    radius: Option<f64>,
    /// Landmark CSV with header y1..yd.
    #[arg(long)]
    landmarks: Option<PathBuf>,
    /// 0/1 matrix, one row per landmark, replacing the ball relation.
    #[arg(long)]
    relation: Option<PathBuf>,
    /// Search limit of the cycle-constrained solve.
    #[arg(long, default_value_t = 20_000_000)]
    node_limit: u64,
    /// JSON report path.
    #[arg(long)]
    out: PathBuf,
    /// Multi-flow graph in DOT format.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Arrow CSV; critical cells go to `<stem>.critical.csv` beside it.
    #[arg(long)]
    arrows: Option<PathBuf>,
}

type Failure = Box<dyn std::error::Error>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen { preset, out } => gen(&preset, &out),
        Command::Run(args) => run(&args),
        Command::Verify {
            input,
            report,
            landmarks,
            relation,
        } => verify(&input, &report, landmarks.as_deref(), relation.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .parse()
            .map_err(|_| format!("{THREADS_VAR} must be a positive integer, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn with_path<T, E: std::fmt::Display>(path: &Path, r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| format!("{}: {e}", path.display()).into())
}

fn read_sample(path: &Path) -> Result<FieldSample, Failure> {
    let file = with_path(path, File::open(path))?;
    with_path(path, read_field_csv(file))
}

fn read_dowker(landmarks: Option<&Path>, relation: Option<&Path>) -> Result<Option<DowkerInput>, Failure> {
    let Some(lp) = landmarks else {
        return Ok(None);
    };
    let landmarks = with_path(lp, read_landmarks_csv(with_path(lp, File::open(lp))?))?;
    let relation = match relation {
        Some(rp) => Some(with_path(rp, read_relation_csv(with_path(rp, File::open(rp))?))?),
        None => None,
    };
    Ok(Some(DowkerInput { landmarks, relation }))
}

fn gen(preset: &str, out: &Path) -> Result<(), Failure> {
    let preset: Preset = preset.parse()?;
    let file = with_path(out, File::create(out))?;
    with_path(out, write_field_csv(&preset.sample(), file))
}

fn run(args: &RunArgs) -> Result<(), Failure> {
    let config = PipelineConfig {
        complex: match args.complex {
            KindArg::Delaunay2d => ComplexKind::Delaunay2d,
            KindArg::Cubical => ComplexKind::Cubical,
            KindArg::Voxel => ComplexKind::Voxel,
            KindArg::Dowker => ComplexKind::Dowker,
        },
        alpha: args.alpha,
        subdivide: args.subdivide,
        gradient: match args.gradient {
            GradientArg::Off => GradientMode::Off,
            GradientArg::Sweep => GradientMode::Sweep,
            GradientArg::Constraints => GradientMode::Constraints,
        },
        side: args.side,
        radius: args.radius,
        node_limit: args.node_limit,
    };
    let sample = read_sample(&args.input)?;
    let dowker = read_dowker(args.landmarks.as_deref(), args.relation.as_deref())?;
    let analysis = run_pipeline(&config, &sample, dowker.as_ref())?;
    let report = Report::new(&config, &analysis);
    with_path(&args.out, fs::write(&args.out, report.to_json()?))?;
    if let Some(p) = &args.dot {
        with_path(p, fs::write(p, export_dot(&analysis)))?;
    }
    if let Some(p) = &args.arrows {
        with_path(p, fs::write(p, export_arrows(&analysis)))?;
        let crit = p.with_extension("critical.csv");
        with_path(&crit, fs::write(&crit, export_critical(&analysis)))?;
    }
    println!(
        "cells {} | pairs {} | critical {:?} | multi-cell SCCs {} | objective {:.6} at alpha {}",
        analysis.complex.len(),
        analysis.decomposition.matched,
        analysis.report.census,
        report.scc.len(),
        analysis.matching.objective,
        analysis.alpha
    );
    Ok(())
}

fn verify(input: &Path, report: &Path, landmarks: Option<&Path>, relation: Option<&Path>) -> Result<(), Failure> {
    let text = with_path(report, fs::read_to_string(report))?;
    let report_data = with_path(report, Report::from_json(&text))?;
    let sample = read_sample(input)?;
    let dowker = read_dowker(landmarks, relation)?;
    let (complex, vectors) = build_complex(&report_data.config_echo, &sample, dowker.as_ref())?;
    let problems = report_data.check(&complex, &vectors);
    if problems.is_empty() {
        println!("ok: {} cells, {} pairs", complex.len(), report_data.matching.len());
        Ok(())
    } else {
        for p in &problems {
            eprintln!("{p}");
        }
        Err(format!("{} problem(s) in {}", problems.len(), report.display()).into())
    }
}
