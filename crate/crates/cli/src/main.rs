use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use polyprobe::reconstruct::{ReconstructError, VertexBudget};
use polyprobe::scalar::parse_scalar;
use polyprobe_cli::bench::{format_table, parse_range, rows, run_bench};
use polyprobe_cli::problem::{AlgorithmChoice, InitSpec, ProblemSpec};
use polyprobe_cli::run::{execute, resolve_algorithm, RunError, RunSummary, EXIT_INPUT, EXIT_OK};
use polyprobe_cli::svg::render;
use polyprobe_cli::trace::TraceFile;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

/// Recover polytope vertices from a support-function oracle.
///
/// Exit codes: 0 success, 1 input error, 2 oracle inconsistent with an exact
/// support function, 3 vertex budget too small.
#[derive(Parser)]
#[command(name = "polyprobe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct the hidden polytope of a problem file.
    Reconstruct(ReconstructArgs),
    /// Sweep random instances for every row of the call-bound table.
    Bench(BenchArgs),
    /// Render a planar trace file as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct ReconstructArgs {
    /// Problem file (JSON).
    problem: PathBuf,
    /// Vertex budget: a positive integer or "infinity". Overrides the file.
    #[arg(long)]
    budget: Option<VertexBudget>,
    /// auto, r1, r2, nf1, nf2 or nf3. Overrides the file.
    #[arg(long)]
    algorithm: Option<AlgorithmChoice>,
    /// paper-triangle or axis-rectangle. Overrides the file.
    #[arg(long)]
    init: Option<InitSpec>,
    /// Write the per-call trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write an SVG of the run here (planar runs only).
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Keep probing when the last vertex is already pinned down.
    #[arg(long)]
    no_early_stop: bool,
    /// Seed for the noisy oracle.
    #[arg(long, env = "SEED", default_value_t = 0)]
    seed: u64,
    /// Perturb every answer by less than this amount, e.g. 1/100.
    #[arg(long)]
    epsilon: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    /// Dimensions to sweep, e.g. 2..8.
    #[arg(long, default_value = "1..8")]
    dimension_range: String,
    /// Instances per row.
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, env = "SEED", default_value_t = 0)]
    seed: u64,
    /// Write the JSON summary here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Trace file written by `reconstruct --trace`.
    trace: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Problem file, to draw the hidden polygon as well.
    #[arg(long)]
    problem: Option<PathBuf>,
}

fn read_problem(path: &PathBuf) -> Result<ProblemSpec, RunError> {
    let text = fs::read_to_string(path).map_err(|e| RunError::Input(format!("{}: {e}", path.display())))?;
    ProblemSpec::parse(&text).map_err(RunError::Input)
}

fn reconstruct(args: ReconstructArgs) -> Result<i32, RunError> {
    let mut spec = read_problem(&args.problem)?;
    if let Some(b) = args.budget {
        spec.budget.0 = b;
    }
    if let Some(a) = args.algorithm {
        spec.algorithm = a;
    }
    if let Some(i) = args.init {
        spec.init = i;
    }
    spec.validate().map_err(RunError::Input)?;
    let (algorithm, budget) = resolve_algorithm(spec.algorithm, spec.dimension, spec.budget.0)?;
    let noise = match &args.epsilon {
        Some(text) => Some((parse_scalar(text).map_err(|e| RunError::Input(e.to_string()))?, args.seed)),
        None => None,
    };
    let init = spec.init.scheme();
    let report = execute(spec.oracle(), algorithm, budget, &init, !args.no_early_stop, noise)?;

    let summary = RunSummary::new(&report, budget, &init);
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
    let trace = TraceFile::from_report(&report);
    if let Some(path) = &args.trace {
        fs::write(path, trace.to_json()).map_err(|e| RunError::Input(format!("{}: {e}", path.display())))?;
    }
    if let Some(path) = &args.svg {
        let svg = render(&trace, Some(&spec.hidden_points())).map_err(RunError::Input)?;
        fs::write(path, svg).map_err(|e| RunError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(EXIT_OK)
}

fn bench(args: BenchArgs) -> anyhow::Result<()> {
    let dims = parse_range(&args.dimension_range).map_err(anyhow::Error::msg)?;
    let summary = run_bench(&rows(dims), args.count, args.seed);
    print!("{}", format_table(&summary));
    if let Some(path) = &args.out {
        fs::write(path, serde_json::to_string_pretty(&summary)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn render_cmd(args: RenderArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(&args.trace).with_context(|| format!("reading {}", args.trace.display()))?;
    let trace = TraceFile::parse(&text).map_err(anyhow::Error::msg)?;
    let hidden = match &args.problem {
        Some(p) => Some(read_problem(p)?.hidden_points()),
        None => None,
    };
    let svg = render(&trace, hidden.as_deref()).map_err(anyhow::Error::msg)?;
    fs::write(&args.out, svg).with_context(|| format!("writing {}", args.out.display()))?;
    Ok(())
}

fn report_failure(e: &RunError) {
    let kind = match e {
        RunError::Input(_) => "input",
        RunError::Reconstruct(ReconstructError::InconsistentOracle { .. }) => "inconsistent_oracle",
        RunError::Reconstruct(ReconstructError::BudgetExhausted { .. }) => "budget_exhausted",
        RunError::Reconstruct(_) => "reconstruction",
    };
    let body = serde_json::json!({ "error": kind, "message": e.to_string() });
    println!("{}", serde_json::to_string_pretty(&body).expect("error serializes"));
    eprintln!("error: {e}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Reconstruct(args) => reconstruct(args).unwrap_or_else(|e| {
            report_failure(&e);
            e.exit_code()
        }),
        Command::Bench(args) => bench(args).map_or_else(
            |e| {
                eprintln!("error: {e:#}");
                EXIT_INPUT
            },
            |()| EXIT_OK,
        ),
        Command::Render(args) => render_cmd(args).map_or_else(
            |e| {
                eprintln!("error: {e:#}");
                EXIT_INPUT
            },
            |()| EXIT_OK,
        ),
    };
    ExitCode::from(code as u8)
}
