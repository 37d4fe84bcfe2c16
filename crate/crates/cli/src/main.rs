use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qwalk::{GraphKind, HamiltonianKind, TrotterOrdering, WalkParams};
use qwalk_cli::commands::{self, CompareOptions, Metric, SweepRequest, DEFAULT_SWEEP};
use qwalk_cli::output;
use qwalk_cli::{CliError, CliResult, GraphSource, RunConfig};

#[derive(Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Classical and quantum walks on graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Output path (stdout if omitted)
        #[arg(long, short, global = true)]
        out: Option<PathBuf>,
    },
    /// Run one walk and write its distributions and report
    Run(RunArgs),
    /// Run two configurations on the same graph and compare them
    Compare(CompareArgs),
    /// Diagnostic reports
    Report {
        #[command(subcommand)]
        what: ReportKind,
        /// Output path (stdout if omitted)
        #[arg(long, short, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Line {
        size: usize,
    },
    Cycle {
        size: usize,
    },
    Hypercube {
        size: usize,
    },
    Complete {
        size: usize,
    },
    GluedTrees {
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        seed: u64,
    },
    Random {
        size: usize,
        p: f64,
        #[arg(long)]
        seed: u64,
    },
}

impl From<GenKind> for GraphKind {
    fn from(k: GenKind) -> Self {
        match k {
            GenKind::Line { size } => GraphKind::Line { size },
            GenKind::Cycle { size } => GraphKind::Cycle { size },
            GenKind::Hypercube { size } => GraphKind::Hypercube { size },
            GenKind::Complete { size } => GraphKind::Complete { size },
            GenKind::GluedTrees { depth, seed } => GraphKind::GluedTrees { depth, seed },
            GenKind::Random { size, p, seed } => GraphKind::Random { size, p, seed },
        }
    }
}

#[derive(Args, Clone, Default)]
struct GraphArgs {
    /// Graph JSON file
    #[arg(long, conflicts_with = "gen")]
    graph: Option<PathBuf>,
    /// Generator spec such as `cycle:8`, `glued_trees:3:7` or `random:8:0.4:1`
    #[arg(long)]
    gen: Option<GraphKind>,
}

impl GraphArgs {
    fn source(&self) -> Option<GraphSource> {
        match (&self.graph, &self.gen) {
            (Some(p), _) => Some(GraphSource::File(p.clone())),
            (None, Some(k)) => Some(GraphSource::Generate(k.clone())),
            (None, None) => None,
        }
    }

    fn require(&self) -> CliResult<GraphSource> {
        self.source().ok_or_else(|| {
            CliError::Usage("no graph given (use --graph FILE or --gen SPEC)".into())
        })
    }
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    graph: GraphArgs,
    /// Walk kind, e.g. coined or trotter
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    time: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Equal time intervals recorded by the continuous engines
    #[arg(long)]
    samples: Option<usize>,
    /// Trotter slice count
    #[arg(long, short = 'j')]
    slices: Option<usize>,
    #[arg(long)]
    coin: Option<String>,
    #[arg(long)]
    ordering: Option<TrotterOrdering>,
    #[arg(long)]
    hamiltonian: Option<HamiltonianKind>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    start: Option<usize>,
    #[arg(long)]
    trajectories: Option<usize>,
    #[arg(long)]
    record_every: Option<usize>,
    /// Distribution CSV path (stdout if omitted)
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Report JSON path
    #[arg(long)]
    report: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self) -> CliResult<RunConfig> {
        let base = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            graph: self.graph.source(),
            kind: self.kind,
            params: WalkParams {
                alpha: self.alpha,
                gamma: self.gamma,
                time: self.time,
                steps: self.steps,
                samples: self.samples,
                slices: self.slices,
                coin: self.coin,
                ordering: self.ordering,
                hamiltonian: self.hamiltonian,
                seed: self.seed,
                start: self.start,
                trajectories: self.trajectories,
                record_every: self.record_every,
            },
            csv: self.csv,
            report: self.report,
        };
        Ok(base.overlay(flags))
    }
}

#[derive(Args)]
struct CompareArgs {
    /// First run configuration (JSON)
    a: PathBuf,
    /// Second run configuration (JSON)
    b: PathBuf,
    /// Overrides the graph named in the configurations
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum, default_value_t = Metric::All)]
    metric: Metric,
    /// Slice counts for the trotter-against-exact table
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SWEEP)]
    sweep: Vec<usize>,
    /// Run the two configurations one after the other
    #[arg(long)]
    sequential: bool,
    /// Output path (stdout if omitted)
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ReportKind {
    /// Structural summary of a graph
    Graph {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Adjacency against Laplacian continuous-time evolution
    Phase {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        time: f64,
        /// Start vertex; the uniform superposition if omitted
        #[arg(long)]
        start: Option<usize>,
    },
    /// Dense Hamiltonian of the oracle construction against gamma A
    Hamiltonian {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        gamma: f64,
    },
    /// Trotter error against the exact walk as the slice count grows
    Sweep {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        time: f64,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long, default_value = "interleaved")]
        ordering: TrotterOrdering,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SWEEP)]
        slices: Vec<usize>,
        /// Also write the table as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Gen { kind, out } => {
            commands::cmd_gen(&kind.into(), out.as_deref())?;
        }
        Command::Run(args) => {
            commands::cmd_run(&args.into_config()?)?;
        }
        Command::Compare(args) => {
            let a = RunConfig::from_file(&args.a)?;
            let b = RunConfig::from_file(&args.b)?;
            let opts = CompareOptions {
                graph: args.graph.source(),
                metric: args.metric,
                sweep: args.sweep,
                concurrent: !args.sequential,
            };
            let cmp = commands::cmd_compare(&a, &b, &opts)?;
            output::emit(args.out.as_deref(), output::to_json(&cmp).as_bytes())?;
        }
        Command::Report { what, out } => {
            let text = match what {
                ReportKind::Graph { graph } => {
                    output::to_json(&commands::report_graph(&graph.require()?)?)
                }
                ReportKind::Phase {
                    graph,
                    gamma,
                    time,
                    start,
                } => output::to_json(&commands::report_phase(
                    &graph.require()?,
                    gamma,
                    time,
                    start,
                )?),
                ReportKind::Hamiltonian { graph, gamma } => {
                    let (check, violation) =
                        commands::report_hamiltonian(&graph.require()?, gamma)?;
                    output::emit(out.as_deref(), output::to_json(&check).as_bytes())?;
                    return violation.map_or(Ok(()), Err);
                }
                ReportKind::Sweep {
                    graph,
                    gamma,
                    time,
                    start,
                    ordering,
                    slices,
                    csv,
                } => output::to_json(&commands::report_sweep(&SweepRequest {
                    graph: graph.require()?,
                    gamma,
                    time,
                    start,
                    ordering,
                    slices,
                    csv,
                })?),
            };
            output::emit(out.as_deref(), text.as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
