use std::path::{Path, PathBuf};

use qwalk::continuous::{phase_equivalence_report, PhaseEquivalenceReport};
use qwalk::engine::{InvariantSummary, Row, RunOutput};
use qwalk::linalg::fidelity;
use qwalk::observables::{total_variation, GraphSummary, RunReport};
use qwalk::trotter::{check_hamiltonian, convergence_sweep, HamiltonianCheck, SweepRow};
use qwalk::{
    EngineRegistry, Graph, GraphKind, QuantumState, Tolerances, TrotterOrdering, WalkError,
    WalkParams,
};
use serde::{Deserialize, Serialize};

use crate::config::{GraphSource, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output;

pub const DEFAULT_SWEEP: [usize; 4] = [8, 16, 32, 64];

/// Hermiticity, restriction and leak limit for `report hamiltonian`.
pub const HAMILTONIAN_TOL: f64 = 1e-12;

pub fn cmd_gen(kind: &GraphKind, out: Option<&Path>) -> CliResult<Graph> {
    let g = Graph::generate(kind)?;
    g.validate()?;
    output::emit(out, g.to_json().as_bytes())?;
    Ok(g)
}

/// What `run` writes as its report file.
#[derive(Debug, Clone, Serialize)]
pub struct RunReportFile<'a> {
    #[serde(flatten)]
    pub report: &'a RunReport,
    pub params: &'a WalkParams,
    pub invariants: &'a InvariantSummary,
}

fn execute(registry: &EngineRegistry, g: &Graph, cfg: &RunConfig) -> CliResult<RunOutput> {
    Ok(registry.run(cfg.walk_kind()?, g, &cfg.params)?)
}

/// Runs one configuration, writes its outputs, then fails with an invariant
/// violation if the run broke one. Outputs are written first so a failing
/// run can still be inspected.
pub fn cmd_run(cfg: &RunConfig) -> CliResult<RunOutput> {
    let g = cfg.graph_source()?.load()?;
    let registry = EngineRegistry::builtin();
    let out = execute(&registry, &g, cfg)?;

    let mut csv = Vec::new();
    output::distribution_csv(&out.rows, &mut csv)?;
    output::emit(cfg.csv.as_deref(), &csv)?;

    let report = output::to_json(&RunReportFile {
        report: &out.report,
        params: &cfg.params,
        invariants: &out.invariants,
    });
    match (&cfg.report, &cfg.csv) {
        (Some(path), _) => output::write_file(path, report.as_bytes())?,
        // CSV went to a file, so stdout is free for the report
        (None, Some(_)) => output::emit(None, report.as_bytes())?,
        (None, None) => {}
    }

    out.check(&Tolerances::default())?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Tv,
    Fidelity,
    #[default]
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub time: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tv: Option<f64>,
    /// Only when both runs carry a pure vertex-space state.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareSide {
    pub kind: String,
    pub params: WalkParams,
    pub report: RunReport,
    pub invariants: InvariantSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub graph: GraphSummary,
    pub metric: Metric,
    pub a: CompareSide,
    pub b: CompareSide,
    pub rows: Vec<CompareRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_tv: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_fidelity: Option<f64>,
    /// Trotter error against the exact walk over `j`, when one side is
    /// `trotter` and the other `continuous-exact`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<SweepRow>>,
}

#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub graph: Option<GraphSource>,
    pub metric: Metric,
    pub sweep: Vec<usize>,
    pub concurrent: bool,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            graph: None,
            metric: Metric::All,
            sweep: DEFAULT_SWEEP.to_vec(),
            concurrent: true,
        }
    }
}

fn same_time(s: f64, t: f64) -> bool {
    (s - t).abs() <= 1e-9 * s.abs().max(t.abs()).max(1.0)
}

/// Pairs rows recorded at the same time; both lists are sorted by time.
fn align<'a>(a: &'a [Row], b: &'a [Row]) -> Vec<(&'a Row, &'a Row)> {
    let (mut i, mut j) = (0, 0);
    let mut pairs = Vec::new();
    while i < a.len() && j < b.len() {
        if same_time(a[i].time, b[j].time) {
            pairs.push((&a[i], &b[j]));
            i += 1;
            j += 1;
        } else if a[i].time < b[j].time {
            i += 1;
        } else {
            j += 1;
        }
    }
    pairs
}

fn compare_rows(a: &[Row], b: &[Row], metric: Metric) -> CliResult<Vec<CompareRow>> {
    align(a, b)
        .into_iter()
        .map(|(ra, rb)| {
            let tv = match metric {
                Metric::Fidelity => None,
                _ => Some(total_variation(&ra.dist, &rb.dist)?),
            };
            let fid = match (metric, &ra.state, &rb.state) {
                (Metric::Tv, _, _) => None,
                (_, Some(u), Some(v)) => Some(fidelity(u, v)?),
                _ => None,
            };
            Ok(CompareRow {
                time: ra.time,
                tv,
                fidelity: fid,
            })
        })
        .collect()
}

fn resolve_graph(
    a: &RunConfig,
    b: &RunConfig,
    over: Option<&GraphSource>,
) -> CliResult<GraphSource> {
    let src = match (over, &a.graph, &b.graph) {
        (Some(s), _, _) => s.clone(),
        (None, Some(sa), Some(sb)) if sa != sb => {
            return Err(CliError::Usage(
                "the two configurations name different graphs".into(),
            ))
        }
        (None, Some(s), _) | (None, None, Some(s)) => s.clone(),
        (None, None, None) => {
            return Err(CliError::Usage(
                "no graph given (use --graph FILE or --gen SPEC)".into(),
            ))
        }
    };
    Ok(src)
}

fn trotter_sweep(
    g: &Graph,
    a: &RunConfig,
    b: &RunConfig,
    slices: &[usize],
) -> CliResult<Option<Vec<SweepRow>>> {
    let trotter = match (a.kind.as_deref(), b.kind.as_deref()) {
        (Some("trotter"), Some("continuous-exact")) => a,
        (Some("continuous-exact"), Some("trotter")) => b,
        _ => return Ok(None),
    };
    let p = &trotter.params;
    let need = |v: Option<f64>, name| v.ok_or(WalkError::MissingParameter(name, "trotter".into()));
    let rows = convergence_sweep(
        g,
        p.start.unwrap_or(0),
        need(p.gamma, "gamma")?,
        need(p.time, "time")?,
        p.ordering.unwrap_or(TrotterOrdering::Interleaved),
        slices,
    )?;
    Ok(Some(rows))
}

pub fn cmd_compare(a: &RunConfig, b: &RunConfig, opts: &CompareOptions) -> CliResult<Comparison> {
    let g = resolve_graph(a, b, opts.graph.as_ref())?.load()?;
    let registry = EngineRegistry::builtin();

    let (out_a, out_b) = if opts.concurrent {
        std::thread::scope(|s| {
            let ha = s.spawn(|| execute(&registry, &g, a));
            let hb = s.spawn(|| execute(&registry, &g, b));
            (
                ha.join().expect("run A panicked"),
                hb.join().expect("run B panicked"),
            )
        })
    } else {
        (execute(&registry, &g, a), execute(&registry, &g, b))
    };
    let (out_a, out_b) = (out_a?, out_b?);
    out_a.check(&Tolerances::default())?;
    out_b.check(&Tolerances::default())?;

    let rows = compare_rows(&out_a.rows, &out_b.rows, opts.metric)?;
    let max_tv = rows.iter().filter_map(|r| r.tv).reduce(f64::max);
    let min_fidelity = rows.iter().filter_map(|r| r.fidelity).reduce(f64::min);
    let sweep = trotter_sweep(&g, a, b, &opts.sweep)?;

    let side = |cfg: &RunConfig, out: RunOutput| CompareSide {
        kind: out.kind,
        params: cfg.params.clone(),
        report: out.report,
        invariants: out.invariants,
    };
    Ok(Comparison {
        graph: GraphSummary::of(&g),
        metric: opts.metric,
        a: side(a, out_a),
        b: side(b, out_b),
        rows,
        max_tv,
        min_fidelity,
        sweep,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphReport {
    #[serde(flatten)]
    pub summary: GraphSummary,
    pub register_qubits: u32,
    pub regular_degree: Option<usize>,
    pub max_degree: usize,
    pub mean_degree: f64,
    pub valid: bool,
}

pub fn report_graph(src: &GraphSource) -> CliResult<GraphReport> {
    let g = src.load()?;
    g.validate()?;
    Ok(GraphReport {
        summary: GraphSummary::of(&g),
        register_qubits: g.register_qubits(),
        regular_degree: g.regular_degree(),
        max_degree: g.max_degree(),
        mean_degree: g.mean_degree(),
        valid: true,
    })
}

/// Adjacency against Laplacian evolution from `start`, or from the uniform
/// superposition when `start` is `None`.
pub fn report_phase(
    src: &GraphSource,
    gamma: f64,
    time: f64,
    start: Option<usize>,
) -> CliResult<PhaseEquivalenceReport> {
    let g = src.load()?;
    let psi0 = match start {
        Some(x) => QuantumState::vertex(g.n(), x)?,
        None => QuantumState::uniform(g.n()),
    };
    Ok(phase_equivalence_report(&g, &psi0, gamma, time)?)
}

/// Dense Hamiltonian check. The report is returned alongside any violation
/// so the caller can still print it.
pub fn report_hamiltonian(
    src: &GraphSource,
    gamma: f64,
) -> CliResult<(HamiltonianCheck, Option<CliError>)> {
    let g = src.load()?;
    let check = check_hamiltonian(&g, gamma)?;
    let limits = [
        ("hamiltonian hermiticity", check.hermiticity_defect),
        ("hamiltonian restriction", check.restriction_error),
        ("hamiltonian subspace leak", check.subspace_leak),
    ];
    let violation = limits
        .into_iter()
        .find(|(_, v)| v.is_nan() || *v > HAMILTONIAN_TOL)
        .map(|(what, value)| {
            CliError::Walk(WalkError::InvariantViolation {
                what,
                value,
                limit: HAMILTONIAN_TOL,
            })
        });
    Ok((check, violation))
}

pub struct SweepRequest {
    pub graph: GraphSource,
    pub gamma: f64,
    pub time: f64,
    pub start: usize,
    pub ordering: TrotterOrdering,
    pub slices: Vec<usize>,
    pub csv: Option<PathBuf>,
}

pub fn report_sweep(req: &SweepRequest) -> CliResult<Vec<SweepRow>> {
    let g = req.graph.load()?;
    let rows = convergence_sweep(
        &g,
        req.start,
        req.gamma,
        req.time,
        req.ordering,
        &req.slices,
    )?;
    if let Some(path) = &req.csv {
        let mut buf = Vec::new();
        output::sweep_csv(&rows, &mut buf)?;
        output::write_file(path, &buf)?;
    }
    Ok(rows)
}
