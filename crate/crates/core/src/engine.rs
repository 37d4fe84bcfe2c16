//! Walk engines behind a common trait, registered by name.
//!
//! Every engine takes a graph plus a loosely-typed [`WalkParams`] bag, checks
//! that the parameters it needs are present, runs, and returns recorded
//! position distributions together with the oracle report and a summary of
//! the physical invariants it monitored along the way.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::classical::{
    discrete_step, move_count, sample_walk, walk_rng, ContinuousClassical, ProbDist,
};
use crate::coined::{run_observed, CoinRegistry};
use crate::continuous::{ContinuousWalk, HamiltonianKind, QuantumState};
use crate::error::{Result, WalkError};
use crate::graph::Graph;
use crate::linalg::ComplexVector;
use crate::observables::{resource_report, RunReport, WalkAccounting};
use crate::oracle::OracleCounter;
use crate::trotter::{trotter_run_observed, TrotterOrdering, TrotterPlan};

/// Parameters for any engine; each engine reads the subset it needs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkParams {
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub time: Option<f64>,
    pub steps: Option<usize>,
    /// Number of equal time intervals recorded by the continuous engines.
    pub samples: Option<usize>,
    /// Trotter slice count `j`.
    pub slices: Option<usize>,
    pub coin: Option<String>,
    pub ordering: Option<TrotterOrdering>,
    pub hamiltonian: Option<HamiltonianKind>,
    pub seed: Option<u64>,
    pub start: Option<usize>,
    pub trajectories: Option<usize>,
    /// Record every k-th step (the final step is always recorded).
    pub record_every: Option<usize>,
}

impl WalkParams {
    /// Fields set in `other` replace those in `self`.
    pub fn overlay(&mut self, other: &WalkParams) {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f.clone(); } )* };
        }
        take!(
            alpha,
            gamma,
            time,
            steps,
            samples,
            slices,
            coin,
            ordering,
            hamiltonian,
            seed,
            start,
            trajectories,
            record_every
        );
    }

    fn need<T: Clone>(value: &Option<T>, name: &'static str, kind: &str) -> Result<T> {
        value
            .clone()
            .ok_or_else(|| WalkError::MissingParameter(name, kind.to_string()))
    }

    fn start_vertex(&self, g: &Graph) -> Result<usize> {
        let x0 = self.start.unwrap_or(0);
        if x0 >= g.n() {
            return Err(WalkError::InvalidParameter(format!(
                "start vertex {x0} outside [0, {})",
                g.n()
            )));
        }
        Ok(x0)
    }

    fn cadence(&self) -> Result<usize> {
        match self.record_every {
            Some(0) => Err(WalkError::InvalidParameter(
                "record_every must be >= 1".into(),
            )),
            Some(k) => Ok(k),
            None => Ok(1),
        }
    }
}

fn records(step: usize, last: usize, every: usize) -> bool {
    step.is_multiple_of(every) || step == last
}

/// Limits applied by [`InvariantSummary::check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub norm_drift: f64,
    pub prob_leak: f64,
    pub flag_mass: f64,
    pub padded_mass: f64,
    pub ancilla_leakage: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            norm_drift: 1e-9,
            prob_leak: 1e-9,
            flag_mass: 1e-12,
            padded_mass: 1e-12,
            ancilla_leakage: 1e-12,
        }
    }
}

/// Worst values seen during a run. Zero for quantities an engine does not
/// track.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct InvariantSummary {
    pub max_norm_drift: f64,
    pub max_prob_leak: f64,
    pub max_flag_mass: f64,
    pub max_padded_mass: f64,
    pub max_ancilla_leakage: f64,
}

impl InvariantSummary {
    fn dist(&mut self, p: &ProbDist) {
        self.max_prob_leak = self.max_prob_leak.max((p.total() - 1.0).abs());
    }

    fn norm(&mut self, norm: f64) {
        self.max_norm_drift = self.max_norm_drift.max((norm - 1.0).abs());
    }

    pub fn check(&self, tol: &Tolerances) -> Result<()> {
        let checks = [
            ("norm drift", self.max_norm_drift, tol.norm_drift),
            ("probability leak", self.max_prob_leak, tol.prob_leak),
            ("flag qubit mass", self.max_flag_mass, tol.flag_mass),
            ("padded vertex mass", self.max_padded_mass, tol.padded_mass),
            (
                "ancilla leakage",
                self.max_ancilla_leakage,
                tol.ancilla_leakage,
            ),
        ];
        for (what, value, limit) in checks {
            if value.is_nan() || value > limit {
                return Err(WalkError::InvariantViolation { what, value, limit });
            }
        }
        Ok(())
    }
}

/// One recorded time point.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub time: f64,
    pub dist: ProbDist,
    /// Vertex-space pure state, for engines that have one.
    pub state: Option<ComplexVector>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub kind: String,
    pub rows: Vec<Row>,
    pub report: RunReport,
    pub invariants: InvariantSummary,
}

impl RunOutput {
    pub fn final_row(&self) -> &Row {
        self.rows
            .last()
            .expect("every run records its initial state")
    }

    pub fn check(&self, tol: &Tolerances) -> Result<()> {
        self.invariants.check(tol)
    }
}

pub trait WalkEngine: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Stochastic engines require a seed.
    fn is_stochastic(&self) -> bool {
        false
    }

    fn run(&self, g: &Graph, params: &WalkParams) -> Result<RunOutput>;
}

/// Engines available by name.
pub struct EngineRegistry {
    engines: BTreeMap<&'static str, Box<dyn WalkEngine>>,
}

impl EngineRegistry {
    pub fn empty() -> Self {
        EngineRegistry {
            engines: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(ClassicalDiscrete));
        reg.register(Box::new(ClassicalContinuous));
        reg.register(Box::new(ClassicalSample));
        reg.register(Box::new(Coined::default()));
        reg.register(Box::new(ContinuousExact));
        reg.register(Box::new(Trotterized));
        reg
    }

    pub fn register(&mut self, engine: Box<dyn WalkEngine>) {
        self.engines.insert(engine.name(), engine);
    }

    pub fn get(&self, name: &str) -> Result<&dyn WalkEngine> {
        self.engines
            .get(name)
            .map(|e| e.as_ref())
            .ok_or_else(|| WalkError::Unknown {
                what: "walk kind",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.engines.keys().copied()
    }

    /// Looks up and runs an engine, enforcing the seed requirement.
    pub fn run(&self, name: &str, g: &Graph, params: &WalkParams) -> Result<RunOutput> {
        let engine = self.get(name)?;
        if engine.is_stochastic() && params.seed.is_none() {
            return Err(WalkError::MissingParameter("seed", name.to_string()));
        }
        engine.run(g, params)
    }
}

impl Default for EngineRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Equal sample times `T k / m`, `k = 0..=m`.
fn sample_times(params: &WalkParams, kind: &str) -> Result<Vec<f64>> {
    let total = WalkParams::need(&params.time, "time", kind)?;
    let samples = params.samples.unwrap_or(1);
    if samples == 0 {
        return Err(WalkError::InvalidParameter("samples must be >= 1".into()));
    }
    Ok((0..=samples)
        .map(|k| total * k as f64 / samples as f64)
        .collect())
}

pub struct ClassicalDiscrete;

impl WalkEngine for ClassicalDiscrete {
    fn name(&self) -> &'static str {
        "classical-discrete"
    }

    fn description(&self) -> &'static str {
        "exact distribution of the discrete classical walk"
    }

    fn run(&self, g: &Graph, params: &WalkParams) -> Result<RunOutput> {
        let kind = self.name();
        let alpha = WalkParams::need(&params.alpha, "alpha", kind)?;
        let steps = WalkParams::need(&params.steps, "steps", kind)?;
        let every = params.cadence()?;
        let mut p = ProbDist::point_mass(g.n(), params.start_vertex(g)?);
        let mut inv = InvariantSummary::default();
        let mut rows = vec![Row {
            time: 0.0,
            dist: p.clone(),
            state: None,
        }];
        for t in 1..=steps {
            p = discrete_step(g, &p, alpha)?;
            inv.dist(&p);
            if records(t, steps, every) {
                rows.push(Row {
                    time: t as f64,
                    dist: p.clone(),
                    state: None,
                });
            }
        }
        let mut report = resource_report(
            kind,
            g,
            &OracleCounter::new(),
            WalkAccounting::Exact { alpha: Some(alpha) },
        )?;
        report.steps = Some(steps as u64);
        Ok(RunOutput {
            kind: kind.into(),
            rows,
            report,
            invariants: inv,
        })
    }
}

pub struct ClassicalContinuous;

impl WalkEngine for ClassicalContinuous {
    fn name(&self) -> &'static str {
        "classical-continuous"
    }

    fn description(&self) -> &'static str {
        "exact distribution of the continuous-time classical walk"
    }

    fn run(&self, g: &Graph, params: &WalkParams) -> Result<RunOutput> {
        let kind = self.name();
        let gamma = WalkParams::need(&params.gamma, "gamma", kind)?;
        let times = sample_times(params, kind)?;
        let evolution = ContinuousClassical::new(g, gamma)?;
        let p0 = ProbDist::point_mass(g.n(), params.start_vertex(g)?);
        let mut inv = InvariantSummary::default();
        let mut rows = Vec::with_capacity(times.len());
        for &t in &times {
            let dist = evolution.evolve(&p0, t)?;
            inv.dist(&dist);
            rows.push(Row {
                time: t,
                dist,
                state: None,
            });
        }
        let mut report = resource_report(
            kind,
            g,
            &OracleCounter::new(),
            WalkAccounting::Exact { alpha: None },
        )?;
        report.time = times.last().copied();
        Ok(RunOutput {
            kind: kind.into(),
            rows,
            report,
            invariants: inv,
        })
    }
}

pub struct ClassicalSample;

impl WalkEngine for ClassicalSample {
    fn name(&self) -> &'static str {
        "classical-sample"
    }

    fn description(&self) -> &'static str {
        "seeded Monte Carlo trajectories with one classical oracle query per step"
    }

    fn is_stochastic(&self) -> bool {
        true
    }

    fn run(&self, g: &Graph, params: &WalkParams) -> Result<RunOutput> {
        let kind = self.name();
        let alpha = WalkParams::need(&params.alpha, "alpha", kind)?;
        let steps = WalkParams::need(&params.steps, "steps", kind)?;
        let seed = WalkParams::need(&params.seed, "seed", kind)?;
        let trajectories = params.trajectories.unwrap_or(1);
        if trajectories == 0 {
            return Err(WalkError::InvalidParameter(
                "trajectories must be >= 1".into(),
            ));
        }
        let every = params.cadence()?;
        let x0 = params.start_vertex(g)?;

        let mut ctr = OracleCounter::new();
        let mut counts = vec![vec![0u64; g.n()]; steps + 1];
        let mut moves = 0u64;
        for i in 0..trajectories {
            let mut rng = walk_rng(seed, i as u64);
            let traj = sample_walk(g, x0, alpha, steps, &mut rng, &mut ctr)?;
            moves += move_count(&traj) as u64;
            for (t, &x) in traj.iter().enumerate() {
                counts[t][x] += 1;
            }
        }

        let mut inv = InvariantSummary::default();
        let rows = counts
            .into_iter()
            .enumerate()
            .filter(|(t, _)| records(*t, steps, every))
            .map(|(t, row)| {
                let dist = ProbDist::from_raw(
                    row.into_iter()
                        .map(|c| c as f64 / trajectories as f64)
                        .collect(),
                );
                inv.dist(&dist);
                Row {
                    time: t as f64,
                    dist,
                    state: None,
                }
            })
            .collect();

        let report = resource_report(
            kind,
            g,
            &ctr,
            WalkAccounting::ClassicalSample {
                alpha,
                steps: steps as u64,
                trajectories: trajectories as u64,
                moves,
            },
        )?;
        Ok(RunOutput {
            kind: kind.into(),
            rows,
            report,
            invariants: inv,
        })
    }
}

/// Coined walk; the coin is looked up by name in its own registry.
#[derive(Default)]
pub struct Coined {
    coins: CoinRegistry,
}

impl Coined {
    pub fn with_coins(coins: CoinRegistry) -> Self {
        Coined { coins }
    }
}

impl WalkEngine for Coined {
    fn name(&self) -> &'static str {
        "coined"
    }

    fn description(&self) -> &'static str {
        "discrete-time coined quantum walk, one O S O C per step"
    }

    fn run(&self, g: &Graph, params: &WalkParams) -> Result<RunOutput> {
        let kind = self.name();
        let steps = WalkParams::need(&params.steps, "steps", kind)?;
        let coin_name = params.coin.as_deref().unwrap_or("hadamard");
        let coin = self.coins.create(coin_name, g.register_qubits())?;
        let every = params.cadence()?;
        let x0 = params.start_vertex(g)?;

        let mut ctr = OracleCounter::new();
        let mut inv = InvariantSummary::default();
        let mut rows = Vec::new();
        run_observed(x0, g, coin.as_ref(), steps, &mut ctr, |t, state| {
            inv.norm(state.norm());
            inv.max_flag_mass = inv.max_flag_mass.max(state.flag_mass());
            inv.max_padded_mass = inv.max_padded_mass.max(state.padded_mass());
            if records(t, steps, every) {
                let dist = state.position_distribution();
                inv.dist(&dist);
                rows.push(Row {
                    time: t as f64,
                    dist,
                    state: None,
                });
            }
            Ok(())
        })?;

        let report = resource_report(
            kind,
            g,
            &ctr,
            WalkAccounting::Coined {
                steps: steps as u64,
            },
        )?;
        Ok(RunOutput {
            kind: kind.into(),
            rows,
            report,
            invariants: inv,
        })
    }
}

pub struct ContinuousExact;

impl WalkEngine for ContinuousExact {
    fn name(&self) -> &'static str {
        "continuous-exact"
    }

    fn description(&self) -> &'static str {
        "continuous-time quantum walk by spectral exponentiation"
    }

    fn run(&self, g: &Graph, params: &WalkParams) -> Result<RunOutput> {
        let kind = self.name();
        let gamma = WalkParams::need(&params.gamma, "gamma", kind)?;
        let hamiltonian = params.hamiltonian.unwrap_or(HamiltonianKind::Adjacency);
        let times = sample_times(params, kind)?;
        let walk = ContinuousWalk::new(g, hamiltonian, gamma)?;
        let psi0 = QuantumState::vertex(g.n(), params.start_vertex(g)?)?;

        let mut inv = InvariantSummary::default();
        let mut rows = Vec::with_capacity(times.len());
        for &t in &times {
            let psi = walk.evolve(&psi0, t)?;
            inv.norm(psi.amplitudes().norm());
            let dist = psi.position_distribution();
            inv.dist(&dist);
            rows.push(Row {
                time: t,
                dist,
                state: Some(psi.into_amplitudes()),
            });
        }
        let mut report = resource_report(
            kind,
            g,
            &OracleCounter::new(),
            WalkAccounting::Exact { alpha: None },
        )?;
        report.time = times.last().copied();
        Ok(RunOutput {
            kind: kind.into(),
            rows,
            report,
            invariants: inv,
        })
    }
}

pub struct Trotterized;

impl Trotterized {
    pub fn plan(params: &WalkParams) -> Result<TrotterPlan> {
        let kind = "trotter";
        TrotterPlan::new(
            WalkParams::need(&params.gamma, "gamma", kind)?,
            WalkParams::need(&params.time, "time", kind)?,
            WalkParams::need(&params.slices, "slices", kind)?,
            params.ordering.unwrap_or_default(),
        )
    }
}

impl WalkEngine for Trotterized {
    fn name(&self) -> &'static str {
        "trotter"
    }

    fn description(&self) -> &'static str {
        "oracle-based product-formula realisation of the continuous-time walk"
    }

    fn run(&self, g: &Graph, params: &WalkParams) -> Result<RunOutput> {
        let kind = self.name();
        let plan = Self::plan(params)?;
        let every = params.cadence()?;
        let x0 = params.start_vertex(g)?;

        let mut ctr = OracleCounter::new();
        let mut inv = InvariantSummary::default();
        let mut rows = Vec::new();
        let outcome = trotter_run_observed(g, x0, &plan, &mut ctr, |k, state| {
            inv.norm(state.norm());
            inv.max_padded_mass = inv.max_padded_mass.max(state.padded_mass());
            if records(k, plan.slices, every) {
                let dist = state.position_distribution();
                inv.dist(&dist);
                rows.push(Row {
                    time: plan.time * k as f64 / plan.slices as f64,
                    dist,
                    state: Some(state.project_vertex_subspace()),
                });
            }
            Ok(())
        })?;
        inv.max_ancilla_leakage = outcome.max_ancilla_leakage;

        let mut report = resource_report(
            kind,
            g,
            &ctr,
            WalkAccounting::Trotter {
                slices: plan.slices as u64,
            },
        )?;
        report.time = Some(plan.time);
        Ok(RunOutput {
            kind: kind.into(),
            rows,
            report,
            invariants: inv,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;

    fn params() -> WalkParams {
        WalkParams::default()
    }

    #[test]
    fn registry_lists_all_engines() {
        let reg = EngineRegistry::builtin();
        let names: Vec<_> = reg.names().collect();
        assert_eq!(
            names,
            vec![
                "classical-continuous",
                "classical-discrete",
                "classical-sample",
                "coined",
                "continuous-exact",
                "trotter"
            ]
        );
        assert!(reg.get("teleport").is_err());
    }

    #[test]
    fn missing_parameters_are_reported() {
        let reg = EngineRegistry::builtin();
        let g = Graph::generate(&GraphKind::Cycle { size: 4 }).unwrap();
        let err = reg.run("coined", &g, &params()).unwrap_err();
        assert_eq!(err, WalkError::MissingParameter("steps", "coined".into()));
        let p = WalkParams {
            alpha: Some(1.0),
            steps: Some(3),
            ..params()
        };
        assert_eq!(
            reg.run("classical-sample", &g, &p).unwrap_err(),
            WalkError::MissingParameter("seed", "classical-sample".into())
        );
        assert!(reg
            .run(
                "trotter",
                &g,
                &WalkParams {
                    gamma: Some(1.0),
                    time: Some(1.0),
                    ..params()
                }
            )
            .is_err());
    }

    #[test]
    fn coined_on_c4_records_every_step() {
        let reg = EngineRegistry::builtin();
        let g = Graph::generate(&GraphKind::Cycle { size: 4 }).unwrap();
        let p = WalkParams {
            steps: Some(10),
            coin: Some("hadamard".into()),
            ..params()
        };
        let out = reg.run("coined", &g, &p).unwrap();
        assert_eq!(out.rows.len(), 11);
        assert_eq!(out.report.oracle.quantum_calls, 20);
        out.check(&Tolerances::default()).unwrap();
    }

    #[test]
    fn cadence_keeps_final_row() {
        let reg = EngineRegistry::builtin();
        let g = Graph::generate(&GraphKind::Cycle { size: 5 }).unwrap();
        let p = WalkParams {
            steps: Some(10),
            alpha: Some(0.5),
            record_every: Some(4),
            ..params()
        };
        let out = reg.run("classical-discrete", &g, &p).unwrap();
        let times: Vec<f64> = out.rows.iter().map(|r| r.time).collect();
        assert_eq!(times, vec![0.0, 4.0, 8.0, 10.0]);
    }

    #[test]
    fn continuous_exact_k2_quarter_period() {
        let reg = EngineRegistry::builtin();
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let p = WalkParams {
            gamma: Some(1.0),
            time: Some(std::f64::consts::FRAC_PI_4),
            ..params()
        };
        let out = reg.run("continuous-exact", &g, &p).unwrap();
        let last = &out.final_row().dist;
        assert!((last[0] - 0.5).abs() < 1e-14 && (last[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn classical_sample_counts_queries() {
        let reg = EngineRegistry::builtin();
        let g = Graph::generate(&GraphKind::Complete { size: 8 }).unwrap();
        let p = WalkParams {
            alpha: Some(1.0),
            steps: Some(1000),
            seed: Some(5),
            trajectories: Some(3),
            ..params()
        };
        let out = reg.run("classical-sample", &g, &p).unwrap();
        assert_eq!(out.report.oracle.classical_queries, 3000);
        assert_eq!(out.rows.len(), 1001);
    }

    #[test]
    fn trotter_engine_reports_leakage_and_calls() {
        let reg = EngineRegistry::builtin();
        let g = Graph::generate(&GraphKind::Cycle { size: 8 }).unwrap();
        let p = WalkParams {
            gamma: Some(1.0),
            time: Some(1.0),
            slices: Some(16),
            ..params()
        };
        let out = reg.run("trotter", &g, &p).unwrap();
        assert_eq!(out.report.oracle.quantum_calls, 256);
        assert_eq!(out.rows.len(), 17);
        assert!(out.invariants.max_ancilla_leakage < 1e-13);
        out.check(&Tolerances::default()).unwrap();
    }

    #[test]
    fn overlay_prefers_later_values() {
        let mut base = WalkParams {
            alpha: Some(0.2),
            steps: Some(5),
            ..params()
        };
        base.overlay(&WalkParams {
            steps: Some(9),
            ..params()
        });
        assert_eq!(base.alpha, Some(0.2));
        assert_eq!(base.steps, Some(9));
    }

    #[test]
    fn invariant_check_trips() {
        let inv = InvariantSummary {
            max_flag_mass: 1e-6,
            ..Default::default()
        };
        assert!(matches!(
            inv.check(&Tolerances::default()),
            Err(WalkError::InvariantViolation {
                what: "flag qubit mass",
                ..
            })
        ));
        let nan = InvariantSummary {
            max_norm_drift: f64::NAN,
            ..Default::default()
        };
        assert!(nan.check(&Tolerances::default()).is_err());
    }
}
