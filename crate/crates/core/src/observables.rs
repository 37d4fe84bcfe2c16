//! Distribution metrics and oracle-use reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::classical::ProbDist;
use crate::error::{Result, WalkError};
use crate::graph::Graph;
use crate::oracle::OracleCounter;

/// Default threshold for [`mixing_time`].
pub const DEFAULT_MIXING_EPS: f64 = 1.0 / std::f64::consts::E;

fn check_same_len(p: &ProbDist, q: &ProbDist) -> Result<()> {
    if p.len() != q.len() {
        return Err(WalkError::DimensionMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    Ok(())
}

/// `(1/2) sum_x |P(x) - Q(x)|`.
pub fn total_variation(p: &ProbDist, q: &ProbDist) -> Result<f64> {
    check_same_len(p, q)?;
    Ok(0.5
        * p.as_slice()
            .iter()
            .zip(q.as_slice())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

pub fn distance_to_uniform(p: &ProbDist) -> f64 {
    total_variation(p, &ProbDist::uniform(p.len())).expect("same length")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub std: f64,
}

/// Mean and standard deviation of the vertex index.
pub fn position_moments(p: &ProbDist) -> Moments {
    let mean: f64 = p
        .as_slice()
        .iter()
        .enumerate()
        .map(|(x, w)| x as f64 * w)
        .sum();
    let var: f64 = p
        .as_slice()
        .iter()
        .enumerate()
        .map(|(x, w)| w * (x as f64 - mean).powi(2))
        .sum();
    Moments {
        mean,
        std: var.max(0.0).sqrt(),
    }
}

/// `P_target(t)` along a recorded trajectory.
pub fn hitting_curve(traj: &[ProbDist], target: usize) -> Result<Vec<f64>> {
    traj.iter()
        .map(|p| {
            if target >= p.len() {
                Err(WalkError::InvalidParameter(format!(
                    "target {target} outside [0, {})",
                    p.len()
                )))
            } else {
                Ok(p[target])
            }
        })
        .collect()
}

/// Distance to uniform at every recorded time.
pub fn mixing_curve(traj: &[ProbDist]) -> Vec<f64> {
    traj.iter().map(distance_to_uniform).collect()
}

/// First index whose distance to uniform drops below `eps`.
pub fn mixing_time(traj: &[ProbDist], eps: f64) -> Option<usize> {
    traj.iter().position(|p| distance_to_uniform(p) < eps)
}

/// What a run did, for comparing measured oracle use against closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WalkAccounting {
    /// `t` coined steps: `2t` quantum calls.
    Coined { steps: u64 },
    /// `j` Trotter slices over `N` colours: `2Nj` quantum calls.
    Trotter { slices: u64 },
    /// Monte Carlo trajectories: one classical query per step.
    ClassicalSample {
        alpha: f64,
        steps: u64,
        trajectories: u64,
        moves: u64,
    },
    /// Distribution evolutions that never consult an oracle.
    Exact { alpha: Option<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: usize,
    pub degree_histogram: BTreeMap<usize, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

impl GraphSummary {
    pub fn of(g: &Graph) -> Self {
        GraphSummary {
            n: g.n(),
            edges: g.edge_count(),
            degree_histogram: g.degree_histogram(),
            kind: g.origin().map(|k| k.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub walk_kind: String,
    pub graph: GraphSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slices: Option<u64>,
    pub oracle: OracleCounter,
    pub expected_oracle: OracleCounter,
    /// 2 for the coined walk, `2N` per slice for the Trotterized walk.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantum_calls_per_step: Option<u64>,
    /// `alpha * mean_degree / N`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_move_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_move_rate: Option<f64>,
}

/// Builds the report and fails if any measured tally differs from its
/// closed form.
pub fn resource_report(
    walk_kind: &str,
    g: &Graph,
    ctr: &OracleCounter,
    accounting: WalkAccounting,
) -> Result<RunReport> {
    let n = g.n() as u64;
    let move_rate = |alpha: f64| alpha * g.mean_degree() / g.n() as f64;
    let mut report = RunReport {
        walk_kind: walk_kind.to_string(),
        graph: GraphSummary::of(g),
        steps: None,
        time: None,
        slices: None,
        oracle: *ctr,
        expected_oracle: OracleCounter::default(),
        quantum_calls_per_step: None,
        expected_move_rate: None,
        empirical_move_rate: None,
    };
    match accounting {
        WalkAccounting::Coined { steps } => {
            report.steps = Some(steps);
            report.quantum_calls_per_step = Some(2);
            report.expected_oracle.quantum_calls = 2 * steps;
        }
        WalkAccounting::Trotter { slices } => {
            report.slices = Some(slices);
            report.quantum_calls_per_step = Some(2 * n);
            report.expected_oracle.quantum_calls = 2 * n * slices;
        }
        WalkAccounting::ClassicalSample {
            alpha,
            steps,
            trajectories,
            moves,
        } => {
            let queries = steps * trajectories;
            report.steps = Some(steps);
            report.expected_oracle.classical_queries = queries;
            report.expected_move_rate = Some(move_rate(alpha));
            if queries > 0 {
                report.empirical_move_rate = Some(moves as f64 / queries as f64);
            }
        }
        WalkAccounting::Exact { alpha } => {
            report.expected_move_rate = alpha.map(move_rate);
        }
    }

    let pairs = [
        (
            "classical_queries",
            ctr.classical_queries,
            report.expected_oracle.classical_queries,
        ),
        (
            "quantum_calls",
            ctr.quantum_calls,
            report.expected_oracle.quantum_calls,
        ),
        ("oso_calls", ctr.oso_calls, report.expected_oracle.oso_calls),
    ];
    for (what, measured, expected) in pairs {
        if measured != expected {
            return Err(WalkError::CountMismatch {
                what,
                measured,
                expected,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;
    use proptest::prelude::*;

    fn dist(v: &[f64]) -> ProbDist {
        ProbDist::new(v.to_vec()).unwrap()
    }

    #[test]
    fn total_variation_examples() {
        let p = dist(&[0.2, 0.3, 0.5]);
        assert_eq!(total_variation(&p, &p).unwrap(), 0.0);
        assert_eq!(
            total_variation(&ProbDist::point_mass(3, 0), &ProbDist::point_mass(3, 2)).unwrap(),
            1.0
        );
        assert_eq!(
            total_variation(&dist(&[1.0, 0.0]), &dist(&[0.5, 0.5])).unwrap(),
            0.5
        );
        assert!(total_variation(&dist(&[1.0, 0.0]), &ProbDist::uniform(3)).is_err());
    }

    #[test]
    fn distance_to_uniform_examples() {
        assert!(distance_to_uniform(&ProbDist::uniform(5)) < 1e-16);
        assert_eq!(distance_to_uniform(&ProbDist::point_mass(4, 1)), 0.75);
        assert_eq!(distance_to_uniform(&dist(&[0.5, 0.5, 0.0, 0.0])), 0.5);
    }

    #[test]
    fn moments_examples() {
        let m = position_moments(&ProbDist::point_mass(5, 3));
        assert_eq!((m.mean, m.std), (3.0, 0.0));
        let m = position_moments(&dist(&[0.5, 0.0, 0.5]));
        assert_eq!((m.mean, m.std), (1.0, 1.0));
        let m = position_moments(&ProbDist::uniform(2));
        assert_eq!((m.mean, m.std), (0.5, 0.5));
    }

    #[test]
    fn hitting_curve_examples() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        let traj =
            crate::classical::discrete_run(&k2, &ProbDist::point_mass(2, 0), 1.0, 3).unwrap();
        assert_eq!(hitting_curve(&traj, 1).unwrap(), vec![0.0, 0.5, 0.5, 0.5]);
        assert_eq!(hitting_curve(&traj, 0).unwrap()[0], 1.0);
        assert!(hitting_curve(&traj, 2).is_err());

        let empty = Graph::new(3, &[]).unwrap();
        let traj =
            crate::classical::discrete_run(&empty, &ProbDist::point_mass(3, 1), 1.0, 4).unwrap();
        assert!(hitting_curve(&traj, 1).unwrap().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn mixing_time_threshold() {
        let k8 = Graph::generate(&GraphKind::Complete { size: 8 }).unwrap();
        let traj =
            crate::classical::discrete_run(&k8, &ProbDist::point_mass(8, 0), 1.0, 50).unwrap();
        let t = mixing_time(&traj, DEFAULT_MIXING_EPS).unwrap();
        let curve = mixing_curve(&traj);
        assert!(curve[t] < DEFAULT_MIXING_EPS);
        assert!(curve[..t].iter().all(|&d| d >= DEFAULT_MIXING_EPS));
        assert_eq!(mixing_time(&traj[..1], 0.1), None);
    }

    #[test]
    fn resource_report_closed_forms() {
        let g = Graph::generate(&GraphKind::Cycle { size: 8 }).unwrap();
        let ctr = OracleCounter {
            quantum_calls: 100,
            ..Default::default()
        };
        let r = resource_report("coined", &g, &ctr, WalkAccounting::Coined { steps: 50 }).unwrap();
        assert_eq!(r.expected_oracle.quantum_calls, 100);
        assert_eq!(r.quantum_calls_per_step, Some(2));

        let ctr = OracleCounter {
            quantum_calls: 256,
            ..Default::default()
        };
        let r =
            resource_report("trotter", &g, &ctr, WalkAccounting::Trotter { slices: 16 }).unwrap();
        assert_eq!(r.quantum_calls_per_step, Some(16));

        let ctr = OracleCounter {
            classical_queries: 100_000,
            ..Default::default()
        };
        let acct = WalkAccounting::ClassicalSample {
            alpha: 0.5,
            steps: 100_000,
            trajectories: 1,
            moves: 12_000,
        };
        let r = resource_report("classical-sample", &g, &ctr, acct).unwrap();
        assert_eq!(r.expected_move_rate, Some(0.5 * 2.0 / 8.0));
        assert_eq!(r.empirical_move_rate, Some(0.12));

        let bad = OracleCounter {
            quantum_calls: 99,
            ..Default::default()
        };
        assert_eq!(
            resource_report("coined", &g, &bad, WalkAccounting::Coined { steps: 50 }),
            Err(WalkError::CountMismatch {
                what: "quantum_calls",
                measured: 99,
                expected: 100
            })
        );
    }

    #[test]
    fn report_serialises_histogram_keys() {
        let g = Graph::generate(&GraphKind::GluedTrees { depth: 2, seed: 1 }).unwrap();
        let r = resource_report(
            "continuous-exact",
            &g,
            &OracleCounter::new(),
            WalkAccounting::Exact { alpha: None },
        )
        .unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"degree_histogram\":{\"2\":2,\"3\":12}"));
    }

    fn normalise(raw: &[f64]) -> ProbDist {
        let s: f64 = raw.iter().sum();
        ProbDist::from_raw(raw.iter().map(|v| v / s).collect())
    }

    proptest! {
        #[test]
        fn total_variation_is_a_metric(
            a in prop::collection::vec(0.01f64..1.0, 6),
            b in prop::collection::vec(0.01f64..1.0, 6),
            c in prop::collection::vec(0.01f64..1.0, 6),
        ) {
            let (p, q, r) = (normalise(&a), normalise(&b), normalise(&c));
            let pq = total_variation(&p, &q).unwrap();
            prop_assert!((pq - total_variation(&q, &p).unwrap()).abs() < 1e-15);
            prop_assert!(total_variation(&p, &p).unwrap() == 0.0);
            prop_assert!((0.0..=1.0 + 1e-15).contains(&pq));
            let via = total_variation(&p, &r).unwrap() + total_variation(&r, &q).unwrap();
            prop_assert!(pq <= via + 1e-15);
        }
    }
}
