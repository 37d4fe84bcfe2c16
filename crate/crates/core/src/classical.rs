//! Classical random walks: the discrete update
//! `P'(x) = P(x) + (alpha/N) sum_y (A_xy P(y) - A_yx P(x))`, its
//! continuous-time counterpart `dP/dt = gamma (A - D) P`, and seeded Monte
//! Carlo trajectories that query the graph one bit at a time.

use std::ops::Index;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::graph::Graph;
use crate::linalg::SymmetricSpectral;
use crate::oracle::{classical_query, OracleCounter};

/// Allowed deviation of `sum_x P(x)` from one.
pub const PROB_SUM_TOL: f64 = 1e-12;
/// Negative entries down to this size are roundoff and are clamped to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

/// Probability distribution over vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProbDist(Vec<f64>);

impl ProbDist {
    /// Validates normalisation and sign, clamping roundoff negatives.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(WalkError::InvalidParameter("empty distribution".into()));
        }
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -NEGATIVE_CLAMP {
                return Err(WalkError::InvariantViolation {
                    what: "negative probability",
                    value: -*p,
                    limit: NEGATIVE_CLAMP,
                });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let dist = ProbDist(probs);
        let leak = (dist.total() - 1.0).abs();
        if leak > PROB_SUM_TOL {
            return Err(WalkError::InvariantViolation {
                what: "probability sum",
                value: leak,
                limit: PROB_SUM_TOL,
            });
        }
        Ok(dist)
    }

    /// Wraps values without validation (measurement results of states whose
    /// norm is checked elsewhere).
    pub fn from_raw(probs: Vec<f64>) -> Self {
        ProbDist(probs)
    }

    pub fn point_mass(n: usize, x: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[x] = 1.0;
        ProbDist(probs)
    }

    pub fn uniform(n: usize) -> Self {
        ProbDist(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Index<usize> for ProbDist {
    type Output = f64;

    fn index(&self, x: usize) -> &f64 {
        &self.0[x]
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(WalkError::InvalidParameter(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )));
    }
    Ok(())
}

fn check_dim(g: &Graph, p: &ProbDist) -> Result<()> {
    if p.len() != g.n() {
        return Err(WalkError::DimensionMismatch {
            expected: g.n(),
            got: p.len(),
        });
    }
    Ok(())
}

/// One iteration of the discrete walk. Since `alpha d_x / N < 1`, entries
/// stay nonnegative.
pub fn discrete_step(g: &Graph, p: &ProbDist, alpha: f64) -> Result<ProbDist> {
    check_alpha(alpha)?;
    check_dim(g, p)?;
    let rate = alpha / g.n() as f64;
    let next = (0..g.n())
        .map(|x| {
            let inflow: f64 = g.neighbors(x).iter().map(|&y| p[y]).sum();
            p[x] + rate * (inflow - g.degree(x) as f64 * p[x])
        })
        .collect();
    Ok(ProbDist(next))
}

/// Trajectory `[P0, P1, ..., P_steps]`.
pub fn discrete_run(g: &Graph, p0: &ProbDist, alpha: f64, steps: usize) -> Result<Vec<ProbDist>> {
    check_alpha(alpha)?;
    check_dim(g, p0)?;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(p0.clone());
    for _ in 0..steps {
        let next = discrete_step(g, out.last().expect("non-empty"), alpha)?;
        out.push(next);
    }
    Ok(out)
}

/// Exact continuous-time evolution `e^{gamma (A - D) t}`, with the spectral
/// decomposition computed once and reused across times.
#[derive(Debug, Clone)]
pub struct ContinuousClassical {
    gamma: f64,
    spectral: SymmetricSpectral,
}

impl ContinuousClassical {
    pub fn new(g: &Graph, gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(WalkError::InvalidParameter(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        Ok(ContinuousClassical {
            gamma,
            spectral: SymmetricSpectral::new(&g.laplacian_matrix())?,
        })
    }

    pub fn evolve(&self, p0: &ProbDist, t: f64) -> Result<ProbDist> {
        if t < 0.0 {
            return Err(WalkError::InvalidParameter(format!(
                "classical evolution needs t >= 0, got {t}"
            )));
        }
        let v = DVector::from_column_slice(p0.as_slice());
        let out = self.spectral.apply_exp(self.gamma * t, &v)?;
        ProbDist::new(out.iter().copied().collect())
    }
}

pub fn continuous_evolve(g: &Graph, p0: &ProbDist, gamma: f64, t: f64) -> Result<ProbDist> {
    check_dim(g, p0)?;
    ContinuousClassical::new(g, gamma)?.evolve(p0, t)
}

/// Forward-Euler approximation `(I + L T/m)^m P0` with `L = gamma (A - D)`.
/// Converges to [`continuous_evolve`] at first order in `1/m`.
pub fn euler_evolve(g: &Graph, p0: &ProbDist, gamma: f64, t: f64, m: usize) -> Result<ProbDist> {
    check_dim(g, p0)?;
    if m == 0 {
        return Err(WalkError::InvalidParameter("Euler needs m >= 1".into()));
    }
    let h = gamma * t / m as f64;
    let mut p = p0.as_slice().to_vec();
    for _ in 0..m {
        p = (0..g.n())
            .map(|x| {
                let inflow: f64 = g.neighbors(x).iter().map(|&y| p[y]).sum();
                p[x] + h * (inflow - g.degree(x) as f64 * p[x])
            })
            .collect();
    }
    Ok(ProbDist(p))
}

/// Deterministic generator for trajectory `stream` under `seed`. Distinct
/// streams are independent ChaCha8 streams of the same key.
pub fn walk_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One Monte Carlo trajectory `[x0, x1, ..., x_steps]`. Each step draws a
/// proposal `y` uniformly from `0..N` (including `y = x`), spends one
/// classical query on `A_xy`, and moves with probability `alpha` if the edge
/// exists.
pub fn sample_walk<R: Rng>(
    g: &Graph,
    x0: usize,
    alpha: f64,
    steps: usize,
    rng: &mut R,
    ctr: &mut OracleCounter,
) -> Result<Vec<usize>> {
    check_alpha(alpha)?;
    if x0 >= g.n() {
        return Err(WalkError::InvalidParameter(format!(
            "start vertex {x0} outside [0, {})",
            g.n()
        )));
    }
    let n = g.n() as u64;
    let mut traj = Vec::with_capacity(steps + 1);
    let mut x = x0;
    traj.push(x);
    for _ in 0..steps {
        let y = rng.gen_range(0..n) as usize;
        // the acceptance draw is consumed on every step so the stream layout
        // does not depend on the graph
        let accept = rng.gen::<f64>() < alpha;
        if classical_query(g, x, y, ctr) && accept {
            x = y;
        }
        traj.push(x);
    }
    Ok(traj)
}

/// Seeded trajectory using stream 0 of `seed`.
pub fn sample_walk_seeded(
    g: &Graph,
    x0: usize,
    alpha: f64,
    steps: usize,
    seed: u64,
    ctr: &mut OracleCounter,
) -> Result<Vec<usize>> {
    sample_walk(g, x0, alpha, steps, &mut walk_rng(seed, 0), ctr)
}

/// Number of steps on which the walker changed vertex.
pub fn move_count(traj: &[usize]) -> usize {
    traj.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Empirical occupation distribution at every time over `trajectories`
/// independent walks (stream `i` for walk `i`).
pub fn sample_ensemble(
    g: &Graph,
    x0: usize,
    alpha: f64,
    steps: usize,
    trajectories: usize,
    seed: u64,
    ctr: &mut OracleCounter,
) -> Result<Vec<ProbDist>> {
    if trajectories == 0 {
        return Err(WalkError::InvalidParameter(
            "need at least one trajectory".into(),
        ));
    }
    let mut counts = vec![vec![0u64; g.n()]; steps + 1];
    for i in 0..trajectories {
        let traj = sample_walk(g, x0, alpha, steps, &mut walk_rng(seed, i as u64), ctr)?;
        for (t, &x) in traj.iter().enumerate() {
            counts[t][x] += 1;
        }
    }
    let total = trajectories as f64;
    Ok(counts
        .into_iter()
        .map(|row| ProbDist(row.into_iter().map(|c| c as f64 / total).collect()))
        .collect())
}
