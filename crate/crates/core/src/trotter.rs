//! Oracle-based circuit realisation of the continuous-time walk.
//!
//! The Hamiltonian `gamma A` is rewritten on the coined space as
//! `H = gamma sum_c V_c O T O V_c`, where `V_c` XORs the colour-`c`
//! neighbour `y_c(x) = (c - x) mod N` into the second register and `T` swaps
//! the registers on flag-1 states (annihilating flag-0 states). Each colour
//! term is exponentiated exactly as `V_c O e^{-i gamma t T / j} O V_c`, and
//! the terms are combined with a first-order Lie product.
//!
//! Starting from `|x, 0, 0>`, every colour factor returns to the
//! `span{|x, 0, 0>}` subspace algebraically, because `A_xy = A_yx` lets the
//! second oracle call erase the flag and `y_c(y_c(x)) = x` lets `V_c` erase
//! the second register after the swap.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coined::CoinedState;
use crate::continuous::{ContinuousWalk, HamiltonianKind, QuantumState};
use crate::error::{Result, WalkError};
use crate::graph::{color_neighbor, Graph};
use crate::linalg::{hermiticity_defect, ComplexMatrix, HermitianMatrix};
use crate::oracle::{oracle_apply, OracleCounter};

/// Largest graph for which the dense `H` on the full coined space is built.
pub const DENSE_HAMILTONIAN_MAX_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrotterOrdering {
    /// `(prod_c F_c)^j`: every slice runs through all colours.
    #[default]
    Interleaved,
    /// `prod_c (F_c)^j`: each colour factor is raised to the `j`-th power
    /// before moving on to the next colour.
    PerColorPower,
}

impl std::str::FromStr for TrotterOrdering {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interleaved" => Ok(TrotterOrdering::Interleaved),
            "per_color_power" | "per-color-power" => Ok(TrotterOrdering::PerColorPower),
            other => Err(WalkError::Unknown {
                what: "trotter ordering",
                name: other.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrotterPlan {
    pub gamma: f64,
    pub time: f64,
    pub slices: usize,
    #[serde(default)]
    pub ordering: TrotterOrdering,
}

impl TrotterPlan {
    pub fn new(gamma: f64, time: f64, slices: usize, ordering: TrotterOrdering) -> Result<Self> {
        let plan = TrotterPlan {
            gamma,
            time,
            slices,
            ordering,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.slices == 0 {
            return Err(WalkError::InvalidParameter(
                "trotter needs j >= 1 slices".into(),
            ));
        }
        if !self.gamma.is_finite() || self.gamma <= 0.0 {
            return Err(WalkError::InvalidParameter(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if !self.time.is_finite() {
            return Err(WalkError::InvalidParameter("time must be finite".into()));
        }
        Ok(())
    }

    /// Rotation angle `gamma t / j` of one colour factor.
    pub fn tau(&self) -> f64 {
        self.gamma * self.time / self.slices as f64
    }

    /// `2 N j`.
    pub fn expected_oracle_calls(&self, n_vertices: usize) -> u64 {
        2 * n_vertices as u64 * self.slices as u64
    }
}

/// `V_c|x, z, b> = |x, z xor y_c(x), b>`. Padding positions are left alone.
pub fn v_c_apply(state: &mut CoinedState, g: &Graph, c: usize) {
    let n = g.n();
    let m = state.register_dim();
    for x in 0..n {
        let yc = color_neighbor(n, c, x);
        if yc == 0 {
            continue;
        }
        for z in 0..m {
            let partner = z ^ yc;
            if z < partner {
                for flag in [false, true] {
                    let (i, k) = (state.index(x, z, flag), state.index(x, partner, flag));
                    state.amplitudes_mut().swap(i, k);
                }
            }
        }
    }
}

/// `T|x, y, 1> = |y, x, 1>`, `T|x, y, 0> = 0`.
pub fn t_apply(state: &mut CoinedState) {
    let m = state.register_dim();
    for x in 0..m {
        for y in 0..m {
            let i = state.index(x, y, false);
            state.amplitudes_mut()[i] = Complex64::new(0.0, 0.0);
            if x < y {
                let (a, b) = (state.index(x, y, true), state.index(y, x, true));
                state.amplitudes_mut().swap(a, b);
            }
        }
    }
}

/// `e^{-i tau T}`. Identity on flag 0; on flag 1 each pair
/// `{|x,y,1>, |y,x,1>}` rotates by `cos tau, -i sin tau`, and `|x,x,1>`
/// picks up `e^{-i tau}`.
pub fn t_exp_apply(state: &mut CoinedState, tau: f64) {
    let m = state.register_dim();
    let (cos, sin) = (tau.cos(), tau.sin());
    let minus_i_sin = Complex64::new(0.0, -sin);
    let diag = Complex64::from_polar(1.0, -tau);
    for x in 0..m {
        let i = state.index(x, x, true);
        state.amplitudes_mut()[i] *= diag;
        for y in x + 1..m {
            let a = state.amplitude(x, y, true);
            let b = state.amplitude(y, x, true);
            state.set(x, y, true, a * cos + b * minus_i_sin);
            state.set(y, x, true, b * cos + a * minus_i_sin);
        }
    }
}

/// `V_c O e^{-i tau T} O V_c`. Two oracle calls.
pub fn color_factor_apply(
    state: &mut CoinedState,
    g: &Graph,
    c: usize,
    tau: f64,
    ctr: &mut OracleCounter,
) {
    v_c_apply(state, g, c);
    oracle_apply(state, g, ctr);
    t_exp_apply(state, tau);
    oracle_apply(state, g, ctr);
    v_c_apply(state, g, c);
}

/// Final state of a Trotterized run and the worst subspace leakage seen
/// after any single colour factor.
#[derive(Debug, Clone)]
pub struct TrotterOutcome {
    pub state: CoinedState,
    pub max_ancilla_leakage: f64,
}

impl TrotterOutcome {
    /// Amplitudes on `|x, 0, 0>`, i.e. the simulated vertex-space state.
    pub fn vertex_state(&self) -> crate::linalg::ComplexVector {
        self.state.project_vertex_subspace()
    }
}

/// Runs the product formula from `|x0, 0, 0>`, calling `observe(k, state)`
/// after slice `k` (interleaved ordering; `k = 0` is the initial state) or
/// only at the start and end (per-colour ordering).
pub fn trotter_run_observed<F>(
    g: &Graph,
    x0: usize,
    plan: &TrotterPlan,
    ctr: &mut OracleCounter,
    mut observe: F,
) -> Result<TrotterOutcome>
where
    F: FnMut(usize, &CoinedState) -> Result<()>,
{
    plan.validate()?;
    let n = g.n();
    let tau = plan.tau();
    let mut state = CoinedState::initial(n, x0)?;
    let mut leak = 0.0f64;
    observe(0, &state)?;

    let mut factor = |state: &mut CoinedState, c: usize| {
        color_factor_apply(state, g, c, tau, ctr);
        leak = leak.max(state.ancilla_leakage());
    };

    match plan.ordering {
        TrotterOrdering::Interleaved => {
            for k in 1..=plan.slices {
                for c in 0..n {
                    factor(&mut state, c);
                }
                observe(k, &state)?;
            }
        }
        TrotterOrdering::PerColorPower => {
            for c in 0..n {
                for _ in 0..plan.slices {
                    factor(&mut state, c);
                }
            }
            observe(plan.slices, &state)?;
        }
    }

    Ok(TrotterOutcome {
        state,
        max_ancilla_leakage: leak,
    })
}

pub fn trotter_run(
    g: &Graph,
    x0: usize,
    plan: &TrotterPlan,
    ctr: &mut OracleCounter,
) -> Result<TrotterOutcome> {
    trotter_run_observed(g, x0, plan, ctr, |_, _| Ok(()))
}

/// The same product with `1 = V_{N-1} V_{N-1}` inserted at the start and
/// adjacent colour operators fused into `V_c V_{c-1}` pairs:
///
/// * interleaved: `V_{N-1} (prod_c O E O V_c V_{c-1})^j V_{N-1}`
/// * per-colour:  `V_{N-1} prod_c ((O E O)^j V_c V_{c-1}) V_{N-1}`
///
/// with `E = e^{-i tau T}` and `c - 1` taken mod `N`. Equal to
/// [`trotter_run`] up to roundoff for either ordering.
pub fn trotter_run_regrouped(
    g: &Graph,
    x0: usize,
    plan: &TrotterPlan,
    ctr: &mut OracleCounter,
) -> Result<CoinedState> {
    plan.validate()?;
    let n = g.n();
    let tau = plan.tau();
    let last = n - 1;
    let mut state = CoinedState::initial(n, x0)?;

    let swap_block = |state: &mut CoinedState, ctr: &mut OracleCounter| {
        oracle_apply(state, g, ctr);
        t_exp_apply(state, tau);
        oracle_apply(state, g, ctr);
    };
    let prev = |c: usize| (c + n - 1) % n;

    v_c_apply(&mut state, g, last);
    match plan.ordering {
        TrotterOrdering::Interleaved => {
            for _ in 0..plan.slices {
                for c in 0..n {
                    v_c_apply(&mut state, g, prev(c));
                    v_c_apply(&mut state, g, c);
                    swap_block(&mut state, ctr);
                }
            }
        }
        TrotterOrdering::PerColorPower => {
            for c in 0..n {
                v_c_apply(&mut state, g, prev(c));
                v_c_apply(&mut state, g, c);
                for _ in 0..plan.slices {
                    swap_block(&mut state, ctr);
                }
            }
        }
    }
    v_c_apply(&mut state, g, last);
    Ok(state)
}

/// `||psi_trotter - psi_exact (x) |0,0>||` against the exact adjacency walk.
pub fn trotter_error(g: &Graph, x0: usize, plan: &TrotterPlan) -> Result<f64> {
    let exact = ContinuousWalk::new(g, HamiltonianKind::Adjacency, plan.gamma)?
        .evolve(&QuantumState::vertex(g.n(), x0)?, plan.time)?;
    let outcome = trotter_run(g, x0, plan, &mut OracleCounter::new())?;
    Ok(state_distance(
        &outcome.state,
        &CoinedState::embed(exact.amplitudes()),
    ))
}

pub fn state_distance(a: &CoinedState, b: &CoinedState) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub j: usize,
    pub error: f64,
    pub oracle_calls: u64,
}

/// Error of the Trotterized walk against the exact one for each `j`.
pub fn convergence_sweep(
    g: &Graph,
    x0: usize,
    gamma: f64,
    time: f64,
    ordering: TrotterOrdering,
    slices: &[usize],
) -> Result<Vec<SweepRow>> {
    let exact = ContinuousWalk::new(g, HamiltonianKind::Adjacency, gamma)?
        .evolve(&QuantumState::vertex(g.n(), x0)?, time)?;
    let reference = CoinedState::embed(exact.amplitudes());
    slices
        .iter()
        .map(|&j| {
            let plan = TrotterPlan::new(gamma, time, j, ordering)?;
            let mut ctr = OracleCounter::new();
            let outcome = trotter_run(g, x0, &plan, &mut ctr)?;
            Ok(SweepRow {
                j,
                error: state_distance(&outcome.state, &reference),
                oracle_calls: ctr.quantum_calls,
            })
        })
        .collect()
}

/// Dense `H = gamma sum_c V_c O T O V_c` over the full coined space.
pub fn build_hamiltonian_dense(g: &Graph, gamma: f64) -> Result<HermitianMatrix> {
    if g.n() > DENSE_HAMILTONIAN_MAX_N {
        return Err(WalkError::InvalidParameter(format!(
            "dense Hamiltonian limited to N <= {DENSE_HAMILTONIAN_MAX_N}, got {}",
            g.n()
        )));
    }
    let n = g.n();
    let mut scratch = OracleCounter::new();
    let mut state = CoinedState::zero(n);
    let dim = state.dim();
    let mut h = ComplexMatrix::zeros(dim, dim);
    let g_c = Complex64::new(gamma, 0.0);
    for col in 0..dim {
        for c in 0..n {
            let amps = state.amplitudes_mut();
            amps.fill(Complex64::new(0.0, 0.0));
            amps[col] = Complex64::new(1.0, 0.0);
            v_c_apply(&mut state, g, c);
            oracle_apply(&mut state, g, &mut scratch);
            t_apply(&mut state);
            oracle_apply(&mut state, g, &mut scratch);
            v_c_apply(&mut state, g, c);
            for (row, a) in state.amplitudes().iter().enumerate() {
                if a.norm_sqr() != 0.0 {
                    h[(row, col)] += a * g_c;
                }
            }
        }
    }
    HermitianMatrix::new(h)
}

/// Checks of the dense Hamiltonian against `gamma A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianCheck {
    pub n: usize,
    pub dim: usize,
    pub gamma: f64,
    pub hermiticity_defect: f64,
    /// `max_{x,y} |<y,0,0|H|x,0,0> - gamma A_xy|`.
    pub restriction_error: f64,
    /// `max |<k|H|x,0,0>|` over `k` outside the vertex subspace.
    pub subspace_leak: f64,
    /// Largest gap between sorted eigenvalues of the restriction and of
    /// `gamma A`.
    pub spectral_error: f64,
}

pub fn check_hamiltonian(g: &Graph, gamma: f64) -> Result<HamiltonianCheck> {
    let h = build_hamiltonian_dense(g, gamma)?;
    let n = g.n();
    let probe = CoinedState::zero(n);
    let sub: Vec<usize> = (0..n).map(|x| probe.index(x, 0, false)).collect();
    let m = h.matrix();

    let mut restriction_error = 0.0f64;
    let restricted = ComplexMatrix::from_fn(n, n, |r, c| m[(sub[r], sub[c])]);
    for x in 0..n {
        for y in 0..n {
            let want = if g.adjacency(x, y) { gamma } else { 0.0 };
            restriction_error = restriction_error.max((restricted[(y, x)] - want).norm());
        }
    }

    let mut subspace_leak = 0.0f64;
    for &col in &sub {
        for row in 0..m.nrows() {
            if !sub.contains(&row) {
                subspace_leak = subspace_leak.max(m[(row, col)].norm());
            }
        }
    }

    let mut got: Vec<f64> = HermitianMatrix::new(restricted)?
        .spectral()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    let mut want: Vec<f64> = g
        .adjacency_matrix()
        .scale(gamma)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    got.sort_by(f64::total_cmp);
    want.sort_by(f64::total_cmp);
    let spectral_error = got
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    Ok(HamiltonianCheck {
        n,
        dim: m.nrows(),
        gamma,
        hermiticity_defect: hermiticity_defect(m),
        restriction_error,
        subspace_leak,
        spectral_error,
    })
}
