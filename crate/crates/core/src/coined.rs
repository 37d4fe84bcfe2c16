//! Discrete-time coined quantum walk on `H_{2^n} (x) H_{2^n} (x) H_2`.
//!
//! One step is `O S O C`: toss the coin on the proposal register `y`, write
//! `A_xy` into the flag with the oracle, swap `x` and `y` when the flag is
//! set, then erase the flag with a second oracle call. Because `A_xy = A_yx`
//! the second call always clears the flag.
//!
//! Amplitudes are stored densely with basis index
//! `((x << n) | y) << 1 | b`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::classical::ProbDist;
use crate::error::{Result, WalkError};
use crate::graph::{register_qubits, Graph};
use crate::linalg::{unitarity_defect, ComplexMatrix, ComplexVector};
use crate::oracle::{oracle_apply, OracleCounter};

/// Tolerance for accepting a user-supplied coin as unitary.
pub const COIN_UNITARITY_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense state of the coined walk (and of the Trotterized continuous walk,
/// which lives on the same space).
#[derive(Debug, Clone, PartialEq)]
pub struct CoinedState {
    qubits: u32,
    n_vertices: usize,
    amps: Vec<Complex64>,
}

impl CoinedState {
    /// All-zero vector over the space sized for `n_vertices`.
    pub fn zero(n_vertices: usize) -> Self {
        let qubits = register_qubits(n_vertices);
        CoinedState {
            qubits,
            n_vertices,
            amps: vec![ZERO; 1usize << (2 * qubits + 1)],
        }
    }

    pub fn basis(n_vertices: usize, x: usize, y: usize, flag: bool) -> Self {
        let mut s = Self::zero(n_vertices);
        s.set(x, y, flag, ONE);
        s
    }

    /// `|x0, 0, 0>`.
    pub fn initial(n_vertices: usize, x0: usize) -> Result<Self> {
        if x0 >= n_vertices {
            return Err(WalkError::InvalidParameter(format!(
                "start vertex {x0} outside [0, {n_vertices})"
            )));
        }
        Ok(Self::basis(n_vertices, x0, 0, false))
    }

    pub fn from_amplitudes(n_vertices: usize, amps: Vec<Complex64>) -> Result<Self> {
        let qubits = register_qubits(n_vertices);
        let dim = 1usize << (2 * qubits + 1);
        if amps.len() != dim {
            return Err(WalkError::DimensionMismatch {
                expected: dim,
                got: amps.len(),
            });
        }
        Ok(CoinedState {
            qubits,
            n_vertices,
            amps,
        })
    }

    /// Embeds a vertex-space state as `sum_x psi_x |x, 0, 0>`.
    pub fn embed(psi: &ComplexVector) -> Self {
        let mut s = Self::zero(psi.len());
        for (x, &a) in psi.iter().enumerate() {
            s.set(x, 0, false, a);
        }
        s
    }

    /// Amplitudes on `|x, 0, 0>` for `x < N`.
    pub fn project_vertex_subspace(&self) -> ComplexVector {
        ComplexVector::from_fn(self.n_vertices, |x, _| self.amplitude(x, 0, false))
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// `2^n`.
    pub fn register_dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, flag: bool) -> usize {
        (((x << self.qubits) | y) << 1) | flag as usize
    }

    pub fn amplitude(&self, x: usize, y: usize, flag: bool) -> Complex64 {
        self.amps[self.index(x, y, flag)]
    }

    pub fn set(&mut self, x: usize, y: usize, flag: bool, value: Complex64) {
        let i = self.index(x, y, flag);
        self.amps[i] = value;
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector::from_column_slice(&self.amps)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Pr(b = 1)`.
    pub fn flag_mass(&self) -> f64 {
        self.amps
            .iter()
            .skip(1)
            .step_by(2)
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// Probability of finding the position register on a padding vertex.
    pub fn padded_mass(&self) -> f64 {
        let start = self.index(self.n_vertices, 0, false);
        self.amps[start..].iter().map(|a| a.norm_sqr()).sum()
    }

    /// Mass outside `span{|x, 0, 0> : x < N}`.
    pub fn ancilla_leakage(&self) -> f64 {
        let inside: f64 = (0..self.n_vertices)
            .map(|x| self.amplitude(x, 0, false).norm_sqr())
            .sum();
        (self.norm().powi(2) - inside).max(0.0)
    }

    /// `P(x) = sum_{y,b} |amp(x,y,b)|^2` for `x < N`.
    pub fn position_distribution(&self) -> ProbDist {
        let block = 2 << self.qubits;
        let probs = self
            .amps
            .chunks(block)
            .take(self.n_vertices)
            .map(|chunk| chunk.iter().map(|a| a.norm_sqr()).sum())
            .collect();
        ProbDist::from_raw(probs)
    }
}

/// A coin: a unitary on the `2^n`-dimensional proposal register, possibly
/// depending on the current position `x`.
pub trait Coin: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    /// Applies the coin for position `x` to the register amplitudes
    /// `register[y]`, `y in 0..2^n`.
    fn toss(&self, x: usize, register: &mut [Complex64]);
}

/// Hadamard on every qubit of the proposal register.
#[derive(Debug, Clone, Copy, Default)]
pub struct HadamardCoin;

impl Coin for HadamardCoin {
    fn name(&self) -> &str {
        "hadamard"
    }

    fn toss(&self, _x: usize, register: &mut [Complex64]) {
        let dim = register.len();
        let mut half = 1;
        while half < dim {
            for block in (0..dim).step_by(2 * half) {
                for i in block..block + half {
                    let (a, b) = (register[i], register[i + half]);
                    register[i] = (a + b) * FRAC_1_SQRT_2;
                    register[i + half] = (a - b) * FRAC_1_SQRT_2;
                }
            }
            half <<= 1;
        }
    }
}

/// Grover diffusion `2|s><s| - I` with `|s>` the uniform superposition.
#[derive(Debug, Clone, Copy, Default)]
pub struct GroverCoin;

impl Coin for GroverCoin {
    fn name(&self) -> &str {
        "grover"
    }

    fn toss(&self, _x: usize, register: &mut [Complex64]) {
        let mean: Complex64 = register.iter().sum::<Complex64>() / register.len() as f64;
        for a in register.iter_mut() {
            *a = 2.0 * mean - *a;
        }
    }
}

/// A fixed dense unitary on the register. Backs the DFT coin and custom
/// user coins.
#[derive(Debug, Clone)]
pub struct MatrixCoin {
    name: String,
    matrix: ComplexMatrix,
}

impl MatrixCoin {
    pub fn new(name: impl Into<String>, matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || !matrix.nrows().is_power_of_two() {
            return Err(WalkError::DimensionMismatch {
                expected: matrix.nrows().next_power_of_two(),
                got: matrix.ncols(),
            });
        }
        let defect = unitarity_defect(&matrix);
        if defect > COIN_UNITARITY_TOL {
            return Err(WalkError::NotUnitary(defect));
        }
        Ok(MatrixCoin {
            name: name.into(),
            matrix,
        })
    }

    /// Discrete Fourier transform `F_jk = e^{2 pi i jk / M} / sqrt(M)`.
    pub fn dft(qubits: u32) -> Self {
        let m = 1usize << qubits;
        let scale = 1.0 / (m as f64).sqrt();
        let matrix = DMatrix::from_fn(m, m, |j, k| {
            Complex64::from_polar(scale, 2.0 * PI * ((j * k) % m) as f64 / m as f64)
        });
        MatrixCoin {
            name: "dft".into(),
            matrix,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

impl Coin for MatrixCoin {
    fn name(&self) -> &str {
        &self.name
    }

    fn toss(&self, _x: usize, register: &mut [Complex64]) {
        assert_eq!(register.len(), self.matrix.nrows(), "coin dimension");
        let v = ComplexVector::from_column_slice(register);
        let out = &self.matrix * v;
        register.copy_from_slice(out.as_slice());
    }
}

/// Position-conditioned coin: a separate coin for every `x` in the padded
/// register. Padding positions never hold amplitude in a valid run.
#[derive(Debug, Clone)]
pub struct ConditionedCoin {
    per_position: Vec<Arc<dyn Coin>>,
}

impl ConditionedCoin {
    pub fn new(per_position: Vec<Arc<dyn Coin>>) -> Self {
        ConditionedCoin { per_position }
    }
}

impl Coin for ConditionedCoin {
    fn name(&self) -> &str {
        "conditioned"
    }

    fn toss(&self, x: usize, register: &mut [Complex64]) {
        self.per_position[x].toss(x, register);
    }
}

type CoinFactory = Box<dyn Fn(u32) -> Box<dyn Coin> + Send + Sync>;

/// Named coin constructors, keyed by the names accepted on the command line.
pub struct CoinRegistry {
    factories: HashMap<String, CoinFactory>,
}

impl CoinRegistry {
    pub fn empty() -> Self {
        CoinRegistry {
            factories: HashMap::new(),
        }
    }

    /// `hadamard`, `grover` and `dft`.
    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register("hadamard", |_| Box::new(HadamardCoin));
        reg.register("grover", |_| Box::new(GroverCoin));
        reg.register("dft", |q| Box::new(MatrixCoin::dft(q)));
        reg
    }

    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(u32) -> Box<dyn Coin> + Send + Sync + 'static,
    {
        self.factories.insert(name.to_string(), Box::new(factory));
    }

    pub fn create(&self, name: &str, qubits: u32) -> Result<Box<dyn Coin>> {
        self.factories
            .get(name)
            .map(|f| f(qubits))
            .ok_or_else(|| WalkError::Unknown {
                what: "coin",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.factories.keys().map(String::as_str).collect();
        names.sort_unstable();
        names
    }
}

impl Default for CoinRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Applies `C` to the `y` register, identity on `x` and `b`.
pub fn coin_apply(state: &mut CoinedState, coin: &dyn Coin) {
    let m = state.register_dim();
    let mut buf = vec![ZERO; m];
    for x in 0..m {
        for flag in [false, true] {
            let base = state.index(x, 0, flag);
            let amps = &mut state.amps;
            for (y, slot) in buf.iter_mut().enumerate() {
                *slot = amps[base + 2 * y];
            }
            coin.toss(x, &mut buf);
            for (y, v) in buf.iter().enumerate() {
                amps[base + 2 * y] = *v;
            }
        }
    }
}

/// Conditional swap `S|x,y,1> = |y,x,1>`, `S|x,y,0> = |x,y,0>`, realised as a
/// cascade of Fredkin gates, one per qubit pair `(x_k, y_k)`, all controlled
/// on the flag.
pub fn swap_apply(state: &mut CoinedState) {
    let q = state.qubits;
    for k in 0..q {
        fredkin(state, k);
    }
}

/// Controlled swap of bit `k` of `x` with bit `k` of `y`, controlled on `b`.
fn fredkin(state: &mut CoinedState, k: u32) {
    let y_bit = 1usize << (1 + k);
    let x_bit = 1usize << (1 + state.qubits + k);
    for i in (1..state.amps.len()).step_by(2) {
        // visit each exchanged pair once, from the side with x_k = 1, y_k = 0
        if i & x_bit != 0 && i & y_bit == 0 {
            state.amps.swap(i, i ^ x_bit ^ y_bit);
        }
    }
}

/// One walk step, `O S O C`. Makes exactly two oracle calls.
pub fn step(state: &mut CoinedState, g: &Graph, coin: &dyn Coin, ctr: &mut OracleCounter) {
    coin_apply(state, coin);
    oracle_apply(state, g, ctr);
    swap_apply(state);
    oracle_apply(state, g, ctr);
}

/// `(OSOC)^t |x0, 0, 0>`.
pub fn run(
    x0: usize,
    g: &Graph,
    coin: &dyn Coin,
    steps: usize,
    ctr: &mut OracleCounter,
) -> Result<CoinedState> {
    run_observed(x0, g, coin, steps, ctr, |_, _| Ok(()))
}

/// Like [`run`], calling `observe(t, state)` for `t = 0..=steps`.
pub fn run_observed<F>(
    x0: usize,
    g: &Graph,
    coin: &dyn Coin,
    steps: usize,
    ctr: &mut OracleCounter,
    mut observe: F,
) -> Result<CoinedState>
where
    F: FnMut(usize, &CoinedState) -> Result<()>,
{
    let mut state = CoinedState::initial(g.n(), x0)?;
    observe(0, &state)?;
    for t in 1..=steps {
        step(&mut state, g, coin, ctr);
        observe(t, &state)?;
    }
    Ok(state)
}

/// Dense matrix of a linear map on the coined space, built column by column
/// from basis states. Verification only.
pub fn dense_operator<F>(n_vertices: usize, mut apply: F) -> ComplexMatrix
where
    F: FnMut(&mut CoinedState),
{
    let dim = CoinedState::zero(n_vertices).dim();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut s = CoinedState::zero(n_vertices);
        s.amps[col] = ONE;
        apply(&mut s);
        for (row, a) in s.amps.iter().enumerate() {
            m[(row, col)] = *a;
        }
    }
    m
}

/// The naive "quantised adjacency" update and how far it is from unitary.
#[derive(Debug, Clone)]
pub struct NaiveOperator {
    pub matrix: ComplexMatrix,
    pub unitarity_defect: f64,
}

/// Builds `M_yx = (alpha/N) e^{i phi_xy} A_xy + (1 - alpha d_x / N) delta_xy`.
///
/// `phases` is keyed by edge `(min, max)`; missing edges get phase zero.
pub fn naive_adjacency_operator(
    g: &Graph,
    alpha: f64,
    phases: &BTreeMap<(usize, usize), f64>,
) -> NaiveOperator {
    let n = g.n();
    let nf = n as f64;
    let matrix = DMatrix::from_fn(n, n, |y, x| {
        let mut v = ZERO;
        if g.adjacency(x, y) {
            let phi = phases.get(&(x.min(y), x.max(y))).copied().unwrap_or(0.0);
            v += Complex64::from_polar(alpha / nf, phi);
        }
        if x == y {
            v += 1.0 - alpha * g.degree(x) as f64 / nf;
        }
        v
    });
    let unitarity_defect = unitarity_defect(&matrix);
    NaiveOperator {
        matrix,
        unitarity_defect,
    }
}
