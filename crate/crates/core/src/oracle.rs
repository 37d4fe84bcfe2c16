//! Graph oracles and their query accounting.
//!
//! Three access models are provided: the classical one-bit query `A_xy`,
//! the quantum oracle `O|x,y,b> = |x,y,b xor A_xy>`, and the combined
//! conditional-swap oracle `OSO|x,y> = |y,x>` if `e_xy` is an edge (else
//! unchanged), which needs no flag qubit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coined::CoinedState;
use crate::graph::Graph;

/// Per-run tally of oracle use. One quantum call is one application of the
/// oracle to the whole state, however wide the superposition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCounter {
    pub classical_queries: u64,
    pub quantum_calls: u64,
    pub oso_calls: u64,
}

impl OracleCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

/// Classical query of `A_xy`.
pub fn classical_query(g: &Graph, x: usize, y: usize, ctr: &mut OracleCounter) -> bool {
    ctr.classical_queries += 1;
    g.adjacency(x, y)
}

/// Applies `O` in place. Padded vertices have no edges, so only real edges
/// touch amplitudes; the permutation swaps `b = 0` and `b = 1` on them.
pub fn oracle_apply(state: &mut CoinedState, g: &Graph, ctr: &mut OracleCounter) {
    ctr.quantum_calls += 1;
    for &(x, y) in g.edges() {
        for (a, b) in [(x, y), (y, x)] {
            let base = state.index(a, b, false);
            state.amplitudes_mut().swap(base, base | 1);
        }
    }
}

/// Two vertex registers without the flag qubit, the domain of the `OSO`
/// oracle. Basis index is `(x << q) | y`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairState {
    qubits: u32,
    amps: Vec<Complex64>,
}

impl PairState {
    pub fn basis(qubits: u32, x: usize, y: usize) -> Self {
        let dim = 1usize << (2 * qubits);
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[(x << qubits) | y] = Complex64::new(1.0, 0.0);
        PairState { qubits, amps }
    }

    pub fn from_amplitudes(qubits: u32, amps: Vec<Complex64>) -> Self {
        assert_eq!(amps.len(), 1usize << (2 * qubits), "pair state dimension");
        PairState { qubits, amps }
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        (x << self.qubits) | y
    }

    pub fn amplitude(&self, x: usize, y: usize) -> Complex64 {
        self.amps[self.index(x, y)]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
}

/// Applies the combined `OSO` oracle in place.
pub fn oso_apply(state: &mut PairState, g: &Graph, ctr: &mut OracleCounter) {
    ctr.oso_calls += 1;
    let q = state.qubits;
    for &(x, y) in g.edges() {
        state.amps.swap((x << q) | y, (y << q) | x);
    }
}
