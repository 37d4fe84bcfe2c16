//! Undirected simple graphs, the generators used throughout the crate, and
//! the complete-graph edge colouring `c = (x + y) mod N`.
//!
//! A [`Graph`] keeps both a sorted edge list and a dense `N x N` adjacency
//! table so that `A_xy` lookups, which is what every oracle does, are O(1).
//! Indices at or beyond `N` are treated as disconnected padding vertices:
//! walk registers are sized to a power of two and must never hop onto them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};

/// Generator specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    Line {
        size: usize,
    },
    Cycle {
        size: usize,
    },
    /// `size` is the vertex count `2^n`, not the dimension `n`.
    Hypercube {
        size: usize,
    },
    Complete {
        size: usize,
    },
    GluedTrees {
        depth: u32,
        seed: u64,
    },
    Random {
        size: usize,
        p: f64,
        seed: u64,
    },
}

impl GraphKind {
    pub fn tag(&self) -> &'static str {
        match self {
            GraphKind::Line { .. } => "line",
            GraphKind::Cycle { .. } => "cycle",
            GraphKind::Hypercube { .. } => "hypercube",
            GraphKind::Complete { .. } => "complete",
            GraphKind::GluedTrees { .. } => "glued_trees",
            GraphKind::Random { .. } => "random",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            GraphKind::GluedTrees { seed, .. } | GraphKind::Random { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(WalkError::InvalidGraphParams(msg));
        match *self {
            GraphKind::Line { size } | GraphKind::Cycle { size } | GraphKind::Complete { size }
                if size == 0 =>
            {
                bad(format!("{} needs at least one vertex", self.tag()))
            }
            GraphKind::Cycle { size } if size < 3 => {
                bad(format!("cycle needs at least 3 vertices, got {size}"))
            }
            GraphKind::Hypercube { size } if size == 0 || !size.is_power_of_two() => {
                bad(format!("hypercube size must be a power of two, got {size}"))
            }
            GraphKind::GluedTrees { depth, .. } if depth == 0 || depth > 20 => {
                bad(format!("glued trees depth must be in [1, 20], got {depth}"))
            }
            GraphKind::Random { size: 0, .. } => {
                bad("random graph needs at least one vertex".into())
            }
            GraphKind::Random { p, .. } if !(0.0..=1.0).contains(&p) => {
                bad(format!("edge probability must lie in [0, 1], got {p}"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Line { size } => write!(f, "line:{size}"),
            GraphKind::Cycle { size } => write!(f, "cycle:{size}"),
            GraphKind::Hypercube { size } => write!(f, "hypercube:{size}"),
            GraphKind::Complete { size } => write!(f, "complete:{size}"),
            GraphKind::GluedTrees { depth, seed } => write!(f, "glued_trees:{depth}:{seed}"),
            GraphKind::Random { size, p, seed } => write!(f, "random:{size}:{p}:{seed}"),
        }
    }
}

/// Parses the compact `tag:arg:arg` form, e.g. `cycle:16`, `glued_trees:3:7`
/// or `random:8:0.4:1`. Dashes in the tag are accepted (`glued-trees`).
impl FromStr for GraphKind {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || WalkError::InvalidGraphParams(format!("cannot parse generator spec `{s}`"));
        let int = |i: usize| -> Result<usize> {
            parts.get(i).and_then(|v| v.parse().ok()).ok_or_else(bad)
        };
        let tag = parts[0].replace('-', "_");
        let kind = match (tag.as_str(), parts.len()) {
            ("line", 2) => GraphKind::Line { size: int(1)? },
            ("cycle", 2) => GraphKind::Cycle { size: int(1)? },
            ("hypercube", 2) => GraphKind::Hypercube { size: int(1)? },
            ("complete", 2) => GraphKind::Complete { size: int(1)? },
            ("glued_trees", 3) => GraphKind::GluedTrees {
                depth: int(1)? as u32,
                seed: int(2)? as u64,
            },
            ("random", 4) => GraphKind::Random {
                size: int(1)?,
                p: parts[2].parse().map_err(|_| bad())?,
                seed: int(3)? as u64,
            },
            _ => return Err(bad()),
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// An immutable undirected simple graph on vertices `0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<bool>,
    degrees: Vec<usize>,
    neighbors: Vec<Vec<usize>>,
    origin: Option<GraphKind>,
}

impl Graph {
    /// Builds a graph from an explicit edge list. Self-loops, repeated pairs
    /// (in either orientation) and out-of-range indices are rejected.
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(WalkError::EmptyGraph);
        }
        let mut seen = BTreeSet::new();
        for &(x, y) in edge_list {
            if x >= n || y >= n {
                return Err(WalkError::VertexOutOfRange { x, y, n });
            }
            if x == y {
                return Err(WalkError::SelfLoop(x));
            }
            if !seen.insert((x.min(y), x.max(y))) {
                return Err(WalkError::DuplicateEdge(x, y));
            }
        }

        let edges: Vec<(usize, usize)> = seen.into_iter().collect();
        let mut adjacency = vec![false; n * n];
        let mut neighbors = vec![Vec::new(); n];
        for &(x, y) in &edges {
            adjacency[x * n + y] = true;
            adjacency[y * n + x] = true;
            neighbors[x].push(y);
            neighbors[y].push(x);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let degrees = neighbors.iter().map(Vec::len).collect();

        Ok(Graph {
            n,
            edges,
            adjacency,
            degrees,
            neighbors,
            origin: None,
        })
    }

    pub fn generate(kind: &GraphKind) -> Result<Self> {
        kind.validate()?;
        let (n, edges) = match *kind {
            GraphKind::Line { size } => (size, (1..size).map(|x| (x - 1, x)).collect()),
            GraphKind::Cycle { size } => (size, (0..size).map(|x| (x, (x + 1) % size)).collect()),
            GraphKind::Hypercube { size } => {
                let bits = size.trailing_zeros();
                let edges = (0..size)
                    .flat_map(|x| (0..bits).map(move |k| (x, x ^ (1 << k))))
                    .filter(|&(x, y)| x < y)
                    .collect();
                (size, edges)
            }
            GraphKind::Complete { size } => {
                let edges = (0..size)
                    .flat_map(|x| (x + 1..size).map(move |y| (x, y)))
                    .collect();
                (size, edges)
            }
            GraphKind::GluedTrees { depth, seed } => glued_trees(depth, seed),
            GraphKind::Random { size, p, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut edges = Vec::new();
                for x in 0..size {
                    for y in x + 1..size {
                        if rng.gen::<f64>() < p {
                            edges.push((x, y));
                        }
                    }
                }
                (size, edges)
            }
        };
        let mut graph = Graph::new(n, &edges)?;
        graph.origin = Some(kind.clone());
        Ok(graph)
    }

    /// Vertex count `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(x, y)` with `x < y`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn origin(&self) -> Option<&GraphKind> {
        self.origin.as_ref()
    }

    /// `A_xy`. Total on all indices: anything at or beyond `N` is a padding
    /// vertex with no edges.
    #[inline]
    pub fn adjacency(&self, x: usize, y: usize) -> bool {
        x < self.n && y < self.n && self.adjacency[x * self.n + y]
    }

    /// Panics if `x >= N`.
    pub fn degree(&self, x: usize) -> usize {
        self.degrees[x]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.neighbors[x]
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.n as f64
    }

    /// Common degree if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degrees[0];
        self.degrees.iter().all(|&e| e == d).then_some(d)
    }

    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for &d in &self.degrees {
            *hist.entry(d).or_insert(0) += 1;
        }
        hist
    }

    /// Qubits per vertex register, `ceil(log2 N)`.
    pub fn register_qubits(&self) -> u32 {
        register_qubits(self.n)
    }

    /// Dense `N x N` adjacency matrix as `f64`.
    pub fn adjacency_matrix(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(
            self.n,
            self.n,
            |x, y| {
                if self.adjacency(x, y) {
                    1.0
                } else {
                    0.0
                }
            },
        )
    }

    /// `A - D`, the generator shared by the classical continuous walk and the
    /// Laplacian-type quantum Hamiltonian.
    pub fn laplacian_matrix(&self) -> nalgebra::DMatrix<f64> {
        let mut m = self.adjacency_matrix();
        for x in 0..self.n {
            m[(x, x)] -= self.degrees[x] as f64;
        }
        m
    }

    /// Re-checks the structural invariants by full scan.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let viol = |what| WalkError::InvariantViolation {
            what,
            value: 1.0,
            limit: 0.0,
        };
        for x in 0..n {
            if self.adjacency[x * n + x] {
                return Err(viol("adjacency diagonal"));
            }
            for y in 0..x {
                if self.adjacency[x * n + y] != self.adjacency[y * n + x] {
                    return Err(viol("adjacency symmetry"));
                }
            }
            let row: usize = (0..n).filter(|&y| self.adjacency[x * n + y]).count();
            if row != self.degrees[x] {
                return Err(viol("degree consistency"));
            }
        }
        if self.degrees.iter().sum::<usize>() != 2 * self.edges.len() {
            return Err(viol("handshake sum"));
        }
        Ok(())
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(x, y)| [x, y]).collect(),
            kind: self.origin.as_ref().map(|k| k.tag().to_string()),
            seed: self.origin.as_ref().and_then(GraphKind::seed),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(&self.to_file()).expect("graph file serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, GraphLoadError> {
        let file: GraphFile = serde_json::from_str(text)?;
        Ok(Graph::try_from(file)?)
    }
}

/// On-disk graph description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl TryFrom<GraphFile> for Graph {
    type Error = WalkError;

    fn try_from(file: GraphFile) -> Result<Self> {
        let edges: Vec<(usize, usize)> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        let graph = Graph::new(file.n, &edges)?;
        graph.validate()?;
        Ok(graph)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GraphLoadError {
    #[error("malformed graph file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] WalkError),
}

/// `ceil(log2 n)`; zero for a single vertex.
pub fn register_qubits(n: usize) -> u32 {
    n.next_power_of_two().trailing_zeros()
}

/// Neighbour of `x` along colour `c` in the complete-graph colouring
/// `c = (x + y) mod N`, i.e. `y_c(x) = (c - x) mod N`.
///
/// The result can equal `x` (when `c = 2x mod N`); `A_xx = 0` makes such a
/// colour inert at `x`.
#[inline]
pub fn color_neighbor(n: usize, c: usize, x: usize) -> usize {
    debug_assert!(c < n && x < n);
    (c + n - x) % n
}

/// Colour of edge `{x, y}`.
#[inline]
pub fn edge_color(n: usize, x: usize, y: usize) -> usize {
    (x + y) % n
}

/// Two complete binary trees of the given depth whose leaf sets are joined
/// by a random alternating cycle. Tree one uses heap layout on
/// `0..m`, tree two the same layout shifted by `m`, with `m = 2^(d+1) - 1`.
fn glued_trees(depth: u32, seed: u64) -> (usize, Vec<(usize, usize)>) {
    let m = (1usize << (depth + 1)) - 1;
    let mut edges = Vec::with_capacity(2 * m + (1 << (depth + 1)));
    for offset in [0, m] {
        for parent in 0..(1usize << depth) - 1 {
            edges.push((offset + parent, offset + 2 * parent + 1));
            edges.push((offset + parent, offset + 2 * parent + 2));
        }
    }

    let first_leaf = (1usize << depth) - 1;
    let mut left: Vec<usize> = (first_leaf..m).collect();
    let mut right: Vec<usize> = (first_leaf + m..2 * m).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    left.shuffle(&mut rng);
    right.shuffle(&mut rng);

    let k = left.len();
    for i in 0..k {
        edges.push((left[i], right[i]));
        edges.push((right[i], left[(i + 1) % k]));
    }
    (2 * m, edges)
}
