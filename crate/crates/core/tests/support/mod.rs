//! Brute-force dense operators on the coined space, built directly from the
//! basis-index definitions. Nothing here calls the library's operator code,
//! so agreement with it is an independent check.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Basis layout `|x, y, b>` with `index = ((x * R) + y) * 2 + b`, `R = 2^q`.
#[derive(Debug, Clone, Copy)]
pub struct Layout {
    pub n: usize,
    pub q: u32,
}

impl Layout {
    pub fn new(n: usize) -> Self {
        let mut q = 0;
        while (1usize << q) < n {
            q += 1;
        }
        Layout { n, q }
    }

    pub fn reg(&self) -> usize {
        1 << self.q
    }

    pub fn dim(&self) -> usize {
        2 * self.reg() * self.reg()
    }

    pub fn idx(&self, x: usize, y: usize, b: usize) -> usize {
        (x * self.reg() + y) * 2 + b
    }

    pub fn decode(&self, i: usize) -> (usize, usize, usize) {
        let b = i % 2;
        let y = (i / 2) % self.reg();
        let x = i / (2 * self.reg());
        (x, y, b)
    }
}

/// Padded adjacency: `R x R`, false outside `[0, n)`.
pub fn adjacency(layout: Layout, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let r = layout.reg();
    let mut a = vec![vec![false; r]; r];
    for &(x, y) in edges {
        a[x][y] = true;
        a[y][x] = true;
    }
    a
}

pub fn permutation(dim: usize, f: impl Fn(usize) -> usize) -> CMat {
    let mut m = CMat::zeros(dim, dim);
    for col in 0..dim {
        m[(f(col), col)] = ONE;
    }
    m
}

pub fn oracle(l: Layout, a: &[Vec<bool>]) -> CMat {
    permutation(l.dim(), |i| {
        let (x, y, b) = l.decode(i);
        l.idx(x, y, b ^ a[x][y] as usize)
    })
}

pub fn swap(l: Layout) -> CMat {
    permutation(l.dim(), |i| {
        let (x, y, b) = l.decode(i);
        if b == 1 {
            l.idx(y, x, b)
        } else {
            i
        }
    })
}

/// `I_x (x) U (x) I_b` for a coin `U` on the `y` register.
pub fn on_y(l: Layout, u: &CMat) -> CMat {
    let r = l.reg();
    assert_eq!(u.nrows(), r);
    let id_x = CMat::identity(r, r);
    let id_b = CMat::identity(2, 2);
    id_x.kronecker(u).kronecker(&id_b)
}

pub fn hadamard_power(q: u32) -> CMat {
    let h1 =
        CMat::from_row_slice(2, 2, &[ONE, ONE, ONE, -ONE]) * Complex64::new(0.5f64.sqrt(), 0.0);
    let mut h = CMat::identity(1, 1);
    for _ in 0..q {
        h = h.kronecker(&h1);
    }
    h
}

pub fn grover(r: usize) -> CMat {
    CMat::from_fn(r, r, |i, j| {
        let d = if i == j { 1.0 } else { 0.0 };
        Complex64::new(2.0 / r as f64 - d, 0.0)
    })
}

/// `|x, y, b> -> |x, y xor ((c - x) mod n), b>` for `x < n`; padded `x` fixed.
pub fn v_c(l: Layout, c: usize) -> CMat {
    permutation(l.dim(), |i| {
        let (x, y, b) = l.decode(i);
        if x < l.n {
            l.idx(x, y ^ ((c + l.n - x) % l.n), b)
        } else {
            i
        }
    })
}

/// `T |x, y, 1> = |y, x, 1>`, `T |x, y, 0> = 0`.
pub fn t_op(l: Layout) -> CMat {
    let mut m = CMat::zeros(l.dim(), l.dim());
    for x in 0..l.reg() {
        for y in 0..l.reg() {
            m[(l.idx(y, x, 1), l.idx(x, y, 1))] = ONE;
        }
    }
    m
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm(m: &CMat) -> CMat {
    let norm: f64 = m.iter().map(|z| z.norm()).sum();
    let mut s = 0;
    while norm / f64::powi(2.0, s) > 0.5 {
        s += 1;
    }
    let a = m / Complex64::new(f64::powi(2.0, s), 0.0);
    let dim = m.nrows();
    let mut term = CMat::identity(dim, dim);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &a / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

pub fn unitarity_defect(u: &CMat) -> f64 {
    let dim = u.nrows();
    (u.adjoint() * u - CMat::identity(dim, dim))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Deterministic pseudo-random edge list: a small LCG, so the oracle does not
/// share the library's generator.
pub fn lcg_graph(n: usize, p: f64, seed: u64) -> Vec<(usize, usize)> {
    let mut state = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut edges = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if next() < p {
                edges.push((x, y));
            }
        }
    }
    edges
}
