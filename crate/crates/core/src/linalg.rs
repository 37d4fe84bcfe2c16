//! Dense complex linear algebra used by every engine.
//!
//! Exponentials of Hermitian generators are taken through a full
//! eigendecomposition, `e^{-iHt} = V diag(e^{-i lambda t}) V^dagger`, which is
//! exact to roundoff at the dimensions this crate targets.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Result, WalkError};

pub type ComplexVector = DVector<Complex64>;
pub type ComplexMatrix = DMatrix<Complex64>;

/// Entrywise tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A square complex matrix with `M = M^dagger` (to [`HERMITIAN_TOL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(WalkError::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        let defect = hermiticity_defect(&m);
        if defect > HERMITIAN_TOL {
            return Err(WalkError::NotHermitian(defect));
        }
        Ok(HermitianMatrix(m))
    }

    pub fn from_real_symmetric(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|v| Complex64::new(v, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn spectral(&self) -> Spectral {
        let eig = self.0.clone().symmetric_eigen();
        Spectral {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        }
    }
}

/// Eigendecomposition `H = V diag(lambda) V^dagger` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Spectral {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectral {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `e^{-iHt} v`.
    pub fn apply_exp(&self, t: f64, v: &ComplexVector) -> Result<ComplexVector> {
        check_dim(self.dim(), v.len())?;
        let mut coeffs = self.eigenvectors.ad_mul(v);
        for (c, &lambda) in coeffs.iter_mut().zip(self.eigenvalues.iter()) {
            *c *= Complex64::from_polar(1.0, -lambda * t);
        }
        Ok(&self.eigenvectors * coeffs)
    }

    /// Full unitary `e^{-iHt}`.
    pub fn exp_matrix(&self, t: f64) -> ComplexMatrix {
        let phases = DVector::from_iterator(
            self.dim(),
            self.eigenvalues
                .iter()
                .map(|&lambda| Complex64::from_polar(1.0, -lambda * t)),
        );
        let scaled = DMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            self.eigenvectors[(r, c)] * phases[c]
        });
        scaled * self.eigenvectors.adjoint()
    }

    /// `sum_k lambda_k P_k`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let scaled = DMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            self.eigenvectors[(r, c)] * self.eigenvalues[c]
        });
        scaled * self.eigenvectors.adjoint()
    }
}

/// `e^{-iHt} v` through the spectral decomposition of `H`.
pub fn expm_apply_hermitian(
    h: &HermitianMatrix,
    t: f64,
    v: &ComplexVector,
) -> Result<ComplexVector> {
    check_dim(h.dim(), v.len())?;
    h.spectral().apply_exp(t, v)
}

/// Real symmetric counterpart used by the classical continuous walk:
/// `e^{Mt} p` for symmetric real `M`.
#[derive(Debug, Clone)]
pub struct SymmetricSpectral {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SymmetricSpectral {
    pub fn new(m: &DMatrix<f64>) -> Result<Self> {
        let defect = (m - m.transpose()).camax();
        if defect > HERMITIAN_TOL {
            return Err(WalkError::NotHermitian(defect));
        }
        let eig = m.clone().symmetric_eigen();
        Ok(SymmetricSpectral {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    /// `e^{Mt} p`.
    pub fn apply_exp(&self, t: f64, p: &DVector<f64>) -> Result<DVector<f64>> {
        check_dim(self.eigenvalues.len(), p.len())?;
        let mut coeffs = self.eigenvectors.tr_mul(p);
        for (c, &lambda) in coeffs.iter_mut().zip(self.eigenvalues.iter()) {
            *c *= (lambda * t).exp();
        }
        Ok(&self.eigenvectors * coeffs)
    }
}

/// `max |(M^dagger M - I)_ij|`.
pub fn unitarity_defect(m: &ComplexMatrix) -> f64 {
    let gram = m.ad_mul(m);
    let mut worst = 0.0f64;
    for r in 0..gram.nrows() {
        for c in 0..gram.ncols() {
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((gram[(r, c)] - target).norm());
        }
    }
    worst
}

/// `max |(M - M^dagger)_ij|`.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..m.nrows() {
        for c in 0..=r.min(m.ncols().saturating_sub(1)) {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// `|<u|v>|`.
pub fn fidelity(u: &ComplexVector, v: &ComplexVector) -> Result<f64> {
    check_dim(u.len(), v.len())?;
    Ok(u.dotc(v).norm().min(1.0))
}

pub fn basis_vector(dim: usize, k: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(dim);
    v[k] = Complex64::new(1.0, 0.0);
    v
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(WalkError::DimensionMismatch { expected, got });
    }
    Ok(())
}
