use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use super::weight::WeightFunction;
use crate::error::{Error, Result};

/// Hermiticity tolerance for stored Levi matrices.
pub const TOL_HERM: f64 = 1e-12;

/// Default degeneracy threshold, relative to the largest `|eigenvalue|`.
pub const DEFAULT_SIGNATURE_TOL: f64 = 1e-10;

/// `(∂²φ/∂z̄_j ∂z_k)` at a point. The curvature form is `Θ = 2∂∂̄φ`; callers
/// needing `Θ` multiply by 2 themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct LeviMatrix(DMatrix<Complex64>);

impl LeviMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Validation("Levi matrix must be square".into()));
        }
        let scale = m.iter().map(|c| c.norm()).fold(1.0_f64, f64::max);
        let defect = (&m - m.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
        if defect > TOL_HERM * scale {
            return Err(Error::Validation(format!(
                "Levi matrix not Hermitian (defect {defect:.3e})"
            )));
        }
        Ok(Self(m))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let v: Vec<Complex64> = d.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(v)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    /// Real eigenvalues, descending, with unit eigenvectors as columns.
    /// Each eigenvector is phase-normalized so its largest entry is real and
    /// positive, which makes the frame deterministic.
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<Complex64>) {
        let eig = SymmetricEigen::new(self.0.clone());
        let n = self.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let mut frame = DMatrix::zeros(n, n);
        let mut values = Vec::with_capacity(n);
        for (col, &i) in order.iter().enumerate() {
            values.push(eig.eigenvalues[i]);
            let v = eig.eigenvectors.column(i);
            let pivot = v
                .iter()
                .copied()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .unwrap_or(Complex64::new(1.0, 0.0));
            let phase = if pivot.norm() > 0.0 {
                pivot.conj() / pivot.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            for r in 0..n {
                frame[(r, col)] = v[r] * phase;
            }
        }
        (values, frame)
    }
}

/// Entry `(j,k)` is `∂²φ/∂z̄_j ∂z_k` at `z`.
pub fn levi_matrix(phi: &WeightFunction, z: &[Complex64]) -> Result<LeviMatrix> {
    let n = phi.dim();
    if z.len() != n {
        return Err(Error::Validation(format!(
            "point has {} coordinates, weight function has {n}",
            z.len()
        )));
    }
    let m = DMatrix::from_fn(n, n, |j, k| phi.mixed(j, k, z));
    LeviMatrix::new(m)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Signature {
    pub n_minus: usize,
    pub n_plus: usize,
    /// Sorted descending, so positive directions come first.
    pub eigenvalues: Vec<f64>,
    pub degenerate: bool,
}

impl Signature {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn require_nondegenerate(&self, tol: f64) -> Result<()> {
        if self.degenerate {
            let smallest = self
                .eigenvalues
                .iter()
                .copied()
                .min_by(|a, b| a.abs().total_cmp(&b.abs()))
                .unwrap_or(0.0);
            return Err(Error::Degenerate {
                eigenvalue: smallest,
                tol,
            });
        }
        Ok(())
    }
}

/// Counts eigenvalues by sign; `|λ| ≤ tol · max|λ|` marks the form degenerate.
pub fn signature(h: &LeviMatrix, tol: f64) -> Signature {
    let (eigenvalues, _) = h.eigen();
    signature_of_eigenvalues(eigenvalues, tol)
}

pub(crate) fn signature_of_eigenvalues(eigenvalues: Vec<f64>, tol: f64) -> Signature {
    let scale = eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let thr = tol * scale;
    let n_plus = eigenvalues.iter().filter(|&&x| x > thr).count();
    let n_minus = eigenvalues.iter().filter(|&&x| x < -thr).count();
    let degenerate = scale == 0.0 || n_plus + n_minus < eigenvalues.len();
    Signature {
        n_minus,
        n_plus,
        eigenvalues,
        degenerate,
    }
}

/// The almost complex structure `J' = (−J₋) ⊕ J₊`: a unitary frame diagonalizing
/// the Levi form, with the negative eigendirections marked for conjugation.
#[derive(Debug, Clone)]
pub struct JPrimeStructure {
    /// Columns are the eigendirections, positive ones first.
    pub frame: DMatrix<Complex64>,
    /// `true` where `J'` conjugates the direction (negative eigenvalue).
    pub conjugated: Vec<bool>,
    pub eigenvalues: Vec<f64>,
}

impl JPrimeStructure {
    pub fn n_conjugated(&self) -> usize {
        self.conjugated.iter().filter(|&&m| m).count()
    }

    /// `‖U*U − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.frame.nrows();
        let g = self.frame.adjoint() * &self.frame - DMatrix::<Complex64>::identity(n, n);
        g.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Curvature of `H` in the `J'` frame: `S · U* H U` with `S = diag(±1)`
    /// flipping the conjugated directions. Positive definite by construction.
    pub fn transformed_curvature(&self, h: &LeviMatrix) -> DMatrix<Complex64> {
        let mut d = self.frame.adjoint() * h.matrix() * &self.frame;
        for (i, &flip) in self.conjugated.iter().enumerate() {
            if flip {
                d.row_mut(i).scale_mut(-1.0);
            }
        }
        d
    }
}

pub fn jprime_structure(h: &LeviMatrix) -> Result<JPrimeStructure> {
    let (eigenvalues, frame) = h.eigen();
    let sig = signature_of_eigenvalues(eigenvalues.clone(), DEFAULT_SIGNATURE_TOL);
    sig.require_nondegenerate(DEFAULT_SIGNATURE_TOL)?;
    let conjugated = eigenvalues.iter().map(|&x| x < 0.0).collect();
    Ok(JPrimeStructure {
        frame,
        conjugated,
        eigenvalues,
    })
}
