//! Quadratic normal forms of `p₀` near `Σ` and their linearized flows.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative threshold below which an eigenvalue of `Q` counts as zero.
const KERNEL_TOL: f64 = 1e-12;

/// Standard symplectic matrix `[[0, I], [−I, 0]]`, so Hamilton's equations
/// read `ż = J ∇p` with `z = (x, ξ)` and `σ(u, w) = −uᵀ J w`.
pub fn symplectic_j(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

pub(crate) fn complexify(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// A quadratic Hamiltonian `p = ½ zᵀ Q z` on `R^{2d}` together with the
/// generator `M = −i J Q` of the flow of `−i H_p`.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub d: usize,
    pub q: DMatrix<f64>,
    pub m: DMatrix<Complex64>,
}

impl Hamiltonian {
    pub fn new(q: DMatrix<f64>) -> Self {
        let d = q.nrows() / 2;
        let m = complexify(&(symplectic_j(d) * &q)) * Complex64::new(0.0, -1.0);
        Self { d, q, m }
    }

    /// `exp(tM)`.
    pub fn flow(&self, t: f64) -> DMatrix<Complex64> {
        (&self.m * Complex64::new(t, 0.0)).exp()
    }

    /// Splits phase space into eigendirections of `M` with positive and
    /// negative eigenvalue and the kernel of `Q` (the fixed points).
    pub fn spectral_split(&self) -> SpectralSplit {
        let dim = 2 * self.d;
        let qe = SymmetricEigen::new(self.q.clone());
        let scale = qe.eigenvalues.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        let sqrt_vals = qe.eigenvalues.map(|x| x.max(0.0).sqrt());
        let root = &qe.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * qe.eigenvectors.transpose();

        let mut kernel = Vec::new();
        for (i, &lam) in qe.eigenvalues.iter().enumerate() {
            if lam.abs() <= KERNEL_TOL * scale.max(1.0) {
                kernel.push(DMatrix::from_fn(dim, 1, |r, _| Complex64::new(qe.eigenvectors[(r, i)], 0.0)));
            }
        }

        // K = −i Q^{1/2} J Q^{1/2} is Hermitian; v = J Q^{1/2} w solves M v = κ v
        let jr = complexify(&(symplectic_j(self.d) * &root));
        let k = complexify(&(&root * symplectic_j(self.d) * &root)) * Complex64::new(0.0, -1.0);
        let ke = SymmetricEigen::new(k);
        let mut growing = Vec::new();
        let mut decaying = Vec::new();
        for i in 0..dim {
            let kappa = ke.eigenvalues[i];
            if kappa.abs() <= KERNEL_TOL * scale.max(1.0) {
                continue;
            }
            let v = &jr * ke.eigenvectors.column(i);
            let v = DMatrix::from_column_slice(dim, 1, (&v / Complex64::new(v.norm(), 0.0)).as_slice());
            if kappa > 0.0 {
                growing.push((kappa, v));
            } else {
                decaying.push((kappa, v));
            }
        }
        growing.sort_by(|a, b| a.0.total_cmp(&b.0));
        decaying.sort_by(|a, b| b.0.total_cmp(&a.0));
        SpectralSplit {
            growing,
            decaying,
            kernel,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralSplit {
    pub growing: Vec<(f64, DMatrix<Complex64>)>,
    pub decaying: Vec<(f64, DMatrix<Complex64>)>,
    pub kernel: Vec<DMatrix<Complex64>>,
}

/// The constant-coefficient model `φ = Σ μ_j |z_j|²`.
///
/// `reduced` is the transversal normal form `p₀ = Σ |μ_j|(x_j² + ξ_j²)` on
/// `R^{2n}` in which `Σ` is the origin; `full` is `p₀ = Σ |q_j|²` on
/// `T*Cⁿ ≅ R^{4n}` with coordinates `(x, y; ξ, η)`, `z = x + iy`.
#[derive(Debug, Clone)]
pub struct QuadraticModel {
    pub mu: Vec<f64>,
    pub reduced: Hamiltonian,
    pub full: Hamiltonian,
}

impl QuadraticModel {
    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// `M` of the reduced model; its spectrum is `{±2μ_j}`.
    pub fn m(&self) -> &DMatrix<Complex64> {
        &self.reduced.m
    }

    pub fn n_minus(&self) -> usize {
        self.mu.iter().filter(|&&m| m < 0.0).count()
    }
}

pub fn build_model(mu: &[f64]) -> Result<QuadraticModel> {
    if mu.is_empty() {
        return Err(Error::Validation("μ must be non-empty".into()));
    }
    if let Some(&m) = mu.iter().find(|m| **m == 0.0 || !m.is_finite()) {
        return Err(Error::Degenerate {
            eigenvalue: m,
            tol: 0.0,
        });
    }
    let n = mu.len();
    let mut qr = DMatrix::zeros(2 * n, 2 * n);
    for (j, &m) in mu.iter().enumerate() {
        qr[(j, j)] = 2.0 * m.abs();
        qr[(n + j, n + j)] = 2.0 * m.abs();
    }

    // q_j = u_j + i v_j with u_j = μ_j x_j − η_j/2 and v_j = μ_j y_j + ξ_j/2;
    // slots: x = j, y = n + j, ξ = 2n + j, η = 3n + j
    let mut qf = DMatrix::zeros(4 * n, 4 * n);
    for (j, &m) in mu.iter().enumerate() {
        let mut u = DMatrix::<f64>::zeros(4 * n, 1);
        u[j] = m;
        u[3 * n + j] = -0.5;
        let mut v = DMatrix::<f64>::zeros(4 * n, 1);
        v[n + j] = m;
        v[2 * n + j] = 0.5;
        qf += (&u * u.transpose() + &v * v.transpose()) * 2.0;
    }
    Ok(QuadraticModel {
        mu: mu.to_vec(),
        reduced: Hamiltonian::new(qr),
        full: Hamiltonian::new(qf),
    })
}
