//! The two-point phase `ψ(x, y) = i ψ̃(∞, x, y)` of the Bergman projection in
//! the constant-coefficient model.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::model::{QuadraticModel, I};
use super::stable::limit_phase_of;
use crate::error::{Error, Result};

/// `ψ(x, y) = (i/2) [X; Y]ᵀ K [X; Y]` with `X = (Re z, Im z)` stacked.
#[derive(Debug, Clone)]
pub struct KernelPhase {
    n: usize,
    kxx: DMatrix<Complex64>,
    kxy: DMatrix<Complex64>,
    kyy: DMatrix<Complex64>,
}

fn real_coords(z: &[Complex64]) -> DMatrix<Complex64> {
    let n = z.len();
    DMatrix::from_fn(2 * n, 1, |r, _| {
        if r < n {
            Complex64::new(z[r].re, 0.0)
        } else {
            Complex64::new(z[r - n].im, 0.0)
        }
    })
}

/// Wirtinger derivatives of a function from its real gradient.
fn wirtinger(grad: &DMatrix<Complex64>, n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let dz = (0..n).map(|j| 0.5 * (grad[j] - I * grad[n + j])).collect();
    let dzbar = (0..n).map(|j| 0.5 * (grad[j] + I * grad[n + j])).collect();
    (dz, dzbar)
}

impl KernelPhase {
    /// Stationary phase in `θ` of `ψ(∞, X, θ) − Y·θ` for the full model.
    pub fn new(model: &QuadraticModel) -> Result<Self> {
        let lim = limit_phase_of(&model.full)?;
        let cinv = lim
            .c
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("stationary system in θ is degenerate".into()))?;
        let kxy = &lim.b * &cinv;
        Ok(Self {
            n: model.n(),
            kxx: &lim.a - &kxy * lim.b.transpose(),
            kyy: -cinv,
            kxy,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eval(&self, z: &[Complex64], w: &[Complex64]) -> Complex64 {
        let (x, y) = (real_coords(z), real_coords(w));
        let v = x.transpose() * &self.kxx * &x + (x.transpose() * &self.kxy * &y) * Complex64::new(2.0, 0.0)
            + y.transpose() * &self.kyy * &y;
        0.5 * I * v[0]
    }

    /// `(∂ψ/∂z, ∂ψ/∂z̄, ∂ψ/∂w, ∂ψ/∂w̄)`.
    pub fn gradients(&self, z: &[Complex64], w: &[Complex64]) -> [Vec<Complex64>; 4] {
        let (x, y) = (real_coords(z), real_coords(w));
        let gx = (&self.kxx * &x + &self.kxy * &y) * I;
        let gy = (self.kxy.transpose() * &x + &self.kyy * &y) * I;
        let (dz, dzb) = wirtinger(&gx, self.n);
        let (dw, dwb) = wirtinger(&gy, self.n);
        [dz, dzb, dw, dwb]
    }

    /// Largest deviation on the diagonal `w = z` from
    /// `∂_zψ = ∂_zφ`, `∂_z̄ψ = −∂_z̄φ`, `∂_wψ = −∂_zφ`, `∂_w̄ψ = ∂_z̄φ`
    /// with `φ = Σ μ_j |z_j|²`.
    pub fn diagonal_gradient_defect(&self, mu: &[f64], z: &[Complex64]) -> f64 {
        let [dz, dzb, dw, dwb] = self.gradients(z, z);
        let mut worst = 0.0_f64;
        for j in 0..self.n {
            let phi_z = mu[j] * z[j].conj();
            let phi_zb = mu[j] * z[j];
            worst = worst
                .max((dz[j] - phi_z).norm())
                .max((dzb[j] + phi_zb).norm())
                .max((dw[j] + phi_z).norm())
                .max((dwb[j] - phi_zb).norm());
        }
        worst
    }
}

pub fn kernel_phase(model: &QuadraticModel, x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    if x.len() != model.n() || y.len() != model.n() {
        return Err(Error::Validation("points must have n complex coordinates".into()));
    }
    Ok(KernelPhase::new(model)?.eval(x, y))
}
