//! Non-integrability of `J'` on `C²` for index-one curvature.
//!
//! With the curvature matrix `Θ_ij = Θ(∂/∂z̄_i, ∂/∂z_j) = −2 ∂²φ/∂z_j∂z̄_i`,
//! diagonal at the origin with `Θ(0) = −diag(λ₁, λ₂)`, let `U(z)` be the
//! unitary matrix whose rows give the diagonalizing frame,
//! `Z_i = Σ_k u_ik ∂/∂z̄_k`, so that `U Θ U* = −diag(λ)` and `U(0) = I`. The
//! obstruction is the Wirtinger derivative `∂u₂₁/∂z₁` at the origin, which is
//! non-zero exactly when `∂³φ/∂z₁²∂z̄₂ ≠ 0`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::levi::{levi_matrix, signature, LeviMatrix, DEFAULT_SIGNATURE_TOL};
use super::weight::WeightFunction;
use crate::error::{Error, Result};

/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObstructionMethod {
    ClosedForm,
    FiniteDifference { step: f64 },
}

/// `(λ₁, λ₂)` with `Θ(0) = −diag(λ)`, i.e. twice the Levi diagonal.
pub fn curvature_eigenvalues_at_origin(phi: &WeightFunction) -> Result<(f64, f64)> {
    if phi.dim() != 2 {
        return Err(Error::Validation(format!(
            "obstruction is defined on C², got n = {}",
            phi.dim()
        )));
    }
    let origin = [Complex64::new(0.0, 0.0); 2];
    let h = levi_matrix(phi, &origin)?;
    let m = h.matrix();
    let scale = m.iter().map(|c| c.norm()).fold(1.0_f64, f64::max);
    if m[(0, 1)].norm() > 1e-12 * scale {
        return Err(Error::Validation(
            "Levi matrix at the origin must be diagonal; rotate coordinates first".into(),
        ));
    }
    let sig = signature(&h, DEFAULT_SIGNATURE_TOL);
    sig.require_nondegenerate(DEFAULT_SIGNATURE_TOL)?;
    if sig.n_minus != 1 {
        return Err(Error::Validation(format!(
            "curvature must have index one, got n₋ = {}",
            sig.n_minus
        )));
    }
    let (l1, l2) = (2.0 * m[(0, 0)].re, 2.0 * m[(1, 1)].re);
    if (l1 - l2).abs() <= 1e-12 * scale {
        return Err(Error::Validation(
            "equal curvature eigenvalues make the frame derivative singular".into(),
        ));
    }
    Ok((l1, l2))
}

pub fn nijenhuis_obstruction(phi: &WeightFunction, method: ObstructionMethod) -> Result<Complex64> {
    let (l1, l2) = curvature_eigenvalues_at_origin(phi)?;
    match method {
        ObstructionMethod::ClosedForm => {
            let origin = [Complex64::new(0.0, 0.0); 2];
            Ok(2.0 * phi.partial(&[2, 0], &[0, 1], &origin) / (l2 - l1))
        }
        ObstructionMethod::FiniteDifference { step } => {
            if !(step > 0.0) {
                return Err(Error::Validation("step must be positive".into()));
            }
            let targets = [-l1, -l2];
            let u21 = |x: f64, y: f64| -> Result<Complex64> {
                let z = [Complex64::new(x, y), Complex64::new(0.0, 0.0)];
                Ok(frame_rows(phi, &z, targets)?[(1, 0)])
            };
            let dx = (u21(step, 0.0)? - u21(-step, 0.0)?) / (2.0 * step);
            let dy = (u21(0.0, step)? - u21(0.0, -step)?) / (2.0 * step);
            Ok(0.5 * (dx - Complex64::new(0.0, 1.0) * dy))
        }
    }
}

/// Frame matrix `U(z)` with rows `Z_i`, in the gauge of positive real
/// diagonal entries. Row `i` follows the eigenvalue closest to `targets[i]`.
pub fn frame_rows(phi: &WeightFunction, z: &[Complex64], targets: [f64; 2]) -> Result<DMatrix<Complex64>> {
    let levi = levi_matrix(phi, z)?;
    let theta = LeviMatrix::new(levi.matrix() * Complex64::new(-2.0, 0.0))?;
    let (values, vecs) = theta.eigen();
    let mut u = DMatrix::zeros(2, 2);
    let mut used = [false; 2];
    for (i, &t) in targets.iter().enumerate() {
        let col = (0..2)
            .filter(|&c| !used[c])
            .min_by(|&a, &b| (values[a] - t).abs().total_cmp(&(values[b] - t).abs()))
            .expect("two eigenvalues");
        used[col] = true;
        // row i = conj(eigenvector)ᵀ; fix the phase so u_ii > 0
        let v = vecs.column(col);
        let d = v[i].conj();
        if d.norm() == 0.0 {
            return Err(Error::Singular("frame gauge undefined (zero diagonal entry)".into()));
        }
        let phase = d.conj() / d.norm();
        for k in 0..2 {
            u[(i, k)] = v[k].conj() * phase;
        }
    }
    Ok(u)
}
