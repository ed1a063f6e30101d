//! Closed-form reduced kernels `K̃(z, w) = K(z, w) e^{−kφ(z)−kφ(w)}`.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};

fn check_points(lambda: &[f64], z: &[Complex64], w: &[Complex64]) -> Result<()> {
    if z.len() != lambda.len() || w.len() != lambda.len() {
        return Err(Error::Validation(format!(
            "points must have {} coordinates",
            lambda.len()
        )));
    }
    Ok(())
}

/// Bargmann–Fock kernel for `φ = Σ λ_j |z_j|²`, Lebesgue measure:
/// `Π_j (2kλ_j/π) exp(kλ_j(2 z_j w̄_j − |z_j|² − |w_j|²))`.
pub fn fock_kernel_exact(lambda: &[f64], k: f64, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    check_points(lambda, z, w)?;
    if let Some(&l) = lambda.iter().find(|l| !(**l > 0.0)) {
        return Err(Error::Validation(format!(
            "λ = {l} is not positive; mixed signatures go through fock_harmonic_kernel"
        )));
    }
    if !(k > 0.0) {
        return Err(Error::Validation(format!("k must be positive, got {k}")));
    }
    let mut prefactor = 1.0;
    let mut exponent = Complex64::new(0.0, 0.0);
    for (j, &l) in lambda.iter().enumerate() {
        prefactor *= 2.0 * k * l / PI;
        exponent += k * l * (2.0 * z[j] * w[j].conj() - z[j].norm_sqr() - w[j].norm_sqr());
    }
    Ok(prefactor * exponent.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmonicValue {
    /// Coefficient of `ē_I ⊗ ē_I*` with `I` the negative directions.
    pub value: Complex64,
    /// `true` when `q ≠ n₋`, where the harmonic space is trivial.
    pub trivial: bool,
}

/// Harmonic `(0,q)`-kernel of the mixed-signature Fock model: the Fock
/// kernel for `|Λ|` in the variables `u_j = z̄_j` on negative directions.
pub fn fock_harmonic_kernel(
    lambda: &[f64],
    k: f64,
    z: &[Complex64],
    w: &[Complex64],
    q: usize,
) -> Result<HarmonicValue> {
    check_points(lambda, z, w)?;
    if lambda.iter().any(|l| *l == 0.0 || !l.is_finite()) {
        return Err(Error::Degenerate {
            eigenvalue: 0.0,
            tol: 0.0,
        });
    }
    let n_minus = lambda.iter().filter(|l| **l < 0.0).count();
    if q != n_minus {
        return Ok(HarmonicValue {
            value: Complex64::new(0.0, 0.0),
            trivial: true,
        });
    }
    let abs: Vec<f64> = lambda.iter().map(|l| l.abs()).collect();
    let flip = |p: &[Complex64]| -> Vec<Complex64> {
        p.iter()
            .zip(lambda)
            .map(|(c, l)| if *l < 0.0 { c.conj() } else { *c })
            .collect()
    };
    Ok(HarmonicValue {
        value: fock_kernel_exact(&abs, k, &flip(z), &flip(w))?,
        trivial: false,
    })
}

/// Fubini–Study volume of `P¹` for `dV = dm/(1+|z|²)²`.
pub const P1_VOLUME: f64 = PI;

/// Reduced kernel of `O(k) → P¹` with `|s|² = (1+|z|²)^{−k}` and
/// `dV = dm/(1+|z|²)²`:
/// `((k+1)/π) (1 + z w̄)^k (1+|z|²)^{−k/2} (1+|w|²)^{−k/2}`.
pub fn p1_kernel_exact(k: u32, z: Complex64, w: Complex64) -> Complex64 {
    let rz = 1.0 / (1.0 + z.norm_sqr()).sqrt();
    let rw = 1.0 / (1.0 + w.norm_sqr()).sqrt();
    // (1 + z w̄) ρ_z ρ_w stays bounded as either point goes to ∞
    let base = (Complex64::new(1.0, 0.0) + z * w.conj()) * rz * rw;
    (k as f64 + 1.0) / P1_VOLUME * base.powu(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fock_origin_value() {
        let v = fock_kernel_exact(&[0.5], 1.0, &[c(0.0, 0.0)], &[c(0.0, 0.0)]).unwrap();
        assert!((v - c(1.0 / PI, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn fock_diagonal_is_constant() {
        let lambda = [0.5, 1.25];
        for k in [1.0, 3.0, 8.0] {
            let z = [c(0.7, -0.2), c(-1.0, 0.4)];
            let v = fock_kernel_exact(&lambda, k, &z, &z).unwrap();
            let expected = k * k * (2.0 * 0.5 / PI) * (2.0 * 1.25 / PI);
            assert!(v.im.abs() < 1e-15 && (v.re - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn fock_normalized_log_modulus() {
        let (lambda, k) = ([0.5, 2.0], 3.0);
        let z = [c(0.3, 0.1), c(-0.2, 0.0)];
        let w = [c(-0.1, 0.4), c(0.1, 0.2)];
        let kzw = fock_kernel_exact(&lambda, k, &z, &w).unwrap().norm();
        let kzz = fock_kernel_exact(&lambda, k, &z, &z).unwrap().re;
        let kww = fock_kernel_exact(&lambda, k, &w, &w).unwrap().re;
        let rate = (kzw / (kzz * kww).sqrt()).ln() / k;
        let expected: f64 = -(0..2).map(|j| lambda[j] * (z[j] - w[j]).norm_sqr()).sum::<f64>();
        assert!((rate - expected).abs() < 1e-14);
    }

    #[test]
    fn fock_rejects_nonpositive() {
        assert!(fock_kernel_exact(&[0.5, -0.5], 1.0, &[c(0.0, 0.0); 2], &[c(0.0, 0.0); 2]).is_err());
    }

    #[test]
    fn harmonic_kernel_examples() {
        let lambda = [0.5, -0.5];
        let o = [c(0.0, 0.0); 2];
        let v = fock_harmonic_kernel(&lambda, 1.0, &o, &o, 1).unwrap();
        assert!(!v.trivial);
        assert!((v.value - c(1.0 / (PI * PI), 0.0)).norm() < 1e-15);
        let v = fock_harmonic_kernel(&lambda, 1.0, &o, &o, 0).unwrap();
        assert!(v.trivial && v.value == c(0.0, 0.0));
        let z = [c(0.3, -0.8), c(1.1, 0.25)];
        let h = fock_harmonic_kernel(&lambda, 2.0, &z, &z, 1).unwrap().value;
        let f = fock_kernel_exact(&[0.5, 0.5], 2.0, &z, &z).unwrap();
        assert!((h - f).norm() < 1e-14);
    }

    #[test]
    fn p1_examples() {
        let z = c(0.4, -1.3);
        let w = c(-2.0, 0.5);
        assert!((p1_kernel_exact(0, z, w) - c(1.0 / PI, 0.0)).norm() < 1e-15);
        for k in [1, 5, 20] {
            let d = p1_kernel_exact(k, z, z);
            assert!((d - c((k as f64 + 1.0) / PI, 0.0)).norm() < 1e-13);
            assert!((p1_kernel_exact(k, w, z) - p1_kernel_exact(k, z, w).conj()).norm() < 1e-12);
        }
    }
}
