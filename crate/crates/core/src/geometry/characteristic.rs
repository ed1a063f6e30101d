//! The doubly characteristic manifold `Σ = {q₁ = … = q_n = 0}` of the
//! semiclassical `∂̄`-Laplacian, in the trivial-frame model coordinates.

use num_complex::Complex64;
use serde::Serialize;

use super::levi::levi_matrix;
use super::symbol::{poisson_bracket, q_symbol};
use super::weight::WeightFunction;
use crate::error::Result;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A point `(z, ζ)` of `Λ^{1,0}T*X ≅ T*X`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolPoint {
    pub z: Vec<Complex64>,
    pub zeta: Vec<Complex64>,
}

/// Real cotangent coordinates `(x, y; ξ, η)` with `z = x + iy`, `ζ = ξ − iη`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealCotangent {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
}

impl SymbolPoint {
    pub fn to_real(&self) -> RealCotangent {
        RealCotangent {
            x: self.z.iter().map(|w| w.re).collect(),
            y: self.z.iter().map(|w| w.im).collect(),
            xi: self.zeta.iter().map(|w| w.re).collect(),
            eta: self.zeta.iter().map(|w| -w.im).collect(),
        }
    }

    pub fn from_real(r: &RealCotangent) -> Self {
        Self {
            z: r.x
                .iter()
                .zip(&r.y)
                .map(|(&x, &y)| Complex64::new(x, y))
                .collect(),
            zeta: r
                .xi
                .iter()
                .zip(&r.eta)
                .map(|(&xi, &eta)| Complex64::new(xi, -eta))
                .collect(),
        }
    }
}

/// The point of `Σ` over `z`: `ζ_j = (2/i) ∂φ/∂z_j`.
pub fn sigma_point(phi: &WeightFunction, z: &[Complex64]) -> SymbolPoint {
    let zeta = (0..phi.dim()).map(|j| -2.0 * I * phi.dz(j, z)).collect();
    SymbolPoint {
        z: z.to_vec(),
        zeta,
    }
}

/// `q_j(z, ζ) = (i/2) ζ̄_j + ∂φ/∂z̄_j`.
pub fn q_values(phi: &WeightFunction, pt: &SymbolPoint) -> Vec<Complex64> {
    (0..phi.dim())
        .map(|j| 0.5 * I * pt.zeta[j].conj() + phi.dzbar(j, &pt.z))
        .collect()
}

/// `p₀ = Σ_j |q_j|²`, non-negative and vanishing exactly on `Σ`.
pub fn p0_eval(phi: &WeightFunction, pt: &SymbolPoint) -> f64 {
    q_values(phi, pt).iter().map(|q| q.norm_sqr()).sum()
}

/// Max over `(i, j)` of `|i{q_i, q̄_j} − Θ(Z_i, Z̄_j)|` at the point of `Σ`
/// over `z`, in the trivial frame `Z_i = ∂/∂z̄_i`. Here
/// `Θ(∂/∂z̄_i, ∂/∂z_j) = −2 ∂²φ/∂z_j∂z̄_i`, i.e. `Θ = −2·Levi` entrywise.
pub fn commutation_check(phi: &WeightFunction, z: &[Complex64]) -> Result<f64> {
    let n = phi.dim();
    let levi = levi_matrix(phi, z)?;
    let pt = sigma_point(phi, z);
    let qs: Vec<_> = (0..n).map(|j| q_symbol(phi, j)).collect();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let bracket = poisson_bracket(&qs[i], &qs[j].conj()).eval(&pt) * I;
            let theta = -2.0 * levi.matrix()[(i, j)];
            worst = worst.max((bracket - theta).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::symbol::p0_symbol;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sigma_over_model_points() {
        let phi = WeightFunction::diagonal_quadratic(&[0.5]);
        let pt = sigma_point(&phi, &[c(1.0, 0.0)]);
        assert!((pt.zeta[0] - c(0.0, -1.0)).norm() < 1e-15);
        assert!(p0_eval(&phi, &pt) < 1e-15);
        let pt = sigma_point(&phi, &[c(0.0, 0.0)]);
        assert_eq!(pt.zeta[0], c(0.0, 0.0));
    }

    #[test]
    fn p0_off_sigma() {
        let phi = WeightFunction::diagonal_quadratic(&[0.5]);
        let pt = SymbolPoint {
            z: vec![c(0.0, 0.0)],
            zeta: vec![c(0.0, 2.0)],
        };
        assert!((p0_eval(&phi, &pt) - 1.0).abs() < 1e-15);
        // agrees with the symbolic Σ q̄ q
        assert!((p0_symbol(&phi).eval(&pt) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn real_coordinates_round_trip() {
        let pt = SymbolPoint {
            z: vec![c(0.3, -1.0), c(2.0, 0.5)],
            zeta: vec![c(-0.7, 0.25), c(1.5, -2.0)],
        };
        let r = pt.to_real();
        assert_eq!(r.eta, vec![-0.25, 2.0]);
        assert_eq!(SymbolPoint::from_real(&r), pt);
    }

    #[test]
    fn commutation_for_radial_weight() {
        let phi = WeightFunction::diagonal_quadratic(&[0.5]);
        assert!(commutation_check(&phi, &[c(0.2, -0.4)]).unwrap() <= 1e-12);
        let phi = WeightFunction::diagonal_quadratic(&[0.5, -1.5, 2.0]);
        assert_eq!(
            commutation_check(&phi, &[c(0.0, 0.0), c(1.0, 1.0), c(-2.0, 0.5)]).unwrap(),
            0.0
        );
    }
}
