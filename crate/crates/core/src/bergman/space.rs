//! One-dimensional model section spaces with their quadrature rules.
//!
//! All sections are reduced, i.e. multiplied by `e^{−kφ}`, so that inner
//! products are plain integrals against the volume form.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use super::quadrature::gauss_legendre_on;

/// Point representation stable up to the pole of `P¹`: for Fock `a = z`,
/// `b = 1`; for `P¹` `a = zρ`, `b = ρ` with `ρ = (1+|z|²)^{−1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodePoint {
    pub a: Complex64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Space1D {
    /// Holomorphic functions on `C` with weight `e^{−α|z|²}`, `α = 2kλ`,
    /// truncated at degree `degree`; basis `(√α z)^m/√m!`.
    Fock { alpha: f64, degree: usize },
    /// `H⁰(P¹, O(k))` in the chart `z`, basis `√C(k,m) z^m`.
    P1 { k: u32 },
}

pub(crate) fn binomial(n: u32, m: u32) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn ln_factorial(m: usize) -> f64 {
    (1..=m).map(|i| (i as f64).ln()).sum()
}

impl Space1D {
    pub fn dim(&self) -> usize {
        match *self {
            Space1D::Fock { degree, .. } => degree + 1,
            Space1D::P1 { k } => k as usize + 1,
        }
    }

    /// Largest total degree `a + b` of ambient monomials `z^a z̄^b`.
    pub fn ambient_degree(&self) -> usize {
        match *self {
            Space1D::Fock { degree, .. } => degree,
            Space1D::P1 { k } => k as usize,
        }
    }

    /// `‖s_m‖²` of every basis section, from the closed-form moments
    /// `∫|z|^{2m} e^{−α|z|²} dm = π m!/α^{m+1}` and
    /// `∫|z|^{2m}(1+|z|²)^{−k−2} dm = π m!(k−m)!/(k+1)!`.
    pub fn basis_norm_sq(&self) -> f64 {
        match *self {
            Space1D::Fock { alpha, .. } => PI / alpha,
            Space1D::P1 { k } => PI / (k as f64 + 1.0),
        }
    }

    pub fn point(&self, z: Complex64) -> NodePoint {
        match self {
            Space1D::Fock { .. } => NodePoint { a: z, b: 1.0 },
            Space1D::P1 { .. } => {
                let rho = 1.0 / (1.0 + z.norm_sqr()).sqrt();
                NodePoint { a: z * rho, b: rho }
            }
        }
    }

    pub fn sections(&self, p: &NodePoint) -> Vec<Complex64> {
        match *self {
            Space1D::Fock { alpha, degree } => {
                let mut out = Vec::with_capacity(degree + 1);
                let mut term = Complex64::new((-0.5 * alpha * p.a.norm_sqr()).exp(), 0.0);
                let step = p.a * alpha.sqrt();
                out.push(term);
                for m in 1..=degree {
                    term = term * step / (m as f64).sqrt();
                    out.push(term);
                }
                out
            }
            Space1D::P1 { k } => (0..=k)
                .map(|m| binomial(k, m).sqrt() * p.a.powu(m) * p.b.powi((k - m) as i32))
                .collect(),
        }
    }

    /// Ambient index set `{(a, b) : a + b ≤ ambient_degree}`.
    pub fn ambient_pairs(&self) -> Vec<(usize, usize)> {
        let d = self.ambient_degree();
        (0..=d).flat_map(|s| (0..=s).map(move |b| (s - b, b))).collect()
    }

    /// Reduced non-holomorphic monomials `z^a z̄^b`, scaled to comparable norms.
    pub fn ambient(&self, p: &NodePoint, pairs: &[(usize, usize)]) -> Vec<Complex64> {
        match *self {
            Space1D::Fock { alpha, .. } => {
                let g = (-0.5 * alpha * p.a.norm_sqr()).exp();
                let s = alpha.sqrt();
                pairs
                    .iter()
                    .map(|&(a, b)| {
                        let log_scale = -0.5 * ln_factorial(a + b);
                        (s * p.a).powu(a as u32) * (s * p.a.conj()).powu(b as u32) * g * log_scale.exp()
                    })
                    .collect()
            }
            Space1D::P1 { k } => pairs
                .iter()
                .map(|&(a, b)| {
                    binomial(k, (a + b) as u32).sqrt()
                        * p.a.powu(a as u32)
                        * p.a.conj().powu(b as u32)
                        * p.b.powi((k as usize - a - b) as i32)
                })
                .collect(),
        }
    }

    /// Tensor Gauss–Legendre rule at refinement `level` (node counts double
    /// per level): Fock in `(t = α|z|², arg z)` truncated where the Gamma
    /// tail is negligible, `P¹` in `(cos ϑ, arg z)` over the whole sphere.
    pub fn nodes(&self, level: u32) -> Vec<(NodePoint, f64)> {
        let scale = 1usize << level;
        let (radial, n_ang) = match *self {
            Space1D::Fock { alpha, degree } => {
                let d = 2.0 * degree as f64;
                let cutoff = d + 12.0 * (d + 1.0).sqrt() + 40.0;
                let n_r = (32 + cutoff.ceil() as usize) * scale;
                let pts: Vec<(NodePoint, f64)> = gauss_legendre_on(n_r, 0.0, cutoff)
                    .into_iter()
                    .map(|(t, w)| {
                        let r = (t / alpha).sqrt();
                        // dm = r dr dθ = dt dθ / (2α)
                        (NodePoint { a: Complex64::new(r, 0.0), b: 1.0 }, w / (2.0 * alpha))
                    })
                    .collect();
                (pts, (4 * degree + 32) * scale)
            }
            Space1D::P1 { k } => {
                let n_u = (k as usize + 16) * scale;
                let pts = gauss_legendre_on(n_u, -1.0, 1.0)
                    .into_iter()
                    .map(|(u, w)| {
                        let rho = ((1.0 + u) / 2.0).sqrt();
                        let r = ((1.0 - u) / 2.0).sqrt();
                        // dV = dm/(1+|z|²)² = ¼ du dθ
                        (NodePoint { a: Complex64::new(r, 0.0), b: rho }, w / 4.0)
                    })
                    .collect();
                (pts, (4 * k as usize + 32) * scale)
            }
        };
        let angles = gauss_legendre_on(n_ang, 0.0, 2.0 * PI);
        radial
            .par_iter()
            .flat_map_iter(|(p, wr)| {
                angles.iter().map(move |&(th, wa)| {
                    let rot = Complex64::from_polar(1.0, th);
                    (NodePoint { a: p.a * rot, b: p.b }, wr * wa)
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_norms_match_quadrature() {
        for space in [Space1D::Fock { alpha: 4.0, degree: 12 }, Space1D::P1 { k: 10 }] {
            let nodes = space.nodes(0);
            let dim = space.dim();
            let mut g = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
            for (p, w) in &nodes {
                let s = space.sections(p);
                for i in 0..dim {
                    for j in 0..dim {
                        g[i][j] += s[i] * s[j].conj() * *w;
                    }
                }
            }
            let norm = space.basis_norm_sq();
            for i in 0..dim {
                for j in 0..dim {
                    let expected = if i == j { norm } else { 0.0 };
                    assert!((g[i][j] - Complex64::new(expected, 0.0)).norm() < 1e-10, "{space:?} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn p1_volume() {
        let v: f64 = Space1D::P1 { k: 3 }.nodes(0).iter().map(|(_, w)| w).sum();
        assert!((v - PI).abs() < 1e-12);
    }

    #[test]
    fn chart_and_node_points_agree() {
        let space = Space1D::P1 { k: 6 };
        let z = Complex64::new(0.3, -2.0);
        let p = space.point(z);
        let s = space.sections(&p);
        let rho2 = 1.0 / (1.0 + z.norm_sqr());
        for (m, v) in s.iter().enumerate() {
            let direct = binomial(6, m as u32).sqrt() * z.powu(m as u32) * rho2.powf(3.0);
            assert!((v - direct).norm() < 1e-14);
        }
    }
}
