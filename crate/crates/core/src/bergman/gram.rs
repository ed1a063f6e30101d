//! Kernels from Gram matrices of weighted inner products, computed by
//! quadrature and refined until they stop changing.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::space::Space1D;
use crate::error::{Error, Result};

/// Largest accepted Gram condition number.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelId {
    Fock,
    FockMixed,
    #[serde(rename = "p1_oK")]
    P1,
}

impl ModelId {
    pub fn name(&self) -> &'static str {
        match self {
            ModelId::Fock => "fock",
            ModelId::FockMixed => "fock_mixed",
            ModelId::P1 => "p1_oK",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectionBasis {
    pub model: ModelId,
    pub k: u32,
    /// Curvature eigenvalues `λ_j`; empty for `P¹`.
    pub lambda: Vec<f64>,
    /// Truncation degree per direction (Fock) or `k` (`P¹`).
    pub degree: usize,
    /// Form degree for the mixed model.
    pub q: usize,
}

/// Smallest `D ≥ 4 + x` with `x^D/D! < 1e−12`, `x = 2kλR²`.
pub fn fock_truncation(alpha: f64, radius: f64) -> usize {
    let x = alpha * radius * radius;
    let mut d = (4.0 + x).ceil() as usize;
    loop {
        let log_tail = d as f64 * x.max(1e-300).ln() - (1..=d).map(|i| (i as f64).ln()).sum::<f64>();
        if x == 0.0 || log_tail < (1e-12f64).ln() {
            return d.max(4);
        }
        d += 1;
    }
}

impl SectionBasis {
    /// Fock basis sized for points with `|z_j| ≤ radius`.
    pub fn fock(lambda: &[f64], k: u32, radius: f64) -> Result<Self> {
        if lambda.is_empty() || lambda.iter().any(|l| !(*l > 0.0)) {
            return Err(Error::Validation("Fock model needs positive λ".into()));
        }
        Self::fock_like(ModelId::Fock, lambda, k, radius, 0)
    }

    pub fn fock_mixed(lambda: &[f64], k: u32, radius: f64, q: usize) -> Result<Self> {
        if lambda.is_empty() || lambda.iter().any(|l| *l == 0.0 || !l.is_finite()) {
            return Err(Error::Validation("mixed Fock model needs non-zero λ".into()));
        }
        Self::fock_like(ModelId::FockMixed, lambda, k, radius, q)
    }

    fn fock_like(model: ModelId, lambda: &[f64], k: u32, radius: f64, q: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Validation("k must be positive".into()));
        }
        let amax = lambda.iter().fold(0.0_f64, |a, l| a.max(l.abs()));
        Ok(Self {
            model,
            k,
            lambda: lambda.to_vec(),
            degree: fock_truncation(2.0 * k as f64 * amax, radius),
            q,
        })
    }

    pub fn p1(k: u32) -> Self {
        Self {
            model: ModelId::P1,
            k,
            lambda: Vec::new(),
            degree: k as usize,
            q: 0,
        }
    }

    /// Complex dimension of the base.
    pub fn n(&self) -> usize {
        match self.model {
            ModelId::P1 => 1,
            _ => self.lambda.len(),
        }
    }

    /// Harmonic space is trivial in the mixed model unless `q = n₋`.
    pub fn is_trivial(&self) -> bool {
        self.model == ModelId::FockMixed && self.q != self.lambda.iter().filter(|l| **l < 0.0).count()
    }

    /// The one-dimensional factors and whether each is conjugated.
    pub fn factors(&self) -> Vec<(Space1D, bool)> {
        match self.model {
            ModelId::P1 => vec![(Space1D::P1 { k: self.k }, false)],
            _ => self
                .lambda
                .iter()
                .map(|&l| {
                    (
                        Space1D::Fock {
                            alpha: 2.0 * self.k as f64 * l.abs(),
                            degree: self.degree,
                        },
                        l < 0.0,
                    )
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GramMatrix {
    pub matrix: DMatrix<Complex64>,
    pub condition: f64,
}

impl GramMatrix {
    pub fn assemble(space: &Space1D, level: u32) -> Result<Self> {
        let nodes = space.nodes(level);
        let dim = space.dim();
        let g = nodes
            .par_chunks(4096)
            .map(|chunk| {
                let mut s = DMatrix::<Complex64>::zeros(chunk.len(), dim);
                let mut sw = DMatrix::<Complex64>::zeros(chunk.len(), dim);
                for (r, (p, w)) in chunk.iter().enumerate() {
                    for (c, v) in space.sections(p).into_iter().enumerate() {
                        s[(r, c)] = v;
                        sw[(r, c)] = v.conj() * *w;
                    }
                }
                s.transpose() * sw
            })
            .reduce(|| DMatrix::zeros(dim, dim), |a, b| a + b);
        Self::new(g)
    }

    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let scale = matrix.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let defect = (&matrix - matrix.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
        if defect > 1e-12 * scale {
            return Err(Error::Validation(format!("Gram matrix not Hermitian (defect {defect:.3e})")));
        }
        let herm = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let ev = SymmetricEigen::new(herm.clone()).eigenvalues;
        let (lo, hi) = ev
            .iter()
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        if condition > MAX_CONDITION {
            return Err(Error::IllConditioned {
                cond: condition,
                limit: MAX_CONDITION,
            });
        }
        Ok(Self {
            matrix: herm,
            condition,
        })
    }
}

/// Reduced kernel of one factor: `Σ s_i(x) (G⁻¹)_{ji} conj(s_j(y))`.
#[derive(Debug, Clone)]
pub struct GramKernel {
    space: Space1D,
    /// `(G⁻¹)ᵀ`.
    inv_t: DMatrix<Complex64>,
    pub condition: f64,
}

impl GramKernel {
    pub fn new(space: Space1D, level: u32) -> Result<Self> {
        let g = GramMatrix::assemble(&space, level)?;
        let inv = g
            .matrix
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Singular("Gram matrix is not positive definite".into()))?
            .inverse();
        Ok(Self {
            space,
            inv_t: inv.transpose(),
            condition: g.condition,
        })
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let sz = DMatrix::from_row_slice(1, self.space.dim(), &self.space.sections(&self.space.point(z)));
        let sw: Vec<Complex64> = self.space.sections(&self.space.point(w)).iter().map(|c| c.conj()).collect();
        let sw = DMatrix::from_column_slice(self.space.dim(), 1, &sw);
        (sz * &self.inv_t * sw)[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub initial_level: u32,
    pub max_level: u32,
    /// Refinement stops once successive kernel values differ by less.
    pub tol: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            initial_level: 0,
            max_level: 4,
            tol: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GramEvaluation {
    pub values: Vec<Complex64>,
    /// Level at which the values were accepted.
    pub level: u32,
    /// Largest change against the previous level.
    pub last_change: f64,
    /// Largest Gram condition number over the factors.
    pub condition: f64,
}

fn eval_at_level(basis: &SectionBasis, level: u32, pairs: &[(Vec<Complex64>, Vec<Complex64>)]) -> Result<(Vec<Complex64>, f64)> {
    let factors = basis.factors();
    // factors with identical data share one Gram kernel
    let mut kernels: Vec<(Space1D, GramKernel)> = Vec::new();
    for (space, _) in &factors {
        if !kernels.iter().any(|(s, _)| s == space) {
            kernels.push((*space, GramKernel::new(*space, level)?));
        }
    }
    let cond = kernels.iter().map(|(_, k)| k.condition).fold(0.0, f64::max);
    let values = pairs
        .par_iter()
        .map(|(z, w)| {
            factors
                .iter()
                .enumerate()
                .map(|(j, (space, conj))| {
                    let kern = &kernels.iter().find(|(s, _)| s == space).expect("kernel built").1;
                    if *conj {
                        kern.eval(z[j].conj(), w[j].conj())
                    } else {
                        kern.eval(z[j], w[j])
                    }
                })
                .product()
        })
        .collect();
    Ok((values, cond))
}

/// Gram-route reduced kernel at each `(x, y)` pair, refined by doubling the
/// quadrature until values change by less than `quad.tol`.
pub fn gram_bergman_many(
    basis: &SectionBasis,
    quad: &QuadSpec,
    pairs: &[(Vec<Complex64>, Vec<Complex64>)],
) -> Result<GramEvaluation> {
    let n = basis.n();
    if pairs.iter().any(|(z, w)| z.len() != n || w.len() != n) {
        return Err(Error::Validation(format!("points must have {n} coordinates")));
    }
    if basis.is_trivial() {
        return Ok(GramEvaluation {
            values: vec![Complex64::new(0.0, 0.0); pairs.len()],
            level: quad.initial_level,
            last_change: 0.0,
            condition: 1.0,
        });
    }
    let (mut prev, _) = eval_at_level(basis, quad.initial_level, pairs)?;
    let mut change = f64::INFINITY;
    for level in quad.initial_level + 1..=quad.max_level {
        let (next, c) = eval_at_level(basis, level, pairs)?;
        change = prev.iter().zip(&next).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prev = next;
        if change < quad.tol {
            return Ok(GramEvaluation {
                values: prev,
                level,
                last_change: change,
                condition: c,
            });
        }
    }
    Err(Error::Validation(format!(
        "quadrature did not settle by level {} (last change {change:.3e})",
        quad.max_level
    )))
}

pub fn gram_bergman(basis: &SectionBasis, quad: &QuadSpec, x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    Ok(gram_bergman_many(basis, quad, &[(x.to_vec(), y.to_vec())])?.values[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bergman::exact::{fock_harmonic_kernel, fock_kernel_exact, p1_kernel_exact};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn truncation_bound() {
        let d = fock_truncation(8.0, 1.0);
        assert!(d >= 12);
        let log_tail = d as f64 * 8f64.ln() - (1..=d).map(|i| (i as f64).ln()).sum::<f64>();
        assert!(log_tail < (1e-12f64).ln());
    }

    #[test]
    fn fock_two_routes() {
        let basis = SectionBasis::fock(&[0.5], 4, 1.0).unwrap();
        let z = [c(0.5, -0.25)];
        let w = [c(-0.3, 0.6)];
        let g = gram_bergman(&basis, &QuadSpec::default(), &z, &w).unwrap();
        let e = fock_kernel_exact(&[0.5], 4.0, &z, &w).unwrap();
        assert!((g - e).norm() < 1e-6, "{g} vs {e}");
    }

    #[test]
    fn mixed_two_routes_and_trivial_degree() {
        let lambda = [0.5, -1.0];
        let z = [c(0.2, 0.1), c(-0.4, 0.3)];
        let w = [c(0.0, -0.5), c(0.1, 0.1)];
        let basis = SectionBasis::fock_mixed(&lambda, 2, 1.0, 1).unwrap();
        let g = gram_bergman(&basis, &QuadSpec::default(), &z, &w).unwrap();
        let e = fock_harmonic_kernel(&lambda, 2.0, &z, &w, 1).unwrap().value;
        assert!((g - e).norm() < 1e-6);
        let basis = SectionBasis::fock_mixed(&lambda, 2, 1.0, 0).unwrap();
        assert_eq!(gram_bergman(&basis, &QuadSpec::default(), &z, &w).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn p1_two_routes() {
        let basis = SectionBasis::p1(10);
        let (z, w) = (c(0.4, 0.2), c(-1.5, 0.7));
        let g = gram_bergman(&basis, &QuadSpec::default(), &[z], &[w]).unwrap();
        assert!((g - p1_kernel_exact(10, z, w)).norm() < 1e-6);
    }

    #[test]
    fn ill_conditioned_gram_is_reported() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(1e-14, 0.0)]));
        assert!(matches!(GramMatrix::new(m), Err(Error::IllConditioned { .. })));
    }
}
