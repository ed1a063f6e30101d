//! Spectral data of the transversal Hessian: the fundamental matrix `F_p`
//! and the spectrum of `p₁ + ½ tr̃ F` on `(0,q)`-forms.

use itertools::Itertools;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Eigenvalues of `p₁ + ½ tr̃ F` on `(0,q)`-forms, ascending:
/// `−2 Σ_{μ_j<0} μ_j + 2(μ_{j₁} + … + μ_{j_q})` over `j₁ < … < j_q`.
pub fn subprincipal_spectrum(mu: &[f64], q: usize) -> Result<Vec<f64>> {
    let n = mu.len();
    if q > n {
        return Err(Error::OutOfRange {
            what: "form degree q",
            value: q,
            max: n,
        });
    }
    let shift: f64 = -2.0 * mu.iter().filter(|&&m| m < 0.0).sum::<f64>();
    let mut out: Vec<f64> = (0..n)
        .combinations(q)
        .map(|idx| shift + 2.0 * idx.iter().map(|&j| mu[j]).sum::<f64>())
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Minimal element of [`subprincipal_spectrum`].
pub fn subprincipal_min(mu: &[f64], q: usize) -> Result<f64> {
    Ok(subprincipal_spectrum(mu, q)?[0])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FundamentalMatrixData {
    /// `(2iμ_j, −2iμ_j)` for each `j`, in input order.
    pub eigenvalues: Vec<Complex64>,
    /// `½ tr̃ F = Σ_{μ_j>0} μ_j − Σ_{μ_j<0} μ_j`.
    pub half_trace: f64,
}

pub fn fundamental_matrix_data(mu: &[f64]) -> Result<FundamentalMatrixData> {
    if let Some(&m) = mu.iter().find(|m| **m == 0.0) {
        return Err(Error::Degenerate {
            eigenvalue: m,
            tol: 0.0,
        });
    }
    let eigenvalues = mu
        .iter()
        .flat_map(|&m| [Complex64::new(0.0, 2.0 * m), Complex64::new(0.0, -2.0 * m)])
        .collect();
    let half_trace = mu.iter().map(|m| m.abs()).sum();
    Ok(FundamentalMatrixData {
        eigenvalues,
        half_trace,
    })
}
