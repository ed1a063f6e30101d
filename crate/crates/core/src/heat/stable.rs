//! Stable manifolds `J±` of the linearized flow and the limit phase `ψ(∞)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use super::model::{symplectic_j, complexify, Hamiltonian, QuadraticModel};
use super::phase::{generating_function, QuadraticPhase};
use crate::error::{Error, Result};

/// `J₊` and `J₋` as spanning columns of `C^{2n}`.
///
/// `J₊` is positive for `(1/i)σ(v, v̄)` with `σ = Σ dξ_j ∧ dx_j`; under the
/// decay test it is the subspace that decays as `t → −∞` (outgoing), while
/// `J₋` decays as `t → +∞` (incoming).
#[derive(Debug, Clone, Serialize)]
pub struct StablePair {
    pub j_plus: DMatrix<Complex64>,
    pub j_minus: DMatrix<Complex64>,
    /// Eigenvalues of `M` on the columns of `J₊` (positive).
    pub growth_rates: Vec<f64>,
}

/// `σ(u, w) = −uᵀ J w`.
pub fn sigma(u: &DMatrix<Complex64>, w: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let d = u.nrows() / 2;
    -(u.transpose() * complexify(&symplectic_j(d)) * w)
}

/// Orthogonal projector onto the column span.
pub fn projector(v: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let g = v.adjoint() * v;
    let inv = g.try_inverse().expect("spanning columns are independent");
    v * inv * v.adjoint()
}

impl StablePair {
    /// `‖P(conj J₊) − P(J₋)‖_max`.
    pub fn conjugation_defect(&self) -> f64 {
        (projector(&self.j_plus.map(|c| c.conj())) - projector(&self.j_minus))
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of the Hermitian matrix `(1/i)σ(v_a, v̄_b)` over
    /// the spanning vectors of `J₊`.
    pub fn positivity(&self) -> f64 {
        let h = sigma(&self.j_plus, &self.j_plus.map(|c| c.conj())) * Complex64::new(0.0, -1.0);
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(h).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `max |σ(u, w)|` over spanning vectors of `J₊`, then of `J₋`.
    pub fn lagrangian_defect(&self) -> f64 {
        let a = sigma(&self.j_plus, &self.j_plus);
        let b = sigma(&self.j_minus, &self.j_minus);
        a.iter().chain(b.iter()).map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Relative size of `exp(tM)v` after one e-folding time of `v`; `< 1`
/// means `v` decays as `t → +∞`.
fn decay_ratio(h: &Hamiltonian, v: &DMatrix<Complex64>, horizon: f64) -> f64 {
    (h.flow(horizon) * v).norm() / v.norm()
}

struct Classified {
    outgoing: Vec<(f64, DMatrix<Complex64>)>,
    incoming: Vec<DMatrix<Complex64>>,
    fixed: Vec<DMatrix<Complex64>>,
}

fn classify(h: &Hamiltonian) -> Classified {
    let split = h.spectral_split();
    let mut outgoing = Vec::new();
    let mut incoming = Vec::new();
    for (kappa, v) in split.growing.into_iter().chain(split.decaying) {
        if decay_ratio(h, &v, 1.0 / kappa.abs()) < 1.0 {
            incoming.push(v);
        } else {
            outgoing.push((kappa, v));
        }
    }
    Classified {
        outgoing,
        incoming,
        fixed: split.kernel,
    }
}

fn hstack(cols: &[DMatrix<Complex64>], rows: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, &c.column(0));
    }
    m
}

pub fn stable_subspaces(model: &QuadraticModel) -> StablePair {
    let c = classify(&model.reduced);
    let dim = 2 * model.n();
    let plus: Vec<_> = c.outgoing.iter().map(|(_, v)| v.clone()).collect();
    StablePair {
        j_plus: hstack(&plus, dim),
        j_minus: hstack(&c.incoming, dim),
        growth_rates: c.outgoing.iter().map(|(k, _)| *k).collect(),
    }
}

/// Spanning columns of `C_∞ = lim graph exp(tM)` in `(out) × (in)`:
/// `(v, 0)` for outgoing `v`, `(0, v)` for incoming `v`, `(s, s)` on the
/// fixed subspace.
pub fn limit_relation(h: &Hamiltonian) -> DMatrix<Complex64> {
    let c = classify(h);
    let dim = 2 * h.d;
    let mut cols = Vec::with_capacity(dim);
    let zero = DMatrix::<Complex64>::zeros(dim, 1);
    for (_, v) in &c.outgoing {
        cols.push(stack(v, &zero));
    }
    for v in &c.incoming {
        cols.push(stack(&zero, v));
    }
    for s in &c.fixed {
        cols.push(stack(s, s));
    }
    hstack(&cols, 2 * dim)
}

fn stack(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(a.nrows() + b.nrows(), 1);
    m.view_mut((0, 0), (a.nrows(), 1)).copy_from(a);
    m.view_mut((a.nrows(), 0), (b.nrows(), 1)).copy_from(b);
    m
}

/// Phase of `C_∞` for a Hamiltonian of either model.
pub fn limit_phase_of(h: &Hamiltonian) -> Result<QuadraticPhase> {
    let w = limit_relation(h);
    if w.ncols() != 2 * h.d {
        return Err(Error::Singular("limit relation has the wrong dimension".into()));
    }
    Ok(QuadraticPhase::from_hessian(&generating_function(&w)?, None))
}

/// `ψ(∞)` of the reduced model.
pub fn phase_limit(model: &QuadraticModel) -> Result<QuadraticPhase> {
    limit_phase_of(&model.reduced)
}

/// Largest residual of the graph of `dψ(∞)` against `J₊ × J₋`:
/// `(x, ∂_xψ)` must lie in `J₊` and `(∂_θψ, θ)` in `J₋`.
pub fn graph_defect(limit: &QuadraticPhase, pair: &StablePair) -> f64 {
    let n = limit.n();
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    let mut inc = DMatrix::zeros(2 * n, 2 * n);
    // columns indexed by basis vectors of (x, θ)
    out.view_mut((0, 0), (n, n)).copy_from(&id);
    out.view_mut((n, 0), (n, n)).copy_from(&limit.a);
    out.view_mut((n, n), (n, n)).copy_from(&limit.b);
    inc.view_mut((0, 0), (n, n)).copy_from(&limit.b.transpose());
    inc.view_mut((0, n), (n, n)).copy_from(&limit.c);
    inc.view_mut((n, n), (n, n)).copy_from(&id);
    let ident = DMatrix::<Complex64>::identity(2 * n, 2 * n);
    let r1 = (&ident - projector(&pair.j_plus)) * out;
    let r2 = (&ident - projector(&pair.j_minus)) * inc;
    r1.iter().chain(r2.iter()).map(|c| c.norm()).fold(0.0, f64::max)
}
