//! The WKB phase `ψ(t, x, θ) = ½xᵀAx + xᵀBθ + ½θᵀCθ` of the heat
//! semigroup in the reduced model, by Riccati integration and by the
//! generating function of `exp(tM)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use super::model::{QuadraticModel, I};
use crate::error::{Error, Result};

/// Default fixed step for the Riccati integrator.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Coefficient size beyond which the Riccati flow is declared to blow up.
const BLOWUP: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticPhase {
    pub a: DMatrix<Complex64>,
    pub b: DMatrix<Complex64>,
    pub c: DMatrix<Complex64>,
    /// `None` stands for `t = ∞`.
    pub t: Option<f64>,
}

impl QuadraticPhase {
    /// `ψ = x·θ`.
    pub fn identity(n: usize) -> Self {
        Self {
            a: DMatrix::zeros(n, n),
            b: DMatrix::identity(n, n),
            c: DMatrix::zeros(n, n),
            t: Some(0.0),
        }
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    /// Full `2n × 2n` Hessian `[[A, B], [Bᵀ, C]]`.
    pub fn hessian(&self) -> DMatrix<Complex64> {
        let n = self.n();
        let mut h = DMatrix::zeros(2 * n, 2 * n);
        h.view_mut((0, 0), (n, n)).copy_from(&self.a);
        h.view_mut((0, n), (n, n)).copy_from(&self.b);
        h.view_mut((n, 0), (n, n)).copy_from(&self.b.transpose());
        h.view_mut((n, n), (n, n)).copy_from(&self.c);
        h
    }

    pub fn from_hessian(h: &DMatrix<Complex64>, t: Option<f64>) -> Self {
        let n = h.nrows() / 2;
        Self {
            a: h.view((0, 0), (n, n)).into_owned(),
            b: h.view((0, n), (n, n)).into_owned(),
            c: h.view((n, n), (n, n)).into_owned(),
            t,
        }
    }

    pub fn eval(&self, x: &[Complex64], theta: &[Complex64]) -> Complex64 {
        let x = DMatrix::from_column_slice(x.len(), 1, x);
        let th = DMatrix::from_column_slice(theta.len(), 1, theta);
        let v = (x.transpose() * &self.a * &x * Complex64::new(0.5, 0.0)
            + x.transpose() * &self.b * &th
            + th.transpose() * &self.c * &th * Complex64::new(0.5, 0.0))[0];
        v
    }

    /// Eigenvalues of `Im` of the Hessian, ascending.
    pub fn im_hessian_eigenvalues(&self) -> Vec<f64> {
        let im = self.hessian().map(|c| c.im);
        let im = (&im + im.transpose()) * 0.5;
        let mut ev: Vec<f64> = SymmetricEigen::new(im).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Largest coefficient modulus of `ψ − other`.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.hessian() - other.hessian())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Generating function of a Lagrangian subspace of `(out) × (in)` given by
/// spanning columns with rows `[x_out; ξ_out; y_in; θ_in]`, in the sense
/// `ξ_out = A x_out + B θ_in`, `y_in = Bᵀ x_out + C θ_in`.
pub fn generating_function(w: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let d = w.nrows() / 4;
    if w.nrows() != 4 * d || w.ncols() != 2 * d {
        return Err(Error::Validation(format!(
            "Lagrangian basis must be 4d × 2d, got {} × {}",
            w.nrows(),
            w.ncols()
        )));
    }
    let mut domain = DMatrix::zeros(2 * d, 2 * d);
    let mut image = DMatrix::zeros(2 * d, 2 * d);
    domain.view_mut((0, 0), (d, 2 * d)).copy_from(&w.view((0, 0), (d, 2 * d)));
    domain.view_mut((d, 0), (d, 2 * d)).copy_from(&w.view((3 * d, 0), (d, 2 * d)));
    image.view_mut((0, 0), (d, 2 * d)).copy_from(&w.view((d, 0), (d, 2 * d)));
    image.view_mut((d, 0), (d, 2 * d)).copy_from(&w.view((2 * d, 0), (d, 2 * d)));
    // H · domain = image  ⇔  domainᵀ Hᵀ = imageᵀ
    let ht = domain
        .transpose()
        .lu()
        .solve(&image.transpose())
        .ok_or_else(|| Error::Singular("Lagrangian is not a graph over (x_out, θ_in)".into()))?;
    if ht.iter().any(|c| !c.is_finite()) {
        return Err(Error::Singular("Lagrangian is not a graph over (x_out, θ_in)".into()));
    }
    let h = ht.transpose();
    Ok((&h + h.transpose()) * Complex64::new(0.5, 0.0))
}

/// Basis of the graph `{(Φw, w)}` of a linear canonical map `Φ`.
pub fn graph_basis(phi: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let m = phi.nrows();
    let mut w = DMatrix::zeros(2 * m, m);
    w.view_mut((0, 0), (m, m)).copy_from(phi);
    w.view_mut((m, 0), (m, m)).copy_from(&DMatrix::identity(m, m));
    w
}

/// Longest time slice whose flow map is converted to a generating function
/// directly, in units of the inverse largest rate.
const SLICE: f64 = 1.0;

/// `ψ(t)` from the generating function of `exp(tM)`. Long times are split
/// into slices with well-conditioned flow maps whose phases are composed.
pub fn phase_from_flow(model: &QuadraticModel, t: f64) -> Result<QuadraticPhase> {
    if !(t >= 0.0) {
        return Err(Error::Validation(format!("t must be ≥ 0, got {t}")));
    }
    let rate = 2.0 * model.mu.iter().fold(0.0_f64, |a, m| a.max(m.abs()));
    let slices = ((t * rate / SLICE).ceil() as usize).max(1);
    let tau = t / slices as f64;
    let h = generating_function(&graph_basis(&model.reduced.flow(tau))).map_err(|_| Error::Caustic {
        t: tau,
        reason: "flow map has no generating function".into(),
    })?;
    let step = QuadraticPhase::from_hessian(&h, Some(tau));
    let mut acc = step.clone();
    for _ in 1..slices {
        acc = compose(&step, &acc)?;
    }
    acc.t = Some(t);
    Ok(acc)
}

struct Blocks {
    xx: DMatrix<Complex64>,
    xxi: DMatrix<Complex64>,
    xix: DMatrix<Complex64>,
    xixi: DMatrix<Complex64>,
}

fn blocks(model: &QuadraticModel) -> Blocks {
    let n = model.n();
    let q = model.reduced.q.map(|x| Complex64::new(x, 0.0));
    Blocks {
        xx: q.view((0, 0), (n, n)).into_owned(),
        xxi: q.view((0, n), (n, n)).into_owned(),
        xix: q.view((n, 0), (n, n)).into_owned(),
        xixi: q.view((n, n), (n, n)).into_owned(),
    }
}

type Abc = (DMatrix<Complex64>, DMatrix<Complex64>, DMatrix<Complex64>);

/// Right-hand side of `i∂_tψ + p₀(x, ψ'_x) = 0` on `(A, B, C)`.
fn riccati_rhs(q: &Blocks, a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Abc {
    let da = (&q.xx + &q.xxi * a + a * &q.xix + a * &q.xixi * a) * I;
    let db = ((&q.xxi + a * &q.xixi) * b) * I;
    let dc = (b.transpose() * &q.xixi * b) * I;
    (da, db, dc)
}

fn rk4_step(q: &Blocks, s: &Abc, h: f64) -> Abc {
    let hc = Complex64::new(h, 0.0);
    let half = Complex64::new(h / 2.0, 0.0);
    let k1 = riccati_rhs(q, &s.0, &s.1);
    let s2 = (&s.0 + &k1.0 * half, &s.1 + &k1.1 * half, &s.2 + &k1.2 * half);
    let k2 = riccati_rhs(q, &s2.0, &s2.1);
    let s3 = (&s.0 + &k2.0 * half, &s.1 + &k2.1 * half, &s.2 + &k2.2 * half);
    let k3 = riccati_rhs(q, &s3.0, &s3.1);
    let s4 = (&s.0 + &k3.0 * hc, &s.1 + &k3.1 * hc, &s.2 + &k3.2 * hc);
    let k4 = riccati_rhs(q, &s4.0, &s4.1);
    let w = Complex64::new(h / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    (
        &s.0 + (&k1.0 + &k2.0 * two + &k3.0 * two + &k4.0) * w,
        &s.1 + (&k1.1 + &k2.1 * two + &k3.1 * two + &k4.1) * w,
        &s.2 + (&k1.2 + &k2.2 * two + &k3.2 * two + &k4.2) * w,
    )
}

/// Integrates the Riccati system from `ψ(0) = x·θ` to time `t` with RK4.
/// The last step is shortened to land on `t` exactly.
pub fn evolve_phase(model: &QuadraticModel, t: f64, step: f64) -> Result<QuadraticPhase> {
    Ok(evolve_phase_sampled(model, &[t], step)?.pop().expect("one sample"))
}

/// Like [`evolve_phase`], returning the phase at each of the (ascending)
/// sample times from a single integration.
pub fn evolve_phase_sampled(model: &QuadraticModel, times: &[f64], step: f64) -> Result<Vec<QuadraticPhase>> {
    if !(step > 0.0) {
        return Err(Error::Validation(format!("integrator step must be positive, got {step}")));
    }
    if times.iter().any(|t| !(*t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Validation("sample times must be ascending and ≥ 0".into()));
    }
    let q = blocks(model);
    let n = model.n();
    let id = QuadraticPhase::identity(n);
    let mut state: Abc = (id.a, id.b, id.c);
    let mut now = 0.0_f64;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while target - now > 1e-12 * target.max(1.0) {
            let h = step.min(target - now);
            state = rk4_step(&q, &state, h);
            now += h;
            let size = state
                .0
                .iter()
                .chain(state.1.iter())
                .chain(state.2.iter())
                .map(|c| c.norm())
                .fold(0.0, f64::max);
            if !size.is_finite() || size > BLOWUP {
                return Err(Error::Caustic {
                    t: now,
                    reason: format!("coefficient size {size:.3e}"),
                });
            }
        }
        now = target;
        out.push(QuadraticPhase {
            a: state.0.clone(),
            b: state.1.clone(),
            c: state.2.clone(),
            t: Some(target),
        });
    }
    Ok(out)
}

/// Composition of generating functions: the phase of `κ₁ ∘ κ₂` from those
/// of `κ₁` (`first`, applied last) and `κ₂`, by stationary phase in the
/// intermediate variables `(y, η)` of `first(x, η) − y·η + second(y, θ)`.
pub fn compose(first: &QuadraticPhase, second: &QuadraticPhase) -> Result<QuadraticPhase> {
    let n = first.n();
    // stationarity: B₁ᵀx + C₁η − y = 0 and −η + A₂y + B₂θ = 0
    let mut lhs = DMatrix::zeros(2 * n, 2 * n);
    let id = DMatrix::<Complex64>::identity(n, n);
    lhs.view_mut((0, 0), (n, n)).copy_from(&-&id);
    lhs.view_mut((0, n), (n, n)).copy_from(&first.c);
    lhs.view_mut((n, 0), (n, n)).copy_from(&second.a);
    lhs.view_mut((n, n), (n, n)).copy_from(&-&id);
    // unknowns (y, η) as linear maps of (x, θ)
    let mut rhs = DMatrix::zeros(2 * n, 2 * n);
    rhs.view_mut((0, 0), (n, n)).copy_from(&-first.b.transpose());
    rhs.view_mut((n, n), (n, n)).copy_from(&-&second.b);
    let sol = lhs
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("composition has a degenerate critical point".into()))?;
    let y = sol.view((0, 0), (n, 2 * n)).into_owned();
    let eta = sol.view((n, 0), (n, 2 * n)).into_owned();
    // full quadratic form in (x, θ) evaluated at the critical point
    let mut px = DMatrix::zeros(n, 2 * n);
    px.view_mut((0, 0), (n, n)).copy_from(&id);
    let mut pt = DMatrix::zeros(n, 2 * n);
    pt.view_mut((0, n), (n, n)).copy_from(&id);
    let half = Complex64::new(0.5, 0.0);
    let sym = |l: &DMatrix<Complex64>, m: &DMatrix<Complex64>, r: &DMatrix<Complex64>| l.transpose() * m * r;
    let h = sym(&px, &first.a, &px) * half
        + (sym(&px, &first.b, &eta) + sym(&eta, &first.b.transpose(), &px)) * half
        + sym(&eta, &first.c, &eta) * half
        - (sym(&y, &id, &eta) + sym(&eta, &id, &y)) * half
        + sym(&y, &second.a, &y) * half
        + (sym(&y, &second.b, &pt) + sym(&pt, &second.b.transpose(), &y)) * half
        + sym(&pt, &second.c, &pt) * half;
    let h = (&h + h.transpose()) * Complex64::new(2.0, 0.0) * half;
    let t = match (first.t, second.t) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    Ok(QuadraticPhase::from_hessian(&h, t))
}

/// One row of a convergence trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub phase: QuadraticPhase,
    /// `‖ψ(t) − ψ(∞)‖`, max coefficient modulus.
    pub distance_to_limit: f64,
}

impl TrajectoryRow {
    pub fn csv_header(n: usize) -> Vec<String> {
        let mut h = vec!["t".to_string()];
        for name in ["A", "B", "C"] {
            for i in 0..n {
                for j in 0..n {
                    h.push(format!("{name}_{}{}_re", i + 1, j + 1));
                    h.push(format!("{name}_{}{}_im", i + 1, j + 1));
                }
            }
        }
        h.push("norm".to_string());
        h
    }

    pub fn csv_record(&self) -> Vec<String> {
        let mut r = vec![format!("{}", self.t)];
        for m in [&self.phase.a, &self.phase.b, &self.phase.c] {
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    r.push(format!("{}", m[(i, j)].re));
                    r.push(format!("{}", m[(i, j)].im));
                }
            }
        }
        r.push(format!("{}", self.distance_to_limit));
        r
    }
}

pub fn trajectory(model: &QuadraticModel, times: &[f64], step: f64, limit: &QuadraticPhase) -> Result<Vec<TrajectoryRow>> {
    Ok(evolve_phase_sampled(model, times, step)?
        .into_iter()
        .map(|p| TrajectoryRow {
            t: p.t.unwrap_or(f64::INFINITY),
            distance_to_limit: p.distance(limit),
            phase: p,
        })
        .collect())
}

/// Least-squares slope of `log ‖ψ(t) − ψ(∞)‖` against `t`, negated; a
/// positive value is an exponential convergence rate.
pub fn convergence_rate(rows: &[TrajectoryRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.distance_to_limit > 0.0)
        .map(|r| (r.t, r.distance_to_limit.ln()))
        .collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |(n, d), (x, y)| (n + (x - mx) * (y - my), d + (x - mx) * (x - mx)));
    -num / den
}
