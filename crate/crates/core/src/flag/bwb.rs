//! Weyl dimensions, the Borel–Weil–Bott dimension of `H^q(G/B, L_λ)` and the
//! `K⁻` twist of partial Serre duality.

use num_rational::Ratio;
use serde::Serialize;

use super::roots::{RootSystem, Weight};
use crate::error::{Error, Result};
use crate::geometry::Signature;

/// `Π_{α>0} ⟨λ+ρ, α⟩/⟨ρ, α⟩` for any weight; an integer.
pub fn signed_weyl_polynomial(rs: &RootSystem, w: &Weight) -> Result<i128> {
    rs.check_weight(w)?;
    let shifted = w.add(&rs.rho());
    let rho = rs.rho();
    let r = rs.positive_roots.iter().fold(Ratio::from_integer(1i128), |acc, a| {
        acc * Ratio::new(shifted.pair(a) as i128, rho.pair(a) as i128)
    });
    if !r.is_integer() {
        return Err(Error::Validation(format!("Weyl product {r} is not an integer")));
    }
    Ok(r.to_integer())
}

pub fn weyl_dim(rs: &RootSystem, w: &Weight) -> Result<u64> {
    rs.check_weight(w)?;
    if !w.is_dominant() {
        return Err(Error::NotDominant(w.fund.clone()));
    }
    Ok(signed_weyl_polynomial(rs, w)? as u64)
}

#[derive(Debug, Clone, Serialize)]
pub struct BottResult {
    pub lambda: Weight,
    pub q: usize,
    /// `λ + ρ` is orthogonal to a root; all cohomology vanishes.
    pub wall: bool,
    pub index: Option<usize>,
    pub word: Vec<usize>,
    /// `w(λ+ρ) − ρ`.
    pub mu: Option<Weight>,
    pub dim: u64,
    /// `(−1)^index · dim` equals the signed Weyl polynomial at `λ`.
    pub euler_consistent: bool,
}

/// `dim H^q(G/B, L_λ)`.
pub fn bott_dim(rs: &RootSystem, lambda: &Weight, q: usize) -> Result<BottResult> {
    rs.check_weight(lambda)?;
    let shifted = lambda.add(&rs.rho());
    let signed = signed_weyl_polynomial(rs, lambda)?;
    if rs.require_regular(&shifted).is_err() {
        return Ok(BottResult {
            lambda: lambda.clone(),
            q,
            wall: true,
            index: None,
            word: Vec::new(),
            mu: None,
            dim: 0,
            euler_consistent: signed == 0,
        });
    }
    let index = rs.index_of_weight(&shifted)?;
    let (w, dom) = rs.to_dominant(&shifted)?;
    let mu = dom.sub(&rs.rho());
    let full = weyl_dim(rs, &mu)?;
    let sign = if index % 2 == 0 { 1 } else { -1 };
    Ok(BottResult {
        lambda: lambda.clone(),
        q,
        wall: false,
        index: Some(index),
        word: w.word,
        mu: Some(mu),
        dim: if index == q { full } else { 0 },
        euler_consistent: sign * full as i128 == signed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct KxMinus {
    pub index: usize,
    /// Positive roots, those pairing negatively with `λ` first.
    pub ordered_roots: Vec<Vec<i64>>,
    pub weight: Weight,
    /// `ρ − w⁻¹(ρ)` for `w` = [`RootSystem::to_dominant`] of `λ`.
    pub rho_shift: Weight,
}

/// `Σ_{i≤q} α_i` over the positive roots with `⟨λ, α_i⟩ < 0`, checked
/// against `ρ − w⁻¹(ρ)`.
pub fn kx_minus_weight(rs: &RootSystem, lambda: &Weight) -> Result<KxMinus> {
    rs.require_regular(lambda)?;
    let (neg, pos): (Vec<_>, Vec<_>) = rs.positive_roots.iter().cloned().partition(|a| lambda.pair(a) < 0);
    let weight = neg
        .iter()
        .fold(Weight::zero(rs.rank()), |acc, a| acc.add(&rs.root_weight(a)));
    let (w, _) = rs.to_dominant(lambda)?;
    let rho_shift = rs.rho().sub(&w.inverse().apply(&rs.rho()));
    if rho_shift != weight {
        return Err(Error::Validation(format!(
            "twist routes disagree: Σα = {:?}, ρ − w⁻¹ρ = {:?}",
            weight.fund, rho_shift.fund
        )));
    }
    let index = neg.len();
    let mut ordered_roots = neg;
    ordered_roots.extend(pos);
    Ok(KxMinus {
        index,
        ordered_roots,
        weight,
        rho_shift,
    })
}

/// Signature of `diag(c_α ⟨λ, α⟩)` with `c_α = 1`.
pub fn curvature_index_of_weight(rs: &RootSystem, lambda: &Weight) -> Result<Signature> {
    rs.require_regular(lambda)?;
    let mut eigenvalues: Vec<f64> = rs.positive_roots.iter().map(|a| lambda.pair(a) as f64).collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    Ok(Signature {
        n_minus: eigenvalues.iter().filter(|&&x| x < 0.0).count(),
        n_plus: eigenvalues.iter().filter(|&&x| x > 0.0).count(),
        eigenvalues,
        degenerate: false,
    })
}

/// Bihomogeneous monomials of bidegree `(m, n)` in `(Z, W) ∈ C³ × C³` modulo
/// `Σ Z_i W_i`.
pub fn monomial_count_su3_flag(m: i64, n: i64) -> i64 {
    fn bidegree(m: i64, n: i64) -> i64 {
        if m < 0 || n < 0 {
            return 0;
        }
        (m + 2) * (m + 1) / 2 * ((n + 2) * (n + 1) / 2)
    }
    bidegree(m, n) - bidegree(m - 1, n - 1)
}

#[derive(Debug, Clone, Serialize)]
pub struct SerreRow {
    pub k: i64,
    pub wall: bool,
    /// `dim H^q(L_{kλ})` by the Bott chain.
    pub bott: Option<u64>,
    /// `dim` of the dominant conjugate `w(kλ + Σα)`; `None` if not dominant.
    pub direct: Option<u64>,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SerreReport {
    pub root_system: String,
    pub lambda: Weight,
    pub index: usize,
    pub word: Vec<usize>,
    pub twist: Weight,
    pub ordered_roots: Vec<Vec<i64>>,
    pub rows: Vec<SerreRow>,
    /// Smallest tested `k` from which every regular tested `k` agrees.
    pub k0: Option<i64>,
}

impl SerreReport {
    pub fn all_equal_from_k0(&self) -> bool {
        self.k0.is_some()
    }
}

/// Compares `dim H^q(L_{kλ})` with `dim H⁰` of the twisted line bundle on the
/// flag manifold with the reflected Borel, for each `k`.
pub fn serre_duality_check(rs: &RootSystem, lambda: &Weight, k_values: &[i64]) -> Result<SerreReport> {
    let kx = kx_minus_weight(rs, lambda)?;
    let (w, _) = rs.to_dominant(lambda)?;
    let mut rows = Vec::new();
    for &k in k_values {
        let kl = lambda.scale(k);
        let bott = bott_dim(rs, &kl, kx.index)?;
        if bott.wall {
            rows.push(SerreRow {
                k,
                wall: true,
                bott: None,
                direct: None,
                equal: false,
            });
            continue;
        }
        let twisted = w.apply(&kl.add(&kx.weight));
        let direct = if twisted.is_dominant() {
            Some(weyl_dim(rs, &twisted)?)
        } else {
            None
        };
        rows.push(SerreRow {
            k,
            wall: false,
            bott: Some(bott.dim),
            equal: direct == Some(bott.dim),
            direct,
        });
    }
    let mut sorted: Vec<&SerreRow> = rows.iter().filter(|r| !r.wall).collect();
    sorted.sort_by_key(|r| r.k);
    let mut k0 = None;
    for r in sorted.iter().rev() {
        if !r.equal {
            break;
        }
        k0 = Some(r.k);
    }
    Ok(SerreReport {
        root_system: rs.label.clone(),
        lambda: lambda.clone(),
        index: kx.index,
        word: w.word,
        twist: kx.weight,
        ordered_roots: kx.ordered_roots,
        rows,
        k0,
    })
}

/// Signed Weyl product at `w(λ+ρ) − ρ` for every Weyl element.
pub fn signed_invariance_defect(rs: &RootSystem, lambda: &Weight) -> Result<i128> {
    let base = signed_weyl_polynomial(rs, lambda)?;
    let shifted = lambda.add(&rs.rho());
    let mut worst = 0i128;
    for w in rs.weyl_group() {
        let moved = w.apply(&shifted).sub(&rs.rho());
        let v = signed_weyl_polynomial(rs, &moved)?;
        worst = worst.max((v - w.sign() as i128 * base).abs());
    }
    Ok(worst)
}
