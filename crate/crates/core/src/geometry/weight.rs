//! Local fiber-metric potentials `φ(z, z̄)` with `|s|² = e^{-2φ}`.
//!
//! A [`WeightFunction`] is a sparse polynomial in `z` and `z̄`. Reality is
//! enforced at construction: the coefficient of `z^a z̄^b` must be the complex
//! conjugate of the coefficient of `z^b z̄^a`. All derivatives are computed
//! term by term, so they carry no discretization error.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the conjugate-swap reality check.
pub const REALITY_TOL: f64 = 1e-12;

/// Exponent pair `(z-multi-index, z̄-multi-index)`.
pub type Monomial = (Vec<u32>, Vec<u32>);

/// One term `coeff · z^zpow · z̄^zbarpow`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub zpow: Vec<u32>,
    pub zbarpow: Vec<u32>,
    pub coeff: Complex64,
}

impl Term {
    pub fn new(zpow: Vec<u32>, zbarpow: Vec<u32>, coeff: Complex64) -> Self {
        Self {
            zpow,
            zbarpow,
            coeff,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    n: usize,
    terms: BTreeMap<Monomial, Complex64>,
}

impl WeightFunction {
    /// Builds `φ` from a term list, rejecting coefficient sets that are not
    /// closed under the conjugate swap `z^a z̄^b ↔ z^b z̄^a`.
    pub fn new(n: usize, terms: Vec<Term>) -> Result<Self> {
        let phi = Self::collect(n, terms)?;
        phi.check_reality()?;
        Ok(phi)
    }

    /// Builds `φ` and projects it onto real-valued polynomials by averaging
    /// each coefficient with the conjugate of its swapped partner.
    pub fn symmetrized(n: usize, terms: Vec<Term>) -> Result<Self> {
        let raw = Self::collect(n, terms)?;
        let mut terms = BTreeMap::new();
        for (key, _) in raw.terms.iter() {
            let swapped = (key.1.clone(), key.0.clone());
            let c = raw.coeff(key);
            let d = raw.coeff(&swapped);
            let avg = (c + d.conj()) * 0.5;
            if avg != Complex64::new(0.0, 0.0) {
                terms.insert(key.clone(), avg);
                terms.insert(swapped, avg.conj());
            }
        }
        Ok(Self { n, terms })
    }

    /// `Σ_j μ_j |z_j|²`.
    pub fn diagonal_quadratic(mu: &[f64]) -> Self {
        let n = mu.len();
        let mut terms = BTreeMap::new();
        for (j, &m) in mu.iter().enumerate() {
            if m != 0.0 {
                let e = unit(n, j);
                terms.insert((e.clone(), e), Complex64::new(m, 0.0));
            }
        }
        Self { n, terms }
    }

    /// `Σ_{j,k} H_{jk} z_k z̄_j`, whose Levi matrix is `H` everywhere.
    pub fn hermitian_quadratic(h: &DMatrix<Complex64>) -> Result<Self> {
        let n = h.nrows();
        if h.ncols() != n {
            return Err(Error::Validation("Levi matrix must be square".into()));
        }
        let mut terms = Vec::new();
        for j in 0..n {
            for k in 0..n {
                terms.push(Term::new(unit(n, k), unit(n, j), h[(j, k)]));
            }
        }
        Self::new(n, terms)
    }

    fn collect(n: usize, terms: Vec<Term>) -> Result<Self> {
        let mut map: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for t in terms {
            if t.zpow.len() != n || t.zbarpow.len() != n {
                return Err(Error::Validation(format!(
                    "term multi-indices must have length {n}, got {} and {}",
                    t.zpow.len(),
                    t.zbarpow.len()
                )));
            }
            if !(t.coeff.re.is_finite() && t.coeff.im.is_finite()) {
                return Err(Error::Validation("non-finite coefficient".into()));
            }
            *map.entry((t.zpow, t.zbarpow)).or_default() += t.coeff;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(Self { n, terms: map })
    }

    fn check_reality(&self) -> Result<()> {
        let scale = self
            .terms
            .values()
            .map(|c| c.norm())
            .fold(1.0_f64, f64::max);
        for (key, c) in &self.terms {
            let partner = self.coeff(&(key.1.clone(), key.0.clone()));
            let mismatch = (c - partner.conj()).norm();
            if mismatch > REALITY_TOL * scale {
                return Err(Error::NonReal {
                    term: format!("z^{:?} zbar^{:?}", key.0, key.1),
                    mismatch,
                });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, key: &Monomial) -> Complex64 {
        self.terms.get(key).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms
            .iter()
            .map(|((a, b), c)| Term::new(a.clone(), b.clone(), *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Highest total degree appearing in `φ`.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(a, b)| a.iter().sum::<u32>() + b.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// `∂^{α}_z ∂^{β}_{z̄} φ` at `z`.
    pub fn partial(&self, dz: &[u32], dzbar: &[u32], z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.n);
        let zbar: Vec<Complex64> = z.iter().map(|w| w.conj()).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        'terms: for ((a, b), c) in &self.terms {
            let mut v = *c;
            for j in 0..self.n {
                if a[j] < dz[j] || b[j] < dzbar[j] {
                    continue 'terms;
                }
                v *= falling(a[j], dz[j]) * falling(b[j], dzbar[j]);
                v *= z[j].powu(a[j] - dz[j]) * zbar[j].powu(b[j] - dzbar[j]);
            }
            acc += v;
        }
        acc
    }

    /// Value of `φ` at `z` (imaginary rounding residue discarded).
    pub fn eval(&self, z: &[Complex64]) -> f64 {
        let zero = vec![0; self.n];
        self.partial(&zero, &zero, z).re
    }

    /// `∂φ/∂z_j`.
    pub fn dz(&self, j: usize, z: &[Complex64]) -> Complex64 {
        self.partial(&unit(self.n, j), &vec![0; self.n], z)
    }

    /// `∂φ/∂z̄_j`.
    pub fn dzbar(&self, j: usize, z: &[Complex64]) -> Complex64 {
        self.partial(&vec![0; self.n], &unit(self.n, j), z)
    }

    /// `∂²φ/∂z̄_j ∂z_k`.
    pub fn mixed(&self, j: usize, k: usize, z: &[Complex64]) -> Complex64 {
        self.partial(&unit(self.n, k), &unit(self.n, j), z)
    }

    /// Structured-text form: `{"n": .., "terms": [{"zpow", "zbarpow", "re", "im"}]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&WeightDoc::from(self)).expect("weight document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: WeightDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("weight function: {e}")))?;
        doc.try_into()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDoc {
    pub zpow: Vec<u32>,
    pub zbarpow: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightDoc {
    pub n: usize,
    pub terms: Vec<TermDoc>,
}

impl From<&WeightFunction> for WeightDoc {
    fn from(phi: &WeightFunction) -> Self {
        Self {
            n: phi.n,
            terms: phi
                .terms
                .iter()
                .map(|((a, b), c)| TermDoc {
                    zpow: a.clone(),
                    zbarpow: b.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<WeightDoc> for WeightFunction {
    type Error = Error;

    fn try_from(doc: WeightDoc) -> Result<Self> {
        let terms = doc
            .terms
            .into_iter()
            .map(|t| Term::new(t.zpow, t.zbarpow, Complex64::new(t.re, t.im)))
            .collect();
        WeightFunction::new(doc.n, terms)
    }
}

pub(crate) fn unit(n: usize, j: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[j] = 1;
    e
}

fn falling(a: u32, k: u32) -> f64 {
    (0..k).map(|i| (a - i) as f64).product()
}
