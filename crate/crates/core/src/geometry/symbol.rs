//! Polynomial symbols on `T*Cⁿ` in the complex coordinates `(z, z̄, ζ, ζ̄)`,
//! with `ζ_j = ξ_j − iη_j` identifying `Σ ζ_j dz_j` with `Re(Σ ζ_j dz_j)`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::characteristic::SymbolPoint;
use super::weight::WeightFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Z(usize),
    ZBar(usize),
    Zeta(usize),
    ZetaBar(usize),
}

/// Sparse polynomial in the `4n` variables `(z, z̄, ζ, ζ̄)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    n: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl Symbol {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        let mut s = Self::zero(n);
        s.add_term(vec![0; 4 * n], c);
        s
    }

    pub fn var(n: usize, v: Var) -> Self {
        let mut e = vec![0; 4 * n];
        e[Self::slot(n, v)] = 1;
        let mut s = Self::zero(n);
        s.add_term(e, Complex64::new(1.0, 0.0));
        s
    }

    /// `φ` as a symbol independent of the fiber variables.
    pub fn from_weight(phi: &WeightFunction) -> Self {
        let n = phi.dim();
        let mut s = Self::zero(n);
        for t in phi.terms() {
            let mut e = vec![0; 4 * n];
            e[..n].copy_from_slice(&t.zpow);
            e[n..2 * n].copy_from_slice(&t.zbarpow);
            s.add_term(e, t.coeff);
        }
        s
    }

    fn slot(n: usize, v: Var) -> usize {
        match v {
            Var::Z(j) => j,
            Var::ZBar(j) => n + j,
            Var::Zeta(j) => 2 * n + j,
            Var::ZetaBar(j) => 3 * n + j,
        }
    }

    fn add_term(&mut self, e: Vec<u32>, c: Complex64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                if c != Complex64::new(0.0, 0.0) {
                    slot.insert(c);
                }
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                // exact cancellation only
                if *slot.get() == Complex64::new(0.0, 0.0) {
                    slot.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.n);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn derivative(&self, v: Var) -> Self {
        let s = Self::slot(self.n, v);
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[s] > 0 {
                let mut e2 = e.clone();
                e2[s] -= 1;
                out.add_term(e2, c * e[s] as f64);
            }
        }
        out
    }

    /// Complex conjugate as a function on real phase space: swaps `z ↔ z̄`,
    /// `ζ ↔ ζ̄` and conjugates coefficients.
    pub fn conj(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; 4 * n];
            e2[..n].copy_from_slice(&e[n..2 * n]);
            e2[n..2 * n].copy_from_slice(&e[..n]);
            e2[2 * n..3 * n].copy_from_slice(&e[3 * n..]);
            e2[3 * n..].copy_from_slice(&e[2 * n..3 * n]);
            out.add_term(e2, c.conj());
        }
        out
    }

    pub fn eval(&self, pt: &SymbolPoint) -> Complex64 {
        let n = self.n;
        let mut vals = Vec::with_capacity(4 * n);
        vals.extend(pt.z.iter().copied());
        vals.extend(pt.z.iter().map(|w| w.conj()));
        vals.extend(pt.zeta.iter().copied());
        vals.extend(pt.zeta.iter().map(|w| w.conj()));
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(&vals)
                    .fold(*c, |acc, (&p, v)| acc * v.powu(p))
            })
            .sum()
    }

    /// Largest coefficient modulus; zero for the zero symbol.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for &Symbol {
    type Output = Symbol;
    fn add(self, rhs: &Symbol) -> Symbol {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }
}

impl Sub for &Symbol {
    type Output = Symbol;
    fn sub(self, rhs: &Symbol) -> Symbol {
        self + &(-rhs)
    }
}

impl Neg for &Symbol {
    type Output = Symbol;
    fn neg(self) -> Symbol {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &Symbol {
    type Output = Symbol;
    fn mul(self, rhs: &Symbol) -> Symbol {
        let mut out = Symbol::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

/// `{f, g}` in the `(z, ζ)` coordinates:
/// `½{f,g} = (∂_ζ f·∂_z g + ∂_ζ̄ f·∂_z̄ g) − (∂_z f·∂_ζ g + ∂_z̄ f·∂_ζ̄ g)`.
pub fn poisson_bracket(f: &Symbol, g: &Symbol) -> Symbol {
    assert_eq!(f.n, g.n, "symbols live on different phase spaces");
    let n = f.n;
    let mut half = Symbol::zero(n);
    for j in 0..n {
        let plus = &(&f.derivative(Var::Zeta(j)) * &g.derivative(Var::Z(j)))
            + &(&f.derivative(Var::ZetaBar(j)) * &g.derivative(Var::ZBar(j)));
        let minus = &(&f.derivative(Var::Z(j)) * &g.derivative(Var::Zeta(j)))
            + &(&f.derivative(Var::ZBar(j)) * &g.derivative(Var::ZetaBar(j)));
        half = &half + &(&plus - &minus);
    }
    half.scale(Complex64::new(2.0, 0.0))
}

/// Principal symbol `q_j = (i/2) ζ̄_j + ∂φ/∂z̄_j` of `h∂_{z̄_j} + ∂φ/∂z̄_j`
/// in the trivial frame.
pub fn q_symbol(phi: &WeightFunction, j: usize) -> Symbol {
    let n = phi.dim();
    let fiber = Symbol::var(n, Var::ZetaBar(j)).scale(Complex64::new(0.0, 0.5));
    &fiber + &Symbol::from_weight(phi).derivative(Var::ZBar(j))
}

/// `p₀ = Σ_j q̄_j q_j`.
pub fn p0_symbol(phi: &WeightFunction) -> Symbol {
    let n = phi.dim();
    (0..n).fold(Symbol::zero(n), |acc, j| {
        let q = q_symbol(phi, j);
        &acc + &(&q.conj() * &q)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bracket_of_coordinates() {
        let zeta = Symbol::var(1, Var::Zeta(0));
        let z = Symbol::var(1, Var::Z(0));
        // {ζ, z} = {ξ,x} + {η,y} = 2
        assert_eq!(poisson_bracket(&zeta, &z), Symbol::constant(1, c(2.0, 0.0)));
        assert_eq!(poisson_bracket(&z, &zeta), Symbol::constant(1, c(-2.0, 0.0)));
        // ζ and z̄ commute
        let zbar = Symbol::var(1, Var::ZBar(0));
        assert_eq!(poisson_bracket(&zeta, &zbar).num_terms(), 0);
    }

    #[test]
    fn self_bracket_vanishes() {
        let phi = WeightFunction::diagonal_quadratic(&[0.7, -1.3]);
        let p = p0_symbol(&phi);
        assert!(poisson_bracket(&p, &p).max_coeff() < 1e-14);
    }

    #[test]
    fn levi_identity_for_radial_weight() {
        let lambda = 0.8;
        let phi = WeightFunction::diagonal_quadratic(&[lambda]);
        let q = q_symbol(&phi, 0);
        let b = poisson_bracket(&q, &q.conj()).scale(c(0.0, -0.5)); // (1/2i){q, q̄}
        assert_eq!(b, Symbol::constant(1, c(lambda, 0.0)));
    }

    #[test]
    fn conj_is_an_involution_and_matches_values() {
        let phi = WeightFunction::diagonal_quadratic(&[0.5, 2.0]);
        let q = q_symbol(&phi, 1);
        assert_eq!(q.conj().conj(), q);
        let pt = SymbolPoint {
            z: vec![c(0.1, 0.2), c(-0.3, 0.5)],
            zeta: vec![c(1.0, -0.4), c(0.2, 0.9)],
        };
        assert!((q.conj().eval(&pt) - q.eval(&pt).conj()).norm() < 1e-15);
    }
}
