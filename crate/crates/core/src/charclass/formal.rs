//! Truncated formal power series in Chern roots with exact rational
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Polynomial in generators `x_i` of degree `weights[i]` (complex degree),
/// stored by exponent vector.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalClass {
    weights: Vec<u32>,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl fmt::Debug for FormalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| **p > 0)
                    .map(|(i, p)| if *p == 1 { format!("x{}", i + 1) } else { format!("x{}^{p}", i + 1) })
                    .collect();
                if mono.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FormalClass {
    pub fn zero(nvars: usize) -> Self {
        Self::zero_weighted(vec![1; nvars])
    }

    pub fn zero_weighted(weights: Vec<u32>) -> Self {
        Self {
            weights,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut s = Self::zero(nvars);
        s.add_term(vec![0; nvars], c);
        s
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut s = Self::zero(nvars);
        s.add_term(e, Q::one());
        s
    }

    /// `Σ c_i x_i`.
    pub fn linear(coeffs: &[Q]) -> Self {
        let n = coeffs.len();
        coeffs
            .iter()
            .enumerate()
            .fold(Self::zero(n), |acc, (i, c)| &acc + &Self::var(n, i).scale(c))
    }

    pub fn monomial(weights: Vec<u32>, exps: Vec<u32>, c: Q) -> Self {
        let mut s = Self::zero_weighted(weights);
        s.add_term(exps, c);
        s
    }

    pub fn with_weights(mut self, weights: Vec<u32>) -> Self {
        assert_eq!(weights.len(), self.weights.len());
        self.weights = weights;
        self
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn mono_degree(&self, e: &[u32]) -> u32 {
        e.iter().zip(&self.weights).map(|(p, w)| p * w).sum()
    }

    /// Largest degree present; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| self.mono_degree(e)).max()
    }

    /// Whether every term has degree exactly `d`.
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|e| self.mono_degree(e) == d)
    }

    /// Degree-`d` component.
    pub fn component(&self, d: u32) -> Self {
        let mut out = Self::zero_weighted(self.weights.clone());
        for (e, c) in &self.terms {
            if self.mono_degree(e) == d {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn truncate(&self, trunc: u32) -> Self {
        let mut out = Self::zero_weighted(self.weights.clone());
        for (e, c) in &self.terms {
            if self.mono_degree(e) <= trunc {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero_weighted(self.weights.clone());
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    pub fn mul_trunc(&self, other: &Self, trunc: u32) -> Self {
        assert_eq!(self.weights, other.weights, "classes live in different rings");
        let mut out = Self::zero_weighted(self.weights.clone());
        for (e1, c1) in &self.terms {
            let d1 = self.mono_degree(e1);
            if d1 > trunc {
                continue;
            }
            for (e2, c2) in &other.terms {
                if d1 + self.mono_degree(e2) > trunc {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow_trunc(&self, n: u32, trunc: u32) -> Self {
        (0..n).fold(Self::one_like(self), |acc, _| acc.mul_trunc(self, trunc))
    }

    fn one_like(other: &Self) -> Self {
        Self::monomial(other.weights.clone(), vec![0; other.nvars()], Q::one())
    }

    /// Largest coefficient modulus; zero for the zero class.
    pub fn max_abs_coeff(&self) -> Q {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Q::zero)
    }
}

impl std::ops::Add for &FormalClass {
    type Output = FormalClass;
    fn add(self, rhs: &FormalClass) -> FormalClass {
        assert_eq!(self.weights, rhs.weights, "classes live in different rings");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &FormalClass {
    type Output = FormalClass;
    fn sub(self, rhs: &FormalClass) -> FormalClass {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &FormalClass {
    type Output = FormalClass;
    fn neg(self) -> FormalClass {
        self.scale(&-Q::one())
    }
}

/// Bernoulli numbers `B_0 … B_n` with `B_1 = −1/2`, from
/// `Σ_{j=0}^{m} C(m+1, j) B_j = 0`.
pub fn bernoulli(n: usize) -> Vec<Q> {
    let mut b: Vec<Q> = vec![Q::one()];
    for m in 1..=n {
        let mut acc = Q::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += Q::from(binom.clone()) * bj;
            // C(m+1, j+1) from C(m+1, j)
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / Q::from(BigInt::from(m + 1)));
    }
    b
}

/// Coefficients of `x/(1 − e^{−x}) = Σ B_n⁺ xⁿ/n!` through degree `n`.
pub fn todd_coefficients(n: usize) -> Vec<Q> {
    let b = bernoulli(n);
    let mut fact = BigInt::one();
    b.into_iter()
        .enumerate()
        .map(|(i, bi)| {
            if i > 0 {
                fact *= BigInt::from(i);
            }
            let bi = if i == 1 { -bi } else { bi };
            bi / Q::from(fact.clone())
        })
        .collect()
}

fn series_in(x: &FormalClass, coeffs: &[Q], trunc: u32) -> FormalClass {
    let mut out = FormalClass::one_like(x);
    let mut power = FormalClass::one_like(x);
    for c in coeffs.iter().skip(1) {
        power = power.mul_trunc(x, trunc);
        if power.is_zero() {
            break;
        }
        out = &out + &power.scale(c);
    }
    out
}

/// `x/(1 − e^{−x})` truncated at degree `trunc`, for `x` of degree 1.
pub fn todd_line(x: &FormalClass, trunc: u32) -> FormalClass {
    assert!(x.is_homogeneous(1), "Chern roots have degree 1");
    series_in(x, &todd_coefficients(trunc as usize), trunc)
}

/// `Π todd_line(x_i)`.
pub fn todd_sum(roots: &[FormalClass], nvars: usize, trunc: u32) -> FormalClass {
    roots
        .iter()
        .fold(FormalClass::one(nvars), |acc, r| {
            let r = r.clone().with_weights(acc.weights.clone());
            acc.mul_trunc(&todd_line(&r, trunc), trunc)
        })
}

/// `e^{c}` truncated, for `c` without constant term.
pub fn exp_class(c: &FormalClass, trunc: u32) -> FormalClass {
    assert!(c.coeff(&vec![0; c.nvars()]).is_zero(), "exponent must have no constant term");
    let mut coeffs = vec![Q::one()];
    let mut fact = BigInt::one();
    for i in 1..=trunc as usize {
        fact *= BigInt::from(i);
        coeffs.push(Q::new(BigInt::one(), fact.clone()));
    }
    series_in(c, &coeffs, trunc)
}

/// `Td(−roots)·e^{Σ roots} − Td(roots)`, as its largest coefficient modulus.
pub fn verify_conjugate_identity(roots: &[FormalClass], nvars: usize, trunc: u32) -> Q {
    let neg: Vec<FormalClass> = roots.iter().map(|r| -r).collect();
    let c1 = roots.iter().fold(FormalClass::zero(nvars), |acc, r| &acc + r);
    let lhs = todd_sum(&neg, nvars, trunc).mul_trunc(&exp_class(&c1, trunc), trunc);
    (&lhs - &todd_sum(roots, nvars, trunc)).max_abs_coeff()
}
