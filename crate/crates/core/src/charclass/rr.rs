//! Riemann–Roch integrals `(−1)^q ∫ Td(TX) e^{k c¹(L) + E}` as polynomials in `k`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::formal::{exp_class, todd_sum, FormalClass, Q};
use super::ring::CohRing;
use crate::error::{Error, Result};

/// `Σ coeffs[j] k^j`.
#[derive(Clone, PartialEq, Eq)]
pub struct KPolynomial {
    pub coeffs: Vec<Q>,
}

impl KPolynomial {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn eval(&self, k: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * k + c)
    }

    pub fn eval_int(&self, k: i64) -> Q {
        self.eval(&Q::from_integer(BigInt::from(k)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `C(k + n, n)`.
    pub fn binomial_shift(n: u32) -> Self {
        (1..=n).fold(Self::new(vec![Q::one()]), |acc, i| {
            // multiply by (k + i)/i
            let i = Q::from_integer(BigInt::from(i));
            let mut out = vec![Q::zero(); acc.coeffs.len() + 1];
            for (j, c) in acc.coeffs.iter().enumerate() {
                out[j] += c;
                out[j + 1] += c / &i;
            }
            Self::new(out)
        })
    }
}

impl fmt::Display for KPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let body = match j {
                0 => format!("{a}"),
                1 => "k".to_string(),
                _ => format!("k^{j}"),
            };
            if j == 0 || a.is_one() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{a}*{body}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for KPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for KPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `(−1)^index ∫ Td(roots) e^{k·line + extra}`; `index` is the orientation
/// sign `[X'] = (−1)^index [X]` and is never inferred.
pub fn rr_integral(
    ring: &CohRing,
    tangent_roots: &[FormalClass],
    line: &FormalClass,
    extra: Option<&FormalClass>,
    index: usize,
) -> Result<KPolynomial> {
    let d = ring.top_degree();
    for c in tangent_roots.iter().chain([line]).chain(extra) {
        if !ring.contains(c) {
            return Err(Error::Validation(format!("class does not live in ring {}", ring.name)));
        }
    }
    if !line.is_homogeneous(1) && !line.is_zero() {
        return Err(Error::Validation("line class must have degree 1".into()));
    }
    let mut base = todd_sum(tangent_roots, ring.nvars(), d).with_weights(ring.weights().to_vec());
    if let Some(e) = extra {
        base = ring.mul(&base, &exp_class(e, d));
    }
    let sign = if index % 2 == 0 { Q::one() } else { -Q::one() };
    let mut coeffs = Vec::new();
    let mut power = ring.one();
    let mut fact = BigInt::one();
    for j in 0..=d {
        if j > 0 {
            power = ring.mul(&power, line);
            fact *= BigInt::from(j);
        }
        let c = ring.integrate(&ring.mul(&base, &power))? / Q::from_integer(fact.clone());
        coeffs.push(c * &sign);
    }
    Ok(KPolynomial::new(coeffs))
}

/// `Td(TPⁿ) = Td(H)^{n+1}` via the Euler sequence.
pub fn projective_tangent_roots(ring: &CohRing) -> Vec<FormalClass> {
    vec![ring.generator(0); ring.top_degree() as usize + 1]
}

/// Chern roots `x_i − x_j`, `i < j`, of `T(SU(3)/T)` with `x3 = −x1 − x2`;
/// root `(i, j)` corresponds to the positive root `e_i − e_j`.
pub fn flag_su3_tangent_roots(ring: &CohRing) -> Vec<(usize, usize, FormalClass)> {
    let x = flag_su3_x(ring);
    let mut out = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            out.push((i, j, &x[i] - &x[j]));
        }
    }
    out
}

fn flag_su3_x(ring: &CohRing) -> [FormalClass; 3] {
    let x1 = ring.generator(0);
    let x2 = ring.generator(1);
    let x3 = -&(&x1 + &x2);
    [x1, x2, x3]
}

/// `c¹(L_λ) = Σ λ_i x_i` for `λ` in the `e`-basis.
pub fn flag_su3_line(ring: &CohRing, lambda_e: [i64; 3]) -> FormalClass {
    let x = flag_su3_x(ring);
    x.iter().zip(lambda_e).fold(FormalClass::zero(2).with_weights(ring.weights().to_vec()), |acc, (xi, l)| {
        &acc + &xi.scale(&Q::from_integer(BigInt::from(l)))
    })
}

/// Both sides of `Td(TX) e^{kc¹(L)} = Td(TX') e^{kc¹(L) + c¹(K⁻)}`, integrated.
#[derive(Debug, Clone, Serialize)]
pub struct TwistCheck {
    pub index: usize,
    /// `(−1)^q ∫_X Td(TX) e^{k c¹(L)}`.
    pub direct: KPolynomial,
    /// `∫_{X'} Td(TX') e^{k c¹(L) + c¹(K⁻_{X'})}` with `[X'] = (−1)^q [X]`.
    pub twisted: KPolynomial,
}

impl TwistCheck {
    pub fn holds(&self) -> bool {
        self.direct == self.twisted
    }
}

/// `TX'` conjugates the roots flagged `negative`; `c¹(K⁻_{X'})` is the sum of
/// the original flagged roots.
pub fn twist_check(ring: &CohRing, roots: &[FormalClass], negative: &[bool], line: &FormalClass) -> Result<TwistCheck> {
    if roots.len() != negative.len() {
        return Err(Error::Validation("one sign flag per root required".into()));
    }
    let q = negative.iter().filter(|&&b| b).count();
    let conj: Vec<FormalClass> = roots
        .iter()
        .zip(negative)
        .map(|(r, &neg)| if neg { -r } else { r.clone() })
        .collect();
    let extra = roots
        .iter()
        .zip(negative)
        .filter(|(_, &neg)| neg)
        .fold(FormalClass::zero(ring.nvars()).with_weights(ring.weights().to_vec()), |acc, (r, _)| &acc + r);
    Ok(TwistCheck {
        index: q,
        direct: rr_integral(ring, roots, line, None, q)?,
        twisted: rr_integral(ring, &conj, line, Some(&extra), q)?,
    })
}
