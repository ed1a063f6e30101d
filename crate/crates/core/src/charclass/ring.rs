//! Graded cohomology rings given by generators and homogeneous relations,
//! with integration normalized on a top monomial.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::{One, Zero};
use serde::Deserialize;

use super::formal::{FormalClass, Q};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Deserialize)]
struct GeneratorSpec {
    name: String,
    degree: u32,
}

#[derive(Debug, Clone, Deserialize)]
struct RingSpec {
    name: String,
    generators: Vec<GeneratorSpec>,
    relations: Vec<String>,
    top: String,
}

/// A ring `Q[x_1, …, x_m]/I` with `I` homogeneous, vanishing above the top
/// degree and one-dimensional in it.
///
/// File degrees are real cohomological degrees (even); in memory a generator
/// of `H^2` has degree 1.
#[derive(Debug, Clone)]
pub struct CohRing {
    pub name: String,
    pub generators: Vec<String>,
    weights: Vec<u32>,
    pub relations: Vec<FormalClass>,
    top: Vec<u32>,
    top_degree: u32,
    functional: BTreeMap<Vec<u32>, Q>,
}

pub const P1_RING: &str = include_str!("../../data/rings/p1.toml");
pub const P2_RING: &str = include_str!("../../data/rings/p2.toml");
pub const P3_RING: &str = include_str!("../../data/rings/p3.toml");
pub const FLAG_SU3_RING: &str = include_str!("../../data/rings/flag_su3.toml");

impl CohRing {
    pub fn parse(text: &str) -> Result<Self> {
        let spec: RingSpec = toml::from_str(text).map_err(|e| Error::Parse(format!("ring file: {e}")))?;
        Self::from_spec(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// `Pⁿ` for `n ≤ 3` from the shipped files, larger `n` built directly.
    pub fn projective(n: u32) -> Result<Self> {
        match n {
            0 => Err(Error::Validation("projective space needs n ≥ 1".into())),
            1 => Self::parse(P1_RING),
            2 => Self::parse(P2_RING),
            3 => Self::parse(P3_RING),
            _ => Self::parse(&format!(
                "name = \"P{n}\"\ngenerators = [{{ name = \"H\", degree = 2 }}]\nrelations = [\"H^{}\"]\ntop = \"H^{n}\"\n",
                n + 1
            )),
        }
    }

    pub fn flag_su3() -> Result<Self> {
        Self::parse(FLAG_SU3_RING)
    }

    fn from_spec(spec: RingSpec) -> Result<Self> {
        if spec.generators.is_empty() {
            return Err(Error::Parse("ring needs at least one generator".into()));
        }
        let mut names = Vec::new();
        let mut weights = Vec::new();
        for g in &spec.generators {
            if g.degree == 0 || g.degree % 2 != 0 {
                return Err(Error::Parse(format!(
                    "generator {} has degree {}; degrees must be positive and even",
                    g.name, g.degree
                )));
            }
            if names.contains(&g.name) {
                return Err(Error::Parse(format!("duplicate generator {}", g.name)));
            }
            names.push(g.name.clone());
            weights.push(g.degree / 2);
        }
        let relations = spec
            .relations
            .iter()
            .map(|r| parse_polynomial(r, &names, &weights))
            .collect::<Result<Vec<_>>>()?;
        for (r, text) in relations.iter().zip(&spec.relations) {
            let d = r.degree().ok_or_else(|| Error::Parse(format!("relation '{text}' is zero")))?;
            if !r.is_homogeneous(d) {
                return Err(Error::Parse(format!("relation '{text}' is not homogeneous")));
            }
        }
        let top_poly = parse_polynomial(&spec.top, &names, &weights)?;
        let mut terms = top_poly.terms();
        let top = match (terms.next(), terms.next()) {
            (Some((e, c)), None) if c.is_one() => e.clone(),
            _ => return Err(Error::Parse(format!("top '{}' must be a single monomial", spec.top))),
        };
        let top_degree = top_poly.mono_degree(&top);

        let mut ring = Self {
            name: spec.name,
            generators: names,
            weights,
            relations,
            top,
            top_degree,
            functional: BTreeMap::new(),
        };
        ring.functional = ring.solve_functional()?;
        let max_w = *ring.weights.iter().max().unwrap_or(&1);
        for d in top_degree + 1..=top_degree + max_w {
            let monos = monomials(&ring.weights, d);
            let rows = ring.ideal_rows(d, &monos);
            if rank(rows, monos.len()) < monos.len() {
                return Err(Error::Parse(format!(
                    "ring {} does not vanish in degree {d} above the top degree",
                    ring.name
                )));
            }
        }
        Ok(ring)
    }

    fn ideal_rows(&self, d: u32, monos: &[Vec<u32>]) -> Vec<Vec<Q>> {
        let index: BTreeMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for r in &self.relations {
            let e = r.degree().unwrap_or(0);
            if e > d {
                continue;
            }
            for m in monomials(&self.weights, d - e) {
                let mut row = vec![Q::zero(); monos.len()];
                for (exps, c) in r.terms() {
                    let prod: Vec<u32> = exps.iter().zip(&m).map(|(a, b)| a + b).collect();
                    row[index[&prod]] += c;
                }
                rows.push(row);
            }
        }
        rows
    }

    /// The functional on degree-`d` monomials that kills the ideal and is 1
    /// on the top monomial.
    fn solve_functional(&self) -> Result<BTreeMap<Vec<u32>, Q>> {
        let monos = monomials(&self.weights, self.top_degree);
        let rows = self.ideal_rows(self.top_degree, &monos);
        let null = nullspace(rows, monos.len());
        if null.len() != 1 {
            return Err(Error::Parse(format!(
                "ring {}: top-degree quotient has dimension {}, expected 1",
                self.name,
                null.len()
            )));
        }
        let v = &null[0];
        let t = monos.iter().position(|m| *m == self.top).expect("top monomial enumerated");
        if v[t].is_zero() {
            return Err(Error::Parse(format!(
                "ring {}: top monomial lies in the relation ideal",
                self.name
            )));
        }
        let norm = v[t].clone();
        Ok(monos.into_iter().zip(v.iter()).map(|(m, c)| (m, c / &norm)).collect())
    }

    pub fn nvars(&self) -> usize {
        self.generators.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Complex dimension.
    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn generator(&self, i: usize) -> FormalClass {
        FormalClass::var(self.nvars(), i).with_weights(self.weights.clone())
    }

    /// `Σ c_i x_i`, requiring degree-1 generators.
    pub fn linear(&self, coeffs: &[Q]) -> Result<FormalClass> {
        if coeffs.len() != self.nvars() {
            return Err(Error::Validation(format!(
                "expected {} coefficients, got {}",
                self.nvars(),
                coeffs.len()
            )));
        }
        Ok(FormalClass::linear(coeffs).with_weights(self.weights.clone()))
    }

    pub fn one(&self) -> FormalClass {
        FormalClass::one(self.nvars()).with_weights(self.weights.clone())
    }

    pub fn contains(&self, c: &FormalClass) -> bool {
        c.weights() == self.weights.as_slice()
    }

    /// `∫ c`: the functional applied to the top-degree component.
    pub fn integrate(&self, c: &FormalClass) -> Result<Q> {
        if !self.contains(c) {
            return Err(Error::Validation(format!("class does not live in ring {}", self.name)));
        }
        Ok(c
            .component(self.top_degree)
            .terms()
            .map(|(e, v)| v * &self.functional[e])
            .sum())
    }

    pub fn mul(&self, a: &FormalClass, b: &FormalClass) -> FormalClass {
        a.mul_trunc(b, self.top_degree)
    }
}

/// Exponent vectors of weighted degree `d`.
pub fn monomials(weights: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn go(weights: &[u32], d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == weights.len() {
            let w = weights[prefix.len()];
            if d % w == 0 {
                let mut e = prefix.clone();
                e.push(d / w);
                out.push(e);
            }
            return;
        }
        let w = weights[prefix.len()];
        for p in 0..=d / w {
            prefix.push(p);
            go(weights, d - p * w, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(weights, d, &mut Vec::new(), &mut out);
    out
}

/// Row-reduces in place; returns pivot columns.
fn rref(rows: &mut Vec<Vec<Q>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Q::one() / &rows[r][c];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

fn rank(mut rows: Vec<Vec<Q>>, ncols: usize) -> usize {
    rref(&mut rows, ncols).len()
}

fn nullspace(mut rows: Vec<Vec<Q>>, ncols: usize) -> Vec<Vec<Q>> {
    let pivots = rref(&mut rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Parses sums of terms `c*x^a*y^b` with rational `c` such as `-3/2*x1^2*x2`.
pub fn parse_polynomial(text: &str, names: &[String], weights: &[u32]) -> Result<FormalClass> {
    let err = |msg: String| Error::Parse(format!("polynomial '{text}': {msg}"));
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty".into()));
    }
    let mut out = FormalClass::zero_weighted(weights.to_vec());
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !s[..i].ends_with(['^', '*', '/']) {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-Q::one(), rest),
            None => (Q::one(), term.strip_prefix('+').unwrap_or(term)),
        };
        if body.is_empty() {
            return Err(err("dangling sign".into()));
        }
        let mut coeff = sign;
        let mut exps = vec![0u32; names.len()];
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(err("empty factor".into()));
            }
            if factor.starts_with(|c: char| c.is_ascii_digit()) {
                let c: Q = factor.parse().map_err(|_| err(format!("bad coefficient '{factor}'")))?;
                coeff *= c;
                continue;
            }
            let (name, power) = match factor.split_once('^') {
                Some((n, p)) => (n, p.parse::<u32>().map_err(|_| err(format!("bad exponent in '{factor}'")))?),
                None => (factor, 1),
            };
            let idx = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| err(format!("unknown generator '{name}'")))?;
            exps[idx] += power;
        }
        out.add_term(exps, coeff);
    }
    Ok(out)
}
