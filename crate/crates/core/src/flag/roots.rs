//! Type-A root systems in the realization `e_i − e_{i+1}`, weights and Weyl
//! group elements.
//!
//! Convention: a word `[i₁, …, i_l]` denotes `w = s_{i₁} ⋯ s_{i_l}` and acts on
//! weights right to left, so `s_{i_l}` is applied first. Indices are 1-based.

use std::collections::{HashMap, VecDeque};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest rank for which the Weyl group is enumerated at construction.
pub const MAX_ENUMERATED_RANK: usize = 6;

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub label: String,
    rank: usize,
    /// Simple roots in the realization on `Zⁿ`, `n = rank + 1`.
    pub simple_roots: Vec<Vec<i64>>,
    pub positive_roots: Vec<Vec<i64>>,
    /// `⟨α_i, α_j^∨⟩`; row `i` is `α_i` in fundamental coordinates.
    pub cartan: Vec<Vec<i64>>,
    weyl_group: Vec<WeylElement>,
}

/// A weight by fundamental coordinates and its realization with last entry 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Weight {
    pub fund: Vec<i64>,
    pub real: Vec<i64>,
}

impl Weight {
    pub fn from_fundamental(fund: &[i64]) -> Self {
        let n = fund.len() + 1;
        let mut real = vec![0; n];
        for i in (0..fund.len()).rev() {
            real[i] = real[i + 1] + fund[i];
        }
        Self {
            fund: fund.to_vec(),
            real,
        }
    }

    /// Any realization vector; shifts along `(1, …, 1)` are ignored.
    pub fn from_realization(real: &[i64]) -> Self {
        let fund: Vec<i64> = real.windows(2).map(|w| w[0] - w[1]).collect();
        Self::from_fundamental(&fund)
    }

    pub fn zero(rank: usize) -> Self {
        Self::from_fundamental(&vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.fund.len()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight::from_fundamental(&self.fund.iter().zip(&other.fund).map(|(a, b)| a + b).collect::<Vec<_>>())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight::from_fundamental(&self.fund.iter().zip(&other.fund).map(|(a, b)| a - b).collect::<Vec<_>>())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight::from_fundamental(&self.fund.iter().map(|a| a * k).collect::<Vec<_>>())
    }

    pub fn is_dominant(&self) -> bool {
        self.fund.iter().all(|&a| a >= 0)
    }

    /// Euclidean pairing with a root of the realization.
    pub fn pair(&self, root: &[i64]) -> i64 {
        self.real.iter().zip(root).map(|(a, b)| a * b).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeylElement {
    pub word: Vec<usize>,
    #[serde(skip)]
    pub matrix: DMatrix<i64>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        Self {
            word: Vec::new(),
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn from_word(word: &[usize], n: usize) -> Self {
        let matrix = word
            .iter()
            .fold(DMatrix::identity(n, n), |m, &i| m * reflection_matrix(i, n));
        Self {
            word: word.to_vec(),
            matrix,
        }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn apply(&self, w: &Weight) -> Weight {
        let v = &self.matrix * DMatrix::from_column_slice(w.real.len(), 1, &w.real);
        Weight::from_realization(v.as_slice())
    }

    pub fn apply_root(&self, root: &[i64]) -> Vec<i64> {
        (&self.matrix * DMatrix::from_column_slice(root.len(), 1, root)).as_slice().to_vec()
    }

    pub fn inverse(&self) -> Self {
        Self {
            word: self.word.iter().rev().copied().collect(),
            matrix: self.matrix.transpose(),
        }
    }

    /// `det w = (−1)^{length}`.
    pub fn sign(&self) -> i64 {
        if self.word.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Permutation matrix swapping `e_i` and `e_{i+1}` (1-based `i`).
pub fn reflection_matrix(i: usize, n: usize) -> DMatrix<i64> {
    let mut m = DMatrix::identity(n, n);
    m.swap_rows(i - 1, i);
    m
}

impl RootSystem {
    /// `A_rank`, realized on `Z^{rank+1}`.
    pub fn a(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Validation("root system rank must be at least 1".into()));
        }
        let n = rank + 1;
        let e = |i: usize, j: usize| {
            let mut v = vec![0; n];
            v[i] = 1;
            v[j] = -1;
            v
        };
        let simple_roots: Vec<Vec<i64>> = (0..rank).map(|i| e(i, i + 1)).collect();
        let mut positive_roots = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                positive_roots.push(e(i, j));
            }
        }
        let cartan = simple_roots
            .iter()
            .map(|a| simple_roots.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect())
            .collect();
        let mut rs = Self {
            label: format!("A{rank}"),
            rank,
            simple_roots,
            positive_roots,
            cartan,
            weyl_group: Vec::new(),
        };
        if rank <= MAX_ENUMERATED_RANK {
            rs.weyl_group = rs.enumerate_weyl_group();
        }
        Ok(rs)
    }

    /// Parses labels such as `A2`.
    pub fn from_label(label: &str) -> Result<Self> {
        let rank = label
            .strip_prefix(['A', 'a'])
            .and_then(|r| r.parse::<usize>().ok())
            .ok_or_else(|| Error::Validation(format!("unsupported root system '{label}'; only type A is implemented")))?;
        Self::a(rank)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn realization_dim(&self) -> usize {
        self.rank + 1
    }

    pub fn rho(&self) -> Weight {
        Weight::from_fundamental(&vec![1; self.rank])
    }

    /// `Σ_{α>0} α = 2ρ`.
    pub fn positive_root_sum(&self) -> Weight {
        let n = self.realization_dim();
        let sum: Vec<i64> = (0..n).map(|i| self.positive_roots.iter().map(|a| a[i]).sum()).collect();
        Weight::from_realization(&sum)
    }

    pub fn root_weight(&self, root: &[i64]) -> Weight {
        Weight::from_realization(root)
    }

    /// Shortest words first.
    pub fn weyl_group(&self) -> &[WeylElement] {
        &self.weyl_group
    }

    fn enumerate_weyl_group(&self) -> Vec<WeylElement> {
        let n = self.realization_dim();
        let id = WeylElement::identity(n);
        let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
        seen.insert(id.matrix.as_slice().to_vec(), ());
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(w) = queue.pop_front() {
            for i in 1..=self.rank {
                let mut word = w.word.clone();
                word.push(i);
                let next = WeylElement::from_word(&word, n);
                if seen.insert(next.matrix.as_slice().to_vec(), ()).is_none() {
                    out.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        out
    }

    pub fn check_weight(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank {
            return Err(Error::Validation(format!(
                "weight has {} coordinates, {} expects {}",
                w.rank(),
                self.label,
                self.rank
            )));
        }
        Ok(())
    }

    /// Fails with the first positive root orthogonal to `w`.
    pub fn require_regular(&self, w: &Weight) -> Result<()> {
        self.check_weight(w)?;
        match self.positive_roots.iter().find(|a| w.pair(a) == 0) {
            Some(a) => Err(Error::IrregularWeight {
                weight: w.fund.clone(),
                root: a.clone(),
            }),
            None => Ok(()),
        }
    }

    /// `s_i(λ) = λ − ⟨λ, α_i^∨⟩ α_i` in fundamental coordinates.
    pub fn reflect(&self, i: usize, w: &Weight) -> Weight {
        let a = w.fund[i - 1];
        let fund: Vec<i64> = w.fund.iter().zip(&self.cartan[i - 1]).map(|(x, c)| x - a * c).collect();
        Weight::from_fundamental(&fund)
    }

    /// Number of positive roots pairing negatively with a regular weight.
    pub fn index_of_weight(&self, w: &Weight) -> Result<usize> {
        self.require_regular(w)?;
        Ok(self.positive_roots.iter().filter(|a| w.pair(a) < 0).count())
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversions(&self, w: &WeylElement) -> usize {
        self.positive_roots
            .iter()
            .filter(|a| {
                let img = w.apply_root(a);
                let neg: Vec<i64> = img.iter().map(|x| -x).collect();
                self.positive_roots.contains(&neg)
            })
            .count()
    }

    /// Reflects by the lowest-index simple root with negative coordinate
    /// until dominant. Returns `w` with `wλ` dominant.
    pub fn to_dominant(&self, w: &Weight) -> Result<(WeylElement, Weight)> {
        self.require_regular(w)?;
        let mut cur = w.clone();
        let mut applied = Vec::new();
        while let Some(i) = cur.fund.iter().position(|&a| a < 0) {
            cur = self.reflect(i + 1, &cur);
            applied.push(i + 1);
        }
        applied.reverse();
        Ok((WeylElement::from_word(&applied, self.realization_dim()), cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_data() {
        let rs = RootSystem::a(2).unwrap();
        assert_eq!(rs.cartan, vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(rs.positive_roots.len(), 3);
        assert_eq!(rs.weyl_group().len(), 6);
        assert_eq!(rs.positive_root_sum(), rs.rho().scale(2));
        assert_eq!(RootSystem::a(3).unwrap().weyl_group().len(), 24);
        assert_eq!(RootSystem::a(4).unwrap().weyl_group().len(), 120);
        assert!(RootSystem::from_label("B2").is_err());
    }

    #[test]
    fn realization_round_trip() {
        let w = Weight::from_fundamental(&[2, 1]);
        assert_eq!(w.real, vec![3, 1, 0]);
        assert_eq!(Weight::from_realization(&[5, 3, 2]), w);
    }

    #[test]
    fn simple_reflections_in_fundamental_coordinates() {
        let rs = RootSystem::a(2).unwrap();
        let l = Weight::from_fundamental(&[3, -4]);
        assert_eq!(rs.reflect(2, &l).fund, vec![-1, 4]);
        assert_eq!(rs.reflect(1, &l).fund, vec![-3, -1]);
        // matrix route agrees
        for i in 1..=2 {
            assert_eq!(WeylElement::from_word(&[i], 3).apply(&l), rs.reflect(i, &l));
        }
    }

    #[test]
    fn index_examples() {
        let rs = RootSystem::a(2).unwrap();
        let pairings: Vec<i64> = rs.positive_roots.iter().map(|a| Weight::from_fundamental(&[2, -1]).pair(a)).collect();
        // roots ordered α₁, α₁+α₂, α₂
        assert_eq!(pairings, vec![2, 1, -1]);
        assert_eq!(rs.index_of_weight(&Weight::from_fundamental(&[2, -1])).unwrap(), 1);
        assert_eq!(rs.index_of_weight(&Weight::from_fundamental(&[1, 1])).unwrap(), 0);
        assert_eq!(rs.index_of_weight(&Weight::from_fundamental(&[-1, -1])).unwrap(), 3);
        let err = rs.index_of_weight(&Weight::from_fundamental(&[1, -1])).unwrap_err();
        assert_eq!(
            err,
            Error::IrregularWeight {
                weight: vec![1, -1],
                root: vec![1, 0, -1]
            }
        );
    }

    #[test]
    fn to_dominant_example() {
        let rs = RootSystem::a(2).unwrap();
        let (w, d) = rs.to_dominant(&Weight::from_fundamental(&[3, -4])).unwrap();
        assert_eq!(w.word, vec![1, 2]);
        assert_eq!(d.fund, vec![1, 3]);
        assert_eq!(w.apply(&Weight::from_fundamental(&[3, -4])), d);
        let (id, same) = rs.to_dominant(&Weight::from_fundamental(&[1, 2])).unwrap();
        assert!(id.word.is_empty());
        assert_eq!(same.fund, vec![1, 2]);
    }

    #[test]
    fn lengths_are_inversion_counts() {
        let rs = RootSystem::a(3).unwrap();
        for w in rs.weyl_group() {
            assert_eq!(rs.inversions(w), w.length());
            assert_eq!(&w.inverse().matrix * &w.matrix, DMatrix::identity(4, 4));
        }
    }
}
