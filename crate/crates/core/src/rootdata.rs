//! Simply-laced Cartan data.
//!
//! Node labels follow the usual pictures for these families: type `A_n` uses
//! `1..=n` along a chain, `D_n` uses the chain `1 - 2 - ... - (n-1)` with node
//! `0` hanging off node `2`, and `E_n` uses the chain `1 - ... - (n-1)` with
//! node `0` hanging off node `3`. Words are written in these labels.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::D => "D",
            Family::E => "E",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            other => Err(Error::UnsupportedType {
                family: other.to_string(),
                rank: 0,
            }),
        }
    }
}

/// Cartan matrix, Dynkin graph and bipartition of a simply-laced root system.
///
/// Internally nodes are addressed by a dense index `0..rank`; `labels[idx]`
/// gives the label used in words and in printed output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanDatum {
    family: Family,
    rank: usize,
    labels: Vec<u8>,
    index: [Option<usize>; 16],
    cartan: Vec<Vec<i64>>,
    bipartition: Vec<u8>,
}

impl CartanDatum {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let supported = match family {
            Family::A => (1..=15).contains(&rank),
            Family::D => (4..=15).contains(&rank),
            Family::E => (6..=8).contains(&rank),
        };
        if !supported {
            return Err(Error::UnsupportedType {
                family: family.to_string(),
                rank,
            });
        }
        let (labels, edges): (Vec<u8>, Vec<(u8, u8)>) = match family {
            Family::A => {
                let n = rank as u8;
                ((1..=n).collect(), (1..n).map(|i| (i, i + 1)).collect())
            }
            Family::D | Family::E => {
                let n = rank as u8;
                let hub = if family == Family::D { 2 } else { 3 };
                let mut edges: Vec<(u8, u8)> = (1..n - 1).map(|i| (i, i + 1)).collect();
                edges.push((0, hub));
                ((0..n).collect(), edges)
            }
        };
        let mut index = [None; 16];
        for (idx, &l) in labels.iter().enumerate() {
            index[l as usize] = Some(idx);
        }
        let mut cartan = vec![vec![0i64; rank]; rank];
        for (i, row) in cartan.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(a, b) in &edges {
            let (i, j) = (index[a as usize].unwrap(), index[b as usize].unwrap());
            cartan[i][j] = -1;
            cartan[j][i] = -1;
        }
        let mut datum = CartanDatum {
            family,
            rank,
            labels,
            index,
            cartan,
            bipartition: vec![0; rank],
        };
        datum.bipartition = datum.two_coloring(0);
        Ok(datum)
    }

    /// Proper 2-coloring of the Dynkin graph, with node index 0 (the smallest
    /// label) colored `first`.
    fn two_coloring(&self, first: u8) -> Vec<u8> {
        let mut color = vec![u8::MAX; self.rank];
        color[0] = first;
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            for j in self.neighbors(i) {
                if color[j] == u8::MAX {
                    color[j] = 1 - color[i];
                    stack.push(j);
                }
            }
        }
        color
    }

    /// The same datum with the opposite bipartition.
    pub fn with_flipped_bipartition(&self) -> Self {
        let mut d = self.clone();
        d.bipartition = self.two_coloring(1 - self.bipartition[0]);
        d
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn label(&self, idx: usize) -> u8 {
        self.labels[idx]
    }

    /// Dense index of a node label.
    pub fn index_of(&self, label: u8) -> Result<usize> {
        self.index
            .get(label as usize)
            .copied()
            .flatten()
            .ok_or(Error::InvalidNode(label))
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Cartan entry `a_{ij}` addressed by labels.
    pub fn a(&self, i: u8, j: u8) -> i64 {
        self.cartan[self.index[i as usize].unwrap()][self.index[j as usize].unwrap()]
    }

    pub fn adjacent(&self, i: u8, j: u8) -> bool {
        self.a(i, j) == -1
    }

    pub fn neighbors(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.rank).filter(move |&j| self.cartan[idx][j] == -1)
    }

    /// Weight `n_i` of the bipartition, addressed by label.
    pub fn parity(&self, label: u8) -> u8 {
        self.bipartition[self.index[label as usize].unwrap()]
    }

    pub fn bipartition(&self) -> &[u8] {
        &self.bipartition
    }

    /// Apply the simple reflection `s_i` (dense index) to a vector in the
    /// simple-root basis.
    pub fn reflect(&self, i: usize, v: &mut [i64]) {
        let pairing: i64 = (0..self.rank).map(|j| v[j] * self.cartan[j][i]).sum();
        v[i] -= pairing;
    }

    /// All positive roots, as coordinate vectors in the simple-root basis.
    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        let mut roots: Vec<Vec<i64>> = (0..self.rank)
            .map(|i| {
                let mut e = vec![0; self.rank];
                e[i] = 1;
                e
            })
            .collect();
        let mut seen: std::collections::HashSet<Vec<i64>> = roots.iter().cloned().collect();
        let mut head = 0;
        while head < roots.len() {
            let root = roots[head].clone();
            head += 1;
            for i in 0..self.rank {
                let mut image = root.clone();
                self.reflect(i, &mut image);
                if image.iter().all(|&c| c >= 0) && seen.insert(image.clone()) {
                    roots.push(image);
                }
            }
        }
        roots
    }

    /// `l(w_0)`, the number of positive roots.
    pub fn positive_root_count(&self) -> usize {
        self.positive_roots().len()
    }

    /// Columns `b^k` of the inverse Cartan matrix, so that `A b^k = e_k`.
    pub fn langlands_b_vectors(&self) -> Vec<Vec<Rational64>> {
        let r = self.rank;
        let mut m: Vec<Vec<Rational64>> = (0..r)
            .map(|i| {
                let mut row: Vec<Rational64> = self.cartan[i].iter().map(|&x| Rational64::from_integer(x)).collect();
                row.extend((0..r).map(|j| if i == j { Rational64::one() } else { Rational64::zero() }));
                row
            })
            .collect();
        for col in 0..r {
            let pivot = (col..r)
                .find(|&i| !m[i][col].is_zero())
                .expect("finite type Cartan matrices are invertible");
            m.swap(col, pivot);
            let p = m[col][col];
            for x in m[col].iter_mut() {
                *x /= p;
            }
            for i in 0..r {
                if i != col && !m[i][col].is_zero() {
                    let f = m[i][col];
                    let pivot_row = m[col].clone();
                    for (x, y) in m[i].iter_mut().zip(pivot_row) {
                        *x -= f * y;
                    }
                }
            }
        }
        (0..r).map(|k| (0..r).map(|i| m[i][r + k]).collect()).collect()
    }
}

pub fn build_cartan(family: Family, rank: usize) -> Result<CartanDatum> {
    CartanDatum::new(family, rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_matrix() {
        let d = build_cartan(Family::A, 2).unwrap();
        assert_eq!(d.cartan(), &[vec![2, -1], vec![-1, 2]]);
    }

    #[test]
    fn hub_nodes() {
        let e6 = build_cartan(Family::E, 6).unwrap();
        let n: Vec<u8> = e6.neighbors(e6.index_of(0).unwrap()).map(|j| e6.label(j)).collect();
        assert_eq!(n, vec![3]);
        let d4 = build_cartan(Family::D, 4).unwrap();
        let mut n: Vec<u8> = d4.neighbors(d4.index_of(2).unwrap()).map(|j| d4.label(j)).collect();
        n.sort();
        assert_eq!(n, vec![0, 1, 3]);
    }

    #[test]
    fn root_counts() {
        let cases = [
            (Family::A, 3, 6),
            (Family::A, 5, 15),
            (Family::D, 4, 12),
            (Family::D, 6, 30),
            (Family::E, 6, 36),
            (Family::E, 7, 63),
            (Family::E, 8, 120),
        ];
        for (f, r, n) in cases {
            assert_eq!(build_cartan(f, r).unwrap().positive_root_count(), n, "{f}{r}");
        }
    }

    #[test]
    fn unsupported() {
        assert!(build_cartan(Family::D, 3).is_err());
        assert!(build_cartan(Family::E, 9).is_err());
        assert!(build_cartan(Family::A, 0).is_err());
    }

    #[test]
    fn bipartition_is_proper() {
        for (f, r) in [(Family::A, 4), (Family::D, 5), (Family::E, 8)] {
            let d = build_cartan(f, r).unwrap();
            assert_eq!(d.bipartition()[0], 0);
            for i in 0..r {
                for j in d.neighbors(i) {
                    assert_eq!((d.bipartition()[i] as i32 - d.bipartition()[j] as i32).abs(), 1);
                }
            }
            let flipped = d.with_flipped_bipartition();
            assert!(d.bipartition().iter().zip(flipped.bipartition()).all(|(a, b)| a != b));
        }
    }

    #[test]
    fn b_vectors() {
        let a1 = build_cartan(Family::A, 1).unwrap();
        assert_eq!(a1.langlands_b_vectors(), vec![vec![Rational64::new(1, 2)]]);
        let a2 = build_cartan(Family::A, 2).unwrap();
        assert_eq!(
            a2.langlands_b_vectors()[0],
            vec![Rational64::new(2, 3), Rational64::new(1, 3)]
        );
        for (f, r) in [(Family::D, 5), (Family::E, 6), (Family::E, 8)] {
            let d = build_cartan(f, r).unwrap();
            for (k, b) in d.langlands_b_vectors().iter().enumerate() {
                for i in 0..r {
                    let s: Rational64 = (0..r).map(|j| b[j] * d.cartan()[i][j]).sum();
                    assert_eq!(s, if i == k { Rational64::one() } else { Rational64::zero() });
                }
            }
        }
    }
}
