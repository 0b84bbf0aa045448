//! Independent oracles: the closed forms for `A_n` and `D_n`,
//! the `A_n` cluster/Lusztig coordinate maps, and the classical flip.
//!
//! Nothing here calls into `repbuild`; the closed forms index variables as
//! `u_i^k` (letter `i`, `k`-th occurrence from the right) and silently drop
//! variables that do not exist.

use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::qtorus::{expand_brackets, BracketTerm, LambdaForm, QExponent, QOperator};
use crate::repbuild::Generators;
use crate::rootdata::{CartanDatum, Family};
use crate::words::{good_d_letters, standard_a_letters, BraidMove, MoveKind, ReducedWord};

/// Linear combinations of the word's variables, addressed by `(letter, k)`.
struct Vars<'a> {
    word: &'a ReducedWord,
}

impl Vars<'_> {
    fn pos(&self, letter: i64, k: i64) -> Option<usize> {
        if letter < 0 || letter > u8::MAX as i64 || k < 1 {
            return None;
        }
        let letter = letter as u8;
        self.word.datum().index_of(letter).ok()?;
        self.word.position_of(letter, k as usize)
    }

    fn add(&self, v: &mut [i64], letter: i64, k: i64, c: i64) {
        if let Some(p) = self.pos(letter, k) {
            v[p] += c;
        }
    }
}

fn sign(k: i64) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn require(datum: &CartanDatum, family: Family) -> Result<()> {
    if datum.family() != family {
        return Err(Error::UnsupportedType {
            family: datum.name(),
            rank: datum.rank(),
        });
    }
    Ok(())
}

/// `E_i, F_i, K_i` for `A_n` on `s_n ... s_1 s_n ... s_2 ... s_n`, written
/// from the closed-form sums. `K_i` carries `-2 lambda_i`, the sign that
/// makes `[E_i, F_i]` proportional to `K_i^{-1} - K_i`, and its sum runs to
/// `k = i + 1` so that `u_{i+1}^{i+1}` is included; stopping at `k = i`
/// breaks `K_i E_i = q^2 E_i K_i`.
pub fn closed_form_an(datum: &Arc<CartanDatum>, label: u8) -> Result<Generators> {
    require(datum, Family::A)?;
    let word = ReducedWord::longest(datum.clone(), standard_a_letters(datum.rank() as u8))?;
    let idx = datum.index_of(label)?;
    let n = datum.rank() as i64;
    let i = label as i64;
    let len = word.len();
    let x = Vars { word: &word };

    let mut e = Vec::new();
    for k in 1..=n - i + 1 {
        let mut w = vec![0; len];
        x.add(&mut w, i + k - 1, k, 1);
        x.add(&mut w, i + k, k, -1);
        let mut p = vec![0; len];
        for l in 1..=k {
            x.add(&mut p, i + l - 1, l - 1, 1);
            x.add(&mut p, i + l - 1, l, -1);
        }
        e.push(BracketTerm::new(w, LambdaForm::zero(), p));
    }

    let lam = LambdaForm::single(idx, Rational64::from_integer(-2));
    let mut f = Vec::new();
    for k in 1..=i {
        let mut w = vec![0; len];
        x.add(&mut w, i, k, 1);
        for l in k..=i {
            x.add(&mut w, i, l, -2);
            x.add(&mut w, i - 1, l, 1);
            x.add(&mut w, i + 1, l + 1, 1);
        }
        let mut p = vec![0; len];
        x.add(&mut p, i, k, 1);
        f.push(BracketTerm::new(w, lam.clone(), p));
    }

    let mut alpha = vec![0; len];
    for k in 1..=i + 1 {
        x.add(&mut alpha, i - 1, k, 1);
        x.add(&mut alpha, i + 1, k, 1);
        x.add(&mut alpha, i, k, -2);
    }
    let k = QExponent::from_parts(&alpha, &vec![0; len], lam)?;

    Ok(Generators {
        e: expand_brackets(&e)?,
        f: expand_brackets(&f)?,
        k: QOperator::monomial(k, Laurent::one()),
    })
}

/// `E_i` for `D_n` on the good word `012012 320123 43201234 ...`.
pub fn closed_form_dn(datum: &Arc<CartanDatum>, label: u8) -> Result<QOperator> {
    require(datum, Family::D)?;
    let n = datum.rank() as i64;
    let word = ReducedWord::longest(datum.clone(), good_d_letters(n as u8))?;
    datum.index_of(label)?;
    let len = word.len();
    let x = Vars { word: &word };
    let i = label as i64;
    let s1 = |k: i64| 2 * ((k + 1) / 2) - 1;
    let s2 = |k: i64| 2 * (k / 2);
    let parity = |k: i64| k.rem_euclid(2);

    let mut terms = Vec::new();
    if i <= 1 {
        let shift = |k: i64, upto: i64| {
            let mut p = vec![0; len];
            for l in 1..=s1(k) {
                x.add(&mut p, i, l, sign(l));
            }
            for l in 1..=s2(k) {
                x.add(&mut p, 1 - i, l, -sign(l));
            }
            for l in 1..=upto {
                x.add(&mut p, 2, l, -sign(l));
            }
            p
        };
        for k in 1..=n - 1 {
            let mut w = vec![0; len];
            x.add(&mut w, parity(k + i - 1), k, 1);
            x.add(&mut w, 2, 2 * k - 1, -1);
            terms.push(BracketTerm::new(w, LambdaForm::zero(), shift(k, 2 * k - 2)));
        }
        for k in 1..=n - 2 {
            let mut w = vec![0; len];
            x.add(&mut w, 2, 2 * k, 1);
            x.add(&mut w, parity(k + i), k, -1);
            terms.push(BracketTerm::new(w, LambdaForm::zero(), shift(k, 2 * k)));
        }
    } else {
        for k in 1..=2 * n - 2 * i - 1 {
            let mut w = vec![0; len];
            x.add(&mut w, i + 1, k, sign(k));
            x.add(&mut w, i, k, -sign(k));
            let mut p = vec![0; len];
            for l in 1..=s1(k) {
                x.add(&mut p, i, l, sign(l));
            }
            for l in 1..=s2(k) {
                x.add(&mut p, i + 1, l, -sign(l));
            }
            terms.push(BracketTerm::new(w, LambdaForm::zero(), p));
        }
    }
    expand_brackets(&terms)
}

/// Monomial maps between Lusztig data `x_i^k` and initial minors `X_{i,j}`
/// of `SL(n+1)` for the standard `A_n` word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterCoordinateMap {
    pub n: usize,
    /// `(i, k)` for each Lusztig coordinate `x_i^k`, `1 <= k <= i <= n`.
    pub lusztig: Vec<(usize, usize)>,
    /// `(i, j)` for each nontrivial minor `X_{i,j}`, `1 <= i < j <= n+1`.
    pub minors: Vec<(usize, usize)>,
    /// `X_r = prod_c x_c^{to_minors[r][c]}`.
    pub to_minors: Vec<Vec<i64>>,
    /// `x_r = prod_c X_c^{to_lusztig[r][c]}`.
    pub to_lusztig: Vec<Vec<i64>>,
}

impl ClusterCoordinateMap {
    fn lusztig_index(&self, i: usize, k: usize) -> Result<usize> {
        self.lusztig
            .iter()
            .position(|&c| c == (i, k))
            .ok_or_else(|| Error::OutOfRange(format!("x_{i}^{k} does not exist for n = {}", self.n)))
    }

    /// Row of `X_{i,j}`; trivial minors (`j = i`, `i = 0` or `j = 0`) give `None`.
    pub fn minor_index(&self, i: usize, j: usize) -> Result<Option<usize>> {
        if i == 0 || j == 0 || i == j {
            return Ok(None);
        }
        self.minors
            .iter()
            .position(|&c| c == (i, j))
            .map(Some)
            .ok_or_else(|| Error::OutOfRange(format!("X_{{{i},{j}}} is outside the triangle for n = {}", self.n)))
    }

    pub fn lusztig_to_minors(&self, x: &[Rational64]) -> Result<Vec<Rational64>> {
        eval_monomials(&self.to_minors, x)
    }

    pub fn minors_to_lusztig(&self, big: &[Rational64]) -> Result<Vec<Rational64>> {
        eval_monomials(&self.to_lusztig, big)
    }
}

fn eval_monomials(rows: &[Vec<i64>], vals: &[Rational64]) -> Result<Vec<Rational64>> {
    if vals.iter().any(|v| !v.is_positive()) {
        return Err(Error::OutOfRange("coordinates must be positive".into()));
    }
    Ok(rows
        .iter()
        .map(|r| {
            r.iter()
                .zip(vals)
                .fold(Rational64::one(), |acc, (&e, v)| acc * v.pow(e as i32))
        })
        .collect())
}

/// `X_{i,i+j} = prod_{m=1}^j prod_{l=1}^i x_{m+l-1}^l` and
/// `x_i^j = X_{j,i+1} X_{j-1,i-1} / (X_{j,i} X_{j-1,i})`, with
/// `X_{i,i} = X_{i,0} = X_{0,j} = 1`.
pub fn cluster_maps(n: usize) -> Result<ClusterCoordinateMap> {
    if n == 0 {
        return Err(Error::UnsupportedType {
            family: "A".into(),
            rank: 0,
        });
    }
    let lusztig: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=i).map(move |k| (i, k))).collect();
    let minors: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=n + 1 - i).map(move |j| (i, i + j))).collect();
    let mut map = ClusterCoordinateMap {
        n,
        lusztig,
        minors,
        to_minors: Vec::new(),
        to_lusztig: Vec::new(),
    };
    for &(i, ij) in &map.minors {
        let j = ij - i;
        let mut row = vec![0; map.lusztig.len()];
        for m in 1..=j {
            for l in 1..=i {
                row[map.lusztig_index(m + l - 1, l)?] += 1;
            }
        }
        map.to_minors.push(row);
    }
    for &(i, j) in &map.lusztig {
        let mut row = vec![0; map.minors.len()];
        for (a, b, c) in [(j, i + 1, 1), (j - 1, i - 1, 1), (j, i, -1), (j - 1, i, -1)] {
            if let Some(r) = map.minor_index(a, b)? {
                row[r] += c;
            }
        }
        map.to_lusztig.push(row);
    }
    Ok(map)
}

/// `x_i(a) x_j(b) x_i(c) = x_j(bc/(a+c)) x_i(a+c) x_j(ab/(a+c))`.
pub fn classical_flip(a: Rational64, b: Rational64, c: Rational64) -> Result<(Rational64, Rational64, Rational64)> {
    if !(a.is_positive() && b.is_positive() && c.is_positive()) {
        return Err(Error::OutOfRange(format!(
            "flip needs positive inputs, got ({a}, {b}, {c})"
        )));
    }
    let s = a + c;
    Ok((b * c / s, s, a * b / s))
}

/// Update Lusztig coordinates (left to right) along a move of the word.
pub fn classical_move(
    coords: &[Rational64],
    word: &ReducedWord,
    mv: BraidMove,
) -> Result<(Vec<Rational64>, ReducedWord)> {
    let next = word.apply_move(mv)?;
    let mut out = coords.to_vec();
    let p = mv.position;
    match mv.kind {
        MoveKind::Commutation => out.swap(p, p + 1),
        MoveKind::Braid => {
            let (a, b, c) = classical_flip(coords[p], coords[p + 1], coords[p + 2])?;
            out[p] = a;
            out[p + 1] = b;
            out[p + 2] = c;
        }
    }
    Ok((out, next))
}

pub fn classical_path(
    coords: &[Rational64],
    word: &ReducedWord,
    path: &[BraidMove],
) -> Result<(Vec<Rational64>, ReducedWord)> {
    let mut c = coords.to_vec();
    let mut w = word.clone();
    for &mv in path {
        (c, w) = classical_move(&c, &w, mv)?;
    }
    Ok((c, w))
}

/// `x_{i_1}(a_1) ... x_{i_m}(a_m)` in `SL(n+1)` for type `A_n`.
pub fn sl_product(word: &ReducedWord, coords: &[Rational64]) -> Result<Vec<Vec<Rational64>>> {
    require(word.datum(), Family::A)?;
    let size = word.datum().rank() + 1;
    let mut m: Vec<Vec<Rational64>> = (0..size)
        .map(|r| {
            (0..size)
                .map(|c| if r == c { Rational64::one() } else { Rational64::zero() })
                .collect()
        })
        .collect();
    for (&l, &a) in word.letters().iter().zip(coords) {
        // right multiplication by 1 + a E_{l, l+1} adds a * column l to column l+1
        let (c0, c1) = (l as usize - 1, l as usize);
        for row in m.iter_mut() {
            let add = row[c0] * a;
            row[c1] += add;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::build_cartan;
    use crate::words::braid_path;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn a3_k_needs_last_occurrence() {
        let d = Arc::new(build_cartan(Family::A, 3).unwrap());
        let g1 = closed_form_an(&d, 1).unwrap();
        let e1 = &g1.e;
        let commutes = |k: &QOperator| k.mul(e1).unwrap() == e1.mul(k).unwrap().scale(&Laurent::q_pow(2));
        assert!(commutes(&g1.k));
        // drop u_2^2 from K_1
        let w = ReducedWord::longest(d.clone(), standard_a_letters(3)).unwrap();
        let p = w.position_of(2, 2).unwrap();
        let truncated =
            g1.k.map_exponents(|e| {
                let mut a = e.alpha().to_vec();
                a[p] = 0;
                QExponent::from_parts(
                    &a.iter().map(|&x| x as i64).collect::<Vec<_>>(),
                    &vec![0; a.len()],
                    e.ell().clone(),
                )
            })
            .unwrap();
        assert!(!commutes(&truncated));
    }

    #[test]
    fn flip_values() {
        assert_eq!(
            classical_flip(r(1, 1), r(1, 1), r(1, 1)).unwrap(),
            (r(1, 2), r(2, 1), r(1, 2))
        );
        let (a, b, c) = classical_flip(r(2, 3), r(5, 7), r(1, 4)).unwrap();
        assert_eq!(classical_flip(a, b, c).unwrap(), (r(2, 3), r(5, 7), r(1, 4)));
        assert!(classical_flip(r(0, 1), r(1, 1), r(1, 1)).is_err());
    }

    #[test]
    fn cluster_small() {
        let m = cluster_maps(2).unwrap();
        // X_{1,2} = x_1^1
        let row = &m.to_minors[m.minor_index(1, 2).unwrap().unwrap()];
        let x11 = m.lusztig_index(1, 1).unwrap();
        assert_eq!(
            row.iter().enumerate().filter(|(_, &e)| e != 0).collect::<Vec<_>>(),
            vec![(x11, &1)]
        );
        assert!(m.minor_index(2, 4).is_err());
        assert_eq!(m.minor_index(2, 2).unwrap(), None);
    }

    #[test]
    fn sl_product_a1() {
        let d = Arc::new(build_cartan(Family::A, 1).unwrap());
        let w = ReducedWord::longest(d, vec![1]).unwrap();
        let m = sl_product(&w, &[r(3, 1)]).unwrap();
        assert_eq!(m[0][1], r(3, 1));
    }

    #[test]
    fn flip_matches_matrices() {
        let d = Arc::new(build_cartan(Family::A, 2).unwrap());
        let a = ReducedWord::longest(d.clone(), vec![1, 2, 1]).unwrap();
        let b = ReducedWord::longest(d, vec![2, 1, 2]).unwrap();
        let x = vec![r(1, 2), r(3, 1), r(2, 5)];
        let (y, w) = classical_path(&x, &a, &braid_path(&a, &b).unwrap()).unwrap();
        assert_eq!(w, b);
        assert_eq!(sl_product(&a, &x).unwrap(), sl_product(&b, &y).unwrap());
    }
}
