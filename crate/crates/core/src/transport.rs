//! Transformation of operators under a change of reduced word.
//!
//! A commutation move just swaps two positions. A braid move at `(u, v, w)`
//! conjugates by `g_b(Y) g_b^*(Z)` and relabels by the matrix `T`, where
//! `Y = e^{pi b(2p_w - 2p_u + u - v + w)}` and `Z = e^{pi b(2p_w - 2p_u - u + v - w)}`
//! commute with each other. Only the algebraic shadow of the conjugation is
//! used: from `g(x)/g(q^2 x) = 1 + q x`, conjugating a monomial `X` with
//! `s(Z, X) = 2k` multiplies it on the right by `prod_{j<=k} (1 + q^{2j-1} Z)`,
//! and `s = -2k` divides by `prod_{j<=k} (1 + q^{1-2j} Z)`. The outer factor
//! `Y` acts the other way round. The result is a polynomial only after
//! summing over all monomials, so denominators are cleared jointly and
//! then divided out exactly.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::qtorus::{commutation_exponent, OperatorBuilder, QExponent, QOperator};
use crate::words::{BraidMove, MoveKind, ReducedWord};

/// The three positions touched by a braid move and its two conjugating monomials.
#[derive(Debug, Clone)]
pub struct MoveFrame {
    pub position: usize,
    pub y: QExponent,
    pub z: QExponent,
}

impl MoveFrame {
    pub fn new(n: usize, position: usize) -> Result<Self> {
        if position + 3 > n {
            return Err(Error::OutOfRange(format!(
                "braid frame at {position} in a word of length {n}"
            )));
        }
        let mut y = QExponent::zero(n);
        let mut z = QExponent::zero(n);
        for (k, (a, g)) in [(1, -1), (-1, 0), (1, 1)].into_iter().enumerate() {
            y.set_alpha(position + k, a)?;
            y.set_gamma(position + k, g)?;
            z.set_alpha(position + k, -a)?;
            z.set_gamma(position + k, g)?;
        }
        Ok(MoveFrame { position, y, z })
    }

    /// Relabel an exponent: `alpha -> T^t alpha`, `gamma -> T^{-1} gamma`.
    pub fn relabel(&self, e: &QExponent) -> Result<QExponent> {
        let p = self.position;
        let (au, av, aw) = (e.alpha_at(p), e.alpha_at(p + 1), e.alpha_at(p + 2));
        let (gu, gv, gw) = (e.gamma_at(p), e.gamma_at(p + 1), e.gamma_at(p + 2));
        let mut out = e.clone();
        out.set_alpha(p, -au + av + aw)?;
        out.set_alpha(p + 1, au)?;
        out.set_alpha(p + 2, av)?;
        out.set_gamma(p, gw)?;
        out.set_gamma(p + 1, gu + gw)?;
        out.set_gamma(p + 2, gv - gw)?;
        Ok(out)
    }
}

/// `1 + q^c x`, recorded by the variable (`false` = Y, `true` = Z) and `c`.
type Factor = (bool, i32);

/// Factors produced by conjugating against `X` with pairing `s`:
/// `(numerator, denominator)` lists.
pub fn conjugation_factor(s: i64, inner: bool) -> Result<(Vec<i32>, Vec<i32>)> {
    if s % 2 != 0 {
        return Err(Error::OddExponent(s));
    }
    let k = (s / 2).unsigned_abs() as i32;
    let raising: Vec<i32> = (1..=k).map(|j| 2 * j - 1).collect();
    let lowering: Vec<i32> = (1..=k).map(|j| 1 - 2 * j).collect();
    Ok(match (s > 0, inner) {
        _ if s == 0 => (vec![], vec![]),
        (true, true) => (raising, vec![]),
        (false, true) => (vec![], lowering),
        (true, false) => (vec![], raising),
        (false, false) => (lowering, vec![]),
    })
}

/// Running statistics of a transport.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TransportStats {
    /// Largest `|s|` met against `Y` or `Z`.
    pub max_pairing: i64,
    /// Largest number of monomials in an intermediate operator.
    pub max_terms: usize,
}

impl TransportStats {
    fn absorb(&mut self, other: TransportStats) {
        self.max_pairing = self.max_pairing.max(other.max_pairing);
        self.max_terms = self.max_terms.max(other.max_terms);
    }
}

/// `x * prod (1 + q^c v)` expanded, with `v` the monomial of each factor.
fn multiply_factors(x: &QOperator, factors: &[Factor], frame: &MoveFrame) -> Result<QOperator> {
    let mut cur = x.clone();
    for &(is_z, c) in factors {
        let var = if is_z { &frame.z } else { &frame.y };
        let step = QOperator::from_terms([
            (QExponent::zero(var.positions()), Laurent::one()),
            (var.clone(), Laurent::q_pow(c)),
        ]);
        cur = cur.mul(&step)?;
    }
    Ok(cur)
}

/// Grading by the `p_w` coefficient; `Y` and `Z` both raise it by one.
fn level(e: &QExponent, frame: &MoveFrame) -> i64 {
    e.gamma_at(frame.position + 2)
}

/// Exact right division of `n` by `1 + q^c v`.
fn divide_factor(n: &QOperator, factor: Factor, frame: &MoveFrame) -> Result<QOperator> {
    let (is_z, c) = factor;
    let var = if is_z { &frame.z } else { &frame.y };
    let Some(top) = n.iter().map(|(e, _)| level(e, frame)).max() else {
        return Ok(QOperator::zero());
    };
    let mut rem: FxHashMap<QExponent, Laurent> = n.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
    let mut quot = OperatorBuilder::new();
    let coeff = Laurent::q_pow(c);
    while !rem.is_empty() {
        let low = rem.keys().map(|e| level(e, frame)).min().unwrap();
        if low >= top {
            let (e, _) = rem.iter().next().unwrap();
            return Err(Error::NonPolynomial(format!(
                "{} monomials left over dividing by 1 + q^{c} {}, e.g. {e}",
                rem.len(),
                if is_z { "Z" } else { "Y" }
            )));
        }
        let layer: Vec<(QExponent, Laurent)> = rem
            .iter()
            .filter(|(e, _)| level(e, frame) == low)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        for (e, t) in layer {
            rem.remove(&e);
            let s = commutation_exponent(&e, var);
            let shifted = e.checked_add(var)?;
            let sub = (&t * &coeff).shift(s as i32);
            let entry = rem.entry(shifted).or_insert_with(Laurent::zero);
            *entry = &*entry - &sub;
            if entry.is_zero() {
                let key = e.checked_add(var)?;
                rem.remove(&key);
            }
            quot.add(e, &t);
        }
    }
    Ok(quot.finish())
}

/// `Phi X Phi^{-1}` for the braid move at `position`.
pub fn braid_conjugate(op: &QOperator, position: usize) -> Result<QOperator> {
    braid_conjugate_with_stats(op, position).map(|(o, _)| o)
}

pub fn braid_conjugate_with_stats(op: &QOperator, position: usize) -> Result<(QOperator, TransportStats)> {
    let Some(n) = op.positions() else {
        return Ok((QOperator::zero(), TransportStats::default()));
    };
    let frame = MoveFrame::new(n, position)?;
    let mut stats = TransportStats::default();
    let mut plain = OperatorBuilder::new();
    // Terms with a denominator, grouped by it.
    let mut fractional: Vec<(QOperator, Vec<Factor>, Vec<Factor>)> = Vec::new();
    for (e, c) in op.iter() {
        let sz = commutation_exponent(&frame.z, e);
        let sy = commutation_exponent(&frame.y, e);
        stats.max_pairing = stats.max_pairing.max(sz.abs()).max(sy.abs());
        let (zn, zd) = conjugation_factor(sz, true)?;
        let (yn, yd) = conjugation_factor(sy, false)?;
        let num: Vec<Factor> = yn
            .iter()
            .map(|&c| (false, c))
            .chain(zn.iter().map(|&c| (true, c)))
            .collect();
        let den: Vec<Factor> = yd
            .iter()
            .map(|&c| (false, c))
            .chain(zd.iter().map(|&c| (true, c)))
            .collect();
        let x = QOperator::monomial(e.clone(), c.clone());
        if den.is_empty() {
            plain.add_operator(&multiply_factors(&x, &num, &frame)?, &Laurent::one());
        } else {
            fractional.push((x, num, den));
        }
    }
    if !fractional.is_empty() {
        // Common denominator: every distinct factor at its largest multiplicity.
        let mut common: Vec<Factor> = Vec::new();
        for (_, _, den) in &fractional {
            let mut left = common.clone();
            for f in den {
                if let Some(i) = left.iter().position(|g| g == f) {
                    left.swap_remove(i);
                } else {
                    common.push(*f);
                }
            }
        }
        let mut cleared = OperatorBuilder::new();
        for (x, num, den) in &fractional {
            let mut extra = common.clone();
            for f in den {
                let i = extra
                    .iter()
                    .position(|g| g == f)
                    .expect("denominator divides the common one");
                extra.swap_remove(i);
            }
            let all: Vec<Factor> = num.iter().chain(extra.iter()).copied().collect();
            cleared.add_operator(&multiply_factors(x, &all, &frame)?, &Laurent::one());
        }
        let mut cur = cleared.finish();
        stats.max_terms = stats.max_terms.max(cur.len());
        for f in common {
            cur = divide_factor(&cur, f, &frame)?;
        }
        plain.add_operator(&cur, &Laurent::one());
    }
    let conj = plain.finish();
    stats.max_terms = stats.max_terms.max(conj.len());
    let out = conj.map_exponents(|e| frame.relabel(e))?;
    Ok((out, stats))
}

/// Swap positions `position` and `position + 1`.
pub fn commutation_move(op: &QOperator, position: usize) -> Result<QOperator> {
    op.map_exponents(|e| {
        let mut out = e.clone();
        out.set_alpha(position, e.alpha_at(position + 1))?;
        out.set_alpha(position + 1, e.alpha_at(position))?;
        out.set_gamma(position, e.gamma_at(position + 1))?;
        out.set_gamma(position + 1, e.gamma_at(position))?;
        Ok(out)
    })
}

/// Apply one move to an operator living on `word`; returns the new word too.
pub fn apply_move(
    op: &QOperator,
    word: &ReducedWord,
    mv: BraidMove,
) -> Result<(QOperator, ReducedWord, TransportStats)> {
    let next = word.apply_move(mv)?;
    let (out, stats) = match mv.kind {
        MoveKind::Commutation => (commutation_move(op, mv.position)?, TransportStats::default()),
        MoveKind::Braid => braid_conjugate_with_stats(op, mv.position)?,
    };
    Ok((out, next, stats))
}

/// Fold the moves of `path` over `op`, starting from `word`.
pub fn transport(op: &QOperator, word: &ReducedWord, path: &[BraidMove]) -> Result<QOperator> {
    transport_with_stats(op, word, path, |_, _, _| Ok(())).map(|(o, _)| o)
}

/// Like [`transport`], calling `trace(step, word, op)` after every move.
pub fn transport_with_stats(
    op: &QOperator,
    word: &ReducedWord,
    path: &[BraidMove],
    mut trace: impl FnMut(usize, &ReducedWord, &QOperator) -> Result<()>,
) -> Result<(QOperator, TransportStats)> {
    let mut cur = op.clone();
    let mut w = word.clone();
    let mut stats = TransportStats::default();
    for (step, &mv) in path.iter().enumerate() {
        let (next, nw, s) = apply_move(&cur, &w, mv)?;
        stats.absorb(s);
        cur = next;
        w = nw;
        trace(step, &w, &cur)?;
    }
    Ok((cur, stats))
}

/// Transport several operators along the same path in parallel.
pub fn transport_all(ops: &[QOperator], word: &ReducedWord, path: &[BraidMove]) -> Result<Vec<QOperator>> {
    ops.par_iter().map(|op| transport(op, word, path)).collect()
}

/// Reverse a path: moves are involutions, so only the order changes.
pub fn reverse_path(path: &[BraidMove]) -> Vec<BraidMove> {
    path.iter().rev().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtorus::{expand_bracket, expand_brackets, rebracket, BracketTerm, LambdaForm};

    fn bracket(weight: &[i64], shift: &[i64]) -> BracketTerm {
        BracketTerm::new(weight.to_vec(), LambdaForm::zero(), shift.to_vec())
    }

    #[test]
    fn relabel_is_symplectic() {
        let frame = MoveFrame::new(3, 0).unwrap();
        let basis: Vec<QExponent> = (0..6)
            .map(|k| {
                let mut a = [0i64; 3];
                let mut g = [0i64; 3];
                if k < 3 {
                    a[k] = 1
                } else {
                    g[k - 3] = 1
                }
                QExponent::from_parts(&a, &g, LambdaForm::zero()).unwrap()
            })
            .collect();
        for x in &basis {
            for y in &basis {
                let (tx, ty) = (frame.relabel(x).unwrap(), frame.relabel(y).unwrap());
                assert_eq!(commutation_exponent(&tx, &ty), commutation_exponent(x, y));
            }
        }
        assert_eq!(commutation_exponent(&frame.y, &frame.z), 0);
    }

    #[test]
    fn factor_orientation() {
        assert_eq!(conjugation_factor(2, true).unwrap(), (vec![1], vec![]));
        assert_eq!(conjugation_factor(-4, true).unwrap(), (vec![], vec![-1, -3]));
        assert_eq!(conjugation_factor(4, false).unwrap(), (vec![], vec![1, 3]));
        assert_eq!(conjugation_factor(0, false).unwrap(), (vec![], vec![]));
        assert!(matches!(conjugation_factor(1, true), Err(Error::OddExponent(1))));
    }

    #[test]
    fn simple_rule() {
        // [w]e(-p_w) -> [u]e(-p_u - p_v + p_w) + [v - w]e(-p_v)
        let e = expand_bracket(&bracket(&[0, 0, 1], &[0, 0, -1])).unwrap();
        let out = braid_conjugate(&e, 0).unwrap();
        let expected =
            expand_brackets(&[bracket(&[1, 0, 0], &[-1, -1, 1]), bracket(&[0, 1, -1], &[0, -1, 0])]).unwrap();
        assert_eq!(out, expected);
        assert_eq!(braid_conjugate(&out, 0).unwrap(), e);
    }

    #[test]
    fn quadratic_rule() {
        // [w - u]e(p_v - p_w) -> [v - 2w]e(p_u - p_v) + [2]_q [u - w]e(p_w - p_v) + [2u - v]e(2p_w - p_u - p_v).
        // The first shift is forced: conjugation only adds multiples of
        // (-1, 0, 1) to the momentum before relabeling.
        let e = expand_bracket(&bracket(&[-1, 0, 1], &[0, 1, -1])).unwrap();
        let out = braid_conjugate(&e, 0).unwrap();
        let expected = expand_brackets(&[
            bracket(&[0, 1, -2], &[1, -1, 0]),
            bracket(&[1, 0, -1], &[0, -1, 1]).with_scalar(Laurent::q_int(2)),
            bracket(&[2, -1, 0], &[-1, -1, 2]),
        ])
        .unwrap();
        assert_eq!(out, expected);
        assert_eq!(rebracket(&out).unwrap().len(), 3);
        assert_eq!(braid_conjugate(&out, 0).unwrap(), e);
    }

    #[test]
    fn frame_away_from_support() {
        let e = expand_bracket(&bracket(&[0, 0, 0, 1], &[0, 0, 0, -1])).unwrap();
        assert_eq!(braid_conjugate(&e, 0).unwrap(), e);
        assert_eq!(commutation_move(&commutation_move(&e, 2).unwrap(), 2).unwrap(), e);
    }

    #[test]
    fn odd_pairing_is_rejected() {
        let e = QOperator::monomial(
            QExponent::from_parts(&[0, 0, 1], &[0, 0, 0], LambdaForm::zero()).unwrap(),
            Laurent::one(),
        );
        assert!(matches!(braid_conjugate(&e, 0), Err(Error::OddExponent(_))));
    }
}
