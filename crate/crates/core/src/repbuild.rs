//! Generator actions built from a reduced word.
//!
//! `F_i` and `K_i` have closed expressions on any word. `E_i` is simple only
//! when the word ends in `i`; on other words it is obtained by transporting
//! that simple form along a path of moves.

use std::sync::Arc;

use num_rational::Rational64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::qtorus::{expand_bracket, expand_brackets, rebracket, BracketTerm, LambdaForm, QExponent, QOperator};
use crate::rootdata::CartanDatum;
use crate::rootdata::Family;
use crate::transport::{reverse_path, transport, transport_with_stats};
use crate::words::{bad_word, BraidMove, PrefixSpelling, ReducedWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaMode {
    /// `lambda_i` kept as formal central symbols.
    Formal,
    /// After the shifts that make every `K_i` free of `lambda`.
    Normalized,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generators {
    pub e: QOperator,
    pub f: QOperator,
    pub k: QOperator,
}

/// Rescaled generator actions on one reduced word, indexed by dense node index.
#[derive(Debug, Clone)]
pub struct Representation {
    pub datum: Arc<CartanDatum>,
    pub word: ReducedWord,
    pub lambda_mode: LambdaMode,
    pub generators: Vec<Generators>,
}

impl Representation {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn e(&self, label: u8) -> &QOperator {
        &self.generators[self.datum.index_of(label).unwrap()].e
    }

    pub fn f(&self, label: u8) -> &QOperator {
        &self.generators[self.datum.index_of(label).unwrap()].f
    }

    pub fn k(&self, label: u8) -> &QOperator {
        &self.generators[self.datum.index_of(label).unwrap()].k
    }

    /// Every operator of the representation, as (name, operator).
    pub fn named_operators(&self) -> Vec<(String, &QOperator)> {
        let mut out = Vec::new();
        for (idx, g) in self.generators.iter().enumerate() {
            let l = self.datum.label(idx);
            out.push((format!("E{l}"), &g.e));
            out.push((format!("F{l}"), &g.f));
            out.push((format!("K{l}"), &g.k));
        }
        out
    }

    /// Apply a map to every operator.
    pub fn map(&self, f: impl Fn(&QOperator) -> Result<QOperator> + Sync) -> Result<Representation> {
        let generators = self
            .generators
            .par_iter()
            .map(|g| {
                Ok(Generators {
                    e: f(&g.e)?,
                    f: f(&g.f)?,
                    k: f(&g.k)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Representation {
            generators,
            ..self.clone()
        })
    }
}

fn unit(n: usize, pos: usize, c: i64) -> Vec<i64> {
    let mut v = vec![0; n];
    v[pos] = c;
    v
}

/// `E_i = [u_i^1] e(-p_i^1)` on a word ending in `i`.
pub fn build_e_rightmost(word: &ReducedWord, label: u8) -> Result<QOperator> {
    let n = word.len();
    if word.letters().last() != Some(&label) {
        return Err(Error::WrongLastLetter {
            word: word.letters().to_vec(),
            letter: label,
        });
    }
    expand_bracket(&BracketTerm::new(
        unit(n, n - 1, 1),
        LambdaForm::zero(),
        unit(n, n - 1, -1),
    ))
}

/// Bracket terms of `F_i`:
/// `sum_k [u_i^k - sum_{l>=k} (2u_i^l - sum u_j^{l,m}) - 2 lambda_i] e(p_i^k)`,
/// where the `u_j^{l,m}` are adjacent letters strictly between the
/// `(l+1)`-th and `l`-th occurrence of `i` (from the right); for the last
/// occurrence the segment runs to the left end of the word.
pub fn f_brackets(word: &ReducedWord, label: u8) -> Result<Vec<BracketTerm>> {
    let datum = word.datum();
    let idx = datum.index_of(label)?;
    let letters = word.letters();
    let n = letters.len();
    let occ: Vec<usize> = (1..).map_while(|k| word.position_of(label, k)).collect();
    let count = occ.len();
    // segment_sum[l] = sum over adjacent letters between occurrence l+2 and l+1 (0-based l)
    let mut segment: Vec<Vec<i64>> = Vec::with_capacity(count);
    for l in 0..count {
        let right = occ[l];
        let left = if l + 1 < count { occ[l + 1] as isize } else { -1 };
        let mut s = vec![0i64; n];
        for p in (left + 1) as usize..right {
            if datum.adjacent(letters[p], label) {
                s[p] += 1;
            }
        }
        segment.push(s);
    }
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let mut w = unit(n, occ[k], 1);
        for l in k..count {
            w[occ[l]] -= 2;
            for (x, s) in w.iter_mut().zip(&segment[l]) {
                *x += s;
            }
        }
        out.push(BracketTerm::new(
            w,
            LambdaForm::single(idx, Rational64::from_integer(-2)),
            unit(n, occ[k], 1),
        ));
    }
    Ok(out)
}

pub fn build_f(word: &ReducedWord, label: u8) -> Result<QOperator> {
    expand_brackets(&f_brackets(word, label)?)
}

/// `K_i = e^{-pi b (sum_k a_{i, r(k)} u_k + 2 lambda_i)}`.
pub fn build_k(word: &ReducedWord, label: u8) -> Result<QOperator> {
    let datum = word.datum();
    let idx = datum.index_of(label)?;
    let alpha: Vec<i64> = word.letters().iter().map(|&r| -datum.a(label, r)).collect();
    let gamma = vec![0; alpha.len()];
    let e = QExponent::from_parts(&alpha, &gamma, LambdaForm::single(idx, Rational64::from_integer(-2)))?;
    Ok(QOperator::monomial(e, Laurent::one()))
}

/// `E_i` on an arbitrary word: built on the word obtained by moving `i` to
/// the end, then transported back.
pub fn build_e(word: &ReducedWord, label: u8) -> Result<QOperator> {
    if word.letters().last() == Some(&label) {
        return build_e_rightmost(word, label);
    }
    let (path, ending) = word.move_to_end(label)?;
    let e = build_e_rightmost(&ending, label)?;
    transport(&e, &ending, &reverse_path(&path))
}

/// Full representation with formal `lambda`.
pub fn build_rep(datum: &Arc<CartanDatum>, word: &ReducedWord) -> Result<Representation> {
    if word.len() != datum.positive_root_count() {
        return Err(Error::NotLongest {
            expected: datum.positive_root_count(),
            found: word.len(),
        });
    }
    let generators = datum
        .labels()
        .par_iter()
        .map(|&l| {
            Ok(Generators {
                e: build_e(word, l)?,
                f: build_f(word, l)?,
                k: build_k(word, l)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Representation {
        datum: datum.clone(),
        word: word.clone(),
        lambda_mode: LambdaMode::Formal,
        generators,
    })
}

/// Per-generator bracket counts `(E, F)` of a representation.
pub fn term_counts(rep: &Representation) -> Result<Vec<(usize, usize)>> {
    rep.generators
        .iter()
        .map(|g| Ok((rebracket(&g.e)?.len(), rebracket(&g.f)?.len())))
        .collect()
}

/// Default cap on intermediate monomial counts in the bad-word experiment.
pub const DEFAULT_MAX_TERMS: usize = 5_000_000;

/// One transport step of the bad-word experiment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLine {
    pub step: usize,
    pub mv: BraidMove,
    pub word: String,
    pub monomials: usize,
}

#[derive(Debug, Clone)]
pub struct BadWordRun {
    pub word: ReducedWord,
    /// `E_2` for `D_n`, `E_3` for `E_n`: the node joined to 0.
    pub label: u8,
    /// Bracket count of the final operator; `None` if the guard tripped.
    pub count: Option<usize>,
    pub trace: Vec<TraceLine>,
    pub aborted: Option<String>,
}

/// Build `E` at the node joined to 0 on the word `w' w_A s_0`, recording
/// the monomial count after every move and aborting once it exceeds
/// `max_terms`.
pub fn bad_word_experiment(datum: &Arc<CartanDatum>, spelling: PrefixSpelling, max_terms: usize) -> Result<BadWordRun> {
    let label = match datum.family() {
        Family::D => 2,
        Family::E => 3,
        Family::A => {
            return Err(Error::UnsupportedType {
                family: datum.name(),
                rank: datum.rank(),
            })
        }
    };
    let word = bad_word(datum, spelling)?;
    let (path, ending) = word.move_to_end(label)?;
    let back = reverse_path(&path);
    let start = build_e_rightmost(&ending, label)?;
    let mut trace = Vec::with_capacity(back.len());
    let outcome = transport_with_stats(&start, &ending, &back, |step, w, op| {
        trace.push(TraceLine {
            step,
            mv: back[step],
            word: w.to_string(),
            monomials: op.len(),
        });
        if op.len() > max_terms {
            return Err(Error::TermLimit {
                limit: max_terms,
                found: op.len(),
            });
        }
        Ok(())
    });
    let (count, aborted) = match outcome {
        Ok((op, _)) => (Some(rebracket(&op)?.len()), None),
        Err(e @ Error::TermLimit { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(BadWordRun {
        word,
        label,
        count,
        trace,
        aborted,
    })
}

/// Classical reading of an operator: each bracket `[L]e(P)` becomes
/// `(1/2 + iP(u)) f(u - i beta)` with `P(u) = -L` and `beta = P`.
pub fn classical_render(op: &QOperator, word: &ReducedWord) -> Result<String> {
    let names = crate::format::variable_names(word);
    let terms = rebracket(op)?;
    let mut parts = Vec::with_capacity(terms.len());
    for t in &terms {
        let neg = BracketTerm {
            scalar: t.scalar.clone(),
            weight: t.weight.iter().map(|x| -x).collect(),
            lambda: t.lambda.neg(),
            shift: t.shift.clone(),
        };
        let weight = crate::format::linear_form(&neg.weight, &neg.lambda, &names, word.datum());
        let mut args = Vec::new();
        for (k, name) in names.iter().enumerate() {
            match t.shift[k] {
                0 => {}
                1 => args.push(format!("u{name} - i")),
                -1 => args.push(format!("u{name} + i")),
                b if b > 0 => args.push(format!("u{name} - {b}i")),
                b => args.push(format!("u{name} + {}i", -b)),
            }
        }
        let scalar = if t.scalar.is_one() {
            String::new()
        } else {
            format!("{} ", classical_scalar(&t.scalar))
        };
        parts.push(format!("{scalar}(1/2 + i({weight})) f({})", args.join(", ")));
    }
    Ok(parts.join(" + "))
}

/// `q -> 1` value of a scalar.
fn classical_scalar(c: &Laurent) -> i64 {
    c.terms().iter().map(|t| t.1).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{build_cartan, Family};
    use crate::words::good_word;

    fn word(f: Family, r: usize, letters: &[u8]) -> ReducedWord {
        let d = Arc::new(build_cartan(f, r).unwrap());
        ReducedWord::longest(d, letters.to_vec()).unwrap()
    }

    #[test]
    fn a1_generators() {
        let w = word(Family::A, 1, &[1]);
        assert_eq!(
            rebracket(&build_e(&w, 1).unwrap()).unwrap(),
            vec![BracketTerm::new(vec![1], LambdaForm::zero(), vec![-1])]
        );
        let lam = LambdaForm::single(0, (-2).into());
        assert_eq!(
            f_brackets(&w, 1).unwrap(),
            vec![BracketTerm::new(vec![-1], lam.clone(), vec![1])]
        );
        let k = build_k(&w, 1).unwrap();
        assert_eq!(
            k,
            QOperator::monomial(QExponent::from_parts(&[-2], &[0], lam).unwrap(), Laurent::one())
        );
    }

    #[test]
    fn a1_master_relation() {
        // [e, f] = (q - q^-1)(K^-1 - K)
        let w = word(Family::A, 1, &[1]);
        let rep = build_rep(w.datum(), &w).unwrap();
        let (e, f, k) = (rep.e(1), rep.f(1), rep.k(1));
        let lhs = e.commutator(f).unwrap();
        let rhs = k
            .monomial_inverse()
            .unwrap()
            .sub(k)
            .scale(&(Laurent::q_pow(1) - Laurent::q_pow(-1)));
        assert_eq!(lhs, rhs);
        // K e = q^2 e K
        assert_eq!(k.mul(e).unwrap(), e.mul(k).unwrap().scale(&Laurent::q_pow(2)));
    }

    #[test]
    fn rightmost_requires_last_letter() {
        let w = word(Family::A, 2, &[1, 2, 1]);
        assert!(build_e_rightmost(&w, 1).is_ok());
        assert!(matches!(build_e_rightmost(&w, 2), Err(Error::WrongLastLetter { .. })));
    }

    #[test]
    fn a2_term_counts() {
        let w = word(Family::A, 2, &[2, 1, 2]);
        let rep = build_rep(w.datum(), &w).unwrap();
        assert_eq!(term_counts(&rep).unwrap(), vec![(2, 1), (1, 2)]);
    }

    #[test]
    fn f_counts_are_occurrence_counts() {
        let d = Arc::new(build_cartan(Family::D, 5).unwrap());
        let w = good_word(&d).unwrap();
        for (idx, &l) in d.labels().iter().enumerate() {
            assert_eq!(f_brackets(&w, l).unwrap().len(), w.occurrence_counts()[idx]);
        }
    }

    #[test]
    fn bad_word_guard() {
        let d = Arc::new(build_cartan(Family::D, 5).unwrap());
        let run = bad_word_experiment(&d, PrefixSpelling::LargestDescent, DEFAULT_MAX_TERMS).unwrap();
        assert_eq!(run.label, 2);
        assert_eq!(run.count, Some(47));
        let capped = bad_word_experiment(&d, PrefixSpelling::LargestDescent, 10).unwrap();
        assert_eq!(capped.count, None);
        assert!(capped.aborted.is_some());
        assert!(capped.trace.last().unwrap().monomials > 10);
    }

    #[test]
    fn classical_rendering() {
        let w = word(Family::A, 1, &[1]);
        let e = build_e(&w, 1).unwrap();
        assert_eq!(classical_render(&e, &w).unwrap(), "(1/2 + i(-u1.1)) f(u1.1 + i)");
        assert_eq!(classical_render(&QOperator::zero(), &w).unwrap(), "");
        let f = build_f(&w, 1).unwrap();
        assert_eq!(classical_render(&f, &w).unwrap(), "(1/2 + i(u1.1 + 2L1)) f(u1.1 - i)");
    }
}
