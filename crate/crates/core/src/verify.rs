//! Relation suite and structural certificates.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::format::render_operator;
use crate::laurent::Laurent;
use crate::qtorus::{commutation_exponent, QOperator};
use crate::repbuild::{build_rep, Representation};
use crate::transport::transport;
use crate::words::{braid_path, ReducedWord};

/// Machine-readable outcome of a check.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    /// Number of individual identities or pairs examined.
    pub checked: usize,
    pub witnesses: Vec<Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Report {
    pub fn new(check: impl Into<String>, checked: usize, witnesses: Vec<Value>) -> Self {
        let status = if witnesses.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        Report {
            check: check.into(),
            status,
            checked,
            witnesses,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }
}

/// Residues longer than this are summarized by their size.
const RESIDUE_PREVIEW: usize = 400;

fn residue_witness(name: &str, residue: &QOperator, word: &ReducedWord) -> Value {
    let mut text = render_operator(residue, word);
    if text.len() > RESIDUE_PREVIEW {
        text.truncate(RESIDUE_PREVIEW);
        text.push_str(" ...");
    }
    json!({ "relation": name, "monomials": residue.len(), "residue": text })
}

/// Every defining relation as `(name, residue)`; a relation holds iff its
/// residue is zero. Generators are the rescaled `e_i, f_i` and `K_i`.
pub fn relation_residues(rep: &Representation) -> Result<Vec<(String, QOperator)>> {
    let d = &rep.datum;
    let r = rep.rank();
    let qq = Laurent::q_pow(1) - Laurent::q_pow(-1);
    let two = Laurent::q_int(2);
    let mut jobs: Vec<(usize, usize, u8)> = Vec::new();
    for i in 0..r {
        for j in 0..r {
            // 0: [e,f]; 1: K e; 2: K f; 3: K K; 4: e-e; 5: f-f
            for kind in 0..6 {
                if kind == 3 && j <= i {
                    continue;
                }
                if (kind == 4 || kind == 5) && i == j {
                    continue;
                }
                jobs.push((i, j, kind));
            }
        }
    }
    let out: Vec<Vec<(String, QOperator)>> = jobs
        .par_iter()
        .map(|&(i, j, kind)| -> Result<Vec<(String, QOperator)>> {
            let (li, lj) = (d.label(i), d.label(j));
            let (gi, gj) = (&rep.generators[i], &rep.generators[j]);
            let a = d.cartan()[i][j] as i32;
            Ok(match kind {
                0 => {
                    let lhs = gi.e.commutator(&gj.f)?;
                    if i == j {
                        let kinv = gi.k.monomial_inverse().expect("K is a unit monomial");
                        let rhs = kinv.sub(&gi.k).scale(&qq);
                        vec![(format!("[E{li},F{li}]"), lhs.sub(&rhs))]
                    } else {
                        vec![(format!("[E{li},F{lj}]"), lhs)]
                    }
                }
                1 => vec![(
                    format!("K{li}E{lj}"),
                    gi.k.mul(&gj.e)?.sub(&gj.e.mul(&gi.k)?.scale(&Laurent::q_pow(a))),
                )],
                2 => vec![(
                    format!("K{li}F{lj}"),
                    gi.k.mul(&gj.f)?.sub(&gj.f.mul(&gi.k)?.scale(&Laurent::q_pow(-a))),
                )],
                3 => vec![(format!("[K{li},K{lj}]"), gi.k.commutator(&gj.k)?)],
                _ => {
                    let (x, y, n) = if kind == 4 {
                        (&gi.e, &gj.e, "E")
                    } else {
                        (&gi.f, &gj.f, "F")
                    };
                    if a == 0 {
                        if i < j {
                            vec![(format!("[{n}{li},{n}{lj}]"), x.commutator(y)?)]
                        } else {
                            vec![]
                        }
                    } else {
                        // x^2 y - [2] x y x + y x^2
                        let xx = x.mul(x)?;
                        let xy = x.mul(y)?;
                        let res = xx.mul(y)?.sub(&xy.mul(x)?.scale(&two)).add(&y.mul(&xx)?);
                        vec![(format!("Serre({n}{li},{n}{lj})"), res)]
                    }
                }
            })
        })
        .collect::<Result<_>>()?;
    Ok(out.into_iter().flatten().collect())
}

pub fn check_relations(rep: &Representation) -> Result<Report> {
    let residues = relation_residues(rep)?;
    let witnesses = residues
        .iter()
        .filter(|(_, r)| !r.is_zero())
        .map(|(n, r)| residue_witness(n, r, &rep.word))
        .collect();
    Ok(Report::new(
        format!("relations {} on {}", rep.datum.name(), rep.word),
        residues.len(),
        witnesses,
    ))
}

/// Outcome of the q^2-chain search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainOutcome {
    /// Monomial indices in chain order.
    Ordered(Vec<usize>),
    /// No chain; the sorted multiset of pairwise exponents.
    Impossible(Vec<i64>),
}

/// Order the monomials of `op` so that every earlier one `q^2`-commutes with
/// every later one (`A_j A_k = q^2 A_k A_j`).
pub fn q2_chain_certificate(op: &QOperator) -> ChainOutcome {
    let exps: Vec<_> = op.iter().map(|(e, _)| e).collect();
    let n = exps.len();
    let s = |a: usize, b: usize| commutation_exponent(exps[a], exps[b]);
    // In a chain the j-th element has exactly n-1-j successors.
    let mut order: Vec<usize> = (0..n).collect();
    let wins: Vec<usize> = (0..n).map(|a| (0..n).filter(|&b| s(a, b) == 2).count()).collect();
    order.sort_by_key(|&a| std::cmp::Reverse(wins[a]));
    let ok = (0..n).all(|x| (x + 1..n).all(|y| s(order[x], order[y]) == 2));
    if ok {
        ChainOutcome::Ordered(order)
    } else {
        ChainOutcome::Impossible(pairwise_exponents(op))
    }
}

/// Sorted multiset of `s(m, m')` over unordered monomial pairs of `op`.
pub fn pairwise_exponents(op: &QOperator) -> Vec<i64> {
    let exps: Vec<_> = op.iter().map(|(e, _)| e).collect();
    let mut out = Vec::new();
    for a in 0..exps.len() {
        for b in a + 1..exps.len() {
            out.push(commutation_exponent(exps[a], exps[b]).abs());
        }
    }
    out.sort_unstable();
    out
}

/// Unit-coefficient and q^2-chain certificate over all generators.
pub fn positivity_shadow(rep: &Representation) -> Report {
    let mut witnesses = Vec::new();
    let mut checked = 0;
    for (name, op) in rep.named_operators() {
        checked += 1;
        for (e, c) in op.iter() {
            if c.as_unit_monomial().is_none() {
                witnesses.push(
                    json!({ "generator": name, "non_unit_coefficient": c.to_string(), "exponent": e.to_string() }),
                );
            }
        }
        if let ChainOutcome::Impossible(s) = q2_chain_certificate(op) {
            let mut distinct = s.clone();
            distinct.dedup();
            witnesses.push(json!({ "generator": name, "no_chain": true, "pair_exponents": distinct }));
        }
    }
    Report::new(
        format!("positivity shadow {} on {}", rep.datum.name(), rep.word),
        checked,
        witnesses,
    )
}

/// Record the pairwise-exponent multisets, failing only on odd exponents.
pub fn exponent_parity(rep: &Representation) -> Report {
    let mut witnesses = Vec::new();
    for (name, op) in rep.named_operators() {
        let s = pairwise_exponents(op);
        if let Some(odd) = s.iter().find(|x| *x % 2 != 0) {
            witnesses.push(json!({ "generator": name, "odd_exponent": odd }));
        }
    }
    Report::new(
        format!("pair exponent parity {}", rep.datum.name()),
        rep.rank() * 3,
        witnesses,
    )
}

pub fn transport_rep(
    rep: &Representation,
    to: &ReducedWord,
    path: &[crate::words::BraidMove],
) -> Result<Representation> {
    let mut out = rep.map(|op| transport(op, &rep.word, path))?;
    out.word = to.clone();
    Ok(out)
}

fn compare(label: &str, a: &Representation, b: &Representation, witnesses: &mut Vec<Value>, only_fk: bool) {
    for (idx, (x, y)) in a.generators.iter().zip(&b.generators).enumerate() {
        let l = a.datum.label(idx);
        let pairs = [("E", &x.e, &y.e), ("F", &x.f, &y.f), ("K", &x.k, &y.k)];
        for (n, p, q) in pairs {
            if only_fk && n == "E" {
                continue;
            }
            if p != q {
                witnesses.push(json!({
                    "comparison": label,
                    "generator": format!("{n}{l}"),
                    "left": render_operator(p, &a.word),
                    "right": render_operator(q, &b.word),
                }));
            }
        }
    }
}

/// Transport the representation on `a` to `b` along two paths (directly and
/// through `via`), compare both with each other and with the direct build
/// on `b`, and check that the loop `a -> via -> a` is the identity.
pub fn path_independence(a: &ReducedWord, b: &ReducedWord, via: &ReducedWord) -> Result<Report> {
    let datum = a.datum();
    let rep_a = build_rep(datum, a)?;
    let direct_b = build_rep(datum, b)?;
    let p1 = braid_path(a, b)?;
    let mut p2 = braid_path(a, via)?;
    p2.extend(braid_path(via, b)?);
    let t1 = transport_rep(&rep_a, b, &p1)?;
    let t2 = transport_rep(&rep_a, b, &p2)?;
    let mut witnesses = Vec::new();
    compare("two paths", &t1, &t2, &mut witnesses, false);
    compare("transport vs direct", &t1, &direct_b, &mut witnesses, false);
    let mut lp = braid_path(a, via)?;
    lp.extend(braid_path(via, a)?);
    let looped = transport_rep(&rep_a, a, &lp)?;
    compare("loop", &looped, &rep_a, &mut witnesses, false);
    Ok(Report::new(
        format!("path independence {a} -> {b} via {via}"),
        4 * 3 * rep_a.rank(),
        witnesses,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtorus::QExponent;
    use crate::rootdata::{build_cartan, Family};
    use crate::words::good_word;
    use std::sync::Arc;

    fn word(f: Family, r: usize, letters: &[u8]) -> ReducedWord {
        ReducedWord::longest(Arc::new(build_cartan(f, r).unwrap()), letters.to_vec()).unwrap()
    }

    #[test]
    fn a1_and_a2_relations() {
        for w in [
            word(Family::A, 1, &[1]),
            word(Family::A, 2, &[1, 2, 1]),
            word(Family::A, 2, &[2, 1, 2]),
        ] {
            let rep = build_rep(w.datum(), &w).unwrap();
            let report = check_relations(&rep).unwrap();
            assert!(report.passed(), "{:?}", report.witnesses);
        }
    }

    #[test]
    fn corruption_is_detected() {
        let w = word(Family::A, 2, &[2, 1, 2]);
        let mut rep = build_rep(w.datum(), &w).unwrap();
        let e = &rep.generators[0].e;
        // Perturb one exponent where E2 lives. Coefficient changes alone can survive the
        // Serre relations: they hold termwise for these q-commuting sums.
        let (ex, c) = e.iter().next().map(|(x, c)| (x.clone(), c.clone())).unwrap();
        let mut bent = ex.clone();
        bent.set_gamma(2, ex.gamma_at(2) + 1).unwrap();
        rep.generators[0].e = e
            .sub(&QOperator::monomial(ex, c.clone()))
            .add(&QOperator::monomial(bent, c));
        let report = check_relations(&rep).unwrap();
        assert!(!report.passed());
        assert!(report
            .witnesses
            .iter()
            .any(|w| w["relation"].as_str().unwrap().starts_with("Serre(E")));
    }

    #[test]
    fn chains() {
        let w = word(Family::A, 1, &[1]);
        let rep = build_rep(w.datum(), &w).unwrap();
        assert!(matches!(q2_chain_certificate(rep.e(1)), ChainOutcome::Ordered(_)));
        assert!(matches!(q2_chain_certificate(rep.k(1)), ChainOutcome::Ordered(o) if o.len() == 1));
        let w = word(Family::A, 2, &[2, 1, 2]);
        let rep = build_rep(w.datum(), &w).unwrap();
        assert_eq!(rep.e(1).len(), 4);
        assert!(matches!(q2_chain_certificate(rep.e(1)), ChainOutcome::Ordered(_)));
        let commuting = QOperator::from_terms([
            (QExponent::zero(1), Laurent::one()),
            (
                QExponent::from_parts(&[0], &[1], Default::default()).unwrap(),
                Laurent::one(),
            ),
        ]);
        assert!(matches!(q2_chain_certificate(&commuting), ChainOutcome::Impossible(s) if s == vec![0]));
    }

    #[test]
    fn a2_paths() {
        let a = word(Family::A, 2, &[1, 2, 1]);
        let b = word(Family::A, 2, &[2, 1, 2]);
        let r = path_independence(&a, &b, &b).unwrap();
        assert!(r.passed(), "{:?}", r.witnesses);
        let r = path_independence(&a, &a, &b).unwrap();
        assert!(r.passed(), "{:?}", r.witnesses);
    }

    #[test]
    fn d4_good_word() {
        let d = Arc::new(build_cartan(Family::D, 4).unwrap());
        let rep = build_rep(&d, &good_word(&d).unwrap()).unwrap();
        let report = check_relations(&rep).unwrap();
        assert!(report.passed(), "{:?}", report.witnesses);
        assert!(positivity_shadow(&rep).passed());
    }
}
