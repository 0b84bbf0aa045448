//! Modified generators, modular-double certificates, the Langlands commutant,
//! the Weyl action on `lambda`, and `lambda`-normalization.
//!
//! The `b^{-1}` copy is never materialized. A monomial of one copy and a
//! monomial of the other commute up to the phase `e^{pi i s}`, so every
//! cross-commutation statement reduces to the parity of integer pairings.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::qtorus::{commutation_exponent, rational_pairing, rebracket, LambdaForm, QExponent, QOperator};
use crate::repbuild::{build_rep, LambdaMode, Representation};
use crate::rootdata::CartanDatum;
use crate::verify::Report;
use crate::words::word_starting_with;

/// Generators twisted by powers of `K` along a bipartition `n_i`.
#[derive(Debug, Clone)]
pub struct ModifiedRep {
    pub base: Representation,
    pub weights: Vec<u8>,
    pub e: Vec<QOperator>,
    pub f: Vec<QOperator>,
    pub k: Vec<QOperator>,
}

impl ModifiedRep {
    /// `q^2` or `q^-2` as a power of `q`.
    pub fn twist(&self, idx: usize) -> i32 {
        if self.weights[idx] == 1 {
            2
        } else {
            -2
        }
    }

    pub fn operators(&self) -> Vec<(String, &QOperator)> {
        let d = &self.base.datum;
        let mut out = Vec::new();
        for idx in 0..self.e.len() {
            let l = d.label(idx);
            out.push((format!("E{l}"), &self.e[idx]));
            out.push((format!("F{l}"), &self.f[idx]));
            out.push((format!("K{l}"), &self.k[idx]));
        }
        out
    }
}

/// `E_i -> q^{n_i} E_i K_i^{n_i}`, `F_i -> q^{1-n_i} F_i K_i^{n_i-1}`,
/// `K_i -> K_i^{2}` for `n_i = 1` and `K_i^{-2}` for `n_i = 0`.
pub fn build_modified(rep: &Representation, weights: &[u8]) -> Result<ModifiedRep> {
    let r = rep.rank();
    let d = &rep.datum;
    for i in 0..r {
        for j in d.neighbors(i) {
            if weights[i] == weights[j] {
                return Err(Error::OutOfRange(format!(
                    "weights must alternate along edges, got {weights:?}"
                )));
            }
        }
    }
    let kpow = |idx: usize, p: i64| -> Result<QOperator> {
        rep.generators[idx]
            .k
            .monomial_pow(p)
            .ok_or_else(|| Error::OutOfRange("K is not a single monomial".into()))
    };
    let mut e = Vec::with_capacity(r);
    let mut f = Vec::with_capacity(r);
    let mut k = Vec::with_capacity(r);
    for (idx, g) in rep.generators.iter().enumerate() {
        let n = weights[idx] as i64;
        e.push(g.e.mul(&kpow(idx, n)?)?.scale(&Laurent::q_pow(n as i32)));
        f.push(g.f.mul(&kpow(idx, n - 1)?)?.scale(&Laurent::q_pow(1 - n as i32)));
        k.push(kpow(idx, if n == 1 { 2 } else { -2 })?);
    }
    Ok(ModifiedRep {
        base: rep.clone(),
        weights: weights.to_vec(),
        e,
        f,
        k,
    })
}

pub fn build_modified_default(rep: &Representation) -> Result<ModifiedRep> {
    let w = rep.datum.bipartition().to_vec();
    build_modified(rep, &w)
}

/// `[A, B]_c = A B - c^{-1} B A` for `c = q^t`.
fn qbracket(a: &QOperator, b: &QOperator, t: i32) -> Result<QOperator> {
    a.q_commutator(b, &Laurent::q_pow(-t))
}

/// Residues of the modified relations. The modified Serre relation is
/// returned in both candidate twists, `[[E_j, E_i]_{q_i}, E_i]` and
/// `[[E_j, E_i]_{q_j}, E_i]`, under the names `Serre_qi(..)` and
/// `Serre_qj(..)`; likewise for `F`.
pub fn modified_residues(m: &ModifiedRep) -> Result<Vec<(String, QOperator)>> {
    let d = &m.base.datum;
    let r = m.e.len();
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).collect();
    let out: Vec<Vec<(String, QOperator)>> = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<Vec<(String, QOperator)>> {
            let (li, lj) = (d.label(i), d.label(j));
            let a = d.cartan()[i][j] as i32;
            let ti = m.twist(i);
            let tj = m.twist(j);
            let mut v = vec![
                (
                    format!("bK{li}bE{lj}"),
                    m.k[i]
                        .mul(&m.e[j])?
                        .sub(&m.e[j].mul(&m.k[i])?.scale(&Laurent::q_pow(ti * a))),
                ),
                (
                    format!("bK{li}bF{lj}"),
                    m.k[i]
                        .mul(&m.f[j])?
                        .sub(&m.f[j].mul(&m.k[i])?.scale(&Laurent::q_pow(-ti * a))),
                ),
            ];
            if i == j {
                let one = QOperator::scalar(m.e[i].positions().unwrap(), Laurent::one());
                let rhs = one.sub(&m.k[i]).scale(&rescaled_constant(m.weights[i]));
                v.push((
                    format!("[bE{li},bF{li}]_q{li}"),
                    qbracket(&m.e[i], &m.f[i], ti)?.sub(&rhs),
                ));
            } else {
                v.push((format!("[bE{li},bF{lj}]"), m.e[i].commutator(&m.f[j])?));
                if i < j {
                    v.push((format!("[bK{li},bK{lj}]"), m.k[i].commutator(&m.k[j])?));
                }
                if a == 0 && i < j {
                    v.push((format!("[bE{li},bE{lj}]"), m.e[i].commutator(&m.e[j])?));
                    v.push((format!("[bF{li},bF{lj}]"), m.f[i].commutator(&m.f[j])?));
                }
                if a != 0 {
                    for (n, x) in [("E", &m.e), ("F", &m.f)] {
                        let inner_i = qbracket(&x[j], &x[i], ti)?;
                        let inner_j = qbracket(&x[j], &x[i], tj)?;
                        v.push((format!("Serre_qi(b{n}{lj},b{n}{li})"), inner_i.commutator(&x[i])?));
                        v.push((format!("Serre_qj(b{n}{lj},b{n}{li})"), inner_j.commutator(&x[i])?));
                    }
                }
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    Ok(out.into_iter().flatten().collect())
}

/// `[bE_i, bF_i]_{q_i} = c (1 - bK_i)` in the rescaled normalization:
/// `c = 1 - q^{-2}` for `n_i = 1` and `1 - q^2` for `n_i = 0`.
pub fn rescaled_constant(n: u8) -> Laurent {
    if n == 1 {
        Laurent::one() - Laurent::q_pow(-2)
    } else {
        Laurent::one() - Laurent::q_pow(2)
    }
}

/// The modified relation suite. The Serre relations are checked as
/// `[[bE_j, bE_i]_{q_j}, bE_i] = 0` and `[[bF_j, bF_i]_{q_i}, bF_i] = 0`;
/// the other twists do not vanish.
pub fn check_modified_relations(m: &ModifiedRep) -> Result<Report> {
    let res = modified_residues(m)?;
    let normative: Vec<&(String, QOperator)> = res.iter().filter(|(n, _)| !is_off_serre(n)).collect();
    let witnesses = normative
        .iter()
        .filter(|(_, r)| !r.is_zero())
        .map(|(n, r)| json!({ "relation": n, "monomials": r.len() }))
        .collect();
    Ok(Report::new(
        format!("modified relations {} weights {:?}", m.base.datum.name(), m.weights),
        normative.len(),
        witnesses,
    ))
}

fn is_off_serre(name: &str) -> bool {
    name.starts_with("Serre_qi(bE") || name.starts_with("Serre_qj(bF")
}

fn all_exponents<'a>(ops: impl IntoIterator<Item = (String, &'a QOperator)>) -> Vec<(String, QExponent)> {
    ops.into_iter()
        .flat_map(|(n, op)| op.iter().map(move |(e, _)| (n.clone(), e.clone())))
        .collect()
}

fn odd_pair(exps: &[(String, QExponent)]) -> Option<serde_json::Value> {
    (0..exps.len()).into_par_iter().find_map_any(|a| {
        (a + 1..exps.len()).find_map(|b| {
            let s = commutation_exponent(&exps[a].1, &exps[b].1);
            (s % 2 != 0).then(|| {
                json!({
                    "left": exps[a].0, "left_exponent": exps[a].1.to_string(),
                    "right": exps[b].0, "right_exponent": exps[b].1.to_string(),
                    "pairing": s,
                })
            })
        })
    })
}

/// All pairwise pairings among modified-generator monomials are even; the
/// report also carries an odd pair of the unmodified generators, if any.
pub fn cross_parity_certificate(m: &ModifiedRep) -> (Report, Option<serde_json::Value>) {
    let exps = all_exponents(m.operators());
    let n = exps.len();
    let witnesses: Vec<_> = odd_pair(&exps).into_iter().collect();
    let report = Report::new(
        format!("cross parity {} weights {:?}", m.base.datum.name(), m.weights),
        n * (n.saturating_sub(1)) / 2,
        witnesses,
    );
    let plain = all_exponents(m.base.named_operators());
    (report, odd_pair(&plain))
}

/// Rank over `Q` of integer row vectors.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for x in m[rank].iter_mut() {
            *x = &*x / &pivot;
        }
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let prow = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(prow) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Lattice spanned by the modified generator exponents: even Gram matrix
/// and rank at most `2N`.
pub fn qtori_certificate(m: &ModifiedRep) -> Report {
    let exps = all_exponents(m.operators());
    let n = m.base.word.len();
    let mut distinct: Vec<QExponent> = exps.iter().map(|(_, e)| e.clone()).collect();
    distinct.sort();
    distinct.dedup();
    let rows: Vec<Vec<i64>> = distinct
        .iter()
        .map(|e| e.alpha().iter().chain(e.gamma()).map(|&x| x as i64).collect())
        .collect();
    let rank = rational_rank(&rows);
    let mut witnesses: Vec<_> = odd_pair(&exps).into_iter().collect();
    if rank > 2 * n {
        witnesses.push(json!({ "rank": rank, "bound": 2 * n }));
    }
    let mut report = Report::new(
        format!(
            "q-tori embedding {} (lattice rank {rank}, 2N = {})",
            m.base.datum.name(),
            2 * n
        ),
        distinct.len(),
        witnesses,
    );
    report.checked = distinct.len();
    report
}

/// Rational `u`-exponent of `prod_j K_j^{c_j}`.
fn k_combination(m: &ModifiedRep, c: &[Rational64]) -> Vec<Rational64> {
    let n = m.base.word.len();
    let mut alpha = vec![Rational64::zero(); n];
    for (j, g) in m.base.generators.iter().enumerate() {
        let (e, _) = g.k.iter().next().expect("K is a monomial");
        for (k, a) in alpha.iter_mut().enumerate() {
            *a += c[j] * e.alpha_at(k);
        }
    }
    alpha
}

/// Outcome of the commutant check for one `b`-vector.
#[derive(Debug, Clone)]
pub struct CommutantLine {
    pub k: u8,
    pub b: Vec<Rational64>,
    /// Pairings of `prod_j K_j^{2 b_j}` with each `bE_i`, `bF_i` (one per generator).
    pub pairings: Vec<(String, Rational64)>,
}

/// For each `b^k` with `A b^k = e_k`, the element
/// `prod_j bK_j^{+-b_j^k} = prod_j K_j^{2 b_j^k}` pairs with every monomial
/// of every `bE_i`, `bF_i` to an even integer, so it commutes with the
/// `b^{-1}` copy. Halving `b^k` breaks this (sharpness), and the literal
/// reading `prod_j bK_j^{b_j^k}` with the bipartition signs is reported.
pub fn commutant_check(m: &ModifiedRep) -> (Report, Vec<CommutantLine>) {
    let d = &m.base.datum;
    let bs = d.langlands_b_vectors();
    let n = m.base.word.len();
    let zero_gamma = vec![Rational64::zero(); n];
    let mut witnesses = Vec::new();
    let mut lines = Vec::new();
    let mut checked = 0;
    let ops: Vec<(String, &QOperator)> = (0..m.e.len())
        .flat_map(|i| {
            [
                (format!("E{}", d.label(i)), &m.e[i]),
                (format!("F{}", d.label(i)), &m.f[i]),
            ]
        })
        .collect();
    let even_int = |s: Rational64| s.is_integer() && s.to_integer() % 2 == 0;
    for (k, b) in bs.iter().enumerate() {
        // A b = e_k
        for i in 0..d.rank() {
            let s: Rational64 = (0..d.rank()).map(|j| b[j] * d.cartan()[i][j]).sum();
            let want = if i == k { Rational64::one() } else { Rational64::zero() };
            if s != want {
                witnesses.push(json!({ "k": d.label(k), "row": d.label(i), "A_b": s.to_string() }));
            }
        }
        let twice: Vec<Rational64> = b.iter().map(|x| x * 2).collect();
        let alpha = k_combination(m, &twice);
        let half = k_combination(m, b);
        let mut pairings = Vec::new();
        let mut sharp = false;
        for (name, op) in &ops {
            let mut first = None;
            for (e, _) in op.iter() {
                checked += 1;
                let s = rational_pairing(&alpha, &zero_gamma, e);
                first.get_or_insert(s);
                if !even_int(s) {
                    witnesses.push(json!({ "k": d.label(k), "generator": name, "exponent": e.to_string(), "pairing": s.to_string() }));
                }
                if !even_int(rational_pairing(&half, &zero_gamma, e)) {
                    sharp = true;
                }
            }
            pairings.push((name.clone(), first.unwrap_or_else(Rational64::zero)));
        }
        if !sharp {
            witnesses.push(json!({ "k": d.label(k), "not_sharp": "b/2 also gives even pairings" }));
        }
        lines.push(CommutantLine {
            k: d.label(k),
            b: b.clone(),
            pairings,
        });
    }
    (
        Report::new(
            format!("Langlands commutant {} weights {:?}", d.name(), m.weights),
            checked,
            witnesses,
        ),
        lines,
    )
}

/// Does `prod_j bK_j^{b_j^k}` (signs from the bipartition) give even
/// pairings with all modified generators? Returns the failing `k` labels.
pub fn literal_commutant_failures(m: &ModifiedRep) -> Vec<u8> {
    let d = &m.base.datum;
    let n = m.base.word.len();
    let zero_gamma = vec![Rational64::zero(); n];
    let mut out = Vec::new();
    for (k, b) in d.langlands_b_vectors().iter().enumerate() {
        let c: Vec<Rational64> = b.iter().enumerate().map(|(j, x)| x * m.twist(j) as i64).collect();
        let alpha = k_combination(m, &c);
        let ok = (0..m.e.len()).all(|i| {
            [&m.e[i], &m.f[i]].iter().all(|op| {
                op.iter().all(|(e, _)| {
                    let s = rational_pairing(&alpha, &zero_gamma, e);
                    s.is_integer() && s.to_integer() % 2 == 0
                })
            })
        });
        if !ok {
            out.push(d.label(k));
        }
    }
    out
}

/// `s_i(lambda_j) = lambda_j - a_{ij} lambda_i`, extended linearly.
pub fn weyl_reflect_lambda(datum: &CartanDatum, form: &LambdaForm, i: usize) -> LambdaForm {
    form.substitute(|j| {
        LambdaForm::from_terms([
            (j, Rational64::one()),
            (i, Rational64::from_integer(-datum.cartan()[i][j])),
        ])
    })
}

/// Reflect an integer parameter vector into the dominant chamber; returns
/// the dominant vector and the reflections used (dense indices).
pub fn dominant_lambda(datum: &CartanDatum, lambda: &[i64]) -> (Vec<i64>, Vec<usize>) {
    let mut v = lambda.to_vec();
    let mut used = Vec::new();
    while let Some(i) = (0..v.len()).find(|&i| v[i] < 0) {
        let li = v[i];
        for (j, x) in v.iter_mut().enumerate() {
            *x -= datum.cartan()[i][j] * li;
        }
        used.push(i);
    }
    (v, used)
}

/// Apply a substitution of the parameters to every operator.
pub fn substitute_lambda(rep: &Representation, image: impl Fn(usize) -> LambdaForm + Sync) -> Result<Representation> {
    rep.map(|op| {
        op.map_exponents(|e| {
            let mut out = e.clone();
            out.set_ell(e.ell().substitute(&image));
            Ok(out)
        })
    })
}

/// Compare `Rep(s_i lambda)` with the image of `Rep(lambda)` under the
/// intertwiner's visible action on a word starting with `i` (`u` the
/// leftmost variable): monomials that do not shift `p_u` see
/// `u -> u - 2 lambda_i`, and those that do see `lambda -> s_i lambda`.
/// The reflection is also checked to be an involution.
pub fn verify_weyl_pattern(datum: &std::sync::Arc<CartanDatum>, label: u8) -> Result<Report> {
    let i = datum.index_of(label)?;
    let word = word_starting_with(datum, label)?;
    let rep = build_rep(datum, &word)?;
    let reflected = substitute_lambda(&rep, |j| {
        weyl_reflect_lambda(datum, &LambdaForm::single(j, Rational64::one()), i)
    })?;
    let back = substitute_lambda(&reflected, |j| {
        weyl_reflect_lambda(datum, &LambdaForm::single(j, Rational64::one()), i)
    })?;
    let shift = |e: &QExponent| -> Result<QExponent> {
        let mut out = e.clone();
        if e.gamma_at(0) == 0 {
            let extra = LambdaForm::single(i, Rational64::from_integer(-2 * e.alpha_at(0)));
            out.set_ell(e.ell().add(&extra));
        } else {
            out.set_ell(
                e.ell()
                    .substitute(|j| weyl_reflect_lambda(datum, &LambdaForm::single(j, Rational64::one()), i)),
            );
        }
        Ok(out)
    };
    let intertwined = rep.map(|op| op.map_exponents(shift))?;
    let mut witnesses = Vec::new();
    for ((name, x), (_, y)) in reflected
        .named_operators()
        .into_iter()
        .zip(intertwined.named_operators())
    {
        if x != y {
            witnesses.push(json!({
                "generator": name,
                "reflected": crate::format::render_operator(x, &word),
                "intertwined": crate::format::render_operator(y, &word),
            }));
        }
    }
    for ((name, x), (_, y)) in back.named_operators().into_iter().zip(rep.named_operators()) {
        if x != y {
            witnesses.push(json!({ "generator": name, "involution": false }));
        }
    }
    Ok(Report::new(
        format!("Weyl pattern {} s_{label} on {word}", datum.name()),
        rep.rank() * 3,
        witnesses,
    ))
}

/// Result of the `lambda`-normalizing change of variables.
#[derive(Debug, Clone)]
pub struct Normalization {
    /// `u_k -> u_k - shifts[k]`.
    pub shifts: Vec<LambdaForm>,
    /// `beta_k` per position.
    pub betas: Vec<Rational64>,
    pub rep: Representation,
}

fn shift_position(op: &QOperator, k: usize, by: &LambdaForm) -> Result<QOperator> {
    op.map_exponents(|e| {
        let a = e.alpha_at(k);
        if a == 0 {
            return Ok(e.clone());
        }
        let mut out = e.clone();
        out.set_ell(e.ell().add(&by.scale(Rational64::from_integer(-a))));
        Ok(out)
    })
}

/// Process positions left to right: the `F_{r(k)}` bracket shifting `p_k`
/// has weight `-L = sum_{j<=k} c_j u_j + lambda'`; with
/// `beta_k = beta(lambda') - 1`, substitute `u_k -> u_k - beta_k/(beta_k+1) lambda'`.
pub fn normalize_lambda(rep: &Representation) -> Result<Normalization> {
    let word = rep.word.clone();
    let n = word.len();
    let mut cur = rep.clone();
    let mut shifts = Vec::with_capacity(n);
    let mut betas = Vec::with_capacity(n);
    for k in 0..n {
        let label = word.letters()[k];
        let f = cur.f(label);
        let t = rebracket(f)?
            .into_iter()
            .find(|t| {
                t.shift
                    .iter()
                    .enumerate()
                    .all(|(j, &x)| x == if j == k { 1 } else { 0 })
            })
            .ok_or_else(|| Error::OutOfRange(format!("no F{label} bracket shifting position {k}")))?;
        let lam = t.lambda.neg();
        let beta = lam.coefficient_sum() - Rational64::one();
        if !(beta.is_integer() && beta.is_positive()) {
            return Err(Error::NonPositiveBeta {
                position: k,
                beta: beta.to_string(),
            });
        }
        let by = lam.scale(beta / (beta + Rational64::one()));
        cur = cur.map(|op| shift_position(op, k, &by))?;
        shifts.push(by);
        betas.push(beta);
    }
    cur.lambda_mode = LambdaMode::Normalized;
    Ok(Normalization {
        shifts,
        betas,
        rep: cur,
    })
}

/// Postconditions of [`normalize_lambda`]: `lambda`-free `K_i`, at most
/// `rank` distinct `lambda`-parts (up to sign) among `E`/`F` brackets.
pub fn normalization_report(norm: &Normalization) -> Result<Report> {
    let rep = &norm.rep;
    let mut witnesses = Vec::new();
    for (idx, g) in rep.generators.iter().enumerate() {
        for (e, _) in g.k.iter() {
            if !e.ell().is_zero() {
                witnesses.push(json!({ "generator": format!("K{}", rep.datum.label(idx)), "lambda": e.ell().terms().map(|(j, c)| format!("{c}L{}", rep.datum.label(j))).collect::<Vec<_>>() }));
            }
        }
    }
    let mut forms: Vec<LambdaForm> = Vec::new();
    for g in &rep.generators {
        for op in [&g.e, &g.f] {
            for t in rebracket(op)? {
                if t.lambda.is_zero() {
                    continue;
                }
                let first = t.lambda.terms().next().unwrap().1;
                let canon = if first < Rational64::zero() {
                    t.lambda.neg()
                } else {
                    t.lambda.clone()
                };
                if !forms.contains(&canon) {
                    forms.push(canon);
                }
            }
        }
    }
    if forms.len() > rep.rank() {
        witnesses.push(json!({ "distinct_lambda_parts": forms.len(), "rank": rep.rank() }));
    }
    Ok(Report::new(
        format!("lambda normalization {} on {}", rep.datum.name(), rep.word),
        rep.rank() + forms.len(),
        witnesses,
    ))
}
