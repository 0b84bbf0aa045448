//! Quantum torus algebra of exponential monomials.
//!
//! A monomial `e^{pi b (alpha.u + 2 gamma.p + ell.lambda)}` is stored by its
//! exponent (`alpha`, `gamma` integer vectors over word positions, `ell` a
//! rational form in the central parameters) and a Laurent coefficient in
//! `v = q^{1/2}`. With `[p_k, u_k] = 1/(2 pi i)` two monomials satisfy
//! `m m' = q^s m' m` for `s = alpha.gamma' - gamma.alpha'`, and the product
//! is `v^s` times the monomial of the summed exponent.
//!
//! Operators are kept rescaled: a bracket `[L]e(P)` stands for
//! `q^{(1+s)/2} m(L+2P) + q^{-(1+s)/2} m(-L+2P)` with `s = L_u . P`, i.e. the
//! factor `i/(q - q^{-1})` is dropped throughout.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::laurent::Laurent;

/// Rational linear form in the central parameters `lambda_i`, keyed by dense
/// node index. Sparse and sorted; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LambdaForm {
    terms: Vec<(u8, Rational64)>,
}

impl LambdaForm {
    pub fn zero() -> Self {
        LambdaForm::default()
    }

    pub fn single(node: usize, c: Rational64) -> Self {
        Self::from_terms([(node, c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Rational64)>) -> Self {
        let mut acc: Vec<(u8, Rational64)> = Vec::new();
        for (i, c) in terms {
            match acc.iter_mut().find(|t| t.0 as usize == i) {
                Some(t) => t.1 += c,
                None => acc.push((i as u8, c)),
            }
        }
        acc.retain(|t| !t.1.is_zero());
        acc.sort_by_key(|t| t.0);
        LambdaForm { terms: acc }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, Rational64)> + '_ {
        self.terms.iter().map(|&(i, c)| (i as usize, c))
    }

    pub fn coeff(&self, node: usize) -> Rational64 {
        self.terms
            .iter()
            .find(|t| t.0 as usize == node)
            .map(|t| t.1)
            .unwrap_or_else(Rational64::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LambdaForm) -> LambdaForm {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        Self::from_terms(self.terms().chain(other.terms()))
    }

    pub fn scale(&self, c: Rational64) -> LambdaForm {
        if c.is_zero() {
            return LambdaForm::zero();
        }
        LambdaForm {
            terms: self.terms.iter().map(|&(i, x)| (i, x * c)).collect(),
        }
    }

    pub fn neg(&self) -> LambdaForm {
        self.scale(Rational64::from_integer(-1))
    }

    /// `beta(sum d_j lambda_j) = sum d_j`.
    pub fn coefficient_sum(&self) -> Rational64 {
        self.terms.iter().map(|t| t.1).sum()
    }

    /// Substitute `lambda_j -> image(j)` for every parameter.
    pub fn substitute(&self, image: impl Fn(usize) -> LambdaForm) -> LambdaForm {
        let mut out = LambdaForm::zero();
        for (j, c) in self.terms() {
            out = out.add(&image(j).scale(c));
        }
        out
    }
}

/// Exponent of a monomial. `up` holds `alpha` followed by `gamma`, each of
/// length `n` (the number of word positions).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QExponent {
    up: Box<[i8]>,
    ell: LambdaForm,
}

fn narrow(x: i64) -> Result<i8> {
    i8::try_from(x).map_err(|_| Error::Overflow)
}

impl QExponent {
    pub fn zero(n: usize) -> Self {
        QExponent {
            up: vec![0; 2 * n].into_boxed_slice(),
            ell: LambdaForm::zero(),
        }
    }

    pub fn from_parts(alpha: &[i64], gamma: &[i64], ell: LambdaForm) -> Result<Self> {
        assert_eq!(alpha.len(), gamma.len());
        let up = alpha
            .iter()
            .chain(gamma)
            .map(|&x| narrow(x))
            .collect::<Result<Vec<i8>>>()?
            .into_boxed_slice();
        Ok(QExponent { up, ell })
    }

    /// Number of word positions.
    pub fn positions(&self) -> usize {
        self.up.len() / 2
    }

    pub fn alpha(&self) -> &[i8] {
        &self.up[..self.positions()]
    }

    pub fn gamma(&self) -> &[i8] {
        &self.up[self.positions()..]
    }

    pub fn alpha_at(&self, k: usize) -> i64 {
        self.up[k] as i64
    }

    pub fn gamma_at(&self, k: usize) -> i64 {
        self.up[self.positions() + k] as i64
    }

    pub fn set_alpha(&mut self, k: usize, x: i64) -> Result<()> {
        self.up[k] = narrow(x)?;
        Ok(())
    }

    pub fn set_gamma(&mut self, k: usize, x: i64) -> Result<()> {
        let n = self.positions();
        self.up[n + k] = narrow(x)?;
        Ok(())
    }

    pub fn ell(&self) -> &LambdaForm {
        &self.ell
    }

    pub fn set_ell(&mut self, ell: LambdaForm) {
        self.ell = ell;
    }

    pub fn is_zero(&self) -> bool {
        self.up.iter().all(|&x| x == 0) && self.ell.is_zero()
    }

    /// True when the `u`/`p` part vanishes (a central monomial).
    pub fn is_central(&self) -> bool {
        self.up.iter().all(|&x| x == 0)
    }

    pub fn checked_add(&self, other: &QExponent) -> Result<QExponent> {
        let up = self
            .up
            .iter()
            .zip(other.up.iter())
            .map(|(&a, &b)| a.checked_add(b).ok_or(Error::Overflow))
            .collect::<Result<Vec<i8>>>()?
            .into_boxed_slice();
        Ok(QExponent {
            up,
            ell: self.ell.add(&other.ell),
        })
    }

    /// `c * self` for an integer `c`.
    pub fn checked_scale(&self, c: i64) -> Result<QExponent> {
        let up = self
            .up
            .iter()
            .map(|&a| narrow(a as i64 * c))
            .collect::<Result<Vec<i8>>>()?
            .into_boxed_slice();
        Ok(QExponent {
            up,
            ell: self.ell.scale(Rational64::from_integer(c)),
        })
    }

    pub fn neg(&self) -> QExponent {
        self.checked_scale(-1).expect("i8 negation of values in range")
    }

    /// Opposite `u` and `lambda` parts, same `p` part.
    pub fn flip_weight(&self) -> QExponent {
        let n = self.positions();
        let mut up = self.up.clone();
        for x in up[..n].iter_mut() {
            *x = -*x;
        }
        QExponent {
            up,
            ell: self.ell.neg(),
        }
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.positions();
        (0..n).filter(move |&k| self.up[k] != 0 || self.up[n + k] != 0)
    }
}

impl fmt::Debug for QExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for k in 0..self.positions() {
            if self.alpha_at(k) != 0 {
                parts.push(format!("u#{k}:{}", self.alpha_at(k)));
            }
        }
        for k in 0..self.positions() {
            if self.gamma_at(k) != 0 {
                parts.push(format!("p#{k}:{}", self.gamma_at(k)));
            }
        }
        for (i, c) in self.ell.terms() {
            parts.push(format!("L#{i}:{c}"));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{{{}}}", parts.join(" "))
        }
    }
}

/// `s` with `m m' = q^s m' m`.
pub fn commutation_exponent(a: &QExponent, b: &QExponent) -> i64 {
    let n = a.positions();
    let mut s = 0i64;
    for k in 0..n {
        let (aa, ag) = (a.up[k], a.up[n + k]);
        let (ba, bg) = (b.up[k], b.up[n + k]);
        s += aa as i64 * bg as i64 - ag as i64 * ba as i64;
    }
    s
}

/// Same as [`commutation_exponent`] with rational weights on the `u` part of
/// the left factor (fractional powers of central-free monomials).
pub fn rational_pairing(alpha: &[Rational64], gamma: &[Rational64], b: &QExponent) -> Rational64 {
    let mut s = Rational64::zero();
    for k in 0..b.positions() {
        s += alpha[k] * b.gamma_at(k) - gamma[k] * b.alpha_at(k);
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMonomial {
    pub exponent: QExponent,
    pub coeff: Laurent,
}

impl QMonomial {
    pub fn new(exponent: QExponent, coeff: Laurent) -> Self {
        QMonomial { exponent, coeff }
    }

    pub fn unit(exponent: QExponent) -> Self {
        QMonomial {
            exponent,
            coeff: Laurent::one(),
        }
    }

    pub fn mul(&self, other: &QMonomial) -> Result<QMonomial> {
        let s = commutation_exponent(&self.exponent, &other.exponent);
        Ok(QMonomial {
            exponent: self.exponent.checked_add(&other.exponent)?,
            coeff: (&self.coeff * &other.coeff).shift(s as i32),
        })
    }
}

/// Finite sum of monomials in canonical form: sorted by exponent, distinct
/// exponents, nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QOperator {
    terms: Vec<(QExponent, Laurent)>,
}

/// Accumulator for building operators in any order.
#[derive(Debug, Default)]
pub struct OperatorBuilder {
    acc: FxHashMap<QExponent, Laurent>,
}

impl OperatorBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, exponent: QExponent, coeff: &Laurent) {
        if coeff.is_zero() {
            return;
        }
        match self.acc.get_mut(&exponent) {
            Some(c) => *c += coeff,
            None => {
                self.acc.insert(exponent, coeff.clone());
            }
        }
    }

    pub fn add_operator(&mut self, op: &QOperator, scale: &Laurent) {
        for (e, c) in op.iter() {
            self.add(e.clone(), &(c * scale));
        }
    }

    pub fn len(&self) -> usize {
        self.acc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.acc.is_empty()
    }

    pub fn finish(self) -> QOperator {
        let mut terms: Vec<(QExponent, Laurent)> = self.acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        QOperator { terms }
    }
}

impl QOperator {
    pub fn zero() -> Self {
        QOperator::default()
    }

    pub fn monomial(exponent: QExponent, coeff: Laurent) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        QOperator {
            terms: vec![(exponent, coeff)],
        }
    }

    /// Central scalar `c` on `n` positions.
    pub fn scalar(n: usize, c: Laurent) -> Self {
        Self::monomial(QExponent::zero(n), c)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (QExponent, Laurent)>) -> Self {
        let mut b = OperatorBuilder::new();
        for (e, c) in terms {
            b.add(e, &c);
        }
        b.finish()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&QExponent, &Laurent)> {
        self.terms.iter().map(|(e, c)| (e, c))
    }

    pub fn terms(&self) -> &[(QExponent, Laurent)] {
        &self.terms
    }

    pub fn monomials(&self) -> impl Iterator<Item = QMonomial> + '_ {
        self.terms.iter().map(|(e, c)| QMonomial::new(e.clone(), c.clone()))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &QOperator) -> QOperator {
        Self::from_terms(self.terms.iter().cloned().chain(other.terms.iter().cloned()))
    }

    pub fn sub(&self, other: &QOperator) -> QOperator {
        self.add(&other.scale(&Laurent::constant(-1)))
    }

    pub fn scale(&self, c: &Laurent) -> QOperator {
        if c.is_zero() {
            return Self::zero();
        }
        QOperator {
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &QOperator) -> Result<QOperator> {
        let mut b = OperatorBuilder::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let s = commutation_exponent(e1, e2);
                b.add(e1.checked_add(e2)?, &(c1 * c2).shift(s as i32));
            }
        }
        Ok(b.finish())
    }

    /// `x y - c y x`.
    pub fn q_commutator(&self, other: &QOperator, c: &Laurent) -> Result<QOperator> {
        Ok(self.mul(other)?.sub(&other.mul(self)?.scale(c)))
    }

    pub fn commutator(&self, other: &QOperator) -> Result<QOperator> {
        self.q_commutator(other, &Laurent::one())
    }

    /// Inverse of a single unit monomial (a `K`-type element).
    pub fn monomial_inverse(&self) -> Option<QOperator> {
        match self.terms.as_slice() {
            [(e, c)] => {
                let k = c.as_unit_monomial()?;
                Some(QOperator::monomial(e.neg(), Laurent::v_pow(-k)))
            }
            _ => None,
        }
    }

    /// Integer power of a single monomial `c m` with `m` self-commuting.
    pub fn monomial_pow(&self, k: i64) -> Option<QOperator> {
        match self.terms.as_slice() {
            [(e, c)] => {
                let u = c.as_unit_monomial()?;
                Some(QOperator::monomial(
                    e.checked_scale(k).ok()?,
                    Laurent::v_pow(u * k as i32),
                ))
            }
            _ => None,
        }
    }

    pub fn map_exponents(&self, f: impl Fn(&QExponent) -> Result<QExponent>) -> Result<QOperator> {
        let mut b = OperatorBuilder::new();
        for (e, c) in &self.terms {
            b.add(f(e)?, c);
        }
        Ok(b.finish())
    }

    /// Number of word positions, if the operator is nonzero.
    pub fn positions(&self) -> Option<usize> {
        self.terms.first().map(|t| t.0.positions())
    }
}

/// Quantized weight-shift term `scalar * [L] e(P)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BracketTerm {
    pub scalar: Laurent,
    /// `u`-coefficients of `L`, one per position.
    pub weight: Vec<i64>,
    /// `lambda`-part of `L`.
    pub lambda: LambdaForm,
    /// Momentum shift `P`, one per position.
    pub shift: Vec<i64>,
}

impl BracketTerm {
    pub fn new(weight: Vec<i64>, lambda: LambdaForm, shift: Vec<i64>) -> Self {
        BracketTerm {
            scalar: Laurent::one(),
            weight,
            lambda,
            shift,
        }
    }

    pub fn with_scalar(mut self, scalar: Laurent) -> Self {
        self.scalar = scalar;
        self
    }

    pub fn positions(&self) -> usize {
        self.weight.len()
    }

    /// `s = L_u . P`.
    pub fn twist(&self) -> i64 {
        self.weight.iter().zip(&self.shift).map(|(a, b)| a * b).sum()
    }
}

/// `scalar (q^{(1+s)/2} m(L+2P) + q^{-(1+s)/2} m(-L+2P))`, `s = L_u . P`.
pub fn expand_bracket(t: &BracketTerm) -> Result<QOperator> {
    let s = t.twist() as i32;
    let plus = QExponent::from_parts(&t.weight, &t.shift, t.lambda.clone())?;
    let minus = plus.flip_weight();
    Ok(QOperator::from_terms([
        (plus, t.scalar.shift(1 + s)),
        (minus, t.scalar.shift(-1 - s)),
    ]))
}

pub fn expand_brackets<'a>(ts: impl IntoIterator<Item = &'a BracketTerm>) -> Result<QOperator> {
    let mut b = OperatorBuilder::new();
    for t in ts {
        for (e, c) in expand_bracket(t)?.terms {
            b.add(e, &c);
        }
    }
    Ok(b.finish())
}

/// Pair monomials with equal `p`-part and opposite weights into brackets.
pub fn rebracket(op: &QOperator) -> Result<Vec<BracketTerm>> {
    let index: FxHashMap<&QExponent, &Laurent> = op.terms.iter().map(|(e, c)| (e, c)).collect();
    let mut out = Vec::with_capacity(op.len() / 2);
    for (e, c) in &op.terms {
        let partner = e.flip_weight();
        if partner == *e {
            return Err(Error::Unpairable {
                exponent: e.to_string(),
            });
        }
        // Each pair is visited twice; keep the visit from the smaller exponent.
        if partner < *e && index.contains_key(&partner) {
            continue;
        }
        let Some(&pc) = index.get(&partner) else {
            return Err(Error::Unpairable {
                exponent: e.to_string(),
            });
        };
        let weight: Vec<i64> = e.alpha().iter().map(|&x| x as i64).collect();
        let shift: Vec<i64> = e.gamma().iter().map(|&x| x as i64).collect();
        let s: i64 = weight.iter().zip(&shift).map(|(a, b)| a * b).sum();
        // L = alpha(e): c = scalar v^{1+s}, pc = scalar v^{-1-s}
        let sc = c.shift(-(1 + s) as i32);
        if sc == pc.shift((1 + s) as i32) {
            out.push(BracketTerm {
                scalar: sc,
                weight,
                lambda: e.ell().clone(),
                shift,
            });
            continue;
        }
        // L = -alpha(e): twist is -s
        let sc = pc.shift(-(1 - s) as i32);
        if sc == c.shift((1 - s) as i32) {
            out.push(BracketTerm {
                scalar: sc,
                weight: weight.iter().map(|x| -x).collect(),
                lambda: e.ell().neg(),
                shift,
            });
            continue;
        }
        return Err(Error::Unpairable {
            exponent: format!("{e} (coefficients {c} and {pc} are not a bracket pair)"),
        });
    }
    out.sort_by(|a, b| (&a.shift, &a.weight, &a.lambda).cmp(&(&b.shift, &b.weight, &b.lambda)));
    Ok(out)
}

/// Number of bracket terms.
pub fn term_count(op: &QOperator) -> Result<usize> {
    Ok(rebracket(op)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn exp(alpha: &[i64], gamma: &[i64]) -> QExponent {
        QExponent::from_parts(alpha, gamma, LambdaForm::zero()).unwrap()
    }

    #[test]
    fn commutation_examples() {
        // e^{pi b u} against e^{2 pi b p}
        assert_eq!(commutation_exponent(&exp(&[1], &[0]), &exp(&[0], &[1])), 1);
        // standard torus pair e^{2 pi b u}, e^{2 pi b p}
        assert_eq!(commutation_exponent(&exp(&[2], &[0]), &exp(&[0], &[1])), 2);
        let m = exp(&[3, -1], &[1, 2]);
        assert_eq!(commutation_exponent(&m, &m), 0);
    }

    #[test]
    fn product_cocycle() {
        let a = QMonomial::unit(exp(&[1], &[0]));
        let b = QMonomial::unit(exp(&[0], &[1]));
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.exponent, exp(&[1], &[1]));
        assert_eq!(ab.coeff, Laurent::v_pow(1));
        let ba = b.mul(&a).unwrap();
        assert_eq!(ab.coeff.div_unit(&ba.coeff), Some(Laurent::q_pow(1)));
        let one = QMonomial::unit(QExponent::zero(1));
        assert_eq!(one.mul(&a).unwrap(), a);
    }

    #[test]
    fn expand_simple_bracket() {
        // [u]e(-p) = e^{pi b(u - 2p)} + e^{pi b(-u - 2p)}
        let t = BracketTerm::new(vec![1], LambdaForm::zero(), vec![-1]);
        let op = expand_bracket(&t).unwrap();
        assert_eq!(
            op,
            QOperator::from_terms([(exp(&[1], &[-1]), Laurent::one()), (exp(&[-1], &[-1]), Laurent::one())])
        );
        assert_eq!(rebracket(&op).unwrap(), vec![t]);
    }

    #[test]
    fn expand_lambda_bracket() {
        let t = BracketTerm::new(vec![0], LambdaForm::single(0, 2.into()), vec![0]);
        let op = expand_bracket(&t).unwrap();
        let lam = |c: i64| QExponent::from_parts(&[0], &[0], LambdaForm::single(0, c.into())).unwrap();
        assert_eq!(
            op,
            QOperator::from_terms([(lam(2), Laurent::v_pow(1)), (lam(-2), Laurent::v_pow(-1))])
        );
    }

    #[test]
    fn expand_two_position_bracket() {
        // [v - w] e(-p_v), positions (v, w)
        let t = BracketTerm::new(vec![1, -1], LambdaForm::zero(), vec![-1, 0]);
        assert_eq!(t.twist(), -1);
        let op = expand_bracket(&t).unwrap();
        for (_, c) in op.iter() {
            assert!(c.is_one());
        }
    }

    #[test]
    fn orphan_monomial() {
        let op = QOperator::monomial(exp(&[1], &[-1]), Laurent::one());
        assert!(matches!(rebracket(&op), Err(Error::Unpairable { .. })));
        let central = QOperator::monomial(exp(&[0], &[1]), Laurent::one());
        assert!(rebracket(&central).is_err());
        assert_eq!(term_count(&QOperator::zero()).unwrap(), 0);
    }

    #[test]
    fn commutator_of_self() {
        let t = BracketTerm::new(vec![1, -1], LambdaForm::zero(), vec![-1, 1]);
        let x = expand_bracket(&t).unwrap();
        assert!(x.commutator(&x).unwrap().is_zero());
    }

    fn arb_exp(n: usize) -> impl Strategy<Value = QExponent> {
        (
            proptest::collection::vec(-3i64..=3, n),
            proptest::collection::vec(-3i64..=3, n),
            -3i64..=3,
        )
            .prop_map(|(a, g, l)| QExponent::from_parts(&a, &g, LambdaForm::single(0, l.into())).unwrap())
    }

    fn arb_op(n: usize) -> impl Strategy<Value = QOperator> {
        proptest::collection::vec((arb_exp(n), -3i32..3, -2i64..=2), 0..4)
            .prop_map(|ts| QOperator::from_terms(ts.into_iter().map(|(e, k, c)| (e, Laurent::monomial(k, c)))))
    }

    proptest! {
        #[test]
        fn pairing_is_antisymmetric_and_bilinear(a in arb_exp(3), b in arb_exp(3), c in arb_exp(3)) {
            prop_assert_eq!(commutation_exponent(&a, &b), -commutation_exponent(&b, &a));
            let ab = a.checked_add(&b).unwrap();
            prop_assert_eq!(
                commutation_exponent(&ab, &c),
                commutation_exponent(&a, &c) + commutation_exponent(&b, &c)
            );
        }

        #[test]
        fn multiplication_is_associative(x in arb_op(2), y in arb_op(2), z in arb_op(2)) {
            let left = x.mul(&y).unwrap().mul(&z).unwrap();
            let right = x.mul(&y.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn canonical_form_ignores_order(x in arb_op(2), y in arb_op(2)) {
            prop_assert_eq!(x.add(&y), y.add(&x));
            prop_assert_eq!(x.add(&y).add(&QOperator::zero()), x.add(&y));
        }

        #[test]
        fn bracket_roundtrip(w in proptest::collection::vec(-2i64..=2, 3), p in proptest::collection::vec(-2i64..=2, 3), l in -2i64..=2, k in -3i32..3) {
            prop_assume!(w.iter().any(|&x| x != 0) || l != 0);
            let t = BracketTerm::new(w, LambdaForm::single(1, l.into()), p).with_scalar(Laurent::v_pow(k));
            let op = expand_bracket(&t).unwrap();
            prop_assert_eq!(op.len(), 2);
            let back = rebracket(&op).unwrap();
            prop_assert_eq!(back.len(), 1);
            prop_assert_eq!(expand_brackets(&back).unwrap(), op);
        }
    }
}
