//! Integer Laurent polynomials in `v = q^{1/2}`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Sparse integer Laurent polynomial in `v`, terms sorted by exponent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Laurent {
    terms: Vec<(i32, i64)>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::v_pow(0)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i32, c: i64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Laurent { terms: vec![(exp, c)] }
        }
    }

    /// `v^k`.
    pub fn v_pow(k: i32) -> Self {
        Laurent { terms: vec![(k, 1)] }
    }

    /// `q^k = v^{2k}`.
    pub fn q_pow(k: i32) -> Self {
        Self::v_pow(2 * k)
    }

    /// Quantum integer `[n]_q = (q^n - q^{-n}) / (q - q^{-1})`.
    pub fn q_int(n: i32) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let m = n.abs();
        let sign = n.signum() as i64;
        let terms = (0..m).map(|j| (2 * (m - 1 - 2 * j), sign)).rev().collect();
        Laurent { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut v: Vec<(i32, i64)> = terms.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(i32, i64)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = last.1.checked_add(c).expect("coefficient overflow"),
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Laurent { terms: out }
    }

    pub fn terms(&self) -> &[(i32, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms == [(0, 1)]
    }

    /// `Some(k)` when the polynomial is exactly `v^k`.
    pub fn as_unit_monomial(&self) -> Option<i32> {
        match self.terms.as_slice() {
            [(e, 1)] => Some(*e),
            _ => None,
        }
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        Laurent {
            terms: self.terms.iter().map(|&(e, c)| (e + k, c)).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Laurent {
            terms: self
                .terms
                .iter()
                .map(|&(e, x)| (e, x.checked_mul(c).expect("coefficient overflow")))
                .collect(),
        }
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    /// Exact quotient by `v^k * c` style unit monomials; `None` if `other` is
    /// not a unit monomial or the division is inexact.
    pub fn div_unit(&self, other: &Laurent) -> Option<Laurent> {
        match other.terms.as_slice() {
            [(e, 1)] => Some(self.shift(-e)),
            [(e, -1)] => Some(-self.shift(-e)),
            _ => None,
        }
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Laurent) -> Option<Laurent> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (d0, dc) = other.terms[0];
        let mut rem = self.clone();
        let mut quot = Vec::new();
        let bound = self.max_exp().unwrap() - other.max_exp().unwrap();
        while let Some(&(e, c)) = rem.terms.first() {
            if c % dc != 0 {
                return None;
            }
            let qe = e - d0;
            if qe > bound {
                return None;
            }
            let qc = c / dc;
            quot.push((qe, qc));
            rem = &rem - &(other.shift(qe).scale(qc));
        }
        Some(Laurent::from_terms(quot))
    }
}

impl Add for &Laurent {
    type Output = Laurent;

    fn add(self, rhs: &Laurent) -> Laurent {
        let (a, b) = (&self.terms, &rhs.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a[i].1.checked_add(b[j].1).expect("coefficient overflow");
                    if c != 0 {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Laurent { terms: out }
    }
}

impl Add for Laurent {
    type Output = Laurent;

    fn add(self, rhs: Laurent) -> Laurent {
        &self + &rhs
    }
}

impl AddAssign<&Laurent> for Laurent {
    fn add_assign(&mut self, rhs: &Laurent) {
        if rhs.terms.len() == 1 && self.terms.len() == 1 && self.terms[0].0 == rhs.terms[0].0 {
            let c = self.terms[0]
                .1
                .checked_add(rhs.terms[0].1)
                .expect("coefficient overflow");
            if c == 0 {
                self.terms.clear();
            } else {
                self.terms[0].1 = c;
            }
            return;
        }
        *self = &*self + rhs;
    }
}

impl Neg for &Laurent {
    type Output = Laurent;

    fn neg(self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|&(e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for Laurent {
    type Output = Laurent;

    fn neg(self) -> Laurent {
        -&self
    }
}

impl Sub for &Laurent {
    type Output = Laurent;

    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &(-rhs)
    }
}

impl Sub for Laurent {
    type Output = Laurent;

    fn sub(self, rhs: Laurent) -> Laurent {
        &self - &rhs
    }
}

impl Mul for &Laurent {
    type Output = Laurent;

    fn mul(self, rhs: &Laurent) -> Laurent {
        if self.terms.len() == 1 && rhs.terms.len() == 1 {
            let (e1, c1) = self.terms[0];
            let (e2, c2) = rhs.terms[0];
            return Laurent::monomial(e1 + e2, c1.checked_mul(c2).expect("coefficient overflow"));
        }
        Laurent::from_terms(self.terms.iter().flat_map(|&(e1, c1)| {
            rhs.terms
                .iter()
                .map(move |&(e2, c2)| (e1 + e2, c1.checked_mul(c2).expect("coefficient overflow")))
        }))
    }
}

impl Mul for Laurent {
    type Output = Laurent;

    fn mul(self, rhs: Laurent) -> Laurent {
        &self * &rhs
    }
}

fn fmt_q_power(f: &mut fmt::Formatter<'_>, vexp: i32) -> fmt::Result {
    if vexp % 2 == 0 {
        match vexp / 2 {
            1 => write!(f, "q"),
            k => write!(f, "q^{k}"),
        }
    } else {
        write!(f, "q^({vexp}/2)")
    }
}

impl fmt::Display for Laurent {
    /// Renders in powers of `q`, e.g. `q + q^-1` or `q^(1/2)`; quantum
    /// integers print as `[n]_q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for n in 2..=16 {
            if *self == Laurent::q_int(n) {
                return write!(f, "[{n}]_q");
            }
        }
        for (idx, &(e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if idx == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            if e == 0 {
                write!(f, "{a}")?;
            } else {
                if a != 1 {
                    write!(f, "{a}")?;
                }
                fmt_q_power(f, e)?;
            }
        }
        Ok(())
    }
}
