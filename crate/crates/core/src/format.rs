//! Text and JSON forms of operators.
//!
//! Variables are named after Lusztig labels: `u<i>.<k>` and `p<i>.<k>` for
//! the `k`-th occurrence (from the right) of letter `i`, and `L<i>` for
//! `lambda_i`. Text output uses the bracket notation, e.g.
//! `[u3.1] e(-p3.1)`; JSON stores the monomials and, for reading, the
//! brackets they pair into.

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::qtorus::{rebracket, BracketTerm, LambdaForm, QExponent, QOperator};
use crate::rootdata::CartanDatum;
use crate::words::ReducedWord;

/// `"i.k"` for every position of the word.
pub fn variable_names(word: &ReducedWord) -> Vec<String> {
    word.lusztig_labels().iter().map(|(i, k)| format!("{i}.{k}")).collect()
}

fn rational_text(c: Rational64) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("({c})")
    }
}

/// Signed sum of `coeff * name` terms, e.g. `u1.1 - 2u2.1 + L1`.
fn signed_sum(terms: &[(Rational64, String)]) -> String {
    let mut out = String::new();
    for (c, name) in terms.iter().filter(|(c, _)| !c.is_zero()) {
        let neg = *c < Rational64::zero();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            out.push_str(&rational_text(a));
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `u`/`L` linear form as text.
pub fn linear_form(weight: &[i64], lambda: &LambdaForm, names: &[String], datum: &CartanDatum) -> String {
    let mut terms: Vec<(Rational64, String)> = weight
        .iter()
        .zip(names)
        .map(|(&c, n)| (Rational64::from_integer(c), format!("u{n}")))
        .collect();
    terms.extend(lambda.terms().map(|(i, c)| (c, format!("L{}", datum.label(i)))));
    signed_sum(&terms)
}

fn shift_form(shift: &[i64], names: &[String]) -> String {
    let terms: Vec<(Rational64, String)> = shift
        .iter()
        .zip(names)
        .map(|(&c, n)| (Rational64::from_integer(c), format!("p{n}")))
        .collect();
    signed_sum(&terms)
}

pub fn render_bracket(t: &BracketTerm, word: &ReducedWord) -> String {
    let names = variable_names(word);
    let body = format!(
        "[{}] e({})",
        linear_form(&t.weight, &t.lambda, &names, word.datum()),
        shift_form(&t.shift, &names)
    );
    if t.scalar.is_one() {
        body
    } else if t.scalar.terms().len() == 1 || t.scalar.to_string().starts_with('[') {
        format!("{} {body}", t.scalar)
    } else {
        format!("({}) {body}", t.scalar)
    }
}

fn render_monomial(e: &QExponent, c: &Laurent, word: &ReducedWord) -> String {
    let names = variable_names(word);
    let mut terms: Vec<(Rational64, String)> = (0..e.positions())
        .map(|k| (Rational64::from_integer(e.alpha_at(k)), format!("u{}", names[k])))
        .collect();
    terms.extend((0..e.positions()).map(|k| (Rational64::from_integer(2 * e.gamma_at(k)), format!("p{}", names[k]))));
    terms.extend(e.ell().terms().map(|(i, x)| (x, format!("L{}", word.datum().label(i)))));
    let m = format!("e^(pi b ({}))", signed_sum(&terms));
    if c.is_one() {
        m
    } else {
        format!("({c}) {m}")
    }
}

/// Bracket rendering when the operator pairs up, monomials otherwise.
pub fn render_operator(op: &QOperator, word: &ReducedWord) -> String {
    if op.is_zero() {
        return "0".into();
    }
    match rebracket(op) {
        Ok(ts) => ts
            .iter()
            .map(|t| render_bracket(t, word))
            .collect::<Vec<_>>()
            .join(" + "),
        Err(_) => op
            .iter()
            .map(|(e, c)| render_monomial(e, c, word))
            .collect::<Vec<_>>()
            .join(" + "),
    }
}

fn rational_json(c: Rational64) -> Value {
    if c.is_integer() {
        json!(c.to_integer())
    } else {
        json!(c.to_string())
    }
}

fn parse_rational(v: &Value) -> Result<Rational64> {
    if let Some(i) = v.as_i64() {
        return Ok(Rational64::from_integer(i));
    }
    let s = v
        .as_str()
        .ok_or_else(|| Error::Parse(format!("expected a rational, got {v}")))?;
    s.parse::<Rational64>()
        .map_err(|_| Error::Parse(format!("bad rational '{s}'")))
}

fn laurent_json(c: &Laurent) -> Value {
    Value::Array(c.terms().iter().map(|&(e, x)| json!([e, x])).collect())
}

fn parse_laurent(v: &Value) -> Result<Laurent> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("coefficient must be a list".into()))?;
    let mut terms = Vec::with_capacity(arr.len());
    for t in arr {
        let pair = t.as_array().filter(|p| p.len() == 2);
        let (e, c) = pair
            .and_then(|p| Some((p[0].as_i64()?, p[1].as_i64()?)))
            .ok_or_else(|| Error::Parse(format!("bad coefficient term {t}")))?;
        terms.push((e as i32, c));
    }
    Ok(Laurent::from_terms(terms))
}

fn vector_json(v: impl Iterator<Item = i64>, names: &[String]) -> Value {
    let mut m = Map::new();
    for (c, n) in v.zip(names) {
        if c != 0 {
            m.insert(n.clone(), json!(c));
        }
    }
    Value::Object(m)
}

fn lambda_json(l: &LambdaForm, datum: &CartanDatum) -> Value {
    let mut m = Map::new();
    for (i, c) in l.terms() {
        m.insert(datum.label(i).to_string(), rational_json(c));
    }
    Value::Object(m)
}

fn parse_vector(v: &Value, names: &[String]) -> Result<Vec<i64>> {
    let mut out = vec![0; names.len()];
    let Some(m) = v.as_object() else {
        return Err(Error::Parse(format!("expected an object, got {v}")));
    };
    for (key, x) in m {
        let k = names
            .iter()
            .position(|n| n == key)
            .ok_or_else(|| Error::Parse(format!("unknown variable '{key}'")))?;
        out[k] = x
            .as_i64()
            .ok_or_else(|| Error::Parse(format!("non-integer entry for '{key}'")))?;
    }
    Ok(out)
}

fn parse_lambda(v: &Value, datum: &CartanDatum) -> Result<LambdaForm> {
    let Some(m) = v.as_object() else {
        return Err(Error::Parse(format!("expected an object, got {v}")));
    };
    let mut terms = Vec::new();
    for (key, x) in m {
        let label: u8 = key.parse().map_err(|_| Error::Parse(format!("bad node '{key}'")))?;
        terms.push((datum.index_of(label)?, parse_rational(x)?));
    }
    Ok(LambdaForm::from_terms(terms))
}

pub fn monomial_json(e: &QExponent, c: &Laurent, word: &ReducedWord) -> Value {
    let names = variable_names(word);
    json!({
        "alpha": vector_json(e.alpha().iter().map(|&x| x as i64), &names),
        "gamma": vector_json(e.gamma().iter().map(|&x| x as i64), &names),
        "ell": lambda_json(e.ell(), word.datum()),
        "coeff": laurent_json(c),
    })
}

pub fn bracket_json(t: &BracketTerm, word: &ReducedWord) -> Value {
    let names = variable_names(word);
    json!({
        "scalar": laurent_json(&t.scalar),
        "L": {
            "u": vector_json(t.weight.iter().copied(), &names),
            "lambda": lambda_json(&t.lambda, word.datum()),
            "const": 0,
        },
        "P": vector_json(t.shift.iter().copied(), &names),
    })
}

/// JSON document for an operator on a word.
pub fn operator_json(op: &QOperator, word: &ReducedWord) -> Value {
    let monomials: Vec<Value> = op.iter().map(|(e, c)| monomial_json(e, c, word)).collect();
    let brackets = match rebracket(op) {
        Ok(ts) => Value::Array(ts.iter().map(|t| bracket_json(t, word)).collect()),
        Err(_) => Value::Null,
    };
    json!({
        "type": word.datum().name(),
        "word": word.letters(),
        "monomials": monomials,
        "brackets": brackets,
    })
}

pub fn parse_monomial(v: &Value, word: &ReducedWord) -> Result<(QExponent, Laurent)> {
    let names = variable_names(word);
    let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("monomial missing '{k}'")));
    let alpha = parse_vector(field("alpha")?, &names)?;
    let gamma = parse_vector(field("gamma")?, &names)?;
    let ell = parse_lambda(field("ell")?, word.datum())?;
    let coeff = parse_laurent(field("coeff")?)?;
    Ok((QExponent::from_parts(&alpha, &gamma, ell)?, coeff))
}

pub fn parse_bracket(v: &Value, word: &ReducedWord) -> Result<BracketTerm> {
    let names = variable_names(word);
    let field = |o: &Value, k: &str| {
        o.get(k)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("bracket missing '{k}'")))
    };
    let l = field(v, "L")?;
    if let Some(c) = l.get("const") {
        if !parse_rational(c)?.is_zero() {
            return Err(Error::Parse("nonzero bracket constants are not supported".into()));
        }
    }
    Ok(BracketTerm {
        scalar: parse_laurent(&field(v, "scalar")?)?,
        weight: parse_vector(&field(&l, "u")?, &names)?,
        lambda: parse_lambda(&field(&l, "lambda")?, word.datum())?,
        shift: parse_vector(&field(v, "P")?, &names)?,
    })
}

/// Read an operator back from [`operator_json`] output. Monomials are
/// authoritative; brackets, when present, must agree with them.
pub fn parse_operator(v: &Value, word: &ReducedWord) -> Result<QOperator> {
    let mons = v
        .get("monomials")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("document missing 'monomials'".into()))?;
    let op = QOperator::from_terms(
        mons.iter()
            .map(|m| parse_monomial(m, word))
            .collect::<Result<Vec<_>>>()?,
    );
    if let Some(bs) = v.get("brackets").and_then(Value::as_array) {
        let ts = bs.iter().map(|b| parse_bracket(b, word)).collect::<Result<Vec<_>>>()?;
        if crate::qtorus::expand_brackets(&ts)? != op {
            return Err(Error::Parse("brackets disagree with monomials".into()));
        }
    }
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repbuild::{build_e, build_f, build_rep};
    use crate::rootdata::{build_cartan, Family};
    use crate::words::good_word;
    use std::sync::Arc;

    fn a(n: usize) -> ReducedWord {
        good_word(&Arc::new(build_cartan(Family::A, n).unwrap())).unwrap()
    }

    #[test]
    fn bracket_notation() {
        let w = a(3);
        assert_eq!(render_operator(&build_e(&w, 3).unwrap(), &w), "[u3.1] e(-p3.1)");
        let w = a(1);
        assert_eq!(render_operator(&build_f(&w, 1).unwrap(), &w), "[-u1.1 - 2L1] e(p1.1)");
        assert_eq!(render_operator(&QOperator::zero(), &w), "0");
    }

    #[test]
    fn scalar_prefix() {
        let w = a(1);
        let t = BracketTerm::new(vec![1], LambdaForm::zero(), vec![-1]).with_scalar(Laurent::q_int(2));
        assert_eq!(render_bracket(&t, &w), "[2]_q [u1.1] e(-p1.1)");
    }

    #[test]
    fn json_round_trip() {
        let w = a(3);
        let rep = build_rep(w.datum(), &w).unwrap();
        for (_, op) in rep.named_operators() {
            let doc = operator_json(op, &w);
            let back = parse_operator(&doc, &w).unwrap();
            assert_eq!(&back, op);
            assert_eq!(
                serde_json::to_string(&operator_json(&back, &w)).unwrap(),
                serde_json::to_string(&doc).unwrap()
            );
        }
    }

    #[test]
    fn rejects_constants() {
        let w = a(1);
        let t = BracketTerm::new(vec![1], LambdaForm::zero(), vec![-1]);
        let mut v = bracket_json(&t, &w);
        v["L"]["const"] = json!(1);
        assert!(parse_bracket(&v, &w).is_err());
    }
}
