#![allow(dead_code)]

use std::sync::Arc;

use posrep::repbuild::{build_rep, Representation};
use posrep::rootdata::{build_cartan, CartanDatum, Family};
use posrep::words::{good_word, random_word, ReducedWord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn datum(f: Family, r: usize) -> Arc<CartanDatum> {
    Arc::new(build_cartan(f, r).unwrap())
}

pub fn good(f: Family, r: usize) -> ReducedWord {
    good_word(&datum(f, r)).unwrap()
}

pub fn good_rep(f: Family, r: usize) -> Representation {
    let d = datum(f, r);
    build_rep(&d, &good_word(&d).unwrap()).unwrap()
}

pub fn word(f: Family, r: usize, letters: &[u8]) -> ReducedWord {
    ReducedWord::longest(datum(f, r), letters.to_vec()).unwrap()
}

/// `count` distinct words reached from the good word by seeded random moves.
pub fn random_words(f: Family, r: usize, count: usize, seed: u64) -> Vec<ReducedWord> {
    let start = good(f, r);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<ReducedWord> = Vec::new();
    for _ in 0..50 * count {
        if out.len() == count {
            break;
        }
        let steps = rng.gen_range(3..40);
        let w = random_word(&start, steps, |n| rng.gen_range(0..n));
        if w != start && !out.contains(&w) {
            out.push(w);
        }
    }
    assert_eq!(out.len(), count);
    out
}

pub fn e_counts(rep: &Representation) -> Vec<usize> {
    posrep::repbuild::term_counts(rep)
        .unwrap()
        .iter()
        .map(|c| c.0)
        .collect()
}

pub fn f_counts(rep: &Representation) -> Vec<usize> {
    posrep::repbuild::term_counts(rep)
        .unwrap()
        .iter()
        .map(|c| c.1)
        .collect()
}
