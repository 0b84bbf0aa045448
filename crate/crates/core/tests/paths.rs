mod common;

use common::*;
use posrep::repbuild::build_rep;
use posrep::rootdata::Family;
use posrep::verify::{path_independence, transport_rep};
use posrep::words::{braid_path, enumerate_words};

#[test]
fn every_a3_word() {
    let start = good(Family::A, 3);
    let words = enumerate_words(&start, 100);
    assert_eq!(words.len(), 16);
    let rep = build_rep(start.datum(), &start).unwrap();
    for (k, w) in words.iter().enumerate() {
        let moved = transport_rep(&rep, w, &braid_path(&start, w).unwrap()).unwrap();
        let direct = build_rep(w.datum(), w).unwrap();
        for (a, b) in moved.generators.iter().zip(&direct.generators) {
            assert_eq!(a, b, "{w}");
        }
        let via = &words[(k * 7 + 3) % words.len()];
        let report = path_independence(&start, w, via).unwrap();
        assert!(report.passed(), "{:?}", report.witnesses);
    }
}

#[test]
fn d4_random_pairs() {
    let ws = random_words(Family::D, 4, 3, 5);
    let report = path_independence(&ws[0], &ws[1], &ws[2]).unwrap();
    assert!(report.passed(), "{:?}", report.witnesses);
}

#[test]
fn same_word() {
    let w = good(Family::A, 2);
    assert!(path_independence(&w, &w, &w).unwrap().passed());
}
