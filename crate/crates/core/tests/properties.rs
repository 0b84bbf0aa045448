mod common;

use common::*;
use num_rational::Rational64;
use posrep::crosscheck::{classical_flip, cluster_maps};
use posrep::repbuild::build_rep;
use posrep::rootdata::Family;
use posrep::verify::check_relations;
use posrep::words::random_word;
use proptest::prelude::*;

fn positive() -> impl Strategy<Value = Rational64> {
    (1i64..200, 1i64..200).prop_map(|(a, b)| Rational64::new(a, b))
}

proptest! {
    #[test]
    fn flip_is_an_involution(a in positive(), b in positive(), c in positive()) {
        let (x, y, z) = classical_flip(a, b, c).unwrap();
        prop_assert_eq!(classical_flip(x, y, z).unwrap(), (a, b, c));
    }

    #[test]
    fn cluster_round_trip(n in 1usize..6, seed in proptest::collection::vec(positive(), 21)) {
        let map = cluster_maps(n).unwrap();
        let x = &seed[..map.lusztig.len()];
        let back = map.minors_to_lusztig(&map.lusztig_to_minors(x).unwrap()).unwrap();
        prop_assert_eq!(back.as_slice(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_a3_words_satisfy_relations(moves in proptest::collection::vec(0usize..64, 0..30)) {
        let start = good(Family::A, 3);
        let mut it = moves.iter();
        let w = random_word(&start, moves.len(), |n| it.next().unwrap() % n);
        let rep = build_rep(w.datum(), &w).unwrap();
        prop_assert!(check_relations(&rep).unwrap().passed());
    }
}
