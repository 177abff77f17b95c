use proptest::prelude::*;

use slk::classify::p2_gram;
use slk::diophantine::{
    count_rank4, enumerate_rank4, is_rank4_solution, is_unipotent_i64, markov_reduce, markov_solutions, markov_value,
    rank4_values, rank4_values_i64, unipotency_equivalence_check, Rank3Coeffs, Rank4Coeffs,
};
use slk::linalg::Integer;
use slk::mutation::apply_word;

/// Solution counts for bounds 0..=6 from an independent brute-force count.
const COUNTS: [usize; 7] = [1, 1, 9, 153, 281, 569, 1209];

#[test]
fn frozen_counts() {
    for (b, &c) in COUNTS.iter().enumerate() {
        assert_eq!(count_rank4(b as u32), c, "bound {b}");
    }
    assert_eq!(enumerate_rank4(3).len(), 153);
}

#[test]
fn known_solutions() {
    for t in [[2, 2, 4, 0, 2, 2], [1, 2, 1, 3, 3, 3], [2, 1, 5, 0, 4, 2], [0, 0, 0, 0, 0, 0]] {
        assert!(is_rank4_solution(&Rank4Coeffs::from_i64(t)), "{t:?}");
    }
    assert!(!is_rank4_solution(&Rank4Coeffs::from_i64([1, 0, 0, 0, 0, 0])));
    let (q1, q2) = rank4_values(&Rank4Coeffs::from_i64([1, 0, 0, 0, 0, 0]));
    assert_eq!((q1, q2), (Integer::from(1), Integer::from(0)));
}

#[test]
fn markov_examples() {
    assert_eq!(markov_value(&Rank3Coeffs::new(3, 3, 3)), Integer::from(0));
    assert_eq!(markov_value(&Rank3Coeffs::new(3, 6, 15)), Integer::from(0));
    assert_eq!(markov_value(&Rank3Coeffs::new(1, 1, 1)), Integer::from(2));
    assert!(markov_reduce(&Rank3Coeffs::new(1, 1, 1)).is_err());
    let (canon, w) = markov_reduce(&Rank3Coeffs::new(0, 0, 0)).unwrap();
    assert!(canon.is_zero() && w.is_empty());
    let sols = markov_solutions(15);
    assert!(sols.contains(&(3, 6, 15)) && sols.contains(&(-3, -6, 15)) && sols.contains(&(0, 0, 0)));
    assert!(!sols.contains(&(-3, -3, -3)));
}

#[test]
fn big_markov_triple_reduces() {
    // 3 * (29, 433, 37666)
    let t = Rank3Coeffs { a: Integer::from(87), b: Integer::from(1299), c: Integer::from(112_998) };
    assert_eq!(markov_value(&t), Integer::from(0));
    let (canon, w) = markov_reduce(&t).unwrap();
    assert_eq!(canon, Rank3Coeffs::new(3, 3, 3));
    assert_eq!(apply_word(&t.gram(), &w).unwrap(), p2_gram());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn pencil_identities(t in proptest::array::uniform6(-9i64..=9)) {
        prop_assert!(unipotency_equivalence_check(&Rank4Coeffs::from_i64(t)));
    }

    #[test]
    fn machine_and_exact_values_agree(t in proptest::array::uniform6(-1000i64..=1000)) {
        let (q1, q2) = rank4_values(&Rank4Coeffs::from_i64(t));
        let (m1, m2) = rank4_values_i64(t).unwrap();
        prop_assert_eq!(q1, Integer::from(m1));
        prop_assert_eq!(q2, Integer::from(m2));
        let exact = Rank4Coeffs::from_i64(t).gram().lattice().is_unipotent();
        if let Some(u) = is_unipotent_i64(t) {
            prop_assert_eq!(u, exact);
        }
    }

    #[test]
    fn reversal_preserves_solutions(i in 0usize..1209) {
        let sols = enumerate_rank4(6);
        let t = Rank4Coeffs::from_i64(sols[i % sols.len()]);
        prop_assert!(is_rank4_solution(&t.reversed()));
    }
}
