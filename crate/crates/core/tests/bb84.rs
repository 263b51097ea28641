use std::collections::BTreeSet;

use eqol_core::checker::satisfies;
use eqol_core::scenarios::bb84::{
    all_positions, bb84_check, bb84_formula, bb84_state, key_mismatch, position_distribution, Bb84Error, Prob,
};

/// Recount of one position, walking Alice's, Eve's and Bob's
/// choices as a probability tree. Index `a ka b kb`.
fn tree(eavesdrop: bool) -> [Prob; 16] {
    let mut out = [Prob::from_integer(0); 16];
    let eighth = Prob::new(1, 8);
    for (idx, slot) in out.iter_mut().enumerate() {
        let (a, ka, b, kb) = (idx >> 3 & 1, idx >> 2 & 1, idx >> 1 & 1, idx & 1);
        // chance Bob reads kb
        let read = |basis: usize, bit: usize| if basis == b { Prob::from_integer((bit == kb) as u64) } else { Prob::new(1, 2) };
        let p = if !eavesdrop {
            read(a, ka)
        } else {
            (0..2)
                .map(|e| {
                    let eve_bits: Vec<(usize, Prob)> =
                        if e == a { vec![(ka, Prob::from_integer(1))] } else { vec![(0, Prob::new(1, 2)), (1, Prob::new(1, 2))] };
                    eve_bits.into_iter().map(|(k, pk)| pk * read(e, k)).fold(Prob::from_integer(0), |x, y| x + y) * Prob::new(1, 2)
                })
                .fold(Prob::from_integer(0), |x, y| x + y)
        };
        *slot = eighth * p;
    }
    out
}

#[test]
fn per_position_distribution_matches_the_tree() {
    for eve in [false, true] {
        assert_eq!(position_distribution(eve), tree(eve));
        let total = tree(eve).iter().fold(Prob::from_integer(0), |x, y| x + y);
        assert_eq!(total, Prob::from_integer(1));
    }
}

#[test]
fn sifted_error_rate() {
    for n in 1..=3 {
        let sift = all_positions(n);
        let honest = bb84_state(n, false).unwrap().sifted(&sift).unwrap();
        assert_eq!(honest.probability(&key_mismatch(&sift)), Prob::from_integer(0));
        let eve = bb84_state(n, true).unwrap().sifted(&sift).unwrap();
        let keep = (0..n).fold(Prob::from_integer(1), |acc, _| acc * Prob::new(3, 4));
        assert_eq!(eve.probability(&key_mismatch(&sift)), Prob::from_integer(1) - keep);
    }
}

#[test]
fn partial_sift() {
    let sift: BTreeSet<usize> = [2].into();
    let r = bb84_check(3, true, &sift, 0.2, false, 1e-9).unwrap();
    assert_eq!(r.consequent_exact, Prob::new(1, 4));
    assert!(r.thresholds.iter().all(|(a, h)| *h == (*a <= 0.25)));
    let honest = bb84_check(2, false, &sift, 0.05, true, 1e-9).unwrap();
    assert_eq!(honest.consequent, 0.0);
}

#[test]
fn honest_formula_fails() {
    let sift = all_positions(2);
    let m = bb84_state(2, false).unwrap().sifted(&sift).unwrap().structure(false).unwrap();
    for a in [1e-6, 0.05, 0.5, 1.0] {
        assert!(!satisfies(&m, &bb84_formula(2, &sift, a).unwrap(), 1e-9).unwrap());
    }
}

#[test]
fn bad_inputs() {
    assert!(matches!(bb84_state(0, false), Err(Bb84Error::OutOfRange { .. })));
    assert!(matches!(bb84_formula(2, &BTreeSet::new(), 0.1), Err(Bb84Error::EmptySift)));
    assert!(matches!(bb84_formula(2, &[3].into(), 0.1), Err(Bb84Error::BadPosition(3))));
    assert!(matches!(bb84_formula(2, &[1].into(), 0.0), Err(Bb84Error::BadThreshold(_))));
}
