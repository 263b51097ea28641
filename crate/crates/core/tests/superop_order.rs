use eqol_core::gen;
use eqol_core::matrix::{ComplexMatrix, Operator};
use eqol_core::{DensityOperator, SuperOperator, C64};
use rand::Rng;

const TOL: f64 = 1e-9;

/// Trace of `E(rho)` from the Kraus sum, computed entrywise.
fn applied_trace_oracle(e: &SuperOperator, rho: &DensityOperator) -> f64 {
    let r = rho.to_dense();
    let d = e.dim();
    let mut total = 0.0;
    for k in e.kraus() {
        let k = k.to_dense();
        for i in 0..d {
            for j in 0..d {
                for l in 0..d {
                    total += (k.get(i, j) * r.get(j, l) * k.get(i, l).conj()).re;
                }
            }
        }
    }
    total
}

#[test]
fn applied_trace_matches_the_kraus_sum() {
    let mut rng = gen::rng(31);
    for _ in 0..40 {
        let dim = 1 << rng.gen_range(1..=2);
        let e = gen::kraus_map(&mut rng, dim, 2);
        let rho = gen::density(&mut rng, dim);
        assert!((e.applied_trace(&rho).unwrap() - applied_trace_oracle(&e, &rho)).abs() < 1e-10);
    }
}

#[test]
fn global_order_agrees_with_sampling() {
    let mut rng = gen::rng(32);
    let (mut ordered, mut unordered) = (0, 0);
    for i in 0..60 {
        let dim = 1 << rng.gen_range(1..=2);
        let e1 = gen::kraus_map(&mut rng, dim, 1);
        let e2 = if i % 2 == 0 { e1.add(&gen::kraus_map(&mut rng, dim, 1)).unwrap() } else { gen::kraus_map(&mut rng, dim, 2) };
        let global = e1.leq_global(&e2, TOL).unwrap();
        let samples: Vec<DensityOperator> = (0..60).map(|_| gen::density(&mut rng, dim)).collect();
        if global {
            ordered += 1;
            for rho in &samples {
                assert!(e1.leq_at(&e2, rho, TOL).unwrap());
            }
            assert!(e1.leq_global_witness(&e2, TOL).unwrap().is_none());
        } else {
            unordered += 1;
            let w = e1.leq_global_witness(&e2, TOL).unwrap().expect("witness");
            assert!(!e1.leq_at(&e2, &w, TOL).unwrap());
            assert!((applied_trace_oracle(&e1, &w) - applied_trace_oracle(&e2, &w)) > TOL);
        }
    }
    assert!(i32::min(ordered, unordered) > 0, "{ordered} ordered, {unordered} unordered");
}

#[test]
fn sums_dominate_their_summands() {
    let mut rng = gen::rng(33);
    for _ in 0..20 {
        let a = gen::kraus_map(&mut rng, 4, 2);
        let b = gen::kraus_map(&mut rng, 4, 1);
        assert!(a.leq_global(&a.add(&b).unwrap(), TOL).unwrap());
        assert!(SuperOperator::null(4).leq_global(&a, TOL).unwrap());
    }
}

#[test]
fn order_on_a_diagonal_pair() {
    // E1 = |0><0| . |0><0|, E2 = |1><1| . |1><1|: incomparable, each witness a basis state.
    let proj = |i: usize| {
        let mut m = ComplexMatrix::zeros(2, 2);
        m.set(i, i, C64::new(1.0, 0.0));
        SuperOperator::conjugation(Operator::Dense(m))
    };
    let (e0, e1) = (proj(0), proj(1));
    assert!(!e0.leq_global(&e1, TOL).unwrap());
    let w = e0.leq_global_witness(&e1, TOL).unwrap().unwrap();
    assert!((w.population(0) - 1.0).abs() < 1e-9);
    assert!(e0.leq_at(&e1, &DensityOperator::basis_state(2, 1), TOL).unwrap());
    assert!(e0.eqsim_at(&e1, &DensityOperator::maximally_mixed(2), TOL).unwrap());
}
