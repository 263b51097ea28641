use eqol_core::checker::{eval_term, satisfies};
use eqol_core::gen::{self, StructureOptions};
use eqol_core::lang::{
    eliminate_integrals, eliminate_integrals_within, parse_classical, parse_formula, parse_term, print_classical,
    print_formula, print_term, to_dnf, Term,
};
use eqol_core::{DensityOperator, QubitSet, DEFAULT_TOL};
use proptest::prelude::*;

const TOL: f64 = DEFAULT_TOL;

fn subsets(g: &QubitSet) -> Vec<QubitSet> {
    let items: Vec<&String> = g.iter().collect();
    (0u32..(1 << items.len()))
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, q)| (*q).clone()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dnf_preserves_satisfaction(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let opts = StructureOptions { max_qubits: 3, full_admissible: true, variables: 1, ..Default::default() };
        let m = gen::structure(&mut rng, &opts);
        let f = gen::formula(&mut rng, m.register(), &gen::variable_names(1), 3);
        let d = to_dnf(&f).unwrap().to_formula();
        prop_assert_eq!(satisfies(&m, &f, TOL).unwrap(), satisfies(&m, &d, TOL).unwrap(), "{}", print_formula(&f));
    }

    #[test]
    fn integral_elimination_preserves_satisfaction(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let opts = StructureOptions { max_qubits: 3, full_admissible: true, ..Default::default() };
        let m = gen::structure(&mut rng, &opts);
        let f = gen::formula(&mut rng, m.register(), &[], 3);
        let e = eliminate_integrals(&f, m.register()).unwrap();
        prop_assert_eq!(satisfies(&m, &f, TOL).unwrap(), satisfies(&m, &e, TOL).unwrap(), "{}", print_formula(&f));
    }

    #[test]
    fn restricted_elimination_preserves_satisfaction(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let opts = StructureOptions { max_qubits: 3, full_admissible: false, ..Default::default() };
        let m = gen::structure(&mut rng, &opts);
        let f = gen::formula(&mut rng, m.register(), &[], 3);
        let e = eliminate_integrals_within(&f, m.register(), m.admissible()).unwrap();
        prop_assert_eq!(satisfies(&m, &f, TOL).unwrap(), satisfies(&m, &e, TOL).unwrap(), "{}", print_formula(&f));
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let names = gen::qubit_names(4);
        let c = gen::classical(&mut rng, &names, 4);
        prop_assert_eq!(parse_classical(&print_classical(&c)).unwrap(), c);
        let t = gen::any_term(&mut rng, &names, 4);
        prop_assert_eq!(parse_term(&print_term(&t)).unwrap(), t);
        let f = gen::any_formula(&mut rng, &names, 4);
        prop_assert_eq!(parse_formula(&print_formula(&f)).unwrap(), f);
    }

    #[test]
    fn outcomes_resolve_the_unit(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let m = gen::structure(&mut rng, &StructureOptions::default());
        for g in m.partition().alg_of() {
            let sum: f64 = subsets(&g).into_iter().map(|a| eval_term(&m, &Term::top(a, g.clone()), TOL).unwrap()).sum();
            prop_assert!((sum - 1.0).abs() < 1e-7, "sum {} over {:?}", sum, g);
        }
    }

    #[test]
    fn random_states_are_states(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = gen::rng(seed);
        let dim = 1 << n;
        for rho in [gen::density(&mut rng, dim), gen::pure_state(&mut rng, dim)] {
            prop_assert!((rho.trace() - 1.0).abs() < 1e-9);
            let min = rho.eigenvalues().unwrap().into_iter().fold(f64::INFINITY, f64::min);
            prop_assert!(min > -1e-9);
        }
        let ch = gen::channel(&mut rng, dim, 2);
        prop_assert!(ch.is_trace_preserving(1e-9));
        let out = DensityOperator::from_operator(ch.apply_density(&gen::density(&mut rng, dim)).unwrap(), 1e-8);
        prop_assert!(out.is_ok());
    }
}
