//! The Bell-state entanglement argument.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::checker::{
    satisfies, verify_derivation, Axiom, CheckError, DerivationReport, DerivationScript, Justification, Partition,
    ScriptStep, StateSpec, Structure, Template,
};
use crate::density::DensityOperator;
use crate::gen;
use crate::lang::{parse_formula, Formula};
use crate::register::Register;
use crate::valuation::ValuationSet;

pub const QB1: &str = "qb1";
pub const QB2: &str = "qb2";

pub fn bell_register() -> Register {
    Register::new([QB1, QB2]).expect("valid names")
}

/// `(|01> + |10>) / sqrt 2`.
pub fn bell_state() -> DensityOperator {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let psi = [C64::new(0.0, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(0.0, 0.0)];
    DensityOperator::pure(&psi, 1e-12).expect("unit vector")
}

/// `S = {qB}`; `V = {01, 10}`, or every valuation with `full_admissible`.
pub fn bell_structure(full_admissible: bool) -> Structure {
    let r = bell_register();
    let v = if full_admissible {
        ValuationSet::all(2)
    } else {
        ValuationSet::from_bitstrings(2, ["01", "10"]).expect("two-bit strings")
    };
    let s = Partition::whole(&r);
    Structure::new(r, v, s, StateSpec::Global(bell_state()), BTreeMap::new()).expect("valid structure")
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellFormulas {
    /// `T[{};qB] = O`, `T[qB;qB] = O`, `T[{qb1};qB] = 1/2.Id`, `T[{qb2};qB] = 1/2.Id`.
    pub gammas: [Formula; 4],
    /// The conjunction of the four.
    pub gamma: Formula,
    /// `([qB] /\ gamma) => (![{qb1}] /\ ![{qb2}])`
    pub eta: Formula,
    /// `gamma2 /\ (O < T[{qb1};{qb1}]) /\ (O < T[{qb2};{qb2}])`, never true on product states.
    pub product_witness: Formula,
}

fn f(s: &str) -> Formula {
    parse_formula(s).expect("fixed formula text")
}

pub const GAMMA: [&str; 4] = [
    "T[{};{qb1,qb2}] = O",
    "T[{qb1,qb2};{qb1,qb2}] = O",
    "T[{qb1};{qb1,qb2}] = 1/2.Id",
    "T[{qb2};{qb1,qb2}] = 1/2.Id",
];

pub fn bell_formulas() -> BellFormulas {
    let gammas = GAMMA.map(f);
    let gamma = Formula::conj(gammas.iter().cloned());
    let eta = Formula::implies(
        Formula::and(f("[{qb1,qb2}]"), gamma.clone()),
        Formula::and(f("![{qb1}]"), f("![{qb2}]")),
    );
    let product_witness = Formula::conj([
        gammas[1].clone(),
        f("O < T[{qb1};{qb1}]"),
        f("O < T[{qb2};{qb2}]"),
    ]);
    BellFormulas { gammas, gamma, eta, product_witness }
}

fn step(formula: &str, just: Justification) -> ScriptStep {
    ScriptStep { formula: String::from(formula), just }
}

/// Thirteen steps ending in `[{qb1}] => QF` under the premises `[qB]`, gamma
/// and positivity of the one-qubit terms.
pub fn bell_script() -> DerivationScript {
    let gamma = GAMMA.join(" /\\ ");
    let t1 = "T[{qb1};{qb1}]";
    let t2 = "T[{qb2};{qb2}]";
    let t12 = "T[{qb1,qb2};{qb1,qb2}]";
    let axiom_from = |axiom, from: Vec<usize>| Justification::Axiom { axiom, from: Some(from), rcf: None };
    let template_from = |template, from: Vec<usize>| Justification::Template { template, from: Some(from) };
    let steps = alloc::vec![
        step("[{qb1,qb2}]", Justification::Premise),
        step("[{qb1}]", Justification::Hypothesis),
        step("[{qb1,qb2}] => ([{qb1}] => [{qb2}])", axiom_from(Axiom::SubDiff, Vec::new())),
        step("[{qb1}] => [{qb2}]", Justification::Qmp(1, 3)),
        step("[{qb2}]", Justification::Qmp(2, 4)),
        step(&gamma, Justification::Premise),
        step(&format!("{t12} = O"), axiom_from(Axiom::QTaut, alloc::vec![6])),
        step(&format!("([{{qb1}}] /\\ [{{qb2}}]) => ({t12} = {t1} ox {t2})"), Justification::axiom(Axiom::Mo1)),
        step(&format!("{t1} ox {t2} = O"), template_from(Template::LeqTrans, alloc::vec![2, 5, 7, 8])),
        step(&format!("(O < {t1}) /\\ (O < {t2})"), Justification::Premise),
        step(&format!("O < {t1} ox {t2}"), template_from(Template::PosTensor, alloc::vec![2, 5, 10])),
        step("QF", template_from(Template::Contra, alloc::vec![9, 11])),
        step("[{qb1}] => QF", Justification::Discharge(2, 12)),
    ];
    DerivationScript { qubits: Some(bell_register()), steps }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellReport {
    /// `[qB] /\ gamma` on the Bell structure, for `V = {01,10}` and `V = 2^qB`.
    pub gamma_holds: [bool; 2],
    pub eta_holds: [bool; 2],
    /// Values of `T[A;qB]` for `A = {}, qB, {qb1}, {qb2}`.
    pub values: [f64; 4],
    pub samples: usize,
    /// Product structures satisfying the witness formula; expected zero.
    pub product_satisfying: usize,
    pub derivation: DerivationReport,
}

impl BellReport {
    pub fn passed(&self) -> bool {
        self.gamma_holds.iter().all(|b| *b)
            && self.eta_holds.iter().all(|b| *b)
            && self.product_satisfying == 0
            && self.derivation.is_valid()
    }
}

/// Random product structure `S = {{qb1},{qb2}}`, `rho = rho1 (x) rho2`.
pub fn product_structure(rng: &mut gen::GenRng) -> Structure {
    let r = bell_register();
    let s = Partition::discrete(&r);
    let block = |rng: &mut gen::GenRng| match rand::Rng::gen_range(rng, 0..4) {
        0 => gen::pure_state(rng, 2),
        1 => DensityOperator::basis_state(2, rand::Rng::gen_range(rng, 0..2)),
        _ => gen::density(rng, 2),
    };
    let states = alloc::vec![block(rng), block(rng)];
    Structure::new(r, ValuationSet::all(2), s, StateSpec::Blocks(states), BTreeMap::new()).expect("valid structure")
}

pub fn bell_check(samples: usize, seed: u64, tol: f64) -> Result<BellReport, CheckError> {
    let fs = bell_formulas();
    let qb = f("[{qb1,qb2}]");
    let mut gamma_holds = [false; 2];
    let mut eta_holds = [false; 2];
    for (k, full) in [false, true].into_iter().enumerate() {
        let m = bell_structure(full);
        gamma_holds[k] = satisfies(&m, &Formula::and(qb.clone(), fs.gamma.clone()), tol)?;
        eta_holds[k] = satisfies(&m, &fs.eta, tol)?;
    }
    let m = bell_structure(false);
    let mut values = [0.0; 4];
    for (k, g) in fs.gammas.iter().enumerate() {
        if let Formula::Eq(t, _) = g {
            values[k] = crate::checker::eval_term(&m, t, tol)?;
        }
    }
    let mut rng = gen::rng(seed);
    let mut product_satisfying = 0;
    for _ in 0..samples {
        let p = product_structure(&mut rng);
        if satisfies(&p, &fs.product_witness, tol)? {
            product_satisfying += 1;
        }
    }
    let derivation = verify_derivation(&bell_script()).expect("script parses");
    Ok(BellReport { gamma_holds, eta_holds, values, samples, product_satisfying, derivation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn script_replays() {
        let r = verify_derivation(&bell_script()).unwrap();
        for s in &r.steps {
            assert!(s.status.is_accepted(), "step {}: {:?}", s.index, s.status);
        }
        assert_eq!(r.steps.len(), 13);
        assert!(r.open_hypotheses().is_empty());
    }

    #[test]
    fn report() {
        let r = bell_check(200, 1, 1e-9).unwrap();
        assert!(r.passed(), "{r:?}");
        for (v, want) in r.values.iter().zip([0.0, 0.0, 0.5, 0.5]) {
            assert!((v - want).abs() < 1e-12);
        }
    }

    #[test]
    fn marginals_are_maximally_mixed() {
        let rho = bell_state();
        for keep in [[0usize], [1]] {
            let m = rho.reduced(&keep).unwrap();
            assert!(m.max_abs_diff(&DensityOperator::maximally_mixed(2)) < 1e-12);
        }
        assert!(satisfies(&bell_structure(false), &f("![{qb1}]"), 1e-9).unwrap());
    }
}
