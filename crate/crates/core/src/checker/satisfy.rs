//! The satisfaction relation and the model-checking entry point.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;

use super::interp::Interpreter;
use super::structure::Structure;
use super::CheckError;
use crate::lang::{desugar, formula_length, print_formula, quantum_atoms, Formula, Term};

/// Term values of one evaluation, shared between atoms.
pub struct Evaluator<'a> {
    m: &'a Structure,
    interp: Interpreter<'a>,
    tol: f64,
    memo: RefCell<BTreeMap<Term, f64>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(m: &'a Structure, tol: f64) -> Self {
        Self { m, interp: Interpreter::of(m), tol, memo: RefCell::new(BTreeMap::new()) }
    }

    pub fn value(&self, t: &Term) -> Result<f64, CheckError> {
        if let Some(v) = self.memo.borrow().get(t) {
            return Ok(*v);
        }
        let v = self.interp.eval(t, self.m)?;
        if v < -self.tol {
            return Err(CheckError::NegativeValue(v));
        }
        self.memo.borrow_mut().insert(t.clone(), v);
        Ok(v)
    }

    /// Truth of a quantum atom (`Leq` or `SubSys`).
    pub fn atom(&self, f: &Formula) -> Result<bool, CheckError> {
        match f {
            Formula::Leq(a, b) => Ok(self.value(a)? <= self.value(b)? + self.tol),
            Formula::SubSys(g) => {
                self.m.register().positions(g)?;
                Ok(self.m.partition().in_alg(g))
            }
            _ => unreachable!("not an atom"),
        }
    }

    /// Truth of a core formula.
    pub fn core(&self, f: &Formula) -> Result<bool, CheckError> {
        match f {
            Formula::Leq(..) | Formula::SubSys(_) => self.atom(f),
            Formula::Falsum => Ok(false),
            Formula::Implies(a, b) => Ok(!self.core(a)? || self.core(b)?),
            other => self.core(&desugar(other)),
        }
    }
}

/// `M |= f`, with comparisons `a <= b + tol`.
pub fn satisfies(m: &Structure, f: &Formula, tol: f64) -> Result<bool, CheckError> {
    Evaluator::new(m, tol).core(&desugar(f))
}

/// One quantum atom of a checked formula.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomValue {
    pub text: String,
    /// Term values for comparison atoms; `None` for subsystem atoms.
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub verdict: bool,
    pub atoms: Vec<AtomValue>,
    pub num_qubits: usize,
    pub length: usize,
    /// Wall time in seconds; filled in by callers with a clock.
    pub elapsed: Option<f64>,
}

impl CheckReport {
    /// Term values in atom order, left side before right side.
    pub fn term_values(&self) -> Vec<f64> {
        self.atoms.iter().flat_map(|a| a.lhs.into_iter().chain(a.rhs)).collect()
    }

    /// Some term value exceeds one by more than `tol`, which a trace-nonincreasing
    /// interpretation cannot produce.
    pub fn has_superunit_values(&self, tol: f64) -> bool {
        self.term_values().iter().any(|v| *v > 1.0 + tol)
    }
}

/// Decide `M |= f` and tabulate every atom of the desugared formula.
pub fn model_check(m: &Structure, f: &Formula, tol: f64) -> Result<CheckReport, CheckError> {
    let d = desugar(f);
    let ev = Evaluator::new(m, tol);
    let mut atoms = Vec::new();
    for a in quantum_atoms(&d) {
        let holds = ev.atom(&a)?;
        let (lhs, rhs) = match &a {
            Formula::Leq(x, y) => (Some(ev.value(x)?), Some(ev.value(y)?)),
            _ => (None, None),
        };
        atoms.push(AtomValue { text: print_formula(&a), lhs, rhs, holds });
    }
    let verdict = ev.core(&d)?;
    Ok(CheckReport { verdict, atoms, num_qubits: m.num_qubits(), length: formula_length(&d), elapsed: None })
}
