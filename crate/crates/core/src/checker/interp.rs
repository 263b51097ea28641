//! Operator terms as super-operators, and their probability values.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::structure::Structure;
use super::CheckError;
use crate::lang::{valuations_of, Term};
use crate::matrix::inverse_permutation;
use crate::register::{QubitSet, Register};
use crate::superop::{join_names, projector_valuations, t_operator, SuperOperator};
use crate::valuation::ValuationSet;

/// Everything needed to interpret a term, without the state.
#[derive(Debug, Clone, Copy)]
pub struct Interpreter<'a> {
    pub register: &'a Register,
    pub admissible: &'a ValuationSet,
    pub assignment: &'a BTreeMap<String, SuperOperator>,
}

impl<'a> Interpreter<'a> {
    pub fn of(m: &'a Structure) -> Self {
        Self { register: m.register(), admissible: m.admissible(), assignment: m.assignment() }
    }

    /// The map of `t` on the whole register.
    pub fn interp(&self, t: &Term) -> Result<SuperOperator, CheckError> {
        self.at_scope(t, &self.register.all())
    }

    /// The map of `t` on the qubits `scope`, in canonical order.
    pub fn at_scope(&self, t: &Term, scope: &QubitSet) -> Result<SuperOperator, CheckError> {
        let local = self.register.restrict(scope);
        let dim = local.dim();
        Ok(match t {
            Term::Null => SuperOperator::null(dim),
            Term::Ident => SuperOperator::identity(dim),
            Term::Var(x) => {
                let e = self.assignment.get(x).ok_or_else(|| CheckError::UnboundVariable(x.clone()))?;
                if local.len() != self.register.len() {
                    return Err(CheckError::MalformedTensor(format!("variable `${x}` used on a proper subsystem")));
                }
                e.clone()
            }
            Term::Integral(a) => {
                let atoms = a.atoms();
                if !atoms.is_subset(scope) {
                    for x in &atoms {
                        self.register.require(x)?;
                    }
                    return Err(CheckError::MalformedTensor(format!(
                        "integral over {{{}}} used on subsystem {{{}}}",
                        join_names(&atoms),
                        join_names(scope)
                    )));
                }
                let positions = self.register.positions(scope)?;
                let vals = valuations_of(a, &local)?;
                let vals = vals.intersection(&self.admissible.project(&positions)).expect("same width");
                projector_valuations(&vals)
            }
            Term::TOp { ones, scope: g } => {
                self.register.positions(g)?;
                if !g.is_subset(scope) {
                    return Err(CheckError::MalformedTensor(format!(
                        "T over {{{}}} used on subsystem {{{}}}",
                        join_names(g),
                        join_names(scope)
                    )));
                }
                t_operator(ones, g, &local)?
            }
            Term::Add(a, b) => self.at_scope(a, scope)?.add(&self.at_scope(b, scope)?)?,
            Term::Compose(a, b) => self.at_scope(a, scope)?.compose(&self.at_scope(b, scope)?)?,
            Term::Scale(r, a) => self.at_scope(a, scope)?.scale(r.value())?,
            Term::Tensor(a, b) => {
                let (q1, q2) = split_scope(a, b, scope)?;
                let e = self.at_scope(a, &q1)?.tensor(&self.at_scope(b, &q2)?);
                let mut layout = local.positions(&q1)?;
                layout.extend(local.positions(&q2)?);
                e.permute_qubits(&inverse_permutation(&layout))?
            }
        })
    }

    /// `tr([t](rho))`
    pub fn eval(&self, t: &Term, m: &Structure) -> Result<f64, CheckError> {
        Ok(self.interp(t)?.applied_trace(m.rho())?)
    }
}

/// Split `scope` between the operands of a tensor: the left factor takes its own
/// support (or everything the right one does not need, if it has none).
pub fn split_scope(a: &Term, b: &Term, scope: &QubitSet) -> Result<(QubitSet, QubitSet), CheckError> {
    let (s1, s2) = match (a.syntactic_support(), b.syntactic_support()) {
        (Some(s1), Some(s2)) => (s1, s2),
        _ => return Err(CheckError::MalformedTensor("tensor operand contains a variable".into())),
    };
    if !s1.is_disjoint(&s2) {
        let both: QubitSet = s1.intersection(&s2).cloned().collect();
        return Err(CheckError::MalformedTensor(format!("tensor operands share qubits {{{}}}", join_names(&both))));
    }
    if !s1.is_subset(scope) || !s2.is_subset(scope) {
        return Err(CheckError::MalformedTensor(format!(
            "tensor operands act outside subsystem {{{}}}",
            join_names(scope)
        )));
    }
    let q1: QubitSet = if !s1.is_empty() {
        s1
    } else if !s2.is_empty() {
        scope.difference(&s2).cloned().collect()
    } else {
        QubitSet::new()
    };
    let q2 = scope.difference(&q1).cloned().collect();
    Ok((q1, q2))
}

/// `[[t]]_M = tr([t](rho))`. Values below `-tol` cannot come from a valid
/// structure and are reported as errors.
pub fn eval_term(m: &Structure, t: &Term, tol: f64) -> Result<f64, CheckError> {
    let v = Interpreter::of(m).eval(t, m)?;
    if v < -tol {
        return Err(CheckError::NegativeValue(v));
    }
    Ok(v)
}

pub fn interp_term(m: &Structure, t: &Term) -> Result<SuperOperator, CheckError> {
    Interpreter::of(m).interp(t)
}

/// Values of several terms, each interpreted once.
pub fn eval_terms(m: &Structure, ts: &[Term], tol: f64) -> Result<Vec<f64>, CheckError> {
    ts.iter().map(|t| eval_term(m, t, tol)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{Partition, StateSpec};
    use crate::density::DensityOperator;
    use crate::lang::parse_term;

    fn ex33() -> Structure {
        let r = Register::new(["qb1", "qb2"]).unwrap();
        let rho = DensityOperator::Diagonal(vec![0.4, 0.0, 0.0, 0.6]);
        Structure::new(r.clone(), ValuationSet::all(2), Partition::whole(&r), StateSpec::Global(rho), BTreeMap::new())
            .unwrap()
    }

    fn ev(m: &Structure, s: &str) -> f64 {
        eval_term(m, &parse_term(s).unwrap(), 1e-9).unwrap()
    }

    #[test]
    fn example_values() {
        let m = ex33();
        assert!((ev(&m, "int(~qb1 | ~qb2)") - 0.4).abs() < 1e-12);
        assert!((ev(&m, "T[{qb1,qb2};{qb1,qb2}]") - 0.6).abs() < 1e-12);
        assert!(ev(&m, "T[{};{qb1,qb2}] * T[{qb1,qb2};{qb1,qb2}]").abs() < 1e-12);
    }

    #[test]
    fn admissible_set_restricts_integrals() {
        let r = Register::new(["qb1", "qb2"]).unwrap();
        let v = ValuationSet::from_bitstrings(2, ["00", "11"]).unwrap();
        let rho = DensityOperator::Diagonal(vec![0.5, 0.0, 0.0, 0.5]);
        let m = Structure::new(r.clone(), v, Partition::whole(&r), StateSpec::Global(rho), BTreeMap::new()).unwrap();
        let e = interp_term(&m, &parse_term("int(qb1)").unwrap()).unwrap();
        let q = e.trace_observable();
        assert_eq!(q, crate::matrix::Operator::real_diagonal(&[0.0, 0.0, 0.0, 1.0]));
    }

    #[test]
    fn tensor_matches_global_top() {
        let m = ex33();
        let a = ev(&m, "T[{qb1};{qb1}] ox T[{qb2};{qb2}]");
        let b = ev(&m, "T[{qb1,qb2};{qb1,qb2}]");
        assert!((a - b).abs() < 1e-12);
        // the right operand's support decides the layout
        let c = ev(&m, "Id ox T[{};{qb1}]");
        assert!((c - 0.4).abs() < 1e-12);
        let d = ev(&m, "T[{qb2};{qb2}] ox T[{};{qb1}]");
        assert!(d.abs() < 1e-12);
        assert!(eval_term(&m, &parse_term("T[{qb1};{qb1}] ox T[{qb1};{qb1}]").unwrap(), 1e-9).is_err());
    }

    #[test]
    fn unbound_variable() {
        let m = ex33();
        assert!(matches!(
            eval_term(&m, &parse_term("$x").unwrap(), 1e-9),
            Err(CheckError::UnboundVariable(_))
        ));
    }
}
