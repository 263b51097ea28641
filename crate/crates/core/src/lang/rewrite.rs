//! Substitution, integral elimination, formula length and sub-language membership.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;

use super::ast::{Formula, Term};
use super::desugar::desugar;
use super::semantics::valuations_of;
use super::LangError;
use crate::register::{QubitSet, Register};
use crate::valuation::{bit, ValuationSet};

pub fn substitute_term(t: &Term, binding: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(x) => binding.get(x).cloned().unwrap_or_else(|| t.clone()),
        Term::Null | Term::Ident | Term::Integral(_) | Term::TOp { .. } => t.clone(),
        Term::Add(a, b) => Term::add(substitute_term(a, binding), substitute_term(b, binding)),
        Term::Compose(a, b) => Term::compose(substitute_term(a, binding), substitute_term(b, binding)),
        Term::Tensor(a, b) => Term::tensor(substitute_term(a, binding), substitute_term(b, binding)),
        Term::Scale(r, a) => Term::scale(*r, substitute_term(a, binding)),
    }
}

/// Simultaneous replacement of variables by terms.
pub fn substitute(f: &Formula, binding: &BTreeMap<String, Term>) -> Formula {
    map_terms(f, &|t| substitute_term(t, binding))
}

fn map_terms<F: Fn(&Term) -> Term>(f: &Formula, g: &F) -> Formula {
    match f {
        Formula::Leq(a, b) => Formula::Leq(g(a), g(b)),
        Formula::Eq(a, b) => Formula::Eq(g(a), g(b)),
        Formula::Lt(a, b) => Formula::Lt(g(a), g(b)),
        Formula::SubSys(s) => Formula::SubSys(s.clone()),
        Formula::Falsum => Formula::Falsum,
        Formula::Not(a) => Formula::Not(Box::new(map_terms(a, g))),
        Formula::Implies(a, b) => Formula::implies(map_terms(a, g), map_terms(b, g)),
        Formula::And(a, b) => Formula::and(map_terms(a, g), map_terms(b, g)),
        Formula::Or(a, b) => Formula::or(map_terms(a, g), map_terms(b, g)),
        Formula::Iff(a, b) => Formula::iff(map_terms(a, g), map_terms(b, g)),
    }
}

fn try_map_terms<F: Fn(&Term) -> Result<Term, LangError>>(f: &Formula, g: &F) -> Result<Formula, LangError> {
    Ok(match f {
        Formula::Leq(a, b) => Formula::Leq(g(a)?, g(b)?),
        Formula::Eq(a, b) => Formula::Eq(g(a)?, g(b)?),
        Formula::Lt(a, b) => Formula::Lt(g(a)?, g(b)?),
        Formula::SubSys(s) => Formula::SubSys(s.clone()),
        Formula::Falsum => Formula::Falsum,
        Formula::Not(a) => Formula::Not(Box::new(try_map_terms(a, g)?)),
        Formula::Implies(a, b) => Formula::implies(try_map_terms(a, g)?, try_map_terms(b, g)?),
        Formula::And(a, b) => Formula::and(try_map_terms(a, g)?, try_map_terms(b, g)?),
        Formula::Or(a, b) => Formula::or(try_map_terms(a, g)?, try_map_terms(b, g)?),
        Formula::Iff(a, b) => Formula::iff(try_map_terms(a, g)?, try_map_terms(b, g)?),
    })
}

/// `sum_{v in vals} T[ones(v); qB]`, ascending by valuation; `O` when empty.
pub fn top_sum(vals: &ValuationSet, register: &Register) -> Term {
    let n = register.len();
    let all = register.all();
    Term::sum(vals.iter().map(|v| {
        let ones: QubitSet = (0..n).filter(|&p| bit(v, p, n)).map(|p| register.names()[p].clone()).collect();
        Term::top(ones, all.clone())
    }))
}

fn eliminate_in_term(
    t: &Term,
    register: &Register,
    within: Option<&ValuationSet>,
    under_tensor: bool,
) -> Result<Term, LangError> {
    let rec = |x: &Term, ut: bool| eliminate_in_term(x, register, within, ut);
    Ok(match t {
        Term::Integral(a) if under_tensor => {
            // keep the operand's support: sum over the formula's own atoms
            let local = register.restrict(&a.atoms());
            let mut vals = valuations_of(a, &local)?;
            if let Some(v) = within {
                let positions = register.positions(&a.atoms()).map_err(LangError::Register)?;
                vals = vals.intersection(&v.project(&positions)).map_err(|_| LangError::WidthMismatch)?;
            }
            top_sum(&vals, &local)
        }
        Term::Integral(a) => {
            let mut vals = valuations_of(a, register)?;
            if let Some(v) = within {
                vals = vals.intersection(v).map_err(|_| LangError::WidthMismatch)?;
            }
            top_sum(&vals, register)
        }
        Term::Null | Term::Ident | Term::Var(_) | Term::TOp { .. } => t.clone(),
        Term::Add(a, b) => Term::add(rec(a, under_tensor)?, rec(b, under_tensor)?),
        Term::Compose(a, b) => Term::compose(rec(a, under_tensor)?, rec(b, under_tensor)?),
        Term::Tensor(a, b) => Term::tensor(rec(a, true)?, rec(b, true)?),
        Term::Scale(r, a) => Term::scale(*r, rec(a, under_tensor)?),
    })
}

/// Replace every `int(a)` by the sum of `T[A;qB]` over the valuations of `a`.
/// Inside tensor operands the sum ranges over the atoms of `a` only, which keeps
/// the operand's qubit support unchanged.
pub fn eliminate_integrals(f: &Formula, register: &Register) -> Result<Formula, LangError> {
    try_map_terms(f, &|t| eliminate_in_term(t, register, None, false))
}

/// As [`eliminate_integrals`], with each valuation set first intersected with `admissible`.
pub fn eliminate_integrals_within(
    f: &Formula,
    register: &Register,
    admissible: &ValuationSet,
) -> Result<Formula, LangError> {
    try_map_terms(f, &|t| eliminate_in_term(t, register, Some(admissible), false))
}

/// Atoms measure 0; each implication adds one to the longer side.
pub fn formula_length(f: &Formula) -> usize {
    fn go(f: &Formula) -> usize {
        match f {
            Formula::Implies(a, b) => go(a).max(go(b)) + 1,
            _ => 0,
        }
    }
    go(&desugar(f))
}

/// Member of the analytical sub-language: no integrals, no `T` operators and no
/// subsystem atoms.
pub fn is_analytical(f: &Formula) -> bool {
    fn term_ok(t: &Term) -> bool {
        t.subterms().iter().all(|s| !matches!(s, Term::Integral(_) | Term::TOp { .. }))
    }
    fn go(f: &Formula) -> bool {
        match f {
            Formula::Leq(a, b) | Formula::Eq(a, b) | Formula::Lt(a, b) => term_ok(a) && term_ok(b),
            Formula::SubSys(_) => false,
            Formula::Falsum => true,
            Formula::Not(a) => go(a),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => go(a) && go(b),
        }
    }
    go(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_formula;
    use crate::lang::parse_term;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn substitution() {
        let mut b = BTreeMap::new();
        b.insert("x".into(), Term::Null);
        assert_eq!(substitute(&p("$x <= Id"), &b), p("O <= Id"));
        let f = p("$y ox $x <= $x");
        assert_eq!(substitute(&f, &BTreeMap::new()), f);
    }

    #[test]
    fn integral_elimination() {
        let reg = Register::new(["qb1", "qb2"]).unwrap();
        assert_eq!(
            eliminate_integrals(&p("int(qb1 & qb2) = Id"), &reg).unwrap(),
            p("T[{qb1,qb2};{qb1,qb2}] = Id")
        );
        assert_eq!(eliminate_integrals(&p("int(false) = O"), &reg).unwrap(), p("O = O"));
        let one = Register::new(["qb1"]).unwrap();
        assert_eq!(
            eliminate_integrals(&p("int(true) = Id"), &one).unwrap(),
            p("T[{};{qb1}] + T[{qb1};{qb1}] = Id")
        );
        assert!(eliminate_integrals(&p("int(zz) = Id"), &reg).is_err());
    }

    #[test]
    fn lengths() {
        assert_eq!(formula_length(&p("Id <= O")), 0);
        assert_eq!(formula_length(&p("!(Id <= O)")), 1);
        assert_eq!(formula_length(&p("[{a}] => ([{b}] => [{c}])")), 2);
        assert_eq!(formula_length(&p("Id = O")), 4);
    }

    #[test]
    fn analytical_membership() {
        assert!(is_analytical(&p("($x <= Id) => QF")));
        assert!(!is_analytical(&p("int(qb1) <= Id")));
        let reg = Register::new(["qb1", "qb2"]).unwrap();
        let e = eliminate_integrals(&p("int(qb1 & qb2) <= int(~qb1 & ~qb2)"), &reg).unwrap();
        assert!(!is_analytical(&e));
        assert_eq!(parse_term("O").unwrap(), Term::Null);
    }
}
