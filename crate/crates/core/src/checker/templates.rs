//! Real-arithmetic facts used in derivations beyond the axiom schemas.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::lang::{as_and, as_eq, as_lt, desugar, quantum_atoms, Formula, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Template {
    /// `([G1] /\ [G2]) => (((O < t1) /\ (O < t2)) => (O < t1 ox t2))`, with the
    /// support of `ti` inside `Gi`.
    PosTensor,
    /// `((t = O) /\ (O < t)) => QF`
    Contra,
    /// `((a <= b) /\ (b <= c)) => (a <= c)`
    LeqTrans,
    /// `t <= t`
    LeqRefl,
    /// `(a = b) => (b = a)`
    EqSym,
}

impl Template {
    pub const ALL: [Template; 5] =
        [Template::PosTensor, Template::Contra, Template::LeqTrans, Template::LeqRefl, Template::EqSym];

    pub fn name(self) -> &'static str {
        match self {
            Template::PosTensor => "PosTensor",
            Template::Contra => "Contra",
            Template::LeqTrans => "LeqTrans",
            Template::LeqRefl => "LeqRefl",
            Template::EqSym => "EqSym",
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown template `{0}`")]
pub struct UnknownTemplate(pub String);

impl FromStr for Template {
    type Err = UnknownTemplate;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Template::ALL.iter().copied().find(|t| t.name() == s).ok_or_else(|| UnknownTemplate(s.into()))
    }
}

fn implication(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Implies(a, b) => Some((a, b)),
        _ => None,
    }
}

fn match_pos_tensor(d: &Formula) -> bool {
    let Some((guard, rest)) = implication(d) else { return false };
    let Some((Formula::SubSys(g1), Formula::SubSys(g2))) = as_and(guard) else { return false };
    let Some((hyp, concl)) = implication(rest) else { return false };
    let Some((l, r)) = as_and(hyp) else { return false };
    let (Some((Term::Null, t1)), Some((Term::Null, t2))) = (as_lt(l), as_lt(r)) else { return false };
    let Some((Term::Null, Term::Tensor(x, y))) = as_lt(concl) else { return false };
    if **x != *t1 || **y != *t2 {
        return false;
    }
    match (t1.syntactic_support(), t2.syntactic_support()) {
        (Some(s1), Some(s2)) => g1.is_disjoint(g2) && s1.is_subset(g1) && s2.is_subset(g2),
        _ => false,
    }
}

fn match_leq_trans(d: &Formula) -> bool {
    let Some((hyp, concl)) = implication(d) else { return false };
    let Some((Formula::Leq(a, b), Formula::Leq(b2, c))) = as_and(hyp) else { return false };
    b == b2 && *concl == Formula::Leq(a.clone(), c.clone())
}

fn match_contra(d: &Formula) -> bool {
    let Some((hyp, Formula::Falsum)) = implication(d) else { return false };
    let Some((l, r)) = as_and(hyp) else { return false };
    match (as_eq(l), as_lt(r)) {
        (Some((t, Term::Null)), Some((Term::Null, t2))) => t == t2,
        _ => false,
    }
}

fn match_eq_sym(d: &Formula) -> bool {
    let Some((hyp, concl)) = implication(d) else { return false };
    match (as_eq(hyp), as_eq(concl)) {
        (Some((a, b)), Some((c, e))) => a == e && b == c,
        _ => false,
    }
}

/// `f` is an instance of `template`.
pub fn is_template_instance(f: &Formula, template: Template) -> bool {
    let d = desugar(f);
    match template {
        Template::PosTensor => match_pos_tensor(&d),
        Template::Contra => match_contra(&d),
        Template::LeqTrans => match_leq_trans(&d),
        Template::LeqRefl => matches!(&d, Formula::Leq(a, b) if a == b),
        Template::EqSym => match_eq_sym(&d),
    }
}

pub fn pos_tensor_instance(t1: &Term, t2: &Term) -> Option<Formula> {
    let g1 = t1.syntactic_support()?;
    let g2 = t2.syntactic_support()?;
    if !g1.is_disjoint(&g2) {
        return None;
    }
    Some(Formula::implies(
        Formula::and(Formula::SubSys(g1), Formula::SubSys(g2)),
        Formula::implies(
            Formula::and(Formula::lt(Term::Null, t1.clone()), Formula::lt(Term::Null, t2.clone())),
            Formula::lt(Term::Null, Term::tensor(t1.clone(), t2.clone())),
        ),
    ))
}

pub fn leq_trans_instance(a: &Term, b: &Term, c: &Term) -> Formula {
    Formula::implies(
        Formula::and(Formula::leq(a.clone(), b.clone()), Formula::leq(b.clone(), c.clone())),
        Formula::leq(a.clone(), c.clone()),
    )
}

pub fn contra_instance(t: &Term) -> Formula {
    Formula::implies(
        Formula::and(Formula::eq(t.clone(), Term::Null), Formula::lt(Term::Null, t.clone())),
        Formula::Falsum,
    )
}

pub fn eq_sym_instance(a: &Term, b: &Term) -> Formula {
    Formula::implies(Formula::eq(a.clone(), b.clone()), Formula::eq(b.clone(), a.clone()))
}

/// Instances that let propositional reasoning over `context` use `template`.
/// Templates whose instances are skeleton tautologies need none.
pub fn supporting_instances(template: Template, context: &[Formula]) -> Vec<Formula> {
    let mut out = Vec::new();
    match template {
        Template::Contra | Template::EqSym => {}
        Template::LeqTrans => {
            let leqs: Vec<(Term, Term)> = context
                .iter()
                .flat_map(quantum_atoms)
                .filter_map(|a| match a {
                    Formula::Leq(x, y) => Some((x, y)),
                    _ => None,
                })
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            for (a, b) in &leqs {
                for (b2, c) in &leqs {
                    if b == b2 {
                        out.push(leq_trans_instance(a, b, c));
                    }
                }
            }
        }
        Template::PosTensor => {
            for f in context {
                for atom in quantum_atoms(f) {
                    for t in atom.atom_terms() {
                        for s in t.subterms() {
                            if let Term::Tensor(x, y) = s {
                                if let Some(i) = pos_tensor_instance(x, y) {
                                    if !out.contains(&i) {
                                        out.push(i);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Template::LeqRefl => {
            let mut terms = BTreeSet::new();
            for f in context {
                for atom in quantum_atoms(f) {
                    for t in atom.atom_terms() {
                        terms.insert(t.clone());
                    }
                }
            }
            out.extend(terms.into_iter().map(|t| Formula::leq(t.clone(), t)));
        }
    }
    out
}

/// Contra and EqSym are propositional consequences of the atom encodings.
pub fn is_propositional(template: Template) -> bool {
    matches!(template, Template::Contra | Template::EqSym)
}

#[cfg(test)]
pub(crate) fn skeleton_valid(f: &Formula) -> bool {
    crate::lang::is_skeleton_tautology(f).unwrap_or(false)
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
    fn matchers() {
        assert!(!is_template_instance(&p("((O < $x) /\\ (O < $y)) => QF"), Template::Contra));
        assert!(is_template_instance(&p("((T[{a};{a}] = O) /\\ (O < T[{a};{a}])) => QF"), Template::Contra));
        assert!(is_template_instance(&p("((Id <= O) /\\ (O <= $x)) => (Id <= $x)"), Template::LeqTrans));
        assert!(!is_template_instance(&p("((Id <= O) /\\ (Id <= $x)) => (Id <= $x)"), Template::LeqTrans));
        assert!(is_template_instance(&p("$x <= $x"), Template::LeqRefl));
        assert!(is_template_instance(&p("(Id = O) => (O = Id)"), Template::EqSym));
        let t1 = parse_term("T[{a};{a}]").unwrap();
        let t2 = parse_term("T[{b};{b}]").unwrap();
        let pt = pos_tensor_instance(&t1, &t2).unwrap();
        assert!(is_template_instance(&pt, Template::PosTensor));
        let unguarded = p("((O < T[{a};{a}]) /\\ (O < T[{b};{b}])) => (O < T[{a};{a}] ox T[{b};{b}])");
        assert!(!is_template_instance(&unguarded, Template::PosTensor));
    }

    #[test]
    fn propositional_templates_are_skeleton_tautologies() {
        let t = parse_term("int(a)").unwrap();
        assert!(skeleton_valid(&contra_instance(&t)));
        assert!(skeleton_valid(&eq_sym_instance(&t, &Term::Ident)));
        assert!(!skeleton_valid(&leq_trans_instance(&t, &Term::Null, &Term::Ident)));
        assert!(is_propositional(Template::Contra));
    }

    #[test]
    fn leq_trans_support() {
        let ctx = [p("(Id <= O) /\\ (O <= $x)")];
        let inst = supporting_instances(Template::LeqTrans, &ctx);
        assert!(inst.contains(&leq_trans_instance(&Term::Ident, &Term::Null, &Term::var("x"))));
    }
}
