//! Reduction of derived connectives to the core grammar, and recognizers that
//! read derived shapes back out of core formulae.

use super::ast::{Classical, Formula, Term};

/// Only `False`, `Atom` and `Implies` remain.
pub fn desugar_classical(a: &Classical) -> Classical {
    fn neg(x: Classical) -> Classical {
        Classical::implies(x, Classical::False)
    }
    match a {
        Classical::False => Classical::False,
        Classical::True => neg(Classical::False),
        Classical::Atom(x) => Classical::Atom(x.clone()),
        Classical::Not(x) => neg(desugar_classical(x)),
        Classical::Implies(x, y) => Classical::implies(desugar_classical(x), desugar_classical(y)),
        Classical::Or(x, y) => Classical::implies(neg(desugar_classical(x)), desugar_classical(y)),
        Classical::And(x, y) => {
            let x = desugar_classical(x);
            let y = desugar_classical(y);
            // ~(~x | ~y) = ((x -> F) -> F) -> (y -> F)) -> F
            neg(Classical::implies(neg(neg(x)), neg(y)))
        }
        Classical::Iff(x, y) => desugar_classical(&Classical::and(
            Classical::implies((**x).clone(), (**y).clone()),
            Classical::implies((**y).clone(), (**x).clone()),
        )),
    }
}

fn neg(x: Formula) -> Formula {
    Formula::implies(x, Formula::Falsum)
}

fn core_or(x: Formula, y: Formula) -> Formula {
    Formula::implies(neg(x), y)
}

fn core_and(x: Formula, y: Formula) -> Formula {
    neg(core_or(neg(x), neg(y)))
}

/// Only `Leq`, `SubSys`, `Falsum` and `Implies` remain. Classical formulae
/// inside integrals are left as written.
pub fn desugar(f: &Formula) -> Formula {
    match f {
        Formula::Leq(a, b) => Formula::Leq(a.clone(), b.clone()),
        Formula::SubSys(g) => Formula::SubSys(g.clone()),
        Formula::Falsum => Formula::Falsum,
        Formula::Implies(x, y) => Formula::implies(desugar(x), desugar(y)),
        Formula::Not(x) => neg(desugar(x)),
        Formula::Or(x, y) => core_or(desugar(x), desugar(y)),
        Formula::And(x, y) => core_and(desugar(x), desugar(y)),
        Formula::Iff(x, y) => {
            let x = desugar(x);
            let y = desugar(y);
            core_and(Formula::implies(x.clone(), y.clone()), Formula::implies(y, x))
        }
        Formula::Eq(a, b) => core_and(Formula::Leq(a.clone(), b.clone()), Formula::Leq(b.clone(), a.clone())),
        Formula::Lt(a, b) => core_and(Formula::Leq(a.clone(), b.clone()), neg(Formula::Leq(b.clone(), a.clone()))),
    }
}

pub fn is_core(f: &Formula) -> bool {
    match f {
        Formula::Leq(..) | Formula::SubSys(_) | Formula::Falsum => true,
        Formula::Implies(a, b) => is_core(a) && is_core(b),
        _ => false,
    }
}

/// `x => QF`
pub fn as_not(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Implies(x, y) if **y == Formula::Falsum => Some(x),
        _ => None,
    }
}

/// Core encoding of `x \/ y`.
pub fn as_or(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Implies(nx, y) => Some((as_not(nx)?, y)),
        _ => None,
    }
}

/// Core encoding of `x /\ y`.
pub fn as_and(f: &Formula) -> Option<(&Formula, &Formula)> {
    let inner = as_not(f)?;
    let (nx, ny) = as_or(inner)?;
    Some((as_not(nx)?, as_not(ny)?))
}

/// Core encoding of `a = b`.
pub fn as_eq(f: &Formula) -> Option<(&Term, &Term)> {
    let (x, y) = as_and(f)?;
    match (x, y) {
        (Formula::Leq(a, b), Formula::Leq(c, d)) if a == d && b == c => Some((a, b)),
        _ => None,
    }
}

/// Core encoding of `a < b`.
pub fn as_lt(f: &Formula) -> Option<(&Term, &Term)> {
    let (x, y) = as_and(f)?;
    match (x, as_not(y)?) {
        (Formula::Leq(a, b), Formula::Leq(c, d)) if a == d && b == c => Some((a, b)),
        _ => None,
    }
}

/// Core encoding of `x <=> y`.
pub fn as_iff(f: &Formula) -> Option<(&Formula, &Formula)> {
    let (l, r) = as_and(f)?;
    match (l, r) {
        (Formula::Implies(a, b), Formula::Implies(c, d)) if a == d && b == c => Some((a, b)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn negation_is_implication_of_falsum() {
        assert_eq!(desugar(&p("!QF")), Formula::implies(Formula::Falsum, Formula::Falsum));
    }

    #[test]
    fn equality_expands_to_two_inequalities() {
        let d = desugar(&p("Id = O"));
        assert!(is_core(&d));
        let (a, b) = as_eq(&d).unwrap();
        assert_eq!((a, b), (&Term::Ident, &Term::Null));
        let (x, y) = as_and(&d).unwrap();
        assert_eq!(x, &Formula::Leq(Term::Ident, Term::Null));
        assert_eq!(y, &Formula::Leq(Term::Null, Term::Ident));
    }

    #[test]
    fn strict_order_expansion() {
        let d = desugar(&p("O < Id"));
        let (x, y) = as_and(&d).unwrap();
        assert_eq!(x, &Formula::Leq(Term::Null, Term::Ident));
        assert_eq!(as_not(y).unwrap(), &Formula::Leq(Term::Ident, Term::Null));
        assert_eq!(as_lt(&d), Some((&Term::Null, &Term::Ident)));
    }

    #[test]
    fn idempotent() {
        for s in ["[{a}] <=> !(Id <= O) \\/ QF", "Id = O /\\ O < Id => [{}]", "int(a -> b)"] {
            let once = desugar(&p(s));
            assert_eq!(desugar(&once), once);
        }
    }

    #[test]
    fn classical_core() {
        let d = desugar_classical(&crate::lang::parse_classical("a <-> ~b | true").unwrap());
        fn core(a: &Classical) -> bool {
            match a {
                Classical::False | Classical::Atom(_) => true,
                Classical::Implies(x, y) => core(x) && core(y),
                _ => false,
            }
        }
        assert!(core(&d));
    }
}
