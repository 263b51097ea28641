//! Valuation semantics of classical formulae, and the map from classical
//! skeletons to quantum formulae.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::ast::{Classical, Formula};
use super::LangError;
use crate::register::Register;
use crate::valuation::{bit, ValuationSet};

/// Enumeration bound for truth tables.
pub const MAX_TABLE_ATOMS: usize = 20;

/// `{v in 2^qB | v |= a}`
pub fn valuations_of(a: &Classical, register: &Register) -> Result<ValuationSet, LangError> {
    let n = register.len();
    if n > MAX_TABLE_ATOMS + 4 {
        return Err(LangError::TooManyAtoms(n, MAX_TABLE_ATOMS + 4));
    }
    let mut positions = BTreeMap::new();
    for x in a.atoms() {
        let p = register.position(&x).ok_or(LangError::UndeclaredAtom(x.clone()))?;
        positions.insert(x, p);
    }
    Ok(ValuationSet::from_predicate(n, |v| a.eval(&|x: &str| bit(v, positions[x], n))))
}

pub fn is_classical_tautology(a: &Classical, register: &Register) -> Result<bool, LangError> {
    if register.len() > MAX_TABLE_ATOMS {
        return Err(LangError::TooManyAtoms(register.len(), MAX_TABLE_ATOMS));
    }
    Ok(valuations_of(a, register)?.is_full())
}

/// Truth-table check over the formula's own atoms.
pub fn is_tautology(a: &Classical) -> Result<bool, LangError> {
    let atoms: Vec<String> = a.atoms().into_iter().collect();
    if atoms.len() > MAX_TABLE_ATOMS {
        return Err(LangError::TooManyAtoms(atoms.len(), MAX_TABLE_ATOMS));
    }
    let register = Register::new(atoms.iter().cloned()).map_err(LangError::Register)?;
    is_classical_tautology(a, &register)
}

/// Structure-preserving image of `a`: `~` to `!`, `->` to `=>`, `false` to `QF`.
pub fn hom_f(a: &Classical, map: &BTreeMap<String, Formula>) -> Result<Formula, LangError> {
    Ok(match a {
        Classical::False => Formula::Falsum,
        Classical::True => Formula::verum(),
        Classical::Atom(x) => map.get(x).cloned().ok_or_else(|| LangError::UnmappedVariable(x.clone()))?,
        Classical::Not(x) => Formula::not(hom_f(x, map)?),
        Classical::And(x, y) => Formula::and(hom_f(x, map)?, hom_f(y, map)?),
        Classical::Or(x, y) => Formula::or(hom_f(x, map)?, hom_f(y, map)?),
        Classical::Implies(x, y) => Formula::implies(hom_f(x, map)?, hom_f(y, map)?),
        Classical::Iff(x, y) => Formula::iff(hom_f(x, map)?, hom_f(y, map)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_classical, parse_formula};

    fn reg2() -> Register {
        Register::new(["qb1", "qb2"]).unwrap()
    }

    #[test]
    fn satisfying_sets() {
        let r = reg2();
        let v = valuations_of(&parse_classical("qb1 & qb2").unwrap(), &r).unwrap();
        assert_eq!(v.to_bitstrings(), vec!["11"]);
        assert!(valuations_of(&Classical::False, &r).unwrap().is_empty());
        let v = valuations_of(&parse_classical("~qb1 | ~qb2").unwrap(), &r).unwrap();
        assert_eq!(v.to_bitstrings(), vec!["00", "01", "10"]);
        assert!(valuations_of(&parse_classical("qb3").unwrap(), &r).is_err());
    }

    #[test]
    fn tautologies() {
        let r = Register::new(["qb1"]).unwrap();
        assert!(is_classical_tautology(&parse_classical("qb1 | ~qb1").unwrap(), &r).unwrap());
        assert!(!is_classical_tautology(&parse_classical("qb1").unwrap(), &r).unwrap());
        let hs = parse_classical("(a -> b) -> ((b -> c) -> (a -> c))").unwrap();
        assert!(is_tautology(&hs).unwrap());
    }

    #[test]
    fn hom_of_falsum_and_excluded_middle() {
        let map = BTreeMap::new();
        assert_eq!(hom_f(&Classical::False, &map).unwrap(), Formula::Falsum);
        let mut map = BTreeMap::new();
        map.insert("p".into(), parse_formula("$t <= $t").unwrap());
        let f = hom_f(&parse_classical("p | ~p").unwrap(), &map).unwrap();
        assert_eq!(f, parse_formula("$t <= $t \\/ !($t <= $t)").unwrap());
        assert!(matches!(hom_f(&Classical::atom("q"), &map), Err(LangError::UnmappedVariable(_))));
    }
}
