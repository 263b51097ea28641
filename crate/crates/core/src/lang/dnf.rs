//! Propositional skeletons over quantum atoms and the disjunctive normal form.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::ast::Formula;
use super::desugar::desugar;
use super::LangError;

/// Largest atom count for which truth tables are enumerated.
pub const MAX_SKELETON_ATOMS: usize = 20;

/// Distinct atoms of the desugared formula, in order of first occurrence.
pub fn quantum_atoms(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    collect_atoms(&desugar(f), &mut out);
    out
}

fn collect_atoms(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Leq(..) | Formula::SubSys(_) => {
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
        Formula::Falsum => {}
        Formula::Implies(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
        other => collect_atoms(&desugar(other), out),
    }
}

/// Truth value of the propositional skeleton of a core formula, given a truth
/// value for each atom. Non-core input is desugared on the fly.
pub fn skeleton_eval<F: Fn(&Formula) -> bool>(f: &Formula, atom: &F) -> bool {
    match f {
        Formula::Leq(..) | Formula::SubSys(_) => atom(f),
        Formula::Falsum => false,
        Formula::Implies(a, b) => !skeleton_eval(a, atom) || skeleton_eval(b, atom),
        other => skeleton_eval(&desugar(other), atom),
    }
}

/// Calls `visit` with every assignment to `atoms` (bit `k` of the row index is atom `k`).
pub fn for_each_row<F: FnMut(&dyn Fn(&Formula) -> bool) -> bool>(
    atoms: &[Formula],
    mut visit: F,
) -> Result<bool, LangError> {
    if atoms.len() > MAX_SKELETON_ATOMS {
        return Err(LangError::TooManyAtoms(atoms.len(), MAX_SKELETON_ATOMS));
    }
    for row in 0u64..(1u64 << atoms.len()) {
        let lookup = |a: &Formula| {
            let k = atoms.iter().position(|x| x == a).expect("atom in table");
            (row >> k) & 1 == 1
        };
        if !visit(&lookup) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The skeleton of `f` is a propositional tautology.
pub fn is_skeleton_tautology(f: &Formula) -> Result<bool, LangError> {
    let d = desugar(f);
    let atoms = quantum_atoms(&d);
    for_each_row(&atoms, |v| skeleton_eval(&d, &v))
}

/// `premises` propositionally entail `conclusion`, atoms read as variables.
pub fn skeleton_entails(premises: &[Formula], conclusion: &Formula) -> Result<bool, LangError> {
    let ps: Vec<Formula> = premises.iter().map(desugar).collect();
    let c = desugar(conclusion);
    let mut atoms = Vec::new();
    for p in &ps {
        collect_atoms(p, &mut atoms);
    }
    collect_atoms(&c, &mut atoms);
    for_each_row(&atoms, |v| !ps.iter().all(|p| skeleton_eval(p, &v)) || skeleton_eval(&c, &v))
}

/// Conjunction of atoms and negated atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Molecule {
    pub positive: BTreeSet<Formula>,
    pub negative: BTreeSet<Formula>,
}

impl Molecule {
    /// Some atom occurs both positively and negatively.
    pub fn is_contradictory(&self) -> bool {
        self.positive.iter().any(|a| self.negative.contains(a))
    }

    pub fn to_formula(&self) -> Formula {
        let lits = self
            .positive
            .iter()
            .cloned()
            .chain(self.negative.iter().cloned().map(Formula::not));
        Formula::conj(lits)
    }
}

/// Disjunction of molecules over `atoms`; empty means `QF`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dnf {
    pub atoms: Vec<Formula>,
    pub molecules: Vec<Molecule>,
}

impl Dnf {
    /// Balanced disjunction, so nesting depth stays logarithmic in the
    /// number of molecules.
    pub fn to_formula(&self) -> Formula {
        fn balanced(ms: &[Molecule]) -> Formula {
            match ms {
                [] => Formula::Falsum,
                [m] => m.to_formula(),
                _ => {
                    let (l, r) = ms.split_at(ms.len() / 2);
                    Formula::or(balanced(l), balanced(r))
                }
            }
        }
        balanced(&self.molecules)
    }
}

/// One molecule per satisfying row of the skeleton's truth table.
pub fn to_dnf(f: &Formula) -> Result<Dnf, LangError> {
    let d = desugar(f);
    let atoms = quantum_atoms(&d);
    let mut molecules = Vec::new();
    for_each_row(&atoms, |v| {
        if skeleton_eval(&d, &v) {
            let mut m = Molecule { positive: BTreeSet::new(), negative: BTreeSet::new() };
            for a in &atoms {
                if v(a) {
                    m.positive.insert(a.clone());
                } else {
                    m.negative.insert(a.clone());
                }
            }
            molecules.push(m);
        }
        true
    })?;
    Ok(Dnf { atoms, molecules })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn single_atom() {
        let d = to_dnf(&p("Id <= O")).unwrap();
        assert_eq!(d.molecules.len(), 1);
        assert!(d.molecules[0].positive.contains(&p("Id <= O")));
        assert!(d.molecules[0].negative.is_empty());
    }

    #[test]
    fn falsum_is_empty_disjunction() {
        let d = to_dnf(&Formula::Falsum).unwrap();
        assert!(d.molecules.is_empty());
        assert_eq!(d.to_formula(), Formula::Falsum);
    }

    #[test]
    fn three_atom_table() {
        let f = p("([{a}] \\/ [{b}]) /\\ [{c}]");
        let d = to_dnf(&f).unwrap();
        // rows with c true and at least one of a,b
        assert_eq!(d.molecules.len(), 3);
        assert!(d.molecules.iter().all(|m| !m.is_contradictory()));
        let atoms = d.atoms.clone();
        let g = d.to_formula();
        for_each_row(&atoms, |v| {
            assert_eq!(skeleton_eval(&desugar(&f), &v), skeleton_eval(&desugar(&g), &v));
            true
        })
        .unwrap();
    }

    #[test]
    fn skeleton_tautology() {
        assert!(is_skeleton_tautology(&p("Id <= O \\/ !(Id <= O)")).unwrap());
        assert!(!is_skeleton_tautology(&p("Id <= O")).unwrap());
        assert!(skeleton_entails(&[p("[{a}]"), p("[{a}] => [{b}]")], &p("[{b}]")).unwrap());
    }
}
