//! Syntax of the logic: ASTs, concrete grammar, printing, desugaring and rewriters.
//!
//! Grammar (ASCII):
//!
//! ```text
//! qset  = "{" [ IDENT { "," IDENT } ] "}"
//! cform = "false" | "true" | IDENT | "~" cform | cform "&" cform
//!       | cform "|" cform | cform "->" cform | cform "<->" cform | "(" cform ")"
//! term  = "O" | "Id" | "$" IDENT | "int" "(" cform ")" | "T" "[" qset ";" qset "]"
//!       | RATIONAL "." term | term "*" term | term "ox" term | term "+" term | "(" term ")"
//! qform = term "<=" term | term "=" term | term "<" term | "[" qset "]" | "QF"
//!       | term | "!" qform | qform "/\" qform | qform "\/" qform
//!       | qform "=>" qform | qform "<=>" qform | "(" qform ")"
//! ```
//!
//! Binding, tightest first: `~ & | -> <->` (`->` right-associative); terms
//! `r.t * ox +`; formulae `! /\ \/ => <=>` (`=>` right-associative). A bare term
//! `t` in formula position reads as `t = Id`.

use alloc::string::String;

mod ast;
mod desugar;
mod dnf;
mod lexer;
mod parser;
mod printer;
mod rewrite;
mod semantics;

pub use ast::{Classical, Coefficient, CoefficientError, Formula, Term};
pub use desugar::{as_and, as_eq, as_iff, as_lt, as_not, as_or, desugar, desugar_classical, is_core};
pub use dnf::{
    for_each_row, is_skeleton_tautology, quantum_atoms, skeleton_entails, skeleton_eval, to_dnf, Dnf, Molecule,
    MAX_SKELETON_ATOMS,
};
pub use parser::{parse_classical, parse_formula, parse_qubit_set, parse_term};
pub use printer::{print_classical, print_formula, print_qubit_set, print_term};
pub use rewrite::{
    eliminate_integrals, eliminate_integrals_within, formula_length, is_analytical, substitute, substitute_term,
    top_sum,
};
pub use semantics::{hom_f, is_classical_tautology, is_tautology, valuations_of, MAX_TABLE_ATOMS};

use crate::register::RegisterError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at offset {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> Self {
        Self { position, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LangError {
    #[error("atom `{0}` is not a declared qubit")]
    UndeclaredAtom(String),
    #[error("{0} atoms exceed the enumeration bound of {1}")]
    TooManyAtoms(usize, usize),
    #[error("propositional variable `{0}` has no image")]
    UnmappedVariable(String),
    #[error("valuation sets of different widths")]
    WidthMismatch,
    #[error(transparent)]
    Register(RegisterError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::register::qubit_set;

    #[test]
    fn example_comparison_parses() {
        let f = parse_formula("int(qb1 & qb2) <= int(~qb1 & ~qb2)").unwrap();
        let a = Classical::and(Classical::atom("qb1"), Classical::atom("qb2"));
        let b = Classical::and(Classical::not(Classical::atom("qb1")), Classical::not(Classical::atom("qb2")));
        assert_eq!(f, Formula::Leq(Term::Integral(a), Term::Integral(b)));
    }

    #[test]
    fn falsum() {
        assert_eq!(parse_formula("QF").unwrap(), Formula::Falsum);
        assert_eq!(print_formula(&Formula::Falsum), "QF");
    }

    #[test]
    fn molecule_example() {
        let f = parse_formula("[{qb1,qb2}] /\\ ($x <= T[{qb1,qb2};{qb1,qb2}]) /\\ (1/2.Id <= T[{};{qb1,qb2}])")
            .unwrap();
        let qb = qubit_set(["qb1", "qb2"]);
        let expected = Formula::and(
            Formula::and(
                Formula::SubSys(qb.clone()),
                Formula::Leq(Term::var("x"), Term::top(qb.clone(), qb.clone())),
            ),
            Formula::Leq(
                Term::scale(Coefficient::new(1, 2).unwrap(), Term::Ident),
                Term::top(Default::default(), qb),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn bare_term_reads_as_identity_equation() {
        assert_eq!(
            parse_formula("int(a)").unwrap(),
            Formula::Eq(Term::Integral(Classical::atom("a")), Term::Ident)
        );
        assert_eq!(
            parse_formula("(Id) <= O").unwrap(),
            Formula::Leq(Term::Ident, Term::Null)
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let t = parse_term("Id + O * Id ox O").unwrap();
        assert_eq!(
            t,
            Term::add(Term::Ident, Term::tensor(Term::compose(Term::Null, Term::Ident), Term::Null))
        );
        assert_eq!(print_term(&t), "Id + O * Id ox O");
        let c = parse_classical("a -> b -> c").unwrap();
        assert_eq!(c, Classical::implies(Classical::atom("a"), Classical::implies(Classical::atom("b"), Classical::atom("c"))));
        let c2 = Classical::implies(Classical::implies(Classical::atom("a"), Classical::atom("b")), Classical::atom("c"));
        assert_eq!(print_classical(&c2), "(a -> b) -> c");
        let t2 = Term::compose(Term::Ident, Term::add(Term::Null, Term::Ident));
        assert_eq!(print_term(&t2), "Id * (O + Id)");
        assert_eq!(parse_term(&print_term(&t2)).unwrap(), t2);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("Id <= ").unwrap_err();
        assert_eq!(e.position, 6);
        assert!(parse_formula("T[{a};{b}] <= Id").is_err());
        assert!(parse_term("3/2.Id").is_err());
        assert!(parse_term("1/0.Id").is_err());
        assert!(parse_formula("(Id <= O").is_err());
    }

    #[test]
    fn scale_chains_round_trip() {
        let t = parse_term("1/2.1/3.Id").unwrap();
        assert_eq!(print_term(&t), "1/2.1/3.Id");
        assert_eq!(parse_term("2/4.Id").unwrap(), parse_term("1/2.Id").unwrap());
    }
}
