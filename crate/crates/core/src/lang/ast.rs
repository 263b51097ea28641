use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::register::QubitSet;

/// Formula over qubit symbols. Derived connectives are kept as written;
/// [`desugar_classical`](super::desugar_classical) reduces to `False`/`Atom`/`Implies`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classical {
    False,
    True,
    Atom(String),
    Not(Box<Classical>),
    And(Box<Classical>, Box<Classical>),
    Or(Box<Classical>, Box<Classical>),
    Implies(Box<Classical>, Box<Classical>),
    Iff(Box<Classical>, Box<Classical>),
}

impl Classical {
    pub fn atom(name: impl Into<String>) -> Self {
        Classical::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Classical) -> Self {
        Classical::Not(Box::new(a))
    }

    pub fn and(a: Classical, b: Classical) -> Self {
        Classical::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Classical, b: Classical) -> Self {
        Classical::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Classical, b: Classical) -> Self {
        Classical::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Classical, b: Classical) -> Self {
        Classical::Iff(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn conj<I: IntoIterator<Item = Classical>>(items: I) -> Self {
        items.into_iter().reduce(Classical::and).unwrap_or(Classical::True)
    }

    /// Left-nested disjunction; `False` when empty.
    pub fn disj<I: IntoIterator<Item = Classical>>(items: I) -> Self {
        items.into_iter().reduce(Classical::or).unwrap_or(Classical::False)
    }

    pub fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Classical::False | Classical::True => {}
            Classical::Atom(a) => {
                out.insert(a.clone());
            }
            Classical::Not(a) => a.collect_atoms(out),
            Classical::And(a, b) | Classical::Or(a, b) | Classical::Implies(a, b) | Classical::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        self.collect_atoms(&mut s);
        s
    }

    pub fn eval<F: Fn(&str) -> bool>(&self, v: &F) -> bool {
        match self {
            Classical::False => false,
            Classical::True => true,
            Classical::Atom(a) => v(a),
            Classical::Not(a) => !a.eval(v),
            Classical::And(a, b) => a.eval(v) && b.eval(v),
            Classical::Or(a, b) => a.eval(v) || b.eval(v),
            Classical::Implies(a, b) => !a.eval(v) || b.eval(v),
            Classical::Iff(a, b) => a.eval(v) == b.eval(v),
        }
    }
}

/// Scale factor in `[0,1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coefficient(Ratio<u64>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoefficientError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("coefficient {0}/{1} is outside [0,1]")]
    OutOfRange(u64, u64),
}

impl Coefficient {
    pub fn new(num: u64, den: u64) -> Result<Self, CoefficientError> {
        if den == 0 {
            return Err(CoefficientError::ZeroDenominator);
        }
        if num > den {
            return Err(CoefficientError::OutOfRange(num, den));
        }
        Ok(Coefficient(Ratio::new(num, den)))
    }

    pub fn one() -> Self {
        Coefficient(Ratio::new(1, 1))
    }

    pub fn ratio(&self) -> Ratio<u64> {
        self.0
    }

    pub fn value(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// `O`, the null map.
    Null,
    /// `Id`
    Ident,
    Var(String),
    Integral(Classical),
    /// `T[ones;scope]`: qubits in `ones` fixed to 1, the rest of `scope` to 0.
    TOp { ones: QubitSet, scope: QubitSet },
    Add(Box<Term>, Box<Term>),
    Compose(Box<Term>, Box<Term>),
    Tensor(Box<Term>, Box<Term>),
    Scale(Coefficient, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn int(a: Classical) -> Self {
        Term::Integral(a)
    }

    pub fn top(ones: QubitSet, scope: QubitSet) -> Self {
        Term::TOp { ones, scope }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Term, b: Term) -> Self {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn compose(a: Term, b: Term) -> Self {
        Term::Compose(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: Term, b: Term) -> Self {
        Term::Tensor(Box::new(a), Box::new(b))
    }

    pub fn scale(r: Coefficient, t: Term) -> Self {
        Term::Scale(r, Box::new(t))
    }

    /// Left-nested sum; `O` when empty.
    pub fn sum<I: IntoIterator<Item = Term>>(items: I) -> Self {
        items.into_iter().reduce(Term::add).unwrap_or(Term::Null)
    }

    /// Flatten nested `+` into its summands, left to right.
    pub fn summands(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
            if let Term::Add(a, b) = t {
                go(a, out);
                go(b, out);
            } else {
                out.push(t);
            }
        }
        go(self, &mut out);
        out
    }

    pub fn has_var(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Null | Term::Ident | Term::Integral(_) | Term::TOp { .. } => false,
            Term::Add(a, b) | Term::Compose(a, b) | Term::Tensor(a, b) => a.has_var() || b.has_var(),
            Term::Scale(_, a) => a.has_var(),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Null | Term::Ident | Term::Integral(_) | Term::TOp { .. } => {}
            Term::Add(a, b) | Term::Compose(a, b) | Term::Tensor(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Scale(_, a) => a.collect_vars(out),
        }
    }

    /// Qubits the term acts on non-trivially; `None` when it contains a variable,
    /// which may act anywhere.
    pub fn syntactic_support(&self) -> Option<QubitSet> {
        match self {
            Term::Null | Term::Ident => Some(QubitSet::new()),
            Term::Var(_) => None,
            Term::Integral(a) => Some(a.atoms()),
            Term::TOp { scope, .. } => Some(scope.clone()),
            Term::Add(a, b) | Term::Compose(a, b) | Term::Tensor(a, b) => {
                let mut s = a.syntactic_support()?;
                s.extend(b.syntactic_support()?);
                Some(s)
            }
            Term::Scale(_, a) => a.syntactic_support(),
        }
    }

    /// Subterms in pre-order, including `self`.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
            out.push(t);
            match t {
                Term::Add(a, b) | Term::Compose(a, b) | Term::Tensor(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Term::Scale(_, a) => go(a, out),
                _ => {}
            }
        }
        go(self, &mut out);
        out
    }
}

/// Quantum formula with derived connectives kept as written;
/// [`desugar`](super::desugar) reduces to `Leq`/`SubSys`/`Falsum`/`Implies`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Leq(Term, Term),
    SubSys(QubitSet),
    /// `QF`
    Falsum,
    Implies(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Eq(Term, Term),
    Lt(Term, Term),
}

impl Formula {
    pub fn leq(a: Term, b: Term) -> Self {
        Formula::Leq(a, b)
    }

    pub fn eq(a: Term, b: Term) -> Self {
        Formula::Eq(a, b)
    }

    pub fn lt(a: Term, b: Term) -> Self {
        Formula::Lt(a, b)
    }

    pub fn subsys(g: QubitSet) -> Self {
        Formula::SubSys(g)
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// `!QF`
    pub fn verum() -> Self {
        Formula::not(Formula::Falsum)
    }

    /// Left-nested conjunction; `!QF` when empty.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items.into_iter().reduce(Formula::and).unwrap_or_else(Formula::verum)
    }

    /// Left-nested disjunction; `QF` when empty.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Falsum)
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Leq(..) | Formula::SubSys(_) | Formula::Eq(..) | Formula::Lt(..))
    }

    /// Terms occurring directly in atoms, left to right.
    pub fn atom_terms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Term>) {
            match f {
                Formula::Leq(a, b) | Formula::Eq(a, b) | Formula::Lt(a, b) => {
                    out.push(a);
                    out.push(b);
                }
                Formula::SubSys(_) | Formula::Falsum => {}
                Formula::Not(a) => go(a, out),
                Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        for t in self.atom_terms() {
            t.collect_vars(&mut s);
        }
        s
    }

    pub fn is_closed(&self) -> bool {
        self.atom_terms().iter().all(|t| !t.has_var())
    }
}
