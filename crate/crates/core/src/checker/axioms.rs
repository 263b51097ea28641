//! Matchers for the twelve axiom schemas.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::lang::{
    as_and, as_eq, as_iff, desugar, desugar_classical, is_skeleton_tautology, is_tautology, substitute, Classical,
    Formula, Term,
};
use crate::register::{QubitSet, Register};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    QTaut,
    Rcf,
    Unit,
    CTaut,
    MeshEmpty,
    FAdd,
    Mon,
    Prob,
    Mo1,
    SubEmpty,
    SubUnion,
    SubDiff,
}

impl Axiom {
    pub const ALL: [Axiom; 12] = [
        Axiom::QTaut,
        Axiom::Rcf,
        Axiom::Unit,
        Axiom::CTaut,
        Axiom::MeshEmpty,
        Axiom::FAdd,
        Axiom::Mon,
        Axiom::Prob,
        Axiom::Mo1,
        Axiom::SubEmpty,
        Axiom::SubUnion,
        Axiom::SubDiff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::QTaut => "QTaut",
            Axiom::Rcf => "RCF",
            Axiom::Unit => "Unit",
            Axiom::CTaut => "CTaut",
            Axiom::MeshEmpty => "MeshEmpty",
            Axiom::FAdd => "FAdd",
            Axiom::Mon => "Mon",
            Axiom::Prob => "Prob",
            Axiom::Mo1 => "MO1",
            Axiom::SubEmpty => "SubEmpty",
            Axiom::SubUnion => "SubUnion",
            Axiom::SubDiff => "SubDiff",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown axiom `{0}`")]
pub struct UnknownAxiom(pub String);

impl FromStr for Axiom {
    type Err = UnknownAxiom;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "QTaut" => Axiom::QTaut,
            "RCF" => Axiom::Rcf,
            "Unit" => Axiom::Unit,
            "CTaut" => Axiom::CTaut,
            "MeshEmpty" | "Mesh0" | "Mesh∅" => Axiom::MeshEmpty,
            "FAdd" => Axiom::FAdd,
            "Mon" => Axiom::Mon,
            "Prob" => Axiom::Prob,
            "MO1" => Axiom::Mo1,
            "SubEmpty" | "Sub0" | "Sub∅" => Axiom::SubEmpty,
            "SubUnion" | "Sub∪" => Axiom::SubUnion,
            "SubDiff" | "Sub\\" | "Sub∖" => Axiom::SubDiff,
            _ => return Err(UnknownAxiom(s.into())),
        })
    }
}

/// What the schemas need to know about the ambient system. Without a register,
/// schemas that mention `qB` (the unguarded `Unit` form and `SubDiff`) never match.
#[derive(Debug, Clone, Default)]
pub struct AxiomContext {
    pub register: Option<Register>,
}

impl AxiomContext {
    pub fn with_register(register: Register) -> Self {
        Self { register: Some(register) }
    }
}

fn implication(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Implies(a, b) => Some((a, b)),
        _ => None,
    }
}

fn subsys(f: &Formula) -> Option<&QubitSet> {
    match f {
        Formula::SubSys(g) => Some(g),
        _ => None,
    }
}

fn integral(t: &Term) -> Option<&Classical> {
    match t {
        Term::Integral(a) => Some(a),
        _ => None,
    }
}

fn all_subsets(g: &QubitSet) -> Vec<QubitSet> {
    let items: Vec<&String> = g.iter().collect();
    (0u64..(1u64 << items.len()))
        .map(|mask| items.iter().enumerate().filter(|(i, _)| (mask >> i) & 1 == 1).map(|(_, q)| (*q).clone()).collect())
        .collect()
}

/// `sum` is `sum_{A in family} T[A;g]`, each member once, in any order.
fn is_top_sum_over(sum: &Term, g: &QubitSet, family: &[QubitSet]) -> bool {
    if family.is_empty() {
        return *sum == Term::Null;
    }
    let mut seen = BTreeSet::new();
    for s in sum.summands() {
        match s {
            Term::TOp { ones, scope } if scope == g && family.contains(ones) => {
                if !seen.insert(ones.clone()) {
                    return false;
                }
            }
            _ => return false,
        }
    }
    seen.len() == family.len()
}

/// `sum_{A <= G} T[A;G] = Id`, returning `G`.
fn unit_body(f: &Formula) -> Option<QubitSet> {
    let (s, id) = as_eq(f)?;
    if *id != Term::Ident {
        return None;
    }
    let g = match s.summands().first()? {
        Term::TOp { scope, .. } => scope.clone(),
        _ => return None,
    };
    is_top_sum_over(s, &g, &all_subsets(&g)).then_some(g)
}

fn match_unit(d: &Formula, ctx: &AxiomContext) -> bool {
    if let Some((guard, body)) = implication(d) {
        if let (Some(g), Some(h)) = (subsys(guard), unit_body(body)) {
            if *g == h {
                return true;
            }
        }
    }
    match (unit_body(d), &ctx.register) {
        (Some(g), Some(r)) => g == r.all(),
        _ => false,
    }
}

fn match_ctaut(d: &Formula) -> bool {
    match as_eq(d) {
        Some((Term::Integral(a), Term::Ident)) => is_tautology(a).unwrap_or(false),
        _ => false,
    }
}

fn match_mesh(d: &Formula) -> bool {
    matches!(as_eq(d), Some((Term::Integral(Classical::False), Term::Null)))
}

fn same_classical(a: &Classical, b: &Classical) -> bool {
    desugar_classical(a) == desugar_classical(b)
}

fn match_fadd(d: &Formula) -> bool {
    let Some((hyp, concl)) = implication(d) else { return false };
    let Some((Term::Integral(conj), Term::Null)) = as_eq(hyp) else { return false };
    let Some((Term::Integral(disj), Term::Add(x, y))) = as_eq(concl) else { return false };
    let (Some(a1), Some(a2)) = (integral(x), integral(y)) else { return false };
    same_classical(conj, &Classical::and(a1.clone(), a2.clone()))
        && same_classical(disj, &Classical::or(a1.clone(), a2.clone()))
}

fn match_mon(d: &Formula) -> bool {
    let Some((hyp, concl)) = implication(d) else { return false };
    let Some((Term::Integral(imp), Term::Ident)) = as_eq(hyp) else { return false };
    let Formula::Leq(Term::Integral(a1), Term::Integral(a2)) = concl else { return false };
    same_classical(imp, &Classical::implies(a1.clone(), a2.clone()))
}

fn match_prob(d: &Formula, ctx: &AxiomContext) -> bool {
    let Some((Term::Integral(a), sum)) = as_eq(d) else { return false };
    let atoms = a.atoms();
    let scope = match sum.summands().first() {
        Some(Term::TOp { scope, .. }) => scope.clone(),
        _ => match &ctx.register {
            Some(r) => r.all(),
            None => atoms.clone(),
        },
    };
    if !atoms.is_subset(&scope) {
        return false;
    }
    if let Some(r) = &ctx.register {
        if !r.contains_all(&scope) {
            return false;
        }
    }
    let family: Vec<QubitSet> =
        all_subsets(&scope).into_iter().filter(|ones| a.eval(&|x: &str| ones.contains(x))).collect();
    is_top_sum_over(sum, &scope, &family)
}

fn match_mo1(d: &Formula) -> bool {
    let Some((guard, body)) = implication(d) else { return false };
    let Some((l, r)) = as_and(guard) else { return false };
    let (Some(g1), Some(g2)) = (subsys(l), subsys(r)) else { return false };
    let Some((Term::TOp { ones, scope }, Term::Tensor(x, y))) = as_eq(body) else { return false };
    let (Term::TOp { ones: a1, scope: h1 }, Term::TOp { ones: a2, scope: h2 }) = (&**x, &**y) else {
        return false;
    };
    let union = |p: &QubitSet, q: &QubitSet| -> QubitSet { p.union(q).cloned().collect() };
    h1 == g1 && h2 == g2 && g1.is_disjoint(g2) && *scope == union(g1, g2) && *ones == union(a1, a2)
}

fn match_sub_union(d: &Formula) -> bool {
    let Some((x, rest)) = implication(d) else { return false };
    let Some((y, z)) = implication(rest) else { return false };
    match (subsys(x), subsys(y), subsys(z)) {
        (Some(g1), Some(g2), Some(g)) => *g == g1.union(g2).cloned().collect::<QubitSet>(),
        _ => false,
    }
}

fn match_sub_diff(d: &Formula, ctx: &AxiomContext) -> bool {
    let Some(r) = &ctx.register else { return false };
    let Some((x, y)) = as_iff(d) else { return false };
    match (subsys(x), subsys(y)) {
        (Some(g), Some(h)) => r.contains_all(g) && *h == r.complement(g),
        _ => false,
    }
}

/// `f` is an instance of `axiom`. `RCF` here accepts any formula whose skeleton is
/// a tautology; [`is_rcf_instance`] checks an explicit substitution.
pub fn is_axiom_instance(f: &Formula, axiom: Axiom, ctx: &AxiomContext) -> bool {
    let d = desugar(f);
    match axiom {
        Axiom::QTaut | Axiom::Rcf => is_skeleton_tautology(&d).unwrap_or(false),
        Axiom::Unit => match_unit(&d, ctx),
        Axiom::CTaut => match_ctaut(&d),
        Axiom::MeshEmpty => match_mesh(&d),
        Axiom::FAdd => match_fadd(&d),
        Axiom::Mon => match_mon(&d),
        Axiom::Prob => match_prob(&d, ctx),
        Axiom::Mo1 => match_mo1(&d),
        Axiom::SubEmpty => matches!(&d, Formula::SubSys(g) if g.is_empty()),
        Axiom::SubUnion => match_sub_union(&d),
        Axiom::SubDiff => match_sub_diff(&d, ctx),
    }
}

/// `f` is `pattern{x/t}` and `pattern`'s skeleton is a tautology.
pub fn is_rcf_instance(f: &Formula, pattern: &Formula, binding: &BTreeMap<String, Term>) -> bool {
    desugar(&substitute(pattern, binding)) == desugar(f) && is_skeleton_tautology(pattern).unwrap_or(false)
}

/// All schemas `f` is an instance of.
pub fn matching_axioms(f: &Formula, ctx: &AxiomContext) -> Vec<Axiom> {
    Axiom::ALL.iter().copied().filter(|a| is_axiom_instance(f, *a, ctx)).collect()
}

/// `[G] <=> [qB \ G]` for every `G <= qB`.
pub fn sub_diff_instances(register: &Register) -> Vec<Formula> {
    all_subsets(&register.all())
        .into_iter()
        .map(|g| {
            let h = register.complement(&g);
            Formula::iff(Formula::SubSys(g), Formula::SubSys(h))
        })
        .collect()
}

/// `[G1] => ([G2] => [G1 u G2])` for the given sets.
pub fn sub_union_instance(g1: &QubitSet, g2: &QubitSet) -> Formula {
    Formula::implies(
        Formula::SubSys(g1.clone()),
        Formula::implies(Formula::SubSys(g2.clone()), Formula::SubSys(g1.union(g2).cloned().collect())),
    )
}

/// `[G] => (sum_{A <= G} T[A;G] = Id)`, summands by ascending bitmask over `G`.
pub fn unit_instance(g: &QubitSet) -> Formula {
    let sum = Term::sum(all_subsets(g).into_iter().map(|a| Term::top(a, g.clone())));
    Formula::implies(Formula::SubSys(g.clone()), Formula::eq(sum, Term::Ident))
}

/// `int(a) = sum_{A in [[a]]} T[A;G]` over `G`.
pub fn prob_instance(a: &Classical, g: &QubitSet) -> Formula {
    let sum = Term::sum(
        all_subsets(g).into_iter().filter(|ones| a.eval(&|x: &str| ones.contains(x))).map(|ones| Term::top(ones, g.clone())),
    );
    Formula::eq(Term::Integral(a.clone()), sum)
}

pub fn fadd_instance(a1: &Classical, a2: &Classical) -> Formula {
    Formula::implies(
        Formula::eq(Term::int(Classical::and(a1.clone(), a2.clone())), Term::Null),
        Formula::eq(
            Term::int(Classical::or(a1.clone(), a2.clone())),
            Term::add(Term::int(a1.clone()), Term::int(a2.clone())),
        ),
    )
}

pub fn mon_instance(a1: &Classical, a2: &Classical) -> Formula {
    Formula::implies(
        Formula::eq(Term::int(Classical::implies(a1.clone(), a2.clone())), Term::Ident),
        Formula::leq(Term::int(a1.clone()), Term::int(a2.clone())),
    )
}

/// `([G1] /\ [G2]) => (T[A1 u A2; G1 u G2] = T[A1;G1] ox T[A2;G2])`
pub fn mo1_instance(a1: &QubitSet, g1: &QubitSet, a2: &QubitSet, g2: &QubitSet) -> Formula {
    let a: QubitSet = a1.union(a2).cloned().collect();
    let g: QubitSet = g1.union(g2).cloned().collect();
    Formula::implies(
        Formula::and(Formula::SubSys(g1.clone()), Formula::SubSys(g2.clone())),
        Formula::eq(Term::top(a, g), Term::tensor(Term::top(a1.clone(), g1.clone()), Term::top(a2.clone(), g2.clone()))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_formula;
    use crate::register::qubit_set;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn ctx2() -> AxiomContext {
        AxiomContext::with_register(Register::new(["qb1", "qb2"]).unwrap())
    }

    #[test]
    fn unit_examples() {
        let f = p("[{qb1,qb2}] => (T[{};{qb1,qb2}] + T[{qb1};{qb1,qb2}] + T[{qb2};{qb1,qb2}] + T[{qb1,qb2};{qb1,qb2}] = Id)");
        assert!(is_axiom_instance(&f, Axiom::Unit, &AxiomContext::default()));
        assert_eq!(unit_instance(&qubit_set(["qb1", "qb2"])), f);
        let missing = p("[{qb1,qb2}] => (T[{};{qb1,qb2}] + T[{qb1};{qb1,qb2}] + T[{qb1,qb2};{qb1,qb2}] = Id)");
        assert!(!is_axiom_instance(&missing, Axiom::Unit, &ctx2()));
        let twice = p("[{qb1}] => (T[{};{qb1}] + T[{qb1};{qb1}] + T[{qb1};{qb1}] = Id)");
        assert!(!is_axiom_instance(&twice, Axiom::Unit, &ctx2()));
        let bare = p("T[{qb2,qb1};{qb1,qb2}] + T[{qb1};{qb1,qb2}] + T[{qb2};{qb1,qb2}] + T[{};{qb1,qb2}] = Id");
        assert!(is_axiom_instance(&bare, Axiom::Unit, &ctx2()));
        assert!(!is_axiom_instance(&bare, Axiom::Unit, &AxiomContext::default()));
    }

    #[test]
    fn simple_schemas() {
        let c = AxiomContext::default();
        assert!(is_axiom_instance(&p("int(false) = O"), Axiom::MeshEmpty, &c));
        assert!(!is_axiom_instance(&p("int(qb1 & ~qb1) = O"), Axiom::MeshEmpty, &c));
        assert!(is_axiom_instance(&p("int(true) = Id"), Axiom::CTaut, &c));
        assert!(is_axiom_instance(&p("int(qb1 | ~qb1) = Id"), Axiom::CTaut, &c));
        assert!(!is_axiom_instance(&p("int(qb1) = Id"), Axiom::CTaut, &c));
        assert!(is_axiom_instance(&p("(Id <= O) \\/ !(Id <= O)"), Axiom::QTaut, &c));
        assert!(is_axiom_instance(&p("[{}]"), Axiom::SubEmpty, &c));
        assert!(is_axiom_instance(&p("[{a}] => ([{b}] => [{a,b}])"), Axiom::SubUnion, &c));
        assert!(!is_axiom_instance(&p("[{a,b}] => ([{a}] => [{b}])"), Axiom::SubUnion, &c));
        assert!(is_axiom_instance(&p("[{qb1}] <=> [{qb2}]"), Axiom::SubDiff, &ctx2()));
        assert!(!is_axiom_instance(&p("[{qb1}] <=> [{qb2}]"), Axiom::SubDiff, &c));
    }

    #[test]
    fn fadd_mon_prob() {
        let c = AxiomContext::default();
        let f = p("(int(a & b) = O) => (int(a | b) = int(a) + int(b))");
        assert!(is_axiom_instance(&f, Axiom::FAdd, &c));
        assert!(!is_axiom_instance(&p("(int(a & b) = O) => (int(a | b) = int(b) + int(a))"), Axiom::FAdd, &c));
        let m = p("int(a -> b) => (int(a) <= int(b))");
        assert!(is_axiom_instance(&m, Axiom::Mon, &c));
        assert_eq!(mon_instance(&Classical::atom("a"), &Classical::atom("b")), m);
        assert!(is_axiom_instance(&p("int(qb1 & qb2) = T[{qb1,qb2};{qb1,qb2}]"), Axiom::Prob, &c));
        assert!(is_axiom_instance(&p("int(qb1) = T[{qb1};{qb1,qb2}] + T[{qb1,qb2};{qb1,qb2}]"), Axiom::Prob, &c));
        assert!(!is_axiom_instance(&p("int(qb1) = T[{qb1};{qb1,qb2}]"), Axiom::Prob, &c));
        assert!(is_axiom_instance(&p("int(qb1 & ~qb1) = O"), Axiom::Prob, &c));
    }

    #[test]
    fn mo1() {
        let c = AxiomContext::default();
        let f = p("([{qb1}] /\\ [{qb2}]) => (T[{qb1,qb2};{qb1,qb2}] = T[{qb1};{qb1}] ox T[{qb2};{qb2}])");
        assert!(is_axiom_instance(&f, Axiom::Mo1, &c));
        let bad = p("([{qb1}] /\\ [{qb1}]) => (T[{qb1};{qb1}] = T[{qb1};{qb1}] ox T[{qb1};{qb1}])");
        assert!(!is_axiom_instance(&bad, Axiom::Mo1, &c));
    }

    #[test]
    fn rcf_with_binding() {
        let pattern = p("($x <= $y) \\/ !($x <= $y)");
        let mut b = BTreeMap::new();
        b.insert("x".into(), Term::Ident);
        b.insert("y".into(), Term::Null);
        assert!(is_rcf_instance(&p("(Id <= O) \\/ !(Id <= O)"), &pattern, &b));
        assert!(!is_rcf_instance(&p("(Id <= O) \\/ !(O <= O)"), &pattern, &b));
    }

    #[test]
    fn names_round_trip() {
        for a in Axiom::ALL {
            assert_eq!(a.name().parse::<Axiom>().unwrap(), a);
        }
        assert_eq!("Sub\\".parse::<Axiom>().unwrap(), Axiom::SubDiff);
        assert!("Foo".parse::<Axiom>().is_err());
    }
}
