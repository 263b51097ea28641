//! Randomized soundness checks: every generated instance of a schema must hold
//! in every generated structure.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;

use super::axioms::{
    fadd_instance, mo1_instance, mon_instance, prob_instance, sub_union_instance, unit_instance, Axiom,
};
use super::satisfy::satisfies;
use super::structure::Structure;
use super::templates::{contra_instance, eq_sym_instance, leq_trans_instance, pos_tensor_instance, Template};
use crate::gen::{self, GenRng, StructureOptions};
use crate::lang::{hom_f, is_tautology, print_formula, substitute, Classical, Formula, Term};
use crate::register::QubitSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Schema {
    Axiom(Axiom),
    Template(Template),
}

impl Schema {
    pub fn axioms() -> Vec<Schema> {
        Axiom::ALL.iter().map(|a| Schema::Axiom(*a)).collect()
    }

    pub fn templates() -> Vec<Schema> {
        Template::ALL.iter().map(|t| Schema::Template(*t)).collect()
    }

    pub fn all() -> Vec<Schema> {
        let mut v = Self::axioms();
        v.extend(Self::templates());
        v
    }

    pub fn name(self) -> &'static str {
        match self {
            Schema::Axiom(a) => a.name(),
            Schema::Template(t) => t.name(),
        }
    }

    fn stream(self) -> u64 {
        match self {
            Schema::Axiom(a) => Axiom::ALL.iter().position(|x| *x == a).unwrap() as u64,
            Schema::Template(t) => 100 + Template::ALL.iter().position(|x| *x == t).unwrap() as u64,
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzOptions {
    pub seed: u64,
    pub instances: usize,
    pub min_qubits: usize,
    pub max_qubits: usize,
    pub tol: f64,
}

impl Default for FuzzOptions {
    fn default() -> Self {
        Self { seed: 0, instances: 100, min_qubits: 1, max_qubits: 4, tol: crate::DEFAULT_TOL }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub schema: Schema,
    pub index: usize,
    pub seed: u64,
    pub formula: String,
    pub structure: String,
    /// Evaluation error, when the instance could not be evaluated at all.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemaReport {
    pub schema: Schema,
    pub instances: usize,
    pub satisfied: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl SchemaReport {
    pub fn empty(schema: Schema) -> Self {
        Self { schema, instances: 0, satisfied: 0, counterexamples: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// Combine reports over disjoint index ranges of the same schema.
    pub fn merge(&mut self, other: SchemaReport) {
        debug_assert_eq!(self.schema, other.schema);
        self.instances += other.instances;
        self.satisfied += other.satisfied;
        self.counterexamples.extend(other.counterexamples);
        self.counterexamples.sort_by_key(|c| c.index);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzReport {
    pub seed: u64,
    pub schemas: Vec<SchemaReport>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.schemas.iter().all(SchemaReport::passed)
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &Counterexample> {
        self.schemas.iter().flat_map(|s| s.counterexamples.iter())
    }
}

/// A classical tautology over `atoms`; random search with a fallback.
fn tautology(rng: &mut GenRng, atoms: &[String], depth: usize) -> Classical {
    for _ in 0..64 {
        let c = gen::classical(rng, atoms, depth);
        if is_tautology(&c).unwrap_or(false) {
            return c;
        }
    }
    let c = gen::classical(rng, atoms, depth.saturating_sub(1));
    match rng.gen_range(0..3) {
        0 => Classical::or(c.clone(), Classical::not(c)),
        1 => {
            let d = gen::classical(rng, atoms, 1);
            Classical::implies(c.clone(), Classical::implies(d, c))
        }
        _ => Classical::implies(Classical::and(c.clone(), Classical::not(c)), gen::classical(rng, atoms, 1)),
    }
}

fn letters(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("p{i}")).collect()
}

fn atom_formula(rng: &mut GenRng, m: &Structure, vars: &[String]) -> Formula {
    let all = m.register().all();
    match rng.gen_range(0..8) {
        0 => Formula::SubSys(gen::subsystem(rng, m, 0.5)),
        1 => Formula::eq(gen::term_within(rng, &all, vars, 2), gen::term_within(rng, &all, vars, 2)),
        2 => Formula::lt(gen::term_within(rng, &all, vars, 2), gen::term_within(rng, &all, vars, 2)),
        _ => Formula::leq(gen::term_within(rng, &all, vars, 2), gen::term_within(rng, &all, vars, 2)),
    }
}

/// Image of a random propositional tautology under random atoms.
fn qtaut(rng: &mut GenRng, m: &Structure, vars: &[String]) -> Formula {
    let k = rng.gen_range(1..=3);
    let names = letters(k);
    let shape = tautology(rng, &names, 3);
    let map: BTreeMap<String, Formula> = names.iter().map(|p| (p.clone(), atom_formula(rng, m, vars))).collect();
    hom_f(&shape, &map).expect("all letters mapped")
}

fn split_disjoint(rng: &mut GenRng, g: &QubitSet) -> (QubitSet, QubitSet) {
    let left: QubitSet = g.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    let right = g.difference(&left).cloned().collect();
    (left, right)
}

fn qubit_atoms(m: &Structure) -> Vec<String> {
    m.register().names().to_vec()
}

fn pos_tensor(rng: &mut GenRng, m: &Structure) -> Formula {
    // factors on disjoint unions of blocks, so the guard can hold
    let g = gen::subsystem(rng, m, 0.8);
    let blocks: Vec<&QubitSet> = m.partition().blocks().iter().filter(|b| b.is_subset(&g)).collect();
    let (mut g1, mut g2) = (QubitSet::new(), QubitSet::new());
    for b in blocks {
        if rng.gen_bool(0.5) {
            g1.extend(b.iter().cloned());
        } else {
            g2.extend(b.iter().cloned());
        }
    }
    if rng.gen_bool(0.2) {
        (g1, g2) = split_disjoint(rng, &g);
    }
    let t1 = gen::term_within(rng, &g1, &[], 2);
    let t2 = gen::term_within(rng, &g2, &[], 2);
    pos_tensor_instance(&t1, &t2).expect("disjoint supports")
}

/// One random instance of `schema`, well-formed for `m`.
pub fn instance(schema: Schema, rng: &mut GenRng, m: &Structure) -> Formula {
    let vars: Vec<String> = m.assignment().keys().cloned().collect();
    let all = m.register().all();
    let atoms = qubit_atoms(m);
    match schema {
        Schema::Axiom(Axiom::QTaut) => qtaut(rng, m, &vars),
        Schema::Axiom(Axiom::Rcf) => {
            // a tautological pattern over pattern variables, then a substitution
            let pv: Vec<String> = ["u", "v"].iter().map(|s| s.to_string()).collect();
            let shape = tautology(rng, &letters(2), 3);
            let map: BTreeMap<String, Formula> = letters(2)
                .into_iter()
                .map(|p| {
                    let a = gen::term_within(rng, &all, &pv, 2);
                    let b = gen::term_within(rng, &all, &pv, 2);
                    (p, if rng.gen_bool(0.5) { Formula::leq(a, b) } else { Formula::lt(a, b) })
                })
                .collect();
            let pattern = hom_f(&shape, &map).expect("all letters mapped");
            let binding: BTreeMap<String, Term> =
                pv.iter().map(|x| (x.clone(), gen::term_within(rng, &all, &vars, 2))).collect();
            substitute(&pattern, &binding)
        }
        Schema::Axiom(Axiom::Unit) => unit_instance(&gen::subsystem(rng, m, 0.7)),
        Schema::Axiom(Axiom::CTaut) => Formula::eq(Term::int(tautology(rng, &atoms, 3)), Term::Ident),
        Schema::Axiom(Axiom::MeshEmpty) => Formula::eq(Term::int(Classical::False), Term::Null),
        Schema::Axiom(Axiom::FAdd) => {
            let a1 = gen::classical(rng, &atoms, 3);
            let a2 = if rng.gen_bool(0.6) {
                Classical::and(Classical::not(a1.clone()), gen::classical(rng, &atoms, 2))
            } else {
                gen::classical(rng, &atoms, 3)
            };
            fadd_instance(&a1, &a2)
        }
        Schema::Axiom(Axiom::Mon) => {
            let b = gen::classical(rng, &atoms, 2);
            let (a1, a2) = match rng.gen_range(0..3) {
                0 => {
                    let a1 = gen::classical(rng, &atoms, 3);
                    (a1.clone(), Classical::or(a1, b))
                }
                1 => {
                    let a2 = gen::classical(rng, &atoms, 3);
                    (Classical::and(a2.clone(), b), a2)
                }
                _ => (gen::classical(rng, &atoms, 3), gen::classical(rng, &atoms, 3)),
            };
            mon_instance(&a1, &a2)
        }
        Schema::Axiom(Axiom::Prob) => {
            let g = gen::subsystem(rng, m, 0.3);
            let inner: Vec<String> = g.iter().cloned().collect();
            prob_instance(&gen::classical(rng, &inner, 3), &g)
        }
        Schema::Axiom(Axiom::Mo1) => {
            let g = gen::subsystem(rng, m, 0.7);
            let (g1, g2) = split_disjoint(rng, &g);
            let a1 = gen::random_subset(rng, &g1);
            let a2 = gen::random_subset(rng, &g2);
            mo1_instance(&a1, &g1, &a2, &g2)
        }
        Schema::Axiom(Axiom::SubEmpty) => Formula::SubSys(QubitSet::new()),
        Schema::Axiom(Axiom::SubUnion) => {
            sub_union_instance(&gen::subsystem(rng, m, 0.7), &gen::subsystem(rng, m, 0.7))
        }
        Schema::Axiom(Axiom::SubDiff) => {
            let g = gen::subsystem(rng, m, 0.5);
            Formula::iff(Formula::SubSys(g.clone()), Formula::SubSys(m.register().complement(&g)))
        }
        Schema::Template(Template::PosTensor) => pos_tensor(rng, m),
        Schema::Template(Template::Contra) => contra_instance(&gen::term_within(rng, &all, &vars, 3)),
        Schema::Template(Template::LeqTrans) => {
            let mut ts: Vec<Term> = (0..3).map(|_| gen::term_within(rng, &all, &vars, 3)).collect();
            ts.shuffle(rng);
            leq_trans_instance(&ts[0], &ts[1], &ts[2])
        }
        Schema::Template(Template::LeqRefl) => {
            let t = gen::term_within(rng, &all, &vars, 3);
            Formula::leq(t.clone(), t)
        }
        Schema::Template(Template::EqSym) => {
            eq_sym_instance(&gen::term_within(rng, &all, &vars, 3), &gen::term_within(rng, &all, &vars, 3))
        }
    }
}

/// Seed of instance `index` of `schema` under the run seed.
pub fn instance_seed(seed: u64, schema: Schema, index: usize) -> u64 {
    gen::derive_seed(seed, schema.stream(), index as u64)
}

/// Generate and check one instance.
pub fn fuzz_instance(schema: Schema, opts: &FuzzOptions, index: usize) -> Result<(), Counterexample> {
    let seed = instance_seed(opts.seed, schema, index);
    let mut rng = gen::rng(seed);
    let sopts = StructureOptions {
        min_qubits: opts.min_qubits,
        max_qubits: opts.max_qubits,
        full_admissible: rng.gen_bool(0.5),
        variables: 2,
        ..StructureOptions::default()
    };
    let m = gen::structure(&mut rng, &sopts);
    let f = instance(schema, &mut rng, &m);
    let fail = |error: Option<String>| Counterexample {
        schema,
        index,
        seed,
        formula: print_formula(&f),
        structure: m.describe(),
        error,
    };
    match satisfies(&m, &f, opts.tol) {
        Ok(true) => Ok(()),
        Ok(false) => Err(fail(None)),
        Err(e) => Err(fail(Some(e.to_string()))),
    }
}

/// Check the instances with indices in `range`.
pub fn fuzz_range(schema: Schema, opts: &FuzzOptions, range: Range<usize>) -> SchemaReport {
    let mut report = SchemaReport::empty(schema);
    for i in range {
        report.instances += 1;
        match fuzz_instance(schema, opts, i) {
            Ok(()) => report.satisfied += 1,
            Err(c) => report.counterexamples.push(c),
        }
    }
    report
}

pub fn fuzz_schema(schema: Schema, opts: &FuzzOptions) -> SchemaReport {
    fuzz_range(schema, opts, 0..opts.instances)
}

/// Sequential run over `schemas`.
pub fn soundness_fuzz(schemas: &[Schema], opts: &FuzzOptions) -> FuzzReport {
    FuzzReport { seed: opts.seed, schemas: schemas.iter().map(|s| fuzz_schema(*s, opts)).collect() }
}
