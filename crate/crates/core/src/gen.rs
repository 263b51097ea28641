//! Seeded random matrices, states, channels, structures and syntax trees.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::checker::{Partition, StateSpec, Structure};
use crate::density::{DensityOperator, Subspace};
use crate::eigen::hermitian_eigen;
use crate::lang::{Classical, Coefficient, Formula, Term};
use crate::matrix::{ComplexMatrix, Operator};
use crate::register::{QubitSet, Register};
use crate::superop::SuperOperator;
use crate::valuation::ValuationSet;

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream per `(seed, a, b)`.
pub fn derive_seed(seed: u64, a: u64, b: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(mix(mix(seed) ^ a) ^ b.rotate_left(17))
}

pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_vec(dim, dim, (0..dim * dim).map(|_| complex(rng)).collect())
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    matrix(rng, dim).hermitian_part()
}

/// Orthonormalized random columns.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    loop {
        let cols: Vec<Vec<C64>> = (0..dim).map(|_| (0..dim).map(|_| complex(rng)).collect()).collect();
        let s = Subspace::spanned_by(dim, &cols, 1e-6);
        if s.rank() == dim {
            let mut u = ComplexMatrix::zeros(dim, dim);
            for (j, b) in s.basis().iter().enumerate() {
                for (i, z) in b.iter().enumerate() {
                    u.set(i, j, *z);
                }
            }
            return u;
        }
    }
}

/// `A^dagger A` normalized, mixed with a random diagonal.
pub fn density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityOperator {
    let all: Vec<usize> = (0..dim).collect();
    density_on(rng, dim, &all)
}

/// Random state supported on the basis states `support`.
pub fn density_on<R: Rng + ?Sized>(rng: &mut R, dim: usize, support: &[usize]) -> DensityOperator {
    let k = support.len();
    let a = matrix(rng, k);
    let mut g = a.adjoint().mul(&a).expect("square");
    let mix = rng.gen_range(0.0..1.0);
    for i in 0..k {
        let d = g.get(i, i) + C64::new(mix * rng.gen_range(0.0..1.0), 0.0);
        g.set(i, i, d);
    }
    let t = g.trace().expect("square").re;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (i, &p) in support.iter().enumerate() {
        for (j, &q) in support.iter().enumerate() {
            m.set(p, q, g.get(i, j) / t);
        }
    }
    DensityOperator::from_dense(m, 1e-9).expect("positive by construction")
}

/// Random classical mixture on `support`.
pub fn diagonal_density_on<R: Rng + ?Sized>(rng: &mut R, dim: usize, support: &[usize]) -> DensityOperator {
    let mut p = alloc::vec![0.0; dim];
    let w: Vec<f64> = support.iter().map(|_| rng.gen_range(0.05..1.0)).collect();
    let t: f64 = w.iter().sum();
    for (&i, x) in support.iter().zip(&w) {
        p[i] = x / t;
    }
    DensityOperator::Diagonal(p)
}

pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityOperator {
    let v: Vec<C64> = (0..dim).map(|_| complex(rng)).collect();
    let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
    let v: Vec<C64> = v.iter().map(|z| z / norm).collect();
    DensityOperator::pure(&v, 1e-9).expect("nonzero vector")
}

/// `Q^{-1/2}` for positive definite `Q`.
fn inverse_sqrt(q: &ComplexMatrix) -> ComplexMatrix {
    let e = hermitian_eigen(q).expect("hermitian");
    let n = q.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let v = e.vector(k);
        let s = 1.0 / libm::sqrt(e.values[k].max(1e-300));
        out = out.add(&ComplexMatrix::outer(&v, &v).scale_real(s)).expect("same dim");
    }
    out
}

/// Trace-preserving map with `count` random Kraus elements.
pub fn channel<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> SuperOperator {
    let ks: Vec<ComplexMatrix> = (0..count).map(|_| matrix(rng, dim)).collect();
    let mut q = ComplexMatrix::zeros(dim, dim);
    for k in &ks {
        q = q.add(&k.adjoint().mul(k).expect("square")).expect("same dim");
    }
    let r = inverse_sqrt(&q);
    let kraus = ks.iter().map(|k| Operator::Dense(k.mul(&r).expect("square"))).collect();
    SuperOperator::new(dim, kraus).expect("valid kraus set")
}

/// Trace-nonincreasing map: a channel shrunk by a random factor in `[0,1]`.
pub fn kraus_map<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> SuperOperator {
    let c = channel(rng, dim, count);
    c.scale(rng.gen_range(0.0..1.0)).expect("factor in range")
}

/// Uniform over set partitions of `items`, by enumerating restricted growth strings.
pub fn set_partition<R: Rng + ?Sized, T: Clone>(rng: &mut R, items: &[T]) -> Vec<Vec<T>> {
    let n = items.len();
    if n == 0 {
        return Vec::new();
    }
    let mut all = Vec::new();
    let mut rgs = alloc::vec![0usize; n];
    loop {
        all.push(rgs.clone());
        // next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                let blocks = all.choose(rng).expect("non-empty").clone();
                let k = blocks.iter().max().unwrap() + 1;
                let mut out = alloc::vec![Vec::new(); k];
                for (j, b) in blocks.iter().enumerate() {
                    out[*b].push(items[j].clone());
                }
                return out;
            }
            let max_prefix = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= max_prefix {
                rgs[i] += 1;
                for x in &mut rgs[i + 1..] {
                    *x = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

pub fn qubit_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("qb{i}")).collect()
}

pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, of: &QubitSet) -> QubitSet {
    of.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
}

/// A random union of blocks with probability `bias`, else any subset of `qB`.
pub fn subsystem<R: Rng + ?Sized>(rng: &mut R, m: &Structure, bias: f64) -> QubitSet {
    if rng.gen_bool(bias) {
        let alg = m.partition().alg_of();
        alg.choose(rng).cloned().unwrap_or_default()
    } else {
        random_subset(rng, &m.register().all())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureOptions {
    pub min_qubits: usize,
    pub max_qubits: usize,
    /// Use `V = 2^qB`; otherwise `V` is a random superset of the state's support.
    pub full_admissible: bool,
    /// Probability that a block state is a classical mixture.
    pub diagonal_bias: f64,
    /// Probability that a block state lives on a random subset of basis states.
    pub restricted_bias: f64,
    /// Variables assigned random trace-nonincreasing maps.
    pub variables: usize,
}

impl Default for StructureOptions {
    fn default() -> Self {
        Self {
            min_qubits: 1,
            max_qubits: 4,
            full_admissible: false,
            diagonal_bias: 0.3,
            restricted_bias: 0.3,
            variables: 0,
        }
    }
}

pub fn variable_names(k: usize) -> Vec<String> {
    const NAMES: [&str; 4] = ["x", "y", "z", "w"];
    (0..k).map(|i| if i < NAMES.len() { NAMES[i].into() } else { format!("x{i}") }).collect()
}

/// Block-product structure with a uniformly random partition.
pub fn structure<R: Rng + ?Sized>(rng: &mut R, opts: &StructureOptions) -> Structure {
    let n = rng.gen_range(opts.min_qubits..=opts.max_qubits);
    let register = Register::new(qubit_names(n)).expect("valid names");
    let blocks: Vec<QubitSet> =
        set_partition(rng, register.names()).into_iter().map(|b| b.into_iter().collect()).collect();
    let partition = Partition::new(blocks, &register).expect("partition of the register");
    let states: Vec<DensityOperator> = partition
        .blocks()
        .iter()
        .map(|b| {
            let dim = 1usize << b.len();
            let support: Vec<usize> = if rng.gen_bool(opts.restricted_bias) {
                let mut s: Vec<usize> = (0..dim).filter(|_| rng.gen_bool(0.5)).collect();
                if s.is_empty() {
                    s.push(rng.gen_range(0..dim));
                }
                s
            } else {
                (0..dim).collect()
            };
            if rng.gen_bool(opts.diagonal_bias) {
                diagonal_density_on(rng, dim, &support)
            } else {
                density_on(rng, dim, &support)
            }
        })
        .collect();
    let rho = crate::checker::global_density(&register, &partition, &StateSpec::Blocks(states.clone()))
        .expect("consistent dimensions");
    let admissible = if opts.full_admissible {
        ValuationSet::all(n)
    } else {
        ValuationSet::from_predicate(n, |i| rho.population(i) > 1e-12 || rng.gen_bool(0.3))
    };
    let mut assignment = BTreeMap::new();
    for x in variable_names(opts.variables) {
        let count = rng.gen_range(1..=2);
        assignment.insert(x, kraus_map(rng, register.dim(), count));
    }
    Structure::new(register, admissible, partition, StateSpec::Blocks(states), assignment)
        .expect("generated structure is valid")
}

/// Random classical formula over `atoms` (which may be empty).
pub fn classical<R: Rng + ?Sized>(rng: &mut R, atoms: &[String], depth: usize) -> Classical {
    if depth == 0 || rng.gen_bool(0.3) {
        return match (atoms.is_empty(), rng.gen_range(0..10)) {
            (_, 0) => Classical::False,
            (_, 1) => Classical::True,
            (true, _) => {
                if rng.gen_bool(0.5) {
                    Classical::True
                } else {
                    Classical::False
                }
            }
            (false, _) => Classical::Atom(atoms.choose(rng).unwrap().clone()),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..5) {
        0 => Classical::not(classical(rng, atoms, d)),
        1 => Classical::and(classical(rng, atoms, d), classical(rng, atoms, d)),
        2 => Classical::or(classical(rng, atoms, d), classical(rng, atoms, d)),
        3 => Classical::implies(classical(rng, atoms, d), classical(rng, atoms, d)),
        _ => Classical::iff(classical(rng, atoms, d), classical(rng, atoms, d)),
    }
}

pub fn coefficient<R: Rng + ?Sized>(rng: &mut R) -> Coefficient {
    let den = rng.gen_range(1..=8u64);
    let num = rng.gen_range(0..=den);
    Coefficient::new(num, den).expect("num <= den")
}

/// Split `scope` into two disjoint non-empty parts, if it has two qubits.
fn split<R: Rng + ?Sized>(rng: &mut R, scope: &QubitSet) -> Option<(QubitSet, QubitSet)> {
    if scope.len() < 2 {
        return None;
    }
    let items: Vec<&String> = scope.iter().collect();
    loop {
        let left: QubitSet = items.iter().filter(|_| rng.gen_bool(0.5)).map(|q| (*q).clone()).collect();
        if !left.is_empty() && left.len() < scope.len() {
            let right = scope.difference(&left).cloned().collect();
            return Some((left, right));
        }
    }
}

/// A well-formed term acting within `scope`. Variables appear only when
/// `vars` is non-empty and never under a tensor.
pub fn term_within<R: Rng + ?Sized>(rng: &mut R, scope: &QubitSet, vars: &[String], depth: usize) -> Term {
    let atoms: Vec<String> = scope.iter().cloned().collect();
    if depth == 0 || rng.gen_bool(0.35) {
        return match rng.gen_range(0..10) {
            0 => Term::Null,
            1 => Term::Ident,
            2 if !vars.is_empty() => Term::Var(vars.choose(rng).unwrap().clone()),
            2..=5 => Term::Integral(classical(rng, &atoms, 2)),
            _ => {
                let g = random_subset(rng, scope);
                Term::top(random_subset(rng, &g), g)
            }
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..5) {
        0 => Term::add(term_within(rng, scope, vars, d), term_within(rng, scope, vars, d)),
        1 => Term::compose(term_within(rng, scope, vars, d), term_within(rng, scope, vars, d)),
        2 => Term::scale(coefficient(rng), term_within(rng, scope, vars, d)),
        _ => match split(rng, scope) {
            Some((l, r)) => Term::tensor(term_within(rng, &l, &[], d), term_within(rng, &r, &[], d)),
            None => Term::scale(coefficient(rng), term_within(rng, scope, vars, d)),
        },
    }
}

/// Random quantum formula whose terms are well-formed on `register`.
pub fn formula<R: Rng + ?Sized>(rng: &mut R, register: &Register, vars: &[String], depth: usize) -> Formula {
    let all = register.all();
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..12) {
            0 => Formula::Falsum,
            1 | 2 => Formula::SubSys(random_subset(rng, &all)),
            3 => Formula::eq(term_within(rng, &all, vars, 2), term_within(rng, &all, vars, 2)),
            4 => Formula::lt(term_within(rng, &all, vars, 2), term_within(rng, &all, vars, 2)),
            _ => Formula::leq(term_within(rng, &all, vars, 2), term_within(rng, &all, vars, 2)),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..5) {
        0 => Formula::not(formula(rng, register, vars, d)),
        1 => Formula::and(formula(rng, register, vars, d), formula(rng, register, vars, d)),
        2 => Formula::or(formula(rng, register, vars, d), formula(rng, register, vars, d)),
        3 => Formula::implies(formula(rng, register, vars, d), formula(rng, register, vars, d)),
        _ => Formula::iff(formula(rng, register, vars, d), formula(rng, register, vars, d)),
    }
}

/// Syntax-only term: any shape the grammar allows, not necessarily interpretable.
pub fn any_term<R: Rng + ?Sized>(rng: &mut R, names: &[String], depth: usize) -> Term {
    let all: QubitSet = names.iter().cloned().collect();
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..6) {
            0 => Term::Null,
            1 => Term::Ident,
            2 => Term::Var(variable_names(3).choose(rng).unwrap().clone()),
            3 => Term::Integral(classical(rng, names, 3)),
            _ => {
                let g = random_subset(rng, &all);
                Term::top(random_subset(rng, &g), g)
            }
        };
    }
    let d = depth - 1;
    let sub = |rng: &mut R| Box::new(any_term(rng, names, d));
    match rng.gen_range(0..4) {
        0 => Term::Add(sub(rng), sub(rng)),
        1 => Term::Compose(sub(rng), sub(rng)),
        2 => Term::Tensor(sub(rng), sub(rng)),
        _ => Term::Scale(coefficient(rng), sub(rng)),
    }
}

/// Syntax-only formula, with every connective including the derived ones.
pub fn any_formula<R: Rng + ?Sized>(rng: &mut R, names: &[String], depth: usize) -> Formula {
    let all: QubitSet = names.iter().cloned().collect();
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..6) {
            0 => Formula::Falsum,
            1 => Formula::SubSys(random_subset(rng, &all)),
            2 => Formula::Eq(any_term(rng, names, 3), any_term(rng, names, 3)),
            3 => Formula::Lt(any_term(rng, names, 3), any_term(rng, names, 3)),
            _ => Formula::Leq(any_term(rng, names, 3), any_term(rng, names, 3)),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..5) {
        0 => Formula::not(any_formula(rng, names, d)),
        1 => Formula::and(any_formula(rng, names, d), any_formula(rng, names, d)),
        2 => Formula::or(any_formula(rng, names, d), any_formula(rng, names, d)),
        3 => Formula::implies(any_formula(rng, names, d), any_formula(rng, names, d)),
        _ => Formula::iff(any_formula(rng, names, d), any_formula(rng, names, d)),
    }
}

/// Draw a `u64` for seeding sub-generators.
pub fn next_seed<R: RngCore + ?Sized>(rng: &mut R) -> u64 {
    rng.next_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::is_psd;

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng(1);
        let u = unitary(&mut r, 4);
        let p = u.mul(&u.adjoint()).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-9);
    }

    #[test]
    fn channel_preserves_trace() {
        let mut r = rng(2);
        let c = channel(&mut r, 4, 3);
        assert!(c.is_trace_preserving(1e-9));
        let k = kraus_map(&mut r, 4, 2);
        let q = k.trace_observable().to_dense();
        assert!(is_psd(&ComplexMatrix::identity(4).sub(&q).unwrap(), 1e-9).unwrap());
    }

    #[test]
    fn partitions_cover_all_shapes() {
        let mut r = rng(3);
        let mut shapes = alloc::collections::BTreeSet::new();
        for _ in 0..400 {
            let p = set_partition(&mut r, &[1, 2, 3]);
            let mut sizes: Vec<usize> = p.iter().map(Vec::len).collect();
            sizes.sort_unstable();
            assert_eq!(sizes.iter().sum::<usize>(), 3);
            shapes.insert(p);
        }
        // Bell number B3
        assert_eq!(shapes.len(), 5);
    }

    #[test]
    fn structures_are_valid_and_reproducible() {
        let opts = StructureOptions { variables: 2, ..Default::default() };
        let a = structure(&mut rng(9), &opts);
        let b = structure(&mut rng(9), &opts);
        assert_eq!(a, b);
        assert!((a.rho().trace() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn seeds_differ() {
        assert_ne!(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
        assert_ne!(derive_seed(1, 0, 0), derive_seed(1, 1, 0));
    }
}
