//! BB84 key distribution as an exact classical mixture over all random choices.
//!
//! Per position `i` there are four qubits: Alice's basis `qA_i`, her key bit
//! `qKA_i`, Bob's basis `qB_i` and his result `qKB_i`. Register order is all
//! `qA`, then all `qKA`, all `qB`, all `qKB`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Zero};

use crate::checker::{eval_term, model_check, CheckError, Partition, StateSpec, Structure};
use crate::density::DensityOperator;
use crate::lang::{valuations_of, Classical, Coefficient, Formula, Term};
use crate::register::Register;
use crate::valuation::ValuationSet;

pub type Prob = Ratio<u64>;

/// Largest `N` built on the diagonal path (`4N` qubits).
pub const MAX_DIAGONAL: usize = 5;
/// Largest `N` built as a dense matrix.
pub const MAX_DENSE: usize = 2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Bb84Error {
    #[error("N = {n} is outside 1..={max}")]
    OutOfRange { n: usize, max: usize },
    #[error("sift set is empty")]
    EmptySift,
    #[error("sift position {0} is outside 1..=N")]
    BadPosition(usize),
    #[error("threshold {0} is not in (0, 1]")]
    BadThreshold(f64),
    #[error("no state survives sifting")]
    NothingSifted,
    #[error(transparent)]
    Check(#[from] CheckError),
}

pub fn qubit_names(n: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(4 * n);
    for role in ["qA", "qKA", "qB", "qKB"] {
        for i in 1..=n {
            out.push(format!("{role}_{i}"));
        }
    }
    out
}

/// Outcome distribution of one position over `(a, ka, b, kb)`, indexed `a ka b kb`
/// as a 4-bit number with `a` most significant.
pub fn position_distribution(eavesdrop: bool) -> [Prob; 16] {
    let half = Prob::new(1, 2);
    let mut p = [Prob::zero(); 16];
    let idx = |a: u8, ka: u8, b: u8, kb: u8| ((a << 3) | (ka << 2) | (b << 1) | kb) as usize;
    // measuring a bit prepared in basis `prep` in basis `meas`
    let measure = |prep: u8, bit: u8, meas: u8| -> [Prob; 2] {
        if prep == meas {
            let mut r = [Prob::zero(); 2];
            r[bit as usize] = Prob::one();
            r
        } else {
            [half, half]
        }
    };
    for a in 0..2u8 {
        for ka in 0..2u8 {
            for b in 0..2u8 {
                let w = Prob::new(1, 8);
                if eavesdrop {
                    for e in 0..2u8 {
                        let pe = measure(a, ka, e);
                        for ke in 0..2u8 {
                            let pb = measure(e, ke, b);
                            for kb in 0..2u8 {
                                p[idx(a, ka, b, kb)] += w * half * pe[ke as usize] * pb[kb as usize];
                            }
                        }
                    }
                } else {
                    let pb = measure(a, ka, b);
                    for kb in 0..2u8 {
                        p[idx(a, ka, b, kb)] += w * pb[kb as usize];
                    }
                }
            }
        }
    }
    p
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bb84Instance {
    pub n: usize,
    pub eavesdrop: bool,
    pub register: Register,
    /// Exact weights over all `2^(4N)` valuations.
    pub distribution: Vec<Prob>,
}

/// Position of qubit `role` (0..4) of position `i` (1-based) in the register.
fn slot(n: usize, role: usize, i: usize) -> usize {
    role * n + (i - 1)
}

pub fn bb84_state(n: usize, eavesdrop: bool) -> Result<Bb84Instance, Bb84Error> {
    if n == 0 || n > MAX_DIAGONAL {
        return Err(Bb84Error::OutOfRange { n, max: MAX_DIAGONAL });
    }
    let per = position_distribution(eavesdrop);
    let q = 4 * n;
    let mut distribution = alloc::vec![Prob::zero(); 1 << q];
    for (index, w) in distribution.iter_mut().enumerate() {
        let mut acc = Prob::one();
        for i in 1..=n {
            let mut local = 0usize;
            for role in 0..4 {
                let bit = (index >> (q - 1 - slot(n, role, i))) & 1;
                local = (local << 1) | bit;
            }
            acc *= per[local];
            if acc.is_zero() {
                break;
            }
        }
        *w = acc;
    }
    let register = Register::new(qubit_names(n)).expect("valid names");
    Ok(Bb84Instance { n, eavesdrop, register, distribution })
}

fn positions(n: usize, sift: &BTreeSet<usize>) -> Result<(), Bb84Error> {
    if sift.is_empty() {
        return Err(Bb84Error::EmptySift);
    }
    match sift.iter().find(|&&i| i == 0 || i > n) {
        Some(&i) => Err(Bb84Error::BadPosition(i)),
        None => Ok(()),
    }
}

fn q(role: &str, i: usize) -> Classical {
    Classical::atom(format!("{role}_{i}"))
}

/// `/\_{i in M} (qA_i <-> qB_i)`
pub fn bases_agree(sift: &BTreeSet<usize>) -> Classical {
    Classical::conj(sift.iter().map(|&i| Classical::iff(q("qA", i), q("qB", i))))
}

/// `\/_{j in M} (qKA_j <-> ~qKB_j)`
pub fn key_mismatch(sift: &BTreeSet<usize>) -> Classical {
    Classical::disj(sift.iter().map(|&j| Classical::iff(q("qKA", j), Classical::not(q("qKB", j)))))
}

pub fn threshold_coefficient(a: f64) -> Result<Coefficient, Bb84Error> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Bb84Error::BadThreshold(a));
    }
    let r = Ratio::<i64>::from_f64(a).ok_or(Bb84Error::BadThreshold(a))?;
    Coefficient::new(*r.numer() as u64, *r.denom() as u64).map_err(|_| Bb84Error::BadThreshold(a))
}

/// `(O < int(bases agree on M)) => (a.Id <= int(some key bit on M differs))`
pub fn bb84_formula(n: usize, sift: &BTreeSet<usize>, a: f64) -> Result<Formula, Bb84Error> {
    positions(n, sift)?;
    let c = threshold_coefficient(a)?;
    Ok(Formula::implies(
        Formula::lt(Term::Null, Term::Integral(bases_agree(sift))),
        Formula::leq(Term::scale(c, Term::Ident), Term::Integral(key_mismatch(sift))),
    ))
}

impl Bb84Instance {
    pub fn num_qubits(&self) -> usize {
        4 * self.n
    }

    /// Exact probability of `alpha`.
    pub fn probability(&self, alpha: &Classical) -> Prob {
        let vals = valuations_of(alpha, &self.register).expect("atoms are register qubits");
        vals.iter().map(|i| self.distribution[i]).fold(Prob::zero(), |a, b| a + b)
    }

    /// The mixture conditioned on Alice's and Bob's bases agreeing on `sift`.
    pub fn sifted(&self, sift: &BTreeSet<usize>) -> Result<Bb84Instance, Bb84Error> {
        positions(self.n, sift)?;
        let keep = valuations_of(&bases_agree(sift), &self.register).expect("atoms are register qubits");
        let mass = self.probability(&bases_agree(sift));
        if mass.is_zero() {
            return Err(Bb84Error::NothingSifted);
        }
        let distribution = self
            .distribution
            .iter()
            .enumerate()
            .map(|(i, w)| if keep.contains(i) { w / mass } else { Prob::zero() })
            .collect();
        Ok(Bb84Instance { distribution, ..self.clone() })
    }

    pub fn density(&self, dense: bool) -> DensityOperator {
        let p: Vec<f64> = self.distribution.iter().map(|w| *w.numer() as f64 / *w.denom() as f64).collect();
        let d = DensityOperator::Diagonal(p);
        if dense {
            DensityOperator::Dense(d.to_dense())
        } else {
            d
        }
    }

    /// `S = {qB}`, `V = 2^qB`.
    pub fn structure(&self, dense: bool) -> Result<Structure, Bb84Error> {
        if dense && self.n > MAX_DENSE {
            return Err(Bb84Error::OutOfRange { n: self.n, max: MAX_DENSE });
        }
        let r = self.register.clone();
        let s = Partition::whole(&r);
        Structure::new(r, ValuationSet::all(self.num_qubits()), s, StateSpec::Global(self.density(dense)), BTreeMap::new())
            .map_err(|e| Bb84Error::Check(e.into()))
    }
}

pub const SWEEP: [f64; 4] = [1e-6, 0.05, 0.1, 0.25];

#[derive(Debug, Clone, PartialEq)]
pub struct Bb84Report {
    pub n: usize,
    pub eavesdrop: bool,
    pub sift: BTreeSet<usize>,
    /// Antecedent and consequent integrals on the sifted state.
    pub antecedent: f64,
    pub consequent: f64,
    pub antecedent_exact: Prob,
    pub consequent_exact: Prob,
    /// `P(qKA_i != qKB_i | qA_i = qB_i)` for one position.
    pub disturbance: Prob,
    /// `(a, phi holds)` for the requested threshold followed by the sweep.
    pub thresholds: Vec<(f64, bool)>,
}

/// Evaluate the formula on the sifted state for `threshold` and the sweep values.
pub fn bb84_check(
    n: usize,
    eavesdrop: bool,
    sift: &BTreeSet<usize>,
    threshold: f64,
    dense: bool,
    tol: f64,
) -> Result<Bb84Report, Bb84Error> {
    let inst = bb84_state(n, eavesdrop)?.sifted(sift)?;
    let m = inst.structure(dense)?;
    let mut thresholds = Vec::new();
    for a in core::iter::once(threshold).chain(SWEEP) {
        thresholds.push((a, model_check(&m, &bb84_formula(n, sift, a)?, tol)?.verdict));
    }
    let antecedent = eval_term(&m, &Term::Integral(bases_agree(sift)), tol)?;
    let consequent = eval_term(&m, &Term::Integral(key_mismatch(sift)), tol)?;
    let per = position_distribution(eavesdrop);
    let agree: Prob = (0..16).filter(|i| (i >> 3) & 1 == (i >> 1) & 1).map(|i| per[i]).sum();
    let err: Prob =
        (0..16).filter(|i| (i >> 3) & 1 == (i >> 1) & 1 && (i >> 2) & 1 != i & 1).map(|i| per[i]).sum();
    Ok(Bb84Report {
        n,
        eavesdrop,
        sift: sift.clone(),
        antecedent,
        consequent,
        antecedent_exact: inst.probability(&bases_agree(sift)),
        consequent_exact: inst.probability(&key_mismatch(sift)),
        disturbance: err / agree,
        thresholds,
    })
}

pub fn all_positions(n: usize) -> BTreeSet<usize> {
    (1..=n).collect()
}
