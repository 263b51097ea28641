//! Exogenous quantum Markov chains: canonical trajectories under a fixed
//! channel, atom labels, support adjacency and reachability queries.
//!
//! Queries follow the canonical trajectory `rho_{i+1} = E(rho_i)`. The adjacency
//! relation is exposed as a predicate for validation only.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::checker::{satisfies, CheckError, Partition, Structure};
use crate::density::{DensityOperator, Subspace};
use crate::lang::{desugar, is_core, Formula};
use crate::matrix::MatrixError;
use crate::register::Register;
use crate::superop::{SuperOpError, SuperOperator};
use crate::valuation::ValuationSet;

/// Allowed deviation of the channel from trace preservation.
pub const TP_TOL: f64 = 1e-7;
/// Allowed trace change of one step.
pub const DRIFT_TOL: f64 = 1e-6;
/// Two trajectory states closer than this (entrywise) are treated as equal.
pub const RECURRENCE_TOL: f64 = 1e-10;
/// Eigenvalue threshold for supports.
pub const SUPPORT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EqmcError {
    #[error("channel is not trace preserving")]
    NotTracePreserving,
    #[error("dimension {got} does not match the register dimension {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("proposition `{0}` has free variables")]
    NotClosed(String),
    #[error("proposition `{0}` is not an atom")]
    NotAtom(String),
    #[error("trace drifted by {drift:e} at step {step}")]
    TraceDrift { step: usize, drift: f64 },
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    SuperOp(#[from] SuperOpError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExogenousQmc {
    register: Register,
    epsilon: SuperOperator,
    init: Vec<DensityOperator>,
    ap: Vec<Formula>,
    admissible: ValuationSet,
    partition: Partition,
}

fn is_atomic(f: &Formula) -> bool {
    matches!(f, Formula::Leq(..) | Formula::SubSys(_) | Formula::Eq(..) | Formula::Lt(..))
}

impl ExogenousQmc {
    pub fn new(
        register: Register,
        epsilon: SuperOperator,
        init: Vec<DensityOperator>,
        ap: Vec<Formula>,
        admissible: ValuationSet,
        partition: Partition,
    ) -> Result<Self, EqmcError> {
        let dim = register.dim();
        if epsilon.dim() != dim {
            return Err(EqmcError::Dimension { got: epsilon.dim(), expected: dim });
        }
        if !epsilon.is_trace_preserving(TP_TOL) {
            return Err(EqmcError::NotTracePreserving);
        }
        if let Some(r) = init.iter().find(|r| r.dim() != dim) {
            return Err(EqmcError::Dimension { got: r.dim(), expected: dim });
        }
        if admissible.num_qubits() != register.len() {
            return Err(EqmcError::Dimension { got: 1 << admissible.num_qubits(), expected: dim });
        }
        for a in &ap {
            let text = crate::lang::print_formula(a);
            if !a.is_closed() {
                return Err(EqmcError::NotClosed(text));
            }
            if !is_atomic(a) {
                return Err(EqmcError::NotAtom(text));
            }
        }
        Ok(Self { register, epsilon, init, ap, admissible, partition })
    }

    /// Whole-register partition and `V = 2^qB`.
    pub fn simple(
        register: Register,
        epsilon: SuperOperator,
        init: Vec<DensityOperator>,
        ap: Vec<Formula>,
    ) -> Result<Self, EqmcError> {
        let n = register.len();
        let partition = Partition::whole(&register);
        Self::new(register, epsilon, init, ap, ValuationSet::all(n), partition)
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn epsilon(&self) -> &SuperOperator {
        &self.epsilon
    }

    pub fn init(&self) -> &[DensityOperator] {
        &self.init
    }

    pub fn ap(&self) -> &[Formula] {
        &self.ap
    }

    pub fn admissible(&self) -> &ValuationSet {
        &self.admissible
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// `4^n + 8`.
    pub fn default_horizon(&self) -> usize {
        (1usize << (2 * self.register.len())) + 8
    }

    /// The structure used to evaluate formulas at `rho`.
    pub fn structure_at(&self, rho: &DensityOperator) -> Structure {
        Structure::unchecked(
            self.register.clone(),
            self.admissible.clone(),
            self.partition.clone(),
            rho.clone(),
            BTreeMap::new(),
        )
    }

    pub fn step(&self, rho: &DensityOperator) -> Result<DensityOperator, EqmcError> {
        self.step_at(rho, 0)
    }

    fn step_at(&self, rho: &DensityOperator, index: usize) -> Result<DensityOperator, EqmcError> {
        if rho.dim() != self.register.dim() {
            return Err(EqmcError::Dimension { got: rho.dim(), expected: self.register.dim() });
        }
        let next = DensityOperator::from_operator_unchecked(self.epsilon.apply_density(rho)?);
        let drift = (next.trace() - rho.trace()).abs();
        if drift > DRIFT_TOL {
            return Err(EqmcError::TraceDrift { step: index, drift });
        }
        Ok(next)
    }

    /// Indices of the propositions that hold at `rho`.
    pub fn label(&self, rho: &DensityOperator, tol: f64) -> Result<Vec<usize>, EqmcError> {
        let m = self.structure_at(rho);
        let mut out = Vec::new();
        for (i, a) in self.ap.iter().enumerate() {
            if satisfies(&m, a, tol)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// `rho_0 .. rho_k` with their labels.
    pub fn trajectory(&self, rho0: &DensityOperator, k: usize, tol: f64) -> Result<Trajectory, EqmcError> {
        let mut states = alloc::vec![rho0.clone()];
        for i in 0..k {
            let next = self.step_at(&states[i], i)?;
            states.push(next);
        }
        let labels = states.iter().map(|r| self.label(r, tol)).collect::<Result<_, _>>()?;
        Ok(Trajectory { states, labels })
    }

    pub fn check_reachability(
        &self,
        rho0: &DensityOperator,
        mode: Mode,
        gamma: &Formula,
        horizon: usize,
        tol: f64,
    ) -> Result<ReachabilityReport, EqmcError> {
        if horizon == 0 {
            return Err(EqmcError::ZeroHorizon);
        }
        if !gamma.is_closed() {
            return Err(EqmcError::NotClosed(crate::lang::print_formula(gamma)));
        }
        let gamma = desugar(gamma);
        debug_assert!(is_core(&gamma));
        let mut states: Vec<DensityOperator> = Vec::new();
        let mut values: Vec<bool> = Vec::new();
        let mut rho = rho0.clone();
        let mut cycle = None;
        for i in 0..=horizon {
            if let Some(j) = states.iter().position(|s| s.max_abs_diff(&rho) <= RECURRENCE_TOL) {
                cycle = Some(Cycle { start: j, period: i - j });
                break;
            }
            let v = satisfies(&self.structure_at(&rho), &gamma, tol)?;
            states.push(rho.clone());
            values.push(v);
            if mode.decided_early(v) {
                break;
            }
            if i < horizon {
                rho = self.step_at(&rho, i)?;
            }
        }
        let verdict = mode.decide(&values, cycle);
        let cycle_based = match verdict {
            Verdict::Unknown => false,
            _ => !mode.decided_early(*values.last().unwrap()),
        };
        Ok(ReachabilityReport { mode, verdict, cycle, cycle_based, values })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<DensityOperator>,
    pub labels: Vec<Vec<usize>>,
}

/// Query modes along a path: eventually, always, eventually always, infinitely often.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    F,
    G,
    U,
    I,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown mode `{0}` (expected F, G, U or I)")]
pub struct UnknownMode(pub String);

impl FromStr for Mode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "F" => Ok(Mode::F),
            "G" => Ok(Mode::G),
            "U" => Ok(Mode::U),
            "I" => Ok(Mode::I),
            _ => Err(UnknownMode(s.into())),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Mode::F => "F",
            Mode::G => "G",
            Mode::U => "U",
            Mode::I => "I",
        };
        f.write_str(c)
    }
}

impl Mode {
    fn decided_early(self, v: bool) -> bool {
        match self {
            Mode::F => v,
            Mode::G => !v,
            Mode::U | Mode::I => false,
        }
    }

    fn decide(self, values: &[bool], cycle: Option<Cycle>) -> Verdict {
        let last = values.len() - 1;
        match self {
            Mode::F if values[last] => Verdict::Holds(last),
            Mode::G if !values[last] => Verdict::Fails(last),
            _ => match cycle {
                None => Verdict::Unknown,
                Some(c) => {
                    let end = values.len();
                    let on_cycle = &values[c.start..end];
                    match self {
                        Mode::F => Verdict::Fails(end),
                        Mode::G => Verdict::Holds(end),
                        Mode::U => {
                            if on_cycle.iter().all(|v| *v) {
                                let mut k = c.start;
                                while k > 0 && values[k - 1] {
                                    k -= 1;
                                }
                                Verdict::Holds(k)
                            } else {
                                Verdict::Fails(c.start + on_cycle.iter().position(|v| !*v).unwrap())
                            }
                        }
                        Mode::I => match on_cycle.iter().position(|v| *v) {
                            Some(p) => Verdict::Holds(c.start + p),
                            None => Verdict::Fails(c.start),
                        },
                    }
                }
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds(usize),
    Fails(usize),
    Unknown,
}

impl Verdict {
    pub fn is_decided(self) -> bool {
        !matches!(self, Verdict::Unknown)
    }

    pub fn holds(self) -> Option<bool> {
        match self {
            Verdict::Holds(_) => Some(true),
            Verdict::Fails(_) => Some(false),
            Verdict::Unknown => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds(i) => write!(f, "HOLDS({i})"),
            Verdict::Fails(i) => write!(f, "FAILS({i})"),
            Verdict::Unknown => f.write_str("UNKNOWN"),
        }
    }
}

/// `rho_{start + period} = rho_start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cycle {
    pub start: usize,
    pub period: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReachabilityReport {
    pub mode: Mode,
    pub verdict: Verdict,
    pub cycle: Option<Cycle>,
    /// The verdict depends on the detected recurrence.
    pub cycle_based: bool,
    /// Truth of the query formula along the explored prefix.
    pub values: Vec<bool>,
}

/// Support of `E(P_W / dim W)`.
pub fn image_subspace(epsilon: &SuperOperator, w: &Subspace) -> Result<Subspace, EqmcError> {
    if epsilon.dim() != w.dim() {
        return Err(EqmcError::Dimension { got: w.dim(), expected: epsilon.dim() });
    }
    if w.rank() == 0 {
        return Ok(Subspace::zero(w.dim()));
    }
    let p = DensityOperator::from_operator_unchecked(crate::matrix::Operator::Dense(
        w.projector().scale_real(1.0 / w.rank() as f64),
    ));
    let img = DensityOperator::from_operator_unchecked(epsilon.apply_density(&p)?);
    Ok(img.support(SUPPORT_TOL / w.rank() as f64)?)
}

/// `supp(rho_next)` lies in the image of `supp(rho)`.
pub fn adjacent(
    rho: &DensityOperator,
    rho_next: &DensityOperator,
    epsilon: &SuperOperator,
    tol: f64,
) -> Result<bool, EqmcError> {
    let image = image_subspace(epsilon, &rho.support(SUPPORT_TOL)?)?;
    Ok(image.contains(&rho_next.support(SUPPORT_TOL)?, tol.max(1e-8)))
}

/// `R_0 = W`, `R_{k+1} = R_k v E(R_k)` up to the fixpoint; returns the chain and
/// the index at which it stabilized.
pub fn reachable_subspaces(epsilon: &SuperOperator, w: &Subspace) -> Result<(Vec<Subspace>, usize), EqmcError> {
    let mut chain = alloc::vec![w.clone()];
    loop {
        let last = chain.last().unwrap();
        let next = last.join(&image_subspace(epsilon, last)?, 1e-8);
        if next.rank() == last.rank() {
            return Ok((chain.clone(), chain.len() - 1));
        }
        chain.push(next);
    }
}
