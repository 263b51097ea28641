//! Generalized quantum loops `while (M[q] in X) { q := K(q) }`.
//!
//! States are iterated unnormalized: `r_{n+1} = K(M_X r_n M_X)`, and the
//! per-step probabilities are read off as conditionals of `r_n`.

use alloc::vec::Vec;
use core::fmt;

use crate::density::DensityOperator;
use crate::eqmc::{EqmcError, ExogenousQmc, Mode, ReachabilityReport};
use crate::lang::{Classical, Formula, Term};
use crate::matrix::{is_psd, ComplexMatrix, MatrixError, Operator};
use crate::register::Register;
use crate::superop::{trace_pairing, SuperOpError, SuperOperator};
use crate::valuation::{bit, ValuationSet};

/// Masses at or below this count as exhausted. Conditional ratios of small
/// masses stay accurate, so this sits near the bottom of the f64 range.
pub const MASS_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LoopError {
    #[error("loop body is not trace preserving")]
    NotTracePreserving,
    #[error("guard is not a projector")]
    NotProjector,
    #[error("dimension {got} does not match the register dimension {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("input state is not positive semidefinite")]
    NotPsd,
    #[error("input trace {0} exceeds one")]
    TraceAboveOne(f64),
    #[error("the reduction needs a guard given by valuations")]
    ProjectorGuard,
    #[error(transparent)]
    SuperOp(#[from] SuperOpError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Eqmc(#[from] EqmcError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Guard {
    Valuations(ValuationSet),
    Projector(ComplexMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedQuantumLoop {
    register: Register,
    body: SuperOperator,
    guard: Guard,
    m_x: Operator,
    m_xbar: Operator,
}

impl GeneralizedQuantumLoop {
    pub fn new(register: Register, body: SuperOperator, guard: Guard) -> Result<Self, LoopError> {
        let dim = register.dim();
        if body.dim() != dim {
            return Err(LoopError::Dimension { got: body.dim(), expected: dim });
        }
        if !body.is_trace_preserving(1e-7) {
            return Err(LoopError::NotTracePreserving);
        }
        let m_x = match &guard {
            Guard::Valuations(x) => {
                if x.num_qubits() != register.len() {
                    return Err(LoopError::Dimension { got: 1 << x.num_qubits(), expected: dim });
                }
                Operator::real_diagonal(&(0..dim).map(|i| if x.contains(i) { 1.0 } else { 0.0 }).collect::<Vec<_>>())
            }
            Guard::Projector(p) => {
                if p.rows() != dim || p.cols() != dim {
                    return Err(LoopError::Dimension { got: p.rows(), expected: dim });
                }
                let sq = p.mul(p)?;
                if !p.is_hermitian(1e-9) || sq.max_abs_diff(p) > 1e-9 {
                    return Err(LoopError::NotProjector);
                }
                Operator::Dense(p.clone()).compact()
            }
        };
        let m_xbar = Operator::identity(dim).sub(&m_x)?;
        Ok(Self { register, body, guard, m_x, m_xbar })
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn body(&self) -> &SuperOperator {
        &self.body
    }

    pub fn guard(&self) -> &Guard {
        &self.guard
    }

    pub fn m_x(&self) -> &Operator {
        &self.m_x
    }

    pub fn m_xbar(&self) -> &Operator {
        &self.m_xbar
    }

    fn check_input(&self, rho: &DensityOperator) -> Result<(), LoopError> {
        if rho.dim() != self.register.dim() {
            return Err(LoopError::Dimension { got: rho.dim(), expected: self.register.dim() });
        }
        if rho.trace() > 1.0 + 1e-9 {
            return Err(LoopError::TraceAboveOne(rho.trace()));
        }
        if !is_psd(&rho.to_dense(), 1e-9)? {
            return Err(LoopError::NotPsd);
        }
        Ok(())
    }

    /// Terminating mass `tr(M_Xbar r M_Xbar)` and the continuing state `K(M_X r M_X)`.
    pub fn loop_step(&self, rho: &DensityOperator) -> Result<(f64, DensityOperator), LoopError> {
        self.check_input(rho)?;
        self.step_unchecked(rho)
    }

    fn step_unchecked(&self, rho: &DensityOperator) -> Result<(f64, DensityOperator), LoopError> {
        let r = rho.to_operator();
        let term = trace_pairing(&self.m_xbar, rho);
        let kept = self.m_x.conjugate(&r)?;
        let next = self.body.apply(&kept)?;
        Ok((term, DensityOperator::from_operator_unchecked(next)))
    }

    /// Run `steps` iterations, recording every step.
    pub fn run(&self, rho0: &DensityOperator, steps: usize) -> Result<LoopRun, LoopError> {
        self.check_input(rho0)?;
        let mut out = Vec::with_capacity(steps + 1);
        let mut rho = rho0.clone();
        let mut terminated = 0.0;
        for n in 0..=steps {
            let mass = rho.trace();
            let stay = trace_pairing(&self.m_x, &rho);
            let (p_term, p_nonterm) = if mass > MASS_FLOOR { (1.0 - stay / mass, stay / mass) } else { (0.0, 0.0) };
            let (term_mass, next) = self.step_unchecked(&rho)?;
            out.push(LoopStep { n, p_term, p_nonterm, mass, terminated_before: terminated });
            terminated += term_mass;
            rho = next;
        }
        Ok(LoopRun { steps: out, final_state: rho })
    }

    /// Conditional nontermination probability at step `n`; zero once the
    /// continuing mass is exhausted.
    pub fn nonterm_prob(&self, rho0: &DensityOperator, n: usize) -> Result<f64, LoopError> {
        Ok(self.run(rho0, n)?.steps[n].p_nonterm)
    }

    pub fn terminates_within(
        &self,
        rho0: &DensityOperator,
        max_steps: usize,
        tol: f64,
    ) -> Result<Termination, LoopError> {
        let run = self.run(rho0, max_steps)?;
        for s in &run.steps {
            if s.p_nonterm <= tol {
                return Ok(Termination::Terminated(s.n));
            }
        }
        let last = run.steps.last().unwrap();
        Ok(Termination::NotBy { steps: max_steps, residual: last.p_nonterm, mass: last.mass })
    }

    /// Chain whose `F` query on `int(a_X) = O` mirrors termination:
    /// `E(r) = K(M_X r M_X) + M_Xbar r M_Xbar`.
    pub fn to_eqmc(&self, init: Vec<DensityOperator>) -> Result<(ExogenousQmc, Formula), LoopError> {
        let Guard::Valuations(x) = &self.guard else { return Err(LoopError::ProjectorGuard) };
        let mut kraus: Vec<Operator> =
            self.body.kraus().iter().map(|e| e.mul(&self.m_x)).collect::<Result<_, _>>()?;
        kraus.push(self.m_xbar.clone());
        let eps = SuperOperator::new(self.register.dim(), kraus)?;
        let gamma = Formula::eq(Term::Integral(valuation_formula(x, &self.register)), Term::Null);
        let chain = ExogenousQmc::simple(self.register.clone(), eps, init, alloc::vec![gamma.clone()])?;
        Ok((chain, gamma))
    }

    /// Termination checked through the chain reduction.
    pub fn terminates_via_eqmc(
        &self,
        rho0: &DensityOperator,
        horizon: usize,
        tol: f64,
    ) -> Result<ReachabilityReport, LoopError> {
        let (chain, gamma) = self.to_eqmc(alloc::vec![rho0.clone()])?;
        Ok(chain.check_reachability(rho0, Mode::F, &gamma, horizon, tol)?)
    }
}

/// A classical formula true exactly on the valuations in `x`.
pub fn valuation_formula(x: &ValuationSet, register: &Register) -> Classical {
    let n = register.len();
    Classical::disj(x.iter().map(|i| {
        Classical::conj(register.names().iter().enumerate().map(|(pos, q)| {
            if bit(i, pos, n) {
                Classical::atom(q.clone())
            } else {
                Classical::not(Classical::atom(q.clone()))
            }
        }))
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopStep {
    pub n: usize,
    /// Conditional probabilities given the continuing mass.
    pub p_term: f64,
    pub p_nonterm: f64,
    /// `tr(r_n)`, the cumulative nontermination mass.
    pub mass: f64,
    /// Mass that left the loop before step `n`.
    pub terminated_before: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopRun {
    pub steps: Vec<LoopStep>,
    pub final_state: DensityOperator,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    Terminated(usize),
    /// Not terminated within `steps`; `residual` is the last conditional
    /// nontermination probability and `mass` the continuing trace.
    NotBy { steps: usize, residual: f64, mass: f64 },
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Termination::Terminated(n) => write!(f, "TERMINATED({n})"),
            Termination::NotBy { steps, .. } => write!(f, "NOT_BY({steps})"),
        }
    }
}

/// Pauli X, Hadamard and identity loop bodies on one qubit.
pub fn named_body(name: &str) -> Option<SuperOperator> {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let m = match name {
        "X" => ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).ok()?,
        "H" => ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]).ok()?,
        "I" => ComplexMatrix::identity(2),
        _ => return None,
    };
    Some(SuperOperator::conjugation(Operator::Dense(m)))
}

/// One-qubit loop with guard `{1}` and a named body.
pub fn one_qubit_loop(body: &str) -> Option<GeneralizedQuantumLoop> {
    let r = Register::new(["qb1"]).ok()?;
    let guard = Guard::Valuations(ValuationSet::from_indices(1, [1]));
    GeneralizedQuantumLoop::new(r, named_body(body)?, guard).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqmc::Verdict;

    fn one() -> DensityOperator {
        DensityOperator::basis_state(2, 1)
    }

    #[test]
    fn x_flip_terminates_after_one_step() {
        let l = one_qubit_loop("X").unwrap();
        let (p, next) = l.loop_step(&one()).unwrap();
        assert_eq!(p, 0.0);
        assert!(next.max_abs_diff(&DensityOperator::basis_state(2, 0)) < 1e-15);
        let (p, next) = l.loop_step(&next).unwrap();
        assert_eq!(p, 1.0);
        assert_eq!(next.trace(), 0.0);
        assert_eq!(l.terminates_within(&one(), 64, 1e-9).unwrap(), Termination::Terminated(1));
        assert_eq!(l.nonterm_prob(&one(), 0).unwrap(), 1.0);
        assert_eq!(l.nonterm_prob(&one(), 1).unwrap(), 0.0);
        assert_eq!(l.terminates_via_eqmc(&one(), 40, 1e-9).unwrap().verdict, Verdict::Holds(1));
    }

    #[test]
    fn identity_body_never_terminates() {
        let l = one_qubit_loop("I").unwrap();
        match l.terminates_within(&one(), 64, 1e-9).unwrap() {
            Termination::NotBy { steps, residual, mass } => {
                assert_eq!(steps, 64);
                assert_eq!(residual, 1.0);
                assert_eq!(mass, 1.0);
            }
            t => panic!("{t}"),
        }
        assert_eq!(l.terminates_via_eqmc(&one(), 40, 1e-9).unwrap().verdict, Verdict::Fails(1));
    }

    #[test]
    fn hadamard_body_conditional_half() {
        let l = one_qubit_loop("H").unwrap();
        let run = l.run(&one(), 20).unwrap();
        assert_eq!(run.steps[0].p_nonterm, 1.0);
        for s in &run.steps[1..] {
            assert!((s.p_nonterm - 0.5).abs() < 1e-12, "{s:?}");
            assert!((s.mass - 0.5f64.powi(s.n as i32 - 1)).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_guard_terminates_immediately() {
        let r = Register::new(["qb1"]).unwrap();
        let l = GeneralizedQuantumLoop::new(r, named_body("X").unwrap(), Guard::Valuations(ValuationSet::empty(1)))
            .unwrap();
        let (p, next) = l.loop_step(&one()).unwrap();
        assert_eq!(p, 1.0);
        assert_eq!(next.trace(), 0.0);
    }

    #[test]
    fn projector_guards() {
        let r = Register::new(["qb1"]).unwrap();
        let bad = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(
            GeneralizedQuantumLoop::new(r.clone(), named_body("X").unwrap(), Guard::Projector(bad)).unwrap_err(),
            LoopError::NotProjector
        );
        let p1 = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]).unwrap();
        let l = GeneralizedQuantumLoop::new(r, named_body("X").unwrap(), Guard::Projector(p1)).unwrap();
        assert_eq!(l.terminates_within(&one(), 8, 1e-9).unwrap(), Termination::Terminated(1));
        assert_eq!(l.to_eqmc(Vec::new()).unwrap_err(), LoopError::ProjectorGuard);
    }

    #[test]
    fn guard_formula_denotes_the_guard() {
        let r = Register::new(["qb1", "qb2"]).unwrap();
        let x = ValuationSet::from_indices(2, [1, 2]);
        let a = valuation_formula(&x, &r);
        assert_eq!(crate::lang::valuations_of(&a, &r).unwrap(), x);
        assert_eq!(valuation_formula(&ValuationSet::empty(2), &r), Classical::False);
    }
}
