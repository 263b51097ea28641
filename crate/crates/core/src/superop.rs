//! Kraus-form super-operators, the projector families used by the logic, and the
//! trace orders between maps.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::{One, Zero};

use crate::density::DensityOperator;
use crate::eigen::hermitian_eigen;
use crate::matrix::{c, log2_exact, ComplexMatrix, MatrixError, Operator};
use crate::register::{QubitSet, Register, RegisterError};
use crate::valuation::{bit, ValuationSet};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SuperOpError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Register(#[from] RegisterError),
    #[error("super-operator dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("scale factor {0} outside [0,1]")]
    ScaleOutOfRange(f64),
    #[error("qubit set {{{0}}} is not contained in {{{1}}}")]
    NotSubset(String, String),
    #[error("admissible valuation set is empty")]
    EmptyAdmissible,
    #[error("valuation set is not contained in the admissible set")]
    NotAdmissible,
    #[error("valuation set over {0} qubits used on a {1}-qubit space")]
    ValuationWidth(usize, usize),
}

pub(crate) fn join_names(s: &QubitSet) -> String {
    let v: Vec<&str> = s.iter().map(String::as_str).collect();
    v.join(",")
}

/// `rho -> sum_i E_i rho E_i^dagger`
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator {
    dim: usize,
    kraus: Vec<Operator>,
}

impl SuperOperator {
    pub fn new(dim: usize, kraus: Vec<Operator>) -> Result<Self, SuperOpError> {
        log2_exact(dim)?;
        for k in &kraus {
            if k.dim() != dim {
                return Err(SuperOpError::DimensionMismatch(dim, k.dim()));
            }
            if let Operator::Dense(m) = k {
                if !m.is_square() {
                    return Err(MatrixError::NotSquare { rows: m.rows(), cols: m.cols() }.into());
                }
                if !m.is_finite() {
                    return Err(MatrixError::NonFinite.into());
                }
            }
        }
        Ok(Self { dim, kraus })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, kraus: vec![Operator::identity(dim)] }
    }

    pub fn null(dim: usize) -> Self {
        Self { dim, kraus: Vec::new() }
    }

    /// `rho -> E rho E^dagger`
    pub fn conjugation(op: Operator) -> Self {
        Self { dim: op.dim(), kraus: vec![op] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn kraus(&self) -> &[Operator] {
        &self.kraus
    }

    fn check(&self, dim: usize) -> Result<(), SuperOpError> {
        if self.dim != dim {
            return Err(SuperOpError::DimensionMismatch(self.dim, dim));
        }
        Ok(())
    }

    pub fn apply(&self, rho: &Operator) -> Result<Operator, SuperOpError> {
        self.check(rho.dim())?;
        let mut acc = Operator::zero(self.dim);
        for e in &self.kraus {
            acc = acc.add(&e.conjugate(rho)?)?;
        }
        Ok(acc)
    }

    pub fn apply_density(&self, rho: &DensityOperator) -> Result<Operator, SuperOpError> {
        self.apply(&rho.to_operator())
    }

    /// `Q = sum_i E_i^dagger E_i`, so that `tr(e(rho)) = tr(Q rho)`.
    pub fn trace_observable(&self) -> Operator {
        let mut q = Operator::zero(self.dim);
        for e in &self.kraus {
            let t = e.adjoint().mul(e).expect("kraus dimensions checked at construction");
            q = q.add(&t).expect("same dimension");
        }
        q
    }

    /// `tr(e(rho))`, computed as `tr(Q rho)`.
    pub fn applied_trace(&self, rho: &DensityOperator) -> Result<f64, SuperOpError> {
        self.check(rho.dim())?;
        Ok(trace_pairing(&self.trace_observable(), rho))
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        self.trace_observable().max_abs_diff(&Operator::identity(self.dim)) <= tol
    }

    pub fn add(&self, other: &Self) -> Result<Self, SuperOpError> {
        self.check(other.dim)?;
        let mut kraus = self.kraus.clone();
        kraus.extend(other.kraus.iter().cloned());
        Ok(Self { dim: self.dim, kraus })
    }

    /// `(self . other)(rho) = self(other(rho))`
    pub fn compose(&self, other: &Self) -> Result<Self, SuperOpError> {
        self.check(other.dim)?;
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for e in &self.kraus {
            for f in &other.kraus {
                kraus.push(e.mul(f)?.compact());
            }
        }
        Ok(Self { dim: self.dim, kraus })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for e in &self.kraus {
            for f in &other.kraus {
                kraus.push(e.kron(f));
            }
        }
        Self { dim: self.dim * other.dim, kraus }
    }

    /// Multiply every Kraus element by `sqrt(r)`, scaling traces by `r`.
    pub fn scale(&self, r: f64) -> Result<Self, SuperOpError> {
        if !(0.0..=1.0).contains(&r) || r.is_nan() {
            return Err(SuperOpError::ScaleOutOfRange(r));
        }
        let s = libm::sqrt(r);
        Ok(Self { dim: self.dim, kraus: self.kraus.iter().map(|k| k.scale_real(s)).collect() })
    }

    pub fn permute_qubits(&self, new_order: &[usize]) -> Result<Self, SuperOpError> {
        let kraus = self.kraus.iter().map(|k| k.permute_qubits(new_order)).collect::<Result<_, _>>()?;
        Ok(Self { dim: self.dim, kraus })
    }

    pub fn leq_at(&self, other: &Self, rho: &DensityOperator, tol: f64) -> Result<bool, SuperOpError> {
        Ok(self.applied_trace(rho)? <= other.applied_trace(rho)? + tol)
    }

    /// `self <~ other` for every state: `Q_other - Q_self` is positive semidefinite.
    pub fn leq_global(&self, other: &Self, tol: f64) -> Result<bool, SuperOpError> {
        Ok(self.leq_global_witness(other, tol)?.is_none())
    }

    /// A pure state on which `self <~ other` fails, or `None` if it holds everywhere.
    pub fn leq_global_witness(&self, other: &Self, tol: f64) -> Result<Option<DensityOperator>, SuperOpError> {
        self.check(other.dim)?;
        let diff = other.trace_observable().sub(&self.trace_observable())?;
        match diff {
            Operator::Diagonal(d) => {
                let (k, min) = d
                    .iter()
                    .enumerate()
                    .map(|(i, z)| (i, z.re))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .unwrap_or((0, 0.0));
                if min < -tol {
                    Ok(Some(DensityOperator::basis_state(self.dim, k)))
                } else {
                    Ok(None)
                }
            }
            Operator::Dense(m) => {
                let e = hermitian_eigen(&m)?;
                if e.values[0] < -tol {
                    let v = e.vector(0);
                    Ok(Some(DensityOperator::Dense(ComplexMatrix::outer(&v, &v))))
                } else {
                    Ok(None)
                }
            }
        }
    }

    /// Equal trace observables entrywise within `tol`.
    pub fn eqsim(&self, other: &Self, tol: f64) -> Result<bool, SuperOpError> {
        self.check(other.dim)?;
        Ok(self.trace_observable().max_abs_diff(&other.trace_observable()) <= tol)
    }

    pub fn eqsim_at(&self, other: &Self, rho: &DensityOperator, tol: f64) -> Result<bool, SuperOpError> {
        Ok((self.applied_trace(rho)? - other.applied_trace(rho)?).abs() <= tol)
    }
}

/// `Re tr(q rho)`
pub fn trace_pairing(q: &Operator, rho: &DensityOperator) -> f64 {
    match (q, rho) {
        (Operator::Diagonal(d), DensityOperator::Diagonal(p)) => d.iter().zip(p).map(|(x, y)| x.re * y).sum(),
        (Operator::Diagonal(d), DensityOperator::Dense(m)) => {
            d.iter().enumerate().map(|(i, x)| (x * m.get(i, i)).re).sum()
        }
        (Operator::Dense(m), DensityOperator::Diagonal(p)) => p.iter().enumerate().map(|(i, y)| m.get(i, i).re * y).sum(),
        (Operator::Dense(a), DensityOperator::Dense(b)) => {
            let n = a.rows();
            let mut s = C64::zero();
            for i in 0..n {
                for j in 0..n {
                    s += a.get(i, j) * b.get(j, i);
                }
            }
            s.re
        }
    }
}

/// Conjugation by `sum_{v in vals} |v><v|`.
pub fn projector_valuations(vals: &ValuationSet) -> SuperOperator {
    let dim = 1usize << vals.num_qubits();
    let d = (0..dim).map(|i| if vals.contains(i) { C64::one() } else { C64::zero() }).collect();
    SuperOperator::conjugation(Operator::Diagonal(d))
}

/// Diagonal of `P_{(/\A)_G} (x) I`: qubits of `A` fixed to 1, of `G \ A` to 0.
pub fn t_projector_diagonal(a: &QubitSet, g: &QubitSet, register: &Register) -> Result<Vec<C64>, SuperOpError> {
    if !a.is_subset(g) {
        return Err(SuperOpError::NotSubset(join_names(a), join_names(g)));
    }
    let n = register.len();
    let fixed: Vec<(usize, bool)> = register
        .positions(g)?
        .into_iter()
        .map(|p| (p, a.contains(&register.names()[p])))
        .collect();
    Ok((0..register.dim())
        .map(|i| if fixed.iter().all(|&(p, one)| bit(i, p, n) == one) { c(1.0) } else { C64::zero() })
        .collect())
}

/// `T^G_A` on the whole register.
pub fn t_operator(a: &QubitSet, g: &QubitSet, register: &Register) -> Result<SuperOperator, SuperOpError> {
    Ok(SuperOperator::conjugation(Operator::Diagonal(t_projector_diagonal(a, g, register)?)))
}

/// Projective measure over an admissible valuation set.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasure {
    admissible: ValuationSet,
}

impl ProjectiveMeasure {
    pub fn new(admissible: ValuationSet) -> Result<Self, SuperOpError> {
        if admissible.is_empty() {
            return Err(SuperOpError::EmptyAdmissible);
        }
        Ok(Self { admissible })
    }

    pub fn admissible(&self) -> &ValuationSet {
        &self.admissible
    }

    pub fn measure_of(&self, u: &ValuationSet) -> Result<SuperOperator, SuperOpError> {
        if u.num_qubits() != self.admissible.num_qubits() {
            return Err(SuperOpError::ValuationWidth(u.num_qubits(), self.admissible.num_qubits()));
        }
        if !u.is_subset(&self.admissible) {
            return Err(SuperOpError::NotAdmissible);
        }
        Ok(projector_valuations(u))
    }
}
