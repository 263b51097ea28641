//! Density operators and subspaces.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Zero;

use crate::eigen::hermitian_eigen;
use crate::matrix::{self, c, log2_exact, ComplexMatrix, MatrixError, Operator};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DensityError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("density operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("density operator is not positive (eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("density operator has trace {0}, expected 1")]
    BadTrace(f64),
    #[error("state vector has norm {0}, expected 1")]
    BadNorm(f64),
}

/// A positive, trace-one operator; the diagonal form carries real weights only.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityOperator {
    Dense(ComplexMatrix),
    Diagonal(Vec<f64>),
}

impl DensityOperator {
    pub fn from_dense(m: ComplexMatrix, tol: f64) -> Result<Self, DensityError> {
        log2_exact(m.rows())?;
        if !m.is_square() {
            return Err(MatrixError::NotSquare { rows: m.rows(), cols: m.cols() }.into());
        }
        if !m.is_finite() {
            return Err(MatrixError::NonFinite.into());
        }
        let dev = m.hermitian_deviation();
        if dev > tol {
            return Err(DensityError::NotHermitian(dev));
        }
        let tr = m.trace()?.re;
        if (tr - 1.0).abs() > tol {
            return Err(DensityError::BadTrace(tr));
        }
        let min = if m.is_diagonal(0.0) {
            m.diagonal().iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
        } else {
            hermitian_eigen(&m)?.values[0]
        };
        if min < -tol {
            return Err(DensityError::NotPositive(min));
        }
        Ok(DensityOperator::Dense(m))
    }

    pub fn from_diagonal(p: Vec<f64>, tol: f64) -> Result<Self, DensityError> {
        log2_exact(p.len())?;
        if p.iter().any(|x| !x.is_finite()) {
            return Err(MatrixError::NonFinite.into());
        }
        if let Some(&m) = p.iter().find(|&&x| x < -tol) {
            return Err(DensityError::NotPositive(m));
        }
        let tr: f64 = p.iter().sum();
        if (tr - 1.0).abs() > tol {
            return Err(DensityError::BadTrace(tr));
        }
        Ok(DensityOperator::Diagonal(p))
    }

    /// Accepts any square operator and keeps it as is; for intermediate states whose
    /// drift is checked by the caller.
    pub fn from_operator_unchecked(op: Operator) -> Self {
        match op {
            Operator::Diagonal(d) => DensityOperator::Diagonal(d.iter().map(|z| z.re).collect()),
            Operator::Dense(m) => DensityOperator::Dense(m),
        }
    }

    pub fn from_operator(op: Operator, tol: f64) -> Result<Self, DensityError> {
        match op {
            Operator::Diagonal(d) => {
                let dev = d.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
                if dev > tol {
                    return Err(DensityError::NotHermitian(dev));
                }
                Self::from_diagonal(d.iter().map(|z| z.re).collect(), tol)
            }
            Operator::Dense(m) => Self::from_dense(m, tol),
        }
    }

    /// `|psi><psi|` for a unit vector.
    pub fn pure(psi: &[C64], tol: f64) -> Result<Self, DensityError> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > tol {
            return Err(DensityError::BadNorm(libm::sqrt(norm)));
        }
        Self::from_dense(ComplexMatrix::outer(psi, psi), tol)
    }

    pub fn basis_state(dim: usize, index: usize) -> Self {
        let mut p = vec![0.0; dim];
        p[index] = 1.0;
        DensityOperator::Diagonal(p)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityOperator::Diagonal(vec![1.0 / dim as f64; dim])
    }

    pub fn dim(&self) -> usize {
        match self {
            DensityOperator::Dense(m) => m.rows(),
            DensityOperator::Diagonal(p) => p.len(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self, DensityOperator::Diagonal(_))
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        match self {
            DensityOperator::Dense(m) => m.clone(),
            DensityOperator::Diagonal(p) => {
                ComplexMatrix::from_diagonal(&p.iter().map(|&x| c(x)).collect::<Vec<_>>())
            }
        }
    }

    pub fn to_operator(&self) -> Operator {
        match self {
            DensityOperator::Dense(m) => Operator::Dense(m.clone()),
            DensityOperator::Diagonal(p) => Operator::real_diagonal(p),
        }
    }

    /// `<i|rho|i>`
    pub fn population(&self, i: usize) -> f64 {
        match self {
            DensityOperator::Dense(m) => m.get(i, i).re,
            DensityOperator::Diagonal(p) => p[i],
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.population(i)).sum()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>, MatrixError> {
        self.to_operator().hermitian_eigenvalues()
    }

    pub fn support(&self, tol: f64) -> Result<Subspace, MatrixError> {
        let dim = self.dim();
        match self {
            DensityOperator::Diagonal(p) => {
                Ok(Subspace::span_of_basis_states(dim, p.iter().enumerate().filter(|(_, &x)| x > tol).map(|(i, _)| i)))
            }
            DensityOperator::Dense(m) => {
                let e = hermitian_eigen(m)?;
                let basis = (0..dim).filter(|&k| e.values[k] > tol).map(|k| e.vector(k)).collect();
                Ok(Subspace { dim, basis })
            }
        }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        match (self, other) {
            (DensityOperator::Diagonal(a), DensityOperator::Diagonal(b)) => {
                let mut out = Vec::with_capacity(a.len() * b.len());
                for x in a {
                    for y in b {
                        out.push(x * y);
                    }
                }
                DensityOperator::Diagonal(out)
            }
            _ => DensityOperator::Dense(self.to_dense().kron(&other.to_dense())),
        }
    }

    pub fn permute_qubits(&self, new_order: &[usize]) -> Result<Self, MatrixError> {
        Ok(match self {
            DensityOperator::Dense(m) => DensityOperator::Dense(m.permute_qubits(new_order)?),
            DensityOperator::Diagonal(p) => {
                let map = matrix::permutation_index_map(self.num_qubits(), new_order)?;
                DensityOperator::Diagonal(map.iter().map(|&s| p[s]).collect())
            }
        })
    }

    /// Marginal on the qubit positions `keep`, in that order.
    pub fn reduced(&self, keep: &[usize]) -> Result<Self, MatrixError> {
        Ok(match self {
            DensityOperator::Dense(m) => DensityOperator::Dense(m.partial_trace_keep(keep)?),
            DensityOperator::Diagonal(p) => {
                let n = self.num_qubits();
                let order = matrix::keep_first_order(n, keep)?;
                let map = matrix::permutation_index_map(n, &order)?;
                let dr = 1usize << (n - keep.len());
                let mut out = vec![0.0; 1usize << keep.len()];
                for (i, &src) in map.iter().enumerate() {
                    out[i / dr] += p[src];
                }
                DensityOperator::Diagonal(out)
            }
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        match (self, other) {
            (DensityOperator::Diagonal(a), DensityOperator::Diagonal(b)) if a.len() == b.len() => {
                a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
            }
            _ => self.to_dense().max_abs_diff(&other.to_dense()),
        }
    }
}

/// Span of an orthonormal list of vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    dim: usize,
    basis: Vec<Vec<C64>>,
}

fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm(v: &[C64]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

impl Subspace {
    pub fn zero(dim: usize) -> Self {
        Self { dim, basis: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        Self::span_of_basis_states(dim, 0..dim)
    }

    pub fn span_of_basis_states<I: IntoIterator<Item = usize>>(dim: usize, indices: I) -> Self {
        let basis = indices
            .into_iter()
            .map(|i| {
                let mut v = vec![C64::zero(); dim];
                v[i] = c(1.0);
                v
            })
            .collect();
        Self { dim, basis }
    }

    /// Orthonormalize `vectors` by modified Gram-Schmidt, dropping those within `tol`
    /// of the span so far.
    pub fn spanned_by(dim: usize, vectors: &[Vec<C64>], tol: f64) -> Self {
        let mut s = Self::zero(dim);
        for v in vectors {
            s.push_if_independent(v, tol);
        }
        s
    }

    fn push_if_independent(&mut self, v: &[C64], tol: f64) {
        let mut w: Vec<C64> = v.to_vec();
        for _ in 0..2 {
            for b in &self.basis {
                let k = inner(b, &w);
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= k * y;
                }
            }
        }
        let nw = norm(&w);
        if nw > tol {
            for x in &mut w {
                *x /= nw;
            }
            self.basis.push(w);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<C64>] {
        &self.basis
    }

    pub fn projector(&self) -> ComplexMatrix {
        let mut p = ComplexMatrix::zeros(self.dim, self.dim);
        for b in &self.basis {
            p = p.add(&ComplexMatrix::outer(b, b)).expect("same dimension");
        }
        p
    }

    /// Distance of `v` from the subspace, relative to `|v|`.
    pub fn residual(&self, v: &[C64]) -> f64 {
        let mut w: Vec<C64> = v.to_vec();
        for b in &self.basis {
            let k = inner(b, &w);
            for (x, y) in w.iter_mut().zip(b) {
                *x -= k * y;
            }
        }
        let nv = norm(v);
        if nv == 0.0 {
            0.0
        } else {
            norm(&w) / nv
        }
    }

    pub fn contains_vector(&self, v: &[C64], tol: f64) -> bool {
        self.residual(v) <= tol
    }

    pub fn contains(&self, other: &Subspace, tol: f64) -> bool {
        other.basis.iter().all(|v| self.contains_vector(v, tol))
    }

    pub fn join(&self, other: &Subspace, tol: f64) -> Subspace {
        let mut s = self.clone();
        for v in &other.basis {
            s.push_if_independent(v, tol);
        }
        s
    }

    pub fn equals(&self, other: &Subspace, tol: f64) -> bool {
        self.rank() == other.rank() && self.contains(other, tol)
    }
}

/// Support of `rho`: eigenvectors with eigenvalue above `tol`.
pub fn support(rho: &DensityOperator, tol: f64) -> Result<Subspace, MatrixError> {
    rho.support(tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rejects_bad_states() {
        assert!(matches!(
            DensityOperator::from_diagonal(vec![0.5, 0.4], 1e-9),
            Err(DensityError::BadTrace(_))
        ));
        assert!(matches!(
            DensityOperator::from_diagonal(vec![1.5, -0.5], 1e-9),
            Err(DensityError::NotPositive(_))
        ));
        let m = ComplexMatrix::from_real_rows(&[&[0.5, 0.6], &[0.6, 0.5]]).unwrap();
        assert!(matches!(DensityOperator::from_dense(m, 1e-9), Err(DensityError::NotPositive(_))));
        assert!(DensityOperator::from_diagonal(vec![0.2, 0.3, 0.5], 1e-9).is_err());
    }

    #[test]
    fn support_of_example_state() {
        let rho = DensityOperator::from_diagonal(vec![0.4, 0.0, 0.0, 0.6], 1e-9).unwrap();
        let s = rho.support(1e-9).unwrap();
        assert_eq!(s.rank(), 2);
        assert!(s.contains_vector(&[c(1.0), c(0.0), c(0.0), c(0.0)], 1e-12));
        assert!(!s.contains_vector(&[c(0.0), c(1.0), c(0.0), c(0.0)], 1e-6));
        let dense = DensityOperator::from_dense(rho.to_dense(), 1e-9).unwrap();
        assert!(dense.support(1e-9).unwrap().equals(&s, 1e-9));
    }

    #[test]
    fn maximally_mixed_support_is_full() {
        assert_eq!(DensityOperator::maximally_mixed(4).support(1e-9).unwrap().rank(), 4);
        assert_eq!(DensityOperator::basis_state(2, 0).support(1e-9).unwrap().rank(), 1);
    }

    #[test]
    fn diagonal_reduction_matches_dense() {
        let rho = DensityOperator::Diagonal(vec![0.1, 0.2, 0.05, 0.15, 0.0, 0.3, 0.1, 0.1]);
        for keep in [vec![0], vec![2, 0], vec![1, 2]] {
            let a = rho.reduced(&keep).unwrap();
            let b = DensityOperator::Dense(rho.to_dense()).reduced(&keep).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-15);
        }
    }
}
