//! Dense complex matrices over qubit spaces, plus a diagonal-or-dense operator
//! wrapper used for Kraus elements.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64 as C64;
use num_traits::Zero;

use crate::eigen;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("qubit permutation is not a bijection on {0} indices")]
    InvalidPermutation(usize),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("ragged row lengths")]
    Ragged,
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self.get(r, c);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn log2_exact(dim: usize) -> Result<usize, MatrixError> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(MatrixError::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::zero(); rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = c(1.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let cols = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(MatrixError::Ragged);
            }
            data.extend(row);
        }
        let m = Self { rows: r, cols, data };
        if !m.is_finite() {
            return Err(MatrixError::NonFinite);
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, MatrixError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| c(x)).collect()).collect())
    }

    /// Build from row-major data; panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// `|u><v|`
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, a) in u.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                m.data[i * v.len() + j] = a * b.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn num_qubits(&self) -> Result<usize, MatrixError> {
        self.require_square()?;
        log2_exact(self.rows)
    }

    fn require_square(&self) -> Result<(), MatrixError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch { left: self.cols, right: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>, MatrixError> {
        if self.cols != v.len() {
            return Err(MatrixError::DimensionMismatch { left: self.cols, right: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn same_shape(&self, other: &Self) -> Result<(), MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch {
                left: self.rows * self.cols,
                right: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(c(s))
    }

    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * cols + j * other.cols + l] = a * other.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Result<C64, MatrixError> {
        self.require_square()?;
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.same_shape(other).is_err() {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum::<f64>())
    }

    /// Max entrywise `|m - m^dagger|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(m + m^dagger) / 2`
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let data = self.data.iter().zip(&adj.data).map(|(a, b)| (a + b) * 0.5).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && self.get(i, j).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Reorder tensor factors: qubit `k` of the result is qubit `new_order[k]` of `self`.
    pub fn permute_qubits(&self, new_order: &[usize]) -> Result<Self, MatrixError> {
        let n = self.num_qubits()?;
        let map = permutation_index_map(n, new_order)?;
        let d = self.rows;
        let mut out = Self::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                out.data[i * d + j] = self.get(map[i], map[j]);
            }
        }
        Ok(out)
    }

    /// Reduced operator on the qubits in `keep` (in that order), tracing out the rest.
    pub fn partial_trace_keep(&self, keep: &[usize]) -> Result<Self, MatrixError> {
        let n = self.num_qubits()?;
        let order = keep_first_order(n, keep)?;
        let p = self.permute_qubits(&order)?;
        let dk = 1usize << keep.len();
        let dr = 1usize << (n - keep.len());
        let mut out = Self::zeros(dk, dk);
        for i in 0..dk {
            for j in 0..dk {
                let mut s = C64::zero();
                for r in 0..dr {
                    s += p.get(i * dr + r, j * dr + r);
                }
                out.data[i * dk + j] = s;
            }
        }
        Ok(out)
    }
}

/// `order` listing `keep` first, then the remaining qubits ascending.
pub(crate) fn keep_first_order(n: usize, keep: &[usize]) -> Result<Vec<usize>, MatrixError> {
    let mut seen = vec![false; n];
    for &k in keep {
        if k >= n || seen[k] {
            return Err(MatrixError::InvalidPermutation(n));
        }
        seen[k] = true;
    }
    let mut order: Vec<usize> = keep.to_vec();
    order.extend((0..n).filter(|&q| !seen[q]));
    Ok(order)
}

/// For each basis index of the permuted space, the source index in the original.
/// Qubit 0 is the most significant bit.
pub fn permutation_index_map(n: usize, new_order: &[usize]) -> Result<Vec<usize>, MatrixError> {
    if new_order.len() != n {
        return Err(MatrixError::InvalidPermutation(n));
    }
    let mut seen = vec![false; n];
    for &q in new_order {
        if q >= n || seen[q] {
            return Err(MatrixError::InvalidPermutation(n));
        }
        seen[q] = true;
    }
    let d = 1usize << n;
    let mut map = vec![0usize; d];
    for (i, slot) in map.iter_mut().enumerate() {
        let mut src = 0usize;
        for (k, &q) in new_order.iter().enumerate() {
            let bit = (i >> (n - 1 - k)) & 1;
            src |= bit << (n - 1 - q);
        }
        *slot = src;
    }
    Ok(map)
}

pub fn inverse_permutation(order: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; order.len()];
    for (k, &q) in order.iter().enumerate() {
        inv[q] = k;
    }
    inv
}

pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn trace(m: &ComplexMatrix) -> Result<C64, MatrixError> {
    m.trace()
}

pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

/// Smallest eigenvalue is at least `-tol`. The input must be Hermitian within `tol`.
pub fn is_psd(m: &ComplexMatrix, tol: f64) -> Result<bool, MatrixError> {
    m.require_square()?;
    let dev = m.hermitian_deviation();
    if dev > tol {
        return Err(MatrixError::NotHermitian(dev));
    }
    if m.is_diagonal(0.0) {
        return Ok(m.diagonal().iter().all(|z| z.re >= -tol));
    }
    let e = eigen::hermitian_eigen(m)?;
    Ok(e.values.first().is_none_or(|&v| v >= -tol))
}

pub fn permute_qubit_factors(m: &ComplexMatrix, new_order: &[usize]) -> Result<ComplexMatrix, MatrixError> {
    m.permute_qubits(new_order)
}

/// A square operator kept diagonal when possible.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Dense(ComplexMatrix),
    Diagonal(Vec<C64>),
}

impl Operator {
    pub fn identity(dim: usize) -> Self {
        Operator::Diagonal(vec![c(1.0); dim])
    }

    pub fn zero(dim: usize) -> Self {
        Operator::Diagonal(vec![C64::zero(); dim])
    }

    pub fn real_diagonal(d: &[f64]) -> Self {
        Operator::Diagonal(d.iter().map(|&x| c(x)).collect())
    }

    pub fn from_dense(m: ComplexMatrix) -> Result<Self, MatrixError> {
        m.require_square()?;
        Ok(Operator::Dense(m))
    }

    pub fn dim(&self) -> usize {
        match self {
            Operator::Dense(m) => m.rows(),
            Operator::Diagonal(d) => d.len(),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self, Operator::Diagonal(_))
    }

    pub fn get(&self, r: usize, col: usize) -> C64 {
        match self {
            Operator::Dense(m) => m.get(r, col),
            Operator::Diagonal(d) => {
                if r == col {
                    d[r]
                } else {
                    C64::zero()
                }
            }
        }
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        match self {
            Operator::Dense(m) => m.clone(),
            Operator::Diagonal(d) => ComplexMatrix::from_diagonal(d),
        }
    }

    /// Collapse a dense operator with no off-diagonal mass to the diagonal form.
    pub fn compact(self) -> Self {
        match self {
            Operator::Dense(m) if m.is_diagonal(0.0) => Operator::Diagonal(m.diagonal()),
            other => other,
        }
    }

    fn check_dim(&self, other: &Self) -> Result<(), MatrixError> {
        if self.dim() != other.dim() {
            return Err(MatrixError::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dim(other)?;
        Ok(match (self, other) {
            (Operator::Diagonal(a), Operator::Diagonal(b)) => {
                Operator::Diagonal(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            (Operator::Diagonal(a), Operator::Dense(m)) => {
                let d = m.rows();
                let mut out = m.clone();
                for (i, ai) in a.iter().enumerate() {
                    for j in 0..d {
                        out.set(i, j, ai * m.get(i, j));
                    }
                }
                Operator::Dense(out)
            }
            (Operator::Dense(m), Operator::Diagonal(b)) => {
                let d = m.rows();
                let mut out = m.clone();
                for i in 0..d {
                    for (j, bj) in b.iter().enumerate() {
                        out.set(i, j, m.get(i, j) * bj);
                    }
                }
                Operator::Dense(out)
            }
            (Operator::Dense(a), Operator::Dense(b)) => Operator::Dense(a.mul(b)?),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dim(other)?;
        Ok(match (self, other) {
            (Operator::Diagonal(a), Operator::Diagonal(b)) => {
                Operator::Diagonal(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => Operator::Dense(self.to_dense().add(&other.to_dense())?),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dim(other)?;
        Ok(match (self, other) {
            (Operator::Diagonal(a), Operator::Diagonal(b)) => {
                Operator::Diagonal(a.iter().zip(b).map(|(x, y)| x - y).collect())
            }
            _ => Operator::Dense(self.to_dense().sub(&other.to_dense())?),
        })
    }

    pub fn kron(&self, other: &Self) -> Self {
        match (self, other) {
            (Operator::Diagonal(a), Operator::Diagonal(b)) => {
                let mut out = Vec::with_capacity(a.len() * b.len());
                for x in a {
                    for y in b {
                        out.push(x * y);
                    }
                }
                Operator::Diagonal(out)
            }
            _ => Operator::Dense(self.to_dense().kron(&other.to_dense())),
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            Operator::Dense(m) => Operator::Dense(m.adjoint()),
            Operator::Diagonal(d) => Operator::Diagonal(d.iter().map(|z| z.conj()).collect()),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        match self {
            Operator::Dense(m) => Operator::Dense(m.scale_real(s)),
            Operator::Diagonal(d) => Operator::Diagonal(d.iter().map(|z| z * s).collect()),
        }
    }

    pub fn trace(&self) -> C64 {
        match self {
            Operator::Dense(m) => (0..m.rows()).map(|i| m.get(i, i)).sum(),
            Operator::Diagonal(d) => d.iter().sum(),
        }
    }

    pub fn permute_qubits(&self, new_order: &[usize]) -> Result<Self, MatrixError> {
        match self {
            Operator::Dense(m) => Ok(Operator::Dense(m.permute_qubits(new_order)?)),
            Operator::Diagonal(d) => {
                let n = log2_exact(d.len())?;
                let map = permutation_index_map(n, new_order)?;
                Ok(Operator::Diagonal(map.iter().map(|&src| d[src]).collect()))
            }
        }
    }

    /// `self * rho * self^dagger`
    pub fn conjugate(&self, rho: &Operator) -> Result<Operator, MatrixError> {
        self.mul(rho)?.mul(&self.adjoint())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        match (self, other) {
            (Operator::Diagonal(a), Operator::Diagonal(b)) if a.len() == b.len() => {
                a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
            }
            _ => self.to_dense().max_abs_diff(&other.to_dense()),
        }
    }

    pub fn hermitian_deviation(&self) -> f64 {
        match self {
            Operator::Dense(m) => m.hermitian_deviation(),
            Operator::Diagonal(d) => d.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
        }
    }

    /// Eigenvalues ascending; the operator is treated as Hermitian.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>, MatrixError> {
        match self {
            Operator::Diagonal(d) => {
                let mut v: Vec<f64> = d.iter().map(|z| z.re).collect();
                v.sort_by(f64::total_cmp);
                Ok(v)
            }
            Operator::Dense(m) => Ok(eigen::hermitian_eigen(m)?.values),
        }
    }
}

impl From<ComplexMatrix> for Operator {
    fn from(m: ComplexMatrix) -> Self {
        Operator::Dense(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis_proj(dim: usize, i: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m.set(i, i, c(1.0));
        m
    }

    #[test]
    fn identity_kron_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn one_by_one_is_neutral() {
        let unit = ComplexMatrix::identity(1);
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        assert_eq!(unit.kron(&m), m);
        assert_eq!(m.kron(&unit), m);
    }

    #[test]
    fn p1100_tensor_identity() {
        // index of 1100 is 12
        let p = basis_proj(16, 12).kron(&ComplexMatrix::identity(2));
        assert_eq!(p.rows(), 32);
        assert_eq!(p.get(24, 24), c(1.0));
        assert_eq!(p.get(25, 25), c(1.0));
        assert_eq!(p.trace().unwrap(), c(2.0));
    }

    #[test]
    fn trace_examples() {
        assert_eq!(ComplexMatrix::identity(4).trace().unwrap(), c(4.0));
        let rho = ComplexMatrix::from_diagonal(&[c(0.4), c(0.0), c(0.0), c(0.6)]);
        assert!((rho.trace().unwrap() - c(1.0)).norm() < 1e-12);
        assert!(ComplexMatrix::zeros(2, 3).trace().is_err());
    }

    #[test]
    fn adjoint_real_transpose() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(m.adjoint(), expected);
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn psd_checks() {
        assert!(is_psd(&ComplexMatrix::identity(3), 1e-9).unwrap());
        let m = ComplexMatrix::from_diagonal(&[c(1.0), c(-0.5)]);
        assert!(!is_psd(&m, 1e-9).unwrap());
        let nh = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(is_psd(&nh, 1e-9), Err(MatrixError::NotHermitian(_))));
    }

    #[test]
    fn swap_relabels_basis_state() {
        let p01 = basis_proj(4, 1);
        let swapped = p01.permute_qubits(&[1, 0]).unwrap();
        assert_eq!(swapped, basis_proj(4, 2));
        assert_eq!(p01.permute_qubits(&[0, 1]).unwrap(), p01);
    }

    #[test]
    fn bad_permutation_rejected() {
        let m = ComplexMatrix::identity(4);
        assert!(m.permute_qubits(&[0, 0]).is_err());
        assert!(m.permute_qubits(&[0]).is_err());
        assert!(ComplexMatrix::identity(3).permute_qubits(&[0]).is_err());
    }

    #[test]
    fn partial_trace_of_product() {
        let a = ComplexMatrix::from_diagonal(&[c(0.25), c(0.75)]);
        let b = ComplexMatrix::from_diagonal(&[c(0.5), c(0.5)]);
        let ab = a.kron(&b);
        assert!(ab.partial_trace_keep(&[0]).unwrap().max_abs_diff(&a) < 1e-15);
        assert!(ab.partial_trace_keep(&[1]).unwrap().max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn diagonal_operator_permutation_matches_dense() {
        let d = Operator::real_diagonal(&[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]);
        let order = [2, 0, 1];
        let via_diag = d.permute_qubits(&order).unwrap().to_dense();
        let via_dense = d.to_dense().permute_qubits(&order).unwrap();
        assert_eq!(via_diag, via_dense);
    }
}
