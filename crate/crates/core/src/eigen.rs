//! Cyclic Jacobi eigendecomposition for complex Hermitian matrices.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::matrix::{ComplexMatrix, MatrixError};

const OFF_DIAGONAL_THRESHOLD: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues ascending; `vectors` holds the matching eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    libm::sqrt(s)
}

/// Decompose `m`, which is symmetrized first so tiny anti-Hermitian noise is ignored.
/// Fails on non-square or non-finite input.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if !m.is_finite() {
        return Err(MatrixError::NonFinite);
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = OFF_DIAGONAL_THRESHOLD * a.frobenius_norm().max(1.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a.get(p, q);
                let mag = b.norm();
                if mag <= f64::MIN_POSITIVE {
                    continue;
                }
                rotate(&mut a, &mut v, p, q, b, mag);
            }
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a.get(i, i).re, i)).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &(_, old_col)) in pairs.iter().enumerate() {
        for r in 0..n {
            vectors.set(r, new_col, v.get(r, old_col));
        }
    }
    Ok(HermitianEigen { values: pairs.into_iter().map(|(x, _)| x).collect(), vectors })
}

// One rotation zeroing a[p][q]. W = diag(1, conj(u)) * R where u = b/|b| makes the pair real
// and R is the classical real Jacobi rotation.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, b: C64, mag: f64) {
    let n = a.rows();
    let u = b / mag;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + libm::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
    };
    let cs = 1.0 / libm::sqrt(1.0 + t * t);
    let sn = t * cs;

    let wpp = C64::new(cs, 0.0);
    let wpq = C64::new(sn, 0.0);
    let wqp = u.conj() * (-sn);
    let wqq = u.conj() * cs;

    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * wpp + akq * wqp);
        a.set(k, q, akp * wpq + akq * wqq);
    }
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, wpp.conj() * apk + wqp.conj() * aqk);
        a.set(q, k, wpq.conj() * apk + wqq.conj() * aqk);
    }
    a.set(p, q, C64::new(0.0, 0.0));
    a.set(q, p, C64::new(0.0, 0.0));
    let dp = a.get(p, p).re;
    let dq = a.get(q, q).re;
    a.set(p, p, C64::new(dp, 0.0));
    a.set(q, q, C64::new(dq, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * wpp + vkq * wqp);
        v.set(k, q, vkp * wpq + vkq * wqq);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(e: &HermitianEigen) -> ComplexMatrix {
        let d: Vec<C64> = e.values.iter().map(|&x| C64::new(x, 0.0)).collect();
        let dm = ComplexMatrix::from_diagonal(&d);
        e.vectors.mul(&dm).unwrap().mul(&e.vectors.adjoint()).unwrap()
    }

    #[test]
    fn pauli_y_eigenpairs() {
        let y = ComplexMatrix::from_rows(vec![
            vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
            vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eigen(&y).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-12);
        assert!((e.values[1] - 1.0).abs() < 1e-12);
        assert!(reconstruct(&e).max_abs_diff(&y) < 1e-12);
    }

    #[test]
    fn dense_complex_hermitian_reconstructs() {
        let m = ComplexMatrix::from_rows(vec![
            vec![C64::new(2.0, 0.0), C64::new(0.5, 0.3), C64::new(-0.1, 0.7)],
            vec![C64::new(0.5, -0.3), C64::new(1.0, 0.0), C64::new(0.2, 0.0)],
            vec![C64::new(-0.1, -0.7), C64::new(0.2, 0.0), C64::new(-1.0, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eigen(&m).unwrap();
        assert!(reconstruct(&e).max_abs_diff(&m) < 1e-10);
        let vv = e.vectors.adjoint().mul(&e.vectors).unwrap();
        assert!(vv.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-10);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let tr: f64 = e.values.iter().sum();
        assert!((tr - 2.0).abs() < 1e-10);
    }

    #[test]
    fn degenerate_spectrum() {
        let e = hermitian_eigen(&ComplexMatrix::identity(4)).unwrap();
        assert!(e.values.iter().all(|&x| (x - 1.0).abs() < 1e-15));
    }
}
