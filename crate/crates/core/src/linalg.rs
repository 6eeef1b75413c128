//! Thin adapters onto `faer` for the dense eigen-problems and factorizations.

use faer::linalg::solvers::DenseSolveCore;
use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

fn to_faer(m: &ComplexMatrix) -> Mat<C64> {
    Mat::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Eigen-decomposition of the Hermitian part of `m`.
///
/// Eigenvalues come back ascending; column `k` of the returned matrix is the
/// unit eigenvector for eigenvalue `k`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    m.square_dim()?;
    let h = to_faer(&m.hermitian_part());
    let evd = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("hermitian eigensolver: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let n = m.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s[a].re.total_cmp(&s[b].re));
    let values = order.iter().map(|&k| s[k].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| u[(i, order[j])]);
    Ok((values, vectors))
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.square_dim()?;
    let h = to_faer(&m.hermitian_part());
    let vals = h
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("hermitian eigensolver: {e:?}")))?;
    let mut vals: Vec<f64> = vals.into_iter().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

pub fn min_hermitian_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.first().copied().unwrap_or(0.0))
}

/// Eigenvalues of a general square matrix, in solver order.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    m.square_dim()?;
    let vals = to_faer(m)
        .eigenvalues()
        .map_err(|e| Error::Numerical(format!("eigensolver: {e:?}")))?;
    Ok(vals)
}

/// Eigenvalues and right eigenvectors of a general square matrix.
///
/// Eigenvector columns are rescaled to unit Euclidean norm (the solver does
/// not normalize them).
pub fn eigen(m: &ComplexMatrix) -> Result<(Vec<C64>, ComplexMatrix)> {
    let n = m.square_dim()?;
    let evd = to_faer(m)
        .eigen()
        .map_err(|e| Error::Numerical(format!("eigensolver: {e:?}")))?;
    let s = evd.S().column_vector();
    let values: Vec<C64> = (0..n).map(|k| s[k]).collect();
    let mut vectors = from_faer(evd.U());
    for j in 0..n {
        let norm = (0..n)
            .map(|i| vectors[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Numerical(format!(
                "degenerate eigenvector column {j}"
            )));
        }
        for i in 0..n {
            vectors[(i, j)] /= norm;
        }
    }
    Ok((values, vectors))
}

/// Inverse through a partially pivoted LU factorization.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.square_dim()?;
    let inv = to_faer(m).partial_piv_lu().inverse();
    let out = from_faer(inv.as_ref());
    if out
        .data()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::Numerical(
            "matrix is singular to working precision".into(),
        ));
    }
    Ok(out)
}

/// Singular values, descending.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let vals = to_faer(m)
        .singular_values()
        .map_err(|e| Error::Numerical(format!("svd: {e:?}")))?;
    let mut vals: Vec<f64> = vals.into_iter().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}

/// Operator (spectral) norm: the largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Spectral condition number `||m|| ||m^-1||`; infinite for singular input.
pub fn condition_number(m: &ComplexMatrix) -> Result<f64> {
    let sv = singular_values(m)?;
    let (max, min) = (sv[0], *sv.last().unwrap());
    Ok(if min > 0.0 { max / min } else { f64::INFINITY })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c;

    #[test]
    fn hermitian_eigen_sorted_and_orthonormal() {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                c(i as f64, 0.0)
            } else if i < j {
                c(0.3, 0.1 * j as f64)
            } else {
                c(0.3, -0.1 * i as f64)
            }
        });
        let (vals, vecs) = hermitian_eigen(&m).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let gram = vecs.adjoint().matmul(&vecs).unwrap();
        assert!(gram.approx_eq(&ComplexMatrix::identity(3), 1e-12));
        let lhs = m.matmul(&vecs).unwrap();
        let rhs = ComplexMatrix::from_fn(3, 3, |i, j| vecs[(i, j)] * vals[j]);
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn general_eigen_columns_are_unit() {
        let m = ComplexMatrix::from_fn(4, 4, |i, j| {
            c((i * 4 + j) as f64 * 0.1, (i as f64) - (j as f64))
        });
        let (vals, vecs) = eigen(&m).unwrap();
        for (j, &lambda) in vals.iter().enumerate() {
            let v = vecs.column(j);
            let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
            let mv = m.mul_vec(&v).unwrap();
            for i in 0..4 {
                assert!((mv[i] - lambda * v[i]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn operator_norm_of_diag() {
        let m = ComplexMatrix::diag_real(&[0.5, -2.0, 1.0]);
        assert!((operator_norm(&m).unwrap() - 2.0).abs() < 1e-14);
    }
}
