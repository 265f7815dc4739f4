//! Small dense linear algebra on rank-2 tensors (n ≤ 10).

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Eigenvalues and eigenvectors of a symmetric matrix by cyclic Jacobi sweeps.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as the
/// columns of the second tensor.
pub fn symmetric_eigen<T: Scalar>(a: &Tensor<T>) -> (Vec<T>, Tensor<T>) {
    let n = a.dim();
    let mut m: Vec<Vec<T>> = (0..n).map(|i| (0..n).map(|j| a.at(&[i, j])).collect()).collect();
    let mut v: Vec<Vec<T>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect();
    let two = T::lit(2.0);
    for _sweep in 0..100 {
        let off: T = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        let diag: T = (0..n).map(|i| m[i][i] * m[i][i]).sum();
        if off <= T::epsilon() * T::epsilon() * (diag + T::min_positive_value()) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q] == T::zero() {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (two * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = (t * t + T::one()).sqrt().recip();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| m[i][i]).collect();
    let vectors = Tensor::from_fn(n, 2, |x| v[x[0]][order[x[1]]]);
    (values, vectors)
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn symmetric_eigenvalues<T: Scalar>(a: &Tensor<T>) -> Vec<T> {
    symmetric_eigen(a).0
}

/// Lower-triangular `L` with `a = L Lᵀ`.
pub fn cholesky<T: Scalar>(a: &Tensor<T>) -> Result<Tensor<T>> {
    let n = a.dim();
    let mut l = Tensor::<T>::zeros(n, 2);
    for j in 0..n {
        let mut d = a.at(&[j, j]);
        for k in 0..j {
            d = d - l.at(&[j, k]) * l.at(&[j, k]);
        }
        if d <= T::zero() || !d.is_finite() {
            return Err(Error::SingularMetric { condition: f64::INFINITY });
        }
        let djj = d.sqrt();
        l.set(&[j, j], djj);
        for i in j + 1..n {
            let mut s = a.at(&[i, j]);
            for k in 0..j {
                s = s - l.at(&[i, k]) * l.at(&[j, k]);
            }
            l.set(&[i, j], s / djj);
        }
    }
    Ok(l)
}

/// Inverse of a lower-triangular matrix.
fn lower_inverse<T: Scalar>(l: &Tensor<T>) -> Tensor<T> {
    let n = l.dim();
    let mut inv = Tensor::<T>::zeros(n, 2);
    for col in 0..n {
        for i in col..n {
            let mut s = if i == col { T::one() } else { T::zero() };
            for k in col..i {
                s = s - l.at(&[i, k]) * inv.at(&[k, col]);
            }
            inv.set(&[i, col], s / l.at(&[i, i]));
        }
    }
    inv
}

/// Inverse of a symmetric positive-definite matrix.
pub fn spd_inverse<T: Scalar>(a: &Tensor<T>) -> Result<Tensor<T>> {
    let li = lower_inverse(&cholesky(a)?);
    Ok(li.transpose().matmul(&li))
}

/// Condition number of a symmetric positive-definite matrix, or infinity when
/// it is not positive definite.
pub fn spd_condition<T: Scalar>(a: &Tensor<T>) -> f64 {
    let ev = symmetric_eigenvalues(a);
    let (lo, hi) = (ev[0].as_f64(), ev[ev.len() - 1].as_f64());
    if lo <= 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Coordinate components of an orthonormal frame: column `a` of the result is
/// the frame vector `e_a`, so `Eᵀ g E = I`.
pub fn orthonormal_frame<T: Scalar>(g: &Tensor<T>) -> Result<Tensor<T>> {
    Ok(lower_inverse(&cholesky(g)?).transpose())
}

/// Frame components of a covariant tensor: `T_{a…} = T_{i…} E_{i a} …`.
pub fn to_frame<T: Scalar>(t: &Tensor<T>, frame: &Tensor<T>) -> Tensor<T> {
    let n = t.dim();
    let mut cur = t.clone();
    for slot in 0..t.rank() {
        cur = Tensor::from_fn(n, t.rank(), |idx| {
            let mut src = idx.to_vec();
            let mut acc = T::zero();
            for i in 0..n {
                src[slot] = i;
                acc = acc + cur.at(&src) * frame.at(&[i, idx[slot]]);
            }
            acc
        });
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_recovers_diagonal_after_rotation() {
        let (c, s) = (0.6f64, 0.8f64);
        let r = Tensor::from_vec(2, 2, vec![c, -s, s, c]);
        let d = Tensor::from_vec(2, 2, vec![3.0, 0.0, 0.0, -1.0]);
        let a = r.matmul(&d).matmul(&r.transpose());
        let ev = symmetric_eigenvalues(&a);
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn frame_orthonormalises_metric() {
        let g = Tensor::from_vec(3, 2, vec![2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.0]);
        let e = orthonormal_frame(&g).unwrap();
        let id = to_frame(&g, &e);
        assert!(id.max_abs_diff(&Tensor::identity(3)) < 1e-14);
        let gi = spd_inverse(&g).unwrap();
        assert!(g.matmul(&gi).max_abs_diff(&Tensor::identity(3)) < 1e-14);
    }
}
