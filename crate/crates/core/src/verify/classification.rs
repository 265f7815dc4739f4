//! Admissible constant scalar curvatures and their inverse lookup.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One admissible value `R_k` indexed by the dimension `k` of the maximum set of `u`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleScalar<T> {
    pub k: usize,
    pub r: T,
    /// `k = 1` cannot occur on a compact manifold.
    pub excluded: bool,
}

/// `R_k = (k(m−n) + n(n−1)) λ / (m+n−k−1)` for `k = 0, …, n−1`.
pub fn admissible_scalar_set<T: Scalar>(n: usize, m: T, lambda: T) -> Result<Vec<AdmissibleScalar<T>>> {
    if !(m > T::one()) {
        return Err(Error::param("m", "m must exceed 1"));
    }
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let nn = T::from_usize_lossy(n);
    let out: Vec<_> = (0..n)
        .map(|k| {
            let kk = T::from_usize_lossy(k);
            let r = (kk * (m - nn) + nn * (nn - T::one())) * lambda / (m + nn - kk - T::one());
            AdmissibleScalar { k, r, excluded: k == 1 }
        })
        .collect();
    // strict monotonicity in k keeps the inverse lookup unique
    let increasing = out.windows(2).all(|w| if lambda > T::zero() { w[0].r < w[1].r } else { w[0].r > w[1].r });
    if lambda != T::zero() && !increasing {
        return Err(Error::ConstraintViolation("admissible values not strictly monotone in k".into()));
    }
    Ok(out)
}

/// The unique `k` with `|R − R_k| ≤ tol·|R_k|`, if any.
pub fn classify_scalar<T: Scalar>(r: T, n: usize, m: T, lambda: T, tol: T) -> Result<Option<usize>> {
    if !(tol > T::zero()) {
        return Err(Error::param("tol", "tolerance must be positive"));
    }
    let set = admissible_scalar_set(n, m, lambda)?;
    let hits: Vec<_> = set.iter().filter(|a| (r - a.r).abs() <= tol * a.r.abs()).collect();
    match hits.len() {
        0 => Ok(None),
        1 => Ok(Some(hits[0].k)),
        _ => Err(Error::AmbiguousClassification { r: r.as_f64() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_value_is_n_minus_one_lambda() {
        let s = admissible_scalar_set(5, 2.5f64, 1.3).unwrap();
        assert!((s[4].r - 4.0 * 1.3).abs() < 1e-14);
        assert!(s[1].excluded && !s[0].excluded);
    }
}
