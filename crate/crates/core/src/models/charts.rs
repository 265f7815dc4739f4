//! Hyperspherical charts for round sphere factors.

use crate::error::{Error, Result};
use crate::field::{Domain, SINGULARITY_MARGIN};
use crate::jet::Jet;
use crate::metric::MetricSpec;
use crate::scalar::Scalar;
use crate::tensor::Element;

/// Diagonal of the unit `S^k` metric in angles `(θ₁, …, θ_{k−1}, φ)`:
/// `1, sin²θ₁, sin²θ₁ sin²θ₂, …`.
pub fn sphere_diagonal<T: Scalar>(angles: &[Jet<T>]) -> Vec<Jet<T>> {
    let mut out = Vec::with_capacity(angles.len());
    let mut prod = angles[0].constant_like(T::one());
    for (i, a) in angles.iter().enumerate() {
        out.push(prod.clone());
        if i + 1 < angles.len() {
            prod = &prod * &a.sin().square();
        }
    }
    out
}

/// Sampling intervals for the angles of `S^k`, kept `δ` away from the poles.
pub fn sphere_intervals<T: Scalar>(k: usize) -> Vec<(T, T)> {
    let d = T::lit(SINGULARITY_MARGIN);
    let pi = T::PI();
    (0..k).map(|i| if i + 1 < k { (d, pi - d) } else { (d, T::lit(2.0) * pi - d) }).collect()
}

/// Round `S^n` of the given radius in hyperspherical coordinates.
pub fn round_sphere<T: Scalar>(n: usize, radius: T) -> Result<MetricSpec<T>> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let r2 = radius * radius;
    Ok(MetricSpec::diagonal(format!("round S^{n}"), Domain::new(sphere_intervals(n)), move |x| {
        sphere_diagonal(x).into_iter().map(|j| j.scaled(r2)).collect()
    }))
}
