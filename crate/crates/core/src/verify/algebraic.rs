//! Identities on raw symmetric matrices and eigenvalue tuples, with
//! brute-force index summation as the reference.

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{kulkarni_nomizu, Tensor};
use crate::verify::identities::{t_norm_contraction_lhs, t_norm_contraction_rhs, t_norm_square, t_tensor_from_parts, QeConstants, TNormInputs};

/// Outcome of the pairwise-product bound for a sorted tuple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LemsumOutcome<T> {
    /// `(Σa)² − (n−1)Σa²`
    pub b: T,
    /// `b / (2(n−1))`
    pub bound: T,
    /// Smallest `a_i a_j` over `i < j`, by scanning all pairs.
    pub min_pair_product: T,
    pub bound_holds: bool,
    /// If `b ≥ 0`, all entries share a sign; vacuously true otherwise.
    pub sign_condition_holds: bool,
}

/// Checks `a_i a_j ≥ b/(2(n−1))` for every pair of a non-increasing tuple.
pub fn lemsum_check<T: Scalar>(a: &[T]) -> Result<LemsumOutcome<T>> {
    let n = a.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    if a.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NotSorted);
    }
    let nn1 = T::from_usize_lossy(n - 1);
    let s: T = a.iter().copied().sum();
    let s2: T = a.iter().map(|&x| x * x).sum();
    let b = s * s - nn1 * s2;
    let bound = b / (T::lit(2.0) * nn1);
    let mut min_pair = T::infinity();
    for i in 0..n {
        for j in i + 1..n {
            min_pair = min_pair.min(a[i] * a[j]);
        }
    }
    let slack = T::lit(1e-12) * (T::one() + s2);
    let sign_ok = b < T::zero() || a.iter().all(|&x| x >= -slack) || a.iter().all(|&x| x <= slack);
    Ok(LemsumOutcome { b, bound, min_pair_product: min_pair, bound_holds: min_pair >= bound - slack, sign_condition_holds: sign_ok })
}

/// Residuals of the symmetric-sum identities for the three nonzero-index
/// eigenvalues of `P` when the remaining eigenvalue is zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetricSumResiduals<T> {
    /// `3μ₂μ₃μ₄ − (Tr(P³) − 2m³ρ³)`
    pub product: T,
    /// `Σμ⁴ − (8mρ Tr(P³)/3 − 10m⁴ρ⁴/3)`
    pub quartic: T,
    /// Cubic expansion of `(μ₂+μ₃+μ₄)³`.
    pub cubic: T,
}

/// `(a+b+c)³ − [3(a+b+c)(a²+b²+c²) − 2(a³+b³+c³) + 6abc]`
pub fn cubic_expansion_residual<T: Scalar>(a: T, b: T, c: T) -> T {
    let s = a + b + c;
    let lhs = s * s * s;
    let three = T::lit(3.0);
    let rhs = three * s * (a * a + b * b + c * c) - T::lit(2.0) * (a * a * a + b * b * b + c * c * c)
        + T::lit(6.0) * a * b * c;
    lhs - rhs
}

/// Point `θ` on the circle of triples with `Σμ = 2mρ` and `Σμ² = 2m²ρ²`.
/// `θ = π/3` gives `(mρ, mρ, 0)`.
pub fn constrained_triple<T: Scalar>(m: T, rho: T, theta: T) -> [T; 3] {
    let c = T::lit(2.0) * m * rho / T::lit(3.0);
    let third = T::lit(2.0) * T::PI() / T::lit(3.0);
    let mut out = [T::zero(); 3];
    for (k, o) in out.iter_mut().enumerate() {
        *o = c + c * (theta - third * T::from_usize_lossy(k)).cos();
    }
    out
}

/// Evaluates the three symmetric-sum identities. The triple must satisfy the
/// trace and norm constraints to `tol` relative to `m²ρ²`.
pub fn symmetric_sum_identities<T: Scalar>(mu: [T; 3], m: T, rho: T, tol: T) -> Result<SymmetricSumResiduals<T>> {
    let mr = m * rho;
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let s: T = mu.iter().copied().sum();
    let s2: T = mu.iter().map(|&x| x * x).sum();
    let scale = T::one().max(mr * mr);
    if (s - two * mr).abs() > tol * scale || (s2 - two * mr * mr).abs() > tol * scale {
        return Err(Error::ConstraintViolation(format!(
            "need Tr(P) = 2mρ = {} and |P|² = 2m²ρ² = {}, got {s} and {s2}",
            two * mr,
            two * mr * mr
        )));
    }
    let tr3: T = mu.iter().map(|&x| x * x * x).sum();
    let tr4: T = mu.iter().map(|&x| x * x * x * x).sum();
    let mr3 = mr * mr * mr;
    let product = three * mu[0] * mu[1] * mu[2] - (tr3 - two * mr3);
    let quartic = tr4 - (T::lit(8.0) * mr * tr3 / three - T::lit(10.0) * mr3 * mr / three);
    Ok(SymmetricSumResiduals { product, quartic, cubic: cubic_expansion_residual(mu[0], mu[1], mu[2]) })
}

/// `Tr(A^k)` by explicit nested index summation.
pub fn trace_power_brute<T: Scalar>(a: &Tensor<T>, k: usize) -> T {
    let n = a.dim();
    let mut idx = vec![0usize; k];
    let mut total = T::zero();
    loop {
        let mut prod = T::one();
        for s in 0..k {
            prod = prod * a.at(&[idx[s], idx[(s + 1) % k]]);
        }
        total = total + prod;
        let mut pos = 0;
        loop {
            if pos == k {
                return total;
            }
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// `Tr(Ric³)` from `P = Ric − ρI`: `Tr(P³) + 3ρ|P|² + 3ρ²Tr(P) + nρ³`.
pub fn ricci_cube_via_p<T: Scalar>(p: &Tensor<T>, rho: T) -> T {
    let n = T::from_usize_lossy(p.dim());
    let three = T::lit(3.0);
    let p2 = p.matmul(p);
    p2.matmul(p).trace() + three * rho * p.norm_sq() + three * rho * rho * p.trace() + n * rho * rho * rho
}

/// `Tr(Ric⁴)` from `P`: `Tr(P⁴) + 4ρTr(P³) + 6ρ²|P|² + 4ρ³Tr(P) + nρ⁴`.
pub fn ricci_fourth_via_p<T: Scalar>(p: &Tensor<T>, rho: T) -> T {
    let n = T::from_usize_lossy(p.dim());
    let p2 = p.matmul(p);
    let r2 = rho * rho;
    p2.matmul(&p2).trace() + T::lit(4.0) * rho * p2.matmul(p).trace() + T::lit(6.0) * r2 * p.norm_sq()
        + T::lit(4.0) * r2 * rho * p.trace()
        + n * r2 * r2
}

/// `R_ds R_dijs R_jl R_il` by brute-force summation.
pub fn curvature_quartic_direct<T: Scalar>(rm: &Tensor<T>, ric: &Tensor<T>) -> T {
    let n = ric.dim();
    let mut total = T::zero();
    for d in 0..n {
        for s in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let a = ric.at(&[d, s]) * rm.at(&[d, i, j, s]);
                    for l in 0..n {
                        total = total + a * ric.at(&[j, l]) * ric.at(&[i, l]);
                    }
                }
            }
        }
    }
    total
}

/// The same contraction rewritten through `P`:
/// `P_ds R_dijs P²_ij + 2ρ P_ds R_dijs P_ij − 4ρ²|P|² − 3ρ³Tr(P) − ρTr(P³) − ρ³R`.
pub fn curvature_quartic_via_p<T: Scalar>(rm: &Tensor<T>, p: &Tensor<T>, rho: T, scal: T) -> T {
    let n = p.dim();
    let p2 = p.matmul(p);
    let mut a = T::zero();
    let mut b = T::zero();
    for d in 0..n {
        for s in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let w = p.at(&[d, s]) * rm.at(&[d, i, j, s]);
                    a = a + w * p2.at(&[j, i]);
                    b = b + w * p.at(&[i, j]);
                }
            }
        }
    }
    let r2 = rho * rho;
    a + T::lit(2.0) * rho * b - T::lit(4.0) * r2 * p.norm_sq() - T::lit(3.0) * r2 * rho * p.trace()
        - rho * p2.matmul(p).trace()
        - r2 * rho * scal
}

/// Ricci contraction `Ric_ik = Σ_j R_ijkj` in an orthonormal frame.
pub fn ricci_contraction<T: Scalar>(rm: &Tensor<T>) -> Tensor<T> {
    let n = rm.dim();
    Tensor::from_fn(n, 2, |x| (0..n).map(|j| rm.at(&[x[0], j, x[1], j])).sum())
}

/// Max-abs of `Σ_j (S⊙I)_ijkj − ((n−2)S + tr(S) I)`, summing explicitly.
pub fn kn_contraction_residual<T: Scalar>(s: &Tensor<T>) -> T {
    let n = s.dim();
    let kn = kulkarni_nomizu(s, &Tensor::identity(n));
    let lhs = ricci_contraction(&kn);
    let tr = s.trace();
    let nn2 = T::from_usize_lossy(n) - T::lit(2.0);
    let rhs = Tensor::from_fn(n, 2, |x| nn2 * s.at(x) + if x[0] == x[1] { tr } else { T::zero() });
    lhs.max_abs_diff(&rhs)
}

/// Uniform random symmetric matrix with entries in `[−1, 1]`.
pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize) -> Tensor<f64> {
    let mut a = Tensor::zeros(n, 2);
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-1.0..1.0);
            a.set(&[i, j], v);
            a.set(&[j, i], v);
        }
    }
    a
}

/// A random algebraic curvature tensor: a sum of Kulkarni–Nomizu products of
/// random symmetric matrices.
pub fn random_curvature_tensor<R: Rng>(rng: &mut R, n: usize) -> Tensor<f64> {
    let mut rm = Tensor::zeros(n, 4);
    for _ in 0..3 {
        let s = random_symmetric(rng, n);
        let t = random_symmetric(rng, n);
        rm = rm.add(&kulkarni_nomizu(&s, &t));
    }
    rm
}

/// Traceless Ricci tensor with `∇u` as eigenvector for `ξ₁ = (n(n−1)λ − (m+n−1)R)/(n(m−1))`,
/// as constant scalar curvature forces; `a` fills the orthogonal block.
pub fn constrained_traceless<T: Scalar>(c: &QeConstants<T>, scal: T, du: &Tensor<T>, a: &Tensor<T>) -> Tensor<T> {
    let n = c.n;
    let (nn, one) = (T::from_usize_lossy(n), T::one());
    let xi1 = (nn * (nn - one) * c.lambda - (c.m + nn - one) * scal) / (nn * (c.m - one));
    let norm = du.norm_sq().sqrt();
    let nu = du.scale(one / norm);
    let proj = Tensor::from_fn(n, 2, |x| if x[0] == x[1] { one } else { T::zero() } - nu.at(&[x[0]]) * nu.at(&[x[1]]));
    let block = proj.matmul(a).matmul(&proj);
    // shift the block so the total trace vanishes
    let shift = (xi1 + block.trace()) / (nn - one);
    Tensor::from_fn(n, 2, |x| {
        block.at(x) - shift * proj.at(x) + xi1 * nu.at(&[x[0]]) * nu.at(&[x[1]])
    })
}

/// Both equalities of the `|T|²` identity on synthetic data. `∇R` is eliminated
/// through `½u∇R = −(m−1)Ric(∇u) − (R − (n−1)λ)∇u`; with `traceless` from
/// [`constrained_traceless`] this gives `∇R = 0`. Returns
/// `(contraction − expansion, expansion − weighted |T|²)`.
pub fn t_norm_synthetic<T: Scalar>(
    c: &QeConstants<T>,
    scal: T,
    u: T,
    traceless: &Tensor<T>,
    du: &Tensor<T>,
) -> Result<(T, T)> {
    let n = c.n;
    let nn = T::from_usize_lossy(n);
    let ric = Tensor::from_fn(n, 2, |x| traceless.at(x) + if x[0] == x[1] { scal / nn } else { T::zero() });
    let k = scal - (nn - T::one()) * c.lambda;
    let d_scal = Tensor::from_fn(n, 1, |x| {
        let ric_du: T = (0..n).map(|j| ric.at(&[x[0], j]) * du.at(&[j])).sum();
        T::lit(2.0) * (-(c.m - T::one()) * ric_du - k * du.at(x)) / u
    });
    let t = t_tensor_from_parts(c, scal, u, traceless, du, &d_scal)?;
    let inputs = TNormInputs { n, m: c.m, lambda: c.lambda, scal, traceless: traceless.clone(), du: du.clone(), t };
    let lhs = t_norm_contraction_lhs(&inputs);
    let mid = t_norm_contraction_rhs(&inputs);
    let rhs = t_norm_square(&inputs);
    Ok((lhs - mid, mid - rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lemsum_rejects_unsorted_and_short() {
        assert_eq!(lemsum_check(&[1.0, 2.0]), Err(Error::NotSorted));
        assert!(matches!(lemsum_check(&[1.0f64]), Err(Error::DimensionTooSmall { .. })));
    }

    #[test]
    fn lemsum_equal_pair() {
        let o = lemsum_check(&[1.0f64, 1.0]).unwrap();
        assert_eq!(o.b, 2.0);
        assert_eq!(o.bound, 1.0);
        assert!(o.bound_holds && o.sign_condition_holds);
    }

    #[test]
    fn family_hits_rigid_pattern() {
        let mu = constrained_triple(2.0f64, 0.5, std::f64::consts::FRAC_PI_3);
        let mut s = mu;
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((s[0] - 1.0).abs() < 1e-14 && (s[1] - 1.0).abs() < 1e-14 && s[2].abs() < 1e-14);
        let r = symmetric_sum_identities(mu, 2.0, 0.5, 1e-10).unwrap();
        assert!(r.product.abs() < 1e-14);
    }

    #[test]
    fn equal_triple_violates_norm_constraint() {
        let (m, rho) = (2.0f64, 0.5);
        let v = 2.0 * m * rho / 3.0;
        assert!(matches!(symmetric_sum_identities([v, v, v], m, rho, 1e-10), Err(Error::ConstraintViolation(_))));
    }

    #[test]
    fn brute_force_trace_matches_matmul() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_symmetric(&mut rng, 4);
        let via = a.matmul(&a).matmul(&a).trace();
        assert!((trace_power_brute(&a, 3) - via).abs() < 1e-12);
    }

    #[test]
    fn kn_of_metric_with_itself() {
        let g = Tensor::<f64>::identity(3);
        let kn = kulkarni_nomizu(&g, &g);
        assert_eq!(kn.at(&[0, 1, 0, 1]), 2.0);
        assert_eq!(kn.at(&[0, 1, 1, 0]), -2.0);
    }

    #[test]
    fn random_curvature_tensor_has_pair_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rm = random_curvature_tensor(&mut rng, 4);
        let mut worst = 0.0f64;
        crate::tensor::for_each_index(4, 4, |x| {
            worst = worst.max((rm.at(x) - rm.at(&[x[2], x[3], x[0], x[1]])).abs());
            worst = worst.max((rm.at(x) + rm.at(&[x[1], x[0], x[2], x[3]])).abs());
        });
        assert!(worst < 1e-14);
    }
}
