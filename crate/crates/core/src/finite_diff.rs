//! Central finite differences of metric values: an oracle path for the
//! curvature pipeline that never touches jets.

use crate::error::Result;
use crate::linalg::spd_inverse;
use crate::metric::MetricSpec;
use crate::tensor::Tensor;

/// Step for nested central differences of order `k`, balancing truncation
/// `O(h²)` against rounding `O(ε/h^k)`.
pub fn default_step(order: usize) -> f64 {
    match order {
        0 | 1 => 1e-5,
        2 => 1e-4,
        _ => 1e-2,
    }
}

/// `∂_{idx[0]} … ∂_{idx[k−1]} f(x)` by nested second-order central differences.
pub fn central_partial(f: &dyn Fn(&[f64]) -> f64, x: &[f64], idx: &[usize], h: f64) -> f64 {
    match idx.split_first() {
        None => f(x),
        Some((&i, rest)) => {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            (central_partial(f, &xp, rest, h) - central_partial(f, &xm, rest, h)) / (2.0 * h)
        }
    }
}

/// Fourth-order accurate first derivative along coordinate `i`.
pub fn first_derivative4(f: &dyn Fn(&[f64]) -> f64, x: &[f64], i: usize, h: f64) -> f64 {
    let at = |s: f64| {
        let mut y = x.to_vec();
        y[i] += s;
        f(&y)
    };
    (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h)
}

/// Curvature from finite differences of metric values.
#[derive(Clone, Debug)]
pub struct FdCurvature {
    pub gamma: Tensor<f64>,
    pub riem: Tensor<f64>,
    /// Ricci from the direct contraction `∂_iΓ^i_jk − ∂_kΓ^i_ij + Γ^i_ipΓ^p_jk − Γ^i_kpΓ^p_ij`.
    pub ric: Tensor<f64>,
    pub scal: f64,
}

/// Γ, Rm, Ric and R at `x` from metric values only. `h` is the step for the
/// second derivatives; first derivatives use a fourth-order stencil with the same step.
pub fn fd_curvature(spec: &MetricSpec<f64>, x: &[f64], h: f64) -> Result<FdCurvature> {
    let n = spec.dim;
    let g = spec.values(x);
    let gi = spd_inverse(&g)?;
    let comp = |i: usize, j: usize| move |y: &[f64]| spec.values(y).at(&[i, j]);

    // dg[k,i,j] = ∂_k g_ij, ddg[a,b,i,j] = ∂_a∂_b g_ij
    let mut dg: Tensor<f64> = Tensor::zeros(n, 3);
    let mut ddg: Tensor<f64> = Tensor::zeros(n, 4);
    for i in 0..n {
        for j in i..n {
            let f = comp(i, j);
            for k in 0..n {
                let v = first_derivative4(&f, x, k, h);
                dg.set(&[k, i, j], v);
                dg.set(&[k, j, i], v);
            }
            for a in 0..n {
                for b in a..n {
                    let v = central_partial(&f, x, &[a, b], h);
                    for (p, q) in [(a, b), (b, a)] {
                        ddg.set(&[p, q, i, j], v);
                        ddg.set(&[p, q, j, i], v);
                    }
                }
            }
        }
    }
    // ∂_a g^{kl} = −g^{kp} ∂_a g_pq g^{ql}
    let dgi = Tensor::from_fn(n, 3, |x| {
        let (a, k, l) = (x[0], x[1], x[2]);
        let mut s = 0.0f64;
        for p in 0..n {
            for q in 0..n {
                s -= gi.at(&[k, p]) * dg.at(&[a, p, q]) * gi.at(&[q, l]);
            }
        }
        s
    });
    // first-kind symbols and their derivatives
    let first = |i: usize, j: usize, l: usize| 0.5 * (dg.at(&[i, j, l]) + dg.at(&[j, i, l]) - dg.at(&[l, i, j]));
    let dfirst = |a: usize, i: usize, j: usize, l: usize| {
        0.5 * (ddg.at(&[a, i, j, l]) + ddg.at(&[a, j, i, l]) - ddg.at(&[a, l, i, j]))
    };
    let gamma = Tensor::from_fn(n, 3, |x| (0..n).map(|l| gi.at(&[x[0], l]) * first(x[1], x[2], l)).sum::<f64>());
    // dgamma[a,k,i,j] = ∂_a Γ^k_ij
    let dgamma = Tensor::from_fn(n, 4, |x| {
        let (a, k, i, j) = (x[0], x[1], x[2], x[3]);
        (0..n).map(|l| dgi.at(&[a, k, l]) * first(i, j, l) + gi.at(&[k, l]) * dfirst(a, i, j, l)).sum::<f64>()
    });
    let up = |l: usize, i: usize, j: usize, k: usize| {
        let mut v: f64 = dgamma.at(&[i, l, j, k]) - dgamma.at(&[j, l, i, k]);
        for p in 0..n {
            v += gamma.at(&[l, i, p]) * gamma.at(&[p, j, k]) - gamma.at(&[l, j, p]) * gamma.at(&[p, i, k]);
        }
        v
    };
    let riem = Tensor::from_fn(n, 4, |x| {
        let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
        -(0..n).map(|m| g.at(&[l, m]) * up(m, i, j, k)).sum::<f64>()
    });
    let ric = Tensor::from_fn(n, 2, |x| {
        let (j, k) = (x[0], x[1]);
        let mut v = 0.0f64;
        for i in 0..n {
            v += dgamma.at(&[i, i, j, k]) - dgamma.at(&[k, i, i, j]);
            for p in 0..n {
                v += gamma.at(&[i, i, p]) * gamma.at(&[p, j, k]) - gamma.at(&[i, k, p]) * gamma.at(&[p, i, j]);
            }
        }
        v
    });
    let scal = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| gi.at(&[i, j]) * ric.at(&[i, j])).sum::<f64>();
    Ok(FdCurvature { gamma, riem, ric, scal })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_difference_of_polynomial() {
        let f = |x: &[f64]| x[0] * x[0] * x[1];
        let v = central_partial(&f, &[2.0, 3.0], &[0, 1], 1e-4);
        assert!((v - 4.0).abs() < 1e-6);
    }

    #[test]
    fn round_sphere_ricci() {
        let s = crate::models::charts::round_sphere::<f64>(3, 1.0).unwrap();
        let x = s.domain.midpoint();
        let fd = fd_curvature(&s, &x.coords, 1e-3).unwrap();
        assert!((fd.scal - 6.0).abs() < 1e-5, "{}", fd.scal);
    }

    #[test]
    fn agrees_with_jet_pipeline_on_random_metric() {
        let s = crate::models::random::random_metric(7, 3).unwrap();
        let x = s.domain.from_unit(&[0.4, 0.6, 0.3]);
        let fd = fd_curvature(&s, &x.coords, 1e-3).unwrap();
        let f = crate::curvature::CurvatureFields::compute(&s, &x, 2).unwrap();
        let riem = f.riem.map(|j| j.value());
        let ric = f.ric.map(|j| j.value());
        assert!(fd.riem.max_abs_diff(&riem) < 1e-6, "{}", fd.riem.max_abs_diff(&riem));
        assert!(fd.ric.max_abs_diff(&ric) < 1e-6, "{}", fd.ric.max_abs_diff(&ric));
    }
}
