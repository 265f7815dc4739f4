//! Curvature operators on tensor fields represented by jets.
//!
//! Every field carries its own truncation order; differentiating lowers it by
//! one and products truncate to the lower of their inputs, so asking for a
//! quantity the metric order cannot support surfaces as `InsufficientOrder`.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::metric::MetricJet;
use crate::scalar::Scalar;
use crate::tensor::{kulkarni_nomizu, Element, Tensor};

fn order_of<T: Scalar>(t: &Tensor<Jet<T>>) -> usize {
    t.data().iter().map(|j| j.order()).min().unwrap_or(0)
}

fn truncated<T: Scalar>(t: &Tensor<Jet<T>>, order: usize) -> Tensor<Jet<T>> {
    t.map(|j| j.truncate(order))
}

/// Christoffel symbols `Γ^k_ij`, stored as `[k, i, j]`, as jets of `order`.
pub fn christoffel<T: Scalar>(mj: &MetricJet<T>, order: usize) -> Result<Tensor<Jet<T>>> {
    if mj.order < order + 1 {
        return Err(Error::InsufficientOrder { needed: order + 1, available: mj.order });
    }
    let n = mj.dim();
    let g = truncated(&mj.g, order + 1);
    let ginv = truncated(&mj.ginv, order);
    let dg: Vec<Tensor<Jet<T>>> = (0..n)
        .map(|l| {
            let d: Result<Vec<_>> = g.data().iter().map(|j| j.derivative(l)).collect();
            d.map(|v| Tensor::from_vec(n, 2, v))
        })
        .collect::<Result<_>>()?;
    let half = T::lit(0.5);
    // first kind Γ_{l,ij} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
    let first = Tensor::from_fn(n, 3, |x| {
        let (l, i, j) = (x[0], x[1], x[2]);
        dg[i].get(&[j, l]).plus(dg[j].get(&[i, l])).minus(dg[l].get(&[i, j])).scaled(half)
    });
    Ok(Tensor::from_fn(n, 3, |x| {
        let (k, i, j) = (x[0], x[1], x[2]);
        let mut acc = ginv.get(&[0, 0]).zero_like();
        for l in 0..n {
            acc.acc_product(ginv.get(&[k, l]), first.get(&[l, i, j]));
        }
        acc
    }))
}

/// Fully covariant curvature tensor with the sign fixed so that the unit round
/// sphere has `R_ijij = +1` for orthonormal `i ≠ j`.
///
/// Built from `R^l_{ijk} = ∂_iΓ^l_jk − ∂_jΓ^l_ik + Γ^l_ip Γ^p_jk − Γ^l_jp Γ^p_ik`
/// as `R_ijkl = −g_lm R^m_{ijk}`.
pub fn riemann<T: Scalar>(gamma: &Tensor<Jet<T>>, g: &Tensor<Jet<T>>) -> Result<Tensor<Jet<T>>> {
    let n = gamma.dim();
    let og = order_of(gamma);
    if og == 0 {
        return Err(Error::InsufficientOrder { needed: 1, available: 0 });
    }
    let order = og - 1;
    let dgam: Vec<Tensor<Jet<T>>> = (0..n)
        .map(|a| {
            let d: Result<Vec<_>> = gamma.data().iter().map(|j| j.derivative(a)).collect();
            d.map(|v| Tensor::from_vec(n, 3, v))
        })
        .collect::<Result<_>>()?;
    let gam = truncated(gamma, order);
    let gl = truncated(g, order);
    let mixed = Tensor::from_fn(n, 4, |x| {
        let (l, i, j, k) = (x[0], x[1], x[2], x[3]);
        let mut acc = dgam[i].get(&[l, j, k]).minus(dgam[j].get(&[l, i, k]));
        for p in 0..n {
            acc.acc_product(gam.get(&[l, i, p]), gam.get(&[p, j, k]));
            let mut neg = gam.get(&[l, j, p]).clone();
            neg = neg.scaled(-T::one());
            acc.acc_product(&neg, gam.get(&[p, i, k]));
        }
        acc
    });
    Ok(Tensor::from_fn(n, 4, |x| {
        let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
        let mut acc = gl.get(&[0, 0]).zero_like();
        for m in 0..n {
            acc.acc_product(gl.get(&[l, m]), mixed.get(&[m, i, j, k]));
        }
        acc.scaled(-T::one())
    }))
}

/// `Ric_ik = g^{jl} R_ijkl` and `R = g^{ik} Ric_ik`.
pub fn ricci_scalar<T: Scalar>(riem: &Tensor<Jet<T>>, ginv: &Tensor<Jet<T>>) -> (Tensor<Jet<T>>, Jet<T>) {
    let n = riem.dim();
    let gi = truncated(ginv, order_of(riem));
    let ric = Tensor::from_fn(n, 2, |x| {
        let (i, k) = (x[0], x[1]);
        let mut acc = riem.get(&[0, 0, 0, 0]).zero_like();
        for j in 0..n {
            for l in 0..n {
                acc.acc_product(gi.get(&[j, l]), riem.get(&[i, j, k, l]));
            }
        }
        acc
    });
    let scal = trace(&ric, &gi);
    (ric, scal)
}

/// `g^{ij} T_ij` for a rank-2 field.
pub fn trace<T: Scalar, E: Element<T>>(t: &Tensor<E>, ginv: &Tensor<E>) -> E {
    let n = t.dim();
    let mut acc = t.get(&[0, 0]).zero_like();
    for i in 0..n {
        for j in 0..n {
            acc.acc_product(ginv.get(&[i, j]), t.get(&[i, j]));
        }
    }
    acc
}

/// Contracts the first two slots of a tensor field with `g^{ab}`.
pub fn trace_leading<T: Scalar, E: Element<T>>(t: &Tensor<E>, ginv: &Tensor<E>) -> Tensor<E> {
    let n = t.dim();
    assert!(t.rank() >= 2);
    Tensor::from_fn(n, t.rank() - 2, |rest| {
        let mut idx = vec![0usize; t.rank()];
        idx[2..].copy_from_slice(rest);
        let mut acc = t.data()[0].zero_like();
        for a in 0..n {
            for b in 0..n {
                idx[0] = a;
                idx[1] = b;
                acc.acc_product(ginv.get(&[a, b]), t.get(&idx));
            }
        }
        acc
    })
}

/// Gradient `∂_i f` of a scalar field.
pub fn gradient<T: Scalar>(f: &Jet<T>) -> Result<Tensor<Jet<T>>> {
    let n = f.nvars();
    let d: Result<Vec<_>> = (0..n).map(|i| f.derivative(i)).collect();
    Ok(Tensor::from_vec(n, 1, d?))
}

/// Covariant derivative of a covariant tensor field; the new index comes first:
/// `(∇T)_{a i₁…i_r} = ∂_a T_{i₁…i_r} − Σ_s Γ^d_{a i_s} T_{i₁…d…i_r}`.
pub fn covariant_derivative<T: Scalar>(t: &Tensor<Jet<T>>, gamma: &Tensor<Jet<T>>) -> Result<Tensor<Jet<T>>> {
    let n = t.dim();
    let r = t.rank();
    let ot = order_of(t);
    if ot == 0 {
        return Err(Error::InsufficientOrder { needed: 1, available: 0 });
    }
    let order = ot - 1;
    let partials: Vec<Tensor<Jet<T>>> = (0..n)
        .map(|a| {
            let d: Result<Vec<_>> = t.data().iter().map(|j| j.derivative(a)).collect();
            d.map(|v| Tensor::from_vec(n, r, v))
        })
        .collect::<Result<_>>()?;
    let tl = truncated(t, order);
    let gam = truncated(gamma, order);
    Ok(Tensor::from_fn(n, r + 1, |x| {
        let a = x[0];
        let rest = &x[1..];
        let mut acc = partials[a].get(rest).clone();
        let mut src = rest.to_vec();
        for s in 0..r {
            let is = rest[s];
            for d in 0..n {
                src[s] = d;
                let neg = gam.get(&[d, a, is]).scaled(-T::one());
                acc.acc_product(&neg, tl.get(&src));
            }
            src[s] = is;
        }
        acc
    }))
}

/// Hessian `∇²u_ij = ∂_i∂_j u − Γ^k_ij ∂_k u`.
pub fn hessian<T: Scalar>(u: &Jet<T>, gamma: &Tensor<Jet<T>>) -> Result<Tensor<Jet<T>>> {
    covariant_derivative(&gradient(u)?, gamma)
}

/// `Δu = g^{ij} ∇²u_ij`.
pub fn laplacian<T: Scalar>(u: &Jet<T>, gamma: &Tensor<Jet<T>>, ginv: &Tensor<Jet<T>>) -> Result<Jet<T>> {
    let h = hessian(u, gamma)?;
    Ok(trace(&h, ginv))
}

/// Rough Laplacian `g^{ab}∇_a∇_b T` of a covariant tensor field.
pub fn tensor_laplacian<T: Scalar>(
    t: &Tensor<Jet<T>>,
    gamma: &Tensor<Jet<T>>,
    ginv: &Tensor<Jet<T>>,
) -> Result<Tensor<Jet<T>>> {
    let dd = covariant_derivative(&covariant_derivative(t, gamma)?, gamma)?;
    Ok(trace_leading(&dd, ginv))
}

/// Schouten tensor `A = Ric − R/(2(n−1)) g`.
pub fn schouten<T: Scalar, E: Element<T>>(ric: &Tensor<E>, scal: &E, g: &Tensor<E>) -> Tensor<E> {
    let n = ric.dim();
    let c = -(T::from_usize_lossy(2 * (n - 1))).recip();
    let rs = scal.scaled(c);
    Tensor::from_fn(n, 2, |i| {
        let mut acc = ric.get(i).clone();
        acc.acc_product(&rs, g.get(i));
        acc
    })
}

/// Weyl tensor `W = Rm − (1/(n−2)) A⊙g`; identically zero for `n = 3`.
pub fn weyl<T: Scalar, E: Element<T>>(riem: &Tensor<E>, ric: &Tensor<E>, scal: &E, g: &Tensor<E>) -> Result<Tensor<E>> {
    let n = riem.dim();
    if n < 3 {
        return Err(Error::DimensionTooSmall { n, min: 3 });
    }
    if n == 3 {
        return Ok(riem.map(|e| e.zero_like()));
    }
    let a = schouten(ric, scal, g);
    let ag = kulkarni_nomizu(&a, g);
    let c = -(T::from_usize_lossy(n - 2)).recip();
    let mut w = riem.clone();
    for (wi, ai) in w.data_mut().iter_mut().zip(ag.data()) {
        wi.acc_scaled(ai, c);
    }
    Ok(w)
}

/// Cotton tensor
/// `C_ijk = ∇_iR_jk − ∇_jR_ik − (∇_iR g_jk − ∇_jR g_ik)/(2(n−1))`.
pub fn cotton<T: Scalar, E: Element<T>>(cov_ric: &Tensor<E>, d_scal: &Tensor<E>, g: &Tensor<E>) -> Result<Tensor<E>> {
    let n = cov_ric.dim();
    if n < 3 {
        return Err(Error::DimensionTooSmall { n, min: 3 });
    }
    let c = -(T::from_usize_lossy(2 * (n - 1))).recip();
    Ok(Tensor::from_fn(n, 3, |x| {
        let (i, j, k) = (x[0], x[1], x[2]);
        let mut acc = cov_ric.get(&[i, j, k]).minus(cov_ric.get(&[j, i, k]));
        let corr = d_scal.get(&[i]).times(g.get(&[j, k])).minus(&d_scal.get(&[j]).times(g.get(&[i, k])));
        acc.acc_scaled(&corr, c);
        acc
    }))
}

/// `(div W)_ijk = g^{al} ∇_a W_ijkl` from the covariant derivative of `W`.
pub fn weyl_divergence<T: Scalar, E: Element<T>>(cov_weyl: &Tensor<E>, ginv: &Tensor<E>) -> Tensor<E> {
    let n = cov_weyl.dim();
    Tensor::from_fn(n, 3, |x| {
        let mut acc = cov_weyl.data()[0].zero_like();
        for a in 0..n {
            for l in 0..n {
                acc.acc_product(ginv.get(&[a, l]), cov_weyl.get(&[a, x[0], x[1], x[2], l]));
            }
        }
        acc
    })
}
