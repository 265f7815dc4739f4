//! Pointwise quasi-Einstein identities in orthonormal-frame components.
//!
//! Every builder returns an [`Identity`] whose terms carry the printed
//! coefficients, so a caller can perturb one coefficient and watch the
//! residual move.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{kulkarni_nomizu, Tensor};
use crate::verify::identity::{Identity, Term};
use crate::verify::point::PointData;

/// Parameters shared by every identity of one instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QeConstants<T> {
    pub n: usize,
    pub m: T,
    pub lambda: T,
    /// `((n−1)λ − R)/(m−1)` for the instance's constant `R`.
    pub rho: T,
    /// Integrability constant fixed at the domain midpoint.
    pub mu: T,
}

fn lit<T: Scalar>(x: f64) -> T {
    T::lit(x)
}

fn delta<T: Scalar>(i: usize, j: usize) -> T {
    if i == j {
        T::one()
    } else {
        T::zero()
    }
}

fn t1<T: Scalar>(n: usize, f: impl Fn(usize) -> T) -> Tensor<T> {
    Tensor::from_fn(n, 1, |x| f(x[0]))
}

fn t2<T: Scalar>(n: usize, f: impl Fn(usize, usize) -> T) -> Tensor<T> {
    Tensor::from_fn(n, 2, |x| f(x[0], x[1]))
}

fn t3<T: Scalar>(n: usize, f: impl Fn(usize, usize, usize) -> T) -> Tensor<T> {
    Tensor::from_fn(n, 3, |x| f(x[0], x[1], x[2]))
}

fn sum<T: Scalar>(n: usize, f: impl Fn(usize) -> T) -> T {
    (0..n).map(f).sum()
}

fn need<'a, T: Scalar, V>(p: &PointData<T>, v: &'a Option<V>, order: usize) -> Result<&'a V> {
    v.as_ref().ok_or(Error::InsufficientOrder { needed: order, available: p.metric_order })
}

/// `A(v)_i = A_ij v_j`
fn apply<T: Scalar>(a: &Tensor<T>, v: &Tensor<T>) -> Tensor<T> {
    let n = v.dim();
    t1(n, |i| sum(n, |j| a.at(&[i, j]) * v.at(&[j])))
}

fn quad<T: Scalar>(a: &Tensor<T>, v: &Tensor<T>) -> T {
    let n = v.dim();
    sum(n, |i| sum(n, |j| v.at(&[i]) * a.at(&[i, j]) * v.at(&[j])))
}

fn dot<T: Scalar>(a: &Tensor<T>, b: &Tensor<T>) -> T {
    a.data().iter().zip(b.data()).map(|(&x, &y)| x * y).sum()
}

fn identity_matrix<T: Scalar>(n: usize) -> Tensor<T> {
    Tensor::identity(n)
}

/// `P = Ric − ρ g` in frame components.
pub fn p_tensor<T: Scalar>(p: &PointData<T>, rho: T) -> Tensor<T> {
    let n = p.n;
    t2(n, |i, j| p.ric.at(&[i, j]) - rho * delta::<T>(i, j))
}

/// `Ric − (R/n) g`
pub fn traceless_ricci<T: Scalar>(p: &PointData<T>) -> Tensor<T> {
    let n = p.n;
    let nn = T::from_usize_lossy(n);
    t2(n, |i, j| p.ric.at(&[i, j]) - p.scal / nn * delta::<T>(i, j))
}

/// `((n−1)λ − R)/(m−1)` at the point's own scalar curvature.
pub fn pointwise_rho<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> T {
    (T::from_usize_lossy(c.n - 1) * c.lambda - p.scal) / (c.m - T::one())
}

/// `Q = Rm + (1/m) P⊙g + ((n−m)λ − R)/(2m(m−1)) g⊙g`
pub fn q_tensor<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>, ptensor: &Tensor<T>) -> Tensor<T> {
    let n = p.n;
    let g = identity_matrix::<T>(n);
    let pg = kulkarni_nomizu(ptensor, &g);
    let gg = kulkarni_nomizu(&g, &g);
    let nn = T::from_usize_lossy(n);
    let cgg = ((nn - c.m) * c.lambda - p.scal) / (lit::<T>(2.0) * c.m * (c.m - T::one()));
    p.rm.add(&pg.scale(T::one() / c.m)).add(&gg.scale(cgg))
}

/// `A_ijkl v_l`
fn contract_last<T: Scalar>(a: &Tensor<T>, v: &Tensor<T>) -> Tensor<T> {
    let n = v.dim();
    t3(n, |i, j, k| sum(n, |l| a.at(&[i, j, k, l]) * v.at(&[l])))
}

/// `a_i g_jk − a_j g_ik`
fn wedge_g<T: Scalar>(a: &Tensor<T>) -> Tensor<T> {
    let n = a.dim();
    t3(n, |i, j, k| a.at(&[i]) * delta::<T>(j, k) - a.at(&[j]) * delta::<T>(i, k))
}

/// `a_i S_jk − a_j S_ik`
fn wedge<T: Scalar>(a: &Tensor<T>, s: &Tensor<T>) -> Tensor<T> {
    let n = a.dim();
    t3(n, |i, j, k| a.at(&[i]) * s.at(&[j, k]) - a.at(&[j]) * s.at(&[i, k]))
}

/// `D_ijk − D_jik` for a 3-tensor whose first index is the derivative.
fn curl<T: Scalar>(d: &Tensor<T>) -> Tensor<T> {
    let n = d.dim();
    t3(n, |i, j, k| d.at(&[i, j, k]) - d.at(&[j, i, k]))
}

/// `∇²u = (u/m)(Ric − λg)`
pub fn defining_equation<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let n = p.n;
    Ok(Identity::new(
        vec![Term::new("hessian", T::one(), p.hess_u.clone())],
        vec![
            Term::new("ricci", T::one() / c.m, p.ric.scale(p.u)),
            Term::new("metric", -c.lambda / c.m, identity_matrix::<T>(n).scale(p.u)),
        ],
    ))
}

/// `Δu = (u/m)(R − nλ)`
pub fn trace_equation<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let nn = T::from_usize_lossy(c.n);
    Ok(Identity::new(
        vec![Term::scalar("laplacian", T::one(), p.lap_u)],
        vec![
            Term::scalar("scalar", T::one() / c.m, p.u * p.scal),
            Term::scalar("n_lambda", -nn * c.lambda / c.m, p.u),
        ],
    ))
}

/// `½u∇R = −(m−1)Ric(∇u) − (R − (n−1)λ)∇u`
pub fn scalar_gradient<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let d_scal = need(p, &p.d_scal, 3)?;
    let n1 = T::from_usize_lossy(c.n - 1);
    Ok(Identity::new(
        vec![Term::new("u_grad_scal", lit(0.5), d_scal.scale(p.u))],
        vec![
            Term::new("ric_grad_u", -(c.m - T::one()), apply(&p.ric, &p.du)),
            Term::new("grad_u", -T::one(), p.du.scale(p.scal - n1 * c.lambda)),
        ],
    ))
}

/// `(u²/m)(R − λn) + (m−1)|∇u|² = −λu² + μ`
pub fn integrability<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let nn = T::from_usize_lossy(c.n);
    Ok(Identity::new(
        vec![
            Term::scalar("u2_scal", T::one() / c.m, p.u * p.u * (p.scal - c.lambda * nn)),
            Term::scalar("grad_u2", c.m - T::one(), p.grad_u2),
        ],
        vec![Term::scalar("u2", -c.lambda, p.u * p.u), Term::scalar("mu", T::one(), c.mu)],
    ))
}

/// `½ΔR = −((m+2)/2u)⟨∇u,∇R⟩ − ((m−1)/m)|Ric̊|² − ((n+m−1)/mn)(R−nλ)(R − n(n−1)λ/(n+m−1))`
pub fn scalar_laplacian<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let lap = *need(p, &p.lap_scal, 4)?;
    let d_scal = need(p, &p.d_scal, 3)?;
    let (n, m, l) = (T::from_usize_lossy(c.n), c.m, c.lambda);
    let one = T::one();
    let poly = (p.scal - n * l) * (p.scal - n * (n - one) * l / (n + m - one));
    Ok(Identity::new(
        vec![Term::scalar("lap_scal", lit(0.5), lap)],
        vec![
            Term::scalar("grad_u_grad_scal", -(m + lit(2.0)) / lit(2.0), dot(&p.du, d_scal) / p.u),
            Term::scalar("traceless_ric", -(m - one) / m, traceless_ricci(p).norm_sq()),
            Term::scalar("scalar_poly", -(n + m - one) / (m * n), poly),
        ],
    ))
}

/// `u(∇_iR_jk − ∇_jR_ik) = mR_ijkl∇_lu + λ(∇_iu g_jk − ∇_ju g_ik) − (∇_iu R_jk − ∇_ju R_ik)`
pub fn ricci_curl<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let cov = need(p, &p.cov_ric, 3)?;
    Ok(Identity::new(
        vec![Term::new("u_curl_ric", T::one(), curl(cov).scale(p.u))],
        vec![
            Term::new("rm_grad_u", c.m, contract_last(&p.rm, &p.du)),
            Term::new("lambda_grad_u_g", c.lambda, wedge_g(&p.du)),
            Term::new("grad_u_ric", -T::one(), wedge(&p.du, &p.ric)),
        ],
    ))
}

/// `|Ric̊|² = −((m+n−1)/(n(m−1)))(R−nλ)(R − n(n−1)λ/(m+n−1))`
pub fn traceless_ricci_norm<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let (n, m, l) = (T::from_usize_lossy(c.n), c.m, c.lambda);
    let one = T::one();
    let poly = (p.scal - n * l) * (p.scal - n * (n - one) * l / (m + n - one));
    Ok(Identity::new(
        vec![Term::scalar("traceless_ric", one, traceless_ricci(p).norm_sq())],
        vec![Term::scalar("scalar_poly", -(m + n - one) / (n * (m - one)), poly)],
    ))
}

/// `|∇u|² = μ/(m−1) − ((R + (m−n)λ)/(m(m−1))) u²`
pub fn transnormal<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let (n, m) = (T::from_usize_lossy(c.n), c.m);
    let one = T::one();
    Ok(Identity::new(
        vec![Term::scalar("grad_u2", one, p.grad_u2)],
        vec![
            Term::scalar("mu", one / (m - one), c.mu),
            Term::scalar("u2", -one / (m * (m - one)), (p.scal + (m - n) * c.lambda) * p.u * p.u),
        ],
    ))
}

/// `Ric(∇u) = (((n−1)λ − R)/(m−1)) ∇u`
pub fn ricci_on_gradient<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let n1 = T::from_usize_lossy(c.n - 1);
    Ok(Identity::new(
        vec![Term::new("ric_grad_u", T::one(), apply(&p.ric, &p.du))],
        vec![Term::new("grad_u", T::one() / (c.m - T::one()), p.du.scale(n1 * c.lambda - p.scal))],
    ))
}

/// `P(∇u) = 0`
pub fn p_annihilates_gradient<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let n = p.n;
    Ok(Identity::new(
        vec![Term::new("p_grad_u", T::one(), apply(&p_tensor(p, c.rho), &p.du))],
        vec![Term::new("zero", T::one(), Tensor::zeros(n, 1))],
    ))
}

/// The auxiliary 3-tensor written with the full Ricci tensor.
pub fn t_tensor_ricci<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Tensor<T>> {
    let d_scal = need(p, &p.d_scal, 3)?;
    let (n, m, l) = (T::from_usize_lossy(c.n), c.m, c.lambda);
    let one = T::one();
    let two = lit::<T>(2.0);
    if c.n < 3 {
        return Err(Error::DimensionTooSmall { n: c.n, min: 3 });
    }
    let ric_du = apply(&p.ric, &p.du);
    let a = (m + n - two) / (n - two);
    let b = m / (n - two);
    let cc = ((n - one) * (n - two) * l + m * p.scal) / ((n - one) * (n - two));
    let d = p.u / (two * (n - one));
    Ok(t3(c.n, |i, j, k| {
        a * (p.ric.at(&[i, k]) * p.du.at(&[j]) - p.ric.at(&[j, k]) * p.du.at(&[i]))
            + b * (ric_du.at(&[j]) * delta::<T>(i, k) - ric_du.at(&[i]) * delta::<T>(j, k))
            + cc * (p.du.at(&[i]) * delta::<T>(j, k) - p.du.at(&[j]) * delta::<T>(i, k))
            - d * (d_scal.at(&[i]) * delta::<T>(j, k) - d_scal.at(&[j]) * delta::<T>(i, k))
    }))
}

/// The auxiliary 3-tensor written with the traceless Ricci tensor.
pub fn t_tensor_traceless<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Tensor<T>> {
    let d_scal = need(p, &p.d_scal, 3)?;
    t_tensor_from_parts(c, p.scal, p.u, &traceless_ricci(p), &p.du, d_scal)
}

/// The traceless form of the auxiliary tensor from raw frame components.
pub fn t_tensor_from_parts<T: Scalar>(
    c: &QeConstants<T>,
    scal: T,
    u: T,
    traceless: &Tensor<T>,
    du: &Tensor<T>,
    d_scal: &Tensor<T>,
) -> Result<Tensor<T>> {
    let (n, m, l) = (T::from_usize_lossy(c.n), c.m, c.lambda);
    let one = T::one();
    let two = lit::<T>(2.0);
    if c.n < 3 {
        return Err(Error::DimensionTooSmall { n: c.n, min: 3 });
    }
    let e = traceless;
    let e_du = apply(e, du);
    let a = (m + n - two) / (n - two);
    let b = m / (n - two);
    let cc = (n * (n - one) * l - (m + n - one) * scal) / (n * (n - one));
    let d = u / (two * (n - one));
    Ok(t3(c.n, |i, j, k| {
        a * (e.at(&[i, k]) * du.at(&[j]) - e.at(&[j, k]) * du.at(&[i]))
            + b * (e_du.at(&[j]) * delta::<T>(i, k) - e_du.at(&[i]) * delta::<T>(j, k))
            + cc * (du.at(&[i]) * delta::<T>(j, k) - du.at(&[j]) * delta::<T>(i, k))
            - d * (d_scal.at(&[i]) * delta::<T>(j, k) - d_scal.at(&[j]) * delta::<T>(i, k))
    }))
}

/// `uC_ijk = mW_ijkl∇_lu + T_ijk`
pub fn cotton_weyl_decomposition<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let cotton = need(p, &p.cotton, 3)?;
    let w = p.weyl.as_ref().ok_or(Error::DimensionTooSmall { n: c.n, min: 3 })?;
    Ok(Identity::new(
        vec![Term::new("u_cotton", T::one(), cotton.scale(p.u))],
        vec![
            Term::new("weyl_grad_u", c.m, contract_last(w, &p.du)),
            Term::new("t", T::one(), t_tensor_ricci(p, c)?),
        ],
    ))
}

/// The two printed forms of the auxiliary tensor agree.
pub fn t_forms_agree<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    Ok(Identity::new(
        vec![Term::new("t_ricci", T::one(), t_tensor_ricci(p, c)?)],
        vec![Term::new("t_traceless", T::one(), t_tensor_traceless(p, c)?)],
    ))
}

/// `T ≡ 0`
pub fn t_vanishes<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let t = t_tensor_ricci(p, c)?;
    let zero = Tensor::zeros(c.n, 3);
    Ok(Identity::new(vec![Term::new("t", T::one(), t)], vec![Term::new("zero", T::one(), zero)]))
}

/// Raw inputs of the `|T|²` identity, usable without a manifold.
#[derive(Clone, Debug)]
pub struct TNormInputs<T> {
    pub n: usize,
    pub m: T,
    pub lambda: T,
    pub scal: T,
    /// Traceless Ricci tensor.
    pub traceless: Tensor<T>,
    pub du: Tensor<T>,
    pub t: Tensor<T>,
}

/// `Ric̊_ik T_ijk ∇_ju`
pub fn t_norm_contraction_lhs<T: Scalar>(x: &TNormInputs<T>) -> T {
    let n = x.n;
    sum(n, |i| sum(n, |j| sum(n, |k| x.traceless.at(&[i, k]) * x.t.at(&[i, j, k]) * x.du.at(&[j]))))
}

/// `((m+n−2)/(n−2))|Ric̊|²|∇u|² − ((2m+n−2)/(n−2))Ric̊²(∇u,∇u) + (n(n−1)λ − (m+n−1)R)²|∇u|²/(n²(n−1)(m−1))`
pub fn t_norm_contraction_rhs<T: Scalar>(x: &TNormInputs<T>) -> T {
    let (n, m) = (T::from_usize_lossy(x.n), x.m);
    let (one, two) = (T::one(), lit::<T>(2.0));
    let du2 = x.du.norm_sq();
    let e2 = Tensor::matmul(&x.traceless, &x.traceless);
    let k = n * (n - one) * x.lambda - (m + n - one) * x.scal;
    (m + n - two) / (n - two) * x.traceless.norm_sq() * du2 - (two * m + n - two) / (n - two) * quad(&e2, &x.du)
        + k * k / (n * n * (n - one) * (m - one)) * du2
}

/// `((n−2)/(2(m+n−2)))|T|²`
pub fn t_norm_square<T: Scalar>(x: &TNormInputs<T>) -> T {
    let (n, m) = (T::from_usize_lossy(x.n), x.m);
    let two = lit::<T>(2.0);
    (n - two) / (two * (m + n - two)) * x.t.norm_sq()
}

fn t_norm_inputs<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<TNormInputs<T>> {
    Ok(TNormInputs {
        n: c.n,
        m: c.m,
        lambda: c.lambda,
        scal: p.scal,
        traceless: traceless_ricci(p),
        du: p.du.clone(),
        t: t_tensor_ricci(p, c)?,
    })
}

/// First equality of the `|T|²` identity.
pub fn t_norm_contraction<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let x = t_norm_inputs(p, c)?;
    Ok(Identity::new(
        vec![Term::scalar("contraction", T::one(), t_norm_contraction_lhs(&x))],
        vec![Term::scalar("expansion", T::one(), t_norm_contraction_rhs(&x))],
    ))
}

/// Second equality of the `|T|²` identity.
pub fn t_norm_square_identity<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let x = t_norm_inputs(p, c)?;
    Ok(Identity::new(
        vec![Term::scalar("expansion", T::one(), t_norm_contraction_rhs(&x))],
        vec![Term::scalar("t_norm", T::one(), t_norm_square(&x))],
    ))
}

/// `u(∇_iP_jk − ∇_jP_ik) = mQ_ijkl∇_lu + ½(g⊙g)_ijkl P_sl∇_su` with `ρ` taken pointwise.
pub fn p_curl_general<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let cov = need(p, &p.cov_ric, 3)?;
    let d_scal = need(p, &p.d_scal, 3)?;
    let n = c.n;
    let rho = pointwise_rho(p, c);
    let ptensor = p_tensor(p, rho);
    // ∇_i ρ = −∇_i R/(m−1)
    let d_rho = d_scal.scale(-T::one() / (c.m - T::one()));
    let cov_p = t3(n, |i, j, k| cov.at(&[i, j, k]) - d_rho.at(&[i]) * delta::<T>(j, k));
    let g = identity_matrix::<T>(n);
    let gg = kulkarni_nomizu(&g, &g);
    let p_du = apply(&ptensor, &p.du);
    Ok(Identity::new(
        vec![Term::new("u_curl_p", T::one(), curl(&cov_p).scale(p.u))],
        vec![
            Term::new("q_grad_u", c.m, contract_last(&q_tensor(p, c, &ptensor), &p.du)),
            Term::new("gg_p_grad_u", lit(0.5), contract_last(&gg, &p_du)),
        ],
    ))
}

/// `(u/m)(∇_iP_jk − ∇_jP_ik) = Q_ijkl∇_lu` for constant scalar curvature.
pub fn p_curl<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let cov = need(p, &p.cov_ric, 3)?;
    let ptensor = p_tensor(p, c.rho);
    Ok(Identity::new(
        vec![Term::new("u_curl_p", T::one() / c.m, curl(cov).scale(p.u))],
        vec![Term::new("q_grad_u", T::one(), contract_last(&q_tensor(p, c, &ptensor), &p.du))],
    ))
}

/// `(u/m)∇_iP_jk∇_iu = (u/m)²((λ−ρ)P_jk − P_ik P_ij) + Q_ijkl∇_lu∇_iu`
pub fn p_gradient_gradient<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let cov = need(p, &p.cov_ric, 3)?;
    let n = c.n;
    let ptensor = p_tensor(p, c.rho);
    let q = q_tensor(p, c, &ptensor);
    let p2 = Tensor::matmul(&ptensor, &ptensor);
    let lhs = t2(n, |j, k| p.u * sum(n, |i| cov.at(&[i, j, k]) * p.du.at(&[i])));
    let alg = t2(n, |j, k| p.u * p.u * ((c.lambda - c.rho) * ptensor.at(&[j, k]) - p2.at(&[j, k])));
    let qdd = t2(n, |j, k| sum(n, |i| sum(n, |l| q.at(&[i, j, k, l]) * p.du.at(&[l]) * p.du.at(&[i]))));
    Ok(Identity::new(
        vec![Term::new("u_grad_p_grad_u", T::one() / c.m, lhs)],
        vec![Term::new("p_terms", T::one() / (c.m * c.m), alg), Term::new("q_grad_u_grad_u", T::one(), qdd)],
    ))
}

/// `∇_iP_sj∇_su = −(u/m)P²_ij + ((λ−ρ)/m)uP_ij`
pub fn p_gradient_contraction<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let cov = need(p, &p.cov_ric, 3)?;
    let n = c.n;
    let ptensor = p_tensor(p, c.rho);
    let p2 = Tensor::matmul(&ptensor, &ptensor);
    let lhs = t2(n, |i, j| sum(n, |s| cov.at(&[i, s, j]) * p.du.at(&[s])));
    Ok(Identity::new(
        vec![Term::new("grad_p_grad_u", T::one(), lhs)],
        vec![
            Term::new("p_squared", -T::one() / c.m, p2.scale(p.u)),
            Term::new("p", (c.lambda - c.rho) / c.m, ptensor.scale(p.u)),
        ],
    ))
}

/// `W_ijkl∇_lu = 0`
pub fn weyl_gradient<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let w = p.weyl.as_ref().ok_or(Error::DimensionTooSmall { n: c.n, min: 3 })?;
    Ok(Identity::new(
        vec![Term::new("weyl_grad_u", T::one(), contract_last(w, &p.du))],
        vec![Term::new("zero", T::one(), Tensor::zeros(c.n, 3))],
    ))
}

/// The Laplacian of the Ricci tensor expanded along the defining system.
pub fn laplacian_ricci<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let cov = need(p, &p.cov_ric, 3)?;
    let lap = need(p, &p.lap_ric, 4)?;
    let hess_r = need(p, &p.hess_scal, 4)?;
    let d_scal = need(p, &p.d_scal, 3)?;
    let n = c.n;
    let (nn, m, l) = (T::from_usize_lossy(n), c.m, c.lambda);
    let (one, two) = (T::one(), lit::<T>(2.0));
    let u = p.u;
    let a = t2(n, |i, k| sum(n, |s| cov.at(&[i, s, k]) * p.du.at(&[s])));
    let b = t2(n, |i, k| sum(n, |s| cov.at(&[k, i, s]) * p.du.at(&[s])));
    let gu_gr = t2(n, |i, k| p.du.at(&[i]) * d_scal.at(&[k]));
    let ric2 = Tensor::matmul(&p.ric, &p.ric);
    let rm_ric = t2(n, |i, k| sum(n, |j| sum(n, |s| p.rm.at(&[j, i, k, s]) * p.ric.at(&[j, s]))));
    let drift = t2(n, |i, k| sum(n, |s| cov.at(&[s, i, k]) * p.du.at(&[s])));
    Ok(Identity::new(
        vec![Term::new("u_lap_ric", one, lap.scale(u))],
        vec![
            Term::new("grad_ric_grad_u", one, a),
            Term::new("m_grad_ric_grad_u", m, b),
            Term::new("hess_scal", lit(0.5), hess_r.scale(u)),
            Term::new("grad_u_grad_scal", lit(0.5), gu_gr),
            Term::new("ric_squared", (m + one) / m, ric2.scale(u)),
            Term::new("rm_ric", two, rm_ric.scale(u)),
            Term::new("drift", -(m + two), drift),
            Term::new("ric", -one / m, p.ric.scale(u * (p.scal - (m + nn - two) * l))),
            Term::new("metric", l / m, identity_matrix::<T>(n).scale(u * (p.scal - (nn - one) * l))),
        ],
    ))
}

/// `A_ij B_jl C_li`
fn trace3<T: Scalar>(a: &Tensor<T>, b: &Tensor<T>, c: &Tensor<T>) -> T {
    a.matmul(b).matmul(c).trace()
}

/// `uΔTr(Ric³) + (m+2)⟨∇u, ∇Tr(Ric³)⟩` expanded, for constant scalar curvature.
pub fn ricci_cube_trace<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let cov = need(p, &p.cov_ric, 3)?;
    let f = need(p, &p.tr_ric3, 4)?;
    let n = c.n;
    let (nn, m, l) = (T::from_usize_lossy(n), c.m, c.lambda);
    let (one, two, three, six) = (T::one(), lit::<T>(2.0), lit::<T>(3.0), lit::<T>(6.0));
    let u = p.u;
    let ric = &p.ric;
    let ric2 = ric.matmul(ric);
    // ∇_iR_sj R_jl R_il ∇_su
    let a = sum(n, |i| {
        sum(n, |s| {
            sum(n, |j| sum(n, |ll| cov.at(&[i, s, j]) * ric.at(&[j, ll]) * ric.at(&[i, ll]) * p.du.at(&[s])))
        })
    });
    // R_ds R_dijs R_jl R_il
    let b = sum(n, |d| {
        sum(n, |s| {
            sum(n, |i| {
                sum(n, |j| ric.at(&[d, s]) * p.rm.at(&[d, i, j, s]) * sum(n, |ll| ric.at(&[j, ll]) * ric.at(&[i, ll])))
            })
        })
    });
    // ∇_sR_ij ∇_sR_jl R_il
    let e = sum(n, |s| {
        sum(n, |i| sum(n, |j| sum(n, |ll| cov.at(&[s, i, j]) * cov.at(&[s, j, ll]) * ric.at(&[i, ll]))))
    });
    let tr3 = trace3(ric, ric, ric);
    Ok(Identity::new(
        vec![
            Term::scalar("u_lap_tr_ric3", one, u * f.lap),
            Term::scalar("drift", m + two, dot(&p.du, &f.grad)),
        ],
        vec![
            Term::scalar("grad_ric_ric_ric", three * (m + one), a),
            Term::scalar("ric_sq_sq", three * (m + one) / m, u * ric2.norm_sq()),
            Term::scalar("rm_ric3", six, u * b),
            Term::scalar("tr_ric3", -three / m, u * (p.scal - (m + nn - two) * l) * tr3),
            Term::scalar("ric_norm", three * l / m, u * (p.scal - (nn - one) * l) * ric.norm_sq()),
            Term::scalar("grad_ric_sq", six, u * e),
        ],
    ))
}

/// Contractions of `P` with `∇P`, `∇u` and `Rm` used by the `Tr(P³)` identities.
struct PContractions<T> {
    /// `∇_iP_sj P_jl P_il ∇_su`
    grad_p_p_p: T,
    /// `∇_iP_sj P_ij ∇_su`
    grad_p_p: T,
    /// `∇_sP_ij ∇_sP_jl P_il`
    grad_p_sq_p: T,
    /// `|∇P|²`
    grad_p_sq: T,
    /// `P_ds R_dijs P_jl P_il`
    p_rm_p_p: T,
    /// `P_ds R_dijs P_ij`
    p_rm_p: T,
    tr_p: T,
    p_norm: T,
    tr_p3: T,
    tr_p4: T,
}

fn p_contractions<T: Scalar>(p: &PointData<T>, ptensor: &Tensor<T>, cov: &Tensor<T>) -> PContractions<T> {
    let n = p.n;
    let pp = ptensor;
    let p2 = pp.matmul(pp);
    PContractions {
        grad_p_p_p: sum(n, |i| {
            sum(n, |s| sum(n, |j| cov.at(&[i, s, j]) * p2.at(&[j, i]) * p.du.at(&[s])))
        }),
        grad_p_p: sum(n, |i| sum(n, |s| sum(n, |j| cov.at(&[i, s, j]) * pp.at(&[i, j]) * p.du.at(&[s])))),
        grad_p_sq_p: sum(n, |s| {
            sum(n, |i| sum(n, |j| sum(n, |l| cov.at(&[s, i, j]) * cov.at(&[s, j, l]) * pp.at(&[i, l]))))
        }),
        grad_p_sq: cov.norm_sq(),
        p_rm_p_p: sum(n, |d| {
            sum(n, |s| sum(n, |i| sum(n, |j| pp.at(&[d, s]) * p.rm.at(&[d, i, j, s]) * p2.at(&[j, i]))))
        }),
        p_rm_p: sum(n, |d| {
            sum(n, |s| sum(n, |i| sum(n, |j| pp.at(&[d, s]) * p.rm.at(&[d, i, j, s]) * pp.at(&[i, j]))))
        }),
        tr_p: pp.trace(),
        p_norm: pp.norm_sq(),
        tr_p3: p2.matmul(pp).trace(),
        tr_p4: p2.norm_sq(),
    }
}

/// `uΔTr(P³)` expanded, for constant scalar curvature and `m > 1`.
pub fn p_cube_trace<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let cov = need(p, &p.cov_ric, 3)?;
    let f = need(p, &p.tr_p3, 4)?;
    let n = c.n;
    let (nn, m, l, rho) = (T::from_usize_lossy(n), c.m, c.lambda, c.rho);
    let (one, two, three, six) = (T::one(), lit::<T>(2.0), lit::<T>(3.0), lit::<T>(6.0));
    let u = p.u;
    let k = p_contractions(p, &p_tensor(p, rho), cov);
    Ok(Identity::new(
        vec![Term::scalar("u_lap_tr_p3", one, u * f.lap)],
        vec![
            Term::scalar("grad_p_p_p", three * (m + one), k.grad_p_p_p),
            Term::scalar("grad_p_p", six * (m + one) * rho, k.grad_p_p),
            Term::scalar("grad_p_sq_p", six, u * k.grad_p_sq_p),
            Term::scalar("grad_p_sq", six * rho, u * k.grad_p_sq),
            Term::scalar("p_rm_p_p", six, u * k.p_rm_p_p),
            Term::scalar("p_rm_p", lit::<T>(12.0) * rho, u * k.p_rm_p),
            Term::scalar("drift", -(m + two), dot(&f.grad, &p.du)),
            Term::scalar("tr_p4", three * (m + one) / m, u * k.tr_p4),
            Term::scalar("tr_p3", three / m * (three * (m + one) * rho + (m - one) * l), u * k.tr_p3),
            Term::scalar("p_norm", three * rho / m * ((m + three) * rho + two * (m - one) * l), u * k.p_norm),
            Term::scalar("tr_p", three * rho * rho / m * ((m + one) * rho + (m - one) * l), u * k.tr_p),
            Term::scalar("constant", six * rho * rho * rho * ((m + nn - one) * rho - (nn - one) * l), u),
        ],
    ))
}

/// Scalar curvature required by the four-dimensional identities: `2(m+2)λ/(m+1)`.
pub fn dim4_scalar<T: Scalar>(m: T, lambda: T) -> T {
    lit::<T>(2.0) * (m + lit(2.0)) * lambda / (m + T::one())
}

/// Rejects instances outside the hypotheses of the four-dimensional identities.
pub fn require_dim4<T: Scalar>(c: &QeConstants<T>, scal: T) -> Result<()> {
    if c.n != 4 {
        return Err(Error::UnsupportedDimension { n: c.n, what: "four-dimensional identities".into() });
    }
    let expected = dim4_scalar(c.m, c.lambda);
    if (scal - expected).abs() > lit::<T>(1e-6) * expected.abs() {
        return Err(Error::WrongScalarCurvature { found: scal.as_f64(), expected: expected.as_f64() });
    }
    Ok(())
}

fn weighted_lhs<T: Scalar>(u: T, m: T, f_lap: T, f_grad: &Tensor<T>, du: &Tensor<T>) -> Vec<Term<T>> {
    vec![Term::scalar("u_lap", T::one(), u * f_lap), Term::scalar("drift", m + lit(2.0), dot(f_grad, du))]
}

/// `uΔTr(P³) + (m+2)⟨∇Tr(P³), ∇u⟩` in four dimensions.
pub fn p_cube_drift_laplacian<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    require_dim4(c, p.scal)?;
    let cov = need(p, &p.cov_ric, 3)?;
    let f = need(p, &p.tr_p3, 4)?;
    let (m, l, rho) = (c.m, c.lambda, c.rho);
    let (one, six) = (T::one(), lit::<T>(6.0));
    let u = p.u;
    let k = p_contractions(p, &p_tensor(p, rho), cov);
    Ok(Identity::new(
        weighted_lhs(u, m, f.lap, &f.grad, &p.du),
        vec![
            Term::scalar("tr_p3", six * l, u * k.tr_p3),
            Term::scalar("p_norm", six * l * l / (m + one), u * k.p_norm),
            Term::scalar("grad_p_sq_p", six, u * k.grad_p_sq_p),
            Term::scalar("grad_p_sq", six * rho, u * k.grad_p_sq),
            Term::scalar("p_rm_p_p", six, u * k.p_rm_p_p),
            Term::scalar("p_rm_p", lit::<T>(12.0) * rho, u * k.p_rm_p),
            Term::scalar("constant", lit::<T>(12.0) * rho.powi(4) * m * m * (m + one), u),
        ],
    ))
}

/// `uL_{m+2}Tr(P³) = 8(m+1)ρuTr(P³) + 6u∇_sP_ij∇_sP_jlP_il − 3mρu|∇P|² − 16m³(m+1)ρ⁴u`
pub fn p_cube_weighted<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    require_dim4(c, p.scal)?;
    let cov = need(p, &p.cov_ric, 3)?;
    let f = need(p, &p.tr_p3, 4)?;
    let (m, rho) = (c.m, c.rho);
    let one = T::one();
    let u = p.u;
    let k = p_contractions(p, &p_tensor(p, rho), cov);
    Ok(Identity::new(
        weighted_lhs(u, m, f.lap, &f.grad, &p.du),
        vec![
            Term::scalar("tr_p3", lit::<T>(8.0) * (m + one) * rho, u * k.tr_p3),
            Term::scalar("grad_p_sq_p", lit(6.0), u * k.grad_p_sq_p),
            Term::scalar("grad_p_sq", -lit::<T>(3.0) * m * rho, u * k.grad_p_sq),
            Term::scalar("constant", -lit::<T>(16.0) * m.powi(3) * (m + one) * rho.powi(4), u),
        ],
    ))
}

/// The lower bound obtained from the previous identity by dropping the
/// nonnegative `∇P∇P P` term; check with [`Identity::shortfall`].
pub fn p_cube_weighted_bound<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    let mut id = p_cube_weighted(p, c)?;
    id.rhs.retain(|t| t.label != "grad_p_sq_p");
    Ok(id)
}

/// `uP_ikR_jiksP_js = −(u/2)|∇P|² − (m+1)ρu|P|²`
pub fn p_curvature_contraction<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    require_dim4(c, p.scal)?;
    let cov = need(p, &p.cov_ric, 3)?;
    let n = c.n;
    let ptensor = p_tensor(p, c.rho);
    let lhs = sum(n, |i| {
        sum(n, |k| {
            sum(n, |j| sum(n, |s| ptensor.at(&[i, k]) * p.rm.at(&[j, i, k, s]) * ptensor.at(&[j, s])))
        })
    });
    Ok(Identity::new(
        vec![Term::scalar("p_rm_p", T::one(), p.u * lhs)],
        vec![
            Term::scalar("grad_p_sq", -lit::<T>(0.5), p.u * cov.norm_sq()),
            Term::scalar("p_norm", -(c.m + T::one()) * c.rho, p.u * ptensor.norm_sq()),
        ],
    ))
}

/// `Tr(P) = 2mρ`
pub fn p_trace<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    require_dim4(c, p.scal)?;
    Ok(Identity::new(
        vec![Term::scalar("tr_p", T::one(), p_tensor(p, c.rho).trace())],
        vec![Term::scalar("two_m_rho", lit::<T>(2.0) * c.m, c.rho)],
    ))
}

/// `|P|² = 2m²ρ²`
pub fn p_norm<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    require_dim4(c, p.scal)?;
    Ok(Identity::new(
        vec![Term::scalar("p_norm", T::one(), p_tensor(p, c.rho).norm_sq())],
        vec![Term::scalar("two_m2_rho2", lit::<T>(2.0) * c.m * c.m, c.rho * c.rho)],
    ))
}

/// `uL_{m+2}h ≥ 2(9m+7)ρuh` for `h = |∇u|²(Tr(P³) − 2m³ρ³)`; check with
/// [`Identity::shortfall`].
pub fn h_weighted_bound<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<Identity<T>> {
    require_dim4(c, p.scal)?;
    let h = need(p, &p.h, 4)?;
    let m = c.m;
    Ok(Identity::new(
        weighted_lhs(p.u, m, h.lap, &h.grad, &p.du),
        vec![Term::scalar("h", lit::<T>(2.0) * (lit::<T>(9.0) * m + lit(7.0)) * c.rho, p.u * h.value)],
    ))
}

/// Residual data for `h`, used for the pointwise sign check.
pub fn h_value<T: Scalar>(p: &PointData<T>, c: &QeConstants<T>) -> Result<T> {
    require_dim4(c, p.scal)?;
    Ok(need(p, &p.h, 4)?.value)
}
