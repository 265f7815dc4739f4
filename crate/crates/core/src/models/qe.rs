//! Quasi-Einstein instances: a chart metric with potential `u` solving
//! `∇²u = (u/m)(Ric − λg)`.

use std::collections::BTreeMap;

use crate::curvature::{gradient, CurvatureFields};
use crate::error::{Error, Result};
use crate::field::{jet_eval, ChartPoint, Domain, ScalarField, SINGULARITY_MARGIN};
use crate::jet::Jet;
use crate::metric::MetricSpec;
use crate::models::charts::{sphere_diagonal, sphere_intervals};
use crate::scalar::Scalar;
use crate::tensor::Element;
use crate::verify::classification::classify_scalar;

/// Sample points keep `u ≥ U_FLOOR · u_max` so that `u⁻¹` terms stay bounded.
pub const U_FLOOR: f64 = 0.05;

/// Largest supported dimension for the built-in sphere models.
pub const MAX_MODEL_DIM: usize = 6;

/// A quasi-Einstein manifold with boundary given on one chart.
#[derive(Clone, Debug)]
pub struct QEInstance<T: Scalar> {
    /// Catalog name, e.g. `hemisphere`.
    pub name: String,
    pub label: String,
    pub params: BTreeMap<String, f64>,
    pub metric: MetricSpec<T>,
    pub u: ScalarField<T>,
    pub m: T,
    pub lambda: T,
    /// Integrability constant of `(u²/m)(R−λn) + (m−1)|∇u|² = −λu² + μ`.
    pub mu: Option<T>,
    /// `((n−1)λ − R)/(m−1)`, set once `R` is verified constant.
    pub rho: Option<T>,
    pub expected_r: T,
    pub expected_k: usize,
    /// Sorted Ricci eigenvalues the model must reproduce.
    pub expected_ric_eigenvalues: Vec<T>,
    /// `(coordinate, value)` faces on which `u` vanishes.
    pub boundary_faces: Vec<(usize, T)>,
    /// Intrinsic scalar curvature of the boundary.
    pub boundary_scalar: Option<T>,
    pub u_max: T,
}

fn check_m<T: Scalar>(m: T) -> Result<()> {
    if !(m > T::one()) {
        return Err(Error::param("m", "m must exceed 1"));
    }
    Ok(())
}

fn check_dim(n: usize, max: usize, what: &str) -> Result<()> {
    if n > max {
        return Err(Error::UnsupportedDimension { n, what: what.to_string() });
    }
    Ok(())
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

impl<T: Scalar> QEInstance<T> {
    pub fn dim(&self) -> usize {
        self.metric.dim
    }

    fn validate(self) -> Result<Self> {
        let n = self.dim();
        match classify_scalar(self.expected_r, n, self.m, self.lambda, T::lit(1e-10))? {
            Some(k) if k == self.expected_k => Ok(self),
            other => Err(Error::param(
                "expected_r",
                format!("{} classifies as {:?}, expected k = {}", self.expected_r, other, self.expected_k),
            )),
        }
    }

    /// Deterministic sample points with `u ≥ 0.05·u_max`.
    pub fn sample_points(&self, count: usize) -> Vec<ChartPoint<T>> {
        let floor = T::lit(U_FLOOR) * self.u_max;
        let mut out = Vec::with_capacity(count);
        let mut batch = count.max(8);
        while out.len() < count {
            out = self
                .metric
                .domain
                .halton_points(batch)
                .into_iter()
                .filter(|x| self.u.value_unchecked(&x.coords) >= floor)
                .take(count)
                .collect();
            batch *= 2;
        }
        out
    }

    /// Potential jet at `x`.
    pub fn u_jet(&self, x: &ChartPoint<T>, order: usize) -> Result<Jet<T>> {
        jet_eval(&self.u, x, order)
    }

    /// `(u²/m)(R−λn) + (m−1)|∇u|² + λu²` at `x`.
    pub fn mu_at(&self, x: &ChartPoint<T>) -> Result<T> {
        let f = CurvatureFields::compute(&self.metric, x, 2)?;
        let u = self.u_jet(x, 1)?;
        let du = gradient(&u)?.map(|j| j.value());
        let gi = f.metric.ginv_values();
        let n = self.dim();
        let mut grad2 = T::zero();
        for i in 0..n {
            for j in 0..n {
                grad2 = grad2 + gi.at(&[i, j]) * du.at(&[i]) * du.at(&[j]);
            }
        }
        let uv = u.value();
        let nn = T::from_usize_lossy(n);
        Ok(uv * uv / self.m * (f.scal.value() - self.lambda * nn)
            + (self.m - T::one()) * grad2
            + self.lambda * uv * uv)
    }

    /// Fixes `μ` at the domain midpoint and `ρ` from the sampled scalar
    /// curvature, after checking that `R` is constant over `points`.
    pub fn calibrate(&mut self, points: &[ChartPoint<T>]) -> Result<()> {
        self.mu = Some(self.mu_at(&self.metric.domain.midpoint())?);
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for x in points {
            let r = CurvatureFields::compute(&self.metric, x, 2)?.scal.value();
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let spread = hi - lo;
        let scale = T::one().max(hi.abs());
        if spread > T::lit(1e-8) * scale {
            return Err(Error::ConstraintViolation(format!("scalar curvature not constant: spread {spread}")));
        }
        let r = (lo + hi) * T::lit(0.5);
        let n = T::from_usize_lossy(self.dim());
        self.rho = Some(((n - T::one()) * self.lambda - r) / (self.m - T::one()));
        Ok(())
    }

    /// Same metric and potential with `λ` replaced; used for negative controls.
    pub fn with_lambda(&self, lambda: T) -> Self {
        let mut out = self.clone();
        out.lambda = lambda;
        out.mu = None;
        out.rho = None;
        out.label = format!("{} [lambda={}]", self.label, lambda);
        out
    }

    /// Same instance with `u + c` as potential; used for negative controls.
    pub fn with_potential_shift(&self, c: T) -> Self {
        let mut out = self.clone();
        let f = self.u.f.clone();
        out.u = ScalarField::new(self.u.domain.clone(), move |x| f(x).add_scalar(c));
        out.mu = None;
        out.label = format!("{} [u+{}]", self.label, c);
        out
    }
}

/// Unit hemisphere `dr² + sin²r g_{S^{n−1}}`, `u = cos r`, `λ = m+n−1`.
pub fn hemisphere<T: Scalar>(n: usize, m: T) -> Result<QEInstance<T>> {
    check_m(m)?;
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    check_dim(n, MAX_MODEL_DIM, "hemisphere")?;
    let d = T::lit(SINGULARITY_MARGIN);
    let half_pi = T::FRAC_PI_2();
    let mut iv = vec![(d, half_pi - d)];
    iv.extend(sphere_intervals::<T>(n - 1));
    let domain = Domain::new(iv);
    let metric = MetricSpec::diagonal(format!("hemisphere S^{n}_+"), domain.clone(), |x| {
        let s2 = x[0].sin().square();
        let mut d = vec![x[0].constant_like(T::one())];
        d.extend(sphere_diagonal(&x[1..]).into_iter().map(|f| &f * &s2));
        d
    });
    let u = ScalarField::new(domain, |x| x[0].cos());
    let nn = T::from_usize_lossy(n);
    let lambda = m + nn - T::one();
    QEInstance {
        name: "hemisphere".into(),
        label: format!("hemisphere(n={n}, m={m})"),
        params: params(&[("n", n as f64), ("m", m.as_f64())]),
        metric,
        u,
        m,
        lambda,
        mu: None,
        rho: None,
        expected_r: nn * (nn - T::one()),
        expected_k: 0,
        expected_ric_eigenvalues: vec![nn - T::one(); n],
        boundary_faces: vec![(0, half_pi)],
        boundary_scalar: Some((nn - T::one()) * (nn - T::lit(2.0))),
        u_max: T::one(),
    }
    .validate()
}

/// Cylinder `dt² + ((n−2)/λ) g_{S^{n−1}}`, `u = sin(√(λ/m) t)`.
pub fn cylinder<T: Scalar>(n: usize, m: T, lambda: T) -> Result<QEInstance<T>> {
    check_m(m)?;
    if n < 3 {
        return Err(Error::UnsupportedDimension { n, what: "cylinder needs n ≥ 3".into() });
    }
    check_dim(n, MAX_MODEL_DIM, "cylinder")?;
    if !(lambda > T::zero()) {
        return Err(Error::param("lambda", "lambda must be positive"));
    }
    let nn = T::from_usize_lossy(n);
    let c = (nn - T::lit(2.0)) / lambda;
    let omega = (lambda / m).sqrt();
    let length = T::PI() / omega;
    let d = T::lit(SINGULARITY_MARGIN);
    let mut iv = vec![(d, length - d)];
    iv.extend(sphere_intervals::<T>(n - 1));
    let domain = Domain::new(iv);
    let metric = MetricSpec::diagonal(format!("cylinder I x S^{}", n - 1), domain.clone(), move |x| {
        let mut d = vec![x[0].constant_like(T::one())];
        d.extend(sphere_diagonal(&x[1..]).into_iter().map(|f| f.scaled(c)));
        d
    });
    let u = ScalarField::new(domain, move |x| x[0].scaled(omega).sin());
    let mut eig = vec![lambda; n];
    eig[0] = T::zero();
    QEInstance {
        name: "cylinder".into(),
        label: format!("cylinder(n={n}, m={m}, lambda={lambda})"),
        params: params(&[("n", n as f64), ("m", m.as_f64()), ("lambda", lambda.as_f64())]),
        metric,
        u,
        m,
        lambda,
        mu: None,
        rho: None,
        expected_r: (nn - T::one()) * lambda,
        expected_k: n - 1,
        expected_ric_eigenvalues: eig,
        boundary_faces: vec![(0, T::zero()), (0, length)],
        boundary_scalar: Some((nn - T::one()) * lambda),
        u_max: T::one(),
    }
    .validate()
}

/// `dr² + sin²r g_{S^p} + ((q−1)/(p+m)) g_{S^q}`, `u = cos r`, `λ = p+m`.
pub fn doubly_warped<T: Scalar>(p: usize, q: usize, m: T) -> Result<QEInstance<T>> {
    check_m(m)?;
    if p < 1 {
        return Err(Error::param("p", "p must be at least 1"));
    }
    if q < 2 {
        return Err(Error::param("q", "q must be at least 2"));
    }
    let n = p + q + 1;
    check_dim(n, MAX_MODEL_DIM, "doubly-warped")?;
    let (pp, qq, nn) = (T::from_usize_lossy(p), T::from_usize_lossy(q), T::from_usize_lossy(n));
    let lambda = pp + m;
    let c = (qq - T::one()) / lambda;
    let d = T::lit(SINGULARITY_MARGIN);
    let half_pi = T::FRAC_PI_2();
    let mut iv = vec![(d, half_pi - d)];
    iv.extend(sphere_intervals::<T>(p));
    iv.extend(sphere_intervals::<T>(q));
    let domain = Domain::new(iv);
    let metric = MetricSpec::diagonal(format!("S^{}_+ x S^{q}", p + 1), domain.clone(), move |x| {
        let s2 = x[0].sin().square();
        let mut d = vec![x[0].constant_like(T::one())];
        d.extend(sphere_diagonal(&x[1..=p]).into_iter().map(|f| &f * &s2));
        d.extend(sphere_diagonal(&x[p + 1..]).into_iter().map(|f| f.scaled(c)));
        d
    });
    let u = ScalarField::new(domain, |x| x[0].cos());
    let expected_r = (qq * (m - nn) + nn * (nn - T::one())) * lambda / (m + nn - qq - T::one());
    let mut eig = vec![pp; p + 1];
    eig.extend(vec![lambda; q]);
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    QEInstance {
        name: "doubly-warped".into(),
        label: format!("doubly_warped(p={p}, q={q}, m={m})"),
        params: params(&[("p", p as f64), ("q", q as f64), ("m", m.as_f64())]),
        metric,
        u,
        m,
        lambda,
        mu: None,
        rho: None,
        expected_r,
        expected_k: q,
        expected_ric_eigenvalues: eig,
        boundary_faces: vec![(0, half_pi)],
        boundary_scalar: Some(pp * (pp - T::one()) + qq * lambda),
        u_max: T::one(),
    }
    .validate()
}

/// `dt² + ((p−1)/λ) g_{S^p} + ((q−1)/λ) g_{S^q}`, `u = sin(√(λ/m) t)`.
pub fn product_excg<T: Scalar>(p: usize, q: usize, m: T, lambda: T) -> Result<QEInstance<T>> {
    check_m(m)?;
    if p < 2 || q < 2 {
        return Err(Error::param("p,q", "both sphere factors need dimension at least 2"));
    }
    let n = 1 + p + q;
    check_dim(n, 7, "product-excg")?;
    if !(lambda > T::zero()) {
        return Err(Error::param("lambda", "lambda must be positive"));
    }
    let (pp, qq, nn) = (T::from_usize_lossy(p), T::from_usize_lossy(q), T::from_usize_lossy(n));
    let (cp, cq) = ((pp - T::one()) / lambda, (qq - T::one()) / lambda);
    let omega = (lambda / m).sqrt();
    let length = T::PI() / omega;
    let d = T::lit(SINGULARITY_MARGIN);
    let mut iv = vec![(d, length - d)];
    iv.extend(sphere_intervals::<T>(p));
    iv.extend(sphere_intervals::<T>(q));
    let domain = Domain::new(iv);
    let metric = MetricSpec::diagonal(format!("I x S^{p} x S^{q}"), domain.clone(), move |x| {
        let mut d = vec![x[0].constant_like(T::one())];
        d.extend(sphere_diagonal(&x[1..=p]).into_iter().map(|f| f.scaled(cp)));
        d.extend(sphere_diagonal(&x[p + 1..]).into_iter().map(|f| f.scaled(cq)));
        d
    });
    let u = ScalarField::new(domain, move |x| x[0].scaled(omega).sin());
    let mut eig = vec![lambda; n];
    eig[0] = T::zero();
    QEInstance {
        name: "product-excg".into(),
        label: format!("product_excg(p={p}, q={q}, m={m}, lambda={lambda})"),
        params: params(&[("p", p as f64), ("q", q as f64), ("m", m.as_f64()), ("lambda", lambda.as_f64())]),
        metric,
        u,
        m,
        lambda,
        mu: None,
        rho: None,
        expected_r: (nn - T::one()) * lambda,
        expected_k: n - 1,
        expected_ric_eigenvalues: eig,
        boundary_faces: vec![(0, T::zero()), (0, length)],
        boundary_scalar: Some((pp + qq) * lambda),
        u_max: T::one(),
    }
    .validate()
}

/// Evaluates the potential on every boundary face at the domain midpoint's
/// remaining coordinates; all values should vanish.
pub fn boundary_potential_values<T: Scalar>(inst: &QEInstance<T>) -> Vec<T> {
    let mid = inst.metric.domain.midpoint();
    inst.boundary_faces
        .iter()
        .map(|&(c, v)| {
            let mut x = mid.coords.clone();
            x[c] = v;
            inst.u.value_unchecked(&x)
        })
        .collect()
}
