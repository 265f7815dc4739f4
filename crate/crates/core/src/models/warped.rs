//! Warped products `dt² + φ(t)² g_F` over an Einstein sphere fiber, with the
//! analytic Ricci formulas and the scalar-curvature profiles of the cone and
//! hyperbolic warpings.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Domain;
use crate::jet::Jet;
use crate::metric::MetricSpec;
use crate::models::charts::{sphere_diagonal, sphere_intervals};
use crate::scalar::Scalar;
use crate::tensor::Element;

/// Warping function of the base coordinate.
pub type WarpFn<T> = Arc<dyn Fn(&Jet<T>) -> Jet<T> + Send + Sync>;

/// `dt² + φ(t)² g_F` with `g_F` a round `l`-sphere scaled so that `Ric_F = κ g_F`.
#[derive(Clone)]
pub struct WarpedSpec<T> {
    pub base: (T, T),
    pub phi: WarpFn<T>,
    pub kappa: T,
    pub fiber_dim: usize,
    pub label: String,
}

impl<T: Scalar> fmt::Debug for WarpedSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WarpedSpec")
            .field("base", &self.base)
            .field("kappa", &self.kappa)
            .field("fiber_dim", &self.fiber_dim)
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

/// Ricci curvature of a warped product from the warping function alone.
#[derive(Clone, Debug, PartialEq)]
pub struct WarpedRicci<T> {
    /// `Ric(∂_t, ∂_t) = −(l/φ) φ''`
    pub horizontal: T,
    /// Ricci eigenvalue on unit fiber vectors: `[κ − (φφ'' + (l−1)φ'²)]/φ²`
    pub vertical: T,
    pub scal: T,
}

impl<T: Scalar> WarpedSpec<T> {
    pub fn new(
        label: impl Into<String>,
        base: (T, T),
        kappa: T,
        fiber_dim: usize,
        phi: impl Fn(&Jet<T>) -> Jet<T> + Send + Sync + 'static,
    ) -> Result<Self> {
        if fiber_dim < 2 {
            return Err(Error::param("fiber_dim", "an Einstein sphere fiber needs dimension at least 2"));
        }
        if !(kappa > T::zero()) {
            return Err(Error::param("kappa", "fiber Einstein constant must be positive"));
        }
        Ok(Self { base, phi: Arc::new(phi), kappa, fiber_dim, label: label.into() })
    }

    pub fn dim(&self) -> usize {
        self.fiber_dim + 1
    }

    /// `(φ, φ', φ'')` at `t`.
    pub fn phi_derivatives(&self, t: T) -> (T, T, T) {
        let v = Jet::variables(&[t], 2).expect("order 2 is supported");
        let f = (self.phi)(&v[0]);
        (f.value(), f.partial(&[0]).unwrap(), f.partial(&[0, 0]).unwrap())
    }

    /// Chart realization with the fiber in hyperspherical coordinates.
    pub fn to_metric_spec(&self) -> MetricSpec<T> {
        let l = self.fiber_dim;
        let radius2 = T::from_usize_lossy(l - 1) / self.kappa;
        let mut iv = vec![self.base];
        iv.extend(sphere_intervals::<T>(l));
        let phi = self.phi.clone();
        MetricSpec::diagonal(self.label.clone(), Domain::new(iv), move |x| {
            let f2 = phi(&x[0]).square().scaled(radius2);
            let mut d = vec![x[0].constant_like(T::one())];
            d.extend(sphere_diagonal(&x[1..]).into_iter().map(|s| &s * &f2));
            d
        })
    }

    /// Checks `φ > 0` on the given grid.
    pub fn check_positive(&self, ts: &[T]) -> Result<()> {
        for &t in ts {
            if !(self.phi_derivatives(t).0 > T::zero()) {
                return Err(Error::NonPositiveWarping { t: t.as_f64() });
            }
        }
        Ok(())
    }
}

/// Ricci curvature of `spec` at base parameter `t` from the warping function.
pub fn warped_ricci_analytic<T: Scalar>(spec: &WarpedSpec<T>, t: T) -> WarpedRicci<T> {
    let (f, df, ddf) = spec.phi_derivatives(t);
    let l = T::from_usize_lossy(spec.fiber_dim);
    let horizontal = -l * ddf / f;
    let vertical = (spec.kappa - (f * ddf + (l - T::one()) * df * df)) / (f * f);
    WarpedRicci { horizontal, vertical, scal: horizontal + l * vertical }
}

/// Warping families for which a positive constant scalar curvature is ruled out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InexKind {
    /// `φ = α t`
    Cone { alpha: f64 },
    /// `φ = a sinh(√β t) + b cosh(√β t)`
    Hyperbolic { beta: f64, a: f64, b: f64 },
}

/// Parameters of an inex warped metric on `I × F^{n−1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InexParams {
    pub n: usize,
    pub kappa: f64,
    pub kind: InexKind,
}

impl InexParams {
    pub fn fiber_dim(&self) -> usize {
        self.n - 1
    }

    /// True when the algebraic condition forcing a constant profile holds:
    /// `κ = (n−2)α²` for the cone, `κ = (n−2)β(a²−b²)` for the hyperbolic case.
    pub fn is_degenerate(&self, tol: f64) -> bool {
        let c = (self.n - 2) as f64;
        let target = match self.kind {
            InexKind::Cone { alpha } => c * alpha * alpha,
            InexKind::Hyperbolic { beta, a, b } => c * beta * (a * a - b * b),
        };
        (self.kappa - target).abs() <= tol * self.kappa.abs().max(1.0)
    }

    pub fn to_map(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        m.insert("n".into(), self.n as f64);
        m.insert("kappa".into(), self.kappa);
        match self.kind {
            InexKind::Cone { alpha } => {
                m.insert("alpha".into(), alpha);
            }
            InexKind::Hyperbolic { beta, a, b } => {
                m.insert("beta".into(), beta);
                m.insert("a".into(), a);
                m.insert("b".into(), b);
            }
        }
        m
    }
}

/// Base interval used for the inex charts.
pub const INEX_BASE: (f64, f64) = (0.5, 2.0);

/// Warped spec realizing the inex family.
pub fn inex_spec<T: Scalar>(p: &InexParams) -> Result<WarpedSpec<T>> {
    if p.n < 3 {
        return Err(Error::DimensionTooSmall { n: p.n, min: 3 });
    }
    let base = (T::lit(INEX_BASE.0), T::lit(INEX_BASE.1));
    let kappa = T::lit(p.kappa);
    let spec = match p.kind {
        InexKind::Cone { alpha } => {
            if !(alpha > 0.0) {
                return Err(Error::param("alpha", "alpha must be positive"));
            }
            let a = T::lit(alpha);
            WarpedSpec::new(format!("cone(n={}, alpha={alpha}, kappa={})", p.n, p.kappa), base, kappa, p.n - 1, move |t| {
                t.scaled(a)
            })?
        }
        InexKind::Hyperbolic { beta, a, b } => {
            if !(beta > 0.0) {
                return Err(Error::param("beta", "beta must be positive"));
            }
            let (sb, ca, cb) = (T::lit(beta.sqrt()), T::lit(a), T::lit(b));
            WarpedSpec::new(
                format!("hyperbolic-warped(n={}, beta={beta}, a={a}, b={b}, kappa={})", p.n, p.kappa),
                base,
                kappa,
                p.n - 1,
                move |t| {
                    let s = t.scaled(sb);
                    s.sinh().scaled(ca).plus(&s.cosh().scaled(cb))
                },
            )?
        }
    };
    Ok(spec)
}

/// Closed-form scalar-curvature profile of an inex metric on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct InexProfile {
    pub t: Vec<f64>,
    pub r: Vec<f64>,
    pub variance: f64,
    /// The degenerate algebraic condition holds, so the profile is constant.
    pub degenerate: bool,
}

/// `R(t)` for the cone `(n−1)(κ−(n−2)α²)/(α²t²)` or for the hyperbolic warping
/// `−2(n−1)β + (n−1)(κ−(n−2)φ'²)/φ²`.
pub fn inex_scalar_profile(p: &InexParams, ts: &[f64]) -> Result<InexProfile> {
    let n1 = (p.n - 1) as f64;
    let n2 = (p.n - 2) as f64;
    let mut r = Vec::with_capacity(ts.len());
    for &t in ts {
        let value = match p.kind {
            InexKind::Cone { alpha } => {
                if !(alpha * t > 0.0) {
                    return Err(Error::NonPositiveWarping { t });
                }
                n1 * (p.kappa - n2 * alpha * alpha) / (alpha * alpha * t * t)
            }
            InexKind::Hyperbolic { beta, a, b } => {
                let s = beta.sqrt();
                let phi = a * (s * t).sinh() + b * (s * t).cosh();
                if !(phi > 0.0) {
                    return Err(Error::NonPositiveWarping { t });
                }
                let dphi = s * (a * (s * t).cosh() + b * (s * t).sinh());
                -2.0 * n1 * beta + n1 * (p.kappa - n2 * dphi * dphi) / (phi * phi)
            }
        };
        r.push(value);
    }
    let mean = r.iter().sum::<f64>() / r.len().max(1) as f64;
    let variance = r.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / r.len().max(1) as f64;
    Ok(InexProfile { t: ts.to_vec(), r, variance, degenerate: p.is_degenerate(1e-12) })
}
