//! Curvature objects at a chart point.

mod ops;
mod selftest;

pub use ops::{
    christoffel, cotton, covariant_derivative, gradient, hessian, laplacian, ricci_scalar, riemann, schouten,
    tensor_laplacian, trace, trace_leading, weyl, weyl_divergence,
};
pub use selftest::{bianchi_selftests, calibrate_sign_convention, symmetry_residuals, Calibration, SelfTestResiduals, SymmetryResiduals};

use crate::error::{Error, Result};
use crate::field::ChartPoint;
use crate::jet::Jet;
use crate::metric::{metric_jet, MetricJet, MetricSpec};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Curvature quantities as jet fields around a point.
///
/// With metric order `K` the Christoffel symbols carry order `K−1` and the
/// curvature tensors order `K−2`, so one extra covariant derivative is
/// available per metric order above two.
#[derive(Clone, Debug)]
pub struct CurvatureFields<T: Scalar> {
    pub metric: MetricJet<T>,
    pub gamma: Tensor<Jet<T>>,
    pub riem: Tensor<Jet<T>>,
    pub ric: Tensor<Jet<T>>,
    pub scal: Jet<T>,
}

impl<T: Scalar> CurvatureFields<T> {
    pub fn compute(spec: &MetricSpec<T>, x: &ChartPoint<T>, metric_order: usize) -> Result<Self> {
        if metric_order < 2 {
            return Err(Error::InsufficientOrder { needed: 2, available: metric_order });
        }
        let metric = metric_jet(spec, x, metric_order)?;
        Self::from_metric(metric)
    }

    pub fn from_metric(metric: MetricJet<T>) -> Result<Self> {
        let gamma = christoffel(&metric, metric.order - 1)?;
        let riem = riemann(&gamma, &metric.g)?;
        let (ric, scal) = ricci_scalar(&riem, &metric.ginv);
        Ok(Self { metric, gamma, riem, ric, scal })
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// Order of the metric jets the fields were built from.
    pub fn metric_order(&self) -> usize {
        self.metric.order
    }

    pub fn require_order(&self, needed: usize) -> Result<()> {
        if self.metric.order < needed {
            return Err(Error::InsufficientOrder { needed, available: self.metric.order });
        }
        Ok(())
    }

    pub fn cov(&self, t: &Tensor<Jet<T>>) -> Result<Tensor<Jet<T>>> {
        covariant_derivative(t, &self.gamma)
    }

    /// Value, gradient, Hessian and Laplacian of a scalar field, as far as its
    /// order allows.
    pub fn scalar_derivatives(&self, f: &Jet<T>) -> Result<ScalarDerivatives<T>> {
        let grad_jet = gradient(f)?;
        let grad = grad_jet.map(|j| j.value());
        let (hess, lap) = if f.order() >= 2 {
            let h = covariant_derivative(&grad_jet, &self.gamma)?;
            let hv = h.map(|j| j.value());
            let lap = trace(&hv, &self.metric.ginv_values());
            (Some(hv), Some(lap))
        } else {
            (None, None)
        };
        Ok(ScalarDerivatives { value: f.value(), grad, hess, lap })
    }

    /// Values of every curvature object the metric order supports.
    pub fn bundle(&self) -> Result<CurvatureBundle<T>> {
        let n = self.dim();
        let k = self.metric.order;
        let val2 = |t: &Tensor<Jet<T>>| t.map(|j| j.value());
        let g = self.metric.g_values();
        let ginv = self.metric.ginv_values();
        let ric = val2(&self.ric);
        let scal = self.scal.value();
        let riem = val2(&self.riem);
        let schouten_v = schouten(&ric, &scal, &g);
        let weyl_v = if n >= 3 { Some(weyl(&riem, &ric, &scal, &g)?) } else { None };

        let mut b = CurvatureBundle {
            x: self.metric.x.clone(),
            g,
            ginv,
            gamma: val2(&self.gamma),
            riem,
            ric,
            scal,
            schouten: schouten_v,
            weyl: weyl_v,
            cotton: None,
            cov_ric: None,
            cov_scal: None,
            cov_riem: None,
            weyl_div: None,
            covcov_ric: None,
            lap_ric: None,
            hess_scal: None,
            lap_scal: None,
        };
        if k >= 3 {
            let cov_ric = self.cov(&self.ric)?;
            let d_scal = gradient(&self.scal)?;
            b.cov_ric = Some(val2(&cov_ric));
            b.cov_scal = Some(val2(&d_scal));
            b.cov_riem = Some(val2(&self.cov(&self.riem)?));
            if n >= 3 {
                b.cotton = Some(cotton(b.cov_ric.as_ref().unwrap(), b.cov_scal.as_ref().unwrap(), &b.g)?);
            }
            if n >= 4 {
                let w = weyl(&self.riem, &self.ric, &self.scal, &self.metric.g)?;
                let cw = val2(&self.cov(&w)?);
                b.weyl_div = Some(weyl_divergence(&cw, &b.ginv));
            }
            if k >= 4 {
                let cc = val2(&self.cov(&cov_ric)?);
                b.lap_ric = Some(trace_leading(&cc, &b.ginv));
                b.covcov_ric = Some(cc);
                let sd = self.scalar_derivatives(&self.scal)?;
                b.hess_scal = sd.hess;
                b.lap_scal = sd.lap;
            }
        }
        Ok(b)
    }
}

/// Pointwise derivatives of a scalar field (coordinate components).
#[derive(Clone, Debug)]
pub struct ScalarDerivatives<T> {
    pub value: T,
    pub grad: Tensor<T>,
    pub hess: Option<Tensor<T>>,
    pub lap: Option<T>,
}

/// Curvature quantities at one point, in coordinate components, all indices down.
///
/// Optional entries depend on the metric order used: covariant derivatives of
/// curvature need order 3, second derivatives (`ΔRic`, `∇²R`) need order 4.
#[derive(Clone, Debug)]
pub struct CurvatureBundle<T: Scalar> {
    pub x: ChartPoint<T>,
    pub g: Tensor<T>,
    pub ginv: Tensor<T>,
    /// `Γ^k_ij` stored as `[k, i, j]`.
    pub gamma: Tensor<T>,
    pub riem: Tensor<T>,
    pub ric: Tensor<T>,
    pub scal: T,
    pub schouten: Tensor<T>,
    /// `None` for `n < 3`; zero for `n = 3`.
    pub weyl: Option<Tensor<T>>,
    pub cotton: Option<Tensor<T>>,
    /// `∇_i R_jk` as `[i, j, k]`.
    pub cov_ric: Option<Tensor<T>>,
    pub cov_scal: Option<Tensor<T>>,
    /// `∇_a R_ijkl` as `[a, i, j, k, l]`.
    pub cov_riem: Option<Tensor<T>>,
    /// `g^{al}∇_a W_ijkl` (n ≥ 4).
    pub weyl_div: Option<Tensor<T>>,
    /// `∇_a∇_b R_jk` as `[a, b, j, k]`.
    pub covcov_ric: Option<Tensor<T>>,
    pub lap_ric: Option<Tensor<T>>,
    pub hess_scal: Option<Tensor<T>>,
    pub lap_scal: Option<T>,
}

impl<T: Scalar> CurvatureBundle<T> {
    pub fn compute(spec: &MetricSpec<T>, x: &ChartPoint<T>, metric_order: usize) -> Result<Self> {
        CurvatureFields::compute(spec, x, metric_order)?.bundle()
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }
}
