//! Chart metrics and their jets.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{ChartPoint, Domain, ScalarField};
use crate::jet::{Jet, MAX_JET_ORDER};
use crate::linalg::{spd_condition, spd_inverse};
use crate::scalar::Scalar;
use crate::tensor::{Element, Tensor};

/// Largest condition number accepted for a metric at a sample point.
pub const MAX_METRIC_CONDITION: f64 = 1e12;

/// Closure producing all metric components from coordinate jets. Only the upper
/// triangle (`i ≤ j`) is read; the lower triangle is mirrored.
pub type MetricFn<T> = Arc<dyn Fn(&[Jet<T>]) -> Tensor<Jet<T>> + Send + Sync>;

/// A Riemannian metric on a coordinate chart.
#[derive(Clone)]
pub struct MetricSpec<T> {
    pub dim: usize,
    pub components: MetricFn<T>,
    pub domain: Domain<T>,
    pub label: String,
}

impl<T: Scalar> fmt::Debug for MetricSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricSpec")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> MetricSpec<T> {
    pub fn new(
        label: impl Into<String>,
        domain: Domain<T>,
        components: impl Fn(&[Jet<T>]) -> Tensor<Jet<T>> + Send + Sync + 'static,
    ) -> Self {
        Self { dim: domain.dim(), components: Arc::new(components), domain, label: label.into() }
    }

    /// Diagonal metric from a closure returning the diagonal entries.
    pub fn diagonal(
        label: impl Into<String>,
        domain: Domain<T>,
        diag: impl Fn(&[Jet<T>]) -> Vec<Jet<T>> + Send + Sync + 'static,
    ) -> Self {
        let n = domain.dim();
        Self::new(label, domain, move |x| {
            let d = diag(x);
            let zero = x[0].zero_like();
            Tensor::from_fn(n, 2, |i| if i[0] == i[1] { d[i[0]].clone() } else { zero.clone() })
        })
    }

    /// Multiplies the metric by a positive constant.
    pub fn scaled(&self, c: T) -> Self {
        let inner = self.components.clone();
        Self {
            dim: self.dim,
            components: Arc::new(move |x| inner(x).map(|e| e.scaled(c))),
            domain: self.domain.clone(),
            label: format!("{} (scaled)", self.label),
        }
    }

    /// Component `g_ij` as a standalone scalar field.
    pub fn component(&self, i: usize, j: usize) -> ScalarField<T> {
        let (a, b) = (i.min(j), i.max(j));
        let comps = self.components.clone();
        ScalarField::new(self.domain.clone(), move |x| comps(x).get(&[a, b]).clone())
    }

    /// Metric values at `x` (no derivatives).
    pub fn values(&self, x: &[T]) -> Tensor<T> {
        let vars = Jet::variables(x, 0).expect("order 0 is supported");
        let raw = (self.components)(&vars);
        Tensor::from_fn(self.dim, 2, |i| raw.get(&[i[0].min(i[1]), i[0].max(i[1])]).value())
    }
}

/// The metric and its inverse as jets at a point.
#[derive(Clone, Debug)]
pub struct MetricJet<T: Scalar> {
    pub x: ChartPoint<T>,
    pub order: usize,
    pub g: Tensor<Jet<T>>,
    pub ginv: Tensor<Jet<T>>,
}

impl<T: Scalar> MetricJet<T> {
    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn g_values(&self) -> Tensor<T> {
        self.g.map(|j| j.value())
    }

    pub fn ginv_values(&self) -> Tensor<T> {
        self.ginv.map(|j| j.value())
    }

    /// `∂_{idx} g_ij`.
    pub fn dg(&self, i: usize, j: usize, idx: &[usize]) -> Result<T> {
        self.g.get(&[i, j]).partial(idx)
    }

    /// `∂_{idx} g^ij`.
    pub fn dginv(&self, i: usize, j: usize, idx: &[usize]) -> Result<T> {
        self.ginv.get(&[i, j]).partial(idx)
    }

    /// Largest residuals of `g·g⁻¹ = I` and of `∂_k g⁻¹ = −g⁻¹(∂_k g)g⁻¹`.
    pub fn inverse_residuals(&self) -> Result<(T, T)> {
        let n = self.dim();
        let g = self.g_values();
        let gi = self.ginv_values();
        let id = g.matmul(&gi).max_abs_diff(&Tensor::identity(n));
        let mut worst = T::zero();
        if self.order >= 1 {
            for k in 0..n {
                let dgk = Tensor::from_fn(n, 2, |i| self.g.get(i).partial(&[k]).unwrap());
                let expect = gi.matmul(&dgk).matmul(&gi).scale(-T::one());
                let got = Tensor::from_fn(n, 2, |i| self.ginv.get(i).partial(&[k]).unwrap());
                worst = worst.max(got.max_abs_diff(&expect));
            }
        }
        Ok((id, worst))
    }
}

/// Metric jets at `x` to the requested order.
pub fn metric_jet<T: Scalar>(spec: &MetricSpec<T>, x: &ChartPoint<T>, order: usize) -> Result<MetricJet<T>> {
    if order > MAX_JET_ORDER {
        return Err(Error::OrderUnsupported { requested: order, max: MAX_JET_ORDER });
    }
    spec.domain.check(&x.coords)?;
    let vars = Jet::variables(&x.coords, order)?;
    let raw = (spec.components)(&vars);
    let n = spec.dim;
    let g = Tensor::from_fn(n, 2, |i| raw.get(&[i[0].min(i[1]), i[0].max(i[1])]).truncate(order));
    let ginv = inverse_metric_jet(&g)?;
    Ok(MetricJet { x: x.clone(), order, g, ginv })
}

/// Inverse of a matrix of jets.
///
/// With `g = g₀ + H` where `H` has no constant term, the truncated Neumann
/// series `g⁻¹ = Σ_k (−g₀⁻¹H)^k g₀⁻¹` is exact to the jet order; its first two
/// terms are the familiar `∂(g⁻¹) = −g⁻¹(∂g)g⁻¹` and its derivative.
pub fn inverse_metric_jet<T: Scalar>(g: &Tensor<Jet<T>>) -> Result<Tensor<Jet<T>>> {
    let n = g.dim();
    let g0 = g.map(|j| j.value());
    let cond = spd_condition(&g0);
    if !(cond < MAX_METRIC_CONDITION) {
        return Err(Error::SingularMetric { condition: cond });
    }
    let b = spd_inverse(&g0)?;
    let proto = g.get(&[0, 0]);
    let order = proto.order();
    let h = Tensor::from_fn(n, 2, |i| g.get(i).add_scalar(-g0.at(i)));
    let b_jet = b.map(|&v| proto.constant_like(v));
    // m = −B·H, applied repeatedly to B
    let m = Tensor::from_fn(n, 2, |i| {
        let mut acc = proto.zero_like();
        for k in 0..n {
            acc.acc_scaled(h.get(&[k, i[1]]), -b.at(&[i[0], k]));
        }
        acc
    });
    let mut term = b_jet.clone();
    let mut sum = b_jet;
    for _ in 0..order {
        term = Tensor::from_fn(n, 2, |i| {
            let mut acc = proto.zero_like();
            for k in 0..n {
                acc.acc_product(m.get(&[i[0], k]), term.get(&[k, i[1]]));
            }
            acc
        });
        for (s, t) in sum.data_mut().iter_mut().zip(term.data()) {
            *s = s.plus(t);
        }
    }
    // symmetrize against rounding
    let half = T::lit(0.5);
    Ok(Tensor::from_fn(n, 2, |i| sum.get(i).plus(sum.get(&[i[1], i[0]])).scaled(half)))
}
