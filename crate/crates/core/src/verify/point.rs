//! Everything the identity checks need at one sample point, expressed in an
//! orthonormal frame so that repeated lower indices are plain sums.

use crate::curvature::{gradient, weyl, CurvatureFields};
use crate::error::{Error, Result};
use crate::field::ChartPoint;
use crate::jet::Jet;
use crate::linalg::{orthonormal_frame, to_frame};
use crate::models::QEInstance;
use crate::scalar::Scalar;
use crate::tensor::{Element, Tensor};

/// Value, frame gradient and Laplacian of a derived scalar field.
#[derive(Clone, Debug)]
pub struct ScalarField2<T> {
    pub value: T,
    pub grad: Tensor<T>,
    pub lap: T,
}

/// Frame components of the potential and curvature at a point.
#[derive(Clone, Debug)]
pub struct PointData<T: Scalar> {
    pub x: ChartPoint<T>,
    pub n: usize,
    pub metric_order: usize,
    pub u: T,
    pub du: Tensor<T>,
    pub hess_u: Tensor<T>,
    pub lap_u: T,
    pub grad_u2: T,
    pub ric: Tensor<T>,
    pub rm: Tensor<T>,
    pub scal: T,
    pub weyl: Option<Tensor<T>>,
    /// `∇_i R_jk`
    pub cov_ric: Option<Tensor<T>>,
    pub d_scal: Option<Tensor<T>>,
    pub cotton: Option<Tensor<T>>,
    /// `∇_a∇_b R_jk`
    pub covcov_ric: Option<Tensor<T>>,
    pub lap_ric: Option<Tensor<T>>,
    pub hess_scal: Option<Tensor<T>>,
    pub lap_scal: Option<T>,
    /// `Tr(Ric³)`
    pub tr_ric3: Option<ScalarField2<T>>,
    /// `Tr(P³)` with the instance's constant `ρ`.
    pub tr_p3: Option<ScalarField2<T>>,
    /// `|∇u|²(Tr(P³) − 2m³ρ³)`
    pub h: Option<ScalarField2<T>>,
}

fn values<T: Scalar>(t: &Tensor<Jet<T>>) -> Tensor<T> {
    t.map(|j| j.value())
}

/// `ginv · A` as a matrix of jets.
fn raise_first<T: Scalar>(ginv: &Tensor<Jet<T>>, a: &Tensor<Jet<T>>) -> Tensor<Jet<T>> {
    let n = a.dim();
    Tensor::from_fn(n, 2, |x| {
        let mut acc = a.get(&[0, 0]).zero_like();
        for k in 0..n {
            acc.acc_product(ginv.get(&[x[0], k]), a.get(&[k, x[1]]));
        }
        acc
    })
}

fn trace_cube<T: Scalar>(mixed: &Tensor<Jet<T>>) -> Jet<T> {
    let n = mixed.dim();
    let sq = Tensor::from_fn(n, 2, |x| {
        let mut acc = mixed.get(&[0, 0]).zero_like();
        for k in 0..n {
            acc.acc_product(mixed.get(&[x[0], k]), mixed.get(&[k, x[1]]));
        }
        acc
    });
    let mut acc = mixed.get(&[0, 0]).zero_like();
    for i in 0..n {
        for k in 0..n {
            acc.acc_product(sq.get(&[i, k]), mixed.get(&[k, i]));
        }
    }
    acc
}

impl<T: Scalar> PointData<T> {
    /// Evaluates an instance at `x` with metric jets of `metric_order` (2–4).
    /// Order 3 adds `∇Ric`, order 4 adds `ΔRic`, `∇²R` and the derived scalar
    /// fields; the latter need `inst.rho`.
    pub fn evaluate(inst: &QEInstance<T>, x: &ChartPoint<T>, metric_order: usize) -> Result<Self> {
        let f = CurvatureFields::compute(&inst.metric, x, metric_order)?;
        Self::from_fields(&f, inst, metric_order)
    }

    fn from_fields(f: &CurvatureFields<T>, inst: &QEInstance<T>, k: usize) -> Result<Self> {
        let n = f.dim();
        let x = f.metric.x.clone();
        let g = f.metric.g_values();
        let e = orthonormal_frame(&g)?;
        let fr = |t: &Tensor<T>| to_frame(t, &e);

        let u_jet = inst.u_jet(&x, k)?;
        let du_jet = gradient(&u_jet)?;
        let hess_u = values(&f.cov(&du_jet)?);
        let du = values(&du_jet);
        let du_f = fr(&du);
        let hess_f = fr(&hess_u);
        let lap_u = hess_f.trace();
        let grad_u2 = du_f.norm_sq();

        let ric = values(&f.ric);
        let scal = f.scal.value();
        let rm = values(&f.riem);
        let weyl_v = if n >= 3 { Some(fr(&weyl(&rm, &ric, &scal, &g)?)) } else { None };

        let mut pd = PointData {
            x: x.clone(),
            n,
            metric_order: k,
            u: u_jet.value(),
            du: du_f,
            hess_u: hess_f,
            lap_u,
            grad_u2,
            ric: fr(&ric),
            rm: fr(&rm),
            scal,
            weyl: weyl_v,
            cov_ric: None,
            d_scal: None,
            cotton: None,
            covcov_ric: None,
            lap_ric: None,
            hess_scal: None,
            lap_scal: None,
            tr_ric3: None,
            tr_p3: None,
            h: None,
        };
        if k < 3 {
            return Ok(pd);
        }
        let cov_ric_j = f.cov(&f.ric)?;
        let d_scal = values(&gradient(&f.scal)?);
        pd.cov_ric = Some(fr(&values(&cov_ric_j)));
        pd.d_scal = Some(fr(&d_scal));
        if n >= 3 {
            let c = crate::curvature::cotton(&values(&cov_ric_j), &d_scal, &g)?;
            pd.cotton = Some(fr(&c));
        }
        if k < 4 {
            return Ok(pd);
        }
        let cc = values(&f.cov(&cov_ric_j)?);
        let ccf = fr(&cc);
        pd.lap_ric = Some(Tensor::from_fn(n, 2, |x| (0..n).map(|a| ccf.at(&[a, a, x[0], x[1]])).sum()));
        pd.covcov_ric = Some(ccf);
        let sd = f.scalar_derivatives(&f.scal)?;
        pd.hess_scal = sd.hess.as_ref().map(fr);
        pd.lap_scal = sd.lap;

        let scalar = |s: &Jet<T>| -> Result<ScalarField2<T>> {
            let d = f.scalar_derivatives(s)?;
            Ok(ScalarField2 {
                value: d.value,
                grad: fr(&d.grad),
                lap: d.lap.ok_or(Error::InsufficientOrder { needed: 2, available: s.order() })?,
            })
        };
        let mixed_ric = raise_first(&f.metric.ginv, &f.ric);
        pd.tr_ric3 = Some(scalar(&trace_cube(&mixed_ric))?);
        if let Some(rho) = inst.rho {
            let mixed_p = Tensor::from_fn(n, 2, |x| {
                if x[0] == x[1] {
                    mixed_ric.get(x).add_scalar(-rho)
                } else {
                    mixed_ric.get(x).clone()
                }
            });
            let tp3 = trace_cube(&mixed_p);
            pd.tr_p3 = Some(scalar(&tp3)?);
            let mut gu2 = du_jet.get(&[0]).zero_like();
            for i in 0..n {
                for j in 0..n {
                    let prod = f.metric.ginv.get(&[i, j]).times(du_jet.get(&[i]));
                    gu2.acc_product(&prod, du_jet.get(&[j]));
                }
            }
            let m = inst.m;
            let shift = T::lit(2.0) * m * m * m * rho * rho * rho;
            let h = gu2.times(&tp3.add_scalar(-shift));
            pd.h = Some(scalar(&h)?);
        }
        Ok(pd)
    }

    pub fn require<'a, V>(&self, v: &'a Option<V>, what: &str) -> Result<&'a V> {
        v.as_ref().ok_or_else(|| {
            let needed = if what.starts_with("order4") { 4 } else { 3 };
            Error::InsufficientOrder { needed, available: self.metric_order }
        })
    }
}
