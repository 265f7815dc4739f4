//! Identities that hold for every metric, used as engine self-tests, and the
//! sign-convention calibration on round spheres.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CurvatureBundle, CurvatureFields};
use crate::error::Result;
use crate::linalg::{orthonormal_frame, to_frame};
use crate::models::charts::round_sphere;
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Residuals of the universal differential identities at one point.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SelfTestResiduals {
    /// `∇_j R_jk − ½ ∇_k R`
    pub contracted_twice: f64,
    /// `∇_j R_jikl − (∇_k R_il − ∇_l R_ik)`
    pub contracted_once: f64,
    /// `∇_j∇_i R_jk − ∇_i∇_j R_jk − R_jijs R_sk − R_jiks R_js` (order 4 only)
    pub ricci_commutation: Option<f64>,
    pub cotton_skew: f64,
    pub cotton_trace: f64,
    /// `C + ((n−2)/(n−3)) div W` (n ≥ 4)
    pub cotton_weyl: Option<f64>,
}

/// Residuals of the algebraic symmetries of the curvature objects, relative to
/// the size of the curvature tensor.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymmetryResiduals {
    pub riem_antisym: f64,
    pub riem_pair: f64,
    pub riem_first_bianchi: f64,
    pub ric_symmetric: f64,
    pub weyl_trace: f64,
}

fn frame_of<T: Scalar>(b: &CurvatureBundle<T>) -> Result<Tensor<T>> {
    orthonormal_frame(&b.g)
}

/// Universal identities evaluated in an orthonormal frame at the bundle's point.
/// Requires metric order ≥ 3.
pub fn bianchi_selftests<T: Scalar>(b: &CurvatureBundle<T>) -> Result<SelfTestResiduals> {
    let n = b.dim();
    let e = frame_of(b)?;
    let need = |o: &Option<Tensor<T>>| {
        o.as_ref().map(|t| to_frame(t, &e)).ok_or(crate::Error::InsufficientOrder { needed: 3, available: 2 })
    };
    let ric = to_frame(&b.ric, &e);
    let riem = to_frame(&b.riem, &e);
    let cric = need(&b.cov_ric)?;
    let cs = need(&b.cov_scal)?;
    let crm = need(&b.cov_riem)?;
    let half = T::lit(0.5);

    let mut twice = T::zero();
    for k in 0..n {
        let lhs: T = (0..n).map(|j| cric.at(&[j, j, k])).sum();
        twice = twice.max((lhs - half * cs.at(&[k])).abs());
    }

    let mut once = T::zero();
    for i in 0..n {
        for k in 0..n {
            for l in 0..n {
                let lhs: T = (0..n).map(|j| crm.at(&[j, j, i, k, l])).sum();
                let rhs = cric.at(&[k, i, l]) - cric.at(&[l, i, k]);
                once = once.max((lhs - rhs).abs());
            }
        }
    }

    let commutation = b.covcov_ric.as_ref().map(|cc| {
        let cc = to_frame(cc, &e);
        let mut worst = T::zero();
        for i in 0..n {
            for k in 0..n {
                let mut r = T::zero();
                for j in 0..n {
                    r = r + cc.at(&[j, i, j, k]) - cc.at(&[i, j, j, k]);
                    for s in 0..n {
                        r = r - riem.at(&[j, i, j, s]) * ric.at(&[s, k]) - riem.at(&[j, i, k, s]) * ric.at(&[j, s]);
                    }
                }
                worst = worst.max(r.abs());
            }
        }
        worst.as_f64()
    });

    let (mut skew, mut tr) = (T::zero(), T::zero());
    if let Some(c) = b.cotton.as_ref() {
        let c = to_frame(c, &e);
        for i in 0..n {
            let (mut t1, mut t2, mut t3) = (T::zero(), T::zero(), T::zero());
            for k in 0..n {
                for j in 0..n {
                    skew = skew.max((c.at(&[i, j, k]) + c.at(&[j, i, k])).abs());
                }
                t1 = t1 + c.at(&[k, k, i]);
                t2 = t2 + c.at(&[k, i, k]);
                t3 = t3 + c.at(&[i, k, k]);
            }
            tr = tr.max(t1.abs()).max(t2.abs()).max(t3.abs());
        }
    }

    let cotton_weyl = match (&b.cotton, &b.weyl_div) {
        (Some(c), Some(dw)) if n >= 4 => {
            let factor = T::from_usize_lossy(n - 2) / T::from_usize_lossy(n - 3);
            let r = to_frame(c, &e).add(&to_frame(dw, &e).scale(factor));
            Some(r.max_abs().as_f64())
        }
        _ => None,
    };

    Ok(SelfTestResiduals {
        contracted_twice: twice.as_f64(),
        contracted_once: once.as_f64(),
        ricci_commutation: commutation,
        cotton_skew: skew.as_f64(),
        cotton_trace: tr.as_f64(),
        cotton_weyl,
    })
}

/// Algebraic symmetry residuals of `Rm`, `Ric` and `W`.
pub fn symmetry_residuals<T: Scalar>(b: &CurvatureBundle<T>) -> Result<SymmetryResiduals> {
    let n = b.dim();
    let e = frame_of(b)?;
    let rm = to_frame(&b.riem, &e);
    let scale = T::one().max(rm.max_abs());
    let mut out = SymmetryResiduals::default();
    let mut anti = T::zero();
    let mut pair = T::zero();
    let mut first = T::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = rm.at(&[i, j, k, l]);
                    anti = anti.max((v + rm.at(&[j, i, k, l])).abs()).max((v + rm.at(&[i, j, l, k])).abs());
                    pair = pair.max((v - rm.at(&[k, l, i, j])).abs());
                    first = first.max((v + rm.at(&[j, k, i, l]) + rm.at(&[k, i, j, l])).abs());
                }
            }
        }
    }
    out.riem_antisym = (anti / scale).as_f64();
    out.riem_pair = (pair / scale).as_f64();
    out.riem_first_bianchi = (first / scale).as_f64();
    out.ric_symmetric = (b.ric.max_abs_diff(&b.ric.transpose()) / scale).as_f64();
    if let Some(w) = b.weyl.as_ref() {
        let w = to_frame(w, &e);
        let mut worst = T::zero();
        for a in 0..n {
            for c in 0..n {
                // contractions over (1,3), (1,4), (2,3), (2,4) slot pairs
                let mut s13 = T::zero();
                let mut s14 = T::zero();
                let mut s23 = T::zero();
                let mut s24 = T::zero();
                for k in 0..n {
                    s13 = s13 + w.at(&[k, a, k, c]);
                    s14 = s14 + w.at(&[k, a, c, k]);
                    s23 = s23 + w.at(&[a, k, k, c]);
                    s24 = s24 + w.at(&[a, k, c, k]);
                }
                worst = worst.max(s13.abs()).max(s14.abs()).max(s23.abs()).max(s24.abs());
            }
        }
        out.weyl_trace = (worst / scale).as_f64();
    }
    Ok(out)
}

/// Outcome of the round-sphere sign calibration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub sphere_dim: usize,
    /// Largest `|Ric − (n−1)g|` in an orthonormal frame.
    pub ricci_residual: f64,
    /// Smallest orthonormal `R_ijij` (should be +1).
    pub min_sectional: f64,
    pub passed: bool,
    pub digest: String,
}

/// Checks that the unit `n`-sphere yields `R_ijij = +1` and `Ric = (n−1)g`
/// with the engine's conventions. Every report embeds the result.
pub fn calibrate_sign_convention(n: usize) -> Result<Calibration> {
    let sphere = round_sphere::<f64>(n, 1.0)?;
    let x = sphere.domain.midpoint();
    let b = CurvatureFields::compute(&sphere, &x, 2)?.bundle()?;
    let e = orthonormal_frame(&b.g)?;
    let ric = to_frame(&b.ric, &e);
    let rm = to_frame(&b.riem, &e);
    let ricci_residual = ric.max_abs_diff(&Tensor::identity(n).scale((n - 1) as f64));
    let mut min_sectional = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                min_sectional = min_sectional.min(rm.at(&[i, j, i, j]));
            }
        }
    }
    let passed = ricci_residual < 1e-10 && (min_sectional - 1.0).abs() < 1e-10;
    let mut h = Sha256::new();
    h.update(format!("R_ijij=+1;Ric_ik=g^jl R_ijkl;n={n};ric={ricci_residual:.1e};k={min_sectional:.12}").as_bytes());
    let digest = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    Ok(Calibration { sphere_dim: n, ricci_residual, min_sectional, passed, digest })
}
