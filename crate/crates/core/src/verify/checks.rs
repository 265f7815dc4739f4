//! Named checks: the catalog with tolerances and anchors, and the runners that
//! evaluate them on a model.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{bianchi_selftests, calibrate_sign_convention, symmetry_residuals};
use crate::curvature::{CurvatureBundle, CurvatureFields};
use crate::error::{Error, Result};
use crate::field::{ChartPoint, SAMPLING_SEED};
use crate::finite_diff::fd_curvature;
use crate::linalg::{orthonormal_frame, symmetric_eigenvalues, to_frame};
use crate::metric::MetricSpec;
use crate::models::random::random_warped_metric;
use crate::models::warped::{inex_scalar_profile, warped_ricci_analytic, InexKind, InexParams, WarpedSpec};
use crate::models::QEInstance;
use crate::tensor::{kulkarni_nomizu, Tensor};
use crate::verify::algebraic as alg;
use crate::verify::classification::{admissible_scalar_set, classify_scalar};
use crate::verify::identities::{self as id, QeConstants};
use crate::verify::identity::Identity;
use crate::verify::point::PointData;

/// Groups of checks selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Defining,
    Lemmafund,
    Tensors,
    Dim4,
    Algebraic,
    EngineSelftest,
    Classification,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Defining,
        Suite::Lemmafund,
        Suite::Tensors,
        Suite::Dim4,
        Suite::Algebraic,
        Suite::EngineSelftest,
        Suite::Classification,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Defining => "defining",
            Suite::Lemmafund => "lemmafund",
            Suite::Tensors => "tensors",
            Suite::Dim4 => "dim4",
            Suite::Algebraic => "algebraic",
            Suite::EngineSelftest => "engine-selftest",
            Suite::Classification => "classification",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.iter().copied().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
            Error::config("suites", format!("unknown suite {s:?}; available: {}", names.join(", ")))
        })
    }
}

/// One catalog row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckSpec {
    pub name: &'static str,
    pub suite: Suite,
    pub tolerance: f64,
    pub anchor: &'static str,
}

const fn spec(name: &'static str, suite: Suite, tolerance: f64, anchor: &'static str) -> CheckSpec {
    CheckSpec { name, suite, tolerance, anchor }
}

use Suite::*;

/// Every check the runner can emit, sorted by name.
pub const CHECK_CATALOG: &[CheckSpec] = &[
    spec("algebraic.cubic_expansion", Algebraic, 1e-12, "(a+b+c)³ = 3(a+b+c)(a²+b²+c²) − 2(a³+b³+c³) + 6abc"),
    spec("algebraic.curvature_quartic_conversion", Algebraic, 1e-10, "R_ds R_dijs R_jl R_il rewritten through P = Ric − ρg"),
    spec("algebraic.kn_contraction", Algebraic, 1e-12, "g^jl (S⊙g)_ijkl = (n−2)S_ik + (tr S) g_ik"),
    spec("algebraic.kn_symmetric", Algebraic, 1e-12, "S⊙T = T⊙S"),
    spec("algebraic.lemsum_bound", Algebraic, 1e-12, "a_i a_j ≥ b/(2(n−1)), b = (Σa_i)² − (n−1)Σa_i²"),
    spec("algebraic.lemsum_sign", Algebraic, 0.0, "b ≥ 0 ⇒ all a_i ≥ 0 or all a_i ≤ 0"),
    spec("algebraic.quartic_sum", Algebraic, 1e-10, "Σμ_α⁴ = −10m⁴ρ⁴/3 + (8mρ/3) Tr(P³)"),
    spec("algebraic.symmetric_product", Algebraic, 1e-10, "3μ₂μ₃μ₄ = Tr(P³) − 2m³ρ³"),
    spec("algebraic.t_norm_synthetic", Algebraic, 1e-10, "Ric̊_ik T_ijk ∇_ju = ((n−2)/(2(m+n−2)))|T|² on synthetic data"),
    spec("algebraic.trace_cube_conversion", Algebraic, 1e-10, "Tr(Ric³) = Tr(P³) + 3ρ|P|² + 3ρ²Tr(P) + nρ³"),
    spec("algebraic.trace_fourth_conversion", Algebraic, 1e-10, "Tr(Ric⁴) = Tr(P⁴) + 4ρTr(P³) + 6ρ²|P|² + 4ρ³Tr(P) + nρ⁴"),
    spec("classification.admissible_below_n_lambda", Classification, 0.0, "R_k < nλ for every admissible k"),
    spec("classification.expected_k", Classification, 0.0, "R = (k(m−n) + n(n−1))λ/(m+n−k−1) classifies the model's R as its k"),
    spec("classification.inex_analytic_ricci", Classification, 1e-8, "Ric(∂t,∂t) = −(l/φ)φ'', fiber Ric = [κ − (φφ'' + (l−1)φ'²)]/φ²"),
    spec("classification.inex_forced_constant", Classification, 1e-6, "degenerate warping forces R = −n(n−1)β (hyperbolic) or R = 0 (cone)"),
    spec("classification.inex_nonconstant", Classification, 0.0, "generic warping: sampled variance of R exceeds 1e−3"),
    spec("classification.inex_profile", Classification, 1e-6, "cone R = (n−1)(κ−(n−2)α²)/(α²t²); hyperbolic R = −2(n−1)β + (n−1)(κ−(n−2)φ'²)/φ²"),
    spec("classification.round_trip", Classification, 0.0, "classify(R_k) = k for every admissible k"),
    spec("classification.sampled_k", Classification, 0.0, "sampled constant R classifies as the model's k"),
    spec("defining.boundary_scalar", Defining, 1e-8, "R^∂M = R − 2Ric(ν,ν) on the totally geodesic boundary"),
    spec("defining.equation", Defining, 1e-8, "∇²u = (u/m)(Ric − λg)"),
    spec("defining.mu_constant", Defining, 1e-8, "(u²/m)(R − λn) + (m−1)|∇u|² + λu² = μ is constant"),
    spec("defining.potential_boundary", Defining, 1e-12, "u = 0 on ∂M"),
    spec("defining.ricci_eigenvalue_spread", Defining, 1e-8, "sorted Ricci eigenvalues constant across samples"),
    spec("defining.ricci_eigenvalues", Defining, 1e-8, "sorted Ricci eigenvalues equal the model's closed form"),
    spec("defining.scalar_constant", Defining, 1e-8, "R constant across samples (relative spread)"),
    spec("defining.scalar_expected", Defining, 1e-8, "R equals the model's admissible value (relative)"),
    spec("defining.trace", Defining, 1e-8, "Δu = (u/m)(R − nλ)"),
    spec("dim4.h_nonnegative", Dim4, 1e-10, "h = |∇u|²(Tr(P³) − 2m³ρ³) ≥ 0"),
    spec("dim4.h_weighted_bound.lhs", Dim4, 1e-7, "uL_{m+2}h, magnitude"),
    spec("dim4.h_weighted_bound.rhs", Dim4, 1e-7, "2(9m+7)ρuh, magnitude"),
    spec("dim4.h_weighted_bound.shortfall", Dim4, 1e-7, "uL_{m+2}h ≥ 2(9m+7)ρuh"),
    spec("dim4.p_cube_drift_laplacian.lhs", Dim4, 1e-6, "uΔTr(P³) + (m+2)⟨∇Tr(P³),∇u⟩, magnitude"),
    spec("dim4.p_cube_drift_laplacian.residual", Dim4, 1e-6, "uΔTr(P³) + (m+2)⟨∇Tr(P³),∇u⟩ = 6uλTr(P³) + 6(λ²/(m+1))u|P|² + …"),
    spec("dim4.p_cube_drift_laplacian.rhs", Dim4, 1e-6, "6uλTr(P³) + 6(λ²/(m+1))u|P|² + …, magnitude"),
    spec("dim4.p_cube_weighted.lhs", Dim4, 1e-6, "uL_{m+2}Tr(P³), magnitude"),
    spec("dim4.p_cube_weighted.residual", Dim4, 1e-6, "uL_{m+2}Tr(P³) = 8(m+1)ρuTr(P³) + 6u∇_sP_ij∇_sP_jlP_il − 3mρu|∇P|² − 16m³(m+1)ρ⁴u"),
    spec("dim4.p_cube_weighted.rhs", Dim4, 1e-6, "8(m+1)ρuTr(P³) + … − 16m³(m+1)ρ⁴u, magnitude"),
    spec("dim4.p_cube_weighted_bound", Dim4, 1e-6, "uL_{m+2}Tr(P³) ≥ 8(m+1)ρuTr(P³) − 3mρu|∇P|² − 16m³(m+1)ρ⁴u"),
    spec("dim4.p_curvature_contraction", Dim4, 1e-8, "uP_ikR_jiksP_js = −(u/2)|∇P|² − (m+1)ρu|P|²"),
    spec("dim4.p_eigenvalues", Dim4, 1e-8, "eigenvalues of P are {0, 0, mρ, mρ}"),
    spec("dim4.p_norm", Dim4, 1e-8, "|P|² = 2m²ρ²"),
    spec("dim4.p_trace", Dim4, 1e-8, "Tr(P) = 2mρ"),
    spec("engine.calibration", EngineSelftest, 1e-10, "unit sphere: R_ijij = +1, Ric = (n−1)g"),
    spec("engine.contracted_bianchi", EngineSelftest, 1e-6, "∇_jR_jk = ½∇_kR"),
    spec("engine.contracted_bianchi_once", EngineSelftest, 1e-6, "∇_jR_jikl = ∇_kR_il − ∇_lR_ik"),
    spec("engine.cotton_skew", EngineSelftest, 1e-6, "C_ijk = −C_jik"),
    spec("engine.cotton_trace", EngineSelftest, 1e-6, "C is trace-free in any two indices"),
    spec("engine.cotton_weyl_divergence", EngineSelftest, 1e-6, "C_ijk = −((n−2)/(n−3))∇_lW_ijkl"),
    spec("engine.curvature_symmetries", EngineSelftest, 1e-10, "Riemann skew/pair/first-Bianchi symmetries, Ricci symmetric, Weyl trace-free"),
    spec("engine.dual_path_ricci", EngineSelftest, 1e-5, "jet Ricci equals finite-difference Ricci (relative)"),
    spec("engine.ricci_commutation", EngineSelftest, 1e-6, "∇_j∇_iR_jk = ∇_i∇_jR_jk + R_jijsR_sk + R_jiksR_js"),
    spec("lemmafund.integrability", Lemmafund, 1e-8, "(u²/m)(R − λn) + (m−1)|∇u|² = −λu² + μ"),
    spec("lemmafund.ricci_curl", Lemmafund, 1e-8, "u(∇_iR_jk − ∇_jR_ik) = mR_ijkl∇_lu + λ(∇_iu g_jk − ∇_ju g_ik) − (∇_iu R_jk − ∇_ju R_ik)"),
    spec("lemmafund.ricci_on_gradient", Lemmafund, 1e-8, "Ric(∇u) = ((n−1)λ − R)/(m−1) ∇u"),
    spec("lemmafund.scalar_gradient", Lemmafund, 1e-8, "½u∇R = −(m−1)Ric(∇u) − (R − (n−1)λ)∇u"),
    spec("lemmafund.scalar_laplacian", Lemmafund, 1e-6, "½ΔR + ((m+2)/2u)⟨∇u,∇R⟩ = −((m−1)/m)|Ric̊|² − ((n+m−1)/mn)(R−nλ)(R − n(n−1)λ/(n+m−1))"),
    spec("lemmafund.traceless_ricci_norm", Lemmafund, 1e-8, "((m−1)/m)|Ric̊|² = −((n+m−1)/mn)(R−nλ)(R − n(n−1)λ/(n+m−1))"),
    spec("lemmafund.transnormal", Lemmafund, 1e-8, "|∇u|² = μ/(m−1) − ((R + (m−n)λ)/(m(m−1)))u²"),
    spec("tensors.cotton_vanishes", Tensors, 1e-8, "C = 0 for parallel Ricci"),
    spec("tensors.cotton_weyl_decomposition", Tensors, 1e-8, "uC_ijk = mW_ijkl∇_lu + T_ijk"),
    spec("tensors.laplacian_ricci.lhs", Tensors, 1e-6, "uΔR_ik, magnitude"),
    spec("tensors.laplacian_ricci.residual", Tensors, 1e-6, "uΔR_ik = ∇_iR_sk∇_su + m∇_kR_is∇_su + (u/2)∇_i∇_kR + …"),
    spec("tensors.laplacian_ricci.rhs", Tensors, 1e-6, "∇_iR_sk∇_su + … + (λu/m)(R − (n−1)λ)g_ik, magnitude"),
    spec("tensors.p_annihilates_gradient", Tensors, 1e-8, "P(∇u) = 0"),
    spec("tensors.p_cube_trace.lhs", Tensors, 1e-6, "uΔTr(P³), magnitude"),
    spec("tensors.p_cube_trace.residual", Tensors, 1e-6, "uΔTr(P³) expanded in ∇P, Rm·P and traces of P"),
    spec("tensors.p_cube_trace.rhs", Tensors, 1e-6, "expansion of uΔTr(P³), magnitude"),
    spec("tensors.p_curl", Tensors, 1e-8, "(u/m)(∇_iP_jk − ∇_jP_ik) = Q_ijkl∇_lu"),
    spec("tensors.p_curl_general", Tensors, 1e-8, "u(∇_iP_jk − ∇_jP_ik) = mQ_ijkl∇_lu + ½(g⊙g)_ijkl P_sl∇_su"),
    spec("tensors.p_gradient_contraction", Tensors, 1e-8, "∇_iP_sj∇_su = −(u/m)P²_ij + ((λ−ρ)/m)uP_ij"),
    spec("tensors.p_gradient_gradient", Tensors, 1e-8, "(u/m)∇_iP_jk∇_iu = (u/m)²((λ−ρ)P_jk − P²_jk) + Q_ijkl∇_lu∇_iu"),
    spec("tensors.parallel_ricci", Tensors, 1e-8, "∇Ric = 0"),
    spec("tensors.ricci_cube_trace.lhs", Tensors, 1e-6, "uΔTr(Ric³) + (m+2)⟨∇u,∇Tr(Ric³)⟩, magnitude"),
    spec("tensors.ricci_cube_trace.residual", Tensors, 1e-6, "uΔTr(Ric³) + (m+2)∇_su∇_sTr(Ric³) = 3(m+1)∇_iR_sjR_jlR_il∇_su + …"),
    spec("tensors.ricci_cube_trace.rhs", Tensors, 1e-6, "3(m+1)∇_iR_sjR_jlR_il∇_su + …, magnitude"),
    spec("tensors.ricci_laplacian_vanishes", Tensors, 1e-7, "ΔRic = 0 for parallel Ricci"),
    spec("tensors.t_forms_agree", Tensors, 1e-8, "T written with Ric equals T written with Ric̊"),
    spec("tensors.t_norm_contraction", Tensors, 1e-8, "Ric̊_ikT_ijk∇_ju = ((m+n−2)/(n−2))|Ric̊|²|∇u|² − ((2m+n−2)/(n−2))Ric̊²(∇u,∇u) + …"),
    spec("tensors.t_norm_square", Tensors, 1e-8, "… = ((n−2)/(2(m+n−2)))|T|²"),
    spec("tensors.t_spectrum", Tensors, 1e-8, "((n−2)/(2(m+n−2)))|T|² = ((m+n−2)/(n−2))[Σ_{i≥2}ξ_i² − (Σ_{i≥2}ξ_i)²/(n−1)]|∇u|²"),
    spec("tensors.t_vanishes", Tensors, 1e-8, "T = 0 when Ric has eigenvalues ξ₁ on ∇u and a single value on ∇u^⊥"),
    spec("tensors.weyl_gradient", Tensors, 1e-8, "W_ijkl∇_lu = 0 when T = 0 and C = 0"),
    spec("tensors.weyl_norm_constant", Tensors, 1e-8, "|W|² constant across samples"),
];

pub fn find_check(name: &str) -> Option<&'static CheckSpec> {
    CHECK_CATALOG.iter().find(|c| c.name == name)
}

/// Outcome of one named check. `passed ⇔ residual ≤ tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub points_sampled: usize,
    pub notes: String,
    pub paper_anchor: String,
}

/// A selected check that does not apply to the model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedCheck {
    pub name: String,
    pub reason: String,
}

/// Accumulates results, applying tolerance overrides.
#[derive(Debug, Default)]
pub struct Collector {
    pub overrides: BTreeMap<String, f64>,
    pub results: Vec<CheckResult>,
    pub skipped: Vec<SkippedCheck>,
}

impl Collector {
    pub fn new(overrides: BTreeMap<String, f64>) -> Self {
        Self { overrides, ..Default::default() }
    }

    pub fn record(&mut self, name: &str, residual: f64, points: usize, notes: impl Into<String>) {
        let spec = find_check(name).unwrap_or_else(|| panic!("check {name} missing from catalog"));
        let tolerance = self.overrides.get(name).copied().unwrap_or(spec.tolerance);
        self.results.push(CheckResult {
            name: name.to_string(),
            residual,
            tolerance,
            // NaN residuals fail
            passed: residual <= tolerance,
            points_sampled: points,
            notes: notes.into(),
            paper_anchor: spec.anchor.to_string(),
        });
    }

    pub fn skip(&mut self, name: &str, reason: impl Into<String>) {
        debug_assert!(find_check(name).is_some() || name.contains('*'), "unknown check {name}");
        self.skipped.push(SkippedCheck { name: name.to_string(), reason: reason.into() });
    }

    pub fn finish(mut self) -> (Vec<CheckResult>, Vec<SkippedCheck>) {
        self.results.sort_by(|a, b| a.name.cmp(&b.name));
        self.skipped.sort_by(|a, b| a.name.cmp(&b.name));
        (self.results, self.skipped)
    }
}

type Builder = fn(&PointData<f64>, &QeConstants<f64>) -> Result<Identity<f64>>;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Measure {
    Residual,
    Shortfall,
    Lhs,
    Rhs,
}

impl Measure {
    fn of(self, i: &Identity<f64>) -> f64 {
        match self {
            Measure::Residual => i.residual(),
            Measure::Shortfall => i.shortfall(),
            Measure::Lhs => i.lhs_magnitude(),
            Measure::Rhs => i.rhs_magnitude(),
        }
    }
}

const PLAIN: &[(&str, Measure)] = &[("", Measure::Residual)];
const SIDES: &[(&str, Measure)] = &[(".residual", Measure::Residual), (".lhs", Measure::Lhs), (".rhs", Measure::Rhs)];
const BOUND: &[(&str, Measure)] = &[("", Measure::Shortfall)];
const BOUND_SIDES: &[(&str, Measure)] = &[(".shortfall", Measure::Shortfall), (".lhs", Measure::Lhs), (".rhs", Measure::Rhs)];

/// Pointwise identity, which outputs it reports, and whether it is gated on the
/// two-eigenvalue Ricci structure.
struct Pointwise {
    name: &'static str,
    suite: Suite,
    build: Builder,
    outputs: &'static [(&'static str, Measure)],
    needs_two_eigenvalues: bool,
}

const fn pw(name: &'static str, suite: Suite, build: Builder, outputs: &'static [(&'static str, Measure)]) -> Pointwise {
    Pointwise { name, suite, build, outputs, needs_two_eigenvalues: false }
}

const POINTWISE: &[Pointwise] = &[
    pw("defining.equation", Defining, id::defining_equation, PLAIN),
    pw("defining.trace", Defining, id::trace_equation, PLAIN),
    pw("lemmafund.scalar_gradient", Lemmafund, id::scalar_gradient, PLAIN),
    pw("lemmafund.integrability", Lemmafund, id::integrability, PLAIN),
    pw("lemmafund.scalar_laplacian", Lemmafund, id::scalar_laplacian, PLAIN),
    pw("lemmafund.ricci_curl", Lemmafund, id::ricci_curl, PLAIN),
    pw("lemmafund.traceless_ricci_norm", Lemmafund, id::traceless_ricci_norm, PLAIN),
    pw("lemmafund.transnormal", Lemmafund, id::transnormal, PLAIN),
    pw("lemmafund.ricci_on_gradient", Lemmafund, id::ricci_on_gradient, PLAIN),
    pw("tensors.p_annihilates_gradient", Tensors, id::p_annihilates_gradient, PLAIN),
    pw("tensors.cotton_weyl_decomposition", Tensors, id::cotton_weyl_decomposition, PLAIN),
    pw("tensors.t_forms_agree", Tensors, id::t_forms_agree, PLAIN),
    Pointwise { name: "tensors.t_vanishes", suite: Tensors, build: id::t_vanishes, outputs: PLAIN, needs_two_eigenvalues: true },
    Pointwise { name: "tensors.weyl_gradient", suite: Tensors, build: id::weyl_gradient, outputs: PLAIN, needs_two_eigenvalues: true },
    pw("tensors.t_norm_contraction", Tensors, id::t_norm_contraction, PLAIN),
    pw("tensors.t_norm_square", Tensors, id::t_norm_square_identity, PLAIN),
    pw("tensors.p_curl_general", Tensors, id::p_curl_general, PLAIN),
    pw("tensors.p_curl", Tensors, id::p_curl, PLAIN),
    pw("tensors.p_gradient_gradient", Tensors, id::p_gradient_gradient, PLAIN),
    pw("tensors.p_gradient_contraction", Tensors, id::p_gradient_contraction, PLAIN),
    pw("tensors.laplacian_ricci", Tensors, id::laplacian_ricci, SIDES),
    pw("tensors.ricci_cube_trace", Tensors, id::ricci_cube_trace, SIDES),
    pw("tensors.p_cube_trace", Tensors, id::p_cube_trace, SIDES),
    pw("dim4.p_trace", Dim4, id::p_trace, PLAIN),
    pw("dim4.p_norm", Dim4, id::p_norm, PLAIN),
    pw("dim4.p_cube_drift_laplacian", Dim4, id::p_cube_drift_laplacian, SIDES),
    pw("dim4.p_cube_weighted", Dim4, id::p_cube_weighted, SIDES),
    pw("dim4.p_cube_weighted_bound", Dim4, id::p_cube_weighted_bound, BOUND),
    pw("dim4.p_curvature_contraction", Dim4, id::p_curvature_contraction, PLAIN),
    pw("dim4.h_weighted_bound", Dim4, id::h_weighted_bound, BOUND_SIDES),
];

/// Errors meaning "this check does not apply here" rather than a failure.
fn not_applicable(e: &Error) -> bool {
    matches!(
        e,
        Error::DimensionTooSmall { .. } | Error::UnsupportedDimension { .. } | Error::WrongScalarCurvature { .. }
    )
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    // f64::max drops NaN, so track it explicitly
    it.into_iter().fold(0.0, |a: f64, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
}

fn spread(values: impl IntoIterator<Item = f64>) -> f64 {
    let (lo, hi) = values.into_iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo.is_finite() {
        hi - lo
    } else {
        0.0
    }
}

/// Constants of a calibrated instance.
pub fn constants(inst: &QEInstance<f64>) -> Result<QeConstants<f64>> {
    let missing = |what: &str| Error::ConstraintViolation(format!("instance {} has no {what}; calibrate first", inst.label));
    Ok(QeConstants {
        n: inst.dim(),
        m: inst.m,
        lambda: inst.lambda,
        rho: inst.rho.ok_or_else(|| missing("rho"))?,
        mu: inst.mu.ok_or_else(|| missing("mu"))?,
    })
}

/// Evaluates point data in parallel, preserving order.
pub fn evaluate_points(inst: &QEInstance<f64>, points: &[ChartPoint<f64>], order: usize) -> Result<Vec<PointData<f64>>> {
    points.par_iter().map(|x| PointData::evaluate(inst, x, order)).collect()
}

/// Max-abs deviation of frame Ricci from `ξ₁ νν + c(I − νν)` with `ν = ∇u/|∇u|`.
pub fn two_eigenvalue_defect(p: &PointData<f64>) -> f64 {
    let n = p.n;
    let norm = p.grad_u2.sqrt();
    if norm == 0.0 {
        return f64::INFINITY;
    }
    let nu = p.du.scale(1.0 / norm);
    let xi = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| nu.at(&[i]) * p.ric.at(&[i, j]) * nu.at(&[j])).sum::<f64>();
    let c = (p.scal - xi) / (n as f64 - 1.0);
    let model = Tensor::from_fn(n, 2, |x| {
        let nn = nu.at(&[x[0]]) * nu.at(&[x[1]]);
        xi * nn + c * (if x[0] == x[1] { 1.0 } else { 0.0 } - nn)
    });
    p.ric.max_abs_diff(&model)
}

/// Both sides of the eigenvalue form of the `|T|²` identity at one point:
/// `((n−2)/(2(m+n−2)))|T|²` and `((m+n−2)/(n−2))[Σ_{i≥2}ξ_i² − (Σ_{i≥2}ξ_i)²/(n−1)]|∇u|²`,
/// with `ξ₁ = Ric̊(ν,ν)`.
pub fn t_spectrum_sides(p: &PointData<f64>, c: &QeConstants<f64>) -> Result<(f64, f64)> {
    let t = id::t_tensor_ricci(p, c)?;
    let (n, m) = (c.n as f64, c.m);
    let lhs = (n - 2.0) / (2.0 * (m + n - 2.0)) * t.norm_sq();
    let e = id::traceless_ricci(p);
    let nu = p.du.scale(1.0 / p.grad_u2.sqrt());
    let xi1 = (0..c.n).flat_map(|i| (0..c.n).map(move |j| (i, j))).map(|(i, j)| nu.at(&[i]) * e.at(&[i, j]) * nu.at(&[j])).sum::<f64>();
    let rest_sq = e.norm_sq() - xi1 * xi1;
    let rest_sum = -xi1;
    let rhs = (m + n - 2.0) / (n - 2.0) * (rest_sq - rest_sum * rest_sum / (n - 1.0)) * p.grad_u2;
    Ok((lhs, rhs))
}

fn run_pointwise(col: &mut Collector, suites: &[Suite], pds: &[PointData<f64>], c: &QeConstants<f64>) -> Result<()> {
    let defects: Vec<f64> = pds.iter().map(two_eigenvalue_defect).collect();
    let structured = defects.iter().all(|&d| d < 1e-6);
    for check in POINTWISE.iter().filter(|p| suites.contains(&p.suite)) {
        if check.needs_two_eigenvalues && !structured {
            col.skip(
                check.name,
                format!(
                    "Ricci lacks a single eigenvalue on the complement of the gradient (defect {:.3e}), so T ≠ 0 here; see tensors.t_spectrum",
                    max_of(defects.iter().copied())
                ),
            );
            continue;
        }
        let built: Vec<Result<Identity<f64>>> = pds.par_iter().map(|p| (check.build)(p, c)).collect();
        let ids = match built.into_iter().collect::<Result<Vec<_>>>() {
            Ok(v) => v,
            Err(e) if not_applicable(&e) => {
                for (suffix, _) in check.outputs {
                    col.skip(&format!("{}{suffix}", check.name), e.to_string());
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        for (suffix, measure) in check.outputs {
            let r = max_of(ids.iter().map(|i| measure.of(i)));
            col.record(&format!("{}{suffix}", check.name), r, pds.len(), "");
        }
    }
    Ok(())
}

/// `R − 2Ric(ν,ν)` at interior points approaching each boundary face,
/// linearly extrapolated in `u` to `u = 0`. Returns the worst deviation from
/// the model's boundary scalar curvature.
pub fn boundary_scalar_residual(inst: &QEInstance<f64>) -> Result<(f64, String)> {
    let target = inst.boundary_scalar.ok_or_else(|| Error::NoBoundaryData { model: inst.label.clone() })?;
    if inst.boundary_faces.is_empty() {
        return Err(Error::NoBoundaryData { model: inst.label.clone() });
    }
    let mid = inst.metric.domain.midpoint();
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for &(coord, face) in &inst.boundary_faces {
        let (lo, hi) = inst.metric.domain.intervals[coord];
        let inward = if (face - lo).abs() <= (face - hi).abs() { 1.0 } else { -1.0 };
        let start = if inward > 0.0 { lo } else { hi };
        let mut us = Vec::new();
        let mut ys = Vec::new();
        for s in [0.0, 0.05, 0.1] {
            let mut x = mid.coords.clone();
            x[coord] = start + inward * s;
            let p = PointData::evaluate(inst, &ChartPoint::new(x), 2)?;
            let nu = p.du.scale(1.0 / p.grad_u2.sqrt());
            let ric_nn: f64 = (0..p.n).flat_map(|i| (0..p.n).map(move |j| (i, j))).map(|(i, j)| nu.at(&[i]) * p.ric.at(&[i, j]) * nu.at(&[j])).sum();
            us.push(p.u);
            ys.push(p.scal - 2.0 * ric_nn);
        }
        let k = us.len() as f64;
        let mu = us.iter().sum::<f64>() / k;
        let my = ys.iter().sum::<f64>() / k;
        let sxx: f64 = us.iter().map(|u| (u - mu) * (u - mu)).sum();
        let sxy: f64 = us.iter().zip(&ys).map(|(u, y)| (u - mu) * (y - my)).sum();
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        let intercept = my - slope * mu;
        worst = worst.max((intercept - target).abs());
        notes.push(format!("face x{coord}={face:.6}: extrapolated {intercept:.10}"));
    }
    notes.push(format!("expected {target}"));
    Ok((worst, notes.join("; ")))
}

fn run_defining_instance(col: &mut Collector, inst: &QEInstance<f64>, pds: &[PointData<f64>]) -> Result<()> {
    let np = pds.len();
    let scal: Vec<f64> = pds.iter().map(|p| p.scal).collect();
    let r_scale = inst.expected_r.abs().max(1.0);
    col.record("defining.scalar_constant", spread(scal.iter().copied()) / r_scale, np, "");
    let r_dev = max_of(scal.iter().map(|r| (r - inst.expected_r).abs() / r_scale));
    col.record("defining.scalar_expected", r_dev, np, format!("expected R = {}", inst.expected_r));

    let eigs: Vec<Vec<f64>> = pds.iter().map(|p| symmetric_eigenvalues(&p.ric)).collect();
    let n = inst.dim();
    let eig_spread = max_of((0..n).map(|k| spread(eigs.iter().map(|e| e[k]))));
    col.record("defining.ricci_eigenvalue_spread", eig_spread, np, "");
    let mut expected = inst.expected_ric_eigenvalues.clone();
    expected.sort_by(|a, b| a.total_cmp(b));
    let eig_dev = max_of(eigs.iter().flat_map(|e| e.iter().zip(&expected).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>()));
    col.record("defining.ricci_eigenvalues", eig_dev, np, format!("expected {expected:?}"));

    let mus: Vec<f64> = pds
        .iter()
        .map(|p| p.u * p.u / inst.m * (p.scal - inst.lambda * n as f64) + (inst.m - 1.0) * p.grad_u2 + inst.lambda * p.u * p.u)
        .collect();
    col.record("defining.mu_constant", spread(mus.iter().copied()), np, format!("mu = {:.12}", inst.mu.unwrap_or(f64::NAN)));

    let mut worst_u = 0.0f64;
    let mut count = 0;
    for &(coord, face) in &inst.boundary_faces {
        for p in pds {
            let mut x = p.x.coords.clone();
            x[coord] = face;
            worst_u = worst_u.max(inst.u.value_unchecked(&x).abs());
            count += 1;
        }
    }
    if count > 0 {
        col.record("defining.potential_boundary", worst_u / inst.u_max, count, "");
    } else {
        col.skip("defining.potential_boundary", "model declares no boundary faces");
    }
    match boundary_scalar_residual(inst) {
        Ok((r, notes)) => col.record("defining.boundary_scalar", r, 3 * inst.boundary_faces.len(), notes),
        Err(e @ Error::NoBoundaryData { .. }) => col.skip("defining.boundary_scalar", e.to_string()),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn run_tensors_instance(col: &mut Collector, pds: &[PointData<f64>], c: &QeConstants<f64>) -> Result<()> {
    let np = pds.len();
    let cov = pds.iter().map(|p| p.require(&p.cov_ric, "order3").map(|t| t.max_abs())).collect::<Result<Vec<_>>>()?;
    col.record("tensors.parallel_ricci", max_of(cov), np, "");
    let lap = pds.iter().map(|p| p.require(&p.lap_ric, "order4").map(|t| t.max_abs())).collect::<Result<Vec<_>>>()?;
    col.record("tensors.ricci_laplacian_vanishes", max_of(lap), np, "");
    if c.n >= 3 {
        let cot = pds.iter().map(|p| p.require(&p.cotton, "order3").map(|t| t.max_abs())).collect::<Result<Vec<_>>>()?;
        col.record("tensors.cotton_vanishes", max_of(cot), np, "");
    } else {
        col.skip("tensors.cotton_vanishes", "Cotton tensor needs n ≥ 3");
    }
    if c.n >= 4 {
        let w: Vec<f64> = pds.iter().filter_map(|p| p.weyl.as_ref().map(|w| w.norm_sq())).collect();
        let mean = w.iter().sum::<f64>() / w.len().max(1) as f64;
        col.record("tensors.weyl_norm_constant", spread(w.iter().copied()), np, format!("|W|² ≈ {mean:.10}"));
    } else {
        col.skip("tensors.weyl_norm_constant", "Weyl tensor vanishes identically for n ≤ 3");
    }
    if c.n >= 3 {
        let sides = pds.iter().map(|p| t_spectrum_sides(p, c)).collect::<Result<Vec<_>>>()?;
        let r = max_of(sides.iter().map(|(a, b)| (a - b).abs()));
        let t_max = max_of(sides.iter().map(|(a, _)| (a * 2.0 * (c.m + c.n as f64 - 2.0) / (c.n as f64 - 2.0)).sqrt()));
        col.record("tensors.t_spectrum", r, np, format!("max |T| = {t_max:.6e}"));
    } else {
        col.skip("tensors.t_spectrum", "auxiliary tensor needs n ≥ 3");
    }
    Ok(())
}

fn run_dim4_instance(col: &mut Collector, pds: &[PointData<f64>], c: &QeConstants<f64>) -> Result<()> {
    let applies = c.n == 4 && pds.iter().all(|p| id::require_dim4(c, p.scal).is_ok());
    if !applies {
        let reason = match pds.first().map(|p| id::require_dim4(c, p.scal)) {
            Some(Err(e)) => e.to_string(),
            _ => "no sample points".into(),
        };
        col.skip("dim4.p_eigenvalues", reason.clone());
        col.skip("dim4.h_nonnegative", reason);
        return Ok(());
    }
    let mr = c.m * c.rho;
    let expected = [0.0, 0.0, mr, mr];
    let dev = max_of(pds.iter().flat_map(|p| {
        let e = symmetric_eigenvalues(&id::p_tensor(p, c.rho));
        e.iter().zip(expected).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>()
    }));
    col.record("dim4.p_eigenvalues", dev, pds.len(), format!("expected {expected:?}"));
    let hs = pds.iter().map(|p| id::h_value(p, c)).collect::<Result<Vec<_>>>()?;
    col.record("dim4.h_nonnegative", max_of(hs.iter().map(|h| (-h).max(0.0))), pds.len(), "");
    Ok(())
}

fn run_classification_qe(col: &mut Collector, inst: &QEInstance<f64>, pds: &[PointData<f64>]) -> Result<()> {
    let n = inst.dim();
    run_classification_table(col, n, inst.m, inst.lambda)?;
    let k = classify_scalar(inst.expected_r, n, inst.m, inst.lambda, 1e-10)?;
    col.record(
        "classification.expected_k",
        if k == Some(inst.expected_k) { 0.0 } else { 1.0 },
        0,
        format!("classified {:?}, expected k = {}", k, inst.expected_k),
    );
    let mean = pds.iter().map(|p| p.scal).sum::<f64>() / pds.len().max(1) as f64;
    let ks = classify_scalar(mean, n, inst.m, inst.lambda, 1e-8)?;
    col.record(
        "classification.sampled_k",
        if ks == Some(inst.expected_k) { 0.0 } else { 1.0 },
        pds.len(),
        format!("sampled R = {mean:.12} classified {ks:?}"),
    );
    for name in ["classification.inex_analytic_ricci", "classification.inex_forced_constant", "classification.inex_nonconstant", "classification.inex_profile"] {
        col.skip(name, "only for the cone and hyperbolic warped models");
    }
    Ok(())
}

fn run_classification_table(col: &mut Collector, n: usize, m: f64, lambda: f64) -> Result<()> {
    let set = admissible_scalar_set(n, m, lambda)?;
    let nl = n as f64 * lambda;
    let above = set.iter().filter(|a| !(a.r < nl)).count();
    col.record("classification.admissible_below_n_lambda", above as f64, set.len(), format!("nλ = {nl}"));
    let mut wrong = 0;
    for a in &set {
        if classify_scalar(a.r, n, m, lambda, 1e-10)? != Some(a.k) {
            wrong += 1;
        }
    }
    col.record("classification.round_trip", wrong as f64, set.len(), "");
    Ok(())
}

/// Runs the classification suite on a cone or hyperbolic warped model.
pub fn run_classification_warped(col: &mut Collector, spec: &WarpedSpec<f64>, params: &InexParams, points: usize) -> Result<()> {
    for name in ["classification.admissible_below_n_lambda", "classification.expected_k", "classification.round_trip", "classification.sampled_k"] {
        col.skip(name, "the warped model is not quasi-Einstein");
    }
    let metric = spec.to_metric_spec();
    let xs = metric.domain.halton_points(points);
    let ts: Vec<f64> = xs.iter().map(|x| x.coords[0]).collect();
    let profile = inex_scalar_profile(params, &ts)?;
    let fields: Vec<CurvatureFields<f64>> = xs.par_iter().map(|x| CurvatureFields::compute(&metric, x, 2)).collect::<Result<_>>()?;
    let chart_r: Vec<f64> = fields.iter().map(|f| f.scal.value()).collect();
    let scale = max_of(profile.r.iter().map(|r| r.abs())).max(1.0);
    let dev = max_of(chart_r.iter().zip(&profile.r).map(|(a, b)| (a - b).abs() / scale));
    col.record("classification.inex_profile", dev, points, "relative to max |R|");

    let mut worst = 0.0f64;
    for (f, x) in fields.iter().zip(&xs) {
        let a = warped_ricci_analytic(spec, x.coords[0]);
        let e = orthonormal_frame(&f.metric.g_values())?;
        let ric = to_frame(&f.ric.map(|j| j.value()), &e);
        worst = worst.max((ric.at(&[0, 0]) - a.horizontal).abs());
        for i in 1..ric.dim() {
            worst = worst.max((ric.at(&[i, i]) - a.vertical).abs());
        }
    }
    col.record("classification.inex_analytic_ricci", worst, points, "");

    if profile.degenerate {
        let target = match params.kind {
            InexKind::Hyperbolic { beta, .. } => -(params.n as f64) * (params.n as f64 - 1.0) * beta,
            InexKind::Cone { .. } => 0.0,
        };
        let dev = max_of(chart_r.iter().map(|r| (r - target).abs()));
        col.record("classification.inex_forced_constant", dev, points, format!("forced R = {target}"));
        col.skip("classification.inex_nonconstant", "degenerate parameters force a constant profile");
    } else {
        let mean = chart_r.iter().sum::<f64>() / chart_r.len() as f64;
        let var = chart_r.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / chart_r.len() as f64;
        col.record("classification.inex_nonconstant", (1e-3 - var).max(0.0), points, format!("variance {var:.6e}"));
        col.skip("classification.inex_forced_constant", "parameters are not degenerate");
    }
    Ok(())
}

/// Finite-difference step of the dual-path Ricci check.
pub const DUAL_PATH_STEP: f64 = 1e-4;

/// Number of random warped metrics and points per metric in the engine suite.
pub const ENGINE_RANDOM_METRICS: u64 = 5;
pub const ENGINE_RANDOM_POINTS: usize = 20;
pub const ENGINE_RANDOM_DIM: usize = 4;

#[derive(Default)]
struct EngineTally {
    twice: f64,
    once: f64,
    commutation: f64,
    cot_skew: f64,
    cot_trace: f64,
    cot_weyl: Option<f64>,
    sym: f64,
    dual: f64,
    points: usize,
}

impl EngineTally {
    fn absorb(&mut self, o: EngineTally) {
        self.twice = max_of([self.twice, o.twice]);
        self.once = max_of([self.once, o.once]);
        self.commutation = max_of([self.commutation, o.commutation]);
        self.cot_skew = max_of([self.cot_skew, o.cot_skew]);
        self.cot_trace = max_of([self.cot_trace, o.cot_trace]);
        self.cot_weyl = match (self.cot_weyl, o.cot_weyl) {
            (Some(a), Some(b)) => Some(max_of([a, b])),
            (a, b) => a.or(b),
        };
        self.sym = max_of([self.sym, o.sym]);
        self.dual = max_of([self.dual, o.dual]);
        self.points += o.points;
    }
}

fn engine_point(metric: &MetricSpec<f64>, x: &ChartPoint<f64>) -> Result<EngineTally> {
    let b = CurvatureBundle::compute(metric, x, 4)?;
    let s = bianchi_selftests(&b)?;
    let sym = symmetry_residuals(&b)?;
    let fd = fd_curvature(metric, &x.coords, DUAL_PATH_STEP)?;
    let scale = b.ric.max_abs().max(1.0);
    Ok(EngineTally {
        twice: s.contracted_twice,
        once: s.contracted_once,
        commutation: s.ricci_commutation.unwrap_or(0.0),
        cot_skew: s.cotton_skew,
        cot_trace: s.cotton_trace,
        cot_weyl: s.cotton_weyl,
        sym: max_of([sym.riem_antisym, sym.riem_pair, sym.riem_first_bianchi, sym.ric_symmetric, sym.weyl_trace]),
        dual: fd.ric.max_abs_diff(&b.ric) / scale,
        points: 1,
    })
}

fn engine_metric(metric: &MetricSpec<f64>, xs: &[ChartPoint<f64>]) -> Result<EngineTally> {
    let parts: Vec<EngineTally> = xs.par_iter().map(|x| engine_point(metric, x)).collect::<Result<_>>()?;
    let mut t = EngineTally::default();
    for p in parts {
        t.absorb(p);
    }
    Ok(t)
}

/// Universal identities on `metric` at `points` samples plus the fixed set of
/// random warped metrics, and the sign-convention calibration.
pub fn run_engine(col: &mut Collector, metric: &MetricSpec<f64>, points: usize) -> Result<()> {
    let cal = calibrate_sign_convention(metric.dim.max(2))?;
    col.record(
        "engine.calibration",
        max_of([cal.ricci_residual, (cal.min_sectional - 1.0).abs()]),
        1,
        format!("unit S^{} digest {}", cal.sphere_dim, &cal.digest[..16]),
    );
    let mut tally = engine_metric(metric, &metric.domain.halton_points(points))?;
    let mut labels = vec![metric.label.clone()];
    for seed in 1..=ENGINE_RANDOM_METRICS {
        let r = random_warped_metric(seed, ENGINE_RANDOM_DIM)?;
        tally.absorb(engine_metric(&r, &r.domain.halton_points(ENGINE_RANDOM_POINTS))?);
        labels.push(r.label.clone());
    }
    let notes = format!("metrics: {}", labels.join(", "));
    let np = tally.points;
    col.record("engine.contracted_bianchi", tally.twice, np, notes.clone());
    col.record("engine.contracted_bianchi_once", tally.once, np, notes.clone());
    col.record("engine.ricci_commutation", tally.commutation, np, notes.clone());
    col.record("engine.cotton_skew", tally.cot_skew, np, notes.clone());
    col.record("engine.cotton_trace", tally.cot_trace, np, notes.clone());
    match tally.cot_weyl {
        Some(r) => col.record("engine.cotton_weyl_divergence", r, np, notes.clone()),
        None => col.skip("engine.cotton_weyl_divergence", "needs n ≥ 4"),
    }
    col.record("engine.curvature_symmetries", tally.sym, np, notes.clone());
    col.record("engine.dual_path_ricci", tally.dual, np, notes);
    Ok(())
}

/// Number of random inputs per algebraic identity.
pub const ALGEBRAIC_SAMPLES: usize = 100;
pub const LEMSUM_SAMPLES: usize = 10_000;
pub const FAMILY_POINTS: usize = 50;

/// Raw-matrix and eigenvalue-tuple identities against brute-force summation.
pub fn run_algebraic(col: &mut Collector) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);

    let (mut bound, mut sign) = (0.0f64, 0usize);
    for k in 0..LEMSUM_SAMPLES {
        let n = 2 + k % 5;
        let mut a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        // every third tuple is one-signed so the b ≥ 0 branch is exercised
        if k % 3 == 0 {
            a.iter_mut().for_each(|x| *x = x.abs() + 0.5);
        }
        a.sort_by(|x, y| y.total_cmp(x));
        let o = alg::lemsum_check(&a)?;
        bound = bound.max(o.bound - o.min_pair_product);
        if !o.sign_condition_holds {
            sign += 1;
        }
    }
    col.record("algebraic.lemsum_bound", bound.max(0.0), LEMSUM_SAMPLES, "max of bound − min pair product");
    col.record("algebraic.lemsum_sign", sign as f64, LEMSUM_SAMPLES, "count of violations");

    let (m, rho) = (2.0, 0.7);
    let (mut prod, mut quart) = (0.0f64, 0.0f64);
    for k in 0..FAMILY_POINTS {
        let theta = std::f64::consts::TAU * k as f64 / FAMILY_POINTS as f64;
        let r = alg::symmetric_sum_identities(alg::constrained_triple(m, rho, theta), m, rho, 1e-10)?;
        prod = prod.max(r.product.abs());
        quart = quart.max(r.quartic.abs());
    }
    col.record("algebraic.symmetric_product", prod, FAMILY_POINTS, format!("m = {m}, ρ = {rho}"));
    col.record("algebraic.quartic_sum", quart, FAMILY_POINTS, format!("m = {m}, ρ = {rho}"));

    let cubic = max_of((0..ALGEBRAIC_SAMPLES).map(|_| {
        alg::cubic_expansion_residual::<f64>(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)).abs()
    }));
    col.record("algebraic.cubic_expansion", cubic, ALGEBRAIC_SAMPLES, "");

    let (mut c3, mut c4, mut cq, mut kn, mut kns, mut tn) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for k in 0..ALGEBRAIC_SAMPLES {
        let n = 3 + k % 4;
        let rho: f64 = rng.gen_range(-1.0..1.0);
        let ric = alg::random_symmetric(&mut rng, n);
        let p = ric.sub(&Tensor::identity(n).scale(rho));
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1.0);
        c3 = c3.max(rel(alg::trace_power_brute(&ric, 3), alg::ricci_cube_via_p(&p, rho)));
        c4 = c4.max(rel(alg::trace_power_brute(&ric, 4), alg::ricci_fourth_via_p(&p, rho)));

        let rm = alg::random_curvature_tensor(&mut rng, n);
        let ric_rm = alg::ricci_contraction(&rm);
        let p_rm = ric_rm.sub(&Tensor::identity(n).scale(rho));
        cq = cq.max(rel(alg::curvature_quartic_direct(&rm, &ric_rm), alg::curvature_quartic_via_p(&rm, &p_rm, rho, ric_rm.trace())));

        let s = alg::random_symmetric(&mut rng, n);
        let t = alg::random_symmetric(&mut rng, n);
        kn = kn.max(alg::kn_contraction_residual(&s));
        kns = kns.max(kulkarni_nomizu(&s, &t).max_abs_diff(&kulkarni_nomizu(&t, &s)));

        let c = QeConstants { n, m: rng.gen_range(1.2..5.0), lambda: rng.gen_range(0.2..3.0), rho: 0.0, mu: 0.0 };
        let scal = rng.gen_range(-3.0..6.0);
        let du = Tensor::from_fn(n, 1, |_| rng.gen_range(-1.0..1.0));
        let a = alg::random_symmetric(&mut rng, n);
        let e = alg::constrained_traceless(&c, scal, &du, &a);
        let (r1, r2) = alg::t_norm_synthetic(&c, scal, rng.gen_range(0.1..1.0), &e, &du)?;
        tn = tn.max(r1.abs()).max(r2.abs());
    }
    col.record("algebraic.trace_cube_conversion", c3, ALGEBRAIC_SAMPLES, "relative");
    col.record("algebraic.trace_fourth_conversion", c4, ALGEBRAIC_SAMPLES, "relative");
    col.record("algebraic.curvature_quartic_conversion", cq, ALGEBRAIC_SAMPLES, "relative; Rm is a sum of Kulkarni–Nomizu products");
    col.record("algebraic.kn_contraction", kn, ALGEBRAIC_SAMPLES, "");
    col.record("algebraic.kn_symmetric", kns, ALGEBRAIC_SAMPLES, "");
    col.record("algebraic.t_norm_synthetic", tn, ALGEBRAIC_SAMPLES, "");
    Ok(())
}

/// Metric order the selected suites need on a quasi-Einstein instance.
pub fn required_order(suites: &[Suite]) -> usize {
    if suites.iter().any(|s| matches!(s, Lemmafund | Tensors | Dim4)) {
        4
    } else {
        2
    }
}

/// Runs the instance-dependent suites on a calibrated quasi-Einstein instance.
pub fn run_instance(col: &mut Collector, inst: &QEInstance<f64>, suites: &[Suite], points: usize) -> Result<()> {
    let c = constants(inst)?;
    let xs = inst.sample_points(points);
    let pds = evaluate_points(inst, &xs, required_order(suites))?;
    run_pointwise(col, suites, &pds, &c)?;
    if suites.contains(&Defining) {
        run_defining_instance(col, inst, &pds)?;
    }
    if suites.contains(&Tensors) {
        run_tensors_instance(col, &pds, &c)?;
    }
    if suites.contains(&Dim4) {
        run_dim4_instance(col, &pds, &c)?;
    }
    if suites.contains(&Classification) {
        run_classification_qe(col, inst, &pds)?;
    }
    Ok(())
}

/// A negative control: a deliberately broken variant and the residual it produces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlOutcome {
    pub name: String,
    /// Residual of the intact identity.
    pub baseline: f64,
    /// Residual after the perturbation.
    pub perturbed: f64,
}

/// `(builder, term label, replacement coefficient as a function of m)`.
type Perturbation = (&'static str, Builder, &'static str, fn(f64, f64) -> f64);

/// Coefficient perturbations of the order-4 identities. The second argument of
/// each closure is the printed coefficient.
const PERTURBATIONS: &[Perturbation] = &[
    ("tensors.laplacian_ricci", id::laplacian_ricci, "ric_squared", |m, _| (m + 1.1) / m),
    ("tensors.laplacian_ricci", id::laplacian_ricci, "rm_ric", |_, c| c + 0.1),
    ("tensors.ricci_cube_trace", id::ricci_cube_trace, "ric_sq_sq", |_, c| c + 0.1),
    ("tensors.p_cube_trace", id::p_cube_trace, "constant", |_, c| c + 0.1),
    ("dim4.p_cube_drift_laplacian", id::p_cube_drift_laplacian, "constant", |_, c| c + 0.1),
    ("dim4.p_cube_weighted", id::p_cube_weighted, "constant", |_, c| c + 0.1),
    ("dim4.p_curvature_contraction", id::p_curvature_contraction, "p_norm", |_, c| c + 0.1),
];

/// Perturbs one printed coefficient in each of the order-4 identities and
/// reports the resulting residuals on `inst`.
pub fn coefficient_controls(inst: &QEInstance<f64>, points: usize) -> Result<Vec<ControlOutcome>> {
    let c = constants(inst)?;
    let pds = evaluate_points(inst, &inst.sample_points(points), 4)?;
    let mut out = Vec::new();
    for &(name, build, label, perturb) in PERTURBATIONS {
        let (mut base, mut bad) = (0.0f64, 0.0f64);
        for p in &pds {
            let mut idn = build(p, &c)?;
            base = base.max(idn.residual());
            let old = idn.coeff(label).ok_or_else(|| Error::ConstraintViolation(format!("{name} has no term {label}")))?;
            idn.set_coeff(label, perturb(c.m, old));
            bad = bad.max(idn.residual());
        }
        out.push(ControlOutcome { name: format!("{name}[{label}]"), baseline: base, perturbed: bad });
    }
    Ok(out)
}

fn max_pointwise(inst: &QEInstance<f64>, build: Builder, points: usize) -> Result<f64> {
    let c = constants(inst)?;
    let pds = evaluate_points(inst, &inst.sample_points(points), 2)?;
    let ids = pds.iter().map(|p| build(p, &c)).collect::<Result<Vec<_>>>()?;
    Ok(max_of(ids.iter().map(|i| i.residual())))
}

/// Defining-equation residual with `λ` replaced by `λ + delta`.
pub fn wrong_lambda_control(inst: &QEInstance<f64>, delta: f64, points: usize) -> Result<ControlOutcome> {
    let baseline = max_pointwise(inst, id::defining_equation, points)?;
    let mut bad = inst.with_lambda(inst.lambda + delta);
    bad.rho = inst.rho;
    bad.mu = inst.mu;
    Ok(ControlOutcome {
        name: format!("defining.equation[lambda+{delta}]"),
        baseline,
        perturbed: max_pointwise(&bad, id::defining_equation, points)?,
    })
}

/// Transnormal residual with the potential shifted to `u + shift`, keeping the
/// instance's `μ`.
pub fn shifted_potential_control(inst: &QEInstance<f64>, shift: f64, points: usize) -> Result<ControlOutcome> {
    let baseline = max_pointwise(inst, id::transnormal, points)?;
    let mut bad = inst.with_potential_shift(shift);
    bad.mu = inst.mu;
    Ok(ControlOutcome {
        name: format!("lemmafund.transnormal[u+{shift}]"),
        baseline,
        perturbed: max_pointwise(&bad, id::transnormal, points)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_sorted_and_unique() {
        for w in CHECK_CATALOG.windows(2) {
            assert!(w[0].name < w[1].name, "{} !< {}", w[0].name, w[1].name);
        }
    }

    #[test]
    fn catalog_prefixes_match_suites() {
        for c in CHECK_CATALOG {
            let prefix = c.name.split('.').next().unwrap();
            let expected = if c.suite == EngineSelftest { "engine" } else { c.suite.name() };
            assert_eq!(prefix, expected, "{}", c.name);
        }
    }

    #[test]
    fn pointwise_outputs_are_catalogued() {
        for p in POINTWISE {
            for (suffix, _) in p.outputs {
                let name = format!("{}{suffix}", p.name);
                let spec = find_check(&name).unwrap_or_else(|| panic!("{name}"));
                assert_eq!(spec.suite, p.suite);
            }
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
