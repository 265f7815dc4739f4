//! Model catalog addressable by name and parameter map.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::metric::MetricSpec;
use crate::models::qe::{cylinder, doubly_warped, hemisphere, product_excg, QEInstance};
use crate::models::warped::{inex_spec, InexKind, InexParams, WarpedSpec};

/// One catalog row: name, parameters with defaults, and a short description.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelEntry {
    pub name: &'static str,
    pub params: &'static [(&'static str, f64)],
    pub description: &'static str,
}

pub const MODEL_CATALOG: &[ModelEntry] = &[
    ModelEntry {
        name: "cone",
        params: &[("n", 4.0), ("alpha", 0.8), ("kappa", 2.0)],
        description: "dt^2 + (alpha t)^2 g_F over an Einstein sphere fiber (not quasi-Einstein)",
    },
    ModelEntry {
        name: "cylinder",
        params: &[("n", 3.0), ("m", 2.0), ("lambda", 1.0)],
        description: "dt^2 + ((n-2)/lambda) g_{S^(n-1)}, u = sin(sqrt(lambda/m) t)",
    },
    ModelEntry {
        name: "doubly-warped",
        params: &[("p", 1.0), ("q", 2.0), ("m", 2.0)],
        description: "dr^2 + sin^2 r g_{S^p} + ((q-1)/(p+m)) g_{S^q}, u = cos r, lambda = p+m",
    },
    ModelEntry {
        name: "hemisphere",
        params: &[("n", 3.0), ("m", 2.0)],
        description: "dr^2 + sin^2 r g_{S^(n-1)}, u = cos r, lambda = m+n-1",
    },
    ModelEntry {
        name: "hyperbolic-warped",
        params: &[("n", 4.0), ("beta", 1.0), ("a", 0.5), ("b", 1.0), ("kappa", 2.0)],
        description: "dt^2 + (a sinh(sqrt(beta) t) + b cosh(sqrt(beta) t))^2 g_F (not quasi-Einstein)",
    },
    ModelEntry {
        name: "product-excg",
        params: &[("p", 2.0), ("q", 2.0), ("m", 2.0), ("lambda", 1.0)],
        description: "dt^2 + ((p-1)/lambda) g_{S^p} + ((q-1)/lambda) g_{S^q}, u = sin(sqrt(lambda/m) t)",
    },
];

/// A constructed catalog model.
#[derive(Clone, Debug)]
pub enum Model {
    QuasiEinstein(Box<QEInstance<f64>>),
    Warped { spec: Box<WarpedSpec<f64>>, params: InexParams },
}

impl Model {
    pub fn metric(&self) -> MetricSpec<f64> {
        match self {
            Model::QuasiEinstein(q) => q.metric.clone(),
            Model::Warped { spec, .. } => spec.to_metric_spec(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Model::QuasiEinstein(q) => q.label.clone(),
            Model::Warped { spec, .. } => spec.label.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Model::QuasiEinstein(q) => q.dim(),
            Model::Warped { spec, .. } => spec.dim(),
        }
    }
}

pub fn find_entry(name: &str) -> Option<&'static ModelEntry> {
    MODEL_CATALOG.iter().find(|e| e.name == name)
}

/// Fills defaults and rejects parameters the model does not take.
pub fn resolve_params(name: &str, given: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
    let entry = find_entry(name).ok_or_else(|| {
        let names: Vec<_> = MODEL_CATALOG.iter().map(|e| e.name).collect();
        Error::config("model", format!("unknown model {name:?}; available: {}", names.join(", ")))
    })?;
    let mut out: BTreeMap<String, f64> = entry.params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    for (k, v) in given {
        if !out.contains_key(k) {
            return Err(Error::config(&format!("model.{k}"), format!("model {name} takes no parameter {k}")));
        }
        out.insert(k.clone(), *v);
    }
    Ok(out)
}

fn int_param(p: &BTreeMap<String, f64>, key: &str) -> Result<usize> {
    let v = p[key];
    if v.fract() != 0.0 || v < 0.0 {
        return Err(Error::config(&format!("model.{key}"), format!("{key} must be a non-negative integer")));
    }
    Ok(v as usize)
}

fn wrap(path: &str, r: Result<QEInstance<f64>>) -> Result<Model> {
    r.map(|q| Model::QuasiEinstein(Box::new(q))).map_err(|e| match e {
        Error::InvalidParameter { name, reason } => Error::config(&format!("{path}.{name}"), reason),
        other => other,
    })
}

/// Builds a catalog model from its name and (partial) parameter map.
pub fn build_model(name: &str, given: &BTreeMap<String, f64>) -> Result<Model> {
    let p = resolve_params(name, given)?;
    if let Some(&m) = p.get("m") {
        if !(m > 1.0) {
            return Err(Error::config("model.m", "m must exceed 1"));
        }
    }
    match name {
        "hemisphere" => wrap("model", hemisphere(int_param(&p, "n")?, p["m"])),
        "cylinder" => wrap("model", cylinder(int_param(&p, "n")?, p["m"], p["lambda"])),
        "doubly-warped" => wrap("model", doubly_warped(int_param(&p, "p")?, int_param(&p, "q")?, p["m"])),
        "product-excg" => wrap("model", product_excg(int_param(&p, "p")?, int_param(&p, "q")?, p["m"], p["lambda"])),
        "cone" | "hyperbolic-warped" => {
            let kind = if name == "cone" {
                InexKind::Cone { alpha: p["alpha"] }
            } else {
                InexKind::Hyperbolic { beta: p["beta"], a: p["a"], b: p["b"] }
            };
            let params = InexParams { n: int_param(&p, "n")?, kappa: p["kappa"], kind };
            let spec = inex_spec::<f64>(&params)?;
            let grid: Vec<f64> = spec.to_metric_spec().domain.halton_points(32).iter().map(|x| x.coords[0]).collect();
            spec.check_positive(&grid)?;
            Ok(Model::Warped { spec: Box::new(spec), params })
        }
        _ => unreachable!("resolve_params rejects unknown names"),
    }
}
