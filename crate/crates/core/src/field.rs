//! Chart points, sampling domains and scalar-field evaluators.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::{Jet, MAX_JET_ORDER};
use crate::scalar::Scalar;

/// Distance kept from coordinate singularities, in chart units.
pub const SINGULARITY_MARGIN: f64 = 0.1;

/// Fixed leap into the low-discrepancy sequence; part of the reproducibility
/// contract, not user-settable.
pub const SAMPLING_SEED: u64 = 409;

/// A point in chart coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint<T> {
    pub coords: Vec<T>,
}

impl<T: Scalar> ChartPoint<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.as_f64()).collect()
    }
}

impl<T: Scalar> From<Vec<T>> for ChartPoint<T> {
    fn from(coords: Vec<T>) -> Self {
        Self { coords }
    }
}

/// Product of closed coordinate intervals that already exclude chart
/// singularities by the margin.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain<T> {
    pub intervals: Vec<(T, T)>,
}

impl<T: Scalar> Domain<T> {
    pub fn new(intervals: Vec<(T, T)>) -> Self {
        Self { intervals }
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim() && self.intervals.iter().zip(x).all(|(&(lo, hi), &v)| lo <= v && v <= hi)
    }

    pub fn check(&self, x: &[T]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DomainViolation {
                point: x.iter().map(|v| v.as_f64()).collect(),
                detail: format!("expected {} coordinates, got {}", self.dim(), x.len()),
            });
        }
        for (i, (&(lo, hi), &v)) in self.intervals.iter().zip(x).enumerate() {
            if !(lo <= v && v <= hi) {
                return Err(Error::DomainViolation {
                    point: x.iter().map(|v| v.as_f64()).collect(),
                    detail: format!("coordinate {i} = {v} not in [{lo}, {hi}]"),
                });
            }
        }
        Ok(())
    }

    pub fn midpoint(&self) -> ChartPoint<T> {
        let half = T::lit(0.5);
        ChartPoint::new(self.intervals.iter().map(|&(lo, hi)| (lo + hi) * half).collect())
    }

    /// Maps a point of the unit cube into the domain.
    pub fn from_unit(&self, s: &[f64]) -> ChartPoint<T> {
        ChartPoint::new(
            self.intervals.iter().zip(s).map(|(&(lo, hi), &si)| lo + (hi - lo) * T::lit(si)).collect(),
        )
    }

    /// Deterministic Halton points filling the domain.
    pub fn halton_points(&self, count: usize) -> Vec<ChartPoint<T>> {
        halton(self.dim(), SAMPLING_SEED, count).iter().map(|s| self.from_unit(s)).collect()
    }
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// `count` points of the Halton sequence in `[0,1]^dim`, starting at index `start`.
pub fn halton(dim: usize, start: u64, count: usize) -> Vec<Vec<f64>> {
    assert!(dim <= PRIMES.len(), "halton dimension too large");
    (0..count as u64)
        .map(|k| (0..dim).map(|d| radical_inverse(start + k, PRIMES[d])).collect())
        .collect()
}

/// Closure computing a field from coordinate jets.
pub type FieldFn<T> = Arc<dyn Fn(&[Jet<T>]) -> Jet<T> + Send + Sync>;

/// A smooth scalar field on a chart.
#[derive(Clone)]
pub struct ScalarField<T> {
    pub f: FieldFn<T>,
    pub domain: Domain<T>,
}

impl<T: Scalar> fmt::Debug for ScalarField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField").field("domain", &self.domain).finish_non_exhaustive()
    }
}

impl<T: Scalar> ScalarField<T> {
    pub fn new(domain: Domain<T>, f: impl Fn(&[Jet<T>]) -> Jet<T> + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), domain }
    }

    /// Value without the domain check, e.g. on a boundary face.
    pub fn value_unchecked(&self, x: &[T]) -> T {
        let vars = Jet::variables(x, 0).expect("order 0 is supported");
        (self.f)(&vars).value()
    }
}

/// The jet of `field` at `x` up to `order`.
pub fn jet_eval<T: Scalar>(field: &ScalarField<T>, x: &ChartPoint<T>, order: usize) -> Result<Jet<T>> {
    if order > MAX_JET_ORDER {
        return Err(Error::OrderUnsupported { requested: order, max: MAX_JET_ORDER });
    }
    field.domain.check(&x.coords)?;
    let vars = Jet::variables(&x.coords, order)?;
    Ok((field.f)(&vars))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_is_deterministic_and_in_cube() {
        let a = halton(3, SAMPLING_SEED, 20);
        assert_eq!(a, halton(3, SAMPLING_SEED, 20));
        assert!(a.iter().flatten().all(|&v| (0.0..1.0).contains(&v)));
    }

    #[test]
    fn domain_rejects_outside_points() {
        let d = Domain::new(vec![(0.1f64, 1.0)]);
        assert!(d.check(&[0.05]).is_err());
        assert!(d.check(&[0.5]).is_ok());
    }
}
