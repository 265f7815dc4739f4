//! Seeded random analytic metrics for engine self-tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Domain;
use crate::jet::Jet;
use crate::metric::MetricSpec;
use crate::tensor::{Element, Tensor};

/// Amplitude of the off-identity perturbation; small enough to stay positive definite.
const EPS: f64 = 0.12;

#[derive(Clone, Copy, Debug)]
struct Wave {
    amp: f64,
    freq: [f64; 6],
    phase: f64,
}

impl Wave {
    fn random(rng: &mut ChaCha8Rng) -> Self {
        let mut freq = [0.0; 6];
        for f in freq.iter_mut() {
            *f = rng.gen_range(-1.5..1.5);
        }
        Self { amp: rng.gen_range(-1.0..1.0), freq, phase: rng.gen_range(0.0..std::f64::consts::TAU) }
    }

    fn eval(&self, x: &[Jet<f64>]) -> Jet<f64> {
        let mut arg = x[0].constant_like(self.phase);
        for (xi, &w) in x.iter().zip(&self.freq) {
            arg = &arg + &xi.scaled(w);
        }
        arg.sin().scaled(self.amp)
    }
}

fn sym_waves(rng: &mut ChaCha8Rng, k: usize) -> Vec<Vec<Wave>> {
    (0..k * (k + 1) / 2).map(|_| (0..2).map(|_| Wave::random(rng)).collect()).collect()
}

fn tri(i: usize, j: usize, k: usize) -> usize {
    let (a, b) = (i.min(j), i.max(j));
    a * k - a * (a + 1) / 2 + b
}

fn perturbed_identity(waves: &[Vec<Wave>], x: &[Jet<f64>], k: usize) -> Tensor<Jet<f64>> {
    Tensor::from_fn(k, 2, |ij| {
        let (i, j) = (ij[0], ij[1]);
        let mut e = x[0].constant_like(if i == j { 1.0 } else { 0.0 });
        for w in &waves[tri(i, j, k)] {
            e = &e + &w.eval(x).scaled(EPS / k as f64);
        }
        e
    })
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    if n > 6 {
        return Err(Error::UnsupportedDimension { n, what: "random metric".into() });
    }
    Ok(())
}

/// `g = δ + εS(x)` with `S` a symmetric matrix of random sine waves, on `[−1, 1]^n`.
pub fn random_metric(seed: u64, n: usize) -> Result<MetricSpec<f64>> {
    check_dim(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves = sym_waves(&mut rng, n);
    let domain = Domain::new(vec![(-1.0, 1.0); n]);
    Ok(MetricSpec::new(format!("random(seed={seed}, n={n})"), domain, move |x| perturbed_identity(&waves, x, n)))
}

/// `dt² + φ(t)² h(y)` with random warping function `φ = exp(a t + b sin(w t + c))`
/// and a random fiber metric `h`, on `t ∈ [0.5, 1.5]`, `y ∈ [−1, 1]^{n−1}`.
pub fn random_warped_metric(seed: u64, n: usize) -> Result<MetricSpec<f64>> {
    check_dim(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: f64 = rng.gen_range(-0.5..0.5);
    let b: f64 = rng.gen_range(-0.3..0.3);
    let w: f64 = rng.gen_range(0.5..2.0);
    let c: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let k = n - 1;
    let waves = sym_waves(&mut rng, k);
    let mut iv = vec![(0.5, 1.5)];
    iv.extend(vec![(-1.0, 1.0); k]);
    let domain = Domain::new(iv);
    Ok(MetricSpec::new(format!("random warped(seed={seed}, n={n})"), domain, move |x| {
        let t = &x[0];
        let phi2 = (&t.scaled(a) + &t.scaled(w).add_scalar(c).sin().scaled(b)).scaled(2.0).exp();
        let h = perturbed_identity(&waves, &x[1..], k);
        let zero = t.zero_like();
        Tensor::from_fn(n, 2, |ij| match (ij[0], ij[1]) {
            (0, 0) => t.constant_like(1.0),
            (0, _) | (_, 0) => zero.clone(),
            (i, j) => &phi2 * h.get(&[i - 1, j - 1]),
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_metrics_are_reproducible_and_positive() {
        for seed in 0..5 {
            let s = random_metric(seed, 4).unwrap();
            let t = random_metric(seed, 4).unwrap();
            let x = s.domain.from_unit(&[0.3, 0.7, 0.1, 0.9]);
            assert_eq!(s.values(&x.coords), t.values(&x.coords));
            assert!(crate::linalg::spd_inverse(&s.values(&x.coords)).is_ok());
            let w = random_warped_metric(seed, 3).unwrap();
            let y = w.domain.midpoint();
            assert!(crate::linalg::spd_inverse(&w.values(&y.coords)).is_ok());
        }
    }
}
