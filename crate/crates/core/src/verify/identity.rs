//! Two-sided identities assembled from labelled, weighted terms.

use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// One weighted summand `coeff · value`.
#[derive(Clone, Debug)]
pub struct Term<T> {
    pub label: &'static str,
    pub coeff: T,
    pub value: Tensor<T>,
}

impl<T: Scalar> Term<T> {
    pub fn new(label: &'static str, coeff: T, value: Tensor<T>) -> Self {
        Self { label, coeff, value }
    }

    pub fn scalar(label: &'static str, coeff: T, value: T) -> Self {
        Self { label, coeff, value: Tensor::from_vec(1, 0, vec![value]) }
    }
}

/// `Σ lhs = Σ rhs`, or `Σ lhs ≥ Σ rhs` for inequalities.
#[derive(Clone, Debug)]
pub struct Identity<T> {
    pub lhs: Vec<Term<T>>,
    pub rhs: Vec<Term<T>>,
}

fn side_sum<T: Scalar>(terms: &[Term<T>], like: &Tensor<T>) -> Tensor<T> {
    let mut acc = Tensor::zeros(like.dim(), like.rank());
    for t in terms {
        acc = acc.add(&t.value.scale(t.coeff));
    }
    acc
}

impl<T: Scalar> Identity<T> {
    pub fn new(lhs: Vec<Term<T>>, rhs: Vec<Term<T>>) -> Self {
        assert!(!lhs.is_empty() || !rhs.is_empty(), "identity without terms");
        Self { lhs, rhs }
    }

    fn shape(&self) -> &Tensor<T> {
        self.lhs.first().or(self.rhs.first()).map(|t| &t.value).expect("non-empty")
    }

    pub fn lhs_value(&self) -> Tensor<T> {
        side_sum(&self.lhs, self.shape())
    }

    pub fn rhs_value(&self) -> Tensor<T> {
        side_sum(&self.rhs, self.shape())
    }

    /// Max-abs of `lhs − rhs`.
    pub fn residual(&self) -> T {
        self.lhs_value().max_abs_diff(&self.rhs_value())
    }

    /// Largest violation of `lhs ≥ rhs`, zero when it holds everywhere.
    pub fn shortfall(&self) -> T {
        let d = self.lhs_value().sub(&self.rhs_value());
        d.data().iter().fold(T::zero(), |acc, &v| acc.max(-v))
    }

    pub fn lhs_magnitude(&self) -> T {
        self.lhs_value().max_abs()
    }

    pub fn rhs_magnitude(&self) -> T {
        self.rhs_value().max_abs()
    }

    /// Overwrites the coefficient of the term labelled `label` on either side.
    /// Returns false if no such term exists.
    pub fn set_coeff(&mut self, label: &str, coeff: T) -> bool {
        let mut hit = false;
        for t in self.lhs.iter_mut().chain(self.rhs.iter_mut()) {
            if t.label == label {
                t.coeff = coeff;
                hit = true;
            }
        }
        hit
    }

    pub fn coeff(&self, label: &str) -> Option<T> {
        self.lhs.iter().chain(self.rhs.iter()).find(|t| t.label == label).map(|t| t.coeff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_and_perturbation() {
        let mut id = Identity::new(
            vec![Term::scalar("a", 2.0f64, 3.0)],
            vec![Term::scalar("b", 1.0, 4.0), Term::scalar("c", 0.5, 4.0)],
        );
        assert_eq!(id.residual(), 0.0);
        assert!(id.set_coeff("c", 0.75));
        assert_eq!(id.residual(), 1.0);
        assert_eq!(id.shortfall(), 1.0);
        assert!(!id.set_coeff("zz", 1.0));
    }
}
