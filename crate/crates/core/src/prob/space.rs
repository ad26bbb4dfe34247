use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{self, NumericMode, Scalar, DEFAULT_TOLERANCE};

/// A finite probability space with the discrete sigma-algebra.
///
/// Weights are validated on construction and never renormalized. Cloning is
/// cheap: the weight vector is shared.
#[derive(Clone, Debug)]
pub struct ProbSpace<S: Scalar> {
    weights: Arc<[S]>,
    tolerance: f64,
}

impl<S: Scalar> ProbSpace<S> {
    /// Validates `weights` with the default tolerance.
    pub fn new(weights: Vec<S>) -> Result<Self> {
        Self::with_tolerance(weights, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(weights: Vec<S>, tolerance: f64) -> Result<Self> {
        assert!(tolerance > 0.0, "tolerance must be positive");
        if weights.is_empty() {
            return Err(Error::EmptySupport);
        }
        for (index, w) in weights.iter().enumerate() {
            if *w < S::zero() {
                return Err(Error::NegativeWeight {
                    index,
                    value: w.to_f64(),
                });
            }
        }
        let total = scalar::sum(&weights);
        if !total.near(&S::one(), tolerance) {
            return Err(Error::SumNotOne {
                deviation: (total - S::one()).to_f64(),
            });
        }
        if weights.iter().all(|w| w.is_zero()) {
            return Err(Error::EmptySupport);
        }
        Ok(ProbSpace {
            weights: weights.into(),
            tolerance,
        })
    }

    /// Uniform measure on `n` outcomes.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        let w = S::from_ratio(1, n as i64);
        ProbSpace {
            weights: vec![w; n].into(),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    /// The one-point space.
    pub fn point() -> Self {
        Self::uniform(1)
    }

    pub fn size(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &S {
        &self.weights[i]
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn mode(&self) -> NumericMode {
        S::mode(self.tolerance)
    }

    pub fn is_supported(&self, i: usize) -> bool {
        self.weights[i] > S::zero()
    }

    /// Outcomes of positive weight.
    pub fn support(&self) -> Vec<usize> {
        (0..self.size()).filter(|&i| self.is_supported(i)).collect()
    }

    pub fn is_fully_supported(&self) -> bool {
        self.weights.iter().all(|w| *w > S::zero())
    }

    /// Probability of a set of outcomes.
    pub fn measure<I: IntoIterator<Item = usize>>(&self, set: I) -> S {
        let one = S::one();
        S::dot(set.into_iter().map(|i| (&self.weights[i], &one)))
    }

    /// Same size and weights (within tolerance).
    pub fn same_as(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.weights, &other.weights) {
            return true;
        }
        self.size() == other.size()
            && self
                .weights
                .iter()
                .zip(other.weights.iter())
                .all(|(a, b)| a.near(b, self.tolerance))
    }

    pub(crate) fn ensure_same(&self, other: &Self) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// The same measure in double precision.
    pub fn map_to_f64(&self) -> ProbSpace<f64> {
        ProbSpace {
            weights: self.weights.iter().map(Scalar::to_f64).collect(),
            tolerance: self.tolerance,
        }
    }

    /// Copy with another tolerance (no effect on rational spaces).
    pub fn retolerance(&self, tolerance: f64) -> Self {
        ProbSpace {
            weights: self.weights.clone(),
            tolerance,
        }
    }
}

/// Validates a probability vector.
pub fn make_space<S: Scalar>(weights: Vec<S>) -> Result<ProbSpace<S>> {
    ProbSpace::new(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(a: i64, b: i64) -> Rational {
        Rational::from_ratio(a, b)
    }

    #[test]
    fn uniform_two_point() {
        let p = make_space(vec![0.5, 0.5]).unwrap();
        assert_eq!(p.size(), 2);
        assert!(p.is_fully_supported());
    }

    #[test]
    fn three_point_space_with_null_middle() {
        let p = make_space(vec![r(1, 2), r(0, 1), r(1, 2)]).unwrap();
        assert_eq!(p.support(), vec![0, 2]);
        assert!(!p.is_supported(1));
    }

    #[test]
    fn rejects_bad_sums_and_signs() {
        match make_space(vec![0.5, 0.6]) {
            Err(Error::SumNotOne { deviation }) => assert!((deviation - 0.1).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            make_space(vec![1.5, -0.5]),
            Err(Error::NegativeWeight { index: 1, .. })
        ));
        assert!(make_space(vec![r(1, 3), r(1, 3), r(1, 3) + r(1, 1000)]).is_err());
    }

    #[test]
    fn weights_are_not_renormalized() {
        let p = ProbSpace::with_tolerance(vec![0.5, 0.5 + 1e-12], 1e-9).unwrap();
        assert_eq!(p.weights()[1], 0.5 + 1e-12);
    }
}
