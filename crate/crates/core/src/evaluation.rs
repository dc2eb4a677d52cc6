//! Generalization error of linear classifiers: exact under a known
//! two-Gaussian problem, or counted on a held-out sample.

use crate::classifiers::{predict, LinearClassifier};
use crate::data::{GaussianProblem, LabeledDataset};
use crate::error::{domain, Result};
use crate::numerics::normal_cdf;

/// Mean error over repetitions together with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEstimate {
    pub mean_error: f64,
    /// Sample standard deviation divided by `√repetitions`; 0 for one repetition.
    pub std_error: f64,
    pub repetitions: usize,
}

impl ErrorEstimate {
    /// Aggregates per-repetition values in the order given.
    ///
    /// Also used for signed error differences, in which case `mean_error` is
    /// not confined to `[0, 1]`.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let n = samples.len();
        if n == 0 {
            return Err(domain("no repetitions to aggregate"));
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let std_error = if n > 1 {
            let var = samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Ok(ErrorEstimate {
            mean_error: mean,
            std_error,
            repetitions: n,
        })
    }

    /// A single deterministic value (e.g. an approximation), no spread.
    pub fn exact(value: f64) -> Self {
        ErrorEstimate {
            mean_error: value,
            std_error: 0.0,
            repetitions: 1,
        }
    }
}

/// Exact error under equal priors and identity covariances:
/// `½Φ(−(w·μ1 + b)/‖w‖) + ½Φ((w·μ2 + b)/‖w‖)`.
///
/// A zero weight vector always predicts the same class, giving 0.5.
pub fn analytic_error(clf: &LinearClassifier, problem: &GaussianProblem) -> Result<f64> {
    if clf.dim() != problem.p() {
        return Err(domain(format!(
            "classifier has dimension {}, problem {}",
            clf.dim(),
            problem.p()
        )));
    }
    let norm = clf.w.norm();
    if norm == 0.0 {
        return Ok(0.5);
    }
    let s1 = (clf.w.dot(problem.mu1()) + clf.b) / norm;
    let s2 = (clf.w.dot(problem.mu2()) + clf.b) / norm;
    Ok(0.5 * normal_cdf(-s1) + 0.5 * normal_cdf(s2))
}

/// Fraction of misclassified rows.
pub fn empirical_error(clf: &LinearClassifier, test: &LabeledDataset) -> Result<f64> {
    if test.is_empty() {
        return Err(domain("empty test set"));
    }
    let predicted = predict(clf, &test.x)?;
    let wrong = predicted.iter().zip(&test.y).filter(|(a, b)| a != b).count();
    Ok(wrong as f64 / test.len() as f64)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::classifiers::fit_ls_supervised;
    use crate::data::{sample_labeled, Class, Seed};
    use nalgebra::{DMatrix, DVector};

    #[test]
    fn bayes_rule_error() {
        let g = GaussianProblem::new(10, 4.0).unwrap();
        let w = g.mu1() - g.mu2();
        let b = -0.5 * (g.mu1() + g.mu2()).dot(&w);
        let clf = LinearClassifier::new(w, b).unwrap();
        let e = analytic_error(&clf, &g).unwrap();
        assert!((e - 0.022750131948179207).abs() < 1e-12);
    }

    #[test]
    fn zero_weights_are_chance() {
        let g = GaussianProblem::new(3, 2.0).unwrap();
        let clf = LinearClassifier::new(DVector::zeros(3), 1.3).unwrap();
        assert_eq!(analytic_error(&clf, &g).unwrap(), 0.5);
        assert!(analytic_error(&clf, &GaussianProblem::new(4, 2.0).unwrap()).is_err());
    }

    #[test]
    fn scale_and_flip_symmetry() {
        let g = GaussianProblem::new(5, 3.0).unwrap();
        let clf = LinearClassifier::new(DVector::from_vec(vec![0.3, -1.0, 2.0, 0.1, -0.4]), 0.7).unwrap();
        let e = analytic_error(&clf, &g).unwrap();
        let scaled = LinearClassifier::new(&clf.w * 17.0, clf.b * 17.0).unwrap();
        assert!((analytic_error(&scaled, &g).unwrap() - e).abs() < 1e-15);
        assert!((analytic_error(&clf.negated(), &g).unwrap() + e - 1.0).abs() < 1e-15);
    }

    #[test]
    fn empirical_error_cases() {
        let train = LabeledDataset::new(
            DMatrix::from_row_slice(2, 1, &[1.0, -1.0]),
            vec![Class::One, Class::Two],
        )
        .unwrap();
        let clf = fit_ls_supervised(&train, 1e-10).unwrap();
        assert_eq!(empirical_error(&clf, &train).unwrap(), 0.0);

        let constant = LinearClassifier::new(DVector::zeros(1), -1.0).unwrap();
        let balanced = LabeledDataset::new(
            DMatrix::from_row_slice(4, 1, &[0.0, 1.0, 2.0, 3.0]),
            vec![Class::One, Class::Two, Class::One, Class::Two],
        )
        .unwrap();
        assert_eq!(empirical_error(&constant, &balanced).unwrap(), 0.5);
        let empty = LabeledDataset::new(DMatrix::zeros(0, 1), vec![]).unwrap();
        assert!(empirical_error(&constant, &empty).is_err());
    }

    #[test]
    fn empirical_matches_analytic_within_binomial_noise() {
        let g = GaussianProblem::new(10, 3.0).unwrap();
        let mut rng = Seed::new(12).stream(0);
        let clf = fit_ls_supervised(&sample_labeled(&g, 4, &mut rng).unwrap(), 1e-9).unwrap();
        let e = analytic_error(&clf, &g).unwrap();
        let test = sample_labeled(&g, 500_000, &mut rng).unwrap();
        let emp = empirical_error(&clf, &test).unwrap();
        let se = (e * (1.0 - e) / 1e6).sqrt();
        assert!((emp - e).abs() <= 3.0 * se, "empirical {emp} analytic {e}");
        let k = (emp * 1e6).round();
        assert!((emp * 1e6 - k).abs() < 1e-6);
    }

    #[test]
    fn estimate_aggregation() {
        let e = ErrorEstimate::from_samples(&[0.2]).unwrap();
        assert_eq!((e.mean_error, e.std_error, e.repetitions), (0.2, 0.0, 1));
        let e = ErrorEstimate::from_samples(&[0.1, 0.3, 0.2, 0.4]).unwrap();
        assert!((e.mean_error - 0.25).abs() < 1e-15);
        let sd = (0.05f64 / 3.0).sqrt();
        assert!((e.std_error - sd / 2.0).abs() < 1e-15);
        assert!(ErrorEstimate::from_samples(&[]).is_err());
    }
}
