//! Linear classifiers: Fisher's discriminant in its within-scatter and
//! total-scatter forms, the supervised and semi-supervised least squares
//! classifiers, the fixed-rank variant and the infinite-unlabeled-data limit.
//!
//! Least squares fits augment every row with a constant 1 feature and encode
//! class 1 as `+1`, class 2 as `-1`. All inverses are eigendecomposition
//! pseudo-inverses, so the `n < p` regime needs no special casing.

use nalgebra::{DMatrix, DVector};

use crate::data::{Class, GaussianProblem, LabeledDataset, UnlabeledDataset};
use crate::error::{domain, Error, Result};
use crate::numerics::{pseudo_inverse, truncated_pseudo_inverse, SymmetricMatrix};

/// Sample moments of a (possibly semi-supervised) training set.
#[derive(Debug, Clone)]
pub struct ScatterStats {
    pub m1: DVector<f64>,
    pub m2: DVector<f64>,
    /// Mean of all labeled and unlabeled rows.
    pub m: DVector<f64>,
    /// Within-class scatter of the labeled rows, divided by `n1 + n2`.
    pub within: SymmetricMatrix,
    /// Scatter of all rows about `m`, divided by `n`.
    pub total: SymmetricMatrix,
    /// Labeled plus unlabeled row count.
    pub n: usize,
    pub n1: usize,
    pub n2: usize,
}

/// Decision rule `w·x + b > 0 → class 1`, otherwise class 2.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearClassifier {
    pub w: DVector<f64>,
    pub b: f64,
}

impl LinearClassifier {
    pub fn new(w: DVector<f64>, b: f64) -> Result<Self> {
        if !b.is_finite() || w.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("classifier weights"));
        }
        Ok(LinearClassifier { w, b })
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        self.w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + self.b
    }

    /// Flips every decision.
    pub fn negated(&self) -> LinearClassifier {
        LinearClassifier {
            w: -&self.w,
            b: -self.b,
        }
    }
}

fn class_of(score: f64) -> Class {
    if score > 0.0 {
        Class::One
    } else {
        Class::Two
    }
}

fn require_both_classes(n1: usize, n2: usize) -> Result<()> {
    if n1 == 0 {
        return Err(Error::DegenerateLabels { missing: 1 });
    }
    if n2 == 0 {
        return Err(Error::DegenerateLabels { missing: 2 });
    }
    Ok(())
}

pub fn scatter_stats(labeled: &LabeledDataset, unlabeled: Option<&UnlabeledDataset>) -> Result<ScatterStats> {
    let p = labeled.dim();
    if let Some(u) = unlabeled {
        if !u.is_empty() && u.x.ncols() != p {
            return Err(domain(format!(
                "unlabeled data has {} columns, labeled {p}",
                u.x.ncols()
            )));
        }
    }
    let n1 = labeled.count(Class::One);
    let n2 = labeled.count(Class::Two);
    require_both_classes(n1, n2)?;

    let mut m1 = DVector::zeros(p);
    let mut m2 = DVector::zeros(p);
    for (row, c) in labeled.x.row_iter().zip(&labeled.y) {
        match c {
            Class::One => m1 += row.transpose(),
            Class::Two => m2 += row.transpose(),
        }
    }
    m1 /= n1 as f64;
    m2 /= n2 as f64;

    let n_lab = n1 + n2;
    let mut centered = labeled.x.clone();
    for (mut row, c) in centered.row_iter_mut().zip(&labeled.y) {
        match c {
            Class::One => row -= m1.transpose(),
            Class::Two => row -= m2.transpose(),
        }
    }
    let within = centered.tr_mul(&centered) / n_lab as f64;

    let all = match unlabeled {
        Some(u) if !u.is_empty() => stack_rows(&labeled.x, &u.x),
        _ => labeled.x.clone(),
    };
    let n = all.nrows();
    let m = all.row_mean().transpose();
    let mut centered = all;
    for mut row in centered.row_iter_mut() {
        row -= m.transpose();
    }
    let total = centered.tr_mul(&centered) / n as f64;

    Ok(ScatterStats {
        m1,
        m2,
        m,
        within: SymmetricMatrix::symmetrized(within),
        total: SymmetricMatrix::symmetrized(total),
        n,
        n1,
        n2,
    })
}

fn stack_rows(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(a.nrows() + b.nrows(), a.ncols());
    out.rows_mut(0, a.nrows()).copy_from(a);
    out.rows_mut(a.nrows(), b.nrows()).copy_from(b);
    out
}

/// `w = S⁺ (m1 − m2)` with the threshold halfway between the class means.
fn fisher(
    scatter: &SymmetricMatrix,
    m1: &DVector<f64>,
    m2: &DVector<f64>,
    rel_tol: f64,
) -> Result<LinearClassifier> {
    let w = pseudo_inverse(scatter, rel_tol)?.as_matrix() * (m1 - m2);
    let b = -0.5 * (m1 + m2).dot(&w);
    LinearClassifier::new(w, b)
}

/// Fisher discriminant using the within-class scatter.
pub fn fit_fisher_within(stats: &ScatterStats, rel_tol: f64) -> Result<LinearClassifier> {
    fisher(&stats.within, &stats.m1, &stats.m2, rel_tol)
}

/// Fisher discriminant using the total scatter.
pub fn fit_fisher_total(stats: &ScatterStats, rel_tol: f64) -> Result<LinearClassifier> {
    fisher(&stats.total, &stats.m1, &stats.m2, rel_tol)
}

fn augment(x: &DMatrix<f64>) -> DMatrix<f64> {
    x.clone().insert_column(x.ncols(), 1.0)
}

fn encode(y: &[Class]) -> DVector<f64> {
    DVector::from_iterator(
        y.len(),
        y.iter().map(|c| if *c == Class::One { 1.0 } else { -1.0 }),
    )
}

/// Shared least squares path. The Gram matrix covers labeled and unlabeled
/// rows, scaled by `L / (L + U)`; the moment vector covers labeled rows only.
fn least_squares(
    labeled: &LabeledDataset,
    unlabeled: Option<&UnlabeledDataset>,
    rank: Option<usize>,
    rel_tol: f64,
) -> Result<LinearClassifier> {
    let p = labeled.dim();
    require_both_classes(labeled.count(Class::One), labeled.count(Class::Two))?;
    let xl = augment(&labeled.x);
    let moments = xl.tr_mul(&encode(&labeled.y));
    let l = labeled.len();
    let (gram, u) = match unlabeled {
        Some(un) if !un.is_empty() => {
            if un.x.ncols() != p {
                return Err(domain(format!(
                    "unlabeled data has {} columns, labeled {p}",
                    un.x.ncols()
                )));
            }
            let xe = stack_rows(&xl, &augment(&un.x));
            (xe.tr_mul(&xe), un.len())
        }
        _ => (xl.tr_mul(&xl), 0),
    };
    let gram = SymmetricMatrix::symmetrized(gram * (l as f64 / (l + u) as f64));
    let inverse = match rank {
        None => pseudo_inverse(&gram, rel_tol)?,
        Some(r) => truncated_pseudo_inverse(&gram, r, rel_tol)?,
    };
    let solution = inverse.as_matrix() * moments;
    LinearClassifier::new(solution.rows(0, p).clone_owned(), solution[p])
}

/// Supervised least squares classifier on the labeled rows.
pub fn fit_ls_supervised(labeled: &LabeledDataset, rel_tol: f64) -> Result<LinearClassifier> {
    least_squares(labeled, None, None, rel_tol)
}

/// Least squares classifier whose Gram matrix is re-estimated from labeled
/// plus unlabeled rows.
pub fn fit_ls_semisupervised(
    labeled: &LabeledDataset,
    unlabeled: &UnlabeledDataset,
    rel_tol: f64,
) -> Result<LinearClassifier> {
    least_squares(labeled, Some(unlabeled), None, rel_tol)
}

/// Supervised least squares using only the `rank` largest eigen-directions of
/// the augmented Gram matrix.
pub fn fit_fixed_rank(labeled: &LabeledDataset, rank: usize, rel_tol: f64) -> Result<LinearClassifier> {
    let dim = labeled.dim() + 1;
    if rank == 0 || rank > dim {
        return Err(domain(format!("rank must lie in 1..={dim}, got {rank}")));
    }
    least_squares(labeled, None, Some(rank), rel_tol)
}

/// Population total scatter of the problem: `I + ¼ d dᵀ`, `d = μ1 − μ2`.
/// For the default construction this is `I + ¼ (δ²/p) 1 1ᵀ`.
pub fn population_total_scatter(problem: &GaussianProblem) -> DMatrix<f64> {
    let d = problem.mu1() - problem.mu2();
    DMatrix::identity(problem.p(), problem.p()) + (&d * d.transpose()) * 0.25
}

/// Closed-form inverse of [`population_total_scatter`] (Sherman–Morrison):
/// `I − d dᵀ / (4 + ‖d‖²)`.
pub fn population_total_scatter_inverse(problem: &GaussianProblem) -> DMatrix<f64> {
    let d = problem.mu1() - problem.mu2();
    let denom = 4.0 + d.norm_squared();
    DMatrix::identity(problem.p(), problem.p()) - (&d * d.transpose()) / denom
}

/// Semi-supervised classifier in the limit of infinitely many unlabeled
/// objects: the total scatter is replaced by its population value while the
/// class means still come from the labeled sample.
pub fn fit_infinite_unlabeled(
    labeled: &LabeledDataset,
    problem: &GaussianProblem,
    _rel_tol: f64,
) -> Result<LinearClassifier> {
    if labeled.dim() != problem.p() {
        return Err(domain(format!(
            "labeled data has {} columns, problem p = {}",
            labeled.dim(),
            problem.p()
        )));
    }
    let stats = scatter_stats(labeled, None)?;
    let w = population_total_scatter_inverse(problem) * (&stats.m1 - &stats.m2);
    let b = -0.5 * (&stats.m1 + &stats.m2).dot(&w);
    LinearClassifier::new(w, b)
}

pub fn predict(clf: &LinearClassifier, x: &DMatrix<f64>) -> Result<Vec<Class>> {
    if x.ncols() != clf.dim() {
        return Err(domain(format!(
            "data has {} columns, classifier expects {}",
            x.ncols(),
            clf.dim()
        )));
    }
    let scores = x * &clf.w;
    Ok(scores.iter().map(|s| class_of(s + clf.b)).collect())
}
