//! Learning-curve protocols: synthetic supervised vs. semi-supervised curves,
//! the decomposition of the effect of adding two objects, the
//! infinite-unlabeled-data study and the benchmark resampling protocol.
//!
//! Every protocol draws one random stream per repetition from the master
//! seed. Within a repetition training sets are nested: a larger grid point
//! sees the objects of every smaller one plus new ones, never a fresh draw.
//! Synthetic protocols score classifiers with the exact Gaussian error;
//! the benchmark protocol counts errors on a resampled test set.

use std::collections::BTreeMap;

use crate::classifiers::{
    fit_fixed_rank, fit_infinite_unlabeled, fit_ls_semisupervised, fit_ls_supervised, LinearClassifier,
};
use crate::data::{bootstrap_sample, sample_labeled, GaussianProblem, LabeledDataset, Seed};
use crate::error::{domain, Result};
use crate::evaluation::{analytic_error, empirical_error, ErrorEstimate};
use crate::numerics::{default_rel_tol, pca_fit, pca_transform};
use crate::parallel::{map_repetitions, Execution};

/// One point of one curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub curve_id: String,
    pub n_labeled: usize,
    pub n_unlabeled: usize,
    pub error: ErrorEstimate,
}

impl CurvePoint {
    pub fn total(&self) -> usize {
        self.n_labeled + self.n_unlabeled
    }
}

/// A set of curves sharing one configuration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LearningCurve {
    pub points: Vec<CurvePoint>,
    /// Canonical `key=value` rendering of every parameter, master seed included.
    pub config_digest: String,
    /// Non-fatal notes, e.g. grid points that had to be skipped.
    pub warnings: Vec<String>,
}

impl LearningCurve {
    pub fn new(config_digest: String) -> Self {
        LearningCurve {
            points: Vec::new(),
            config_digest,
            warnings: Vec::new(),
        }
    }

    pub fn curve_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.points.iter().map(|p| p.curve_id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn curve(&self, id: &str) -> Vec<&CurvePoint> {
        self.points.iter().filter(|p| p.curve_id == id).collect()
    }

    /// Mean errors of one curve, in point order.
    pub fn means(&self, id: &str) -> Vec<f64> {
        self.curve(id).iter().map(|p| p.error.mean_error).collect()
    }

    /// Points are strictly increasing in total size within every curve.
    pub fn is_ordered(&self) -> bool {
        let mut last: BTreeMap<&str, usize> = BTreeMap::new();
        for p in &self.points {
            if let Some(&prev) = last.get(p.curve_id.as_str()) {
                if p.total() <= prev {
                    return false;
                }
            }
            last.insert(&p.curve_id, p.total());
        }
        true
    }

    fn push(&mut self, curve_id: &str, n_labeled: usize, n_unlabeled: usize, samples: &[f64]) -> Result<()> {
        self.points.push(CurvePoint {
            curve_id: curve_id.to_string(),
            n_labeled,
            n_unlabeled,
            error: ErrorEstimate::from_samples(samples)?,
        });
        Ok(())
    }
}

fn column(rows: &[Vec<f64>], j: usize) -> Vec<f64> {
    rows.iter().map(|r| r[j]).collect()
}

fn ls_tol(p: usize) -> f64 {
    default_rel_tol(p + 1)
}

fn check_repetitions(repetitions: usize) -> Result<()> {
    if repetitions == 0 {
        return Err(domain("repetitions must be at least 1"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Supervised vs. semi-supervised curves on a Gaussian problem
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SyntheticCurveConfig {
    pub problem: GaussianProblem,
    /// Labeled objects per class used by the semi-supervised and base learners.
    pub n_labeled_per_class: usize,
    /// Largest total training-set size on the grid.
    pub max_total: usize,
    /// Grid spacing in objects.
    pub step: usize,
    pub repetitions: usize,
    pub seed: Seed,
}

impl SyntheticCurveConfig {
    /// Total training-set sizes, starting at the labeled set size.
    pub fn grid(&self) -> Result<Vec<usize>> {
        let start = 2 * self.n_labeled_per_class;
        if self.n_labeled_per_class == 0 {
            return Err(domain("n_labeled_per_class must be at least 1"));
        }
        if self.step == 0 {
            return Err(domain("step must be at least 1"));
        }
        if self.max_total < start {
            return Err(domain(format!(
                "max_total {} below labeled set size {start}",
                self.max_total
            )));
        }
        Ok((start..=self.max_total).step_by(self.step).collect())
    }

    pub fn digest(&self) -> String {
        format!(
            "curve;p={};delta={};n_labeled_per_class={};max_total={};step={};repetitions={};seed={}",
            self.problem.p(),
            self.problem.delta(),
            self.n_labeled_per_class,
            self.max_total,
            self.step,
            self.repetitions,
            self.seed.master
        )
    }
}

/// Errors of one repetition, indexed like [`SyntheticCurveConfig::grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticRepetition {
    pub supervised: Vec<f64>,
    pub semi_supervised: Vec<f64>,
    pub base: f64,
}

/// One repetition of the synthetic protocol.
///
/// A single class-alternating sample is drawn. At total size `n` the
/// supervised learner sees its first `n` rows with labels, the
/// semi-supervised learner the first `2·n_labeled_per_class` rows with labels
/// and the rest of the first `n` rows without.
pub fn synthetic_repetition(config: &SyntheticCurveConfig, repetition: usize) -> Result<SyntheticRepetition> {
    let grid = config.grid()?;
    let problem = &config.problem;
    let tol = ls_tol(problem.p());
    let max_total = *grid.last().expect("grid is non-empty");
    let mut rng = config.seed.stream(repetition as u64);
    let pool = sample_labeled(problem, max_total.div_ceil(2), &mut rng)?;
    let n_lab = 2 * config.n_labeled_per_class;
    let labeled = pool.prefix(n_lab);
    let base = analytic_error(&fit_ls_supervised(&labeled, tol)?, problem)?;

    let mut supervised = Vec::with_capacity(grid.len());
    let mut semi_supervised = Vec::with_capacity(grid.len());
    for &n in &grid {
        let sup = fit_ls_supervised(&pool.prefix(n), tol)?;
        supervised.push(analytic_error(&sup, problem)?);
        let semi = fit_ls_semisupervised(&labeled, &pool.rows_unlabeled(n_lab, n), tol)?;
        semi_supervised.push(analytic_error(&semi, problem)?);
    }
    Ok(SyntheticRepetition {
        supervised,
        semi_supervised,
        base,
    })
}

/// Curves `supervised`, `semi-supervised` and `base`.
///
/// Base points repeat the fixed labeled-set error at every grid position;
/// their `n_unlabeled` counts the additional objects that learner ignores.
pub fn run_synthetic_curves(config: &SyntheticCurveConfig, exec: Execution) -> Result<LearningCurve> {
    check_repetitions(config.repetitions)?;
    let grid = config.grid()?;
    let reps = map_repetitions(config.repetitions, exec, |r| synthetic_repetition(config, r))?;
    let sup: Vec<Vec<f64>> = reps.iter().map(|r| r.supervised.clone()).collect();
    let semi: Vec<Vec<f64>> = reps.iter().map(|r| r.semi_supervised.clone()).collect();
    let base: Vec<f64> = reps.iter().map(|r| r.base).collect();
    let n_lab = 2 * config.n_labeled_per_class;

    let mut curve = LearningCurve::new(config.digest());
    for (j, &n) in grid.iter().enumerate() {
        curve.push("supervised", n, 0, &column(&sup, j))?;
    }
    for (j, &n) in grid.iter().enumerate() {
        curve.push("semi-supervised", n_lab, n - n_lab, &column(&semi, j))?;
    }
    for &n in &grid {
        curve.push("base", n_lab, n - n_lab, &base)?;
    }
    Ok(curve)
}

// ---------------------------------------------------------------------------
// Contributions of covariance and labels when adding two objects
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ContributionsConfig {
    pub problem: GaussianProblem,
    /// Even labeled-set sizes `n`; each point measures adding one object per class.
    pub n_grid: Vec<usize>,
    pub repetitions: usize,
    pub seed: Seed,
}

impl ContributionsConfig {
    fn validate(&self) -> Result<()> {
        check_repetitions(self.repetitions)?;
        if self.n_grid.is_empty() {
            return Err(domain("n grid is empty"));
        }
        if let Some(n) = self.n_grid.iter().find(|&&n| n == 0 || n % 2 == 1) {
            return Err(domain(format!("grid sizes must be positive and even, got {n}")));
        }
        Ok(())
    }

    pub fn digest(&self) -> String {
        format!(
            "contributions;p={};delta={};n_grid={:?};repetitions={};seed={}",
            self.problem.p(),
            self.problem.delta(),
            self.n_grid,
            self.repetitions,
            self.seed.master
        )
    }
}

/// Error changes at one grid point of one repetition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContributionSample {
    pub n: usize,
    /// `e(semi: n labeled + 2 unlabeled) − e(sup: n)`.
    pub covariance: f64,
    /// `e(sup: n + 2) − e(semi: n labeled + 2 unlabeled)`.
    pub label: f64,
    /// `e(sup: n + 2) − e(sup: n)`.
    pub total: f64,
    /// `e(sup: n + 2 at rank n) − e(sup: n)`.
    pub fixed_rank: f64,
}

/// Rank used for the fixed-rank fit at labeled size `n`: the rank of the
/// augmented Gram matrix of `n` generic objects.
pub fn fixed_rank_for(n: usize, p: usize) -> usize {
    n.min(p + 1)
}

pub fn contributions_repetition(
    config: &ContributionsConfig,
    repetition: usize,
) -> Result<Vec<ContributionSample>> {
    config.validate()?;
    let problem = &config.problem;
    let p = problem.p();
    let tol = ls_tol(p);
    let largest = *config.n_grid.iter().max().expect("validated non-empty");
    let mut rng = config.seed.stream(repetition as u64);
    let pool = sample_labeled(problem, largest / 2 + 1, &mut rng)?;
    let err = |clf: LinearClassifier| analytic_error(&clf, problem);

    config
        .n_grid
        .iter()
        .map(|&n| {
            let base = pool.prefix(n);
            let grown = pool.prefix(n + 2);
            let e_sup = err(fit_ls_supervised(&base, tol)?)?;
            let e_sup2 = err(fit_ls_supervised(&grown, tol)?)?;
            let e_semi = err(fit_ls_semisupervised(&base, &pool.rows_unlabeled(n, n + 2), tol)?)?;
            let e_fixed = err(fit_fixed_rank(&grown, fixed_rank_for(n, p), tol)?)?;
            Ok(ContributionSample {
                n,
                covariance: e_semi - e_sup,
                label: -(e_semi - e_sup2),
                total: e_sup2 - e_sup,
                fixed_rank: e_fixed - e_sup,
            })
        })
        .collect()
}

/// Curves `covariance`, `label`, `total` and `fixed-rank`. The row at `n`
/// holds the mean change in error from adding two objects to `n` labeled
/// ones, so `mean_error` is a signed difference here.
pub fn run_contributions(config: &ContributionsConfig, exec: Execution) -> Result<LearningCurve> {
    config.validate()?;
    let reps = map_repetitions(config.repetitions, exec, |r| contributions_repetition(config, r))?;
    let mut curve = LearningCurve::new(config.digest());
    type Pick = fn(&ContributionSample) -> f64;
    let pick: [(&str, Pick); 4] = [
        ("covariance", |s| s.covariance),
        ("label", |s| s.label),
        ("total", |s| s.total),
        ("fixed-rank", |s| s.fixed_rank),
    ];
    let mut order: Vec<usize> = (0..config.n_grid.len()).collect();
    order.sort_by_key(|&j| config.n_grid[j]);
    for (id, f) in pick {
        for &j in &order {
            let samples: Vec<f64> = reps.iter().map(|r| f(&r[j])).collect();
            curve.push(id, config.n_grid[j], 0, &samples)?;
        }
    }
    Ok(curve)
}

// ---------------------------------------------------------------------------
// Infinite unlabeled data
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct InfiniteConfig {
    pub p_list: Vec<usize>,
    pub delta_list: Vec<f64>,
    /// Labeled-set sizes (objects, both classes together).
    pub n_labeled_grid: Vec<usize>,
    pub repetitions: usize,
    pub seed: Seed,
}

impl InfiniteConfig {
    pub fn digest(&self) -> String {
        format!(
            "infinite;p_list={:?};delta_list={:?};n_labeled_grid={:?};repetitions={};seed={}",
            self.p_list, self.delta_list, self.n_labeled_grid, self.repetitions, self.seed.master
        )
    }

    fn validate(&self) -> Result<()> {
        check_repetitions(self.repetitions)?;
        if self.p_list.is_empty() || self.delta_list.is_empty() || self.n_labeled_grid.is_empty() {
            return Err(domain("p, delta and labeled-size grids must be non-empty"));
        }
        if self.n_labeled_grid.iter().any(|&n| n < 2) {
            return Err(domain("labeled sizes must be at least 2"));
        }
        Ok(())
    }
}

pub fn infinite_curve_id(kind: &str, p: usize, delta: f64) -> String {
    format!("{kind}:p={p}:delta={delta}")
}

/// Supervised and infinite-unlabeled errors for one problem and repetition.
pub fn infinite_repetition(
    problem: &GaussianProblem,
    grid: &[usize],
    seed: Seed,
    repetition: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let tol = ls_tol(problem.p());
    let largest = *grid.iter().max().ok_or_else(|| domain("empty grid"))?;
    let mut rng = seed.stream(repetition as u64);
    let pool = sample_labeled(problem, largest.div_ceil(2), &mut rng)?;
    let mut sup = Vec::with_capacity(grid.len());
    let mut inf = Vec::with_capacity(grid.len());
    for &n in grid {
        let labeled = pool.prefix(n);
        sup.push(analytic_error(&fit_ls_supervised(&labeled, tol)?, problem)?);
        inf.push(analytic_error(
            &fit_infinite_unlabeled(&labeled, problem, tol)?,
            problem,
        )?);
    }
    Ok((sup, inf))
}

/// For every `(p, δ)`: curves `supervised:p=..:delta=..` and
/// `infinite-unlabeled:p=..:delta=..`. Problem `k` in row-major `(p, δ)`
/// order draws from the seed derived with index `k`.
pub fn run_infinite_unlabeled(config: &InfiniteConfig, exec: Execution) -> Result<LearningCurve> {
    config.validate()?;
    let mut grid = config.n_labeled_grid.clone();
    grid.sort_unstable();
    grid.dedup();
    let mut curve = LearningCurve::new(config.digest());
    let mut k = 0u64;
    for &p in &config.p_list {
        for &delta in &config.delta_list {
            let problem = GaussianProblem::new(p, delta)?;
            let seed = config.seed.derive(k);
            k += 1;
            let reps = map_repetitions(config.repetitions, exec, |r| {
                infinite_repetition(&problem, &grid, seed, r)
            })?;
            let sup: Vec<Vec<f64>> = reps.iter().map(|r| r.0.clone()).collect();
            let inf: Vec<Vec<f64>> = reps.iter().map(|r| r.1.clone()).collect();
            let sup_id = infinite_curve_id("supervised", p, delta);
            let inf_id = infinite_curve_id("infinite-unlabeled", p, delta);
            for (j, &n) in grid.iter().enumerate() {
                curve.push(&sup_id, n, 0, &column(&sup, j))?;
            }
            for (j, &n) in grid.iter().enumerate() {
                curve.push(&inf_id, n, 0, &column(&inf, j))?;
            }
        }
    }
    Ok(curve)
}

// ---------------------------------------------------------------------------
// Benchmark datasets
// ---------------------------------------------------------------------------

/// Redraws allowed when a labeled draw misses a class.
pub const MAX_REDRAWS: u64 = 100;

/// Fraction of variance kept by the PCA preprocessing.
pub const PCA_VARIANCE: f64 = 0.99;

#[derive(Debug, Clone)]
pub struct BenchmarkConfig {
    pub repetitions: usize,
    pub test_size: usize,
    /// Largest number of additional objects.
    pub max_extra: usize,
    pub seed: Seed,
}

impl BenchmarkConfig {
    /// 100 additional objects for datasets under 1000 rows, 1000 otherwise.
    pub fn default_max_extra(n_rows: usize) -> usize {
        if n_rows < 1000 {
            100
        } else {
            1000
        }
    }

    /// Additional-object counts: steps of `max_extra / 50` (at least 1) from 0
    /// up to and including `max_extra`.
    pub fn grid(&self) -> Vec<usize> {
        let step = (self.max_extra / 50).max(1);
        let mut g: Vec<usize> = (0..=self.max_extra).step_by(step).collect();
        if g.last() != Some(&self.max_extra) {
            g.push(self.max_extra);
        }
        g
    }

    pub fn digest(&self, dataset: &str) -> String {
        format!(
            "benchmark;dataset={dataset};repetitions={};test_size={};max_extra={};seed={}",
            self.repetitions, self.test_size, self.max_extra, self.seed.master
        )
    }
}

/// Dataset after PCA, with the labeled-set size derived from its dimension.
#[derive(Debug, Clone)]
pub struct PreparedBenchmark {
    pub data: LabeledDataset,
    /// Dimension retained by PCA.
    pub p: usize,
    /// `⌈p / 2⌉`.
    pub n_labeled: usize,
}

/// PCA (99% variance) fit once on all rows, then applied to all rows.
pub fn prepare_benchmark(dataset: &LabeledDataset) -> Result<PreparedBenchmark> {
    if dataset.classes().len() != 2 {
        return Err(domain("benchmark dataset must contain both classes"));
    }
    let model = pca_fit(&dataset.x, PCA_VARIANCE)?;
    let data = dataset.with_features(pca_transform(&model, &dataset.x)?)?;
    let p = model.retained;
    Ok(PreparedBenchmark {
        data,
        p,
        n_labeled: p.div_ceil(2),
    })
}

/// Errors `(supervised, semi-supervised, base)` over the grid for one repetition.
pub fn benchmark_repetition(
    prepared: &PreparedBenchmark,
    config: &BenchmarkConfig,
    repetition: usize,
) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let tol = ls_tol(prepared.p);
    let rep_seed = config.seed.derive(repetition as u64);
    for attempt in 0..MAX_REDRAWS {
        let mut rng = rep_seed.stream(attempt);
        let labeled = bootstrap_sample(&prepared.data, prepared.n_labeled, &mut rng)?;
        if labeled.classes().len() < 2 {
            continue;
        }
        let extra = bootstrap_sample(&prepared.data, config.max_extra, &mut rng)?;
        let test = bootstrap_sample(&prepared.data, config.test_size, &mut rng)?;
        let pool = concat(&labeled, &extra);
        let l = labeled.len();
        let base = empirical_error(&fit_ls_supervised(&labeled, tol)?, &test)?;
        let mut sup = Vec::new();
        let mut semi = Vec::new();
        for e in config.grid() {
            sup.push(empirical_error(
                &fit_ls_supervised(&pool.prefix(l + e), tol)?,
                &test,
            )?);
            let clf = fit_ls_semisupervised(&labeled, &pool.rows_unlabeled(l, l + e), tol)?;
            semi.push(empirical_error(&clf, &test)?);
        }
        return Ok((sup, semi, base));
    }
    Err(domain(format!(
        "repetition {repetition}: labeled draw of {} objects missed a class {MAX_REDRAWS} times",
        prepared.n_labeled
    )))
}

fn concat(a: &LabeledDataset, b: &LabeledDataset) -> LabeledDataset {
    let mut x = nalgebra::DMatrix::zeros(a.len() + b.len(), a.dim());
    x.rows_mut(0, a.len()).copy_from(&a.x);
    x.rows_mut(a.len(), b.len()).copy_from(&b.x);
    let mut y = a.y.clone();
    y.extend_from_slice(&b.y);
    LabeledDataset { x, y }
}

/// Curves `supervised`, `semi-supervised` and `base` on a real dataset.
/// `dataset_name` only enters the config digest.
pub fn run_benchmark(
    dataset: &LabeledDataset,
    dataset_name: &str,
    config: &BenchmarkConfig,
    exec: Execution,
) -> Result<LearningCurve> {
    check_repetitions(config.repetitions)?;
    if config.test_size == 0 {
        return Err(domain("test size must be at least 1"));
    }
    let prepared = prepare_benchmark(dataset)?;
    let reps = map_repetitions(config.repetitions, exec, |r| {
        benchmark_repetition(&prepared, config, r)
    })?;
    let sup: Vec<Vec<f64>> = reps.iter().map(|r| r.0.clone()).collect();
    let semi: Vec<Vec<f64>> = reps.iter().map(|r| r.1.clone()).collect();
    let base: Vec<f64> = reps.iter().map(|r| r.2).collect();
    let l = prepared.n_labeled;

    let mut curve = LearningCurve::new(format!("{};pca_dim={}", config.digest(dataset_name), prepared.p));
    let grid = config.grid();
    for (j, &e) in grid.iter().enumerate() {
        curve.push("supervised", l + e, 0, &column(&sup, j))?;
    }
    for (j, &e) in grid.iter().enumerate() {
        curve.push("semi-supervised", l, e, &column(&semi, j))?;
    }
    for &e in &grid {
        curve.push("base", l, e, &base)?;
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Class;
    use nalgebra::DMatrix;

    fn small_synthetic(reps: usize) -> SyntheticCurveConfig {
        SyntheticCurveConfig {
            problem: GaussianProblem::new(10, 3.0).unwrap(),
            n_labeled_per_class: 3,
            max_total: 30,
            step: 2,
            repetitions: reps,
            seed: Seed::new(5),
        }
    }

    #[test]
    fn synthetic_grid_and_validation() {
        let c = small_synthetic(3);
        assert_eq!(c.grid().unwrap(), (6..=30).step_by(2).collect::<Vec<_>>());
        let mut bad = c.clone();
        bad.max_total = 4;
        assert!(bad.grid().is_err());
        let mut bad = c.clone();
        bad.repetitions = 0;
        assert!(run_synthetic_curves(&bad, Execution::Sequential).is_err());
    }

    #[test]
    fn synthetic_curves_coincide_at_first_point() {
        let c = small_synthetic(4);
        for r in 0..4 {
            let rep = synthetic_repetition(&c, r).unwrap();
            assert_eq!(rep.supervised[0], rep.semi_supervised[0]);
            assert_eq!(rep.supervised[0], rep.base);
        }
        let curve = run_synthetic_curves(&c, Execution::Parallel).unwrap();
        assert_eq!(curve.curve_ids(), vec!["base", "semi-supervised", "supervised"]);
        assert!(curve.is_ordered());
        let base = curve.means("base");
        assert!(base.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn single_repetition_has_zero_std_error() {
        let curve = run_synthetic_curves(&small_synthetic(1), Execution::Sequential).unwrap();
        assert!(curve
            .points
            .iter()
            .all(|p| p.error.std_error == 0.0 && p.error.repetitions == 1));
    }

    #[test]
    fn execution_modes_agree() {
        let c = small_synthetic(6);
        let a = run_synthetic_curves(&c, Execution::Sequential).unwrap();
        let b = run_synthetic_curves(&c, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn contribution_identity_per_repetition() {
        let c = ContributionsConfig {
            problem: GaussianProblem::new(12, 4.0).unwrap(),
            n_grid: (2..=20).step_by(2).collect(),
            repetitions: 3,
            seed: Seed::new(8),
        };
        for r in 0..3 {
            for s in contributions_repetition(&c, r).unwrap() {
                assert!((s.covariance + s.label - s.total).abs() <= 1e-12);
            }
        }
        let curve = run_contributions(&c, Execution::Parallel).unwrap();
        assert_eq!(
            curve.curve_ids(),
            vec!["covariance", "fixed-rank", "label", "total"]
        );
        assert_eq!(curve.points.len(), 40);
        let mut odd = c.clone();
        odd.n_grid = vec![2, 3];
        assert!(run_contributions(&odd, Execution::Sequential).is_err());
    }

    #[test]
    fn fixed_rank_choice() {
        assert_eq!(fixed_rank_for(10, 50), 10);
        assert_eq!(fixed_rank_for(60, 50), 51);
    }

    #[test]
    fn infinite_curves_for_every_problem() {
        let c = InfiniteConfig {
            p_list: vec![5, 8],
            delta_list: vec![2.0, 4.0],
            n_labeled_grid: vec![8, 2, 4],
            repetitions: 2,
            seed: Seed::new(1),
        };
        let curve = run_infinite_unlabeled(&c, Execution::Parallel).unwrap();
        assert_eq!(curve.curve_ids().len(), 8);
        assert_eq!(curve.points.len(), 24);
        assert!(curve.is_ordered());
        assert!(curve.curve("infinite-unlabeled:p=8:delta=4").len() == 3);
    }

    fn toy_dataset() -> LabeledDataset {
        let g = GaussianProblem::new(6, 3.0).unwrap();
        sample_labeled(&g, 40, &mut Seed::new(3).stream(0)).unwrap()
    }

    #[test]
    fn benchmark_grid() {
        let c = BenchmarkConfig {
            repetitions: 1,
            test_size: 10,
            max_extra: 100,
            seed: Seed::new(0),
        };
        let g = c.grid();
        assert_eq!((g.len(), g[1], *g.last().unwrap()), (51, 2, 100));
        let c = BenchmarkConfig { max_extra: 7, ..c };
        assert_eq!(c.grid(), (0..=7).collect::<Vec<_>>());
        assert_eq!(BenchmarkConfig::default_max_extra(267), 100);
        assert_eq!(BenchmarkConfig::default_max_extra(5000), 1000);
    }

    #[test]
    fn benchmark_runs_on_toy_data() {
        let data = toy_dataset();
        let prepared = prepare_benchmark(&data).unwrap();
        assert_eq!(prepared.p, 6);
        assert_eq!(prepared.n_labeled, 3);
        let c = BenchmarkConfig {
            repetitions: 5,
            test_size: 200,
            max_extra: 20,
            seed: Seed::new(2),
        };
        let curve = run_benchmark(&data, "toy", &c, Execution::Parallel).unwrap();
        assert_eq!(curve.points.len(), 3 * 21);
        let first = |id: &str| curve.curve(id)[0].error.mean_error;
        assert_eq!(first("supervised"), first("semi-supervised"));
        assert_eq!(first("supervised"), first("base"));
        assert!(curve.config_digest.contains("pca_dim=6"));
    }

    #[test]
    fn benchmark_gives_up_on_hopeless_draws() {
        // one class-2 row among many class-1 rows: a 1-object draw never has both classes
        let mut y = vec![Class::One; 50];
        y[0] = Class::Two;
        let x = DMatrix::from_fn(50, 1, |i, _| i as f64);
        let data = LabeledDataset::new(x, y).unwrap();
        let prepared = PreparedBenchmark {
            data,
            p: 1,
            n_labeled: 1,
        };
        let c = BenchmarkConfig {
            repetitions: 1,
            test_size: 5,
            max_extra: 2,
            seed: Seed::new(0),
        };
        let err = benchmark_repetition(&prepared, &c, 0).unwrap_err();
        assert!(err.to_string().contains("missed a class"));
    }
}
