//! Two-Gaussian problems, seeded sampling, bootstrap resampling and CSV ingestion.

use std::collections::BTreeSet;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Error, Result};

/// Class label. Numeric encodings for fitting are chosen by the classifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    One = 1,
    Two = 2,
}

impl Class {
    pub fn number(self) -> u8 {
        self as u8
    }
}

/// Two unit-covariance Gaussian classes with equal priors.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianProblem {
    p: usize,
    delta: f64,
    mu1: DVector<f64>,
    mu2: DVector<f64>,
}

impl GaussianProblem {
    /// Means at `∓ δ/(2√p) · 1`, so that `‖μ1 − μ2‖ = δ`.
    pub fn new(p: usize, delta: f64) -> Result<Self> {
        if p == 0 {
            return Err(domain("dimension p must be positive"));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(domain(format!("delta must be positive and finite, got {delta}")));
        }
        let offset = delta / (2.0 * (p as f64).sqrt());
        Ok(GaussianProblem {
            p,
            delta,
            mu1: DVector::from_element(p, -offset),
            mu2: DVector::from_element(p, offset),
        })
    }

    /// Arbitrary means; `delta` is their Euclidean distance.
    pub fn with_means(mu1: DVector<f64>, mu2: DVector<f64>) -> Result<Self> {
        if mu1.len() != mu2.len() || mu1.is_empty() {
            return Err(domain("means must be non-empty and of equal length"));
        }
        if mu1.iter().chain(mu2.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("class means"));
        }
        let delta = (&mu1 - &mu2).norm();
        if delta == 0.0 {
            return Err(domain("class means coincide"));
        }
        Ok(GaussianProblem {
            p: mu1.len(),
            delta,
            mu1,
            mu2,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn mu1(&self) -> &DVector<f64> {
        &self.mu1
    }

    pub fn mu2(&self) -> &DVector<f64> {
        &self.mu2
    }

    pub fn mean(&self, class: Class) -> &DVector<f64> {
        match class {
            Class::One => &self.mu1,
            Class::Two => &self.mu2,
        }
    }

    fn draw_row(&self, class: Class, rng: &mut SeedStream, out: &mut [f64]) {
        for (x, m) in out.iter_mut().zip(self.mean(class).iter()) {
            *x = m + rng.sample::<f64, _>(StandardNormal);
        }
    }
}

/// Labeled objects: an `L x p` design matrix and one label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub x: DMatrix<f64>,
    pub y: Vec<Class>,
}

impl LabeledDataset {
    pub fn new(x: DMatrix<f64>, y: Vec<Class>) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(domain(format!("{} rows but {} labels", x.nrows(), y.len())));
        }
        Ok(LabeledDataset { x, y })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.x.ncols()
    }

    pub fn count(&self, class: Class) -> usize {
        self.y.iter().filter(|&&c| c == class).count()
    }

    /// The first `n` rows.
    pub fn prefix(&self, n: usize) -> LabeledDataset {
        let n = n.min(self.len());
        LabeledDataset {
            x: self.x.rows(0, n).clone_owned(),
            y: self.y[..n].to_vec(),
        }
    }

    /// Rows `start..end` with labels dropped.
    pub fn rows_unlabeled(&self, start: usize, end: usize) -> UnlabeledDataset {
        let end = end.min(self.len());
        let start = start.min(end);
        UnlabeledDataset {
            x: self.x.rows(start, end - start).clone_owned(),
        }
    }

    /// Labels set of this dataset.
    pub fn classes(&self) -> BTreeSet<Class> {
        self.y.iter().copied().collect()
    }

    /// Returns a dataset with the same rows replaced by `x` (labels kept).
    pub fn with_features(&self, x: DMatrix<f64>) -> Result<LabeledDataset> {
        LabeledDataset::new(x, self.y.clone())
    }
}

/// Unlabeled objects: a `U x p` design matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct UnlabeledDataset {
    pub x: DMatrix<f64>,
}

impl UnlabeledDataset {
    pub fn new(x: DMatrix<f64>) -> Self {
        UnlabeledDataset { x }
    }

    pub fn empty(p: usize) -> Self {
        UnlabeledDataset {
            x: DMatrix::zeros(0, p),
        }
    }

    pub fn len(&self) -> usize {
        self.x.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.x.nrows() == 0
    }
}

/// Random stream handed to samplers.
pub type SeedStream = ChaCha8Rng;

/// Master seed from which per-repetition streams are derived.
///
/// Repetition `r` uses the sub-seed `splitmix64(master ^ splitmix64(r))`,
/// which seeds a ChaCha8 generator. Nested derivations (e.g. a redraw attempt
/// inside a repetition) apply the same rule to the derived seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed {
    pub master: u64,
}

impl Seed {
    pub fn new(master: u64) -> Self {
        Seed { master }
    }

    pub fn sub_seed(&self, index: u64) -> u64 {
        splitmix64(self.master ^ splitmix64(index))
    }

    pub fn derive(&self, index: u64) -> Seed {
        Seed {
            master: self.sub_seed(index),
        }
    }

    pub fn stream(&self, index: u64) -> SeedStream {
        ChaCha8Rng::seed_from_u64(self.sub_seed(index))
    }
}

/// SplitMix64 finalizer (Steele, Lea & Flood).
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws `n_per_class` objects from each class.
///
/// Rows alternate class 1, class 2, class 1, ... so every even-length prefix
/// is itself exactly balanced. Learning-curve protocols rely on this to grow
/// training sets by taking prefixes.
pub fn sample_labeled(
    problem: &GaussianProblem,
    n_per_class: usize,
    rng: &mut SeedStream,
) -> Result<LabeledDataset> {
    if n_per_class == 0 {
        return Err(domain("n_per_class must be at least 1"));
    }
    let n = 2 * n_per_class;
    let p = problem.p;
    let mut rows = vec![0.0; n * p];
    let mut y = Vec::with_capacity(n);
    for (i, row) in rows.chunks_mut(p).enumerate() {
        let class = if i % 2 == 0 { Class::One } else { Class::Two };
        problem.draw_row(class, rng, row);
        y.push(class);
    }
    Ok(LabeledDataset {
        x: DMatrix::from_row_slice(n, p, &rows),
        y,
    })
}

/// Draws `n` objects from the equal-prior mixture and discards their classes.
pub fn sample_unlabeled(
    problem: &GaussianProblem,
    n: usize,
    rng: &mut SeedStream,
) -> Result<UnlabeledDataset> {
    if n == 0 {
        return Err(domain("n must be at least 1"));
    }
    let p = problem.p;
    let mut rows = vec![0.0; n * p];
    for row in rows.chunks_mut(p) {
        let class = if rng.gen::<bool>() { Class::One } else { Class::Two };
        problem.draw_row(class, rng, row);
    }
    Ok(UnlabeledDataset {
        x: DMatrix::from_row_slice(n, p, &rows),
    })
}

/// Draws `n` rows uniformly with replacement, carrying labels along.
pub fn bootstrap_sample(data: &LabeledDataset, n: usize, rng: &mut SeedStream) -> Result<LabeledDataset> {
    if data.is_empty() {
        return Err(domain("cannot bootstrap from an empty dataset"));
    }
    let idx: Vec<usize> = (0..n).map(|_| rng.gen_range(0..data.len())).collect();
    Ok(LabeledDataset {
        x: data.x.select_rows(idx.iter()),
        y: idx.iter().map(|&i| data.y[i]).collect(),
    })
}

/// Selects the label column of a CSV file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    /// Zero-based column index.
    Index(usize),
}

impl std::str::FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    /// All-digit strings are indices, anything else a column name.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        })
    }
}

impl std::fmt::Display for LabelColumn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LabelColumn::Name(n) => f.write_str(n),
            LabelColumn::Index(i) => write!(f, "{i}"),
        }
    }
}

/// Reads a comma-separated file with a header row. Every column other than
/// the label column is a real-valued feature. The two label values are mapped
/// to classes 1 and 2 in ascending lexicographic order of their text.
pub fn load_csv_dataset(path: &Path, label_column: &LabelColumn) -> Result<LabeledDataset> {
    let fail = |reason: String| Error::Ingest {
        path: path.to_path_buf(),
        reason,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| fail(e.to_string()))?;
    let headers = reader.headers().map_err(|e| fail(e.to_string()))?.clone();
    let label_idx = match label_column {
        LabelColumn::Index(i) if *i < headers.len() => *i,
        LabelColumn::Index(i) => {
            return Err(fail(format!(
                "label column {i} out of range ({} columns)",
                headers.len()
            )))
        }
        LabelColumn::Name(name) => headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| fail(format!("no column named {name:?}")))?,
    };
    let p = headers.len() - 1;
    if p == 0 {
        return Err(fail("no feature columns".into()));
    }

    let mut features = Vec::new();
    let mut raw_labels = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| fail(e.to_string()))?;
        // header is line 1
        let line = line + 2;
        if record.len() != headers.len() {
            return Err(fail(format!(
                "line {line}: {} fields, expected {}",
                record.len(),
                headers.len()
            )));
        }
        for (j, cell) in record.iter().enumerate() {
            if cell.is_empty() {
                return Err(fail(format!(
                    "line {line}: missing value in column {:?}",
                    &headers[j]
                )));
            }
            if j == label_idx {
                raw_labels.push(cell.to_string());
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| {
                fail(format!(
                    "line {line}: non-numeric value {cell:?} in column {:?}",
                    &headers[j]
                ))
            })?;
            if !v.is_finite() {
                return Err(fail(format!(
                    "line {line}: non-finite value in column {:?}",
                    &headers[j]
                )));
            }
            features.push(v);
        }
    }
    let distinct: BTreeSet<&str> = raw_labels.iter().map(String::as_str).collect();
    if distinct.len() != 2 {
        return Err(fail(format!(
            "label column must hold exactly 2 distinct values, found {}: {:?}",
            distinct.len(),
            distinct.iter().take(5).collect::<Vec<_>>()
        )));
    }
    let first = *distinct.iter().next().expect("two values");
    let y = raw_labels
        .iter()
        .map(|l| if l == first { Class::One } else { Class::Two })
        .collect::<Vec<_>>();
    let x = DMatrix::from_row_slice(y.len(), p, &features);
    LabeledDataset::new(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn default_means_are_delta_apart() {
        for (p, delta) in [(1, 2.0), (50, 4.0), (7, 0.3)] {
            let g = GaussianProblem::new(p, delta).unwrap();
            assert!(((g.mu1() - g.mu2()).norm() - delta).abs() < 1e-9);
            assert!(g.mu1().iter().all(|&v| v < 0.0));
        }
        assert!(GaussianProblem::new(0, 1.0).is_err());
        assert!(GaussianProblem::new(3, 0.0).is_err());
    }

    #[test]
    fn labeled_sample_is_balanced() {
        let g = GaussianProblem::new(50, 4.0).unwrap();
        let mut rng = Seed::new(1).stream(0);
        let d = sample_labeled(&g, 10, &mut rng).unwrap();
        assert_eq!((d.len(), d.dim()), (20, 50));
        assert_eq!((d.count(Class::One), d.count(Class::Two)), (10, 10));
        for k in (2..=20).step_by(2) {
            let pre = d.prefix(k);
            assert_eq!(pre.count(Class::One), pre.count(Class::Two));
        }
        let single = sample_labeled(&g, 1, &mut rng).unwrap();
        assert_eq!(single.y, vec![Class::One, Class::Two]);
        assert!(sample_labeled(&g, 0, &mut rng).is_err());
    }

    #[test]
    fn class_mean_converges() {
        let g = GaussianProblem::new(3, 2.0).unwrap();
        let mut rng = Seed::new(2).stream(0);
        let d = sample_labeled(&g, 1_000_000, &mut rng).unwrap();
        let mut sum = DVector::zeros(3);
        for (row, c) in d.x.row_iter().zip(&d.y) {
            if *c == Class::One {
                sum += row.transpose();
            }
        }
        let mean = sum / 1e6;
        assert!((mean - g.mu1()).amax() < 0.01);
    }

    #[test]
    fn unlabeled_moments_match_mixture() {
        let (p, delta) = (3, 2.0);
        let g = GaussianProblem::new(p, delta).unwrap();
        let mut rng = Seed::new(3).stream(0);
        let u = sample_unlabeled(&g, 1_000_000, &mut rng).unwrap();
        let mean = u.x.row_mean().transpose();
        let center = (g.mu1() + g.mu2()) / 2.0;
        assert!((&mean - center).amax() < 0.01);
        let mut centered = u.x.clone();
        for mut row in centered.row_iter_mut() {
            row -= mean.transpose();
        }
        let cov = centered.tr_mul(&centered) / (u.len() as f64 - 1.0);
        let expected = DMatrix::identity(p, p) + DMatrix::from_element(p, p, 0.25 * delta * delta / p as f64);
        assert!((cov - expected).amax() < 0.02);
        assert_eq!(sample_unlabeled(&g, 1, &mut rng).unwrap().len(), 1);
    }

    #[test]
    fn seeds_are_reproducible_and_distinct() {
        let g = GaussianProblem::new(4, 1.0).unwrap();
        let a = sample_labeled(&g, 5, &mut Seed::new(42).stream(3)).unwrap();
        let b = sample_labeled(&g, 5, &mut Seed::new(42).stream(3)).unwrap();
        let c = sample_labeled(&g, 5, &mut Seed::new(42).stream(4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(Seed::new(42).sub_seed(0), Seed::new(43).sub_seed(0));
    }

    #[test]
    fn bootstrap_shapes() {
        let d = LabeledDataset::new(DMatrix::from_row_slice(1, 2, &[1.0, 2.0]), vec![Class::Two]).unwrap();
        let mut rng = Seed::new(0).stream(0);
        let b = bootstrap_sample(&d, 5, &mut rng).unwrap();
        assert_eq!(b.len(), 5);
        assert!(b.x.row_iter().all(|r| r[0] == 1.0 && r[1] == 2.0));
        assert_eq!(b.classes(), d.classes());
        let big = bootstrap_sample(&d, 1000, &mut rng).unwrap();
        assert_eq!(big.len(), 1000);
        let empty = LabeledDataset::new(DMatrix::zeros(0, 2), vec![]).unwrap();
        assert!(bootstrap_sample(&empty, 3, &mut rng).is_err());
    }

    fn write_csv(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn csv_labels_mapped_lexicographically() {
        let f = write_csv("x1,label,x2\n1.5,b,2\n0.5,a,-1\n3,b,4e-1\n");
        let d = load_csv_dataset(f.path(), &LabelColumn::Name("label".into())).unwrap();
        assert_eq!(d.y, vec![Class::Two, Class::One, Class::Two]);
        assert_eq!(
            d.x,
            DMatrix::from_row_slice(3, 2, &[1.5, 2.0, 0.5, -1.0, 3.0, 0.4])
        );
        let by_index = load_csv_dataset(f.path(), &"1".parse().unwrap()).unwrap();
        assert_eq!(by_index, d);
    }

    #[test]
    fn csv_errors() {
        let three = write_csv("x,y\n1,a\n2,b\n3,c\n");
        assert!(matches!(
            load_csv_dataset(three.path(), &LabelColumn::Index(1)),
            Err(Error::Ingest { .. })
        ));
        let one = write_csv("x,y\n1,a\n2,a\n");
        assert!(load_csv_dataset(one.path(), &LabelColumn::Index(1)).is_err());
        let text = write_csv("x,y\nfoo,a\n2,b\n");
        let err = load_csv_dataset(text.path(), &LabelColumn::Index(1)).unwrap_err();
        assert!(err.to_string().contains("non-numeric"), "{err}");
        let missing = write_csv("x,y\n,a\n2,b\n");
        assert!(load_csv_dataset(missing.path(), &LabelColumn::Index(1))
            .unwrap_err()
            .to_string()
            .contains("missing"));
        assert!(load_csv_dataset(Path::new("/nonexistent/file.csv"), &LabelColumn::Index(0)).is_err());
        let f = write_csv("x,y\n1,a\n2,b\n");
        assert!(load_csv_dataset(f.path(), &LabelColumn::Name("z".into())).is_err());
    }

    #[test]
    fn bundled_datasets_load() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
        let iono = load_csv_dataset(&dir.join("ionosphere.csv"), &LabelColumn::Name("class".into())).unwrap();
        assert_eq!((iono.len(), iono.dim()), (351, 33));
        let sonar = load_csv_dataset(&dir.join("sonar.csv"), &LabelColumn::Name("class".into())).unwrap();
        assert_eq!((sonar.len(), sonar.dim()), (208, 60));
    }
}
