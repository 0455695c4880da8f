//! Sample/label/weight data model, CSV ingestion, synthetic generators and
//! seeded train/test splitting.
//!
//! A [`Dataset`] is a dense `n_samples x n_features` matrix of finite reals
//! with one label in `{-1, +1}` per row. Datasets are immutable after
//! construction and safe to share across threads.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Dense two-class dataset: row-major features plus `{-1, +1}` labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    n_samples: usize,
    n_features: usize,
    labels: Vec<i8>,
    feature_names: Option<Vec<String>>,
}

impl Dataset {
    /// Builds a dataset from row-major `features` and validates the type
    /// invariants: at least one sample and one feature, every value finite,
    /// every label `-1` or `+1`.
    pub fn new(
        features: Vec<f64>,
        n_features: usize,
        labels: Vec<i8>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        let n_samples = labels.len();
        if n_samples == 0 {
            return Err(Error::InvalidDataset("no samples".into()));
        }
        if n_features == 0 {
            return Err(Error::InvalidDataset("no features".into()));
        }
        if features.len() != n_samples * n_features {
            return Err(Error::InvalidDataset(format!(
                "feature buffer holds {} values, expected {} ({} samples x {} features)",
                features.len(),
                n_samples * n_features,
                n_samples,
                n_features
            )));
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite feature value at sample {}, feature {}",
                pos / n_features,
                pos % n_features
            )));
        }
        if let Some(pos) = labels.iter().position(|&y| y != -1 && y != 1) {
            return Err(Error::InvalidDataset(format!(
                "label at sample {pos} is not -1 or +1"
            )));
        }
        if let Some(names) = &feature_names {
            if names.len() != n_features {
                return Err(Error::InvalidDataset(format!(
                    "{} feature names for {} features",
                    names.len(),
                    n_features
                )));
            }
        }
        Ok(Dataset {
            features,
            n_samples,
            n_features,
            labels,
            feature_names,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// Feature vector of sample `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn value(&self, sample: usize, feature: usize) -> f64 {
        assert!(feature < self.n_features, "feature index out of range");
        self.features[sample * self.n_features + feature]
    }

    pub fn label(&self, i: usize) -> i8 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    /// New dataset holding the given samples, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            features,
            n_samples: indices.len(),
            n_features: self.n_features,
            labels,
            feature_names: self.feature_names.clone(),
        }
    }
}

/// Normalized, non-negative per-sample weights (the boosting distribution).
#[derive(Debug, Clone, PartialEq)]
pub struct SampleWeights(Vec<f64>);

impl SampleWeights {
    /// Validates non-negativity and normalizes the entries to sum to one.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("empty weight vector".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidArgument(
                "weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidArgument("weights sum to zero".into()));
        }
        Ok(SampleWeights(
            weights.into_iter().map(|w| w / total).collect(),
        ))
    }

    /// Uniform distribution: every entry `1/n`.
    pub fn uniform(n: usize) -> Self {
        assert!(n >= 1, "need at least one sample");
        SampleWeights(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub(crate) fn from_normalized(weights: Vec<f64>) -> Self {
        SampleWeights(weights)
    }
}

/// Sizes and seed of one train/test split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub n_train: usize,
    pub n_test: usize,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(n_train: usize, n_test: usize, seed: u64) -> Self {
        SplitSpec {
            n_train,
            n_test,
            seed,
        }
    }
}

/// Train/test sizes used by the classic UCI comparison runs.
pub fn preset_split_sizes(name: &str) -> Option<(usize, usize)> {
    match name {
        "cancer" | "breast-cancer" => Some((630, 69)),
        "ion" | "ionosphere" => Some((315, 36)),
        "ocr49" => Some((1000, 5000)),
        "splice" => Some((1000, 2175)),
        _ => None,
    }
}

/// Which CSV column carries the label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSpec {
    Index(usize),
    Name(String),
    /// The last column of each row.
    Last,
}

impl fmt::Display for ColumnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnSpec::Index(i) => write!(f, "{i}"),
            ColumnSpec::Name(n) => write!(f, "{n}"),
            ColumnSpec::Last => write!(f, "last"),
        }
    }
}

impl FromStr for ColumnSpec {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "last" {
            Ok(ColumnSpec::Last)
        } else if let Ok(i) = s.parse::<usize>() {
            Ok(ColumnSpec::Index(i))
        } else {
            Ok(ColumnSpec::Name(s.to_string()))
        }
    }
}

/// Explicit mapping from raw label tokens to `{-1, +1}`.
///
/// Labels in files may be arbitrary tokens; the mapping is always user
/// input and never inferred.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelMapping(BTreeMap<String, i8>);

impl LabelMapping {
    pub fn new() -> Self {
        LabelMapping(BTreeMap::new())
    }

    pub fn insert(&mut self, raw: impl Into<String>, label: i8) -> Result<()> {
        if label != -1 && label != 1 {
            return Err(Error::InvalidArgument(format!(
                "mapped label must be -1 or +1, got {label}"
            )));
        }
        self.0.insert(raw.into(), label);
        Ok(())
    }

    /// Parses a `raw1=-1,raw2=+1` specification.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut mapping = LabelMapping::new();
        for part in spec.split(',') {
            let (raw, value) = part.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "label mapping entry {part:?} is not of the form raw=-1 or raw=+1"
                ))
            })?;
            let label = match value {
                "-1" => -1,
                "+1" | "1" => 1,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "label mapping value {value:?} must be -1 or +1"
                    )))
                }
            };
            mapping.insert(raw, label)?;
        }
        if mapping.0.is_empty() {
            return Err(Error::InvalidArgument("empty label mapping".into()));
        }
        Ok(mapping)
    }

    pub fn get(&self, raw: &str) -> Option<i8> {
        self.0.get(raw).copied()
    }
}

/// Loads a comma-separated file into a [`Dataset`].
///
/// Non-label columns are parsed as reals in file order; the label column is
/// translated through `mapping`. Rows are counted from 1 in error messages.
pub fn load_csv(
    path: impl AsRef<Path>,
    label_column: &ColumnSpec,
    mapping: &LabelMapping,
    has_header: bool,
) -> Result<Dataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::Parse {
                row: 0,
                message: format!("{other:?}"),
            },
        })?;

    let header: Option<Vec<String>> = if has_header {
        let record = reader.headers().map_err(|e| Error::Parse {
            row: 0,
            message: e.to_string(),
        })?;
        Some(record.iter().map(|s| s.to_string()).collect())
    } else {
        None
    };

    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut label_index: Option<usize> = None;
    let mut n_columns: Option<usize> = None;

    for (index, record) in reader.records().enumerate() {
        let row = index + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            message: match e.kind() {
                csv::ErrorKind::UnequalLengths {
                    expected_len, len, ..
                } => {
                    format!("expected {expected_len} columns, found {len}")
                }
                other => format!("{other:?}"),
            },
        })?;

        if n_columns.is_none() {
            let cols = record.len();
            if cols < 2 {
                return Err(Error::Parse {
                    row,
                    message: "need at least one feature column and a label column".into(),
                });
            }
            let idx = match label_column {
                ColumnSpec::Index(i) => {
                    if *i >= cols {
                        return Err(Error::InvalidArgument(format!(
                            "label column {i} out of range for {cols} columns"
                        )));
                    }
                    *i
                }
                ColumnSpec::Name(name) => match &header {
                    Some(names) => names.iter().position(|n| n == name).ok_or_else(|| {
                        Error::InvalidArgument(format!("no column named {name:?} in header"))
                    })?,
                    None => {
                        return Err(Error::InvalidArgument(
                            "label column given by name but the file has no header".into(),
                        ))
                    }
                },
                ColumnSpec::Last => cols - 1,
            };
            n_columns = Some(cols);
            label_index = Some(idx);
        }
        let label_index = label_index.unwrap();

        for (col, field) in record.iter().enumerate() {
            if col == label_index {
                let label = mapping.get(field).ok_or_else(|| Error::UnmappedLabel {
                    row,
                    value: field.to_string(),
                })?;
                labels.push(label);
            } else {
                let value: f64 = field.parse().map_err(|_| Error::Parse {
                    row,
                    message: format!("feature column {col}: {field:?} is not a number"),
                })?;
                features.push(value);
            }
        }
    }

    if labels.is_empty() {
        return Err(Error::InvalidDataset(format!(
            "{} holds no data rows",
            path.display()
        )));
    }

    let n_features = n_columns.unwrap() - 1;
    let label_index = label_index.unwrap();
    let feature_names = header.map(|mut names| {
        names.remove(label_index);
        names
    });
    Dataset::new(features, n_features, labels, feature_names)
}

/// Generates the four-cluster xor dataset.
///
/// Clusters sit at `(+1,+1)` and `(-1,-1)` with label `+1` and at `(+1,-1)`
/// and `(-1,+1)` with label `-1`; each point is the cluster center plus
/// isotropic Gaussian noise with standard deviation `spread`. A point that
/// lands exactly on a coordinate axis is re-drawn so quadrant membership
/// stays well defined. Generation is deterministic in `seed`.
///
/// ```
/// use logicboost::dataset::make_xor;
///
/// let data = make_xor(1, 0.0, 0);
/// assert_eq!(data.n_samples(), 4);
/// assert_eq!(data.row(0), &[1.0, 1.0]);
/// assert_eq!(data.labels().iter().filter(|&&y| y == 1).count(), 2);
/// ```
pub fn make_xor(n_per_quadrant: usize, spread: f64, seed: u64) -> Dataset {
    assert!(n_per_quadrant >= 1, "need at least one point per quadrant");
    assert!(
        spread.is_finite() && spread >= 0.0,
        "spread must be a non-negative real"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quadrants: [(f64, f64, i8); 4] = [
        (1.0, 1.0, 1),
        (-1.0, -1.0, 1),
        (1.0, -1.0, -1),
        (-1.0, 1.0, -1),
    ];
    let n = 4 * n_per_quadrant;
    let mut features = Vec::with_capacity(2 * n);
    let mut labels = Vec::with_capacity(n);
    for &(cx, cy, label) in &quadrants {
        for _ in 0..n_per_quadrant {
            let (x, y) = loop {
                let dx: f64 = rng.sample(StandardNormal);
                let dy: f64 = rng.sample(StandardNormal);
                let x = cx + spread * dx;
                let y = cy + spread * dy;
                if x != 0.0 && y != 0.0 {
                    break (x, y);
                }
            };
            features.push(x);
            features.push(y);
            labels.push(label);
        }
    }
    Dataset::new(
        features,
        2,
        labels,
        Some(vec!["x1".to_string(), "x2".to_string()]),
    )
    .expect("generated xor data is always valid")
}

/// Splits `data` into disjoint uniformly-random train and test subsets of
/// the requested sizes. Deterministic in `spec.seed`; the selected indices
/// are kept in ascending order within each side.
pub fn split(data: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    if spec.n_train == 0 || spec.n_test == 0 {
        return Err(Error::InvalidArgument(
            "train and test sizes must both be at least 1".into(),
        ));
    }
    let needed = spec.n_train + spec.n_test;
    if needed > data.n_samples() {
        return Err(Error::InvalidArgument(format!(
            "split needs {needed} samples but the dataset has {}",
            data.n_samples()
        )));
    }
    let mut indices: Vec<usize> = (0..data.n_samples()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    indices.shuffle(&mut rng);
    let mut train: Vec<usize> = indices[..spec.n_train].to_vec();
    let mut test: Vec<usize> = indices[spec.n_train..needed].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok((data.subset(&train), data.subset(&test)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(contents: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(contents.as_bytes()).unwrap();
        file
    }

    fn mapping_01() -> LabelMapping {
        LabelMapping::parse("0=-1,1=+1").unwrap()
    }

    #[test]
    fn load_csv_maps_labels() {
        let file = write_temp("1.5,2.0,0\n3.25,4.0,1\n5.0,6.0,0\n");
        let data = load_csv(file.path(), &ColumnSpec::Last, &mapping_01(), false).unwrap();
        assert_eq!(data.n_samples(), 3);
        assert_eq!(data.n_features(), 2);
        assert_eq!(data.labels(), &[-1, 1, -1]);
        assert_eq!(data.row(1), &[3.25, 4.0]);
        assert!(data.feature_names().is_none());
    }

    #[test]
    fn load_csv_header_populates_feature_names() {
        let file = write_temp("a,b,class\n1,2,0\n3,4,1\n");
        let data = load_csv(
            file.path(),
            &ColumnSpec::Name("class".into()),
            &mapping_01(),
            true,
        )
        .unwrap();
        assert_eq!(data.feature_names().unwrap(), &["a", "b"]);
        assert_eq!(data.labels(), &[-1, 1]);
    }

    #[test]
    fn load_csv_reports_bad_feature_row() {
        let file = write_temp("1,2,0\nabc,4,1\n");
        let err = load_csv(file.path(), &ColumnSpec::Last, &mapping_01(), false).unwrap_err();
        match err {
            Error::Parse { row, .. } => assert_eq!(row, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn load_csv_reports_unmapped_label() {
        let file = write_temp("1,2,0\n3,4,2\n");
        let err = load_csv(file.path(), &ColumnSpec::Last, &mapping_01(), false).unwrap_err();
        match err {
            Error::UnmappedLabel { row, value } => {
                assert_eq!(row, 2);
                assert_eq!(value, "2");
            }
            other => panic!("expected unmapped label error, got {other:?}"),
        }
    }

    #[test]
    fn load_csv_reports_ragged_row() {
        let file = write_temp("1,2,0\n3,4\n");
        let err = load_csv(file.path(), &ColumnSpec::Last, &mapping_01(), false).unwrap_err();
        match err {
            Error::Parse { row, .. } => assert_eq!(row, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn xor_with_zero_spread_hits_cluster_centers() {
        let data = make_xor(1, 0.0, 123);
        assert_eq!(data.n_samples(), 4);
        let expect = [
            ([1.0, 1.0], 1),
            ([-1.0, -1.0], 1),
            ([1.0, -1.0], -1),
            ([-1.0, 1.0], -1),
        ];
        for (i, (point, label)) in expect.iter().enumerate() {
            assert_eq!(data.row(i), point);
            assert_eq!(data.label(i), *label);
        }
    }

    #[test]
    fn xor_is_deterministic_and_balanced() {
        let a = make_xor(250, 0.3, 7);
        let b = make_xor(250, 0.3, 7);
        assert_eq!(a, b);
        let positives = a.labels().iter().filter(|&&y| y == 1).count();
        assert_eq!(positives, 500);
        assert_eq!(a.n_samples() - positives, 500);
    }

    #[test]
    fn split_sizes_and_determinism() {
        let data = make_xor(1000, 0.3, 1);
        let spec = SplitSpec::new(1000, 2175, 42);
        let (train, test) = split(&data, &spec).unwrap();
        assert_eq!(train.n_samples(), 1000);
        assert_eq!(test.n_samples(), 2175);
        let (train2, test2) = split(&data, &spec).unwrap();
        assert_eq!(train, train2);
        assert_eq!(test, test2);
    }

    #[test]
    fn split_full_partition_covers_everything() {
        let data = make_xor(5, 0.2, 3);
        let spec = SplitSpec::new(12, 8, 9);
        let (train, test) = split(&data, &spec).unwrap();
        assert_eq!(train.n_samples() + test.n_samples(), data.n_samples());
        // Every original row appears exactly once across the two sides.
        let mut seen: Vec<&[f64]> = (0..train.n_samples())
            .map(|i| train.row(i))
            .chain((0..test.n_samples()).map(|i| test.row(i)))
            .collect();
        let mut original: Vec<&[f64]> = (0..data.n_samples()).map(|i| data.row(i)).collect();
        let key = |r: &&[f64]| (r[0].to_bits(), r[1].to_bits());
        seen.sort_by_key(key);
        original.sort_by_key(key);
        assert_eq!(seen, original);
    }

    #[test]
    fn split_rejects_oversized_request() {
        let data = make_xor(2, 0.1, 0);
        let err = split(&data, &SplitSpec::new(6, 4, 0)).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn uniform_weights_examples() {
        let w = SampleWeights::uniform(4);
        assert_eq!(w.as_slice(), &[0.25; 4]);
        assert_eq!(SampleWeights::uniform(1).as_slice(), &[1.0]);
        for n in [1usize, 3, 17, 1000] {
            let sum: f64 = SampleWeights::uniform(n).as_slice().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn weights_reject_negative_entries() {
        assert!(SampleWeights::new(vec![0.5, -0.1]).is_err());
        assert!(SampleWeights::new(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn dataset_rejects_bad_labels_and_nonfinite() {
        assert!(Dataset::new(vec![1.0, 2.0], 1, vec![1, 0], None).is_err());
        assert!(Dataset::new(vec![1.0, f64::NAN], 1, vec![1, -1], None).is_err());
        assert!(Dataset::new(vec![], 1, vec![], None).is_err());
    }

    #[test]
    fn preset_sizes_match_the_published_protocol() {
        assert_eq!(preset_split_sizes("splice"), Some((1000, 2175)));
        assert_eq!(preset_split_sizes("cancer"), Some((630, 69)));
        assert_eq!(preset_split_sizes("ionosphere"), Some((315, 36)));
        assert_eq!(preset_split_sizes("ocr49"), Some((1000, 5000)));
        assert_eq!(preset_split_sizes("nope"), None);
    }
}
