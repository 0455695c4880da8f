//! Shared helpers for the CLI integration and acceptance tests: bundled
//! fixture generation and an exhaustive stump-training oracle that stays
//! independent of the library's search code.

#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use logicboost::dataset::{make_xor, Dataset, SampleWeights};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("workspace root exists")
}

pub fn fixture_path(name: &str) -> PathBuf {
    workspace_root().join("data").join(name)
}

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_logicboost"))
}

/// The xor clusters with four uninformative noise features appended;
/// labels written as `pos` / `neg`. This is the bundled `data/xor6.csv`.
pub fn xor6_csv() -> String {
    let base = make_xor(150, 0.3, 11);
    let mut noise = rng(1106);
    let mut out = String::from("x1,x2,n1,n2,n3,n4,label\n");
    for i in 0..base.n_samples() {
        let row = base.row(i);
        let _ = write!(out, "{},{}", row[0], row[1]);
        for _ in 0..4 {
            let _ = write!(out, ",{}", noise.random_range(-2.0..2.0f64));
        }
        let label = if base.label(i) == 1 { "pos" } else { "neg" };
        let _ = writeln!(out, ",{label}");
    }
    out
}

/// A centered square (`max(|x0|, |x1|) < 1` is positive) with two noise
/// features, class-balanced by rejection; labels `1` / `0`. This is the
/// bundled `data/box4.csv`.
pub fn box4_csv() -> String {
    let mut r = rng(440);
    let mut out = String::from("x0,x1,n1,n2,label\n");
    let (mut pos, mut neg) = (0, 0);
    while pos + neg < 600 {
        let x0: f64 = r.random_range(-2.0..2.0);
        let x1: f64 = r.random_range(-2.0..2.0);
        let inside = x0.abs() < 1.0 && x1.abs() < 1.0;
        if inside && pos < 300 {
            pos += 1;
        } else if !inside && neg < 300 {
            neg += 1;
        } else {
            continue;
        }
        let n1: f64 = r.random_range(-2.0..2.0);
        let n2: f64 = r.random_range(-2.0..2.0);
        let _ = writeln!(out, "{x0},{x1},{n1},{n2},{}", if inside { 1 } else { 0 });
    }
    out
}

/// Exhaustive stump search over the specified candidate grid (midpoints of
/// consecutive distinct sorted values plus below-minimum and above-maximum
/// sentinels, both polarities), summing each candidate's misclassified
/// weight in sample order. Written independently of the library.
pub fn brute_force_min_error(data: &Dataset, weights: &SampleWeights) -> f64 {
    let w = weights.as_slice();
    let mut best = f64::INFINITY;
    for feature in 0..data.n_features() {
        let mut values: Vec<f64> = (0..data.n_samples())
            .map(|i| data.value(i, feature))
            .collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values.dedup();

        let mut thresholds = vec![values[0] - 1.0];
        for pair in values.windows(2) {
            thresholds.push(pair[0] / 2.0 + pair[1] / 2.0);
        }
        thresholds.push(values[values.len() - 1] + 1.0);

        for &threshold in &thresholds {
            for positive_on_ge in [true, false] {
                let mut error = 0.0;
                for (i, &wi) in w.iter().enumerate() {
                    let ge = data.value(i, feature) >= threshold;
                    let prediction = if ge == positive_on_ge { 1 } else { -1 };
                    if prediction != data.label(i) {
                        error += wi;
                    }
                }
                if error < best {
                    best = error;
                }
            }
        }
    }
    best
}

pub fn random_dataset(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Dataset {
    let features: Vec<f64> = (0..n * d).map(|_| rng.random_range(-5.0..5.0)).collect();
    let labels: Vec<i8> = (0..n)
        .map(|_| {
            if rng.random_range(0.0..1.0) < 0.5 {
                -1
            } else {
                1
            }
        })
        .collect();
    Dataset::new(features, d, labels, None).unwrap()
}

pub fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> SampleWeights {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.001..1.0)).collect();
    SampleWeights::new(raw).unwrap()
}
