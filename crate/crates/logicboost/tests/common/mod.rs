//! Shared helpers for the integration tests: random problem generators
//! and an exhaustive stump-training oracle kept independent of the
//! library's search path.

use logicboost::dataset::{Dataset, SampleWeights};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Continuous random dataset; continuous features and weights keep error
/// ties measure-zero.
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

/// Exhaustive search over the full candidate grid: for every feature, the
/// midpoints between consecutive distinct sorted values plus one threshold
/// below the minimum and one above the maximum, in both directions. The
/// error of each candidate is summed over samples in index order, which is
/// the reference error definition. Returns the minimal error.
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
            // positive_on_ge = true is the `>= threshold -> +1` stump,
            // false is its negation.
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
