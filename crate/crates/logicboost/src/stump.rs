//! Thresholded single-feature weak classifiers and their exact training
//! under an arbitrary sample distribution.
//!
//! A stump splits one feature at a threshold: with direction [`Direction::Ge`]
//! it predicts `+1` exactly when `x[j] >= threshold`, with [`Direction::Lt`]
//! exactly when `x[j] < threshold` (the complement, so negation is a
//! direction flip). Equality always lands on the `Ge` side.
//!
//! Training searches a finite grid that provably contains an exact
//! minimizer of the weighted 0/1 error: for each feature the midpoints
//! `v[k]/2 + v[k+1]/2` between consecutive distinct sorted values, plus one
//! sentinel below the minimum (`min - 1`) and one above the maximum
//! (`max + 1`). The sentinels admit constant classifiers, which matter as
//! terminal operations inside OR/AND chains.

use crate::dataset::{Dataset, SampleWeights};

/// Side of the threshold that is classified `+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `+1` iff `x[feature] >= threshold`.
    Ge,
    /// `+1` iff `x[feature] < threshold`.
    Lt,
}

/// Single-feature threshold classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionStump {
    pub feature_index: usize,
    pub threshold: f64,
    pub direction: Direction,
}

impl DecisionStump {
    /// Classifies one feature vector.
    ///
    /// Panics if `x` is shorter than `feature_index + 1`.
    pub fn predict(&self, x: &[f64]) -> i8 {
        assert!(
            self.feature_index < x.len(),
            "stump tests feature {} but the input has {} features",
            self.feature_index,
            x.len()
        );
        self.predict_value(x[self.feature_index])
    }

    #[inline]
    pub(crate) fn predict_value(&self, v: f64) -> i8 {
        let ge = v >= self.threshold;
        match self.direction {
            Direction::Ge => {
                if ge {
                    1
                } else {
                    -1
                }
            }
            Direction::Lt => {
                if ge {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// Weighted 0/1 error over a dataset: the summed weight of misclassified
    /// samples, accumulated in sample order.
    pub fn weighted_error(&self, data: &Dataset, weights: &SampleWeights) -> f64 {
        assert_eq!(weights.len(), data.n_samples(), "weight/sample mismatch");
        canonical_error(self, data, weights.as_slice())
    }
}

impl std::fmt::Display for DecisionStump {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.direction {
            Direction::Ge => write!(f, "x[{}] >= {}", self.feature_index, self.threshold),
            Direction::Lt => write!(f, "x[{}] < {}", self.feature_index, self.threshold),
        }
    }
}

/// Misclassified weight of `stump`, summed in ascending sample order. This
/// is the reference error definition every selection path reports against.
pub(crate) fn canonical_error(stump: &DecisionStump, data: &Dataset, w: &[f64]) -> f64 {
    let j = stump.feature_index;
    let mut err = 0.0;
    for (i, &wi) in w.iter().enumerate() {
        if stump.predict_value(data.value(i, j)) != data.label(i) {
            err += wi;
        }
    }
    err
}

/// Per-feature sample orderings, computed once per dataset and shared by
/// every threshold scan over it.
#[derive(Debug, Clone)]
pub(crate) struct ColumnOrder {
    per_feature: Vec<Vec<u32>>,
}

impl ColumnOrder {
    pub(crate) fn new(data: &Dataset) -> Self {
        let per_feature = (0..data.n_features())
            .map(|j| {
                let mut idx: Vec<u32> = (0..data.n_samples() as u32).collect();
                idx.sort_unstable_by(|&a, &b| {
                    data.value(a as usize, j)
                        .partial_cmp(&data.value(b as usize, j))
                        .expect("dataset values are finite")
                        .then(a.cmp(&b))
                });
                idx
            })
            .collect();
        ColumnOrder { per_feature }
    }
}

/// Trains the stump minimizing the weighted error over the candidate grid.
///
/// Ties are broken deterministically: lower feature index first, interior
/// (midpoint) thresholds before the two sentinels, then lower threshold,
/// then `Ge` before `Lt`. The returned error equals
/// [`DecisionStump::weighted_error`] of the returned stump.
///
/// ```
/// use logicboost::dataset::{Dataset, SampleWeights};
/// use logicboost::stump::train_stump;
///
/// let data = Dataset::new(vec![1.0, 2.0, 3.0, 4.0], 1, vec![-1, -1, 1, 1], None).unwrap();
/// let (stump, error) = train_stump(&data, &SampleWeights::uniform(4));
/// assert_eq!(stump.feature_index, 0);
/// assert_eq!(stump.threshold, 2.5);
/// assert_eq!(error, 0.0);
/// ```
pub fn train_stump(data: &Dataset, weights: &SampleWeights) -> (DecisionStump, f64) {
    assert_eq!(weights.len(), data.n_samples(), "weight/sample mismatch");
    let order = ColumnOrder::new(data);
    train_stump_with_order(data, weights.as_slice(), &order)
}

// Candidates whose scanned error sits within this slack of the scanned
// minimum are re-evaluated with the canonical sum, so the selected stump
// carries the exact grid-minimal error regardless of accumulation drift.
const NEAR_TIE_SLACK: f64 = 1e-9;
// Cap on canonical re-evaluations. Large tie groups (symmetric data,
// masked-out samples in chain training) fall back to the scanned ordering.
const MAX_REFINED: usize = 64;

#[derive(Clone, Copy)]
struct Candidate {
    feature: usize,
    threshold: f64,
    sentinel: bool,
    direction: Direction,
    error: f64,
}

impl Candidate {
    fn key(&self) -> (usize, bool, f64, u8) {
        let dir = match self.direction {
            Direction::Ge => 0,
            Direction::Lt => 1,
        };
        (self.feature, self.sentinel, self.threshold, dir)
    }

    fn key_before(&self, other: &Candidate) -> bool {
        let (af, asent, at, ad) = self.key();
        let (bf, bsent, bt, bd) = other.key();
        (af, asent, at, ad) < (bf, bsent, bt, bd)
    }

    fn stump(&self) -> DecisionStump {
        DecisionStump {
            feature_index: self.feature,
            threshold: self.threshold,
            direction: self.direction,
        }
    }
}

pub(crate) fn train_stump_with_order(
    data: &Dataset,
    w: &[f64],
    order: &ColumnOrder,
) -> (DecisionStump, f64) {
    assert_eq!(w.len(), data.n_samples());
    let total_w: f64 = w.iter().sum();
    let total_neg: f64 = (0..data.n_samples())
        .filter(|&i| data.label(i) == -1)
        .map(|i| w[i])
        .sum();

    // Pass 1: scanned minimum over the whole grid.
    let mut scan_min = f64::INFINITY;
    for j in 0..data.n_features() {
        scan_feature(data, w, &order.per_feature[j], j, total_w, total_neg, |c| {
            if c.error < scan_min {
                scan_min = c.error;
            }
        });
    }

    // Pass 2: near-minimal candidates. When the tie group is small its
    // members are re-ranked by canonical error; a large group (symmetric
    // data, masked-out samples) is an exact-math tie, resolved by the
    // tie-break key alone.
    let cutoff = scan_min + NEAR_TIE_SLACK;
    let mut near: Vec<Candidate> = Vec::new();
    let mut overflow = false;
    let mut near_key_min: Option<Candidate> = None;
    for j in 0..data.n_features() {
        scan_feature(data, w, &order.per_feature[j], j, total_w, total_neg, |c| {
            if c.error <= cutoff {
                if near.len() < MAX_REFINED {
                    near.push(c);
                } else {
                    overflow = true;
                }
                let better = match &near_key_min {
                    None => true,
                    Some(b) => c.key_before(b),
                };
                if better {
                    near_key_min = Some(c);
                }
            }
        });
    }

    let winner = if overflow {
        near_key_min.expect("grid is never empty")
    } else {
        let mut best: Option<(f64, Candidate)> = None;
        for c in near {
            let exact = canonical_error(&c.stump(), data, w);
            let better = match &best {
                None => true,
                Some((be, bc)) => exact < *be || (exact == *be && c.key_before(bc)),
            };
            if better {
                best = Some((exact, c));
            }
        }
        best.expect("at least the scanned minimum is within the cutoff")
            .1
    };

    let stump = winner.stump();
    let error = canonical_error(&stump, data, w);
    (stump, error)
}

/// Walks the candidate grid of one feature in ascending threshold order,
/// reporting both directions of every threshold.
///
/// The scan keeps the running `Ge` error: starting below the minimum every
/// sample is predicted `+1` (error = total negative weight); each sample
/// moved to the `< threshold` side flips its contribution. The `Lt` error
/// is the complement `total_w - err_ge`.
fn scan_feature(
    data: &Dataset,
    w: &[f64],
    idx: &[u32],
    feature: usize,
    total_w: f64,
    total_neg: f64,
    mut emit: impl FnMut(Candidate),
) {
    let n = idx.len();
    let first = data.value(idx[0] as usize, feature);
    let last = data.value(idx[n - 1] as usize, feature);

    let mut report = |threshold: f64, sentinel: bool, err_ge: f64| {
        emit(Candidate {
            feature,
            threshold,
            sentinel,
            direction: Direction::Ge,
            error: err_ge,
        });
        emit(Candidate {
            feature,
            threshold,
            sentinel,
            direction: Direction::Lt,
            error: total_w - err_ge,
        });
    };

    let mut err_ge = total_neg;
    report(first - 1.0, true, err_ge);

    let mut k = 0;
    while k < n {
        let group_value = data.value(idx[k] as usize, feature);
        while k < n && data.value(idx[k] as usize, feature) == group_value {
            let i = idx[k] as usize;
            if data.label(i) == 1 {
                err_ge += w[i];
            } else {
                err_ge -= w[i];
            }
            k += 1;
        }
        if k < n {
            let next_value = data.value(idx[k] as usize, feature);
            report(group_value / 2.0 + next_value / 2.0, false, err_ge);
        }
    }

    report(last + 1.0, true, err_ge);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::make_xor;

    fn data_1d(xs: &[f64], ys: &[i8]) -> Dataset {
        Dataset::new(xs.to_vec(), 1, ys.to_vec(), None).unwrap()
    }

    #[test]
    fn predict_follows_direction_and_boundary() {
        let ge = DecisionStump {
            feature_index: 0,
            threshold: 2.5,
            direction: Direction::Ge,
        };
        assert_eq!(ge.predict(&[3.0]), 1);
        let lt = DecisionStump {
            direction: Direction::Lt,
            ..ge
        };
        assert_eq!(lt.predict(&[3.0]), -1);
        let boundary = DecisionStump {
            feature_index: 1,
            threshold: 0.0,
            direction: Direction::Ge,
        };
        assert_eq!(boundary.predict(&[-5.0, 0.0]), 1);
    }

    #[test]
    #[should_panic(expected = "feature")]
    fn predict_rejects_short_input() {
        let stump = DecisionStump {
            feature_index: 2,
            threshold: 0.0,
            direction: Direction::Ge,
        };
        stump.predict(&[1.0, 2.0]);
    }

    #[test]
    fn weighted_error_of_perfect_stump_is_zero() {
        let data = data_1d(&[1.0, 2.0, 3.0, 4.0], &[-1, -1, 1, 1]);
        let stump = DecisionStump {
            feature_index: 0,
            threshold: 2.5,
            direction: Direction::Ge,
        };
        assert_eq!(stump.weighted_error(&data, &SampleWeights::uniform(4)), 0.0);
    }

    #[test]
    fn weighted_error_sums_misclassified_weight() {
        // Predictions: -1, +1, +1, +1 -> wrong on the first and the last
        // sample, so the error is 0.4 + 0.1.
        let data = data_1d(&[0.0, 1.0, 2.0, 3.0], &[1, 1, 1, -1]);
        let stump = DecisionStump {
            feature_index: 0,
            threshold: 0.5,
            direction: Direction::Ge,
        };
        let w = SampleWeights::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        // The decimal weights are not exactly representable; the sum lands
        // within one ulp of 0.4 + 0.1.
        assert!((stump.weighted_error(&data, &w) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn every_single_feature_stump_is_useless_on_symmetric_xor() {
        // Power-of-two count per quadrant keeps the weight sums exact.
        let data = make_xor(4, 0.0, 0);
        let w = SampleWeights::uniform(data.n_samples());
        for feature_index in 0..2 {
            for threshold in [-2.0, -0.5, 0.0, 0.5, 2.0] {
                for direction in [Direction::Ge, Direction::Lt] {
                    let stump = DecisionStump {
                        feature_index,
                        threshold,
                        direction,
                    };
                    assert_eq!(stump.weighted_error(&data, &w), 0.5, "{stump}");
                }
            }
        }
    }

    #[test]
    fn train_finds_the_separating_midpoint() {
        let data = data_1d(&[1.0, 2.0, 3.0, 4.0], &[-1, -1, 1, 1]);
        let (stump, error) = train_stump(&data, &SampleWeights::uniform(4));
        assert_eq!(stump.feature_index, 0);
        assert_eq!(stump.threshold, 2.5);
        assert_eq!(stump.direction, Direction::Ge);
        assert_eq!(error, 0.0);
    }

    #[test]
    fn train_on_single_class_returns_constant_positive() {
        let data = data_1d(&[1.0, 2.0, 3.0, 4.0], &[1, 1, 1, 1]);
        let (stump, error) = train_stump(&data, &SampleWeights::uniform(4));
        assert_eq!(error, 0.0);
        // Below-minimum sentinel with Ge direction: +1 over the whole
        // training range.
        assert_eq!(stump.threshold, 0.0);
        assert_eq!(stump.direction, Direction::Ge);
        for i in 0..data.n_samples() {
            assert_eq!(stump.predict(data.row(i)), 1);
        }
    }

    #[test]
    fn symmetric_xor_tie_break_prefers_interior_threshold() {
        // All grid candidates have error 0.5; the interior split on the
        // first feature must win over the constant sentinels.
        let data = make_xor(256, 0.0, 0);
        let (stump, error) = train_stump(&data, &SampleWeights::uniform(data.n_samples()));
        assert_eq!(error, 0.5);
        assert_eq!(stump.feature_index, 0);
        assert_eq!(stump.threshold, 0.0);
        assert_eq!(stump.direction, Direction::Ge);
    }

    #[test]
    fn training_is_deterministic() {
        let data = make_xor(50, 0.4, 9);
        let w = SampleWeights::uniform(data.n_samples());
        let (a, ea) = train_stump(&data, &w);
        let (b, eb) = train_stump(&data, &w);
        assert_eq!(a, b);
        assert_eq!(ea, eb);
    }

    #[test]
    fn monotone_rescaling_keeps_training_predictions() {
        let data = make_xor(40, 0.5, 21);
        let w = SampleWeights::uniform(data.n_samples());
        let (base, _) = train_stump(&data, &w);

        // Apply a strictly increasing map to feature 0.
        let rescaled_features: Vec<f64> = (0..data.n_samples())
            .flat_map(|i| {
                let row = data.row(i);
                [(row[0] * 3.0).exp(), row[1]]
            })
            .collect();
        let rescaled = Dataset::new(rescaled_features, 2, data.labels().to_vec(), None).unwrap();
        let (remapped, _) = train_stump(&rescaled, &w);

        for i in 0..data.n_samples() {
            assert_eq!(
                base.predict(data.row(i)),
                remapped.predict(rescaled.row(i)),
                "prediction changed at sample {i}"
            );
        }
    }
}
