//! Reproduction harness: multi-trial random splits, error curves, error
//! ratio tables, the xor demonstration and the origin-line deadlock check.
//!
//! Every reported number is a pure function of the dataset bytes, the
//! learner configuration and the seeds, so re-running any experiment
//! reproduces its reports bit-identically. Trials are independent given
//! their seeds and run in parallel; results are collected in trial order,
//! making the output independent of the worker count.

pub mod report;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

use crate::boosting::{train_boost, BoostedEnsemble, WeakLearnerKind, WeakLearnerSpec};
use crate::chains::Connective;
use crate::dataset::{make_xor, split, Dataset, SampleWeights, SplitSpec};
use crate::error::{Error, Result};

/// Lower nearest-rank quantiles of the training-set margin distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginQuantiles {
    pub min: f64,
    pub p05: f64,
    pub p25: f64,
    pub p50: f64,
}

/// Everything measured in one train/test trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub dataset_name: String,
    pub learner: WeakLearnerSpec,
    pub rounds_requested: usize,
    pub rounds_used: usize,
    pub trial: usize,
    pub seed: u64,
    pub train_error: f64,
    pub test_error: f64,
    /// Training error after each accepted round; the last entry equals
    /// `train_error`.
    pub train_curve: Vec<f64>,
    pub test_curve: Vec<f64>,
    pub margin_quantiles: MarginQuantiles,
    /// Wall-clock training time. Reported on standard output only; file
    /// reports omit it so identical runs produce identical bytes.
    pub wall_time_s: f64,
    /// Connective chosen each round; present for the AND_OR learner.
    pub per_round_connective: Option<Vec<Connective>>,
}

/// Runs `n_trials` independent split/train/evaluate trials. Trial `k`
/// splits with seed `base_seed + k`; the sizes come from `sizes` (its own
/// seed field is ignored here).
pub fn run_trials(
    data: &Dataset,
    dataset_name: &str,
    spec: &WeakLearnerSpec,
    rounds: usize,
    sizes: &SplitSpec,
    n_trials: usize,
    base_seed: u64,
) -> Result<Vec<TrialReport>> {
    if n_trials == 0 {
        return Err(Error::InvalidArgument("n_trials must be at least 1".into()));
    }
    if sizes.n_train + sizes.n_test > data.n_samples() {
        return Err(Error::InvalidArgument(format!(
            "split needs {} samples but the dataset has {}",
            sizes.n_train + sizes.n_test,
            data.n_samples()
        )));
    }
    (0..n_trials)
        .into_par_iter()
        .map(|k| {
            let seed = base_seed.wrapping_add(k as u64);
            let split_spec = SplitSpec::new(sizes.n_train, sizes.n_test, seed);
            let (train, test) = split(data, &split_spec)?;
            Ok(run_one_trial(
                &train,
                &test,
                dataset_name,
                spec,
                rounds,
                k,
                seed,
            ))
        })
        .collect()
}

fn run_one_trial(
    train: &Dataset,
    test: &Dataset,
    dataset_name: &str,
    spec: &WeakLearnerSpec,
    rounds: usize,
    trial: usize,
    seed: u64,
) -> TrialReport {
    let start = Instant::now();
    let model = train_boost(train, spec, rounds, None);
    let wall_time_s = start.elapsed().as_secs_f64();

    let (train_curve, test_curve) = error_curves(&model, train, test);
    let (train_error, test_error) = if model.is_empty() {
        // No weak classifier beat chance; the zero vote ties to -1.
        (baseline_error(train), baseline_error(test))
    } else {
        (*train_curve.last().unwrap(), *test_curve.last().unwrap())
    };

    let margin_quantiles = margin_quantiles(&model, train);
    let per_round_connective = match spec.kind {
        WeakLearnerKind::AndOr => Some(
            model
                .weak_classifiers()
                .iter()
                .map(|w| w.connective().expect("and-or rounds are chains"))
                .collect(),
        ),
        _ => None,
    };

    TrialReport {
        dataset_name: dataset_name.to_string(),
        learner: *spec,
        rounds_requested: rounds,
        rounds_used: model.len(),
        trial,
        seed,
        train_error,
        test_error,
        train_curve,
        test_curve,
        margin_quantiles,
        wall_time_s,
        per_round_connective,
    }
}

fn baseline_error(data: &Dataset) -> f64 {
    let positives = data.labels().iter().filter(|&&y| y == 1).count();
    positives as f64 / data.n_samples() as f64
}

/// Per-round train/test error of every vote prefix of the ensemble.
pub fn error_curves(
    model: &BoostedEnsemble,
    train: &Dataset,
    test: &Dataset,
) -> (Vec<f64>, Vec<f64>) {
    let mut train_votes = vec![0.0f64; train.n_samples()];
    let mut test_votes = vec![0.0f64; test.n_samples()];
    let mut train_curve = Vec::with_capacity(model.len());
    let mut test_curve = Vec::with_capacity(model.len());
    for (alpha, weak) in model.iter() {
        for (i, vote) in train_votes.iter_mut().enumerate() {
            *vote += alpha * weak.predict(train.row(i)) as f64;
        }
        for (i, vote) in test_votes.iter_mut().enumerate() {
            *vote += alpha * weak.predict(test.row(i)) as f64;
        }
        train_curve.push(vote_error(&train_votes, train));
        test_curve.push(vote_error(&test_votes, test));
    }
    (train_curve, test_curve)
}

fn vote_error(votes: &[f64], data: &Dataset) -> f64 {
    let wrong = votes
        .iter()
        .zip(data.labels())
        .filter(|(&v, &y)| (if v > 0.0 { 1 } else { -1 }) != y)
        .count();
    wrong as f64 / data.n_samples() as f64
}

fn margin_quantiles(model: &BoostedEnsemble, data: &Dataset) -> MarginQuantiles {
    if model.is_empty() {
        return MarginQuantiles {
            min: 0.0,
            p05: 0.0,
            p25: 0.0,
            p50: 0.0,
        };
    }
    let mut margins: Vec<f64> = (0..data.n_samples())
        .map(|i| model.margin(data.row(i), data.label(i)))
        .collect();
    margins.sort_by(|a, b| a.partial_cmp(b).expect("margins are finite"));
    let pick = |q: f64| margins[(q * (margins.len() - 1) as f64).floor() as usize];
    MarginQuantiles {
        min: margins[0],
        p05: pick(0.05),
        p25: pick(0.25),
        p50: pick(0.50),
    }
}

/// Mean errors of one `(learner, ops)` grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub dataset_name: String,
    pub kind: WeakLearnerKind,
    pub ops: usize,
    pub rounds: usize,
    pub n_trials: usize,
    pub mean_train_error: f64,
    pub std_train_error: f64,
    pub mean_test_error: f64,
    pub std_test_error: f64,
}

/// Evaluates every `(kind, ops)` combination with shared trial seeds.
#[allow(clippy::too_many_arguments)]
pub fn ops_sweep(
    data: &Dataset,
    dataset_name: &str,
    kinds: &[WeakLearnerKind],
    rounds: usize,
    ops_range: &[usize],
    sizes: &SplitSpec,
    n_trials: usize,
    base_seed: u64,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(kinds.len() * ops_range.len());
    for &kind in kinds {
        for &ops in ops_range {
            let spec = spec_with_ops(kind, ops)?;
            let reports = run_trials(
                data,
                dataset_name,
                &spec,
                rounds,
                sizes,
                n_trials,
                base_seed,
            )?;
            let (mean_train, std_train) = mean_std(reports.iter().map(|r| r.train_error));
            let (mean_test, std_test) = mean_std(reports.iter().map(|r| r.test_error));
            rows.push(SweepRow {
                dataset_name: dataset_name.to_string(),
                kind,
                ops,
                rounds,
                n_trials,
                mean_train_error: mean_train,
                std_train_error: std_train,
                mean_test_error: mean_test,
                std_test_error: std_test,
            });
        }
    }
    Ok(rows)
}

fn spec_with_ops(kind: WeakLearnerKind, ops: usize) -> Result<WeakLearnerSpec> {
    if ops == 0 {
        return Err(Error::InvalidArgument("ops must be at least 1".into()));
    }
    Ok(match kind {
        WeakLearnerKind::Stump => WeakLearnerSpec::stump(),
        WeakLearnerKind::OrChain => WeakLearnerSpec::or_chain(ops),
        WeakLearnerKind::AndChain => WeakLearnerSpec::and_chain(ops),
        WeakLearnerKind::AndOr => WeakLearnerSpec::and_or(ops),
        WeakLearnerKind::Tree => WeakLearnerSpec::tree(
            crate::boosting::DEFAULT_TREE_DEPTH,
            crate::boosting::DEFAULT_TREE_LEAVES,
        ),
    })
}

/// Sample mean and standard deviation (n-1 denominator; 0 for one value).
pub fn mean_std(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let values: Vec<f64> = values.collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

/// One row of the error-ratio comparison against the stump reference.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub dataset_name: String,
    pub learner: WeakLearnerSpec,
    pub rounds: usize,
    pub mean_test_error: f64,
    pub reference_rounds: usize,
    pub reference_mean_test_error: f64,
    /// Mean test error over the reference mean; `None` when the reference
    /// mean is zero (flagged row instead of a division failure).
    pub ratio: Option<f64>,
}

impl RatioRow {
    /// Percent label in the style of published comparison tables, e.g.
    /// `"60.8%"`.
    pub fn percent_label(&self) -> String {
        match self.ratio {
            Some(r) => format!("{:.1}%", r * 100.0),
            None => "n/a (reference mean error is zero)".to_string(),
        }
    }
}

/// Computes mean-test-error ratios of `specs` over the stump reference,
/// all specs sharing identical trial seeds. The reference row itself is
/// always first, with ratio exactly 1 when defined.
pub fn ratio_table(
    data: &Dataset,
    dataset_name: &str,
    specs: &[(WeakLearnerSpec, usize)],
    reference_rounds: usize,
    sizes: &SplitSpec,
    n_trials: usize,
    base_seed: u64,
) -> Result<Vec<RatioRow>> {
    let reference = WeakLearnerSpec::stump();
    let reference_reports = run_trials(
        data,
        dataset_name,
        &reference,
        reference_rounds,
        sizes,
        n_trials,
        base_seed,
    )?;
    let (reference_mean, _) = mean_std(reference_reports.iter().map(|r| r.test_error));
    let ratio_of = |mean: f64| {
        if reference_mean > 0.0 {
            Some(mean / reference_mean)
        } else {
            None
        }
    };

    let mut rows = vec![RatioRow {
        dataset_name: dataset_name.to_string(),
        learner: reference,
        rounds: reference_rounds,
        mean_test_error: reference_mean,
        reference_rounds,
        reference_mean_test_error: reference_mean,
        ratio: ratio_of(reference_mean),
    }];
    for (spec, rounds) in specs {
        let reports = run_trials(
            data,
            dataset_name,
            spec,
            *rounds,
            sizes,
            n_trials,
            base_seed,
        )?;
        let (mean, _) = mean_std(reports.iter().map(|r| r.test_error));
        rows.push(RatioRow {
            dataset_name: dataset_name.to_string(),
            learner: *spec,
            rounds: *rounds,
            mean_test_error: mean,
            reference_rounds,
            reference_mean_test_error: reference_mean,
            ratio: ratio_of(mean),
        });
    }
    Ok(rows)
}

/// Result of training one learner in the xor demonstration.
#[derive(Debug, Clone, PartialEq)]
pub struct XorRun {
    pub learner: WeakLearnerSpec,
    pub rounds_requested: usize,
    pub rounds_used: usize,
    pub train_error: f64,
    pub test_error: f64,
    /// `(x, y, predicted label)` over the evaluation grid.
    pub grid: Vec<(f64, f64, i8)>,
}

/// Trains each spec on a generated xor sample and classifies a regular
/// grid over `[-2, 2]^2`, plus a freshly drawn held-out xor sample.
///
/// The training set is `make_xor(n_per_quadrant, spread, seed)`; the
/// held-out set uses a sub-seed derived deterministically from `seed`.
pub fn xor_demo(
    n_per_quadrant: usize,
    spread: f64,
    seed: u64,
    specs: &[(WeakLearnerSpec, usize)],
    grid_resolution: usize,
) -> Vec<XorRun> {
    assert!(grid_resolution >= 2, "grid resolution must be at least 2");
    let train = make_xor(n_per_quadrant, spread, seed);
    let test = make_xor(n_per_quadrant, spread, derive_seed(seed));

    specs
        .iter()
        .map(|(spec, rounds)| {
            let model = train_boost(&train, spec, *rounds, None);
            let (train_error, test_error) = if model.is_empty() {
                (baseline_error(&train), baseline_error(&test))
            } else {
                (model.error_rate(&train), model.error_rate(&test))
            };
            let mut grid = Vec::with_capacity(grid_resolution * grid_resolution);
            for ix in 0..grid_resolution {
                let x = -2.0 + 4.0 * ix as f64 / (grid_resolution - 1) as f64;
                for iy in 0..grid_resolution {
                    let y = -2.0 + 4.0 * iy as f64 / (grid_resolution - 1) as f64;
                    let label = if model.is_empty() {
                        -1
                    } else {
                        model.predict(&[x, y])
                    };
                    grid.push((x, y, label));
                }
            }
            XorRun {
                learner: *spec,
                rounds_requested: *rounds,
                rounds_used: model.len(),
                train_error,
                test_error,
                grid,
            }
        })
        .collect()
}

/// First value of a ChaCha stream keyed by `seed`; used wherever one user
/// seed must fan out into independent sub-seeds.
pub(crate) fn derive_seed(seed: u64) -> u64 {
    ChaCha8Rng::seed_from_u64(seed).next_u64()
}

/// Weak classifier `sign(x . (cos a, sin a))` for two-feature data; a zero
/// dot product counts as `-1` like every other tied vote.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginLine {
    pub angle: f64,
}

impl OriginLine {
    pub fn predict(&self, x: &[f64]) -> i8 {
        assert!(x.len() >= 2, "origin lines need two features");
        let dot = x[0] * self.angle.cos() + x[1] * self.angle.sin();
        if dot > 0.0 {
            1
        } else {
            -1
        }
    }
}

/// Per-angle errors of the deadlock check.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleRecord {
    pub angle: f64,
    pub error_uniform: f64,
    pub error_after_reweight: f64,
}

/// Outcome of [`origin_line_deadlock_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct DeadlockReport {
    pub n_angles: usize,
    /// Largest `|error - 0.5|` over all angles under uniform weights.
    pub max_deviation: f64,
    /// Error of the first classifier after the weights were pushed toward
    /// its mistakes: worse than chance.
    pub first_error_after_reweight: f64,
    /// Error of the classifier pointing the opposite way.
    pub antipode_error_after_reweight: f64,
    pub min_error_after_reweight: f64,
    /// Whether the antipodal classifier attains the post-reweight minimum.
    pub antipode_is_optimal: bool,
    pub angles: Vec<AngleRecord>,
}

/// Vote weight used for the reweighting step of the deadlock check: the
/// weight a weak classifier with error 0.25 would receive. On the exactly
/// symmetric clusters the measured error is exactly 0.5, whose own vote
/// weight (zero) would leave the weights untouched, so the step is
/// demonstrated with this fixed positive weight instead.
pub const DEADLOCK_REWEIGHT_ALPHA: f64 = 1.0986122886681098;

/// Evaluates origin-line classifiers on the noiseless symmetric xor
/// clusters.
///
/// Angles are sampled at half-step offsets, `(k + 1/2) * 2*pi / n_angles`,
/// which keeps every cluster strictly off every line. Under uniform
/// weights each line misclassifies exactly half of the mass. The report
/// also applies one multiplicative weight update against the first
/// classifier and records how its antipode becomes optimal, the cycle that
/// stalls stump boosting on this data.
pub fn origin_line_deadlock_check(
    n_per_quadrant: usize,
    seed: u64,
    n_angles: usize,
) -> DeadlockReport {
    assert!(n_angles >= 4, "need at least four angles");
    let data = make_xor(n_per_quadrant, 0.0, seed);
    let n = data.n_samples();
    let uniform = SampleWeights::uniform(n);

    let lines: Vec<OriginLine> = (0..n_angles)
        .map(|k| OriginLine {
            angle: (k as f64 + 0.5) * std::f64::consts::TAU / n_angles as f64,
        })
        .collect();

    let weighted_error = |line: &OriginLine, w: &[f64]| -> f64 {
        (0..n)
            .filter(|&i| line.predict(data.row(i)) != data.label(i))
            .map(|i| w[i])
            .sum()
    };

    let errors_uniform: Vec<f64> = lines
        .iter()
        .map(|l| weighted_error(l, uniform.as_slice()))
        .collect();
    let max_deviation = errors_uniform
        .iter()
        .map(|e| (e - 0.5).abs())
        .fold(0.0, f64::max);

    let first = &lines[0];
    let predictions: Vec<i8> = (0..n).map(|i| first.predict(data.row(i))).collect();
    let reweighted = crate::boosting::reweight(
        &uniform,
        DEADLOCK_REWEIGHT_ALPHA,
        &predictions,
        data.labels(),
    );
    let errors_after: Vec<f64> = lines
        .iter()
        .map(|l| weighted_error(l, reweighted.as_slice()))
        .collect();
    let min_after = errors_after.iter().copied().fold(f64::INFINITY, f64::min);
    let antipode_index = n_angles / 2;
    let antipode_error = errors_after[antipode_index];

    DeadlockReport {
        n_angles,
        max_deviation,
        first_error_after_reweight: errors_after[0],
        antipode_error_after_reweight: antipode_error,
        min_error_after_reweight: min_after,
        antipode_is_optimal: antipode_error - min_after <= 1e-12,
        angles: lines
            .iter()
            .zip(errors_uniform.iter().zip(errors_after.iter()))
            .map(|(line, (&eu, &ea))| AngleRecord {
                angle: line.angle,
                error_uniform: eu,
                error_after_reweight: ea,
            })
            .collect(),
    }
}
