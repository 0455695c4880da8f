//! Report files: a flat CSV with one row per trial, line-delimited JSON
//! records with the full curves, and plot-ready grid/sweep/ratio CSVs.
//!
//! Floats in report files are printed with 6 significant digits; every
//! file ends with a trailing newline and is written atomically. Wall-clock
//! times are deliberately absent so identical runs produce identical
//! bytes. Model files (see [`crate::model`]) keep full float precision
//! instead; they are a different interface.

use std::path::Path;

use serde::Serialize;

use crate::boosting::{WeakLearnerKind, WeakLearnerSpec};
use crate::chains::Connective;
use crate::error::Result;
use crate::experiments::{DeadlockReport, RatioRow, SweepRow, TrialReport, XorRun};
use crate::fileio::write_atomic;

/// Rounds to 6 significant digits.
pub fn round_sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let exponent = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(5 - exponent);
    (x * scale).round() / scale
}

/// Formats with 6 significant digits, shortest decimal form.
pub fn fmt_sig6(x: f64) -> String {
    format!("{}", round_sig6(x))
}

fn spec_ops(spec: &WeakLearnerSpec) -> Option<usize> {
    match spec.kind {
        WeakLearnerKind::OrChain | WeakLearnerKind::AndChain | WeakLearnerKind::AndOr => {
            Some(spec.max_ops)
        }
        _ => None,
    }
}

fn opt_usize(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Trial CSV columns:
/// `dataset,learner,ops,tree_depth,tree_leaves,rounds_requested,rounds_used,trial,seed,train_error,test_error,margin_min,margin_p05,margin_p25,margin_p50`
pub const TRIALS_CSV_HEADER: &str = "dataset,learner,ops,tree_depth,tree_leaves,rounds_requested,rounds_used,trial,seed,train_error,test_error,margin_min,margin_p05,margin_p25,margin_p50";

/// Writes the flat one-row-per-trial CSV.
pub fn write_trials_csv(path: impl AsRef<Path>, reports: &[TrialReport]) -> Result<()> {
    let mut out = String::from(TRIALS_CSV_HEADER);
    out.push('\n');
    for r in reports {
        let spec = &r.learner;
        let (depth, leaves) = match spec.kind {
            WeakLearnerKind::Tree => (Some(spec.max_depth), Some(spec.max_leaves)),
            _ => (None, None),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.dataset_name,
            spec.kind.label(),
            opt_usize(spec_ops(spec)),
            opt_usize(depth),
            opt_usize(leaves),
            r.rounds_requested,
            r.rounds_used,
            r.trial,
            r.seed,
            fmt_sig6(r.train_error),
            fmt_sig6(r.test_error),
            fmt_sig6(r.margin_quantiles.min),
            fmt_sig6(r.margin_quantiles.p05),
            fmt_sig6(r.margin_quantiles.p25),
            fmt_sig6(r.margin_quantiles.p50),
        ));
    }
    write_atomic(path.as_ref(), out.as_bytes())
}

#[derive(Serialize)]
struct TrialRecord<'a> {
    dataset: &'a str,
    learner: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    ops: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree_leaves: Option<usize>,
    rounds_requested: usize,
    rounds_used: usize,
    trial: usize,
    seed: u64,
    train_error: f64,
    test_error: f64,
    train_curve: Vec<f64>,
    test_curve: Vec<f64>,
    margin_min: f64,
    margin_p05: f64,
    margin_p25: f64,
    margin_p50: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_round_connective: Option<&'a Vec<Connective>>,
}

/// Writes one JSON record per line, including the per-round error curves.
pub fn write_trials_jsonl(path: impl AsRef<Path>, reports: &[TrialReport]) -> Result<()> {
    let mut out = String::new();
    for r in reports {
        let spec = &r.learner;
        let (depth, leaves) = match spec.kind {
            WeakLearnerKind::Tree => (Some(spec.max_depth), Some(spec.max_leaves)),
            _ => (None, None),
        };
        let record = TrialRecord {
            dataset: &r.dataset_name,
            learner: spec.kind.label(),
            ops: spec_ops(spec),
            tree_depth: depth,
            tree_leaves: leaves,
            rounds_requested: r.rounds_requested,
            rounds_used: r.rounds_used,
            trial: r.trial,
            seed: r.seed,
            train_error: round_sig6(r.train_error),
            test_error: round_sig6(r.test_error),
            train_curve: r.train_curve.iter().map(|&v| round_sig6(v)).collect(),
            test_curve: r.test_curve.iter().map(|&v| round_sig6(v)).collect(),
            margin_min: round_sig6(r.margin_quantiles.min),
            margin_p05: round_sig6(r.margin_quantiles.p05),
            margin_p25: round_sig6(r.margin_quantiles.p25),
            margin_p50: round_sig6(r.margin_quantiles.p50),
            per_round_connective: r.per_round_connective.as_ref(),
        };
        out.push_str(&serde_json::to_string(&record).expect("report records serialize"));
        out.push('\n');
    }
    write_atomic(path.as_ref(), out.as_bytes())
}

/// Writes a classification grid as `x,y,prediction` rows.
pub fn write_grid_csv(path: impl AsRef<Path>, grid: &[(f64, f64, i8)]) -> Result<()> {
    let mut out = String::from("x,y,prediction\n");
    for &(x, y, label) in grid {
        out.push_str(&format!("{},{},{}\n", fmt_sig6(x), fmt_sig6(y), label));
    }
    write_atomic(path.as_ref(), out.as_bytes())
}

/// Writes the xor-demo summary plus one grid file per learner; grid files
/// take the suffix `-<learner>.csv` next to `summary_path`.
pub fn write_xor_demo(summary_path: impl AsRef<Path>, runs: &[XorRun]) -> Result<()> {
    let summary_path = summary_path.as_ref();
    let mut out = String::from("learner,ops,rounds_requested,rounds_used,train_error,test_error\n");
    for run in runs {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            run.learner.kind.label(),
            opt_usize(spec_ops(&run.learner)),
            run.rounds_requested,
            run.rounds_used,
            fmt_sig6(run.train_error),
            fmt_sig6(run.test_error),
        ));
    }
    write_atomic(summary_path, out.as_bytes())?;
    for run in runs {
        let grid_path = sibling_with_suffix(summary_path, run.learner.kind.label());
        write_grid_csv(&grid_path, &run.grid)?;
    }
    Ok(())
}

fn sibling_with_suffix(path: &Path, suffix: &str) -> std::path::PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    path.with_file_name(format!("{stem}-{suffix}.csv"))
}

/// Writes the `(kind, ops)` sweep table.
pub fn write_sweep_csv(path: impl AsRef<Path>, rows: &[SweepRow]) -> Result<()> {
    let mut out = String::from(
        "dataset,learner,ops,rounds,trials,mean_train_error,std_train_error,mean_test_error,std_test_error\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.dataset_name,
            r.kind.label(),
            r.ops,
            r.rounds,
            r.n_trials,
            fmt_sig6(r.mean_train_error),
            fmt_sig6(r.std_train_error),
            fmt_sig6(r.mean_test_error),
            fmt_sig6(r.std_test_error),
        ));
    }
    write_atomic(path.as_ref(), out.as_bytes())
}

/// Writes the error-ratio table; rows with an undefined ratio carry an
/// empty ratio field and a note.
pub fn write_ratio_csv(path: impl AsRef<Path>, rows: &[RatioRow]) -> Result<()> {
    let mut out = String::from(
        "dataset,learner,ops,rounds,mean_test_error,reference_rounds,reference_mean_test_error,ratio,note\n",
    );
    for r in rows {
        let (ratio, note) = match r.ratio {
            Some(v) => (fmt_sig6(v), ""),
            None => (String::new(), "reference-mean-zero"),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.dataset_name,
            r.learner.kind.label(),
            opt_usize(spec_ops(&r.learner)),
            r.rounds,
            fmt_sig6(r.mean_test_error),
            r.reference_rounds,
            fmt_sig6(r.reference_mean_test_error),
            ratio,
            note,
        ));
    }
    write_atomic(path.as_ref(), out.as_bytes())
}

/// Writes per-angle deadlock errors.
pub fn write_deadlock_csv(path: impl AsRef<Path>, report: &DeadlockReport) -> Result<()> {
    let mut out = String::from("angle,error_uniform,error_after_reweight\n");
    for record in &report.angles {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_sig6(record.angle),
            fmt_sig6(record.error_uniform),
            fmt_sig6(record.error_after_reweight),
        ));
    }
    write_atomic(path.as_ref(), out.as_bytes())
}

/// Atomically writes an arbitrary text report.
pub fn write_text(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    write_atomic(path.as_ref(), contents.as_bytes())
}

/// Writes one `index,prediction` row per sample.
pub fn write_predictions_csv(path: impl AsRef<Path>, predictions: &[i8]) -> Result<()> {
    let mut out = String::from("index,prediction\n");
    for (i, p) in predictions.iter().enumerate() {
        out.push_str(&format!("{i},{p}\n"));
    }
    write_atomic(path.as_ref(), out.as_bytes())
}
