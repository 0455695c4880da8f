//! Discrete AdaBoost over a pluggable weak learner.
//!
//! Each round fits a weak classifier under the current sample
//! distribution, computes its vote weight and multiplies every sample
//! weight by `exp(-alpha * y * h(x))` before renormalizing. The strong
//! classifier is the sign of the weighted vote. Rounds whose best weak
//! classifier is no better than chance are never appended, so boosting can
//! stop before the requested round count.
//!
//! The vote weight is the stationary point of the per-round exponential
//! loss `sum_i D(i) exp(-alpha y_i h(x_i))`, namely half the log-odds
//! `0.5 * ln((1 - eps) / eps)`. This is the step that makes the loss
//! shrink by `2 * sqrt(eps * (1 - eps)) < 1` per round; the full log-odds
//! (the loose convention some write-ups quote) has normalizer exactly 1,
//! so the loss would never decrease and the reweighting would overshoot
//! the balance point every round. Predictions and margins are invariant
//! to the overall vote scale; the free-standing [`compute_alpha`] exposes
//! the full log-odds with the conventional clamping.
//!
//! Instantiations: stumps (Ada-Stump), OR chains (Ada-Or), AND chains
//! (Ada-And), the per-round better of both (Ada-AndOr) and depth-limited
//! trees (Ada-Tree).

use crate::chains::{train_chain_with_order, Connective, LogicChain, DEFAULT_CHAIN_TOL};
use crate::dataset::{Dataset, SampleWeights};
use crate::stump::{ColumnOrder, DecisionStump};
use crate::tree::{train_tree, DecisionTree};

pub const DEFAULT_MAX_OPS: usize = 5;
pub const DEFAULT_TREE_DEPTH: usize = 7;
pub const DEFAULT_TREE_LEAVES: usize = 16;

/// Smallest admissible weak-classifier error when computing `alpha`;
/// keeps the vote weight finite on separable data.
pub const EPSILON_CLAMP: f64 = 1e-6;
/// Rounds with error at or above `0.5 - STOP_MARGIN` stop the loop.
const STOP_MARGIN: f64 = 1e-12;

/// Which weak learner a boosted ensemble uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeakLearnerKind {
    Stump,
    OrChain,
    AndChain,
    /// Fit both an OR and an AND chain per round, keep the better.
    AndOr,
    Tree,
}

impl WeakLearnerKind {
    pub fn label(&self) -> &'static str {
        match self {
            WeakLearnerKind::Stump => "stump",
            WeakLearnerKind::OrChain => "or-chain",
            WeakLearnerKind::AndChain => "and-chain",
            WeakLearnerKind::AndOr => "and-or",
            WeakLearnerKind::Tree => "tree",
        }
    }
}

/// Weak-learner configuration for one boosting run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakLearnerSpec {
    pub kind: WeakLearnerKind,
    /// Chain length cap; meaningful for the chain kinds.
    pub max_ops: usize,
    /// Strict-decrease threshold for chain extension.
    pub tol: f64,
    pub max_depth: usize,
    pub max_leaves: usize,
}

impl WeakLearnerSpec {
    pub fn stump() -> Self {
        Self::with_kind(WeakLearnerKind::Stump)
    }

    pub fn or_chain(max_ops: usize) -> Self {
        WeakLearnerSpec {
            max_ops,
            ..Self::with_kind(WeakLearnerKind::OrChain)
        }
    }

    pub fn and_chain(max_ops: usize) -> Self {
        WeakLearnerSpec {
            max_ops,
            ..Self::with_kind(WeakLearnerKind::AndChain)
        }
    }

    pub fn and_or(max_ops: usize) -> Self {
        WeakLearnerSpec {
            max_ops,
            ..Self::with_kind(WeakLearnerKind::AndOr)
        }
    }

    pub fn tree(max_depth: usize, max_leaves: usize) -> Self {
        WeakLearnerSpec {
            max_depth,
            max_leaves,
            ..Self::with_kind(WeakLearnerKind::Tree)
        }
    }

    fn with_kind(kind: WeakLearnerKind) -> Self {
        WeakLearnerSpec {
            kind,
            max_ops: DEFAULT_MAX_OPS,
            tol: DEFAULT_CHAIN_TOL,
            max_depth: DEFAULT_TREE_DEPTH,
            max_leaves: DEFAULT_TREE_LEAVES,
        }
    }

    fn validate(&self) {
        assert!(self.max_ops >= 1, "max_ops must be at least 1");
        assert!(self.max_depth >= 1, "max_depth must be at least 1");
        assert!(self.max_leaves >= 2, "max_leaves must be at least 2");
        assert!(
            self.tol >= 0.0 && self.tol.is_finite(),
            "tol must be finite"
        );
    }
}

/// One trained weak classifier inside an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub enum WeakClassifier {
    Stump(DecisionStump),
    Chain(LogicChain),
    Tree(DecisionTree),
}

impl WeakClassifier {
    pub fn predict(&self, x: &[f64]) -> i8 {
        match self {
            WeakClassifier::Stump(s) => s.predict(x),
            WeakClassifier::Chain(c) => c.evaluate(x),
            WeakClassifier::Tree(t) => t.predict(x),
        }
    }

    /// Minimum feature count an input must have.
    pub fn required_features(&self) -> usize {
        match self {
            WeakClassifier::Stump(s) => s.feature_index + 1,
            WeakClassifier::Chain(c) => c
                .operations()
                .iter()
                .map(|s| s.feature_index + 1)
                .max()
                .unwrap_or(0),
            WeakClassifier::Tree(t) => t.required_features(),
        }
    }

    /// The chain connective, for AND_OR round bookkeeping.
    pub fn connective(&self) -> Option<Connective> {
        match self {
            WeakClassifier::Chain(c) => Some(c.connective()),
            _ => None,
        }
    }
}

impl DecisionTree {
    fn required_features(&self) -> usize {
        use crate::tree::Node;
        self.nodes()
            .iter()
            .filter_map(|n| match n {
                Node::Split { feature, .. } => Some(feature + 1),
                Node::Leaf { .. } => None,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Weighted-vote strong classifier `H(x) = sign(sum_t alpha_t h_t(x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoostedEnsemble {
    spec: WeakLearnerSpec,
    alphas: Vec<f64>,
    weak_classifiers: Vec<WeakClassifier>,
}

impl BoostedEnsemble {
    pub(crate) fn from_parts(
        spec: WeakLearnerSpec,
        alphas: Vec<f64>,
        weak_classifiers: Vec<WeakClassifier>,
    ) -> Self {
        assert_eq!(alphas.len(), weak_classifiers.len());
        BoostedEnsemble {
            spec,
            alphas,
            weak_classifiers,
        }
    }

    pub fn spec(&self) -> &WeakLearnerSpec {
        &self.spec
    }

    /// Number of accepted rounds.
    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn weak_classifiers(&self) -> &[WeakClassifier] {
        &self.weak_classifiers
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &WeakClassifier)> {
        self.alphas
            .iter()
            .copied()
            .zip(self.weak_classifiers.iter())
    }

    pub fn required_features(&self) -> usize {
        self.weak_classifiers
            .iter()
            .map(|w| w.required_features())
            .max()
            .unwrap_or(0)
    }

    /// Raw weighted vote `sum_t alpha_t h_t(x)`.
    ///
    /// Panics on an empty ensemble.
    pub fn vote_sum(&self, x: &[f64]) -> f64 {
        assert!(!self.is_empty(), "empty ensemble cannot predict");
        self.iter().map(|(a, h)| a * h.predict(x) as f64).sum()
    }

    /// Sign of the weighted vote; an exact-zero vote is `-1`.
    pub fn predict(&self, x: &[f64]) -> i8 {
        if self.vote_sum(x) > 0.0 {
            1
        } else {
            -1
        }
    }

    /// Normalized signed confidence `y * vote / sum(alpha)` in `[-1, 1]`.
    /// Positive exactly when the (non-tied) prediction is correct.
    pub fn margin(&self, x: &[f64], y: i8) -> f64 {
        assert!(y == -1 || y == 1, "label must be -1 or +1");
        let total: f64 = self.alphas.iter().sum();
        y as f64 * self.vote_sum(x) / total
    }

    /// Probability of the positive class, `exp(2v) / (1 + exp(2v))` for
    /// vote sum `v`, evaluated in the numerically stable form.
    pub fn posterior(&self, x: &[f64]) -> f64 {
        let v = self.vote_sum(x);
        if v >= 0.0 {
            1.0 / (1.0 + (-2.0 * v).exp())
        } else {
            let e = (2.0 * v).exp();
            e / (1.0 + e)
        }
    }

    /// `(p(+1|x), p(-1|x))`; the pair sums to one by construction.
    pub fn posterior_pair(&self, x: &[f64]) -> (f64, f64) {
        let p = self.posterior(x);
        (p, 1.0 - p)
    }

    /// Unweighted misclassification fraction on a dataset.
    pub fn error_rate(&self, data: &Dataset) -> f64 {
        let wrong = (0..data.n_samples())
            .filter(|&i| self.predict(data.row(i)) != data.label(i))
            .count();
        wrong as f64 / data.n_samples() as f64
    }
}

/// Weak-classifier vote weight for error `eps`, clamped away from 0 and 1.
///
/// ```
/// use logicboost::boosting::compute_alpha;
///
/// assert_eq!(compute_alpha(0.5), 0.0);
/// assert_eq!(compute_alpha(0.25), 3f64.ln());
/// ```
pub fn compute_alpha(eps: f64) -> f64 {
    let eps = eps.clamp(EPSILON_CLAMP, 1.0 - EPSILON_CLAMP);
    ((1.0 - eps) / eps).ln()
}

/// One multiplicative AdaBoost weight update followed by exact
/// renormalization.
pub fn reweight(
    weights: &SampleWeights,
    alpha: f64,
    predictions: &[i8],
    labels: &[i8],
) -> SampleWeights {
    assert!(alpha.is_finite(), "alpha must be finite");
    assert_eq!(
        weights.len(),
        predictions.len(),
        "prediction count mismatch"
    );
    assert_eq!(weights.len(), labels.len(), "label count mismatch");
    let mut updated: Vec<f64> = weights
        .as_slice()
        .iter()
        .zip(predictions.iter().zip(labels.iter()))
        .map(|(&w, (&h, &y))| w * (-alpha * (y as f64) * (h as f64)).exp())
        .collect();
    let total: f64 = updated.iter().sum();
    assert!(
        total > 0.0 && total.is_finite(),
        "weight mass vanished during reweighting"
    );
    for w in &mut updated {
        *w /= total;
    }
    SampleWeights::from_normalized(updated)
}

/// Runs discrete AdaBoost for up to `rounds` rounds.
///
/// Weights start uniform unless `w0` is given. A round whose best weak
/// classifier has weighted error `>= 0.5 - 1e-12` stops the loop without
/// being appended, so the result may hold fewer than `rounds` classifiers
/// (possibly zero on degenerate data).
pub fn train_boost(
    data: &Dataset,
    spec: &WeakLearnerSpec,
    rounds: usize,
    w0: Option<&SampleWeights>,
) -> BoostedEnsemble {
    assert!(rounds >= 1, "rounds must be at least 1");
    spec.validate();
    if let Some(w) = w0 {
        assert_eq!(w.len(), data.n_samples(), "w0/sample mismatch");
    }
    let n = data.n_samples();
    let order = ColumnOrder::new(data);

    let mut weights = w0.cloned().unwrap_or_else(|| SampleWeights::uniform(n));
    let mut alphas = Vec::new();
    let mut weak_classifiers: Vec<WeakClassifier> = Vec::new();

    for _ in 0..rounds {
        let w = weights.as_slice();
        let weak = match spec.kind {
            WeakLearnerKind::Stump => {
                let (stump, _) = crate::stump::train_stump_with_order(data, w, &order);
                WeakClassifier::Stump(stump)
            }
            WeakLearnerKind::OrChain => WeakClassifier::Chain(train_chain_with_order(
                data,
                w,
                Connective::Or,
                spec.max_ops,
                spec.tol,
                &order,
            )),
            WeakLearnerKind::AndChain => WeakClassifier::Chain(train_chain_with_order(
                data,
                w,
                Connective::And,
                spec.max_ops,
                spec.tol,
                &order,
            )),
            WeakLearnerKind::AndOr => {
                let or =
                    train_chain_with_order(data, w, Connective::Or, spec.max_ops, spec.tol, &order);
                let and = train_chain_with_order(
                    data,
                    w,
                    Connective::And,
                    spec.max_ops,
                    spec.tol,
                    &order,
                );
                let or_eps = chain_error(&or, data, w);
                let and_eps = chain_error(&and, data, w);
                if and_eps < or_eps {
                    WeakClassifier::Chain(and)
                } else {
                    WeakClassifier::Chain(or)
                }
            }
            WeakLearnerKind::Tree => {
                WeakClassifier::Tree(train_tree(data, &weights, spec.max_depth, spec.max_leaves))
            }
        };

        let predictions: Vec<i8> = (0..n).map(|i| weak.predict(data.row(i))).collect();
        let eps: f64 = predictions
            .iter()
            .zip(data.labels())
            .zip(w)
            .filter(|((h, y), _)| h != y)
            .map(|(_, &wi)| wi)
            .sum();
        if eps >= 0.5 - STOP_MARGIN {
            break;
        }
        let alpha = 0.5 * compute_alpha(eps);
        weights = reweight(&weights, alpha, &predictions, data.labels());
        alphas.push(alpha);
        weak_classifiers.push(weak);
    }

    BoostedEnsemble {
        spec: *spec,
        alphas,
        weak_classifiers,
    }
}

fn chain_error(chain: &LogicChain, data: &Dataset, w: &[f64]) -> f64 {
    (0..data.n_samples())
        .filter(|&i| chain.evaluate(data.row(i)) != data.label(i))
        .map(|i| w[i])
        .sum()
}
