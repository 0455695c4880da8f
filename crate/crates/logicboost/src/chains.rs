//! OR and AND chains of stumps: greedy construction of a logic combination
//! of operations under a fixed sample distribution.
//!
//! An OR chain predicts `+1` as soon as any operation does; an AND chain
//! predicts `+1` only when all operations do. Training is greedy: once an
//! OR chain outputs `+1` for a sample (or an AND chain outputs `-1`), later
//! operations cannot change that sample's outcome, so its error
//! contribution is frozen and the next operation is fit on the remaining
//! samples. Frozen samples are implemented by zeroing their weights and
//! carrying the frozen error as an additive constant, which minimizes the
//! combined chain error with the unmodified stump search.

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, SampleWeights};
use crate::stump::{ColumnOrder, DecisionStump};

/// Strict-decrease threshold for accepting one more operation.
pub const DEFAULT_CHAIN_TOL: f64 = 1e-12;

/// How the operations of a chain combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connective {
    Or,
    And,
}

impl Connective {
    /// The label that, once produced by any operation, fixes the chain
    /// output: `+1` for OR, `-1` for AND.
    fn absorbing(self) -> i8 {
        match self {
            Connective::Or => 1,
            Connective::And => -1,
        }
    }
}

/// Ordered stump list combined by OR or by AND.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicChain {
    connective: Connective,
    operations: Vec<DecisionStump>,
    training_error: Option<f64>,
}

impl LogicChain {
    /// Assembles a chain from existing stumps. Chains built this way carry
    /// no training error; trained chains always do.
    pub fn new(connective: Connective, operations: Vec<DecisionStump>) -> Self {
        assert!(
            !operations.is_empty(),
            "a chain holds at least one operation"
        );
        LogicChain {
            connective,
            operations,
            training_error: None,
        }
    }

    pub fn connective(&self) -> Connective {
        self.connective
    }

    pub fn operations(&self) -> &[DecisionStump] {
        &self.operations
    }

    pub fn len(&self) -> usize {
        self.operations.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Weighted error on the data the chain was fit on, when trained.
    pub fn training_error(&self) -> Option<f64> {
        self.training_error
    }

    /// Evaluates the chain on one feature vector.
    ///
    /// ```
    /// use logicboost::chains::{Connective, LogicChain};
    /// use logicboost::stump::{DecisionStump, Direction};
    ///
    /// let a = DecisionStump { feature_index: 0, threshold: 0.0, direction: Direction::Ge };
    /// let b = DecisionStump { feature_index: 1, threshold: 0.0, direction: Direction::Ge };
    /// let point = [1.0, -1.0]; // a says +1, b says -1
    /// assert_eq!(LogicChain::new(Connective::Or, vec![a, b]).evaluate(&point), 1);
    /// assert_eq!(LogicChain::new(Connective::And, vec![a, b]).evaluate(&point), -1);
    /// ```
    pub fn evaluate(&self, x: &[f64]) -> i8 {
        let absorbing = self.connective.absorbing();
        for op in &self.operations {
            if op.predict(x) == absorbing {
                return absorbing;
            }
        }
        -absorbing
    }
}

/// Trains an OR chain: greedy extension while the combined error strictly
/// decreases by more than `tol`, up to `max_ops` operations.
pub fn train_or_chain(
    data: &Dataset,
    weights: &SampleWeights,
    max_ops: usize,
    tol: f64,
) -> LogicChain {
    let order = ColumnOrder::new(data);
    train_chain_with_order(
        data,
        weights.as_slice(),
        Connective::Or,
        max_ops,
        tol,
        &order,
    )
}

/// Mirror of [`train_or_chain`] with the roles of `+1` and `-1` swapped.
pub fn train_and_chain(
    data: &Dataset,
    weights: &SampleWeights,
    max_ops: usize,
    tol: f64,
) -> LogicChain {
    let order = ColumnOrder::new(data);
    train_chain_with_order(
        data,
        weights.as_slice(),
        Connective::And,
        max_ops,
        tol,
        &order,
    )
}

pub(crate) fn train_chain_with_order(
    data: &Dataset,
    weights: &[f64],
    connective: Connective,
    max_ops: usize,
    tol: f64,
    order: &ColumnOrder,
) -> LogicChain {
    assert!(max_ops >= 1, "max_ops must be at least 1");
    assert_eq!(weights.len(), data.n_samples(), "weight/sample mismatch");
    let n = data.n_samples();
    let absorbing = connective.absorbing();

    let mut masked = weights.to_vec();
    let mut frozen = vec![false; n];
    let mut frozen_error = 0.0;
    let mut operations: Vec<DecisionStump> = Vec::new();
    let mut chain_error = f64::INFINITY;

    for _ in 0..max_ops {
        let (stump, residual_error) = crate::stump::train_stump_with_order(data, &masked, order);
        let combined = frozen_error + residual_error;
        if !operations.is_empty() && combined > chain_error - tol {
            break;
        }
        for i in 0..n {
            if !frozen[i] && stump.predict_value(data.value(i, stump.feature_index)) == absorbing {
                frozen[i] = true;
                if data.label(i) != absorbing {
                    frozen_error += weights[i];
                }
                masked[i] = 0.0;
            }
        }
        operations.push(stump);
        chain_error = combined;
    }

    LogicChain {
        connective,
        operations,
        training_error: Some(chain_error),
    }
}
