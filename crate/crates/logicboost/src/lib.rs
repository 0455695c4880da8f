//! Boosting over logic chains of decision stumps.
//!
//! Weighted-vote boosting over decision stumps fails on patterns like xor:
//! under the boosting distribution every single-feature threshold is as
//! bad as chance, and reweighting walks the learner in a circle. This
//! crate implements the layered fix: greedy OR and AND chains of stumps as
//! mid-layer weak classifiers, boosted by discrete AdaBoost into the
//! two-layer Ada-Or, Ada-And and Ada-AndOr models, next to plain Ada-Stump
//! and a depth-limited decision-tree baseline.
//!
//! The pieces:
//!
//! - [`dataset`]: data model, CSV ingestion, the xor generator and seeded
//!   train/test splits.
//! - [`stump`]: the thresholded-feature weak classifier and its exact
//!   weighted training.
//! - [`chains`]: greedy OR/AND combinations of stumps under a fixed
//!   distribution.
//! - [`tree`]: the depth- and leaf-capped decision-tree weak learner.
//! - [`boosting`]: discrete AdaBoost over any of the above, plus margin
//!   and posterior diagnostics.
//! - [`model`]: versioned text serialization with bit-exact round trips.
//! - [`experiments`]: seeded multi-trial harness, operation-count sweeps,
//!   error-ratio tables, the xor demonstration and the origin-line
//!   deadlock check.
//!
//! ```
//! use logicboost::boosting::{train_boost, WeakLearnerSpec};
//! use logicboost::dataset::make_xor;
//!
//! let data = make_xor(250, 0.3, 7);
//! let held_out = make_xor(250, 0.3, 1007);
//! // Stumps cannot express the pattern...
//! let stumps = train_boost(&data, &WeakLearnerSpec::stump(), 25, None);
//! assert!(stumps.error_rate(&held_out) > 0.45);
//! // ...two-operation OR chains can.
//! let chains = train_boost(&data, &WeakLearnerSpec::or_chain(2), 10, None);
//! assert!(chains.error_rate(&held_out) < 0.05);
//! ```

pub mod boosting;
pub mod chains;
pub mod dataset;
mod error;
pub mod experiments;
mod fileio;
pub mod model;
pub mod stump;
pub mod tree;

pub use boosting::{BoostedEnsemble, WeakClassifier, WeakLearnerKind, WeakLearnerSpec};
pub use chains::{Connective, LogicChain};
pub use dataset::{Dataset, LabelMapping, SampleWeights, SplitSpec};
pub use error::{Error, Result};
pub use stump::DecisionStump;
pub use tree::DecisionTree;
