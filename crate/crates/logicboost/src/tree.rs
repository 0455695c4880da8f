//! Depth-limited binary decision tree weak learner.
//!
//! Growth is best-first: the pending split with the largest reduction in
//! weighted misclassification is applied until the leaf budget or depth cap
//! is reached. Split candidates are the interior midpoint thresholds of
//! each feature within the node's samples; both children of a candidate
//! are non-empty by construction. Candidates that do not reduce the error
//! are still admitted (ranked last), because patterns such as xor have
//! zero-gain first splits whose children only then become separable.
//! A node becomes a leaf when its labels are pure, its depth hits the cap,
//! the leaf budget is exhausted, or it has no candidate split.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::dataset::{Dataset, SampleWeights};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        label: i8,
    },
}

/// Binary decision tree with `{-1, +1}` leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    depth: usize,
    n_leaves: usize,
}

impl DecisionTree {
    /// Routes `x` to a leaf: values `>= threshold` go right.
    ///
    /// Panics if the tree tests a feature `x` does not have.
    pub fn predict(&self, x: &[f64]) -> i8 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { label } => return *label,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    assert!(
                        *feature < x.len(),
                        "tree tests feature {feature} but the input has {} features",
                        x.len()
                    );
                    at = if x[*feature] >= *threshold {
                        *right
                    } else {
                        *left
                    };
                }
            }
        }
    }

    /// Longest root-to-leaf path length; a lone leaf has depth 0.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub(crate) fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Rebuilds a tree from an arena whose children always point forward.
    /// Returns `None` when the node list is not a single well-formed tree.
    pub(crate) fn from_nodes(nodes: Vec<Node>) -> Option<DecisionTree> {
        if nodes.is_empty() {
            return None;
        }
        let mut visited = vec![false; nodes.len()];
        let mut depth = 0usize;
        let mut n_leaves = 0usize;
        let mut stack = vec![(0usize, 0usize)];
        while let Some((at, d)) = stack.pop() {
            if at >= nodes.len() || visited[at] {
                return None;
            }
            visited[at] = true;
            match &nodes[at] {
                Node::Leaf { .. } => {
                    n_leaves += 1;
                    depth = depth.max(d);
                }
                Node::Split { left, right, .. } => {
                    stack.push((*left, d + 1));
                    stack.push((*right, d + 1));
                }
            }
        }
        if visited.iter().any(|v| !v) {
            return None;
        }
        Some(DecisionTree {
            nodes,
            depth,
            n_leaves,
        })
    }
}

struct Pending {
    gain: f64,
    node_slot: usize,
    depth: usize,
    feature: usize,
    threshold: f64,
    indices: Vec<u32>,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Pending {}
impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Pending {
    // Max-heap: larger gain first, then the earlier-created node.
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .partial_cmp(&other.gain)
            .expect("gains are finite")
            .then_with(|| other.node_slot.cmp(&self.node_slot))
    }
}

/// Trains a depth- and leaf-capped tree by greedy weighted-misclassification
/// splitting. Deterministic: within a node ties go to the lower feature
/// index then lower threshold; across nodes to the earlier-created node.
pub fn train_tree(
    data: &Dataset,
    weights: &SampleWeights,
    max_depth: usize,
    max_leaves: usize,
) -> DecisionTree {
    assert!(max_depth >= 1, "max_depth must be at least 1");
    assert!(max_leaves >= 2, "max_leaves must be at least 2");
    assert_eq!(weights.len(), data.n_samples(), "weight/sample mismatch");
    let w = weights.as_slice();

    let root_indices: Vec<u32> = (0..data.n_samples() as u32).collect();
    let mut nodes = vec![Node::Leaf {
        label: majority_label(data, w, &root_indices),
    }];
    let mut n_leaves = 1usize;
    let mut depth = 0usize;

    let mut heap = BinaryHeap::new();
    if let Some(p) = best_split(data, w, root_indices, 0, 0, max_depth) {
        heap.push(p);
    }

    while n_leaves < max_leaves {
        let Some(p) = heap.pop() else { break };
        let (left_idx, right_idx): (Vec<u32>, Vec<u32>) = p
            .indices
            .iter()
            .partition(|&&i| data.value(i as usize, p.feature) < p.threshold);
        let left_slot = nodes.len();
        nodes.push(Node::Leaf {
            label: majority_label(data, w, &left_idx),
        });
        let right_slot = nodes.len();
        nodes.push(Node::Leaf {
            label: majority_label(data, w, &right_idx),
        });
        nodes[p.node_slot] = Node::Split {
            feature: p.feature,
            threshold: p.threshold,
            left: left_slot,
            right: right_slot,
        };
        n_leaves += 1;
        depth = depth.max(p.depth + 1);

        for (slot, indices) in [(left_slot, left_idx), (right_slot, right_idx)] {
            if p.depth + 1 < max_depth {
                if let Some(c) = best_split(data, w, indices, slot, p.depth + 1, max_depth) {
                    heap.push(c);
                }
            }
        }
    }

    DecisionTree {
        nodes,
        depth,
        n_leaves,
    }
}

fn majority_label(data: &Dataset, w: &[f64], indices: &[u32]) -> i8 {
    let mut pos = 0.0;
    let mut neg = 0.0;
    for &i in indices {
        if data.label(i as usize) == 1 {
            pos += w[i as usize];
        } else {
            neg += w[i as usize];
        }
    }
    if pos > neg {
        1
    } else {
        -1
    }
}

/// Best interior split of one node, or `None` for pure or unsplittable
/// partitions. The reported gain compares against the node's own
/// majority-vote error and may be zero.
fn best_split(
    data: &Dataset,
    w: &[f64],
    indices: Vec<u32>,
    node_slot: usize,
    depth: usize,
    _max_depth: usize,
) -> Option<Pending> {
    let first_label = data.label(indices[0] as usize);
    if indices
        .iter()
        .all(|&i| data.label(i as usize) == first_label)
    {
        return None;
    }

    let mut total_pos = 0.0;
    let mut total_neg = 0.0;
    for &i in &indices {
        if data.label(i as usize) == 1 {
            total_pos += w[i as usize];
        } else {
            total_neg += w[i as usize];
        }
    }
    let node_error = total_pos.min(total_neg);

    let mut best: Option<(f64, usize, f64)> = None; // (split_error, feature, threshold)
    let mut sorted = indices.clone();
    for feature in 0..data.n_features() {
        sorted.sort_unstable_by(|&a, &b| {
            data.value(a as usize, feature)
                .partial_cmp(&data.value(b as usize, feature))
                .expect("dataset values are finite")
                .then(a.cmp(&b))
        });
        let mut left_pos = 0.0;
        let mut left_neg = 0.0;
        let mut k = 0;
        while k < sorted.len() {
            let group_value = data.value(sorted[k] as usize, feature);
            while k < sorted.len() && data.value(sorted[k] as usize, feature) == group_value {
                let i = sorted[k] as usize;
                if data.label(i) == 1 {
                    left_pos += w[i];
                } else {
                    left_neg += w[i];
                }
                k += 1;
            }
            if k == sorted.len() {
                break;
            }
            let threshold = group_value / 2.0 + data.value(sorted[k] as usize, feature) / 2.0;
            let right_pos = total_pos - left_pos;
            let right_neg = total_neg - left_neg;
            let split_error = left_pos.min(left_neg) + right_pos.min(right_neg);
            let better = match &best {
                None => true,
                Some((be, bf, bt)) => {
                    split_error < *be || (split_error == *be && (feature, threshold) < (*bf, *bt))
                }
            };
            if better {
                best = Some((split_error, feature, threshold));
            }
        }
    }

    best.map(|(split_error, feature, threshold)| Pending {
        gain: node_error - split_error,
        node_slot,
        depth,
        feature,
        threshold,
        indices,
    })
}
