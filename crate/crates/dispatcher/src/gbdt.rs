//! A small, deterministic gradient-boosted-tree binary classifier.
//!
//! Second-order boosting on logistic loss: each round fits a regression
//! tree to the gradient/hessian statistics (g = p − y, h = p(1 − p)) with
//! exact greedy splits, and leaves take the Newton step −ΣG/(ΣH + λ).
//! Everything is seeded and iteration order is fixed, so retraining with
//! the same inputs reproduces the model file byte for byte. The model
//! serializes to a self-describing JSON document.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::DispatchError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    /// `x[feature] <= threshold` goes left, else right.
    Split { feature: usize, threshold: f64, left: usize, right: usize },
    Leaf { value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    fn value(&self, x: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                TreeNode::Leaf { value } => return *value,
                TreeNode::Split { feature, threshold, left, right } => {
                    at = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMeta {
    /// Motif families the label data came from (informational).
    pub motifs: Vec<String>,
    /// Training sample count (after the holdout split).
    pub samples: usize,
    /// Accuracy on the seeded holdout split, if one was held out.
    pub holdout_accuracy: Option<f64>,
}

/// The difficulty classifier: p_hard = sigmoid(base + lr·Σ trees(x)),
/// routed to the agent when p_hard ≥ theta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifficultyModel {
    pub version: u32,
    pub n_features: usize,
    pub feature_names: Vec<String>,
    pub base_score: f64,
    pub learning_rate: f64,
    /// Class threshold θ for routing.
    pub theta: f64,
    pub trees: Vec<Tree>,
    pub meta: ModelMeta,
}

#[derive(Debug, Clone)]
pub struct TrainParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    /// L2 regularization on leaf values.
    pub lambda: f64,
    /// Minimum samples on each side of a split.
    pub min_leaf: usize,
    /// Fraction of rows held out for the accuracy report.
    pub holdout_frac: f64,
    pub seed: u64,
    pub theta: f64,
}

impl Default for TrainParams {
    fn default() -> TrainParams {
        TrainParams {
            n_trees: 60,
            max_depth: 3,
            learning_rate: 0.2,
            lambda: 1.0,
            min_leaf: 2,
            holdout_frac: 0.2,
            seed: 0,
            theta: 0.5,
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl DifficultyModel {
    fn raw_score(&self, x: &[f64]) -> f64 {
        self.base_score
            + self.learning_rate * self.trees.iter().map(|t| t.value(x)).sum::<f64>()
    }

    /// Probability that the instance is hard (the direct path would get
    /// it wrong). Errors on feature-arity mismatch.
    pub fn predict_p_hard(&self, x: &[f64]) -> Result<f64, DispatchError> {
        if x.len() != self.n_features {
            return Err(DispatchError::FeatureArity {
                expected: self.n_features,
                got: x.len(),
            });
        }
        Ok(sigmoid(self.raw_score(x)))
    }

    pub fn save(&self, path: &Path) -> Result<(), DispatchError> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        let text = serde_json::to_string_pretty(self).map_err(DispatchError::model_io)?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<DifficultyModel, DispatchError> {
        let text = std::fs::read_to_string(path)?;
        let model: DifficultyModel =
            serde_json::from_str(&text).map_err(DispatchError::model_io)?;
        if model.version != 1 {
            return Err(DispatchError::Model(format!(
                "unsupported model version {}",
                model.version
            )));
        }
        Ok(model)
    }
}

/// Per-sample boosting statistics for one tree-build.
struct Stats<'a> {
    features: &'a [Vec<f64>],
    grad: Vec<f64>,
    hess: Vec<f64>,
}

fn leaf_value(stats: &Stats, idx: &[usize], lambda: f64) -> f64 {
    let g: f64 = idx.iter().map(|&i| stats.grad[i]).sum();
    let h: f64 = idx.iter().map(|&i| stats.hess[i]).sum();
    -g / (h + lambda)
}

struct BestSplit {
    gain: f64,
    feature: usize,
    threshold: f64,
}

fn find_split(
    stats: &Stats,
    idx: &[usize],
    n_features: usize,
    lambda: f64,
    min_leaf: usize,
) -> Option<BestSplit> {
    let g_total: f64 = idx.iter().map(|&i| stats.grad[i]).sum();
    let h_total: f64 = idx.iter().map(|&i| stats.hess[i]).sum();
    let parent_obj = g_total * g_total / (h_total + lambda);
    let mut best: Option<BestSplit> = None;

    for feature in 0..n_features {
        let mut order: Vec<usize> = idx.to_vec();
        order.sort_by(|&a, &b| {
            stats.features[a][feature]
                .total_cmp(&stats.features[b][feature])
                .then(a.cmp(&b))
        });
        let mut g_left = 0.0;
        let mut h_left = 0.0;
        for cut in 1..order.len() {
            let prev = order[cut - 1];
            g_left += stats.grad[prev];
            h_left += stats.hess[prev];
            let (lo, hi) =
                (stats.features[prev][feature], stats.features[order[cut]][feature]);
            if lo == hi || cut < min_leaf || order.len() - cut < min_leaf {
                continue;
            }
            let g_right = g_total - g_left;
            let h_right = h_total - h_left;
            let gain = g_left * g_left / (h_left + lambda)
                + g_right * g_right / (h_right + lambda)
                - parent_obj;
            if gain > best.as_ref().map_or(1e-12, |b| b.gain) {
                best = Some(BestSplit { gain, feature, threshold: (lo + hi) / 2.0 });
            }
        }
    }
    best
}

fn build_tree(
    stats: &Stats,
    idx: Vec<usize>,
    depth: usize,
    params: &TrainParams,
    n_features: usize,
    nodes: &mut Vec<TreeNode>,
) -> usize {
    let split = if depth < params.max_depth {
        find_split(stats, &idx, n_features, params.lambda, params.min_leaf)
    } else {
        None
    };
    match split {
        None => {
            nodes.push(TreeNode::Leaf { value: leaf_value(stats, &idx, params.lambda) });
            nodes.len() - 1
        }
        Some(s) => {
            let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = idx
                .into_iter()
                .partition(|&i| stats.features[i][s.feature] <= s.threshold);
            let at = nodes.len();
            nodes.push(TreeNode::Split {
                feature: s.feature,
                threshold: s.threshold,
                left: 0,
                right: 0,
            });
            let left = build_tree(stats, left_idx, depth + 1, params, n_features, nodes);
            let right = build_tree(stats, right_idx, depth + 1, params, n_features, nodes);
            if let TreeNode::Split { left: l, right: r, .. } = &mut nodes[at] {
                *l = left;
                *r = right;
            }
            at
        }
    }
}

/// The trained model plus its holdout report.
#[derive(Debug)]
pub struct TrainReport {
    pub model: DifficultyModel,
    pub holdout_accuracy: Option<f64>,
    pub holdout_size: usize,
}

/// Train on (features, labels). Labels are 0 (the direct path solved it)
/// or 1 (hard). Requires at least two classes in the training split.
pub fn train_classifier(
    features: &[Vec<f64>],
    labels: &[u8],
    params: &TrainParams,
    motifs: Vec<String>,
) -> Result<TrainReport, DispatchError> {
    if features.len() != labels.len() {
        return Err(DispatchError::Model(format!(
            "feature rows ({}) and labels ({}) differ",
            features.len(),
            labels.len()
        )));
    }
    if features.is_empty() {
        return Err(DispatchError::Model("no training rows".to_owned()));
    }
    let n_features = features[0].len();
    if n_features == 0 || features.iter().any(|r| r.len() != n_features) {
        return Err(DispatchError::Model("inconsistent feature arity in rows".to_owned()));
    }
    if labels.iter().any(|&l| l > 1) {
        return Err(DispatchError::Model("labels must be 0 or 1".to_owned()));
    }

    // Seeded holdout split.
    let mut order: Vec<usize> = (0..features.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    order.shuffle(&mut rng);
    let n_holdout = ((features.len() as f64) * params.holdout_frac).floor() as usize;
    let n_holdout = n_holdout.min(features.len().saturating_sub(2));
    let (holdout_idx, train_idx) = order.split_at(n_holdout);

    let positives = train_idx.iter().filter(|&&i| labels[i] == 1).count();
    if positives == 0 || positives == train_idx.len() {
        return Err(DispatchError::SingleClass);
    }

    let prior = positives as f64 / train_idx.len() as f64;
    let base_score = (prior / (1.0 - prior)).ln();

    let train_rows: Vec<Vec<f64>> = train_idx.iter().map(|&i| features[i].clone()).collect();
    let train_labels: Vec<f64> = train_idx.iter().map(|&i| labels[i] as f64).collect();
    let mut raw: Vec<f64> = vec![base_score; train_rows.len()];
    let mut trees = Vec::with_capacity(params.n_trees);

    for _ in 0..params.n_trees {
        let mut stats = Stats {
            features: &train_rows,
            grad: Vec::with_capacity(train_rows.len()),
            hess: Vec::with_capacity(train_rows.len()),
        };
        for (i, &f) in raw.iter().enumerate() {
            let p = sigmoid(f);
            stats.grad.push(p - train_labels[i]);
            stats.hess.push((p * (1.0 - p)).max(1e-12));
        }
        let mut nodes = Vec::new();
        build_tree(
            &stats,
            (0..train_rows.len()).collect(),
            0,
            params,
            n_features,
            &mut nodes,
        );
        let tree = Tree { nodes };
        for (i, row) in train_rows.iter().enumerate() {
            raw[i] += params.learning_rate * tree.value(row);
        }
        trees.push(tree);
    }

    let model = DifficultyModel {
        version: 1,
        n_features,
        feature_names: if n_features == crate::features::FEATURE_NAMES.len() {
            crate::features::FEATURE_NAMES.iter().map(|s| s.to_string()).collect()
        } else {
            (0..n_features).map(|i| format!("f{i}")).collect()
        },
        base_score,
        learning_rate: params.learning_rate,
        theta: params.theta,
        trees,
        meta: ModelMeta {
            motifs,
            samples: train_idx.len(),
            holdout_accuracy: None,
        },
    };

    let holdout_accuracy = (!holdout_idx.is_empty()).then(|| {
        let correct = holdout_idx
            .iter()
            .filter(|&&i| {
                let p = sigmoid(model.raw_score(&features[i]));
                (p >= 0.5) == (labels[i] == 1)
            })
            .count();
        correct as f64 / holdout_idx.len() as f64
    });
    let mut model = model;
    model.meta.holdout_accuracy = holdout_accuracy;

    Ok(TrainReport { model, holdout_accuracy, holdout_size: holdout_idx.len() })
}
