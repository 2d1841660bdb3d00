//! Gradient-boosted decision trees with logistic loss, built for small
//! dense feature matrices. Exact greedy splits with second-order gain and
//! L2-regularized Newton leaf values; no sampling anywhere, so a training
//! set maps to exactly one model.

use serde::{Deserialize, Serialize};

use super::Hyperparameters;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        value: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn score(&self, x: &[f64]) -> f64 {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                Node::Leaf { value } => return *value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    idx = if x[*feature] < *threshold { *left } else { *right };
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct GbdtModel {
    trees: Vec<Tree>,
    base_score: f64,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

struct TreeBuilder<'a> {
    x: &'a [Vec<f64>],
    grad: &'a [f64],
    hess: &'a [f64],
    hyper: &'a Hyperparameters,
    nodes: Vec<Node>,
}

impl<'a> TreeBuilder<'a> {
    fn leaf_value(&self, idx: &[usize]) -> f64 {
        let g: f64 = idx.iter().map(|&i| self.grad[i]).sum();
        let h: f64 = idx.iter().map(|&i| self.hess[i]).sum();
        -g / (h + self.hyper.l2)
    }

    /// Best (gain, feature, threshold) over all exact splits, requiring
    /// min_samples_leaf on both sides. Features are scanned in order and
    /// thresholds in increasing value with a strict improvement test, so the
    /// winner is unique for a given matrix.
    fn best_split(&self, idx: &[usize]) -> Option<(f64, usize, f64)> {
        let n_features = self.x[0].len();
        let g_total: f64 = idx.iter().map(|&i| self.grad[i]).sum();
        let h_total: f64 = idx.iter().map(|&i| self.hess[i]).sum();
        let lambda = self.hyper.l2;
        let parent = g_total * g_total / (h_total + lambda);
        let mut best: Option<(f64, usize, f64)> = None;
        let mut order: Vec<usize> = idx.to_vec();
        for f in 0..n_features {
            order.sort_by(|&a, &b| {
                self.x[a][f]
                    .total_cmp(&self.x[b][f])
                    .then_with(|| a.cmp(&b))
            });
            let mut gl = 0.0;
            let mut hl = 0.0;
            for (pos, &i) in order.iter().enumerate().take(order.len() - 1) {
                gl += self.grad[i];
                hl += self.hess[i];
                let here = self.x[i][f];
                let next = self.x[order[pos + 1]][f];
                if here == next {
                    continue;
                }
                let n_left = pos + 1;
                let n_right = order.len() - n_left;
                if n_left < self.hyper.min_samples_leaf || n_right < self.hyper.min_samples_leaf {
                    continue;
                }
                let gr = g_total - gl;
                let hr = h_total - hl;
                let gain =
                    gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - parent;
                if gain > 1e-12 && best.is_none_or(|(bg, _, _)| gain > bg) {
                    best = Some((gain, f, 0.5 * (here + next)));
                }
            }
        }
        best
    }

    fn build(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let split = if depth >= self.hyper.max_depth || idx.len() < 2 * self.hyper.min_samples_leaf
        {
            None
        } else {
            self.best_split(&idx)
        };
        let Some((_, feature, threshold)) = split else {
            let value = self.leaf_value(&idx) * self.hyper.learning_rate;
            self.nodes.push(Node::Leaf { value });
            return self.nodes.len() - 1;
        };
        let (left_idx, right_idx): (Vec<usize>, Vec<usize>) =
            idx.into_iter().partition(|&i| self.x[i][feature] < threshold);
        let slot = self.nodes.len();
        self.nodes.push(Node::Leaf { value: 0.0 }); // placeholder
        let left = self.build(left_idx, depth + 1);
        let right = self.build(right_idx, depth + 1);
        self.nodes[slot] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        slot
    }
}

impl GbdtModel {
    pub(crate) fn fit(x: &[Vec<f64>], y: &[u8], hyper: &Hyperparameters) -> Self {
        let n = x.len();
        let mut margins = vec![0.0f64; n];
        let mut trees = Vec::with_capacity(hyper.n_trees);
        let mut grad = vec![0.0f64; n];
        let mut hess = vec![0.0f64; n];
        for _ in 0..hyper.n_trees {
            for i in 0..n {
                let p = sigmoid(margins[i]);
                grad[i] = p - f64::from(y[i]);
                hess[i] = (p * (1.0 - p)).max(1e-16);
            }
            let mut builder = TreeBuilder {
                x,
                grad: &grad,
                hess: &hess,
                hyper,
                nodes: Vec::new(),
            };
            builder.build((0..n).collect(), 0);
            let tree = Tree {
                nodes: builder.nodes,
            };
            for (i, row) in x.iter().enumerate() {
                margins[i] += tree.score(row);
            }
            trees.push(tree);
        }
        GbdtModel {
            trees,
            base_score: 0.0,
        }
    }

    pub(crate) fn predict_proba(&self, x: &[f64]) -> f64 {
        let margin: f64 = self.base_score + self.trees.iter().map(|t| t.score(x)).sum::<f64>();
        sigmoid(margin)
    }
}
