//! Logistic-regression fallback behind the same predictor interface.
//! Full-batch gradient descent on standardized features; fixed iteration
//! budget, so training is deterministic.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct LogisticModel {
    weights: Vec<f64>,
    bias: f64,
    feature_means: Vec<f64>,
    feature_scales: Vec<f64>,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl LogisticModel {
    pub(crate) fn fit(x: &[Vec<f64>], y: &[u8]) -> Self {
        let n = x.len();
        let d = x[0].len();
        let mut means = vec![0.0; d];
        for row in x {
            for (m, v) in means.iter_mut().zip(row) {
                *m += v;
            }
        }
        for m in &mut means {
            *m /= n as f64;
        }
        let mut scales = vec![0.0; d];
        for row in x {
            for j in 0..d {
                scales[j] += (row[j] - means[j]).powi(2);
            }
        }
        for s in &mut scales {
            *s = (*s / n as f64).sqrt();
            if *s < 1e-12 {
                *s = 1.0;
            }
        }
        let std_row = |row: &[f64], j: usize| (row[j] - means[j]) / scales[j];

        let mut w = vec![0.0; d];
        let mut b = 0.0;
        let lr = 0.5;
        let l2 = 1e-4;
        for _ in 0..2000 {
            let mut gw = vec![0.0; d];
            let mut gb = 0.0;
            for (row, &label) in x.iter().zip(y) {
                let z: f64 = b + (0..d).map(|j| w[j] * std_row(row, j)).sum::<f64>();
                let err = sigmoid(z) - f64::from(label);
                for (j, g) in gw.iter_mut().enumerate() {
                    *g += err * std_row(row, j);
                }
                gb += err;
            }
            for j in 0..d {
                w[j] -= lr * (gw[j] / n as f64 + l2 * w[j]);
            }
            b -= lr * gb / n as f64;
        }
        LogisticModel {
            weights: w,
            bias: b,
            feature_means: means,
            feature_scales: scales,
        }
    }

    pub(crate) fn predict_proba(&self, x: &[f64]) -> f64 {
        let z: f64 = self.bias
            + self
                .weights
                .iter()
                .zip(x)
                .zip(self.feature_means.iter().zip(&self.feature_scales))
                .map(|((w, v), (m, s))| w * (v - m) / s)
                .sum::<f64>();
        sigmoid(z)
    }
}
