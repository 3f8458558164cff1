use crate::data::{Label, Matrix};

use super::{dot, sigmoid};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Settings {
    pub learning_rate: f64,
    pub iterations: usize,
    pub l2: f64,
    pub threshold: f64,
}

/// L2-regularized logistic regression fitted by full-batch gradient descent
/// from zero weights. The intercept is not regularized.
#[derive(Clone, Debug)]
pub struct LogisticRegression {
    weights: Vec<f64>,
    bias: f64,
    threshold: f64,
}

impl LogisticRegression {
    pub(crate) fn fit(x: &Matrix, y: &[Label], s: Settings) -> Self {
        let d = x.n_cols();
        let n = y.len() as f64;
        let targets: Vec<f64> = y.iter().map(|l| l.as_unit()).collect();
        let mut w = vec![0.0; d];
        let mut b = 0.0;
        let mut grad = vec![0.0; d];
        for _ in 0..s.iterations {
            grad.iter_mut().for_each(|g| *g = 0.0);
            let mut grad_b = 0.0;
            for (row, t) in x.rows().zip(&targets) {
                let err = sigmoid(dot(&w, row) + b) - t;
                for (g, v) in grad.iter_mut().zip(row) {
                    *g += err * v;
                }
                grad_b += err;
            }
            for (wj, g) in w.iter_mut().zip(&grad) {
                *wj -= s.learning_rate * (g / n + s.l2 * *wj);
            }
            b -= s.learning_rate * grad_b / n;
        }
        LogisticRegression {
            weights: w,
            bias: b,
            threshold: s.threshold,
        }
    }

    pub fn probability(&self, x: &[f64]) -> f64 {
        sigmoid(dot(&self.weights, x) + self.bias)
    }

    pub(crate) fn predict_row(&self, x: &[f64]) -> Label {
        Label::from_bool(self.probability(x) >= self.threshold)
    }
}
