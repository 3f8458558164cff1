use crate::data::{Label, Matrix};

use super::dot;

/// Soft-margin linear SVM trained by deterministic full-batch sub-gradient
/// descent on the primal hinge objective
/// `λ/2·‖w‖² + 1/n·Σ max(0, 1 − y(w·x + b))` with `λ = 1/(C·n)` and step
/// `1/(λ·t)`. The intercept is not regularized.
#[derive(Clone, Debug)]
pub struct LinearSvm {
    weights: Vec<f64>,
    bias: f64,
}

impl LinearSvm {
    pub(crate) fn fit(x: &Matrix, y: &[Label], c: f64, epochs: usize) -> Self {
        let n = y.len();
        let d = x.n_cols();
        let lambda = 1.0 / (c * n as f64);
        let signs: Vec<f64> = y.iter().map(|l| l.as_sign()).collect();
        let mut w = vec![0.0; d];
        let mut b = 0.0;
        let mut step = vec![0.0; d];
        for t in 1..=epochs {
            let eta = 1.0 / (lambda * t as f64);
            step.iter_mut().for_each(|s| *s = 0.0);
            let mut step_b = 0.0;
            for (row, &s) in x.rows().zip(&signs) {
                if s * (dot(&w, row) + b) < 1.0 {
                    for (acc, v) in step.iter_mut().zip(row) {
                        *acc += s * v;
                    }
                    step_b += s;
                }
            }
            let shrink = 1.0 - eta * lambda;
            for (wj, g) in w.iter_mut().zip(&step) {
                *wj = shrink * *wj + eta * g / n as f64;
            }
            b += eta * step_b / n as f64;
        }
        LinearSvm {
            weights: w,
            bias: b,
        }
    }

    pub fn decision_value(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    pub(crate) fn predict_row(&self, x: &[f64]) -> Label {
        Label::from_bool(self.decision_value(x) >= 0.0)
    }
}
