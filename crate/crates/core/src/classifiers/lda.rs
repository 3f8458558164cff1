use crate::data::{Label, Matrix};
use crate::error::{Error, Result};

use super::dot;

/// Two-class linear discriminant analysis with a pooled, ridge-regularized
/// covariance.
#[derive(Clone, Debug)]
pub struct Lda {
    weights: Vec<f64>,
    bias: f64,
}

/// Solve `a · x = b` for symmetric positive-definite `a` (row-major, n×n).
fn cholesky_solve(mut a: Vec<f64>, b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for j in 0..n {
        let mut diag = a[j * n + j];
        for k in 0..j {
            diag -= a[j * n + k] * a[j * n + k];
        }
        if diag.is_nan() || diag <= 0.0 {
            return None;
        }
        let diag = diag.sqrt();
        a[j * n + j] = diag;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / diag;
        }
    }
    // forward: L z = b
    let mut z = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            z[i] -= a[i * n + k] * z[k];
        }
        z[i] /= a[i * n + i];
    }
    // backward: Lᵀ x = z
    for i in (0..n).rev() {
        for k in i + 1..n {
            z[i] -= a[k * n + i] * z[k];
        }
        z[i] /= a[i * n + i];
    }
    Some(z)
}

impl Lda {
    pub(crate) fn fit(x: &Matrix, y: &[Label], ridge: f64) -> Result<Self> {
        let d = x.n_cols();
        let mut means = [vec![0.0; d], vec![0.0; d]];
        let mut counts = [0usize; 2];
        let class_of = |l: Label| usize::from(l == Label::Negative);
        for (row, &l) in x.rows().zip(y) {
            let c = class_of(l);
            counts[c] += 1;
            for (m, v) in means[c].iter_mut().zip(row) {
                *m += v;
            }
        }
        for c in 0..2 {
            means[c].iter_mut().for_each(|m| *m /= counts[c] as f64);
        }

        let mut cov = vec![0.0; d * d];
        let mut centered = vec![0.0; d];
        for (row, &l) in x.rows().zip(y) {
            let mu = &means[class_of(l)];
            for ((c, v), m) in centered.iter_mut().zip(row).zip(mu) {
                *c = v - m;
            }
            for i in 0..d {
                for j in i..d {
                    cov[i * d + j] += centered[i] * centered[j];
                }
            }
        }
        let n = y.len();
        let dof = if n > 2 { (n - 2) as f64 } else { n as f64 };
        for i in 0..d {
            for j in i..d {
                let v = cov[i * d + j] / dof;
                cov[i * d + j] = v;
                cov[j * d + i] = v;
            }
            cov[i * d + i] += ridge;
        }

        let diff: Vec<f64> = means[0].iter().zip(&means[1]).map(|(p, q)| p - q).collect();
        let weights = cholesky_solve(cov, &diff).ok_or_else(|| {
            Error::DegenerateTrainingSet("pooled covariance is singular; raise lda.ridge".into())
        })?;
        let midpoint: Vec<f64> = means[0]
            .iter()
            .zip(&means[1])
            .map(|(p, q)| 0.5 * (p + q))
            .collect();
        let bias = -dot(&weights, &midpoint) + (counts[0] as f64 / counts[1] as f64).ln();
        Ok(Lda { weights, bias })
    }

    pub fn decision_value(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    pub(crate) fn predict_row(&self, x: &[f64]) -> Label {
        Label::from_bool(self.decision_value(x) >= 0.0)
    }
}
