use crate::data::{Label, Matrix};

#[derive(Clone, Debug)]
struct ClassStats {
    log_prior: f64,
    means: Vec<f64>,
    variances: Vec<f64>,
}

/// Gaussian naive Bayes.
///
/// Per-class variances get `var_smoothing × (largest feature variance)`
/// added so that constant features never produce a zero variance.
#[derive(Clone, Debug)]
pub struct GaussianNb {
    // indexed like `Label::BOTH`; a class absent from training is `None`
    classes: [Option<ClassStats>; 2],
}

fn mean_and_variance<'a>(
    rows: impl Iterator<Item = &'a [f64]>,
    d: usize,
) -> (usize, Vec<f64>, Vec<f64>) {
    let rows: Vec<&[f64]> = rows.collect();
    let n = rows.len();
    let mut means = vec![0.0; d];
    for r in &rows {
        for (m, x) in means.iter_mut().zip(*r) {
            *m += x;
        }
    }
    means.iter_mut().for_each(|m| *m /= n as f64);
    let mut vars = vec![0.0; d];
    for r in &rows {
        for ((v, x), m) in vars.iter_mut().zip(*r).zip(&means) {
            *v += (x - m) * (x - m);
        }
    }
    vars.iter_mut().for_each(|v| *v /= n as f64);
    (n, means, vars)
}

impl GaussianNb {
    pub(crate) fn fit(x: &Matrix, y: &[Label], var_smoothing: f64) -> Self {
        let d = x.n_cols();
        let (n, _, all_vars) = mean_and_variance(x.rows(), d);
        let max_var = all_vars.iter().cloned().fold(0.0, f64::max);
        let epsilon = if max_var > 0.0 {
            var_smoothing * max_var
        } else {
            var_smoothing
        };
        let classes = Label::BOTH.map(|label| {
            let rows = x
                .rows()
                .zip(y)
                .filter(|&(_, &l)| l == label)
                .map(|(r, _)| r);
            let (count, means, mut variances) = mean_and_variance(rows, d);
            if count == 0 {
                return None;
            }
            variances.iter_mut().for_each(|v| *v += epsilon);
            Some(ClassStats {
                log_prior: (count as f64 / n as f64).ln(),
                means,
                variances,
            })
        });
        GaussianNb { classes }
    }

    /// Per-feature means of a class, if it was present in training.
    pub fn class_means(&self, label: Label) -> Option<&[f64]> {
        let idx = Label::BOTH.iter().position(|&l| l == label)?;
        self.classes[idx].as_ref().map(|c| c.means.as_slice())
    }

    pub fn class_variances(&self, label: Label) -> Option<&[f64]> {
        let idx = Label::BOTH.iter().position(|&l| l == label)?;
        self.classes[idx].as_ref().map(|c| c.variances.as_slice())
    }

    fn log_joint(stats: &ClassStats, x: &[f64]) -> f64 {
        let ln_2pi = (2.0 * std::f64::consts::PI).ln();
        stats.log_prior
            + x.iter()
                .zip(&stats.means)
                .zip(&stats.variances)
                .map(|((xi, m), v)| -0.5 * (ln_2pi + v.ln()) - (xi - m) * (xi - m) / (2.0 * v))
                .sum::<f64>()
    }

    pub(crate) fn predict_row(&self, x: &[f64]) -> Label {
        match &self.classes {
            [Some(pos), Some(neg)] => {
                Label::from_bool(Self::log_joint(pos, x) >= Self::log_joint(neg, x))
            }
            [Some(_), None] => Label::Positive,
            _ => Label::Negative,
        }
    }
}
