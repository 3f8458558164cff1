//! Confusion matrices, the nine evaluation measures, and stratified k-fold
//! cross-validation.
//!
//! Benign is the positive class. Ratios whose denominator is zero evaluate
//! to 0 and set the `degenerate` flag instead of failing, so sweeps over
//! many feature masks never abort on an unlucky fold.
//!
//! Two measures deliberately follow their printed definitions rather than
//! their names:
//! * kappa uses the standard Cohen chance agreement
//!   `P(E) = [(TP+FN)(TP+FP) + (FP+TN)(FN+TN)] / N²`;
//! * "RAE" is the L2 ratio `‖pred − true‖₂ / ‖true‖₂`, not an absolute-error
//!   ratio.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::classifiers::{train_classifier, ClassifierConfig};
use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fn_: u64,
    pub fp: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fn_ + self.fp + self.tn
    }
}

pub fn confusion_matrix(y_true: &[Label], y_pred: &[Label]) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::DimensionMismatch {
            expected: y_true.len(),
            actual: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut cm = ConfusionMatrix::default();
    for (t, p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (Label::Positive, Label::Positive) => cm.tp += 1,
            (Label::Positive, Label::Negative) => cm.fn_ += 1,
            (Label::Negative, Label::Positive) => cm.fp += 1,
            (Label::Negative, Label::Negative) => cm.tn += 1,
        }
    }
    Ok(cm)
}

/// Measures derived from the confusion matrix alone.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationMetrics {
    pub accuracy: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub precision: f64,
    pub f_score: f64,
    pub kappa: f64,
    pub degenerate: bool,
}

fn ratio(num: f64, den: f64, degenerate: &mut bool) -> f64 {
    if den == 0.0 {
        *degenerate = true;
        0.0
    } else {
        num / den
    }
}

pub fn classification_metrics(cm: &ConfusionMatrix) -> ClassificationMetrics {
    let tp = cm.tp as f64;
    let fn_ = cm.fn_ as f64;
    let fp = cm.fp as f64;
    let tn = cm.tn as f64;
    let n = tp + fn_ + fp + tn;
    let mut degenerate = false;

    let accuracy = ratio(tp + tn, n, &mut degenerate);
    let sensitivity = ratio(tp, tp + fn_, &mut degenerate);
    let specificity = ratio(tn, tn + fp, &mut degenerate);
    let precision = ratio(tp, tp + fp, &mut degenerate);
    let f_score = ratio(
        2.0 * sensitivity * precision,
        sensitivity + precision,
        &mut degenerate,
    );

    let observed = accuracy;
    let chance = ratio(
        (tp + fn_) * (tp + fp) + (fp + tn) * (fn_ + tn),
        n * n,
        &mut degenerate,
    );
    let kappa = ratio(observed - chance, 1.0 - chance, &mut degenerate);

    ClassificationMetrics {
        accuracy,
        sensitivity,
        specificity,
        precision,
        f_score,
        kappa,
        degenerate,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics {
    pub mae: f64,
    pub rmse: f64,
    pub rae: f64,
    pub degenerate: bool,
}

/// MAE, RMSE and the L2 "relative error" over 0/1 label encodings
/// (1 = positive).
pub fn error_metrics(y_true: &[Label], y_pred: &[Label]) -> Result<ErrorMetrics> {
    if y_true.len() != y_pred.len() {
        return Err(Error::DimensionMismatch {
            expected: y_true.len(),
            actual: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = y_true.len() as f64;
    let mut abs_sum = 0.0;
    let mut sq_sum = 0.0;
    let mut true_sq = 0.0;
    for (t, p) in y_true.iter().zip(y_pred) {
        let e = p.as_unit() - t.as_unit();
        abs_sum += e.abs();
        sq_sum += e * e;
        true_sq += t.as_unit() * t.as_unit();
    }
    let mut degenerate = false;
    let rae = ratio(sq_sum.sqrt(), true_sq.sqrt(), &mut degenerate);
    Ok(ErrorMetrics {
        mae: abs_sum / n,
        rmse: (sq_sum / n).sqrt(),
        rae,
        degenerate,
    })
}

/// All nine measures for one prediction set, as fractions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub precision: f64,
    pub f_score: f64,
    pub kappa: f64,
    pub mae: f64,
    pub rmse: f64,
    pub rae: f64,
    pub degenerate: bool,
}

impl MetricsReport {
    pub fn from_predictions(y_true: &[Label], y_pred: &[Label]) -> Result<Self> {
        let cm = confusion_matrix(y_true, y_pred)?;
        let c = classification_metrics(&cm);
        let e = error_metrics(y_true, y_pred)?;
        Ok(MetricsReport {
            accuracy: c.accuracy,
            sensitivity: c.sensitivity,
            specificity: c.specificity,
            precision: c.precision,
            f_score: c.f_score,
            kappa: c.kappa,
            mae: e.mae,
            rmse: e.rmse,
            rae: e.rae,
            degenerate: c.degenerate || e.degenerate,
        })
    }

    /// Copy with every measure rounded to `places` decimals.
    pub fn rounded(&self, places: i32) -> Self {
        let scale = 10f64.powi(places);
        let r = |v: f64| (v * scale).round() / scale;
        MetricsReport {
            accuracy: r(self.accuracy),
            sensitivity: r(self.sensitivity),
            specificity: r(self.specificity),
            precision: r(self.precision),
            f_score: r(self.f_score),
            kappa: r(self.kappa),
            mae: r(self.mae),
            rmse: r(self.rmse),
            rae: r(self.rae),
            degenerate: self.degenerate,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub k: usize,
    pub fold_metrics: Vec<MetricsReport>,
    pub ocv_accuracy: f64,
}

/// Mean of per-fold scores.
pub fn overall_cv(fold_scores: &[f64]) -> f64 {
    fold_scores.iter().sum::<f64>() / fold_scores.len() as f64
}

/// Stratified, seeded assignment of rows to `k` folds. Within each class the
/// shuffled rows are dealt round-robin, continuing the rotation across
/// classes, so fold sizes differ by at most one.
pub fn stratified_folds(labels: &[Label], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::config(format!(
            "cross-validation needs k >= 2, got {k}"
        )));
    }
    let mut rng = rng::seeded(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for label in Label::BOTH {
        let mut idx: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == label).then_some(i))
            .collect();
        if idx.len() < k {
            return Err(Error::ClassTooSmall {
                label: label.name(),
                count: idx.len(),
                required: k,
            });
        }
        idx.shuffle(&mut rng);
        for i in idx {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

/// Stratified k-fold cross-validation. Folds are fixed from `seed` before
/// any model is trained; the overall score is the mean fold accuracy.
pub fn k_fold_cv(cfg: &ClassifierConfig, ds: &Dataset, k: usize, seed: u64) -> Result<CvResult> {
    let folds = stratified_folds(ds.labels(), k, seed)?;
    let mut fold_metrics = Vec::with_capacity(k);
    for (f, held_out) in folds.iter().enumerate() {
        let train_idx: Vec<usize> = folds
            .iter()
            .enumerate()
            .filter(|&(g, _)| g != f)
            .flat_map(|(_, idx)| idx.iter().copied())
            .collect();
        let train = ds.subset(&train_idx);
        let test = ds.subset(held_out);
        let model = train_classifier(cfg, &train)?;
        let pred = model.predict(test.features())?;
        fold_metrics.push(MetricsReport::from_predictions(test.labels(), &pred)?);
    }
    let accs: Vec<f64> = fold_metrics.iter().map(|m| m.accuracy).collect();
    Ok(CvResult {
        k,
        ocv_accuracy: overall_cv(&accs),
        fold_metrics,
    })
}
