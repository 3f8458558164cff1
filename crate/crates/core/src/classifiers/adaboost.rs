use crate::data::{Label, Matrix};

#[derive(Clone, Copy, Debug)]
struct Stump {
    feature: usize,
    threshold: f64,
    /// +1: predict positive above the threshold; -1: below it.
    polarity: f64,
    alpha: f64,
}

impl Stump {
    fn vote(&self, x: &[f64]) -> f64 {
        if x[self.feature] > self.threshold {
            self.polarity
        } else {
            -self.polarity
        }
    }
}

/// Discrete AdaBoost over depth-one decision stumps.
///
/// Boosting stops early when the best stump's weighted error reaches 0.5
/// (that stump is discarded) or 0 (that stump is kept and ends training).
#[derive(Clone, Debug)]
pub struct AdaBoost {
    stumps: Vec<Stump>,
    /// Fallback when no stump was accepted.
    prior: Label,
}

/// Weighted error floor used for alpha when a stump is perfect.
const MIN_ERROR: f64 = 1e-10;

fn best_stump(x: &Matrix, signs: &[f64], weights: &[f64]) -> Option<(Stump, f64)> {
    let n = signs.len();
    let total_pos: f64 = signs
        .iter()
        .zip(weights)
        .filter(|(s, _)| **s > 0.0)
        .map(|(_, w)| w)
        .sum();
    let total: f64 = weights.iter().sum();
    let mut best: Option<(Stump, f64)> = None;
    let mut order: Vec<usize> = (0..n).collect();
    for feature in 0..x.n_cols() {
        order.sort_unstable_by(|&a, &b| x.get(a, feature).total_cmp(&x.get(b, feature)));
        let mut below_pos = 0.0;
        let mut below_total = 0.0;
        for k in 0..n {
            let i = order[k];
            below_total += weights[i];
            if signs[i] > 0.0 {
                below_pos += weights[i];
            }
            if k + 1 < n && x.get(order[k + 1], feature) == x.get(i, feature) {
                continue;
            }
            let below_neg = below_total - below_pos;
            let above_pos = total_pos - below_pos;
            // polarity +1 misclassifies positives below and negatives above
            let err_up = below_pos + (total - total_pos - below_neg);
            let err_down = below_neg + above_pos;
            let threshold = if k + 1 < n {
                0.5 * (x.get(i, feature) + x.get(order[k + 1], feature))
            } else {
                f64::INFINITY
            };
            for (polarity, err) in [(1.0, err_up), (-1.0, err_down)] {
                let err = err / total;
                if best.is_none_or(|(_, e)| err < e) {
                    best = Some((
                        Stump {
                            feature,
                            threshold,
                            polarity,
                            alpha: 0.0,
                        },
                        err,
                    ));
                }
            }
        }
    }
    best
}

impl AdaBoost {
    pub(crate) fn fit(x: &Matrix, y: &[Label], n_rounds: usize) -> Self {
        let n = y.len();
        let signs: Vec<f64> = y.iter().map(|l| l.as_sign()).collect();
        let mut weights = vec![1.0 / n as f64; n];
        let prior = super::majority(y);
        let mut stumps = Vec::new();
        for _ in 0..n_rounds {
            let Some((mut stump, err)) = best_stump(x, &signs, &weights) else {
                break;
            };
            if err >= 0.5 {
                break;
            }
            let e = err.max(MIN_ERROR);
            stump.alpha = 0.5 * ((1.0 - e) / e).ln();
            stumps.push(stump);
            if err <= 0.0 {
                break;
            }
            let mut z = 0.0;
            for ((w, s), row) in weights.iter_mut().zip(&signs).zip(x.rows()) {
                *w *= (-stump.alpha * s * stump.vote(row)).exp();
                z += *w;
            }
            weights.iter_mut().for_each(|w| *w /= z);
        }
        AdaBoost { stumps, prior }
    }

    pub fn n_rounds(&self) -> usize {
        self.stumps.len()
    }

    /// Prediction using only the first `rounds` stumps.
    pub fn predict_staged(&self, x: &[f64], rounds: usize) -> Label {
        let used = &self.stumps[..rounds.min(self.stumps.len())];
        if used.is_empty() {
            return self.prior;
        }
        let score: f64 = used.iter().map(|s| s.alpha * s.vote(x)).sum();
        Label::from_bool(score >= 0.0)
    }

    pub(crate) fn predict_row(&self, x: &[f64]) -> Label {
        self.predict_staged(x, self.stumps.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_perfect_stump_stops_training() {
        let x = Matrix::from_rows(&[[0.0], [1.0], [2.0], [3.0]]).unwrap();
        let y = [
            Label::Negative,
            Label::Negative,
            Label::Positive,
            Label::Positive,
        ];
        let ab = AdaBoost::fit(&x, &y, 50);
        assert_eq!(ab.n_rounds(), 1);
        assert_eq!(ab.predict_row(&[1.4]), Label::Negative);
        assert_eq!(ab.predict_row(&[1.6]), Label::Positive);
    }

    #[test]
    fn interval_needs_several_stumps() {
        // positives inside [3, 6]: no single stump separates them
        let rows: Vec<[f64; 1]> = (0..10).map(|i| [i as f64]).collect();
        let y: Vec<Label> = (0..10)
            .map(|i| Label::from_bool((3..=6).contains(&i)))
            .collect();
        let x = Matrix::from_rows(&rows).unwrap();
        let ab = AdaBoost::fit(&x, &y, 50);
        assert!(ab.n_rounds() > 1);
        for (row, &label) in x.rows().zip(&y) {
            assert_eq!(ab.predict_row(row), label);
        }
    }

    #[test]
    fn constant_features_fall_back_to_prior() {
        let x = Matrix::from_rows(&[[1.0], [1.0], [1.0]]).unwrap();
        let y = [Label::Negative, Label::Positive, Label::Negative];
        let ab = AdaBoost::fit(&x, &y, 10);
        assert_eq!(ab.predict_row(&[1.0]), Label::Negative);
    }

    #[test]
    fn training_error_never_rises_on_separable_data() {
        use rand::Rng;
        // positives fill the quadrant x0 > 0.3, x1 > 0.3
        let mut r = crate::rng::seeded(21);
        let rows: Vec<[f64; 2]> = (0..60).map(|_| [r.gen(), r.gen()]).collect();
        let y: Vec<Label> = rows
            .iter()
            .map(|p| Label::from_bool(p[0] > 0.3 && p[1] > 0.3))
            .collect();
        let x = Matrix::from_rows(&rows).unwrap();
        let ab = AdaBoost::fit(&x, &y, 50);
        assert!(ab.n_rounds() >= 10);
        let errors: Vec<usize> = (1..=10)
            .map(|t| {
                x.rows()
                    .zip(&y)
                    .filter(|(row, &l)| ab.predict_staged(row, t) != l)
                    .count()
            })
            .collect();
        assert!(errors.windows(2).all(|w| w[1] <= w[0]), "{errors:?}");
        assert_eq!(errors[9], 0);
    }
}
