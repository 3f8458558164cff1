use rand::seq::index::sample;
use rand::Rng;

use crate::data::{Label, Matrix};
use crate::rng;

use super::tree::{self, DecisionTree, Grower};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Settings {
    pub n_trees: usize,
    pub bootstrap: bool,
    /// `None` means `ceil(sqrt(d))`.
    pub max_features: Option<usize>,
    pub min_samples_split: usize,
}

/// Bagged CART trees with per-split feature subsampling and majority vote.
///
/// Tree `t` draws from its own stream seeded by `(seed, t)`. When every
/// feature is examined at each split, feature sampling consumes no
/// randomness, so a one-tree forest without bootstrap equals a
/// [`DecisionTree`].
#[derive(Clone, Debug)]
pub struct RandomForest {
    trees: Vec<DecisionTree>,
}

impl RandomForest {
    pub(crate) fn fit(x: &Matrix, y: &[Label], s: Settings, seed: u64) -> Self {
        let n = y.len();
        let d = x.n_cols();
        let m = s
            .max_features
            .unwrap_or_else(|| (d as f64).sqrt().ceil() as usize)
            .clamp(1, d.max(1));
        let tree_settings = tree::Settings {
            min_samples_split: s.min_samples_split,
            max_depth: None,
        };
        let trees = (0..s.n_trees)
            .map(|t| {
                let mut r = rng::seeded(rng::derive_seed(seed, &[t as u64]));
                let mut rows: Vec<usize> = if s.bootstrap {
                    let mut rows: Vec<usize> = (0..n).map(|_| r.gen_range(0..n)).collect();
                    rows.sort_unstable();
                    rows
                } else {
                    (0..n).collect()
                };
                let all: Vec<usize> = (0..d).collect();
                let choose = || {
                    if m >= d {
                        all.clone()
                    } else {
                        let mut picked = sample(&mut r, d, m).into_vec();
                        picked.sort_unstable();
                        picked
                    }
                };
                Grower::new(x, y, tree_settings, choose).grow(&mut rows)
            })
            .collect();
        RandomForest { trees }
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub(crate) fn predict_row(&self, x: &[f64]) -> Label {
        let votes: Vec<Label> = self.trees.iter().map(|t| t.predict_row(x)).collect();
        super::majority(&votes)
    }
}
