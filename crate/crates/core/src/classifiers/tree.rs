use crate::data::{Label, Matrix};

use super::majority;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Settings {
    pub min_samples_split: usize,
    pub max_depth: Option<usize>,
}

#[derive(Clone, Debug)]
enum Node {
    Leaf(Label),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// CART classification tree with Gini impurity.
///
/// Thresholds are midpoints between consecutive distinct values; rows with
/// `x[feature] <= threshold` go left. Growth stops when a node is pure, holds
/// fewer than `min_samples_split` rows, reaches `max_depth`, or has no
/// distinct values left to split on. No pruning.
#[derive(Clone, Debug)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

#[derive(Clone, Copy)]
struct Candidate {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

fn gini(pos: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = pos as f64 / total as f64;
    2.0 * p * (1.0 - p)
}

/// Recursive builder shared with the random forest; `choose_features`
/// yields, in ascending order, the columns examined at each node.
pub(crate) struct Grower<'a, F: FnMut() -> Vec<usize>> {
    x: &'a Matrix,
    y: &'a [Label],
    settings: Settings,
    choose_features: F,
    nodes: Vec<Node>,
}

impl<'a, F: FnMut() -> Vec<usize>> Grower<'a, F> {
    pub(crate) fn new(
        x: &'a Matrix,
        y: &'a [Label],
        settings: Settings,
        choose_features: F,
    ) -> Self {
        Grower {
            x,
            y,
            settings,
            choose_features,
            nodes: Vec::new(),
        }
    }

    pub(crate) fn grow(mut self, rows: &mut [usize]) -> DecisionTree {
        self.build(rows, 0);
        DecisionTree { nodes: self.nodes }
    }

    fn best_split(&mut self, rows: &[usize]) -> Option<Candidate> {
        let n = rows.len();
        let total_pos = rows
            .iter()
            .filter(|&&i| self.y[i] == Label::Positive)
            .count();
        let mut best: Option<Candidate> = None;
        let mut pairs: Vec<(f64, bool)> = Vec::with_capacity(n);
        for feature in (self.choose_features)() {
            pairs.clear();
            pairs.extend(
                rows.iter()
                    .map(|&i| (self.x.get(i, feature), self.y[i] == Label::Positive)),
            );
            pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
            let mut left_pos = 0;
            for k in 0..n - 1 {
                left_pos += usize::from(pairs[k].1);
                if pairs[k].0 == pairs[k + 1].0 {
                    continue;
                }
                let nl = k + 1;
                let nr = n - nl;
                let impurity = (nl as f64 * gini(left_pos, nl)
                    + nr as f64 * gini(total_pos - left_pos, nr))
                    / n as f64;
                if best.is_none_or(|b| impurity < b.impurity) {
                    best = Some(Candidate {
                        feature,
                        threshold: 0.5 * (pairs[k].0 + pairs[k + 1].0),
                        impurity,
                    });
                }
            }
        }
        best
    }

    fn leaf(&mut self, label: Label) -> usize {
        self.nodes.push(Node::Leaf(label));
        self.nodes.len() - 1
    }

    fn build(&mut self, rows: &mut [usize], depth: usize) -> usize {
        let labels: Vec<Label> = rows.iter().map(|&i| self.y[i]).collect();
        let label = majority(&labels);
        let pure = labels.iter().all(|&l| l == labels[0]);
        if pure
            || rows.len() < self.settings.min_samples_split
            || self.settings.max_depth.is_some_and(|m| depth >= m)
        {
            return self.leaf(label);
        }
        let Some(split) = self.best_split(rows) else {
            return self.leaf(label);
        };
        let x = self.x;
        let mut cut = 0;
        for k in 0..rows.len() {
            if x.get(rows[k], split.feature) <= split.threshold {
                rows.swap(cut, k);
                cut += 1;
            }
        }
        if cut == 0 || cut == rows.len() {
            return self.leaf(label);
        }
        let slot = self.nodes.len();
        self.nodes.push(Node::Leaf(label));
        let (left_rows, right_rows) = rows.split_at_mut(cut);
        left_rows.sort_unstable();
        right_rows.sort_unstable();
        let left = self.build(left_rows, depth + 1);
        let right = self.build(right_rows, depth + 1);
        self.nodes[slot] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        slot
    }
}

impl DecisionTree {
    pub(crate) fn fit(x: &Matrix, y: &[Label], settings: Settings) -> Self {
        let all: Vec<usize> = (0..x.n_cols()).collect();
        let mut rows: Vec<usize> = (0..y.len()).collect();
        Grower::new(x, y, settings, || all.clone()).grow(&mut rows)
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_splits(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Split { .. }))
            .count()
    }

    pub(crate) fn predict_row(&self, x: &[f64]) -> Label {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf(label) => return label,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[feature] <= threshold { left } else { right },
            }
        }
    }
}
