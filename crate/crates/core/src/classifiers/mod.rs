//! Nine binary classifiers behind a single train/predict interface.
//!
//! Every learner is written from first principles and is a deterministic
//! function of its configuration (including the seed) and the training set.
//! Hyperparameters are carried in a flat name→value map so experiments can
//! override them from a config file; each kind has a fixed table of known
//! names with defaults and unknown names are rejected.

mod adaboost;
mod forest;
mod knn;
mod lda;
mod logistic;
mod mlp;
mod naive_bayes;
mod svm;
mod tree;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Label, Matrix};
use crate::error::{Error, Result};

pub use adaboost::AdaBoost;
pub use forest::RandomForest;
pub use knn::Knn;
pub use lda::Lda;
pub use logistic::LogisticRegression;
pub use mlp::Mlp;
pub use naive_bayes::GaussianNb;
pub use svm::LinearSvm;
pub use tree::DecisionTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    Knn,
    NaiveBayes,
    Lda,
    LogisticRegression,
    DecisionTree,
    RandomForest,
    AdaBoost,
    LinearSvm,
    Mlp,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 9] = [
        ClassifierKind::Knn,
        ClassifierKind::NaiveBayes,
        ClassifierKind::Lda,
        ClassifierKind::LogisticRegression,
        ClassifierKind::DecisionTree,
        ClassifierKind::RandomForest,
        ClassifierKind::AdaBoost,
        ClassifierKind::LinearSvm,
        ClassifierKind::Mlp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::Knn => "knn",
            ClassifierKind::NaiveBayes => "naive_bayes",
            ClassifierKind::Lda => "lda",
            ClassifierKind::LogisticRegression => "logistic_regression",
            ClassifierKind::DecisionTree => "decision_tree",
            ClassifierKind::RandomForest => "random_forest",
            ClassifierKind::AdaBoost => "adaboost",
            ClassifierKind::LinearSvm => "linear_svm",
            ClassifierKind::Mlp => "mlp",
        }
    }

    /// Stable numeric tag, used when deriving per-classifier seeds.
    pub fn tag(self) -> u64 {
        ClassifierKind::ALL.iter().position(|&k| k == self).unwrap() as u64 + 1
    }

    /// Whether training requires both classes to be present.
    fn needs_both_classes(self) -> bool {
        matches!(
            self,
            ClassifierKind::Lda
                | ClassifierKind::LogisticRegression
                | ClassifierKind::LinearSvm
                | ClassifierKind::Mlp
        )
    }

    /// Known hyperparameters and their defaults.
    pub fn default_hyperparams(self) -> &'static [(&'static str, f64)] {
        match self {
            ClassifierKind::Knn => &[("k", 5.0)],
            ClassifierKind::NaiveBayes => &[("var_smoothing", 1e-9)],
            ClassifierKind::Lda => &[("ridge", 1e-6)],
            ClassifierKind::LogisticRegression => &[
                ("learning_rate", 0.1),
                ("iterations", 1000.0),
                ("l2", 1e-4),
                ("threshold", 0.5),
            ],
            // max_depth = 0 means unlimited.
            ClassifierKind::DecisionTree => &[("min_samples_split", 2.0), ("max_depth", 0.0)],
            // max_features = 0 means ceil(sqrt(d)).
            ClassifierKind::RandomForest => &[
                ("n_trees", 100.0),
                ("bootstrap", 1.0),
                ("max_features", 0.0),
                ("min_samples_split", 2.0),
            ],
            ClassifierKind::AdaBoost => &[("n_rounds", 50.0)],
            ClassifierKind::LinearSvm => &[("c", 1.0), ("epochs", 1000.0)],
            ClassifierKind::Mlp => &[
                ("hidden_layers", 5.0),
                ("hidden_units", 10.0),
                ("learning_rate", 0.1),
                ("epochs", 200.0),
                ("init_range", 0.5),
            ],
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kind = match s.trim().to_ascii_lowercase().as_str() {
            "knn" => ClassifierKind::Knn,
            "nb" | "naive_bayes" | "naivebayes" => ClassifierKind::NaiveBayes,
            "lda" => ClassifierKind::Lda,
            "lr" | "logistic_regression" | "logisticregression" => {
                ClassifierKind::LogisticRegression
            }
            "dt" | "decision_tree" | "decisiontree" => ClassifierKind::DecisionTree,
            "rf" | "random_forest" | "randomforest" => ClassifierKind::RandomForest,
            "ab" | "adaboost" => ClassifierKind::AdaBoost,
            "svm" | "linear_svm" | "linearsvm" => ClassifierKind::LinearSvm,
            "ann" | "mlp" => ClassifierKind::Mlp,
            other => return Err(Error::config(format!("unknown classifier {other:?}"))),
        };
        Ok(kind)
    }
}

/// A classifier kind plus its hyperparameters and seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    pub kind: ClassifierKind,
    hyperparams: BTreeMap<String, f64>,
    pub seed: u64,
}

impl ClassifierConfig {
    pub fn new(kind: ClassifierKind) -> Self {
        let hyperparams = kind
            .default_hyperparams()
            .iter()
            .map(|&(k, v)| (k.to_string(), v))
            .collect();
        ClassifierConfig {
            kind,
            hyperparams,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Builder form of [`ClassifierConfig::set`].
    pub fn with(mut self, name: &str, value: f64) -> Result<Self> {
        self.set(name, value)?;
        Ok(self)
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        match self.hyperparams.get_mut(name) {
            Some(slot) => {
                check_hyperparam(self.kind, name, value)?;
                *slot = value;
                Ok(())
            }
            None => Err(Error::config(format!(
                "unknown hyperparameter {name:?} for {}",
                self.kind
            ))),
        }
    }

    pub fn get(&self, name: &str) -> f64 {
        self.hyperparams[name]
    }

    fn get_count(&self, name: &str) -> usize {
        self.get(name) as usize
    }

    pub fn hyperparams(&self) -> &BTreeMap<String, f64> {
        &self.hyperparams
    }
}

fn check_hyperparam(kind: ClassifierKind, name: &str, value: f64) -> Result<()> {
    let bad = |why: &str| Err(Error::config(format!("{kind}.{name} = {value}: {why}")));
    if !value.is_finite() {
        return bad("must be finite");
    }
    let integral = matches!(
        name,
        "k" | "iterations"
            | "min_samples_split"
            | "max_depth"
            | "n_trees"
            | "max_features"
            | "n_rounds"
            | "epochs"
            | "hidden_layers"
            | "hidden_units"
            | "bootstrap"
    );
    if integral && (value < 0.0 || value.fract() != 0.0) {
        return bad("must be a non-negative integer");
    }
    match name {
        "k" | "n_trees" | "hidden_units" | "n_rounds" if value < 1.0 => bad("must be at least 1"),
        "min_samples_split" if value < 2.0 => bad("must be at least 2"),
        "bootstrap" if value > 1.0 => bad("must be 0 or 1"),
        "threshold" if !(0.0..=1.0).contains(&value) => bad("must lie in [0, 1]"),
        "learning_rate" | "c" | "init_range" if value <= 0.0 => bad("must be positive"),
        "var_smoothing" | "ridge" | "l2" if value < 0.0 => bad("must be non-negative"),
        _ => Ok(()),
    }
}

#[derive(Clone, Debug)]
enum Params {
    Knn(Knn),
    NaiveBayes(GaussianNb),
    Lda(Lda),
    LogisticRegression(LogisticRegression),
    DecisionTree(DecisionTree),
    RandomForest(RandomForest),
    AdaBoost(AdaBoost),
    LinearSvm(LinearSvm),
    Mlp(Mlp),
}

/// A fitted classifier. Immutable and safe to share across threads.
#[derive(Clone, Debug)]
pub struct TrainedModel {
    kind: ClassifierKind,
    n_features: usize,
    params: Params,
}

impl TrainedModel {
    pub fn kind(&self) -> ClassifierKind {
        self.kind
    }

    pub fn n_features_expected(&self) -> usize {
        self.n_features
    }

    pub fn predict(&self, features: &Matrix) -> Result<Vec<Label>> {
        if features.n_cols() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                actual: features.n_cols(),
            });
        }
        Ok(features.rows().map(|x| self.predict_row(x)).collect())
    }

    fn predict_row(&self, x: &[f64]) -> Label {
        match &self.params {
            Params::Knn(m) => m.predict_row(x),
            Params::NaiveBayes(m) => m.predict_row(x),
            Params::Lda(m) => m.predict_row(x),
            Params::LogisticRegression(m) => m.predict_row(x),
            Params::DecisionTree(m) => m.predict_row(x),
            Params::RandomForest(m) => m.predict_row(x),
            Params::AdaBoost(m) => m.predict_row(x),
            Params::LinearSvm(m) => m.predict_row(x),
            Params::Mlp(m) => m.predict_row(x),
        }
    }

    pub fn as_knn(&self) -> Option<&Knn> {
        match &self.params {
            Params::Knn(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_naive_bayes(&self) -> Option<&GaussianNb> {
        match &self.params {
            Params::NaiveBayes(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_decision_tree(&self) -> Option<&DecisionTree> {
        match &self.params {
            Params::DecisionTree(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_adaboost(&self) -> Option<&AdaBoost> {
        match &self.params {
            Params::AdaBoost(m) => Some(m),
            _ => None,
        }
    }
}

pub fn train_classifier(cfg: &ClassifierConfig, train: &Dataset) -> Result<TrainedModel> {
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    for &(name, _) in cfg.kind.default_hyperparams() {
        check_hyperparam(cfg.kind, name, cfg.get(name))?;
    }
    if cfg.kind.needs_both_classes()
        && (train.class_count(Label::Positive) == 0 || train.class_count(Label::Negative) == 0)
    {
        return Err(Error::DegenerateTrainingSet(format!(
            "{} needs samples of both classes",
            cfg.kind
        )));
    }

    let x = train.features();
    let y = train.labels();
    let params = match cfg.kind {
        ClassifierKind::Knn => Params::Knn(Knn::fit(x, y, cfg.get_count("k"))),
        ClassifierKind::NaiveBayes => {
            Params::NaiveBayes(GaussianNb::fit(x, y, cfg.get("var_smoothing")))
        }
        ClassifierKind::Lda => Params::Lda(Lda::fit(x, y, cfg.get("ridge"))?),
        ClassifierKind::LogisticRegression => Params::LogisticRegression(LogisticRegression::fit(
            x,
            y,
            logistic::Settings {
                learning_rate: cfg.get("learning_rate"),
                iterations: cfg.get_count("iterations"),
                l2: cfg.get("l2"),
                threshold: cfg.get("threshold"),
            },
        )),
        ClassifierKind::DecisionTree => Params::DecisionTree(DecisionTree::fit(
            x,
            y,
            tree::Settings {
                min_samples_split: cfg.get_count("min_samples_split"),
                max_depth: match cfg.get_count("max_depth") {
                    0 => None,
                    d => Some(d),
                },
            },
        )),
        ClassifierKind::RandomForest => Params::RandomForest(RandomForest::fit(
            x,
            y,
            forest::Settings {
                n_trees: cfg.get_count("n_trees"),
                bootstrap: cfg.get("bootstrap") != 0.0,
                max_features: match cfg.get_count("max_features") {
                    0 => None,
                    m => Some(m),
                },
                min_samples_split: cfg.get_count("min_samples_split"),
            },
            cfg.seed,
        )),
        ClassifierKind::AdaBoost => {
            Params::AdaBoost(AdaBoost::fit(x, y, cfg.get_count("n_rounds")))
        }
        ClassifierKind::LinearSvm => {
            Params::LinearSvm(LinearSvm::fit(x, y, cfg.get("c"), cfg.get_count("epochs")))
        }
        ClassifierKind::Mlp => Params::Mlp(Mlp::fit(
            x,
            y,
            mlp::Settings {
                hidden_layers: cfg.get_count("hidden_layers"),
                hidden_units: cfg.get_count("hidden_units"),
                learning_rate: cfg.get("learning_rate"),
                epochs: cfg.get_count("epochs"),
                init_range: cfg.get("init_range"),
            },
            cfg.seed,
        )),
    };
    Ok(TrainedModel {
        kind: cfg.kind,
        n_features: x.n_cols(),
        params,
    })
}

pub fn predict(model: &TrainedModel, features: &Matrix) -> Result<Vec<Label>> {
    model.predict(features)
}

/// Majority label of a slice; ties resolve to positive.
pub(crate) fn majority(labels: &[Label]) -> Label {
    let pos = labels.iter().filter(|&&l| l == Label::Positive).count();
    Label::from_bool(2 * pos >= labels.len())
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_round_trips_through_names() {
        for kind in ClassifierKind::ALL {
            assert_eq!(kind.name().parse::<ClassifierKind>().unwrap(), kind);
        }
        assert_eq!(
            "ANN".parse::<ClassifierKind>().unwrap(),
            ClassifierKind::Mlp
        );
        assert_eq!(
            "SVM".parse::<ClassifierKind>().unwrap(),
            ClassifierKind::LinearSvm
        );
        assert!("xgboost".parse::<ClassifierKind>().is_err());
    }

    #[test]
    fn defaults_match_documented_values() {
        let knn = ClassifierConfig::new(ClassifierKind::Knn);
        assert_eq!(knn.get("k"), 5.0);
        let rf = ClassifierConfig::new(ClassifierKind::RandomForest);
        assert_eq!(rf.get("n_trees"), 100.0);
        let mlp = ClassifierConfig::new(ClassifierKind::Mlp);
        assert_eq!(mlp.get("hidden_layers"), 5.0);
        assert_eq!(mlp.get("hidden_units"), 10.0);
        let ab = ClassifierConfig::new(ClassifierKind::AdaBoost);
        assert_eq!(ab.get("n_rounds"), 50.0);
    }

    #[test]
    fn unknown_and_invalid_hyperparams_are_rejected() {
        let mut cfg = ClassifierConfig::new(ClassifierKind::Knn);
        assert!(cfg.set("depth", 3.0).is_err());
        assert!(cfg.set("k", 0.0).is_err());
        assert!(cfg.set("k", 2.5).is_err());
        cfg.set("k", 3.0).unwrap();
        assert_eq!(cfg.get("k"), 3.0);
        assert!(ClassifierConfig::new(ClassifierKind::LinearSvm)
            .with("c", -1.0)
            .is_err());
    }

    #[test]
    fn training_rejects_empty_and_degenerate_sets() {
        let empty = Dataset::with_default_names(Matrix::empty(2), vec![]).unwrap();
        for kind in ClassifierKind::ALL {
            let err = train_classifier(&ClassifierConfig::new(kind), &empty).unwrap_err();
            assert!(matches!(err, Error::EmptyDataset), "{kind}");
        }
        let one_class = Dataset::with_default_names(
            Matrix::from_rows(&[[0.0], [1.0], [2.0]]).unwrap(),
            vec![Label::Negative; 3],
        )
        .unwrap();
        for kind in ClassifierKind::ALL {
            let res = train_classifier(&ClassifierConfig::new(kind), &one_class);
            if kind.needs_both_classes() {
                assert!(
                    matches!(res, Err(Error::DegenerateTrainingSet(_))),
                    "{kind}"
                );
            } else {
                let model = res.unwrap();
                let pred = model
                    .predict(&Matrix::from_rows(&[[0.5], [9.0]]).unwrap())
                    .unwrap();
                assert_eq!(pred, vec![Label::Negative; 2], "{kind}");
            }
        }
    }

    #[test]
    fn majority_breaks_ties_toward_positive() {
        assert_eq!(
            majority(&[Label::Positive, Label::Negative]),
            Label::Positive
        );
        assert_eq!(
            majority(&[Label::Negative, Label::Negative, Label::Positive]),
            Label::Negative
        );
    }

    #[test]
    fn sigmoid_is_stable_at_extremes() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(-800.0).is_finite());
        assert!((sigmoid(800.0) - 1.0).abs() < 1e-12);
    }

    fn two_blobs(n: usize, seed: u64) -> Dataset {
        use rand::Rng;
        let mut r = crate::rng::seeded(seed);
        let labels: Vec<Label> = (0..n).map(|i| Label::from_bool(i % 2 == 0)).collect();
        let rows: Vec<[f64; 3]> = labels
            .iter()
            .map(|l| {
                let c = 0.3 + 0.4 * l.as_unit();
                [
                    c + r.gen_range(-0.2..0.2),
                    c + r.gen_range(-0.2..0.2),
                    r.gen(),
                ]
            })
            .collect();
        Dataset::with_default_names(Matrix::from_rows(&rows).unwrap(), labels).unwrap()
    }

    fn fast(kind: ClassifierKind) -> ClassifierConfig {
        let cfg = ClassifierConfig::new(kind).with_seed(5);
        match kind {
            ClassifierKind::RandomForest => cfg.with("n_trees", 10.0).unwrap(),
            ClassifierKind::Mlp => cfg.with("epochs", 20.0).unwrap(),
            _ => cfg,
        }
    }

    #[test]
    fn empty_query_gives_no_labels() {
        let ds = two_blobs(20, 1);
        for kind in ClassifierKind::ALL {
            let model = train_classifier(&fast(kind), &ds).unwrap();
            assert_eq!(model.n_features_expected(), 3);
            assert!(
                model.predict(&Matrix::empty(3)).unwrap().is_empty(),
                "{kind}"
            );
            let err = predict(&model, &Matrix::zeros(1, 2)).unwrap_err();
            assert!(
                matches!(
                    err,
                    Error::DimensionMismatch {
                        expected: 3,
                        actual: 2
                    }
                ),
                "{kind}"
            );
        }
    }

    #[test]
    fn training_is_deterministic() {
        let ds = two_blobs(40, 2);
        let query = two_blobs(30, 3);
        for kind in ClassifierKind::ALL {
            let a = train_classifier(&fast(kind), &ds)
                .unwrap()
                .predict(query.features())
                .unwrap();
            let b = train_classifier(&fast(kind), &ds)
                .unwrap()
                .predict(query.features())
                .unwrap();
            assert_eq!(a, b, "{kind}");
        }
    }

    #[test]
    fn well_separated_blobs_are_learned() {
        let ds = two_blobs(60, 4);
        let query = two_blobs(40, 5);
        for kind in ClassifierKind::ALL {
            if kind == ClassifierKind::Mlp {
                continue;
            }
            let pred = train_classifier(&fast(kind), &ds)
                .unwrap()
                .predict(query.features())
                .unwrap();
            let correct = pred
                .iter()
                .zip(query.labels())
                .filter(|(a, b)| a == b)
                .count();
            assert!(correct >= 36, "{kind}: {correct}/40");
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(16))]
        #[test]
        fn predictions_use_training_labels(seed in 0u64..1000, positive_only in proptest::bool::ANY) {
            let mut ds = two_blobs(12, seed);
            if positive_only {
                let keep: Vec<usize> = (0..12).filter(|i| i % 2 == 0).collect();
                ds = ds.subset(&keep);
            }
            let query = two_blobs(10, seed + 1);
            for kind in ClassifierKind::ALL {
                match train_classifier(&fast(kind), &ds) {
                    Ok(model) => {
                        let pred = model.predict(query.features()).unwrap();
                        proptest::prop_assert_eq!(pred.len(), 10);
                        for l in pred {
                            proptest::prop_assert!(ds.labels().contains(&l), "{} predicted {}", kind, l);
                        }
                    }
                    Err(e) => {
                        proptest::prop_assert!(positive_only && kind.needs_both_classes(), "{}: {}", kind, e);
                    }
                }
            }
        }
    }
}
