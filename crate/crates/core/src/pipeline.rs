//! End-to-end wrapper feature-selection experiments.
//!
//! A run loads a dataset, splits it 60:40 with class stratification, fits
//! a min-max scaler on the training part only, then for every requested
//! classifier evaluates the held-out test split twice: on all features, and
//! on the subset chosen by an optimizer whose cost is the cross-validated
//! error of that classifier on the training part.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{train_classifier, ClassifierConfig, ClassifierKind, TrainedModel};
use crate::data::{self, Dataset, FeatureMask, Label, ScalerParams};
use crate::error::{Error, Result};
use crate::evaluation::{k_fold_cv, MetricsReport};
use crate::metaheuristics::{
    ba_optimize, binarize_position, ica_optimize, BaConfig, IcaConfig, OptimizeResult, Position,
};
use crate::rng::{derive_seed, hash_bits};

/// Cost of a mask that selects no feature; worse than any feasible mask.
pub const EMPTY_MASK_COST: f64 = 2.0;

/// Cost of a feasible mask whose cross-validation could not be completed.
pub const FAILED_FIT_COST: f64 = 1.0;

/// Decimal places kept for every reported metric.
pub const METRIC_DECIMALS: i32 = 6;

const SPLIT_STREAM: u64 = 1;
const CLASSIFIER_STREAM: u64 = 2;
const OPTIMIZER_STREAM: u64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Optimizer {
    Ica,
    Ba,
    None,
}

impl Optimizer {
    pub fn name(self) -> &'static str {
        match self {
            Optimizer::Ica => "ica",
            Optimizer::Ba => "ba",
            Optimizer::None => "none",
        }
    }
}

impl fmt::Display for Optimizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Optimizer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ica" => Ok(Optimizer::Ica),
            "ba" | "bat" => Ok(Optimizer::Ba),
            "none" => Ok(Optimizer::None),
            other => Err(Error::config(format!("unknown optimizer {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::config(format!("unknown output format {other:?}"))),
        }
    }
}

/// Parse a comma-separated classifier list, or `all`.
pub fn parse_classifier_list(s: &str) -> Result<Vec<ClassifierKind>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(ClassifierKind::ALL.to_vec());
    }
    let mut kinds = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let kind: ClassifierKind = part.parse()?;
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    Ok(kinds)
}

/// Everything that determines a run. The `seed` fields of `ica` and `ba`
/// are ignored: each classifier's search gets a seed derived from `seed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub data_path: PathBuf,
    pub optimizer: Optimizer,
    pub classifiers: Vec<ClassifierKind>,
    pub split_fraction: f64,
    pub cv_k: usize,
    pub seed: u64,
    pub ica: IcaConfig,
    pub ba: BaConfig,
    pub classifier_overrides: BTreeMap<ClassifierKind, ClassifierConfig>,
    /// Weight of the selected-feature fraction added to the CV error.
    pub fitness_feature_penalty: f64,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    /// Store per-row wall-clock time. Off by default so that reports are
    /// byte-stable across runs.
    pub record_timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            data_path: PathBuf::new(),
            optimizer: Optimizer::Ba,
            classifiers: ClassifierKind::ALL.to_vec(),
            split_fraction: 0.6,
            cv_k: 4,
            seed: 0,
            ica: IcaConfig::default(),
            ba: BaConfig::default(),
            classifier_overrides: BTreeMap::new(),
            fitness_feature_penalty: 0.0,
            output_path: None,
            output_format: OutputFormat::Json,
            record_timing: false,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::config(format!("{key}: cannot parse {value:?}")))
}

fn parse_flag(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(Error::config(format!(
            "{key}: expected a boolean, got {value:?}"
        ))),
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return Err(Error::config(format!(
                "split must lie strictly between 0 and 1, got {}",
                self.split_fraction
            )));
        }
        if self.cv_k < 2 {
            return Err(Error::config(format!(
                "cv_k must be at least 2, got {}",
                self.cv_k
            )));
        }
        if self.classifiers.is_empty() {
            return Err(Error::config("no classifiers selected"));
        }
        if !(self.fitness_feature_penalty >= 0.0 && self.fitness_feature_penalty.is_finite()) {
            return Err(Error::config(format!(
                "fitness_feature_penalty must be non-negative, got {}",
                self.fitness_feature_penalty
            )));
        }
        match self.optimizer {
            Optimizer::Ica => self.ica.validate(),
            Optimizer::Ba => self.ba.validate(),
            Optimizer::None => Ok(()),
        }
    }

    /// Set one option by key. Keys are the top-level field names (with
    /// `data`, `split`, `output` and `format` as short forms), `ica.<field>`,
    /// `ba.<field>`, or `<classifier>.<hyperparameter>`.
    pub fn apply_override(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim();
        let v = value.trim();
        match key {
            "data" | "data_path" => self.data_path = PathBuf::from(v),
            "optimizer" => self.optimizer = v.parse()?,
            "classifiers" => self.classifiers = parse_classifier_list(v)?,
            "split" | "split_fraction" => self.split_fraction = parse_value(key, v)?,
            "cv_k" | "cv-k" => self.cv_k = parse_value(key, v)?,
            "seed" => self.seed = parse_value(key, v)?,
            "fitness_feature_penalty" => self.fitness_feature_penalty = parse_value(key, v)?,
            "output" | "output_path" => self.output_path = Some(PathBuf::from(v)),
            "format" | "output_format" => self.output_format = v.parse()?,
            "record_timing" | "timing" => self.record_timing = parse_flag(key, v)?,
            _ => {
                let Some((scope, field)) = key.split_once('.') else {
                    return Err(Error::config(format!("unknown option {key:?}")));
                };
                match scope {
                    "ica" => self.set_ica(field, v)?,
                    "ba" => self.set_ba(field, v)?,
                    _ => {
                        let kind: ClassifierKind = scope.parse()?;
                        let value: f64 = parse_value(key, v)?;
                        self.classifier_overrides
                            .entry(kind)
                            .or_insert_with(|| ClassifierConfig::new(kind))
                            .set(field, value)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn set_ica(&mut self, field: &str, v: &str) -> Result<()> {
        let key = format!("ica.{field}");
        let c = &mut self.ica;
        match field {
            "n_pop" => c.n_pop = parse_value(&key, v)?,
            "n_imp" => c.n_imp = parse_value(&key, v)?,
            "max_it" => c.max_it = parse_value(&key, v)?,
            "beta" => c.beta = parse_value(&key, v)?,
            "zeta" => c.zeta = parse_value(&key, v)?,
            "phi" => c.phi = parse_value(&key, v)?,
            "revolution_rate" => c.revolution_rate = parse_value(&key, v)?,
            _ => return Err(Error::config(format!("unknown option {key:?}"))),
        }
        Ok(())
    }

    fn set_ba(&mut self, field: &str, v: &str) -> Result<()> {
        let key = format!("ba.{field}");
        let c = &mut self.ba;
        match field {
            "n_pop" => c.n_pop = parse_value(&key, v)?,
            "max_it" => c.max_it = parse_value(&key, v)?,
            "loudness_init" | "a" => c.loudness_init = parse_value(&key, v)?,
            "pulse_rate_init" | "r" => c.pulse_rate_init = parse_value(&key, v)?,
            "f_min" => c.f_min = parse_value(&key, v)?,
            "f_max" => c.f_max = parse_value(&key, v)?,
            "alpha" => c.alpha = parse_value(&key, v)?,
            "gamma" => c.gamma = parse_value(&key, v)?,
            _ => return Err(Error::config(format!("unknown option {key:?}"))),
        }
        Ok(())
    }

    /// Apply a flat `key = value` file. Blank lines and lines starting with
    /// `#` are skipped.
    pub fn apply_config_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::config(format!(
                    "config line {}: expected key = value",
                    n + 1
                )));
            };
            self.apply_override(key, value)
                .map_err(|e| Error::config(format!("config line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn apply_config_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_config_text(&text)
    }

    /// Classifier settings used for `kind`, with its derived seed.
    pub fn classifier_config(&self, kind: ClassifierKind) -> ClassifierConfig {
        self.classifier_overrides
            .get(&kind)
            .cloned()
            .unwrap_or_else(|| ClassifierConfig::new(kind))
            .with_seed(derive_seed(self.seed, &[CLASSIFIER_STREAM, kind.tag()]))
    }

    fn optimizer_seed(&self, kind: ClassifierKind) -> u64 {
        derive_seed(self.seed, &[OPTIMIZER_STREAM, kind.tag()])
    }
}

/// Wrapper cost of `mask`: one minus the mean k-fold accuracy of `cfg`
/// trained on the selected columns of `train`. The fold seed is derived
/// from `seed`, the classifier kind and the mask, so the cost is a pure
/// function of its arguments.
///
/// # Panics
///
/// If the mask length differs from the number of training features.
pub fn fs_fitness(
    mask: &FeatureMask,
    cfg: &ClassifierConfig,
    train: &Dataset,
    cv_k: usize,
    seed: u64,
) -> f64 {
    assert_eq!(
        mask.len(),
        train.n_features(),
        "mask length must match feature count"
    );
    if mask.selects_none() {
        return EMPTY_MASK_COST;
    }
    let fold_seed = derive_seed(seed, &[cfg.kind.tag(), hash_bits(mask.bits())]);
    data::apply_mask(train, mask)
        .and_then(|masked| k_fold_cv(cfg, &masked, cv_k, fold_seed))
        .map_or(FAILED_FIT_COST, |cv| 1.0 - cv.ocv_accuracy)
}

/// Search feature masks for `clf_cfg` on `train` with the chosen
/// optimizer. The returned mask always selects at least one feature.
pub fn run_wrapper_fs(
    opt: Optimizer,
    clf_cfg: &ClassifierConfig,
    train: &Dataset,
    exp_cfg: &ExperimentConfig,
) -> Result<OptimizeResult> {
    for label in Label::BOTH {
        if train.class_count(label) == 0 {
            return Err(Error::DegenerateTrainingSet(format!(
                "no {label} samples in the training split"
            )));
        }
    }
    let d = train.n_features();
    let penalty = exp_cfg.fitness_feature_penalty;
    let mut cache: HashMap<FeatureMask, f64> = HashMap::new();
    let cost_fn = |p: &Position| {
        let mask = binarize_position(p);
        if let Some(&c) = cache.get(&mask) {
            return c;
        }
        let mut c = fs_fitness(&mask, clf_cfg, train, exp_cfg.cv_k, exp_cfg.seed);
        if penalty > 0.0 && !mask.selects_none() {
            c += penalty * mask.count_selected() as f64 / d as f64;
        }
        cache.insert(mask, c);
        c
    };
    let seed = exp_cfg.optimizer_seed(clf_cfg.kind);
    let mut result = match opt {
        Optimizer::Ica => ica_optimize(
            cost_fn,
            d,
            &IcaConfig {
                seed,
                ..exp_cfg.ica.clone()
            },
        )?,
        Optimizer::Ba => ba_optimize(
            cost_fn,
            d,
            &BaConfig {
                seed,
                ..exp_cfg.ba.clone()
            },
        )?,
        Optimizer::None => return Err(Error::config("feature selection needs an optimizer")),
    };
    if result.best_mask.selects_none() {
        result.best_mask = FeatureMask::all(d);
    }
    Ok(result)
}

/// Scaled train/test splits of one dataset plus the scaler fitted on the
/// training rows.
#[derive(Clone, Debug)]
pub struct PreparedData {
    pub train: Dataset,
    pub test: Dataset,
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub scaler: ScalerParams,
}

/// Split `ds` and scale both parts with a scaler fitted on the training
/// rows alone.
pub fn prepare_data(ds: &Dataset, split_fraction: f64, seed: u64) -> Result<PreparedData> {
    let (train_indices, test_indices) = data::stratified_split_indices(
        ds.labels(),
        split_fraction,
        derive_seed(seed, &[SPLIT_STREAM]),
    )?;
    let train_raw = ds.subset(&train_indices);
    let scaler = data::fit_scaler(&train_raw)?;
    Ok(PreparedData {
        train: data::transform(&train_raw, &scaler)?,
        test: data::transform(&ds.subset(&test_indices), &scaler)?,
        train_indices,
        test_indices,
        scaler,
    })
}

/// Train on the masked training split and score on the test split
/// projected by the same mask.
pub fn evaluate_with_mask(
    cfg: &ClassifierConfig,
    train: &Dataset,
    test: &Dataset,
    mask: &FeatureMask,
) -> Result<(TrainedModel, MetricsReport)> {
    let train = data::apply_mask(train, mask)?;
    let test = data::apply_mask(test, mask)?;
    let model = train_classifier(cfg, &train)?;
    let pred = model.predict(test.features())?;
    let metrics = MetricsReport::from_predictions(test.labels(), &pred)?;
    Ok((model, metrics))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    WithoutFs,
    WithFs,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::WithoutFs => "without_fs",
            Mode::WithFs => "with_fs",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Test-split result of one classifier in one mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub classifier: ClassifierKind,
    pub mode: Mode,
    /// Absent when the row failed.
    pub metrics: Option<MetricsReport>,
    pub mask: FeatureMask,
    pub selected_features: Vec<String>,
    pub n_selected: usize,
    /// Best cost per optimizer iteration; empty without feature selection.
    pub fitness_history: Vec<(usize, f64)>,
    pub best_fitness: Option<f64>,
    pub evaluations: usize,
    pub wall_clock_seconds: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub n_samples: usize,
    pub n_features: usize,
    pub n_positive: usize,
    pub n_negative: usize,
    pub n_train: usize,
    pub n_test: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub seed: u64,
    pub dataset: DatasetStats,
    /// Where the row metrics come from.
    pub evaluated_on: String,
    pub notes: Vec<String>,
    pub config: ExperimentConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub metadata: ReportMetadata,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn row(&self, classifier: ClassifierKind, mode: Mode) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.classifier == classifier && r.mode == mode)
    }
}

fn make_row(
    classifier: ClassifierKind,
    mode: Mode,
    names: &[String],
    mask: FeatureMask,
    outcome: Result<(MetricsReport, Option<OptimizeResult>)>,
    elapsed: Option<f64>,
) -> ReportRow {
    let selected_features = mask
        .selected_indices()
        .into_iter()
        .map(|j| names[j].clone())
        .collect();
    let mut row = ReportRow {
        classifier,
        mode,
        metrics: None,
        n_selected: mask.count_selected(),
        mask,
        selected_features,
        fitness_history: Vec::new(),
        best_fitness: None,
        evaluations: 0,
        wall_clock_seconds: elapsed,
        error: None,
    };
    match outcome {
        Ok((metrics, search)) => {
            row.metrics = Some(metrics.rounded(METRIC_DECIMALS));
            if let Some(s) = search {
                row.fitness_history = s.history;
                row.best_fitness = Some(s.best_cost);
                row.evaluations = s.evaluations;
            }
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

fn classifier_rows(
    cfg: &ExperimentConfig,
    prepared: &PreparedData,
    kind: ClassifierKind,
) -> Vec<ReportRow> {
    let clf = cfg.classifier_config(kind);
    let names = prepared.train.feature_names();
    let d = prepared.train.n_features();
    let timed = |start: Instant| cfg.record_timing.then(|| start.elapsed().as_secs_f64());

    let start = Instant::now();
    let all = FeatureMask::all(d);
    let outcome =
        evaluate_with_mask(&clf, &prepared.train, &prepared.test, &all).map(|(_, m)| (m, None));
    let mut rows = vec![make_row(
        kind,
        Mode::WithoutFs,
        names,
        all,
        outcome,
        timed(start),
    )];

    if cfg.optimizer != Optimizer::None {
        let start = Instant::now();
        let (mask, outcome) = match run_wrapper_fs(cfg.optimizer, &clf, &prepared.train, cfg) {
            Ok(search) => {
                let mask = search.best_mask.clone();
                let outcome = evaluate_with_mask(&clf, &prepared.train, &prepared.test, &mask)
                    .map(|(_, m)| (m, Some(search)));
                (mask, outcome)
            }
            Err(e) => (FeatureMask::none(d), Err(e)),
        };
        rows.push(make_row(
            kind,
            Mode::WithFs,
            names,
            mask,
            outcome,
            timed(start),
        ));
    }
    rows
}

/// Run the experiment described by `cfg` on an already loaded dataset.
pub fn run_experiment_on(cfg: &ExperimentConfig, ds: &Dataset) -> Result<ExperimentReport> {
    cfg.validate()?;
    let prepared = prepare_data(ds, cfg.split_fraction, cfg.seed)?;
    let per_classifier: Vec<Vec<ReportRow>> = cfg
        .classifiers
        .par_iter()
        .map(|&kind| classifier_rows(cfg, &prepared, kind))
        .collect();
    Ok(ExperimentReport {
        metadata: ReportMetadata {
            seed: cfg.seed,
            dataset: DatasetStats {
                n_samples: ds.n_samples(),
                n_features: ds.n_features(),
                n_positive: ds.class_count(Label::Positive),
                n_negative: ds.class_count(Label::Negative),
                n_train: prepared.train.n_samples(),
                n_test: prepared.test.n_samples(),
            },
            evaluated_on: "test_split".into(),
            notes: vec![
                "metrics are fractions of the held-out test split".into(),
                "rae is the ratio of the L2 norm of the errors to the L2 norm of the true labels"
                    .into(),
            ],
            config: cfg.clone(),
        },
        rows: per_classifier.into_iter().flatten().collect(),
    })
}

/// Load `cfg.data_path` and run the experiment.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let ds = data::load_dataset(&cfg.data_path)?;
    run_experiment_on(cfg, &ds)
}

pub const CSV_HEADER: [&str; 13] = [
    "classifier",
    "mode",
    "accuracy",
    "sensitivity",
    "specificity",
    "precision",
    "f_score",
    "kappa",
    "mae",
    "rmse",
    "rae",
    "n_selected",
    "selected_features",
];

/// Serialize a report. JSON holds the full report; CSV holds one line per
/// row with the metric columns only.
pub fn render_report(r: &ExperimentReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(r)?;
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER)?;
            for row in &r.rows {
                let mut rec = vec![
                    row.classifier.name().to_string(),
                    row.mode.name().to_string(),
                ];
                match &row.metrics {
                    Some(m) => rec.extend(
                        [
                            m.accuracy,
                            m.sensitivity,
                            m.specificity,
                            m.precision,
                            m.f_score,
                            m.kappa,
                            m.mae,
                            m.rmse,
                            m.rae,
                        ]
                        .iter()
                        .map(|v| format!("{v:.6}")),
                    ),
                    None => rec.extend(std::iter::repeat_n(String::new(), 9)),
                }
                rec.push(row.n_selected.to_string());
                rec.push(row.selected_features.join(";"));
                w.write_record(&rec)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::config(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

pub fn emit_report(r: &ExperimentReport, format: OutputFormat, path: &Path) -> Result<()> {
    let text = render_report(r, format)?;
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Read back a report written as JSON.
pub fn parse_json_report(text: &str) -> Result<ExperimentReport> {
    Ok(serde_json::from_str(text)?)
}
