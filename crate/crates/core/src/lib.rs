//! Wrapper feature selection for binary tabular classification.
//!
//! Candidate feature subsets are searched with an imperialist competitive
//! algorithm or a bat algorithm over continuous positions in `[0, 1]^d`,
//! thresholded into feature masks and scored by the cross-validated error
//! of one of nine classifiers.

pub mod classifiers;
pub mod data;
pub mod error;
pub mod evaluation;
pub mod metaheuristics;
pub mod pipeline;
pub mod rng;

pub use classifiers::{predict, train_classifier, ClassifierConfig, ClassifierKind, TrainedModel};
pub use data::{Dataset, FeatureMask, Label, Matrix, ScalerParams};
pub use error::{Error, Result};
pub use evaluation::{ConfusionMatrix, CvResult, MetricsReport};
pub use metaheuristics::{BaConfig, IcaConfig, OptimizeResult, Position};
pub use pipeline::{
    emit_report, fs_fitness, run_experiment, run_wrapper_fs, ExperimentConfig, ExperimentReport,
    Mode, Optimizer, OutputFormat, ReportRow,
};
