//! Classification: feature standardization, one-against-all RBF SVM,
//! shrinkage LDA and the evaluation metrics.
//!
//! Labels are class ids `1..=4`. Feature matrices are slices of equal-length
//! rows.

mod lda;
mod metrics;
mod standardize;
mod svm;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lda::{train_lda, LdaModel, LdaParams};
pub use metrics::{evaluate, EvalReport};
pub use standardize::{fit_standardizer, StandardizationStats};
pub use svm::{ova_argmax, train_svm_ova, BinarySvm, SvmModel, SvmParams};

use crate::dataset::{ClassId, NUM_CLASSES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("empty input")]
    EmptyInput,
    #[error("class {0} is absent from the training data")]
    MissingClass(ClassId),
    #[error("label {0} is outside 1..=4")]
    InvalidLabel(ClassId),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{rows} rows but {labels} labels")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("at least {required} rows are needed, found {found}")]
    TooFewRows { required: usize, found: usize },
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("covariance could not be factorized even after shrinkage escalation")]
    SingularCovariance,
    #[error("invalid classifier parameter: {0}")]
    InvalidParameter(String),
}

/// Classifier selection for the pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ClassifierConfig {
    Svm(SvmParams),
    Lda(LdaParams),
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig::Svm(SvmParams::default())
    }
}

impl ClassifierConfig {
    pub fn name(&self) -> &'static str {
        match self {
            ClassifierConfig::Svm(_) => "svm",
            ClassifierConfig::Lda(_) => "lda",
        }
    }
}

/// A trained classifier of either kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Classifier {
    Svm(SvmModel),
    Lda(LdaModel),
}

impl Classifier {
    pub fn train(x: &[Vec<f64>], y: &[ClassId], cfg: &ClassifierConfig) -> Result<Self, ClassifyError> {
        Ok(match cfg {
            ClassifierConfig::Svm(p) => Classifier::Svm(train_svm_ova(x, y, p)?),
            ClassifierConfig::Lda(p) => Classifier::Lda(train_lda(x, y, p)?),
        })
    }

    pub fn predict(&self, x: &[f64]) -> Result<ClassId, ClassifyError> {
        match self {
            Classifier::Svm(m) => m.predict(x).map(|(c, _)| c),
            Classifier::Lda(m) => m.predict(x).map(|(c, _)| c),
        }
    }

    pub fn predict_all(&self, x: &[Vec<f64>]) -> Result<Vec<ClassId>, ClassifyError> {
        x.iter().map(|r| self.predict(r)).collect()
    }
}

/// Checks shape, finiteness and label range; returns the feature count.
pub(crate) fn check_training_set(x: &[Vec<f64>], y: &[ClassId]) -> Result<usize, ClassifyError> {
    if x.is_empty() {
        return Err(ClassifyError::EmptyInput);
    }
    if x.len() != y.len() {
        return Err(ClassifyError::LengthMismatch {
            rows: x.len(),
            labels: y.len(),
        });
    }
    let d = x[0].len();
    if d == 0 {
        return Err(ClassifyError::EmptyInput);
    }
    for row in x {
        check_row(row, d)?;
    }
    for &l in y {
        class_index(l)?;
    }
    Ok(d)
}

pub(crate) fn check_row(row: &[f64], d: usize) -> Result<(), ClassifyError> {
    if row.len() != d {
        return Err(ClassifyError::DimensionMismatch {
            expected: d,
            found: row.len(),
        });
    }
    if row.iter().any(|v| !v.is_finite()) {
        return Err(ClassifyError::NonFinite("feature row".into()));
    }
    Ok(())
}

pub(crate) fn class_index(label: ClassId) -> Result<usize, ClassifyError> {
    if (1..=NUM_CLASSES as ClassId).contains(&label) {
        Ok(label as usize - 1)
    } else {
        Err(ClassifyError::InvalidLabel(label))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
