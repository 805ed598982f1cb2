use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{class_index, ClassifyError};
use crate::dataset::{ClassId, NUM_CLASSES};

/// Per-class rates in percent. `None` marks a rate whose denominator is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// `confusion[true][predicted]`.
    pub confusion: [[usize; NUM_CLASSES]; NUM_CLASSES],
    pub sensitivity: [Option<f64>; NUM_CLASSES],
    pub specificity: [Option<f64>; NUM_CLASSES],
    pub precision: [Option<f64>; NUM_CLASSES],
    pub mean_sensitivity: Option<f64>,
    pub mean_specificity: Option<f64>,
    pub mean_precision: Option<f64>,
    pub accuracy: f64,
    pub total: usize,
}

fn rate(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| 100.0 * num as f64 / den as f64)
}

fn mean(v: &[Option<f64>]) -> Option<f64> {
    let d: Vec<f64> = v.iter().flatten().copied().collect();
    (!d.is_empty()).then(|| d.iter().sum::<f64>() / d.len() as f64)
}

pub fn evaluate(predictions: &[ClassId], labels: &[ClassId]) -> Result<EvalReport, ClassifyError> {
    if labels.is_empty() {
        return Err(ClassifyError::EmptyInput);
    }
    if predictions.len() != labels.len() {
        return Err(ClassifyError::LengthMismatch {
            rows: predictions.len(),
            labels: labels.len(),
        });
    }
    let mut confusion = [[0usize; NUM_CLASSES]; NUM_CLASSES];
    for (&p, &l) in predictions.iter().zip(labels) {
        confusion[class_index(l)?][class_index(p)?] += 1;
    }
    EvalReport::from_confusion(confusion)
}

impl EvalReport {
    pub fn from_confusion(confusion: [[usize; NUM_CLASSES]; NUM_CLASSES]) -> Result<Self, ClassifyError> {
        let total: usize = confusion.iter().flatten().sum();
        if total == 0 {
            return Err(ClassifyError::EmptyInput);
        }
        let mut sensitivity = [None; NUM_CLASSES];
        let mut specificity = [None; NUM_CLASSES];
        let mut precision = [None; NUM_CLASSES];
        for c in 0..NUM_CLASSES {
            let tp = confusion[c][c];
            let actual: usize = confusion[c].iter().sum();
            let predicted: usize = (0..NUM_CLASSES).map(|r| confusion[r][c]).sum();
            let fn_ = actual - tp;
            let fp = predicted - tp;
            let tn = total - tp - fn_ - fp;
            sensitivity[c] = rate(tp, tp + fn_);
            specificity[c] = rate(tn, tn + fp);
            precision[c] = rate(tp, tp + fp);
        }
        let trace: usize = (0..NUM_CLASSES).map(|c| confusion[c][c]).sum();
        Ok(EvalReport {
            confusion,
            mean_sensitivity: mean(&sensitivity),
            mean_specificity: mean(&specificity),
            mean_precision: mean(&precision),
            sensitivity,
            specificity,
            precision,
            accuracy: 100.0 * trace as f64 / total as f64,
            total,
        })
    }

    /// Rows sensitivity / specificity / precision, columns class 1..4 and mean,
    /// followed by a model-accuracy footer. Undefined rates are written `NA`.
    pub fn to_table_csv(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| format!("{x:.2}"));
        let mut out = String::from("metric,class_1,class_2,class_3,class_4,mean\n");
        for (name, row, m) in [
            ("sensitivity", &self.sensitivity, self.mean_sensitivity),
            ("specificity", &self.specificity, self.mean_specificity),
            ("precision", &self.precision, self.mean_precision),
        ] {
            out.push_str(name);
            for v in row {
                let _ = write!(out, ",{}", fmt(*v));
            }
            let _ = writeln!(out, ",{}", fmt(m));
        }
        let _ = writeln!(out, "model_accuracy,,,,,{:.2}", self.accuracy);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn perfect_predictions() {
        let y = [1, 2, 3, 4, 1, 2];
        let r = evaluate(&y, &y).unwrap();
        for c in 0..4 {
            assert_eq!(r.sensitivity[c], Some(100.0));
            assert_eq!(r.specificity[c], Some(100.0));
            assert_eq!(r.precision[c], Some(100.0));
        }
        assert_eq!(r.accuracy, 100.0);
    }

    #[test]
    fn two_class_reduction() {
        let mut m = [[0; 4]; 4];
        m[0] = [8, 2, 0, 0];
        m[1] = [2, 8, 0, 0];
        let r = EvalReport::from_confusion(m).unwrap();
        assert_eq!(r.sensitivity[0], Some(80.0));
        assert_eq!(r.precision[0], Some(80.0));
        assert_eq!(r.sensitivity[2], None);
        assert_eq!(r.precision[3], None);
        assert_eq!(r.mean_sensitivity, Some(80.0));
        assert_eq!(r.accuracy, 80.0);
        assert!(r.to_table_csv().contains("NA"));
    }

    #[test]
    fn identities_on_random_confusions() {
        let mut rng = crate::seeds::rng(2);
        for _ in 0..200 {
            let mut labels = Vec::new();
            let mut preds = Vec::new();
            for _ in 0..rng.random_range(1..60) {
                labels.push(rng.random_range(1..=4u8));
                preds.push(rng.random_range(1..=4u8));
            }
            let r = evaluate(&preds, &labels).unwrap();
            for c in 0..4 {
                let tp = r.confusion[c][c];
                let fn_: usize = r.confusion[c].iter().sum::<usize>() - tp;
                let fp: usize = (0..4).map(|k| r.confusion[k][c]).sum::<usize>() - tp;
                let cls = c as u8 + 1;
                assert_eq!(tp + fn_, labels.iter().filter(|&&l| l == cls).count());
                assert_eq!(tp + fp, preds.iter().filter(|&&p| p == cls).count());
                for v in [r.sensitivity[c], r.specificity[c], r.precision[c]].into_iter().flatten() {
                    assert!((0.0..=100.0).contains(&v));
                }
            }
            let correct = preds.iter().zip(&labels).filter(|(p, l)| p == l).count();
            assert!((r.accuracy - 100.0 * correct as f64 / labels.len() as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn errors() {
        assert_eq!(evaluate(&[], &[]), Err(ClassifyError::EmptyInput));
        assert!(matches!(evaluate(&[1], &[1, 2]), Err(ClassifyError::LengthMismatch { .. })));
        assert_eq!(evaluate(&[5], &[1]), Err(ClassifyError::InvalidLabel(5)));
    }
}
