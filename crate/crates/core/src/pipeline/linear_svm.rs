//! Linear soft-margin SVM trained by dual coordinate descent.
//!
//! The bias is learned as the weight of a constant feature, so it is
//! regularized together with `w`. Coordinates are visited in a fresh
//! seeded permutation every epoch.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::features::{FeatureKind, FeatureVector};
use crate::oracle::Label;
use crate::rng;
use crate::{Error, Result};

pub const DEFAULT_C: f64 = 7.0;
pub const MAX_EPOCHS: usize = 2000;
/// Stop when the projected-gradient spread falls below this value.
pub const DUAL_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearSvmModel {
    pub kind: FeatureKind,
    pub weights: Vec<f64>,
    pub bias: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub feature_dim: usize,
    pub parent_n: usize,
    pub child_n: usize,
    pub encoding_digest: Option<String>,
    pub training_seed: u64,
    pub epochs: usize,
}

impl LinearSvmModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }

    pub fn predict(&self, f: &FeatureVector) -> Result<Label> {
        if f.kind != self.kind || f.dim() != self.feature_dim {
            return Err(Error::arg(format!(
                "model expects {:?} features of length {}, got {:?} of length {}",
                self.kind,
                self.feature_dim,
                f.kind,
                f.dim()
            )));
        }
        Ok(Label::from_sign(self.decision(&f.values)))
    }

    /// `½‖w‖² + ½b² + C Σ max(0, 1 − y(w·x + b))`
    pub fn primal_objective(&self, features: &[FeatureVector], labels: &[Label]) -> f64 {
        let reg = 0.5 * (self.weights.iter().map(|w| w * w).sum::<f64>() + self.bias * self.bias);
        let hinge: f64 = features
            .iter()
            .zip(labels)
            .map(|(f, l)| (1.0 - l.sign() * self.decision(&f.values)).max(0.0))
            .sum();
        reg + self.c * hinge
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Dual objective `½‖w‖² − Σα` (minimization form) after every epoch.
#[derive(Clone, Debug, Default)]
pub struct TrainingTrace {
    pub dual_objective: Vec<f64>,
}

pub fn train_linear_svm(
    features: &[FeatureVector],
    labels: &[Label],
    c: f64,
    seed: u64,
) -> Result<LinearSvmModel> {
    train_linear_svm_traced(features, labels, c, seed).map(|(m, _)| m)
}

pub fn train_linear_svm_traced(
    features: &[FeatureVector],
    labels: &[Label],
    c: f64,
    seed: u64,
) -> Result<(LinearSvmModel, TrainingTrace)> {
    if features.is_empty() {
        return Err(Error::InvalidDataset("empty training set".into()));
    }
    if features.len() != labels.len() {
        return Err(Error::InvalidDataset(format!(
            "{} feature vectors but {} labels",
            features.len(),
            labels.len()
        )));
    }
    if !labels.contains(&Label::VertexMinor) || !labels.contains(&Label::NotVertexMinor) {
        return Err(Error::InvalidDataset(
            "training set needs both classes".into(),
        ));
    }
    if c.is_nan() || c <= 0.0 {
        return Err(Error::arg(format!("C must be positive, got {c}")));
    }
    let first = &features[0];
    let dim = first.dim();
    if let Some(f) = features
        .iter()
        .find(|f| f.dim() != dim || f.kind != first.kind)
    {
        return Err(Error::InvalidDataset(format!(
            "inconsistent features: {:?}/{} vs {:?}/{}",
            first.kind,
            dim,
            f.kind,
            f.dim()
        )));
    }
    let n = features.len();
    let y: Vec<f64> = labels.iter().map(|l| l.sign()).collect();
    // augmented squared norms, constant feature included
    let qd: Vec<f64> = features
        .iter()
        .map(|f| f.values.iter().map(|v| v * v).sum::<f64>() + 1.0)
        .collect();
    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut order: Vec<usize> = (0..n).collect();
    let mut r = rng::seeded(seed);
    let mut trace = TrainingTrace::default();
    let mut epochs = 0;
    while epochs < MAX_EPOCHS {
        epochs += 1;
        order.shuffle(&mut r);
        let (mut pg_max, mut pg_min) = (f64::NEG_INFINITY, f64::INFINITY);
        for &i in &order {
            let x = &features[i].values;
            let g = y[i] * (w.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() + b) - 1.0;
            let pg = if alpha[i] == 0.0 {
                g.min(0.0)
            } else if alpha[i] == c {
                g.max(0.0)
            } else {
                g
            };
            pg_max = pg_max.max(pg);
            pg_min = pg_min.min(pg);
            if pg != 0.0 {
                let old = alpha[i];
                alpha[i] = (old - g / qd[i]).clamp(0.0, c);
                let d = (alpha[i] - old) * y[i];
                for (a, v) in w.iter_mut().zip(x) {
                    *a += d * v;
                }
                b += d;
            }
        }
        let norm = w.iter().map(|a| a * a).sum::<f64>() + b * b;
        trace
            .dual_objective
            .push(0.5 * norm - alpha.iter().sum::<f64>());
        if pg_max - pg_min < DUAL_TOLERANCE {
            break;
        }
    }
    if epochs == MAX_EPOCHS {
        log::warn!("linear SVM stopped at the epoch cap of {MAX_EPOCHS}");
    }
    Ok((
        LinearSvmModel {
            kind: first.kind,
            weights: w,
            bias: b,
            c,
            feature_dim: dim,
            parent_n: first.parent_n,
            child_n: first.child_n,
            encoding_digest: None,
            training_seed: seed,
            epochs,
        },
        trace,
    ))
}
