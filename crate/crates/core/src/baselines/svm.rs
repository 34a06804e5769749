//! C-SVM on a precomputed kernel, solved in the dual by pairwise
//! coordinate ascent with maximal-violating-pair selection.

use serde::{Deserialize, Serialize};

use super::gram::{GramMatrix, KernelKind};
use crate::oracle::Label;
use crate::{Error, Result};

pub const SMO_TOLERANCE: f64 = 1e-3;
pub const SMO_MAX_ITERATIONS: usize = 100_000;

/// Dual solution restricted to its support vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSvmModel {
    pub kind: KernelKind,
    #[serde(rename = "C")]
    pub c: f64,
    /// Indices into the training set.
    pub support: Vec<usize>,
    pub alphas: Vec<f64>,
    /// `±1` labels of the support vectors.
    pub support_signs: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl KernelSvmModel {
    /// `Σ α_i y_i K(x_i, x) + b`, where `row[i]` is the kernel between `x`
    /// and training example `i`.
    pub fn decision(&self, row: &[f64]) -> f64 {
        self.support
            .iter()
            .zip(&self.alphas)
            .zip(&self.support_signs)
            .map(|((&i, &a), &y)| a * y * row[i])
            .sum::<f64>()
            + self.bias
    }
}

pub fn predict_kernel(model: &KernelSvmModel, row: &[f64]) -> Label {
    Label::from_sign(model.decision(row))
}

/// Dual objective `Σα − ½ αᵀQα` after every update.
pub struct SmoTrace {
    pub objective: Vec<f64>,
}

pub fn train_kernel_svm(gram: &GramMatrix, labels: &[Label], c: f64) -> Result<KernelSvmModel> {
    solve(gram, labels, c, None)
}

pub fn train_kernel_svm_traced(
    gram: &GramMatrix,
    labels: &[Label],
    c: f64,
) -> Result<(KernelSvmModel, SmoTrace)> {
    let mut trace = SmoTrace {
        objective: Vec::new(),
    };
    let model = solve(gram, labels, c, Some(&mut trace))?;
    Ok((model, trace))
}

fn solve(
    gram: &GramMatrix,
    labels: &[Label],
    c: f64,
    mut trace: Option<&mut SmoTrace>,
) -> Result<KernelSvmModel> {
    let n = gram.len();
    if labels.len() != n {
        return Err(Error::InvalidDataset(format!(
            "{} labels for a {n}×{n} Gram matrix",
            labels.len()
        )));
    }
    if c.is_nan() || c <= 0.0 {
        return Err(Error::arg(format!("C must be positive, got {c}")));
    }
    let y: Vec<f64> = labels.iter().map(|l| l.sign()).collect();
    if !y.iter().any(|&v| v > 0.0) || !y.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidDataset(
            "training set needs both classes".into(),
        ));
    }
    let k = &gram.k;
    let q = |i: usize, j: usize| y[i] * y[j] * k[(i, j)];
    let mut alpha = vec![0.0; n];
    // gradient of ½αᵀQα − Σα
    let mut grad = vec![-1.0; n];
    let tau = 1e-12;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < SMO_MAX_ITERATIONS {
        let mut i = usize::MAX;
        let mut g_max = f64::NEG_INFINITY;
        let mut j = usize::MAX;
        let mut g_min = f64::INFINITY;
        for t in 0..n {
            let up = (y[t] > 0.0 && alpha[t] < c) || (y[t] < 0.0 && alpha[t] > 0.0);
            let low = (y[t] > 0.0 && alpha[t] > 0.0) || (y[t] < 0.0 && alpha[t] < c);
            let v = -y[t] * grad[t];
            if up && v > g_max {
                g_max = v;
                i = t;
            }
            if low && v < g_min {
                g_min = v;
                j = t;
            }
        }
        if i == usize::MAX || j == usize::MAX || g_max - g_min < SMO_TOLERANCE {
            converged = true;
            break;
        }
        iterations += 1;
        let (old_i, old_j) = (alpha[i], alpha[j]);
        let quad = (k[(i, i)] + k[(j, j)] - 2.0 * k[(i, j)]).max(tau);
        if y[i] != y[j] {
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for (t, g) in grad.iter_mut().enumerate() {
            *g += q(i, t) * di + q(j, t) * dj;
        }
        if let Some(tr) = trace.as_deref_mut() {
            // Σα − ½αᵀQα = −½ αᵀ(grad − 1)
            let f: f64 = alpha.iter().zip(&grad).map(|(a, g)| a * (g - 1.0)).sum();
            tr.objective.push(-0.5 * f);
        }
    }
    if !converged {
        log::warn!("SMO stopped at the iteration cap of {SMO_MAX_ITERATIONS}");
    }
    let bias = -rho(&alpha, &grad, &y, c);
    let support: Vec<usize> = (0..n).filter(|&t| alpha[t] > 0.0).collect();
    Ok(KernelSvmModel {
        kind: gram.kind,
        c,
        alphas: support.iter().map(|&t| alpha[t]).collect(),
        support_signs: support.iter().map(|&t| y[t]).collect(),
        support,
        bias,
        iterations,
        converged,
    })
}

/// Offset from the free support vectors, or the midpoint of the feasible
/// interval when none is free.
fn rho(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum, mut free) = (0.0, 0usize);
    for t in 0..alpha.len() {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            sum += yg;
        }
    }
    if free > 0 {
        sum / free as f64
    } else {
        (ub + lb) / 2.0
    }
}
