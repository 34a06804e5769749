//! Error of a majority vote over independent trials, and the number of trials
//! needed for a target error.

use serde::{Deserialize, Serialize};

use crate::oracle::Label;
use crate::{Error, Result};

/// `ln √π` rounded as in the tail approximation `erfc(k) ≈ e^{-k²}/(√π k)`.
pub const LN_SQRT_PI: f64 = 0.5724;

/// Probability that the majority of `n` trials is wrong when each is wrong
/// with probability `e`: `Σ_{k ≤ ⌊n/2⌋} C(n,k) e^{n−k} (1−e)^k`.
pub fn p_error(n: usize, e: f64) -> Result<f64> {
    if n.is_multiple_of(2) {
        return Err(Error::arg(format!("number of trials must be odd, got {n}")));
    }
    if !(0.0..=1.0).contains(&e) {
        return Err(Error::arg(format!(
            "per-trial error must lie in [0, 1], got {e}"
        )));
    }
    if e == 0.0 {
        return Ok(0.0);
    }
    if e == 1.0 {
        return Ok(1.0);
    }
    let (le, lf) = (e.ln(), (1.0 - e).ln());
    // log terms, ln C(n,k) built incrementally
    let mut ln_binom = 0.0;
    let mut logs = Vec::with_capacity(n / 2 + 1);
    for k in 0..=n / 2 {
        if k > 0 {
            ln_binom += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        logs.push(ln_binom + (n - k) as f64 * le + k as f64 * lf);
    }
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (l - max).exp()).sum();
    Ok((max + sum.ln()).exp().min(1.0))
}

/// Root of `−k² − ln k − 0.5724 = ln 2δ` by Newton–Raphson.
pub fn k_of_delta(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::arg(format!(
            "target error must lie in (0, 0.5), got {delta}"
        )));
    }
    let rhs = (2.0 * delta).ln();
    let f = |k: f64| -k * k - k.ln() - LN_SQRT_PI - rhs;
    let df = |k: f64| -2.0 * k - 1.0 / k;
    let mut k = (-rhs).sqrt().max(0.5);
    for _ in 0..100 {
        let step = f(k) / df(k);
        let mut next = k - step;
        if next <= 0.0 {
            next = k / 2.0;
        }
        if (next - k).abs() < 1e-15 * k.max(1.0) {
            return Ok(next);
        }
        k = next;
    }
    Ok(k)
}

/// Smallest odd `n ≥ 2k(δ)² e(1−e)/ε²` with `e = 0.5 − ε`; for small `ε`
/// this is `k(δ)²/(2ε²)`.
pub fn trials_needed(epsilon: f64, delta: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::arg(format!(
            "one-shot advantage must lie in (0, 0.5), got {epsilon}"
        )));
    }
    let k = k_of_delta(delta)?;
    let e = 0.5 - epsilon;
    let n = (2.0 * k * k * e * (1.0 - e) / (epsilon * epsilon))
        .ceil()
        .max(1.0) as usize;
    Ok(if n.is_multiple_of(2) { n + 1 } else { n })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialPlan {
    pub n_trials: usize,
    pub target_error: f64,
    pub per_shot_error: f64,
}

impl TrialPlan {
    pub fn new(per_shot_error: f64, target_error: f64) -> Result<Self> {
        Ok(TrialPlan {
            n_trials: trials_needed(0.5 - per_shot_error, target_error)?,
            target_error,
            per_shot_error,
        })
    }

    pub fn epsilon(&self) -> f64 {
        0.5 - self.per_shot_error
    }

    pub fn k(&self) -> Result<f64> {
        k_of_delta(self.target_error)
    }

    /// Mean number of correct trials, `n(1−e)`.
    pub fn mean_correct(&self) -> f64 {
        self.n_trials as f64 * (1.0 - self.per_shot_error)
    }

    /// `n e (1−e)`
    pub fn variance(&self) -> f64 {
        self.n_trials as f64 * self.per_shot_error * (1.0 - self.per_shot_error)
    }

    pub fn predicted_error(&self) -> Result<f64> {
        p_error(self.n_trials, self.per_shot_error)
    }
}

/// The strictly more frequent label among an odd number of votes.
pub fn majority_vote(labels: &[Label]) -> Result<Label> {
    if labels.len().is_multiple_of(2) {
        return Err(Error::arg(format!(
            "majority vote needs an odd count, got {}",
            labels.len()
        )));
    }
    let yes = labels.iter().filter(|&&l| l == Label::VertexMinor).count();
    Ok(Label::from_bool(2 * yes > labels.len()))
}
