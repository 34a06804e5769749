use nalgebra::DMatrix;

use super::hafnian::hafnian_repeated;
use super::state::{GaussianState, PhotonPattern};
use crate::{Error, Result};

/// Photon-number distribution of a Gaussian state, with the matrices the
/// hafnian formula needs precomputed.
#[derive(Clone, Debug)]
pub struct PatternDistribution {
    modes: usize,
    kernel: Kernel,
    /// `1/√det Q`
    norm: f64,
}

#[derive(Clone, Debug)]
enum Kernel {
    /// `cA`; probabilities use `Haf(cA_n)²`.
    Pure(DMatrix<f64>),
    /// `Ā = X(I − Q⁻¹)`; probabilities use `Haf(Ā_n)`.
    Mixed(DMatrix<f64>),
}

impl PatternDistribution {
    pub fn new(state: &GaussianState) -> Result<Self> {
        state.validate()?;
        let n = state.modes();
        let chol = state
            .q()
            .cholesky()
            .ok_or_else(|| Error::InvalidState("sigma + I/2 is not positive definite".into()))?;
        let log_det: f64 = chol.l().diagonal().iter().map(|x| 2.0 * x.ln()).sum();
        let norm = (-0.5 * log_det).exp();
        let kernel = match state.scaled_adjacency() {
            Some(ca) => Kernel::Pure(ca.clone()),
            None => {
                let q_inv = chol.inverse();
                let m = DMatrix::identity(2 * n, 2 * n) - q_inv;
                // left-multiplying by X swaps the two row blocks
                let mut abar = DMatrix::zeros(2 * n, 2 * n);
                for i in 0..n {
                    abar.set_row(i, &m.row(i + n));
                    abar.set_row(i + n, &m.row(i));
                }
                let sym = (&abar + abar.transpose()) * 0.5;
                Kernel::Mixed(sym)
            }
        };
        Ok(PatternDistribution {
            modes: n,
            kernel,
            norm,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Probability of `pattern`; patterns over a prefix of the modes are
    /// not accepted, use a reduced state for marginals.
    pub fn probability(&self, pattern: &PhotonPattern) -> Result<f64> {
        if pattern.modes() != self.modes {
            return Err(Error::arg(format!(
                "pattern has {} modes, state has {}",
                pattern.modes(),
                self.modes
            )));
        }
        Ok(self.probability_unchecked(&pattern.counts))
    }

    pub(crate) fn probability_unchecked(&self, counts: &[usize]) -> f64 {
        let fact: f64 = counts
            .iter()
            .map(|&c| (1..=c).map(|x| x as f64).product::<f64>())
            .product();
        let p = match &self.kernel {
            Kernel::Pure(ca) => {
                if counts.iter().sum::<usize>() % 2 == 1 {
                    return 0.0;
                }
                let h = hafnian_repeated(ca, counts);
                h * h
            }
            Kernel::Mixed(abar) => {
                let reps: Vec<usize> = counts.iter().chain(counts.iter()).copied().collect();
                hafnian_repeated(abar, &reps)
            }
        };
        (p * self.norm / fact).clamp(0.0, 1.0)
    }
}

/// `p(n) = Haf(Ā_n) / (n! √det Q)`, which for a lossless graph encoding is
/// `Haf(cA_n)² / (n! √det Q)`.
pub fn pattern_probability(state: &GaussianState, pattern: &PhotonPattern) -> Result<f64> {
    PatternDistribution::new(state)?.probability(pattern)
}
