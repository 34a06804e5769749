use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Gaussian state of `modes` optical modes, described by its 2N×2N
/// covariance in the convention where the vacuum is `I/2`.
#[derive(Clone, Debug)]
pub struct GaussianState {
    modes: usize,
    sigma: DMatrix<f64>,
    /// `cA` when the state is the lossless encoding of a graph.
    scaled_adjacency: Option<DMatrix<f64>>,
}

impl GaussianState {
    /// Validates symmetry and positivity of `sigma + I/2`.
    pub fn new(sigma: DMatrix<f64>) -> Result<Self> {
        if sigma.nrows() != sigma.ncols() || sigma.nrows() % 2 == 1 {
            return Err(Error::InvalidState(format!(
                "covariance must be 2N×2N, got {}×{}",
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        let state = GaussianState {
            modes: sigma.nrows() / 2,
            sigma,
            scaled_adjacency: None,
        };
        state.validate()?;
        Ok(state)
    }

    pub fn vacuum(modes: usize) -> Self {
        GaussianState {
            modes,
            sigma: DMatrix::identity(2 * modes, 2 * modes) * 0.5,
            scaled_adjacency: Some(DMatrix::zeros(modes, modes)),
        }
    }

    pub(crate) fn pure_encoding(
        sigma: DMatrix<f64>,
        scaled_adjacency: DMatrix<f64>,
    ) -> Result<Self> {
        let mut state = GaussianState::new(sigma)?;
        state.scaled_adjacency = Some(scaled_adjacency);
        Ok(state)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    /// `Q = sigma + I/2`.
    pub fn q(&self) -> DMatrix<f64> {
        &self.sigma + DMatrix::identity(2 * self.modes, 2 * self.modes) * 0.5
    }

    /// The scaled adjacency `cA` when this state is a lossless graph
    /// encoding.
    pub fn scaled_adjacency(&self) -> Option<&DMatrix<f64>> {
        self.scaled_adjacency.as_ref()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.sigma.nrows();
        let scale = self.sigma.amax().max(1.0);
        for i in 0..n {
            for j in 0..i {
                if (self.sigma[(i, j)] - self.sigma[(j, i)]).abs() > 1e-9 * scale {
                    return Err(Error::InvalidState("covariance is not symmetric".into()));
                }
            }
        }
        if !self.sigma.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidState(
                "covariance has non-finite entries".into(),
            ));
        }
        if self.q().cholesky().is_none() {
            return Err(Error::InvalidState(
                "sigma + I/2 is not positive definite".into(),
            ));
        }
        Ok(())
    }

    /// Marginal state of the listed modes, keeping both quadrature blocks.
    pub fn reduced(&self, modes: &[usize]) -> Result<GaussianState> {
        if let Some(&m) = modes.iter().find(|&&m| m >= self.modes) {
            return Err(Error::arg(format!("mode {m} out of range")));
        }
        let k = modes.len();
        let idx: Vec<usize> = modes
            .iter()
            .copied()
            .chain(modes.iter().map(|&m| m + self.modes))
            .collect();
        let sigma = DMatrix::from_fn(2 * k, 2 * k, |a, b| self.sigma[(idx[a], idx[b])]);
        let keeps_purity = k == self.modes;
        Ok(GaussianState {
            modes: k,
            sigma,
            scaled_adjacency: if keeps_purity {
                self.scaled_adjacency
                    .as_ref()
                    .map(|a| DMatrix::from_fn(k, k, |x, y| a[(modes[x], modes[y])]))
            } else {
                None
            },
        })
    }

    /// Relabels modes: mode `i` becomes mode `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<GaussianState> {
        let mut inverse = vec![usize::MAX; self.modes];
        if perm.len() != self.modes {
            return Err(Error::arg("permutation length mismatch"));
        }
        for (i, &p) in perm.iter().enumerate() {
            if p >= self.modes || inverse[p] != usize::MAX {
                return Err(Error::arg("not a permutation"));
            }
            inverse[p] = i;
        }
        self.reduced(&inverse)
    }

    pub(crate) fn with_sigma(&self, sigma: DMatrix<f64>, keep_pure: bool) -> Result<GaussianState> {
        let mut s = GaussianState::new(sigma)?;
        if keep_pure {
            s.scaled_adjacency = self.scaled_adjacency.clone();
        }
        Ok(s)
    }
}

/// Photon counts per mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhotonPattern {
    pub counts: Vec<usize>,
}

impl PhotonPattern {
    pub fn new(counts: Vec<usize>) -> Self {
        PhotonPattern { counts }
    }

    pub fn zeros(modes: usize) -> Self {
        PhotonPattern {
            counts: vec![0; modes],
        }
    }

    pub fn modes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `Π n_i!`
    pub fn factorial(&self) -> f64 {
        self.counts
            .iter()
            .map(|&c| (1..=c).map(|x| x as f64).product::<f64>())
            .product()
    }
}

impl From<Vec<usize>> for PhotonPattern {
    fn from(counts: Vec<usize>) -> Self {
        PhotonPattern { counts }
    }
}
