use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::state::GaussianState;
use crate::{Error, Result};

/// Noise term added by photon loss.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VacuumConvention {
    /// `(1 − η)·I/2`, the vacuum of the encoding's covariance convention.
    #[default]
    HalfIdentity,
    /// `(1 − η)·I` as printed in the loss formula.
    Identity,
}

/// `sigma ← η·sigma + (1 − η)·V`.
pub fn apply_loss(
    state: &GaussianState,
    eta: f64,
    convention: VacuumConvention,
) -> Result<GaussianState> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::arg(format!(
            "transmissivity must lie in (0, 1], got {eta}"
        )));
    }
    let n = state.sigma().nrows();
    let vac = match convention {
        VacuumConvention::HalfIdentity => 0.5,
        VacuumConvention::Identity => 1.0,
    };
    let sigma = state.sigma() * eta + DMatrix::identity(n, n) * ((1.0 - eta) * vac);
    state.with_sigma(sigma, eta == 1.0)
}

/// Transmissivities along the optical path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossBudget {
    pub eta_c: f64,
    pub eta_d: f64,
    pub loss_db_per_cm: f64,
    pub layer_length_m: f64,
}

impl Default for LossBudget {
    fn default() -> Self {
        LossBudget {
            eta_c: 0.8,
            eta_d: 0.95,
            loss_db_per_cm: 0.25,
            layer_length_m: 10e-6,
        }
    }
}

impl LossBudget {
    pub fn lossless() -> Self {
        LossBudget {
            eta_c: 1.0,
            eta_d: 1.0,
            loss_db_per_cm: 0.0,
            layer_length_m: 10e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eta_c", self.eta_c), ("eta_d", self.eta_d)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::arg(format!("{name} must lie in (0, 1], got {v}")));
            }
        }
        if self.loss_db_per_cm.is_nan()
            || self.loss_db_per_cm < 0.0
            || self.layer_length_m.is_nan()
            || self.layer_length_m < 0.0
        {
            return Err(Error::arg(
                "propagation loss and layer length must be nonnegative",
            ));
        }
        Ok(())
    }

    /// Per-layer transmissivity `10^(−loss·length_cm/10)`.
    pub fn eta_o(&self) -> f64 {
        10f64.powf(-self.loss_db_per_cm * self.layer_length_m * 100.0 / 10.0)
    }

    /// `η_c · η_o^n · η_d`.
    pub fn total_transmissivity(&self, n_modes: usize) -> f64 {
        self.eta_c * self.eta_o().powi(n_modes as i32) * self.eta_d
    }

    pub fn total_loss_db(&self, n_modes: usize) -> f64 {
        -10.0 * self.total_transmissivity(n_modes).log10()
    }
}

pub fn total_transmissivity(budget: &LossBudget, n_modes: usize) -> f64 {
    budget.total_transmissivity(n_modes)
}
