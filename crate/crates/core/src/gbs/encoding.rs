use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::state::GaussianState;
use super::takagi::{check_symmetric, max_takagi_value};
use crate::{Error, Result};

/// Squeezing in dB, `10·log10(e^{2r})`, converted to the parameter `r`.
pub fn db_to_r(db: f64) -> f64 {
    db * std::f64::consts::LN_10 / 20.0
}

pub fn r_to_db(r: f64) -> f64 {
    20.0 * r / std::f64::consts::LN_10
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodingParams {
    pub c: f64,
    pub r_max: f64,
    pub squeeze_db: f64,
}

impl EncodingParams {
    /// Scaling that puts the largest mode at exactly `squeeze_db`.
    pub fn from_db(a: &DMatrix<f64>, squeeze_db: f64) -> Result<Self> {
        let r_max = db_to_r(squeeze_db);
        Ok(EncodingParams {
            c: scale_constant(a, r_max)?,
            r_max,
            squeeze_db,
        })
    }

    /// Like [`EncodingParams::from_db`], but a zero matrix yields `c = 0`
    /// (the vacuum) instead of an error.
    pub fn from_db_or_vacuum(a: &DMatrix<f64>, squeeze_db: f64) -> Result<Self> {
        match Self::from_db(a, squeeze_db) {
            Err(Error::DegenerateInput(_)) => Ok(EncodingParams {
                c: 0.0,
                r_max: db_to_r(squeeze_db),
                squeeze_db,
            }),
            other => other,
        }
    }
}

/// `c = tanh(r_max)/λ_max`.
pub fn scale_constant(a: &DMatrix<f64>, r_max: f64) -> Result<f64> {
    if r_max <= 0.0 || !r_max.is_finite() {
        return Err(Error::arg(format!("r_max must be positive, got {r_max}")));
    }
    let lambda = max_takagi_value(a)?;
    if lambda <= 0.0 {
        return Err(Error::DegenerateInput(
            "zero matrix has no scaling constant".into(),
        ));
    }
    Ok(r_max.tanh() / lambda)
}

/// Pure state with `Ã = c(A ⊕ A)`, `Q = (I − XÃ)^{-1}`, `sigma = Q − I/2`.
pub fn encode_graph(a: &DMatrix<f64>, params: &EncodingParams) -> Result<GaussianState> {
    check_symmetric(a)?;
    let n = a.nrows();
    let c = params.c;
    if c < 0.0 || !c.is_finite() {
        return Err(Error::arg(format!(
            "scaling constant must be nonnegative, got {c}"
        )));
    }
    let s_max = max_takagi_value(a)?;
    if c * s_max >= 1.0 {
        return Err(Error::InvalidEncoding(format!(
            "c·s_max = {} must be below 1",
            c * s_max
        )));
    }
    let ca = a * c;
    // I − XÃ = [[I, −cA], [−cA, I]]
    let mut m = DMatrix::identity(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, n + j)] = -ca[(i, j)];
            m[(n + i, j)] = -ca[(i, j)];
        }
    }
    let q = m
        .try_inverse()
        .ok_or_else(|| Error::InvalidEncoding("I − XÃ is singular".into()))?;
    let mut sigma = q - DMatrix::identity(2 * n, 2 * n) * 0.5;
    let sym = (&sigma + sigma.transpose()) * 0.5;
    sigma = sym;
    GaussianState::pure_encoding(sigma, ca)
}

/// `r_i = atanh(c·λ_i)`.
pub fn squeezing_params(values: &[f64], c: f64) -> Result<Vec<f64>> {
    values
        .iter()
        .map(|&l| {
            let x = c * l;
            if !(0.0..1.0).contains(&x) {
                Err(Error::InvalidEncoding(format!("c·λ = {x} outside [0, 1)")))
            } else {
                Ok(x.atanh())
            }
        })
        .collect()
}
