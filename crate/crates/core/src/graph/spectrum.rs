use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::Graph;

/// Laplacian eigenvalues in ascending order, repeated values kept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Eigenvalues of `D - A`.
///
/// Uses Householder tridiagonalization followed by implicit symmetric QR
/// iteration.
pub fn laplacian_spectrum(g: &Graph) -> Spectrum {
    let n = g.n();
    if n == 0 {
        return Spectrum { values: Vec::new() };
    }
    let lap = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            g.degree(i) as f64
        } else if g.has_edge(i, j) {
            -1.0
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::try_new(lap, 1e-14, 0).expect("symmetric QR converges");
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Spectrum { values }
}
