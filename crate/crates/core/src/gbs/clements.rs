//! Rectangular interferometer decomposition.
//!
//! Each two-mode block on adjacent modes `(m, m+1)` is
//!
//! ```text
//! T(θ, φ) = [[e^{iφ} cos θ, −sin θ], [e^{iφ} sin θ, cos θ]]
//! ```
//!
//! and the unitary factors as `D · T_1 · T_2 ⋯ T_k` with `D` a diagonal of
//! output phases.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::takagi::{unitarity_error, Complex64};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MziSetting {
    pub layer: usize,
    pub pair: [usize; 2],
    pub theta: f64,
    pub phi: f64,
}

impl MziSetting {
    fn matrix(&self, n: usize) -> DMatrix<Complex64> {
        let mut t = DMatrix::identity(n, n);
        let [m, k] = self.pair;
        let e = Complex64::from_polar(1.0, self.phi);
        let (s, c) = self.theta.sin_cos();
        t[(m, m)] = e * c;
        t[(m, k)] = Complex64::new(-s, 0.0);
        t[(k, m)] = e * s;
        t[(k, k)] = Complex64::new(c, 0.0);
        t
    }

    fn inverse_matrix(&self, n: usize) -> DMatrix<Complex64> {
        self.matrix(n).adjoint()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClementsMesh {
    pub modes: usize,
    /// Factors in product order: `U = D · mzis[0] · mzis[1] ⋯`.
    pub mzis: Vec<MziSetting>,
    pub output_phases: Vec<f64>,
    pub depth: usize,
}

impl ClementsMesh {
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let n = self.modes;
        let mut u = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            self.output_phases
                .iter()
                .map(|&a| Complex64::from_polar(1.0, a)),
        ));
        for t in &self.mzis {
            u *= t.matrix(n);
        }
        u
    }
}

pub fn compile_clements(u: &DMatrix<Complex64>) -> Result<ClementsMesh> {
    let n = u.nrows();
    if n == 0 || u.ncols() != n {
        return Err(Error::arg("expected a nonempty square matrix"));
    }
    if unitarity_error(u) > 1e-10 {
        return Err(Error::arg("matrix is not unitary"));
    }
    let mut v = u.clone();
    let mut left: Vec<MziSetting> = Vec::new();
    let mut right: Vec<MziSetting> = Vec::new();
    for i in 0..n - 1 {
        if i % 2 == 0 {
            for j in 0..=i {
                // null v[n-1-j, i-j] with columns (i-j, i-j+1)
                let (row, p) = (n - 1 - j, i - j);
                let (a, b) = (v[(row, p)], v[(row, p + 1)]);
                let t = MziSetting {
                    layer: 0,
                    pair: [p, p + 1],
                    theta: a.norm().atan2(b.norm()),
                    phi: if a.norm() == 0.0 {
                        0.0
                    } else {
                        a.arg() - b.arg()
                    },
                };
                v *= t.inverse_matrix(n);
                right.push(t);
            }
        } else {
            for j in 1..=i + 1 {
                // null v[n+j-i-2, j-1] with rows (n+j-i-3, n+j-i-2)
                let (q, col) = (n + j - i - 2, j - 1);
                let (a, b) = (v[(q - 1, col)], v[(q, col)]);
                let t = MziSetting {
                    layer: 0,
                    pair: [q - 1, q],
                    theta: b.norm().atan2(a.norm()),
                    phi: if b.norm() == 0.0 {
                        0.0
                    } else {
                        std::f64::consts::PI + b.arg() - a.arg()
                    },
                };
                v = t.matrix(n) * v;
                left.push(t);
            }
        }
    }
    // v is now diagonal: u = L_1⁻¹ ⋯ L_k⁻¹ · v · R_l ⋯ R_1. Push each L⁻¹
    // through the diagonal: T⁻¹ D = D' T'.
    let mut d: Vec<Complex64> = (0..n).map(|i| v[(i, i)]).collect();
    let mut moved: Vec<MziSetting> = Vec::with_capacity(left.len());
    for t in left.iter().rev() {
        let [m, k] = t.pair;
        let (dm, dk) = (d[m], d[k]);
        let phi = (-dm / dk).arg();
        d[m] = -Complex64::from_polar(1.0, -t.phi) * dk;
        moved.push(MziSetting {
            layer: 0,
            pair: t.pair,
            theta: t.theta,
            phi,
        });
    }
    moved.reverse();
    let mut mzis: Vec<MziSetting> = moved.into_iter().chain(right.into_iter().rev()).collect();
    // light meets the factors right to left
    let mut busy = vec![0usize; n];
    for t in mzis.iter_mut().rev() {
        let [m, k] = t.pair;
        let layer = busy[m].max(busy[k]);
        t.layer = layer;
        busy[m] = layer + 1;
        busy[k] = layer + 1;
    }
    Ok(ClementsMesh {
        modes: n,
        mzis,
        output_phases: d.iter().map(|z| z.arg()).collect(),
        depth: n,
    })
}
