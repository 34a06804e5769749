use nalgebra::{Complex, DMatrix};

use crate::{Error, Result};

pub type Complex64 = Complex<f64>;

/// `A = U · diag(values) · Uᵀ` with `U` unitary and values descending.
#[derive(Clone, Debug)]
pub struct Takagi {
    pub unitary: DMatrix<Complex64>,
    pub values: Vec<f64>,
}

impl Takagi {
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        &self.unitary * d * self.unitary.transpose()
    }
}

pub(crate) fn check_symmetric(a: &DMatrix<f64>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::arg(format!(
            "expected a square matrix, got {}×{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let tol = 1e-12 * a.amax().max(1.0);
    for i in 0..a.nrows() {
        for j in 0..i {
            if (a[(i, j)] - a[(j, i)]).abs() > tol {
                return Err(Error::arg("matrix is not symmetric"));
            }
        }
    }
    Ok(())
}

/// Takagi factorization of a real symmetric matrix through its real
/// eigendecomposition: negative eigenvalues get their eigenvector
/// multiplied by `i`.
pub fn takagi(a: &DMatrix<f64>) -> Result<Takagi> {
    check_symmetric(a)?;
    let n = a.nrows();
    if n == 0 {
        return Ok(Takagi {
            unitary: DMatrix::zeros(0, 0),
            values: Vec::new(),
        });
    }
    let eig = a.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        eig.eigenvalues[y]
            .abs()
            .total_cmp(&eig.eigenvalues[x].abs())
            .then(x.cmp(&y))
    });
    let mut unitary = DMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (col, &k) in order.iter().enumerate() {
        let d = eig.eigenvalues[k];
        let phase = if d >= 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 1.0)
        };
        for row in 0..n {
            unitary[(row, col)] = phase * eig.eigenvectors[(row, k)];
        }
        values.push(d.abs());
    }
    Ok(Takagi { unitary, values })
}

/// Largest Takagi value, equal to the largest singular value and to the
/// spectral radius for real symmetric input.
pub fn max_takagi_value(a: &DMatrix<f64>) -> Result<f64> {
    check_symmetric(a)?;
    if a.nrows() == 0 {
        return Ok(0.0);
    }
    Ok(a.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs())))
}

pub(crate) fn unitarity_error(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - DMatrix::<Complex64>::identity(n, n)).norm()
}
