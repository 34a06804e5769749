//! Hafnians.
//!
//! Integer matrices use the inclusion–exclusion identity
//!
//! ```text
//! haf(A) = 1/k! · Σ_{S ⊆ [2k]} (-1)^{|S|} e(S)^k,   e(S) = Σ_{i<j ∈ S} A_ij
//! ```
//!
//! evaluated in Gray-code order in exact `i128` arithmetic. Real matrices use
//! a matching recursion over multiplicity vectors, which stays numerically
//! stable and handles repeated rows and columns directly.

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Exact hafnian of a symmetric integer matrix. Odd sizes give 0, the empty
/// matrix gives 1.
pub fn hafnian_exact(m: &[Vec<i64>]) -> Result<i128> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::arg("hafnian needs a square matrix"));
        }
        for j in 0..i {
            if row[j] != m[j][i] {
                return Err(Error::arg("hafnian needs a symmetric matrix"));
            }
        }
    }
    if n % 2 == 1 {
        return Ok(0);
    }
    if n == 0 {
        return Ok(1);
    }
    if n > 40 {
        return Err(Error::arg("exact hafnian limited to size 40"));
    }
    let k = (n / 2) as u32;
    let overflow = || Error::arg("hafnian overflows i128");

    // Gray-code walk over subsets; `weight` tracks e(S).
    let mut in_set = vec![false; n];
    let mut weight: i128 = 0;
    let mut size = 0usize;
    // S = {} contributes 0^k = 0 for k >= 1.
    let mut total: i128 = 0;
    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        let delta: i128 = (0..n)
            .filter(|&u| in_set[u] && u != v)
            .map(|u| m[u][v] as i128)
            .sum();
        if in_set[v] {
            weight -= delta;
            size -= 1;
        } else {
            weight += delta;
            size += 1;
        }
        in_set[v] = !in_set[v];
        let term = weight.checked_pow(k).ok_or_else(overflow)?;
        total = if size.is_multiple_of(2) {
            total.checked_add(term)
        } else {
            total.checked_sub(term)
        }
        .ok_or_else(overflow)?;
    }
    let fact: i128 = (1..=k as i128).product();
    debug_assert_eq!(total % fact, 0);
    Ok(total / fact)
}

/// Hafnian of a real symmetric matrix (diagonal ignored).
pub fn hafnian(m: &DMatrix<f64>) -> f64 {
    let reps = vec![1; m.nrows()];
    hafnian_repeated(m, &reps)
}

/// Hafnian of the matrix obtained from `m` by repeating row and column `i`
/// `reps[i]` times. Pairing two copies of the same index uses the diagonal
/// entry `m[(i, i)]`.
pub fn hafnian_repeated(m: &DMatrix<f64>, reps: &[usize]) -> f64 {
    debug_assert_eq!(m.nrows(), reps.len());
    let idx: Vec<usize> = (0..reps.len()).filter(|&i| reps[i] > 0).collect();
    let counts: Vec<usize> = idx.iter().map(|&i| reps[i]).collect();
    let total: usize = counts.iter().sum();
    if total % 2 == 1 {
        return 0.0;
    }
    if total == 0 {
        return 1.0;
    }
    let k = idx.len();
    let mut stride = vec![1usize; k + 1];
    for a in 0..k {
        stride[a + 1] = stride[a] * (counts[a] + 1);
    }
    let states = stride[k];
    let mut dp = vec![0.0f64; states];
    dp[0] = 1.0;
    let mut c = vec![0usize; k];
    let mut parity = 0usize;
    for s in 1..states {
        // odometer increment
        let mut a = 0;
        loop {
            if c[a] < counts[a] {
                c[a] += 1;
                parity += 1;
                break;
            }
            parity -= c[a];
            c[a] = 0;
            a += 1;
        }
        if parity % 2 == 1 {
            continue;
        }
        let i = c.iter().position(|&x| x > 0).expect("nonzero state");
        let mi = idx[i];
        let mut acc = 0.0;
        if c[i] >= 2 {
            acc += (c[i] - 1) as f64 * m[(mi, mi)] * dp[s - 2 * stride[i]];
        }
        for j in i + 1..k {
            if c[j] > 0 {
                let w = m[(mi, idx[j])];
                if w != 0.0 {
                    acc += c[j] as f64 * w * dp[s - stride[i] - stride[j]];
                }
            }
        }
        dp[s] = acc;
    }
    dp[states - 1]
}
