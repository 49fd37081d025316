//! Fraction-free determinant by one-step Bareiss elimination.
//!
//! Over an integral domain the update
//! `a[i][j] ← (a[k][k]·a[i][j] − a[i][k]·a[k][j]) / prev`
//! keeps every intermediate value equal to a minor of the original matrix,
//! so the division is exact and the final entry is the determinant itself.
//! Rows are swapped (with sign tracking) when a pivot vanishes; an all-zero
//! pivot column means the determinant is zero.

use crate::cyclo::{Basis, CycInt};
use crate::{Error, Result};

/// Exact determinant of a row-major `n × n` matrix over `Z[ω]` or `Z[i]`.
pub(crate) fn det_cyc(basis: Basis, n: usize, mut a: Vec<CycInt>) -> Result<CycInt> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Err(Error::usage("determinant of an empty matrix"));
    }
    let mut sign_flip = false;
    let mut prev = CycInt::one(basis);
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            match (k + 1..n).find(|&i| !a[i * n + k].is_zero()) {
                Some(i) => {
                    for j in 0..n {
                        a.swap(k * n + j, i * n + j);
                    }
                    sign_flip = !sign_flip;
                }
                None => return Ok(CycInt::zero(basis)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k * n + k]
                    .mul(&a[i * n + j])?
                    .sub(&a[i * n + k].mul(&a[k * n + j])?)?;
                a[i * n + j] = num.exact_div(&prev).map_err(|_| {
                    Error::internal("fraction-free elimination hit a non-exact division")
                })?;
            }
        }
        prev = a[k * n + k].clone();
    }
    let det = a[(n - 1) * n + (n - 1)].clone();
    Ok(if sign_flip { det.neg() } else { det })
}
