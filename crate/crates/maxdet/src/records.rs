//! Best known squared determinants over third and fourth roots of unity.
//!
//! Each entry records the largest known `|det M|²` for an `n × n` matrix
//! over μ_ℓ, together with whether that value is *proven* maximal (by a
//! Hadamard/Barba equality argument or an exhaustive Gram-matrix
//! certificate) or merely the best value currently known. Values are stored
//! in factored form and expanded on demand; derived quantities such as bound
//! ratios are always recomputed, never stored.
//!
//! For a handful of unproven orders (ℓ = 3, n = 14…20 and ℓ = 4, n = 17)
//! the witnessing matrices are not part of this crate's catalogue; those
//! rows are data-only and are flagged as such.

use num_bigint::BigUint;
use num_traits::One;

use crate::{Error, Result};

/// A best-known (or proven maximal) squared determinant at order `n`.
#[derive(Clone, Debug)]
pub struct Record {
    pub n: u64,
    pub ell: u32,
    /// `|det M|²` in factored form, base-exponent pairs.
    pub det_sq_factors: &'static [(u64, u32)],
    /// True when the value is proven maximal.
    pub proven: bool,
    /// True when a witness matrix is constructible from this crate
    /// (seed catalogue or constructions); false for data-only rows.
    pub witness_available: bool,
}

impl Record {
    /// The squared determinant as an integer.
    pub fn det_sq(&self) -> BigUint {
        expand(self.det_sq_factors)
    }
}

fn expand(factors: &[(u64, u32)]) -> BigUint {
    let mut acc = BigUint::one();
    for &(b, e) in factors {
        acc *= BigUint::from(b).pow(e);
    }
    acc
}

// Third roots: |det|² at order n. Orders divisible by 3 attain the Hadamard
// bound n^n (Butson matrices exist at 3, 6, 9, 12, 18), orders ≡ 1 (mod 3)
// with a Barba matrix attain (2n−1)(n−1)^{n−1}, and the ≡ 2 orders 5, 8, 11
// carry exhaustive search certificates. Orders 14–20 other than 18 are best
// known values without proof of maximality.
const MU3: &[Record] = &[
    rec(1, 3, &[(1, 1)], true, true),
    rec(2, 3, &[(3, 1)], true, true),
    rec(3, 3, &[(3, 3)], true, true),
    rec(4, 3, &[(3, 3), (7, 1)], true, true),
    rec(5, 3, &[(3, 5), (7, 1)], true, true),
    rec(6, 3, &[(2, 6), (3, 6)], true, true),
    rec(7, 3, &[(2, 6), (3, 6), (13, 1)], true, true),
    rec(8, 3, &[(2, 12), (3, 7)], true, true),
    rec(9, 3, &[(3, 18)], true, true),
    rec(10, 3, &[(3, 18), (19, 1)], true, true),
    rec(11, 3, &[(3, 19), (7, 1), (19, 1)], true, true),
    rec(12, 3, &[(2, 24), (3, 12)], true, true),
    rec(13, 3, &[(2, 24), (3, 12), (5, 2)], true, true),
    rec(14, 3, &[(2, 24), (3, 13), (223, 1)], false, false),
    rec(15, 3, &[(2, 22), (3, 20), (19, 1)], false, false),
    rec(16, 3, &[(2, 24), (3, 23), (7, 1)], false, false),
    rec(17, 3, &[(3, 16), (13, 5), (67, 4)], false, false),
    rec(18, 3, &[(2, 18), (3, 36)], true, true),
    rec(19, 3, &[(3, 18), (13, 1), (37, 2), (342037, 2)], false, false),
    rec(20, 3, &[(3, 19), (7, 6), (37, 6), (127, 1)], false, false),
];

// Fourth roots: even orders attain the Hadamard bound n^n; odd orders attain
// the Barba bound (2n−1)(n−1)^{n−1} except n = 11 and n = 17, which are best
// known values (n = 11 is the smallest open order; its witness is in the
// seed catalogue, the n = 17 witness is not).
const MU4: &[Record] = &[
    rec(1, 4, &[(1, 1)], true, true),
    rec(2, 4, &[(2, 2)], true, true),
    rec(3, 4, &[(2, 2), (5, 1)], true, true),
    rec(4, 4, &[(4, 4)], true, true),
    rec(5, 4, &[(2, 8), (3, 2)], true, true),
    rec(6, 4, &[(6, 6)], true, true),
    rec(7, 4, &[(2, 6), (3, 6), (13, 1)], true, true),
    rec(8, 4, &[(8, 8)], true, true),
    rec(9, 4, &[(2, 24), (17, 1)], true, true),
    rec(10, 4, &[(10, 10)], true, true),
    rec(11, 4, &[(2, 12), (5, 11)], false, true),
    rec(12, 4, &[(12, 12)], true, true),
    rec(13, 4, &[(2, 24), (3, 12), (5, 2)], true, true),
    rec(14, 4, &[(14, 14)], true, true),
    rec(15, 4, &[(2, 14), (7, 14), (29, 1)], true, true),
    rec(16, 4, &[(16, 16)], true, true),
    rec(17, 4, &[(2, 16), (13, 1), (137, 4), (1327, 2)], false, false),
    rec(18, 4, &[(18, 18)], true, true),
    rec(19, 4, &[(2, 18), (3, 36), (37, 1)], true, true),
    rec(20, 4, &[(20, 20)], true, true),
    rec(21, 4, &[(2, 40), (5, 20), (41, 1)], true, true),
    rec(22, 4, &[(22, 22)], true, true),
    rec(23, 4, &[(2, 22), (3, 2), (5, 1), (11, 22)], true, true),
    rec(24, 4, &[(24, 24)], true, true),
    rec(25, 4, &[(2, 72), (3, 24), (7, 2)], true, true),
    rec(26, 4, &[(26, 26)], true, true),
    rec(27, 4, &[(2, 26), (13, 26), (53, 1)], true, true),
];

const fn rec(
    n: u64,
    ell: u32,
    det_sq_factors: &'static [(u64, u32)],
    proven: bool,
    witness_available: bool,
) -> Record {
    Record { n, ell, det_sq_factors, proven, witness_available }
}

/// All records for the given root order (3 or 4), ascending in `n`.
pub fn records(ell: u32) -> Result<&'static [Record]> {
    match ell {
        3 => Ok(MU3),
        4 => Ok(MU4),
        _ => Err(Error::unsupported(format!(
            "record table only covers root orders 3 and 4 (got {ell})"
        ))),
    }
}

/// The record at a single order, if tabulated.
pub fn lookup(n: u64, ell: u32) -> Option<&'static Record> {
    records(ell).ok()?.iter().find(|r| r.n == n)
}
