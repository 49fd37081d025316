//! Embedded seed matrices: the Barba witnesses at orders 4, 7, 10, 13 over
//! the third roots, the determinant-record matrices at orders 5, 8, 11 over
//! the third roots, and the order-11 record candidate over the fourth roots.
//!
//! Everything is stored logarithmically (exponent tables) and verified by
//! tests: Barba seeds against `BB* = (n−1)I + J`, record seeds against their
//! block-pattern Gram matrices and exact squared determinants.

use crate::matrix::LogMatrix;
use crate::{Error, Result};

/// Names accepted by [`by_name`], in catalog order.
pub const NAMES: [&str; 8] = ["b4", "b7", "b10", "b13", "m5", "m8", "m11", "w11"];

/// Look up a seed by its catalog name.
pub fn by_name(name: &str) -> Result<LogMatrix> {
    match name {
        "b4" => Ok(b4()),
        "b7" => Ok(b7()),
        "b10" => Ok(b10()),
        "b13" => Ok(b13()),
        "m5" => Ok(m5()),
        "m8" => Ok(m8()),
        "m11" => Ok(m11()),
        "w11" => Ok(w11()),
        other => Err(Error::usage(format!(
            "unknown seed '{other}'; available: {}",
            NAMES.join(", ")
        ))),
    }
}

fn from_rows(ell: u32, rows: &[&[u32]]) -> LogMatrix {
    LogMatrix::new(ell, rows.iter().map(|r| r.to_vec()).collect())
        .expect("embedded seed data is well-formed")
}

/// Order-4 Barba matrix over the third roots: `ωI + (J − I)`.
pub fn b4() -> LogMatrix {
    let rows = (0..4)
        .map(|i| (0..4).map(|j| u32::from(i == j)).collect())
        .collect();
    LogMatrix::new(3, rows).expect("embedded seed data is well-formed")
}

/// Order-7 Barba matrix over the third roots: the lift `(ω−1)D + J` of the
/// Fano plane developed from the difference set `{1, 2, 4}` modulo 7.
pub fn b7() -> LogMatrix {
    let rows = (0..7u32)
        .map(|i| {
            (0..7u32)
                .map(|j| u32::from(matches!((j + 7 - i) % 7, 1 | 2 | 4)))
                .collect()
        })
        .collect();
    LogMatrix::new(3, rows).expect("embedded seed data is well-formed")
}

/// Order-10 Barba matrix over the third roots (built on the Petersen graph).
pub fn b10() -> LogMatrix {
    from_rows(
        3,
        &[
            &[0, 2, 1, 2, 1, 1, 2, 2, 2, 2],
            &[2, 0, 2, 2, 2, 1, 2, 1, 1, 2],
            &[1, 2, 0, 1, 2, 2, 2, 2, 1, 2],
            &[2, 2, 1, 0, 2, 2, 2, 1, 2, 1],
            &[1, 2, 2, 2, 0, 2, 1, 1, 2, 2],
            &[1, 1, 2, 2, 2, 0, 2, 2, 2, 1],
            &[2, 2, 2, 2, 1, 2, 0, 2, 1, 1],
            &[2, 1, 2, 1, 1, 2, 2, 0, 2, 2],
            &[2, 1, 1, 2, 2, 2, 1, 2, 0, 2],
            &[2, 2, 2, 1, 2, 1, 1, 2, 2, 0],
        ],
    )
}

/// Order-13 Barba matrix over the third roots (built on the order-13 Paley
/// graph).
pub fn b13() -> LogMatrix {
    from_rows(
        3,
        &[
            &[0, 1, 2, 2, 1, 2, 2, 1, 1, 1, 1, 2, 2],
            &[1, 0, 2, 2, 2, 1, 1, 1, 1, 2, 2, 1, 2],
            &[2, 2, 0, 1, 2, 1, 2, 2, 1, 1, 1, 1, 2],
            &[2, 2, 1, 0, 2, 2, 1, 1, 1, 1, 2, 2, 1],
            &[1, 2, 2, 2, 0, 2, 1, 2, 2, 1, 1, 1, 1],
            &[2, 1, 1, 2, 2, 0, 2, 1, 2, 2, 1, 1, 1],
            &[2, 1, 2, 1, 1, 2, 0, 2, 1, 2, 2, 1, 1],
            &[1, 1, 2, 1, 2, 1, 2, 0, 2, 1, 2, 2, 1],
            &[1, 1, 1, 1, 2, 2, 1, 2, 0, 2, 1, 2, 2],
            &[1, 2, 1, 1, 1, 2, 2, 1, 2, 0, 2, 1, 2],
            &[1, 2, 1, 2, 1, 1, 2, 2, 1, 2, 0, 2, 1],
            &[2, 1, 1, 2, 1, 1, 1, 2, 2, 1, 2, 0, 2],
            &[2, 2, 2, 1, 1, 1, 1, 1, 2, 2, 1, 2, 0],
        ],
    )
}

/// The balanced, normal order-5 determinant-record matrix over the third
/// roots (`|det|² = 1701`). Its Gram matrix has 2×2 diagonal blocks
/// `[[5, 2], [2, 5]]` (plus a trailing `[5]`) and −1 elsewhere.
pub fn m5() -> LogMatrix {
    from_rows(
        3,
        &[
            &[2, 2, 1, 0, 1],
            &[2, 2, 0, 1, 1],
            &[1, 0, 2, 2, 1],
            &[0, 1, 2, 2, 1],
            &[1, 1, 1, 1, 2],
        ],
    )
}

/// The order-8 determinant-record matrix over the third roots
/// (`|det|² = 2¹²·3⁷ = 8 957 952`). Its Gram matrix has four 2×2 diagonal
/// blocks `[[8, 2], [2, 8]]` and −1 elsewhere, and it is normal.
pub fn m8() -> LogMatrix {
    from_rows(
        3,
        &[
            &[2, 0, 0, 2, 1, 1, 0, 0],
            &[0, 2, 2, 0, 1, 1, 0, 0],
            &[0, 2, 0, 2, 0, 0, 1, 1],
            &[2, 0, 2, 0, 0, 0, 1, 1],
            &[0, 0, 1, 1, 2, 0, 2, 0],
            &[0, 0, 1, 1, 0, 2, 0, 2],
            &[1, 1, 0, 0, 2, 0, 0, 2],
            &[1, 1, 0, 0, 0, 2, 2, 0],
        ],
    )
}

/// The order-11 determinant-record matrix over the third roots
/// (`|det|² = 3¹⁹·7·19`). Its Gram matrix has diagonal blocks of sizes
/// 4, 4, 3 filled with 2 off the diagonal, and −1 across blocks.
pub fn m11() -> LogMatrix {
    from_rows(
        3,
        &[
            &[0, 1, 0, 0, 1, 1, 2, 1, 1, 1, 1],
            &[2, 0, 0, 0, 1, 2, 1, 2, 2, 1, 1],
            &[0, 0, 2, 0, 2, 2, 1, 1, 1, 2, 1],
            &[0, 0, 0, 2, 2, 1, 1, 2, 1, 1, 2],
            &[1, 1, 2, 2, 2, 0, 0, 0, 2, 1, 1],
            &[1, 2, 1, 1, 0, 0, 1, 0, 1, 1, 1],
            &[2, 1, 2, 1, 0, 2, 0, 0, 1, 1, 2],
            &[2, 1, 1, 2, 0, 0, 0, 2, 1, 2, 1],
            &[1, 1, 2, 1, 1, 1, 1, 2, 0, 2, 0],
            &[1, 1, 1, 2, 1, 2, 1, 1, 0, 0, 2],
            &[2, 1, 1, 1, 2, 1, 1, 1, 2, 0, 0],
        ],
    )
}

/// The symmetric order-11 record candidate over the fourth roots
/// (`|det|² = 2¹²·5¹¹ = 2·10¹¹`, the largest known value at this order;
/// maximality is open). Its Gram matrix has two 5-cliques of `+1` entries
/// joined through a middle vertex, and −1 elsewhere.
pub fn w11() -> LogMatrix {
    from_rows(
        4,
        &[
            &[3, 0, 1, 0, 1, 0, 1, 3, 2, 2, 3],
            &[0, 0, 0, 3, 1, 2, 3, 0, 2, 3, 2],
            &[1, 0, 0, 1, 2, 2, 2, 2, 1, 2, 3],
            &[0, 3, 1, 0, 0, 2, 3, 2, 3, 2, 0],
            &[1, 1, 2, 0, 0, 2, 2, 3, 2, 1, 2],
            &[0, 2, 2, 2, 2, 0, 0, 2, 2, 2, 2],
            &[1, 3, 2, 3, 2, 0, 3, 0, 1, 1, 0],
            &[3, 0, 2, 2, 3, 2, 0, 0, 0, 1, 3],
            &[2, 2, 1, 3, 2, 2, 1, 0, 0, 2, 1],
            &[2, 3, 2, 2, 1, 2, 1, 1, 2, 0, 0],
            &[3, 2, 3, 0, 2, 2, 0, 3, 1, 0, 0],
        ],
    )
}
