//! Explicit constructions of large-determinant matrices over roots of unity:
//! Fourier and tensor products, Bush-type block-circulants, row-sum borders,
//! Paley cores built from power-residue characters, design lifts, Barba
//! normalization, and the Turyn doubling from fourth roots to `±1`.
//!
//! Every constructor returns exact data ([`LogMatrix`], [`GenMatrix`], or
//! big-integer determinant values) and is paired with a verification
//! predicate so that each instance can be checked rather than trusted.

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

use crate::cyclo::{Basis, CycInt};
use crate::ffield::{cubic_cyclotomy, FieldTable};
use crate::matrix::{GenMatrix, LogMatrix};
use crate::{Error, Result};

pub mod seeds;

/// The order-`n` Fourier matrix in logarithmic form: exponents `i·j mod n`.
/// A `BH(n, n)` for every `n ≥ 2`.
pub fn fourier(n: u32) -> Result<LogMatrix> {
    if n < 2 {
        return Err(Error::usage("Fourier matrix needs order at least 2"));
    }
    let rows = (0..n)
        .map(|i| (0..n).map(|j| (i * j) % n).collect())
        .collect();
    LogMatrix::new(n, rows)
}

/// Tensor (Kronecker) product of two matrices over the same root order.
/// Exponents add: `(A ⊗ B)[(i1,i2)][(j1,j2)] = A[i1][j1] + B[i2][j2]`.
pub fn tensor(a: &LogMatrix, b: &LogMatrix) -> Result<LogMatrix> {
    if a.ell() != b.ell() {
        return Err(Error::usage(
            "tensor product requires both factors over the same root order",
        ));
    }
    let (na, nb, ell) = (a.n(), b.n(), a.ell());
    let n = na * nb;
    let mut exps = Vec::with_capacity(n * n);
    for i1 in 0..na {
        for i2 in 0..nb {
            for j1 in 0..na {
                for j2 in 0..nb {
                    exps.push((a.exp(i1, j1) + b.exp(i2, j2)) % ell);
                }
            }
        }
    }
    LogMatrix::from_flat(ell, n, exps)
}

/// Bush-type block-circulant of order `n²` built from a dephased `BH(n, ℓ)`.
///
/// With `r_i` the `i`-th row of `H`, the rank-1 block `E_i = r_i* r_i` has
/// logarithmic entries `(E_i)_{ab} = A[i][b] − A[i][a]`; the result is the
/// block-circulant `[E_{(i−j) mod n}]_{ij}`. Its diagonal blocks are all-ones
/// and every off-diagonal block has zero row and column sums, so the output
/// is a `BH(n², ℓ)` with constant row sum `n`.
pub fn bush_type(h: &LogMatrix) -> Result<LogMatrix> {
    let n = h.n();
    let ell = h.ell();
    if h.exps()[..n].iter().any(|&e| e != 0) || (0..n).any(|i| h.exp(i, 0) != 0) {
        return Err(Error::usage("Bush construction requires a dephased matrix"));
    }
    if !h.verify_bh() {
        return Err(Error::usage("Bush construction requires a Butson-type matrix"));
    }
    let m = n * n;
    let mut exps = vec![0u32; m * m];
    for bi in 0..n {
        for bj in 0..n {
            let k = (bi + n - bj) % n; // block E_k at block position (bi, bj)
            for a in 0..n {
                for b in 0..n {
                    let e = (h.exp(k, b) + ell - h.exp(k, a)) % ell;
                    exps[(bi * n + a) * m + (bj * n + b)] = e;
                }
            }
        }
    }
    LogMatrix::from_flat(ell, m, exps)
}

/// The common row sum of `H`, or an error if row sums are not all equal.
pub fn constant_row_sum(h: &LogMatrix) -> Result<CycInt> {
    let basis = Basis::for_order(h.ell())?;
    let n = h.n();
    let mut sum: Option<CycInt> = None;
    for i in 0..n {
        let mut acc = CycInt::zero(basis);
        for j in 0..n {
            acc = acc.add(&h.entry(i, j)?)?;
        }
        match &sum {
            None => sum = Some(acc),
            Some(s) if *s == acc => {}
            Some(_) => return Err(Error::usage("matrix does not have constant row sum")),
        }
    }
    Ok(sum.expect("order is at least 1"))
}

/// The exponent `e` minimizing `2·re(ζ_ℓ^e · s)` where `s` is the constant
/// row sum of `h` — the best unit to apply before [`bordered_rowsum`].
pub fn best_border_unit(h: &LogMatrix) -> Result<u32> {
    let s = constant_row_sum(h)?;
    let mut best = (CycInt::root(h.ell(), 0)?.mul(&s)?.two_re(), 0u32);
    for e in 1..h.ell() {
        let t = CycInt::root(h.ell(), e)?.mul(&s)?.two_re();
        if t < best.0 {
            best = (t, e);
        }
    }
    Ok(best.1)
}

/// Border a constant-row-sum `BH(n, ℓ)` with a row and column of ones:
///
/// ```text
/// M = [ 1  1ᵀ ]
///     [ 1  uH ]
/// ```
///
/// where `u = ζ_ℓ^unit_exp`. The Gram matrix is
/// `[[n+1, (1+s̄)1ᵀ], [(1+s)1, nI+J]]` for `s` the row sum of `uH`, giving
/// the exact squared determinant `(n + 1 − 2·re(s))·nⁿ`. Returns the
/// order-`n+1` matrix together with that value (verified in tests against
/// exact elimination).
pub fn bordered_rowsum(h: &LogMatrix, unit_exp: u32) -> Result<(LogMatrix, BigUint)> {
    let n = h.n();
    let ell = h.ell();
    if unit_exp >= ell {
        return Err(Error::usage("unit exponent out of range for the root order"));
    }
    if !h.verify_bh() {
        return Err(Error::usage("border construction requires a Butson-type matrix"));
    }
    let s = constant_row_sum(h)?;
    let u = CycInt::root(ell, unit_exp)?;
    let two_re = u.mul(&s)?.two_re();

    let m = n + 1;
    let mut exps = vec![0u32; m * m];
    for i in 0..n {
        for j in 0..n {
            exps[(i + 1) * m + (j + 1)] = (h.exp(i, j) + unit_exp) % ell;
        }
    }
    let matrix = LogMatrix::from_flat(ell, m, exps)?;

    // n + 1 − 2·re(us) > 0 always: |s|² = n forces |2·re(us)| ≤ 2√n < n+1.
    let factor = BigInt::from(n as u64 + 1) - two_re;
    debug_assert!(factor.is_positive());
    let det_sq = factor.to_biguint().expect("positive") * BigUint::from(n as u64).pow(n as u32);
    Ok((matrix, det_sq))
}

/// The Paley core `Q_q` over the ℓ-th roots: `Q[i][j] = χ(x_i − x_j)` with
/// `χ` the power-residue character of order ℓ (`χ(γ^a) = ζ_ℓ^a`, `χ(0) = 0`)
/// and `x_0, …, x_{q−1}` the field elements in table order. The diagonal is
/// zero; the core satisfies `QQ* = qI − J` and `QJ = JQ = 0`.
pub fn paley_core(q: u64, ell: u32) -> Result<GenMatrix> {
    if ell < 2 {
        return Err(Error::usage("root order must be at least 2"));
    }
    let table = FieldTable::new(q)?;
    if (q - 1) % ell as u64 != 0 {
        return Err(Error::usage(format!(
            "no order-{ell} character on a field with {q} elements (need q ≡ 1 mod ℓ)"
        )));
    }
    let n = q as usize;
    let mut rows = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = table.sub(i as u64, j as u64);
            rows[i][j] = Some(table.class_of(d, ell)? as u32);
        }
    }
    GenMatrix::new(ell, rows)
}

/// Checks the defining identities of a Paley core `Q` of order `q`: zero
/// diagonal, unimodular off-diagonal entries, zero row sums (`QJ = 0`), and
/// `QQ* = qI − J`, all in exact ring arithmetic. Returns `false` on the
/// first violation.
pub fn paley_core_check(core: &GenMatrix) -> Result<bool> {
    let basis = Basis::for_order(core.ell())?;
    let q = core.n();
    let entry = |i: usize, j: usize| -> Result<CycInt> {
        match core.entry(i, j) {
            Some(e) => CycInt::root(core.ell(), e),
            None => Ok(CycInt::zero(basis)),
        }
    };
    for i in 0..q {
        if core.entry(i, i).is_some() {
            return Ok(false);
        }
        let mut row_sum = CycInt::zero(basis);
        for j in 0..q {
            if i != j && core.entry(i, j).is_none() {
                return Ok(false);
            }
            row_sum = row_sum.add(&entry(i, j)?)?;
        }
        if !row_sum.is_zero() {
            return Ok(false);
        }
        for j in 0..q {
            let mut acc = CycInt::zero(basis);
            for k in 0..q {
                acc = acc.add(&entry(i, k)?.mul(&entry(j, k)?.conj())?)?;
            }
            let expected = if i == j {
                CycInt::from_int(basis, q as i64 - 1)
            } else {
                CycInt::from_int(basis, -1)
            };
            if acc != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Border a Paley core with a zero corner and rows/columns of ones:
/// `W = [[0, 1ᵀ], [1, Q]]`, a weighing matrix of weight `q` and order `q+1`.
pub fn weighing_border(core: &GenMatrix) -> Result<GenMatrix> {
    let n = core.n();
    for i in 0..n {
        if core.entry(i, i).is_some() {
            return Err(Error::usage("weighing border expects a zero-diagonal core"));
        }
    }
    let m = n + 1;
    let mut rows = vec![vec![None; m]; m];
    for j in 1..m {
        rows[0][j] = Some(0);
        rows[j][0] = Some(0);
    }
    for i in 0..n {
        for j in 0..n {
            rows[i + 1][j + 1] = core.entry(i, j);
        }
    }
    GenMatrix::new(core.ell(), rows)
}

/// The unit-shifted bordered Paley matrix `W_q + α·I` of order `q+1`, all of
/// whose entries lie in μ_ℓ (the shift fills the zero diagonal with
/// `α = ζ_ℓ^alpha_exp`). Over the third roots, `α ∈ {ω, ω²}` maximizes the
/// determinant; `α = 1` is allowed for comparison.
pub fn paley_plus_unit(q: u64, ell: u32, alpha_exp: u32) -> Result<LogMatrix> {
    if alpha_exp >= ell {
        return Err(Error::usage("unit exponent out of range for the root order"));
    }
    let w = weighing_border(&paley_core(q, ell)?)?;
    let m = w.n();
    let mut rows = vec![vec![0u32; m]; m];
    for i in 0..m {
        for j in 0..m {
            rows[i][j] = match w.entry(i, j) {
                Some(e) => e,
                None => alpha_exp, // the diagonal, filled by α·I
            };
        }
    }
    LogMatrix::new(ell, rows)
}

/// Closed form for the squared determinant of `W_q + ωI` over third roots.
#[derive(Clone, Debug)]
pub struct PaleyDet {
    /// The cubic-period resolvent value
    /// `(q+2)³ − 3(q+2)² − 3(q−1)(q+2) + (3+c)q − 1`,
    /// where `4q = c² + 27d²`, `c ≡ 1 (mod 3)` is fixed by the cubic
    /// cyclotomic numbers of the field.
    pub bracket: BigInt,
    /// `(q² + q + 1) · bracket^{(q−1)/3}`, the exact value of
    /// `|det(W_q + ωI)|²`.
    pub det_sq: BigUint,
}

/// Evaluate the closed form above. The eigenvalues of the shifted core's
/// Gram matrix are `1` (once) and `(q+2) + 3η_i` (multiplicity `(q−1)/3`
/// each, `η_i` the cubic Gaussian periods), whose product collapses to the
/// integer `bracket`; the border contributes the rational factor
/// `(q² + q + 1)`.
pub fn paley_det_formula(q: u64) -> Result<PaleyDet> {
    let table = FieldTable::new(q)?;
    let c = cubic_cyclotomy(&table)?.c; // errors unless q ≡ 1 (mod 3)
    let qi = BigInt::from(q);
    let s: BigInt = &qi + 2;
    let bracket: BigInt =
        s.pow(3) - 3 * s.pow(2) - 3 * (&qi - 1) * &s + (3 + c) * &qi - 1;
    if !bracket.is_positive() {
        return Err(Error::internal("resolvent value must be positive"));
    }
    let f = ((q - 1) / 3) as u32;
    let det_sq: BigInt = (&qi * &qi + &qi + 1) * bracket.pow(f);
    Ok(PaleyDet {
        bracket,
        det_sq: det_sq.to_biguint().expect("positive"),
    })
}

/// Parameters `(v, k, λ) = (t² + (t+1)², t², C(t,2))` of the symmetric
/// 2-design family whose incidence lift produces Barba matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DesignParams {
    pub t: u64,
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
}

impl DesignParams {
    /// λ = 0 (at `t = 1`): the design degenerates to a permutation matrix.
    pub fn is_degenerate(&self) -> bool {
        self.lambda == 0
    }
}

/// The design parameters for a given `t ≥ 1`. They satisfy the symmetric
/// 2-design identity `(v−1)·λ = k·(k−1)`.
pub fn barba_design_parameters(t: u64) -> DesignParams {
    let v = t * t + (t + 1) * (t + 1);
    let k = t * t;
    let lambda = t * (t - 1) / 2;
    debug_assert_eq!((v - 1) * lambda, k * (k - 1));
    DesignParams { t, v, k, lambda }
}

/// Incidence matrix of the Fano plane as the cyclic development of the
/// difference set `{1, 2, 4}` modulo 7: `D[i][j] = 1 iff (j−i) mod 7` is in
/// the set. Fixed once so the lifted matrix is reproducible.
pub fn fano_incidence() -> Vec<Vec<u8>> {
    (0..7)
        .map(|i| {
            (0..7)
                .map(|j| u8::from(matches!((j + 7 - i) % 7, 1 | 2 | 4)))
                .collect()
        })
        .collect()
}

/// Lift a symmetric 2-design incidence matrix to a matrix over the third
/// roots via `(ω − 1)D + J` — entries `ω` where the design has 1 and `1`
/// elsewhere — returned in logarithmic form (exponents equal the incidence
/// values). Checks the design axioms (constant row and column sum `k`,
/// constant pairwise intersection `λ`, `(v−1)λ = k(k−1)`) and reports the
/// violated identity otherwise.
pub fn barba_from_design(incidence: &[Vec<u8>]) -> Result<LogMatrix> {
    let v = incidence.len();
    if v == 0 || incidence.iter().any(|r| r.len() != v) {
        return Err(Error::usage("incidence matrix must be square and nonempty"));
    }
    if incidence.iter().flatten().any(|&x| x > 1) {
        return Err(Error::usage("incidence entries must be 0 or 1"));
    }
    let k = incidence[0].iter().map(|&x| x as u64).sum::<u64>();
    for (i, row) in incidence.iter().enumerate() {
        let s = row.iter().map(|&x| x as u64).sum::<u64>();
        if s != k {
            return Err(Error::usage(format!(
                "row {i} has sum {s}, expected constant row sum {k}"
            )));
        }
    }
    for j in 0..v {
        let s = incidence.iter().map(|r| r[j] as u64).sum::<u64>();
        if s != k {
            return Err(Error::usage(format!(
                "column {j} has sum {s}, expected constant column sum {k}"
            )));
        }
    }
    let lambda = if v > 1 {
        let l = (0..v)
            .map(|m| (incidence[0][m] & incidence[1][m]) as u64)
            .sum::<u64>();
        for i in 0..v {
            for j in (i + 1)..v {
                let s = (0..v)
                    .map(|m| (incidence[i][m] & incidence[j][m]) as u64)
                    .sum::<u64>();
                if s != l {
                    return Err(Error::usage(format!(
                        "rows {i} and {j} meet in {s} points, expected λ = {l}"
                    )));
                }
            }
        }
        l
    } else {
        0
    };
    if v as u64 > 1 && (v as u64 - 1) * lambda != k * (k - 1) {
        return Err(Error::usage(format!(
            "design identity (v−1)λ = k(k−1) fails: {}·{lambda} ≠ {k}·{}",
            v as u64 - 1,
            k.saturating_sub(1)
        )));
    }
    let rows = incidence
        .iter()
        .map(|r| r.iter().map(|&x| x as u32).collect())
        .collect();
    LogMatrix::new(3, rows)
}

/// Rescale the columns of a Barba matrix (`BB* = (n−1)I + J`) so that the
/// result `N` is also normal (`N*N = NN* = (n−1)I + J`) and therefore has a
/// constant row and column sum `s` with `|s|² = 2n − 1`.
///
/// The scaling divides column `i` by the Gram entry `(B*B)_{i,n}` (last
/// column of the conjugate Gram), which is a root of unity precisely when
/// `B` is Barba. Returns the normalized matrix and the common sum `s`.
pub fn normalize_barba(b: &LogMatrix) -> Result<(LogMatrix, CycInt)> {
    if !b.verify_barba() {
        return Err(Error::usage("input is not a Barba matrix"));
    }
    let n = b.n();
    let ell = b.ell();
    let basis = Basis::for_order(ell)?;
    let roots: Vec<CycInt> = (0..ell)
        .map(|k| CycInt::root(ell, k))
        .collect::<Result<_>>()?;

    // Column Gram entries (B*B)_{i, n−1} = <col_{n−1}, col_i> conjugated:
    // (B*B)_{ij} = sum_k conj(B[k][i]) B[k][j].
    let mut d2 = vec![0u32; n];
    for i in 0..n - 1 {
        let mut counts = vec![0i64; ell as usize];
        for k in 0..n {
            let d = (b.exp(k, n - 1) + ell - b.exp(k, i)) % ell;
            counts[d as usize] += 1;
        }
        let mut g = CycInt::zero(basis);
        for (d, &c) in counts.iter().enumerate() {
            if c != 0 {
                g = g.add(&roots[d as usize].scale(c))?;
            }
        }
        // g = (B*B)_{i, n−1}; it must be a root of unity.
        let e = roots.iter().position(|r| *r == g).ok_or_else(|| {
            Error::domain(format!(
                "column Gram entry ({i}, {}) is not a root of unity; \
                 the matrix is not Barba over μ_{ell}",
                n - 1
            ))
        })?;
        d2[i] = e as u32;
    }

    let id: Vec<usize> = (0..n).collect();
    let none = vec![0u32; n];
    // N = B · diag(ζ^{-d2}); monomial_apply subtracts d2 on columns.
    let normal = b.monomial_apply(&id, &id, &none, &d2)?;
    let s = constant_row_sum(&normal)?;

    // Column sums must agree with s, and |s|² = 2n − 1.
    let mut col = CycInt::zero(basis);
    for k in 0..n {
        col = col.add(&normal.entry(k, 0)?)?;
    }
    if col != s || s.norm() != BigUint::from(2 * n as u64 - 1) {
        return Err(Error::internal("normalization did not produce a normal matrix"));
    }
    Ok((normal, s))
}

/// Entrywise Turyn doubling from fourth roots to `±1`, in logarithmic form:
///
/// ```text
/// 1 ↦ [0 1]   i ↦ [0 0]   −1 ↦ [1 0]   −i ↦ [1 1]
///     [0 0]       [1 0]        [1 1]        [0 1]
/// ```
///
/// Sends `BH(n, 4)` to `BH(2n, 2)` and, more generally, relates squared
/// determinants at order `n` over μ₄ to determinants at order `2n` over μ₂.
pub fn turyn_morphism(m: &LogMatrix) -> Result<LogMatrix> {
    if m.ell() != 4 {
        return Err(Error::usage("Turyn doubling applies to fourth-root matrices"));
    }
    const BLOCKS: [[u32; 4]; 4] = [
        [0, 1, 0, 0], // 1
        [0, 0, 1, 0], // i
        [1, 0, 1, 1], // −1
        [1, 1, 0, 1], // −i
    ];
    let n = m.n();
    let t = 2 * n;
    let mut exps = vec![0u32; t * t];
    for i in 0..n {
        for j in 0..n {
            let b = BLOCKS[m.exp(i, j) as usize];
            exps[(2 * i) * t + 2 * j] = b[0];
            exps[(2 * i) * t + 2 * j + 1] = b[1];
            exps[(2 * i + 1) * t + 2 * j] = b[2];
            exps[(2 * i + 1) * t + 2 * j + 1] = b[3];
        }
    }
    LogMatrix::from_flat(2, t, exps)
}

/// The real form of a fourth-root matrix `M = A + iB`:
///
/// ```text
/// [ A  B ]
/// [−B  A ]
/// ```
///
/// an integer `±1/0` matrix of order `2n` with
/// `det(realify(M)) = |det M|²` exactly.
pub fn realify(m: &LogMatrix) -> Result<Vec<Vec<i64>>> {
    if m.ell() != 4 {
        return Err(Error::usage("realification applies to fourth-root matrices"));
    }
    let n = m.n();
    // i^e = a + b·i with (a, b) ∈ {(1,0), (0,1), (−1,0), (0,−1)}
    let re = [1i64, 0, -1, 0];
    let im = [0i64, 1, 0, -1];
    let mut out = vec![vec![0i64; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let e = m.exp(i, j) as usize;
            out[i][j] = re[e];
            out[i][j + n] = im[e];
            out[i + n][j] = -im[e];
            out[i + n][j + n] = re[e];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::bareiss;
    use num_traits::ToPrimitive;

    fn det_sq_of(m: &LogMatrix) -> BigUint {
        m.det_exact().expect("exact determinant").squared_modulus
    }

    fn int_det(rows: &[Vec<i64>]) -> BigInt {
        let n = rows.len();
        let work: Vec<CycInt> = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| CycInt::from_int(Basis::Gauss, x)))
            .collect();
        let det = bareiss::det_cyc(Basis::Gauss, n, work).expect("integer determinant");
        assert!(det.is_rational());
        det.a().clone()
    }

    #[test]
    fn fourier_matrices_are_butson() {
        for n in [2u32, 3, 4, 6] {
            let f = fourier(n).unwrap();
            assert!(f.verify_bh(), "F_{n} should be Butson");
        }
        // Orders outside the exact rings still construct, and verify
        // through the cyclotomic reducer.
        assert!(fourier(5).unwrap().verify_bh());
        assert!(fourier(1).is_err());
    }

    #[test]
    fn tensor_products_preserve_butson() {
        let f2 = fourier(2).unwrap();
        let f3 = fourier(3).unwrap();
        let s4 = tensor(&f2, &f2).unwrap();
        assert_eq!(s4.n(), 4);
        assert!(s4.verify_bh());
        let t9 = tensor(&f3, &f3).unwrap();
        assert_eq!(t9.n(), 9);
        assert!(t9.verify_bh());
        assert!(tensor(&f2, &f3).is_err());
    }

    #[test]
    fn bush_blocks_have_the_right_row_sums() {
        for base in [fourier(2).unwrap(), fourier(3).unwrap(), tensor(&fourier(2).unwrap(), &fourier(2).unwrap()).unwrap()] {
            let n = base.n();
            let m = bush_type(&base).unwrap();
            assert_eq!(m.n(), n * n);
            assert!(m.verify_bh());
            let basis = Basis::for_order(m.ell()).unwrap();
            // Block row sums: n for diagonal blocks, 0 otherwise.
            for bi in 0..n {
                for a in 0..n {
                    for bj in 0..n {
                        let mut acc = CycInt::zero(basis);
                        for b in 0..n {
                            acc = acc.add(&m.entry(bi * n + a, bj * n + b).unwrap()).unwrap();
                        }
                        let expected = if bi == bj {
                            CycInt::from_int(basis, n as i64)
                        } else {
                            CycInt::zero(basis)
                        };
                        assert_eq!(acc, expected, "block row sum at ({bi},{bj})");
                    }
                }
            }
            // Whole-matrix constant row sum n.
            let s = constant_row_sum(&m).unwrap();
            assert_eq!(s, CycInt::from_int(basis, n as i64));
        }
    }

    #[test]
    fn bush_rejects_non_butson_and_phased_input() {
        let bad = LogMatrix::new(3, vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert!(bush_type(&bad).is_err());
        let f3 = fourier(3).unwrap();
        let phased = f3
            .monomial_apply(&[0, 1, 2], &[0, 1, 2], &[1, 0, 0], &[0; 3])
            .unwrap();
        assert!(bush_type(&phased).is_err());
    }

    #[test]
    fn bordered_hadamard_meets_the_barba_bound_at_order_5() {
        // Order-4 Bush-type over μ₂ has row sum 2; negating gives −2, the
        // minimum. The bordered matrix then attains (4+1+4)·4⁴ = 2304, the
        // squared Barba bound at n = 5.
        let h = bush_type(&fourier(2).unwrap()).unwrap();
        assert_eq!(best_border_unit(&h).unwrap(), 1);
        let (m, det_sq) = bordered_rowsum(&h, 1).unwrap();
        assert_eq!(m.n(), 5);
        assert_eq!(det_sq, BigUint::from(2304u32));
        assert_eq!(det_sq_of(&m), det_sq);
        // The raw border row pairs to 1 + s̄ = −1 against the body; negating
        // that one row turns the Gram into (n−1)I + J on the nose.
        let id: Vec<usize> = (0..5).collect();
        let fixed = m
            .monomial_apply(&id, &id, &[1, 0, 0, 0, 0], &[0; 5])
            .unwrap();
        assert!(fixed.verify_barba());
    }

    #[test]
    fn bordered_cube_root_case_at_order_10() {
        // Order-9 Bush-type over μ₃ has row sum 3; the best unit is ω
        // (2·re(3ω) = −3), achieving (9+1+3)·9⁹ = 13·3¹⁸. This does NOT
        // reach (√9+1)²·9⁹ = 16·3¹⁸ — no cube root drives re(u·3) to −3 —
        // so the bordered family has a genuine gap at this order.
        let h = bush_type(&fourier(3).unwrap()).unwrap();
        let unit = best_border_unit(&h).unwrap();
        assert_eq!(unit, 1);
        let (m, det_sq) = bordered_rowsum(&h, unit).unwrap();
        assert_eq!(m.n(), 10);
        let expected = BigUint::from(13u32) * BigUint::from(3u32).pow(18);
        assert_eq!(det_sq, expected);
        assert_eq!(det_sq_of(&m), det_sq);
        let unattained = BigUint::from(16u32) * BigUint::from(3u32).pow(18);
        assert!(det_sq < unattained, "the (√n+1)² value is not achieved over μ₃");
        // And the unit choice matters: bordering with 1 gives (10−6)·9⁹.
        let (_, worse) = bordered_rowsum(&h, 0).unwrap();
        assert_eq!(worse, BigUint::from(4u32) * BigUint::from(3u32).pow(18));
    }

    #[test]
    fn paley_core_identities() {
        // QQ* = qI − J and QJ = 0, exactly, for all prime powers
        // q ≡ 1 (mod 3) up to 64.
        for q in [4u64, 7, 13, 16, 19, 25, 31, 37, 43, 49, 61, 64] {
            let core = paley_core(q, 3).unwrap();
            assert!(paley_core_check(&core).unwrap(), "core identities at q = {q}");
        }
        // One order spelled out entrywise, so the checker itself is checked.
        let core = paley_core(7, 3).unwrap();
        let basis = Basis::Omega;
        let entry = |i: usize, j: usize| -> CycInt {
            match core.entry(i, j) {
                Some(e) => CycInt::root(3, e).unwrap(),
                None => CycInt::zero(basis),
            }
        };
        for i in 0..7 {
            let mut row_sum = CycInt::zero(basis);
            for j in 0..7 {
                row_sum = row_sum.add(&entry(i, j)).unwrap();
            }
            assert!(row_sum.is_zero(), "QJ = 0 fails at row {i}");
            for j in 0..7 {
                let mut acc = CycInt::zero(basis);
                for k in 0..7 {
                    acc = acc.add(&entry(i, k).mul(&entry(j, k).conj()).unwrap()).unwrap();
                }
                let expected = if i == j {
                    CycInt::from_int(basis, 6)
                } else {
                    CycInt::from_int(basis, -1)
                };
                assert_eq!(acc, expected, "QQ* entry ({i},{j})");
            }
        }
        // The checker rejects a matrix that merely has the right shape:
        // J − I has nonzero row sums.
        let j_minus_i = GenMatrix::new(
            3,
            (0..4)
                .map(|i| (0..4).map(|j| (i != j).then_some(0)).collect())
                .collect(),
        )
        .unwrap();
        assert!(!paley_core_check(&j_minus_i).unwrap());
    }

    #[test]
    fn paley_border_is_a_weighing_matrix() {
        for q in [4u64, 7, 13] {
            let w = weighing_border(&paley_core(q, 3).unwrap()).unwrap();
            assert_eq!(w.n(), q as usize + 1);
            assert!(w.verify_weighing(q as usize));
        }
        // Non-residue orders are rejected.
        assert!(paley_core(8, 3).is_err());
        assert!(paley_core(5, 3).is_err());
    }

    #[test]
    fn shifted_paley_matrices_hit_the_closed_form() {
        for (q, expected) in [
            (4u64, BigUint::from(1701u32)),
            (7, BigUint::from(7_022_457u64)),
            (13, BigUint::from(183u64) * BigUint::from(2133u64).pow(4)),
        ] {
            let m = paley_plus_unit(q, 3, 1).unwrap();
            assert_eq!(m.n(), q as usize + 1);
            let formula = paley_det_formula(q).unwrap();
            assert_eq!(formula.det_sq, expected, "closed form at q = {q}");
            assert_eq!(det_sq_of(&m), expected, "exact determinant at q = {q}");
        }
        // Bracket values pinned: 81, 351, 2133.
        assert_eq!(paley_det_formula(4).unwrap().bracket, BigInt::from(81));
        assert_eq!(paley_det_formula(7).unwrap().bracket, BigInt::from(351));
        assert_eq!(paley_det_formula(13).unwrap().bracket, BigInt::from(2133));
    }

    #[test]
    fn shifted_paley_prefers_omega_over_one() {
        // |α² − q| is maximized by α = ω: √(q²+q+1) > q − 1.
        let with_omega = det_sq_of(&paley_plus_unit(4, 3, 1).unwrap());
        let with_one = det_sq_of(&paley_plus_unit(4, 3, 0).unwrap());
        assert!(with_omega > with_one);
        assert_eq!(
            with_omega.to_u64().unwrap(),
            1701,
            "ω-shift reproduces the order-5 record"
        );
    }

    #[test]
    fn design_parameter_family() {
        assert_eq!(
            barba_design_parameters(2),
            DesignParams { t: 2, v: 13, k: 4, lambda: 1 }
        );
        let degenerate = barba_design_parameters(1);
        assert_eq!((degenerate.v, degenerate.k, degenerate.lambda), (5, 1, 0));
        assert!(degenerate.is_degenerate());
        for t in 1..40u64 {
            let p = barba_design_parameters(t);
            assert_eq!((p.v - 1) * p.lambda, p.k * (p.k - 1));
        }
    }

    #[test]
    fn fano_lift_is_barba() {
        let b = barba_from_design(&fano_incidence()).unwrap();
        assert_eq!(b.n(), 7);
        assert!(b.verify_barba());
        // (2n−1)(n−1)^{n−1} = 13·6⁶.
        assert_eq!(
            det_sq_of(&b),
            BigUint::from(13u32) * BigUint::from(6u32).pow(6)
        );
    }

    #[test]
    fn design_lift_rejects_bad_incidence() {
        let mut skewed = fano_incidence();
        skewed[0][0] ^= 1; // break the constant row sum
        let err = barba_from_design(&skewed).unwrap_err();
        assert!(err.to_string().contains("row"), "got: {err}");
        let not_design = vec![
            vec![1, 1, 0, 0],
            vec![1, 1, 0, 0],
            vec![0, 0, 1, 1],
            vec![0, 0, 1, 1],
        ];
        assert!(barba_from_design(&not_design).is_err());
    }

    #[test]
    fn normalization_produces_constant_sums() {
        for (seed, n) in [
            (seeds::b4(), 4usize),
            (seeds::b7(), 7),
            (seeds::b10(), 10),
            (seeds::b13(), 13),
        ] {
            let (normal, s) = normalize_barba(&seed).unwrap();
            assert_eq!(normal.n(), n);
            assert!(normal.verify_barba());
            assert_eq!(s.norm(), BigUint::from(2 * n as u64 - 1), "|s|² = 2n−1 at n = {n}");
            // Row and column sums both equal s.
            assert_eq!(constant_row_sum(&normal).unwrap(), s);
        }
        // B₄ is already normal with row sum 3 + ω.
        let (n4, s4) = normalize_barba(&seeds::b4()).unwrap();
        assert_eq!(n4.exps(), seeds::b4().exps());
        assert_eq!(s4, CycInt::new(Basis::Omega, 3, 1));
        // Non-Barba input is rejected.
        assert!(normalize_barba(&fourier(3).unwrap()).is_err());
    }

    #[test]
    fn turyn_doubling_sends_butson_to_butson() {
        let m = LogMatrix::new(4, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(m.verify_bh());
        let doubled = turyn_morphism(&m).unwrap();
        assert_eq!(doubled.n(), 4);
        assert_eq!(doubled.ell(), 2);
        assert!(doubled.verify_bh());

        let f4 = fourier(4).unwrap();
        let doubled = turyn_morphism(&f4).unwrap();
        assert_eq!(doubled.n(), 8);
        assert!(doubled.verify_bh());

        assert!(turyn_morphism(&fourier(3).unwrap()).is_err());
    }

    #[test]
    fn realification_squares_the_determinant() {
        // [i] → [[0,1],[−1,0]], determinant 1 = |i|².
        let unit = LogMatrix::new(4, vec![vec![1]]).unwrap();
        let r = realify(&unit).unwrap();
        assert_eq!(r, vec![vec![0, 1], vec![-1, 0]]);
        assert_eq!(int_det(&r), BigInt::from(1));

        let f4 = fourier(4).unwrap();
        let det_sq = det_sq_of(&f4);
        let real = int_det(&realify(&f4).unwrap());
        assert_eq!(real.magnitude(), &det_sq);
        assert!(!real.is_negative());
    }
}
