//! Matrices over roots of unity in logarithmic (exponent) form, their exact
//! Gram matrices, and exact determinants.
//!
//! A matrix `M` with entries in μ_ℓ is stored as the integer exponent matrix
//! `A` with `M_jk = ζ_ℓ^{A_jk}` ([`LogMatrix`]). Zero entries occur only in
//! weighing-type intermediates and live in the extended alphabet
//! `{0} ∪ μ_ℓ` ([`GenMatrix`]); a proper `LogMatrix` never contains zeros.
//!
//! Everything on a decision path is exact: Gram matrices have [`CycInt`]
//! entries, determinants are computed by fraction-free (Bareiss) elimination
//! over the entry ring, and the structural predicates (`MM* = nI`,
//! `WW* = wI`, `BB* = (n−1)I + J`) are decided by reducing inner-product
//! count polynomials modulo the ℓ-th cyclotomic polynomial — which also makes
//! them available for root orders outside the exact-arithmetic four.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::cyclo::{Basis, CycInt};
use crate::{Error, Result};

pub(crate) mod bareiss;
mod textfmt;

pub use textfmt::parse_matrix;

/// An `n × n` matrix over μ_ℓ in logarithmic form: entry `(j, k)` is
/// `ζ_ℓ^{exps[j][k]}` with every exponent in `[0, ℓ)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LogMatrix {
    n: usize,
    ell: u32,
    exps: Vec<u32>, // row-major
}

impl LogMatrix {
    pub fn new(ell: u32, rows: Vec<Vec<u32>>) -> Result<LogMatrix> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::usage("matrix order must be at least 1"));
        }
        if ell < 2 {
            return Err(Error::usage("root order must be at least 2"));
        }
        let mut exps = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::usage(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &e in row {
                if e >= ell {
                    return Err(Error::usage(format!(
                        "exponent {e} out of range for root order {ell}"
                    )));
                }
                exps.push(e);
            }
        }
        Ok(LogMatrix { n, ell, exps })
    }

    pub fn from_flat(ell: u32, n: usize, exps: Vec<u32>) -> Result<LogMatrix> {
        if exps.len() != n * n {
            return Err(Error::usage("flat exponent vector has wrong length"));
        }
        let rows = exps.chunks(n).map(|r| r.to_vec()).collect();
        LogMatrix::new(ell, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn exp(&self, i: usize, j: usize) -> u32 {
        self.exps[i * self.n + j]
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    /// Entry as an exact cyclotomic integer (orders 2, 3, 4, 6).
    pub fn entry(&self, i: usize, j: usize) -> Result<CycInt> {
        CycInt::root(self.ell, self.exp(i, j))
    }

    /// The exact Gram matrix `G = M M*`.
    pub fn gram(&self) -> Result<GramMatrix> {
        let basis = Basis::for_order(self.ell)?;
        let roots: Vec<CycInt> = (0..self.ell)
            .map(|k| CycInt::root(self.ell, k))
            .collect::<Result<_>>()?;
        let n = self.n;
        let mut entries = vec![CycInt::zero(basis); n * n];
        for i in 0..n {
            for j in i..n {
                // <row_i, row_j> = sum_k zeta^(A_ik - A_jk)
                let mut counts = vec![0i64; self.ell as usize];
                for k in 0..n {
                    let d = (self.exp(i, k) + self.ell - self.exp(j, k)) % self.ell;
                    counts[d as usize] += 1;
                }
                let mut acc = CycInt::zero(basis);
                for (d, &c) in counts.iter().enumerate() {
                    if c != 0 {
                        acc = acc.add(&roots[d].scale(c))?;
                    }
                }
                entries[j * n + i] = acc.conj();
                entries[i * n + j] = acc;
            }
        }
        GramMatrix::new(self.ell, n, entries)
    }

    /// Exact determinant (orders 2, 3, 4, 6).
    pub fn det_exact(&self) -> Result<DetValue> {
        let basis = Basis::for_order(self.ell)?;
        let mut work = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                work.push(self.entry(i, j)?);
            }
        }
        let det = bareiss::det_cyc(basis, self.n, work)?;
        Ok(DetValue { squared_modulus: det.norm(), det: Some(det) })
    }

    /// Is `M M* = n I` (Butson-type)? Exact for every root order via
    /// reduction modulo the ℓ-th cyclotomic polynomial.
    pub fn verify_bh(&self) -> bool {
        let red = CycloReducer::new(self.ell);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let mut counts = vec![0i64; self.ell as usize];
                for k in 0..self.n {
                    let d = (self.exp(i, k) + self.ell - self.exp(j, k)) % self.ell;
                    counts[d as usize] += 1;
                }
                if !red.sums_to_zero(&counts) {
                    return false;
                }
            }
        }
        true
    }

    /// Is `M M* = (n−1)I + J` (Barba-type)? Exact for every root order.
    pub fn verify_barba(&self) -> bool {
        let red = CycloReducer::new(self.ell);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let mut counts = vec![0i64; self.ell as usize];
                for k in 0..self.n {
                    let d = (self.exp(i, k) + self.ell - self.exp(j, k)) % self.ell;
                    counts[d as usize] += 1;
                }
                // <row_i, row_j> must equal exactly 1.
                counts[0] -= 1;
                if !red.sums_to_zero(&counts) {
                    return false;
                }
            }
        }
        true
    }

    /// Row/column-permuted, diagonally rescaled copy
    /// `N = Δ₁ P M (Δ₂ Q)*` in logarithmic form:
    /// `N[i][j] = d1[i] + M[p[i]][q[j]] − d2[j] (mod ℓ)`.
    ///
    /// `p` and `q` are permutations of `0..n` (row `i` of `N` draws from row
    /// `p[i]` of `M`), `d1`/`d2` are exponent vectors for the diagonal root
    /// scalings.
    pub fn monomial_apply(
        &self,
        p: &[usize],
        q: &[usize],
        d1: &[u32],
        d2: &[u32],
    ) -> Result<LogMatrix> {
        let n = self.n;
        if p.len() != n || q.len() != n || d1.len() != n || d2.len() != n {
            return Err(Error::usage("monomial data must all have length n"));
        }
        for perm in [p, q] {
            let mut seen = vec![false; n];
            for &x in perm {
                if x >= n || seen[x] {
                    return Err(Error::usage("not a permutation of 0..n"));
                }
                seen[x] = true;
            }
        }
        let mut exps = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = (d1[i] % self.ell + self.exp(p[i], q[j]) + self.ell
                    - d2[j] % self.ell)
                    % self.ell;
                exps.push(e);
            }
        }
        Ok(LogMatrix { n, ell: self.ell, exps })
    }

    /// Equivalent matrix with all-zero first row and column (divide row `i`
    /// by `M[i][0]` and column `j` by the resulting first-row entry).
    pub fn dephase(&self) -> LogMatrix {
        let n = self.n;
        let l = self.ell;
        let mut exps = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = (self.exp(i, j) + 2 * l - self.exp(i, 0) - self.exp(0, j)
                    + self.exp(0, 0))
                    % l;
                exps.push(e);
            }
        }
        LogMatrix { n, ell: l, exps }
    }

    pub fn to_text(&self) -> String {
        textfmt::format_log(self)
    }
}

impl fmt::Debug for LogMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogMatrix(n={}, ell={})", self.n, self.ell)
    }
}

/// A matrix over `{0} ∪ μ_ℓ`: entry `None` is zero, `Some(e)` is `ζ_ℓ^e`.
/// Used for weighing-type matrices (Paley cores and their borders).
#[derive(Clone, PartialEq, Eq)]
pub struct GenMatrix {
    n: usize,
    ell: u32,
    entries: Vec<Option<u32>>,
}

impl GenMatrix {
    pub fn new(ell: u32, rows: Vec<Vec<Option<u32>>>) -> Result<GenMatrix> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::usage("matrix order must be at least 1"));
        }
        if ell < 2 {
            return Err(Error::usage("root order must be at least 2"));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::usage(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &e in row {
                if let Some(e) = e {
                    if e >= ell {
                        return Err(Error::usage(format!(
                            "exponent {e} out of range for root order {ell}"
                        )));
                    }
                }
                entries.push(e);
            }
        }
        Ok(GenMatrix { n, ell, entries })
    }

    pub fn from_log(m: &LogMatrix) -> GenMatrix {
        GenMatrix {
            n: m.n,
            ell: m.ell,
            entries: m.exps.iter().map(|&e| Some(e)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<u32> {
        self.entries[i * self.n + j]
    }

    /// Reinterpret as a zero-free matrix, or fail on the first zero.
    pub fn to_log(&self) -> Result<LogMatrix> {
        let exps = self
            .entries
            .iter()
            .map(|e| e.ok_or_else(|| Error::domain("matrix contains zero entries")))
            .collect::<Result<Vec<u32>>>()?;
        Ok(LogMatrix { n: self.n, ell: self.ell, exps })
    }

    /// Is `W W* = w I` (generalized weighing matrix of weight `w`)?
    pub fn verify_weighing(&self, w: usize) -> bool {
        let red = CycloReducer::new(self.ell);
        for i in 0..self.n {
            let nonzero = (0..self.n).filter(|&k| self.entry(i, k).is_some()).count();
            if nonzero != w {
                return false;
            }
            for j in (i + 1)..self.n {
                let mut counts = vec![0i64; self.ell as usize];
                for k in 0..self.n {
                    if let (Some(a), Some(b)) = (self.entry(i, k), self.entry(j, k)) {
                        counts[((a + self.ell - b) % self.ell) as usize] += 1;
                    }
                }
                if !red.sums_to_zero(&counts) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_text(&self) -> String {
        textfmt::format_gen(self)
    }
}

impl fmt::Debug for GenMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenMatrix(n={}, ell={})", self.n, self.ell)
    }
}

/// Exact Hermitian Gram matrix with constant diagonal `n`.
#[derive(Clone, PartialEq, Eq)]
pub struct GramMatrix {
    n: usize,
    ell: u32,
    basis: Basis,
    entries: Vec<CycInt>,
}

impl GramMatrix {
    /// Validates Hermitian symmetry and a constant positive rational diagonal.
    ///
    /// The diagonal value is usually the order of the underlying matrix, but
    /// principal submatrices of a Gram matrix keep the ambient diagonal, so it
    /// is allowed to exceed `n`.
    pub fn new(ell: u32, n: usize, entries: Vec<CycInt>) -> Result<GramMatrix> {
        let basis = Basis::for_order(ell)?;
        if n == 0 {
            return Err(Error::usage("Gram matrix must have positive order"));
        }
        if entries.len() != n * n {
            return Err(Error::usage("Gram entry vector has wrong length"));
        }
        let diag = entries[0].clone();
        if !diag.is_rational() || !diag.a().is_positive() {
            return Err(Error::domain(
                "Gram diagonal must be a positive rational integer",
            ));
        }
        for i in 0..n {
            if entries[i * n + i] != diag {
                return Err(Error::domain(format!(
                    "Gram diagonal entry {i} differs from entry 0"
                )));
            }
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i].conj() {
                    return Err(Error::domain("Gram matrix is not Hermitian"));
                }
            }
        }
        Ok(GramMatrix { n, ell, basis, entries })
    }

    /// The common diagonal value.
    pub fn diag(&self) -> &BigInt {
        self.entries[0].a()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn entry(&self, i: usize, j: usize) -> &CycInt {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[CycInt] {
        &self.entries
    }

    /// Exact determinant; always a rational integer for Hermitian input.
    pub fn det_exact(&self) -> Result<BigInt> {
        let det = bareiss::det_cyc(self.basis, self.n, self.entries.clone())?;
        if !det.is_rational() {
            return Err(Error::internal(
                "Hermitian determinant came out non-real".to_string(),
            ));
        }
        Ok(det.a().clone())
    }

}

impl fmt::Debug for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GramMatrix(n={}, ell={}):", self.n, self.ell)?;
        for i in 0..self.n {
            let row: Vec<String> =
                (0..self.n).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// JSON form: `{"n": …, "ell": …, "ring": "w"|"i", "entries": [[[a,b],…],…]}`
/// with coordinates as decimal strings.
impl Serialize for GramMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("ell", &self.ell)?;
        map.serialize_entry("ring", self.basis.tag())?;
        let rows: Vec<&[CycInt]> = self.entries.chunks(self.n).collect();
        map.serialize_entry("entries", &rows)?;
        map.end()
    }
}

/// An exact determinant value: `squared_modulus = |det M|² = det(M M*)`,
/// and the determinant itself when the entry ring is available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetValue {
    pub squared_modulus: BigUint,
    pub det: Option<CycInt>,
}

impl Serialize for DetValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("det2", &UintAsNumber(&self.squared_modulus))?;
        if let Some(det) = &self.det {
            map.serialize_entry("det", det)?;
            map.serialize_entry("ring", det.basis().tag())?;
        }
        map.end()
    }
}

/// Serializes a `BigUint` as a lossless JSON number (requires the
/// arbitrary-precision backing of `serde_json`).
pub fn serialize_uint<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    let n: serde_json::Number =
        x.to_string().parse().map_err(serde::ser::Error::custom)?;
    n.serialize(s)
}

pub(crate) struct UintAsNumber<'a>(pub &'a BigUint);

impl Serialize for UintAsNumber<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_uint(self.0, s)
    }
}

/// Serializes a `BigInt` the same way.
pub fn serialize_int<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    let n: serde_json::Number =
        x.to_string().parse().map_err(serde::ser::Error::custom)?;
    n.serialize(s)
}

/// Decides whether integer combinations of ℓ-th roots vanish, by polynomial
/// remainder modulo the ℓ-th cyclotomic polynomial. Exact for every ℓ.
struct CycloReducer {
    ell: u32,
    /// Monic; coefficients ascending.
    phi: Vec<BigInt>,
}

impl CycloReducer {
    fn new(ell: u32) -> CycloReducer {
        CycloReducer { ell, phi: cyclotomic_poly(ell) }
    }

    /// Does `Σ_k counts[k] ζ_ℓ^k = 0`?
    fn sums_to_zero(&self, counts: &[i64]) -> bool {
        debug_assert_eq!(counts.len(), self.ell as usize);
        let mut poly: Vec<BigInt> = counts.iter().map(|&c| BigInt::from(c)).collect();
        // Remainder modulo the monic phi.
        let deg = self.phi.len() - 1;
        for k in (deg..poly.len()).rev() {
            if poly[k].is_zero() {
                continue;
            }
            let lead = std::mem::take(&mut poly[k]);
            for (i, c) in self.phi[..deg].iter().enumerate() {
                let adj = &lead * c;
                poly[k - deg + i] -= adj;
            }
        }
        poly.iter().all(|c| c.is_zero())
    }
}

/// Coefficients (ascending, monic) of the ℓ-th cyclotomic polynomial, via
/// `Φ_n = (xⁿ − 1) / ∏_{d|n, d<n} Φ_d`.
fn cyclotomic_poly(ell: u32) -> Vec<BigInt> {
    fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
        // den is monic; exact division.
        let mut rem = num.to_vec();
        let dd = den.len() - 1;
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = std::mem::take(&mut rem[k]);
            if c.is_zero() {
                continue;
            }
            for (i, d) in den[..dd].iter().enumerate() {
                let adj = &c * d;
                rem[k - dd + i] -= adj;
            }
            quot[k - dd] = c;
        }
        debug_assert!(rem[..dd].iter().all(|c| c.is_zero()));
        quot
    }

    let mut memo: Vec<Option<Vec<BigInt>>> = vec![None; ell as usize + 1];
    fn phi(n: u32, memo: &mut Vec<Option<Vec<BigInt>>>) -> Vec<BigInt> {
        if let Some(p) = &memo[n as usize] {
            return p.clone();
        }
        let result = if n == 1 {
            vec![BigInt::from(-1), BigInt::from(1)]
        } else {
            // x^n - 1
            let mut num = vec![BigInt::zero(); n as usize + 1];
            num[0] = BigInt::from(-1);
            num[n as usize] = BigInt::from(1);
            let mut acc = num;
            for d in 1..n {
                if n % d == 0 {
                    let pd = phi(d, memo);
                    acc = poly_div_exact(&acc, &pd);
                }
            }
            acc
        };
        memo[n as usize] = Some(result.clone());
        result
    }
    phi(ell, &mut memo)
}
