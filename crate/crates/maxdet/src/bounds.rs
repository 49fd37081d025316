//! Determinantal upper bounds: Hadamard, (generalized) Barba, and the
//! column-extension bounds used to prune the Gram-matrix search.
//!
//! All bounds are stated for the squared modulus `|det M|² = det(M M*)` and
//! evaluated exactly over the integers whenever the underlying σ-value is
//! exact (ℓ ∈ {2, 3, 4, 6}; σ² is then 0 or 1).
//!
//! The search bounds follow the bordered-determinant scheme: for a Hermitian
//! positive-definite matrix with constant diagonal `n`, fixed leading block
//! `D` of order `r`, and off-diagonal entries of modulus at least `c`, the
//! determinant of any order-`m` completion is at most
//!
//! ```text
//! (n − c)^{m−r−1} [ (n − c)·det D + (m − r)·max(0, d̂) ]
//! ```
//!
//! where `d̂` maximizes the bordered determinant `det [[D, γ],[γ*, c]]` over
//! admissible border vectors γ. For third roots at orders `n ≡ 2 (mod 3)`
//! the allowed inner products are constrained modulo `(1 − ω)`, which
//! sharpens the per-column growth sequence to
//! `S_k = 2(n−1)^k − 2(n−2)^k − k(n−2)^{k−1}` and yields a strictly better
//! bound with the same linear shape `α·det D + β·max(0, d̂)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::cyclo::{sigma_min, Basis, CycInt, SigmaBound};
use crate::matrix::{bareiss, GramMatrix};
use crate::{records, Error, Result};

/// `n^n`, the squared Hadamard bound.
pub fn hadamard_bound_sq(n: u64) -> BigUint {
    BigUint::from(n).pow(n as u32)
}

/// The squared (generalized) Barba bound `(n + (n−1)σ)(n − σ)^{n−1}` with
/// `σ = σ_ℓ(n)`, or the possible fallbacks.
#[derive(Clone, Debug)]
pub enum BarbaValue {
    /// σ = 1 (or the trivial n = 1): the bound is the exact integer
    /// `(2n−1)(n−1)^{n−1}`.
    ExactSq(BigUint),
    /// σ = 0: the Barba refinement is vacuous; the Hadamard value applies.
    HadamardFallback(BigUint),
    /// Root orders without exact σ: a floating enclosure of the squared bound.
    Interval { lo: f64, hi: f64 },
}

impl BarbaValue {
    /// The squared bound as an integer when exact.
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            BarbaValue::ExactSq(v) | BarbaValue::HadamardFallback(v) => Some(v),
            BarbaValue::Interval { .. } => None,
        }
    }
}

impl Serialize for BarbaValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        match self {
            BarbaValue::ExactSq(v) => {
                map.serialize_entry("kind", "exact")?;
                map.serialize_entry("value", &crate::matrix::UintAsNumber(v))?;
            }
            BarbaValue::HadamardFallback(v) => {
                map.serialize_entry("kind", "hadamard_fallback")?;
                map.serialize_entry("value", &crate::matrix::UintAsNumber(v))?;
            }
            BarbaValue::Interval { lo, hi } => {
                map.serialize_entry("kind", "interval")?;
                map.serialize_entry("lo", lo)?;
                map.serialize_entry("hi", hi)?;
            }
        }
        map.end()
    }
}

/// Squared Barba bound for order `n` over μ_ℓ.
pub fn barba_bound_sq(n: u64, ell: u32) -> Result<BarbaValue> {
    if n == 0 {
        return Err(Error::usage("order must be positive"));
    }
    if n == 1 {
        return Ok(BarbaValue::ExactSq(BigUint::from(1u32)));
    }
    match sigma_min(ell, n)? {
        SigmaBound::Exact { min_sq, .. } => {
            if min_sq.is_zero() {
                Ok(BarbaValue::HadamardFallback(hadamard_bound_sq(n)))
            } else if min_sq == BigUint::from(1u32) {
                let v = BigUint::from(2 * n - 1) * BigUint::from(n - 1).pow(n as u32 - 1);
                Ok(BarbaValue::ExactSq(v))
            } else {
                // Cannot happen for ℓ ∈ {2,3,4,6}, where σ² ∈ {0,1}; reaching
                // here would mean a new exact σ class was added without
                // extending the bound evaluation.
                Err(Error::internal(format!("unhandled exact sigma^2 = {min_sq}")))
            }
        }
        SigmaBound::Interval { lo, hi, .. } => {
            if lo <= 0.0 {
                // σ may be zero; only the Hadamard bound is safe.
                return Ok(BarbaValue::HadamardFallback(hadamard_bound_sq(n)));
            }
            let eval = |s_sq: f64| -> f64 {
                let s = s_sq.sqrt();
                let nf = n as f64;
                (nf + (nf - 1.0) * s) * (nf - s).powi(n as i32 - 1)
            };
            let (a, b) = (eval(lo), eval(hi));
            Ok(BarbaValue::Interval { lo: a.min(b), hi: a.max(b) })
        }
    }
}

/// The bound summary for one `(n, ℓ)` pair, with ratios against the record
/// table recomputed on the fly.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub n: u64,
    pub ell: u32,
    #[serde(serialize_with = "crate::matrix::serialize_uint")]
    pub hadamard_sq: BigUint,
    pub barba_sq: BarbaValue,
    pub sigma: SigmaBound,
    #[serde(serialize_with = "ser_opt_uint")]
    pub record_sq: Option<BigUint>,
    pub record_proven: Option<bool>,
    /// `|det|/bound` ratios (not squared), when a record is tabulated.
    pub ratio_to_hadamard: Option<f64>,
    pub ratio_to_barba: Option<f64>,
}

fn ser_opt_uint<S: Serializer>(
    x: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => crate::matrix::serialize_uint(v, s),
        None => s.serialize_none(),
    }
}

/// `sqrt(num/den)` via base-2 logarithms, safe for values far beyond `f64`.
fn ratio_sqrt(num: &BigUint, den: &BigUint) -> f64 {
    fn log2(x: &BigUint) -> f64 {
        let bits = x.bits();
        if bits <= 53 {
            return x.to_f64().unwrap().log2();
        }
        let top = (x >> (bits - 53)).to_f64().unwrap();
        top.log2() + (bits - 53) as f64
    }
    if num.is_zero() || den.is_zero() {
        return 0.0;
    }
    2f64.powf((log2(num) - log2(den)) / 2.0)
}

/// Bound report for order `n` over μ_ℓ.
pub fn bound_report(n: u64, ell: u32) -> Result<BoundReport> {
    let hadamard_sq = hadamard_bound_sq(n);
    let barba_sq = barba_bound_sq(n, ell)?;
    let sigma = sigma_min(ell, n)?;
    let record = records::lookup(n, ell);
    let record_sq = record.map(|r| r.det_sq());
    let ratio_to_hadamard = record_sq.as_ref().map(|r| ratio_sqrt(r, &hadamard_sq));
    let ratio_to_barba = match (&record_sq, barba_sq.exact()) {
        (Some(r), Some(b)) => Some(ratio_sqrt(r, b)),
        _ => None,
    };
    Ok(BoundReport {
        n,
        ell,
        hadamard_sq,
        barba_sq,
        sigma,
        record_sq,
        record_proven: record.map(|r| r.proven),
        ratio_to_hadamard,
        ratio_to_barba,
    })
}

/// A Hermitian block with constant rational diagonal — the fixed leading
/// minor `D` in the column-extension bounds. Unlike a full Gram matrix, its
/// diagonal value is the *ambient* order `n`, not the block size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermBlock {
    basis: Basis,
    r: usize,
    diag: BigInt,
    entries: Vec<CycInt>,
}

impl HermBlock {
    pub fn new(basis: Basis, r: usize, entries: Vec<CycInt>) -> Result<HermBlock> {
        if r == 0 || entries.len() != r * r {
            return Err(Error::usage("block entries must form a nonempty square"));
        }
        let d0 = entries[0].clone();
        if !d0.is_rational() {
            return Err(Error::domain("block diagonal must be rational"));
        }
        for i in 0..r {
            if entries[i * r + i] != d0 {
                return Err(Error::domain("block diagonal must be constant"));
            }
            for j in 0..i {
                if entries[i * r + j] != entries[j * r + i].conj() {
                    return Err(Error::domain("block is not Hermitian"));
                }
            }
        }
        Ok(HermBlock { basis, r, diag: d0.a().clone(), entries })
    }

    /// The leading `r × r` principal block of a full Gram matrix.
    pub fn from_gram_leading(g: &GramMatrix, r: usize) -> Result<HermBlock> {
        if r == 0 || r > g.n() {
            return Err(Error::usage("block size out of range"));
        }
        let mut entries = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                entries.push(g.entry(i, j).clone());
            }
        }
        HermBlock::new(g.basis(), r, entries)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn diag(&self) -> &BigInt {
        &self.diag
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn entry(&self, i: usize, j: usize) -> &CycInt {
        &self.entries[i * self.r + j]
    }

    /// Exact determinant (a rational integer, by Hermitian symmetry).
    pub fn det(&self) -> Result<BigInt> {
        let det = bareiss::det_cyc(self.basis, self.r, self.entries.clone())?;
        if !det.is_rational() {
            return Err(Error::internal("Hermitian determinant came out non-real"));
        }
        Ok(det.a().clone())
    }

    /// The adjugate (transposed cofactor matrix), row-major.
    pub fn adjugate(&self) -> Result<Vec<CycInt>> {
        let r = self.r;
        if r == 1 {
            return Ok(vec![CycInt::one(self.basis)]);
        }
        let mut adj = vec![CycInt::zero(self.basis); r * r];
        let mut minor = Vec::with_capacity((r - 1) * (r - 1));
        for i in 0..r {
            for j in 0..r {
                minor.clear();
                for a in 0..r {
                    if a == j {
                        continue;
                    }
                    for b in 0..r {
                        if b == i {
                            continue;
                        }
                        minor.push(self.entries[a * r + b].clone());
                    }
                }
                let m = bareiss::det_cyc(self.basis, r - 1, minor.clone())?;
                adj[i * r + j] = if (i + j) % 2 == 0 { m } else { m.neg() };
            }
        }
        Ok(adj)
    }
}

/// Everything [`mk_bound`] needs about a fixed leading block: its order,
/// determinant, diagonal value, entry-modulus floor, and the bordered
/// maximum `d̂`.
#[derive(Clone, Debug)]
pub struct MKContext {
    /// The common diagonal value of the ambient Gram matrix.
    pub diag: BigInt,
    /// Lower bound on the modulus of admissible off-diagonal entries.
    pub c: BigInt,
    /// Order of the fixed block `D`.
    pub r: usize,
    /// `det D`, positive for usable contexts.
    pub det_d: BigInt,
    /// `max_{γ ∈ Φ^r} det [[D, γ],[γ*, c]]`, possibly clamped at zero —
    /// the bounds only read `max(0, d̂)`, so either value is accepted.
    pub d_hat: BigInt,
}

impl MKContext {
    /// Builds a context from a block by computing `det D` and `d̂`.
    ///
    /// Stores the clamped `max(0, d̂)` — the bounds only ever consume the
    /// clamped value, and clamping keeps the search for the maximum
    /// pruned from its first node.
    pub fn build(block: &HermBlock, phi: &[CycInt], c: BigInt) -> Result<MKContext> {
        let det_d = block.det()?;
        let d_hat = d_hat_clamped(block, phi, &c)?;
        Ok(MKContext { diag: block.diag().clone(), c, r: block.r(), det_d, d_hat })
    }
}

/// `max_{γ ∈ Φ^r} det [[D, γ],[γ*, c]]`, exactly.
///
/// Uses `det [[D, γ],[γ*, c]] = c·det D − γ* adj(D) γ`. Small borders
/// (`r ≤ 3`) are enumerated directly; larger ones by depth-first assignment
/// with a Hadamard-type cutoff: a partial assignment is abandoned when the
/// product of row norms (filling unassigned slots with the largest Φ-norm)
/// already cannot exceed the best determinant found.
pub fn d_hat(block: &HermBlock, phi: &[CycInt], c: &BigInt) -> Result<BigInt> {
    d_hat_inner(block, phi, c, false)
}

/// `max(0, d̂)`: what the extension bounds actually consume.
///
/// Seeding the maximum at zero keeps the depth-first cutoff active from
/// the start, which matters when every admissible border is strongly
/// negative; prefer this over [`d_hat`] in hot paths.
pub fn d_hat_clamped(block: &HermBlock, phi: &[CycInt], c: &BigInt) -> Result<BigInt> {
    d_hat_inner(block, phi, c, true)
}

fn d_hat_inner(block: &HermBlock, phi: &[CycInt], c: &BigInt, clamp: bool) -> Result<BigInt> {
    if phi.is_empty() {
        return Err(Error::usage("empty admissible set for the border"));
    }
    if !c.is_positive() {
        return Err(Error::usage("entry-modulus floor c must be positive"));
    }
    for v in phi {
        if v.basis() != block.basis() {
            return Err(Error::usage("admissible set ring differs from block ring"));
        }
    }
    let r = block.r();
    let det_d = block.det()?;
    let adj = block.adjugate()?;
    let c_det = c * &det_d;

    // Hermitian form q(γ) = γ* adj(D) γ as an exact integer.
    let form = |gamma: &[&CycInt]| -> BigInt {
        let mut acc = BigInt::zero();
        for i in 0..r {
            debug_assert!(adj[i * r + i].is_rational());
            acc += adj[i * r + i].a() * BigInt::from(gamma[i].norm());
            for j in (i + 1)..r {
                let t = gamma[i]
                    .conj()
                    .mul(&adj[i * r + j])
                    .and_then(|x| x.mul(gamma[j]))
                    .expect("same basis by construction");
                acc += t.two_re();
            }
        }
        acc
    };

    if r <= 3 {
        let mut best: Option<BigInt> = if clamp { Some(BigInt::zero()) } else { None };
        let mut idx = vec![0usize; r];
        loop {
            let gamma: Vec<&CycInt> = idx.iter().map(|&k| &phi[k]).collect();
            let val = &c_det - form(&gamma);
            if best.as_ref().map(|b| val > *b).unwrap_or(true) {
                best = Some(val);
            }
            // Odometer increment.
            let mut pos = 0;
            loop {
                if pos == r {
                    return Ok(best.expect("at least one border vector"));
                }
                idx[pos] += 1;
                if idx[pos] < phi.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    // Depth-first with Hadamard-style pruning.
    let norms: Vec<BigInt> = phi.iter().map(|v| BigInt::from(v.norm())).collect();
    let max_norm = norms.iter().max().unwrap().clone();
    // Row norm base: sum of |D_ij|² along each block row.
    let row_base: Vec<BigInt> = (0..r)
        .map(|i| (0..r).map(|j| BigInt::from(block.entry(i, j).norm())).sum())
        .collect();
    let c_sq = c * c;

    struct Dfs<'a> {
        r: usize,
        phi: &'a [CycInt],
        norms: &'a [BigInt],
        max_norm: &'a BigInt,
        row_base: &'a [BigInt],
        c_sq: &'a BigInt,
        c_det: &'a BigInt,
        best: Option<BigInt>,
    }

    impl<'a> Dfs<'a> {
        fn run(&mut self, assigned: &mut Vec<usize>, form: &dyn Fn(&[&CycInt]) -> BigInt) {
            if assigned.len() == self.r {
                let gamma: Vec<&CycInt> = assigned.iter().map(|&k| &self.phi[k]).collect();
                let val = self.c_det - form(&gamma);
                if self.best.as_ref().map(|b| val > *b).unwrap_or(true) {
                    self.best = Some(val);
                }
                return;
            }
            if let Some(best) = &self.best {
                if !best.is_negative() {
                    // Hadamard: det² ≤ ∏ row-norm², with unassigned borders
                    // taken at the largest admissible norm.
                    let mut prod = BigInt::from(1);
                    let mut border_sum = self.c_sq.clone();
                    for i in 0..self.r {
                        let slot: &BigInt = match assigned.get(i) {
                            Some(&k) => &self.norms[k],
                            None => self.max_norm,
                        };
                        prod *= &self.row_base[i] + slot;
                        border_sum += slot;
                    }
                    prod *= border_sum;
                    if prod <= best * best {
                        return;
                    }
                }
            }
            for k in 0..self.phi.len() {
                assigned.push(k);
                self.run(assigned, form);
                assigned.pop();
            }
        }
    }

    let mut dfs = Dfs {
        r,
        phi,
        norms: &norms,
        max_norm: &max_norm,
        row_base: &row_base,
        c_sq: &c_sq,
        c_det: &c_det,
        best: if clamp { Some(BigInt::zero()) } else { None },
    };
    dfs.run(&mut Vec::with_capacity(r), &form);
    Ok(dfs.best.expect("at least one border vector"))
}

/// The linear coefficients `(α, β)` with
/// `mk_bound = α·det D + β·max(0, d̂)` for a completion from order `r` to
/// order `m` with diagonal `n` and modulus floor `c`:
/// `α = (n−c)^{m−r}`, `β = (m−r)(n−c)^{m−r−1}`.
pub fn mk_linear_coeffs(n: &BigInt, c: &BigInt, m: u64, r: u64) -> Result<(BigInt, BigInt)> {
    if r >= m {
        return Err(Error::usage("extension requires r < m"));
    }
    if !c.is_positive() || n <= c {
        return Err(Error::usage("need 0 < c < n for the extension bound"));
    }
    let k = (m - r) as u32;
    let base = n - c;
    let alpha = base.pow(k);
    let beta = BigInt::from(m - r) * base.pow(k - 1);
    Ok((alpha, beta))
}

/// Upper bound on `det G` over all Hermitian positive-definite completions
/// `G` of order `m` with diagonal `n`, off-diagonal moduli ≥ `c`, and fixed
/// leading block described by `ctx`.
pub fn mk_bound(ctx: &MKContext, m: u64) -> Result<BigInt> {
    if !ctx.det_d.is_positive() {
        return Err(Error::usage("mk_bound requires det D > 0"));
    }
    let (alpha, beta) = mk_linear_coeffs(&ctx.diag, &ctx.c, m, ctx.r as u64)?;
    let pos_d_hat = if ctx.d_hat.is_negative() { BigInt::zero() } else { ctx.d_hat.clone() };
    Ok(alpha * &ctx.det_d + beta * pos_d_hat)
}

/// The sharpened per-column growth sums for third roots at `n ≡ 2 (mod 3)`:
/// `S_k = 2(n−1)^k − 2(n−2)^k − k(n−2)^{k−1}`.
fn growth_sum_2mod3(n: &BigInt, k: u32) -> BigInt {
    debug_assert!(k >= 1);
    let a: BigInt = n - 1i32;
    let b: BigInt = n - 2i32;
    2 * a.pow(k) - 2 * b.pow(k) - BigInt::from(k) * b.pow(k - 1)
}

/// Linear coefficients for [`mk_bound_2mod3`]: `α = (n−1)^{m−r}`,
/// `β = S_{m−r}`.
pub fn mk_linear_coeffs_2mod3(n: &BigInt, m: u64, r: u64) -> Result<(BigInt, BigInt)> {
    if r >= m {
        return Err(Error::usage("extension requires r < m"));
    }
    let k = (m - r) as u32;
    let base: BigInt = n - 1i32;
    let alpha = base.pow(k);
    let beta = growth_sum_2mod3(n, k);
    Ok((alpha, beta))
}

/// Sharpened extension bound for μ₃ Gram matrices at orders `n ≡ 2 (mod 3)`
/// (where every admissible inner product is ≡ n modulo `(1 − ω)`, forcing
/// the bordered determinants into arithmetic progressions of step 3).
///
/// Requires `c = 1` and `diag ≡ 2 (mod 3)`; always at most [`mk_bound`].
pub fn mk_bound_2mod3(ctx: &MKContext, m: u64) -> Result<BigInt> {
    if ctx.c != BigInt::from(1) {
        return Err(Error::usage("sharpened bound requires modulus floor c = 1"));
    }
    let n_mod_3 = ((&ctx.diag % 3i32) + 3i32) % 3i32;
    if n_mod_3 != BigInt::from(2) {
        return Err(Error::usage(
            "sharpened bound applies only at diagonal n ≡ 2 (mod 3)",
        ));
    }
    if !ctx.det_d.is_positive() {
        return Err(Error::usage("mk_bound requires det D > 0"));
    }
    let (alpha, beta) = mk_linear_coeffs_2mod3(&ctx.diag, m, ctx.r as u64)?;
    let pos_d_hat = if ctx.d_hat.is_negative() { BigInt::zero() } else { ctx.d_hat.clone() };
    Ok(alpha * &ctx.det_d + beta * pos_d_hat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycInt;

    fn w(a: i64, b: i64) -> CycInt {
        CycInt::new(Basis::Omega, a, b)
    }

    /// Φ₅ as values (enumerated independently in the search module; fixed
    /// here as data for bound tests).
    fn phi5() -> Vec<CycInt> {
        vec![w(2, 0), w(-1, 0), w(-1, -3), w(2, 3), w(-4, -3), w(-1, 3)]
    }

    #[test]
    fn hadamard_values() {
        assert_eq!(hadamard_bound_sq(9), BigUint::from(3u32).pow(18));
        assert_eq!(hadamard_bound_sq(1), BigUint::from(1u32));
    }

    #[test]
    fn barba_examples() {
        // (2n−1)(n−1)^{n−1}
        match barba_bound_sq(5, 3).unwrap() {
            BarbaValue::ExactSq(v) => assert_eq!(v, BigUint::from(2304u32)),
            other => panic!("{other:?}"),
        }
        match barba_bound_sq(11, 4).unwrap() {
            BarbaValue::ExactSq(v) => {
                assert_eq!(v, BigUint::from(21u32) * BigUint::from(10u64).pow(10))
            }
            other => panic!("{other:?}"),
        }
        // Classical ±1 case: odd orders give Barba, even fall back.
        match barba_bound_sq(5, 2).unwrap() {
            BarbaValue::ExactSq(v) => assert_eq!(v, BigUint::from(2304u32)),
            other => panic!("{other:?}"),
        }
        match barba_bound_sq(4, 2).unwrap() {
            BarbaValue::HadamardFallback(v) => assert_eq!(v, BigUint::from(256u32)),
            other => panic!("{other:?}"),
        }
        // Sixth roots: σ = 0 for n ≥ 2.
        match barba_bound_sq(7, 6).unwrap() {
            BarbaValue::HadamardFallback(_) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn report_ratios_match_the_published_columns() {
        let r5 = bound_report(5, 3).unwrap();
        assert!((r5.ratio_to_barba.unwrap() - (1701f64 / 2304f64).sqrt()).abs() < 1e-12);
        assert_eq!(format!("{:.2}", r5.ratio_to_barba.unwrap()), "0.86");
        let r9 = bound_report(9, 3).unwrap();
        assert!((r9.ratio_to_hadamard.unwrap() - 1.0).abs() < 1e-12);
        let r11 = bound_report(11, 4).unwrap();
        let expect = (200_000_000_000f64 / 210_000_000_000f64).sqrt();
        assert!((r11.ratio_to_barba.unwrap() - expect).abs() < 1e-9);
    }

    #[test]
    fn ratio_sqrt_survives_huge_values() {
        let big = BigUint::from(147u64).pow(147);
        let r = ratio_sqrt(&big, &(4u32 * &big));
        assert!((r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn d_hat_single_cell_block() {
        // D = [n], border γ: det [[n, γ],[γ̄, 1]] = n − |γ|², maximized by the
        // smallest admissible norm (1 here).
        let block =
            HermBlock::new(Basis::Omega, 1, vec![w(8, 0)]).unwrap();
        let d = d_hat(&block, &phi5(), &BigInt::from(1)).unwrap();
        assert_eq!(d, BigInt::from(7));
        // Empty admissible set is a usage error.
        assert!(d_hat(&block, &[], &BigInt::from(1)).is_err());
    }

    #[test]
    fn d_hat_matches_brute_force_on_two_cells() {
        let block = HermBlock::new(
            Basis::Omega,
            2,
            vec![w(5, 0), w(2, 0), w(2, 0), w(5, 0)],
        )
        .unwrap();
        let phi = phi5();
        // Independent oracle: evaluate all 36 bordered determinants by
        // building each 3×3 matrix and running the generic determinant.
        let mut best: Option<BigInt> = None;
        for g1 in &phi {
            for g2 in &phi {
                let m = vec![
                    w(5, 0), w(2, 0), g1.clone(),
                    w(2, 0), w(5, 0), g2.clone(),
                    g1.conj(), g2.conj(), w(1, 0),
                ];
                let det = bareiss::det_cyc(Basis::Omega, 3, m).unwrap();
                assert!(det.is_rational());
                let v = det.a().clone();
                if best.as_ref().map(|b| v > *b).unwrap_or(true) {
                    best = Some(v);
                }
            }
        }
        let expect = best.unwrap();
        let got = d_hat(&block, &phi, &BigInt::from(1)).unwrap();
        assert_eq!(got, expect);
        assert_eq!(got, BigInt::from(15));
    }

    #[test]
    fn d_hat_dfs_agrees_with_direct_enumeration() {
        // r = 4 exercises the pruned path; compare against a straight
        // product enumeration.
        let n = w(8, 0);
        let two = w(2, 0);
        let block = HermBlock::new(
            Basis::Omega,
            4,
            vec![
                n.clone(), two.clone(), two.clone(), two.clone(),
                two.clone(), n.clone(), two.clone(), two.clone(),
                two.clone(), two.clone(), n.clone(), two.clone(),
                two.clone(), two.clone(), two.clone(), n.clone(),
            ],
        )
        .unwrap();
        let phi = vec![w(2, 0), w(-1, 0), w(-1, -3), w(2, 3)];
        let c = BigInt::from(1);
        let got = d_hat(&block, &phi, &c).unwrap();

        let adj = block.adjugate().unwrap();
        let det_d = block.det().unwrap();
        let mut best: Option<BigInt> = None;
        for a in &phi {
            for b in &phi {
                for cc in &phi {
                    for d in &phi {
                        let gamma = [a, b, cc, d];
                        let mut q = BigInt::zero();
                        for i in 0..4 {
                            q += adj[i * 4 + i].a() * BigInt::from(gamma[i].norm());
                            for j in (i + 1)..4 {
                                let t = gamma[i]
                                    .conj()
                                    .mul(&adj[i * 4 + j])
                                    .unwrap()
                                    .mul(gamma[j])
                                    .unwrap();
                                q += t.two_re();
                            }
                        }
                        let v = &det_d - q;
                        if best.as_ref().map(|x| v > *x).unwrap_or(true) {
                            best = Some(v);
                        }
                    }
                }
            }
        }
        assert_eq!(got, best.unwrap());
    }

    #[test]
    fn clamped_maximum_agrees_with_the_exact_one() {
        // A tight block with a single large-norm border value pushes every
        // bordered determinant negative: exact d̂ < 0, clamped = 0.
        let entries = vec![w(2, 0), w(-1, 0), w(-1, 0), w(2, 0)];
        let block = HermBlock::new(Basis::Omega, 2, entries).unwrap();
        let phi = vec![w(2, 0)];
        let c = BigInt::from(1);
        assert_eq!(d_hat(&block, &phi, &c).unwrap(), BigInt::from(-21));
        assert_eq!(d_hat_clamped(&block, &phi, &c).unwrap(), BigInt::zero());

        // Clamping is max(0, ·) across both strategies (odometer at
        // r ≤ 3, depth-first above); the two block sizes exercise one
        // positive and one negative exact maximum.
        for (r, positive) in [(2usize, true), (4usize, false)] {
            let mut entries = Vec::new();
            for i in 0..r {
                for j in 0..r {
                    entries.push(if i == j { w(5, 0) } else { w(-1, 0) });
                }
            }
            let block = HermBlock::new(Basis::Omega, r, entries).unwrap();
            let exact = d_hat(&block, &phi5(), &c).unwrap();
            assert_eq!(exact.is_positive(), positive, "r = {r}");
            let expect = if exact.is_negative() { BigInt::zero() } else { exact };
            assert_eq!(d_hat_clamped(&block, &phi5(), &c).unwrap(), expect);
        }
    }

    #[test]
    fn positive_definite_determinants_respect_the_diagonal_product() {
        // Hadamard's bound for positive-definite Hermitian matrices:
        // det ≤ ∏ diagonal, with equality only for diagonal matrices.
        // This inequality underpins the depth-first cutoff in d̂.
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(0xd1a6);
        let mut checked = 0;
        while checked < 200 {
            let n = rng.gen_range(2..=6usize);
            let rows: Vec<Vec<u32>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(0..3)).collect())
                .collect();
            let m = crate::matrix::LogMatrix::new(3, rows).unwrap();
            let g = m.gram().unwrap();
            let r = rng.gen_range(1..=n);
            let block = HermBlock::from_gram_leading(&g, r).unwrap();
            let det = block.det().unwrap();
            if !det.is_positive() {
                continue; // singular leading minor; nothing to check
            }
            let diag_prod = BigInt::from(n).pow(r as u32);
            assert!(det <= diag_prod, "det {det} exceeds diagonal product");
            let diagonal = (0..r)
                .all(|i| (0..r).all(|j| i == j || block.entry(i, j).is_zero()));
            assert_eq!(det == diag_prod, diagonal);
            checked += 1;
        }
    }

    #[test]
    fn mk_bound_matches_the_closed_form_at_r1() {
        // D = [n], d̂ = n − 1, c = 1: the bound collapses to
        // (n−1)^m + m(n−1)^{m−1}.
        let n = 8u64;
        let ctx = MKContext {
            diag: BigInt::from(n),
            c: BigInt::from(1),
            r: 1,
            det_d: BigInt::from(n),
            d_hat: BigInt::from(n - 1),
        };
        let got = mk_bound(&ctx, n).unwrap();
        let closed = BigInt::from(7).pow(8) + 8 * BigInt::from(7).pow(7);
        assert_eq!(got, closed);
        assert_eq!(got, BigInt::from(7).pow(6) * 105);
    }

    #[test]
    fn mk_base_case_is_one_extension_step() {
        let ctx = MKContext {
            diag: BigInt::from(5),
            c: BigInt::from(1),
            r: 2,
            det_d: BigInt::from(24),
            d_hat: BigInt::from(12),
        };
        // m = r + 1: (n−c)·det D + max(0, d̂)
        assert_eq!(mk_bound(&ctx, 3).unwrap(), BigInt::from(4 * 24 + 12));
    }

    #[test]
    fn sharpened_bound_values_and_preconditions() {
        // S₁ = 1 for any n; S₂ at n = 11 is 20; S₃ at n = 5 is 47.
        assert_eq!(growth_sum_2mod3(&BigInt::from(11), 1), BigInt::from(1));
        assert_eq!(growth_sum_2mod3(&BigInt::from(11), 2), BigInt::from(20));
        assert_eq!(growth_sum_2mod3(&BigInt::from(5), 3), BigInt::from(47));

        let ctx = MKContext {
            diag: BigInt::from(5),
            c: BigInt::from(1),
            r: 2,
            det_d: BigInt::from(24),
            d_hat: BigInt::from(12),
        };
        // 4³·24 + 47·12 = 1536 + 564
        assert_eq!(mk_bound_2mod3(&ctx, 5).unwrap(), BigInt::from(2100));
        // Strictly sharper than the plain bound here.
        assert!(mk_bound_2mod3(&ctx, 5).unwrap() <= mk_bound(&ctx, 5).unwrap());

        // Wrong residue class is a usage error.
        let bad = MKContext { diag: BigInt::from(7), ..ctx.clone() };
        assert!(matches!(mk_bound_2mod3(&bad, 7), Err(Error::Usage(_))));
        // c ≠ 1 likewise.
        let bad_c = MKContext { c: BigInt::from(2), ..ctx };
        assert!(matches!(mk_bound_2mod3(&bad_c, 5), Err(Error::Usage(_))));
    }

    #[test]
    fn sharpened_is_never_larger_when_both_apply() {
        for n in [5i64, 8, 11] {
            for r in 1..(n as u64) {
                for det_d in [1i64, 10, 1000] {
                    for dh in [-5i64, 0, 3, 50] {
                        let ctx = MKContext {
                            diag: BigInt::from(n),
                            c: BigInt::from(1),
                            r: r as usize,
                            det_d: BigInt::from(det_d),
                            d_hat: BigInt::from(dh),
                        };
                        let plain = mk_bound(&ctx, n as u64).unwrap();
                        let sharp = mk_bound_2mod3(&ctx, n as u64).unwrap();
                        assert!(sharp <= plain, "n={n} r={r} det={det_d} dh={dh}");
                    }
                }
            }
        }
    }
}
