//! Exact arithmetic for entries built from ℓ-th roots of unity, ℓ ∈ {2, 3, 4, 6}.
//!
//! These four orders are exactly the ones whose cyclotomic integers form a
//! rank-2 lattice over `Z` (degree `φ(ℓ) ≤ 2`), so every quantity we care
//! about — entries, inner products, determinants, Gram minors — is an exact
//! pair of big integers:
//!
//! * for ℓ ∈ {2, 3, 6} we work in the Eisenstein integers `Z[ω]`,
//!   `ω = e^{2πi/3}`, writing `a + bω` with `ω² = −1 − ω`;
//! * for ℓ = 4 we work in the Gaussian integers `Z[i]`, writing `a + bi`.
//!
//! Both rings are norm-Euclidean with `N(a+bω) = a² − ab + b²` and
//! `N(a+bi) = a² + b²`, and the sixth roots sit inside `Z[ω]` as the units
//! `±1, ±ω, ±(1+ω)`.
//!
//! The module also provides [`sigma_min`], the minimum modulus of a sum of
//! `n` ℓ-th roots (the quantity that sharpens the Barba bound away from
//! ℓ = 2), and [`is_norm_integer`], the splitting-based test for whether an
//! integer is a norm from `Z[ω]` or `Z[i]` — the arithmetic obstruction that
//! rules candidate determinants in or out.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::hiprec::Fixed;
use crate::{Error, Result};

pub mod primes;

/// Two-dimensional integer bases we compute in.
///
/// `Omega` is `Z[ω]` with `ω = e^{2πi/3}` (used for ℓ ∈ {2, 3, 6}; for ℓ = 2
/// the second coordinate is always zero), `Gauss` is `Z[i]` (used for ℓ = 4).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Omega,
    Gauss,
}

impl Basis {
    /// The basis exact arithmetic for order `ell` lives in.
    pub fn for_order(ell: u32) -> Result<Basis> {
        match ell {
            2 | 3 | 6 => Ok(Basis::Omega),
            4 => Ok(Basis::Gauss),
            _ => Err(Error::unsupported(format!(
                "exact arithmetic is only available for root orders 2, 3, 4, 6 (got {ell})"
            ))),
        }
    }

    /// Tag used in JSON output: `"w"` for `Z[ω]`, `"i"` for `Z[i]`.
    pub fn tag(self) -> &'static str {
        match self {
            Basis::Omega => "w",
            Basis::Gauss => "i",
        }
    }
}

/// An element `a + b·ω` of `Z[ω]`, or `a + b·i` of `Z[i]`, depending on the
/// basis. Arithmetic between mismatched bases is a usage error.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    basis: Basis,
    a: BigInt,
    b: BigInt,
}

impl CycInt {
    pub fn new(basis: Basis, a: impl Into<BigInt>, b: impl Into<BigInt>) -> CycInt {
        CycInt { basis, a: a.into(), b: b.into() }
    }

    pub fn zero(basis: Basis) -> CycInt {
        CycInt::new(basis, 0, 0)
    }

    pub fn one(basis: Basis) -> CycInt {
        CycInt::new(basis, 1, 0)
    }

    pub fn from_int(basis: Basis, a: impl Into<BigInt>) -> CycInt {
        CycInt::new(basis, a, 0)
    }

    /// `ζ_ℓ^k` expressed in the basis for `ell`.
    ///
    /// The primitive root is `ζ_ℓ = e^{2πi/ℓ}`, so `ζ₃ = ω`, `ζ₆ = 1 + ω`,
    /// `ζ₄ = i`, `ζ₂ = −1`.
    pub fn root(ell: u32, k: u32) -> Result<CycInt> {
        let basis = Basis::for_order(ell)?;
        let k = k % ell;
        let (a, b) = match (ell, k) {
            (2, 0) => (1, 0),
            (2, 1) => (-1, 0),
            (3, 0) => (1, 0),
            (3, 1) => (0, 1),
            (3, 2) => (-1, -1),
            (4, 0) => (1, 0),
            (4, 1) => (0, 1),
            (4, 2) => (-1, 0),
            (4, 3) => (0, -1),
            (6, 0) => (1, 0),
            (6, 1) => (1, 1),
            (6, 2) => (0, 1),
            (6, 3) => (-1, 0),
            (6, 4) => (-1, -1),
            (6, 5) => (0, -1),
            _ => unreachable!("k reduced mod ell"),
        };
        Ok(CycInt::new(basis, a, b))
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// Coordinate on `1`.
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// Coordinate on `ω` (resp. `i`).
    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Is this a rational integer (zero coordinate on `ω` / `i`)?
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn check_basis(&self, rhs: &CycInt, op: &str) -> Result<()> {
        if self.basis == rhs.basis {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "{op} between mismatched rings Z[{}] and Z[{}]",
                self.basis.tag(),
                rhs.basis.tag()
            )))
        }
    }

    pub fn add(&self, rhs: &CycInt) -> Result<CycInt> {
        self.check_basis(rhs, "addition")?;
        Ok(CycInt::new(self.basis, &self.a + &rhs.a, &self.b + &rhs.b))
    }

    pub fn sub(&self, rhs: &CycInt) -> Result<CycInt> {
        self.check_basis(rhs, "subtraction")?;
        Ok(CycInt::new(self.basis, &self.a - &rhs.a, &self.b - &rhs.b))
    }

    pub fn neg(&self) -> CycInt {
        CycInt::new(self.basis, -&self.a, -&self.b)
    }

    /// Ring product. In `Z[ω]` it uses `ω² = −1 − ω`:
    /// `(a+bω)(c+dω) = (ac − bd) + (ad + bc − bd)ω`.
    pub fn mul(&self, rhs: &CycInt) -> Result<CycInt> {
        self.check_basis(rhs, "multiplication")?;
        let ac = &self.a * &rhs.a;
        let bd = &self.b * &rhs.b;
        let ad_bc = &self.a * &rhs.b + &self.b * &rhs.a;
        match self.basis {
            Basis::Omega => Ok(CycInt::new(self.basis, ac - &bd, ad_bc - bd)),
            Basis::Gauss => Ok(CycInt::new(self.basis, ac - bd, ad_bc)),
        }
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> CycInt {
        let k = k.into();
        CycInt::new(self.basis, &self.a * &k, &self.b * k)
    }

    /// Complex conjugate: `conj(a+bω) = (a−b) − bω` (since `ω̄ = ω² = −1−ω`),
    /// `conj(a+bi) = a − bi`.
    pub fn conj(&self) -> CycInt {
        match self.basis {
            Basis::Omega => CycInt::new(self.basis, &self.a - &self.b, -&self.b),
            Basis::Gauss => CycInt::new(self.basis, self.a.clone(), -&self.b),
        }
    }

    /// Field norm `x·x̄` as a non-negative integer:
    /// `a² − ab + b²` in `Z[ω]`, `a² + b²` in `Z[i]`.
    pub fn norm(&self) -> BigUint {
        let n: BigInt = match self.basis {
            Basis::Omega => &self.a * &self.a - &self.a * &self.b + &self.b * &self.b,
            Basis::Gauss => &self.a * &self.a + &self.b * &self.b,
        };
        n.to_biguint().expect("norm forms are positive definite")
    }

    /// Twice the real part, always a rational integer:
    /// `2·Re(a+bω) = 2a − b`, `2·Re(a+bi) = 2a`.
    pub fn two_re(&self) -> BigInt {
        match self.basis {
            Basis::Omega => 2 * &self.a - &self.b,
            Basis::Gauss => 2 * &self.a,
        }
    }

    /// Exact ring division. Errors if `rhs` is zero or does not divide.
    pub fn exact_div(&self, rhs: &CycInt) -> Result<CycInt> {
        self.check_basis(rhs, "division")?;
        if rhs.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        let num = self.mul(&rhs.conj())?;
        let den = BigInt::from(rhs.norm());
        let (qa, ra) = num_integer::Integer::div_rem(&num.a, &den);
        let (qb, rb) = num_integer::Integer::div_rem(&num.b, &den);
        if ra.is_zero() && rb.is_zero() {
            Ok(CycInt::new(self.basis, qa, qb))
        } else {
            Err(Error::domain(format!("{rhs} does not divide {self} exactly")))
        }
    }

    /// Approximate complex value `(re, im)`. For display and cross-checks
    /// only; precision is whatever `f64` gives for the coordinates.
    pub fn to_c64(&self) -> (f64, f64) {
        let a = self.a.to_f64().unwrap_or(f64::INFINITY * sign_f(&self.a));
        let b = self.b.to_f64().unwrap_or(f64::INFINITY * sign_f(&self.b));
        match self.basis {
            Basis::Omega => (a - 0.5 * b, b * 3f64.sqrt() / 2.0),
            Basis::Gauss => (a, b),
        }
    }
}

fn sign_f(x: &BigInt) -> f64 {
    if x.is_negative() {
        -1.0
    } else {
        1.0
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = match self.basis {
            Basis::Omega => "w",
            Basis::Gauss => "i",
        };
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}{}", self.b, unit)
        } else if self.b.is_negative() {
            write!(f, "{}{}{}", self.a, self.b, unit)
        } else {
            write!(f, "{}+{}{}", self.a, self.b, unit)
        }
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[{}]", self.basis.tag())
    }
}

/// Serializes as the coordinate pair `["a", "b"]` in decimal strings; the
/// enclosing object is expected to carry the ring tag once for the whole
/// container (see the Gram matrix JSON schema).
impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&self.a.to_string())?;
        seq.serialize_element(&self.b.to_string())?;
        seq.end()
    }
}

/// A multiset of ℓ-th roots recorded by exponent: `counts[k]` copies of
/// `ζ_ℓ^k`. The profile of an `n`-term sum of roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumProfile {
    pub ell: u32,
    pub counts: Vec<u64>,
}

impl SumProfile {
    pub fn new(ell: u32, counts: Vec<u64>) -> Result<SumProfile> {
        if ell < 2 {
            return Err(Error::usage("root order must be at least 2"));
        }
        if counts.len() != ell as usize {
            return Err(Error::usage(format!(
                "profile for order {ell} needs exactly {ell} counts (got {})",
                counts.len()
            )));
        }
        Ok(SumProfile { ell, counts })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// The exact value `Σ_k counts[k]·ζ_ℓ^k` (orders 2, 3, 4, 6 only).
    pub fn value(&self) -> Result<CycInt> {
        let basis = Basis::for_order(self.ell)?;
        let mut acc = CycInt::zero(basis);
        for (k, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = CycInt::root(self.ell, k as u32)?.scale(c);
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

/// Minimum modulus of a sum of `n` ℓ-th roots of unity.
#[derive(Clone, Debug, Serialize)]
pub enum SigmaBound {
    /// Exact squared minimum (orders 2, 3, 4, 6).
    Exact {
        #[serde(serialize_with = "ser_biguint")]
        min_sq: BigUint,
        witness: SumProfile,
    },
    /// Rigorous enclosure of the squared minimum for other orders.
    Interval { lo: f64, hi: f64, witness: SumProfile },
}

impl SigmaBound {
    /// Squared minimum as a float (exact values may round).
    pub fn min_sq_f64(&self) -> f64 {
        match self {
            SigmaBound::Exact { min_sq, .. } => min_sq.to_f64().unwrap_or(f64::INFINITY),
            SigmaBound::Interval { lo, .. } => *lo,
        }
    }
}

fn ser_biguint<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::matrix::serialize_uint(x, s)
}

/// `σ_ℓ(n)²`: the minimum of `|z|²` over all sums `z` of exactly `n` ℓ-th
/// roots of unity.
///
/// For ℓ ∈ {2, 3, 4, 6} the result is exact.  A sum that can reach zero is
/// recognised directly (and a vanishing profile returned as witness):
/// opposite pairs for even `n` when `−1` is available, triples of cube roots
/// when `3 | n`, and for ℓ = 6 every `n ≥ 2` via pairs and triples.  All
/// remaining cases are settled by enumerating count profiles, which stays
/// cheap precisely because it is only needed when no zero sum exists
/// (`O(n^{φ(ℓ)})` profiles after the shortcuts).
///
/// For other orders the profiles are evaluated in high-precision fixed-point
/// arithmetic and a tight enclosure is returned.
pub fn sigma_min(ell: u32, n: u64) -> Result<SigmaBound> {
    if ell < 2 {
        return Err(Error::usage("root order must be at least 2"));
    }
    if n == 0 {
        return Err(Error::usage("sigma is defined for sums of n >= 1 roots"));
    }
    if let Some(witness) = zero_sum_profile(ell, n) {
        debug_assert!(witness.value().map(|v| v.is_zero()).unwrap_or(true));
        return Ok(SigmaBound::Exact { min_sq: BigUint::zero(), witness });
    }

    let exact = Basis::for_order(ell).is_ok();
    let profiles = profile_count(ell, n)
        .filter(|&c| c <= 20_000_000)
        .ok_or_else(|| {
            Error::unsupported(format!("too many profiles to enumerate for ell={ell}, n={n}"))
        })?;
    let _ = profiles;

    if exact {
        let mut best: Option<(BigUint, SumProfile)> = None;
        for_each_profile(ell, n, &mut |counts| {
            let profile = SumProfile { ell, counts: counts.to_vec() };
            let norm = profile.value().expect("exact basis").norm();
            if best.as_ref().map(|(b, _)| norm < *b).unwrap_or(true) {
                best = Some((norm, profile));
            }
        });
        let (min_sq, witness) = best.expect("n >= 1 has at least one profile");
        Ok(SigmaBound::Exact { min_sq, witness })
    } else {
        sigma_min_interval(ell, n)
    }
}

/// A profile of `n` ℓ-th roots summing to exactly zero, when one exists.
fn zero_sum_profile(ell: u32, n: u64) -> Option<SumProfile> {
    let l = ell as usize;
    let mut counts = vec![0u64; l];
    if ell % 2 == 0 && n % 2 == 0 {
        counts[0] = n / 2;
        counts[l / 2] = n / 2;
        return Some(SumProfile { ell, counts });
    }
    if ell % 3 == 0 && n % 3 == 0 {
        counts[0] = n / 3;
        counts[l / 3] = n / 3;
        counts[2 * l / 3] = n / 3;
        return Some(SumProfile { ell, counts });
    }
    // With both pairs and triples available every n >= 2 is reachable.
    if ell % 6 == 0 && n >= 2 {
        let triples = n % 2; // 0 or 1; n - 3*triples is even and >= 0 for n >= 3
        if n >= 3 * triples {
            let rest = n - 3 * triples;
            counts[0] = rest / 2 + triples;
            counts[l / 2] = rest / 2;
            counts[l / 3] += triples;
            counts[2 * l / 3] += triples;
            return Some(SumProfile { ell, counts });
        }
    }
    None
}

/// Number of count profiles: `C(n + ℓ − 1, ℓ − 1)`, or `None` on overflow.
fn profile_count(ell: u32, n: u64) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 1..=(ell as u128 - 1) {
        acc = acc.checked_mul(n as u128 + i)?;
        acc /= i; // exact: running product of consecutive binomials
    }
    Some(acc)
}

/// Calls `f` once per vector of ℓ non-negative counts summing to `n`.
fn for_each_profile(ell: u32, n: u64, f: &mut impl FnMut(&[u64])) {
    let mut counts = vec![0u64; ell as usize];
    fn rec(counts: &mut [u64], idx: usize, rest: u64, f: &mut impl FnMut(&[u64])) {
        if idx == counts.len() - 1 {
            counts[idx] = rest;
            f(counts);
            return;
        }
        // Re-borrow through raw indices to keep the recursion simple.
        for c in 0..=rest {
            counts[idx] = c;
            rec(counts, idx + 1, rest - c, f);
        }
    }
    rec(&mut counts, 0, n, f);
}

/// Interval version for root orders outside {2, 3, 4, 6}: profiles are
/// evaluated with ~256 fractional bits, so the enclosure width is limited
/// only by the `f64` endpoints (a few ulps).
fn sigma_min_interval(ell: u32, n: u64) -> Result<SigmaBound> {
    const BITS: u32 = 256;
    let roots: Vec<(Fixed, Fixed)> = (0..ell)
        .map(|k| {
            let theta = Fixed::two_pi(BITS).mul_int(k as i64).div_int(ell as i64);
            (theta.cos(), theta.sin())
        })
        .collect();
    let mut best: Option<(Fixed, SumProfile)> = None;
    for_each_profile(ell, n, &mut |counts| {
        let mut re = Fixed::zero(BITS);
        let mut im = Fixed::zero(BITS);
        for (k, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            re = re.add(&roots[k].0.mul_int(c as i64));
            im = im.add(&roots[k].1.mul_int(c as i64));
        }
        let norm = re.mul(&re).add(&im.mul(&im));
        if best.as_ref().map(|(b, _)| norm.cmp_value(b).is_lt()).unwrap_or(true) {
            best = Some((norm, SumProfile { ell, counts: counts.to_vec() }));
        }
    });
    let (min, witness) = best.expect("n >= 1 has at least one profile");
    // Two error sources: the fixed-point evaluation (each term exact to
    // ~2^-BITS scaled by the integer counts — far below 2^-180 for any
    // feasible n) and the final conversion to f64 (half an ulp). Padding by
    // 2^-48 relative swamps both, yet keeps the enclosure ~1e-15 wide.
    let v = min.to_f64();
    let pad = v.abs().max(f64::MIN_POSITIVE) * 2f64.powi(-48) + 2f64.powi(-180);
    Ok(SigmaBound::Interval { lo: (v - pad).max(0.0), hi: v + pad, witness })
}

/// Is `m` the norm of an element of `Z[ω]` (ℓ = 3 or 6) or `Z[i]` (ℓ = 4)?
///
/// By splitting of rational primes: `m` is a norm from `Z[ω]` iff every
/// prime `p ≡ 2 (mod 3)` divides it to an even power, and from `Z[i]` iff
/// every `p ≡ 3 (mod 4)` does. The ramified prime (3 resp. 2) and the split
/// primes may appear to any power. Zero is a norm.
///
/// This is the arithmetic test applied to candidate squared determinants:
/// over third or fourth roots, `det M · conj(det M) = |det M|²` must be a
/// norm, so values failing this test cannot occur as squared determinants.
pub fn is_norm_integer(m: &BigUint, ell: u32) -> Result<bool> {
    let residue_class: (u128, u128) = match ell {
        3 | 6 => (3, 2),
        4 => (4, 3),
        2 => return Ok(true), // norms from Z are all non-negative integers
        _ => {
            return Err(Error::unsupported(format!(
                "norm test requires root order 2, 3, 4 or 6 (got {ell})"
            )))
        }
    };
    if m.is_zero() {
        return Ok(true);
    }
    let m = m.to_u128().ok_or_else(|| {
        Error::unsupported("norm test limited to values below 2^128".to_string())
    })?;
    let (modulus, inert_class) = residue_class;
    for (p, e) in primes::factor_u128(m)? {
        if p % modulus == inert_class && e % 2 == 1 {
            return Ok(false);
        }
    }
    Ok(true)
}
