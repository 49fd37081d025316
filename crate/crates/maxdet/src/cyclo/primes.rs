//! Deterministic primality testing and integer factorization for the sizes
//! that arise here (squared determinants, Barba products, field orders).
//!
//! Miller–Rabin with the first 13 primes as witnesses is a proven
//! deterministic test below 3.3·10²⁴; everything this crate factors fits
//! comfortably (values beyond that bound are rejected rather than answered
//! probabilistically). Composites are split by trial division followed by
//! Brent's variant of Pollard's rho with a fixed, deterministic parameter
//! schedule, so repeated runs factor identically.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

/// Largest input accepted by [`factor_u128`]: below this bound the fixed
/// Miller–Rabin witness set is a proven primality certificate.
const DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

const MR_WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    if let (Some(a64), Some(b64), Some(m64)) = (a.to_u64(), b.to_u64(), m.to_u64()) {
        return ((a64 as u128 * b64 as u128) % m64 as u128) as u128;
    }
    // Rare wide path: fall back to big integers.
    let r = BigUint::from(a) * BigUint::from(b) % BigUint::from(m);
    r.to_u128().expect("reduced below m")
}

fn powmod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc: u128 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin below [`DETERMINISTIC_LIMIT`].
pub fn is_prime_u128(n: u128) -> bool {
    debug_assert!(n < DETERMINISTIC_LIMIT);
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = powmod(a as u128, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime_u128(n as u128)
}

/// Brent-cycle Pollard rho returning a non-trivial factor of an odd
/// composite `n` with no factors below the trial-division bound.
fn rho_split(n: u128) -> u128 {
    debug_assert!(n > 1 && !is_prime_u128(n) && n % 2 == 1);
    // Deterministic schedule over the polynomial offset c.
    for c in 1u128.. {
        let f = |x: u128| (mulmod(x, x, n) + c) % n;
        let mut x: u128 = 2;
        let mut y: u128 = 2;
        let mut d: u128 = 1;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = (if x > y { x - y } else { y - x }).gcd(&n);
            count += 1;
            if count > 1 << 28 {
                break; // give this offset up, try the next c
            }
        }
        if d != n && d != 1 {
            return d;
        }
    }
    unreachable!("rho schedule exhausted")
}

/// Full factorization of `n` as sorted `(prime, exponent)` pairs.
///
/// Errors with [`Error::Unsupported`] above the deterministic Miller–Rabin
/// range; this crate never answers primality probabilistically.
pub fn factor_u128(n: u128) -> Result<Vec<(u128, u32)>> {
    if n >= DETERMINISTIC_LIMIT {
        return Err(Error::unsupported(format!(
            "factorization supported only below {DETERMINISTIC_LIMIT} (got {n})"
        )));
    }
    if n == 0 {
        return Err(Error::usage("cannot factor zero"));
    }
    let mut factors: Vec<u128> = Vec::new();
    let mut n = n;
    for p in 2u128..1_000_000 {
        if p * p > n {
            break;
        }
        while n % p == 0 {
            factors.push(p);
            n /= p;
        }
    }
    // Remaining cofactor: prime or a product of primes > 10^6.
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u128(m) {
            factors.push(m);
            continue;
        }
        let d = rho_split(m);
        stack.push(d);
        stack.push(m / d);
    }
    factors.sort_unstable();
    let mut out: Vec<(u128, u32)> = Vec::new();
    for f in factors {
        match out.last_mut() {
            Some((p, e)) if *p == f => *e += 1,
            _ => out.push((f, 1)),
        }
    }
    Ok(out)
}

/// Factorization for `u64` inputs.
pub fn factor_u64(n: u64) -> Result<Vec<(u64, u32)>> {
    Ok(factor_u128(n as u128)?
        .into_iter()
        .map(|(p, e)| (p as u64, e))
        .collect())
}

/// Factorization of a big integer, bounded by the deterministic range.
pub fn factor_biguint(n: &BigUint) -> Result<Vec<(u128, u32)>> {
    if n.is_zero() {
        return Err(Error::usage("cannot factor zero"));
    }
    let small = n
        .to_u128()
        .filter(|&v| v < DETERMINISTIC_LIMIT)
        .ok_or_else(|| Error::unsupported("value too large to factor deterministically"))?;
    factor_u128(small)
}

/// The square-free part of `∏ baseᵢ^expᵢ` (each base ≤ u64), i.e. the product
/// of the primes dividing it to an odd power.
pub fn squarefree_part_of_product(parts: &[(u64, u64)]) -> Result<Vec<u64>> {
    let mut odd: std::collections::BTreeMap<u64, u64> = std::collections::BTreeMap::new();
    for &(base, exp) in parts {
        if base == 0 {
            return Err(Error::usage("zero base in square-free part"));
        }
        if base == 1 || exp == 0 {
            continue;
        }
        for (p, e) in factor_u64(base)? {
            *odd.entry(p).or_insert(0) += e as u64 * exp;
        }
    }
    Ok(odd.into_iter().filter(|(_, e)| e % 2 == 1).map(|(p, _)| p).collect())
}
