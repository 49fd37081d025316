//! Minimal fixed-point big-real arithmetic.
//!
//! Gaussian periods and the interval fall-back of `sigma_min` need real
//! arithmetic far beyond `f64` (checks at absolute tolerances like 1e−30),
//! but only the four operations, `sin`/`cos`, and π. Rather than pull in an
//! arbitrary-precision float dependency for that, this module scales
//! everything by `2^bits` and stays in `BigInt`.
//!
//! A [`Fixed`] with `bits` fractional bits represents `v / 2^bits`. Each
//! multiplication or division truncates to the grid, losing at most one unit
//! in the last place, and the transcendental routines sum Taylor series until
//! the terms vanish at the working precision; with the default 256 bits and
//! the few thousand operations any caller here performs, accumulated error
//! stays below `2^-200` — many orders of magnitude tighter than any tolerance
//! this crate checks against.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// A real number `v / 2^bits` on a fixed binary grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    v: BigInt,
    bits: u32,
}

impl Fixed {
    pub fn zero(bits: u32) -> Fixed {
        Fixed { v: BigInt::zero(), bits }
    }

    pub fn from_int(k: i64, bits: u32) -> Fixed {
        Fixed { v: BigInt::from(k) << bits, bits }
    }

    /// Smallest representable positive value, `2^-bits`.
    pub fn ulp(bits: u32) -> Fixed {
        Fixed { v: BigInt::from(1), bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    fn check(&self, rhs: &Fixed) {
        assert_eq!(self.bits, rhs.bits, "mixed fixed-point precisions");
    }

    pub fn add(&self, rhs: &Fixed) -> Fixed {
        self.check(rhs);
        Fixed { v: &self.v + &rhs.v, bits: self.bits }
    }

    pub fn sub(&self, rhs: &Fixed) -> Fixed {
        self.check(rhs);
        Fixed { v: &self.v - &rhs.v, bits: self.bits }
    }

    pub fn neg(&self) -> Fixed {
        Fixed { v: -&self.v, bits: self.bits }
    }

    pub fn mul(&self, rhs: &Fixed) -> Fixed {
        self.check(rhs);
        Fixed { v: (&self.v * &rhs.v) >> self.bits, bits: self.bits }
    }

    pub fn mul_int(&self, k: i64) -> Fixed {
        Fixed { v: &self.v * k, bits: self.bits }
    }

    pub fn div_int(&self, k: i64) -> Fixed {
        assert!(k != 0, "division by zero");
        Fixed { v: &self.v / k, bits: self.bits }
    }

    pub fn abs(&self) -> Fixed {
        Fixed { v: self.v.abs(), bits: self.bits }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn cmp_value(&self, rhs: &Fixed) -> Ordering {
        self.check(rhs);
        self.v.cmp(&rhs.v)
    }

    pub fn to_f64(&self) -> f64 {
        // Split off the low bits so huge numerators do not overflow f64.
        // Shifts and masks on BigInt act on the two's-complement view, so
        // v = (v >> bits)·2^bits + (v & mask) holds for either sign.
        let int = (&self.v >> self.bits).to_f64().unwrap_or(f64::NAN);
        let mask = (BigInt::from(1) << self.bits) - 1;
        let frac = (&self.v & &mask).to_f64().unwrap_or(0.0) / 2f64.powi(self.bits as i32);
        int + frac
    }

    /// Decimal expansion with `digits` fractional digits (truncated).
    pub fn to_decimal(&self, digits: u32) -> String {
        let neg = self.v.is_negative();
        let v = self.v.abs();
        let int = &v >> self.bits;
        let mask = (BigInt::from(1) << self.bits) - 1;
        let frac: BigInt = (v & mask) * BigInt::from(10u32).pow(digits) >> self.bits;
        let frac_str = format!("{:0>width$}", frac.to_string(), width = digits as usize);
        format!("{}{}.{}", if neg { "-" } else { "" }, int, frac_str)
    }

    /// π by Machin's formula `π = 16·atan(1/5) − 4·atan(1/239)`.
    pub fn pi(bits: u32) -> Fixed {
        let guard = bits + 16;
        let a = atan_inv(5, guard);
        let b = atan_inv(239, guard);
        let pi = a.mul_int(16).sub(&b.mul_int(4));
        pi.round_to(bits)
    }

    pub fn two_pi(bits: u32) -> Fixed {
        Self::pi(bits).mul_int(2)
    }

    fn round_to(&self, bits: u32) -> Fixed {
        assert!(bits <= self.bits);
        Fixed { v: &self.v >> (self.bits - bits), bits }
    }

    /// `sin` via Taylor series after reduction to `[−π, π]`.
    pub fn sin(&self) -> Fixed {
        let x = self.reduce();
        let x2 = x.mul(&x);
        let mut term = x.clone();
        let mut acc = x;
        let mut k: i64 = 1;
        while !term.is_zero() {
            term = term.mul(&x2).div_int((k + 1) * (k + 2)).neg();
            acc = acc.add(&term);
            k += 2;
        }
        acc
    }

    /// `cos` via Taylor series after reduction to `[−π, π]`.
    pub fn cos(&self) -> Fixed {
        let x = self.reduce();
        let x2 = x.mul(&x);
        let mut term = Fixed::from_int(1, self.bits);
        let mut acc = term.clone();
        let mut k: i64 = 0;
        while !term.is_zero() {
            term = term.mul(&x2).div_int((k + 1) * (k + 2)).neg();
            acc = acc.add(&term);
            k += 2;
        }
        acc
    }

    /// Argument reduction by the nearest multiple of 2π.
    fn reduce(&self) -> Fixed {
        let two_pi = Fixed::two_pi(self.bits);
        // k = round(x / 2pi)
        let k = num_integer::Integer::div_floor(&(&self.v + (&two_pi.v / 2)), &two_pi.v);
        Fixed { v: &self.v - k * &two_pi.v, bits: self.bits }
    }
}

/// `atan(1/x)` for integer `x ≥ 2` by the alternating power series.
fn atan_inv(x: i64, bits: u32) -> Fixed {
    let mut power = Fixed::from_int(1, bits).div_int(x); // 1/x^(2k+1)
    let x2 = x * x;
    let mut acc = Fixed::zero(bits);
    let mut k: i64 = 0;
    let mut sign = 1i64;
    while !power.is_zero() {
        acc = acc.add(&power.div_int(2 * k + 1).mul_int(sign));
        power = power.div_int(x2);
        sign = -sign;
        k += 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_matches_f64_reference() {
        let pi = Fixed::pi(128);
        assert!((pi.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn pi_first_decimal_digits() {
        let pi = Fixed::pi(256);
        let s = pi.to_decimal(40);
        assert!(s.starts_with("3.141592653589793238462643383279502884197"), "{s}");
    }

    #[test]
    fn sin_cos_pythagoras_at_many_angles() {
        let bits = 192;
        let two_pi = Fixed::two_pi(bits);
        for t in 0..17 {
            let theta = two_pi.mul_int(t).div_int(17);
            let s = theta.sin();
            let c = theta.cos();
            let one = Fixed::from_int(1, bits);
            let dev = s.mul(&s).add(&c.mul(&c)).sub(&one).abs();
            // Deviation far below 2^-150.
            assert!(dev.to_f64() < 1e-45, "t={t} dev={}", dev.to_f64());
        }
    }

    #[test]
    fn trig_matches_f64_for_moderate_angles() {
        let bits = 160;
        for t in -8..=8 {
            let x = Fixed::from_int(t, bits).div_int(3);
            let xf = t as f64 / 3.0;
            assert!((x.sin().to_f64() - xf.sin()).abs() < 1e-14, "sin t={t}");
            assert!((x.cos().to_f64() - xf.cos()).abs() < 1e-14, "cos t={t}");
        }
    }

    #[test]
    fn reduction_handles_large_arguments() {
        let bits = 160;
        // 1000 and 1000 - 318*pi differ by an even multiple... just compare
        // against f64's own reduction, which is exact enough at this size.
        let x = Fixed::from_int(1000, bits);
        assert!((x.sin().to_f64() - 1000f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn decimal_rendering_pads_zeros() {
        let bits = 64;
        let x = Fixed::from_int(1, bits).div_int(8);
        assert_eq!(x.to_decimal(4), "0.1250");
        let y = Fixed::from_int(-3, bits).div_int(2);
        assert_eq!(y.to_decimal(2), "-1.50");
    }
}
