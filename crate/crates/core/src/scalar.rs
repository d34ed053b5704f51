//! Real scalar abstraction shared by every algorithm in the crate.
//!
//! All transformations are generic over [`Real`], which is implemented for
//! `f64` (machine precision) and for the multi-component expansions in
//! [`crate::multifloat`] (`Dd` with 106 bits, `Qd` with 212 bits).

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_complex::Complex;
use num_traits::NumAssign;

/// Complex number over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;

pub trait Real:
    NumAssign
    + Copy
    + Debug
    + Display
    + PartialOrd
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Significand width in bits.
    const BITS: u32;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    /// Spacing of the format at 1.
    fn epsilon() -> Self;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn is_finite(self) -> bool;
    /// Parses a decimal literal (`-1.25e-3` style) to full precision.
    fn parse_decimal(s: &str) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_f64(n as f64)
    }

    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `sqrt(a^2 + b^2)` without intermediate overflow.
    fn hypot(self, other: Self) -> Self {
        let a = self.abs();
        let b = other.abs();
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big == Self::zero() {
            return Self::zero();
        }
        if !big.is_finite() {
            return big;
        }
        let r = small / big;
        big * (Self::one() + r * r).sqrt()
    }
}

impl Real for f64 {
    const BITS: u32 = 53;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
    fn hypot(self, other: Self) -> Self {
        f64::hypot(self, other)
    }
}

/// Modulus of a complex number, overflow-safe.
pub fn cabs<T: Real>(z: Cx<T>) -> T {
    z.re.hypot(z.im)
}

pub fn cx<T: Real>(re: f64, im: f64) -> Cx<T> {
    Cx::new(T::from_f64(re), T::from_f64(im))
}

pub fn real<T: Real>(x: T) -> Cx<T> {
    Cx::new(x, T::zero())
}

pub fn is_finite_cx<T: Real>(z: Cx<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Converts a complex value between precisions through its `f64` image when
/// narrowing and exactly when widening from `f64`.
pub fn cx_from_f64<T: Real>(z: Cx<f64>) -> Cx<T> {
    Cx::new(T::from_f64(z.re), T::from_f64(z.im))
}

pub fn cx_to_f64<T: Real>(z: Cx<T>) -> Cx<f64> {
    Cx::new(z.re.to_f64(), z.im.to_f64())
}

/// Relative distance `|a - b| / |b|`, falling back to the absolute distance
/// when `b` vanishes.
pub fn rel_err<T: Real>(a: Cx<T>, b: Cx<T>) -> T {
    let d = cabs(a - b);
    let m = cabs(b);
    if m == T::zero() {
        d
    } else {
        d / m
    }
}

/// If `z` is a nonpositive integer `-m`, returns `m`.
pub fn nonpositive_integer<T: Real>(z: Cx<T>) -> Option<u64> {
    if z.im != T::zero() {
        return None;
    }
    let x = z.re.to_f64();
    if !(x <= 0.0) || x.fract() != 0.0 || x < -(u32::MAX as f64) {
        return None;
    }
    if T::from_f64(x) != z.re {
        return None;
    }
    Some((-x) as u64)
}
