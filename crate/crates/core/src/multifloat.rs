//! Multi-component floating-point expansions (double-double and quad-double).
//!
//! A `MultiFloat<N>` holds `N` nonoverlapping `f64` components in decreasing
//! magnitude; its value is their exact sum. Every operation forms the exact
//! expansion of its result from error-free transformations (`two_sum`,
//! `two_prod`), compresses it, and keeps the `N` leading components, giving
//! roughly `53 * N` bits of significand with the exponent range of `f64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_traits::{Num, One, Zero};

use crate::scalar::Real;

/// Maximum number of doubles fed to one accumulation.
const CAP: usize = 48;

#[derive(Clone, Copy)]
pub struct MultiFloat<const N: usize>([f64; N]);

/// Double-double: 106-bit significand.
pub type Dd = MultiFloat<2>;
/// Quad-double: 212-bit significand.
pub type Qd = MultiFloat<4>;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl<const N: usize> MultiFloat<N> {
    pub const fn from_components(c: [f64; N]) -> Self {
        MultiFloat(c)
    }

    pub fn components(&self) -> [f64; N] {
        self.0
    }

    /// Exact sum of `terms`, rounded to `N` components.
    fn from_terms(terms: &[f64]) -> Self {
        debug_assert!(terms.len() <= CAP);
        let naive: f64 = terms.iter().sum();
        if !naive.is_finite() {
            let mut c = [0.0; N];
            c[0] = naive;
            return MultiFloat(c);
        }

        // Grow an exact nonoverlapping expansion, increasing magnitude.
        let mut e = [0.0f64; CAP];
        let mut len = 0;
        for &x in terms {
            if x == 0.0 {
                continue;
            }
            let mut q = x;
            let mut out = 0;
            for i in 0..len {
                let (s, h) = two_sum(q, e[i]);
                q = s;
                if h != 0.0 {
                    e[out] = h;
                    out += 1;
                }
            }
            if q != 0.0 {
                e[out] = q;
                out += 1;
            }
            len = out;
        }
        if len == 0 {
            return MultiFloat([0.0; N]);
        }

        // Compress so the leading component carries the rounded value.
        let mut g = [0.0f64; CAP];
        let mut bottom = len - 1;
        let mut q = e[len - 1];
        for i in (0..len - 1).rev() {
            let (s, t) = fast_two_sum(q, e[i]);
            if t != 0.0 {
                g[bottom] = s;
                bottom -= 1;
                q = t;
            } else {
                q = s;
            }
        }
        g[bottom] = q;
        let mut h = [0.0f64; CAP];
        let mut top = 0;
        for &gi in &g[bottom + 1..len] {
            let (s, t) = fast_two_sum(gi, q);
            if t != 0.0 {
                h[top] = t;
                top += 1;
            }
            q = s;
        }
        h[top] = q;
        top += 1;

        let mut c = [0.0; N];
        for (i, slot) in c.iter_mut().enumerate() {
            if i < top {
                *slot = h[top - 1 - i];
            }
        }
        MultiFloat(c)
    }

    fn mul_f64_terms(&self, b: f64, sign: f64, out: &mut [f64]) -> usize {
        let mut n = 0;
        for &a in &self.0 {
            let (p, e) = two_prod(a, b);
            out[n] = sign * p;
            out[n + 1] = sign * e;
            n += 2;
        }
        n
    }

    pub fn floor(self) -> Self {
        let mut c = [0.0; N];
        for i in 0..N {
            let f = self.0[i].floor();
            c[i] = f;
            if f != self.0[i] {
                break;
            }
        }
        Self::from_terms(&c)
    }

    pub fn trunc(self) -> Self {
        if self.0[0] < 0.0 {
            -(-self).floor()
        } else {
            self.floor()
        }
    }

    fn powi10(e: i32) -> Self {
        let mut result = Self::one();
        let mut base = Self::from_f64(10.0);
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = result * base;
            }
            base = base * base;
            k >>= 1;
        }
        if e < 0 {
            Self::one() / result
        } else {
            result
        }
    }

    /// Decimal digits in scientific notation, truncated to `digits`
    /// significant figures after rounding the last one.
    pub fn to_scientific(self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.0[0] == 0.0 {
            return format!("{:.*}e0", digits - 1, 0.0);
        }
        if !self.0[0].is_finite() {
            return format!("{}", self.0[0]);
        }
        let neg = self.0[0] < 0.0;
        let a = self.abs();
        let mut exp = a.0[0].abs().log10().floor() as i32;
        let mut x = a / Self::powi10(exp);
        if x.0[0] >= 10.0 {
            x = x / Self::from_f64(10.0);
            exp += 1;
        } else if x.0[0] < 1.0 {
            x = x * Self::from_f64(10.0);
            exp -= 1;
        }
        let mut ds: Vec<u8> = Vec::with_capacity(digits + 1);
        for _ in 0..=digits {
            let d = x.floor().0[0].clamp(0.0, 9.0);
            ds.push(d as u8);
            x = (x - Self::from_f64(d)) * Self::from_f64(10.0);
        }
        // Round half up on the guard digit.
        let guard = ds.pop().unwrap_or(0);
        if guard >= 5 {
            let mut i = ds.len();
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.pop();
                    exp += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push((b'0' + ds[0]) as char);
        if ds.len() > 1 {
            s.push('.');
            for &d in &ds[1..] {
                s.push((b'0' + d) as char);
            }
        }
        s.push('e');
        s.push_str(&exp.to_string());
        s
    }
}

impl<const N: usize> Add for MultiFloat<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut t = [0.0; CAP];
        t[..N].copy_from_slice(&self.0);
        t[N..2 * N].copy_from_slice(&rhs.0);
        Self::from_terms(&t[..2 * N])
    }
}

impl<const N: usize> Sub for MultiFloat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const N: usize> Neg for MultiFloat<N> {
    type Output = Self;
    fn neg(self) -> Self {
        let mut c = self.0;
        for x in &mut c {
            *x = -*x;
        }
        MultiFloat(c)
    }
}

impl<const N: usize> Mul for MultiFloat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut t = [0.0; CAP];
        let mut n = 0;
        for i in 0..N {
            for j in 0..N {
                if i + j < N {
                    let (p, e) = two_prod(self.0[i], rhs.0[j]);
                    t[n] = p;
                    t[n + 1] = e;
                    n += 2;
                } else if i + j == N {
                    t[n] = self.0[i] * rhs.0[j];
                    n += 1;
                }
            }
        }
        Self::from_terms(&t[..n])
    }
}

impl<const N: usize> Div for MultiFloat<N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let b0 = rhs.0[0];
        if b0 == 0.0 || !b0.is_finite() || !self.0[0].is_finite() {
            return Self::from_f64(self.0[0] / b0);
        }
        let mut quot = [0.0; 8];
        let mut r = self;
        for qi in quot.iter_mut().take(N + 1) {
            let q = r.0[0] / b0;
            *qi = q;
            let mut t = [0.0; CAP];
            t[..N].copy_from_slice(&r.0);
            let m = rhs.mul_f64_terms(q, -1.0, &mut t[N..]);
            r = Self::from_terms(&t[..N + m]);
        }
        Self::from_terms(&quot[..N + 1])
    }
}

impl<const N: usize> Rem for MultiFloat<N> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        self - (self / rhs).trunc() * rhs
    }
}

macro_rules! assign_op {
    ($tr:ident, $f:ident, $op:tt) => {
        impl<const N: usize> $tr for MultiFloat<N> {
            fn $f(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);
assign_op!(RemAssign, rem_assign, %);

impl<const N: usize> PartialEq for MultiFloat<N> {
    fn eq(&self, other: &Self) -> bool {
        (*self - *other).0[0] == 0.0
    }
}

impl<const N: usize> PartialOrd for MultiFloat<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (*self - *other).0[0].partial_cmp(&0.0)
    }
}

impl<const N: usize> Zero for MultiFloat<N> {
    fn zero() -> Self {
        MultiFloat([0.0; N])
    }
    fn is_zero(&self) -> bool {
        self.0[0] == 0.0
    }
}

impl<const N: usize> One for MultiFloat<N> {
    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl<const N: usize> Num for MultiFloat<N> {
    type FromStrRadixErr = ParseMultiFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(ParseMultiFloatError);
        }
        Self::parse_decimal(s).ok_or(ParseMultiFloatError)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseMultiFloatError;

impl fmt::Display for ParseMultiFloatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid decimal literal")
    }
}

impl std::error::Error for ParseMultiFloatError {}

impl<const N: usize> fmt::Debug for MultiFloat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiFloat{:?}", self.0)
    }
}

impl<const N: usize> fmt::Display for MultiFloat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map(|p| p + 1).unwrap_or(16 * N);
        f.write_str(&self.to_scientific(digits))
    }
}

impl<const N: usize> Real for MultiFloat<N> {
    const BITS: u32 = 53 * N as u32;

    fn from_f64(x: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = x;
        MultiFloat(c)
    }

    fn to_f64(self) -> f64 {
        if N > 1 {
            self.0[0] + self.0[1]
        } else {
            self.0[0]
        }
    }

    fn epsilon() -> Self {
        Self::from_f64(2f64.powi(-52 * N as i32))
    }

    fn abs(self) -> Self {
        if self.0[0] < 0.0 {
            -self
        } else {
            self
        }
    }

    fn sqrt(self) -> Self {
        let a0 = self.0[0];
        if a0 == 0.0 {
            return Self::zero();
        }
        if a0 < 0.0 || !a0.is_finite() {
            return Self::from_f64(a0.sqrt());
        }
        let half = Self::from_f64(0.5);
        let mut x = Self::from_f64(a0.sqrt());
        let mut bits = 26usize;
        while bits < 53 * N + 8 {
            x = (x + self / x) * half;
            bits *= 2;
        }
        x
    }

    fn is_finite(self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        let s = s.trim();
        let (neg, body) = match s.as_bytes().first()? {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let (mant, exp) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
            None => (body, 0),
        };
        let (int_part, frac_part) = match mant.find('.') {
            Some(i) => (&mant[..i], &mant[i + 1..]),
            None => (mant, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let digits: String = int_part.chars().chain(frac_part.chars()).collect();
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let mut v = Self::zero();
        for chunk in digits.as_bytes().chunks(15) {
            let c: f64 = std::str::from_utf8(chunk).ok()?.parse().ok()?;
            v = v * Self::from_f64(10f64.powi(chunk.len() as i32)) + Self::from_f64(c);
        }
        let scale = exp - frac_part.len() as i32;
        if scale != 0 {
            v = if scale > 0 {
                v * Self::powi10(scale)
            } else {
                v / Self::powi10(-scale)
            };
        }
        Some(if neg { -v } else { v })
    }
}
