//! Dense polynomials in the index variable `n` with complex coefficients,
//! forward differences, Pochhammer symbols and the generalized binomial
//! transform pair.

use crate::scalar::{nonpositive_integer, Cx, Real};
use crate::{Error, Result};
use num_traits::{One, Zero};

/// Polynomial in `n`; `coeffs[i]` multiplies `n^i`. Trailing zeros are
/// trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T: Real> {
    coeffs: Vec<Cx<T>>,
}

impl<T: Real> Poly<T> {
    pub fn new(mut coeffs: Vec<Cx<T>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Cx<T>) -> Self {
        Self::new(vec![c])
    }

    /// `n + c`.
    pub fn linear(c: Cx<T>) -> Self {
        Poly { coeffs: vec![c, Cx::one()] }
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, n: Cx<T>) -> Cx<T> {
        let mut acc = Cx::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * n + c;
        }
        acc
    }

    pub fn eval_at(&self, n: usize) -> Cx<T> {
        self.eval(Cx::new(T::from_usize(n), T::zero()))
    }

    /// `p(n + 1) - p(n)`, by binomial expansion of the coefficients.
    pub fn delta(&self) -> Self {
        let d = self.coeffs.len();
        if d <= 1 {
            return Self::zero();
        }
        let mut out = vec![Cx::zero(); d - 1];
        // binom holds row i of Pascal's triangle.
        let mut binom = vec![T::one()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                let mut next = vec![T::one(); i + 1];
                for m in 1..i {
                    next[m] = binom[m - 1] + binom[m];
                }
                binom = next;
            }
            for (m, slot) in out.iter_mut().enumerate().take(i) {
                *slot += c * binom[m];
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Cx::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Cx::zero(); len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-Cx::one()))
    }

    /// `p(n + h)` for a constant shift.
    pub fn shift(&self, h: Cx<T>) -> Self {
        let mut acc = Self::zero();
        let lin = Self::linear(h);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(c));
        }
        acc
    }

    /// Converts coefficients to another precision through `f64` components.
    pub fn map<U: Real>(&self, f: impl Fn(Cx<T>) -> Cx<U>) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(|&c| f(c)).collect())
    }
}

/// Rising factorial `(x)_m = x (x+1) ... (x+m-1)`.
pub fn poch<T: Real>(x: Cx<T>, m: usize) -> Cx<T> {
    let mut acc = Cx::one();
    let mut t = x;
    for _ in 0..m {
        acc = acc * t;
        t.re += T::one();
    }
    acc
}

/// Real rising factorial.
pub fn poch_re<T: Real>(x: T, m: usize) -> T {
    let mut acc = T::one();
    let mut t = x;
    for _ in 0..m {
        acc *= t;
        t += T::one();
    }
    acc
}

/// Binomial coefficient by the multiplicative recurrence.
pub fn binomial<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::from_usize(n - i) / T::from_usize(i + 1);
    }
    acc
}

pub fn delta<T: Real>(p: &Poly<T>) -> Poly<T> {
    p.delta()
}

pub fn poly_eval<T: Real>(p: &Poly<T>, n: Cx<T>) -> Cx<T> {
    p.eval(n)
}

/// `b_n = sum_k C(n,k) (c+n)_k a_k`.
pub fn gen_binom<T: Real>(a: &[Cx<T>], c: Cx<T>) -> Vec<Cx<T>> {
    (0..a.len())
        .map(|n| {
            let cn = c + Cx::new(T::from_usize(n), T::zero());
            let mut binom = T::one();
            let mut p = Cx::one();
            let mut acc = Cx::zero();
            for (k, &ak) in a.iter().enumerate().take(n + 1) {
                acc += ak * p * binom;
                binom = binom * T::from_usize(n - k) / T::from_usize(k + 1);
                p = p * (cn + Cx::new(T::from_usize(k), T::zero()));
            }
            acc
        })
        .collect()
}

/// Inverse of [`gen_binom`]:
/// `a_n = sum_k C(n,k) (-1)^(n-k) (c+2k) / (c+k)_(n+1) b_k`.
pub fn gen_binom_inv<T: Real>(b: &[Cx<T>], c: Cx<T>) -> Result<Vec<Cx<T>>> {
    if nonpositive_integer(c).is_some() {
        return Err(Error::InvalidArgument(
            "generalized binomial inverse needs c outside the nonpositive integers".into(),
        ));
    }
    Ok((0..b.len())
        .map(|n| {
            let mut acc = Cx::zero();
            let mut binom = T::one();
            for (k, &bk) in b.iter().enumerate().take(n + 1) {
                let ck = c + Cx::new(T::from_usize(k), T::zero());
                let sign = if (n - k) % 2 == 0 { T::one() } else { -T::one() };
                let num = c + Cx::new(T::from_usize(2 * k), T::zero());
                acc += bk * num / poch(ck, n + 1) * (binom * sign);
                binom = binom * T::from_usize(n - k) / T::from_usize(k + 1);
            }
            acc
        })
        .collect())
}
