//! Diagonal `[k/k]` Padé approximants of `exp(z)` by a two-term recurrence.
//!
//! `mu_1 = 1/(2 - z)`, `mu_(k+1) = 1/(4k + 2 + z^2 mu_k)`,
//! `R_1 = 1 + 2 z mu_1`, `R_(k+1) = [(4k+2) R_k + z^2 R_(k-1) mu_k] mu_(k+1)`.
//! On the imaginary axis every iterate has unit modulus in exact arithmetic.

use num_traits::{One, Zero};

use crate::driver::{EvalResult, Status};
use crate::scalar::{cabs, is_finite_cx, Cx, Real};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct PadeExpCursor<T: Real> {
    k: usize,
    z: Cx<T>,
    z2: Cx<T>,
    mu: Cx<T>,
    r_prev: Cx<T>,
    r: Cx<T>,
}

fn recip<T: Real>(w: Cx<T>) -> Cx<T> {
    let d = w.re * w.re + w.im * w.im;
    Cx::new(w.re / d, -w.im / d)
}

impl<T: Real> PadeExpCursor<T> {
    /// Cursor at `k = 0` with `R_0 = 1`, `mu_0 = 1`.
    pub fn new(z: Cx<T>) -> Self {
        PadeExpCursor { k: 0, z, z2: z * z, mu: Cx::one(), r_prev: Cx::one(), r: Cx::one() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `R_k`.
    pub fn value(&self) -> Cx<T> {
        self.r
    }

    /// `R_(k-1)` (equal to `R_0` at `k = 0`).
    pub fn previous(&self) -> Cx<T> {
        self.r_prev
    }

    pub fn mu(&self) -> Cx<T> {
        self.mu
    }

    pub fn step(&mut self) -> Result<()> {
        let k = self.k;
        let (den, r_next) = if k == 0 {
            let den = Cx::<T>::new(T::from_f64(2.0), T::zero()) - self.z;
            (den, None)
        } else {
            let c = T::from_usize(4 * k + 2);
            (self.z2 * self.mu + c, Some(c))
        };
        if den.is_zero() {
            return Err(Error::ZeroPivot(k));
        }
        let mu = recip(den);
        let r = match r_next {
            None => self.r + self.z * mu * T::from_f64(2.0),
            Some(c) => (self.r * c + self.z2 * self.r_prev * self.mu) * mu,
        };
        self.mu = mu;
        self.r_prev = self.r;
        self.r = r;
        self.k = k + 1;
        Ok(())
    }
}

/// Iterates until the first `k > 2` with
/// `|R_k - R_(k-1)| <= tol max(|R_k|, |R_(k-1)|)`, or until `k_max`.
pub fn pade_exp<T: Real>(z: Cx<T>, tol: T, k_max: usize) -> Result<EvalResult<T>> {
    if k_max < 2 {
        return Err(Error::InvalidArgument("k_max must be at least 2".into()));
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let tol2 = tol * tol;
    let mut cur = PadeExpCursor::new(z);
    let norm2 = |w: Cx<T>| w.re * w.re + w.im * w.im;
    while cur.k < k_max {
        cur.step()?;
        let (a, b) = (cur.r, cur.r_prev);
        if !is_finite_cx(a) {
            return Ok(EvalResult { value: b, k: cur.k - 1, converged: false, err_est: T::zero(), status: Status::Overflow });
        }
        let d2 = norm2(a - b);
        let m2 = { let (x, y) = (norm2(a), norm2(b)); if x > y { x } else { y } };
        if cur.k > 2 && d2 <= tol2 * m2 {
            return Ok(EvalResult { value: a, k: cur.k, converged: true, err_est: d2.sqrt(), status: Status::Converged });
        }
    }
    let err_est = cabs(cur.r - cur.r_prev);
    Ok(EvalResult { value: cur.r, k: cur.k, converged: false, err_est, status: Status::KMaxReached })
}

/// `| |R| - 1 |`.
pub fn unitarity_defect<T: Real>(value: Cx<T>) -> T {
    (cabs(value) - T::one()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::binomial;
    use crate::scalar::{cx, rel_err};

    fn tol() -> f64 {
        8.0 * f64::EPSILON
    }

    #[test]
    fn zero_argument_stays_one() {
        let mut c = PadeExpCursor::new(cx::<f64>(0.0, 0.0));
        for _ in 0..10 {
            c.step().unwrap();
            assert_eq!(c.value(), cx(1.0, 0.0));
        }
        assert_eq!(pade_exp(cx::<f64>(0.0, 0.0), tol(), 100).unwrap().value, cx(1.0, 0.0));
    }

    #[test]
    fn first_order_by_hand() {
        let mut c = PadeExpCursor::new(cx::<f64>(0.0, 1.0));
        c.step().unwrap();
        assert!((c.value() - cx(0.6, 0.8)).norm() < 1e-15);
    }

    #[test]
    fn pole_is_reported() {
        let mut c = PadeExpCursor::new(cx::<f64>(2.0, 0.0));
        assert_eq!(c.step(), Err(Error::ZeroPivot(0)));
    }

    /// `[k/k]` of exp from `P(z) = sum_j (2k-j)! k! / ((2k)! j! (k-j)!) z^j`
    /// and `Q(z) = P(-z)`.
    fn classical(k: usize, z: Cx<f64>) -> Cx<f64> {
        let mut p = Cx::<f64>::zero();
        let mut q = Cx::<f64>::zero();
        for j in 0..=k {
            // (2k-j)! k! / ((2k)! (k-j)!) = C(k, j) / C(2k, j)
            let c = binomial::<f64>(k, j) / binomial::<f64>(2 * k, j) / (1..=j).map(|i| i as f64).product::<f64>();
            p += z.powu(j as u32) * c;
            q += (-z).powu(j as u32) * c;
        }
        p / q
    }

    #[test]
    fn matches_classical_pade() {
        for z in [cx(0.3, 0.4), cx(-0.9, 0.1), cx(0.0, 1.0), cx(0.7, -0.7)] {
            let mut c = PadeExpCursor::new(z);
            for k in 1..=5 {
                c.step().unwrap();
                assert!(rel_err(c.value(), classical(k, z)) < 1e-13, "k={k} z={z}");
            }
        }
    }

    #[test]
    fn unitary_on_the_imaginary_axis() {
        assert_eq!(unitarity_defect(cx::<f64>(1.0, 0.0)), 0.0);
        assert!(unitarity_defect(cx::<f64>(0.6, 0.8)) < 1e-16);
        let mut c = PadeExpCursor::new(cx::<f64>(0.0, 37.0));
        for _ in 0..200 {
            c.step().unwrap();
            assert!(unitarity_defect(c.value()) < 1e-13);
        }
    }

    #[test]
    fn agrees_with_exp() {
        for t in [1.0, 10.0, 1e3, 1e6] {
            let r = pade_exp(cx::<f64>(0.0, t), tol(), 1 << 24).unwrap();
            assert!(r.converged);
            let err = (r.value - cx(t.cos(), t.sin())).norm();
            assert!(err <= 1e-12, "t={t} err={err} k={}", r.k);
            assert!(unitarity_defect(r.value) <= 1e-11);
        }
    }

    #[test]
    fn off_axis_values() {
        let z = cx::<f64>(-3.0, 2.0);
        let r = pade_exp(z, tol(), 1000).unwrap();
        assert!(rel_err(r.value, z.exp()) < 1e-14);
    }
}
