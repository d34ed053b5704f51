//! Linear-complexity factorial Levin-type transformation in
//! ratio-of-rationals form.
//!
//! `R^(k) = P^(k)/Q^(k)` with `Q^(k) = Delta^k[(n+gamma)_(k-1)/omega_n]`.
//! The recurrences run on rows of the hatted polynomials divided by
//! Pochhammer factors, for which adjacent-entry recurrences exist. The cursor
//! keeps `tau_m = Q^(m-1)/Q^(m)` and `R^(m)` over a window of `r* + 2`
//! entries; `r = k - 1` during start-up (`k <= r*`) and `r = r*` afterwards.

use std::collections::VecDeque;

use num_traits::{One, Zero};

use crate::drummond::Status;
use crate::hyperterm::RecurrencePolys;
use crate::poly::{poch_re, Poly};
use crate::scalar::{is_finite_cx, Cx, Real};
use crate::{Error, Result};

/// Coefficient rows for `hat_p, hat_q, hat_u, hat_v` (indices 0..4) at levels
/// `k` and `k-1`. Rows of `hat_p, hat_u` carry the Pochhammer factor of
/// length `r+2`, rows of `hat_q, hat_v` the one of length `r+1`.
#[derive(Clone, Debug)]
pub struct WenigerRows<T: Real> {
    polys: [Poly<T>; 4],
    cur: [Vec<Cx<T>>; 4],
    prev: [Vec<Cx<T>>; 4],
    w_diff: Poly<T>,
    n: usize,
    ng: T,
    order: usize,
    k: usize,
}

const LEFT: [bool; 4] = [true, false, true, false];

impl<T: Real> WenigerRows<T> {
    pub fn new(rp: &RecurrencePolys<T>, n: usize, gamma: T) -> Self {
        Self::with_order(rp, n, gamma, rp.r_star)
    }

    /// Rows for a fixed order `r >= r*` once start-up is over.
    pub fn with_order(rp: &RecurrencePolys<T>, n: usize, gamma: T, r: usize) -> Self {
        let polys = [rp.hat_p.clone(), rp.hat_q.clone(), rp.hat_u.clone(), rp.hat_v.clone()];
        let len = r + 2;
        let mut rows = WenigerRows {
            polys,
            cur: std::array::from_fn(|_| vec![Cx::zero(); len]),
            prev: std::array::from_fn(|_| vec![Cx::zero(); len]),
            w_diff: rp.hat_w.clone(),
            n,
            ng: T::from_usize(n) + gamma,
            order: r,
            k: 0,
        };
        for i in 0..4 {
            rows.cur[i][0] = rows.seed(i, 0, -1);
        }
        rows
    }

    /// `r` used at level `k`.
    pub fn r_at(&self, k: usize) -> isize {
        if k <= self.order + 1 {
            k as isize - 1
        } else {
            self.order as isize
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> isize {
        self.r_at(self.k)
    }

    /// Row `i` at the current level, entries `j = 0..=r+1`.
    pub fn row(&self, i: usize) -> &[Cx<T>] {
        &self.cur[i][..(self.r() + 2) as usize]
    }

    fn seed(&self, i: usize, k: usize, r: isize) -> Cx<T> {
        let x = self.ng + T::from_usize(2 * k) - T::from_f64((r + 1) as f64);
        let len = if LEFT[i] { r + 2 } else { r + 1 } as usize;
        self.polys[i].eval_at(self.n + k) / Cx::new(poch_re(x, len), T::zero())
    }

    /// `(Delta^k hat_w)(n)`, zero once `k` exceeds the degree of `hat_w`.
    pub fn delta_w(&self) -> Cx<T> {
        self.w_diff.eval_at(self.n)
    }

    /// Advances to level `k+1`. Levels up to `r*+1` use the `r = k-1`
    /// recurrences. The fixed-`r*` ones need the previous level at `r = r*`
    /// as well, so they take over from `r*+2`.
    pub fn step(&mut self) {
        self.k += 1;
        let k = self.k;
        let r = self.r_at(k);
        let startup = k <= self.order + 1;
        let kt = T::from_usize(k);
        for i in 0..4 {
            std::mem::swap(&mut self.cur[i], &mut self.prev[i]);
            let seed = self.seed(i, k, r);
            let a1 = if LEFT[i] { 1.0 } else { 0.0 };
            let cur = &mut self.cur[i];
            let prev = &self.prev[i];
            cur.iter_mut().for_each(|x| *x = Cx::zero());
            cur[0] = seed;
            for j in 1..=(r + 1) as usize {
                let jf = j as f64;
                let p1 = prev[j - 1];
                let p2 = if j >= 2 { prev[j - 2] } else { Cx::zero() };
                let lead = T::from_usize(k + 1) - T::from_f64(jf);
                let c1 = self.ng + T::from_f64(2.0 * k as f64 - jf + a1);
                let v = if startup {
                    (cur[j - 1] * c1 + p2 * kt) * lead - p1 * kt
                } else {
                    let c2 = T::from_f64(r as f64 - jf + 2.0 + a1) * kt;
                    let c3 = (self.ng + T::from_f64(2.0 * k as f64 - jf - r as f64 - 2.0)) * kt;
                    (cur[j - 1] * c1 - p2 * c2) * lead - p1 * c3
                };
                cur[j] = v / T::from_usize(j);
            }
        }
        if !self.w_diff.is_zero() {
            self.w_diff = self.w_diff.delta();
        }
    }
}

#[derive(Clone, Debug)]
pub struct WenigerCursor<T: Real> {
    n: usize,
    k: usize,
    ng: T,
    rows: WenigerRows<T>,
    /// `tau_k, tau_(k-1), ...` with `tau_m = Q^(m-1)/Q^(m)`.
    tau: VecDeque<Cx<T>>,
    /// `R^(k), R^(k-1), ...`.
    rv: VecDeque<Cx<T>>,
    rho: Vec<Cx<T>>,
    /// `1/Q^(k)`, needed only while the inhomogeneity is nonzero.
    inv_q: Cx<T>,
    mu0: Cx<T>,
    window: usize,
    order: usize,
    status: Status,
    best: Cx<T>,
}

/// Rejects `gamma` with `n + gamma - 1` within `1e-6` of a nonpositive integer.
pub fn check_gamma<T: Real>(gamma: T, n: usize) -> Result<()> {
    let x = gamma.to_f64() + n as f64 - 1.0;
    if !x.is_finite() || (x < 0.5 && (x - x.round()).abs() < 1e-6) {
        return Err(Error::BadGamma(gamma.to_f64()));
    }
    Ok(())
}

impl<T: Real> WenigerCursor<T> {
    /// Cursor at `k = 0` with `R^(0) = s_n` and `1/Q^(0) = (n+gamma-1) omega_n`.
    /// `rp` must have been built with `gamma`.
    pub fn new(rp: &RecurrencePolys<T>, s_n: Cx<T>, omega_n: Cx<T>, n: usize) -> Result<Self> {
        Self::with_order(rp, s_n, omega_n, n, rp.r_star)
    }

    /// Like [`WenigerCursor::new`] but with the fixed-order phase at `r`
    /// instead of `r*`. Any `r >= r*` gives the same transformation; larger
    /// `r` only lengthens the window and the start-up phase.
    pub fn with_order(rp: &RecurrencePolys<T>, s_n: Cx<T>, omega_n: Cx<T>, n: usize, r: usize) -> Result<Self> {
        if r < rp.r_star {
            return Err(Error::InvalidArgument(format!("order {r} is below r* = {}", rp.r_star)));
        }
        let gamma = rp
            .gamma
            .ok_or_else(|| Error::InvalidArgument("factorial Levin-type recurrence needs gamma".into()))?;
        check_gamma(gamma, n)?;
        if omega_n.is_zero() || !is_finite_cx(omega_n) {
            return Err(Error::ZeroOmega(n));
        }
        let ng = T::from_usize(n) + gamma;
        let mu0 = omega_n * (ng - T::one());
        let window = r + 2;
        let mut tau = VecDeque::with_capacity(window + 1);
        let mut rv = VecDeque::with_capacity(window + 1);
        tau.push_front(Cx::zero());
        rv.push_front(s_n);
        Ok(WenigerCursor {
            n,
            k: 0,
            ng,
            rows: WenigerRows::with_order(rp, n, gamma, r),
            tau,
            rv,
            rho: vec![Cx::zero(); window + 1],
            inv_q: mu0,
            mu0,
            window,
            order: r,
            status: Status::Running,
            best: s_n,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn value(&self) -> Cx<T> {
        self.best
    }

    pub fn rows(&self) -> &WenigerRows<T> {
        &self.rows
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn set_status(&mut self, s: Status) {
        self.status = s;
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn window_capacity(&self) -> (usize, usize) {
        (self.tau.capacity(), self.rv.capacity())
    }

    /// `Q^(k)/Q^(k-1)` for the current `k >= 1`.
    pub fn denominator_ratio(&self) -> Cx<T> {
        Cx::<T>::one() / self.tau[0]
    }

    /// The scaled reciprocal ratio `mu~^(k)` of successive rescaled
    /// denominators `Q^(m)/(n+gamma)_(m-1)`.
    pub fn mu_tilde(&self) -> Cx<T> {
        match self.k {
            0 => self.mu0,
            1 => self.tau[0],
            k => self.tau[0] * (self.ng + T::from_usize(k) - T::from_f64(2.0)),
        }
    }

    pub fn step(&mut self) -> Result<()> {
        if self.status != Status::Running {
            return Ok(());
        }
        let k = self.k;
        let r = self.rows.r();
        let jmax = ((r + 1) as usize).min(k);
        let ng = self.ng;
        let kt = T::from_usize(k);
        let l = self.rows.row(0);
        let q = self.rows.row(1);
        let u = self.rows.row(2);
        let v = self.rows.row(3);

        self.rho[0] = Cx::one();
        for j in 1..=jmax {
            self.rho[j] = self.rho[j - 1] * self.tau[j - 1];
        }
        let rho = &self.rho;
        let rv = &self.rv;
        let fq = |j: usize| ng + T::from_f64(2.0 * k as f64 - 2.0 * j as f64 - 1.0);
        let fl = |j: usize| ng + kt - T::from_f64(j as f64 + 1.0);

        let mut rhs = Cx::<T>::zero();
        let mut rhs_n = Cx::<T>::zero();
        for j in 0..=jmax {
            rhs += q[j] * rho[j] * fq(j);
            rhs_n += v[j] * rv[j] * rho[j] * fq(j);
        }
        let mut lhs = l[0] * fl(0);
        let mut lhs_n = u[0] * rv[0] * fl(0);
        for j in 1..=jmax {
            lhs += l[j] * (rho[j - 1] + rho[j] * fl(j));
            lhs_n += u[j] * (rv[j - 1] * rho[j - 1] + rv[j] * rho[j] * fl(j));
        }
        if k <= self.order {
            rhs_n += self.rows.delta_w() * self.inv_q;
        }
        if l[0].is_zero() || u[0].is_zero() {
            return Err(Error::ZeroPivot(k));
        }
        let rho_m1: Cx<T> = (rhs - lhs) / l[0];
        if rho_m1.is_zero() {
            return Err(Error::ZeroPivot(k));
        }
        let r_new = (rhs_n - lhs_n) / (u[0] * rho_m1);
        let tau_new = Cx::<T>::one() / rho_m1;
        if !is_finite_cx(r_new) || !is_finite_cx(tau_new) || tau_new.is_zero() {
            self.status = Status::Overflow;
            return Ok(());
        }

        if k == 0 {
            self.tau.clear();
        }
        if self.rv.len() == self.window {
            self.rv.pop_back();
        }
        if self.tau.len() == self.window {
            self.tau.pop_back();
        }
        self.tau.push_front(tau_new);
        self.rv.push_front(r_new);
        if k < self.order {
            self.inv_q = self.inv_q * tau_new;
        }
        self.rows.step();
        self.k += 1;
        self.best = r_new;
        Ok(())
    }
}
