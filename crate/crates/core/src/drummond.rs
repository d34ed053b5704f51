//! Linear-complexity Drummond transformation in ratio-of-rationals form.
//!
//! With `D^(k) = Delta^k(1/omega_n)` and `N^(k) = Delta^k(s_n/omega_n)`, the
//! cursor carries `mu^(m) = D^(m-1)/D^(m)` (with `D^(-1) = 1`) and
//! `T^(m) = N^(m)/D^(m)` over a window whose length depends only on the
//! degrees of `p, q, u, v`.

use std::collections::VecDeque;

use num_traits::{One, Zero};

use crate::hyperterm::RecurrencePolys;
use crate::poly::Poly;
use crate::scalar::{is_finite_cx, Cx, Real};
use crate::{Error, Result};

/// State of a transformation cursor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Running,
    Converged,
    Overflow,
    KMaxReached,
}

/// Rows `p_j^(k) = C(k,j) Delta^j p(n+k-j)` for `p, q, u, v` at levels `k`
/// and `k-1`, plus `Delta^k w`.
#[derive(Clone, Debug)]
pub struct CoeffRows<T: Real> {
    polys: [Poly<T>; 4],
    cur: [Vec<Cx<T>>; 4],
    prev: [Vec<Cx<T>>; 4],
    w_diff: Poly<T>,
    n: usize,
    k: usize,
}

impl<T: Real> CoeffRows<T> {
    pub fn new(p: &Poly<T>, q: &Poly<T>, u: &Poly<T>, v: &Poly<T>, w: &Poly<T>, n: usize) -> Self {
        let polys = [p.clone(), q.clone(), u.clone(), v.clone()];
        let cur = polys.clone().map(|x| {
            let mut row = vec![Cx::zero(); x.degree() + 1];
            row[0] = x.eval_at(n);
            row
        });
        let prev = cur.clone().map(|r| vec![Cx::zero(); r.len()]);
        CoeffRows { polys, cur, prev, w_diff: w.clone(), n, k: 0 }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Row `i` (0 = p, 1 = q, 2 = u, 3 = v) at the current level.
    pub fn row(&self, i: usize) -> &[Cx<T>] {
        &self.cur[i]
    }

    /// `(Delta^k w)(n)`.
    pub fn delta_w(&self) -> Cx<T> {
        self.w_diff.eval_at(self.n)
    }

    pub fn w_active(&self) -> bool {
        !self.w_diff.is_zero()
    }

    /// Advances to level `k+1` using `j p_j^(k) = (k-j+1) p_(j-1)^(k) - k p_(j-1)^(k-1)`.
    pub fn step(&mut self) {
        self.k += 1;
        let k = self.k;
        let kt = T::from_usize(k);
        for i in 0..4 {
            std::mem::swap(&mut self.cur[i], &mut self.prev[i]);
            let cur = &mut self.cur[i];
            let prev = &self.prev[i];
            cur[0] = self.polys[i].eval_at(self.n + k);
            let top = k.min(cur.len() - 1);
            for j in 1..=top {
                let a = cur[j - 1] * T::from_usize(k - j + 1) - prev[j - 1] * kt;
                cur[j] = a / T::from_usize(j);
            }
        }
        if !self.w_diff.is_zero() {
            self.w_diff = self.w_diff.delta();
        }
    }
}

#[derive(Clone, Debug)]
pub struct DrummondCursor<T: Real> {
    n: usize,
    k: usize,
    rows: CoeffRows<T>,
    /// `mu^(k), mu^(k-1), ...`.
    mu: VecDeque<Cx<T>>,
    /// `T^(k), T^(k-1), ...`.
    t: VecDeque<Cx<T>>,
    /// `mu^(0) ... mu^(k) = 1/D^(k)`, kept while `Delta^k w` is nonzero.
    mu_prod: Cx<T>,
    window: usize,
    r_star: usize,
    status: Status,
    best: Cx<T>,
}

impl<T: Real> DrummondCursor<T> {
    /// Cursor at `k = 0` with `T^(0) = s_n` and `mu^(0) = omega_n`.
    pub fn new(rp: &RecurrencePolys<T>, s_n: Cx<T>, omega_n: Cx<T>, n: usize) -> Result<Self> {
        if omega_n.is_zero() || !is_finite_cx(omega_n) {
            return Err(Error::ZeroOmega(n));
        }
        let window = rp.drummond_window() + 1;
        let mut mu = VecDeque::with_capacity(window + 1);
        let mut t = VecDeque::with_capacity(window + 1);
        mu.push_front(omega_n);
        t.push_front(s_n);
        Ok(DrummondCursor {
            n,
            k: 0,
            rows: CoeffRows::new(&rp.p, &rp.q, &rp.u, &rp.v, &rp.w, n),
            mu,
            t,
            mu_prod: omega_n,
            window,
            r_star: rp.r_star,
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

    /// `mu^(k)`.
    pub fn mu(&self) -> Cx<T> {
        self.mu[0]
    }

    pub fn rows(&self) -> &CoeffRows<T> {
        &self.rows
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn set_status(&mut self, s: Status) {
        self.status = s;
    }

    pub fn r_star(&self) -> usize {
        self.r_star
    }

    /// Allocated window capacity; constant over the life of the cursor.
    pub fn window_capacity(&self) -> (usize, usize) {
        (self.mu.capacity(), self.t.capacity())
    }

    /// `1/mu^(k+1)` from the denominator relation, solved for its leading term.
    fn next_inv_mu(&self) -> Result<Cx<T>> {
        let k = self.k;
        let p = self.rows.row(0);
        let q = self.rows.row(1);
        let mu = |i: usize| self.mu[i];
        let one = Cx::<T>::one();

        let jq = k.min(q.len() - 1);
        let mut rhs = q[jq];
        for j in (0..jq).rev() {
            rhs = q[j] + mu(j) * rhs;
        }
        let jp = k.min(p.len() - 1);
        let mut lhs = Cx::zero();
        if jp >= 1 {
            lhs = p[jp] * (one + mu(jp - 1));
            for j in (1..jp).rev() {
                lhs = p[j] * (one + mu(j - 1)) + mu(j - 1) * lhs;
            }
        }
        if p[0].is_zero() {
            return Err(Error::ZeroPivot(k));
        }
        Ok((rhs - lhs) / p[0] - one)
    }

    /// Advances `k -> k+1`. On overflow the status becomes `Overflow` and the
    /// last finite value is kept.
    pub fn step(&mut self) -> Result<()> {
        if self.status != Status::Running {
            return Ok(());
        }
        let k = self.k;
        let inv_mu = self.next_inv_mu()?;
        let u = self.rows.row(2);
        let v = self.rows.row(3);
        let mu = |i: usize| self.mu[i];
        let t = |i: usize| self.t[i];

        let jv = k.min(v.len() - 1);
        let mut rhs = v[jv] * t(jv);
        for j in (0..jv).rev() {
            rhs = v[j] * t(j) + mu(j) * rhs;
        }
        if self.rows.w_active() {
            rhs += self.rows.delta_w() * self.mu_prod;
        }
        let ju = k.min(u.len() - 1);
        let mut lhs = Cx::zero();
        if ju >= 1 {
            let e = |j: usize| u[j] * (t(j - 1) + mu(j - 1) * t(j));
            lhs = e(ju);
            for j in (1..ju).rev() {
                lhs = e(j) + mu(j - 1) * lhs;
            }
        }
        if u[0].is_zero() || inv_mu.is_zero() {
            return Err(Error::ZeroPivot(k));
        }
        let t_new = (rhs - lhs - u[0] * t(0)) / (u[0] * inv_mu);
        let mu_new = Cx::<T>::one() / inv_mu;
        if !is_finite_cx(t_new) || !is_finite_cx(mu_new) || mu_new.is_zero() {
            self.status = Status::Overflow;
            return Ok(());
        }

        if self.mu.len() == self.window {
            self.mu.pop_back();
            self.t.pop_back();
        }
        self.mu.push_front(mu_new);
        self.t.push_front(t_new);
        self.rows.step();
        if self.rows.w_active() {
            self.mu_prod = self.mu_prod * mu_new;
        }
        self.k += 1;
        self.best = t_new;
        Ok(())
    }
}
