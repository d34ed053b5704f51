//! The `pFq` term sequence: term ratio, partial sums, remainder estimates and
//! the polynomials `p, q, u, v, w` that drive the transformation recurrences.
//!
//! With `a_(n+1)/a_n = A(n)/B(n)`, `A(n) = z prod(alpha_i + n)` and
//! `B(n) = (n+1) prod(beta_j + n)`, each remainder estimate `omega_n` gives
//! `omega_n/omega_(n+1) = q(n)/p(n)` and the numerator relation
//! `u(n) N_(n+1) = v(n) N_n + w(n)` with `N_n = s_n/omega_n`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::scalar::{cabs, is_finite_cx, nonpositive_integer, real, Cx, Real};
use crate::{Error, Result};

/// Upper and lower parameters of `pFq`.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperParams<T: Real> {
    alpha: Vec<Cx<T>>,
    beta: Vec<Cx<T>>,
    terminating: Option<u64>,
}

impl<T: Real> HyperParams<T> {
    pub fn new(alpha: Vec<Cx<T>>, beta: Vec<Cx<T>>) -> Result<Self> {
        let terminating = alpha.iter().filter_map(|&a| nonpositive_integer(a)).min();
        for (j, &b) in beta.iter().enumerate() {
            if let Some(m) = nonpositive_integer(b) {
                // (beta)_k vanishes for k > m; harmless only if the series stops first.
                if terminating.map_or(true, |t| m < t) {
                    return Err(Error::LowerParameterPole(j));
                }
            }
        }
        Ok(HyperParams { alpha, beta, terminating })
    }

    /// Parameters from real values.
    pub fn real(alpha: &[f64], beta: &[f64]) -> Result<Self> {
        let conv = |v: &[f64]| v.iter().map(|&x| real(T::from_f64(x))).collect();
        Self::new(conv(alpha), conv(beta))
    }

    pub fn alpha(&self) -> &[Cx<T>] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Cx<T>] {
        &self.beta
    }

    pub fn p(&self) -> usize {
        self.alpha.len()
    }

    pub fn q(&self) -> usize {
        self.beta.len()
    }

    pub fn is_terminating(&self) -> bool {
        self.terminating.is_some()
    }

    /// Index of the last possibly nonzero term of a terminating series.
    pub fn last_term(&self) -> Option<u64> {
        self.terminating
    }

    /// Same parameters in another precision, converted through `f64`.
    pub fn cast<U: Real>(&self) -> HyperParams<U> {
        let conv = |v: &[Cx<T>]| {
            v.iter().map(|c| Cx::new(U::from_f64(c.re.to_f64()), U::from_f64(c.im.to_f64()))).collect()
        };
        HyperParams { alpha: conv(&self.alpha), beta: conv(&self.beta), terminating: self.terminating }
    }

    /// `A(n)` evaluated at a point.
    pub fn upper_at(&self, z: Cx<T>, n: Cx<T>) -> Cx<T> {
        self.alpha.iter().fold(z, |acc, &a| acc * (a + n))
    }

    /// `B(n)` evaluated at a point.
    pub fn lower_at(&self, n: Cx<T>) -> Cx<T> {
        self.beta.iter().fold(n + Cx::one(), |acc, &b| acc * (b + n))
    }
}

/// Remainder estimate `omega_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OmegaKind {
    /// `omega_n = a_n`.
    AN,
    /// `omega_n = a_(n+1)`.
    #[default]
    ANp1,
    /// `omega_n = (n + gamma) a_n`.
    NGammaAN,
    /// `omega_n = a_n a_(n+1) / (a_(n+1) - a_n)`.
    Aitken,
}

impl FromStr for OmegaKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a_n" | "an" => Ok(OmegaKind::AN),
            "a_np1" | "anp1" | "a_n+1" => Ok(OmegaKind::ANp1),
            "n_gamma_a_n" | "ngammaan" | "ngamma" => Ok(OmegaKind::NGammaAN),
            "aitken" => Ok(OmegaKind::Aitken),
            _ => Err(Error::InvalidArgument(format!("unknown remainder estimate '{s}'"))),
        }
    }
}

impl fmt::Display for OmegaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OmegaKind::AN => "a_n",
            OmegaKind::ANp1 => "a_np1",
            OmegaKind::NGammaAN => "n_gamma_a_n",
            OmegaKind::Aitken => "aitken",
        })
    }
}

/// Numerator and denominator of `a_(n+1)/a_n` as polynomials in `n`.
pub fn term_ratio<T: Real>(params: &HyperParams<T>, z: Cx<T>) -> (Poly<T>, Poly<T>) {
    (upper(params, z).to_poly(), lower(params).to_poly())
}

/// `scale * rest(n) * prod (n - root)`. Keeping linear factors explicit lets
/// common factors be cancelled by comparing roots rather than by polynomial
/// division.
#[derive(Clone, Debug)]
struct Factored<T: Real> {
    scale: Cx<T>,
    roots: Vec<Cx<T>>,
    rest: Poly<T>,
}

fn roots_match<T: Real>(a: Cx<T>, b: Cx<T>) -> bool {
    let tol = T::from_f64(1e-14) * T::one().max(cabs(a));
    cabs(a - b) <= tol
}

impl<T: Real> Factored<T> {
    fn new(scale: Cx<T>, roots: Vec<Cx<T>>) -> Self {
        Factored { scale, roots, rest: Poly::constant(Cx::one()) }
    }

    fn from_poly(rest: Poly<T>) -> Self {
        Factored { scale: Cx::one(), roots: Vec::new(), rest }
    }

    fn to_poly(&self) -> Poly<T> {
        self.roots
            .iter()
            .fold(self.rest.scale(self.scale), |acc, &r| acc.mul(&Poly::linear(-r)))
    }

    fn mul(&self, other: &Self) -> Self {
        let mut roots = self.roots.clone();
        roots.extend_from_slice(&other.roots);
        Factored { scale: self.scale * other.scale, roots, rest: self.rest.mul(&other.rest) }
    }

    fn with_root(mut self, r: Cx<T>) -> Self {
        self.roots.push(r);
        self
    }

    fn find_root(&self, r: Cx<T>) -> Option<usize> {
        self.roots.iter().position(|&x| roots_match(x, r))
    }

    fn remove_root(&self, r: Cx<T>) -> Option<Self> {
        let i = self.find_root(r)?;
        let mut out = self.clone();
        out.roots.remove(i);
        Some(out)
    }
}

fn upper<T: Real>(params: &HyperParams<T>, z: Cx<T>) -> Factored<T> {
    Factored::new(z, params.alpha.iter().map(|&a| -a).collect())
}

fn lower<T: Real>(params: &HyperParams<T>) -> Factored<T> {
    let mut roots = vec![-Cx::<T>::one()];
    roots.extend(params.beta.iter().map(|&b| -b));
    Factored::new(Cx::one(), roots)
}

fn shifted<T: Real>(f: &Factored<T>) -> Factored<T> {
    Factored {
        scale: f.scale,
        roots: f.roots.iter().map(|&r| r - Cx::one()).collect(),
        rest: f.rest.shift(Cx::one()),
    }
}

/// Polynomials of the numerator and denominator recurrences, with the
/// `gamma`-absorbed variants used by the factorial Levin-type recurrence.
#[derive(Clone, Debug)]
pub struct RecurrencePolys<T: Real> {
    pub p: Poly<T>,
    pub q: Poly<T>,
    pub u: Poly<T>,
    pub v: Poly<T>,
    pub w: Poly<T>,
    pub hat_p: Poly<T>,
    pub hat_q: Poly<T>,
    pub hat_u: Poly<T>,
    pub hat_v: Poly<T>,
    pub hat_w: Poly<T>,
    /// `n + gamma` divides `q`, `v` and `w`, so the hatted variants shed it.
    pub reduced: bool,
    pub r_star: usize,
    pub gamma: Option<T>,
    factored: [Factored<T>; 5],
}

impl<T: Real> RecurrencePolys<T> {
    fn from_factored(f: [Factored<T>; 5], gamma: Option<T>) -> Self {
        let [p, q, u, v, w] = f.clone().map(|x| x.to_poly());
        let deg = |x: &Poly<T>| x.degree();
        let mut out = RecurrencePolys {
            hat_p: p.clone(),
            hat_q: q.clone(),
            hat_u: u.clone(),
            hat_v: v.clone(),
            hat_w: w.clone(),
            r_star: [deg(&p) + 1, deg(&q), deg(&u) + 1, deg(&v), deg(&w)].into_iter().max().unwrap_or(0),
            p,
            q,
            u,
            v,
            w,
            reduced: false,
            gamma,
            factored: f,
        };
        let Some(g) = gamma else {
            return out;
        };
        let root = -real(g);
        let [_, fq, _, fv, fw] = &out.factored;
        if let (Some(rq), Some(rv), Some(rw)) = (fq.remove_root(root), fv.remove_root(root), fw.remove_root(root)) {
            out.reduced = true;
            out.hat_q = rq.to_poly();
            out.hat_v = rv.to_poly();
            out.hat_w = rw.to_poly();
        } else {
            let lin = Poly::linear(real(g));
            out.hat_p = out.p.mul(&lin);
            out.hat_u = out.u.mul(&lin);
        }
        out.r_star = [&out.hat_p, &out.hat_q, &out.hat_u, &out.hat_v, &out.hat_w]
            .into_iter()
            .map(deg)
            .max()
            .unwrap_or(0);
        out
    }

    /// Removes linear factors shared by `p, q` and those shared by `u, v, w`.
    /// Both relations are homogeneous in these groups, so the recurrences are
    /// unchanged apart from shorter windows.
    pub fn cancel_common_factors(&self) -> Self {
        let [mut p, mut q, mut u, mut v, mut w] = self.factored.clone();
        let mut i = 0;
        while i < p.roots.len() {
            let r = p.roots[i];
            if let Some(j) = q.find_root(r) {
                p.roots.remove(i);
                q.roots.remove(j);
            } else {
                i += 1;
            }
        }
        let mut i = 0;
        while i < u.roots.len() {
            let r = u.roots[i];
            match (v.find_root(r), w.find_root(r)) {
                (Some(jv), Some(jw)) => {
                    u.roots.remove(i);
                    v.roots.remove(jv);
                    w.roots.remove(jw);
                }
                _ => i += 1,
            }
        }
        Self::from_factored([p, q, u, v, w], self.gamma)
    }

    /// Largest degree among `p, q, u, v`: the Drummond window length.
    pub fn drummond_window(&self) -> usize {
        [&self.p, &self.q, &self.u, &self.v].into_iter().map(|x| x.degree()).max().unwrap_or(0)
    }
}

/// Builds the recurrence polynomials for `omega`. `gamma` selects the
/// factorial Levin-type variants; `NGammaAN` uses `gamma` (default 2) in its
/// estimate as well.
pub fn recurrence_polys<T: Real>(
    params: &HyperParams<T>,
    z: Cx<T>,
    omega: OmegaKind,
    gamma: Option<T>,
) -> Result<RecurrencePolys<T>> {
    let omega_gamma = gamma.unwrap_or_else(|| T::from_f64(2.0));
    recurrence_polys_with(params, z, omega, omega_gamma, gamma)
}

/// Like [`recurrence_polys`] with the `gamma` of the `NGammaAN` estimate
/// given separately, so that Drummond's variant can use it.
pub fn recurrence_polys_with<T: Real>(
    params: &HyperParams<T>,
    z: Cx<T>,
    omega: OmegaKind,
    omega_gamma: T,
    gamma: Option<T>,
) -> Result<RecurrencePolys<T>> {
    let a = upper(params, z);
    let b = lower(params);
    let a1 = shifted(&a);
    let b1 = shifted(&b);
    let f = match omega {
        OmegaKind::ANp1 => [a1.clone(), b1.clone(), a1, b1.clone(), b1],
        OmegaKind::AN => [a.clone(), b.clone(), a.clone(), b, a],
        OmegaKind::NGammaAN => {
            let g = real(omega_gamma);
            let p = a.clone().with_root(-g - Cx::one());
            let q = b.with_root(-g);
            [p.clone(), q.clone(), p, q, a]
        }
        OmegaKind::Aitken => {
            let d = a.to_poly().sub(&b.to_poly());
            if d.is_zero() {
                return Err(Error::AitkenDegenerate);
            }
            let d = Factored::from_poly(d);
            let d1 = shifted(&d);
            let p = a1.mul(&d);
            let q = b.mul(&d1);
            [p.clone(), q.clone(), p, q, d.mul(&d1)]
        }
    };
    Ok(RecurrencePolys::from_factored(f, gamma))
}

/// Terms and partial sums `(a_n, s_n)` for `n < count`.
pub fn partial_sums<T: Real>(params: &HyperParams<T>, z: Cx<T>, count: usize) -> Result<Vec<(Cx<T>, Cx<T>)>> {
    let mut out = Vec::with_capacity(count);
    let mut a = Cx::<T>::one();
    let mut s = a;
    for n in 0..count {
        out.push((a, s));
        if n + 1 == count {
            break;
        }
        let nn = real(T::from_usize(n));
        let num = params.upper_at(z, nn);
        a = if num.is_zero() || a.is_zero() { Cx::zero() } else { a * num / params.lower_at(nn) };
        if !is_finite_cx(a) {
            return Err(Error::Overflow(n + 1));
        }
        s += a;
    }
    Ok(out)
}

/// `omega_n` for `n < count` computed from the terms.
pub fn omega_values<T: Real>(
    params: &HyperParams<T>,
    z: Cx<T>,
    kind: OmegaKind,
    gamma: Option<T>,
    count: usize,
) -> Result<Vec<Cx<T>>> {
    let terms = partial_sums(params, z, count + 1)?;
    let g = gamma.unwrap_or_else(|| T::from_f64(2.0));
    Ok((0..count)
        .map(|n| {
            let an = terms[n].0;
            let an1 = terms[n + 1].0;
            match kind {
                OmegaKind::AN => an,
                OmegaKind::ANp1 => an1,
                OmegaKind::NGammaAN => an * (g + T::from_usize(n)),
                OmegaKind::Aitken => an * an1 / (an1 - an),
            }
        })
        .collect())
}

/// Exact finite sum of a terminating series.
pub fn sum_terminating<T: Real>(params: &HyperParams<T>, z: Cx<T>) -> Result<Cx<T>> {
    let last = params.last_term().ok_or(Error::NotTerminating)?;
    let terms = partial_sums(params, z, last as usize + 1)?;
    Ok(terms.last().map(|t| t.1).unwrap_or_else(Cx::one))
}
