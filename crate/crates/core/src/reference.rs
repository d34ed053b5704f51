//! Reference values: the direct binomial-sum forms of both transformations
//! (quadratic cost and numerically unstable, kept as foils and test oracles)
//! and a high-precision truth source for `pFq`.

use num_traits::{One, Zero};

use crate::driver::{transform_limit, EvalOptions, Method};
use crate::hyperterm::{omega_values, partial_sums, sum_terminating, HyperParams, OmegaKind};
use crate::scalar::{cabs, is_finite_cx, Cx, Real};
use crate::{Error, Result};

/// Numerator and denominator of a direct transformation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Parts<T: Real> {
    pub numerator: Cx<T>,
    pub denominator: Cx<T>,
}

impl<T: Real> Parts<T> {
    pub fn value(&self) -> Cx<T> {
        self.numerator / self.denominator
    }
}

/// `(x)_m` for `m >= -1`, with `(x)_(-1) = 1/(x-1)`.
fn poch_from_minus_one<T: Real>(x: T, m: isize) -> T {
    if m < 0 {
        return T::one() / (x - T::one());
    }
    let mut acc = T::one();
    let mut t = x;
    for _ in 0..m {
        acc *= t;
        t += T::one();
    }
    acc
}

/// `sum_j C(k,j) (-1)^(k-j) c_j (s_(n+j), 1) / omega_(n+j)` with weights `c_j`.
fn weighted_parts<T: Real>(
    params: &HyperParams<T>,
    z: Cx<T>,
    n: usize,
    k: usize,
    omega: OmegaKind,
    gamma: Option<T>,
    weight: impl Fn(usize) -> T,
) -> Result<Parts<T>> {
    let sums = partial_sums(params, z, n + k + 1)?;
    let om = omega_values(params, z, omega, gamma, n + k + 1)?;
    let mut num = Cx::<T>::zero();
    let mut den = Cx::<T>::zero();
    let mut binom = T::one();
    for j in 0..=k {
        let w = om[n + j];
        if w.is_zero() {
            return Err(Error::ZeroOmega(n + j));
        }
        let sign = if (k - j) % 2 == 0 { T::one() } else { -T::one() };
        let c = binom * sign * weight(j);
        let inv = Cx::<T>::one() / w;
        num += sums[n + j].1 * inv * c;
        den += inv * c;
        binom = binom * T::from_usize(k - j) / T::from_usize(j + 1);
    }
    if !is_finite_cx(num) || !is_finite_cx(den) {
        return Err(Error::Overflow(k));
    }
    Ok(Parts { numerator: num, denominator: den })
}

/// `Delta^k(s_n/omega_n)` and `Delta^k(1/omega_n)`.
pub fn drummond_parts<T: Real>(
    params: &HyperParams<T>,
    z: Cx<T>,
    n: usize,
    k: usize,
    omega: OmegaKind,
) -> Result<Parts<T>> {
    weighted_parts(params, z, n, k, omega, None, |_| T::one())
}

/// Drummond's `T_n^(k)` from its binomial sums. The `NGammaAN` estimate
/// uses `gamma = 2` here.
pub fn drummond_direct<T: Real>(params: &HyperParams<T>, z: Cx<T>, n: usize, k: usize, omega: OmegaKind) -> Result<Cx<T>> {
    Ok(drummond_parts(params, z, n, k, omega)?.value())
}

/// `Delta^k[(n+gamma)_(k-1) s_n/omega_n]` and `Delta^k[(n+gamma)_(k-1)/omega_n]`.
pub fn weniger_parts<T: Real>(
    params: &HyperParams<T>,
    z: Cx<T>,
    n: usize,
    k: usize,
    omega: OmegaKind,
    gamma: T,
) -> Result<Parts<T>> {
    weighted_parts(params, z, n, k, omega, Some(gamma), |j| {
        poch_from_minus_one(T::from_usize(n + j) + gamma, k as isize - 1)
    })
}

/// The factorial Levin-type `R_n^(k)` from its binomial sums.
pub fn weniger_direct<T: Real>(
    params: &HyperParams<T>,
    z: Cx<T>,
    n: usize,
    k: usize,
    omega: OmegaKind,
    gamma: T,
) -> Result<Cx<T>> {
    Ok(weniger_parts(params, z, n, k, omega, gamma)?.value())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OracleMode {
    /// Maclaurin summation where the series converges fast enough, the
    /// stabilized transformation elsewhere.
    #[default]
    Auto,
    /// Direct summation with a rigorous tail bound; convergent series only.
    Maclaurin,
    /// Factorial Levin-type transformation at the working precision.
    StableWeniger,
}

/// Configuration of [`oracle_pfq`]. The precision is the scalar type the
/// oracle is instantiated with.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub mode: OracleMode,
    /// Cap on terms (Maclaurin) or transformation order (stable mode).
    pub max_steps: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { mode: OracleMode::Auto, max_steps: 100_000 }
    }
}

/// `|z|` below which `Auto` uses Maclaurin summation when `p = q + 1`.
const AUTO_UNIT_DISK: f64 = 0.75;

/// Whether the Maclaurin series converges at `z`.
pub fn maclaurin_applies<T: Real>(params: &HyperParams<T>, z: Cx<T>) -> bool {
    let (p, q) = (params.p(), params.q());
    p <= q || (p == q + 1 && cabs(z).to_f64() < 1.0)
}

/// Reference value of `pFq(alpha; beta; z)`.
pub fn oracle_pfq<T: Real>(params: &HyperParams<T>, z: Cx<T>, cfg: &OracleConfig) -> Result<Cx<T>> {
    if z.is_zero() {
        return Ok(Cx::one());
    }
    if params.is_terminating() {
        return sum_terminating(params, z);
    }
    let mode = match cfg.mode {
        OracleMode::Auto => {
            let (p, q) = (params.p(), params.q());
            if p <= q || (p == q + 1 && cabs(z).to_f64() <= AUTO_UNIT_DISK) {
                OracleMode::Maclaurin
            } else {
                OracleMode::StableWeniger
            }
        }
        m => m,
    };
    match mode {
        OracleMode::Maclaurin => maclaurin(params, z, cfg.max_steps),
        _ => {
            let opts = EvalOptions {
                method: Method::FactorialLevin,
                tol: T::from_f64(8.0) * T::epsilon(),
                k_max: cfg.max_steps,
                ..EvalOptions::default()
            };
            let r = transform_limit(params, z, &opts)?;
            if !r.converged {
                return Err(Error::NoConvergence(r.k));
            }
            Ok(r.value)
        }
    }
}

/// Bound on `|a_(m+1)/a_m|` valid for every `m >= big_n`, or `None` if the
/// per-factor bounds are not yet available there.
fn ratio_bound<T: Real>(params: &HyperParams<T>, z: Cx<T>, big_n: usize) -> Option<f64> {
    let nf = big_n as f64;
    let (alpha, beta) = (params.alpha(), params.beta());
    let mut rho = cabs(z).to_f64();
    let paired = alpha.len().min(beta.len());
    for i in 0..paired {
        let b = cabs(beta[i]).to_f64();
        if nf <= b {
            return None;
        }
        // |alpha + m| / |beta + m| <= 1 + |alpha - beta| / (m - |beta|)
        rho *= 1.0 + cabs(alpha[i] - beta[i]).to_f64() / (nf - b);
    }
    if alpha.len() > beta.len() {
        // One extra upper parameter, paired with the factor (m + 1).
        rho *= 1.0 + cabs(alpha[paired] - Cx::one()).to_f64() / (nf + 1.0);
    } else {
        rho /= nf + 1.0;
        for b in &beta[paired..] {
            let b = cabs(*b).to_f64();
            if nf <= b {
                return None;
            }
            rho /= nf - b;
        }
    }
    Some(rho)
}

fn maclaurin<T: Real>(params: &HyperParams<T>, z: Cx<T>, max_terms: usize) -> Result<Cx<T>> {
    if !maclaurin_applies(params, z) {
        return Err(Error::InvalidArgument("Maclaurin series diverges at this argument".into()));
    }
    // Tail target: at most 2^-70 relative, tightened to the working precision.
    let eps = T::from_f64(8.0) * T::epsilon();
    let thr = if eps < T::from_f64(2f64.powi(-70)) { eps } else { T::from_f64(2f64.powi(-70)) };
    let mut a = Cx::<T>::one();
    let mut s = a;
    for m in 0..max_terms {
        let mm = Cx::new(T::from_usize(m), T::zero());
        a = a * params.upper_at(z, mm) / params.lower_at(mm);
        if !is_finite_cx(a) {
            return Err(Error::Overflow(m + 1));
        }
        // a is now a_(m+1); the tail beyond s_m is at most |a_(m+1)| / (1 - rho).
        if let Some(rho) = ratio_bound(params, z, m + 1) {
            if rho < 1.0 {
                let tail = cabs(a) / T::from_f64(1.0 - rho);
                if tail <= thr * cabs(s) {
                    return Ok(s);
                }
            }
        }
        s += a;
    }
    Err(Error::NoConvergence(max_terms))
}
