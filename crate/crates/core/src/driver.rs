//! Evaluation front end: dispatch, stopping rule and the precision-tier
//! wrapper.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

pub use crate::drummond::Status;
use crate::drummond::DrummondCursor;
use crate::hyperterm::{
    omega_values, partial_sums, recurrence_polys, recurrence_polys_with, sum_terminating, HyperParams, OmegaKind,
};
use crate::hyperterm::RecurrencePolys;
use crate::multifloat::{Dd, Qd};
use crate::scalar::{cabs, cx_from_f64, Cx, Real};
use crate::weniger::WenigerCursor;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    Drummond,
    #[default]
    FactorialLevin,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "drummond" => Ok(Method::Drummond),
            "weniger" | "levin" | "factorial-levin" | "factoriallevin" => Ok(Method::FactorialLevin),
            _ => Err(Error::InvalidArgument(format!("unknown method '{s}'"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Drummond => "drummond",
            Method::FactorialLevin => "weniger",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalOptions<T: Real> {
    pub method: Method,
    pub omega: OmegaKind,
    pub gamma: T,
    pub n: usize,
    pub tol: T,
    pub k_max: usize,
}

impl<T: Real> Default for EvalOptions<T> {
    fn default() -> Self {
        EvalOptions {
            method: Method::FactorialLevin,
            omega: OmegaKind::ANp1,
            gamma: T::from_f64(2.0),
            n: 0,
            tol: T::from_f64(8.0) * T::epsilon(),
            k_max: 1 << 20,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult<T: Real> {
    pub value: Cx<T>,
    pub k: usize,
    pub converged: bool,
    /// Last `|T^(k) - T^(k-1)|`.
    pub err_est: T,
    pub status: Status,
}

/// Common interface of the two transformation cursors.
pub trait Cursor<T: Real> {
    fn step(&mut self) -> Result<()>;
    fn value(&self) -> Cx<T>;
    fn k(&self) -> usize;
    fn status(&self) -> Status;
    fn order(&self) -> usize;
}

impl<T: Real> Cursor<T> for DrummondCursor<T> {
    fn step(&mut self) -> Result<()> {
        DrummondCursor::step(self)
    }
    fn value(&self) -> Cx<T> {
        DrummondCursor::value(self)
    }
    fn k(&self) -> usize {
        DrummondCursor::k(self)
    }
    fn status(&self) -> Status {
        DrummondCursor::status(self)
    }
    fn order(&self) -> usize {
        DrummondCursor::r_star(self)
    }
}

impl<T: Real> Cursor<T> for WenigerCursor<T> {
    fn step(&mut self) -> Result<()> {
        WenigerCursor::step(self)
    }
    fn value(&self) -> Cx<T> {
        WenigerCursor::value(self)
    }
    fn k(&self) -> usize {
        WenigerCursor::k(self)
    }
    fn status(&self) -> Status {
        WenigerCursor::status(self)
    }
    fn order(&self) -> usize {
        WenigerCursor::order(self)
    }
}

/// Polynomials for the factorial Levin-type cursor: the uncancelled set
/// (where the `n + gamma` reduction can apply) or the cancelled one,
/// whichever gives the shorter recurrence.
pub fn weniger_polys<T: Real>(
    params: &HyperParams<T>,
    z: Cx<T>,
    omega: OmegaKind,
    gamma: T,
) -> Result<RecurrencePolys<T>> {
    let full = recurrence_polys(params, z, omega, Some(gamma))?;
    let cancelled = full.cancel_common_factors();
    Ok(if cancelled.r_star < full.r_star { cancelled } else { full })
}

/// Polynomials for the Drummond cursor, with common factors cancelled.
/// `gamma` only enters through the `NGammaAN` estimate.
pub fn drummond_polys<T: Real>(params: &HyperParams<T>, z: Cx<T>, omega: OmegaKind, gamma: T) -> Result<RecurrencePolys<T>> {
    Ok(recurrence_polys_with(params, z, omega, gamma, None)?.cancel_common_factors())
}

fn start<T: Real>(params: &HyperParams<T>, z: Cx<T>, opts: &EvalOptions<T>) -> Result<(Cx<T>, Cx<T>)> {
    let s = partial_sums(params, z, opts.n + 1)?[opts.n].1;
    let om = omega_values(params, z, opts.omega, Some(opts.gamma), opts.n + 1)?[opts.n];
    Ok((s, om))
}

pub fn drummond_cursor<T: Real>(params: &HyperParams<T>, z: Cx<T>, opts: &EvalOptions<T>) -> Result<DrummondCursor<T>> {
    let rp = drummond_polys(params, z, opts.omega, opts.gamma)?;
    let (s, om) = start(params, z, opts)?;
    DrummondCursor::new(&rp, s, om, opts.n)
}

pub fn weniger_cursor<T: Real>(params: &HyperParams<T>, z: Cx<T>, opts: &EvalOptions<T>) -> Result<WenigerCursor<T>> {
    let rp = weniger_polys(params, z, opts.omega, opts.gamma)?;
    let (s, om) = start(params, z, opts)?;
    WenigerCursor::new(&rp, s, om, opts.n)
}

/// Iterates `cursor` until the first `k > r* + 2` with
/// `|T^(k) - T^(k-1)| <= tol max(|T^(k)|, |T^(k-1)|)`, or until `k_max`.
pub fn run_cursor<T: Real, C: Cursor<T>>(cursor: &mut C, tol: T, k_max: usize) -> Result<EvalResult<T>> {
    let guard = cursor.order() + 2;
    let mut prev = cursor.value();
    let mut err_est = T::zero();
    loop {
        if cursor.k() >= k_max {
            return Ok(EvalResult {
                value: cursor.value(),
                k: cursor.k(),
                converged: false,
                err_est,
                status: Status::KMaxReached,
            });
        }
        cursor.step()?;
        if cursor.status() == Status::Overflow {
            return Ok(EvalResult { value: cursor.value(), k: cursor.k(), converged: false, err_est, status: Status::Overflow });
        }
        let cur = cursor.value();
        err_est = cabs(cur - prev);
        if cursor.k() > guard && err_est <= tol * cabs(cur).max(cabs(prev)) {
            return Ok(EvalResult { value: cur, k: cursor.k(), converged: true, err_est, status: Status::Converged });
        }
        prev = cur;
    }
}

/// Limit of the selected transformation for a nonterminating series.
pub fn transform_limit<T: Real>(params: &HyperParams<T>, z: Cx<T>, opts: &EvalOptions<T>) -> Result<EvalResult<T>> {
    if !(opts.tol > T::zero()) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    match opts.method {
        Method::Drummond => run_cursor(&mut drummond_cursor(params, z, opts)?, opts.tol, opts.k_max),
        Method::FactorialLevin => run_cursor(&mut weniger_cursor(params, z, opts)?, opts.tol, opts.k_max),
    }
}

/// `pFq(alpha; beta; z)`.
pub fn pfq<T: Real>(params: &HyperParams<T>, z: Cx<T>, opts: &EvalOptions<T>) -> Result<EvalResult<T>> {
    let exact = |value| EvalResult { value, k: 0, converged: true, err_est: T::zero(), status: Status::Converged };
    if z.is_zero() {
        return Ok(exact(Cx::one()));
    }
    if params.is_terminating() {
        return Ok(exact(sum_terminating(params, z)?));
    }
    transform_limit(params, z, opts)
}

/// Relative agreement to `bits` bits.
fn agree<T: Real>(a: Cx<T>, b: Cx<T>, bits: u32) -> bool {
    let tol = T::from_f64(2f64.powi(-(bits as i32)));
    cabs(a - b) <= tol * cabs(b)
}

fn run_tier<T: Real>(params: &HyperParams<f64>, z: Cx<f64>, opts: &EvalOptions<f64>) -> Result<Cx<Qd>> {
    let o = EvalOptions::<T> {
        method: opts.method,
        omega: opts.omega,
        gamma: T::from_f64(opts.gamma),
        n: opts.n,
        tol: T::from_f64(8.0) * T::epsilon(),
        k_max: opts.k_max,
    };
    let r = pfq(&params.cast::<T>(), cx_from_f64(z), &o)?;
    if !r.converged {
        return Err(Error::NoConvergence(r.k));
    }
    let up = |x: T| {
        let mut rest = x;
        let mut acc = Qd::zero();
        for _ in 0..4 {
            let hi = rest.to_f64();
            acc += Qd::from_f64(hi);
            rest -= T::from_f64(hi);
        }
        acc
    };
    Ok(Cx::new(up(r.value.re), up(r.value.im)))
}

/// Evaluates at increasing precision (53, 106 and 212 bits) until two
/// successive tiers agree to `target_bits`, starting from the first tier with
/// at least twice the target; returns the more precise of the agreeing pair.
pub fn pfq_guaranteed(
    params: &HyperParams<f64>,
    z: Cx<f64>,
    target_bits: u32,
    opts: &EvalOptions<f64>,
) -> Result<Cx<Qd>> {
    let bits = [<f64 as Real>::BITS, Dd::BITS, Qd::BITS];
    let first = bits.iter().position(|&b| b >= 2 * target_bits).ok_or(Error::PrecisionExhausted(target_bits))?;
    let tier = |i: usize| match i {
        0 => run_tier::<f64>(params, z, opts),
        1 => run_tier::<Dd>(params, z, opts),
        _ => run_tier::<Qd>(params, z, opts),
    };
    let mut lo = tier(first)?;
    for i in first + 1..bits.len() {
        let hi = tier(i)?;
        if agree(lo, hi, target_bits) {
            return Ok(hi);
        }
        lo = hi;
    }
    Err(Error::PrecisionExhausted(target_bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cx, rel_err};

    fn c(x: f64) -> Cx<f64> {
        cx(x, 0.0)
    }

    const EULER: f64 = 0.461455316241865234;

    #[test]
    fn euler_series_levin() {
        let params = HyperParams::real(&[1.0, 1.0], &[]).unwrap();
        let r = pfq(&params, c(-2.0), &EvalOptions::default()).unwrap();
        assert!(r.converged);
        assert!(rel_err(r.value, c(EULER)) <= 5e-15, "{:?}", r);
        assert!((25..=60).contains(&r.k), "k = {}", r.k);
    }

    #[test]
    fn euler_series_drummond() {
        let params = HyperParams::real(&[1.0, 1.0], &[]).unwrap();
        let opts = EvalOptions { method: Method::Drummond, ..Default::default() };
        let r = pfq(&params, c(-2.0), &opts).unwrap();
        assert!(r.converged);
        assert!(rel_err(r.value, c(EULER)) <= 1e-13, "{:?}", r);
        assert!((100..=200).contains(&r.k), "k = {}", r.k);
    }

    #[test]
    fn zero_argument() {
        let params = HyperParams::real(&[1.0, 1.0], &[]).unwrap();
        for method in [Method::Drummond, Method::FactorialLevin] {
            let r = pfq(&params, c(0.0), &EvalOptions { method, ..Default::default() }).unwrap();
            assert_eq!((r.value, r.k, r.converged), (c(1.0), 0, true));
        }
    }

    #[test]
    fn closed_forms() {
        let opts = EvalOptions::default();
        let r = pfq(&HyperParams::real(&[0.5], &[]).unwrap(), c(0.5), &opts).unwrap();
        assert!(rel_err(r.value, c(2f64.sqrt())) <= 1e-13);
        let r = pfq(&HyperParams::real(&[1.0, 1.0], &[2.0]).unwrap(), c(-1.0), &opts).unwrap();
        assert!(rel_err(r.value, c(2f64.ln())) <= 1e-13);
        let r = pfq(&HyperParams::real(&[], &[]).unwrap(), c(1.0), &opts).unwrap();
        assert!(rel_err(r.value, c(1f64.exp())) <= 1e-13);
    }

    #[test]
    fn converged_results_satisfy_the_stopping_rule() {
        let params = HyperParams::<f64>::real(&[1.25], &[1.5]).unwrap();
        for z in [cx(2.0, 0.0), cx(-3.0, 1.0), cx(0.5, -4.0)] {
            for method in [Method::Drummond, Method::FactorialLevin] {
                let opts = EvalOptions { method, ..Default::default() };
                let r = pfq(&params, z, &opts).unwrap();
                assert!(r.converged);
                assert!(r.err_est <= opts.tol * cabs(r.value) * (1.0 + 1e-12) + 1e-300);
            }
        }
    }

    #[test]
    fn deterministic() {
        let params = HyperParams::<f64>::real(&[1.0, 1.5], &[]).unwrap();
        let a = pfq(&params, cx(-1.5, 0.7), &EvalOptions::default()).unwrap();
        let b = pfq(&params, cx(-1.5, 0.7), &EvalOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn k_max_stops_iteration() {
        let params = HyperParams::real(&[1.0, 1.0], &[]).unwrap();
        let opts = EvalOptions { k_max: 10, ..Default::default() };
        let r = pfq(&params, c(-2.0), &opts).unwrap();
        assert_eq!((r.k, r.converged, r.status), (10, false, Status::KMaxReached));
    }

    #[test]
    fn guaranteed_euler_value() {
        let params = HyperParams::real(&[1.0, 1.0], &[]).unwrap();
        let v = pfq_guaranteed(&params, c(-2.0), 53, &EvalOptions::default()).unwrap();
        assert_eq!(v.re.to_f64(), EULER);
        let v = pfq_guaranteed(&params, c(0.0), 53, &EvalOptions::default()).unwrap();
        assert_eq!(v.re.to_f64(), 1.0);
        let v = pfq_guaranteed(&HyperParams::real(&[], &[]).unwrap(), c(10.0), 53, &EvalOptions::default()).unwrap();
        assert!((v.re.to_f64() - 10f64.exp()).abs() <= 2e-16 * 10f64.exp());
    }
}
