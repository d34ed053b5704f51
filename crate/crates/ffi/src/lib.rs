//! C interface to `hyperratak`.
//!
//! Every function returns an [`HrErrorCode`]; on failure a description is
//! available from [`hyperratak_last_error`] on the same thread. Parameter
//! sets are opaque handles created by [`hyperratak_params_new`] and released
//! by [`hyperratak_params_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use num_complex::Complex;

use hyperratak::padeexp::pade_exp;
use hyperratak::{Error, EvalOptions, EvalResult, HyperParams, Method, OmegaKind, Real, Status};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HrErrorCode {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    LowerParameterPole = 3,
    ZeroOmega = 4,
    AitkenDegenerate = 5,
    BadGamma = 6,
    ZeroPivot = 7,
    Overflow = 8,
    NoConvergence = 9,
    PrecisionExhausted = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HrMethod {
    FactorialLevin = 0,
    Drummond = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HrOmega {
    An = 0,
    ANp1 = 1,
    NGammaAn = 2,
    Aitken = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HrStatus {
    Converged = 0,
    KMax = 1,
    Overflow = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HrEvalOptions {
    /// An [`HrMethod`] value.
    pub method: i32,
    /// An [`HrOmega`] value.
    pub omega: i32,
    pub gamma: f64,
    pub n: usize,
    pub tol: f64,
    pub k_max: usize,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HrResult {
    pub re: f64,
    pub im: f64,
    pub k: usize,
    pub converged: bool,
    pub err_est: f64,
    pub status: HrStatus,
}

/// Opaque parameter set `(alpha; beta)`.
pub struct HrParams {
    inner: HyperParams<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn code_of(e: &Error) -> HrErrorCode {
    match e {
        Error::LowerParameterPole(_) => HrErrorCode::LowerParameterPole,
        Error::ZeroOmega(_) => HrErrorCode::ZeroOmega,
        Error::AitkenDegenerate => HrErrorCode::AitkenDegenerate,
        Error::BadGamma(_) => HrErrorCode::BadGamma,
        Error::ZeroPivot(_) => HrErrorCode::ZeroPivot,
        Error::Overflow(_) => HrErrorCode::Overflow,
        Error::NoConvergence(_) => HrErrorCode::NoConvergence,
        Error::PrecisionExhausted(_) => HrErrorCode::PrecisionExhausted,
        Error::NotTerminating | Error::InvalidArgument(_) => HrErrorCode::InvalidArgument,
    }
}

struct Fail(HrErrorCode, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(code_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(HrErrorCode::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any failure and converts panics into `Panic`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HrErrorCode {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HrErrorCode::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            HrErrorCode::Panic
        }
    }
}

unsafe fn complex_list(re: *const f64, im: *const f64, len: usize, what: &str) -> Result<Vec<Complex<f64>>, Fail> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if re.is_null() {
        return Err(null(what));
    }
    let re = slice::from_raw_parts(re, len);
    let im = if im.is_null() { None } else { Some(slice::from_raw_parts(im, len)) };
    Ok((0..len).map(|i| Complex::new(re[i], im.map_or(0.0, |v| v[i]))).collect())
}

fn to_result(r: EvalResult<f64>) -> HrResult {
    HrResult {
        re: r.value.re,
        im: r.value.im,
        k: r.k,
        converged: r.converged,
        err_est: r.err_est,
        status: match r.status {
            Status::Converged => HrStatus::Converged,
            Status::Overflow => HrStatus::Overflow,
            Status::KMaxReached | Status::Running => HrStatus::KMax,
        },
    }
}

fn to_options(o: &HrEvalOptions) -> Result<EvalOptions<f64>, Fail> {
    let bad = |what: &str, v: i32| Fail(HrErrorCode::InvalidArgument, format!("unknown {what} {v}"));
    let method = match o.method {
        m if m == HrMethod::FactorialLevin as i32 => Method::FactorialLevin,
        m if m == HrMethod::Drummond as i32 => Method::Drummond,
        m => return Err(bad("method", m)),
    };
    let omega = match o.omega {
        w if w == HrOmega::An as i32 => OmegaKind::AN,
        w if w == HrOmega::ANp1 as i32 => OmegaKind::ANp1,
        w if w == HrOmega::NGammaAn as i32 => OmegaKind::NGammaAN,
        w if w == HrOmega::Aitken as i32 => OmegaKind::Aitken,
        w => return Err(bad("remainder estimate", w)),
    };
    Ok(EvalOptions { method, omega, gamma: o.gamma, n: o.n, tol: o.tol, k_max: o.k_max })
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hyperratak_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hyperratak_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Defaults: factorial Levin-type, `omega = a_(n+1)`, `gamma = 2`, `n = 0`,
/// `tol = 8 eps`, `k_max = 2^20`.
#[no_mangle]
pub extern "C" fn hyperratak_default_options() -> HrEvalOptions {
    let d = EvalOptions::<f64>::default();
    HrEvalOptions {
        method: HrMethod::FactorialLevin as i32,
        omega: HrOmega::ANp1 as i32,
        gamma: d.gamma,
        n: d.n,
        tol: d.tol,
        k_max: d.k_max,
    }
}

/// Creates a parameter set from `p` upper and `q` lower parameters given as
/// separate real and imaginary arrays. Imaginary arrays may be null for real
/// parameters; arrays of length zero may be null.
///
/// # Safety
/// Non-null arrays must hold at least `p` (resp. `q`) values and `out` must
/// be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn hyperratak_params_new(
    alpha_re: *const f64,
    alpha_im: *const f64,
    p: usize,
    beta_re: *const f64,
    beta_im: *const f64,
    q: usize,
    out: *mut *mut HrParams,
) -> HrErrorCode {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let alpha = complex_list(alpha_re, alpha_im, p, "alpha")?;
        let beta = complex_list(beta_re, beta_im, q, "beta")?;
        let inner = HyperParams::new(alpha, beta)?;
        *out = Box::into_raw(Box::new(HrParams { inner }));
        Ok(())
    })
}

/// Releases a parameter set. Null is ignored.
///
/// # Safety
/// `params` must come from [`hyperratak_params_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn hyperratak_params_free(params: *mut HrParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Evaluates `pFq(alpha; beta; z)`. A null `opts` selects the defaults.
/// Reaching `k_max` or overflowing is not an error; see `out->status`.
///
/// # Safety
/// `params` must be a live handle, `opts` null or valid, `out` valid for a
/// write.
#[no_mangle]
pub unsafe extern "C" fn hyperratak_pfq(
    params: *const HrParams,
    z_re: f64,
    z_im: f64,
    opts: *const HrEvalOptions,
    out: *mut HrResult,
) -> HrErrorCode {
    guard(|| {
        let params = params.as_ref().ok_or_else(|| null("params"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let opts = match opts.as_ref() {
            Some(o) => to_options(o)?,
            None => EvalOptions::default(),
        };
        let r = hyperratak::pfq(&params.inner, Complex::new(z_re, z_im), &opts)?;
        *out = to_result(r);
        Ok(())
    })
}

/// Evaluates at increasing internal precision until two runs agree to
/// `target_bits`, and rounds the agreed value to double.
///
/// # Safety
/// `params` must be a live handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hyperratak_pfq_guaranteed(
    params: *const HrParams,
    z_re: f64,
    z_im: f64,
    target_bits: u32,
    re: *mut f64,
    im: *mut f64,
) -> HrErrorCode {
    guard(|| {
        let params = params.as_ref().ok_or_else(|| null("params"))?;
        if re.is_null() || im.is_null() {
            return Err(null("output"));
        }
        let v = hyperratak::pfq_guaranteed(&params.inner, Complex::new(z_re, z_im), target_bits, &EvalOptions::default())?;
        *re = v.re.to_f64();
        *im = v.im.to_f64();
        Ok(())
    })
}

/// Diagonal Padé approximation of `exp(z)`, iterated until the stopping rule
/// holds with tolerance `tol` or `k_max` is reached.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn hyperratak_pade_exp(z_re: f64, z_im: f64, tol: f64, k_max: usize, out: *mut HrResult) -> HrErrorCode {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = to_result(pade_exp(Complex::new(z_re, z_im), tol, k_max)?);
        Ok(())
    })
}
