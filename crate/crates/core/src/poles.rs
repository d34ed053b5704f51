//! Reciprocal poles `zeta = 1/z` of the transformation denominators for
//! `0F0` and `1F0` with `omega_n = a_(n+1)`.
//!
//! Each three-term recurrence for the denominators in `k` is a banded
//! pencil `(A, B)` whose generalized eigenvalues are the nontrivial
//! reciprocal poles. The Drummond cases have a lower bidiagonal `B` with an
//! explicit inverse; the factorial Levin-type cases (`gamma = 2`) are
//! standard tridiagonal eigenproblems. Independent root finders for the
//! Bessel and Jacobi polynomial representations back the checks.

use std::fmt;
use std::str::FromStr;

use nalgebra::linalg::balancing::balance_parlett_reinsch;
use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_traits::{One, Zero};

use crate::hyperterm::{sum_terminating, HyperParams};
use crate::multifloat::Dd;
use crate::poly::{binomial, poch};
use crate::reference::{drummond_parts, weniger_parts};
use crate::scalar::{cabs, cx_to_f64, Cx, Real};
use crate::{Error, OmegaKind, Result};

/// Slack allowed on every bound check.
pub const BOUND_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PoleCase {
    Drummond0F0,
    Drummond1F0,
    Delta0F0,
    Delta1F0,
}

impl PoleCase {
    pub const ALL: [PoleCase; 4] = [PoleCase::Drummond0F0, PoleCase::Drummond1F0, PoleCase::Delta0F0, PoleCase::Delta1F0];

    pub fn needs_alpha(self) -> bool {
        matches!(self, PoleCase::Drummond1F0 | PoleCase::Delta1F0)
    }

    fn is_drummond(self) -> bool {
        matches!(self, PoleCase::Drummond0F0 | PoleCase::Drummond1F0)
    }
}

impl fmt::Display for PoleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoleCase::Drummond0F0 => "drummond0f0",
            PoleCase::Drummond1F0 => "drummond1f0",
            PoleCase::Delta0F0 => "delta0f0",
            PoleCase::Delta1F0 => "delta1f0",
        })
    }
}

impl FromStr for PoleCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PoleCase::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown pole case '{s}'")))
    }
}

/// One row `m` of `a+ D^(m+1) + a D^(m) + a- D^(m-1) = zeta (b D^(m) + b- D^(m-1))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandRow<T = f64> {
    pub a_sub: T,
    pub a_diag: T,
    pub a_sup: T,
    pub b_sub: T,
    pub b_diag: T,
}

#[derive(Clone, Debug)]
pub struct Pencil {
    pub case: PoleCase,
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub rows: Vec<BandRow>,
}

/// Recurrence coefficients of row `m`, formed in the precision `T`.
pub fn band_row<T: Real>(case: PoleCase, n: usize, m: usize, alpha: T) -> BandRow<T> {
    let (nf, mf) = (T::from_usize(n), T::from_usize(m));
    let (zero, one, two) = (T::zero(), T::one(), T::from_f64(2.0));
    let t = nf + two * mf;
    match case {
        PoleCase::Drummond0F0 => BandRow { a_sub: zero, a_diag: one, a_sup: one, b_sub: mf, b_diag: nf + mf + two },
        PoleCase::Drummond1F0 => BandRow {
            a_sub: mf,
            a_diag: alpha + nf + two * mf + one,
            a_sup: alpha + nf + mf + one,
            b_sub: mf,
            b_diag: nf + mf + two,
        },
        // At m = 0 the diagonal n/((n+2m)(n+2m+2)) takes its removable limit
        // 1/(n+2) and the subdiagonal multiplies the absent D^(-1).
        PoleCase::Delta0F0 => BandRow {
            a_sub: if m == 0 { zero } else { -mf * (nf + mf) / (t * (t + one)) },
            a_diag: if m == 0 { one / (nf + two) } else { nf / (t * (t + two)) },
            a_sup: one / ((t + one) * (t + two)),
            b_sub: zero,
            b_diag: one,
        },
        PoleCase::Delta1F0 => {
            let frac = if m == 0 { (nf + two * alpha) / (nf + two) } else { nf * (nf + two * alpha) / (t * (t + two)) };
            BandRow {
                a_sub: if m == 0 { zero } else { (mf - alpha) * mf * (nf + mf) / (t * (t + one)) },
                a_diag: (one + frac) / two,
                a_sup: (nf + mf + alpha + one) / ((t + one) * (t + two)),
                b_sub: zero,
                b_diag: one,
            }
        }
    }
}

/// Pencil of order `k` for `n` and (1F0 cases only) `alpha`.
pub fn build_pencil(case: PoleCase, n: usize, k: usize, alpha: Option<f64>) -> Result<Pencil> {
    if k == 0 {
        return Err(Error::InvalidArgument("pencil order k must be at least 1".into()));
    }
    let alpha = match (case.needs_alpha(), alpha) {
        (true, Some(a)) if a.is_finite() => a,
        (true, _) => return Err(Error::InvalidArgument(format!("{case} needs a finite alpha"))),
        (false, _) => 0.0,
    };
    let rows = (0..k).map(|m| band_row(case, n, m, alpha)).collect();
    Ok(Pencil { case, n, k, alpha, rows })
}

impl Pencil {
    /// Dense `A`; the superdiagonal entry of the last row multiplies
    /// `D^(k)` and drops out.
    pub fn a(&self) -> DMatrix<f64> {
        let k = self.k;
        DMatrix::from_fn(k, k, |i, j| {
            let r = &self.rows[i];
            if j == i {
                r.a_diag
            } else if j + 1 == i {
                r.a_sub
            } else if j == i + 1 {
                r.a_sup
            } else {
                0.0
            }
        })
    }

    pub fn b(&self) -> DMatrix<f64> {
        let k = self.k;
        DMatrix::from_fn(k, k, |i, j| {
            let r = &self.rows[i];
            if j == i {
                r.b_diag
            } else if j + 1 == i {
                r.b_sub
            } else {
                0.0
            }
        })
    }

    /// The standard-form matrix: `B^-1 A` for the Drummond cases, `A` otherwise.
    pub fn standard_form(&self) -> DMatrix<f64> {
        if self.case.is_drummond() {
            drummond_b_inverse(self.n, self.k) * self.a()
        } else {
            self.a()
        }
    }

    /// `D^(k)(zeta)` and its derivative, normalized by `D^(0) = 1`, from the
    /// band recurrence with entries formed in double-double. Its zeros are the
    /// generalized eigenvalues.
    pub fn determinant(&self, zeta: Cx<Dd>) -> (Cx<Dd>, Cx<Dd>) {
        let (mut f0, mut f1) = (Cx::<Dd>::zero(), Cx::<Dd>::one());
        let (mut g0, mut g1) = (Cx::<Dd>::zero(), Cx::<Dd>::zero());
        for m in 0..self.k {
            let r = band_row(self.case, self.n, m, Dd::from_f64(self.alpha));
            let c1 = zeta * r.b_diag - r.a_diag;
            let c0 = zeta * r.b_sub - r.a_sub;
            let inv = Dd::one() / r.a_sup;
            let f2 = (c1 * f1 + c0 * f0) * inv;
            let g2 = (c1 * g1 + f1 * r.b_diag + c0 * g0 + f0 * r.b_sub) * inv;
            (f0, f1, g0, g1) = (f1, f2, g1, g2);
        }
        (f1, g1)
    }

    /// `B^-1 (A - B)`, whose eigenvalues are `zeta - 1`.
    pub fn shifted_form(&self) -> DMatrix<f64> {
        if self.case.is_drummond() {
            drummond_b_inverse(self.n, self.k) * (self.a() - self.b())
        } else {
            self.a() - self.b()
        }
    }
}

/// Inverse of the Drummond `B` (diagonal `n+2, ..., n+k+1`, subdiagonal
/// `1, ..., k-1`) in closed form:
/// `(B^-1)_(ij) = (-1)^(i-j) (j)_(i-j) / (n+j+1)_(i-j+1)` for `i >= j`
/// (one-based), accumulated as a product of ratios.
pub fn drummond_b_inverse(n: usize, k: usize) -> DMatrix<f64> {
    let nf = n as f64;
    let mut inv = DMatrix::zeros(k, k);
    for j in 1..=k {
        let jf = j as f64;
        // ratio = (j)_(i-j) / (n+j+1)_(i-j)
        let mut ratio = 1.0;
        for i in j..=k {
            let d = (i - j) as f64;
            let sign = if (i - j) % 2 == 0 { 1.0 } else { -1.0 };
            inv[(i - 1, j - 1)] = sign * ratio / (nf + i as f64 + 1.0);
            ratio *= (jf + d) / (nf + jf + 1.0 + d);
        }
    }
    inv
}

/// Eigenvalues of a dense real matrix after balancing, sorted by modulus
/// (descending).
pub fn eigenvalues(mut m: DMatrix<f64>) -> Result<Vec<Cx<f64>>> {
    let k = m.nrows();
    balance_parlett_reinsch(&mut m);
    let schur = Schur::try_new(m, f64::EPSILON, 1000 * k.max(1)).ok_or(Error::NoConvergence(k))?;
    let mut ev: Vec<Cx<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    sort_by_modulus(&mut ev);
    Ok(ev)
}

fn sort_by_modulus(v: &mut [Cx<f64>]) {
    v.sort_by(|a, b| cabs(*b).total_cmp(&cabs(*a)).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im)));
}

/// The `k` nontrivial reciprocal poles, largest modulus first: eigenvalues
/// of the standard form, refined against `det(A - zeta B)` in double-double
/// arithmetic. The matrices are far from normal and double-precision
/// eigenvalues alone lose most digits already at `k = 20`.
pub fn reciprocal_poles(p: &Pencil) -> Result<Vec<Cx<f64>>> {
    let start = eigenvalues(p.standard_form())?;
    let mut poles = aberth(start.clone(), |z| p.determinant(z));
    if poles.iter().any(|z| !crate::scalar::is_finite_cx(*z)) {
        poles = start;
    }
    sort_by_modulus(&mut poles);
    Ok(poles)
}

/// Simultaneous Aberth-Ehrlich refinement of all zeros of `f`, given
/// `(f, f')` at a point and distinct starting values.
fn aberth(start: Vec<Cx<f64>>, f: impl Fn(Cx<Dd>) -> (Cx<Dd>, Cx<Dd>)) -> Vec<Cx<f64>> {
    let mut z: Vec<Cx<Dd>> = start.iter().map(|w| Cx::new(Dd::from_f64(w.re), Dd::from_f64(w.im))).collect();
    // Exactly repeated starting values would never separate.
    for i in 0..z.len() {
        for j in 0..i {
            if z[i] == z[j] {
                let nudge = Dd::from_f64(1e-7 * (1.0 + cabs(cx_to_f64(z[i]))) * (i as f64 + 1.0));
                z[i] += Cx::new(nudge, nudge);
            }
        }
    }
    let mut last = f64::INFINITY;
    let mut stalled = 0;
    for _ in 0..500 {
        let mut worst: f64 = 0.0;
        for i in 0..z.len() {
            let (v, dv) = f(z[i]);
            if v.is_zero() || dv.is_zero() {
                continue;
            }
            let ratio = v / dv;
            let mut repel = Cx::<Dd>::zero();
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    repel += Cx::<Dd>::one() / (z[i] - zj);
                }
            }
            let w = ratio / (Cx::<Dd>::one() - ratio * repel);
            z[i] -= w;
            worst = worst.max((cabs(w) / cabs(z[i]).max(Dd::from_f64(f64::MIN_POSITIVE))).to_f64());
        }
        if !(worst > 1e-28) {
            break;
        }
        // Below 1e-12 the corrections shrink quadratically until they hit
        // the rounding floor of the conditioning at hand.
        stalled = if worst < 1e-12 && worst > 0.25 * last { stalled + 1 } else { 0 };
        if stalled >= 3 {
            break;
        }
        last = worst;
    }
    z.into_iter().map(cx_to_f64).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    /// Signed slack; negative when the check fails.
    pub margin: f64,
}

#[derive(Clone, Debug)]
pub struct PoleReport {
    pub case: PoleCase,
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub reciprocal_poles: Vec<Cx<f64>>,
    /// Bounds on `max |zeta|` implied by the case's theorem.
    pub bound_lower: f64,
    pub bound_upper: f64,
    pub checks: Vec<Check>,
}

impl PoleReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_modulus(&self) -> f64 {
        self.reciprocal_poles.iter().map(|z| cabs(*z)).fold(0.0, f64::max)
    }
}

fn check(name: &'static str, margin: f64) -> Check {
    Check { name, pass: margin >= -BOUND_TOL, margin }
}

/// Parameter range of the 1F0 theorems.
pub fn theorem_applies(case: PoleCase, n: usize, alpha: f64) -> bool {
    let nf = n as f64;
    match case {
        PoleCase::Drummond1F0 => alpha <= 1.0 && alpha + nf + 1.0 > 0.0,
        PoleCase::Delta1F0 => -nf - 1.0 < alpha && alpha < 1.0,
        _ => true,
    }
}

/// Computes the poles of `p` and evaluates the bounds that apply to it.
pub fn check_report(p: &Pencil) -> Result<PoleReport> {
    let poles = reciprocal_poles(p)?;
    let (n, k) = (p.n as f64, p.k as f64);
    let rho = poles.iter().map(|z| cabs(*z)).fold(0.0, f64::max);
    let trace = p.standard_form().trace();
    let mut checks = Vec::new();
    let (lo, hi) = match p.case {
        PoleCase::Drummond0F0 => {
            let (lo, hi) = (1.0 / (n + k + 1.0), 1.0 / (n + 2.0));
            checks.push(check("trace", BOUND_TOL - (trace - k / (n + k + 1.0)).abs()));
            (lo, hi)
        }
        PoleCase::Delta0F0 => {
            let (lo, hi) = (1.0 / (n + 2.0 * k), 1.0 / (n + k + 1.0));
            checks.push(check("trace", BOUND_TOL - (trace - k / (n + 2.0 * k)).abs()));
            (lo, hi)
        }
        PoleCase::Drummond1F0 => (0.0, 2.0),
        PoleCase::Delta1F0 => (0.0, 1.0),
    };
    match p.case {
        PoleCase::Drummond0F0 | PoleCase::Delta0F0 => {
            checks.push(check("lower", rho - lo));
            checks.push(check("upper", hi - rho));
        }
        PoleCase::Drummond1F0 if theorem_applies(p.case, p.n, p.alpha) => {
            let worst = poles.iter().map(|z| 1.0 - cabs(z - Cx::one())).fold(f64::INFINITY, f64::min);
            checks.push(check("disk", worst));
        }
        PoleCase::Delta1F0 if theorem_applies(p.case, p.n, p.alpha) => {
            let real = poles.iter().map(|z| BOUND_TOL * cabs(*z).max(1.0) - z.im.abs()).fold(f64::INFINITY, f64::min);
            let inside = poles.iter().map(|z| z.re.min(1.0 - z.re)).fold(f64::INFINITY, f64::min);
            checks.push(Check { name: "real", pass: real >= 0.0, margin: real });
            checks.push(Check { name: "interval", pass: inside > -BOUND_TOL, margin: inside });
        }
        _ => {}
    }
    Ok(PoleReport {
        case: p.case,
        n: p.n,
        k: p.k,
        alpha: p.alpha,
        reciprocal_poles: poles,
        bound_lower: lo,
        bound_upper: hi,
        checks,
    })
}

/// Roots of `sum_j c_j x^j`: companion-matrix eigenvalues refined by Aberth
/// iteration in double-double arithmetic, largest modulus first.
pub fn poly_roots(coeffs: &[Dd]) -> Result<Vec<Cx<f64>>> {
    let deg = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    let mut comp = DMatrix::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -(coeffs[i] / lead).to_f64();
    }
    let start = eigenvalues(comp)?;
    let mut roots = aberth(start, |x| {
        let mut p = Cx::<Dd>::zero();
        let mut dp = Cx::<Dd>::zero();
        for &c in coeffs[..=deg].iter().rev() {
            dp = dp * x + p;
            p = p * x + Cx::new(c, Dd::zero());
        }
        (p, dp)
    });
    sort_by_modulus(&mut roots);
    Ok(roots)
}

/// Zeros in `zeta` of the generalized Bessel polynomial `Y_k^(delta)(2 zeta)
/// = sum_j C(k,j) (k+delta+1)_j (-zeta)^j`.
pub fn bessel_roots(k: usize, delta: f64) -> Result<Vec<Cx<f64>>> {
    let base = Dd::from_f64(k as f64 + delta + 1.0);
    let coeffs: Vec<Dd> = (0..=k)
        .map(|j| {
            let sign = if j % 2 == 0 { Dd::one() } else { -Dd::one() };
            binomial::<Dd>(k, j) * poch(Cx::new(base, Dd::zero()), j).re * sign
        })
        .collect();
    poly_roots(&coeffs)
}

/// Zeros of `P_k^(a,b)(1 - 2 zeta)` in `zeta`, from the symmetric Jacobi
/// matrix of the monic recurrence (nodes of Gauss-Jacobi quadrature),
/// largest first. Needs `a, b > -1`.
pub fn jacobi_roots_zeta(k: usize, a: f64, b: f64) -> Result<Vec<f64>> {
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::InvalidArgument("Jacobi parameters must exceed -1".into()));
    }
    let ab = a + b;
    let mut j = DMatrix::zeros(k, k);
    for i in 0..k {
        let fi = i as f64;
        let t = 2.0 * fi + ab;
        j[(i, i)] = if i == 0 { (b - a) / (ab + 2.0) } else { (b * b - a * a) / (t * (t + 2.0)) };
        if i + 1 < k {
            let m = fi + 1.0;
            let s = 2.0 * m + ab;
            let v = 4.0 * m * (m + a) * (m + b) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0));
            j[(i, i + 1)] = v.sqrt();
            j[(i + 1, i)] = v.sqrt();
        }
    }
    let eig = SymmetricEigen::try_new(j, f64::EPSILON, 1000 * k.max(1)).ok_or(Error::NoConvergence(k))?;
    let mut z: Vec<f64> = eig.eigenvalues.iter().map(|x| (1.0 - x) / 2.0).collect();
    z.sort_by(|x, y| y.total_cmp(x));
    Ok(z)
}

/// Reciprocal poles predicted by the classical polynomial representation of
/// each case.
pub fn classical_roots(case: PoleCase, n: usize, k: usize, alpha: f64) -> Result<Vec<Cx<f64>>> {
    let nf = n as f64;
    match case {
        PoleCase::Drummond0F0 => bessel_roots(k, nf + 1.0 - k as f64),
        PoleCase::Delta0F0 => bessel_roots(k, nf),
        PoleCase::Delta1F0 => Ok(jacobi_roots_zeta(k, alpha + nf, -alpha)?.into_iter().map(|x| Cx::new(x, 0.0)).collect()),
        PoleCase::Drummond1F0 => Err(Error::InvalidArgument("no classical representation for drummond1f0".into())),
    }
}

/// Coefficients in `zeta` of the order-`k` denominator generated by running
/// the pencil's recurrence from `D^(0) = 1`, `D^(-1) = 0`.
pub fn recurrence_denominator(case: PoleCase, n: usize, k: usize, alpha: f64) -> Result<Vec<Dd>> {
    let mut prev: Vec<Dd> = Vec::new();
    let mut cur = vec![Dd::one()];
    for m in 0..k {
        let r = band_row(case, n, m, Dd::from_f64(alpha));
        if r.a_sup.is_zero() {
            return Err(Error::ZeroPivot(m));
        }
        let mut next = vec![Dd::zero(); m + 2];
        // a+ D^(m+1) = (zeta b - a) D^(m) + (zeta b- - a-) D^(m-1)
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += c * r.b_diag;
            next[i] -= c * r.a_diag;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] += c * r.b_sub;
            next[i] -= c * r.a_sub;
        }
        for c in next.iter_mut() {
            *c = *c / r.a_sup;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// Largest relative distance between two root sets matched greedily.
pub fn root_set_distance(a: &[Cx<f64>], b: &[Cx<f64>]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (idx, d) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, cabs(x - y)))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[idx] = true;
        worst = worst.max(d / cabs(*x).max(f64::MIN_POSITIVE));
    }
    worst
}

/// Denominator whose closed form is checked by [`terminating_identity_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DenominatorKind<T> {
    Drummond,
    /// Factorial Levin-type with a general `gamma`.
    Levin(T),
    /// The `gamma = 2` specialization.
    LevinGamma2,
}

/// Closed form of the order-`k` denominator with `omega_n = a_(n+1)`:
/// a prefactor times a terminating series in `1/z`.
pub fn denominator_closed_form<T: Real>(
    kind: DenominatorKind<T>,
    params: &HyperParams<T>,
    z: Cx<T>,
    n: usize,
    k: usize,
) -> Result<Cx<T>> {
    let one = Cx::<T>::one();
    let shift = |c: Cx<T>| c + T::from_usize(n + 1);
    let mut pre = if k % 2 == 0 { one } else { -one };
    for &b in params.beta() {
        pre *= poch(b, n + 1);
    }
    for &a in params.alpha() {
        pre /= poch(a, n + 1);
    }
    pre /= z.powu(n as u32 + 1);
    let mk = -Cx::new(T::from_usize(k), T::zero());
    let cxn = |x: T| Cx::new(x, T::zero());
    let mut upper = vec![mk];
    let mut lower = Vec::new();
    match kind {
        DenominatorKind::Drummond => {
            pre *= poch(one, n + 1);
            upper.push(cxn(T::from_usize(n + 2)));
        }
        DenominatorKind::Levin(g) => {
            let ng = T::from_usize(n) + g;
            pre *= poch(one, n + 1);
            pre *= if k == 0 { one / (cxn(ng) - one) } else { poch(cxn(ng), k - 1) };
            upper.push(cxn(T::from_usize(k) + ng - T::one()));
            upper.push(cxn(T::from_usize(n + 2)));
            lower.push(cxn(ng));
        }
        DenominatorKind::LevinGamma2 => {
            pre *= poch(one, n + k);
            upper.push(cxn(T::from_usize(k + n + 1)));
        }
    }
    upper.extend(params.beta().iter().map(|&b| shift(b)));
    lower.extend(params.alpha().iter().map(|&a| shift(a)));
    let f = HyperParams::new(upper, lower)?;
    Ok(pre * sum_terminating(&f, one / z)?)
}

/// Largest relative deviation between the direct binomial-sum denominator
/// and its closed form, over `z_samples`.
pub fn terminating_identity_check<T: Real>(
    kind: DenominatorKind<T>,
    params: &HyperParams<T>,
    n: usize,
    k: usize,
    z_samples: &[Cx<T>],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &z in z_samples {
        if z.is_zero() {
            return Err(Error::InvalidArgument("z = 0 has no reciprocal".into()));
        }
        let direct = match kind {
            DenominatorKind::Drummond => drummond_parts(params, z, n, k, OmegaKind::ANp1)?.denominator,
            DenominatorKind::Levin(g) => weniger_parts(params, z, n, k, OmegaKind::ANp1, g)?.denominator,
            DenominatorKind::LevinGamma2 => {
                weniger_parts(params, z, n, k, OmegaKind::ANp1, T::from_f64(2.0))?.denominator
            }
        };
        let closed = denominator_closed_form(kind, params, z, n, k)?;
        worst = worst.max((cabs(direct - closed) / cabs(closed)).to_f64());
    }
    Ok(worst)
}
