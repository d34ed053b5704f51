//! Recurrence forms against the direct binomial-sum forms, and identities
//! satisfied by the factorial Levin-type denominators.

use num_traits::{One, Zero};
use proptest::prelude::*;

use hyperratak::driver::{drummond_cursor, weniger_cursor, EvalOptions, Method};
use hyperratak::hyperterm::partial_sums;
use hyperratak::reference::{drummond_direct, weniger_direct, weniger_parts};
use hyperratak::scalar::{cabs, cx_from_f64, rel_err};
use hyperratak::{Cx, Dd, HyperParams, OmegaKind, Real};

const KINDS: [OmegaKind; 4] = [OmegaKind::AN, OmegaKind::ANp1, OmegaKind::NGammaAN, OmegaKind::Aitken];

/// Real or complex parameters away from the nonpositive integers.
fn arb_param() -> impl Strategy<Value = Cx<f64>> {
    (0.1f64..3.0, prop_oneof![Just(0.0), -1.0f64..1.0]).prop_map(|(re, im)| Cx::new(re, im))
}

#[derive(Clone, Debug)]
struct Case {
    alpha: Vec<Cx<f64>>,
    beta: Vec<Cx<f64>>,
    z: Cx<f64>,
}

impl Case {
    fn params<T: Real>(&self) -> HyperParams<T> {
        HyperParams::new(self.alpha.clone(), self.beta.clone()).unwrap().cast()
    }

    fn z<T: Real>(&self) -> Cx<T> {
        cx_from_f64(self.z)
    }
}

fn arb_case() -> impl Strategy<Value = Case> {
    (
        prop::collection::vec(arb_param(), 0..=2),
        prop::collection::vec(arb_param(), 0..=2),
        -2.0f64..2.0,
        -2.0f64..2.0,
    )
        .prop_filter("nonzero argument", |(_, _, re, im)| re.hypot(*im) > 0.05)
        .prop_map(|(alpha, beta, re, im)| Case { alpha, beta, z: Cx::new(re, im) })
}

fn recurrence_values<T: Real>(case: &Case, method: Method, omega: OmegaKind, gamma: f64, n: usize, k_max: usize) -> Vec<Cx<T>> {
    let params = case.params::<T>();
    let opts = EvalOptions::<T> { method, omega, gamma: T::from_f64(gamma), n, ..Default::default() };
    let mut out = Vec::with_capacity(k_max + 1);
    macro_rules! drive {
        ($c:expr) => {{
            let mut c = $c;
            out.push(c.value());
            for _ in 0..k_max {
                c.step().unwrap();
                out.push(c.value());
            }
        }};
    }
    match method {
        Method::Drummond => drive!(drummond_cursor(&params, case.z(), &opts).unwrap()),
        Method::FactorialLevin => drive!(weniger_cursor(&params, case.z(), &opts).unwrap()),
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn drummond_recurrence_matches_direct_form(case in arb_case(), kind in 0usize..4) {
        let omega = KINDS[kind];
        let rec = recurrence_values::<Dd>(&case, Method::Drummond, omega, 2.0, 0, 8);
        for (k, r) in rec.iter().enumerate() {
            let d = drummond_direct(&case.params::<Dd>(), case.z(), 0, k, omega).unwrap();
            prop_assert!(rel_err(*r, d) <= Dd::from_f64(1e-10), "k={} {:?}", k, case);
        }
    }

    #[test]
    fn levin_recurrence_matches_direct_form(case in arb_case(), kind in 0usize..4, gamma in prop_oneof![Just(2.0), 1.5f64..4.0]) {
        let omega = KINDS[kind];
        let g = Dd::from_f64(gamma);
        let rec = recurrence_values::<Dd>(&case, Method::FactorialLevin, omega, gamma, 0, 8);
        for (k, r) in rec.iter().enumerate() {
            let d = weniger_direct(&case.params::<Dd>(), case.z(), 0, k, omega, g).unwrap();
            prop_assert!(rel_err(*r, d) <= Dd::from_f64(1e-10), "k={} {:?}", k, case);
        }
    }

    #[test]
    fn first_order_transformations_coincide(case in arb_case(), kind in 0usize..4, n in 0usize..4, gamma in 1.5f64..4.0) {
        let omega = KINDS[kind];
        let t = recurrence_values::<f64>(&case, Method::Drummond, omega, gamma, n, 1)[1];
        let r = recurrence_values::<f64>(&case, Method::FactorialLevin, omega, gamma, n, 1)[1];
        prop_assert!(rel_err(t, r) <= 1e-14, "{:?} {:?}", t, r);
    }
}

/// `(x)_m` for `m >= 0`.
fn poch(x: Dd, m: usize) -> Dd {
    (0..m).fold(Dd::one(), |acc, i| acc * (x + Dd::from_usize(i)))
}

fn binom(n: usize, k: usize) -> Dd {
    hyperratak::poly::binomial(n, k)
}

/// `Q_n^(k)` from the direct form.
fn q_direct(p: &HyperParams<Dd>, z: Cx<Dd>, n: usize, k: usize, gamma: Dd) -> Cx<Dd> {
    weniger_parts(p, z, n, k, OmegaKind::ANp1, gamma).unwrap().denominator
}

/// `Delta^s` in `n` of `Q_n^(k)`.
fn q_delta(p: &HyperParams<Dd>, z: Cx<Dd>, n: usize, k: usize, s: usize, gamma: Dd) -> Cx<Dd> {
    (0..=s).fold(Cx::zero(), |acc, i| {
        let sign = if (s - i) % 2 == 0 { Dd::one() } else { -Dd::one() };
        acc + q_direct(p, z, n + i, k, gamma) * (binom(s, i) * sign)
    })
}

fn denominator_cases() -> Vec<(HyperParams<Dd>, Cx<Dd>, f64)> {
    let mk = |a: &[f64], b: &[f64], re: f64, im: f64, g: f64| {
        (HyperParams::<f64>::real(a, b).unwrap().cast::<Dd>(), cx_from_f64(Cx::new(re, im)), g)
    };
    vec![
        mk(&[1.0, 1.0], &[], -2.0, 0.0, 2.0),
        mk(&[1.25], &[1.5], 3.0, -1.0, 2.0),
        mk(&[0.5, 1.5], &[2.5], 0.4, 0.3, 1.5),
        mk(&[], &[0.75], -1.5, 0.5, 3.0),
    ]
}

#[test]
fn three_term_denominator_recurrence() {
    for (p, z, g) in denominator_cases() {
        let gamma = Dd::from_f64(g);
        let mut c = weniger_cursor(&p, z, &EvalOptions::<Dd> { gamma, ..Default::default() }).unwrap();
        let ng = Dd::from_f64(g);
        // Q^(0) = 1/mu~^(0), Q^(1) = Q^(0)/mu~^(1), and for k >= 2 the
        // rescaled Q^(k)/(n+gamma)_(k-1) shrinks by mu~^(k) per step.
        let mut q = vec![Cx::<Dd>::one() / c.mu_tilde()];
        let mut scaled = q[0];
        for k in 1..=11 {
            c.step().unwrap();
            scaled = scaled / c.mu_tilde();
            q.push(if k == 1 { scaled } else { scaled * poch(ng, k - 1) });
        }
        for k in 0..=11 {
            let d = q_direct(&p, z, 0, k, gamma);
            assert!(rel_err(q[k], d) <= Dd::from_f64(1e-20), "k={k}");
        }
        for k in 0..=10 {
            let dq = q_direct(&p, z, 1, k, gamma) - q_direct(&p, z, 0, k, gamma);
            let rhs = dq * (ng + Dd::from_usize(2 * k)) + q[k] * Dd::from_usize(k + 1);
            assert!(rel_err(q[k + 1], rhs) <= Dd::from_f64(1e-12), "k={k}");
        }
    }
}

#[test]
fn levin_forward_and_backward_transforms() {
    for (p, z, g) in denominator_cases() {
        let gamma = Dd::from_f64(g);
        let n = 0;
        let ng = Dd::from_usize(n) + gamma;
        for k in 0..=6 {
            for r in 0..=4 {
                let mut fwd = Cx::<Dd>::zero();
                for s in 0..=r {
                    let c = binom(r, s) * poch(ng + Dd::from_usize(2 * k + r) - Dd::one(), s) * poch(Dd::from_usize(k + s + 1), r - s);
                    fwd += q_delta(&p, z, n, k, s, gamma) * c;
                }
                let want = q_direct(&p, z, n, k + r, gamma);
                assert!(rel_err(fwd, want) <= Dd::from_f64(1e-11), "forward k={k} r={r}");

                let mut bwd = Cx::<Dd>::zero();
                for s in 0..=r {
                    let sign = if (r - s) % 2 == 0 { Dd::one() } else { -Dd::one() };
                    let x = ng + Dd::from_usize(2 * k + s) - Dd::one();
                    let c = binom(r, s) * sign * (ng + Dd::from_usize(2 * k + 2 * s) - Dd::one()) / poch(x, r + 1)
                        * poch(Dd::from_usize(k + s + 1), r - s);
                    bwd += q_direct(&p, z, n, k + s, gamma) * c;
                }
                let want = q_delta(&p, z, n, k, r, gamma);
                let scale = cabs(want).max(cabs(q_direct(&p, z, n, k, gamma)));
                assert!(cabs(bwd - want) <= Dd::from_f64(1e-11) * scale, "backward k={k} r={r}");
            }
        }
    }
}

#[test]
fn drummond_with_gamma_dependent_estimate() {
    // The estimate (n + gamma) a_n must use the same gamma in the
    // polynomials and in the starting value.
    let case = Case { alpha: vec![Cx::new(1.0, 0.0), Cx::new(0.5, 0.0)], beta: vec![Cx::new(1.5, 0.0)], z: Cx::new(-3.0, 1.0) };
    let p = case.params::<Dd>();
    let z = case.z::<Dd>();
    for gamma in [1.5, 2.0, 3.5] {
        let t = recurrence_values::<Dd>(&case, Method::Drummond, OmegaKind::NGammaAN, gamma, 0, 8);
        let terms = partial_sums(&p, z, 10).unwrap();
        for (k, tk) in t.iter().enumerate() {
            let (mut num, mut den) = (Cx::<Dd>::zero(), Cx::<Dd>::zero());
            for j in 0..=k {
                let sign = if (k - j) % 2 == 0 { Dd::one() } else { -Dd::one() };
                let (a, s) = terms[j];
                let w = a * (Dd::from_f64(gamma) + Dd::from_usize(j));
                num += s / w * (binom(k, j) * sign);
                den += Cx::<Dd>::one() / w * (binom(k, j) * sign);
            }
            assert!(rel_err(*tk, num / den) <= Dd::from_f64(1e-20), "gamma={gamma} k={k}");
        }
    }
}
