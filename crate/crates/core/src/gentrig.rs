//! Generalized trigonometric functions and their period.
//!
//! `(Cs, Sn)` solve `x' = y, y' = -x^{2n-1}` from `(1, 0)`; they are
//! periodic with period `T = 2 sqrt(pi/n) Gamma(1/2n) / Gamma((n+1)/2n)`
//! and conserve `Cs^{2n} + n Sn^2 = 1`. The measured first-return time of
//! the integrated pair cross-checks the Gamma-based closed form.

use std::convert::Infallible;

use crate::ode::{integrate, integrate_observed, OdeOptions};

/// High-accuracy options for the Cs/Sn flow.
fn cs_sn_opts() -> OdeOptions {
    OdeOptions {
        rtol: 1e-12,
        atol: 1e-14,
        ..OdeOptions::default()
    }
}

fn cs_sn_rhs(n: u32) -> impl Fn(f64, &[f64; 2]) -> Result<[f64; 2], Infallible> + Copy {
    let p = (2 * n - 1) as i32;
    move |_t, y| Ok([y[1], -y[0].powi(p)])
}

/// `(Cs(t), Sn(t))` for the given `n >= 1`.
pub fn cs_sn(n: u32, t: f64) -> (f64, f64) {
    assert!(n >= 1);
    if t == 0.0 {
        return (1.0, 0.0);
    }
    let (y, _) = integrate(cs_sn_rhs(n), 0.0, t, [1.0, 0.0], &cs_sn_opts())
        .expect("Cs/Sn flow is globally smooth");
    (y[0], y[1])
}

/// Evaluates `(Cs, Sn)` along an ascending grid with one continuous
/// integration, so the whole path costs a single trajectory.
pub fn cs_sn_path(n: u32, ts: &[f64]) -> Vec<(f64, f64)> {
    assert!(ts.windows(2).all(|w| w[0] <= w[1]), "grid must ascend");
    let mut out = Vec::with_capacity(ts.len());
    let mut t_cur = 0.0;
    let mut y = [1.0, 0.0];
    for &t in ts {
        if t != t_cur {
            let (y_new, _) = integrate(cs_sn_rhs(n), t_cur, t, y, &cs_sn_opts())
                .expect("Cs/Sn flow is globally smooth");
            y = y_new;
            t_cur = t;
        }
        out.push((y[0], y[1]));
    }
    out
}

/// Closed-form period `T = 2 sqrt(pi/n) Gamma(1/2n) / Gamma((n+1)/2n)`.
pub fn period_closed_form(n: u32) -> f64 {
    assert!(n >= 1);
    let nf = n as f64;
    2.0 * (std::f64::consts::PI / nf).sqrt() * gamma(1.0 / (2.0 * nf))
        / gamma((nf + 1.0) / (2.0 * nf))
}

/// First-return time of the `(Cs, Sn)` trajectory to `(1, 0)`, measured by
/// integration: the second zero of `Sn` with `Cs > 0` is the full period.
pub fn period_measured(n: u32) -> f64 {
    assert!(n >= 1);
    let opts = cs_sn_opts();
    let t_max = 4.0 + 5.0 * (n as f64).sqrt();
    let mut bracket: Option<([f64; 2], f64, f64)> = None;
    let mut crossings = 0u32;
    let (_, _, _) = integrate_observed(
        cs_sn_rhs(n),
        0.0,
        t_max,
        [1.0, 0.0],
        &opts,
        |rec| {
            if rec.y0[1] != 0.0 && rec.y0[1].signum() != rec.y1[1].signum() {
                crossings += 1;
                if crossings == 2 {
                    bracket = Some((rec.y0, rec.t0, rec.t1));
                    return false;
                }
            }
            true
        },
    )
    .expect("Cs/Sn flow is globally smooth");
    let (y_a, t_a, t_b) = bracket.expect("period bracket within t_max");
    bisect_component_zero(cs_sn_rhs(n), y_a, t_a, t_b, 1, &opts)
}

/// Finds `t` in `[t_a, t_b]` with `y_component(t) = 0` by bisection, fully
/// re-integrating from the step start each probe.
fn bisect_component_zero<E: std::fmt::Debug>(
    rhs: impl Fn(f64, &[f64; 2]) -> Result<[f64; 2], E> + Copy,
    y_a: [f64; 2],
    t_a: f64,
    t_b: f64,
    component: usize,
    opts: &OdeOptions,
) -> f64 {
    let f_a = y_a[component];
    let mut lo = t_a;
    let mut hi = t_b;
    let mut sign_lo = f_a.signum();
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let (y, _) = integrate(rhs, t_a, mid, y_a, opts).expect("probe integration");
        let v = y[component];
        if v == 0.0 {
            return mid;
        }
        if v.signum() == sign_lo {
            lo = mid;
            sign_lo = v.signum();
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// Lanczos approximation, g = 7, 9 coefficients; relative error below 1e-13
// on the positive axis, with the reflection formula for x < 0.5.
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = LANCZOS[0];
        let t = x + 7.5;
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}
