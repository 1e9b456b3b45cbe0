//! Numerical Poincaré return maps in generalized polar coordinates.
//!
//! Coordinates `x = r cos(theta)`, `v = r^n sin(theta)` are applied to the
//! field after the shift `v = y - F(x)` onto the section curve. Near a
//! monodromic nilpotent point `theta' < 0` strictly, so `theta` serves as
//! the clock: the first return for `x0 > 0` is `r(-2pi, x0)`, and for
//! `x0 < 0` it is `r(2pi, x0)` when `n` is even, `r(-2pi, x0)` when odd.

use std::f64::consts::PI;

use thiserror::Error;

use crate::bivar::FloatBivar;
use crate::ode::{integrate, OdeError, OdeOptions, OdeStats};
use crate::system::{classify_nilpotent, NilpotentClass, PlanarSystem, SystemError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolarError {
    #[error("denominator guard tripped at theta = {theta}, r = {r} (outside the monodromic annulus)")]
    DenominatorNearZero { theta: f64, r: f64 },
    #[error("radius {r} outside the validity radius {radius}")]
    OutsideValidity { r: f64, radius: f64 },
    #[error("step size underflow at theta = {theta}")]
    StepUnderflow { theta: f64 },
    #[error("step budget exhausted at theta = {theta}")]
    Budget { theta: f64 },
    #[error("system classification failed: {0}")]
    Classify(#[from] SystemError),
}

/// Evaluation context for the polar right-hand side.
#[derive(Clone, Copy, Debug)]
pub struct EvalContext {
    /// Radii beyond this are refused outright.
    pub validity_radius: f64,
    /// Relative denominator guard: integration stops when
    /// `|den| < eps_den * |r|^(2n-1)`, i.e. when the leading polar
    /// denominator `S_0 + O(r)` loses its definite sign.
    pub eps_den: f64,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext {
            validity_radius: 0.5,
            eps_den: 1e-8,
        }
    }
}

/// A planar system compiled for polar integration.
pub struct PolarField {
    pub class: NilpotentClass,
    pub ctx: EvalContext,
    pub opts: OdeOptions,
    n: i32,
    x_rhs: FloatBivar,
    y_rhs: FloatBivar,
    /// Section curve F and its derivative, as float coefficient vectors.
    f_coeffs: Vec<f64>,
    fp_coeffs: Vec<f64>,
    f_is_zero: bool,
}

/// Diagnostics accumulated over one or more integrations.
#[derive(Clone, Copy, Debug, Default)]
pub struct PolarStats {
    pub steps: u64,
    pub rejected: u64,
    /// Largest observed `eps_den * |r|^(2n-1) / |den|`; 1.0 means the guard
    /// boundary was touched.
    pub max_den_proximity: f64,
}

impl PolarStats {
    fn absorb(&mut self, ode: OdeStats, proximity: f64) {
        self.steps += ode.steps;
        self.rejected += ode.rejected;
        self.max_den_proximity = self.max_den_proximity.max(proximity);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

/// Sampled return-map data: strictly monotone `x0`, `P(x0)` and
/// `d = P - x0` per row, plus integrator diagnostics.
#[derive(Clone, Debug)]
pub struct ReturnMapTable {
    pub samples: Vec<(f64, f64, f64)>,
    pub direction: Side,
    pub stats: PolarStats,
    /// Sample points that failed to integrate, with the error text.
    pub failures: Vec<(f64, String)>,
}

impl PolarField {
    /// Prepares a field for polar integration. The section-curve series is
    /// re-derived at a higher order until its last retained coefficient
    /// contributes below 1e-16 at the validity radius.
    pub fn new(sys: &PlanarSystem, ctx: EvalContext, opts: OdeOptions) -> Result<Self, PolarError> {
        let mut sys_work = sys.clone();
        let mut section = sys_work.section_curve();
        while section.tail_term(ctx.validity_radius) > 1e-16
            && sys_work.series_order < crate::series::MAX_ORDER
        {
            let next = (sys_work.series_order + 8).min(crate::series::MAX_ORDER);
            sys_work = sys_work.with_series_order(next);
            section = sys_work.section_curve();
        }
        let (g, f) = sys_work.extract_fg();
        let class = classify_nilpotent(&g, &f)?;
        let f_coeffs = section.coeffs_f64();
        let fp_coeffs = section.differentiate().coeffs_f64();
        Ok(PolarField {
            n: class.n as i32,
            class,
            ctx,
            opts,
            x_rhs: sys_work.x_part.to_float(),
            y_rhs: sys_work.y_part.to_float(),
            f_is_zero: section.is_zero(),
            f_coeffs,
            fp_coeffs,
        })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    fn horner(coeffs: &[f64], x: f64) -> f64 {
        let mut acc = 0.0;
        for c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `dr/dtheta` at `(theta, r)`, plus the guard proximity at this point.
    pub fn rhs_with_proximity(&self, theta: f64, r: f64) -> Result<(f64, f64), PolarError> {
        if r == 0.0 {
            return Ok((0.0, 0.0));
        }
        if r.abs() > self.ctx.validity_radius {
            return Err(PolarError::OutsideValidity {
                r,
                radius: self.ctx.validity_radius,
            });
        }
        let (sin_t, cos_t) = theta.sin_cos();
        let x = r * cos_t;
        let v = r.powi(self.n) * sin_t;
        let (y, fp) = if self.f_is_zero {
            (v, 0.0)
        } else {
            (Self::horner(&self.f_coeffs, x) + v, Self::horner(&self.fp_coeffs, x))
        };
        let xdot = y + self.x_rhs.eval(x, y);
        let ydot = self.y_rhs.eval(x, y);
        let vdot = ydot - fp * xdot;
        let rpow = r.powi(self.n - 1);
        let num = sin_t * vdot + rpow * cos_t * xdot;
        let den = cos_t * vdot - self.n as f64 * rpow * sin_t * xdot;
        let scale = r.abs().powi(2 * self.n - 1);
        let proximity = self.ctx.eps_den * scale / den.abs();
        if den.abs() < self.ctx.eps_den * scale {
            return Err(PolarError::DenominatorNearZero { theta, r });
        }
        Ok((r * num / den, proximity))
    }

    /// `dr/dtheta` at `(theta, r)` (Lemma 2.1 denominator guard applied).
    pub fn polar_rhs(&self, theta: f64, r: f64) -> Result<f64, PolarError> {
        self.rhs_with_proximity(theta, r).map(|(v, _)| v)
    }

    /// Solves `dr/dtheta` from `r(theta0) = h` to `theta1`, returning
    /// `r(theta1)` and diagnostics.
    pub fn integrate_r(&self, theta0: f64, theta1: f64, h: f64) -> Result<(f64, PolarStats), PolarError> {
        if h.abs() > self.ctx.validity_radius {
            return Err(PolarError::OutsideValidity {
                r: h,
                radius: self.ctx.validity_radius,
            });
        }
        let mut proximity = 0.0f64;
        let rhs = |theta: f64, y: &[f64; 1]| -> Result<[f64; 1], PolarError> {
            let (v, p) = self.rhs_with_proximity(theta, y[0])?;
            proximity = proximity.max(p);
            Ok([v])
        };
        match integrate(rhs, theta0, theta1, [h], &self.opts) {
            Ok(([r], ode_stats)) => {
                let mut stats = PolarStats::default();
                stats.absorb(ode_stats, proximity);
                Ok((r, stats))
            }
            Err(OdeError::Rhs(e)) => Err(e),
            Err(OdeError::StepUnderflow { t }) => Err(PolarError::StepUnderflow { theta: t }),
            Err(OdeError::MaxSteps { t }) => Err(PolarError::Budget { theta: t }),
        }
    }

    /// The Poincaré return map `P(x0)` and displacement `d = P - x0`,
    /// reported in the section-curve `x` coordinate.
    pub fn return_map(&self, x0: f64) -> Result<(f64, f64), PolarError> {
        self.return_map_with_stats(x0).map(|(p, d, _)| (p, d))
    }

    pub fn return_map_with_stats(&self, x0: f64) -> Result<(f64, f64, PolarStats), PolarError> {
        assert!(x0 != 0.0, "the return map needs a nonzero start");
        let theta1 = if x0 > 0.0 {
            -2.0 * PI
        } else if self.n % 2 == 0 {
            2.0 * PI
        } else {
            -2.0 * PI
        };
        let (p, stats) = self.integrate_r(0.0, theta1, x0)?;
        Ok((p, p - x0, stats))
    }

    /// Samples the return map over ascending `x0` values (all of one sign).
    pub fn return_table(&self, x0s: &[f64]) -> ReturnMapTable {
        assert!(x0s.windows(2).all(|w| w[0] < w[1]), "x0 grid must ascend strictly");
        let direction = if x0s.first().map_or(true, |&x| x > 0.0) {
            Side::Positive
        } else {
            Side::Negative
        };
        let mut samples = Vec::with_capacity(x0s.len());
        let mut stats = PolarStats::default();
        let mut failures = Vec::new();
        for &x0 in x0s {
            match self.return_map_with_stats(x0) {
                Ok((p, d, s)) => {
                    stats.steps += s.steps;
                    stats.rejected += s.rejected;
                    stats.max_den_proximity = stats.max_den_proximity.max(s.max_den_proximity);
                    samples.push((x0, p, d));
                }
                Err(e) => failures.push((x0, e.to_string())),
            }
        }
        ReturnMapTable {
            samples,
            direction,
            stats,
            failures,
        }
    }
}

impl PolarField {
    /// Cartesian image of a polar point, `(x, y)` with `y = F(x) + r^n sin`.
    pub fn cartesian_point(&self, theta: f64, r: f64) -> (f64, f64) {
        let (sin_t, cos_t) = theta.sin_cos();
        let x = r * cos_t;
        let y = Self::horner(&self.f_coeffs, x) + r.powi(self.n) * sin_t;
        (x, y)
    }

    /// Samples the orbit through `(x0, F(x0))` over one revolution as a
    /// Cartesian polyline (accepted integration steps).
    pub fn orbit_polyline(&self, x0: f64) -> Result<Vec<(f64, f64)>, PolarError> {
        let theta1 = if x0 > 0.0 || self.n % 2 == 1 {
            -2.0 * PI
        } else {
            2.0 * PI
        };
        let mut pts = vec![self.cartesian_point(0.0, x0)];
        let rhs = |theta: f64, y: &[f64; 1]| self.polar_rhs(theta, y[0]).map(|v| [v]);
        let result = crate::ode::integrate_observed(rhs, 0.0, theta1, [x0], &self.opts, |rec| {
            pts.push(self.cartesian_point(rec.t1, rec.y1[0]));
            true
        });
        match result {
            Ok(_) => Ok(pts),
            Err(OdeError::Rhs(e)) => Err(e),
            Err(OdeError::StepUnderflow { t }) => Err(PolarError::StepUnderflow { theta: t }),
            Err(OdeError::MaxSteps { t }) => Err(PolarError::Budget { theta: t }),
        }
    }
}

/// Forward-time Cartesian crossings of the section curve on the `x > 0`
/// side: the independent stability cross-check. Returns the `x` values of
/// successive crossings (at most `count`), starting from `(x_start, F(x_start))`.
pub fn forward_crossings(
    sys: &PlanarSystem,
    x_start: f64,
    count: usize,
    t_max: f64,
) -> Vec<f64> {
    let section = sys.section_curve();
    let f_coeffs = section.coeffs_f64();
    let x_rhs = sys.x_part.to_float();
    let y_rhs = sys.y_part.to_float();
    let horner = |x: f64| {
        let mut acc = 0.0;
        for c in f_coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    let mut rhs = move |_t: f64, s: &[f64; 2]| -> Result<[f64; 2], std::convert::Infallible> {
        let (x, y) = (s[0], s[1]);
        Ok([y + x_rhs.eval(x, y), y_rhs.eval(x, y)])
    };
    let opts = OdeOptions {
        rtol: 1e-11,
        atol: 1e-13,
        ..OdeOptions::default()
    };
    let mut crossings = Vec::new();
    let y_start = horner(x_start);
    let event = |s: &[f64; 2]| s[1] - horner(s[0]);
    let mut pending: Vec<([f64; 2], f64, f64)> = Vec::new();
    let _ = crate::ode::integrate_observed(
        &mut rhs,
        0.0,
        t_max,
        [x_start, y_start],
        &opts,
        |rec| {
            let e0 = event(&rec.y0);
            let e1 = event(&rec.y1);
            if rec.t0 > 0.0 && e0 != 0.0 && e0.signum() != e1.signum() && rec.y0[0] > 0.0 && rec.y1[0] > 0.0 {
                pending.push((rec.y0, rec.t0, rec.t1));
            }
            pending.len() < count
        },
    );
    for (y0, t0, t1) in pending {
        // Bisect the crossing time inside the step.
        let mut lo = t0;
        let mut hi = t1;
        let e_lo_sign = event(&y0).signum();
        let mut x_cross = y0[0];
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            let Ok(([s0, s1], _)) = crate::ode::integrate(&mut rhs, t0, mid, y0, &opts) else {
                break;
            };
            let e = event(&[s0, s1]);
            x_cross = s0;
            if e == 0.0 {
                break;
            }
            if e.signum() == e_lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        crossings.push(x_cross);
    }
    crossings
}

impl ReturnMapTable {
    /// CSV emission: header `x0,P,d`, 17 significant digits per float.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x0,P,d\n");
        for &(x0, p, d) in &self.samples {
            out.push_str(&format!("{},{},{}\n", fmt_f64(x0), fmt_f64(p), fmt_f64(d)));
        }
        out
    }
}

/// 17-significant-digit float formatting shared by all emitted artifacts.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Log-spaced grid from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    (0..count).map(|k| lo * (ratio * k as f64).exp()).collect()
}
