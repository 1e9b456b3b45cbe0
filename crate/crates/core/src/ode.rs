//! Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4)).
//!
//! The right-hand side is fallible: a stage evaluation may refuse a point
//! (e.g. the polar denominator guard). A refused stage shrinks the step and
//! retries; only when the step cannot shrink further does the underlying
//! error propagate. Everything is plain sequential f64 arithmetic, so a
//! fixed input yields a bit-identical trajectory.

use thiserror::Error;

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; picked automatically when `None`.
    pub h0: Option<f64>,
    pub min_step: f64,
    pub max_steps: u64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-12,
            atol: 1e-14,
            h0: None,
            min_step: 1e-15,
            max_steps: 4_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OdeStats {
    pub steps: u64,
    pub rejected: u64,
}

#[derive(Debug, Error)]
pub enum OdeError<E> {
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("step budget exhausted at t = {t}")]
    MaxSteps { t: f64 },
    #[error("right-hand side failed: {0}")]
    Rhs(E),
}

/// One accepted step, with derivatives at both ends for interpolation.
#[derive(Clone, Copy, Debug)]
pub struct StepRecord<const D: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; D],
    pub y1: [f64; D],
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
// b5 - b4: the embedded error estimator weights (k7 = FSAL stage).
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = rhs(t, y)` from `t0` to `t1` and returns `y(t1)`.
pub fn integrate<const D: usize, E2, F>(
    rhs: F,
    t0: f64,
    t1: f64,
    y0: [f64; D],
    opts: &OdeOptions,
) -> Result<([f64; D], OdeStats), OdeError<E2>>
where
    F: FnMut(f64, &[f64; D]) -> Result<[f64; D], E2>,
{
    integrate_observed(rhs, t0, t1, y0, opts, |_| true).map(|(y, _, stats)| (y, stats))
}

/// As [`integrate`], invoking `observe` after every accepted step. The
/// observer may return `false` to stop early; the return value then carries
/// the time actually reached.
pub fn integrate_observed<const D: usize, E2, F>(
    mut rhs: F,
    t0: f64,
    t1: f64,
    y0: [f64; D],
    opts: &OdeOptions,
    mut observe: impl FnMut(&StepRecord<D>) -> bool,
) -> Result<([f64; D], f64, OdeStats), OdeError<E2>>
where
    F: FnMut(f64, &[f64; D]) -> Result<[f64; D], E2>,
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok((y0, t0, OdeStats::default()));
    }
    let dir = span.signum();
    let mut stats = OdeStats::default();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y).map_err(OdeError::Rhs)?;

    let mut h = match opts.h0 {
        Some(h0) => h0.abs() * dir,
        None => initial_step(&mut rhs, t, &y, &k1, dir, opts)?,
    };

    loop {
        if (t - t1) * dir >= 0.0 {
            return Ok((y, t, stats));
        }
        if stats.steps + stats.rejected >= opts.max_steps {
            return Err(OdeError::MaxSteps { t });
        }
        if h.abs() < opts.min_step {
            return Err(OdeError::StepUnderflow { t });
        }
        // Do not step past the endpoint.
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }

        let mut k = [[0.0; D]; 7];
        k[0] = k1;
        let mut stage_failed = None;
        for s in 1..7 {
            let mut ys = y;
            for (i, yi) in ys.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                *yi += h * acc;
            }
            match rhs(t + C[s] * h, &ys) {
                Ok(ks) => k[s] = ks,
                Err(e) => {
                    stage_failed = Some(e);
                    break;
                }
            }
        }
        if let Some(e) = stage_failed {
            // The stage point is outside the evaluable region; try a
            // smaller step before giving up.
            if h.abs() * 0.5 < opts.min_step {
                return Err(OdeError::Rhs(e));
            }
            h *= 0.5;
            stats.rejected += 1;
            continue;
        }

        let mut y_new = y;
        for (i, yi) in y_new.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate() {
                acc += B5[j] * kj[i];
            }
            *yi += h * acc;
        }

        // Scaled RMS error of the embedded pair.
        let mut err_sq = 0.0;
        for i in 0..D {
            let mut e_i = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e_i += E[j] * kj[i];
            }
            e_i *= h;
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (e_i / sc) * (e_i / sc);
        }
        let err = (err_sq / D as f64).sqrt();

        if err <= 1.0 {
            let record = StepRecord {
                t0: t,
                t1: t + h,
                y0: y,
                y1: y_new,
            };
            t += h;
            y = y_new;
            k1 = k[6]; // FSAL
            stats.steps += 1;
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
            if !observe(&record) {
                return Ok((y, t, stats));
            }
        } else {
            stats.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
        }
    }
}

fn initial_step<const D: usize, E2, F>(
    rhs: &mut F,
    t0: f64,
    y0: &[f64; D],
    k1: &[f64; D],
    dir: f64,
    opts: &OdeOptions,
) -> Result<f64, OdeError<E2>>
where
    F: FnMut(f64, &[f64; D]) -> Result<[f64; D], E2>,
{
    // Hairer-style guess from the magnitudes of y and y'.
    let mut d0: f64 = 0.0;
    let mut d1: f64 = 0.0;
    for i in 0..D {
        let sc = opts.atol + opts.rtol * y0[i].abs();
        d0 += (y0[i] / sc) * (y0[i] / sc);
        d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    let d0 = (d0 / D as f64).sqrt();
    let d1 = (d1 / D as f64).sqrt();
    let mut h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    // One explicit Euler probe to bound the second derivative.
    let mut y1 = *y0;
    for i in 0..D {
        y1[i] += h * dir * k1[i];
    }
    if let Ok(k2) = rhs(t0 + h * dir, &y1) {
        let mut d2: f64 = 0.0;
        for i in 0..D {
            let sc = opts.atol + opts.rtol * y0[i].abs();
            d2 += ((k2[i] - k1[i]) / sc) * ((k2[i] - k1[i]) / sc);
        }
        let d2 = (d2 / D as f64).sqrt() / h;
        let d_max = d1.max(d2);
        let h1 = if d_max <= 1e-15 {
            (h * 1e-3).max(1e-6)
        } else {
            (0.01 / d_max).powf(0.2)
        };
        h = h.min(h1).min(100.0 * h);
    } else {
        h *= 1e-3;
    }
    Ok(h.max(opts.min_step * 10.0) * dir)
}
