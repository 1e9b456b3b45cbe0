//! Limit-cycle counting by bracketing fixed points of the return map.
//!
//! A limit cycle near the origin crosses the section curve at one positive
//! and one negative point; both are fixed points of the return map. The
//! counter brackets sign changes of `d(x0) = P(x0) - x0` on a log-spaced
//! positive grid, refines each by bisection, and confirms each refined root
//! through its paired negative-side fixed point.

use std::f64::consts::PI;

use crate::polar::{PolarError, PolarField};

/// Bisection target width for refined roots.
pub const ROOT_XTOL: f64 = 1e-10;
/// Absolute displacement tolerance when confirming the paired
/// negative-side fixed point.
pub const PARTNER_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug)]
pub struct Bracket {
    pub x_lo: f64,
    pub x_hi: f64,
    /// Sign change direction: `true` for `+ -> -` as `x0` grows.
    pub falling: bool,
}

#[derive(Clone, Debug)]
pub struct CycleRoot {
    pub x: f64,
    pub d_at_root: f64,
    /// Section crossing of the same orbit on the negative side.
    pub partner: Option<f64>,
    /// `|d(partner)|` when the partner was evaluated.
    pub partner_residual: Option<f64>,
    pub confirmed: bool,
}

#[derive(Clone, Debug, Default)]
pub struct CycleSet {
    pub brackets: Vec<Bracket>,
    pub roots: Vec<CycleRoot>,
    pub count: usize,
    pub warnings: Vec<String>,
}

/// Counts sign-change roots of `d` on a log grid over `[r_max/1000, r_max]`.
pub fn count_cycles(field: &PolarField, r_max: f64, grid: usize) -> CycleSet {
    count_cycles_in(field, r_max / 1000.0, r_max, grid)
}

pub fn count_cycles_in(field: &PolarField, r_min: f64, r_max: f64, grid: usize) -> CycleSet {
    assert!(r_min > 0.0 && r_max > r_min && grid >= 4);
    let xs = crate::polar::geometric_grid(r_min, r_max, grid);
    let mut warnings = Vec::new();
    let mut ds: Vec<Option<f64>> = Vec::with_capacity(xs.len());
    for &x in &xs {
        match field.return_map(x) {
            Ok((_, d)) => ds.push(Some(d)),
            Err(e) => {
                warnings.push(format!("d({x:.6e}) failed: {e}"));
                ds.push(None);
            }
        }
    }
    if let Some(first_bad) = ds.iter().rposition(|d| d.is_none()) {
        if first_bad == ds.len() - 1 {
            warnings.push(format!(
                "outermost grid point failed; effective r_max shrank below {r_max:.3e}"
            ));
        }
    }

    let mut set = CycleSet {
        warnings,
        ..CycleSet::default()
    };
    let eval = |x: f64| field.return_map(x).ok().map(|(_, d)| d);

    // Brackets come from consecutive valid samples.
    let mut prev: Option<(f64, f64)> = None;
    for (i, &x) in xs.iter().enumerate() {
        let Some(d) = ds[i] else {
            prev = None;
            continue;
        };
        if let Some((x_prev, d_prev)) = prev {
            if d_prev != 0.0 && d != 0.0 && d_prev.signum() != d.signum() {
                let bracket = Bracket {
                    x_lo: x_prev,
                    x_hi: x,
                    falling: d_prev > 0.0,
                };
                set.brackets.push(bracket);
                let (root, d_root) = bisect(&eval, x_prev, d_prev, x, &mut set.warnings);
                let (partner, partner_residual, confirmed) =
                    confirm_partner(field, root, &mut set.warnings);
                set.roots.push(CycleRoot {
                    x: root,
                    d_at_root: d_root,
                    partner,
                    partner_residual,
                    confirmed,
                });
            }
        }
        prev = Some((x, d));
    }
    set.count = set.roots.len();
    set
}

fn bisect(
    eval: &impl Fn(f64) -> Option<f64>,
    mut lo: f64,
    mut d_lo: f64,
    mut hi: f64,
    warnings: &mut Vec<String>,
) -> (f64, f64) {
    let mut d_mid = d_lo;
    for _ in 0..200 {
        if hi - lo <= ROOT_XTOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        match eval(mid) {
            Some(d) => {
                d_mid = d;
                if d == 0.0 {
                    return (mid, 0.0);
                }
                if d.signum() == d_lo.signum() {
                    lo = mid;
                    d_lo = d;
                } else {
                    hi = mid;
                }
            }
            None => {
                warnings.push(format!("refinement evaluation failed at {mid:.6e}"));
                break;
            }
        }
    }
    (0.5 * (lo + hi), d_mid)
}

/// The orbit through a positive fixed point crosses the section again at
/// `theta = -pi`, where `x = -r(-pi, root)`; a genuine cycle makes that
/// point a fixed point of the negative-side return map too.
fn confirm_partner(
    field: &PolarField,
    root: f64,
    warnings: &mut Vec<String>,
) -> (Option<f64>, Option<f64>, bool) {
    match field.integrate_r(0.0, -PI, root) {
        Ok((r_half, _)) => {
            let partner = -r_half;
            match field.return_map(partner) {
                Ok((_, d_neg)) => (Some(partner), Some(d_neg.abs()), d_neg.abs() <= PARTNER_TOL),
                Err(e) => {
                    warnings.push(format!("partner evaluation at {partner:.6e} failed: {e}"));
                    (Some(partner), None, false)
                }
            }
        }
        Err(e) => {
            record_partner_failure(root, &e, warnings);
            (None, None, false)
        }
    }
}

fn record_partner_failure(root: f64, e: &PolarError, warnings: &mut Vec<String>) {
    warnings.push(format!("half-turn from root {root:.6e} failed: {e}"));
}

/// Grid-level bracketing over precomputed samples; the synthetic-data entry
/// point used by tests and the plot emitter.
pub fn bracket_sign_changes(xs: &[f64], ds: &[Option<f64>]) -> Vec<Bracket> {
    assert_eq!(xs.len(), ds.len());
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for (i, &x) in xs.iter().enumerate() {
        let Some(d) = ds[i] else {
            prev = None;
            continue;
        };
        if let Some((x_prev, d_prev)) = prev {
            if d_prev != 0.0 && d != 0.0 && d_prev.signum() != d.signum() {
                out.push(Bracket {
                    x_lo: x_prev,
                    x_hi: x,
                    falling: d_prev > 0.0,
                });
            }
        }
        prev = Some((x, d));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::OdeOptions;
    use crate::polar::{geometric_grid, EvalContext};
    use crate::system::parse_system;

    #[test]
    fn center_counts_zero() {
        let sys = parse_system("kind lienard\ng 3 1\ng 5 1\n").unwrap();
        let field = PolarField::new(&sys, EvalContext::default(), OdeOptions::default()).unwrap();
        let set = count_cycles(&field, 0.2, 12);
        assert_eq!(set.count, 0);
        assert!(set.brackets.is_empty());
    }

    #[test]
    fn synthetic_two_sign_changes_bracketed() {
        let xs = geometric_grid(1e-3, 1e-1, 40);
        let d = |x: f64| (x - 0.01) * (x - 0.05) * -1.0;
        let ds: Vec<Option<f64>> = xs.iter().map(|&x| Some(d(x))).collect();
        let brackets = bracket_sign_changes(&xs, &ds);
        assert_eq!(brackets.len(), 2);
        assert!(brackets[0].x_lo < 0.01 && 0.01 < brackets[0].x_hi);
        assert!(brackets[1].x_lo < 0.05 && 0.05 < brackets[1].x_hi);
        assert!(!brackets[0].falling);
        assert!(brackets[1].falling);
    }

    #[test]
    fn gaps_break_brackets() {
        let xs = vec![0.01, 0.02, 0.03, 0.04];
        let ds = vec![Some(1.0), None, Some(-1.0), Some(-2.0)];
        // The sign change straddles a failed sample: no bracket.
        assert!(bracket_sign_changes(&xs, &ds).is_empty());
    }

    #[test]
    fn single_unstable_cycle_detected_and_confirmed() {
        // g = x^3 + x^5, f = -1/50 x^2 + 1/4 x^4: B_3 = 1/75 > 0 (unstable
        // origin), B_5 = -1/10 < 0 (contraction further out): exactly one
        // stable cycle between, at x^2 ~ (2/15)(w1/w2)-ish.
        let sys = parse_system("kind lienard\ng 3 1\ng 5 1\nf 2 -1/50\nf 4 1/4\n").unwrap();
        let field = PolarField::new(&sys, EvalContext::default(), OdeOptions::default()).unwrap();
        let set = count_cycles_in(&field, 0.01, 0.45, 40);
        assert_eq!(set.count, 1, "warnings: {:?}", set.warnings);
        let root = &set.roots[0];
        assert!(root.confirmed, "partner residual {:?}", root.partner_residual);
        assert!(root.partner.unwrap() < 0.0);
    }
}
