//! Exact focal analysis of Liénard-form systems `x' = y, y' = -g(x) - y f(x)`.
//!
//! The pipeline: primitives `F = int f`, `G = int g`; the canonical variable
//! `u = (2n G)^(1/2n)` with its positive scale tag; the involution `alpha`
//! solving `G(alpha(x)) = G(x)` with `alpha(x) = -x + O(x^2)`; the focal
//! coefficients `B_j` of `F(alpha(x)) - F(x)`; and the reduced friction
//! series `fbar` whose even coefficients drive the Filippov stability test.
//! Every sign decision is exact rational arithmetic.

use num::{Signed, Zero};
use thiserror::Error;

use crate::rational::{rat_int, Rational};
use crate::series::{ScaledSeries, Series, SeriesError};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum FocalError {
    #[error("hypothesis violated: g must be x^(2n-1)(a + O(x)) with n >= 2 and a > 0 ({0})")]
    HypothesisViolation(String),
    #[error("series computation failed: {0}")]
    Series(#[from] SeriesError),
}

/// The canonical data of a Liénard system, ready for focal computations.
#[derive(Clone, Debug)]
pub struct LienardData {
    pub g: Series,
    pub f: Series,
    pub n: usize,
    /// Leading coefficient `a_{2n-1}` of `g`; positive.
    pub a_lead: Rational,
    /// `F = int_0^x f`.
    pub big_f: Series,
    /// `G = int_0^x g`.
    pub big_g: Series,
    /// `u = (2n G)^(1/2n) = a^(1/2n) (x + O(x^2))`; the tag holds `a^(1/2n)`.
    pub u: ScaledSeries,
    /// `W`: compositional inverse of the rational core of `u`.
    pub u_core_inv: Series,
    /// `alpha = W(-u_core(x)) = -x + O(x^2)`; the scale tag cancels.
    pub alpha: Series,
    /// Rational carrier of the reduced friction series: the true
    /// coefficient of `x^j` in `fbar` is `fbar_core[j] * s^(2n-1-j)` with
    /// `s = a^(1/2n) > 0`, so signs and vanishing are read off exactly.
    pub fbar_core: Series,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    Undetermined,
    CenterCandidate,
}

/// Which extra-cycle hypothesis of the bifurcation theory the system meets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Thm19Case {
    /// `n = 2` with `b_0 = 0` and `b_1^2 - 8 a_3 < 0`.
    N2Focus,
    /// `n > 2`, `g` odd, `f` even, `b_j = 0` for `j <= n-2`, and
    /// `b_{n-1}^2 - 4n a_{2n-1} < 0`.
    Symmetric,
    None,
}

#[derive(Clone, Debug)]
pub struct FocalReport {
    pub n: usize,
    pub p_n: u8,
    /// `B_1 ..= B_M` where `M` is the available exact order.
    pub b: Vec<Rational>,
    /// Index `2k+1` of the first nonzero odd coefficient, if any.
    pub first_odd_nonzero: Option<usize>,
    /// Focus order `k`: the first nonzero generalized focal value is the
    /// order-`k` one, i.e. the leading odd index is `2(k + [n/2]) + 1`.
    /// `None` for center candidates and for node-range leading indices.
    pub focus_order: Option<usize>,
    pub stability: Stability,
    /// The leading odd index sits below `2[n/2]+1`: the origin is a node in
    /// this regime, not a focus, though the stability sign still applies.
    pub node_range: bool,
    /// Reversibility certificate `g` odd and `f` odd: a true center.
    pub symmetric_center: bool,
    pub thm19_case: Thm19Case,
}

/// Builds the canonical Liénard data. Requires `g = x^{2n-1}(a + O(x))`
/// with `n >= 2` and `a > 0`.
pub fn build_lienard(g: &Series, f: &Series) -> Result<LienardData, FocalError> {
    let val = g
        .valuation()
        .ok_or_else(|| FocalError::HypothesisViolation("g vanishes identically".into()))?;
    if val % 2 == 0 || val < 3 {
        return Err(FocalError::HypothesisViolation(format!(
            "g has leading power {val}, expected odd 2n-1 with n >= 2"
        )));
    }
    let n = (val + 1) / 2;
    let a_lead = g.coeff(val).clone();
    if !a_lead.is_positive() {
        return Err(FocalError::HypothesisViolation(format!(
            "leading coefficient of g is {a_lead}, expected positive"
        )));
    }

    let big_f = f.integrate();
    let big_g = g.integrate();
    let u = big_g.scale(&rat_int(2 * n as i64)).root(2 * n as u32)?;
    let u_core_inv = u.series.reversion()?;
    let neg_u_core = u.series.clone().scale(&-Rational::from_integer(1.into()));
    let alpha = u_core_inv.compose(&neg_u_core)?;

    // fbar(x) = x^{2n-1} f(u^{-1}(x)) / g(u^{-1}(x)). With W the rational
    // core inverse and s the scale tag, u^{-1}(x) = W(x/s) and
    // fbar(x) = s^{2n-1} D(x/s) for D = (f o W) / ((g o W) / y^{2n-1}).
    let f_w = f.compose(&u_core_inv)?;
    let g_w = g.compose(&u_core_inv)?;
    let g_w_reduced = g_w.shift_down(2 * n - 1);
    let fbar_core = f_w.div_series(&g_w_reduced)?;

    Ok(LienardData {
        g: g.clone(),
        f: f.clone(),
        n,
        a_lead,
        big_f,
        big_g,
        u,
        u_core_inv,
        alpha,
        fbar_core,
    })
}

impl LienardData {
    /// Floating-point value of the `j`-th coefficient of the true `fbar`.
    pub fn fbar_coeff_f64(&self, j: usize) -> f64 {
        let s = self.u.tag.to_f64();
        crate::rational::to_f64(self.fbar_core.coeff(j)) * s.powi(2 * self.n as i32 - 1 - j as i32)
    }
}

/// Computes the focal coefficients `B_j` of `F(alpha(x)) - F(x)` and reads
/// off order and stability from the first nonzero odd-index coefficient.
pub fn focal_b(data: &LienardData) -> Result<FocalReport, FocalError> {
    let f_alpha = data.big_f.compose(&data.alpha)?;
    let diff = f_alpha.clone() - data.big_f.truncated(f_alpha.order());
    let m = diff.order();
    let b: Vec<Rational> = (1..=m).map(|j| diff.coeff(j).clone()).collect();

    let l = data.n / 2;
    let first_nonzero = b.iter().position(|c| !c.is_zero()).map(|i| i + 1);
    let first_odd_nonzero = b
        .iter()
        .enumerate()
        .find(|(i, c)| (i + 1) % 2 == 1 && !c.is_zero())
        .map(|(i, _)| i + 1);

    let symmetric_center = data.g.is_odd() && data.f.is_odd();

    let (stability, focus_order, node_range) = match first_odd_nonzero {
        None => {
            if first_nonzero.is_none() {
                (Stability::CenterCandidate, None, false)
            } else {
                // A nonzero even coefficient below every odd one cannot
                // occur for exact data; treat defensively.
                (Stability::Undetermined, None, false)
            }
        }
        Some(idx) => {
            // Leading-coefficient stability needs every coefficient below
            // the leading odd one to vanish.
            let clean = b[..idx - 1].iter().all(|c| c.is_zero());
            if !clean {
                (Stability::Undetermined, None, false)
            } else {
                let stable = b[idx - 1].is_negative();
                let stab = if stable {
                    Stability::Stable
                } else {
                    Stability::Unstable
                };
                if idx >= 2 * l + 1 {
                    (stab, Some((idx - 1) / 2 - l), false)
                } else {
                    (stab, None, true)
                }
            }
        }
    };

    Ok(FocalReport {
        n: data.n,
        p_n: if data.n % 2 == 0 { 1 } else { 0 },
        b,
        first_odd_nonzero,
        focus_order,
        stability,
        node_range,
        symmetric_center,
        thm19_case: thm19_case(data),
    })
}

fn thm19_case(data: &LienardData) -> Thm19Case {
    let n = data.n;
    let f = &data.f;
    let four_n_a = rat_int(4 * n as i64) * &data.a_lead;
    let b_lead = if n - 1 <= f.order() {
        f.coeff(n - 1).clone()
    } else {
        Rational::zero()
    };
    let focus_ineq = (&b_lead * &b_lead - four_n_a).is_negative();
    if n == 2 {
        if f.coeff(0).is_zero() && focus_ineq {
            return Thm19Case::N2Focus;
        }
    } else if data.g.is_odd()
        && f.is_even()
        && (0..=n - 2).all(|j| j > f.order() || f.coeff(j).is_zero())
        && focus_ineq
    {
        return Thm19Case::Symmetric;
    }
    Thm19Case::None
}

/// Filippov stability test on the reduced friction series: the first
/// nonzero even-index coefficient of `fbar` decides (positive = stable).
/// `Undetermined` when the reduction hypothesis fails (wrong valuation or
/// the focus inequality broken).
pub fn filippov_check(data: &LienardData) -> Stability {
    let n = data.n;
    let d = &data.fbar_core;
    // Hypothesis: fbar = sum_{j >= n-1} b_j x^j with b_{n-1}^2 - 4n < 0 in
    // the normalized scale, i.e. D_{n-1}^2 * a - 4n < 0 exactly.
    if let Some(v) = d.valuation() {
        if v < n - 1 {
            return Stability::Undetermined;
        }
    }
    if n - 1 > d.order() {
        return Stability::Undetermined;
    }
    let lead = d.coeff(n - 1);
    if (lead * lead * &data.a_lead - rat_int(4 * n as i64)).is_positive() {
        return Stability::Undetermined;
    }
    let mut l = 0usize;
    while 2 * l <= d.order() {
        let c = d.coeff(2 * l);
        if !c.is_zero() {
            return if c.is_positive() {
                Stability::Stable
            } else {
                Stability::Unstable
            };
        }
        l += 1;
    }
    Stability::CenterCandidate
}
