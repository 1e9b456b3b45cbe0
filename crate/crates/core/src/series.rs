//! Univariate truncated power series over exact rationals.
//!
//! A [`Series`] of order `N` represents a function modulo `x^{N+1}`: the
//! coefficients `c_0..c_N` are known exactly, anything beyond is unknown.
//! Binary operations propagate the smallest order on which the result is
//! still certain, so truncation never silently loses accuracy.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, One, Signed, Zero};
use thiserror::Error;

use crate::rational::{rat_int, to_f64, Rational};

/// Hard ceiling for truncation orders. `integrate` raises the order by one
/// and is capped here so repeated integration stays bounded.
pub const MAX_ORDER: usize = 64;

/// Default working order for the analysis pipeline.
pub const DEFAULT_ORDER: usize = 40;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum SeriesError {
    #[error("division by a series with zero constant term")]
    DivisionBySingularSeries,
    #[error("composition requires the inner series to vanish at the origin")]
    CompositionRequiresZeroConstant,
    #[error("series has no inverse at the origin (f(0) != 0 or f'(0) = 0)")]
    NotInvertibleAtOrigin,
    #[error("leading exponent {m} is not divisible by root index {k}")]
    RootBranchUndefined { m: usize, k: u32 },
    #[error("k-th root needs a positive leading coefficient")]
    RootOfNonpositiveLeading,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    /// `coeffs.len() == order + 1`.
    coeffs: Vec<Rational>,
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `x`.
    pub fn identity(order: usize) -> Self {
        Series::monomial(Rational::one(), 1, order)
    }

    pub fn monomial(c: Rational, degree: usize, order: usize) -> Self {
        let mut s = Series::zero(order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        Series { coeffs }
    }

    /// Convenience constructor from `(degree, p, q)` triples.
    pub fn from_terms(terms: &[(usize, i64, i64)], order: usize) -> Self {
        let mut s = Series::zero(order);
        for &(d, p, q) in terms {
            if d <= order {
                s.coeffs[d] += crate::rational::rat(p, q);
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &Rational {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// All odd-index coefficients vanish.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
    }

    /// All even-index coefficients vanish.
    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(|c| c.is_zero())
    }

    /// Restriction to a lower order.
    pub fn truncated(&self, order: usize) -> Series {
        let order = order.min(self.order());
        Series {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Zero-pads up to `order`. Only meaningful when the series is known to
    /// be an exact polynomial.
    pub fn extended(&self, order: usize) -> Series {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order.max(self.order()) + 1, Rational::zero());
        Series { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `x^m`, keeping the information horizon consistent:
    /// coefficients beyond the input's order
    /// stay representable up to `order + m` (capped at [`MAX_ORDER`]).
    pub fn shift_up(&self, m: usize) -> Series {
        let new_order = (self.order() + m).min(MAX_ORDER);
        let mut coeffs = vec![Rational::zero(); new_order + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            if j + m <= new_order {
                coeffs[j + m] = c.clone();
            }
        }
        Series { coeffs }
    }

    /// Divides by `x^m`; panics unless the first `m` coefficients vanish.
    pub fn shift_down(&self, m: usize) -> Series {
        assert!(
            self.coeffs[..m].iter().all(|c| c.is_zero()),
            "shift_down would drop nonzero terms"
        );
        Series {
            coeffs: self.coeffs[m..].to_vec(),
        }
    }

    fn bin_op(&self, other: &Series, f: impl Fn(&Rational, &Rational) -> Rational) -> Series {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|j| f(&self.coeffs[j], &other.coeffs[j]))
            .collect();
        Series { coeffs }
    }

    pub fn mul_series(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Series { coeffs }
    }

    /// Series reciprocal `1/self`; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Series, SeriesError> {
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::DivisionBySingularSeries);
        }
        let order = self.order();
        let inv0 = Rational::one() / self.coeffs[0].clone();
        let mut out = vec![Rational::zero(); order + 1];
        out[0] = inv0.clone();
        for k in 1..=order {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out[k] = -acc * &inv0;
        }
        Ok(Series { coeffs: out })
    }

    pub fn div_series(&self, other: &Series) -> Result<Series, SeriesError> {
        Ok(self.mul_series(&other.reciprocal()?))
    }

    /// `self(inner)`, requiring `inner(0) = 0`.
    ///
    /// The result order is `min(N_outer * val(inner), N_inner)`: the outer
    /// truncation error `O(u^{N_outer+1})` enters at `x`-degree
    /// `val(inner) * (N_outer+1)`, the inner one at `N_inner + 1`.
    pub fn compose(&self, inner: &Series) -> Result<Series, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::CompositionRequiresZeroConstant);
        }
        let order = match inner.valuation() {
            // Zero inner series: the composition is the exact constant
            // `self(0)` on the inner information horizon.
            None => return Ok(Series::constant(self.coeffs[0].clone(), inner.order())),
            Some(m) => (self.order().saturating_mul(m)).min(inner.order()),
        };
        let inner_t = inner.truncated(order);
        // Horner over the outer coefficients.
        let mut acc = Series::constant(self.coeffs[self.order()].clone(), order);
        for j in (0..self.order()).rev() {
            acc = acc.mul_series(&inner_t);
            acc.coeffs[0] += &self.coeffs[j];
        }
        Ok(acc)
    }

    /// Compositional inverse: `g` with `self(g(x)) = x` up to the order.
    /// Requires `f(0) = 0` and `f'(0) != 0`.
    pub fn reversion(&self) -> Result<Series, SeriesError> {
        if !self.coeffs[0].is_zero() || self.order() < 1 || self.coeffs[1].is_zero() {
            return Err(SeriesError::NotInvertibleAtOrigin);
        }
        let n = self.order();
        let a1_inv = Rational::one() / self.coeffs[1].clone();
        // Newton iteration g <- g - (f(g) - x)/(f'(g)), doubling the number
        // of correct coefficients each round.
        let mut g = Series::monomial(a1_inv, 1, 1);
        let mut correct = 1usize;
        let deriv = self.differentiate();
        while correct < n {
            let target = (correct * 2).min(n);
            g = g.extended(target);
            let fg = self.truncated(target).compose(&g)?;
            let num = fg - Series::identity(target);
            if let Some(v) = num.valuation() {
                // num = O(x^{correct+1}); dividing after shifting out x^v
                // keeps the quotient inside f' s trusted order.
                let den = deriv.truncated(target).compose(&g)?;
                let upd = num.shift_down(v).div_series(&den)?.shift_up(v);
                g = (g - upd.extended(target)).truncated(target);
            }
            correct = target;
        }
        Ok(g)
    }

    /// Exact `k`-th root of `f = c x^m (1 + h)` with `c > 0` and `k | m`.
    ///
    /// The rational part `x^{m/k} (1 + h)^{1/k}` is computed exactly; the
    /// scalar `c^{1/k}` is kept as a positive [`ScaleTag`] and folded into
    /// the coefficients only when `c` is a perfect `k`-th power.
    pub fn root(&self, k: u32) -> Result<ScaledSeries, SeriesError> {
        assert!(k >= 1);
        let m = self.valuation().ok_or(SeriesError::RootOfNonpositiveLeading)?;
        if m % (k as usize) != 0 {
            return Err(SeriesError::RootBranchUndefined { m, k });
        }
        let lead = self.coeffs[m].clone();
        if !lead.is_positive() {
            return Err(SeriesError::RootOfNonpositiveLeading);
        }
        // h with f = c x^m (1 + h), known through order N - m.
        let scaled = self.shift_down(m).scale(&(Rational::one() / lead.clone()));
        let h_order = scaled.order();
        // w = (1 + h)^{1/k} from w'(1+h) = (1/k) w h', solved term by term.
        let mut w = vec![Rational::zero(); h_order + 1];
        w[0] = Rational::one();
        let k_rat = rat_int(k as i64);
        for j in 1..=h_order {
            let mut acc = Rational::zero();
            for l in 0..j {
                let hc = &scaled.coeffs[j - l];
                if hc.is_zero() || w[l].is_zero() {
                    continue;
                }
                let weight = rat_int((j - l) as i64) / k_rat.clone() - rat_int(l as i64);
                acc += weight * &w[l] * hc;
            }
            w[j] = acc / rat_int(j as i64);
        }
        let core = Series { coeffs: w }.shift_up(m / (k as usize));
        let tag = ScaleTag::new(lead, k);
        Ok(match tag.take_exact_root() {
            Ok(exact) => ScaledSeries {
                tag: ScaleTag::one(),
                series: core.scale(&exact),
            },
            Err(tag) => ScaledSeries { tag, series: core },
        })
    }

    /// Term-wise antiderivative with zero constant term; order grows by one,
    /// capped at [`MAX_ORDER`].
    pub fn integrate(&self) -> Series {
        let order = (self.order() + 1).min(MAX_ORDER);
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            if j + 1 <= order && !c.is_zero() {
                coeffs[j + 1] = c / rat_int((j + 1) as i64);
            }
        }
        Series { coeffs }
    }

    /// Term-wise derivative; order drops by one.
    pub fn differentiate(&self) -> Series {
        if self.order() == 0 {
            return Series::zero(0);
        }
        let coeffs = (1..=self.order())
            .map(|j| &self.coeffs[j] * rat_int(j as i64))
            .collect();
        Series { coeffs }
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + to_f64(c);
        }
        acc
    }

    /// Magnitude of the last retained term, `|c_N x^N|`; the caller's
    /// diagnostic for the truncation residual at `x`.
    pub fn tail_term(&self, x: f64) -> f64 {
        (to_f64(&self.coeffs[self.order()]) * x.powi(self.order() as i32)).abs()
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match j {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{j}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, rhs: Series) -> Series {
        self.bin_op(&rhs, |a, b| a + b)
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, rhs: &'a Series) -> Series {
        self.bin_op(rhs, |a, b| a + b)
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, rhs: Series) -> Series {
        self.bin_op(&rhs, |a, b| a - b)
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, rhs: &'a Series) -> Series {
        self.bin_op(rhs, |a, b| a - b)
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        self.mul_series(&rhs)
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, rhs: &'a Series) -> Series {
        self.mul_series(rhs)
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

/// A positive real scalar `base^(1/root)` kept in symbolic form so that the
/// coefficient field stays rational. Realized in floating point only at
/// evaluation time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleTag {
    base: Rational,
    root: u32,
}

impl ScaleTag {
    pub fn one() -> Self {
        ScaleTag {
            base: Rational::one(),
            root: 1,
        }
    }

    /// `base^(1/root)`; `base` must be positive.
    pub fn new(base: Rational, root: u32) -> Self {
        assert!(base.is_positive(), "scale tags are positive by construction");
        assert!(root >= 1);
        ScaleTag { base, root }
    }

    pub fn is_one(&self) -> bool {
        self.base.is_one()
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    /// If `base` is a perfect `root`-th power, returns the exact rational
    /// value; otherwise hands the tag back unchanged.
    pub fn take_exact_root(self) -> Result<Rational, ScaleTag> {
        let p = nth_root_exact(self.base.numer(), self.root);
        let q = nth_root_exact(self.base.denom(), self.root);
        match (p, q) {
            (Some(p), Some(q)) => Ok(Rational::new(p, q)),
            _ => Err(self),
        }
    }

    pub fn mul(&self, other: &ScaleTag) -> ScaleTag {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let base = num::pow::pow(self.base.clone(), other.root as usize)
            * num::pow::pow(other.base.clone(), self.root as usize);
        let tag = ScaleTag::new(base, self.root * other.root);
        match tag.take_exact_root() {
            Ok(exact) => ScaleTag::new(exact, 1),
            Err(tag) => tag,
        }
    }

    /// `(base^(1/root))^e` for a nonnegative integer exponent.
    pub fn pow(&self, e: u32) -> ScaleTag {
        if e == 0 || self.is_one() {
            return ScaleTag::one();
        }
        let tag = ScaleTag::new(num::pow::pow(self.base.clone(), e as usize), self.root);
        match tag.take_exact_root() {
            Ok(exact) => ScaleTag::new(exact, 1),
            Err(tag) => tag,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let b = to_f64(&self.base);
        if self.root == 1 {
            b
        } else {
            b.powf(1.0 / self.root as f64)
        }
    }
}

fn nth_root_exact(v: &BigInt, k: u32) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.nth_root(k);
    if num::pow::pow(r.clone(), k as usize) == *v {
        Some(r)
    } else {
        None
    }
}

/// A truncated series together with a positive symbolic scalar factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledSeries {
    pub tag: ScaleTag,
    pub series: Series,
}

impl ScaledSeries {
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.tag.to_f64() * self.series.eval_f64(x)
    }

    /// Raises to the `k`-th power, folding the tag when it becomes exact.
    pub fn pow_series(&self, k: u32) -> ScaledSeries {
        let mut acc = self.series.clone();
        for _ in 1..k {
            acc = acc.mul_series(&self.series);
        }
        let tag = self.tag.pow(k);
        if tag.root() == 1 {
            ScaledSeries {
                tag: ScaleTag::one(),
                series: acc.scale(tag.base()),
            }
        } else {
            ScaledSeries { tag, series: acc }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn poly(terms: &[(usize, i64, i64)], order: usize) -> Series {
        Series::from_terms(terms, order)
    }

    #[test]
    fn ring_ops_products() {
        let a = poly(&[(0, 1, 1), (1, 1, 1)], 10); // 1 + x
        let b = poly(&[(0, 1, 1), (1, -1, 1)], 10); // 1 - x
        let p = a.mul_series(&b);
        assert_eq!(p, poly(&[(0, 1, 1), (2, -1, 1)], 10)); // 1 - x^2
    }

    #[test]
    fn additive_identity() {
        let a = poly(&[(0, 2, 3), (3, -1, 7)], 8);
        assert_eq!(&a + &Series::zero(8), a);
    }

    #[test]
    fn geometric_series_reciprocal() {
        let denom = poly(&[(0, 1, 1), (1, -1, 1)], 6); // 1 - x
        let one = Series::constant(rat(1, 1), 6);
        let inv = one.div_series(&denom).unwrap();
        let expect = poly(&[(0, 1, 1), (1, 1, 1), (2, 1, 1), (3, 1, 1), (4, 1, 1), (5, 1, 1), (6, 1, 1)], 6);
        assert_eq!(inv, expect);
    }

    #[test]
    fn division_by_singular_series_rejected() {
        let a = Series::constant(rat(1, 1), 4);
        let b = Series::identity(4);
        assert_eq!(a.div_series(&b), Err(SeriesError::DivisionBySingularSeries));
    }

    #[test]
    fn order_propagation_min() {
        let a = poly(&[(0, 1, 1)], 10);
        let b = poly(&[(0, 1, 1)], 4);
        assert_eq!(a.mul_series(&b).order(), 4);
        assert_eq!((&a + &b).order(), 4);
    }

    #[test]
    fn compose_substitute_square() {
        // (1 + x + x^2 + ...) o x^2 = 1 + x^2 + x^4 + ...
        let geo = Series::from_coeffs(vec![rat(1, 1); 9]);
        let x2 = Series::monomial(rat(1, 1), 2, 8);
        let c = geo.compose(&x2).unwrap();
        let expect = poly(&[(0, 1, 1), (2, 1, 1), (4, 1, 1), (6, 1, 1), (8, 1, 1)], 8);
        assert_eq!(c, expect);
    }

    #[test]
    fn compose_identity_is_noop() {
        let f = poly(&[(1, 2, 1), (2, -3, 5), (4, 1, 7)], 9);
        assert_eq!(f.compose(&Series::identity(9)).unwrap(), f);
    }

    #[test]
    fn compose_square_of_shifted() {
        // x^2 o (x + x^3) = x^2 + 2x^4 + x^6
        let sq = Series::monomial(rat(1, 1), 2, 7);
        let inner = poly(&[(1, 1, 1), (3, 1, 1)], 7);
        let c = sq.compose(&inner).unwrap();
        assert_eq!(c, poly(&[(2, 1, 1), (4, 2, 1), (6, 1, 1)], 7));
    }

    #[test]
    fn compose_requires_zero_constant() {
        let f = Series::identity(4);
        let inner = Series::constant(rat(1, 1), 4);
        assert_eq!(f.compose(&inner), Err(SeriesError::CompositionRequiresZeroConstant));
    }

    #[test]
    fn compose_order_rule() {
        // outer order 3, inner valuation 2 and order 10 -> min(6, 10).
        let outer = poly(&[(1, 1, 1)], 3);
        let inner = Series::monomial(rat(1, 1), 2, 10);
        assert_eq!(outer.compose(&inner).unwrap().order(), 6);
    }

    #[test]
    fn reversion_of_x_plus_x2() {
        // Known expansion x - x^2 + 2x^3 - 5x^4 + 14x^5 (Catalan signs).
        let f = poly(&[(1, 1, 1), (2, 1, 1)], 5);
        let g = f.reversion().unwrap();
        assert_eq!(g, poly(&[(1, 1, 1), (2, -1, 1), (3, 2, 1), (4, -5, 1), (5, 14, 1)], 5));
        // Defining property both ways.
        assert_eq!(f.compose(&g).unwrap(), Series::identity(5));
        assert_eq!(g.compose(&f).unwrap(), Series::identity(5));
    }

    #[test]
    fn reversion_identity_and_linear() {
        let id = Series::identity(6);
        assert_eq!(id.reversion().unwrap(), id);
        let two_x = poly(&[(1, 2, 1)], 6);
        assert_eq!(two_x.reversion().unwrap(), poly(&[(1, 1, 2)], 6));
    }

    #[test]
    fn reversion_needs_linear_term() {
        let f = Series::monomial(rat(1, 1), 2, 5);
        assert_eq!(f.reversion(), Err(SeriesError::NotInvertibleAtOrigin));
    }

    #[test]
    fn root_square_of_one_plus_x() {
        let f = poly(&[(0, 1, 1), (1, 1, 1)], 8);
        let r = f.root(2).unwrap();
        assert!(r.tag.is_one());
        let sq = r.series.mul_series(&r.series);
        assert_eq!(sq, f);
    }

    #[test]
    fn root_of_pure_monomial() {
        // root_4(x^4) = x: the case g = x^3, n = 2 where u collapses to x.
        let f = Series::monomial(rat(1, 1), 4, 12);
        let r = f.root(4).unwrap();
        assert!(r.tag.is_one());
        assert_eq!(r.series, Series::identity(9));
    }

    #[test]
    fn root_with_tail() {
        // root_4(x^4 (1 + 4x/5)) = x (1 + x/5 - 3x^2/50 + ...)
        let f = poly(&[(4, 1, 1), (5, 4, 5)], 12);
        let r = f.root(4).unwrap();
        assert!(r.tag.is_one());
        assert_eq!(r.series.coeff(1), &rat(1, 1));
        assert_eq!(r.series.coeff(2), &rat(1, 5));
        assert_eq!(r.series.coeff(3), &rat(-3, 50));
        // Defining property: the 4th power reproduces the input.
        let mut p = r.series.clone();
        for _ in 0..3 {
            p = p.mul_series(&r.series);
        }
        assert_eq!(p, f.truncated(p.order()));
    }

    #[test]
    fn root_branch_errors() {
        let f = Series::monomial(rat(1, 1), 3, 8);
        assert_eq!(f.root(2), Err(SeriesError::RootBranchUndefined { m: 3, k: 2 }));
        let g = Series::monomial(rat(-1, 1), 2, 8);
        assert_eq!(g.root(2), Err(SeriesError::RootOfNonpositiveLeading));
    }

    #[test]
    fn root_keeps_irrational_scale_symbolic() {
        // 2x^2: sqrt = 2^(1/2) x, tag stays symbolic.
        let f = Series::monomial(rat(2, 1), 2, 8);
        let r = f.root(2).unwrap();
        assert_eq!(r.tag, ScaleTag::new(rat(2, 1), 2));
        assert_eq!(r.series, Series::identity(7));
        assert!((r.eval_f64(1.0) - 2f64.sqrt()).abs() < 1e-15);
        // Squaring folds the tag back to an exact rational.
        let sq = r.pow_series(2);
        assert!(sq.tag.is_one());
        assert_eq!(sq.series, f.truncated(sq.series.order()));
    }

    #[test]
    fn calculus_round_trip() {
        let f = Series::monomial(rat(1, 1), 3, 9); // x^3
        let big = f.integrate();
        assert_eq!(big, Series::monomial(rat(1, 4), 4, 10));
        assert_eq!(big.differentiate(), f.extended(9));
        let g = poly(&[(0, 3, 2), (2, -7, 3), (5, 1, 1)], 9);
        assert_eq!(g.integrate().differentiate(), g);
    }

    #[test]
    fn eval_examples() {
        let f = poly(&[(0, 1, 1), (1, 1, 2)], 4);
        assert!((f.eval_f64(0.1) - 1.05).abs() < 1e-15);
        assert_eq!(poly(&[(0, 7, 2)], 3).eval_f64(0.0), 3.5);
        let g = poly(&[(1, 1, 1), (2, -1, 1), (3, 2, 1), (4, -5, 1)], 4);
        assert!((g.eval_f64(0.1) - 0.0915).abs() < 1e-12);
        assert!((g.tail_term(0.1) - 5e-4).abs() < 1e-15);
    }

    #[test]
    fn scale_tag_products() {
        let a = ScaleTag::new(rat(2, 1), 2); // sqrt 2
        let b = ScaleTag::new(rat(8, 1), 2); // sqrt 8
        let p = a.mul(&b); // sqrt 16 = 4
        assert_eq!(p, ScaleTag::new(rat(4, 1), 1));
        let c = ScaleTag::new(rat(3, 1), 3);
        let q = a.mul(&c);
        assert!((q.to_f64() - 2f64.sqrt() * 3f64.powf(1.0 / 3.0)).abs() < 1e-14);
    }
}
