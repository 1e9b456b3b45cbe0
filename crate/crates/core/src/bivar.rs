//! Truncated bivariate polynomials over exact rationals.
//!
//! Only exponent pairs with `i + j <= order` are stored; absent pairs are
//! zero. These carry the right-hand sides `X(x, y)` and `Y(x, y)` of a
//! planar system.

use std::collections::BTreeMap;

use num::Zero;

use crate::rational::{to_f64, Rational};
use crate::series::Series;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivariate {
    terms: BTreeMap<(u32, u32), Rational>,
    order: usize,
}

impl Bivariate {
    pub fn zero(order: usize) -> Self {
        Bivariate {
            terms: BTreeMap::new(),
            order,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Adds `c x^i y^j`, accumulating with any existing term. Terms beyond
    /// the truncation order are dropped.
    pub fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if (i + j) as usize > self.order || c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn term(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest total degree with a nonzero term.
    pub fn min_total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|&(i, j)| (i + j) as usize).min()
    }

    pub fn add(&self, other: &Bivariate) -> Bivariate {
        let mut out = Bivariate::zero(self.order.min(other.order));
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, c.clone());
        }
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn partial_x(&self) -> Bivariate {
        let mut out = Bivariate::zero(self.order.saturating_sub(1));
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                out.add_term(i - 1, j, c * crate::rational::rat_int(i as i64));
            }
        }
        out
    }

    pub fn partial_y(&self) -> Bivariate {
        let mut out = Bivariate::zero(self.order.saturating_sub(1));
        for (&(i, j), c) in &self.terms {
            if j > 0 {
                out.add_term(i, j - 1, c * crate::rational::rat_int(j as i64));
            }
        }
        out
    }

    /// `y -> -y`.
    pub fn flip_y(&self) -> Bivariate {
        let mut out = Bivariate::zero(self.order);
        for (&(i, j), c) in &self.terms {
            let c = if j % 2 == 1 { -c.clone() } else { c.clone() };
            out.add_term(i, j, c);
        }
        out
    }

    pub fn negate(&self) -> Bivariate {
        let mut out = Bivariate::zero(self.order);
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }

    /// Drops every monomial of total degree greater than `m`.
    pub fn truncate_total_degree(&self, m: usize) -> Bivariate {
        let mut out = Bivariate::zero(self.order);
        for (&(i, j), c) in &self.terms {
            if (i + j) as usize <= m {
                out.add_term(i, j, c.clone());
            }
        }
        out
    }

    /// Substitutes `y = s(x)`, producing a univariate series. `s` must
    /// vanish at the origin so that the truncation structure is preserved.
    pub fn subst_y(&self, s: &Series) -> Series {
        assert!(
            s.coeff(0).is_zero(),
            "substitution series must vanish at the origin"
        );
        let target = self.order.min(s.order());
        let max_j = self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
        // Powers of s, truncated to the target order.
        let mut pow = Vec::with_capacity(max_j as usize + 1);
        pow.push(Series::constant(num::One::one(), target));
        for j in 1..=max_j as usize {
            let p = pow[j - 1].mul_series(&s.truncated(target));
            pow.push(p);
        }
        let mut acc = Series::zero(target);
        for (&(i, j), c) in &self.terms {
            let term = pow[j as usize].shift_up(i as usize).truncated(target).scale(c);
            acc = acc + term;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for (&(i, j), c) in &self.terms {
            acc += to_f64(c) * x.powi(i as i32) * y.powi(j as i32);
        }
        acc
    }

    /// Compiles to a float form for use inside integrator inner loops.
    pub fn to_float(&self) -> FloatBivar {
        let terms: Vec<(u32, u32, f64)> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| (i, j, to_f64(c)))
            .collect();
        let max_i = terms.iter().map(|t| t.0).max().unwrap_or(0) as usize;
        let max_j = terms.iter().map(|t| t.1).max().unwrap_or(0) as usize;
        FloatBivar { terms, max_i, max_j }
    }
}

/// Float-compiled bivariate polynomial with power-table evaluation.
#[derive(Clone, Debug)]
pub struct FloatBivar {
    terms: Vec<(u32, u32, f64)>,
    max_i: usize,
    max_j: usize,
}

impl FloatBivar {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut xp = [0.0f64; crate::series::MAX_ORDER + 1];
        let mut yp = [0.0f64; crate::series::MAX_ORDER + 1];
        xp[0] = 1.0;
        for i in 1..=self.max_i {
            xp[i] = xp[i - 1] * x;
        }
        yp[0] = 1.0;
        for j in 1..=self.max_j {
            yp[j] = yp[j - 1] * y;
        }
        let mut acc = 0.0;
        for &(i, j, c) in &self.terms {
            acc += c * xp[i as usize] * yp[j as usize];
        }
        acc
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::series::Series;

    #[test]
    fn accumulate_and_drop() {
        let mut b = Bivariate::zero(5);
        b.add_term(1, 1, rat(1, 2));
        b.add_term(1, 1, rat(1, 2));
        assert_eq!(b.term(1, 1), rat(1, 1));
        b.add_term(1, 1, rat(-1, 1));
        assert!(b.is_zero());
        b.add_term(4, 3, rat(1, 1)); // beyond order, dropped
        assert!(b.is_zero());
    }

    #[test]
    fn substitute_series() {
        // y^2 + x y at y = x^2: x^4 + x^3.
        let mut b = Bivariate::zero(6);
        b.add_term(0, 2, rat(1, 1));
        b.add_term(1, 1, rat(1, 1));
        let s = Series::monomial(rat(1, 1), 2, 6);
        let out = b.subst_y(&s);
        assert_eq!(out, Series::from_terms(&[(3, 1, 1), (4, 1, 1)], 6));
    }

    #[test]
    fn partials() {
        let mut b = Bivariate::zero(4);
        b.add_term(2, 1, rat(3, 1)); // 3 x^2 y
        let bx = b.partial_x();
        assert_eq!(bx.term(1, 1), rat(6, 1));
        let by = b.partial_y();
        assert_eq!(by.term(2, 0), rat(3, 1));
    }

    #[test]
    fn degree_filter() {
        let mut b = Bivariate::zero(9);
        b.add_term(7, 2, rat(1, 1));
        b.add_term(2, 1, rat(1, 1));
        let t = b.truncate_total_degree(6);
        assert_eq!(t.term(7, 2), rat(0, 1));
        assert_eq!(t.term(2, 1), rat(1, 1));
    }

    #[test]
    fn float_eval_matches_exact() {
        let mut b = Bivariate::zero(5);
        b.add_term(3, 0, rat(-1, 1));
        b.add_term(1, 2, rat(1, 3));
        let fb = b.to_float();
        let (x, y) = (0.3, -0.2);
        assert!((fb.eval(x, y) - b.eval_f64(x, y)).abs() < 1e-15);
    }
}
