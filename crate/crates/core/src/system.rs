//! Planar systems `x' = y + X(x,y)`, `y' = Y(x,y)` around a nilpotent
//! singular point: PVF parsing, the section curve `y = F(x)`, extraction of
//! the pair `(g, f)` and the monodromy classification.

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::bivar::Bivariate;
use crate::rational::{parse_rational, Rational};
use crate::series::{Series, DEFAULT_ORDER};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum SystemError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: constant or linear term `{term}` not allowed (right-hand sides are O(|x,y|^2))")]
    InvalidLowOrderTerms { line: usize, term: String },
    #[error("g has even leading power {degree}; the center-focus criterion needs an odd one")]
    NotOddLeadingPower { degree: usize },
    #[error("g vanishes to the working order; the singular line case is out of scope")]
    DegenerateLine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemKind {
    General,
    Lienard,
}

/// A planar polynomial vector field `x' = y + X`, `y' = Y`, orientation
/// already normalized to `+1` (`x' = -y + ...` inputs are mapped through
/// `y -> -y` at parse time and flagged).
#[derive(Clone, Debug)]
pub struct PlanarSystem {
    pub x_part: Bivariate,
    pub y_part: Bivariate,
    pub kind: SystemKind,
    pub series_order: usize,
    pub label: String,
    /// True when the source file declared orientation `-1`; reports can
    /// state results in the original coordinates.
    pub flipped: bool,
}

impl PlanarSystem {
    /// Builds a Liénard system `x' = y`, `y' = -g(x) - y f(x)` from the
    /// coefficient series of `g` and `f`.
    pub fn lienard(g: &Series, f: &Series, series_order: usize, label: &str) -> PlanarSystem {
        let mut y_part = Bivariate::zero(series_order);
        for (j, c) in g.coeffs().iter().enumerate() {
            y_part.add_term(j as u32, 0, -c.clone());
        }
        for (j, c) in f.coeffs().iter().enumerate() {
            y_part.add_term(j as u32, 1, -c.clone());
        }
        PlanarSystem {
            x_part: Bivariate::zero(series_order),
            y_part,
            kind: SystemKind::Lienard,
            series_order,
            label: label.to_string(),
            flipped: false,
        }
    }

    /// Solves `y + X(x, y) = 0` for `y = F(x)` with `F(0) = 0` by fixed-point
    /// iteration `F <- -X(x, F)`. The solution exists and is unique because
    /// `d/dy (y + X) = 1` at the origin.
    pub fn section_curve(&self) -> Series {
        let order = self.series_order;
        let mut f = Series::zero(order);
        if self.x_part.is_zero() {
            return f;
        }
        for _ in 0..=order {
            let next = self
                .x_part
                .subst_y(&f)
                .extended(order)
                .scale(&-Rational::one());
            if next == f {
                break;
            }
            f = next;
        }
        f
    }

    /// The pair of section-curve data series: `g = -Y(x, F(x))` and
    /// `f = -(dX/dx + dY/dy)(x, F(x))`.
    pub fn extract_fg(&self) -> (Series, Series) {
        let section = self.section_curve();
        let g = self.y_part.subst_y(&section).scale(&-Rational::one());
        let div = self.x_part.partial_x().add(&self.y_part.partial_y());
        let f = div.subst_y(&section).scale(&-Rational::one());
        (g, f)
    }

    /// Removes every monomial of total degree above `m` from both sides.
    pub fn truncate_degree(&self, m: usize) -> PlanarSystem {
        PlanarSystem {
            x_part: self.x_part.truncate_total_degree(m),
            y_part: self.y_part.truncate_total_degree(m),
            kind: self.kind,
            series_order: self.series_order,
            label: format!("{} (deg<={m})", self.label),
            flipped: self.flipped,
        }
    }

    /// Re-derives the system at a different working order. The stored
    /// right-hand sides are exact polynomials, so this is lossless upward.
    pub fn with_series_order(&self, order: usize) -> PlanarSystem {
        let mut x_part = Bivariate::zero(order);
        for (&(i, j), c) in self.x_part.terms() {
            x_part.add_term(i, j, c.clone());
        }
        let mut y_part = Bivariate::zero(order);
        for (&(i, j), c) in self.y_part.terms() {
            y_part.add_term(i, j, c.clone());
        }
        PlanarSystem {
            x_part,
            y_part,
            kind: self.kind,
            series_order: order,
            label: self.label.clone(),
            flipped: self.flipped,
        }
    }
}

/// Monodromy data at the origin: `Y(x,F(x)) = a x^{2n-1} + ...` and the
/// divergence `b x^{n-1} + ...` along the section curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentClass {
    pub n: usize,
    pub a: Rational,
    pub b: Rational,
    pub monodromic: bool,
    /// `p_n = [1 + (-1)^n]/2`: 1 for even `n`, 0 for odd.
    pub p_n: u8,
    /// The divergence hypothesis `div = b x^{n-1} + O(x^n)` holds, i.e. the
    /// divergence has no nonzero term below degree `n-1`. When it fails the
    /// origin is not monodromic (node or saddle-node regime).
    pub divergence_hypothesis: bool,
}

/// Classifies the origin from the extracted pair `(g, f)`. The origin is a
/// center or focus iff `a < 0` and `b^2 + 4an < 0`, with `a` and `b` read
/// through `g = -Y(x,F)` and `f = -div`, and the divergence hypothesis
/// `val(f) >= n-1` in force.
pub fn classify_nilpotent(g: &Series, f: &Series) -> Result<NilpotentClass, SystemError> {
    let val = g.valuation().ok_or(SystemError::DegenerateLine)?;
    if val % 2 == 0 {
        return Err(SystemError::NotOddLeadingPower { degree: val });
    }
    let n = (val + 1) / 2;
    let a = -g.coeff(val).clone();
    let b = if n - 1 <= f.order() {
        -f.coeff(n - 1).clone()
    } else {
        Rational::zero()
    };
    let divergence_hypothesis = match f.valuation() {
        Some(v) => v >= n - 1,
        None => true,
    };
    let four_n = crate::rational::rat_int(4 * n as i64);
    let criterion = a.is_negative() && (&b * &b + four_n * &a).is_negative();
    Ok(NilpotentClass {
        n,
        a,
        b,
        monodromic: criterion && divergence_hypothesis,
        p_n: if n % 2 == 0 { 1 } else { 0 },
        divergence_hypothesis,
    })
}

/// Parses the PVF (planar vector field) text format.
///
/// ```text
/// kind general|lienard
/// orientation +1|-1      # optional, default +1
/// order <N>              # optional, default 40
/// label <text>           # optional
/// X <i> <j> <p/q>        # general kind: coefficient of x^i y^j in X
/// Y <i> <j> <p/q>
/// g <j> <p/q>            # lienard kind: coefficient of x^j
/// f <j> <p/q>
/// ```
///
/// Repeated exponent lines accumulate. Coefficients are exact rationals
/// (`p/q` or integer); decimals are rejected.
pub fn parse_system(text: &str) -> Result<PlanarSystem, SystemError> {
    let mut kind: Option<SystemKind> = None;
    let mut orientation = 1i32;
    let mut order = DEFAULT_ORDER;
    let mut label = String::new();
    // (line, i, j, coeff) term records, validated after the header is known.
    let mut x_terms: Vec<(usize, u32, u32, Rational)> = Vec::new();
    let mut y_terms: Vec<(usize, u32, u32, Rational)> = Vec::new();
    let mut g_terms: Vec<(usize, u32, Rational)> = Vec::new();
    let mut f_terms: Vec<(usize, u32, Rational)> = Vec::new();

    let err = |line: usize, msg: String| SystemError::Parse { line, msg };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.split_once('#') {
            Some((head, _)) => head.trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let head = parts.next().unwrap();
        match head {
            "kind" => {
                let v = parts
                    .next()
                    .ok_or_else(|| err(line_no, "missing kind value".into()))?;
                kind = Some(match v {
                    "general" => SystemKind::General,
                    "lienard" => SystemKind::Lienard,
                    other => return Err(err(line_no, format!("unknown kind `{other}`"))),
                });
            }
            "orientation" => {
                let v = parts
                    .next()
                    .ok_or_else(|| err(line_no, "missing orientation value".into()))?;
                orientation = match v {
                    "+1" | "1" => 1,
                    "-1" => -1,
                    other => {
                        return Err(err(
                            line_no,
                            format!("orientation must be +1 or -1, got `{other}`"),
                        ))
                    }
                };
            }
            "order" => {
                let v = parts
                    .next()
                    .ok_or_else(|| err(line_no, "missing order value".into()))?;
                order = v
                    .parse::<usize>()
                    .map_err(|_| err(line_no, format!("bad order `{v}`")))?;
                if !(4..=crate::series::MAX_ORDER).contains(&order) {
                    return Err(err(
                        line_no,
                        format!("order must be in 4..={}", crate::series::MAX_ORDER),
                    ));
                }
            }
            "label" => {
                label = parts.by_ref().collect::<Vec<_>>().join(" ");
            }
            "X" | "Y" => {
                let kind = kind.ok_or_else(|| err(line_no, "term before `kind` line".into()))?;
                if kind != SystemKind::General {
                    return Err(err(line_no, format!("`{head}` lines need kind general")));
                }
                let (i, j, c) = parse_xy_term(&mut parts, line_no)?;
                if head == "X" {
                    x_terms.push((line_no, i, j, c));
                } else {
                    y_terms.push((line_no, i, j, c));
                }
            }
            "g" | "f" => {
                let kind = kind.ok_or_else(|| err(line_no, "term before `kind` line".into()))?;
                if kind != SystemKind::Lienard {
                    return Err(err(line_no, format!("`{head}` lines need kind lienard")));
                }
                let (j, c) = parse_deg_term(&mut parts, line_no)?;
                if head == "g" {
                    g_terms.push((line_no, j, c));
                } else {
                    f_terms.push((line_no, j, c));
                }
            }
            other => {
                return Err(err(line_no, format!("unknown directive `{other}`")));
            }
        }
        if let Some(extra) = parts.next() {
            return Err(err(line_no, format!("trailing token `{extra}`")));
        }
    }

    let kind = kind.ok_or_else(|| err(0, "missing `kind` line".into()))?;

    // Low-order validation. General right-hand sides are O(|x,y|^2); a
    // Liénard f may carry a constant term (the -b0*y rung of an unfolding)
    // but g starts at degree 2 or higher.
    for &(line, i, j, _) in x_terms.iter().chain(y_terms.iter()) {
        if i + j < 2 {
            return Err(SystemError::InvalidLowOrderTerms {
                line,
                term: format!("x^{i} y^{j}"),
            });
        }
    }
    for &(line, j, _) in &g_terms {
        if j < 2 {
            return Err(SystemError::InvalidLowOrderTerms {
                line,
                term: format!("g x^{j}"),
            });
        }
    }

    let mut x_part = Bivariate::zero(order);
    let mut y_part = Bivariate::zero(order);
    match kind {
        SystemKind::General => {
            for (_, i, j, c) in x_terms {
                x_part.add_term(i, j, c);
            }
            for (_, i, j, c) in y_terms {
                y_part.add_term(i, j, c);
            }
        }
        SystemKind::Lienard => {
            for (_, j, c) in g_terms {
                y_part.add_term(j, 0, -c);
            }
            for (_, j, c) in f_terms {
                y_part.add_term(j, 1, -c);
            }
        }
    }

    let mut flipped = false;
    if orientation == -1 {
        // y -> -y carries x' = -y + X(x,y) into the normalized form:
        // X~(x,y) = X(x,-y), Y~(x,y) = -Y(x,-y).
        x_part = x_part.flip_y();
        y_part = y_part.flip_y().negate();
        flipped = true;
    }

    Ok(PlanarSystem {
        x_part,
        y_part,
        kind,
        series_order: order,
        label,
        flipped,
    })
}

fn parse_xy_term<'a>(
    parts: &mut impl Iterator<Item = &'a str>,
    line: usize,
) -> Result<(u32, u32, Rational), SystemError> {
    let err = |msg: String| SystemError::Parse { line, msg };
    let i = parts
        .next()
        .ok_or_else(|| err("missing x exponent".into()))?
        .parse::<u32>()
        .map_err(|_| err("bad x exponent".into()))?;
    let j = parts
        .next()
        .ok_or_else(|| err("missing y exponent".into()))?
        .parse::<u32>()
        .map_err(|_| err("bad y exponent".into()))?;
    let c = parse_coeff(parts.next(), line)?;
    Ok((i, j, c))
}

fn parse_deg_term<'a>(
    parts: &mut impl Iterator<Item = &'a str>,
    line: usize,
) -> Result<(u32, Rational), SystemError> {
    let err = |msg: String| SystemError::Parse { line, msg };
    let j = parts
        .next()
        .ok_or_else(|| err("missing degree".into()))?
        .parse::<u32>()
        .map_err(|_| err("bad degree".into()))?;
    let c = parse_coeff(parts.next(), line)?;
    Ok((j, c))
}

fn parse_coeff(tok: Option<&str>, line: usize) -> Result<Rational, SystemError> {
    let tok = tok.ok_or(SystemError::Parse {
        line,
        msg: "missing coefficient".into(),
    })?;
    if tok.contains('.') {
        return Err(SystemError::Parse {
            line,
            msg: format!("decimal coefficient `{tok}` rejected; use p/q"),
        });
    }
    parse_rational(tok).map_err(|msg| SystemError::Parse { line, msg })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn kukles(
        a11: (i64, i64),
        a02: (i64, i64),
        a30: (i64, i64),
        a21: (i64, i64),
        a12: (i64, i64),
        a03: (i64, i64),
    ) -> String {
        format!(
            "kind general\nY 1 1 {}/{}\nY 0 2 {}/{}\nY 3 0 {}/{}\nY 2 1 {}/{}\nY 1 2 {}/{}\nY 0 3 {}/{}\n",
            -a11.0, a11.1, -a02.0, a02.1, -a30.0, a30.1, -a21.0, a21.1, -a12.0, a12.1, -a03.0, a03.1
        )
    }

    #[test]
    fn parse_kukles_file() {
        let sys = parse_system(&kukles((1, 1), (1, 2), (1, 1), (1, 3), (1, 5), (2, 7))).unwrap();
        assert_eq!(sys.kind, SystemKind::General);
        assert!(sys.x_part.is_zero());
        assert_eq!(sys.y_part.term(1, 1), rat(-1, 1));
        assert_eq!(sys.y_part.term(0, 2), rat(-1, 2));
        assert_eq!(sys.y_part.term(3, 0), rat(-1, 1));
        assert_eq!(sys.y_part.term(2, 1), rat(-1, 3));
        assert_eq!(sys.y_part.term(1, 2), rat(-1, 5));
        assert_eq!(sys.y_part.term(0, 3), rat(-2, 7));
    }

    #[test]
    fn parse_lienard_file() {
        let text = "kind lienard\n# the (x^3 + x^5) family\ng 3 1\ng 5 1\nf 0 1/10\nf 2 1/2\n";
        let sys = parse_system(text).unwrap();
        assert_eq!(sys.kind, SystemKind::Lienard);
        let (g, f) = sys.extract_fg();
        assert_eq!(g.truncated(10), Series::from_terms(&[(3, 1, 1), (5, 1, 1)], 10));
        assert_eq!(f.truncated(10), Series::from_terms(&[(0, 1, 10), (2, 1, 2)], 10));
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        let text = "kind general\nX 1 1 1/0\n";
        let e = parse_system(text).unwrap_err();
        assert!(matches!(e, SystemError::Parse { line: 2, .. }), "{e:?}");
    }

    #[test]
    fn parse_rejects_low_order_terms() {
        let text = "kind general\nX 1 0 1\n";
        let e = parse_system(text).unwrap_err();
        assert!(
            matches!(e, SystemError::InvalidLowOrderTerms { line: 2, .. }),
            "{e:?}"
        );
        let text = "kind lienard\ng 1 1\n";
        assert!(matches!(
            parse_system(text).unwrap_err(),
            SystemError::InvalidLowOrderTerms { .. }
        ));
    }

    #[test]
    fn parse_rejects_decimals() {
        let text = "kind general\nY 3 0 0.5\n";
        assert!(matches!(
            parse_system(text).unwrap_err(),
            SystemError::Parse { line: 2, .. }
        ));
    }

    #[test]
    fn repeated_lines_accumulate() {
        let text = "kind general\nY 3 0 1/2\nY 3 0 1/2\n";
        let sys = parse_system(text).unwrap();
        assert_eq!(sys.y_part.term(3, 0), rat(1, 1));
    }

    #[test]
    fn section_curve_trivial_cases() {
        let sys = parse_system("kind general\nY 3 0 -1\n").unwrap();
        assert!(sys.section_curve().is_zero());
        // X = y^2: the branch of y + y^2 = 0 through the origin is y = 0.
        let sys = parse_system("kind general\nX 0 2 1\nY 3 0 -1\n").unwrap();
        assert!(sys.section_curve().is_zero());
    }

    #[test]
    fn section_curve_solves_equation() {
        // X = x^2 + xy: F = -x^2 + x^3 - x^4 + ...
        let sys = parse_system("kind general\nX 2 0 1\nX 1 1 1\nY 3 0 -1\norder 12\n").unwrap();
        let f = sys.section_curve();
        assert_eq!(f.coeff(2), &rat(-1, 1));
        assert_eq!(f.coeff(3), &rat(1, 1));
        assert_eq!(f.coeff(4), &rat(-1, 1));
        // Residual of y + X(x, y) at y = F is exactly zero through the order.
        let residual = f.clone() + sys.x_part.subst_y(&f);
        assert!(residual.is_zero(), "{residual:?}");
    }

    #[test]
    fn extract_kukles() {
        let sys = parse_system(&kukles((1, 1), (1, 2), (2, 1), (1, 3), (1, 5), (2, 7))).unwrap();
        let (g, f) = sys.extract_fg();
        // g = a30 x^3 exactly; f = a11 x + a21 x^2 exactly (X = 0 makes F = 0,
        // so the a02 and a03 terms never reach the section curve).
        assert_eq!(g.valuation(), Some(3));
        assert_eq!(g.coeff(3), &rat(2, 1));
        assert_eq!(g.truncated(10), Series::from_terms(&[(3, 2, 1)], 10));
        assert_eq!(
            f.truncated(10),
            Series::from_terms(&[(1, 1, 1), (2, 1, 3)], 10)
        );
    }

    #[test]
    fn extract_system_42_after_orientation_flip() {
        // x' = -y + A x^2 + B xy + C y^2, y' = x^3 + x y^2 + y^3, A=1/2, B=1/3, C=1/4.
        let text = "kind general\norientation -1\nX 2 0 1/2\nX 1 1 1/3\nX 0 2 1/4\nY 3 0 1\nY 1 2 1\nY 0 3 1\n";
        let sys = parse_system(text).unwrap();
        assert!(sys.flipped);
        let (g, f) = sys.extract_fg();
        // g = x^3 + O(x^5), f = -2A x + O(x^2).
        assert_eq!(g.coeff(3), &rat(1, 1));
        assert!(g.coeff(4).is_zero());
        assert_eq!(f.coeff(1), &rat(-1, 1)); // -2A = -1
        let class = classify_nilpotent(&g, &f).unwrap();
        assert_eq!(class.n, 2);
        assert!(class.monodromic); // A^2 = 1/4 < 2
    }

    #[test]
    fn classify_kukles_conditions() {
        // a30 > 0: monodromic iff a11^2 - 8 a30 < 0.
        let sys = parse_system(&kukles((1, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1))).unwrap();
        let (g, f) = sys.extract_fg();
        let class = classify_nilpotent(&g, &f).unwrap();
        assert_eq!(class.n, 2);
        assert_eq!(class.a, rat(-1, 1));
        assert_eq!(class.b, rat(-1, 1));
        assert!(class.monodromic); // 1 - 8 < 0
        assert_eq!(class.p_n, 1);

        // a11^2 - 8 a30 >= 0: not monodromic.
        let sys = parse_system(&kukles((3, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1))).unwrap();
        let (g, f) = sys.extract_fg();
        assert!(!classify_nilpotent(&g, &f).unwrap().monodromic);
    }

    #[test]
    fn classify_hamiltonian_candidate() {
        let g = Series::from_terms(&[(3, 1, 1)], 20);
        let f = Series::zero(20);
        let class = classify_nilpotent(&g, &f).unwrap();
        assert_eq!(class.n, 2);
        assert_eq!(class.a, rat(-1, 1));
        assert_eq!(class.b, rat(0, 1));
        assert!(class.monodromic);
    }

    #[test]
    fn classify_even_power_rejected() {
        let g = Series::from_terms(&[(2, 1, 1)], 10);
        let f = Series::zero(10);
        assert_eq!(
            classify_nilpotent(&g, &f).unwrap_err(),
            SystemError::NotOddLeadingPower { degree: 2 }
        );
        assert_eq!(
            classify_nilpotent(&Series::zero(10), &f).unwrap_err(),
            SystemError::DegenerateLine
        );
    }

    #[test]
    fn classify_divergence_hypothesis() {
        // g = x^5 (n = 3) with f = x: divergence valuation 1 < n-1 = 2, a
        // node regime, not monodromic even though b = 0 passes the inequality.
        let g = Series::from_terms(&[(5, 1, 1)], 20);
        let f = Series::from_terms(&[(1, 1, 1)], 20);
        let class = classify_nilpotent(&g, &f).unwrap();
        assert!(!class.divergence_hypothesis);
        assert!(!class.monodromic);
    }

    #[test]
    fn truncate_degree_filters() {
        let text = "kind general\nY 7 2 1\nY 3 0 -1\norder 20\n";
        let sys = parse_system(text).unwrap();
        let t = sys.truncate_degree(6);
        assert!(t.y_part.term(7, 2).is_zero());
        assert_eq!(t.y_part.term(3, 0), rat(-1, 1));
        // Polynomial systems of degree <= m are unchanged.
        let t2 = sys.truncate_degree(9);
        assert_eq!(t2.y_part, sys.y_part);
    }

    #[test]
    fn truncate_lienard_degrees() {
        let text = "kind lienard\ng 3 1\ng 9 1\nf 2 1\nf 6 1\n";
        let sys = parse_system(text).unwrap().truncate_degree(6);
        let (g, f) = sys.extract_fg();
        assert_eq!(g.truncated(12), Series::from_terms(&[(3, 1, 1)], 12));
        // The f x^6 term sits at total degree 7 > 6: removed.
        assert_eq!(f.truncated(12), Series::from_terms(&[(2, 1, 1)], 12));
    }

    #[test]
    fn classification_invariant_under_truncation() {
        let text = "kind lienard\ng 3 1\ng 5 1\nf 2 1/2\nf 4 1/3\n";
        let sys = parse_system(text).unwrap();
        let (g, f) = sys.extract_fg();
        let base = classify_nilpotent(&g, &f).unwrap();
        for m in [3, 4, 5, 6] {
            let (gt, ft) = sys.truncate_degree(m).extract_fg();
            let c = classify_nilpotent(&gt, &ft).unwrap();
            assert_eq!(c.n, base.n);
            assert_eq!(c.a, base.a);
            assert_eq!(c.monodromic, base.monodromic);
        }
    }
}
