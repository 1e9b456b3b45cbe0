//! Exact rational coefficients.
//!
//! All symbolic computation in this crate runs over `Ratio<BigInt>`, which
//! keeps values in lowest terms with a positive denominator after every
//! operation.

use num::bigint::BigInt;
use num::rational::Ratio;
use num::{One, Signed, ToPrimitive, Zero};

pub type Rational = Ratio<BigInt>;

/// `p/q` as an exact rational. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Ratio::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    Ratio::from_integer(BigInt::from(p))
}

/// Parses `p`, `p/q` or a plain decimal such as `0.05` (converted exactly
/// to `5/100`). Anything else, including `q == 0`, is rejected.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty rational".to_string());
    }
    if let Some((num, den)) = s.split_once('/') {
        let p: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator `{num}`"))?;
        let q: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator `{den}`"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(Ratio::new(p, q));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        // Exact decimal -> rational conversion; no float rounding involved.
        let digits = format!("{int_part}{frac_part}");
        let p: BigInt = digits
            .parse()
            .map_err(|_| format!("bad decimal `{s}`"))?;
        let q = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Ok(Ratio::new(p, q));
    }
    let p: BigInt = s.parse().map_err(|_| format!("bad integer `{s}`"))?;
    Ok(Ratio::from_integer(p))
}

/// Renders a rational as `p/q`, or just `p` when the denominator is one.
pub fn rational_str(r: &Rational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("rational convertible to f64")
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("7").unwrap(), rat_int(7));
        assert_eq!(parse_rational("0.05").unwrap(), rat(1, 20));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn normalized_output() {
        assert_eq!(rational_str(&rat(2, 4)), "1/2");
        assert_eq!(rational_str(&rat(-2, 4)), "-1/2");
        assert_eq!(rational_str(&rat(0, 5)), "0");
        assert_eq!(rational_str(&rat(4, 2)), "2");
        // Sign always lives in the numerator.
        assert_eq!(rational_str(&Rational::new(BigInt::from(1), BigInt::from(-3))), "-1/3");
    }
}
