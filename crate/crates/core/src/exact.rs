//! Exact rational helpers.

use alloc::format;
use alloc::string::{String, ToString};
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::LrbError;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders `r` as `p/q` in lowest terms with `q > 0`, always including the
/// denominator.
pub fn render(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, `p`, or a finite decimal such as `0.25`.
pub fn parse(s: &str) -> Result<Rational, LrbError> {
    let s = s.trim();
    let bad = || LrbError::Invalid(format!("not a rational number: `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = whole.starts_with('-');
        let whole_abs = whole.trim_start_matches(['-', '+']);
        let whole_abs = if whole_abs.is_empty() { "0" } else { whole_abs };
        let digits = whole_abs.to_string() + frac;
        let num = BigInt::from_str(&digits).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    let p = BigInt::from_str(s).map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Closest `f64` to `r` (adequate for Monte Carlo comparisons).
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale both down together when either side overflows f64.
            let bits = r.numer().bits().max(r.denom().bits());
            let shift = bits.saturating_sub(1000) as usize;
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

pub fn pow(r: &Rational, e: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse(" -2 ").unwrap(), int(-2));
        assert_eq!(parse("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse("-1.5").unwrap(), ratio(-3, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
    }

    #[test]
    fn render_is_lowest_terms_with_positive_denominator() {
        assert_eq!(render(&ratio(2, -4)), "-1/2");
        assert_eq!(render(&int(3)), "3/1");
    }

    #[test]
    fn to_f64_close() {
        assert!((to_f64(&ratio(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
    }
}
