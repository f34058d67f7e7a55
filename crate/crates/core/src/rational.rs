//! Exact rational helpers.

use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q`; panics when `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {0:?} as a rational number")]
pub struct ParseRationalError(pub String);

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"0.9"`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    if let Some((num, den)) = t.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = whole.starts_with('-');
        let w = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(whole).map_err(|_| err())?
        };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let f = BigInt::from_str(frac).map_err(|_| err())?;
        let magnitude = w.abs() * &scale + f;
        let n = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(n, scale));
    }
    BigInt::from_str(t).map(Rational::from_integer).map_err(|_| err())
}

/// Exact square root when `r` is the square of a rational.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

pub fn to_f64(r: &Rational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Largest rational with denominator `2^bits` that is ≤ the real root of
/// `f` bracketed by `[lo, hi]`, found by bisection on a sign change.
pub fn bisect_root(
    f: impl Fn(&Rational) -> Rational,
    mut lo: Rational,
    mut hi: Rational,
    bits: u32,
) -> (Rational, Rational) {
    let lo_sign = f(&lo).signum();
    let eps = Rational::new(BigInt::one(), BigInt::from(2).pow(bits));
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / int(2);
        let s = f(&mid).signum();
        if s.is_zero() {
            return (mid.clone(), mid);
        }
        if s == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Serializes a rational as the string `"p/q"` (or `"p"` when integral).
pub mod serde_str {
    use super::Rational;

    pub fn serialize<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }
}

pub fn is_even(n: &BigInt) -> bool {
    n.is_even()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational(" -6/8 ").unwrap(), ratio(-3, 4));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("0.9").unwrap(), ratio(9, 10));
        assert_eq!(parse_rational("-.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn display_is_p_over_q() {
        assert_eq!(ratio(6, 8).to_string(), "3/4");
        assert_eq!(int(-2).to_string(), "-2");
    }

    #[test]
    fn sqrt_exactness() {
        assert_eq!(exact_sqrt(&ratio(9, 25)), Some(ratio(3, 5)));
        assert_eq!(exact_sqrt(&int(2)), None);
        assert_eq!(exact_sqrt(&int(-4)), None);
    }

    #[test]
    fn bisection_brackets_sqrt2() {
        let (lo, hi) = bisect_root(|x| x * x - int(2), int(1), int(2), 30);
        assert!(&lo * &lo < int(2) && &hi * &hi > int(2));
    }
}
