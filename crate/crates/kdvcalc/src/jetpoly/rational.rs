//! Exact coefficient arithmetic. Coefficients are arbitrary precision
//! rationals kept reduced with a positive denominator.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Reduced rational number with arbitrary precision.
pub type Rational = num_rational::BigRational;

/// Shorthand constructor from machine integers.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p` or `p/q` with an optional leading minus sign.
///
/// The denominator must be a positive integer; this never panics on
/// malformed input, unlike `Rational::from_str`.
pub(crate) fn parse_rational(s: &str) -> Result<Rational, String> {
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = parse_int(num_str, true)?;
    let den = match den_str {
        Some(d) => {
            let den = parse_int(d, false)?;
            if den.is_zero() {
                return Err("zero denominator".into());
            }
            den
        }
        None => BigInt::one(),
    };
    Ok(Rational::new(num, den))
}

fn parse_int(s: &str, allow_sign: bool) -> Result<BigInt, String> {
    let (negative, digits) = match s.strip_prefix('-') {
        Some(rest) if allow_sign => (true, rest),
        Some(_) => return Err(format!("unexpected sign in `{s}`")),
        None => (false, s),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("malformed integer `{s}`"));
    }
    let n: BigInt = digits.parse().expect("digits verified");
    Ok(if negative { -n } else { n })
}

/// Canonical text form: `p` when the denominator is one, `p/q` otherwise.
pub(crate) fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Unsigned text form of `|r|`, parenthesized when it is a true fraction, so
/// a coefficient reads back through the expression grammar.
pub(crate) fn format_magnitude(r: &Rational) -> String {
    let a = r.abs();
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("({}/{})", a.numer(), a.denom())
    }
}

/// LaTeX form of `|r|`: an integer or `\frac{p}{q}`.
pub(crate) fn latex_magnitude(r: &Rational) -> String {
    let a = r.abs();
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
    }
}
