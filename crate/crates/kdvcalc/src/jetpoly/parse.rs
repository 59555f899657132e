//! Recursive descent parser for the expression grammar.
//!
//! Terms are joined by `+` and `-`, factors by an explicit `*`, powers use
//! `^`. Jets are written `u`, `u_x`, `u_txx` with all t's before all x's in
//! the suffix; `t` and `x` alone are the coordinates. Rational constants are
//! written `3`, `(1/6)`, or `-2` through the leading sign of a term, and a
//! parenthesized subexpression may stand anywhere a factor may.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::jet::Coord;
use super::{DiffPoly, Factors, Monomial, Rational, MAX_ORDER_INPUT};

/// Most terms an expression may accumulate while being parsed. Untrusted
/// input cannot force larger intermediates.
const MAX_PARSE_TERMS: usize = 100_000;

/// Largest exponent accepted on a base with more than one term, where the
/// power must be expanded multiplicatively.
const MAX_SUM_EXPONENT: u32 = 64;

/// Size budget (total numerator plus denominator bits) for an
/// exponentiated constant.
const MAX_CONSTANT_POW_BITS: u64 = 20_000_000;

/// Parse failures, each carrying the byte offset where it was detected.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown symbol `{name}` at offset {offset}")]
    UnknownSymbol { name: String, offset: usize },
}

impl DiffPoly {
    /// Parses `src` over the declared dependent variables `deps`.
    ///
    /// The result is canonical, so `parse` followed by `to_string` is a
    /// normalizing round trip.
    pub fn parse(src: &str, deps: &[&str]) -> Result<DiffPoly, ParseError> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
            deps,
        };
        p.skip_ws();
        let poly = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.syntax("unexpected trailing input"));
        }
        Ok(poly)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    deps: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<DiffPoly, ParseError> {
        let mut acc = DiffPoly::zero();
        let mut first = true;
        loop {
            self.skip_ws();
            let negate = if first {
                let n = self.eat(b'-');
                if !n {
                    self.eat(b'+');
                }
                n
            } else {
                match self.peek() {
                    Some(b'+') => {
                        self.pos += 1;
                        false
                    }
                    Some(b'-') => {
                        self.pos += 1;
                        true
                    }
                    _ => return Ok(acc),
                }
            };
            self.skip_ws();
            let term = self.term()?;
            acc = if negate { &acc - &term } else { &acc + &term };
            if acc.num_terms() > MAX_PARSE_TERMS {
                return Err(self.syntax("expression exceeds the term budget"));
            }
            first = false;
        }
    }

    fn term(&mut self) -> Result<DiffPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                let offset = self.pos;
                let rhs = self.factor()?;
                acc = checked_mul(&acc, &rhs, offset)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<DiffPoly, ParseError> {
        let base = self.primary()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let exp_offset = self.pos;
            let exp = self.uint("exponent")?;
            pow_guarded(base, exp, exp_offset)
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<DiffPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() => self.number(),
            Some(b) if b.is_ascii_alphabetic() => self.symbol(),
            _ => Err(self.syntax("expected a term")),
        }
    }

    /// `p` or `p/q` as an exact rational constant.
    fn number(&mut self) -> Result<DiffPoly, ParseError> {
        let numer = self.bigint()?;
        self.skip_ws();
        if self.eat(b'/') {
            self.skip_ws();
            let den_offset = self.pos;
            let denom = self.bigint()?;
            if denom.is_zero() {
                return Err(ParseError::Syntax {
                    offset: den_offset,
                    message: "zero denominator".into(),
                });
            }
            Ok(DiffPoly::constant(Rational::new(numer, denom)))
        } else {
            Ok(DiffPoly::constant(Rational::from_integer(numer)))
        }
    }

    fn bigint(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected digits"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits verified"))
    }

    fn uint(&mut self, what: &str) -> Result<u32, ParseError> {
        let offset = self.pos;
        let n = self.bigint()?;
        u32::try_from(&n)
            .ok()
            .filter(|n| *n <= MAX_ORDER_INPUT)
            .ok_or(ParseError::Syntax {
                offset,
                message: format!("{what} too large"),
            })
    }

    /// A coordinate or a jet with an optional `_t…x…` suffix.
    fn symbol(&mut self) -> Result<DiffPoly, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .to_owned();
        let suffix = if self.eat(b'_') {
            let mut t_order: u32 = 0;
            let mut x_order: u32 = 0;
            while self.peek() == Some(b't') {
                t_order += 1;
                self.pos += 1;
            }
            while self.peek() == Some(b'x') {
                x_order += 1;
                self.pos += 1;
            }
            if t_order == 0 && x_order == 0 {
                return Err(self.syntax("expected a derivative suffix of t's then x's"));
            }
            if self.peek() == Some(b't') {
                return Err(self.syntax("t-derivatives must precede x-derivatives in a suffix"));
            }
            if t_order > MAX_ORDER_INPUT || x_order > MAX_ORDER_INPUT {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: "derivative order too large".into(),
                });
            }
            Some((t_order, x_order))
        } else {
            None
        };
        match name.as_str() {
            "t" | "x" => {
                if suffix.is_some() {
                    return Err(ParseError::Syntax {
                        offset: start,
                        message: format!("coordinate `{name}` cannot carry a derivative suffix"),
                    });
                }
                let c = if name == "t" { Coord::T } else { Coord::X };
                Ok(DiffPoly::coord(c))
            }
            _ => {
                if !self.deps.contains(&name.as_str()) {
                    return Err(ParseError::UnknownSymbol {
                        name,
                        offset: start,
                    });
                }
                let (t_order, x_order) = suffix.unwrap_or((0, 0));
                Ok(DiffPoly::jet(&name, t_order, x_order))
            }
        }
    }
}

/// Multiplication with pre- and post-conditions that bound intermediate
/// growth: the product of the operands' term counts must stay within the
/// term budget, and no resulting exponent may exceed `MAX_ORDER_INPUT`.
fn checked_mul(a: &DiffPoly, b: &DiffPoly, offset: usize) -> Result<DiffPoly, ParseError> {
    let budget_error = |message: &str| ParseError::Syntax {
        offset,
        message: message.into(),
    };
    if a.num_terms().saturating_mul(b.num_terms()) > MAX_PARSE_TERMS {
        return Err(budget_error("expression exceeds the term budget"));
    }
    let out = a * b;
    for m in out.terms() {
        for (_, e) in m.factors.iter() {
            if *e > MAX_ORDER_INPUT {
                return Err(budget_error("exponent too large"));
            }
        }
    }
    Ok(out)
}

/// Expands `base^exp` under resource guards, so that untrusted input
/// cannot force runaway expansion: a multi-term base accepts exponents up
/// to `MAX_SUM_EXPONENT` only, a constant may not outgrow its bit budget,
/// and jet exponents stay within `MAX_ORDER_INPUT`.
fn pow_guarded(base: DiffPoly, exp: u32, exp_offset: usize) -> Result<DiffPoly, ParseError> {
    let budget_error = |message: String| ParseError::Syntax {
        offset: exp_offset,
        message,
    };
    if base.num_terms() > 1 {
        if exp > MAX_SUM_EXPONENT {
            return Err(budget_error(format!(
                "exponent on a multi-term base may not exceed {MAX_SUM_EXPONENT}"
            )));
        }
        let mut out = DiffPoly::one();
        for _ in 0..exp {
            out = checked_mul(&out, &base, exp_offset)?;
        }
        return Ok(out);
    }
    let Some(term) = base.terms().first() else {
        // The zero polynomial: 0^0 = 1 by the usual empty-product rule.
        return Ok(if exp == 0 {
            DiffPoly::one()
        } else {
            DiffPoly::zero()
        });
    };
    let coeff_bits = term.coeff.numer().bits() + term.coeff.denom().bits();
    if coeff_bits.saturating_mul(u64::from(exp)) > MAX_CONSTANT_POW_BITS {
        return Err(budget_error("constant power exceeds the size budget".into()));
    }
    let coeff = num_traits::pow(term.coeff.clone(), exp as usize);
    let mut factors = Vec::new();
    for (var, e) in term.factors.iter() {
        let raised = u64::from(*e) * u64::from(exp);
        if raised > u64::from(MAX_ORDER_INPUT) {
            return Err(budget_error("exponent too large".into()));
        }
        factors.push((var.clone(), raised as u32));
    }
    Ok(DiffPoly::from_monomials([Monomial::new(
        coeff,
        Factors::from_unsorted(factors),
    )]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetpoly::rat;

    fn u(x: u32) -> DiffPoly {
        DiffPoly::jet("u", 0, x)
    }

    #[test]
    fn parses_the_second_density() {
        let p = DiffPoly::parse("u_xx + (1/6)*u^2", &["u"]).unwrap();
        assert_eq!(p, &u(2) + &u(0).pow(2).scale(&rat(1, 6)));
    }

    #[test]
    fn parses_signs_and_mixed_jets() {
        let p = DiffPoly::parse("-u_txx + 2*t*u_x - (1/2)", &["u"]).unwrap();
        let expect = &(&-&DiffPoly::jet("u", 1, 2)
            + &(&DiffPoly::coord(Coord::T) * &u(1)).scale(&rat(2, 1)))
            - &DiffPoly::constant(rat(1, 2));
        assert_eq!(p, expect);
    }

    #[test]
    fn parses_parenthesized_groups() {
        let p = DiffPoly::parse("(u + u_x)^2", &["u"]).unwrap();
        let s = &u(0) + &u(1);
        assert_eq!(p, &s * &s);
    }

    #[test]
    fn round_trip_is_normalizing() {
        let p = DiffPoly::parse("u_x*u + (1/6)*u^2 + u*u_x", &["u"]).unwrap();
        let printed = p.to_string();
        assert_eq!(printed, "2*u*u_x + (1/6)*u^2");
        assert_eq!(DiffPoly::parse(&printed, &["u"]).unwrap(), p);
    }

    #[test]
    fn reports_offset_of_missing_term() {
        let err = DiffPoly::parse("u_x +", &["u"]).unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                offset: 5,
                message: "expected a term".into()
            }
        );
    }

    #[test]
    fn rejects_unknown_symbols() {
        let err = DiffPoly::parse("u + q_x", &["u"]).unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownSymbol {
                name: "q".into(),
                offset: 4
            }
        );
    }

    #[test]
    fn rejects_suffix_on_coordinates_and_bad_suffixes() {
        assert!(DiffPoly::parse("x_t", &["u"]).is_err());
        assert!(DiffPoly::parse("u_xt", &["u"]).is_err());
        assert!(DiffPoly::parse("u_", &["u"]).is_err());
    }

    #[test]
    fn rejects_juxtaposition_and_trailing_input() {
        assert!(DiffPoly::parse("2u", &["u"]).is_err());
        assert!(DiffPoly::parse("u u", &["u"]).is_err());
        assert!(DiffPoly::parse("u )", &["u"]).is_err());
    }

    #[test]
    fn rejects_zero_denominator() {
        let err = DiffPoly::parse("(1/0)", &["u"]).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 3, .. }));
    }

    #[test]
    fn parses_zero() {
        assert!(DiffPoly::parse("0", &["u"]).unwrap().is_zero());
        assert!(DiffPoly::parse("u - u", &["u"]).unwrap().is_zero());
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        assert_eq!(
            DiffPoly::parse("(u - u)^0", &["u"]).unwrap(),
            DiffPoly::one()
        );
        assert!(DiffPoly::parse("(u - u)^3", &["u"]).unwrap().is_zero());
    }

    #[test]
    fn multi_term_bases_accept_bounded_exponents_only() {
        let ok = DiffPoly::parse("(u + t)^64", &["u"]).unwrap();
        assert_eq!(ok.num_terms(), 65);
        let err = DiffPoly::parse("(u + t)^65", &["u"]).unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                offset: 8,
                message: "exponent on a multi-term base may not exceed 64".into()
            }
        );
    }

    #[test]
    fn products_cannot_push_an_exponent_past_the_cap() {
        assert!(DiffPoly::parse("u^1000000", &["u"]).is_ok());
        let err = DiffPoly::parse("u^1000000 * u", &["u"]).unwrap_err();
        assert!(matches!(
            err,
            ParseError::Syntax { ref message, .. } if message == "exponent too large"
        ));
        let err = DiffPoly::parse("(u^2000)^2000", &["u"]).unwrap_err();
        assert!(matches!(
            err,
            ParseError::Syntax { ref message, .. } if message == "exponent too large"
        ));
    }

    #[test]
    fn constant_powers_are_exact_below_the_bit_budget() {
        let p = DiffPoly::parse("2^100", &["u"]).unwrap();
        let pinned = DiffPoly::parse("1267650600228229401496703205376", &["u"]).unwrap();
        assert_eq!(p, pinned);
        let err = DiffPoly::parse("123456789^1000000", &["u"]).unwrap_err();
        assert!(matches!(
            err,
            ParseError::Syntax { ref message, .. }
                if message == "constant power exceeds the size budget"
        ));
    }

    #[test]
    fn term_count_budget_stops_runaway_expansion() {
        // Seventeen binomials in distinct jets double the term count at
        // each step; the budget trips before the count can cross 10^5.
        let src = (1..=17)
            .map(|i| format!("(u + u_{})", "x".repeat(i)))
            .collect::<Vec<_>>()
            .join(" * ");
        let err = DiffPoly::parse(&src, &["u"]).unwrap_err();
        assert!(matches!(
            err,
            ParseError::Syntax { ref message, .. }
                if message == "expression exceeds the term budget"
        ));
    }

    #[test]
    fn oversized_jet_suffixes_are_rejected() {
        let src = format!("u_{}", "x".repeat(1_000_001));
        let err = DiffPoly::parse(&src, &["u"]).unwrap_err();
        assert!(matches!(
            err,
            ParseError::Syntax { ref message, offset: 0 }
                if message == "derivative order too large"
        ));
    }
}
