//! Serde wire format for polynomials.
//!
//! A polynomial is `{"terms": [...]}`; each term carries a `coeff` string
//! (`"p"` or `"p/q"`) and a `factors` array of `{"sym", "t", "x", "pow"}`
//! objects where `t` and `x` default to 0 and `pow` to 1. The coordinates
//! serialize as `{"sym": "t"}` and `{"sym": "x"}` and may not carry
//! derivative orders. Decoding is lenient about order and duplicates — the
//! result is always canonical — but rejects unknown fields, malformed
//! coefficients, and derivative orders or exponents beyond 10^6.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::jet::Coord;
use super::rational::{format_rational, parse_rational};
use super::{DiffPoly, Factors, JetVar, Monomial, MAX_ORDER_INPUT};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyJson {
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    coeff: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    factors: Vec<FactorJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorJson {
    sym: String,
    #[serde(default, skip_serializing_if = "is_zero")]
    t: u32,
    #[serde(default, skip_serializing_if = "is_zero")]
    x: u32,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pow: u32,
}

fn is_zero(n: &u32) -> bool {
    *n == 0
}

fn one() -> u32 {
    1
}

fn is_one(n: &u32) -> bool {
    *n == 1
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric())
}

impl FactorJson {
    fn of(var: &JetVar, pow: u32) -> FactorJson {
        let (sym, t, x) = match var {
            JetVar::Coord(c) => (c.name().to_owned(), 0, 0),
            JetVar::Jet(j) => (j.sym.clone(), j.t_order, j.x_order),
        };
        FactorJson { sym, t, x, pow }
    }

    fn decode<E: serde::de::Error>(&self) -> Result<(JetVar, u32), E> {
        if !is_identifier(&self.sym) {
            return Err(E::custom(format!("invalid symbol `{}`", self.sym)));
        }
        if self.t > MAX_ORDER_INPUT || self.x > MAX_ORDER_INPUT || self.pow > MAX_ORDER_INPUT {
            return Err(E::custom("derivative order or exponent too large"));
        }
        let var = match self.sym.as_str() {
            "t" | "x" => {
                if self.t != 0 || self.x != 0 {
                    return Err(E::custom(format!(
                        "coordinate `{}` cannot carry derivative orders",
                        self.sym
                    )));
                }
                let c = if self.sym == "t" { Coord::T } else { Coord::X };
                JetVar::coord(c)
            }
            _ => JetVar::jet(&self.sym, self.t, self.x),
        };
        Ok((var, self.pow))
    }
}

impl Serialize for DiffPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .terms()
            .iter()
            .map(|m| TermJson {
                coeff: format_rational(&m.coeff),
                factors: m
                    .factors
                    .iter()
                    .map(|(v, e)| FactorJson::of(v, *e))
                    .collect(),
            })
            .collect();
        PolyJson { terms }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DiffPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = PolyJson::deserialize(deserializer)?;
        let mut monomials = Vec::with_capacity(wire.terms.len());
        for term in &wire.terms {
            let coeff = parse_rational(&term.coeff)
                .map_err(|e| D::Error::custom(format!("bad coefficient `{}`: {e}", term.coeff)))?;
            let factors = term
                .factors
                .iter()
                .map(FactorJson::decode)
                .collect::<Result<Vec<_>, D::Error>>()?;
            monomials.push(Monomial::new(coeff, merge_factors(factors)?));
        }
        Ok(DiffPoly::from_monomials(monomials))
    }
}

/// Merges duplicate factors from the wire — `u * u^2` is legal input and
/// becomes `u^3` — while keeping the summed exponent within the same cap
/// that applies to a single factor, so hostile duplication cannot push an
/// exponent past `MAX_ORDER_INPUT` (let alone overflow).
fn merge_factors<E: serde::de::Error>(mut factors: Vec<(JetVar, u32)>) -> Result<Factors, E> {
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(JetVar, u32)> = Vec::with_capacity(factors.len());
    for (v, e) in factors {
        match merged.last_mut() {
            Some((last, exp)) if *last == v => {
                *exp = exp
                    .checked_add(e)
                    .filter(|total| *total <= MAX_ORDER_INPUT)
                    .ok_or_else(|| E::custom("derivative order or exponent too large"))?;
            }
            _ => merged.push((v, e)),
        }
    }
    Ok(Factors::from_unsorted(merged))
}

impl DiffPoly {
    /// Decodes a polynomial from its JSON wire form.
    pub fn from_json_str(src: &str) -> Result<DiffPoly, serde_json::Error> {
        serde_json::from_str(src)
    }

    /// Encodes the canonical form as compact JSON.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization cannot fail")
    }
}
