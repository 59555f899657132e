//! Differential polynomials on the jet space of dependent variables over the
//! coordinates `t` and `x`.
//!
//! A polynomial is a sum of monomials `c · v1^e1 ⋯ vk^ek` where each `vi` is
//! either a coordinate or a jet `∂_t^a ∂_x^b w`, and `c` is an exact
//! rational. Polynomials are always held in canonical form: factor lists
//! sorted with merged exponents, terms sorted degree-lexicographically, zero
//! coefficients dropped. Equality is therefore structural equality, and all
//! operations are deterministic.
//!
//! On top of the ring operations the module provides the total derivatives
//! `D_t`, `D_x`, evolution substitutions such as `u_t -> -u_xxx - u u_x`,
//! the Euler operator (variational derivative), and integration by parts
//! modulo exact x-derivatives.

mod calculus;
mod jet;
mod json;
mod parse;
mod rational;
mod render;

pub use calculus::{kdv_rhs, substitute_evolution, CalculusError};
pub use jet::{Coord, Jet, JetVar};
pub use parse::ParseError;
pub use rational::{rat, Rational};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use jet::VarDerivative;

/// Largest derivative order or exponent accepted from external input.
pub(crate) const MAX_ORDER_INPUT: u32 = 1_000_000;

/// A sorted factor list `v1^e1 ⋯ vk^ek` with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Factors(Vec<(JetVar, u32)>);

impl Factors {
    pub(crate) fn empty() -> Self {
        Factors(Vec::new())
    }

    pub(crate) fn var(v: JetVar) -> Self {
        Factors(vec![(v, 1)])
    }

    /// Sorts and merges duplicate generators.
    ///
    /// Panics if a merged exponent overflows `u32`; external decoders cap
    /// exponents long before that point.
    pub(crate) fn from_unsorted(mut factors: Vec<(JetVar, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(JetVar, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some((last, exp)) if *last == v => {
                    *exp = exp.checked_add(e).expect("jet exponent overflow");
                }
                _ => merged.push((v, e)),
            }
        }
        Factors(merged)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(JetVar, u32)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree, counting multiplicities.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|(_, e)| u64::from(*e)).sum()
    }

    pub fn exponent_of(&self, v: &JetVar) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    fn mul(&self, other: &Factors) -> Factors {
        let mut all = self.0.clone();
        all.extend_from_slice(&other.0);
        Factors::from_unsorted(all)
    }

    /// Removes `count` powers of `v`. Caller guarantees they are present.
    fn without(&self, v: &JetVar, count: u32) -> Factors {
        let mut out = self.0.clone();
        if let Some(i) = out.iter().position(|(w, _)| w == v) {
            if out[i].1 <= count {
                out.remove(i);
            } else {
                out[i].1 -= count;
            }
        }
        Factors(out)
    }
}

impl Ord for Factors {
    /// Degree-lexicographic: total degree first, then the sorted factor
    /// lists compared entry by entry.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Factors {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One term of a differential polynomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Monomial {
    pub coeff: Rational,
    pub factors: Factors,
}

impl Monomial {
    pub fn new(coeff: Rational, factors: Factors) -> Self {
        Monomial { coeff, factors }
    }
}

/// A differential polynomial in canonical form.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DiffPoly {
    terms: Vec<Monomial>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        DiffPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            DiffPoly::zero()
        } else {
            DiffPoly {
                terms: vec![Monomial::new(c, Factors::empty())],
            }
        }
    }

    pub fn integer(n: i64) -> Self {
        DiffPoly::constant(rat(n, 1))
    }

    pub fn var(v: JetVar) -> Self {
        DiffPoly {
            terms: vec![Monomial::new(Rational::one(), Factors::var(v))],
        }
    }

    /// The jet `∂_t^a ∂_x^b sym` as a polynomial.
    pub fn jet(sym: &str, t_order: u32, x_order: u32) -> Self {
        DiffPoly::var(JetVar::jet(sym, t_order, x_order))
    }

    pub fn coord(c: Coord) -> Self {
        DiffPoly::var(JetVar::coord(c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Canonicalizing constructor: merges duplicate factor lists, drops
    /// zeros, sorts degree-lexicographically.
    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(monomials: I) -> Self {
        let mut acc: BTreeMap<Factors, Rational> = BTreeMap::new();
        for m in monomials {
            if m.coeff.is_zero() {
                continue;
            }
            let entry = acc.entry(m.factors).or_insert_with(Rational::zero);
            *entry += m.coeff;
        }
        DiffPoly {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(f, c)| Monomial::new(c, f))
                .collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|m| Monomial::new(&m.coeff * k, m.factors.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = DiffPoly::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    fn add_ref(&self, other: &DiffPoly) -> DiffPoly {
        // Merge of two canonically sorted term lists.
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].factors.cmp(&other.terms[j].factors) {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].coeff + &other.terms[j].coeff;
                    if !c.is_zero() {
                        out.push(Monomial::new(c, self.terms[i].factors.clone()));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        DiffPoly { terms: out }
    }

    fn mul_ref(&self, other: &DiffPoly) -> DiffPoly {
        let mut acc: BTreeMap<Factors, Rational> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let c = &a.coeff * &b.coeff;
                let f = a.factors.mul(&b.factors);
                let entry = acc.entry(f).or_insert_with(Rational::zero);
                *entry += c;
            }
        }
        DiffPoly {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(f, c)| Monomial::new(c, f))
                .collect(),
        }
    }

    /// Total derivative `D_t` or `D_x`, acting by the chain rule over jets
    /// and by `D_t t = D_x x = 1` on the coordinates.
    pub fn total_derivative(&self, wrt: Coord) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for m in &self.terms {
            for (idx, (v, e)) in m.factors.iter().enumerate() {
                let rest = Factors(
                    m.factors
                        .0
                        .iter()
                        .enumerate()
                        .filter_map(|(k, f)| {
                            if k == idx {
                                (*e > 1).then(|| (f.0.clone(), f.1 - 1))
                            } else {
                                Some(f.clone())
                            }
                        })
                        .collect(),
                );
                let coeff = &m.coeff * rat(i64::from(*e), 1);
                let piece = match v.derivative(wrt) {
                    VarDerivative::Zero => continue,
                    VarDerivative::One => DiffPoly {
                        terms: vec![Monomial::new(coeff, rest)],
                    },
                    VarDerivative::Var(dv) => DiffPoly {
                        terms: vec![Monomial::new(coeff, rest.mul(&Factors::var(dv)))],
                    },
                };
                out = out.add_ref(&piece);
            }
        }
        out
    }

    /// Formal partial derivative with respect to a single generator.
    pub fn partial_derivative(&self, v: &JetVar) -> DiffPoly {
        let mut out = Vec::new();
        for m in &self.terms {
            let e = m.factors.exponent_of(v);
            if e == 0 {
                continue;
            }
            out.push(Monomial::new(
                &m.coeff * rat(i64::from(e), 1),
                m.factors.without(v, 1),
            ));
        }
        DiffPoly::from_monomials(out)
    }

    /// Replaces every occurrence of the generator `v` by `rep`.
    pub fn substitute_var(&self, v: &JetVar, rep: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for m in &self.terms {
            let e = m.factors.exponent_of(v);
            if e == 0 {
                out = out.add_ref(&DiffPoly {
                    terms: vec![m.clone()],
                });
                continue;
            }
            let rest = DiffPoly {
                terms: vec![Monomial::new(m.coeff.clone(), m.factors.without(v, e))],
            };
            out = out.add_ref(&rest.mul_ref(&rep.pow(e)));
        }
        out
    }

    pub fn contains_coord(&self, c: Coord) -> bool {
        let target = JetVar::coord(c);
        self.terms
            .iter()
            .any(|m| m.factors.iter().any(|(v, _)| *v == target))
    }

    /// Iterator over every distinct generator appearing in the polynomial.
    pub fn vars(&self) -> impl Iterator<Item = &JetVar> {
        self.terms.iter().flat_map(|m| m.factors.iter().map(|(v, _)| v))
    }

    /// True if some jet of `sym` carries a t-derivative.
    pub fn has_t_jets_of(&self, sym: &str) -> bool {
        self.vars()
            .filter_map(JetVar::as_jet)
            .any(|j| j.sym == sym && j.t_order > 0)
    }

    /// True if any dependent variable carries a t-derivative.
    pub fn has_t_jets(&self) -> bool {
        self.vars()
            .filter_map(JetVar::as_jet)
            .any(|j| j.t_order > 0)
    }

    /// Largest x-order among jets of `sym`, if any appear.
    pub fn max_x_order_of(&self, sym: &str) -> Option<u32> {
        self.vars()
            .filter_map(JetVar::as_jet)
            .filter(|j| j.sym == sym)
            .map(|j| j.x_order)
            .max()
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        self.add_ref(rhs)
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        self.add_ref(&-rhs)
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        self.mul_ref(rhs)
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|m| Monomial::new(-m.coeff.clone(), m.factors.clone()))
                .collect(),
        }
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: DiffPoly) -> DiffPoly {
        &self + &rhs
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: DiffPoly) -> DiffPoly {
        &self - &rhs
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: DiffPoly) -> DiffPoly {
        &self * &rhs
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

/// True when every monomial of a polynomial in jets of `u` alone has scaling
/// weight `weight`, counting `u_{x^k}` with weight `k + 2`.
///
/// Returns false if the polynomial mentions coordinates, t-jets, or other
/// dependent variables, for which the weight convention is undefined.
pub fn is_weight_homogeneous(p: &DiffPoly, sym: &str, weight: u64) -> bool {
    if p.is_zero() {
        return true;
    }
    p.terms().iter().all(|m| {
        let mut w: u64 = 0;
        for (v, e) in m.factors.iter() {
            match v.as_jet() {
                Some(j) if j.sym == sym && j.t_order == 0 => {
                    w += u64::from(*e) * (u64::from(j.x_order) + 2);
                }
                _ => return false,
            }
        }
        w == weight
    })
}
