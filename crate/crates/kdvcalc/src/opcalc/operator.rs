//! Polynomial-coefficient powers of ∂ = d/dx.
//!
//! An [`Operator`] is a finite sum `Σ aₙ ∂ⁿ` whose coefficients are
//! differential polynomials. Composition follows from the Leibniz rule,
//!
//! ```text
//! ∂^m · b = Σ_{k=0}^{m} C(m,k) (D_x^k b) ∂^{m-k},
//! ```
//!
//! which makes the set an associative (noncommutative) algebra. The map
//! [`Operator::dt`] differentiates coefficients in t; as an operator
//! identity it is the commutator `[∂_t, A]`, and it is a derivation of the
//! product.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::jetpoly::{Coord, DiffPoly, Rational};

/// A differential operator `Σ aₙ ∂ⁿ` in canonical form: the map holds only
/// nonzero coefficients, keyed by the power of ∂.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Operator {
    ops: BTreeMap<u32, DiffPoly>,
}

impl Operator {
    pub fn zero() -> Self {
        Operator::default()
    }

    /// The multiplicative identity `1·∂⁰`.
    pub fn identity() -> Self {
        Operator::d_power(0)
    }

    /// `∂ⁿ` with unit coefficient.
    pub fn d_power(n: u32) -> Self {
        Operator::monomial(n, DiffPoly::one())
    }

    /// A multiplication operator: `p·∂⁰`.
    pub fn from_poly(p: DiffPoly) -> Self {
        Operator::monomial(0, p)
    }

    /// `coeff·∂ⁿ`.
    pub fn monomial(n: u32, coeff: DiffPoly) -> Self {
        let mut ops = BTreeMap::new();
        if !coeff.is_zero() {
            ops.insert(n, coeff);
        }
        Operator { ops }
    }

    pub(crate) fn from_map(ops: BTreeMap<u32, DiffPoly>) -> Self {
        let mut ops = ops;
        ops.retain(|_, c| !c.is_zero());
        Operator { ops }
    }

    pub fn is_zero(&self) -> bool {
        self.ops.is_empty()
    }

    /// The coefficient of `∂ⁿ` (zero when absent).
    pub fn coeff(&self, n: u32) -> DiffPoly {
        self.ops.get(&n).cloned().unwrap_or_else(DiffPoly::zero)
    }

    /// Nonzero entries in increasing powers of ∂.
    pub fn entries(&self) -> impl Iterator<Item = (u32, &DiffPoly)> {
        self.ops.iter().map(|(n, c)| (*n, c))
    }

    /// The largest power of ∂ present.
    pub fn max_power(&self) -> Option<u32> {
        self.ops.keys().next_back().copied()
    }

    pub fn scale(&self, k: &Rational) -> Operator {
        self.map_coeffs(|c| c.scale(k))
    }

    /// Applies `f` to every coefficient and re-canonicalizes.
    pub fn map_coeffs(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> Operator {
        Operator::from_map(self.ops.iter().map(|(n, c)| (*n, f(c))).collect())
    }

    /// Coefficient-wise total t-derivative; as an operator this is the
    /// commutator `[∂_t, self]`.
    pub fn dt(&self) -> Operator {
        self.map_coeffs(|c| c.total_derivative(Coord::T))
    }

    /// Applies the operator to a differential polynomial:
    /// `(Σ aₙ ∂ⁿ)(f) = Σ aₙ D_xⁿ f`.
    pub fn apply(&self, f: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (n, a) in &self.ops {
            let mut df = f.clone();
            for _ in 0..*n {
                df = df.total_derivative(Coord::X);
            }
            out = &out + &(a * &df);
        }
        out
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(a: &Operator, b: &Operator) -> Operator {
        &(a * b) - &(b * a)
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        let mut ops = self.ops.clone();
        for (n, c) in &rhs.ops {
            let sum = match ops.get(n) {
                Some(existing) => existing + c,
                None => c.clone(),
            };
            ops.insert(*n, sum);
        }
        Operator::from_map(ops)
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self + &-rhs
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.map_coeffs(|c| -c)
    }
}

impl Mul for &Operator {
    type Output = Operator;

    /// Operator composition via the Leibniz expansion of `∂^m · b`.
    fn mul(self, rhs: &Operator) -> Operator {
        let mut ops: BTreeMap<u32, DiffPoly> = BTreeMap::new();
        for (m, a) in &self.ops {
            for (n, b) in &rhs.ops {
                let mut dkb = b.clone();
                for k in 0..=*m {
                    let binom = num_integer::binomial(BigInt::from(*m), BigInt::from(k));
                    let piece = (a * &dkb).scale(&Rational::from_integer(binom));
                    let power = m
                        .checked_sub(k)
                        .and_then(|r| r.checked_add(*n))
                        .expect("operator power overflow");
                    let entry = ops.entry(power).or_insert_with(DiffPoly::zero);
                    *entry = &*entry + &piece;
                    if k < *m {
                        dkb = dkb.total_derivative(Coord::X);
                    }
                }
            }
        }
        Operator::from_map(ops)
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        &self + &rhs
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        &self - &rhs
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        &self * &rhs
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        -&self
    }
}

impl fmt::Display for Operator {
    /// Entries print in increasing powers of ∂, written `d_x`, with the
    /// coefficient parenthesized unless it is a single monomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (n, c)) in self.entries().enumerate() {
            let rendered = render_entry(n, c);
            if i == 0 {
                f.write_str(&rendered)?;
            } else if let Some(rest) = rendered.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {rendered}")?;
            }
        }
        Ok(())
    }
}

fn render_entry(n: u32, c: &DiffPoly) -> String {
    let d = match n {
        0 => return c.to_string(),
        1 => "d_x".to_string(),
        _ => format!("d_x^{n}"),
    };
    if c == &DiffPoly::one() {
        d
    } else if c == &-&DiffPoly::one() {
        format!("-{d}")
    } else if c.num_terms() == 1 {
        format!("{c}*{d}")
    } else {
        format!("({c})*{d}")
    }
}

impl Operator {
    /// LaTeX rendering with `\partial_x^{n}`.
    pub fn latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let pieces: Vec<String> = self
            .entries()
            .map(|(n, c)| {
                let d = match n {
                    0 => return c.latex(),
                    1 => "\\partial_x".to_string(),
                    _ => format!("\\partial_x^{{{n}}}"),
                };
                if c == &DiffPoly::one() {
                    d
                } else if c == &-&DiffPoly::one() {
                    format!("-{d}")
                } else if c.num_terms() == 1 {
                    format!("{} {d}", c.latex())
                } else {
                    format!("\\left({}\\right) {d}", c.latex())
                }
            })
            .collect();
        let mut out = String::new();
        for (i, piece) in pieces.iter().enumerate() {
            if i == 0 {
                out.push_str(piece);
            } else if let Some(rest) = piece.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(piece);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetpoly::rat;

    fn u(x: u32) -> DiffPoly {
        DiffPoly::jet("u", 0, x)
    }

    fn op_u() -> Operator {
        Operator::from_poly(u(0))
    }

    #[test]
    fn composition_expands_leibniz() {
        // ∂² · u = u_xx + 2 u_x ∂ + u ∂²
        let p = &Operator::d_power(2) * &op_u();
        assert_eq!(p.coeff(0), u(2));
        assert_eq!(p.coeff(1), u(1).scale(&rat(2, 1)));
        assert_eq!(p.coeff(2), u(0));
        assert_eq!(p.max_power(), Some(2));
    }

    #[test]
    fn multiplication_operators_commute_with_scalars() {
        // u · ∂ vs ∂ · u differ by the multiplication by u_x.
        let left = &op_u() * &Operator::d_power(1);
        let right = &Operator::d_power(1) * &op_u();
        let diff = &right - &left;
        assert_eq!(diff, Operator::from_poly(u(1)));
    }

    #[test]
    fn composition_is_associative() {
        let a = &Operator::monomial(1, u(1)) + &Operator::from_poly(u(0));
        let b = &Operator::d_power(2) + &Operator::from_poly(u(2));
        let c = &Operator::monomial(1, u(0));
        assert_eq!(&(&a * &b) * c, &a * &(&b * c));
    }

    #[test]
    fn dt_is_a_derivation_of_the_product() {
        let a = &Operator::monomial(2, u(1)) + &Operator::from_poly(u(0));
        let b = Operator::monomial(1, u(2));
        let lhs = (&a * &b).dt();
        let rhs = &(&a.dt() * &b) + &(&a * &b.dt());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutator_with_cubic_power() {
        // [∂³, u] = u_xxx + 3 u_xx ∂ + 3 u_x ∂²
        let c = Operator::commutator(&Operator::d_power(3), &op_u());
        assert_eq!(c.coeff(0), u(3));
        assert_eq!(c.coeff(1), u(2).scale(&rat(3, 1)));
        assert_eq!(c.coeff(2), u(1).scale(&rat(3, 1)));
        assert!(c.coeff(3).is_zero());
    }

    #[test]
    fn apply_differentiates() {
        // (∂² + u∂)(u) = u_xx + u u_x
        let a = &Operator::d_power(2) + &Operator::monomial(1, u(0));
        assert_eq!(a.apply(&u(0)), &u(2) + &(&u(0) * &u(1)));
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let a = Operator::monomial(2, u(0));
        let b = &a - &a;
        assert!(b.is_zero());
        assert_eq!(b, Operator::zero());
        assert_eq!(Operator::monomial(3, DiffPoly::zero()), Operator::zero());
    }

    #[test]
    fn display_conventions() {
        let a = &(&Operator::from_poly(u(1)) + &Operator::monomial(1, u(0).scale(&rat(2, 1))))
            + &Operator::d_power(2);
        assert_eq!(a.to_string(), "u_x + 2*u*d_x + d_x^2");
        let b = &Operator::monomial(1, &u(0) + &u(2)) - &Operator::d_power(3);
        assert_eq!(b.to_string(), "(u + u_xx)*d_x - d_x^3");
        assert_eq!(Operator::zero().to_string(), "0");
    }

    #[test]
    fn latex_conventions() {
        let a = &Operator::from_poly(u(1).scale(&rat(1, 2))) + &Operator::monomial(2, u(0));
        assert_eq!(a.latex(), "\\frac{1}{2} u_{x} + u \\partial_x^{2}");
    }
}
