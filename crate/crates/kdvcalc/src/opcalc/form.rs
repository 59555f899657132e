//! Graded forms over the operator algebra, and the maps `d` and `delta`.
//!
//! The algebra is generated over [`Operator`] by two odd symbols τ and ξ
//! subject to τ² = ξ² = 0 and τξ = -ξτ, so a general element is
//!
//! ```text
//! degree 0:  a            degree 1:  f·τ + h·ξ        degree 2:  w·τξ
//! ```
//!
//! with operator components. Two anticommuting degree-raising maps act on it.
//! On a zero-form `f`,
//!
//! ```text
//! d f     = (D_t f + 4 [∂³, f]) τ  -  6 [∂², f] ξ
//! delta f = -(1/2) [∂², f] τ  +  [∂, f] ξ
//! ```
//!
//! and both extend to one-forms as graded derivations: writing
//! `d f = (P f) τ + (Q f) ξ`, the extension is
//! `d(f τ + h ξ) = (P h - Q f) τξ`. Everything of degree above two is
//! truncated to zero, kept as a zero two-form so iterated maps stay typed.
//! The identities d² = δ² = dδ + δd = 0 hold identically — no equation of
//! motion is imposed — and are pinned by the tests below.

use std::fmt;

use thiserror::Error;

use super::operator::Operator;
use crate::jetpoly::{rat, Rational};

/// Failures of the graded arithmetic.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum FormError {
    #[error("cannot add a degree-{left} form to a degree-{right} form")]
    DegreeMismatch { left: u8, right: u8 },
    #[error("product of degree-{left} and degree-{right} forms exceeds the top degree 2")]
    DegreeOverflow { left: u8, right: u8 },
}

/// A homogeneous element of the graded algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GradedForm {
    ZeroForm(Operator),
    OneForm { tau: Operator, xi: Operator },
    TwoForm(Operator),
}

impl GradedForm {
    /// The zero element in the given degree (0, 1, or 2).
    pub fn zero(degree: u8) -> GradedForm {
        match degree {
            0 => GradedForm::ZeroForm(Operator::zero()),
            1 => GradedForm::OneForm {
                tau: Operator::zero(),
                xi: Operator::zero(),
            },
            2 => GradedForm::TwoForm(Operator::zero()),
            _ => panic!("no forms above degree 2"),
        }
    }

    /// The basis one-form τ.
    pub fn tau() -> GradedForm {
        GradedForm::OneForm {
            tau: Operator::identity(),
            xi: Operator::zero(),
        }
    }

    /// The basis one-form ξ.
    pub fn xi() -> GradedForm {
        GradedForm::OneForm {
            tau: Operator::zero(),
            xi: Operator::identity(),
        }
    }

    /// The basis two-form τξ.
    pub fn tau_xi() -> GradedForm {
        GradedForm::TwoForm(Operator::identity())
    }

    pub fn degree(&self) -> u8 {
        match self {
            GradedForm::ZeroForm(_) => 0,
            GradedForm::OneForm { .. } => 1,
            GradedForm::TwoForm(_) => 2,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            GradedForm::ZeroForm(a) => a.is_zero(),
            GradedForm::OneForm { tau, xi } => tau.is_zero() && xi.is_zero(),
            GradedForm::TwoForm(w) => w.is_zero(),
        }
    }

    pub fn scale(&self, k: &Rational) -> GradedForm {
        self.map_ops(|a| a.scale(k))
    }

    pub fn neg(&self) -> GradedForm {
        self.map_ops(|a| -a)
    }

    /// Applies `f` to every operator component.
    pub fn map_ops(&self, f: impl Fn(&Operator) -> Operator) -> GradedForm {
        match self {
            GradedForm::ZeroForm(a) => GradedForm::ZeroForm(f(a)),
            GradedForm::OneForm { tau, xi } => GradedForm::OneForm {
                tau: f(tau),
                xi: f(xi),
            },
            GradedForm::TwoForm(w) => GradedForm::TwoForm(f(w)),
        }
    }

    pub fn add(&self, rhs: &GradedForm) -> Result<GradedForm, FormError> {
        match (self, rhs) {
            (GradedForm::ZeroForm(a), GradedForm::ZeroForm(b)) => Ok(GradedForm::ZeroForm(a + b)),
            (
                GradedForm::OneForm { tau, xi },
                GradedForm::OneForm {
                    tau: tau2,
                    xi: xi2,
                },
            ) => Ok(GradedForm::OneForm {
                tau: tau + tau2,
                xi: xi + xi2,
            }),
            (GradedForm::TwoForm(a), GradedForm::TwoForm(b)) => Ok(GradedForm::TwoForm(a + b)),
            _ => Err(FormError::DegreeMismatch {
                left: self.degree(),
                right: rhs.degree(),
            }),
        }
    }

    pub fn sub(&self, rhs: &GradedForm) -> Result<GradedForm, FormError> {
        self.add(&rhs.neg())
    }

    /// The graded product. τ and ξ square to zero and anticommute, so the
    /// only surviving cross term in a product of one-forms is
    /// `(f τ + h ξ)(f' τ + h' ξ) = (f h' - h f') τξ`.
    pub fn mul(&self, rhs: &GradedForm) -> Result<GradedForm, FormError> {
        use GradedForm::*;
        match (self, rhs) {
            (ZeroForm(a), ZeroForm(b)) => Ok(ZeroForm(a * b)),
            (ZeroForm(a), OneForm { tau, xi }) => Ok(OneForm {
                tau: a * tau,
                xi: a * xi,
            }),
            (OneForm { tau, xi }, ZeroForm(b)) => Ok(OneForm {
                tau: tau * b,
                xi: xi * b,
            }),
            (ZeroForm(a), TwoForm(w)) => Ok(TwoForm(a * w)),
            (TwoForm(w), ZeroForm(a)) => Ok(TwoForm(w * a)),
            (
                OneForm { tau: f, xi: h },
                OneForm {
                    tau: f2,
                    xi: h2,
                },
            ) => Ok(TwoForm(&(f * h2) - &(h * f2))),
            _ => Err(FormError::DegreeOverflow {
                left: self.degree(),
                right: rhs.degree(),
            }),
        }
    }

    /// The degree-raising map `d`.
    pub fn d(&self) -> GradedForm {
        self.raise(p_d, q_d)
    }

    /// The degree-raising map `delta`.
    pub fn delta(&self) -> GradedForm {
        self.raise(p_delta, q_delta)
    }

    fn raise(&self, p: fn(&Operator) -> Operator, q: fn(&Operator) -> Operator) -> GradedForm {
        match self {
            GradedForm::ZeroForm(a) => GradedForm::OneForm {
                tau: p(a),
                xi: q(a),
            },
            GradedForm::OneForm { tau, xi } => GradedForm::TwoForm(&p(xi) - &q(tau)),
            GradedForm::TwoForm(_) => GradedForm::TwoForm(Operator::zero()),
        }
    }
}

/// τ-component of `d` on zero-forms: `D_t f + 4 [∂³, f]`.
fn p_d(f: &Operator) -> Operator {
    let ad = Operator::commutator(&Operator::d_power(3), f);
    &f.dt() + &ad.scale(&rat(4, 1))
}

/// ξ-component of `d` on zero-forms: `-6 [∂², f]`.
fn q_d(f: &Operator) -> Operator {
    Operator::commutator(&Operator::d_power(2), f).scale(&rat(-6, 1))
}

/// τ-component of `delta` on zero-forms: `-(1/2) [∂², f]`.
fn p_delta(f: &Operator) -> Operator {
    Operator::commutator(&Operator::d_power(2), f).scale(&rat(-1, 2))
}

/// ξ-component of `delta` on zero-forms: `[∂, f]`.
fn q_delta(f: &Operator) -> Operator {
    Operator::commutator(&Operator::d_power(1), f)
}

impl fmt::Display for GradedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        match self {
            GradedForm::ZeroForm(a) => write!(f, "{a}"),
            GradedForm::OneForm { tau, xi } => {
                let mut wrote = false;
                if !tau.is_zero() {
                    write!(f, "({tau})*tau")?;
                    wrote = true;
                }
                if !xi.is_zero() {
                    if wrote {
                        f.write_str(" + ")?;
                    }
                    write!(f, "({xi})*xi")?;
                }
                Ok(())
            }
            GradedForm::TwoForm(w) => write!(f, "({w})*tau*xi"),
        }
    }
}

impl GradedForm {
    pub fn latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        match self {
            GradedForm::ZeroForm(a) => a.latex(),
            GradedForm::OneForm { tau, xi } => {
                let mut parts = Vec::new();
                if !tau.is_zero() {
                    parts.push(format!("\\left({}\\right) \\tau", tau.latex()));
                }
                if !xi.is_zero() {
                    parts.push(format!("\\left({}\\right) \\xi", xi.latex()));
                }
                parts.join(" + ")
            }
            GradedForm::TwoForm(w) => format!("\\left({}\\right) \\tau \\xi", w.latex()),
        }
    }
}
