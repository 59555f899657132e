//! The gauge step: a potential one-form built from a single symbol `v`
//! recovers the KdV equation as a flatness condition.
//!
//! With `A = delta v` (a one-form with operator components), the curvature
//!
//! ```text
//! F = d A + A·A
//! ```
//!
//! collapses to a pure multiplication operator on the τξ component,
//!
//! ```text
//! F = (v_tx + v_xxxx - v_x v_xx) · ∂⁰ · τξ,
//! ```
//!
//! so `F = 0` is exactly the scalar equation `v_tx = v_x v_xx - v_xxxx`.
//! Writing `u = -v_x` turns that equation into `u_t = -u_xxx - u u_x`.
//! [`curvature_scalar`] certifies the collapse (no ∂-powers above zero
//! survive, and every coefficient dies under the on-shell rewrite) before
//! handing out the scalar; [`potential_to_u`] performs the change of
//! variable on jets.

use thiserror::Error;

use super::form::GradedForm;
use super::operator::Operator;
use crate::jetpoly::{kdv_rhs, substitute_evolution, DiffPoly, Factors, JetVar, Monomial};

/// Failures of the gauge computation on malformed inputs.
#[derive(Clone, PartialEq, Debug, Error)]
pub enum GaugeError {
    #[error("expected a two-form, found degree {degree}")]
    UnexpectedDegree { degree: u8 },
    #[error("curvature carries a ∂^{power} component off shell")]
    HigherOrderTerm { power: u32 },
    #[error("curvature coefficient `{coefficient}` does not vanish on shell")]
    NotFlatOnShell { coefficient: DiffPoly },
    #[error("jet `{jet}` of the potential carries no x-derivative")]
    UnderivedPotential { jet: String },
    #[error("symbol `{sym}` is not a jet of the potential")]
    ForeignSymbol { sym: String },
}

/// The gauge potential `A = delta v`.
pub fn gauge_potential() -> GradedForm {
    GradedForm::ZeroForm(Operator::from_poly(DiffPoly::jet("v", 0, 0))).delta()
}

/// The curvature `F = dA + A·A` of the gauge potential.
pub fn gauge_curvature() -> GradedForm {
    let a = gauge_potential();
    let aa = a.mul(&a).expect("one-forms multiply into degree two");
    a.d().add(&aa).expect("both summands have degree two")
}

/// Right-hand side of the flatness equation solved for `v_tx`.
pub fn flatness_rhs() -> DiffPoly {
    let vx = DiffPoly::jet("v", 0, 1);
    let vxx = DiffPoly::jet("v", 0, 2);
    let vxxxx = DiffPoly::jet("v", 0, 4);
    &(&vx * &vxx) - &vxxxx
}

/// Rewrites every jet `v_{t^a x^b}` with `a ≥ 1`, `b ≥ 1` using the
/// flatness equation, leaving pure t-derivatives of `v` alone.
pub fn flatness_reduce(p: &DiffPoly) -> DiffPoly {
    substitute_evolution(p, "v", 1, &flatness_rhs())
}

/// Applies the on-shell rewrite to every coefficient of a form.
pub fn reduce_on_shell(form: &GradedForm) -> GradedForm {
    form.map_ops(|a| a.map_coeffs(flatness_reduce))
}

/// Extracts the scalar `R` with `F = R·∂⁰·τξ`, certifying on the way that
/// the curvature really is such a pure multiplication operator and that it
/// vanishes under the on-shell rewrite.
pub fn curvature_scalar() -> Result<DiffPoly, GaugeError> {
    let GradedForm::TwoForm(w) = gauge_curvature() else {
        return Err(GaugeError::UnexpectedDegree {
            degree: gauge_curvature().degree(),
        });
    };
    for (power, coeff) in w.entries() {
        if power > 0 && !coeff.is_zero() {
            return Err(GaugeError::HigherOrderTerm { power });
        }
        let reduced = flatness_reduce(coeff);
        if !reduced.is_zero() {
            return Err(GaugeError::NotFlatOnShell {
                coefficient: coeff.clone(),
            });
        }
    }
    Ok(w.coeff(0))
}

/// The change of variable `u = -v_x` on jets: every `v_{t^a x^{b+1}}`
/// becomes `-u_{t^a x^b}`. Jets of `v` without an x-derivative have no
/// image and are rejected, as are jets of any other symbol; coordinates
/// pass through.
pub fn potential_to_u(p: &DiffPoly) -> Result<DiffPoly, GaugeError> {
    let mut monomials = Vec::with_capacity(p.terms().len());
    for term in p.terms() {
        let mut coeff = term.coeff.clone();
        let mut factors = Vec::new();
        for (var, pow) in term.factors.iter() {
            match var {
                JetVar::Coord(_) => factors.push((var.clone(), *pow)),
                JetVar::Jet(j) if j.sym == "v" => {
                    if j.x_order == 0 {
                        return Err(GaugeError::UnderivedPotential { jet: var.to_string() });
                    }
                    if pow % 2 == 1 {
                        coeff = -coeff;
                    }
                    factors.push((JetVar::jet("u", j.t_order, j.x_order - 1), *pow));
                }
                JetVar::Jet(j) => {
                    return Err(GaugeError::ForeignSymbol { sym: j.sym.clone() });
                }
            }
        }
        monomials.push(Monomial::new(coeff, Factors::from_unsorted(factors)));
    }
    Ok(DiffPoly::from_monomials(monomials))
}

/// The full derivation: certify the curvature collapse, change variables
/// with `u = -v_x`, and return the resulting scalar, which is
/// `-(u_t + u_xxx + u u_x)` — the KdV equation up to an overall sign.
pub fn kdv_residual_from_potential() -> Result<DiffPoly, GaugeError> {
    potential_to_u(&curvature_scalar()?)
}

/// `u_t - (-u_xxx - u u_x)`: zero exactly on KdV solutions.
pub fn kdv_flow_residual() -> DiffPoly {
    &DiffPoly::jet("u", 1, 0) - &kdv_rhs()
}
