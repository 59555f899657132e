//! Operator-valued graded calculus.
//!
//! Builds the noncommutative algebra of [`Operator`]s (polynomial
//! coefficients times powers of ∂), extends it by the odd generators τ and
//! ξ into [`GradedForm`]s, equips the result with the anticommuting
//! degree-raising maps `d` and `delta`, and carries out the gauge
//! computation whose flatness condition is the KdV equation.

mod form;
mod gauge;
mod json;
mod operator;

pub use form::{FormError, GradedForm};
pub use gauge::{
    curvature_scalar, flatness_reduce, flatness_rhs, gauge_curvature, gauge_potential,
    kdv_flow_residual, kdv_residual_from_potential, potential_to_u, reduce_on_shell, GaugeError,
};
pub use operator::Operator;
