//! Exact symbolic calculus for the KdV equation.
//!
//! The crate provides, in layers:
//!
//! * [`jetpoly`] — differential polynomials over the rationals in the jet
//!   variables of dependent symbols, with total derivatives, evolution
//!   substitution, the Euler operator, and integration by parts.
//! * [`opcalc`] — polynomial-coefficient powers of ∂ = d/dx, the graded
//!   forms built on them, the maps `d` and `delta` of bidegree (0,1) and
//!   (1,0), and the gauge computation that recovers the KdV equation as a
//!   flatness condition.
//! * [`densities`] — the Gardner-type recursion producing an infinite
//!   sequence of conserved densities and fluxes for KdV.
//! * [`conserve`] — exact verification that the densities are conserved,
//!   and comparison against a frozen reference catalog.
//! * [`tower`] — the abstract iteration scheme underlying the recursion,
//!   with machine-checked side conditions at every step.
//!
//! All arithmetic is exact big-rational arithmetic; nothing is floating
//! point, and every identity the crate claims is checked structurally.

pub mod conserve;
pub mod densities;
pub mod jetpoly;
pub mod opcalc;
pub mod random;
pub mod suite;
pub mod tower;
