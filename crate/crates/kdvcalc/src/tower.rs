//! The abstract iteration producing a tower of closed elements.
//!
//! Given degree-raising maps `D` and `𝒟` on a graded module satisfying
//!
//! ```text
//! D² = 0,    𝒟² = 0,    𝒟D = g·D𝒟,
//! ```
//!
//! and a seed χ⁽⁰⁾ with `𝒟χ⁽⁰⁾ = 0`, the chain
//!
//! ```text
//! J⁽ᵐ⁾ = D χ⁽ᵐ⁻¹⁾,    𝒟 χ⁽ᵐ⁾ = J⁽ᵐ⁾
//! ```
//!
//! yields 𝒟-closed elements J⁽ᵐ⁾ for as long as the second equation can be
//! solved. [`tower_iterate`] runs the chain, machine-checking every side
//! condition at every step instead of assuming them: the three identities
//! are probed on the concrete elements that arise, the closedness of each
//! J⁽ᵐ⁾ is verified, and a solver's answer is checked against its
//! contract. A solver returning `None` is not an error — the construction
//! is then recorded as halted at that step, which for the KdV instance
//! below genuinely happens at step 2, where the candidate χ⁽²⁾ misses
//! J⁽²⁾ by `(v_t + v_xxx - (1/2) v_x²)·τ` and τ is not 𝒟-exact in this
//! module.

use thiserror::Error;

use crate::jetpoly::{rat, DiffPoly, Rational};
use crate::opcalc::{gauge_potential, reduce_on_shell, GradedForm, Operator};

/// An element of a graded module on which the tower can run.
pub trait ModuleElement: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn scale(&self, k: &Rational) -> Self;
}

impl ModuleElement for DiffPoly {
    fn is_zero(&self) -> bool {
        DiffPoly::is_zero(self)
    }
    fn scale(&self, k: &Rational) -> Self {
        DiffPoly::scale(self, k)
    }
}

impl ModuleElement for GradedForm {
    fn is_zero(&self) -> bool {
        GradedForm::is_zero(self)
    }
    fn scale(&self, k: &Rational) -> Self {
        GradedForm::scale(self, k)
    }
}

/// Zero elements of different degrees still represent the same module
/// element, so equality is up to joint vanishing.
fn agree<E: ModuleElement>(a: &E, b: &E) -> bool {
    a == b || (a.is_zero() && b.is_zero())
}

/// The pair of degree-raising maps, with the constant `g` of the exchange
/// relation `𝒟D = g·D𝒟`.
pub struct GradedMapPair<E> {
    pub d: Box<dyn Fn(&E) -> E>,
    pub dcal: Box<dyn Fn(&E) -> E>,
    pub g: Rational,
}

impl<E: ModuleElement> GradedMapPair<E> {
    fn probe(&self, x: &E, step: usize) -> Result<(), TowerError> {
        if !(self.d)(&(self.d)(x)).is_zero() {
            return Err(TowerError::ProbeFailed {
                condition: "D^2 = 0",
                step,
            });
        }
        if !(self.dcal)(&(self.dcal)(x)).is_zero() {
            return Err(TowerError::ProbeFailed {
                condition: "Dcal^2 = 0",
                step,
            });
        }
        let lhs = (self.dcal)(&(self.d)(x));
        let rhs = (self.d)(&(self.dcal)(x)).scale(&self.g);
        if !agree(&lhs, &rhs) {
            return Err(TowerError::ProbeFailed {
                condition: "Dcal D = g D Dcal",
                step,
            });
        }
        Ok(())
    }
}

/// Why an iteration stopped early; not a failure of the scheme.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TowerHalt {
    /// The step whose equation `𝒟χ = J` the solver could not solve.
    pub step: usize,
}

/// Violations of the scheme's assumptions, caught by the per-step checks.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum TowerError {
    #[error("the seed is not annihilated by Dcal")]
    SeedNotClosed,
    #[error("identity `{condition}` fails on a step-{step} element")]
    ProbeFailed {
        condition: &'static str,
        step: usize,
    },
    #[error("J at step {step} is not Dcal-closed")]
    CurrentNotClosed { step: usize },
    #[error("solver output at step {step} does not satisfy Dcal(chi) = J")]
    SolverContract { step: usize },
}

/// The verified chain produced by [`tower_iterate`].
#[derive(Clone, PartialEq, Debug)]
pub struct TowerState<E> {
    /// χ⁽⁰⁾, χ⁽¹⁾, … — one fewer than `js` when the iteration halted.
    pub chis: Vec<E>,
    /// J⁽¹⁾, J⁽²⁾, … — every current computed, including an unsolved last
    /// one.
    pub js: Vec<E>,
    /// The grade of the currents: J⁽ᵐ⁾ lives in the grade-`s` component.
    pub s: usize,
    pub halted: Option<TowerHalt>,
}

impl<E: ModuleElement> TowerState<E> {
    /// Re-checks the four defining equations of the stored chain:
    /// `𝒟 χ⁽⁰⁾ = 0`, `J⁽ᵐ⁾ = D χ⁽ᵐ⁻¹⁾`, `𝒟 χ⁽ᵐ⁾ = J⁽ᵐ⁾` for the solved
    /// steps, and `𝒟 J⁽ᵐ⁾ = 0`.
    pub fn verify(&self, maps: &GradedMapPair<E>) -> bool {
        if !(maps.dcal)(&self.chis[0]).is_zero() {
            return false;
        }
        for (i, j) in self.js.iter().enumerate() {
            if !agree(j, &(maps.d)(&self.chis[i])) {
                return false;
            }
            if !(maps.dcal)(j).is_zero() {
                return false;
            }
            if let Some(chi) = self.chis.get(i + 1) {
                if !agree(&(maps.dcal)(chi), j) {
                    return false;
                }
            }
        }
        true
    }
}

/// Runs the iteration for up to `max_steps` steps.
///
/// `solver` receives J⁽ᵐ⁾ and must produce χ⁽ᵐ⁾ with `𝒟χ⁽ᵐ⁾ = J⁽ᵐ⁾`, or
/// `None` if no such element exists in the module — the state then records
/// the halt. Every assumption of the scheme is checked as it is used.
pub fn tower_iterate<E: ModuleElement>(
    maps: &GradedMapPair<E>,
    solver: &mut dyn FnMut(&E) -> Option<E>,
    chi0: E,
    s: usize,
    max_steps: usize,
) -> Result<TowerState<E>, TowerError> {
    if !(maps.dcal)(&chi0).is_zero() {
        return Err(TowerError::SeedNotClosed);
    }
    maps.probe(&chi0, 0)?;
    let mut state = TowerState {
        chis: vec![chi0],
        js: Vec::new(),
        s,
        halted: None,
    };
    for step in 1..=max_steps {
        let j = (maps.d)(state.chis.last().expect("chain is never empty"));
        if !(maps.dcal)(&j).is_zero() {
            return Err(TowerError::CurrentNotClosed { step });
        }
        state.js.push(j.clone());
        let Some(chi) = solver(&j) else {
            state.halted = Some(TowerHalt { step });
            return Ok(state);
        };
        if !agree(&(maps.dcal)(&chi), &j) {
            return Err(TowerError::SolverContract { step });
        }
        maps.probe(&chi, step)?;
        state.chis.push(chi);
    }
    Ok(state)
}

/// The covariant maps of the KdV instance: `D = d + A`, `𝒟 = delta`, with
/// `A` the gauge potential and every result reduced by the flatness
/// equation, on which `D² = 0` holds.
pub fn kdv_map_pair() -> GradedMapPair<GradedForm> {
    GradedMapPair {
        d: Box::new(kdv_covariant_d),
        dcal: Box::new(|w| reduce_on_shell(&w.delta())),
        g: rat(-1, 1),
    }
}

fn kdv_covariant_d(w: &GradedForm) -> GradedForm {
    let dw = w.d();
    match gauge_potential().mul(w) {
        Ok(aw) => reduce_on_shell(&dw.add(&aw).expect("d and A·w share a degree")),
        // Everything above the top degree is truncated away.
        Err(_) => GradedForm::zero(2),
    }
}

/// The seed χ⁽⁰⁾ = 1 of the KdV tower.
pub fn kdv_seed() -> GradedForm {
    GradedForm::ZeroForm(Operator::identity())
}

/// Integrates the ξ-component of a one-form: a candidate χ with the ξ-part
/// of `delta χ` equal to the ξ-part of `j`. `None` when a coefficient is
/// not an exact x-derivative in the polynomial algebra.
pub fn integrate_xi_component(j: &GradedForm) -> Option<GradedForm> {
    let GradedForm::OneForm { xi, .. } = j else {
        return None;
    };
    let mut chi = Operator::zero();
    for (n, b) in xi.entries() {
        let (obstruction, antiderivative) = b.normal_form_mod_dx().ok()?;
        if !obstruction.is_zero() {
            return None;
        }
        chi = &chi + &Operator::monomial(n, antiderivative);
    }
    Some(GradedForm::ZeroForm(chi))
}

/// The solver of the KdV instance: integrate the ξ-component, then accept
/// the candidate only if it reproduces all of `j`. At step 2 the τ-parts
/// disagree by a multiple of τ that is closed but not exact, so the tower
/// honestly halts there.
pub fn kdv_solver(j: &GradedForm) -> Option<GradedForm> {
    let chi = integrate_xi_component(j)?;
    let recovered = reduce_on_shell(&chi.delta());
    if &recovered == j {
        Some(chi)
    } else {
        None
    }
}

/// Runs the KdV tower for `max_steps` steps.
pub fn kdv_tower(max_steps: usize) -> Result<TowerState<GradedForm>, TowerError> {
    tower_iterate(
        &kdv_map_pair(),
        &mut kdv_solver,
        kdv_seed(),
        1,
        max_steps,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetpoly::Coord;
    use crate::opcalc::flatness_reduce;

    fn v(t: u32, x: u32) -> DiffPoly {
        DiffPoly::jet("v", t, x)
    }

    #[test]
    fn kdv_tower_solves_step_one_and_halts_at_step_two() {
        let state = kdv_tower(5).unwrap();
        assert_eq!(state.halted, Some(TowerHalt { step: 2 }));
        assert_eq!(state.chis.len(), 2);
        assert_eq!(state.js.len(), 2);
        // χ⁽¹⁾ = v and J⁽¹⁾ = A.
        assert_eq!(
            state.chis[1],
            GradedForm::ZeroForm(Operator::from_poly(v(0, 0)))
        );
        assert_eq!(state.js[0], gauge_potential());
        assert!(state.verify(&kdv_map_pair()));
    }

    #[test]
    fn the_halt_is_a_genuine_obstruction() {
        // The integration candidate matches the ξ-part of J⁽²⁾ but misses
        // its τ-part by c·τ with c = v_t + v_xxx - (1/2) v_x², an element
        // that is x-constant on shell (D_x c reduces to zero) yet nonzero,
        // and τ is not delta-exact.
        let state = kdv_tower(2).unwrap();
        let j2 = &state.js[1];
        let chi = integrate_xi_component(j2).expect("the ξ-part integrates");
        let gap = j2
            .sub(&reduce_on_shell(&chi.delta()))
            .expect("same degree");
        let c = &(&v(1, 0) + &v(0, 3)) - &v(0, 1).pow(2).scale(&rat(1, 2));
        let expect = GradedForm::OneForm {
            tau: Operator::from_poly(c.clone()),
            xi: Operator::zero(),
        };
        assert_eq!(gap, expect);
        assert!(!c.is_zero());
        assert!(flatness_reduce(&c.total_derivative(Coord::X)).is_zero());
    }

    #[test]
    fn probes_reject_the_unreduced_maps() {
        // Without the on-shell reduction D² = F ≠ 0, and the probe on the
        // seed catches it immediately.
        let raw = GradedMapPair {
            d: Box::new(|w: &GradedForm| {
                let dw = w.d();
                match gauge_potential().mul(w) {
                    Ok(aw) => dw.add(&aw).expect("degrees match"),
                    Err(_) => GradedForm::zero(2),
                }
            }),
            dcal: Box::new(|w: &GradedForm| w.delta()),
            g: rat(-1, 1),
        };
        let err = tower_iterate(&raw, &mut kdv_solver, kdv_seed(), 1, 3).unwrap_err();
        assert_eq!(
            err,
            TowerError::ProbeFailed {
                condition: "D^2 = 0",
                step: 0
            }
        );
    }

    #[test]
    fn seeds_that_are_not_closed_are_rejected() {
        let seed = GradedForm::ZeroForm(Operator::from_poly(v(0, 0)));
        let err = tower_iterate(&kdv_map_pair(), &mut kdv_solver, seed, 1, 3).unwrap_err();
        assert_eq!(err, TowerError::SeedNotClosed);
    }

    #[test]
    fn solver_contract_violations_are_caught() {
        let mut lying_solver =
            |_: &GradedForm| Some(GradedForm::ZeroForm(Operator::from_poly(v(0, 1))));
        let err =
            tower_iterate(&kdv_map_pair(), &mut lying_solver, kdv_seed(), 1, 3).unwrap_err();
        assert_eq!(err, TowerError::SolverContract { step: 1 });
    }

    #[test]
    fn trivial_maps_run_the_full_ladder() {
        let maps: GradedMapPair<DiffPoly> = GradedMapPair {
            d: Box::new(|_| DiffPoly::zero()),
            dcal: Box::new(|_| DiffPoly::zero()),
            g: rat(1, 1),
        };
        let mut solver = |_: &DiffPoly| Some(DiffPoly::zero());
        let state = tower_iterate(&maps, &mut solver, DiffPoly::one(), 1, 10).unwrap();
        assert_eq!(state.halted, None);
        assert_eq!(state.js.len(), 10);
        assert_eq!(state.chis.len(), 11);
        assert!(state.verify(&maps));
    }
}
