//! Seeded random sampling of polynomials, operators, and graded forms,
//! used by the identity suites and the property tests.

use rand::Rng;

use crate::jetpoly::{rat, Coord, DiffPoly};
use crate::opcalc::{GradedForm, Operator};

/// Size bounds for sampled expressions.
#[derive(Clone, Copy, Debug)]
pub struct SampleLimits {
    /// Maximum number of terms per polynomial coefficient.
    pub max_terms: usize,
    /// Maximum factors multiplied into one term.
    pub max_factors: usize,
    /// Maximum jet order (t and x orders combined).
    pub max_jet_order: u32,
    /// Maximum power of ∂_x carried by an operator.
    pub max_d_power: u32,
    /// Numerators are drawn from ±1..=coeff_bound, denominators from
    /// 1..=coeff_bound.
    pub coeff_bound: i64,
    /// Whether the coordinates t and x may appear as factors.
    pub allow_coords: bool,
}

impl Default for SampleLimits {
    fn default() -> Self {
        SampleLimits {
            max_terms: 4,
            max_factors: 2,
            max_jet_order: 3,
            max_d_power: 3,
            coeff_bound: 9,
            allow_coords: true,
        }
    }
}

/// A random differential polynomial in jets of `u` (plus coordinates when
/// allowed) within `limits`. May be zero.
pub fn random_poly(rng: &mut impl Rng, limits: &SampleLimits) -> DiffPoly {
    let terms = rng.random_range(0..=limits.max_terms);
    let mut acc = DiffPoly::zero();
    for _ in 0..terms {
        let mut num = 0;
        while num == 0 {
            num = rng.random_range(-limits.coeff_bound..=limits.coeff_bound);
        }
        let den = rng.random_range(1..=limits.coeff_bound);
        let mut term = DiffPoly::constant(rat(num, den));
        for _ in 0..rng.random_range(0..=limits.max_factors) {
            term = &term * &random_factor(rng, limits);
        }
        acc = &acc + &term;
    }
    acc
}

fn random_factor(rng: &mut impl Rng, limits: &SampleLimits) -> DiffPoly {
    if limits.allow_coords && rng.random_range(0..5) == 0 {
        let c = if rng.random_range(0..2) == 0 {
            Coord::T
        } else {
            Coord::X
        };
        return DiffPoly::coord(c);
    }
    let order = rng.random_range(0..=limits.max_jet_order);
    let t_order = rng.random_range(0..=order.min(1));
    DiffPoly::jet("u", t_order, order - t_order)
}

/// A random differential operator Σ aₙ ∂_xⁿ within `limits`.
pub fn random_operator(rng: &mut impl Rng, limits: &SampleLimits) -> Operator {
    let mut acc = Operator::zero();
    for n in 0..=limits.max_d_power {
        if rng.random_range(0..2) == 0 {
            acc = &acc + &Operator::monomial(n, random_poly(rng, limits));
        }
    }
    acc
}

/// A random graded form of the requested degree (0, 1, or 2).
pub fn random_form(rng: &mut impl Rng, limits: &SampleLimits, degree: u8) -> GradedForm {
    match degree {
        0 => GradedForm::ZeroForm(random_operator(rng, limits)),
        1 => GradedForm::OneForm {
            tau: random_operator(rng, limits),
            xi: random_operator(rng, limits),
        },
        2 => GradedForm::TwoForm(random_operator(rng, limits)),
        other => panic!("no forms of degree {other}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampling_is_reproducible_for_a_fixed_seed() {
        let limits = SampleLimits::default();
        let mut a = ChaCha8Rng::seed_from_u64(17);
        let mut b = ChaCha8Rng::seed_from_u64(17);
        for degree in [0u8, 1, 2] {
            assert_eq!(
                random_form(&mut a, &limits, degree),
                random_form(&mut b, &limits, degree)
            );
        }
    }

    #[test]
    fn samples_respect_the_limits() {
        let limits = SampleLimits {
            allow_coords: false,
            ..SampleLimits::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let op = random_operator(&mut rng, &limits);
            assert!(op.max_power().unwrap_or(0) <= limits.max_d_power);
            for (_, coeff) in op.entries() {
                assert!(coeff.num_terms() <= limits.max_terms);
                assert!(!coeff.contains_coord(Coord::T));
                assert!(!coeff.contains_coord(Coord::X));
                for v in coeff.vars() {
                    let jet = v.as_jet().expect("coords are disabled");
                    assert!(jet.t_order + jet.x_order <= limits.max_jet_order);
                }
            }
        }
    }
}
