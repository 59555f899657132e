//! Conserved densities of the KdV equation from a Gardner-type recursion.
//!
//! The generating identity
//!
//! ```text
//! ρ = u - 6λ D_x ρ + 6λ² ρ²,     ρ = Σ_m (6λ)^m ρ⁽ᵐ⁾,
//! ```
//!
//! determines the sequence
//!
//! ```text
//! ρ⁽⁰⁾ = u,   ρ⁽¹⁾ = -u_x,
//! ρ⁽ᵐ⁾ = -D_x ρ⁽ᵐ⁻¹⁾ + (1/6) Σ_{k=0}^{m-2} ρ⁽ᵏ⁾ ρ⁽ᵐ⁻²⁻ᵏ⁾   (m ≥ 2),
//! ```
//!
//! and each ρ⁽ᵐ⁾ is a conserved density: on solutions of
//! `u_t = -u_xxx - u u_x`,
//!
//! ```text
//! D_t ρ⁽ᵐ⁾ + D_x F⁽ᵐ⁾ = 0
//! ```
//!
//! with the flux
//!
//! ```text
//! F⁽ᵐ⁾ = D_x² ρ⁽ᵐ⁾ - (1/2) Σ_{j+k=m-1} ρ⁽ʲ⁾ D_x ρ⁽ᵏ⁾
//!        + (1/36) Σ_{j+k+l=m-2} ρ⁽ʲ⁾ ρ⁽ᵏ⁾ ρ⁽ˡ⁾ + (u/2) ρ⁽ᵐ⁾.
//! ```
//!
//! Assigning `u_{x^k}` the weight `k + 2` makes ρ⁽ᵐ⁾ homogeneous of weight
//! `m + 2`. All of this is verified exactly by the test suite; nothing is
//! truncated or approximated.

use crate::jetpoly::{rat, Coord, DiffPoly};

/// Memoizing generator for the density sequence.
#[derive(Clone, Debug, Default)]
pub struct DensitySeries {
    rhos: Vec<DiffPoly>,
}

impl DensitySeries {
    pub fn new() -> Self {
        DensitySeries::default()
    }

    /// The density ρ⁽ᵐ⁾.
    pub fn rho(&mut self, m: usize) -> DiffPoly {
        self.extend_to(m);
        self.rhos[m].clone()
    }

    /// The flux F⁽ᵐ⁾ paired with ρ⁽ᵐ⁾ in the conservation law.
    pub fn flux(&mut self, m: usize) -> DiffPoly {
        self.extend_to(m);
        let rho_m = &self.rhos[m];
        let mut f = rho_m
            .total_derivative(Coord::X)
            .total_derivative(Coord::X);
        if m >= 1 {
            let mut quadratic = DiffPoly::zero();
            for j in 0..=m - 1 {
                let k = m - 1 - j;
                let dk = self.rhos[k].total_derivative(Coord::X);
                quadratic = &quadratic + &(&self.rhos[j] * &dk);
            }
            f = &f + &quadratic.scale(&rat(-1, 2));
        }
        if m >= 2 {
            let mut cubic = DiffPoly::zero();
            for j in 0..=m - 2 {
                for k in 0..=m - 2 - j {
                    let l = m - 2 - j - k;
                    cubic = &cubic + &(&(&self.rhos[j] * &self.rhos[k]) * &self.rhos[l]);
                }
            }
            f = &f + &cubic.scale(&rat(1, 36));
        }
        let u = DiffPoly::jet("u", 0, 0);
        &f + &(&u * rho_m).scale(&rat(1, 2))
    }

    /// The defect of ρ⁽ᵐ⁾ in the generating identity; identically zero for
    /// every `m` by construction, and checked exactly in the tests.
    pub fn gardner_residual(&mut self, m: usize) -> DiffPoly {
        self.extend_to(m);
        let mut r = self.rhos[m].clone();
        if m == 0 {
            r = &r - &DiffPoly::jet("u", 0, 0);
        }
        if m >= 1 {
            r = &r + &self.rhos[m - 1].total_derivative(Coord::X);
        }
        if m >= 2 {
            let mut quadratic = DiffPoly::zero();
            for j in 0..=m - 2 {
                let k = m - 2 - j;
                quadratic = &quadratic + &(&self.rhos[j] * &self.rhos[k]);
            }
            r = &r - &quadratic.scale(&rat(1, 6));
        }
        r
    }

    fn extend_to(&mut self, m: usize) {
        while self.rhos.len() <= m {
            let n = self.rhos.len();
            let next = match n {
                0 => DiffPoly::jet("u", 0, 0),
                1 => -&DiffPoly::jet("u", 0, 1),
                _ => {
                    let mut s = -&self.rhos[n - 1].total_derivative(Coord::X);
                    let mut quadratic = DiffPoly::zero();
                    for k in 0..=n - 2 {
                        quadratic = &quadratic + &(&self.rhos[k] * &self.rhos[n - 2 - k]);
                    }
                    s = &s + &quadratic.scale(&rat(1, 6));
                    s
                }
            };
            self.rhos.push(next);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetpoly::is_weight_homogeneous;

    fn u(x: u32) -> DiffPoly {
        DiffPoly::jet("u", 0, x)
    }

    fn parse(src: &str) -> DiffPoly {
        DiffPoly::parse(src, &["u"]).unwrap()
    }

    #[test]
    fn first_densities_are_explicit() {
        let mut s = DensitySeries::new();
        assert_eq!(s.rho(0), u(0));
        assert_eq!(s.rho(1), -&u(1));
        assert_eq!(s.rho(2), parse("u_xx + (1/6)*u^2"));
        assert_eq!(s.rho(3), parse("-u_xxx - (2/3)*u*u_x"));
        assert_eq!(
            s.rho(4),
            parse("u_xxxx + u*u_xx + (5/6)*u_x^2 + (1/18)*u^3")
        );
        assert_eq!(
            s.rho(5),
            parse("-u_xxxxx - (4/3)*u*u_xxx - 3*u_x*u_xx - (4/9)*u^2*u_x")
        );
    }

    #[test]
    fn sixth_density_splits_into_charge_and_derivative_parts() {
        let mut s = DensitySeries::new();
        let charge_part = parse("(5/216)*(u^4 - 12*u*u_x^2 + (36/5)*u_xx^2)");
        let derivative_part =
            parse("u_xxxxx + (5/3)*u*u_xxx + (5/6)*u^2*u_x + 3*u_x*u_xx")
                .total_derivative(Coord::X);
        assert_eq!(s.rho(6), &charge_part + &derivative_part);
    }

    #[test]
    fn first_fluxes_are_explicit() {
        let mut s = DensitySeries::new();
        assert_eq!(s.flux(0), parse("u_xx + (1/2)*u^2"));
        assert_eq!(s.flux(1), parse("-u_xxx - u*u_x"));
    }

    #[test]
    fn densities_are_conserved_on_the_kdv_flow() {
        let mut s = DensitySeries::new();
        for m in 0..=6 {
            let dt = s.rho(m).total_derivative(Coord::T);
            let residual =
                &dt.substitute_kdv().unwrap() + &s.flux(m).total_derivative(Coord::X);
            assert!(residual.is_zero(), "conservation fails at m = {m}");
        }
    }

    #[test]
    fn generating_identity_holds_order_by_order() {
        let mut s = DensitySeries::new();
        for m in 0..=8 {
            assert!(s.gardner_residual(m).is_zero(), "defect at m = {m}");
        }
    }

    #[test]
    fn densities_are_weight_homogeneous() {
        let mut s = DensitySeries::new();
        for m in 0..=10 {
            let rho = s.rho(m);
            assert!(
                is_weight_homogeneous(&rho, "u", (m + 2) as u64),
                "weight fails at m = {m}"
            );
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = DensitySeries::new().rho(10);
        let b = DensitySeries::new().rho(10);
        assert_eq!(a, b);
        assert_eq!(a.to_json_string(), b.to_json_string());
    }
}
