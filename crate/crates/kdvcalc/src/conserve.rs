//! Exact conservation checks and the frozen reference catalog.
//!
//! [`conservation_check`] verifies `D_t ρ⁽ᵐ⁾ + D_x F⁽ᵐ⁾ = 0` on the KdV
//! flow symbolically — the t-derivative is eliminated through the equation
//! of motion and the residual must cancel term by term.
//!
//! [`ReferenceCatalog`] carries independently transcribed expressions for
//! the densities (m ≤ 10) and the nonvanishing charge integrands (even
//! m ≤ 10), bundled as JSON at `fixtures/reference_catalog.json`. A
//! density must match bit-for-bit; a charge integrand must agree modulo an
//! exact x-derivative, which is decided by the Euler operator (its kernel
//! on x-independent expressions in one symbol is precisely `Im D_x`).
//!
//! [`charge_integrand`] reduces ρ⁽ᵐ⁾ modulo `Im D_x` by integration by
//! parts; for odd m the result is exactly zero, which is the symbolic form
//! of the vanishing of the odd charges.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::densities::DensitySeries;
use crate::jetpoly::{CalculusError, Coord, DiffPoly};

/// What a catalog entry describes.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogKind {
    /// The density ρ⁽ᵐ⁾ itself; matched exactly.
    Density,
    /// The integrand of the charge Q⁽ᵐ⁾; matched modulo `Im D_x`.
    Charge,
}

impl fmt::Display for CatalogKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CatalogKind::Density => "density",
            CatalogKind::Charge => "charge",
        })
    }
}

/// One frozen reference expression.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub m: usize,
    pub kind: CatalogKind,
    pub poly: DiffPoly,
    /// ASCII transcription of the expression the entry was taken from.
    pub source_quote: String,
}

/// The bundled collection of reference expressions. On the wire this is
/// a bare JSON array of entries.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReferenceCatalog {
    entries: Vec<CatalogEntry>,
}

static BUNDLED: OnceLock<ReferenceCatalog> = OnceLock::new();

impl ReferenceCatalog {
    /// The catalog compiled into the crate.
    pub fn bundled() -> &'static ReferenceCatalog {
        BUNDLED.get_or_init(|| {
            ReferenceCatalog::from_json_str(include_str!("../fixtures/reference_catalog.json"))
                .expect("bundled catalog is well-formed")
        })
    }

    pub fn from_json_str(src: &str) -> Result<ReferenceCatalog, serde_json::Error> {
        serde_json::from_str(src)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("catalog serialization cannot fail")
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn find(&self, kind: CatalogKind, m: usize) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.kind == kind && e.m == m)
    }

    /// The largest order available for `kind`.
    pub fn max_order(&self, kind: CatalogKind) -> Option<usize> {
        self.entries
            .iter()
            .filter(|e| e.kind == kind)
            .map(|e| e.m)
            .max()
    }
}

/// Failures of the comparison layer.
#[derive(Clone, PartialEq, Debug, Error)]
pub enum ConserveError {
    #[error("the catalog has no {kind} entry for m = {m}")]
    MissingEntry { kind: CatalogKind, m: usize },
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

/// The two sides of one conservation law, with their on-shell residual.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConservationReport {
    pub m: usize,
    pub density: DiffPoly,
    pub flux: DiffPoly,
    /// `D_t ρ⁽ᵐ⁾|_{u_t = -u_xxx - u u_x} + D_x F⁽ᵐ⁾`; zero iff the law holds.
    pub residual: DiffPoly,
}

impl ConservationReport {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Verifies the m-th conservation law exactly.
pub fn conservation_check(
    series: &mut DensitySeries,
    m: usize,
) -> Result<ConservationReport, ConserveError> {
    let density = series.rho(m);
    let flux = series.flux(m);
    let dt = density.total_derivative(Coord::T).substitute_kdv()?;
    let residual = &dt + &flux.total_derivative(Coord::X);
    Ok(ConservationReport {
        m,
        density,
        flux,
        residual,
    })
}

/// The charge integrand: ρ⁽ᵐ⁾ reduced modulo `Im D_x` by integration by
/// parts. Exactly zero for every odd `m`.
pub fn charge_integrand(
    series: &mut DensitySeries,
    m: usize,
) -> Result<DiffPoly, CalculusError> {
    let (integrand, _boundary) = series.rho(m).normal_form_mod_dx()?;
    Ok(integrand)
}

/// `ρ⁽ᵐ⁾ - catalog density`; zero iff the generated density reproduces the
/// reference expression bit for bit.
pub fn density_match_residual(
    series: &mut DensitySeries,
    catalog: &ReferenceCatalog,
    m: usize,
) -> Result<DiffPoly, ConserveError> {
    let entry = catalog
        .find(CatalogKind::Density, m)
        .ok_or(ConserveError::MissingEntry {
            kind: CatalogKind::Density,
            m,
        })?;
    Ok(&series.rho(m) - &entry.poly)
}

/// Euler image of `ρ⁽ᵐ⁾ - catalog integrand`; zero iff the two agree up to
/// an exact x-derivative, i.e. define the same charge.
pub fn charge_match_residual(
    series: &mut DensitySeries,
    catalog: &ReferenceCatalog,
    m: usize,
) -> Result<DiffPoly, ConserveError> {
    let entry = catalog
        .find(CatalogKind::Charge, m)
        .ok_or(ConserveError::MissingEntry {
            kind: CatalogKind::Charge,
            m,
        })?;
    let diff = &series.rho(m) - &entry.poly;
    Ok(diff.euler_operator("u")?)
}
