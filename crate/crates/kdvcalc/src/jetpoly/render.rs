//! Text and LaTeX rendering.
//!
//! Terms print in the canonical storage order (total degree, then
//! lexicographic on the factor list), so equal polynomials always render
//! byte-identically, and `DiffPoly::parse` accepts everything `Display`
//! emits.

use std::fmt;

use num_traits::{One, Signed};

use super::{DiffPoly, Monomial};
use crate::jetpoly::rational::{format_magnitude, latex_magnitude};

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, term) in self.terms().iter().enumerate() {
            let negative = term.coeff.is_negative();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            write_term(f, term)?;
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, term: &Monomial) -> fmt::Result {
    let magnitude = term.coeff.abs();
    let mut wrote = false;
    if term.factors.is_empty() || !magnitude.is_one() {
        f.write_str(&format_magnitude(&term.coeff))?;
        wrote = true;
    }
    for (var, pow) in term.factors.iter() {
        if wrote {
            f.write_str("*")?;
        }
        write!(f, "{var}")?;
        if *pow > 1 {
            write!(f, "^{pow}")?;
        }
        wrote = true;
    }
    Ok(())
}

impl DiffPoly {
    /// Renders the polynomial as LaTeX source.
    ///
    /// Jets become subscripted symbols (`u_{xx}`), powers are braced
    /// (`u_{x}^{2}`), and fractional coefficients use `\frac{p}{q}`.
    pub fn latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, term) in self.terms().iter().enumerate() {
            let negative = term.coeff.is_negative();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let magnitude = term.coeff.abs();
            let mut wrote = false;
            if term.factors.is_empty() || !magnitude.is_one() {
                out.push_str(&latex_magnitude(&magnitude));
                wrote = true;
            }
            for (var, pow) in term.factors.iter() {
                if wrote {
                    out.push(' ');
                }
                out.push_str(&var.latex());
                if *pow > 1 {
                    out.push_str(&format!("^{{{pow}}}"));
                }
                wrote = true;
            }
        }
        out
    }
}
