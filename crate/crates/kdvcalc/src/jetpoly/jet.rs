//! Generators of the jet algebra: the coordinates `t`, `x` and the jets
//! `∂_t^a ∂_x^b w` of declared dependent variables.

use std::fmt;

/// An independent coordinate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Coord {
    T,
    X,
}

impl Coord {
    pub fn name(self) -> &'static str {
        match self {
            Coord::T => "t",
            Coord::X => "x",
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A jet `∂_t^a ∂_x^b w` of a dependent variable `w`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Jet {
    pub sym: String,
    pub t_order: u32,
    pub x_order: u32,
}

/// A generator of the polynomial algebra: either a coordinate or a jet.
///
/// The derived order sorts coordinates before jets, coordinates as `t < x`,
/// and jets by symbol, then t-order, then x-order. This is the tie-break
/// order used everywhere a canonical arrangement is needed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum JetVar {
    Coord(Coord),
    Jet(Jet),
}

/// Derivative of a single generator with respect to a coordinate.
pub(crate) enum VarDerivative {
    Zero,
    One,
    Var(JetVar),
}

impl JetVar {
    pub fn coord(c: Coord) -> Self {
        JetVar::Coord(c)
    }

    pub fn jet(sym: &str, t_order: u32, x_order: u32) -> Self {
        JetVar::Jet(Jet {
            sym: sym.to_owned(),
            t_order,
            x_order,
        })
    }

    pub fn is_coord(&self) -> bool {
        matches!(self, JetVar::Coord(_))
    }

    pub fn as_jet(&self) -> Option<&Jet> {
        match self {
            JetVar::Jet(j) => Some(j),
            JetVar::Coord(_) => None,
        }
    }

    /// Total derivative of the generator itself.
    pub(crate) fn derivative(&self, wrt: Coord) -> VarDerivative {
        match self {
            JetVar::Coord(c) if *c == wrt => VarDerivative::One,
            JetVar::Coord(_) => VarDerivative::Zero,
            JetVar::Jet(j) => {
                let mut j = j.clone();
                match wrt {
                    Coord::T => j.t_order += 1,
                    Coord::X => j.x_order += 1,
                }
                VarDerivative::Var(JetVar::Jet(j))
            }
        }
    }
}

impl fmt::Display for JetVar {
    /// Text form used by the expression grammar: `u`, `u_x`, `u_txx`, `x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JetVar::Coord(c) => f.write_str(c.name()),
            JetVar::Jet(j) => {
                f.write_str(&j.sym)?;
                if j.t_order > 0 || j.x_order > 0 {
                    f.write_str("_")?;
                    for _ in 0..j.t_order {
                        f.write_str("t")?;
                    }
                    for _ in 0..j.x_order {
                        f.write_str("x")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl JetVar {
    /// LaTeX form: `u`, `u_{xx}`, `u_{txx}`, `x`.
    pub fn latex(&self) -> String {
        match self {
            JetVar::Coord(c) => c.name().to_owned(),
            JetVar::Jet(j) if j.t_order == 0 && j.x_order == 0 => j.sym.clone(),
            JetVar::Jet(j) => {
                let mut s = format!("{}_{{", j.sym);
                for _ in 0..j.t_order {
                    s.push('t');
                }
                for _ in 0..j.x_order {
                    s.push('x');
                }
                s.push('}');
                s
            }
        }
    }
}
