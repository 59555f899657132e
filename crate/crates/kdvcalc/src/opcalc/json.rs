//! Serde wire formats for operators and graded forms.
//!
//! An operator is `{"ops": [{"dx": n, "coeff": <poly>}]}` with `dx`
//! defaulting to 0; entries decode leniently (any order, duplicates are
//! summed) and encode canonically in increasing powers. A graded form is
//! tagged by its degree and carries only its nonzero components:
//!
//! ```text
//! {"degree": 0, "c0": <op>}
//! {"degree": 1, "tau": <op>, "xi": <op>}
//! {"degree": 2, "tauxi": <op>}
//! ```

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::form::GradedForm;
use super::operator::Operator;
use crate::jetpoly::{DiffPoly, MAX_ORDER_INPUT};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorJson {
    ops: Vec<OpEntryJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpEntryJson {
    #[serde(default, skip_serializing_if = "is_zero")]
    dx: u32,
    coeff: DiffPoly,
}

fn is_zero(n: &u32) -> bool {
    *n == 0
}

impl Serialize for Operator {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let ops = self
            .entries()
            .map(|(dx, coeff)| OpEntryJson {
                dx,
                coeff: coeff.clone(),
            })
            .collect();
        OperatorJson { ops }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = OperatorJson::deserialize(deserializer)?;
        let mut ops: BTreeMap<u32, DiffPoly> = BTreeMap::new();
        for entry in wire.ops {
            if entry.dx > MAX_ORDER_INPUT {
                return Err(D::Error::custom("operator power too large"));
            }
            let sum = match ops.get(&entry.dx) {
                Some(existing) => existing + &entry.coeff,
                None => entry.coeff,
            };
            ops.insert(entry.dx, sum);
        }
        Ok(Operator::from_map(ops))
    }
}

impl Operator {
    /// Decodes an operator from its JSON wire form.
    pub fn from_json_str(src: &str) -> Result<Operator, serde_json::Error> {
        serde_json::from_str(src)
    }

    /// Encodes the canonical form as compact JSON.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("operator serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormJson {
    degree: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c0: Option<Operator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tau: Option<Operator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    xi: Option<Operator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tauxi: Option<Operator>,
}

fn some_unless_zero(op: &Operator) -> Option<Operator> {
    if op.is_zero() {
        None
    } else {
        Some(op.clone())
    }
}

impl Serialize for GradedForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut wire = FormJson {
            degree: self.degree(),
            c0: None,
            tau: None,
            xi: None,
            tauxi: None,
        };
        match self {
            GradedForm::ZeroForm(a) => wire.c0 = some_unless_zero(a),
            GradedForm::OneForm { tau, xi } => {
                wire.tau = some_unless_zero(tau);
                wire.xi = some_unless_zero(xi);
            }
            GradedForm::TwoForm(w) => wire.tauxi = some_unless_zero(w),
        }
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GradedForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = FormJson::deserialize(deserializer)?;
        let reject = |field: &str| {
            D::Error::custom(format!(
                "field `{field}` is not allowed on a degree-{} form",
                wire.degree
            ))
        };
        let unwrap = |op: Option<Operator>| op.unwrap_or_else(Operator::zero);
        match wire.degree {
            0 => {
                if wire.tau.is_some() {
                    return Err(reject("tau"));
                }
                if wire.xi.is_some() {
                    return Err(reject("xi"));
                }
                if wire.tauxi.is_some() {
                    return Err(reject("tauxi"));
                }
                Ok(GradedForm::ZeroForm(unwrap(wire.c0)))
            }
            1 => {
                if wire.c0.is_some() {
                    return Err(reject("c0"));
                }
                if wire.tauxi.is_some() {
                    return Err(reject("tauxi"));
                }
                Ok(GradedForm::OneForm {
                    tau: unwrap(wire.tau),
                    xi: unwrap(wire.xi),
                })
            }
            2 => {
                if wire.c0.is_some() {
                    return Err(reject("c0"));
                }
                if wire.tau.is_some() {
                    return Err(reject("tau"));
                }
                if wire.xi.is_some() {
                    return Err(reject("xi"));
                }
                Ok(GradedForm::TwoForm(unwrap(wire.tauxi)))
            }
            d => Err(D::Error::custom(format!("no forms of degree {d}"))),
        }
    }
}

impl GradedForm {
    /// Decodes a graded form from its JSON wire form.
    pub fn from_json_str(src: &str) -> Result<GradedForm, serde_json::Error> {
        serde_json::from_str(src)
    }

    /// Encodes the canonical form as compact JSON.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("form serialization cannot fail")
    }
}
