//! Named pass/fail checks: the randomized calculus identity suite and the
//! density/charge verification table, shared by the CLI and the
//! integration tests.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conserve::{
    charge_match_residual, conservation_check, density_match_residual, CatalogKind,
    ReferenceCatalog,
};
use crate::densities::DensitySeries;
use crate::jetpoly::{is_weight_homogeneous, rat};
use crate::opcalc::{gauge_potential, kdv_flow_residual, kdv_residual_from_potential, GradedForm};
use crate::random::{random_form, SampleLimits};

/// Seed used by every randomized suite unless the caller overrides it.
pub const DEFAULT_SEED: u64 = 0x6a65_7473;

/// One named verification with its outcome.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Empty on success; a diagnostic (typically a residual) on failure.
    pub detail: String,
}

impl Check {
    fn passed(name: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            pass: true,
            detail: String::new(),
        }
    }

    fn failed(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            pass: false,
            detail: detail.into(),
        }
    }

    fn residual_is_zero(name: String, residual: impl std::fmt::Display, zero: bool) -> Check {
        if zero {
            Check::passed(name)
        } else {
            Check::failed(name, format!("residual = {residual}"))
        }
    }
}

/// True iff every check in the slice passed.
pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

/// The density/charge verification table: conservation laws up to
/// `max_order`, equality with the bundled reference catalog where it
/// reaches, vanishing of the odd charges, and weight homogeneity.
pub fn verify_suite(max_order: usize) -> Vec<Check> {
    let mut series = DensitySeries::new();
    let catalog = ReferenceCatalog::bundled();
    let mut checks = Vec::new();

    for m in 0..=max_order {
        let name = format!("conservation m={m}");
        match conservation_check(&mut series, m) {
            Ok(report) => {
                checks.push(Check::residual_is_zero(name, &report.residual, report.holds()))
            }
            Err(e) => checks.push(Check::failed(name, e.to_string())),
        }
    }

    let density_top = catalog
        .max_order(CatalogKind::Density)
        .unwrap_or(0)
        .min(max_order);
    for m in 0..=density_top {
        let name = format!("density-catalog m={m}");
        match density_match_residual(&mut series, catalog, m) {
            Ok(r) => {
                let zero = r.is_zero();
                checks.push(Check::residual_is_zero(name, &r, zero));
            }
            Err(e) => checks.push(Check::failed(name, e.to_string())),
        }
    }

    let charge_top = catalog
        .max_order(CatalogKind::Charge)
        .unwrap_or(0)
        .min(max_order);
    for m in (0..=charge_top).step_by(2) {
        let name = format!("charge-catalog m={m}");
        match charge_match_residual(&mut series, catalog, m) {
            Ok(r) => {
                let zero = r.is_zero();
                checks.push(Check::residual_is_zero(name, &r, zero));
            }
            Err(e) => checks.push(Check::failed(name, e.to_string())),
        }
    }

    for m in (1..=max_order).step_by(2) {
        let name = format!("odd-charge-vanishing m={m}");
        match series.rho(m).euler_operator("u") {
            Ok(r) => {
                let zero = r.is_zero();
                checks.push(Check::residual_is_zero(name, &r, zero));
            }
            Err(e) => checks.push(Check::failed(name, e.to_string())),
        }
    }

    for m in 0..=max_order {
        let name = format!("weight-homogeneity m={m}");
        let weight = (m + 2) as u64;
        if is_weight_homogeneous(&series.rho(m), "u", weight) {
            checks.push(Check::passed(name));
        } else {
            checks.push(Check::failed(name, format!("a monomial misses weight {weight}")));
        }
    }

    checks
}

/// Tally of one randomized identity over many sampled cases.
struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Tally {
        Tally {
            name,
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, case: usize, witness: Option<String>) {
        self.cases += 1;
        if let Some(w) = witness {
            self.failures += 1;
            self.first_failure.get_or_insert(format!("case {case}: {w}"));
        }
    }

    fn into_check(self) -> Check {
        if self.failures == 0 {
            Check {
                name: self.name.to_string(),
                pass: true,
                detail: format!("{} random cases", self.cases),
            }
        } else {
            Check::failed(
                self.name,
                format!(
                    "{} of {} cases failed; {}",
                    self.failures,
                    self.cases,
                    self.first_failure.unwrap_or_default()
                ),
            )
        }
    }
}

fn zero_witness(w: &GradedForm) -> Option<String> {
    if w.is_zero() {
        None
    } else {
        Some(format!("nonzero value {w}"))
    }
}

/// `d(a b) - (d a) b - (-1)^{deg a} a (d b)`, for any degree-raising map
/// given by `raise`; degree sum of the pair must stay within the algebra.
fn leibniz_witness(
    raise: impl Fn(&GradedForm) -> GradedForm,
    a: &GradedForm,
    b: &GradedForm,
) -> Option<String> {
    let product = a.mul(b).expect("degree sum stays within the algebra");
    let lhs = raise(&product);
    let mut rhs = raise(a)
        .mul(b)
        .expect("degree sum stays within the algebra");
    let mut tail = a
        .mul(&raise(b))
        .expect("degree sum stays within the algebra");
    if a.degree() == 1 {
        tail = tail.neg();
    }
    rhs = rhs.add(&tail).expect("degrees agree");
    if lhs == rhs {
        None
    } else {
        Some(format!("lhs = {lhs}, rhs = {rhs}"))
    }
}

/// The randomized calculus identity suite: nilpotency and anticommutation
/// of the two maps and the graded Leibniz rule on `cases` sampled forms
/// per identity, plus the two fixed identities (the coordinate identity
/// and the gauge derivation).
pub fn calculus_suite(seed: u64, cases: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limits = SampleLimits::default();

    let mut dd = Tally::new("d(d(w)) = 0");
    let mut deldel = Tally::new("delta(delta(w)) = 0");
    let mut anti = Tally::new("d(delta(w)) + delta(d(w)) = 0");
    let mut leibniz_d = Tally::new("d(w w') = (d w) w' + (-1)^r w (d w')");
    let mut leibniz_delta = Tally::new("delta(w w') = (delta w) w' + (-1)^r w (delta w')");

    for case in 0..cases {
        let zero_form = random_form(&mut rng, &limits, 0);
        let one_form = random_form(&mut rng, &limits, 1);

        for w in [&zero_form, &one_form] {
            dd.record(case, zero_witness(&w.d().d()));
            deldel.record(case, zero_witness(&w.delta().delta()));
            let mixed = w
                .d()
                .delta()
                .add(&w.delta().d())
                .expect("both images are two-forms");
            anti.record(case, zero_witness(&mixed));
        }

        let second_zero_form = random_form(&mut rng, &limits, 0);
        for (a, b) in [
            (&zero_form, &second_zero_form),
            (&zero_form, &one_form),
            (&one_form, &second_zero_form),
        ] {
            leibniz_d.record(case, leibniz_witness(|w| w.d(), a, b));
            leibniz_delta.record(case, leibniz_witness(|w| w.delta(), a, b));
        }
    }

    let mut checks = vec![
        dd.into_check(),
        deldel.into_check(),
        anti.into_check(),
        leibniz_d.into_check(),
        leibniz_delta.into_check(),
    ];

    checks.push(coordinate_identity_check());
    checks.push(gauge_derivation_check());
    checks
}

/// `x delta(x) - (delta x) x = tau`, exactly.
fn coordinate_identity_check() -> Check {
    use crate::jetpoly::{Coord, DiffPoly};
    use crate::opcalc::Operator;

    let name = "x delta(x) - (delta x) x = tau";
    let x = GradedForm::ZeroForm(Operator::from_poly(DiffPoly::coord(Coord::X)));
    let dx = x.delta();
    let lhs = x
        .mul(&dx)
        .and_then(|l| dx.mul(&x).map(|r| (l, r)))
        .and_then(|(l, r)| l.sub(&r))
        .expect("degrees agree");
    if lhs == GradedForm::tau() {
        Check::passed(name)
    } else {
        Check::failed(name, format!("got {lhs}"))
    }
}

/// The curvature of the gauge potential is flat exactly on shell and its
/// scalar part is the flow residual `-(u_t + u_xxx + u u_x)`.
fn gauge_derivation_check() -> Check {
    let name = "gauge curvature reduces to the flow residual";
    if !gauge_potential().delta().is_zero() {
        return Check::failed(name, "delta A does not vanish");
    }
    match kdv_residual_from_potential() {
        Ok(residual) => {
            let expect = kdv_flow_residual().scale(&rat(-1, 1));
            if residual == expect {
                Check::passed(name)
            } else {
                Check::failed(name, format!("residual = {residual}"))
            }
        }
        Err(e) => Check::failed(name, e.to_string()),
    }
}
