//! Reference functions with known curvature and substitution behaviour, and
//! the runner that checks them.

use serde::Serialize;

use super::{classify, ClassificationVerdict, Property, SampleGrid, TolerancePolicy};
use crate::catalog::{build_custom, build_family, build_quasi_product, Family, FunctionSpec};
use crate::expr::Expr;
use crate::json::SCHEMA_VERSION;

/// What a fixture is expected to show.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Expectation {
    Holds(Property),
    Fails(Property),
    /// Fails with margin at every grid point: the smallest per-point metric is
    /// at least ten times the threshold.
    FailsEverywhere(Property),
    /// CES with this elasticity, to `1e-8` relative.
    Sigma(f64),
}

impl Expectation {
    fn property(&self) -> Property {
        match self {
            Expectation::Holds(p) | Expectation::Fails(p) | Expectation::FailsEverywhere(p) => *p,
            Expectation::Sigma(_) => Property::Ces,
        }
    }

    fn label(&self) -> String {
        match self {
            Expectation::Holds(_) => "holds".into(),
            Expectation::Fails(_) => "fails".into(),
            Expectation::FailsEverywhere(_) => "fails_everywhere".into(),
            Expectation::Sigma(s) => format!("sigma={s}"),
        }
    }

    fn check(&self, v: &ClassificationVerdict) -> bool {
        let Some(pv) = v.get(self.property()) else { return false };
        match self {
            Expectation::Holds(_) => pv.holds,
            Expectation::Fails(_) => !pv.holds,
            Expectation::FailsEverywhere(_) => pv.min_value.is_some_and(|m| m >= 10.0 * pv.threshold_used),
            Expectation::Sigma(s) => {
                pv.holds && v.sigma_estimate.is_some_and(|e| (e - s).abs() <= 1e-8 * s.abs().max(1.0))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    /// One-line statement of what the fixture demonstrates.
    pub claim: String,
    pub spec: FunctionSpec,
    pub grid: SampleGrid,
    pub expectations: Vec<Expectation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationOutcome {
    pub fixture: String,
    pub claim: String,
    pub property: String,
    pub expected: String,
    pub observed: Option<bool>,
    pub passed: bool,
    pub worst_point: Vec<f64>,
    pub worst_value: Option<f64>,
    pub min_value: Option<f64>,
    pub threshold_used: Option<f64>,
    pub sigma_estimate: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub schema_version: &'static str,
    pub tolerance: TolerancePolicy,
    pub entries: Vec<ExpectationOutcome>,
    pub passed: usize,
    pub failed: usize,
    pub all_passed: bool,
}

fn x() -> Expr {
    Expr::var(0)
}

fn c(v: f64) -> Expr {
    Expr::constant(v)
}

/// `A·∏ g_i` with `F(u) = outer`.
fn qp(outer: Expr, inners: Vec<Expr>) -> FunctionSpec {
    build_quasi_product(outer, inners).expect("fixture is well formed")
}

fn fam(f: Family) -> FunctionSpec {
    build_family(f).expect("fixture parameters are valid")
}

fn cd(scale: f64, k: &[f64]) -> FunctionSpec {
    fam(Family::CobbDouglas { scale, exponents: k.to_vec() })
}

fn transcendental(a: &[f64], b: &[f64]) -> FunctionSpec {
    fam(Family::Transcendental { scale: 1.0, powers: a.to_vec(), rates: b.to_vec() })
}

/// `∏ exp(a_i x_i^ρ)` inners.
fn exp_power_inners(a: &[f64], rho: f64) -> Vec<Expr> {
    a.iter().map(|&ai| (c(ai) * x().powf(rho)).exp()).collect()
}

fn fixture(name: &str, claim: &str, spec: FunctionSpec, expectations: Vec<Expectation>) -> Fixture {
    let grid = SampleGrid::default_for(spec.n());
    Fixture { name: name.into(), claim: claim.into(), spec, grid, expectations }
}

/// The reference set, in a fixed order.
pub fn catalog_fixtures() -> Vec<Fixture> {
    use Expectation::*;
    use Property::*;
    let mut out = Vec::new();

    // Functions of a single linear form.
    for (n, rates) in [(2, vec![0.8, -0.6]), (3, vec![0.8, -0.6, 0.5])] {
        let inners: Vec<Expr> = rates.iter().map(|&r| (c(r) * x()).exp()).collect();
        out.push(fixture(
            &format!("exp_linear_n{n}"),
            "A·∏exp(C_i x_i) is flat with vanishing sectional and Gauss-Kronecker curvature",
            qp(c(1.5) * x(), inners.clone()),
            vec![Holds(Flat), Holds(RiemannVanishes), Holds(VanishingSectional), Holds(VanishingGk)],
        ));
        out.push(fixture(
            &format!("outer_of_exp_linear_n{n}"),
            "F(∏exp(C_i x_i)) is flat for any outer F",
            qp(x() + x().powf(2.0), inners),
            vec![Holds(Flat), Holds(RiemannVanishes), Holds(VanishingGk)],
        ));
    }

    // A·√(x_1…x_n).
    out.push(fixture(
        "sqrt_product_n2",
        "A·√(x₁x₂) is flat, proportional-MRS and not minimal",
        cd(2.0, &[0.5, 0.5]),
        vec![Holds(Flat), Holds(RiemannVanishes), Holds(VanishingGk), Holds(VanishingSectional),
             Holds(ProportionalMrs), FailsEverywhere(Minimal)],
    ));
    out.push(fixture(
        "sqrt_product_n3",
        "A·√(x₁x₂x₃) has vanishing coordinate-plane curvature but a nonzero full curvature tensor",
        cd(2.0, &[0.5, 0.5, 0.5]),
        vec![Holds(Flat), Holds(VanishingSectional), Holds(ProportionalMrs),
             FailsEverywhere(RiemannVanishes), FailsEverywhere(VanishingGk), FailsEverywhere(Minimal)],
    ));
    out.push(fixture(
        "power_product_n3",
        "A·(x₁x₂x₃)^0.4 has non-vanishing sectional curvature",
        cd(1.0, &[0.4, 0.4, 0.4]),
        vec![FailsEverywhere(VanishingSectional), FailsEverywhere(Flat)],
    ));

    // Constant-return Cobb-Douglas.
    out.push(fixture(
        "cobb_douglas_crs_n2",
        "Cobb-Douglas with exponents summing to one is developable, unit-elasticity CES",
        cd(1.0, &[0.4, 0.6]),
        vec![Holds(VanishingGk), Sigma(1.0), Holds(ConstantElasticity(0)), Holds(ConstantElasticity(1)),
             Holds(Flat), Fails(Minimal), Fails(ProportionalMrs)],
    ));
    out.push(fixture(
        "cobb_douglas_crs_n3",
        "Cobb-Douglas with exponents summing to one is developable, unit-elasticity CES",
        cd(1.3, &[0.2, 0.3, 0.5]),
        vec![Holds(VanishingGk), Sigma(1.0), Holds(ConstantElasticity(0)), Holds(ConstantElasticity(1)),
             Holds(ConstantElasticity(2))],
    ));
    for (name, k) in [
        ("cobb_douglas_increasing_n2", vec![0.5, 0.6]),
        ("cobb_douglas_decreasing_n2", vec![0.3, 0.4]),
        ("cobb_douglas_increasing_n3", vec![0.3, 0.4, 0.4]),
    ] {
        out.push(fixture(
            name,
            "Cobb-Douglas with exponents not summing to one has nonzero Gauss-Kronecker curvature",
            cd(1.0, &k),
            vec![FailsEverywhere(VanishingGk), Sigma(1.0)],
        ));
    }

    // A·ln(exp(A₁x₁)·∏x_j^{c_j}).
    out.push(fixture(
        "log_exp_monomial_n2",
        "A·ln(exp(A₁x₁)·x₂^c) is developable",
        qp(c(1.5) * x().ln(), vec![(c(2.0) * x()).exp(), x().powf(0.5)]),
        vec![Holds(VanishingGk)],
    ));
    out.push(fixture(
        "log_exp_monomial_n3",
        "A·ln(exp(A₁x₁)·x₂^c₂·x₃^c₃) is developable",
        qp(c(1.5) * x().ln(), vec![(c(2.0) * x()).exp(), x().powf(0.5), x().powf(0.8)]),
        vec![Holds(VanishingGk)],
    ));

    // F(A·exp(A₁x₁ + A₂x₂)·g₃).
    out.push(fixture(
        "outer_of_two_exponentials_n2",
        "F(A·exp(A₁x₁ + A₂x₂)) is developable",
        qp((c(0.8) * x()).powf(2.0), vec![(c(0.5) * x()).exp(), (c(-0.3) * x()).exp()]),
        vec![Holds(VanishingGk)],
    ));
    out.push(fixture(
        "outer_of_two_exponentials_n3",
        "F(A·exp(A₁x₁ + A₂x₂)·g₃(x₃)) is developable",
        qp((c(0.8) * x()).powf(2.0), vec![(c(0.5) * x()).exp(), (c(-0.3) * x()).exp(), x().powf(0.7)]),
        vec![Holds(VanishingGk)],
    ));

    // Constant-return Armington / ACMS.
    out.push(fixture(
        "armington_crs_rho2_n2",
        "constant-return Armington with ρ = 2 is developable",
        fam(Family::Acms { scale: 1.0, weights: vec![1.0, 2.0], rho: 2.0, gamma: 1.0 }),
        vec![Holds(VanishingGk), Sigma(-1.0)],
    ));
    out.push(fixture(
        "armington_crs_rho_half_n3",
        "constant-return Armington with ρ = 1/2 is developable",
        fam(Family::Acms { scale: 1.0, weights: vec![1.0, 2.0, 0.5], rho: 0.5, gamma: 1.0 }),
        vec![Holds(VanishingGk), Sigma(2.0)],
    ));
    out.push(fixture(
        "armington_drs_n2",
        "Armington with γ ≠ 1 has nonzero Gauss-Kronecker curvature",
        fam(Family::Acms { scale: 1.0, weights: vec![1.0, 2.0], rho: 0.5, gamma: 0.7 }),
        vec![FailsEverywhere(VanishingGk), Sigma(2.0)],
    ));

    // A·ln(Σ B_i exp(A_i x_i)).
    let log_sum_exp = |b: &[f64], a: &[f64]| {
        let terms = b.iter().zip(a).enumerate().map(|(i, (&bi, &ai))| c(bi) * (c(ai) * Expr::var(i)).exp());
        build_custom(b.len(), c(0.7) * Expr::sum(terms.collect()).ln()).expect("fixture is well formed")
    };
    out.push(fixture(
        "log_sum_exp_n2",
        "A·ln(Σ B_i exp(A_i x_i)) is developable",
        log_sum_exp(&[1.0, 2.0], &[1.0, -0.5]),
        vec![Holds(VanishingGk)],
    ));
    out.push(fixture(
        "log_sum_exp_n3",
        "A·ln(Σ B_i exp(A_i x_i)) is developable",
        log_sum_exp(&[1.0, 2.0, 0.5], &[1.0, -0.5, 0.8]),
        vec![Holds(VanishingGk)],
    ));

    // Spillman–Mitscherlich: generic on every count.
    for (n, scale, rates) in [(2, 1.0, vec![1.0, 1.0]), (3, 2.0, vec![0.5, 1.0, 1.5])] {
        let mut exp = vec![FailsEverywhere(VanishingGk), FailsEverywhere(Flat), Fails(Ces), Fails(ProportionalMrs)];
        exp.extend((0..n).map(|i| Fails(ConstantElasticity(i))));
        out.push(fixture(
            &format!("spillman_n{n}"),
            "Spillman–Mitscherlich is neither developable, flat, CES nor constant-elasticity",
            fam(Family::SpillmanMitscherlich { scale, rates }),
            exp,
        ));
    }

    // Transcendental.
    out.push(fixture(
        "transcendental_crs_power_n2",
        "transcendental with Σa = 1 and b = 0 is developable",
        transcendental(&[0.3, 0.7], &[0.0, 0.0]),
        vec![Holds(VanishingGk)],
    ));
    out.push(fixture(
        "transcendental_two_zero_powers_n3",
        "transcendental with two zero powers is developable",
        transcendental(&[0.0, 0.0, 0.5], &[0.4, -0.3, 0.2]),
        vec![Holds(VanishingGk)],
    ));
    out.push(fixture(
        "transcendental_pure_exponential_n2",
        "transcendental with a = 0 is flat",
        transcendental(&[0.0, 0.0], &[1.0, 1.0]),
        vec![Holds(Flat), Holds(RiemannVanishes)],
    ));
    out.push(fixture(
        "transcendental_pure_exponential_n3",
        "transcendental with a = 0 is flat",
        transcendental(&[0.0, 0.0, 0.0], &[0.5, -0.4, 0.3]),
        vec![Holds(Flat), Holds(RiemannVanishes)],
    ));
    out.push(fixture(
        "transcendental_sqrt_n2",
        "transcendental with a = 1/2 and b = 0 is flat",
        transcendental(&[0.5, 0.5], &[0.0, 0.0]),
        vec![Holds(Flat)],
    ));
    out.push(fixture(
        "transcendental_equal_powers_n2",
        "transcendental with equal powers and b = 0 has proportional MRS; sectional curvature needs a = 1/2",
        transcendental(&[0.7, 0.7], &[0.0, 0.0]),
        vec![Holds(ProportionalMrs), FailsEverywhere(VanishingSectional)],
    ));
    out.push(fixture(
        "transcendental_mixed_n2",
        "transcendental with nonzero rates is not CES and has varying elasticities",
        transcendental(&[0.5, 0.5], &[1.0, 1.0]),
        vec![Fails(Ces), Fails(ConstantElasticity(0)), Fails(ConstantElasticity(1)), FailsEverywhere(VanishingGk)],
    ));
    out.push(fixture(
        "transcendental_one_zero_rate_n2",
        "the output elasticity of x_i is constant exactly when b_i = 0",
        transcendental(&[0.4, 0.5], &[0.0, 0.6]),
        vec![Holds(ConstantElasticity(0)), Fails(ConstantElasticity(1))],
    ));

    // Homothetic power products F(A(∏x)^k).
    for (name, outer, k) in [
        ("power_product_identity", x(), 0.6),
        ("power_product_square", x().powf(2.0), 0.4),
        ("power_product_sqrt", x().powf(0.5), 0.6),
    ] {
        for n in [2usize, 3] {
            let inner = x().powf(k);
            let outer = outer.substitute(&|_| c(1.2) * Expr::var(0));
            out.push(fixture(
                &format!("{name}_n{n}"),
                "F(A·(∏x_i)^k) has proportional MRS and is nowhere minimal",
                qp(outer, vec![inner; n]),
                vec![Holds(ProportionalMrs), FailsEverywhere(Minimal)],
            ));
        }
    }

    // Exponential-power CES.
    for sigma in [0.5, 2.0, 3.0] {
        let rho = (sigma - 1.0) / sigma;
        out.push(fixture(
            &format!("exp_power_ces_sigma{sigma}_n3"),
            "A·∏exp(A_i x_i^ρ) is CES with σ = 1/(1 − ρ)",
            qp(x(), exp_power_inners(&[1.0, 0.5, 1.5], rho)),
            vec![Sigma(sigma)],
        ));
    }
    out.push(fixture(
        "outer_of_exp_power_ces_sigma2_n2",
        "the Hicks elasticity does not depend on the outer function",
        qp(x().powf(2.0), exp_power_inners(&[1.0, 0.5], 0.5)),
        vec![Sigma(2.0)],
    ));

    // Two-input CES forms.
    let (sigma, k, rho) = (2.0f64, 1.0f64, 0.5f64);
    out.push(fixture(
        "ratio_power_ces_n2",
        "((x₁^ρ + A₁)/(x₂^ρ + A₂))^{σ/k} is CES with elasticity σ",
        qp(
            x(),
            vec![(x().powf(rho) + c(3.0)).powf(sigma / k), (x().powf(rho) + c(1.0)).powf(-sigma / k)],
        ),
        vec![Sigma(sigma)],
    ));
    out.push(fixture(
        "ratio_log_ces_n2",
        "(ln(A₁x₁)/ln(A₂x₂))^{1/k} is CES with unit elasticity",
        qp(x(), vec![(c(3.0) * x()).ln().powf(1.0 / k), (c(13.0) * x()).ln().powf(-1.0 / k)]),
        vec![Sigma(1.0)],
    ));

    out
}

fn outcomes(f: &Fixture, tol: &TolerancePolicy) -> Vec<ExpectationOutcome> {
    let verdict = classify(&f.spec, &f.grid, tol);
    f.expectations
        .iter()
        .map(|e| {
            let mut o = ExpectationOutcome {
                fixture: f.name.clone(),
                claim: f.claim.clone(),
                property: e.property().name(),
                expected: e.label(),
                observed: None,
                passed: false,
                worst_point: vec![],
                worst_value: None,
                min_value: None,
                threshold_used: None,
                sigma_estimate: None,
                error: None,
            };
            match &verdict {
                Ok(v) => {
                    if let Some(pv) = v.get(e.property()) {
                        o.observed = Some(pv.holds);
                        o.worst_point = pv.worst_point.clone();
                        o.worst_value = Some(pv.worst_value);
                        o.min_value = pv.min_value;
                        o.threshold_used = Some(pv.threshold_used);
                    }
                    if matches!(e, Expectation::Sigma(_)) {
                        o.sigma_estimate = v.sigma_estimate;
                    }
                    o.passed = e.check(v);
                }
                Err(err) => o.error = Some(err.to_string()),
            }
            o
        })
        .collect()
}

/// Classifies every fixture and compares against its expectations.
pub fn verify_catalog(tol: &TolerancePolicy) -> TheoremReport {
    let entries: Vec<ExpectationOutcome> = catalog_fixtures().iter().flat_map(|f| outcomes(f, tol)).collect();
    let passed = entries.iter().filter(|e| e.passed).count();
    let failed = entries.len() - passed;
    TheoremReport { schema_version: SCHEMA_VERSION, tolerance: *tol, entries, passed, failed, all_passed: failed == 0 }
}
