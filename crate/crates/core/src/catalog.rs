//! Production-function families and their expression bodies.

use serde::Serialize;

use crate::diff;
use crate::error::{Error, Result};
use crate::expr::Expr;

/// A strictly positive vector of input quantities.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Point> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint("empty coordinate vector".into()));
        }
        if let Some(bad) = coords.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
            return Err(Error::InvalidPoint(format!(
                "coordinate {bad} is not a finite positive number in {coords:?}"
            )));
        }
        Ok(Point(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Family tag with its parameter record.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `A · ∏ x_i^{k_i}` with `A > 0`, `k_i ≠ 0`.
    CobbDouglas { scale: f64, exponents: Vec<f64> },
    /// Armington / ACMS aggregator `A · (Σ k_i x_i^ρ)^{γ/ρ}` with `A, k_i, ρ ≠ 0`.
    Acms { scale: f64, weights: Vec<f64>, rho: f64, gamma: f64 },
    /// `A · ∏ (1 − exp(−a_i x_i))` with `A, a_i > 0`.
    SpillmanMitscherlich { scale: f64, rates: Vec<f64> },
    /// `A · ∏ x_i^{a_i} exp(b_i x_i)` with `A > 0`, `a_i² + b_i² ≠ 0`.
    Transcendental { scale: f64, powers: Vec<f64>, rates: Vec<f64> },
    /// `∏ g_i(x_i)`.
    Product,
    /// `F(∏ g_i(x_i))`.
    QuasiProduct,
    Custom,
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::CobbDouglas { .. } => "CobbDouglas",
            Family::Acms { .. } => "ACMS",
            Family::SpillmanMitscherlich { .. } => "SpillmanMitscherlich",
            Family::Transcendental { .. } => "Transcendental",
            Family::Product => "Product",
            Family::QuasiProduct => "QuasiProduct",
            Family::Custom => "Custom",
        }
    }
}

/// Outer function `F(u)` (over `x_0` standing for `u`) and univariate inners
/// `g_i` (each over `x_0` standing for `x_i`).
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiProductStructure {
    pub outer: Expr,
    pub inners: Vec<Expr>,
}

impl QuasiProductStructure {
    /// Composes `F(∏ g_i(x_i))` as a single expression over `x_0..x_{n-1}`.
    pub fn compose(&self) -> Expr {
        let product = Expr::Product(
            self.inners
                .iter()
                .enumerate()
                .map(|(i, g)| g.substitute(&|_| Expr::Var(i)))
                .collect(),
        );
        self.outer.substitute(&|_| product.clone())
    }
}

/// An n-input production function.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    n: usize,
    body: Expr,
    family: Family,
    structure: Option<QuasiProductStructure>,
}

fn violation(msg: impl Into<String>) -> Error {
    Error::ParameterViolation(msg.into())
}

fn check_finite(name: &str, values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(violation(format!("{name} must be finite, got {v}"))),
        None => Ok(()),
    }
}

fn check_arity(len: usize) -> Result<usize> {
    if len < 2 {
        Err(violation(format!("n ≥ 2 inputs required, got {len}")))
    } else {
        Ok(len)
    }
}

fn scaled(scale: f64, u: Expr) -> Expr {
    Expr::Product(vec![Expr::Const(scale), u])
}

/// Builds one of the parametric catalog families.
pub fn build_family(family: Family) -> Result<FunctionSpec> {
    let x = Expr::Var(0);
    let structure = match &family {
        Family::CobbDouglas { scale, exponents } => {
            check_arity(exponents.len())?;
            check_finite("A", &[*scale])?;
            check_finite("k", exponents)?;
            if *scale <= 0.0 {
                return Err(violation("Cobb-Douglas requires A > 0"));
            }
            if let Some(i) = exponents.iter().position(|k| *k == 0.0) {
                return Err(violation(format!("Cobb-Douglas requires k_{} ≠ 0", i + 1)));
            }
            Some(QuasiProductStructure {
                outer: scaled(*scale, x.clone()),
                inners: exponents.iter().map(|k| x.clone().powf(*k)).collect(),
            })
        }
        Family::Acms { scale, weights, rho, gamma } => {
            check_arity(weights.len())?;
            check_finite("A, rho, gamma", &[*scale, *rho, *gamma])?;
            check_finite("k", weights)?;
            if *scale == 0.0 {
                return Err(violation("ACMS requires A ≠ 0"));
            }
            if *rho == 0.0 {
                return Err(violation("ACMS requires ρ ≠ 0"));
            }
            if let Some(i) = weights.iter().position(|k| *k == 0.0) {
                return Err(violation(format!("ACMS requires k_{} ≠ 0", i + 1)));
            }
            // exp(k_i x^ρ) inners turn the inner sum into a product; (ln u)^{γ/ρ}
            // is only real-valued when every weight is positive.
            if weights.iter().all(|k| *k > 0.0) {
                Some(QuasiProductStructure {
                    outer: scaled(*scale, x.clone().ln().powf(gamma / rho)),
                    inners: weights
                        .iter()
                        .map(|k| Expr::Product(vec![Expr::Const(*k), x.clone().powf(*rho)]).exp())
                        .collect(),
                })
            } else {
                None
            }
        }
        Family::SpillmanMitscherlich { scale, rates } => {
            check_arity(rates.len())?;
            check_finite("A", &[*scale])?;
            check_finite("a", rates)?;
            if *scale <= 0.0 {
                return Err(violation("Spillman-Mitscherlich requires A > 0"));
            }
            if let Some(i) = rates.iter().position(|a| *a <= 0.0) {
                return Err(violation(format!("Spillman-Mitscherlich requires a_{} > 0", i + 1)));
            }
            Some(QuasiProductStructure {
                outer: scaled(*scale, x.clone()),
                inners: rates
                    .iter()
                    .map(|a| {
                        Expr::Const(1.0)
                            - Expr::Product(vec![Expr::Const(-a), x.clone()]).exp()
                    })
                    .collect(),
            })
        }
        Family::Transcendental { scale, powers, rates } => {
            check_arity(powers.len())?;
            if powers.len() != rates.len() {
                return Err(violation(format!(
                    "transcendental needs as many a_i as b_i ({} vs {})",
                    powers.len(),
                    rates.len()
                )));
            }
            check_finite("A", &[*scale])?;
            check_finite("a", powers)?;
            check_finite("b", rates)?;
            if *scale <= 0.0 {
                return Err(violation("transcendental requires A > 0"));
            }
            if let Some(i) = (0..powers.len()).find(|&i| powers[i] == 0.0 && rates[i] == 0.0) {
                return Err(violation(format!("transcendental requires a_{0}² + b_{0}² ≠ 0", i + 1)));
            }
            Some(QuasiProductStructure {
                outer: scaled(*scale, x.clone()),
                inners: powers
                    .iter()
                    .zip(rates)
                    .map(|(a, b)| {
                        x.clone().powf(*a)
                            * Expr::Product(vec![Expr::Const(*b), x.clone()]).exp()
                    })
                    .collect(),
            })
        }
        Family::Product | Family::QuasiProduct | Family::Custom => {
            return Err(violation(format!(
                "family {} is built from expressions, not parameters",
                family.tag()
            )));
        }
    };

    let (n, body) = match (&family, &structure) {
        (Family::Acms { scale, weights, rho, gamma }, _) => {
            let inner_sum = Expr::Sum(
                weights
                    .iter()
                    .enumerate()
                    .map(|(i, k)| Expr::Product(vec![Expr::Const(*k), Expr::Var(i).powf(*rho)]))
                    .collect(),
            );
            (weights.len(), scaled(*scale, inner_sum.powf(gamma / rho)))
        }
        (_, Some(s)) => (s.inners.len(), s.compose()),
        (_, None) => unreachable!("parametric product families always carry structure"),
    };

    Ok(FunctionSpec { n, body, family, structure })
}

fn check_univariate(what: &str, e: &Expr, require_var: bool) -> Result<()> {
    match e.max_var() {
        Some(0) => Ok(()),
        None if !require_var => Ok(()),
        None => Err(Error::ArityMismatch(format!("{what} does not depend on its variable"))),
        Some(k) => Err(Error::ArityMismatch(format!(
            "{what} must be univariate over x0, references x{k}"
        ))),
    }
}

/// Builds `F(∏ g_i(x_i))` from an outer expression in `u` (as `x_0`) and
/// univariate inner expressions (each over `x_0`).
pub fn build_quasi_product(outer: Expr, inners: Vec<Expr>) -> Result<FunctionSpec> {
    if inners.len() < 2 {
        return Err(Error::EmptyInnerList);
    }
    check_univariate("outer function", &outer, true)?;
    for (i, g) in inners.iter().enumerate() {
        check_univariate(&format!("inner function g_{}", i + 1), g, true)?;
    }
    let structure = QuasiProductStructure { outer, inners };
    Ok(FunctionSpec {
        n: structure.inners.len(),
        body: structure.compose(),
        family: Family::QuasiProduct,
        structure: Some(structure),
    })
}

/// Builds `∏ g_i(x_i)`, the identity-outer quasi-product.
pub fn build_product(inners: Vec<Expr>) -> Result<FunctionSpec> {
    let mut spec = build_quasi_product(Expr::Var(0), inners)?;
    spec.family = Family::Product;
    Ok(spec)
}

/// Wraps an arbitrary expression over `x_0..x_{n-1}`.
pub fn build_custom(n: usize, body: Expr) -> Result<FunctionSpec> {
    check_arity(n)?;
    if let Some(k) = body.max_var() {
        if k >= n {
            return Err(Error::ArityMismatch(format!("body references x{k} but n = {n}")));
        }
    }
    Ok(FunctionSpec { n, body, family: Family::Custom, structure: None })
}

impl FunctionSpec {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn body(&self) -> &Expr {
        &self.body
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn structure(&self) -> Option<&QuasiProductStructure> {
        self.structure.as_ref()
    }

    pub(crate) fn check_point(&self, p: &Point) -> Result<()> {
        if p.dim() != self.n {
            return Err(Error::InvalidPoint(format!(
                "point has {} coordinates, function has {} inputs",
                p.dim(),
                self.n
            )));
        }
        Ok(())
    }

    /// Evaluates `f(p)`; the result is always finite and strictly positive.
    pub fn evaluate(&self, p: &Point) -> Result<f64> {
        self.check_point(p)?;
        let v = self.body.eval(p.coords()).map_err(|reason| Error::DomainViolation {
            point: p.coords().to_vec(),
            reason,
        })?;
        check_output(v, p)?;
        Ok(v)
    }

    /// Value, gradient and Hessian at `p`.
    pub fn jet(&self, p: &Point) -> Result<diff::SecondOrderJet> {
        diff::jet(self, p)
    }

    /// Samples `region` on a log-uniform grid (5 points per axis, at most 10⁵
    /// points) and reports where the side conditions of the model fail.
    pub fn validate(&self, region: &SampleBox) -> Vec<Diagnostic> {
        validate(self, region)
    }
}

pub(crate) fn check_output(v: f64, p: &Point) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::DomainViolation {
            point: p.coords().to_vec(),
            reason: format!("output {v} is not a finite positive number"),
        })
    }
}

/// Axis-aligned box with strictly positive bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBox {
    bounds: Vec<(f64, f64)>,
}

impl SampleBox {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<SampleBox> {
        if bounds.is_empty() {
            return Err(Error::InvalidGrid("box needs at least one axis".into()));
        }
        for (axis, (lo, hi)) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && *lo > 0.0 && lo < hi) {
                return Err(Error::InvalidGrid(format!(
                    "axis {axis}: need 0 < lo < hi, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(SampleBox { bounds })
    }

    /// `[lo, hi]` on every one of `n` axes.
    pub fn cube(n: usize, lo: f64, hi: f64) -> Result<SampleBox> {
        SampleBox::new(vec![(lo, hi); n])
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    /// `m` log-uniform abscissae on one axis, endpoints included.
    pub(crate) fn axis_with_endpoints(&self, axis: usize, m: usize) -> Vec<f64> {
        let (lo, hi) = self.bounds[axis];
        let ratio = hi / lo;
        (0..m)
            .map(|k| if m == 1 { lo } else { lo * ratio.powf(k as f64 / (m - 1) as f64) })
            .collect()
    }
}

/// One finding from [`FunctionSpec::validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    EvaluationFailed { point: Vec<f64>, reason: String },
    ZeroPartial { point: Vec<f64>, index: usize, value: f64 },
    /// The partial changes sign between two neighbouring grid points along `index`.
    PartialSignChange { from: Vec<f64>, to: Vec<f64>, index: usize },
    ZeroOuterDerivative { point: Vec<f64>, u: f64 },
    ZeroInnerDerivative { point: Vec<f64>, index: usize },
    NonPositiveInner { point: Vec<f64>, index: usize, value: f64 },
}

const VALIDATION_POINTS_PER_AXIS: usize = 5;
const VALIDATION_MAX_POINTS: usize = 100_000;

/// `|v| ≤ 1e-12 · (1 + scale)` is treated as an exact zero.
pub(crate) fn is_negligible(v: f64, scale: f64) -> bool {
    v.abs() <= 1e-12 * (1.0 + scale)
}

fn validate(spec: &FunctionSpec, region: &SampleBox) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let n = spec.n();
    if region.dim() != n {
        out.push(Diagnostic::EvaluationFailed {
            point: vec![],
            reason: format!("region has {} axes, function has {n} inputs", region.dim()),
        });
        return out;
    }

    let mut m = VALIDATION_POINTS_PER_AXIS;
    while m > 2 && m.checked_pow(n as u32).is_none_or(|c| c > VALIDATION_MAX_POINTS) {
        m -= 1;
    }
    let axes: Vec<Vec<f64>> = (0..n).map(|a| region.axis_with_endpoints(a, m)).collect();
    let total = m.checked_pow(n as u32).unwrap_or(usize::MAX).min(VALIDATION_MAX_POINTS);

    // Gradients in grid order, for the neighbour sign-change scan.
    let mut grads: Vec<Option<Vec<f64>>> = Vec::with_capacity(total);
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(total);
    for idx in 0..total {
        let coords: Vec<f64> = multi_index(idx, m, n).iter().enumerate().map(|(a, &k)| axes[a][k]).collect();
        let p = Point(coords.clone());
        let grad = match spec.jet(&p) {
            Ok(j) => {
                let norm = j.gradient_norm();
                for (i, g) in j.gradient.iter().enumerate() {
                    if is_negligible(*g, norm) {
                        out.push(Diagnostic::ZeroPartial { point: coords.clone(), index: i, value: *g });
                    }
                }
                Some(j.gradient)
            }
            Err(e) => {
                out.push(Diagnostic::EvaluationFailed { point: coords.clone(), reason: e.to_string() });
                None
            }
        };
        if let Some(s) = spec.structure() {
            check_structure(s, &coords, &mut out);
        }
        grads.push(grad);
        points.push(coords);
    }

    for idx in 0..total {
        let mi = multi_index(idx, m, n);
        for axis in 0..n {
            if mi[axis] + 1 >= m {
                continue;
            }
            let next = idx + m.pow(axis as u32);
            if next >= total {
                continue;
            }
            if let (Some(a), Some(b)) = (&grads[idx], &grads[next]) {
                for i in 0..n {
                    if a[i] * b[i] < 0.0 {
                        out.push(Diagnostic::PartialSignChange {
                            from: points[idx].clone(),
                            to: points[next].clone(),
                            index: i,
                        });
                    }
                }
            }
        }
    }
    out
}

fn check_structure(s: &QuasiProductStructure, coords: &[f64], out: &mut Vec<Diagnostic>) {
    let mut u = 1.0;
    for (i, g) in s.inners.iter().enumerate() {
        match diff::univariate_jet(g, coords[i]) {
            Ok((gv, g1, _)) => {
                if !(gv > 0.0) {
                    out.push(Diagnostic::NonPositiveInner { point: coords.to_vec(), index: i, value: gv });
                }
                if is_negligible(g1, gv.abs()) {
                    out.push(Diagnostic::ZeroInnerDerivative { point: coords.to_vec(), index: i });
                }
                u *= gv;
            }
            Err(reason) => {
                out.push(Diagnostic::EvaluationFailed { point: coords.to_vec(), reason });
                return;
            }
        }
    }
    match diff::univariate_jet(&s.outer, u) {
        Ok((fv, f1, _)) => {
            if is_negligible(f1, fv.abs()) {
                out.push(Diagnostic::ZeroOuterDerivative { point: coords.to_vec(), u });
            }
        }
        Err(reason) => out.push(Diagnostic::EvaluationFailed { point: coords.to_vec(), reason }),
    }
}

/// Mixed-radix digits of `idx`, axis 0 fastest.
pub(crate) fn multi_index(mut idx: usize, m: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for d in out.iter_mut() {
        *d = idx % m;
        idx /= m;
    }
    out
}
