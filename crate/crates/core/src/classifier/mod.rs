//! Grid-based checks of curvature and substitution predicates.
//!
//! A predicate such as "the Gauss-Kronecker curvature vanishes" is judged to
//! hold when it holds at every point of a deterministic [`SampleGrid`], within
//! a [`TolerancePolicy`]. Zero tests are noise-scaled: the absolute floor
//! `zero_abs` is widened by `zero_rel` times the grid maximum of the natural
//! magnitude of the terms that cancel in the quantity being tested.

mod fixtures;

pub use fixtures::{catalog_fixtures, verify_catalog, Expectation, ExpectationOutcome, Fixture, TheoremReport};

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{FunctionSpec, Point, SampleBox};
use crate::diff::{jet, SecondOrderJet};
use crate::economics::{hicks_elasticity, mrs, output_elasticity};
use crate::error::{Error, Result};
use crate::geometry::{gauss_kronecker, mean_curvature_of_jet, riemann_component, sectional_curvature, slope_w};
use crate::json::SCHEMA_VERSION;

/// Default number of seeded jitter points added to the tensor grid.
pub const DEFAULT_EXTRA_POINTS: usize = 32;
const MAX_TENSOR_POINTS: usize = 100_000;

/// Log-uniform tensor grid strictly inside a box, plus seeded jitter points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleGrid {
    #[serde(rename = "box")]
    sample_box: SampleBox,
    points_per_axis: usize,
    seed: u64,
    extra_points: usize,
}

impl SampleGrid {
    pub fn new(sample_box: SampleBox, points_per_axis: usize, seed: u64) -> Result<SampleGrid> {
        if points_per_axis < 2 {
            return Err(Error::InvalidGrid(format!("points_per_axis must be ≥ 2, got {points_per_axis}")));
        }
        Ok(SampleGrid { sample_box, points_per_axis, seed, extra_points: DEFAULT_EXTRA_POINTS })
    }

    pub fn with_extra_points(mut self, extra: usize) -> SampleGrid {
        self.extra_points = extra;
        self
    }

    /// `[0.5, 2]ⁿ` with 7 points per axis up to three inputs, 4 for four or
    /// five, 3 beyond.
    pub fn default_for(n: usize) -> SampleGrid {
        let ppa = match n {
            0..=3 => 7,
            4 | 5 => 4,
            _ => 3,
        };
        SampleGrid::new(SampleBox::cube(n.max(1), 0.5, 2.0).expect("default box is valid"), ppa, 0x5eed)
            .expect("default grid is valid")
    }

    pub fn sample_box(&self) -> &SampleBox {
        &self.sample_box
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.sample_box.dim()
    }

    /// Tensor points (axis 0 fastest) followed by the jitter points.
    pub fn points(&self) -> Vec<Point> {
        let n = self.dim();
        let m = self.points_per_axis;
        let bounds = self.sample_box.bounds();
        let axes: Vec<Vec<f64>> = bounds
            .iter()
            .map(|&(lo, hi)| {
                (0..m)
                    .map(|k| lo * (hi / lo).powf((k + 1) as f64 / (m + 1) as f64))
                    .collect()
            })
            .collect();
        let total = m.checked_pow(n as u32).unwrap_or(usize::MAX).min(MAX_TENSOR_POINTS);
        let mut out = Vec::with_capacity(total + self.extra_points);
        for idx in 0..total {
            let mi = crate::catalog::multi_index(idx, m, n);
            let c = mi.iter().enumerate().map(|(a, &k)| axes[a][k]).collect();
            out.push(Point::new(c).expect("grid points are positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.extra_points {
            let c = bounds
                .iter()
                .map(|&(lo, hi)| loop {
                    let t: f64 = rng.gen();
                    let x = lo * (hi / lo).powf(t);
                    if x > lo && x < hi {
                        break x;
                    }
                })
                .collect();
            out.push(Point::new(c).expect("jitter points are positive"));
        }
        out
    }
}

/// Thresholds for zero and constancy tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TolerancePolicy {
    pub zero_abs: f64,
    pub zero_rel: f64,
    /// Largest accepted `(max − min) / |mean|` for a quantity to count as constant.
    pub constancy_rel: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy { zero_abs: 1e-9, zero_rel: 1e-9, constancy_rel: 1e-6 }
    }
}

impl TolerancePolicy {
    pub fn new(zero_abs: f64, zero_rel: f64, constancy_rel: f64) -> Result<TolerancePolicy> {
        for (name, v) in [("zero_abs", zero_abs), ("zero_rel", zero_rel), ("constancy_rel", constancy_rel)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidGrid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(TolerancePolicy { zero_abs, zero_rel, constancy_rel })
    }
}

/// Predicates reported by [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    /// `K = 0`.
    VanishingGk,
    /// The components `R(i, j, j, i)`, `i < j`, vanish.
    Flat,
    /// Every independent component `R(i, j, k, l)`, `i < j`, `k < l`, vanishes.
    RiemannVanishes,
    /// `H = 0`.
    Minimal,
    /// Every coordinate-plane sectional curvature `K_ij` vanishes.
    VanishingSectional,
    /// `MRS_ij = x_i / x_j` for all pairs.
    ProportionalMrs,
    ConstantElasticity(usize),
    /// The Hicks elasticity is one constant for all pairs and points.
    Ces,
}

impl Property {
    pub fn name(&self) -> String {
        match self {
            Property::VanishingGk => "vanishing_gk".into(),
            Property::Flat => "flat".into(),
            Property::RiemannVanishes => "riemann_vanishes".into(),
            Property::Minimal => "minimal".into(),
            Property::VanishingSectional => "vanishing_sectional".into(),
            Property::ProportionalMrs => "proportional_mrs".into(),
            Property::ConstantElasticity(i) => format!("constant_elasticity({i})"),
            Property::Ces => "ces".into(),
        }
    }
}

/// Outcome of one predicate over a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyVerdict {
    pub property: String,
    pub holds: bool,
    pub worst_point: Vec<f64>,
    /// Largest per-point metric, or the relative spread for constancy tests.
    /// `holds` iff `worst_value ≤ threshold_used`.
    pub worst_value: f64,
    pub threshold_used: f64,
    /// Smallest per-point metric, for pointwise predicates.
    pub min_value: Option<f64>,
}

/// Every predicate of [`Property`] evaluated over one grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationVerdict {
    pub schema_version: &'static str,
    pub family: &'static str,
    pub n: usize,
    pub points_evaluated: usize,
    pub tolerance: TolerancePolicy,
    pub properties: Vec<PropertyVerdict>,
    /// Grid mean of the Hicks elasticity, when it is defined everywhere.
    pub sigma_estimate: Option<f64>,
}

impl ClassificationVerdict {
    pub fn get(&self, p: Property) -> Option<&PropertyVerdict> {
        let name = p.name();
        self.properties.iter().find(|v| v.property == name)
    }

    pub fn holds(&self, p: Property) -> bool {
        self.get(p).is_some_and(|v| v.holds)
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
        == Ordering::Less
}

/// Running max (with lexicographic tie-break), min and noise scale of a
/// pointwise metric.
struct Pointwise {
    max: f64,
    argmax: Vec<f64>,
    min: f64,
    scale: f64,
}

impl Pointwise {
    fn new() -> Pointwise {
        Pointwise { max: f64::NEG_INFINITY, argmax: vec![], min: f64::INFINITY, scale: 0.0 }
    }

    fn push(&mut self, value: f64, scale: f64, point: &[f64]) {
        let value = if value.is_nan() { f64::INFINITY } else { value };
        if value > self.max || (value == self.max && lex_less(point, &self.argmax)) {
            self.max = value;
            self.argmax = point.to_vec();
        }
        self.min = self.min.min(value);
        if scale.is_finite() {
            self.scale = self.scale.max(scale);
        }
    }

    fn zero_verdict(self, p: Property, tol: &TolerancePolicy) -> PropertyVerdict {
        let threshold = tol.zero_abs + tol.zero_rel * self.scale;
        self.verdict(p, threshold)
    }

    fn verdict(self, p: Property, threshold: f64) -> PropertyVerdict {
        PropertyVerdict {
            property: p.name(),
            holds: self.max <= threshold,
            worst_point: self.argmax,
            worst_value: self.max,
            threshold_used: threshold,
            min_value: Some(self.min),
        }
    }
}

/// Relative spread of a sample, with the constant-zero rule for tiny means.
fn constancy(values: &[(f64, Vec<f64>)], p: Property, tol: &TolerancePolicy) -> PropertyVerdict {
    let count = values.len() as f64;
    let mean = values.iter().map(|(v, _)| v).sum::<f64>() / count;
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (v, _)| (lo.min(*v), hi.max(*v)));
    let spread = hi - lo;
    let metric = if mean.abs() < tol.zero_abs { spread } else { spread / mean.abs() };
    let mut worst: Option<(f64, &Vec<f64>)> = None;
    for (v, pt) in values {
        let d = (v - mean).abs();
        match worst {
            Some((wd, wp)) if d < wd || (d == wd && !lex_less(pt, wp)) => {}
            _ => worst = Some((d, pt)),
        }
    }
    PropertyVerdict {
        property: p.name(),
        holds: metric <= tol.constancy_rel,
        worst_point: worst.map(|(_, p)| p.clone()).unwrap_or_default(),
        worst_value: metric,
        threshold_used: tol.constancy_rel,
        min_value: None,
    }
}

fn row_norm(row: &[f64]) -> f64 {
    row.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
}

/// Hicks elasticities for all pairs `i < j` at one point.
fn hicks_all(j: &SecondOrderJet, p: &Point) -> Result<Vec<f64>> {
    pairs(j.n()).map(|(a, b)| hicks_elasticity(j, p, a, b).map_err(|e| e.at(p.coords()))).collect()
}

/// Evaluates every [`Property`] of `spec` over `grid`.
pub fn classify(spec: &FunctionSpec, grid: &SampleGrid, tol: &TolerancePolicy) -> Result<ClassificationVerdict> {
    let n = spec.n();
    if grid.dim() != n {
        return Err(Error::InvalidGrid(format!("grid has {} axes, function has {n} inputs", grid.dim())));
    }
    let points = grid.points();

    let mut gk = Pointwise::new();
    let mut flat = Pointwise::new();
    let mut full = Pointwise::new();
    let mut minimal = Pointwise::new();
    let mut sectional = Pointwise::new();
    let mut prop_mrs = Pointwise::new();
    let mut elasticities: Vec<Vec<(f64, Vec<f64>)>> = vec![Vec::with_capacity(points.len()); n];
    let mut hicks: std::result::Result<Vec<(f64, Vec<f64>)>, Vec<f64>> = Ok(Vec::new());

    for p in &points {
        let x = p.coords();
        let j = jet(spec, p)?;
        let w = slope_w(&j);
        let (g, h) = (&j.gradient, &j.hessian);
        let norms: Vec<f64> = h.iter().map(|r| row_norm(r)).collect();
        let w2 = w * w;
        let w4 = w2 * w2;

        gk.push(gauss_kronecker(&j).abs(), norms.iter().product::<f64>() / w.powi(n as i32 + 2), x);

        let max_norm = norms.iter().cloned().fold(0.0, f64::max);
        let r_scale = max_norm * max_norm / w4;
        let mut canon = 0.0f64;
        let mut all = 0.0f64;
        let mut sect = 0.0f64;
        let mut sect_scale = 0.0f64;
        for (a, b) in pairs(n) {
            canon = canon.max(riemann_component(&j, a, b, b, a)?.abs());
            for (c, d) in pairs(n) {
                all = all.max(riemann_component(&j, a, b, c, d)?.abs());
            }
            sect = sect.max(sectional_curvature(&j, a, b)?.abs());
            let denom = w2 * (1.0 + g[a] * g[a] + g[b] * g[b]);
            sect_scale = sect_scale.max((h[a][a] * h[b][b]).abs().max(h[a][b] * h[a][b]) / denom);
        }
        flat.push(canon, r_scale, x);
        full.push(all, r_scale, x);
        sectional.push(sect, sect_scale, x);

        let trace_scale: f64 = (0..n).map(|i| h[i][i].abs()).sum::<f64>() / w;
        let mut quad_scale = 0.0;
        for a in 0..n {
            for b in 0..n {
                quad_scale += (g[a] * g[b] * h[a][b]).abs();
            }
        }
        minimal.push(mean_curvature_of_jet(&j).abs(), (trace_scale + quad_scale / (w2 * w)) / n as f64, x);

        let mut dev = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    let m = mrs(&j, a, b).map_err(|e| e.at(x))?;
                    dev = dev.max((m * x[b] / x[a] - 1.0).abs());
                }
            }
        }
        prop_mrs.push(dev, 0.0, x);

        for (i, acc) in elasticities.iter_mut().enumerate() {
            acc.push((output_elasticity(&j, p, i)?, x.to_vec()));
        }

        if let Ok(acc) = &mut hicks {
            match hicks_all(&j, p) {
                Ok(vals) => acc.extend(vals.into_iter().map(|v| (v, x.to_vec()))),
                Err(_) => hicks = Err(x.to_vec()),
            }
        }
    }

    let mut properties = vec![
        gk.zero_verdict(Property::VanishingGk, tol),
        flat.zero_verdict(Property::Flat, tol),
        full.zero_verdict(Property::RiemannVanishes, tol),
        minimal.zero_verdict(Property::Minimal, tol),
        sectional.zero_verdict(Property::VanishingSectional, tol),
        prop_mrs.verdict(Property::ProportionalMrs, tol.constancy_rel),
    ];
    for (i, vals) in elasticities.iter().enumerate() {
        properties.push(constancy(vals, Property::ConstantElasticity(i), tol));
    }
    let sigma_estimate = match &hicks {
        Ok(vals) => {
            properties.push(constancy(vals, Property::Ces, tol));
            Some(vals.iter().map(|(v, _)| v).sum::<f64>() / vals.len() as f64)
        }
        Err(at) => {
            properties.push(PropertyVerdict {
                property: Property::Ces.name(),
                holds: false,
                worst_point: at.clone(),
                worst_value: f64::INFINITY,
                threshold_used: tol.constancy_rel,
                min_value: None,
            });
            None
        }
    };

    Ok(ClassificationVerdict {
        schema_version: SCHEMA_VERSION,
        family: spec.family().tag(),
        n,
        points_evaluated: points.len(),
        tolerance: *tol,
        properties,
        sigma_estimate,
    })
}

/// Grid mean and spread of the Hicks elasticity over all pairs and points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaEstimate {
    pub sigma: f64,
    /// `max − min`.
    pub spread: f64,
}

impl SigmaEstimate {
    /// The constancy criterion of [`Property::Ces`].
    pub fn is_ces(&self, tol: &TolerancePolicy) -> bool {
        let metric = if self.sigma.abs() < tol.zero_abs { self.spread } else { self.spread / self.sigma.abs() };
        metric <= tol.constancy_rel
    }
}

pub fn estimate_sigma(spec: &FunctionSpec, grid: &SampleGrid) -> Result<SigmaEstimate> {
    if grid.dim() != spec.n() {
        return Err(Error::InvalidGrid(format!("grid has {} axes, function has {} inputs", grid.dim(), spec.n())));
    }
    let mut vals = Vec::new();
    for p in grid.points() {
        let j = jet(spec, &p)?;
        vals.extend(hicks_all(&j, &p)?);
    }
    let sigma = vals.iter().sum::<f64>() / vals.len() as f64;
    let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    Ok(SigmaEstimate { sigma, spread: hi - lo })
}
