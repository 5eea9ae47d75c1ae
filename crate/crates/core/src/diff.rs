//! Exact second derivatives by forward-mode propagation, and a
//! central-difference oracle for cross-checking them.
//!
//! Every node of the expression tree carries its value, its full gradient and
//! the upper triangle of its Hessian. Only the upper triangle is ever computed;
//! the public [`SecondOrderJet`] mirrors it, so `hessian[i][j]` and
//! `hessian[j][i]` are the same `f64`.

use serde::Serialize;

use crate::catalog::{check_output, FunctionSpec, Point};
use crate::error::{Error, Result};
use crate::expr::{interpret, Context, Expr, Scalar};

/// Value, gradient and Hessian of a function at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondOrderJet {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: Vec<Vec<f64>>,
}

impl SecondOrderJet {
    /// Assembles a jet by hand. The Hessian must be square, match the gradient
    /// length and be exactly symmetric.
    pub fn from_parts(value: f64, gradient: Vec<f64>, hessian: Vec<Vec<f64>>) -> Result<Self> {
        let n = gradient.len();
        if hessian.len() != n || hessian.iter().any(|row| row.len() != n) {
            return Err(Error::IndexError(format!("hessian must be {n}×{n}")));
        }
        for i in 0..n {
            for j in 0..i {
                if hessian[i][j] != hessian[j][i] {
                    return Err(Error::IndexError(format!("hessian not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(SecondOrderJet { value, gradient, hessian })
    }

    pub fn n(&self) -> usize {
        self.gradient.len()
    }

    /// Euclidean norm of the gradient.
    pub fn gradient_norm(&self) -> f64 {
        self.gradient.iter().map(|g| g * g).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.gradient.iter().all(|g| g.is_finite())
            && self.hessian.iter().flatten().all(|h| h.is_finite())
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::IndexError(format!("index {i} out of range for {} inputs", self.n())))
        }
    }
}

/// Second-order forward-mode number: value, gradient, packed upper Hessian.
#[derive(Debug, Clone)]
struct Dual2 {
    v: f64,
    g: Vec<f64>,
    h: Vec<f64>,
}

fn packed_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Visits `(i, j, packed index)` for `i ≤ j`, row-major.
fn for_upper(n: usize, mut f: impl FnMut(usize, usize, usize)) {
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            f(i, j, k);
            k += 1;
        }
    }
}

impl Dual2 {
    fn constant(c: f64, n: usize) -> Dual2 {
        Dual2 { v: c, g: vec![0.0; n], h: vec![0.0; packed_len(n)] }
    }

    fn n(&self) -> usize {
        self.g.len()
    }

    fn into_jet(self) -> SecondOrderJet {
        let n = self.n();
        let mut hessian = vec![vec![0.0; n]; n];
        for_upper(n, |i, j, k| {
            hessian[i][j] = self.h[k];
            hessian[j][i] = self.h[k];
        });
        SecondOrderJet { value: self.v, gradient: self.g, hessian }
    }
}

impl Scalar for Dual2 {
    fn value(&self) -> f64 {
        self.v
    }

    fn add(&self, o: &Dual2) -> Dual2 {
        Dual2 {
            v: self.v + o.v,
            g: self.g.iter().zip(&o.g).map(|(a, b)| a + b).collect(),
            h: self.h.iter().zip(&o.h).map(|(a, b)| a + b).collect(),
        }
    }

    fn mul(&self, o: &Dual2) -> Dual2 {
        let n = self.n();
        let g = (0..n).map(|i| self.g[i] * o.v + self.v * o.g[i]).collect();
        let mut h = vec![0.0; packed_len(n)];
        for_upper(n, |i, j, k| {
            h[k] = self.h[k] * o.v + self.v * o.h[k] + self.g[i] * o.g[j] + self.g[j] * o.g[i];
        });
        Dual2 { v: self.v * o.v, g, h }
    }

    fn div(&self, o: &Dual2) -> Dual2 {
        let n = self.n();
        let q = self.v / o.v;
        let g: Vec<f64> = (0..n).map(|i| (self.g[i] - q * o.g[i]) / o.v).collect();
        let mut h = vec![0.0; packed_len(n)];
        for_upper(n, |i, j, k| {
            h[k] = (self.h[k] - q * o.h[k] - g[i] * o.g[j] - g[j] * o.g[i]) / o.v;
        });
        Dual2 { v: q, g, h }
    }

    fn neg(&self) -> Dual2 {
        Dual2 {
            v: -self.v,
            g: self.g.iter().map(|x| -x).collect(),
            h: self.h.iter().map(|x| -x).collect(),
        }
    }

    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Dual2 {
        let n = self.n();
        let g = self.g.iter().map(|x| f1 * x).collect();
        let mut h = vec![0.0; packed_len(n)];
        for_upper(n, |i, j, k| {
            h[k] = f1 * self.h[k] + f2 * self.g[i] * self.g[j];
        });
        Dual2 { v: f0, g, h }
    }
}

struct JetCtx<'a>(&'a [f64]);

impl Context for JetCtx<'_> {
    type S = Dual2;

    fn var(&self, index: usize) -> Result<Dual2, String> {
        let n = self.0.len();
        let v = *self
            .0
            .get(index)
            .ok_or_else(|| format!("variable x{index} out of range for {n} inputs"))?;
        let mut d = Dual2::constant(v, n);
        d.g[index] = 1.0;
        Ok(d)
    }

    fn constant(&self, c: f64) -> Dual2 {
        Dual2::constant(c, self.0.len())
    }
}

/// Exact value, gradient and Hessian of `spec` at `p`.
pub fn jet(spec: &FunctionSpec, p: &Point) -> Result<SecondOrderJet> {
    spec.check_point(p)?;
    let d = interpret(spec.body(), &JetCtx(p.coords()))
        .map_err(|reason| Error::DomainViolation { point: p.coords().to_vec(), reason })?;
    check_output(d.v, p)?;
    let j = d.into_jet();
    if !j.is_finite() {
        return Err(Error::DomainViolation {
            point: p.coords().to_vec(),
            reason: "non-finite derivative".into(),
        });
    }
    Ok(j)
}

/// `(φ(t), φ′(t), φ″(t))` for a univariate expression over `x_0`.
pub fn univariate_jet(expr: &Expr, t: f64) -> Result<(f64, f64, f64), String> {
    let d = interpret(expr, &JetCtx(&[t]))?;
    Ok((d.v, d.g[0], d.h[0]))
}

/// Default relative step for [`fd_oracle`].
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Central-difference gradient and Hessian, both `O(h²)`.
///
/// Axis `i` uses the step `h · max(1, |p_i|)`.
pub fn fd_oracle(spec: &FunctionSpec, p: &Point, h: f64) -> Result<SecondOrderJet> {
    spec.check_point(p)?;
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::IndexError(format!("step must be positive, got {h}")));
    }
    let n = p.dim();
    let x = p.coords();
    let steps: Vec<f64> = x.iter().map(|xi| h * xi.abs().max(1.0)).collect();
    for axis in 0..n {
        if x[axis] - steps[axis] <= 0.0 {
            return Err(Error::StencilOutOfDomain { point: x.to_vec(), axis });
        }
    }
    let eval = |offsets: &[(usize, f64)]| -> Result<f64> {
        let mut q = x.to_vec();
        for &(axis, s) in offsets {
            q[axis] += s * steps[axis];
        }
        spec.evaluate(&Point::new(q)?)
    };

    let value = eval(&[])?;
    let mut gradient = vec![0.0; n];
    let mut hessian = vec![vec![0.0; n]; n];
    for i in 0..n {
        let fp = eval(&[(i, 1.0)])?;
        let fm = eval(&[(i, -1.0)])?;
        gradient[i] = (fp - fm) / (2.0 * steps[i]);
        hessian[i][i] = (fp - 2.0 * value + fm) / (steps[i] * steps[i]);
        for j in (i + 1)..n {
            let fpp = eval(&[(i, 1.0), (j, 1.0)])?;
            let fpm = eval(&[(i, 1.0), (j, -1.0)])?;
            let fmp = eval(&[(i, -1.0), (j, 1.0)])?;
            let fmm = eval(&[(i, -1.0), (j, -1.0)])?;
            let hij = (fpp - fpm - fmp + fmm) / (4.0 * steps[i] * steps[j]);
            hessian[i][j] = hij;
            hessian[j][i] = hij;
        }
    }
    Ok(SecondOrderJet { value, gradient, hessian })
}

/// Univariate pieces of a quasi-product `F(∏ g_i)` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiProductParts {
    pub u: f64,
    /// `(F, F′, F″)` at `u`.
    pub outer: (f64, f64, f64),
    /// `(g_i, g_i′, g_i″)` at `x_i`.
    pub inners: Vec<(f64, f64, f64)>,
}

impl QuasiProductParts {
    pub fn of(spec: &FunctionSpec, p: &Point) -> Result<QuasiProductParts> {
        spec.check_point(p)?;
        let s = spec.structure().ok_or(Error::StructureMissing)?;
        let dv = |reason: String| Error::DomainViolation { point: p.coords().to_vec(), reason };
        let mut u = 1.0;
        let mut inners = Vec::with_capacity(s.inners.len());
        for (i, g) in s.inners.iter().enumerate() {
            let gj = univariate_jet(g, p[i]).map_err(dv)?;
            if !(gj.0 > 0.0) {
                return Err(dv(format!("inner g_{} = {} is not positive", i + 1, gj.0)));
            }
            u *= gj.0;
            inners.push(gj);
        }
        let outer = univariate_jet(&s.outer, u).map_err(dv)?;
        Ok(QuasiProductParts { u, outer, inners })
    }

    /// `g_i′/g_i` and its derivative `(g_i′/g_i)′ = g_i″/g_i − (g_i′/g_i)²`.
    pub fn log_derivatives(&self) -> Vec<(f64, f64)> {
        self.inners
            .iter()
            .map(|&(g, g1, g2)| {
                let r = g1 / g;
                (r, g2 / g - r * r)
            })
            .collect()
    }
}

/// Jet of a quasi-product assembled by the chain rule from its univariate
/// pieces: `f_i = uF′ r_i`, `f_ii = u²F″ r_i² + uF′ g_i″/g_i`,
/// `f_ij = u(uF″ + F′) r_i r_j` with `r_i = g_i′/g_i`.
pub fn chain_rule_jet(spec: &FunctionSpec, p: &Point) -> Result<SecondOrderJet> {
    let parts = QuasiProductParts::of(spec, p)?;
    let (fv, f1, f2) = parts.outer;
    let u = parts.u;
    let n = parts.inners.len();
    let r: Vec<f64> = parts.inners.iter().map(|&(g, g1, _)| g1 / g).collect();
    let gradient = r.iter().map(|ri| u * f1 * ri).collect();
    let mut hessian = vec![vec![0.0; n]; n];
    for i in 0..n {
        let (g, _, g2) = parts.inners[i];
        hessian[i][i] = u * u * f2 * r[i] * r[i] + u * f1 * g2 / g;
        for j in (i + 1)..n {
            let hij = u * (u * f2 + f1) * r[i] * r[j];
            hessian[i][j] = hij;
            hessian[j][i] = hij;
        }
    }
    Ok(SecondOrderJet { value: fv, gradient, hessian })
}
