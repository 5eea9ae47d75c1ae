//! Curvature of the production hypersurface `x ↦ (x, f(x))`.
//!
//! All quantities are closed-form in the jet of `f`:
//!
//! | quantity | formula |
//! |---|---|
//! | slope factor | `w = √(1 + Σ f_i²)` |
//! | Gauss-Kronecker | `K = det(f_ij) / w^{n+2}` |
//! | mean | `H = (1/n) Σ_i ∂_i(f_i / w)` |
//! | sectional | `K_ij = (f_ii f_jj − f_ij²) / (w² (1 + f_i² + f_j²))` |
//! | Riemann | `R_ijkl = (f_il f_jk − f_ik f_jl) / w⁴` |

use serde::Serialize;

use crate::catalog::{FunctionSpec, Point};
use crate::diff::{jet, QuasiProductParts, SecondOrderJet};
use crate::error::{Error, Result};
use crate::linalg::determinant;

pub fn slope_w(jet: &SecondOrderJet) -> f64 {
    (1.0 + jet.gradient.iter().map(|g| g * g).sum::<f64>()).sqrt()
}

pub fn gauss_kronecker(jet: &SecondOrderJet) -> f64 {
    let w = slope_w(jet);
    determinant(&jet.hessian) / w.powi(jet.n() as i32 + 2)
}

/// Mean curvature from the expanded divergence
/// `(1/n) [Σ_i f_ii / w − Σ_{i,j} f_i f_j f_ij / w³]`.
///
/// The sign follows from this expansion, i.e. from the upward normal.
pub fn mean_curvature_of_jet(jet: &SecondOrderJet) -> f64 {
    let n = jet.n();
    let w = slope_w(jet);
    let trace: f64 = (0..n).map(|i| jet.hessian[i][i]).sum();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += jet.gradient[i] * jet.gradient[j] * jet.hessian[i][j];
        }
    }
    (trace / w - quad / (w * w * w)) / n as f64
}

pub fn mean_curvature(spec: &FunctionSpec, p: &Point) -> Result<f64> {
    Ok(mean_curvature_of_jet(&jet(spec, p)?))
}

/// Left side of the polynomial minimality condition
/// `Σ_i f_ii + Σ_{i≠j} (f_i² f_jj − f_i f_j f_ij)`.
///
/// Equals `n · w³ · H`, so it vanishes exactly where `H` does.
pub fn minimality_residual(jet: &SecondOrderJet) -> f64 {
    let n = jet.n();
    let (g, h) = (&jet.gradient, &jet.hessian);
    let mut acc: f64 = (0..n).map(|i| h[i][i]).sum();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += g[i] * g[i] * h[j][j] - g[i] * g[j] * h[i][j];
            }
        }
    }
    acc
}

pub fn sectional_curvature(jet: &SecondOrderJet, i: usize, j: usize) -> Result<f64> {
    jet.check_index(i)?;
    jet.check_index(j)?;
    if i == j {
        return Err(Error::IndexError(format!("sectional curvature needs i ≠ j, got ({i}, {i})")));
    }
    let (g, h) = (&jet.gradient, &jet.hessian);
    let w = slope_w(jet);
    let num = h[i][i] * h[j][j] - h[i][j] * h[i][j];
    Ok(num / (w * w * (1.0 + g[i] * g[i] + g[j] * g[j])))
}

/// `g(R(∂_i, ∂_j)∂_k, ∂_l)`.
pub fn riemann_component(jet: &SecondOrderJet, i: usize, j: usize, k: usize, l: usize) -> Result<f64> {
    for idx in [i, j, k, l] {
        jet.check_index(idx)?;
    }
    let h = &jet.hessian;
    let w2 = 1.0 + jet.gradient.iter().map(|g| g * g).sum::<f64>();
    Ok((h[i][l] * h[j][k] - h[i][k] * h[j][l]) / (w2 * w2))
}

/// Hessian determinant of `F(∏ g_i)` from univariate data only:
///
/// `(uF′)ⁿ [∏_j r_j′ + (1 + uF″/F′) Σ_j r_j² ∏_{i≠j} r_i′]`, `r_i = g_i′/g_i`.
pub fn quasi_product_hessian_det(spec: &FunctionSpec, p: &Point) -> Result<f64> {
    let parts = QuasiProductParts::of(spec, p)?;
    let (_, f1, f2) = parts.outer;
    let u = parts.u;
    if f1 == 0.0 || !f1.is_finite() {
        return Err(Error::DegenerateOuter { u });
    }
    let logs = parts.log_derivatives();
    let n = logs.len();
    let all: f64 = logs.iter().map(|(_, rp)| rp).product();
    let mut sum = 0.0;
    for j in 0..n {
        let others: f64 = (0..n).filter(|&i| i != j).map(|i| logs[i].1).product();
        sum += logs[j].0 * logs[j].0 * others;
    }
    Ok((u * f1).powi(n as i32) * (all + (1.0 + u * f2 / f1) * sum))
}

/// One Riemann component with its index quadruple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiemannEntry {
    pub indices: [usize; 4],
    pub value: f64,
}

/// Curvature invariants of the hypersurface at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub point: Point,
    pub w: f64,
    pub gauss_kronecker: f64,
    pub mean: f64,
    /// `K_ij` off the diagonal; the diagonal is `None`.
    pub sectional: Vec<Vec<Option<f64>>>,
    /// The components `(i, j, j, i)` for `i < j`, then any requested extras.
    pub riemann: Vec<RiemannEntry>,
}

impl CurvatureSample {
    pub fn at(spec: &FunctionSpec, p: &Point) -> Result<CurvatureSample> {
        let j = jet(spec, p)?;
        CurvatureSample::from_jet(p.clone(), &j, &[])
    }

    pub fn from_jet(point: Point, jet: &SecondOrderJet, extra: &[[usize; 4]]) -> Result<CurvatureSample> {
        let n = jet.n();
        let mut sectional = vec![vec![None; n]; n];
        let mut riemann = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let k = sectional_curvature(jet, i, j)?;
                sectional[i][j] = Some(k);
                sectional[j][i] = Some(k);
                riemann.push(RiemannEntry { indices: [i, j, j, i], value: riemann_component(jet, i, j, j, i)? });
            }
        }
        for q in extra {
            riemann.push(RiemannEntry { indices: *q, value: riemann_component(jet, q[0], q[1], q[2], q[3])? });
        }
        Ok(CurvatureSample {
            point,
            w: slope_w(jet),
            gauss_kronecker: gauss_kronecker(jet),
            mean: mean_curvature_of_jet(jet),
            sectional,
            riemann,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_custom, build_family, build_quasi_product, Family};
    use crate::expr::Expr;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn jet_of(grad: &[f64], hess: &[&[f64]]) -> SecondOrderJet {
        SecondOrderJet::from_parts(1.0, grad.to_vec(), hess.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn paraboloid() -> SecondOrderJet {
        // x1² + x2² at (1, 1)
        jet_of(&[2.0, 2.0], &[&[2.0, 0.0], &[0.0, 2.0]])
    }

    fn sqrt_cd() -> SecondOrderJet {
        jet_of(&[0.5, 0.5], &[&[-0.25, 0.25], &[0.25, -0.25]])
    }

    #[test]
    fn slope_factor_values() {
        assert_eq!(slope_w(&jet_of(&[0.0, 0.0], &[&[0.0, 0.0], &[0.0, 0.0]])), 1.0);
        assert!((slope_w(&sqrt_cd()) - 1.2247448714).abs() < 1e-10);
        assert_eq!(slope_w(&jet_of(&[3.0, 4.0], &[&[0.0, 0.0], &[0.0, 0.0]])), 26f64.sqrt());
    }

    #[test]
    fn gauss_kronecker_values() {
        assert_eq!(gauss_kronecker(&sqrt_cd()), 0.0);
        assert!((gauss_kronecker(&paraboloid()) - 4.0 / 81.0).abs() < 1e-15);
    }

    #[test]
    fn mean_curvature_values() {
        let h = mean_curvature_of_jet(&sqrt_cd());
        assert!((h.abs() - 0.5 / 1.5f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((h.abs() - 0.2041).abs() < 1e-4);
        let hp = mean_curvature_of_jet(&paraboloid());
        assert!((hp - (2.0 / 3.0 - 8.0 / 27.0)).abs() < 1e-15);
        let lin = build_custom(2, Expr::constant(2.0) * Expr::var(0) + Expr::var(1)).unwrap();
        assert_eq!(mean_curvature(&lin, &pt(&[1.0, 1.0])).unwrap(), 0.0);
    }

    #[test]
    fn mean_curvature_matches_finite_difference_of_divergence() {
        // H = (1/n) Σ ∂_i (f_i / w), differentiate f_i / w numerically using exact gradients.
        let f = build_family(Family::Transcendental { scale: 1.2, powers: vec![0.3, 0.6], rates: vec![0.2, -0.1] })
            .unwrap();
        let p = [1.3, 0.8];
        let h = 1e-5;
        let mut div = 0.0;
        for i in 0..2 {
            let ratio = |x: &[f64]| {
                let j = jet(&f, &pt(x)).unwrap();
                j.gradient[i] / slope_w(&j)
            };
            let mut up = p;
            let mut dn = p;
            up[i] += h;
            dn[i] -= h;
            div += (ratio(&up) - ratio(&dn)) / (2.0 * h);
        }
        let exact = mean_curvature(&f, &pt(&p)).unwrap();
        assert!((exact - div / 2.0).abs() < 1e-8, "{exact} vs {}", div / 2.0);
    }

    #[test]
    fn residual_is_scaled_mean_curvature() {
        for j in [paraboloid(), sqrt_cd()] {
            let w = slope_w(&j);
            let scaled = 2.0 * w.powi(3) * mean_curvature_of_jet(&j);
            assert!((minimality_residual(&j) - scaled).abs() < 1e-12);
        }
    }

    #[test]
    fn sectional_values_and_errors() {
        assert!((sectional_curvature(&paraboloid(), 0, 1).unwrap() - 4.0 / 81.0).abs() < 1e-15);
        assert_eq!(sectional_curvature(&sqrt_cd(), 0, 1).unwrap(), 0.0);
        assert!(matches!(sectional_curvature(&sqrt_cd(), 1, 1), Err(Error::IndexError(_))));
        assert!(matches!(sectional_curvature(&sqrt_cd(), 0, 2), Err(Error::IndexError(_))));
    }

    #[test]
    fn riemann_values() {
        let p = paraboloid();
        assert!((riemann_component(&p, 0, 1, 1, 0).unwrap() - 4.0 / 81.0).abs() < 1e-15);
        assert_eq!(riemann_component(&p, 1, 1, 0, 1).unwrap(), 0.0);
        assert!(riemann_component(&p, 0, 1, 1, 5).is_err());
        let f = build_custom(2, Expr::constant(1.5) * (Expr::constant(0.4) * Expr::var(0) + Expr::constant(-0.7) * Expr::var(1)).exp())
            .unwrap();
        let j = jet(&f, &pt(&[1.1, 0.6])).unwrap();
        for q in [[0, 1, 1, 0], [0, 1, 0, 1], [0, 0, 1, 1]] {
            assert!(riemann_component(&j, q[0], q[1], q[2], q[3]).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn quasi_product_determinant_examples() {
        let x = Expr::var(0);
        let flat = build_quasi_product(
            x.clone(),
            vec![(Expr::constant(0.3) * x.clone()).exp(), (Expr::constant(-1.2) * x.clone()).exp()],
        )
        .unwrap();
        assert!(quasi_product_hessian_det(&flat, &pt(&[0.9, 1.4])).unwrap().abs() < 1e-15);

        let root = build_quasi_product(x.clone(), vec![x.clone().powf(0.5), x.clone().powf(0.5)]).unwrap();
        assert_eq!(quasi_product_hessian_det(&root, &pt(&[1.0, 1.0])).unwrap(), 0.0);

        let sq = build_quasi_product(x.clone().powf(2.0), vec![x.clone(), x.clone()]).unwrap();
        let j = jet(&sq, &pt(&[1.0, 1.0])).unwrap();
        assert_eq!(j.hessian, vec![vec![2.0, 4.0], vec![4.0, 2.0]]);
        assert!((determinant(&j.hessian) + 12.0).abs() < 1e-12);
        assert!((quasi_product_hessian_det(&sq, &pt(&[1.0, 1.0])).unwrap() + 12.0).abs() < 1e-12);
    }

    #[test]
    fn quasi_product_determinant_errors() {
        let plain = build_custom(2, Expr::var(0) * Expr::var(1)).unwrap();
        assert_eq!(quasi_product_hessian_det(&plain, &pt(&[1.0, 1.0])), Err(Error::StructureMissing));
        // F(u) = (u - 1)^2 + 1 has F'(1) = 0
        let x = Expr::var(0);
        let bowl = build_quasi_product((x.clone() - Expr::constant(1.0)).powf(2.0) + Expr::constant(1.0), vec![x.clone(), x.clone()])
            .unwrap();
        assert!(matches!(quasi_product_hessian_det(&bowl, &pt(&[1.0, 1.0])), Err(Error::DegenerateOuter { .. })));
    }

    #[test]
    fn sample_has_canonical_components() {
        let f = build_family(Family::CobbDouglas { scale: 1.0, exponents: vec![0.3, 0.3, 0.3] }).unwrap();
        let s = CurvatureSample::at(&f, &pt(&[1.0, 1.5, 0.7])).unwrap();
        let idx: Vec<[usize; 4]> = s.riemann.iter().map(|r| r.indices).collect();
        assert_eq!(idx, vec![[0, 1, 1, 0], [0, 2, 2, 0], [1, 2, 2, 1]]);
        assert!(s.sectional[1][1].is_none());
        assert_eq!(s.sectional[0][2], s.sectional[2][0]);
        assert!(s.w >= 1.0);
    }
}
