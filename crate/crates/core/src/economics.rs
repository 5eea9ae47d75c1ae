//! Output elasticities, marginal rates of substitution, and the Hicks and
//! Allen elasticities of substitution.
//!
//! Errors from functions that take a jet but no point carry an empty point;
//! [`Error::at`] fills it in.

use serde::Serialize;

use crate::catalog::{is_negligible, FunctionSpec, Point};
use crate::diff::{jet, SecondOrderJet};
use crate::error::{Error, Result};
use crate::linalg::{cofactor, determinant};

fn check_pair(jet: &SecondOrderJet, i: usize, j: usize) -> Result<()> {
    jet.check_index(i)?;
    jet.check_index(j)?;
    if i == j {
        Err(Error::IndexError(format!("pair needs i ≠ j, got ({i}, {i})")))
    } else {
        Ok(())
    }
}

fn marginal(jet: &SecondOrderJet, i: usize) -> Result<f64> {
    let fi = jet.gradient[i];
    if is_negligible(fi, jet.gradient_norm()) {
        Err(Error::ZeroMarginalProduct { point: vec![], index: i })
    } else {
        Ok(fi)
    }
}

/// `E_i = x_i f_i / f`.
pub fn output_elasticity(jet: &SecondOrderJet, p: &Point, i: usize) -> Result<f64> {
    jet.check_index(i)?;
    if p.dim() != jet.n() {
        return Err(Error::InvalidPoint(format!("point has {} coordinates, jet has {}", p.dim(), jet.n())));
    }
    Ok(p[i] / jet.value * jet.gradient[i])
}

/// `MRS_ij = f_j / f_i`.
pub fn mrs(jet: &SecondOrderJet, i: usize, j: usize) -> Result<f64> {
    jet.check_index(i)?;
    jet.check_index(j)?;
    let fi = marginal(jet, i)?;
    Ok(jet.gradient[j] / fi)
}

/// Hicks elasticity of substitution between inputs `i` and `j`.
pub fn hicks_elasticity(jet: &SecondOrderJet, p: &Point, i: usize, j: usize) -> Result<f64> {
    check_pair(jet, i, j)?;
    let fi = marginal(jet, i)?;
    let fj = marginal(jet, j)?;
    let h = &jet.hessian;
    let num = 1.0 / (p[i] * fi) + 1.0 / (p[j] * fj);
    let t1 = -h[i][i] / (fi * fi);
    let t2 = 2.0 * h[i][j] / (fi * fj);
    let t3 = -h[j][j] / (fj * fj);
    let den = t1 + t2 + t3;
    if is_negligible(den, t1.abs() + t2.abs() + t3.abs()) {
        return Err(Error::DegenerateDenominator { point: p.coords().to_vec(), i, j });
    }
    Ok(num / den)
}

/// `[[0, ∇fᵀ], [∇f, ∇²f]]`.
pub fn bordered_hessian(jet: &SecondOrderJet) -> Vec<Vec<f64>> {
    let n = jet.n();
    let mut m = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..n {
        m[0][i + 1] = jet.gradient[i];
        m[i + 1][0] = jet.gradient[i];
        for j in 0..n {
            m[i + 1][j + 1] = jet.hessian[i][j];
        }
    }
    m
}

/// Determinant of the bordered Hessian.
pub fn allen_determinant(jet: &SecondOrderJet) -> f64 {
    determinant(&bordered_hessian(jet))
}

/// Cofactor of the entry `f_ij` in the bordered Hessian (border at row/column 0).
pub fn allen_cofactor(jet: &SecondOrderJet, i: usize, j: usize) -> Result<f64> {
    jet.check_index(i)?;
    jet.check_index(j)?;
    Ok(cofactor(&bordered_hessian(jet), i + 1, j + 1))
}

/// Allen elasticity `(Σ_m x_m f_m)/(x_i x_j) · Δ_ij/Δ`.
///
/// With this sign the two-input value coincides with the Hicks elasticity.
pub fn allen_elasticity(jet: &SecondOrderJet, p: &Point, i: usize, j: usize) -> Result<f64> {
    check_pair(jet, i, j)?;
    let border = bordered_hessian(jet);
    let delta = determinant(&border);
    // Hadamard bound of the bordered matrix, for the zero test.
    let scale: f64 = border.iter().map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt()).product();
    if is_negligible(delta, scale) {
        return Err(Error::SingularAllenDeterminant { point: p.coords().to_vec() });
    }
    let euler: f64 = (0..jet.n()).map(|m| p[m] * jet.gradient[m]).sum();
    let cof = cofactor(&border, i + 1, j + 1);
    Ok(euler / (p[i] * p[j]) * (cof / delta))
}

/// Economic indicators at one point. Entries that are undefined there are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubstitutionSample {
    pub point: Point,
    pub elasticities: Vec<f64>,
    /// `mrs[i][j] = f_j / f_i`; `None` when `f_i` vanishes.
    pub mrs: Vec<Vec<Option<f64>>>,
    pub hicks: Vec<Vec<Option<f64>>>,
    pub allen: Vec<Vec<Option<f64>>>,
    pub allen_determinant: f64,
}

impl SubstitutionSample {
    pub fn at(spec: &FunctionSpec, p: &Point) -> Result<SubstitutionSample> {
        let j = jet(spec, p)?;
        SubstitutionSample::from_jet(p.clone(), &j)
    }

    pub fn from_jet(point: Point, jet: &SecondOrderJet) -> Result<SubstitutionSample> {
        let n = jet.n();
        let elasticities = (0..n).map(|i| output_elasticity(jet, &point, i)).collect::<Result<Vec<_>>>()?;
        let mut mrs_m = vec![vec![None; n]; n];
        let mut hicks = vec![vec![None; n]; n];
        let mut allen = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                mrs_m[i][j] = mrs(jet, i, j).ok();
                if i < j {
                    let h = hicks_elasticity(jet, &point, i, j).ok();
                    hicks[i][j] = h;
                    hicks[j][i] = h;
                    allen[i][j] = allen_elasticity(jet, &point, i, j).ok();
                    allen[j][i] = allen_elasticity(jet, &point, j, i).ok();
                }
            }
        }
        Ok(SubstitutionSample {
            allen_determinant: allen_determinant(jet),
            point,
            elasticities,
            mrs: mrs_m,
            hicks,
            allen,
        })
    }
}
