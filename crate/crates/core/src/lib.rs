//! Curvature of production hypersurfaces and the economic indicators that go
//! with them.
//!
//! A production function `f: ℝⁿ₊ → ℝ₊` is treated as the graph hypersurface
//! `(x, f(x)) ⊂ ℝⁿ⁺¹`. Exact second-order jets come from forward-mode
//! differentiation of an expression tree; curvature, elasticities and the
//! grid classifier all work from those jets.
//!
//! ```
//! use prodsurf::{build_family, Family, Point};
//!
//! let f = build_family(Family::CobbDouglas { scale: 1.0, exponents: vec![0.5, 0.5] }).unwrap();
//! let p = Point::new(vec![4.0, 9.0]).unwrap();
//! assert!((f.evaluate(&p).unwrap() - 6.0).abs() < 1e-12);
//! ```

pub mod catalog;
pub mod classifier;
pub mod diff;
pub mod economics;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod json;
pub mod linalg;

pub use catalog::{
    build_custom, build_family, build_product, build_quasi_product, Diagnostic, Family, FunctionSpec, Point,
    QuasiProductStructure, SampleBox,
};
pub use classifier::{
    classify, estimate_sigma, verify_catalog, ClassificationVerdict, Property, PropertyVerdict, SampleGrid,
    SigmaEstimate, TheoremReport, TolerancePolicy,
};
pub use diff::{chain_rule_jet, fd_oracle, jet, SecondOrderJet};
pub use economics::SubstitutionSample;
pub use error::{Error, Result};
pub use expr::Expr;
pub use geometry::CurvatureSample;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/production-functions.md")]
    mod production_functions {}
    #[doc = include_str!("../../../book/src/derivatives.md")]
    mod derivatives {}
    #[doc = include_str!("../../../book/src/curvature.md")]
    mod curvature {}
    #[doc = include_str!("../../../book/src/economics.md")]
    mod economics {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
