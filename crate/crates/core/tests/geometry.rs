mod common;

use common::{family_representatives, pt, random_point, rng};
use prodsurf::classifier::catalog_fixtures;
use prodsurf::geometry::{
    gauss_kronecker, mean_curvature_of_jet, minimality_residual, quasi_product_hessian_det, riemann_component,
    sectional_curvature, slope_w,
};
use prodsurf::linalg::determinant;
use prodsurf::{build_custom, build_quasi_product, jet, CurvatureSample, Expr, FunctionSpec};

#[test]
fn analytic_determinant_matches_generic_on_fixtures() {
    let mut r = rng(21);
    let mut checked = 0;
    for fx in catalog_fixtures() {
        if fx.spec.structure().is_none() {
            continue;
        }
        for _ in 0..50 {
            let p = random_point(&mut r, fx.spec.n(), 0.5, 2.0);
            let generic = determinant(&jet(&fx.spec, &p).unwrap().hessian);
            let analytic = quasi_product_hessian_det(&fx.spec, &p).unwrap();
            assert!(
                (analytic - generic).abs() <= 1e-9 * (1.0 + generic.abs()),
                "{}: {analytic} vs {generic} at {:?}",
                fx.name,
                p.coords()
            );
        }
        checked += 1;
    }
    assert!(checked >= 10);
}

#[test]
fn two_input_gauss_kronecker_is_the_sectional_numerator() {
    let mut r = rng(22);
    for (name, f) in family_representatives().into_iter().filter(|(_, f)| f.n() == 2) {
        for _ in 0..20 {
            let p = random_point(&mut r, 2, 0.5, 2.0);
            let j = jet(&f, &p).unwrap();
            let h = &j.hessian;
            let numerator = h[0][0] * h[1][1] - h[0][1] * h[0][1];
            let w = slope_w(&j);
            let k01 = sectional_curvature(&j, 0, 1).unwrap();
            let from_k01 = k01 * w * w * (1.0 + j.gradient[0].powi(2) + j.gradient[1].powi(2));
            let from_gk = gauss_kronecker(&j) * w.powi(4);
            assert!((from_gk - numerator).abs() <= 1e-12 * (1.0 + numerator.abs()), "{name}");
            assert!((from_k01 - numerator).abs() <= 1e-12 * (1.0 + numerator.abs()), "{name}");
        }
    }
}

/// `f ∘ σ` where `σ` permutes the inputs: `(f∘σ)(y) = f(y_{σ(0)}, …)`.
fn permuted(f: &FunctionSpec, perm: &[usize]) -> FunctionSpec {
    build_custom(f.n(), f.body().substitute(&|i| Expr::var(perm[i]))).unwrap()
}

#[test]
fn curvature_is_permutation_equivariant() {
    let mut r = rng(23);
    let perm = [2usize, 0, 1];
    for (name, f) in family_representatives().into_iter().filter(|(_, f)| f.n() == 3) {
        let g = permuted(&f, &perm);
        for _ in 0..20 {
            let p = random_point(&mut r, 3, 0.5, 2.0);
            // g(q) = f(p) when q_{σ(i)} = p_i
            let mut q = vec![0.0; 3];
            for i in 0..3 {
                q[perm[i]] = p[i];
            }
            let jf = jet(&f, &p).unwrap();
            let jg = jet(&g, &pt(&q)).unwrap();
            let (kf, kg) = (gauss_kronecker(&jf), gauss_kronecker(&jg));
            assert!((kf - kg).abs() <= 1e-12 * (1.0 + kf.abs()), "{name}: {kf} vs {kg}");
            let (hf, hg) = (mean_curvature_of_jet(&jf), mean_curvature_of_jet(&jg));
            assert!((hf - hg).abs() <= 1e-12 * (1.0 + hf.abs()), "{name}");
            for a in 0..3 {
                for b in 0..3 {
                    if a != b {
                        let s = sectional_curvature(&jf, a, b).unwrap();
                        let t = sectional_curvature(&jg, perm[a], perm[b]).unwrap();
                        assert!((s - t).abs() <= 1e-12 * (1.0 + s.abs()), "{name}");
                    }
                }
            }
        }
    }
}

#[test]
fn riemann_symmetries() {
    let mut r = rng(24);
    for (name, f) in family_representatives().into_iter().filter(|(_, f)| f.n() == 3) {
        let p = random_point(&mut r, 3, 0.5, 2.0);
        let j = jet(&f, &p).unwrap();
        for i in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    assert_eq!(riemann_component(&j, i, i, k, l).unwrap(), 0.0, "{name}");
                    for jj in 0..3 {
                        let v = riemann_component(&j, i, jj, k, l).unwrap();
                        assert_eq!(v, -riemann_component(&j, jj, i, k, l).unwrap(), "{name}");
                        assert_eq!(v, -riemann_component(&j, i, jj, l, k).unwrap(), "{name}");
                        assert_eq!(v, riemann_component(&j, k, l, i, jj).unwrap(), "{name}");
                    }
                }
            }
        }
    }
}

#[test]
fn vanishing_riemann_implies_vanishing_sectional() {
    let tol = 1e-9;
    let mut r = rng(25);
    for fx in catalog_fixtures() {
        let n = fx.spec.n();
        for _ in 0..10 {
            let p = random_point(&mut r, n, 0.5, 2.0);
            let s = CurvatureSample::at(&fx.spec, &p).unwrap();
            let j = jet(&fx.spec, &p).unwrap();
            let all_zero = s.riemann.iter().all(|e| e.value.abs() <= tol);
            if all_zero {
                for a in 0..n {
                    for b in (a + 1)..n {
                        assert!(sectional_curvature(&j, a, b).unwrap().abs() <= tol, "{}", fx.name);
                    }
                }
            }
        }
    }
}

#[test]
fn sample_invariants() {
    let mut r = rng(26);
    for (name, f) in family_representatives() {
        let p = random_point(&mut r, f.n(), 0.5, 2.0);
        let s = CurvatureSample::at(&f, &p).unwrap();
        assert!(s.w >= 1.0, "{name}");
        for a in 0..f.n() {
            assert!(s.sectional[a][a].is_none());
            for b in 0..f.n() {
                assert_eq!(s.sectional[a][b], s.sectional[b][a], "{name}");
            }
        }
    }
}

#[test]
fn minimality_residual_shares_the_zero_set_of_mean_curvature() {
    let mut r = rng(27);
    for (name, f) in family_representatives() {
        for _ in 0..20 {
            let p = random_point(&mut r, f.n(), 0.5, 2.0);
            let j = jet(&f, &p).unwrap();
            let w = slope_w(&j);
            let h = mean_curvature_of_jet(&j);
            let res = minimality_residual(&j);
            let expect = f.n() as f64 * w.powi(3) * h;
            assert!((res - expect).abs() <= 1e-10 * (1.0 + res.abs()), "{name}: {res} vs {expect}");
        }
    }
    // a plane is minimal
    let plane = build_custom(2, Expr::var(0) * Expr::constant(2.0) + Expr::var(1)).unwrap();
    let j = jet(&plane, &pt(&[1.0, 1.5])).unwrap();
    assert_eq!(mean_curvature_of_jet(&j), 0.0);
    assert_eq!(minimality_residual(&j), 0.0);
}

#[test]
fn analytic_determinant_of_square_of_product() {
    let x = Expr::var(0);
    let f = build_quasi_product(x.clone().powf(2.0), vec![x.clone(), x]).unwrap();
    let d = quasi_product_hessian_det(&f, &pt(&[1.0, 1.0])).unwrap();
    assert!((d + 12.0).abs() < 1e-12);
}
