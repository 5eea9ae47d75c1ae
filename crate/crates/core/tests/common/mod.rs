#![allow(dead_code)]

use prodsurf::{build_custom, build_family, build_product, build_quasi_product, Expr, Family, FunctionSpec, Point};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn pt(c: &[f64]) -> Point {
    Point::new(c.to_vec()).unwrap()
}

/// Uniform point in `[lo, hi]ⁿ`.
pub fn random_point(r: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Point {
    Point::new((0..n).map(|_| r.gen_range(lo..hi)).collect()).unwrap()
}

fn x() -> Expr {
    Expr::var(0)
}

/// One representative of every catalog family, for two and three inputs.
pub fn family_representatives() -> Vec<(String, FunctionSpec)> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let k: Vec<f64> = [0.3, 0.55, 0.2][..n].to_vec();
        let push = |out: &mut Vec<(String, FunctionSpec)>, name: &str, f: FunctionSpec| out.push((format!("{name}_n{n}"), f));
        push(&mut out, "cobb_douglas", build_family(Family::CobbDouglas { scale: 1.7, exponents: k.clone() }).unwrap());
        push(
            &mut out,
            "acms",
            build_family(Family::Acms { scale: 1.2, weights: [0.7, 1.3, 0.4][..n].to_vec(), rho: -0.6, gamma: 0.9 })
                .unwrap(),
        );
        push(
            &mut out,
            "spillman",
            build_family(Family::SpillmanMitscherlich { scale: 2.0, rates: [1.0, 0.6, 1.4][..n].to_vec() }).unwrap(),
        );
        push(
            &mut out,
            "transcendental",
            build_family(Family::Transcendental {
                scale: 0.8,
                powers: k.clone(),
                rates: [0.3, -0.2, 0.5][..n].to_vec(),
            })
            .unwrap(),
        );
        let inners: Vec<Expr> = (0..n)
            .map(|i| match i {
                0 => x().powf(0.6),
                1 => (Expr::constant(0.4) * x()).exp(),
                _ => x() + Expr::constant(1.0),
            })
            .collect();
        push(&mut out, "product", build_product(inners.clone()).unwrap());
        push(&mut out, "quasi_product", build_quasi_product((x() + Expr::constant(1.0)).ln(), inners).unwrap());
        let body = (0..n).fold(Expr::constant(1.0), |acc, i| acc + Expr::var(i) * Expr::var(i).ln().exp());
        push(&mut out, "custom", build_custom(n, body.powf(0.5)).unwrap());
    }
    out
}
