#![allow(dead_code)]

use std::sync::Arc;

use lifeinfo::copula::{clayton_special, Independence};
use lifeinfo::models::tte::LinearHazard;
use lifeinfo::models::*;

pub struct Case {
    pub name: &'static str,
    pub model: ModelRef,
    /// Inspection times where both past and residual regions are non-null.
    pub points: [(f64, f64); 2],
    pub exchangeable: bool,
}

pub fn exp1() -> Arc<dyn UnivariateLifetime> {
    Arc::new(Exponential::new(1.0).unwrap())
}

pub fn indep_exp() -> ModelRef {
    Arc::new(make_from_copula(Arc::new(Independence), exp1(), exp1()))
}

pub fn builtins() -> Vec<Case> {
    let tri: ModelRef = Arc::new(make_uniform_triangle(1.0, 1.0).unwrap());
    vec![
        Case { name: "linear", model: Arc::new(make_linear_unit_square()), points: [(0.3, 0.6), (0.7, 0.5)], exchangeable: true },
        Case { name: "triangle", model: tri.clone(), points: [(0.2, 0.3), (0.4, 0.1)], exchangeable: true },
        Case {
            name: "triangle(2,3)",
            model: Arc::new(make_uniform_triangle(2.0, 3.0).unwrap()),
            points: [(0.1, 0.1), (0.2, 0.05)],
            exchangeable: false,
        },
        Case { name: "gumbel", model: Arc::new(make_gumbel_type(1.0).unwrap()), points: [(0.3, 0.7), (1.0, 0.4)], exchangeable: true },
        Case {
            name: "lomax",
            model: Arc::new(make_lomax_tte(2.0, 1.0, 1.5).unwrap()),
            points: [(0.5, 0.7), (1.2, 0.3)],
            exchangeable: false,
        },
        Case {
            name: "truncated",
            model: Arc::new(
                make_truncated_quadratic_tte(2.0, Arc::new(LinearHazard { rate: 1.0 }), Arc::new(LinearHazard { rate: 1.0 })).unwrap(),
            ),
            points: [(0.3, 0.6), (0.8, 0.5)],
            exchangeable: true,
        },
        Case {
            name: "freund",
            model: Arc::new(make_freund(1.0, 2.0, 1.5, 2.5).unwrap()),
            points: [(0.3, 0.6), (0.5, 0.2)],
            exchangeable: false,
        },
        Case {
            name: "clayton",
            model: Arc::new(make_from_copula(Arc::new(clayton_special()), exp1(), Arc::new(Weibull::new(2.0, 1.0).unwrap()))),
            points: [(0.4, 0.8), (1.0, 0.5)],
            exchangeable: false,
        },
        Case { name: "independence", model: indep_exp(), points: [(0.4, 0.9), (1.3, 0.2)], exchangeable: true },
        Case {
            name: "reflected-triangle",
            model: Arc::new(make_reflected(tri, 0.5, 0.5)),
            points: [(0.8, 0.7), (0.6, 0.9)],
            exchangeable: true,
        },
    ]
}

/// Deterministic pseudo-random points in a box.
pub fn scatter(n: usize, seed: u64, (x0, x1): (f64, f64), (y0, y1): (f64, f64)) -> Vec<(f64, f64)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (x0 + (x1 - x0) * rng.random::<f64>(), y0 + (y1 - y0) * rng.random::<f64>())).collect()
}
