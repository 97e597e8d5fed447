mod common;

use approx::assert_abs_diff_eq;
use common::*;
use lifeinfo::copula::clayton_special;
use lifeinfo::entropy::*;
use lifeinfo::models::*;
use lifeinfo::quadrature::QuadratureSpec;
use lifeinfo::region::{ConditioningRegion, RegionKind};
use std::sync::Arc;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

#[test]
fn conditional_density_examples() {
    let m = indep_exp();
    let r = ConditioningRegion::residual(m.as_ref(), 0.6, 1.4).unwrap();
    for &(x, y) in &[(0.1, 0.2), (1.5, 0.7)] {
        assert_abs_diff_eq!(conditional_density(m.as_ref(), &r, x, y), (-x - y as f64).exp(), epsilon = 1e-14);
    }
    let lin = make_linear_unit_square();
    let r = ConditioningRegion::past(&lin, 1.0, 1.0).unwrap();
    assert_abs_diff_eq!(conditional_density(&lin, &r, 0.5, 0.5), 1.0, epsilon = 1e-15);
    let tri = make_uniform_triangle(1.0, 1.0).unwrap();
    let (s, t) = (0.1, 0.3);
    let r = ConditioningRegion::residual(&tri, s, t).unwrap();
    assert_abs_diff_eq!(conditional_density(&tri, &r, 0.2, 0.1), 2.0 / (1.0f64 - s - t).powi(2), epsilon = 1e-12);
}

#[test]
fn joint_entropy_examples() {
    let tri = make_uniform_triangle(1.0, 1.0).unwrap();
    for &(s, t) in &[(0.0, 0.0), (0.3, 0.1), (0.25, 0.5)] {
        let r = ConditioningRegion::residual(&tri, s, t).unwrap();
        let expected = 2.0 * (1.0f64 - s - t).ln() - 2f64.ln();
        assert_abs_diff_eq!(joint_entropy(&tri, &r, &spec()).unwrap().value, expected, epsilon = 1e-8);
        let hx = marginal_entropy(&tri, &r, Axis::X, &spec()).unwrap().value;
        assert_abs_diff_eq!(hx, 0.5 + ((1.0 - s - t) / 2.0).ln(), epsilon = 1e-8);
    }
    let m = indep_exp();
    for &(s, t) in &[(0.0, 0.0), (2.0, 0.5)] {
        let r = ConditioningRegion::residual(m.as_ref(), s, t).unwrap();
        assert_abs_diff_eq!(joint_entropy(m.as_ref(), &r, &spec()).unwrap().value, 2.0, epsilon = 1e-7);
        assert_abs_diff_eq!(marginal_entropy(m.as_ref(), &r, Axis::X, &spec()).unwrap().value, 1.0, epsilon = 1e-7);
    }
}

/// Midpoint sums on a 2000 × 2000 grid for the joint and a 10^6 grid for the marginal.
#[test]
fn linear_past_entropies_match_riemann_sums() {
    let m = make_linear_unit_square();
    let r = ConditioningRegion::past(&m, 1.0, 1.0).unwrap();
    let n = 2000;
    let h = 1.0 / n as f64;
    let mut joint = 0.0;
    for i in 0..n {
        let x = (i as f64 + 0.5) * h;
        for j in 0..n {
            let v = x + (j as f64 + 0.5) * h;
            joint -= v * v.ln();
        }
    }
    joint *= h * h;
    assert_abs_diff_eq!(joint_entropy(&m, &r, &spec()).unwrap().value, joint, epsilon = 1e-6);

    let n = 1_000_000;
    let h = 1.0 / n as f64;
    let marginal: f64 = -(0..n).map(|i| (i as f64 + 0.5) * h + 0.5).map(|v| v * v.ln()).sum::<f64>() * h;
    assert_abs_diff_eq!(marginal_entropy(&m, &r, Axis::X, &spec()).unwrap().value, marginal, epsilon = 1e-9);
}

#[test]
fn discrete_entropy_examples() {
    assert_eq!(discrete_entropy(&[1.0, 0.0, 0.0, 0.0]).unwrap(), 0.0);
    assert_abs_diff_eq!(discrete_entropy(&[0.25; 4]).unwrap(), 4f64.ln(), epsilon = 1e-15);
    assert_abs_diff_eq!(discrete_entropy(&[0.5, 0.25, 0.125, 0.125]).unwrap(), 1.75 * 2f64.ln(), epsilon = 1e-15);
    assert!(discrete_entropy(&[0.2, 0.2]).is_err());
}

#[test]
fn decomposition_examples() {
    let u = Arc::new(Uniform::unit());
    let clayton = make_from_copula(Arc::new(clayton_special()), u.clone(), u);
    let cases: Vec<(Box<dyn BivariateLifetime>, f64, f64)> = vec![
        (Box::new(make_linear_unit_square()), 0.5, 0.5),
        (Box::new(make_gumbel_type(1.0).unwrap()), 0.3, 0.7),
        (Box::new(clayton), 0.5, 0.5),
    ];
    for (m, s, t) in cases {
        let d = verify_decomposition(m.as_ref(), s, t, &spec()).unwrap();
        assert!(d.residual.abs() <= 1e-5, "{}: {d:?}", m.name());
        assert!(d.residual.abs() <= d.numerical_error.max(1e-7), "{}: {d:?}", m.name());
    }
}

#[test]
fn decomposition_rejects_null_regions() {
    let tri = make_uniform_triangle(1.0, 1.0).unwrap();
    assert!(verify_decomposition(&tri, 0.6, 0.6, &spec()).is_err());
}

/// Random inspection times with all four regions non-null, for every built-in.
#[test]
fn decomposition_holds_everywhere() {
    for case in builtins() {
        let m = case.model.as_ref();
        let (x0, x1) = (m.marginal_quantile_x(0.05), m.marginal_quantile_x(0.95));
        let (y0, y1) = (m.marginal_quantile_y(0.05), m.marginal_quantile_y(0.95));
        let mut done = 0;
        for (s, t) in scatter(60, 23, (x0, x1), (y0, y1)) {
            if done == 10 {
                break;
            }
            let Ok(d) = verify_decomposition(m, s, t, &spec()) else { continue };
            done += 1;
            assert!(d.residual.abs() <= 1e-5, "{} at ({s}, {t}): {d:?}", case.name);
        }
        assert_eq!(done, 10, "{}", case.name);
    }
}

#[test]
fn conditional_densities_are_normalized() {
    for case in builtins() {
        let m = case.model.as_ref();
        for &(s, t) in &case.points {
            for kind in RegionKind::ALL {
                let Ok(r) = ConditioningRegion::new(m, kind, s, t) else { continue };
                let p = r.probability(m);
                let mass = r.integrate(m, |x, y| m.pdf(x, y), &spec()).unwrap().value / p;
                assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-6);
                let mx = r.integrate_x(m, |x| r.x_marginal(m, x), &spec()).unwrap().value / p;
                let my = r.integrate_y(m, |y| r.y_marginal(m, y), &spec()).unwrap().value / p;
                assert_abs_diff_eq!(mx, 1.0, epsilon = 1e-6);
                assert_abs_diff_eq!(my, 1.0, epsilon = 1e-6);
            }
        }
    }
}

#[test]
fn independent_entropies_add() {
    let w: Arc<dyn UnivariateLifetime> = Arc::new(Weibull::new(2.0, 1.5).unwrap());
    let m = make_from_copula(Arc::new(lifeinfo::copula::Independence), exp1(), w);
    for kind in RegionKind::ALL {
        let r = ConditioningRegion::new(&m, kind, 0.7, 1.1).unwrap();
        let b = entropy_bundle(&m, &r, &spec()).unwrap();
        assert!(b.h_joint.is_finite() && b.h_x.is_finite() && b.h_y.is_finite());
        assert_abs_diff_eq!(b.h_joint, b.h_x + b.h_y, epsilon = 1e-5);
    }
}
