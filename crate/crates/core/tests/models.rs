mod common;

use approx::assert_abs_diff_eq;
use common::*;
use lifeinfo::copula::{clayton_special, Independence};
use lifeinfo::models::tte::LinearHazard;
use lifeinfo::models::*;
use lifeinfo::quadrature::{integrate_2d_with_breaks, Domain2d, QuadratureSpec};
use std::sync::Arc;

fn total_mass(m: &dyn BivariateLifetime) -> f64 {
    let (xlo, xhi) = m.support().x_bounds();
    let support = m.support().clone();
    let breaks: Box<dyn Fn(f64) -> Vec<f64> + Send + Sync> = Box::new(move |x| vec![x, x + 1.0]);
    let domain = Domain2d::y_section(
        xlo,
        xhi,
        {
            let s = support.clone();
            move |x| s.y_section(x).0
        },
        move |x| support.y_section(x).1,
    );
    integrate_2d_with_breaks(|x, y| m.pdf(x, y), &domain, Some(&breaks), &QuadratureSpec::default()).unwrap().value
}

#[test]
fn linear_examples() {
    let m = make_linear_unit_square();
    assert_abs_diff_eq!(m.cdf(1.0, 1.0), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(m.pdf(0.5, 0.5), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(m.cdf(0.5, 0.5), 0.125, epsilon = 1e-15);
}

#[test]
fn triangle_examples() {
    let m = make_uniform_triangle(1.0, 1.0).unwrap();
    assert_abs_diff_eq!(m.survival(0.0, 0.0), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(m.pdf(0.25, 0.25), 2.0, epsilon = 1e-15);
    let m = make_uniform_triangle(2.0, 3.0).unwrap();
    assert_abs_diff_eq!(m.survival(0.25, 0.1), 0.04, epsilon = 1e-15);
    assert_eq!(m.pdf(0.4, 0.1), 0.0);
}

#[test]
fn gumbel_examples() {
    let m = make_gumbel_type(1.0).unwrap();
    assert_abs_diff_eq!(m.survival(0.0, 0.0), 1.0, epsilon = 1e-14);
    // e^{-1} / E1(1), with E1(1) = 0.21938393439552027 from a 30-digit evaluation.
    assert_abs_diff_eq!(m.pdf(0.0, 0.0), (-1f64).exp() / 0.219_383_934_395_520_27, epsilon = 1e-10);
    assert_abs_diff_eq!(total_mass(&m), 1.0, epsilon = 1e-6);
}

#[test]
fn tte_examples() {
    let m = make_lomax_tte(1.0, 1.0, 1.0).unwrap();
    assert_abs_diff_eq!(m.survival(0.0, 0.0), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(m.survival(1.0, 1.0), 1.0 / 3.0, epsilon = 1e-15);
    let lin = || Arc::new(LinearHazard { rate: 1.0 });
    let m = make_truncated_quadratic_tte(2.0, lin(), lin()).unwrap();
    for &(s, t) in &[(0.5, 0.5), (0.25, 0.75), (1.0, 0.0)] {
        assert_abs_diff_eq!(m.survival(s, t), 0.25, epsilon = 1e-15);
    }
    assert_eq!(m.pdf(1.5, 1.0), 0.0);
}

#[test]
fn copula_examples() {
    let u = Arc::new(Uniform::unit());
    let m = make_from_copula(Arc::new(clayton_special()), u.clone(), u);
    assert_abs_diff_eq!(m.cdf(0.5, 0.5), 1.0 / 3.0, epsilon = 1e-15);
    assert_abs_diff_eq!(m.cdf(1.0, 1.0), 1.0, epsilon = 1e-15);
    let w: Arc<dyn UnivariateLifetime> = Arc::new(Weibull::new(2.0, 1.0).unwrap());
    let m = make_from_copula(Arc::new(Independence), exp1(), w.clone());
    for &(x, y) in &[(0.3, 0.4), (2.0, 0.1)] {
        assert_abs_diff_eq!(m.pdf(x, y), exp1().pdf(x) * w.pdf(y), epsilon = 1e-15);
    }
    assert_abs_diff_eq!(m.cdf(60.0, 60.0), 1.0, epsilon = 1e-12);
}

#[test]
fn freund_examples() {
    let m = make_freund(1.0, 2.0, 1.5, 2.5).unwrap();
    assert_abs_diff_eq!(m.survival(0.0, 0.0), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(total_mass(&m), 1.0, epsilon = 1e-6);
    for &(x, y, t) in &[(0.2, 0.5, 0.3), (1.0, 0.1, 2.0)] {
        assert_abs_diff_eq!(m.survival(x + t, y + t), m.survival(x, y) * m.survival(t, t), epsilon = 1e-10);
    }
}

#[test]
fn every_model_is_normalized() {
    for case in builtins() {
        assert_abs_diff_eq!(total_mass(case.model.as_ref()), 1.0, epsilon = 1e-6);
    }
}

/// `∂²F/∂x∂y` by central differences against the density at random interior points.
#[test]
fn mixed_partial_matches_density() {
    for case in builtins() {
        let m = case.model.as_ref();
        let (xlo, xhi) = m.support().x_bounds();
        let (ylo, yhi) = m.support().y_bounds();
        let (xhi, yhi) = (xhi.min(3.0), yhi.min(3.0));
        let mut checked = 0;
        for (x, y) in scatter(400, 17, (xlo, xhi), (ylo, yhi)) {
            if checked == 20 {
                break;
            }
            let h = 1e-3;
            let inside = [(-h, -h), (-h, h), (h, -h), (h, h)].iter().all(|(a, b)| m.support().contains(x + 2.0 * a, y + 2.0 * b))
                && x - 2.0 * h > xlo
                && y - 2.0 * h > ylo;
            // Skip points near the Freund diagonal, where the density jumps.
            if !inside || (case.name == "freund" && (x - y).abs() < 0.01) {
                continue;
            }
            checked += 1;
            let f = |a: f64, b: f64| m.cdf(a, b);
            let fd = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h);
            let pdf = m.pdf(x, y);
            assert!((fd - pdf).abs() <= 1e-4 * pdf.abs().max(1e-3), "{}: ({x}, {y}) fd {fd} pdf {pdf}", case.name);
        }
        assert_eq!(checked, 20, "{}", case.name);
    }
}

#[test]
fn four_region_identity() {
    for case in builtins() {
        let m = case.model.as_ref();
        let (xlo, xhi) = m.support().x_bounds();
        let (ylo, yhi) = m.support().y_bounds();
        for (s, t) in scatter(50, 3, (xlo, xhi.min(4.0)), (ylo, yhi.min(4.0))) {
            let f = m.cdf(s, t);
            let total = f + m.survival(s, t) + (m.marginal_cdf_x(s) - f) + (m.marginal_cdf_y(t) - f);
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-8);
        }
    }
}

#[test]
fn quantiles_invert_marginals() {
    for case in builtins() {
        let m = case.model.as_ref();
        for &p in &[0.01, 0.3, 0.5, 0.9, 0.999] {
            assert_abs_diff_eq!(m.marginal_cdf_x(m.marginal_quantile_x(p)), p, epsilon = 1e-10);
            assert_abs_diff_eq!(m.marginal_cdf_y(m.marginal_quantile_y(p)), p, epsilon = 1e-10);
        }
    }
}

#[test]
fn density_vanishes_outside_support() {
    for case in builtins() {
        let m = case.model.as_ref();
        for (x, y) in scatter(200, 5, (-1.0, 5.0), (-1.0, 5.0)) {
            if !m.support().contains(x, y) {
                assert_eq!(m.pdf(x, y), 0.0, "{} at ({x}, {y})", case.name);
            }
        }
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(make_uniform_triangle(0.0, 1.0).is_err());
    assert!(make_gumbel_type(-1.0).is_err());
    assert!(make_lomax_tte(1.0, 0.0, 1.0).is_err());
    assert!(make_freund(1.0, 2.0, -1.0, 2.0).is_err());
}
