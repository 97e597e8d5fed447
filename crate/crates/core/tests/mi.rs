mod common;

use approx::assert_abs_diff_eq;
use common::*;
use lifeinfo::copula::Independence;
use lifeinfo::mi::*;
use lifeinfo::models::tte::LinearHazard;
use lifeinfo::models::*;
use lifeinfo::quadrature::{QuadratureSpec, Transform};
use lifeinfo::region::{ConditioningRegion, RegionKind};
use std::sync::Arc;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn one_minus_ln2() -> f64 {
    1.0 - 2f64.ln()
}

fn lomax_constant(r: f64) -> f64 {
    -1.0 / (r + 1.0) + ((r + 1.0) / r).ln()
}

/// Past information of the linear model on the unit square, in closed form.
fn linear_past_closed_form(s: f64, t: f64) -> f64 {
    let p = s * t * (s + t);
    let ln = f64::ln;
    let brace = p * ln(4.0 / (s * t))
        + (-2.0 * s.powi(3) * ln(s) - 2.0 * t.powi(3) * ln(t) + 2.0 * (s + t).powi(3) * ln(s + t) - 5.0 * p) / 6.0
        + t / 4.0 * (2.0 * s * (s + t) + t * t * ln(t) - (t + 2.0 * s).powi(2) * ln(t + 2.0 * s))
        + s / 4.0 * (2.0 * t * (s + t) + s * s * ln(s) - (s + 2.0 * t).powi(2) * ln(s + 2.0 * t));
    ln(p / 2.0) + brace / p
}

fn linear_diagonal() -> f64 {
    (2.0 + 40.0 * 2f64.ln() - 27.0 * 3f64.ln()) / 12.0
}

#[test]
fn linear_closed_form_is_constant_on_diagonal() {
    for &t in &[0.1, 0.5, 0.99] {
        assert_abs_diff_eq!(linear_past_closed_form(t, t), linear_diagonal(), epsilon = 1e-12);
    }
}

#[test]
fn static_information() {
    assert_abs_diff_eq!(mutual_information_static(indep_exp().as_ref(), &spec()).unwrap().value, 0.0, epsilon = 1e-6);
    let tri = make_uniform_triangle(1.0, 1.0).unwrap();
    assert_abs_diff_eq!(mutual_information_static(&tri, &spec()).unwrap().value, one_minus_ln2(), epsilon = 1e-7);
    let lin = make_linear_unit_square();
    let m = mutual_information_static(&lin, &spec()).unwrap();
    assert!(m.converged);
    assert_abs_diff_eq!(m.value, linear_diagonal(), epsilon = 1e-8);
}

#[test]
fn linear_past_diagonal_and_off_diagonal() {
    let m = make_linear_unit_square();
    for &t in &[0.2, 0.5, 0.9] {
        assert_abs_diff_eq!(past_mi(&m, t, t, &spec()).unwrap().value, linear_diagonal(), epsilon = 1e-8);
    }
    for &(s, t) in &[(0.5, 0.8), (0.2, 0.9), (0.7, 0.3), (0.05, 0.6)] {
        assert_abs_diff_eq!(past_mi(&m, s, t, &spec()).unwrap().value, linear_past_closed_form(s, t), epsilon = 1e-8);
    }
}

#[test]
fn linear_past_increases_up_to_diagonal() {
    let m = make_linear_unit_square();
    for &t in &[0.3, 0.6, 1.0] {
        let vals: Vec<f64> = (1..=20).map(|i| past_mi(&m, t * i as f64 / 20.0, t, &spec()).unwrap().value).collect();
        for w in vals.windows(2) {
            assert!(w[1] >= w[0] - 1e-10, "t = {t}: {vals:?}");
        }
    }
}

#[test]
fn independence_gives_zero() {
    let m = indep_exp();
    for kind in RegionKind::ALL {
        for &(s, t) in &[(0.2, 0.4), (1.5, 0.7)] {
            assert_abs_diff_eq!(mi_for(m.as_ref(), kind, s, t, &spec()).unwrap().value, 0.0, epsilon = 1e-6);
        }
    }
}

#[test]
fn residual_constants() {
    let tri = make_uniform_triangle(1.0, 1.0).unwrap();
    for &(s, t) in &[(0.1, 0.1), (0.3, 0.5), (0.6, 0.2)] {
        assert_abs_diff_eq!(residual_mi(&tri, s, t, &spec()).unwrap().value, one_minus_ln2(), epsilon = 1e-7);
    }
    let lomax = make_lomax_tte(1.0, 1.0, 1.0).unwrap();
    let log_spec = spec().with_transform(Transform::LogMap);
    for &(s, t) in &[(0.0, 0.0), (0.5, 2.0)] {
        assert_abs_diff_eq!(residual_mi(&lomax, s, t, &log_spec).unwrap().value, lomax_constant(1.0), epsilon = 1e-7);
    }
}

#[test]
fn tte_route() {
    let lomax = make_lomax_tte(2.0, 1.0, 1.0).unwrap();
    for &(s, t) in &[(0.0, 0.0), (0.5, 0.7), (3.0, 1.0)] {
        assert_abs_diff_eq!(residual_mi_tte(&lomax, s, t, &spec()).unwrap().value, lomax_constant(2.0), epsilon = 1e-7);
    }
    let a = residual_mi_tte(&lomax, 0.5, 0.7, &spec()).unwrap().value;
    let b = residual_mi(&lomax, 0.5, 0.7, &spec().with_transform(Transform::LogMap)).unwrap().value;
    assert_abs_diff_eq!(a, b, epsilon = 1e-7);

    let lin = |rate| Arc::new(LinearHazard { rate });
    let truncated = make_truncated_quadratic_tte(1.0, lin(1.0), lin(2.0)).unwrap();
    for &(s, t) in &[(0.0, 0.0), (0.2, 0.1), (0.5, 0.2)] {
        assert_abs_diff_eq!(residual_mi_tte(&truncated, s, t, &spec()).unwrap().value, one_minus_ln2(), epsilon = 1e-7);
    }
    assert!(residual_mi_tte(&truncated, 0.6, 0.3, &spec()).is_err());
}

#[test]
fn bound_directions() {
    // On the unit square ã(x, y; s, t) = 4(x + y) / (st(t + 2x)(s + 2y)) rises
    // above its corner value near (s, 0) and falls below it near the origin.
    let lin = make_linear_unit_square();
    let b = past_mi_bound(&lin, 0.5, 0.5).unwrap();
    assert_eq!(b.direction, BoundDirection::Inapplicable);
    let a = |x: f64, y: f64| 4.0 * (x + y) / (0.25 * (0.5 + 2.0 * x) * (0.5 + 2.0 * y));
    assert!(a(0.5, 0.01) > a(0.5, 0.5) && a(0.01, 0.01) < a(0.5, 0.5));

    let ind = indep_exp();
    let b = past_mi_bound(ind.as_ref(), 0.5, 0.8).unwrap();
    assert_eq!(b.direction, BoundDirection::Tight);
    assert_abs_diff_eq!(b.bound_value, 0.0, epsilon = 1e-9);
    let b = residual_mi_bound(ind.as_ref(), 0.5, 0.8).unwrap();
    assert_abs_diff_eq!(b.bound_value, 0.0, epsilon = 1e-9);

    let tri = make_uniform_triangle(1.0, 1.0).unwrap();
    let b = residual_mi_bound(&tri, 0.2, 0.3).unwrap();
    assert_eq!(b.direction, BoundDirection::Lower);
    assert!(b.monotonicity_verified);
    assert!(b.bound_value < 0.0);
    // a(s, t; s, t) = 1 / (2 (1 - s - t)^2), region probability (1 - s - t)^2.
    assert_abs_diff_eq!(b.bound_value, -2f64.ln(), epsilon = 1e-12);

    let lomax = make_lomax_tte(1.0, 1.0, 1.0).unwrap();
    let b = residual_mi_bound(&lomax, 0.5, 0.5).unwrap();
    assert_eq!(b.direction, BoundDirection::Inapplicable);
    assert!(!b.monotonicity_verified);
}

#[test]
fn local_ratio() {
    let ind = indep_exp();
    let r = ConditioningRegion::residual(ind.as_ref(), 0.3, 0.4).unwrap();
    for &(x, y) in &[(0.1, 0.1), (2.0, 0.5)] {
        assert_abs_diff_eq!(local_dependence_ratio(ind.as_ref(), &r, x, y).unwrap(), 1.0, epsilon = 1e-12);
    }

    let tri = make_uniform_triangle(1.0, 1.0).unwrap();
    let (s, t) = (0.2, 0.1);
    let r = ConditioningRegion::residual(&tri, s, t).unwrap();
    for &(x, y) in &[(0.1, 0.2), (0.3, 0.05)] {
        let k: f64 = 1.0 - s - t;
        let expected = k * k / (2.0 * (k - y) * (k - x));
        assert_abs_diff_eq!(local_dependence_ratio(&tri, &r, x, y).unwrap(), expected, epsilon = 1e-12);
    }
    assert!(local_dependence_ratio(&tri, &r, 0.75, 0.0).is_err());

    // Averaging the log ratio under the conditional law reproduces the information.
    let lin = make_linear_unit_square();
    let r = ConditioningRegion::past(&lin, 0.4, 0.7).unwrap();
    let p = r.probability(&lin);
    let avg = r.integrate(&lin, |x, y| lin.pdf(x, y) / p * local_dependence_ratio(&lin, &r, x, y).unwrap().ln(), &spec()).unwrap().value;
    assert_abs_diff_eq!(avg, past_mi(&lin, 0.4, 0.7, &spec()).unwrap().value, epsilon = 1e-9);
}

#[test]
fn symmetry_transfer() {
    let grid = [(0.6, 0.7), (0.8, 0.9), (0.55, 0.95)];
    let tri: ModelRef = Arc::new(make_uniform_triangle(1.0, 1.0).unwrap());
    let refl = make_reflected(tri.clone(), 0.5, 0.5);
    let d = symmetry_transfer_check(tri.as_ref(), &refl, 0.5, 0.5, &grid, &spec()).unwrap();
    assert!(d <= 1e-6, "{d}");
    for &(s, t) in &grid {
        assert_abs_diff_eq!(past_mi(&refl, s, t, &spec()).unwrap().value, one_minus_ln2(), epsilon = 1e-6);
    }

    let lin: ModelRef = Arc::new(make_linear_unit_square());
    let refl = make_reflected(lin.clone(), 0.5, 0.5);
    let grid = [(0.3, 0.4), (0.5, 0.5), (0.8, 0.2)];
    assert!(symmetry_transfer_check(lin.as_ref(), &refl, 0.5, 0.5, &grid, &spec()).unwrap() <= 1e-6);

    let u = Arc::new(Uniform::unit());
    let square = make_from_copula(Arc::new(Independence), u.clone(), u);
    assert!(symmetry_transfer_check(&square, &square, 0.5, 0.5, &grid, &spec()).unwrap() <= 1e-6);

    assert!(matches!(
        symmetry_transfer_check(lin.as_ref(), lin.as_ref(), 0.5, 0.5, &grid, &spec()),
        Err(lifeinfo::error::Error::NotSymmetricPair(_))
    ));
}

#[test]
fn blm_and_diagonal_constancy() {
    let grid = [0.1, 0.5, 1.0, 2.0];
    let freund = make_freund(1.0, 2.0, 1.5, 2.5).unwrap();
    assert!(blm_constancy_check(&freund, &grid, &spec()).unwrap() <= 1e-6);
    let ind = indep_exp();
    assert!(blm_constancy_check(ind.as_ref(), &grid, &spec()).unwrap() <= 1e-8);
    let tri = make_uniform_triangle(1.0, 1.0).unwrap();
    assert!(matches!(blm_constancy_check(&tri, &[0.1], &spec()), Err(lifeinfo::error::Error::NotBlm(_))));
    let sweep = diagonal_sweep(&tri, &[0.0, 0.1, 0.2, 0.3, 0.45], &spec()).unwrap();
    assert!(max_deviation(&sweep, one_minus_ln2()) <= 1e-6);
}

#[test]
fn nonnegative_everywhere() {
    for case in builtins() {
        let m = case.model.as_ref();
        for &(s, t) in &case.points {
            for kind in RegionKind::ALL {
                let Ok(r) = ConditioningRegion::new(m, kind, s, t) else { continue };
                let v = region_mi(m, &r, &spec()).unwrap();
                assert!(v.value >= -v.numerical_error.max(1e-12), "{} {kind}: {v:?}", case.name);
            }
        }
    }
}

/// Log-ratio form, defining integral and entropy identity agree at random
/// inspection times for every built-in model.
#[test]
fn route_equivalence() {
    for case in builtins() {
        let m = case.model.as_ref();
        let (x0, x1) = (m.marginal_quantile_x(0.1), m.marginal_quantile_x(0.9));
        let (y0, y1) = (m.marginal_quantile_y(0.1), m.marginal_quantile_y(0.9));
        let mut done = 0;
        for (s, t) in scatter(40, 31, (x0, x1), (y0, y1)) {
            if done == 5 {
                break;
            }
            for kind in [RegionKind::PastPast, RegionKind::ResidualResidual] {
                let Ok(r) = ConditioningRegion::new(m, kind, s, t) else { continue };
                done += usize::from(kind == RegionKind::ResidualResidual);
                let a = region_mi(m, &r, &spec()).unwrap();
                let b = region_mi_direct(m, &r, &spec()).unwrap_or_else(|e| panic!("{} {kind} ({s}, {t}): {e}", case.name));
                let c = region_mi_from_entropies(m, &r, &spec()).unwrap_or_else(|e| panic!("{} {kind} ({s}, {t}): {e}", case.name));
                let ab = 3.0 * (a.numerical_error + b.numerical_error);
                let ac = 3.0 * (a.numerical_error + c.numerical_error);
                assert!((a.value - b.value).abs() <= ab, "{} {kind} ({s}, {t}): {a:?} {b:?}", case.name);
                assert!((a.value - c.value).abs() <= ac, "{} {kind} ({s}, {t}): {a:?} {c:?}", case.name);
            }
        }
        assert_eq!(done, 5, "{}", case.name);
    }
}

#[test]
fn exchangeable_models_are_symmetric() {
    for case in builtins().into_iter().filter(|c| c.exchangeable) {
        let m = case.model.as_ref();
        for &(s, t) in &case.points {
            for kind in [RegionKind::PastPast, RegionKind::ResidualResidual] {
                let (Ok(a), Ok(b)) = (mi_for(m, kind, s, t, &spec()), mi_for(m, kind, t, s, &spec())) else { continue };
                assert_abs_diff_eq!(a.value, b.value, epsilon = 1e-5);
            }
        }
    }
}

#[test]
fn null_regions_are_rejected() {
    let tri = make_uniform_triangle(1.0, 1.0).unwrap();
    assert!(matches!(residual_mi(&tri, 0.7, 0.5, &spec()), Err(lifeinfo::error::Error::ZeroRegionProbability(_))));
    let lin = make_linear_unit_square();
    assert!(past_mi(&lin, 0.0, 0.5, &spec()).is_err());
}
