//! Past and residual dynamic mutual information.
//!
//! For an inspection event `E` with probability `P`, write `A(x)` and `B(y)`
//! for the unnormalized marginals of the density restricted to `E`. Then
//!
//! ```text
//! M = (1/P) ∫∫_E f log[f / (A B)] + log P,
//! ```
//!
//! which is the form evaluated here. The literal definition and the entropy
//! identity `M = H_X + H_Y - H_XY` are exposed for cross-checking.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::entropy::{entropy_bundle, joint_entropy, marginal_entropy, Axis};
use crate::error::{Error, Result};
use crate::models::tte::TteModel;
use crate::models::BivariateLifetime;
use crate::quadrature::{integrate_2d, Domain2d, QuadratureSpec};
use crate::region::{ConditioningRegion, MeasureResult, RegionKind};

/// `f log f - f log A - f log B`, zero where any factor vanishes.
pub(crate) fn log_ratio_term(f: f64, a: f64, b: f64) -> f64 {
    if f <= 0.0 || a <= 0.0 || b <= 0.0 {
        return 0.0;
    }
    f * (f.ln() - a.ln() - b.ln())
}

/// Mutual information of the pair conditioned on `region`.
pub fn region_mi<M: BivariateLifetime + ?Sized>(model: &M, region: &ConditioningRegion, spec: &QuadratureSpec) -> Result<MeasureResult> {
    let p = region.probability(model);
    if !(p > 0.0) {
        return Err(Error::ZeroRegionProbability(p));
    }
    // B(y) is shared by every outer node; the inner rule revisits the same
    // abscissae whenever sections coincide.
    let cache: RefCell<HashMap<u64, f64>> = RefCell::new(HashMap::new());
    let b_of = |y: f64| {
        if let Some(v) = cache.borrow().get(&y.to_bits()) {
            return *v;
        }
        let v = region.y_marginal(model, y);
        cache.borrow_mut().insert(y.to_bits(), v);
        v
    };
    let r = region.integrate(
        model,
        |x, y| {
            let f = model.pdf(x, y);
            if f <= 0.0 {
                return 0.0;
            }
            log_ratio_term(f, region.x_marginal(model, x), b_of(y))
        },
        spec,
    )?;
    Ok(MeasureResult {
        value: r.value / p + p.ln(),
        numerical_error: r.error_estimate / p,
        evaluations: r.evaluations,
        converged: r.converged,
    })
}

/// The defining integral `∫∫ g log[g / (g_X g_Y)]` over the normalized
/// conditional densities.
pub fn region_mi_direct<M: BivariateLifetime + ?Sized>(
    model: &M,
    region: &ConditioningRegion,
    spec: &QuadratureSpec,
) -> Result<MeasureResult> {
    let p = region.probability(model);
    if !(p > 0.0) {
        return Err(Error::ZeroRegionProbability(p));
    }
    let r = region.integrate(
        model,
        |x, y| {
            let g = model.pdf(x, y) / p;
            let gx = region.x_marginal(model, x) / p;
            let gy = region.y_marginal(model, y) / p;
            log_ratio_term(g, gx, gy)
        },
        spec,
    )?;
    Ok(MeasureResult { value: r.value, numerical_error: r.error_estimate, evaluations: r.evaluations, converged: r.converged })
}

/// `H_X + H_Y - H_XY` for the region.
pub fn region_mi_from_entropies<M: BivariateLifetime + ?Sized>(
    model: &M,
    region: &ConditioningRegion,
    spec: &QuadratureSpec,
) -> Result<MeasureResult> {
    let b = entropy_bundle(model, region, spec)?;
    Ok(MeasureResult { value: b.h_x + b.h_y - b.h_joint, numerical_error: b.numerical_error, evaluations: 0, converged: true })
}

/// Unconditional mutual information over the whole support.
///
/// The result is flagged unconverged when the entropy identity disagrees
/// with the log-ratio integral by more than three combined error estimates
/// plus `1e-9`.
pub fn mutual_information_static<M: BivariateLifetime + ?Sized>(model: &M, spec: &QuadratureSpec) -> Result<MeasureResult> {
    let whole = ConditioningRegion::whole(model);
    let mut m = region_mi(model, &whole, spec)?;
    let hj = joint_entropy(model, &whole, spec)?;
    let hx = marginal_entropy(model, &whole, Axis::X, spec)?;
    let hy = marginal_entropy(model, &whole, Axis::Y, spec)?;
    let alt = hx.value + hy.value - hj.value;
    let err = m.numerical_error + hj.numerical_error + hx.numerical_error + hy.numerical_error;
    if (alt - m.value).abs() > 3.0 * err + 1e-9 {
        m.converged = false;
    }
    m.evaluations += hj.evaluations + hx.evaluations + hy.evaluations;
    Ok(m)
}

/// `M̃(s, t)`: both lifetimes known to have ended by `(s, t)`.
pub fn past_mi<M: BivariateLifetime + ?Sized>(model: &M, s: f64, t: f64, spec: &QuadratureSpec) -> Result<MeasureResult> {
    region_mi(model, &ConditioningRegion::past(model, s, t)?, spec)
}

/// `M(s, t)`: both lifetimes known to exceed `(s, t)`.
pub fn residual_mi<M: BivariateLifetime + ?Sized>(model: &M, s: f64, t: f64, spec: &QuadratureSpec) -> Result<MeasureResult> {
    region_mi(model, &ConditioningRegion::residual(model, s, t)?, spec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundDirection {
    /// `a(x, y) <= a(s, t)` on the probe grid, so `M <= bound`.
    Upper,
    /// `a(x, y) >= a(s, t)`, so `M >= bound`.
    Lower,
    /// `a` is constant on the grid; both directions hold.
    Tight,
    Inapplicable,
}

#[derive(Clone, Copy, Debug)]
pub struct BoundReport {
    /// `log a(s, t; s, t) + log P`.
    pub bound_value: f64,
    pub corner_ratio: f64,
    pub direction: BoundDirection,
    pub monotonicity_verified: bool,
    pub probes: usize,
}

const PROBE_GRID: usize = 32;

/// Points spread evenly in conditional probability along one axis.
fn probe_axis(cdf: impl Fn(f64) -> f64, quantile: impl Fn(f64) -> f64, anchor: f64, past: bool) -> Vec<f64> {
    let fa = cdf(anchor);
    (0..PROBE_GRID)
        .map(|i| {
            let u = (i as f64 + 0.5) / PROBE_GRID as f64;
            let level = if past { fa * u } else { fa + (1.0 - fa) * u };
            quantile(level)
        })
        .collect()
}

fn dependence_ratio<M: BivariateLifetime + ?Sized>(model: &M, region: &ConditioningRegion, x: f64, y: f64) -> Option<f64> {
    let f = model.pdf(x, y);
    let a = region.x_marginal(model, x);
    let b = region.y_marginal(model, y);
    (f > 0.0 && a > 0.0 && b > 0.0).then(|| f / (a * b))
}

/// Checks `a(x, y; s, t)` against its corner value on a 32×32 probe grid
/// and reports the resulting bound on the region's mutual information.
pub fn region_mi_bound<M: BivariateLifetime + ?Sized>(model: &M, region: &ConditioningRegion) -> Result<BoundReport> {
    let p = region.probability(model);
    if !(p > 0.0) {
        return Err(Error::ZeroRegionProbability(p));
    }
    let (s, t) = (region.s, region.t);
    let inapplicable = |corner: f64| BoundReport {
        bound_value: f64::NAN,
        corner_ratio: corner,
        direction: BoundDirection::Inapplicable,
        monotonicity_verified: false,
        probes: 0,
    };
    let corner = match dependence_ratio(model, region, s, t) {
        Some(c) if c.is_finite() => c,
        _ => return Ok(inapplicable(f64::NAN)),
    };
    let xs = probe_axis(|x| model.marginal_cdf_x(x), |p| model.marginal_quantile_x(p), s, region.kind.x_past());
    let ys = probe_axis(|y| model.marginal_cdf_y(y), |p| model.marginal_quantile_y(p), t, region.kind.y_past());
    let tol = 1e-9 * corner;
    let (mut below, mut above, mut probes) = (true, true, 0);
    for &x in &xs {
        for &y in &ys {
            if !region.contains(x, y) {
                continue;
            }
            if let Some(a) = dependence_ratio(model, region, x, y) {
                probes += 1;
                below &= a <= corner + tol;
                above &= a >= corner - tol;
            }
        }
    }
    let direction = match (probes > 0, below, above) {
        (false, _, _) => BoundDirection::Inapplicable,
        (true, true, true) => BoundDirection::Tight,
        (true, true, false) => BoundDirection::Upper,
        (true, false, true) => BoundDirection::Lower,
        (true, false, false) => BoundDirection::Inapplicable,
    };
    Ok(BoundReport {
        bound_value: corner.ln() + p.ln(),
        corner_ratio: corner,
        direction,
        monotonicity_verified: direction != BoundDirection::Inapplicable,
        probes,
    })
}

pub fn past_mi_bound<M: BivariateLifetime + ?Sized>(model: &M, s: f64, t: f64) -> Result<BoundReport> {
    region_mi_bound(model, &ConditioningRegion::past(model, s, t)?)
}

pub fn residual_mi_bound<M: BivariateLifetime + ?Sized>(model: &M, s: f64, t: f64) -> Result<BoundReport> {
    region_mi_bound(model, &ConditioningRegion::residual(model, s, t)?)
}

/// `g / (g_X g_Y)` for the conditioned pair at age-shifted coordinates
/// (the same convention as [`crate::entropy::conditional_density`]).
pub fn local_dependence_ratio<M: BivariateLifetime + ?Sized>(model: &M, region: &ConditioningRegion, x: f64, y: f64) -> Result<f64> {
    let (ox, oy) = region.to_original(x, y);
    let p = region.probability(model);
    let a = region.x_marginal(model, ox);
    let b = region.y_marginal(model, oy);
    if !(a > 0.0 && b > 0.0 && p > 0.0) {
        return Err(Error::ZeroDenominator { x, y });
    }
    Ok(model.pdf(ox, oy) * p / (a * b))
}

/// Compares the past information of `model_uv` with the residual
/// information of `model_xy` at the reflected inspection times, after
/// checking `f_UV(x, y) = f_XY(2x0 - x, 2y0 - y)` on probe points.
pub fn symmetry_transfer_check(
    model_xy: &dyn BivariateLifetime,
    model_uv: &dyn BivariateLifetime,
    x0: f64,
    y0: f64,
    grid: &[(f64, f64)],
    spec: &QuadratureSpec,
) -> Result<f64> {
    let (cx, cy) = (2.0 * x0, 2.0 * y0);
    let probe_levels = [0.1, 0.3, 0.5, 0.7, 0.9];
    for &pu in &probe_levels {
        for &pv in &probe_levels {
            let (x, y) = (model_uv.marginal_quantile_x(pu), model_uv.marginal_quantile_y(pv));
            let (a, b) = (model_uv.pdf(x, y), model_xy.pdf(cx - x, cy - y));
            if (a - b).abs() > 1e-10 * a.abs().max(1.0) {
                return Err(Error::NotSymmetricPair(format!("f_UV({x}, {y}) = {a} but f_XY({}, {}) = {b}", cx - x, cy - y)));
            }
        }
    }
    let mut worst: f64 = 0.0;
    for &(s, t) in grid {
        let m_uv = past_mi(model_uv, s, t, spec)?;
        let m_xy = residual_mi(model_xy, cx - s, cy - t, spec)?;
        worst = worst.max((m_uv.value - m_xy.value).abs());
    }
    Ok(worst)
}

/// Residual information of a TTE model through the substitution
/// `u = R1(x)`, `v = R2(y)`:
///
/// ```text
/// M = 1/W̄(c) ∫∫ W̄''(u + v) log[W̄''(u + v) W̄(c) / (W̄'(u + R2(t)) W̄'(R1(s) + v))] dv du
/// ```
///
/// over `u > R1(s)`, `v > R2(t)` (and `u + v < ω` when truncated), with
/// `c = R1(s) + R2(t)`.
pub fn residual_mi_tte(tte: &TteModel, s: f64, t: f64, spec: &QuadratureSpec) -> Result<MeasureResult> {
    let w = tte.transform();
    let (r1s, r2t) = (tte.r1().value(s.max(0.0)), tte.r2().value(t.max(0.0)));
    let c = r1s + r2t;
    let wc = w.value(c);
    if !(wc > 0.0) || tte.omega().is_some_and(|om| c >= om) {
        return Err(Error::ZeroRegionProbability(wc.max(0.0)));
    }
    let integrand = |u: f64, v: f64| {
        let d2 = w.d2(u + v);
        if d2 <= 0.0 {
            return 0.0;
        }
        let (a, b) = (-w.d1(u + r2t), -w.d1(r1s + v));
        log_ratio_term(d2, a, b) + d2 * wc.ln()
    };
    let r = match tte.omega() {
        None => integrate_2d(integrand, &Domain2d::rectangle(r1s, f64::INFINITY, r2t, f64::INFINITY), spec)?,
        Some(om) => integrate_2d(integrand, &Domain2d::y_section(r1s, om - r2t, move |_| r2t, move |u| om - u), spec)?,
    };
    Ok(MeasureResult { value: r.value / wc, numerical_error: r.error_estimate / wc, evaluations: r.evaluations, converged: r.converged })
}

/// Residual information along the diagonal `s = t`.
pub fn diagonal_sweep<M: BivariateLifetime + ?Sized>(model: &M, t_grid: &[f64], spec: &QuadratureSpec) -> Result<Vec<MeasureResult>> {
    t_grid.iter().map(|&t| residual_mi(model, t, t, spec)).collect()
}

/// Largest deviation of the values from `reference`: relative when
/// `|reference| > 0.1`, absolute otherwise.
pub fn max_deviation(values: &[MeasureResult], reference: f64) -> f64 {
    let scale = if reference.abs() > 0.1 { reference.abs() } else { 1.0 };
    values.iter().map(|m| (m.value - reference).abs() / scale).fold(0.0, f64::max)
}

/// Verifies the bivariate lack-of-memory identity on probe points, then
/// returns the largest deviation of `M(t, t)` from `M(0, 0)` over `t_grid`.
pub fn blm_constancy_check<M: BivariateLifetime + ?Sized>(model: &M, t_grid: &[f64], spec: &QuadratureSpec) -> Result<f64> {
    let probes = [0.0, 0.15, 0.4, 1.0];
    for &x in &probes {
        for &y in &probes {
            for &t in &[0.2, 0.8] {
                let lhs = model.survival(x + t, y + t);
                let rhs = model.survival(x, y) * model.survival(t, t);
                if (lhs - rhs).abs() > 1e-10 {
                    return Err(Error::NotBlm(format!("F̄({}, {}) = {lhs} but F̄({x}, {y}) F̄({t}, {t}) = {rhs}", x + t, y + t)));
                }
            }
        }
    }
    let base = residual_mi(model, 0.0, 0.0, spec)?;
    Ok(max_deviation(&diagonal_sweep(model, t_grid, spec)?, base.value))
}

/// Convenience: mutual information for any of the four regions.
pub fn mi_for<M: BivariateLifetime + ?Sized>(model: &M, kind: RegionKind, s: f64, t: f64, spec: &QuadratureSpec) -> Result<MeasureResult> {
    region_mi(model, &ConditioningRegion::new(model, kind, s, t)?, spec)
}
