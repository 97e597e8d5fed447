//! Dynamic information between the first and last failure of `n` i.i.d.
//! components, given `X_{1:n} ≤ s < t < X_{n:n}`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::UnivariateLifetime;
use crate::quadrature::{integrate_1d, integrate_2d, Domain2d, QuadratureSpec};
use crate::region::MeasureResult;

/// `n` i.i.d. components with a common continuous lifetime law.
#[derive(Clone)]
pub struct OrderStatModel {
    component: Arc<dyn UnivariateLifetime>,
    n: u32,
}

impl std::fmt::Debug for OrderStatModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "OrderStatModel(n={}, {})", self.n, self.component.name())
    }
}

impl OrderStatModel {
    pub fn new(component: Arc<dyn UnivariateLifetime>, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameters(format!("need n >= 2 components, got {n}")));
        }
        Ok(Self { component, n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn component(&self) -> &dyn UnivariateLifetime {
        self.component.as_ref()
    }

    /// Inspection times at the `p`th and `q`th component quantiles.
    pub fn times_for(&self, p: f64, q: f64) -> (f64, f64) {
        (self.component.quantile(p), self.component.quantile(q))
    }
}

/// `a^m - b^m` for `0 <= b <= a`, without cancellation when `b ≈ a`.
fn pow_diff(a: f64, b: f64, m: i32) -> f64 {
    if m == 0 || a <= 0.0 {
        return 0.0;
    }
    if b <= 0.0 {
        return a.powi(m);
    }
    a.powi(m) * -(m as f64 * ((b - a) / a).ln_1p()).exp_m1()
}

fn check_order(fs: f64, ft: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&fs) || !(0.0..=1.0).contains(&ft) || fs > ft {
        return Err(Error::InvalidProbabilityOrder(format!("need 0 <= F(s) <= F(t) <= 1, got ({fs}, {ft})")));
    }
    Ok(())
}

fn check_n(n: u32) -> Result<i32> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("need n >= 2, got {n}")));
    }
    i32::try_from(n).map_err(|_| Error::InvalidParameters(format!("n = {n} is too large")))
}

/// `P(X_{1:n} ≤ s, X_{n:n} > t) = 1 - F(t)^n + [F(t) - F(s)]^n - [1 - F(s)]^n`.
///
/// Summed as `Σ_i P(exactly i failures by s, at least one after t)`, whose
/// terms are all nonnegative.
pub fn joint_event_prob(fs: f64, ft: f64, n: u32) -> Result<f64> {
    check_order(fs, ft)?;
    let m = check_n(n)?;
    if fs == 0.0 || fs == 1.0 {
        return Ok(0.0);
    }
    let (ln_p, ln_1mp) = (fs.ln(), (-fs).ln_1p());
    // log of (F(t) - F(s)) / (1 - F(s)).
    let ln_ratio = (-(1.0 - ft) / (1.0 - fs)).ln_1p();
    let mut ln_binom = 0.0;
    let mut total = 0.0;
    for i in 1..m {
        ln_binom += ((m - i + 1) as f64).ln() - (i as f64).ln();
        let k = (m - i) as f64;
        let above = -(k * ln_ratio).exp_m1();
        total += (ln_binom + i as f64 * ln_p + k * ln_1mp).exp() * above;
    }
    Ok(total)
}

/// `H_n(p, q)`: the joint event probability at quantile-anchored times.
pub fn h_n(p: f64, q: f64, n: u32) -> Result<f64> {
    if !(0.0 < p && p < q && q < 1.0) {
        return Err(Error::InvalidProbabilityOrder(format!("need 0 < p < q < 1, got ({p}, {q})")));
    }
    joint_event_prob(p, q, n)
}

fn k_spec() -> QuadratureSpec {
    QuadratureSpec::default().with_tolerances(1e-13, 1e-300)
}

/// `K_n(p, q) = ∫_0^p g log g du` with `g(u) = (1 - u)^{n-1} - (q - u)^{n-1}`.
pub fn k_n(p: f64, q: f64, n: u32) -> Result<f64> {
    let m = check_n(n)? - 1;
    if !((0.0..1.0).contains(&p) && q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidProbabilityOrder(format!("K_n needs p in [0, 1) and q in (0, 1], got ({p}, {q})")));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    let g = |u: f64| {
        let (a, b) = (1.0 - u, q - u);
        if b <= 0.0 {
            // Past u = q the second term of the difference is absent.
            a.powi(m)
        } else {
            pow_diff(a, b, m)
        }
    };
    let breaks = if q < p { vec![q] } else { Vec::new() };
    let r = crate::quadrature::integrate_1d_with_breaks(
        |u| {
            let v = g(u);
            if v > 0.0 {
                v * v.ln()
            } else {
                0.0
            }
        },
        0.0,
        p,
        &breaks,
        &k_spec(),
    )?;
    Ok(r.value)
}

/// The three conditional densities of the first and last failure given
/// `X_{1:n} ≤ s < t < X_{n:n}`.
#[derive(Clone, Debug)]
pub struct OsDensities {
    model: OrderStatModel,
    pub s: f64,
    pub t: f64,
    pub probability: f64,
    fs: f64,
    ft: f64,
}

impl OsDensities {
    fn n(&self) -> i32 {
        self.model.n as i32
    }

    /// `(1 - F(x))^{n-1} - (F(t) - F(x))^{n-1}`.
    fn min_kernel(&self, x: f64) -> f64 {
        let c = self.model.component();
        pow_diff(c.survival(x), (self.ft - c.cdf(x)).max(0.0), self.n() - 1)
    }

    /// `F(y)^{n-1} - (F(y) - F(s))^{n-1}`.
    fn max_kernel(&self, y: f64) -> f64 {
        let fy = self.model.component().cdf(y);
        pow_diff(fy, (fy - self.fs).max(0.0), self.n() - 1)
    }

    /// Density of the first failure, on `0 < x < s`.
    pub fn min_density(&self, x: f64) -> f64 {
        if !(x > 0.0 && x < self.s) {
            return 0.0;
        }
        self.n() as f64 * self.min_kernel(x) * self.model.component().pdf(x) / self.probability
    }

    /// Density of the last failure, on `y > t`.
    pub fn max_density(&self, y: f64) -> f64 {
        if !(y > self.t) {
            return 0.0;
        }
        self.n() as f64 * self.max_kernel(y) * self.model.component().pdf(y) / self.probability
    }

    /// Joint density on `0 < x < s < t < y`.
    pub fn joint_density(&self, x: f64, y: f64) -> f64 {
        if !(x > 0.0 && x < self.s && y > self.t) {
            return 0.0;
        }
        let c = self.model.component();
        let n = self.n() as f64;
        let gap = (c.cdf(y) - c.cdf(x)).max(0.0);
        n * (n - 1.0) * gap.powi(self.n() - 2) * c.pdf(x) * c.pdf(y) / self.probability
    }

    /// `joint / (min · max)`; the component densities cancel.
    fn ratio(&self, x: f64, y: f64) -> f64 {
        let c = self.model.component();
        let n = self.n() as f64;
        let gap = (c.cdf(y) - c.cdf(x)).max(0.0);
        let den = n * self.min_kernel(x) * self.max_kernel(y);
        if den <= 0.0 {
            return f64::NAN;
        }
        (n - 1.0) * gap.powi(self.n() - 2) * self.probability / den
    }
}

pub fn conditional_os_densities(osm: &OrderStatModel, s: f64, t: f64) -> Result<OsDensities> {
    if !(0.0 < s && s < t) {
        return Err(Error::InvalidProbabilityOrder(format!("need 0 < s < t, got ({s}, {t})")));
    }
    let c = osm.component();
    let (fs, ft) = (c.cdf(s), c.cdf(t));
    let probability = joint_event_prob(fs, ft, osm.n)?;
    if !(probability > 0.0) {
        return Err(Error::ZeroRegionProbability(probability));
    }
    Ok(OsDensities { model: osm.clone(), s, t, probability, fs, ft })
}

/// `r log r - r + 1`, accurate near `r = 1`.
fn phi(r: f64) -> f64 {
    let d = r - 1.0;
    if d.abs() < 0.5 {
        (1.0 + d) * d.ln_1p() - d
    } else {
        r * r.ln() - d
    }
}

/// Mutual information by 2D quadrature over `(0, s) × (t, ∞)`.
///
/// The integrand `f log[f / (f_1 f_n)]` is evaluated as
/// `f_1 f_n φ(f / (f_1 f_n))` with `φ(r) = r log r - r + 1`. The two agree
/// because both the joint and the product density have unit mass on the
/// product domain; the second form is nonnegative and free of cancellation.
pub fn os_mi_direct(osm: &OrderStatModel, s: f64, t: f64, spec: &QuadratureSpec) -> Result<MeasureResult> {
    let d = conditional_os_densities(osm, s, t)?;
    let upper = osm.component().upper();
    let r = integrate_2d(
        |x, y| {
            let (a, b) = (d.min_density(x), d.max_density(y));
            if a <= 0.0 || b <= 0.0 {
                return 0.0;
            }
            let ratio = d.ratio(x, y);
            if ratio.is_finite() {
                a * b * phi(ratio)
            } else {
                0.0
            }
        },
        &Domain2d::rectangle(0.0, s, t, upper),
        spec,
    )?;
    Ok(MeasureResult { value: r.value, numerical_error: r.error_estimate, evaluations: r.evaluations, converged: r.converged })
}

/// Absolute accuracy of [`os_mi_closed_form`].
pub const CLOSED_FORM_ABS_ERROR: f64 = 1e-14;

/// Distribution-free closed form at `s = ξ_p`, `t = ξ_q`.
///
/// The result is a difference of order-one terms, so its absolute accuracy
/// is near [`CLOSED_FORM_ABS_ERROR`]; very small values are better taken
/// from [`os_mi_direct`].
pub fn os_mi_closed_form(p: f64, q: f64, n: u32) -> Result<f64> {
    let h = h_n(p, q, n)?;
    let nf = n as f64;
    let xlx = |v: f64, m: f64| if v > 0.0 { v.powf(m) * v.ln() } else { 0.0 };
    let boundary = xlx(1.0 - p, nf) + xlx(q, nf) - xlx(q - p, nf);
    let k = k_n(p, q, n)? + k_n(1.0 - q, 1.0 - p, n)?;
    Ok(((nf - 1.0) / nf * h).ln() - (nf - 2.0) * (2.0 * nf - 1.0) / (nf * (nf - 1.0)) - nf / h * (k + (nf - 2.0) / nf * boundary))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub p: f64,
    pub q: f64,
    pub value: f64,
}

/// Closed-form values over all grid pairs with `p < q`, in row-major order.
pub fn os_mi_surface(n: u32, p_grid: &[f64], q_grid: &[f64]) -> Result<Vec<SurfacePoint>> {
    let pairs: Vec<(f64, f64)> =
        p_grid.iter().flat_map(|&p| q_grid.iter().map(move |&q| (p, q))).filter(|(p, q)| 0.0 < *p && p < q && *q < 1.0).collect();
    pairs.par_iter().map(|&(p, q)| Ok(SurfacePoint { p, q, value: os_mi_closed_form(p, q, n)? })).collect()
}

/// Convenience for the direct route at quantile-anchored times.
pub fn os_mi_direct_quantiles(osm: &OrderStatModel, p: f64, q: f64, spec: &QuadratureSpec) -> Result<MeasureResult> {
    h_n(p, q, osm.n)?;
    let (s, t) = osm.times_for(p, q);
    os_mi_direct(osm, s, t, spec)
}

/// Total mass of each conditional density, for checking normalization.
pub fn os_density_masses(d: &OsDensities, spec: &QuadratureSpec) -> Result<(f64, f64, f64)> {
    let upper = d.model.component().upper();
    let a = integrate_1d(|x| d.min_density(x), 0.0, d.s, spec)?.value;
    let b = integrate_1d(|y| d.max_density(y), d.t, upper, spec)?.value;
    let c = integrate_2d(|x, y| d.joint_density(x, y), &Domain2d::rectangle(0.0, d.s, d.t, upper), spec)?.value;
    Ok((a, b, c))
}
