//! Time-transformed exponential models, `F̄(s, t) = W̄[R1(s) + R2(t)]`.
//!
//! `W̄` separates the dependence structure from the marginal ageing carried
//! by the accumulated hazards `R1`, `R2`. When `W̄` reaches zero at a finite
//! `ω` the lifetimes are truncated to `R1(x) + R2(y) <= ω`.

use std::sync::Arc;

use super::{BivariateLifetime, Support};
use crate::error::{Error, Result};

/// The time transform `W̄` with analytic first and second derivatives.
pub trait TimeTransform: Send + Sync {
    fn name(&self) -> String;
    fn value(&self, r: f64) -> f64;
    fn d1(&self, r: f64) -> f64;
    fn d2(&self, r: f64) -> f64;
    /// Truncation point where `W̄` vanishes, if any.
    fn omega(&self) -> Option<f64> {
        None
    }
}

/// Accumulated hazard `R` with derivative and inverse.
pub trait CumulativeHazard: Send + Sync {
    fn name(&self) -> String;
    fn value(&self, t: f64) -> f64;
    fn deriv(&self, t: f64) -> f64;
    fn inverse(&self, r: f64) -> f64;
}

/// `W̄(x) = (1 + x)^{-r}` (bivariate Lomax when the hazards are linear).
#[derive(Clone, Copy, Debug)]
pub struct LomaxTransform {
    pub r: f64,
}

impl TimeTransform for LomaxTransform {
    fn name(&self) -> String {
        format!("lomax(r={})", self.r)
    }
    fn value(&self, x: f64) -> f64 {
        (1.0 + x).powf(-self.r)
    }
    fn d1(&self, x: f64) -> f64 {
        -self.r * (1.0 + x).powf(-self.r - 1.0)
    }
    fn d2(&self, x: f64) -> f64 {
        self.r * (self.r + 1.0) * (1.0 + x).powf(-self.r - 2.0)
    }
}

/// `W̄(x) = (x/ω - 1)^2` on `[0, ω]`, zero beyond.
#[derive(Clone, Copy, Debug)]
pub struct QuadraticTruncation {
    pub omega: f64,
}

impl TimeTransform for QuadraticTruncation {
    fn name(&self) -> String {
        format!("quadratic(omega={})", self.omega)
    }
    fn value(&self, x: f64) -> f64 {
        if x >= self.omega {
            0.0
        } else {
            (x / self.omega - 1.0).powi(2)
        }
    }
    fn d1(&self, x: f64) -> f64 {
        if x >= self.omega {
            0.0
        } else {
            2.0 * (x / self.omega - 1.0) / self.omega
        }
    }
    fn d2(&self, x: f64) -> f64 {
        if x > self.omega {
            0.0
        } else {
            2.0 / (self.omega * self.omega)
        }
    }
    fn omega(&self) -> Option<f64> {
        Some(self.omega)
    }
}

/// `R(t) = rate · t`.
#[derive(Clone, Copy, Debug)]
pub struct LinearHazard {
    pub rate: f64,
}

impl CumulativeHazard for LinearHazard {
    fn name(&self) -> String {
        format!("linear({})", self.rate)
    }
    fn value(&self, t: f64) -> f64 {
        self.rate * t
    }
    fn deriv(&self, _t: f64) -> f64 {
        self.rate
    }
    fn inverse(&self, r: f64) -> f64 {
        r / self.rate
    }
}

/// `R(t) = (t/scale)^shape` (Weibull ageing); `shape >= 1` keeps `R'` finite.
#[derive(Clone, Copy, Debug)]
pub struct PowerHazard {
    pub scale: f64,
    pub shape: f64,
}

impl CumulativeHazard for PowerHazard {
    fn name(&self) -> String {
        format!("power(scale={}, shape={})", self.scale, self.shape)
    }
    fn value(&self, t: f64) -> f64 {
        (t.max(0.0) / self.scale).powf(self.shape)
    }
    fn deriv(&self, t: f64) -> f64 {
        self.shape / self.scale * (t.max(0.0) / self.scale).powf(self.shape - 1.0)
    }
    fn inverse(&self, r: f64) -> f64 {
        self.scale * r.max(0.0).powf(1.0 / self.shape)
    }
}

#[derive(Clone)]
pub struct TteModel {
    transform: Arc<dyn TimeTransform>,
    r1: Arc<dyn CumulativeHazard>,
    r2: Arc<dyn CumulativeHazard>,
    support: Support,
}

impl std::fmt::Debug for TteModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TteModel({})", self.name())
    }
}

fn probe_points(limit: f64) -> Vec<f64> {
    let span = if limit.is_finite() { limit } else { 20.0 };
    (0..=40).map(|i| span * (i as f64 / 40.0).powi(2)).collect()
}

fn check_transform(w: &dyn TimeTransform) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidTte(msg));
    if (w.value(0.0) - 1.0).abs() > 1e-12 {
        return bad(format!("W(0) = {} != 1", w.value(0.0)));
    }
    let limit = w.omega().unwrap_or(f64::INFINITY);
    let pts = probe_points(limit);
    for pair in pts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if !(w.value(b) < w.value(a)) {
            return bad(format!("W not strictly decreasing on [{a}, {b}]"));
        }
    }
    for &r in &pts[..pts.len() - 1] {
        if w.d2(r) < 0.0 {
            return bad(format!("W''({r}) = {} < 0 (not convex)", w.d2(r)));
        }
        if w.d1(r) > 0.0 {
            return bad(format!("W'({r}) = {} > 0", w.d1(r)));
        }
        // Analytic derivatives must match central differences.
        let h = 1e-5 * (1.0 + r);
        if r > h {
            let fd1 = (w.value(r + h) - w.value(r - h)) / (2.0 * h);
            let fd2 = (w.d1(r + h) - w.d1(r - h)) / (2.0 * h);
            if (fd1 - w.d1(r)).abs() > 1e-5 * w.d1(r).abs().max(1e-3) {
                return bad(format!("W' inconsistent with W at {r}"));
            }
            if (fd2 - w.d2(r)).abs() > 1e-5 * w.d2(r).abs().max(1e-3) {
                return bad(format!("W'' inconsistent with W' at {r}"));
            }
        }
    }
    if let Some(omega) = w.omega() {
        if !(omega > 0.0) {
            return bad(format!("omega must be positive, got {omega}"));
        }
        if w.value(omega).abs() > 1e-12 {
            return bad(format!("W(omega) = {} != 0", w.value(omega)));
        }
        // W'(ω) = 0 is needed for the truncated density to integrate to one.
        let h = 1e-6 * omega;
        let slope = (w.value(omega) - w.value(omega - h)) / h;
        if slope.abs() > 1e-5 || w.d1(omega).abs() > 1e-8 {
            return bad(format!("W'(omega) = {slope:e} must vanish"));
        }
    }
    Ok(())
}

fn check_hazard(r: &dyn CumulativeHazard, label: &str) -> Result<()> {
    if r.value(0.0).abs() > 1e-14 {
        return Err(Error::InvalidTte(format!("{label}(0) = {} != 0", r.value(0.0))));
    }
    let pts = probe_points(f64::INFINITY);
    for pair in pts.windows(2) {
        if !(r.value(pair[1]) > r.value(pair[0])) {
            return Err(Error::InvalidTte(format!("{label} not strictly increasing near {}", pair[0])));
        }
    }
    for &t in &pts[1..] {
        let back = r.inverse(r.value(t));
        if (back - t).abs() > 1e-9 * t.max(1.0) {
            return Err(Error::InvalidTte(format!("{label} inverse is inconsistent at {t}")));
        }
        if !(r.deriv(t) > 0.0) {
            return Err(Error::InvalidTte(format!("{label}'({t}) must be positive")));
        }
    }
    Ok(())
}

/// Builds a TTE model after probing monotonicity, convexity and the
/// truncation conditions.
pub fn make_tte(transform: Arc<dyn TimeTransform>, r1: Arc<dyn CumulativeHazard>, r2: Arc<dyn CumulativeHazard>) -> Result<TteModel> {
    check_transform(transform.as_ref())?;
    check_hazard(r1.as_ref(), "R1")?;
    check_hazard(r2.as_ref(), "R2")?;
    let support = match transform.omega() {
        None => Support::Rectangle { x_max: f64::INFINITY, y_max: f64::INFINITY },
        Some(omega) => {
            let (a, b) = (r1.clone(), r2.clone());
            let (c, d) = (r1.clone(), r2.clone());
            Support::Curvilinear {
                x_max: r1.inverse(omega),
                y_max: r2.inverse(omega),
                y_upper: Arc::new(move |x| b.inverse((omega - a.value(x)).max(0.0))),
                x_upper: Arc::new(move |y| c.inverse((omega - d.value(y)).max(0.0))),
            }
        }
    };
    Ok(TteModel { transform, r1, r2, support })
}

/// Bivariate Lomax: `W̄(x) = (1 + x)^{-r}`, `R1 = αs`, `R2 = βt`.
pub fn make_lomax_tte(r: f64, alpha: f64, beta: f64) -> Result<TteModel> {
    if !(r > 0.0 && alpha > 0.0 && beta > 0.0) {
        return Err(Error::InvalidParameters(format!("lomax needs r, alpha, beta > 0, got ({r}, {alpha}, {beta})")));
    }
    make_tte(Arc::new(LomaxTransform { r }), Arc::new(LinearHazard { rate: alpha }), Arc::new(LinearHazard { rate: beta }))
}

/// Truncated model with `W̄(x) = (x/ω - 1)^2` and the given hazards.
pub fn make_truncated_quadratic_tte(omega: f64, r1: Arc<dyn CumulativeHazard>, r2: Arc<dyn CumulativeHazard>) -> Result<TteModel> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParameters(format!("omega must be positive and finite, got {omega}")));
    }
    make_tte(Arc::new(QuadraticTruncation { omega }), r1, r2)
}

impl TteModel {
    pub fn transform(&self) -> &dyn TimeTransform {
        self.transform.as_ref()
    }

    pub fn r1(&self) -> &dyn CumulativeHazard {
        self.r1.as_ref()
    }

    pub fn r2(&self) -> &dyn CumulativeHazard {
        self.r2.as_ref()
    }

    pub fn omega(&self) -> Option<f64> {
        self.transform.omega()
    }

    fn admissible(&self, arg: f64) -> bool {
        self.omega().is_none_or(|w| arg <= w)
    }

    fn w(&self, r: f64) -> f64 {
        self.transform.value(r)
    }

    fn w1(&self, r: f64) -> f64 {
        if self.admissible(r) {
            self.transform.d1(r)
        } else {
            0.0
        }
    }
}

impl BivariateLifetime for TteModel {
    fn name(&self) -> String {
        format!("tte[{}; {}; {}]", self.transform.name(), self.r1.name(), self.r2.name())
    }

    fn support(&self) -> &Support {
        &self.support
    }

    fn pdf(&self, x: f64, y: f64) -> f64 {
        if x < 0.0 || y < 0.0 {
            return 0.0;
        }
        let arg = self.r1.value(x) + self.r2.value(y);
        if !self.admissible(arg) {
            return 0.0;
        }
        self.transform.d2(arg) * self.r1.deriv(x) * self.r2.deriv(y)
    }

    fn cdf(&self, x: f64, y: f64) -> f64 {
        if x <= 0.0 || y <= 0.0 {
            return 0.0;
        }
        let (a, b) = (self.r1.value(x), self.r2.value(y));
        1.0 - self.w(a) - self.w(b) + self.w(a + b)
    }

    fn survival(&self, x: f64, y: f64) -> f64 {
        self.w(self.r1.value(x.max(0.0)) + self.r2.value(y.max(0.0)))
    }

    fn marginal_cdf_x(&self, x: f64) -> f64 {
        1.0 - self.w(self.r1.value(x.max(0.0)))
    }

    fn marginal_cdf_y(&self, y: f64) -> f64 {
        1.0 - self.w(self.r2.value(y.max(0.0)))
    }

    fn marginal_pdf_x(&self, x: f64) -> f64 {
        self.survival_dx(x, 0.0)
    }

    fn marginal_pdf_y(&self, y: f64) -> f64 {
        self.survival_dy(0.0, y)
    }

    fn cdf_dx(&self, x: f64, t: f64) -> f64 {
        if x < 0.0 || t <= 0.0 {
            return 0.0;
        }
        let a = self.r1.value(x);
        (self.w1(a + self.r2.value(t)) - self.w1(a)) * self.r1.deriv(x)
    }

    fn cdf_dy(&self, s: f64, y: f64) -> f64 {
        if y < 0.0 || s <= 0.0 {
            return 0.0;
        }
        let b = self.r2.value(y);
        (self.w1(self.r1.value(s) + b) - self.w1(b)) * self.r2.deriv(y)
    }

    fn survival_dx(&self, x: f64, t: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        -self.w1(self.r1.value(x) + self.r2.value(t.max(0.0))) * self.r1.deriv(x)
    }

    fn survival_dy(&self, s: f64, y: f64) -> f64 {
        if y < 0.0 {
            return 0.0;
        }
        -self.w1(self.r1.value(s.max(0.0)) + self.r2.value(y)) * self.r2.deriv(y)
    }
}
