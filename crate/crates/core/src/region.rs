//! The four inspection events `{X ≤ s | X > s} × {Y ≤ t | Y > t}` and the
//! integrals over them that every dynamic measure is built from.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::models::BivariateLifetime;
use crate::quadrature::{integrate_1d_with_breaks, integrate_iterated, IntegralResult, QuadratureSpec};

/// Region probabilities at or below this are treated as null events.
pub const MIN_REGION_PROBABILITY: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionKind {
    /// `X ≤ s, Y ≤ t`: both items failed before inspection.
    PastPast,
    /// `X > s, Y > t`: both still working.
    ResidualResidual,
    /// `X ≤ s, Y > t`.
    PastResidual,
    /// `X > s, Y ≤ t`.
    ResidualPast,
}

impl RegionKind {
    pub const ALL: [RegionKind; 4] =
        [RegionKind::PastPast, RegionKind::ResidualResidual, RegionKind::PastResidual, RegionKind::ResidualPast];

    pub fn x_past(self) -> bool {
        matches!(self, Self::PastPast | Self::PastResidual)
    }

    pub fn y_past(self) -> bool {
        matches!(self, Self::PastPast | Self::ResidualPast)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::PastPast => "past-past",
            Self::ResidualResidual => "residual-residual",
            Self::PastResidual => "past-residual",
            Self::ResidualPast => "residual-past",
        }
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "past-past" | "past" => Ok(Self::PastPast),
            "residual-residual" | "residual" => Ok(Self::ResidualResidual),
            "past-residual" => Ok(Self::PastResidual),
            "residual-past" => Ok(Self::ResidualPast),
            other => Err(Error::InvalidParameters(format!("unknown region '{other}'"))),
        }
    }
}

/// A region anchored at the inspection times `(s, t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditioningRegion {
    pub kind: RegionKind,
    pub s: f64,
    pub t: f64,
}

/// Value of a dynamic measure with its numerical error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureResult {
    pub value: f64,
    pub numerical_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl MeasureResult {
    pub fn exact(value: f64) -> Self {
        Self { value, numerical_error: 0.0, evaluations: 0, converged: true }
    }
}

impl ConditioningRegion {
    /// Builds the region, rejecting null events.
    pub fn new<M: BivariateLifetime + ?Sized>(model: &M, kind: RegionKind, s: f64, t: f64) -> Result<Self> {
        if !(s.is_finite() && t.is_finite()) {
            return Err(Error::InvalidParameters(format!("inspection times must be finite, got ({s}, {t})")));
        }
        let region = Self { kind, s, t };
        let p = region.probability(model);
        if !(p > MIN_REGION_PROBABILITY) {
            return Err(Error::ZeroRegionProbability(p));
        }
        Ok(region)
    }

    pub fn past<M: BivariateLifetime + ?Sized>(model: &M, s: f64, t: f64) -> Result<Self> {
        Self::new(model, RegionKind::PastPast, s, t)
    }

    pub fn residual<M: BivariateLifetime + ?Sized>(model: &M, s: f64, t: f64) -> Result<Self> {
        Self::new(model, RegionKind::ResidualResidual, s, t)
    }

    /// The whole support, as a residual region anchored at its lower corner.
    pub fn whole<M: BivariateLifetime + ?Sized>(model: &M) -> Self {
        let (xlo, _) = model.support().x_bounds();
        let (ylo, _) = model.support().y_bounds();
        Self { kind: RegionKind::ResidualResidual, s: xlo, t: ylo }
    }

    pub fn probability<M: BivariateLifetime + ?Sized>(&self, model: &M) -> f64 {
        let (s, t) = (self.s, self.t);
        match self.kind {
            RegionKind::PastPast => model.cdf(s, t),
            RegionKind::ResidualResidual => model.survival(s, t),
            RegionKind::PastResidual => model.marginal_cdf_x(s) - model.cdf(s, t),
            RegionKind::ResidualPast => model.marginal_cdf_y(t) - model.cdf(s, t),
        }
    }

    /// `x`-range of the event, clipped to the support.
    pub fn x_window<M: BivariateLifetime + ?Sized>(&self, model: &M) -> (f64, f64) {
        let (lo, hi) = model.support().x_bounds();
        if self.kind.x_past() {
            (lo, hi.min(self.s))
        } else {
            (lo.max(self.s), hi)
        }
    }

    pub fn y_window<M: BivariateLifetime + ?Sized>(&self, model: &M) -> (f64, f64) {
        let (lo, hi) = model.support().y_bounds();
        if self.kind.y_past() {
            (lo, hi.min(self.t))
        } else {
            (lo.max(self.t), hi)
        }
    }

    /// `∫ f(x, y) dy` over the event's `y`-range (unnormalized marginal).
    pub fn x_marginal<M: BivariateLifetime + ?Sized>(&self, model: &M, x: f64) -> f64 {
        if self.kind.y_past() {
            model.cdf_dx(x, self.t)
        } else {
            model.survival_dx(x, self.t)
        }
    }

    /// `∫ f(x, y) dx` over the event's `x`-range.
    pub fn y_marginal<M: BivariateLifetime + ?Sized>(&self, model: &M, y: f64) -> f64 {
        if self.kind.x_past() {
            model.cdf_dy(self.s, y)
        } else {
            model.survival_dy(self.s, y)
        }
    }

    /// Maps age-shifted coordinates (residual axes measured from `s` or `t`)
    /// to original ones.
    pub fn to_original(&self, x: f64, y: f64) -> (f64, f64) {
        let ox = if self.kind.x_past() { x } else { x + self.s };
        let oy = if self.kind.y_past() { y } else { y + self.t };
        (ox, oy)
    }

    /// Whether an original-coordinate point lies in the event.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let in_x = if self.kind.x_past() { x <= self.s } else { x > self.s };
        let in_y = if self.kind.y_past() { y <= self.t } else { y > self.t };
        in_x && in_y
    }

    /// Integrates `g(x, y)` (original coordinates) over the event
    /// intersected with the model's support.
    pub fn integrate<M, G>(&self, model: &M, g: G, spec: &QuadratureSpec) -> Result<IntegralResult>
    where
        M: BivariateLifetime + ?Sized,
        G: Fn(f64, f64) -> f64,
    {
        let (wx_lo, wx_hi) = self.x_window(model);
        let (wy_lo, wy_hi) = self.y_window(model);
        let support = model.support();
        let (bx_lo, bx_hi) = support.x_window(wy_lo, wy_hi);
        let (lo, hi) = (wx_lo.max(bx_lo), wx_hi.min(bx_hi));
        if !(lo < hi) || !(wy_lo < wy_hi) {
            return Ok(IntegralResult { value: 0.0, error_estimate: 0.0, evaluations: 0, converged: true });
        }
        let mut breaks = vec![self.s, self.t];
        for y in [wy_lo, wy_hi] {
            if y.is_finite() {
                let (a, b) = support.x_section(y);
                breaks.extend([a, b]);
            }
        }
        breaks.retain(|b| *b > lo && *b < hi);
        integrate_iterated(
            |x, inner| {
                let (ylo, yhi) = support.y_section(x);
                let (a, b) = (ylo.max(wy_lo), yhi.min(wy_hi));
                if !(a < b) {
                    return Ok(IntegralResult { value: 0.0, error_estimate: 0.0, evaluations: 0, converged: true });
                }
                let mut ybreaks = model.y_breaks(x);
                if b == f64::INFINITY {
                    // Without a finite cut the first panel of a heavy tail
                    // can miss mass that sits at the scale of x.
                    ybreaks.push(a + 1.0 + x.abs());
                }
                integrate_1d_with_breaks(|y| g(x, y), a, b, &ybreaks, inner)
            },
            lo,
            hi,
            &breaks,
            spec,
        )
    }

    /// Integrates `g(x)` over the event's `x`-range within the support.
    pub fn integrate_x<M, G>(&self, model: &M, g: G, spec: &QuadratureSpec) -> Result<IntegralResult>
    where
        M: BivariateLifetime + ?Sized,
        G: Fn(f64) -> f64,
    {
        let (wy_lo, wy_hi) = self.y_window(model);
        let (bx_lo, bx_hi) = model.support().x_window(wy_lo, wy_hi);
        let (wx_lo, wx_hi) = self.x_window(model);
        let (lo, hi) = (wx_lo.max(bx_lo), wx_hi.min(bx_hi));
        if !(lo < hi) {
            return Ok(IntegralResult { value: 0.0, error_estimate: 0.0, evaluations: 0, converged: true });
        }
        let mut breaks = vec![self.t];
        breaks.retain(|b| *b > lo && *b < hi);
        integrate_1d_with_breaks(g, lo, hi, &breaks, spec)
    }

    /// Integrates `g(y)` over the event's `y`-range within the support.
    pub fn integrate_y<M, G>(&self, model: &M, g: G, spec: &QuadratureSpec) -> Result<IntegralResult>
    where
        M: BivariateLifetime + ?Sized,
        G: Fn(f64) -> f64,
    {
        let (wx_lo, wx_hi) = self.x_window(model);
        let (wy_lo, wy_hi) = self.y_window(model);
        // y-range met by the x band, from the support's x-sections.
        let support = model.support();
        let (by_lo, by_hi) = y_window_of_band(support, wx_lo, wx_hi);
        let (lo, hi) = (wy_lo.max(by_lo), wy_hi.min(by_hi));
        if !(lo < hi) {
            return Ok(IntegralResult { value: 0.0, error_estimate: 0.0, evaluations: 0, converged: true });
        }
        let mut breaks = vec![self.s];
        breaks.retain(|b| *b > lo && *b < hi);
        integrate_1d_with_breaks(g, lo, hi, &breaks, spec)
    }
}

/// Range of `y` whose `x`-section meets `xa <= x <= xb`.
fn y_window_of_band(support: &crate::models::Support, xa: f64, xb: f64) -> (f64, f64) {
    let (ylo, yhi) = support.y_bounds();
    let (xlo, xhi) = support.x_bounds();
    let (a, b) = (xa.max(xlo), xb.min(xhi));
    if !(a < b) {
        return (0.0, 0.0);
    }
    // Sections are monotone in every supported geometry, so the extreme
    // heights are attained at the band edges.
    let (l1, h1) = support.y_section(a);
    let (l2, h2) = support.y_section(b);
    (l1.min(l2).max(ylo), h1.max(h2).min(yhi))
}
