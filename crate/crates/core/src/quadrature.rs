//! Adaptive Gauss–Kronrod quadrature in one and two dimensions.
//!
//! The 1D engine is a globally adaptive G10/K21 scheme: the panel with the
//! largest error estimate is bisected until the summed estimate meets
//! `max(abs_tol, rel_tol * |value|)` or the subdivision budget is spent.
//! Semi-infinite intervals are mapped onto `[0, 1)` before integration.
//!
//! Two-dimensional integrals are iterated: the outer integrand is itself an
//! adaptive integral over an `x`-section `[y_lo(x), y_hi(x)]`, and the inner
//! error estimates are carried through the outer rule so the reported error
//! covers both levels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Change of variables applied to a semi-infinite axis `[lo, +inf)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Transform {
    /// No transform; only finite intervals are accepted.
    None,
    /// `x = lo + u / (1 - u)`.
    #[default]
    RationalMap,
    /// `x = lo + expm1(u / (1 - u))`; turns power-law tails into exponential ones.
    LogMap,
}

/// Tolerances and budget for the adaptive integrators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of panel bisections per 1D integral.
    pub max_subdivisions: usize,
    pub transform: Transform,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: 1e-10, max_subdivisions: 400, transform: Transform::RationalMap }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize, transform: Transform) -> Result<Self> {
        let spec = Self { rel_tol, abs_tol, max_subdivisions, transform };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::InvalidSpec(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::InvalidSpec(format!("abs_tol must be > 0, got {}", self.abs_tol)));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidSpec("max_subdivisions must be >= 1".into()));
        }
        Ok(())
    }

    pub fn with_transform(mut self, transform: Transform) -> Self {
        self.transform = transform;
        self
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    /// Acceptable absolute error for an integral of the given magnitude.
    pub fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    /// Spec used for the inner level of an iterated integral.
    pub fn inner(&self) -> Self {
        Self { rel_tol: self.rel_tol * 0.1, abs_tol: self.abs_tol * 0.1, ..*self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl IntegralResult {
    /// Returns the result, or `NonConvergence` if it did not meet its tolerance.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence { value: self.value, error_estimate: self.error_estimate })
        }
    }
}

/// `v log v` with the continuous extension `0 log 0 = 0`.
///
/// Values in `(-1e-10, 0)` are treated as zero; anything more negative is a
/// model bug and is reported as `NegativeDensity`.
pub fn xlogx(v: f64) -> Result<f64> {
    xlogx_with_tol(v, QuadratureSpec::default().abs_tol)
}

pub fn xlogx_with_tol(v: f64, abs_tol: f64) -> Result<f64> {
    if v > 0.0 {
        Ok(v * v.ln())
    } else if v >= -abs_tol {
        Ok(0.0)
    } else {
        Err(Error::NegativeDensity(v))
    }
}

// Kronrod abscissae (descending, the last one is the centre) and weights of
// the 21-point rule; every second abscissa is a 10-point Gauss node.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_100_075_710,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Integral over the panel of the error attached to each integrand value.
    carried: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn check_finite(x: f64, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteIntegrand { at: x, value: v })
    }
}

/// One G10/K21 panel. The integrand returns `(value, attached_error)`.
fn kronrod_panel<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let (fc, ec) = f(centre)?;
    check_finite(centre, fc)?;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    let mut carried = WGK[10] * ec.abs();
    let mut res_g = 0.0;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let (x1, x2) = (centre - dx, centre + dx);
        let (f1, e1) = f(x1)?;
        let (f2, e2) = f(x2)?;
        check_finite(x1, f1)?;
        check_finite(x2, f2)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        carried += WGK[j] * (e1.abs() + e2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel { a, b, value, error, carried: carried * half.abs() })
}

/// Globally adaptive integration over the finite interval `[a, b]`, split at
/// `breaks` first. Integrand values carry their own error estimates.
fn adaptive_finite<F>(mut f: F, a: f64, b: f64, breaks: &[f64], spec: &QuadratureSpec) -> Result<IntegralResult>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&c| c > a && c < b && c.is_finite()).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut evaluations = 0usize;
    for w in edges.windows(2) {
        heap.push(kronrod_panel(&mut f, w[0], w[1])?);
        evaluations += 21;
    }

    let totals = |heap: &BinaryHeap<Panel>, frozen: &[Panel]| {
        heap.iter().chain(frozen.iter()).fold((0.0, 0.0, 0.0), |(v, e, c), p| (v + p.value, e + p.error, c + p.carried))
    };

    let mut splits = 0usize;
    loop {
        let (value, error, carried) = totals(&heap, &frozen);
        let tol = spec.tolerance(value);
        let target = (tol - carried).max(0.5 * tol);
        if error <= target || splits >= spec.max_subdivisions || heap.is_empty() {
            let total_error = error + carried;
            return Ok(IntegralResult {
                value,
                error_estimate: total_error,
                evaluations,
                converged: error <= target && total_error <= tol,
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let scale = worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if (worst.b - worst.a) <= 64.0 * f64::EPSILON * scale || mid <= worst.a || mid >= worst.b {
            frozen.push(worst);
            continue;
        }
        let left = kronrod_panel(&mut f, worst.a, mid)?;
        let right = kronrod_panel(&mut f, mid, worst.b)?;
        evaluations += 42;
        splits += 1;
        heap.push(left);
        heap.push(right);
    }
}

fn forward_map(transform: Transform, lo: f64, u: f64) -> (f64, f64) {
    let w = 1.0 - u;
    match transform {
        Transform::None | Transform::RationalMap => (lo + u / w, 1.0 / (w * w)),
        Transform::LogMap => {
            let r = u / w;
            (lo + r.exp_m1(), r.exp() / (w * w))
        }
    }
}

fn inverse_map(transform: Transform, lo: f64, x: f64) -> f64 {
    let d = x - lo;
    match transform {
        Transform::None | Transform::RationalMap => d / (1.0 + d),
        Transform::LogMap => {
            let r = d.ln_1p();
            r / (1.0 + r)
        }
    }
}

/// Core dispatcher shared by the public 1D entry points. The integrand also
/// receives the Jacobian of the axis transform at its abscissa.
fn integrate_with_error<F>(mut f: F, lo: f64, hi: f64, breaks: &[f64], spec: &QuadratureSpec) -> Result<IntegralResult>
where
    F: FnMut(f64, f64) -> Result<(f64, f64)>,
{
    spec.validate()?;
    if lo.is_nan() || hi.is_nan() || lo == f64::NEG_INFINITY {
        return Err(Error::InvalidDomain(format!("unsupported interval [{lo}, {hi}]")));
    }
    if !(lo < hi) {
        return Err(Error::InvalidDomain(format!("need lo < hi, got [{lo}, {hi}]")));
    }
    if hi.is_finite() {
        return adaptive_finite(|x| f(x, 1.0), lo, hi, breaks, spec);
    }
    if spec.transform == Transform::None {
        return Err(Error::InvalidDomain("semi-infinite interval requires a transform".into()));
    }
    let transform = spec.transform;
    let mapped_breaks: Vec<f64> = breaks.iter().filter(|&&c| c > lo && c.is_finite()).map(|&c| inverse_map(transform, lo, c)).collect();
    let g = |u: f64| -> Result<(f64, f64)> {
        let (x, jac) = forward_map(transform, lo, u);
        if !x.is_finite() || !jac.is_finite() {
            return Ok((0.0, 0.0));
        }
        let (v, e) = f(x, jac)?;
        if v == 0.0 && e == 0.0 {
            return Ok((0.0, 0.0));
        }
        Ok((v * jac, e * jac))
    };
    adaptive_finite(g, 0.0, 1.0, &mapped_breaks, spec)
}

/// Integrates `f` over `[lo, hi]`; `hi` may be `+inf` when a transform is set.
///
/// Non-convergence is not an error: the result comes back with
/// `converged == false`.
pub fn integrate_1d<F>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    integrate_with_error(|x, _| Ok((f(x), 0.0)), lo, hi, &[], spec)
}

/// Like [`integrate_1d`] but splits the interval at the given interior points
/// (discontinuities or kinks of the integrand).
pub fn integrate_1d_with_breaks<F>(f: F, lo: f64, hi: f64, breaks: &[f64], spec: &QuadratureSpec) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    integrate_with_error(|x, _| Ok((f(x), 0.0)), lo, hi, breaks, spec)
}

/// Integrates a fallible integrand.
pub fn try_integrate_1d<F>(f: F, lo: f64, hi: f64, breaks: &[f64], spec: &QuadratureSpec) -> Result<IntegralResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f = f;
    integrate_with_error(|x, _| f(x).map(|v| (v, 0.0)), lo, hi, breaks, spec)
}

/// Outer level of an iterated integral: `inner(x, spec)` returns an integral
/// result whose error estimate is propagated into the total.
///
/// The spec handed to `inner` is the outer one tightened tenfold, with the
/// absolute tolerance further divided by the outer transform's Jacobian so
/// that inner errors stay below tolerance once mapped. Convergence is judged
/// on the combined estimate, so an inner rule that stalls on a set of
/// negligible outer weight does not fail the whole integral.
pub fn integrate_iterated<F>(mut inner: F, lo: f64, hi: f64, breaks: &[f64], spec: &QuadratureSpec) -> Result<IntegralResult>
where
    F: FnMut(f64, &QuadratureSpec) -> Result<IntegralResult>,
{
    let base = spec.inner();
    let mut inner_evals = 0usize;
    let mut result = integrate_with_error(
        |x, jac| {
            let mut local = base;
            local.abs_tol = (base.abs_tol / jac.max(1.0)).max(f64::MIN_POSITIVE);
            let r = inner(x, &local)?;
            inner_evals += r.evaluations;
            Ok((r.value, r.error_estimate))
        },
        lo,
        hi,
        breaks,
        spec,
    )?;
    result.evaluations += inner_evals;
    Ok(result)
}

type Curve<'a> = Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>;
type Breaks<'a> = Box<dyn Fn(f64) -> Vec<f64> + Send + Sync + 'a>;

/// A planar integration domain described by `x`-sections.
pub enum Domain2d<'a> {
    Rectangle { lo_x: f64, hi_x: f64, lo_y: f64, hi_y: f64 },
    YSection { lo_x: f64, hi_x: f64, y_lo: Curve<'a>, y_hi: Curve<'a> },
}

impl<'a> Domain2d<'a> {
    pub fn rectangle(lo_x: f64, hi_x: f64, lo_y: f64, hi_y: f64) -> Self {
        Self::Rectangle { lo_x, hi_x, lo_y, hi_y }
    }

    pub fn y_section(
        lo_x: f64,
        hi_x: f64,
        y_lo: impl Fn(f64) -> f64 + Send + Sync + 'a,
        y_hi: impl Fn(f64) -> f64 + Send + Sync + 'a,
    ) -> Self {
        Self::YSection { lo_x, hi_x, y_lo: Box::new(y_lo), y_hi: Box::new(y_hi) }
    }

    pub fn x_range(&self) -> (f64, f64) {
        match self {
            Self::Rectangle { lo_x, hi_x, .. } | Self::YSection { lo_x, hi_x, .. } => (*lo_x, *hi_x),
        }
    }

    pub fn y_range(&self, x: f64) -> (f64, f64) {
        match self {
            Self::Rectangle { lo_y, hi_y, .. } => (*lo_y, *hi_y),
            Self::YSection { y_lo, y_hi, .. } => (y_lo(x), y_hi(x)),
        }
    }
}

/// Iterated 2D integration (outer `x`, inner `y`).
///
/// Empty sections (`y_lo(x) >= y_hi(x)`) contribute zero.
pub fn integrate_2d<F>(f: F, domain: &Domain2d<'_>, spec: &QuadratureSpec) -> Result<IntegralResult>
where
    F: Fn(f64, f64) -> f64,
{
    integrate_2d_with_breaks(f, domain, None, spec)
}

/// [`integrate_2d`] with optional inner breakpoints `y_breaks(x)`.
pub fn integrate_2d_with_breaks<F>(
    f: F,
    domain: &Domain2d<'_>,
    y_breaks: Option<&Breaks<'_>>,
    spec: &QuadratureSpec,
) -> Result<IntegralResult>
where
    F: Fn(f64, f64) -> f64,
{
    let (lo_x, hi_x) = domain.x_range();
    if !(lo_x < hi_x) {
        return Err(Error::InvalidDomain(format!("empty x range [{lo_x}, {hi_x}]")));
    }
    integrate_iterated(
        |x, inner_spec| {
            let (lo_y, hi_y) = domain.y_range(x);
            if !(lo_y < hi_y) {
                return Ok(IntegralResult { value: 0.0, error_estimate: 0.0, evaluations: 0, converged: true });
            }
            let breaks = y_breaks.map(|b| b(x)).unwrap_or_default();
            integrate_1d_with_breaks(|y| f(x, y), lo_y, hi_y, &breaks, inner_spec)
        },
        lo_x,
        hi_x,
        &[],
        spec,
    )
}
