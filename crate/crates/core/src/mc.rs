//! Monte Carlo oracle: sampling from a region's conditional law
//! and plug-in estimates of its information and entropy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{numeric_cdf_dx, numeric_cdf_dy, numeric_survival_dx, numeric_survival_dy, BivariateLifetime, CopulaModel};
use crate::region::ConditioningRegion;

pub const MIN_SAMPLES: usize = 1000;
pub const MIN_ACCEPTANCE: f64 = 1e-4;

const GRID: usize = 64;
const PROBES: usize = 4;
const SAFETY: f64 = 2.0;
const CHUNK: usize = 4096;
const MAX_PROPOSALS_BEFORE_CHECK: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub acceptance_rate: f64,
}

#[derive(Clone, Debug)]
pub struct SampleSet {
    /// Draws in age-shifted coordinates: residual axes are measured from
    /// the inspection time, past axes are not.
    pub points: Vec<(f64, f64)>,
    pub acceptance_rate: f64,
    /// Proposals where the density exceeded the envelope.
    pub envelope_violations: u64,
}

/// Maps `z ∈ [0, 1)` onto an interval, with `x = lo + L z / (1 - z)` on a
/// half-line.
#[derive(Clone, Copy, Debug)]
struct AxisMap {
    lo: f64,
    hi: f64,
    scale: f64,
}

impl AxisMap {
    fn new(lo: f64, hi: f64, scale: f64) -> Result<Self> {
        if !lo.is_finite() || !(lo < hi) {
            return Err(Error::InvalidDomain(format!("cannot sample on ({lo}, {hi})")));
        }
        Ok(Self { lo, hi, scale: scale.max(1e-6) })
    }

    /// `(x, dx/dz)`.
    fn map(&self, z: f64) -> (f64, f64) {
        if self.hi.is_finite() {
            (self.lo + (self.hi - self.lo) * z, self.hi - self.lo)
        } else {
            let w = 1.0 - z;
            (self.lo + self.scale * z / w, self.scale / (w * w))
        }
    }
}

struct Envelope {
    bounds: Vec<f64>,
    cumulative: Vec<f64>,
}

impl Envelope {
    fn build(g: &(dyn Fn(f64, f64) -> f64 + Sync)) -> Self {
        let h = 1.0 / GRID as f64;
        let bounds: Vec<f64> = (0..GRID * GRID)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / GRID, k % GRID);
                let mut m: f64 = 0.0;
                for a in 0..PROBES {
                    for b in 0..PROBES {
                        let z = (i as f64 + (a as f64 + 0.5) / PROBES as f64) * h;
                        let w = (j as f64 + (b as f64 + 0.5) / PROBES as f64) * h;
                        let v = g(z, w);
                        if v.is_finite() {
                            m = m.max(v);
                        }
                    }
                }
                SAFETY * m
            })
            .collect();
        let mut acc = 0.0;
        let cumulative = bounds.iter().map(|b| {
            acc += b * h * h;
            acc
        });
        let cumulative = cumulative.collect();
        Self { bounds, cumulative }
    }

    fn total(&self) -> f64 {
        *self.cumulative.last().unwrap_or(&0.0)
    }

    /// Proposes a point from the piecewise-uniform envelope.
    fn propose(&self, rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
        let target = rng.random::<f64>() * self.total();
        let k = self.cumulative.partition_point(|c| *c <= target).min(self.bounds.len() - 1);
        let (i, j) = (k / GRID, k % GRID);
        let h = 1.0 / GRID as f64;
        let z = (i as f64 + rng.random::<f64>()) * h;
        let w = (j as f64 + rng.random::<f64>()) * h;
        (z, w, self.bounds[k])
    }
}

fn half_line_scale(lo: f64, cdf: impl Fn(f64) -> f64, quantile: impl Fn(f64) -> f64) -> f64 {
    let f = cdf(lo);
    quantile(0.5 * (1.0 + f)) - lo
}

fn chunk_seed(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Draws `n` points from the conditional law of the region. Copula-built
/// models are sampled exactly through the copula's conditional law; other
/// models by rejection against a piecewise-uniform envelope on a `64 × 64`
/// grid in mapped coordinates. Chunks of draws use disjoint generator
/// streams, so the output depends only on `seed`.
pub fn sample_conditional<M: BivariateLifetime + ?Sized>(model: &M, region: &ConditioningRegion, n: usize, seed: u64) -> Result<SampleSet> {
    let (x_lo, x_hi) = region.x_window(model);
    let (y_lo, y_hi) = region.y_window(model);
    let set = match model.as_copula_model() {
        Some(cm) => sample_copula(cm, region, (x_lo, x_hi), (y_lo, y_hi), n, seed)?,
        None => sample_envelope(model, region, (x_lo, x_hi), (y_lo, y_hi), n, seed)?,
    };
    let shift =
        |(x, y): (f64, f64)| (if region.kind.x_past() { x } else { x - region.s }, if region.kind.y_past() { y } else { y - region.t });
    Ok(SampleSet { points: set.points.into_iter().map(shift).collect(), ..set })
}

/// One proposal: an accepted point, and whether the envelope was exceeded.
type Proposal = (Option<(f64, f64)>, bool);

fn collect_draws(n: usize, seed: u64, propose: impl Fn(&mut ChaCha8Rng) -> Proposal + Sync) -> Result<SampleSet> {
    let chunks = n.div_ceil(CHUNK);
    let results: Vec<Result<(Vec<(f64, f64)>, u64, u64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let want = CHUNK.min(n - c * CHUNK);
            let mut rng = chunk_seed(seed, c);
            let mut points = Vec::with_capacity(want);
            let (mut proposed, mut violations) = (0u64, 0u64);
            while points.len() < want {
                let (point, violated) = propose(&mut rng);
                proposed += 1;
                violations += violated as u64;
                points.extend(point);
                if proposed >= MAX_PROPOSALS_BEFORE_CHECK && (points.len() as f64) < MIN_ACCEPTANCE * proposed as f64 {
                    return Err(Error::EnvelopeTooLoose(points.len() as f64 / proposed as f64));
                }
            }
            Ok((points, proposed, violations))
        })
        .collect();

    let mut points = Vec::with_capacity(n);
    let (mut proposed, mut violations) = (0u64, 0u64);
    for r in results {
        let (p, k, v) = r?;
        points.extend(p);
        proposed += k;
        violations += v;
    }
    let acceptance_rate = points.len() as f64 / proposed.max(1) as f64;
    if acceptance_rate < MIN_ACCEPTANCE {
        return Err(Error::EnvelopeTooLoose(acceptance_rate));
    }
    Ok(SampleSet { points, acceptance_rate, envelope_violations: violations })
}

fn sample_envelope<M: BivariateLifetime + ?Sized>(
    model: &M,
    region: &ConditioningRegion,
    (x_lo, x_hi): (f64, f64),
    (y_lo, y_hi): (f64, f64),
    n: usize,
    seed: u64,
) -> Result<SampleSet> {
    let xs = if x_hi.is_finite() { 1.0 } else { half_line_scale(x_lo, |x| model.marginal_cdf_x(x), |p| model.marginal_quantile_x(p)) };
    let ys = if y_hi.is_finite() { 1.0 } else { half_line_scale(y_lo, |y| model.marginal_cdf_y(y), |p| model.marginal_quantile_y(p)) };
    let (mx, my) = (AxisMap::new(x_lo, x_hi, xs)?, AxisMap::new(y_lo, y_hi, ys)?);
    let g = |z: f64, w: f64| {
        let ((x, jx), (y, jy)) = (mx.map(z), my.map(w));
        if region.contains(x, y) {
            model.pdf(x, y) * jx * jy
        } else {
            0.0
        }
    };
    let envelope = Envelope::build(&g);
    if !(envelope.total() > 0.0) {
        return Err(Error::ZeroRegionProbability(0.0));
    }
    collect_draws(n, seed, |rng| {
        let (z, w, bound) = envelope.propose(rng);
        let v = g(z, w);
        let point = (rng.random::<f64>() * bound < v).then(|| (mx.map(z).0, my.map(w).0));
        (point, v > bound)
    })
}

/// Exact draws for a copula-built model: `U` uniform on the x-window in
/// probability scale, kept with probability equal to the conditional mass
/// of the y-window, then `V` by inverting `∂C/∂u` on that window.
fn sample_copula(
    cm: &CopulaModel,
    region: &ConditioningRegion,
    (x_lo, x_hi): (f64, f64),
    (y_lo, y_hi): (f64, f64),
    n: usize,
    seed: u64,
) -> Result<SampleSet> {
    AxisMap::new(x_lo, x_hi, 1.0)?;
    AxisMap::new(y_lo, y_hi, 1.0)?;
    let (fx, fy) = (cm.marginal_x(), cm.marginal_y());
    let prob = |cdf: &dyn Fn(f64) -> f64, v: f64| if v.is_finite() { cdf(v).clamp(0.0, 1.0) } else { 1.0 };
    let (ua, ub) = (prob(&|x| fx.cdf(x), x_lo), prob(&|x| fx.cdf(x), x_hi));
    let (va, vb) = (prob(&|y| fy.cdf(y), y_lo), prob(&|y| fy.cdf(y), y_hi));
    if !(ub > ua && vb > va) {
        return Err(Error::ZeroRegionProbability(0.0));
    }
    let c = cm.copula();
    let h = |u: f64, v: f64| {
        if v <= 0.0 {
            0.0
        } else if v >= 1.0 {
            1.0
        } else {
            c.partial_u(u, v).clamp(0.0, 1.0)
        }
    };
    collect_draws(n, seed, |rng| {
        let u = ua + (ub - ua) * rng.random::<f64>();
        let (h_lo, h_hi) = (h(u, va), h(u, vb));
        if !(rng.random::<f64>() < h_hi - h_lo) {
            return (None, false);
        }
        let target = h_lo + (h_hi - h_lo) * rng.random::<f64>();
        let (mut lo, mut hi) = (va, vb);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if h(u, mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        let (x, y) = (fx.quantile(u), fy.quantile(0.5 * (lo + hi)));
        let keep = region.contains(x, y) && cm.pdf(x, y) > 0.0;
        (keep.then_some((x, y)), false)
    })
}

fn summarize(values: &[f64], acceptance_rate: f64) -> McEstimate {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    McEstimate { mean, std_error: (var / n).sqrt(), n_samples: values.len(), acceptance_rate }
}

fn check_n(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::InvalidParameters(format!("need at least {MIN_SAMPLES} samples, got {n}")));
    }
    Ok(())
}

/// Conditional marginal densities at a point, by 1D quadrature of the
/// joint density (unnormalized).
fn marginals<M: BivariateLifetime + ?Sized>(model: &M, region: &ConditioningRegion, x: f64, y: f64) -> (f64, f64) {
    let (s, t) = (region.s, region.t);
    let a = if region.kind.y_past() { numeric_cdf_dx(model, x, t) } else { numeric_survival_dx(model, x, t) };
    let b = if region.kind.x_past() { numeric_cdf_dy(model, s, y) } else { numeric_survival_dy(model, s, y) };
    (a, b)
}

/// Plug-in estimate of the mutual information of the conditioned pair:
/// the sample mean of `log[f / (f_X f_Y)]` under the conditional law.
pub fn mc_mutual_information<M: BivariateLifetime + ?Sized>(
    model: &M,
    region: &ConditioningRegion,
    n: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_n(n)?;
    let set = sample_conditional(model, region, n, seed)?;
    let p = region.probability(model);
    let values: Vec<f64> = set
        .points
        .par_iter()
        .map(|&(x, y)| {
            let (ox, oy) = region.to_original(x, y);
            let (a, b) = marginals(model, region, ox, oy);
            let v = (model.pdf(ox, oy) * p).ln() - a.ln() - b.ln();
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFiniteIntegrand { at: ox, value: v })
            }
        })
        .collect::<Result<_>>()?;
    Ok(summarize(&values, set.acceptance_rate))
}

/// Plug-in estimate of the joint entropy of the conditioned pair.
pub fn mc_joint_entropy<M: BivariateLifetime + ?Sized>(model: &M, region: &ConditioningRegion, n: usize, seed: u64) -> Result<McEstimate> {
    check_n(n)?;
    let set = sample_conditional(model, region, n, seed)?;
    let p = region.probability(model);
    let values: Vec<f64> = set
        .points
        .iter()
        .map(|&(x, y)| {
            let (ox, oy) = region.to_original(x, y);
            p.ln() - model.pdf(ox, oy).ln()
        })
        .collect();
    Ok(summarize(&values, set.acceptance_rate))
}
