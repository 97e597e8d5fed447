//! Region-conditional joint and marginal entropies, in nats.

use crate::error::{Error, Result};
use crate::models::BivariateLifetime;
use crate::quadrature::{xlogx, QuadratureSpec};
use crate::region::{ConditioningRegion, MeasureResult, RegionKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

#[derive(Clone, Copy, Debug)]
pub struct EntropyBundle {
    pub h_joint: f64,
    pub h_x: f64,
    pub h_y: f64,
    pub region: ConditioningRegion,
    pub numerical_error: f64,
}

fn plogp(v: f64) -> f64 {
    if v > 0.0 {
        v * v.ln()
    } else {
        0.0
    }
}

/// Density of the conditioned pair at age-shifted coordinates: residual
/// axes are measured from the inspection time, past axes are not.
pub fn conditional_density<M: BivariateLifetime + ?Sized>(model: &M, region: &ConditioningRegion, x: f64, y: f64) -> f64 {
    let (ox, oy) = region.to_original(x, y);
    if !region.contains(ox, oy) {
        return 0.0;
    }
    let p = region.probability(model);
    if p > 0.0 {
        model.pdf(ox, oy) / p
    } else {
        0.0
    }
}

/// `-∫∫ g log g` for the conditional density `g` of the region.
pub fn joint_entropy<M: BivariateLifetime + ?Sized>(
    model: &M,
    region: &ConditioningRegion,
    spec: &QuadratureSpec,
) -> Result<MeasureResult> {
    let p = region.probability(model);
    let r = region.integrate(model, |x, y| plogp(model.pdf(x, y)), spec)?;
    Ok(MeasureResult {
        value: -r.value / p + p.ln(),
        numerical_error: r.error_estimate / p,
        evaluations: r.evaluations,
        converged: r.converged,
    })
}

/// Entropy of one conditional marginal of the region.
pub fn marginal_entropy<M: BivariateLifetime + ?Sized>(
    model: &M,
    region: &ConditioningRegion,
    axis: Axis,
    spec: &QuadratureSpec,
) -> Result<MeasureResult> {
    let p = region.probability(model);
    let r = match axis {
        Axis::X => region.integrate_x(model, |x| plogp(region.x_marginal(model, x)), spec)?,
        Axis::Y => region.integrate_y(model, |y| plogp(region.y_marginal(model, y)), spec)?,
    };
    Ok(MeasureResult {
        value: -r.value / p + p.ln(),
        numerical_error: r.error_estimate / p,
        evaluations: r.evaluations,
        converged: r.converged,
    })
}

pub fn entropy_bundle<M: BivariateLifetime + ?Sized>(
    model: &M,
    region: &ConditioningRegion,
    spec: &QuadratureSpec,
) -> Result<EntropyBundle> {
    let j = joint_entropy(model, region, spec)?;
    let hx = marginal_entropy(model, region, Axis::X, spec)?;
    let hy = marginal_entropy(model, region, Axis::Y, spec)?;
    Ok(EntropyBundle {
        h_joint: j.value,
        h_x: hx.value,
        h_y: hy.value,
        region: *region,
        numerical_error: j.numerical_error + hx.numerical_error + hy.numerical_error,
    })
}

/// `-Σ p log p` of a probability vector.
pub fn discrete_entropy(p: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    let mut h = 0.0;
    for &v in p {
        if !(v >= 0.0) {
            return Err(Error::NotAProbabilityVector(format!("entry {v} is negative or NaN")));
        }
        sum += v;
        h -= xlogx(v)?;
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::NotAProbabilityVector(format!("entries sum to {sum}")));
    }
    Ok(h)
}

#[derive(Clone, Copy, Debug)]
pub struct Decomposition {
    /// `H - [ℋ(probabilities) + Σ p_i H_i]`.
    pub residual: f64,
    pub numerical_error: f64,
    pub joint_entropy: f64,
    pub probabilities: [f64; 4],
    pub region_entropies: [f64; 4],
}

/// Splits the unconditional joint entropy over the four inspection events.
pub fn verify_decomposition<M: BivariateLifetime + ?Sized>(model: &M, s: f64, t: f64, spec: &QuadratureSpec) -> Result<Decomposition> {
    let whole = ConditioningRegion::whole(model);
    let total = joint_entropy(model, &whole, spec)?;
    let mut probabilities = [0.0; 4];
    let mut region_entropies = [0.0; 4];
    let mut err = total.numerical_error;
    for (i, kind) in RegionKind::ALL.into_iter().enumerate() {
        let region = ConditioningRegion::new(model, kind, s, t)?;
        let h = joint_entropy(model, &region, spec)?;
        probabilities[i] = region.probability(model);
        region_entropies[i] = h.value;
        err += probabilities[i] * h.numerical_error;
    }
    let split = discrete_entropy(&probabilities)? + probabilities.iter().zip(&region_entropies).map(|(p, h)| p * h).sum::<f64>();
    Ok(Decomposition { residual: total.value - split, numerical_error: err, joint_entropy: total.value, probabilities, region_entropies })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copula::Independence;
    use crate::models::{make_from_copula, make_linear_unit_square, make_uniform_triangle, Exponential};
    use approx::assert_abs_diff_eq;
    use std::sync::Arc;

    fn indep_exp() -> impl BivariateLifetime {
        let e = Arc::new(Exponential::new(1.0).unwrap());
        make_from_copula(Arc::new(Independence), e.clone(), e)
    }

    #[test]
    fn discrete_entropy_examples() {
        assert_abs_diff_eq!(discrete_entropy(&[1.0, 0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(discrete_entropy(&[0.25; 4]).unwrap(), 4f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(discrete_entropy(&[0.5, 0.25, 0.125, 0.125]).unwrap(), 1.75 * 2f64.ln(), epsilon = 1e-15);
        assert!(discrete_entropy(&[0.5, 0.6]).is_err());
        assert!(discrete_entropy(&[1.5, -0.5]).is_err());
    }

    #[test]
    fn conditional_density_examples() {
        let m = indep_exp();
        let r = ConditioningRegion::residual(&m, 0.7, 1.9).unwrap();
        assert_abs_diff_eq!(conditional_density(&m, &r, 0.3, 0.4), (-0.7f64).exp(), epsilon = 1e-14);

        let lin = make_linear_unit_square();
        let r = ConditioningRegion::past(&lin, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(conditional_density(&lin, &r, 0.5, 0.5), 1.0, epsilon = 1e-15);

        let tri = make_uniform_triangle(1.0, 1.0).unwrap();
        let r = ConditioningRegion::residual(&tri, 0.2, 0.3).unwrap();
        assert_abs_diff_eq!(conditional_density(&tri, &r, 0.1, 0.1), 2.0 / 0.25, epsilon = 1e-12);
        assert_eq!(conditional_density(&tri, &r, 0.4, 0.2), 0.0);
    }

    #[test]
    fn triangle_entropies() {
        let spec = QuadratureSpec::default();
        let tri = make_uniform_triangle(1.0, 1.0).unwrap();
        for &(s, t) in &[(0.0, 0.0), (0.2, 0.3), (0.1, 0.6)] {
            let r = ConditioningRegion::residual(&tri, s, t).unwrap();
            let k: f64 = 1.0 - s - t;
            assert_abs_diff_eq!(joint_entropy(&tri, &r, &spec).unwrap().value, 2.0 * k.ln() - 2f64.ln(), epsilon = 1e-8);
            let hx = marginal_entropy(&tri, &r, Axis::X, &spec).unwrap().value;
            assert_abs_diff_eq!(hx, 0.5 + (k / 2.0).ln(), epsilon = 1e-8);
        }
    }

    #[test]
    fn independent_exponential_entropies() {
        let spec = QuadratureSpec::default();
        let m = indep_exp();
        for kind in RegionKind::ALL {
            let r = ConditioningRegion::new(&m, kind, 0.4, 1.1).unwrap();
            let b = entropy_bundle(&m, &r, &spec).unwrap();
            assert_abs_diff_eq!(b.h_joint, b.h_x + b.h_y, epsilon = 1e-7);
        }
        let r = ConditioningRegion::residual(&m, 0.4, 1.1).unwrap();
        let b = entropy_bundle(&m, &r, &spec).unwrap();
        assert_abs_diff_eq!(b.h_joint, 2.0, epsilon = 1e-7);
        assert_abs_diff_eq!(b.h_x, 1.0, epsilon = 1e-7);
    }

    #[test]
    fn decomposition_holds_for_linear() {
        let d = verify_decomposition(&make_linear_unit_square(), 0.5, 0.5, &QuadratureSpec::default()).unwrap();
        assert!(d.residual.abs() < 1e-5, "{d:?}");
    }
}
