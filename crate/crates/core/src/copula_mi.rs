//! Dynamic information at quantile-anchored inspection times, written in
//! terms of a copula and so free of the marginal laws.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use crate::copula::{Copula, CopulaRef, SurvivalCopula};
use crate::error::{Error, Result};
use crate::mi::{log_ratio_term, past_mi, residual_mi};
use crate::models::{make_from_copula, UnivariateLifetime};
use crate::quadrature::{integrate_2d, Domain2d, QuadratureSpec};
use crate::region::{MeasureResult, MIN_REGION_PROBABILITY};

fn check_unit(p: f64, q: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameters(format!("quantile levels must lie in (0, 1), got ({p}, {q})")));
    }
    Ok(())
}

/// Information of `(U, V) ~ C` restricted to `[0, a] × [0, b]`:
///
/// ```text
/// log C(a, b) + 1/C(a, b) ∫_0^a ∫_0^b c log[c / (∂_u C(u, b) ∂_v C(a, v))] dv du
/// ```
fn lower_box_mi(copula: &dyn Copula, a: f64, b: f64, spec: &QuadratureSpec) -> Result<MeasureResult> {
    let mass = copula.cdf(a, b);
    if !(mass > MIN_REGION_PROBABILITY) {
        return Err(Error::ZeroRegionProbability(mass));
    }
    let last_u = RefCell::new((f64::NAN, 0.0));
    let v_cache: RefCell<HashMap<u64, f64>> = RefCell::new(HashMap::new());
    let r = integrate_2d(
        |u, v| {
            let c = copula.density(u, v);
            if c <= 0.0 {
                return 0.0;
            }
            let mut lu = last_u.borrow_mut();
            if lu.0 != u {
                *lu = (u, copula.partial_u(u, b));
            }
            let bv = *v_cache.borrow_mut().entry(v.to_bits()).or_insert_with(|| copula.partial_v(a, v));
            log_ratio_term(c, lu.1, bv)
        },
        &Domain2d::rectangle(0.0, a, 0.0, b),
        spec,
    )?;
    Ok(MeasureResult {
        value: mass.ln() + r.value / mass,
        numerical_error: r.error_estimate / mass,
        evaluations: r.evaluations,
        converged: r.converged,
    })
}

/// Past information at `s = ξ_p`, `t = η_q` for any marginals joined by `copula`.
pub fn past_mi_copula(copula: &dyn Copula, p: f64, q: f64, spec: &QuadratureSpec) -> Result<MeasureResult> {
    check_unit(p, q)?;
    lower_box_mi(copula, p, q, spec)
}

/// Residual information at `s = ξ_p`, `t = η_q` for any marginals joined by
/// `copula`, evaluated on its survival copula over `[0, 1-p] × [0, 1-q]`.
pub fn residual_mi_survival_copula(copula: CopulaRef, p: f64, q: f64, spec: &QuadratureSpec) -> Result<MeasureResult> {
    check_unit(p, q)?;
    lower_box_mi(&SurvivalCopula::new(copula), 1.0 - p, 1.0 - q, spec)
}

pub type MarginalPair = (Arc<dyn UnivariateLifetime>, Arc<dyn UnivariateLifetime>);

/// Largest spread, over the marginal pairs, of the past and residual
/// information computed on the assembled joint law at the `(p, q)` quantiles.
pub fn marginal_freeness_check(copula: CopulaRef, marginal_pairs: &[MarginalPair], p: f64, q: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_unit(p, q)?;
    if marginal_pairs.len() < 2 {
        return Err(Error::InvalidParameters("need at least two marginal pairs".into()));
    }
    let mut past = Vec::new();
    let mut residual = Vec::new();
    for (mx, my) in marginal_pairs {
        let (s, t) = (mx.quantile(p), my.quantile(q));
        let model = make_from_copula(copula.clone(), mx.clone(), my.clone());
        past.push(past_mi(&model, s, t, spec)?.value);
        residual.push(residual_mi(&model, s, t, spec)?.value);
    }
    let spread = |v: &[f64]| {
        let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        hi - lo
    };
    Ok(spread(&past).max(spread(&residual)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copula::{clayton_special, Independence};
    use crate::mi::residual_mi_tte;
    use crate::models::{make_lomax_tte, Exponential, Uniform, Weibull};
    use approx::assert_abs_diff_eq;

    const CLAYTON_PAST: f64 = 0.193_147_180_559_945_3;

    fn clayton() -> CopulaRef {
        Arc::new(clayton_special())
    }

    #[test]
    fn clayton_past_is_constant() {
        let spec = QuadratureSpec::default();
        for &p in &[0.1, 0.35, 0.6, 0.9] {
            for &q in &[0.15, 0.5, 0.85] {
                let m = past_mi_copula(&clayton_special(), p, q, &spec).unwrap();
                assert_abs_diff_eq!(m.value, CLAYTON_PAST, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn independence_gives_zero() {
        let spec = QuadratureSpec::default();
        let ind: CopulaRef = Arc::new(Independence);
        assert_abs_diff_eq!(past_mi_copula(&Independence, 0.3, 0.7, &spec).unwrap().value, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(residual_mi_survival_copula(ind, 0.3, 0.7, &spec).unwrap().value, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn rejects_bad_levels() {
        let spec = QuadratureSpec::default();
        assert!(past_mi_copula(&Independence, 0.0, 0.5, &spec).is_err());
        assert!(residual_mi_survival_copula(clayton(), 0.5, 1.0, &spec).is_err());
    }

    #[test]
    fn copula_routes_match_direct_routes() {
        let spec = QuadratureSpec::default();
        let e = Arc::new(Exponential::new(1.0).unwrap());
        let model = make_from_copula(clayton(), e.clone(), e.clone());
        let (s, t) = (e.quantile(0.3), e.quantile(0.6));
        let direct = past_mi(&model, s, t, &spec).unwrap().value;
        assert_abs_diff_eq!(direct, past_mi_copula(&clayton_special(), 0.3, 0.6, &spec).unwrap().value, epsilon = 1e-6);

        let u = Arc::new(Uniform::unit());
        let model = make_from_copula(clayton(), u.clone(), u);
        let direct = residual_mi(&model, 0.3, 0.6, &spec).unwrap().value;
        let via = residual_mi_survival_copula(clayton(), 0.3, 0.6, &spec).unwrap().value;
        assert_abs_diff_eq!(direct, via, epsilon = 1e-6);
    }

    #[test]
    fn lomax_through_its_copula() {
        let spec = QuadratureSpec::default();
        let lomax_copula: CopulaRef = Arc::new(SurvivalCopula::new(clayton()));
        let via = residual_mi_survival_copula(lomax_copula, 0.2, 0.5, &spec).unwrap().value;
        assert_abs_diff_eq!(via, CLAYTON_PAST, epsilon = 1e-7);
        // Marginal survival is 1 / (1 + x), so ξ_p = p / (1 - p).
        let tte = make_lomax_tte(1.0, 1.0, 1.0).unwrap();
        let direct = residual_mi_tte(&tte, 0.2 / 0.8, 0.5 / 0.5, &spec.with_transform(crate::quadrature::Transform::LogMap)).unwrap();
        assert_abs_diff_eq!(direct.value, via, epsilon = 1e-6);
    }

    #[test]
    fn marginals_do_not_matter() {
        let spec = QuadratureSpec::default();
        let pairs: Vec<MarginalPair> = vec![
            (Arc::new(Uniform::unit()), Arc::new(Uniform::unit())),
            (Arc::new(Exponential::new(1.0).unwrap()), Arc::new(Weibull::new(2.0, 1.0).unwrap())),
            (Arc::new(Weibull::new(1.5, 2.0).unwrap()), Arc::new(Exponential::new(3.0).unwrap())),
        ];
        for &(p, q) in &[(0.2, 0.5), (0.5, 0.5), (0.7, 0.3)] {
            assert!(marginal_freeness_check(clayton(), &pairs, p, q, &spec).unwrap() < 1e-6);
            assert!(marginal_freeness_check(Arc::new(Independence), &pairs, p, q, &spec).unwrap() < 1e-8);
        }
        assert!(marginal_freeness_check(clayton(), &pairs[..1], 0.2, 0.5, &spec).is_err());
    }
}
