use std::sync::Arc;

use super::{BivariateLifetime, Support, UnivariateLifetime};
use crate::copula::CopulaRef;

/// Joint law `F(x, y) = C(F_X(x), F_Y(y))` assembled from a copula and two
/// marginals.
#[derive(Clone)]
pub struct CopulaModel {
    copula: CopulaRef,
    mx: Arc<dyn UnivariateLifetime>,
    my: Arc<dyn UnivariateLifetime>,
    support: Support,
}

impl std::fmt::Debug for CopulaModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CopulaModel({})", self.name())
    }
}

pub fn make_from_copula(
    copula: CopulaRef,
    marginal_x: Arc<dyn UnivariateLifetime>,
    marginal_y: Arc<dyn UnivariateLifetime>,
) -> CopulaModel {
    let support = Support::Rectangle { x_max: marginal_x.upper(), y_max: marginal_y.upper() };
    CopulaModel { copula, mx: marginal_x, my: marginal_y, support }
}

impl CopulaModel {
    pub fn copula(&self) -> &CopulaRef {
        &self.copula
    }

    pub fn marginal_x(&self) -> &dyn UnivariateLifetime {
        self.mx.as_ref()
    }

    pub fn marginal_y(&self) -> &dyn UnivariateLifetime {
        self.my.as_ref()
    }
}

impl BivariateLifetime for CopulaModel {
    fn name(&self) -> String {
        format!("copula[{}; {}; {}]", self.copula.name(), self.mx.name(), self.my.name())
    }

    fn support(&self) -> &Support {
        &self.support
    }

    fn as_copula_model(&self) -> Option<&CopulaModel> {
        Some(self)
    }

    fn pdf(&self, x: f64, y: f64) -> f64 {
        let (fx, fy) = (self.mx.pdf(x), self.my.pdf(y));
        if fx <= 0.0 || fy <= 0.0 {
            return 0.0;
        }
        fx * fy * self.copula.density(self.mx.cdf(x), self.my.cdf(y))
    }

    fn cdf(&self, x: f64, y: f64) -> f64 {
        self.copula.cdf(self.mx.cdf(x), self.my.cdf(y))
    }

    fn survival(&self, x: f64, y: f64) -> f64 {
        self.copula.survival(self.mx.survival(x), self.my.survival(y))
    }

    fn marginal_cdf_x(&self, x: f64) -> f64 {
        self.mx.cdf(x)
    }

    fn marginal_cdf_y(&self, y: f64) -> f64 {
        self.my.cdf(y)
    }

    fn marginal_pdf_x(&self, x: f64) -> f64 {
        self.mx.pdf(x)
    }

    fn marginal_pdf_y(&self, y: f64) -> f64 {
        self.my.pdf(y)
    }

    fn marginal_quantile_x(&self, p: f64) -> f64 {
        self.mx.quantile(p)
    }

    fn marginal_quantile_y(&self, p: f64) -> f64 {
        self.my.quantile(p)
    }

    fn cdf_dx(&self, x: f64, t: f64) -> f64 {
        let fx = self.mx.pdf(x);
        if fx <= 0.0 {
            return 0.0;
        }
        fx * self.copula.partial_u(self.mx.cdf(x), self.my.cdf(t))
    }

    fn cdf_dy(&self, s: f64, y: f64) -> f64 {
        let fy = self.my.pdf(y);
        if fy <= 0.0 {
            return 0.0;
        }
        fy * self.copula.partial_v(self.mx.cdf(s), self.my.cdf(y))
    }

    fn survival_dx(&self, x: f64, t: f64) -> f64 {
        let fx = self.mx.pdf(x);
        if fx <= 0.0 {
            return 0.0;
        }
        fx * self.copula.partial_u_upper(self.mx.cdf(x), self.my.survival(t))
    }

    fn survival_dy(&self, s: f64, y: f64) -> f64 {
        let fy = self.my.pdf(y);
        if fy <= 0.0 {
            return 0.0;
        }
        fy * self.copula.partial_v_upper(self.mx.survival(s), self.my.cdf(y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copula::{ClaytonSpecial, Copula, Independence, SurvivalCopula};
    use crate::models::test_support::*;
    use crate::models::{Exponential, Uniform, Weibull};
    use approx::assert_abs_diff_eq;

    fn uniform_clayton() -> CopulaModel {
        make_from_copula(Arc::new(ClaytonSpecial), Arc::new(Uniform::unit()), Arc::new(Uniform::unit()))
    }

    #[test]
    fn sklar_values() {
        let m = uniform_clayton();
        assert_abs_diff_eq!(m.cdf(0.5, 0.5), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.cdf(1.0, 1.0), 1.0, epsilon = 1e-15);
        let e = Exponential::new(1.3).unwrap();
        let w = Weibull::new(2.0, 1.0).unwrap();
        let ind = make_from_copula(Arc::new(Independence), Arc::new(e), Arc::new(w));
        for &(x, y) in &[(0.2, 0.4), (1.5, 0.9)] {
            assert_abs_diff_eq!(ind.pdf(x, y), e.pdf(x) * w.pdf(y), epsilon = 1e-15);
        }
        assert_abs_diff_eq!(ind.cdf(f64::INFINITY, f64::INFINITY), 1.0);
    }

    #[test]
    fn normalization_and_partials() {
        let models = vec![
            uniform_clayton(),
            make_from_copula(Arc::new(ClaytonSpecial), Arc::new(Exponential::new(1.0).unwrap()), Arc::new(Weibull::new(2.0, 1.5).unwrap())),
            make_from_copula(
                Arc::new(SurvivalCopula::new(Arc::new(ClaytonSpecial))),
                Arc::new(Exponential::new(2.0).unwrap()),
                Arc::new(Exponential::new(0.5).unwrap()),
            ),
        ];
        for m in &models {
            assert_abs_diff_eq!(total_mass(m), 1.0, epsilon = 1e-6);
            for &(x, y) in &[(0.3, 0.6), (0.7, 0.2)] {
                assert!(partial_defect(m, x, y) < 1e-7, "{} {}", m.name(), partial_defect(m, x, y));
                assert!(four_region_defect(m, x, y) < 1e-12);
                let fd = fd_density(m, x, y, 1e-3);
                assert!((fd - m.pdf(x, y)).abs() < 1e-4 * m.pdf(x, y));
            }
        }
    }

    #[test]
    fn survival_copula_of_clayton_is_unit_lomax() {
        // F̄(x, y) = 1/(1 + x + y) for unit-exponential-like Lomax marginals.
        let lomax = crate::models::tte::make_lomax_tte(1.0, 1.0, 1.0).unwrap();
        let c = ClaytonSpecial;
        for &(x, y) in &[(0.2, 0.5), (3.0, 1.0)] {
            let (ux, uy) = (1.0 / (1.0 + x), 1.0 / (1.0 + y));
            assert_abs_diff_eq!(lomax.survival(x, y), c.cdf(ux, uy), epsilon = 1e-15);
        }
    }
}
