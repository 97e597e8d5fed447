use super::{BivariateLifetime, Support};
use crate::error::{Error, Result};
use crate::special::exp_integral_e1;

/// Gumbel-type density
/// `f(x, y) = θ/Γ(0, 1/θ) · exp{-(1 + θx)(1 + θy)/θ}` on the positive quadrant,
/// with `F̄(x, y) = Γ(0, (1 + θx)(1 + θy)/θ) / Γ(0, 1/θ)`.
#[derive(Clone, Debug)]
pub struct GumbelType {
    pub theta: f64,
    gamma0: f64,
    support: Support,
}

pub fn make_gumbel_type(theta: f64) -> Result<GumbelType> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::InvalidParameters(format!("gumbel-type needs theta > 0, got {theta}")));
    }
    let gamma0 = exp_integral_e1(1.0 / theta)?;
    Ok(GumbelType { theta, gamma0, support: Support::Rectangle { x_max: f64::INFINITY, y_max: f64::INFINITY } })
}

impl GumbelType {
    fn z(&self, x: f64, y: f64) -> f64 {
        (1.0 + self.theta * x) * (1.0 + self.theta * y) / self.theta
    }

    fn gamma_ratio(&self, z: f64) -> f64 {
        exp_integral_e1(z).map(|g| g / self.gamma0).unwrap_or(0.0)
    }

    /// `-∂F̄/∂x` at `(x, t)`, both clamped to the quadrant.
    fn neg_dsurv(&self, x: f64, t: f64) -> f64 {
        let th = self.theta;
        th * (-self.z(x, t.max(0.0))).exp() / ((1.0 + th * x) * self.gamma0)
    }

    fn pos_dcdf(&self, x: f64, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let th = self.theta;
        th * (-self.z(x, 0.0)).exp() / ((1.0 + th * x) * self.gamma0) * -(-(1.0 + th * x) * t).exp_m1()
    }
}

impl BivariateLifetime for GumbelType {
    fn name(&self) -> String {
        format!("gumbel(theta={})", self.theta)
    }

    fn support(&self) -> &Support {
        &self.support
    }

    fn pdf(&self, x: f64, y: f64) -> f64 {
        if x < 0.0 || y < 0.0 {
            return 0.0;
        }
        self.theta / self.gamma0 * (-self.z(x, y)).exp()
    }

    fn cdf(&self, x: f64, y: f64) -> f64 {
        if x <= 0.0 || y <= 0.0 {
            return 0.0;
        }
        1.0 - self.gamma_ratio(self.z(x, 0.0)) - self.gamma_ratio(self.z(0.0, y)) + self.gamma_ratio(self.z(x, y))
    }

    fn survival(&self, x: f64, y: f64) -> f64 {
        self.gamma_ratio(self.z(x.max(0.0), y.max(0.0)))
    }

    fn marginal_cdf_x(&self, x: f64) -> f64 {
        1.0 - self.gamma_ratio(self.z(x.max(0.0), 0.0))
    }

    fn marginal_cdf_y(&self, y: f64) -> f64 {
        1.0 - self.gamma_ratio(self.z(0.0, y.max(0.0)))
    }

    fn marginal_pdf_x(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.neg_dsurv(x, 0.0)
        }
    }

    fn marginal_pdf_y(&self, y: f64) -> f64 {
        if y < 0.0 {
            0.0
        } else {
            self.neg_dsurv(y, 0.0)
        }
    }

    fn cdf_dx(&self, x: f64, t: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.pos_dcdf(x, t)
        }
    }

    fn cdf_dy(&self, s: f64, y: f64) -> f64 {
        if y < 0.0 {
            0.0
        } else {
            self.pos_dcdf(y, s)
        }
    }

    fn survival_dx(&self, x: f64, t: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.neg_dsurv(x, t)
        }
    }

    fn survival_dy(&self, s: f64, y: f64) -> f64 {
        if y < 0.0 {
            0.0
        } else {
            self.neg_dsurv(y, s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::test_support::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn survival_at_origin() {
        for &th in &[0.3, 1.0, 4.0] {
            let m = make_gumbel_type(th).unwrap();
            assert_abs_diff_eq!(m.survival(0.0, 0.0), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn density_at_origin() {
        // e^{-1} / E1(1), with E1(1) = 0.21938393439552027.
        let m = make_gumbel_type(1.0).unwrap();
        assert_relative_eq!(m.pdf(0.0, 0.0), 1.676_875_028_178_700_9, max_relative = 1e-12);
    }

    #[test]
    fn normalization_partials_regions() {
        for &th in &[0.5, 1.0, 2.0] {
            let m = make_gumbel_type(th).unwrap();
            assert_abs_diff_eq!(total_mass(&m), 1.0, epsilon = 1e-6);
            for &(x, y) in &[(0.3, 0.7), (1.2, 0.1), (0.05, 2.0)] {
                assert!(partial_defect(&m, x, y) < 1e-9);
                assert!(four_region_defect(&m, x, y) < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_theta() {
        assert!(make_gumbel_type(0.0).is_err());
    }
}
