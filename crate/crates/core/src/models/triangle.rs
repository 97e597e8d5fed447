use super::{BivariateLifetime, Support};
use crate::error::{Error, Result};

/// Uniform density `2αβ` on the triangle `αx + βy <= 1`, with
/// `F̄(x, y) = (1 - αx - βy)^2` inside it.
#[derive(Clone, Debug)]
pub struct UniformTriangle {
    pub alpha: f64,
    pub beta: f64,
    support: Support,
}

pub fn make_uniform_triangle(alpha: f64, beta: f64) -> Result<UniformTriangle> {
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::InvalidParameters(format!("triangle needs alpha, beta > 0, got ({alpha}, {beta})")));
    }
    Ok(UniformTriangle { alpha, beta, support: Support::Triangle { alpha, beta } })
}

impl UniformTriangle {
    fn slack(&self, x: f64, y: f64) -> f64 {
        (1.0 - self.alpha * x.max(0.0) - self.beta * y.max(0.0)).max(0.0)
    }
}

impl BivariateLifetime for UniformTriangle {
    fn name(&self) -> String {
        format!("triangle(alpha={}, beta={})", self.alpha, self.beta)
    }

    fn support(&self) -> &Support {
        &self.support
    }

    fn pdf(&self, x: f64, y: f64) -> f64 {
        if x >= 0.0 && y >= 0.0 && self.alpha * x + self.beta * y <= 1.0 {
            2.0 * self.alpha * self.beta
        } else {
            0.0
        }
    }

    fn cdf(&self, x: f64, y: f64) -> f64 {
        if x <= 0.0 || y <= 0.0 {
            return 0.0;
        }
        1.0 - self.slack(x, 0.0).powi(2) - self.slack(0.0, y).powi(2) + self.slack(x, y).powi(2)
    }

    fn survival(&self, x: f64, y: f64) -> f64 {
        self.slack(x, y).powi(2)
    }

    fn marginal_cdf_x(&self, x: f64) -> f64 {
        1.0 - self.slack(x, 0.0).powi(2)
    }

    fn marginal_cdf_y(&self, y: f64) -> f64 {
        1.0 - self.slack(0.0, y).powi(2)
    }

    fn marginal_pdf_x(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            2.0 * self.alpha * self.slack(x, 0.0)
        }
    }

    fn marginal_pdf_y(&self, y: f64) -> f64 {
        if y < 0.0 {
            0.0
        } else {
            2.0 * self.beta * self.slack(0.0, y)
        }
    }

    fn marginal_quantile_x(&self, p: f64) -> f64 {
        (1.0 - (1.0 - p.clamp(0.0, 1.0)).sqrt()) / self.alpha
    }

    fn marginal_quantile_y(&self, p: f64) -> f64 {
        (1.0 - (1.0 - p.clamp(0.0, 1.0)).sqrt()) / self.beta
    }

    fn cdf_dx(&self, x: f64, t: f64) -> f64 {
        if x < 0.0 || t <= 0.0 {
            return 0.0;
        }
        let top = ((1.0 - self.alpha * x) / self.beta).max(0.0);
        2.0 * self.alpha * self.beta * t.min(top)
    }

    fn cdf_dy(&self, s: f64, y: f64) -> f64 {
        if y < 0.0 || s <= 0.0 {
            return 0.0;
        }
        let right = ((1.0 - self.beta * y) / self.alpha).max(0.0);
        2.0 * self.alpha * self.beta * s.min(right)
    }

    fn survival_dx(&self, x: f64, t: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        2.0 * self.alpha * self.slack(x, t)
    }

    fn survival_dy(&self, s: f64, y: f64) -> f64 {
        if y < 0.0 {
            return 0.0;
        }
        2.0 * self.beta * self.slack(s, y)
    }
}
