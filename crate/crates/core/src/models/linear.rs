use super::{BivariateLifetime, Support};

/// `f(x, y) = x + y` on the unit square, `F(x, y) = xy(x + y)/2`.
#[derive(Clone, Debug)]
pub struct LinearUnitSquare {
    support: Support,
}

pub fn make_linear_unit_square() -> LinearUnitSquare {
    LinearUnitSquare { support: Support::Rectangle { x_max: 1.0, y_max: 1.0 } }
}

fn clamp01(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

fn inside(v: f64) -> bool {
    (0.0..=1.0).contains(&v)
}

impl BivariateLifetime for LinearUnitSquare {
    fn name(&self) -> String {
        "linear".into()
    }

    fn support(&self) -> &Support {
        &self.support
    }

    fn pdf(&self, x: f64, y: f64) -> f64 {
        if inside(x) && inside(y) {
            x + y
        } else {
            0.0
        }
    }

    fn cdf(&self, x: f64, y: f64) -> f64 {
        let (x, y) = (clamp01(x), clamp01(y));
        x * y * (x + y) / 2.0
    }

    fn marginal_cdf_x(&self, x: f64) -> f64 {
        let x = clamp01(x);
        x * (x + 1.0) / 2.0
    }

    fn marginal_cdf_y(&self, y: f64) -> f64 {
        self.marginal_cdf_x(y)
    }

    fn marginal_pdf_x(&self, x: f64) -> f64 {
        if inside(x) {
            x + 0.5
        } else {
            0.0
        }
    }

    fn marginal_pdf_y(&self, y: f64) -> f64 {
        self.marginal_pdf_x(y)
    }

    fn marginal_quantile_x(&self, p: f64) -> f64 {
        // x^2 + x - 2p = 0
        let p = clamp01(p);
        (-1.0 + (1.0 + 8.0 * p).sqrt()) / 2.0
    }

    fn marginal_quantile_y(&self, p: f64) -> f64 {
        self.marginal_quantile_x(p)
    }

    fn cdf_dx(&self, x: f64, t: f64) -> f64 {
        if !inside(x) {
            return 0.0;
        }
        let t = clamp01(t);
        x * t + t * t / 2.0
    }

    fn cdf_dy(&self, s: f64, y: f64) -> f64 {
        self.cdf_dx(y, s)
    }

    fn survival_dx(&self, x: f64, t: f64) -> f64 {
        if !inside(x) {
            return 0.0;
        }
        let t = clamp01(t);
        x * (1.0 - t) + (1.0 - t * t) / 2.0
    }

    fn survival_dy(&self, s: f64, y: f64) -> f64 {
        self.survival_dx(y, s)
    }
}
