use super::{BivariateLifetime, ModelRef, Support};

/// `(U, V) = (2x0 - X, 2y0 - Y)`, the point reflection of another model.
#[derive(Clone)]
pub struct Reflected {
    inner: ModelRef,
    cx: f64,
    cy: f64,
    support: Support,
}

impl std::fmt::Debug for Reflected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Reflected({})", self.name())
    }
}

pub fn make_reflected(inner: ModelRef, x0: f64, y0: f64) -> Reflected {
    let (cx, cy) = (2.0 * x0, 2.0 * y0);
    let support = Support::Reflected { inner: Box::new(inner.support().clone()), cx, cy };
    Reflected { inner, cx, cy, support }
}

impl Reflected {
    pub fn inner(&self) -> &ModelRef {
        &self.inner
    }

    pub fn center(&self) -> (f64, f64) {
        (self.cx / 2.0, self.cy / 2.0)
    }
}

impl BivariateLifetime for Reflected {
    fn name(&self) -> String {
        format!("reflected[{} about ({}, {})]", self.inner.name(), self.cx / 2.0, self.cy / 2.0)
    }

    fn support(&self) -> &Support {
        &self.support
    }

    fn pdf(&self, x: f64, y: f64) -> f64 {
        self.inner.pdf(self.cx - x, self.cy - y)
    }

    fn cdf(&self, x: f64, y: f64) -> f64 {
        self.inner.survival(self.cx - x, self.cy - y)
    }

    fn survival(&self, x: f64, y: f64) -> f64 {
        self.inner.cdf(self.cx - x, self.cy - y)
    }

    fn marginal_cdf_x(&self, x: f64) -> f64 {
        1.0 - self.inner.marginal_cdf_x(self.cx - x)
    }

    fn marginal_cdf_y(&self, y: f64) -> f64 {
        1.0 - self.inner.marginal_cdf_y(self.cy - y)
    }

    fn marginal_pdf_x(&self, x: f64) -> f64 {
        self.inner.marginal_pdf_x(self.cx - x)
    }

    fn marginal_pdf_y(&self, y: f64) -> f64 {
        self.inner.marginal_pdf_y(self.cy - y)
    }

    fn marginal_quantile_x(&self, p: f64) -> f64 {
        self.cx - self.inner.marginal_quantile_x(1.0 - p)
    }

    fn marginal_quantile_y(&self, p: f64) -> f64 {
        self.cy - self.inner.marginal_quantile_y(1.0 - p)
    }

    fn cdf_dx(&self, x: f64, t: f64) -> f64 {
        self.inner.survival_dx(self.cx - x, self.cy - t)
    }

    fn cdf_dy(&self, s: f64, y: f64) -> f64 {
        self.inner.survival_dy(self.cx - s, self.cy - y)
    }

    fn survival_dx(&self, x: f64, t: f64) -> f64 {
        self.inner.cdf_dx(self.cx - x, self.cy - t)
    }

    fn survival_dy(&self, s: f64, y: f64) -> f64 {
        self.inner.cdf_dy(self.cx - s, self.cy - y)
    }

    fn y_breaks(&self, x: f64) -> Vec<f64> {
        self.inner.y_breaks(self.cx - x).into_iter().map(|b| self.cy - b).collect()
    }

    fn x_breaks(&self, y: f64) -> Vec<f64> {
        self.inner.x_breaks(self.cy - y).into_iter().map(|b| self.cx - b).collect()
    }
}
