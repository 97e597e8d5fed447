use super::{BivariateLifetime, Support};
use crate::error::{Error, Result};

/// Freund's bivariate exponential. `X` and `Y` fail at rates `a1`, `a2`
/// while both work; the survivor then switches to `a1p` (for `X`) or `a2p`
/// (for `Y`).
#[derive(Clone, Debug)]
pub struct Freund {
    pub a1: f64,
    pub a2: f64,
    pub a1p: f64,
    pub a2p: f64,
    support: Support,
}

pub fn make_freund(a1: f64, a2: f64, a1p: f64, a2p: f64) -> Result<Freund> {
    let all = [a1, a2, a1p, a2p];
    if all.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidParameters(format!("freund rates must be positive, got {all:?}")));
    }
    let (c1, c2) = (a1 + a2 - a2p, a1 + a2 - a1p);
    if c1.abs() < 1e-9 || c2.abs() < 1e-9 {
        return Err(Error::InvalidParameters("freund with a1 + a2 equal to a switched rate is not supported".into()));
    }
    Ok(Freund { a1, a2, a1p, a2p, support: Support::Rectangle { x_max: f64::INFINITY, y_max: f64::INFINITY } })
}

/// Rates seen from one coordinate: `a` is its own rate, `b` the other's.
#[derive(Clone, Copy)]
struct Rates {
    a: f64,
    b: f64,
    ap: f64,
    bp: f64,
}

impl Rates {
    fn total(&self) -> f64 {
        self.a + self.b
    }

    /// `P(X > x, Y > y)` with `X` the own coordinate.
    fn survival(&self, x: f64, y: f64) -> f64 {
        let (x, y) = (x.max(0.0), y.max(0.0));
        if x < y {
            let c = self.total() - self.bp;
            self.a / c * (-c * x - self.bp * y).exp() + (self.b - self.bp) / c * (-self.total() * y).exp()
        } else {
            let c = self.total() - self.ap;
            self.b / c * (-self.ap * x - c * y).exp() + (self.a - self.ap) / c * (-self.total() * x).exp()
        }
    }

    /// `-∂/∂x P(X > x, Y > t)`.
    fn neg_dsurv(&self, x: f64, t: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let t = t.max(0.0);
        if x < t {
            let c = self.total() - self.bp;
            self.a * (-c * x - self.bp * t).exp()
        } else {
            let c = self.total() - self.ap;
            self.b * self.ap / c * (-self.ap * x - c * t).exp() + (self.a - self.ap) * self.total() / c * (-self.total() * x).exp()
        }
    }

    fn pdf(&self, x: f64, y: f64) -> f64 {
        if x < 0.0 || y < 0.0 {
            return 0.0;
        }
        if x < y {
            self.a * self.bp * (-self.bp * y - (self.total() - self.bp) * x).exp()
        } else {
            self.b * self.ap * (-self.ap * x - (self.total() - self.ap) * y).exp()
        }
    }
}

impl Freund {
    fn xs(&self) -> Rates {
        Rates { a: self.a1, b: self.a2, ap: self.a1p, bp: self.a2p }
    }

    fn ys(&self) -> Rates {
        Rates { a: self.a2, b: self.a1, ap: self.a2p, bp: self.a1p }
    }
}

impl BivariateLifetime for Freund {
    fn name(&self) -> String {
        format!("freund(a1={}, a2={}, a1p={}, a2p={})", self.a1, self.a2, self.a1p, self.a2p)
    }

    fn support(&self) -> &Support {
        &self.support
    }

    fn pdf(&self, x: f64, y: f64) -> f64 {
        self.xs().pdf(x, y)
    }

    fn cdf(&self, x: f64, y: f64) -> f64 {
        if x <= 0.0 || y <= 0.0 {
            return 0.0;
        }
        1.0 - self.survival(x, 0.0) - self.survival(0.0, y) + self.survival(x, y)
    }

    fn survival(&self, x: f64, y: f64) -> f64 {
        self.xs().survival(x, y)
    }

    fn marginal_cdf_x(&self, x: f64) -> f64 {
        1.0 - self.survival(x, 0.0)
    }

    fn marginal_cdf_y(&self, y: f64) -> f64 {
        1.0 - self.survival(0.0, y)
    }

    fn marginal_pdf_x(&self, x: f64) -> f64 {
        self.xs().neg_dsurv(x, 0.0)
    }

    fn marginal_pdf_y(&self, y: f64) -> f64 {
        self.ys().neg_dsurv(y, 0.0)
    }

    fn cdf_dx(&self, x: f64, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.marginal_pdf_x(x) - self.survival_dx(x, t)
    }

    fn cdf_dy(&self, s: f64, y: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        self.marginal_pdf_y(y) - self.survival_dy(s, y)
    }

    fn survival_dx(&self, x: f64, t: f64) -> f64 {
        self.xs().neg_dsurv(x, t)
    }

    fn survival_dy(&self, s: f64, y: f64) -> f64 {
        self.ys().neg_dsurv(y, s)
    }

    fn y_breaks(&self, x: f64) -> Vec<f64> {
        vec![x]
    }

    fn x_breaks(&self, y: f64) -> Vec<f64> {
        vec![y]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::test_support::*;
    use approx::assert_abs_diff_eq;

    fn models() -> Vec<Freund> {
        vec![make_freund(1.0, 2.0, 1.5, 2.5).unwrap(), make_freund(0.5, 0.7, 2.0, 0.3).unwrap()]
    }

    #[test]
    fn normalization_and_origin() {
        for m in models() {
            assert_abs_diff_eq!(m.survival(0.0, 0.0), 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(total_mass(&m), 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn lack_of_memory() {
        for m in models() {
            for &(x, y, t) in &[(0.3, 0.9, 0.5), (1.1, 0.2, 0.7), (0.4, 0.4, 2.0)] {
                let lhs = m.survival(x + t, y + t);
                let rhs = m.survival(x, y) * m.survival(t, t);
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn partials_and_density() {
        for m in models() {
            for &(x, y) in &[(0.3, 0.9), (1.1, 0.2)] {
                assert!(partial_defect(&m, x, y) < 1e-9, "{}", partial_defect(&m, x, y));
                assert!(four_region_defect(&m, x, y) < 1e-12);
                let fd = fd_density(&m, x, y, 1e-3);
                assert!((fd - m.pdf(x, y)).abs() < 1e-4 * m.pdf(x, y));
            }
        }
    }
}
