//! Bivariate copulas and their survival copulas.

use std::sync::Arc;

/// A copula `C` on the unit square with density `c`.
///
/// Only `cdf` is required. The density defaults to a Richardson-extrapolated
/// mixed difference of `C`, and the partial derivatives to central
/// differences.
pub trait Copula: Send + Sync {
    fn name(&self) -> String;

    fn cdf(&self, u: f64, v: f64) -> f64;

    fn density(&self, u: f64, v: f64) -> f64 {
        let h = 1e-5;
        let c = |u: f64, v: f64| self.cdf(u.clamp(0.0, 1.0), v.clamp(0.0, 1.0));
        let d = |h: f64| (c(u + h, v + h) - c(u + h, v - h) - c(u - h, v + h) + c(u - h, v - h)) / (4.0 * h * h);
        ((4.0 * d(h / 2.0) - d(h)) / 3.0).max(0.0)
    }

    /// `∂C/∂u (u, v) = ∫_0^v c(u, w) dw`.
    fn partial_u(&self, u: f64, v: f64) -> f64 {
        let h = 1e-6;
        let (a, b) = ((u - h).max(0.0), (u + h).min(1.0));
        (self.cdf(b, v) - self.cdf(a, v)) / (b - a)
    }

    /// `∂C/∂v (u, v) = ∫_0^u c(z, v) dz`.
    fn partial_v(&self, u: f64, v: f64) -> f64 {
        let h = 1e-6;
        let (a, b) = ((v - h).max(0.0), (v + h).min(1.0));
        (self.cdf(u, b) - self.cdf(u, a)) / (b - a)
    }

    /// Survival copula `C̃(ū, v̄) = P(U > 1 - ū, V > 1 - v̄)`.
    fn survival(&self, ubar: f64, vbar: f64) -> f64 {
        ubar + vbar - 1.0 + self.cdf(1.0 - ubar, 1.0 - vbar)
    }

    /// `∫_{1-v̄}^1 c(u, w) dw`.
    fn partial_u_upper(&self, u: f64, vbar: f64) -> f64 {
        1.0 - self.partial_u(u, 1.0 - vbar)
    }

    /// `∫_{1-ū}^1 c(z, v) dz`.
    fn partial_v_upper(&self, ubar: f64, v: f64) -> f64 {
        1.0 - self.partial_v(1.0 - ubar, v)
    }
}

pub type CopulaRef = Arc<dyn Copula>;

/// `C(u, v) = uv`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Independence;

impl Copula for Independence {
    fn name(&self) -> String {
        "independence".into()
    }
    fn cdf(&self, u: f64, v: f64) -> f64 {
        u.clamp(0.0, 1.0) * v.clamp(0.0, 1.0)
    }
    fn density(&self, u: f64, v: f64) -> f64 {
        if (0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v) {
            1.0
        } else {
            0.0
        }
    }
    fn partial_u(&self, _u: f64, v: f64) -> f64 {
        v.clamp(0.0, 1.0)
    }
    fn partial_v(&self, u: f64, _v: f64) -> f64 {
        u.clamp(0.0, 1.0)
    }
    fn survival(&self, ubar: f64, vbar: f64) -> f64 {
        self.cdf(ubar, vbar)
    }
    fn partial_u_upper(&self, _u: f64, vbar: f64) -> f64 {
        vbar.clamp(0.0, 1.0)
    }
    fn partial_v_upper(&self, ubar: f64, _v: f64) -> f64 {
        ubar.clamp(0.0, 1.0)
    }
}

/// Clayton copula with unit parameter, `C(u, v) = uv / (u + v - uv)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ClaytonSpecial;

pub fn clayton_special() -> ClaytonSpecial {
    ClaytonSpecial
}

impl Copula for ClaytonSpecial {
    fn name(&self) -> String {
        "clayton-special".into()
    }
    fn cdf(&self, u: f64, v: f64) -> f64 {
        let (u, v) = (u.clamp(0.0, 1.0), v.clamp(0.0, 1.0));
        if u <= 0.0 || v <= 0.0 {
            return 0.0;
        }
        u * v / (u + v - u * v)
    }
    fn density(&self, u: f64, v: f64) -> f64 {
        if !(u > 0.0 && v > 0.0 && u <= 1.0 && v <= 1.0) {
            return 0.0;
        }
        2.0 * u * v / (u + v - u * v).powi(3)
    }
    fn partial_u(&self, u: f64, v: f64) -> f64 {
        let (u, v) = (u.clamp(0.0, 1.0), v.clamp(0.0, 1.0));
        if v <= 0.0 {
            return 0.0;
        }
        (v / (u + v - u * v)).powi(2)
    }
    fn partial_v(&self, u: f64, v: f64) -> f64 {
        self.partial_u(v, u)
    }
}

/// The survival copula of `inner`, itself a copula:
/// `S(u, v) = u + v - 1 + C(1 - u, 1 - v)`, `s(u, v) = c(1 - u, 1 - v)`.
#[derive(Clone)]
pub struct SurvivalCopula {
    inner: CopulaRef,
}

impl SurvivalCopula {
    pub fn new(inner: CopulaRef) -> Self {
        Self { inner }
    }
}

impl Copula for SurvivalCopula {
    fn name(&self) -> String {
        format!("survival({})", self.inner.name())
    }
    fn cdf(&self, u: f64, v: f64) -> f64 {
        self.inner.survival(u.clamp(0.0, 1.0), v.clamp(0.0, 1.0))
    }
    fn density(&self, u: f64, v: f64) -> f64 {
        self.inner.density(1.0 - u, 1.0 - v)
    }
    fn partial_u(&self, u: f64, v: f64) -> f64 {
        self.inner.partial_u_upper(1.0 - u, v)
    }
    fn partial_v(&self, u: f64, v: f64) -> f64 {
        self.inner.partial_v_upper(u, 1.0 - v)
    }
    fn survival(&self, ubar: f64, vbar: f64) -> f64 {
        self.inner.cdf(ubar, vbar)
    }
    fn partial_u_upper(&self, u: f64, vbar: f64) -> f64 {
        self.inner.partial_u(1.0 - u, vbar)
    }
    fn partial_v_upper(&self, ubar: f64, v: f64) -> f64 {
        self.inner.partial_v(ubar, 1.0 - v)
    }
}
