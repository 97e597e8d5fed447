//! Bivariate lifetime distributions.
//!
//! Every family implements [`BivariateLifetime`], which exposes the joint
//! density, distribution and survival functions, the marginals, and the four
//! partial integrals of the density that the dynamic measures need:
//!
//! | method            | integral                        |
//! |-------------------|---------------------------------|
//! | `cdf_dx(x, t)`    | `∫_0^t f(x, y) dy = ∂F/∂x`      |
//! | `survival_dx(x,t)`| `∫_t^∞ f(x, y) dy = -∂F̄/∂x`     |
//! | `cdf_dy(s, y)`    | `∫_0^s f(x, y) dx = ∂F/∂y`      |
//! | `survival_dy(s,y)`| `∫_s^∞ f(x, y) dx = -∂F̄/∂y`     |
//!
//! The defaults compute them by quadrature over the support; families
//! override them with closed forms where one exists.

mod copula_model;
mod freund;
mod gumbel;
mod linear;
mod reflected;
mod support;
mod triangle;
pub mod tte;
mod univariate;

use std::sync::Arc;

pub use copula_model::{make_from_copula, CopulaModel};
pub use freund::{make_freund, Freund};
pub use gumbel::{make_gumbel_type, GumbelType};
pub use linear::{make_linear_unit_square, LinearUnitSquare};
pub use reflected::{make_reflected, Reflected};
pub use support::{Support, SupportKind};
pub use triangle::{make_uniform_triangle, UniformTriangle};
pub use tte::{make_lomax_tte, make_truncated_quadratic_tte, make_tte, TteModel};
pub use univariate::{bisect_quantile, Exponential, Uniform, UnivariateLifetime, Weibull};

use crate::quadrature::{integrate_1d_with_breaks, QuadratureSpec};

/// Shared handle to a model.
pub type ModelRef = Arc<dyn BivariateLifetime>;

/// Spec used by the default (numerical) partial integrals.
pub fn partial_spec() -> QuadratureSpec {
    QuadratureSpec::default().with_tolerances(1e-11, 1e-14)
}

pub trait BivariateLifetime: Send + Sync {
    fn name(&self) -> String;

    fn support(&self) -> &Support;

    /// Joint density; zero outside the support.
    fn pdf(&self, x: f64, y: f64) -> f64;

    /// `P(X <= x, Y <= y)`.
    fn cdf(&self, x: f64, y: f64) -> f64;

    /// The copula construction behind the model, when it has one.
    fn as_copula_model(&self) -> Option<&CopulaModel> {
        None
    }

    /// `P(X > x, Y > y)`.
    fn survival(&self, x: f64, y: f64) -> f64 {
        1.0 - self.marginal_cdf_x(x) - self.marginal_cdf_y(y) + self.cdf(x, y)
    }

    fn marginal_cdf_x(&self, x: f64) -> f64;

    fn marginal_cdf_y(&self, y: f64) -> f64;

    fn marginal_pdf_x(&self, x: f64) -> f64 {
        numeric_survival_dx(self, x, f64::NEG_INFINITY)
    }

    fn marginal_pdf_y(&self, y: f64) -> f64 {
        numeric_survival_dy(self, f64::NEG_INFINITY, y)
    }

    fn marginal_quantile_x(&self, p: f64) -> f64 {
        let (lo, hi) = self.support().x_bounds();
        bisect_quantile(|x| self.marginal_cdf_x(x), p, lo, hi)
    }

    fn marginal_quantile_y(&self, p: f64) -> f64 {
        let (lo, hi) = self.support().y_bounds();
        bisect_quantile(|y| self.marginal_cdf_y(y), p, lo, hi)
    }

    fn cdf_dx(&self, x: f64, t: f64) -> f64 {
        numeric_cdf_dx(self, x, t)
    }

    fn cdf_dy(&self, s: f64, y: f64) -> f64 {
        numeric_cdf_dy(self, s, y)
    }

    fn survival_dx(&self, x: f64, t: f64) -> f64 {
        numeric_survival_dx(self, x, t)
    }

    fn survival_dy(&self, s: f64, y: f64) -> f64 {
        numeric_survival_dy(self, s, y)
    }

    /// Points where `pdf(x, ·)` is discontinuous.
    fn y_breaks(&self, _x: f64) -> Vec<f64> {
        Vec::new()
    }

    /// Points where `pdf(·, y)` is discontinuous.
    fn x_breaks(&self, _y: f64) -> Vec<f64> {
        Vec::new()
    }
}

fn integrate_y<M: BivariateLifetime + ?Sized>(model: &M, x: f64, lo: f64, hi: f64) -> f64 {
    let (ylo, yhi) = model.support().y_section(x);
    let (a, b) = (lo.max(ylo), hi.min(yhi));
    if !(a < b) {
        return 0.0;
    }
    integrate_1d_with_breaks(|y| model.pdf(x, y), a, b, &model.y_breaks(x), &partial_spec()).map(|r| r.value).unwrap_or(f64::NAN)
}

fn integrate_x<M: BivariateLifetime + ?Sized>(model: &M, y: f64, lo: f64, hi: f64) -> f64 {
    let (xlo, xhi) = model.support().x_section(y);
    let (a, b) = (lo.max(xlo), hi.min(xhi));
    if !(a < b) {
        return 0.0;
    }
    integrate_1d_with_breaks(|x| model.pdf(x, y), a, b, &model.x_breaks(y), &partial_spec()).map(|r| r.value).unwrap_or(f64::NAN)
}

/// `∫_0^t f(x, y) dy` by quadrature.
pub fn numeric_cdf_dx<M: BivariateLifetime + ?Sized>(model: &M, x: f64, t: f64) -> f64 {
    integrate_y(model, x, f64::NEG_INFINITY, t)
}

/// `∫_t^∞ f(x, y) dy` by quadrature.
pub fn numeric_survival_dx<M: BivariateLifetime + ?Sized>(model: &M, x: f64, t: f64) -> f64 {
    integrate_y(model, x, t, f64::INFINITY)
}

/// `∫_0^s f(x, y) dx` by quadrature.
pub fn numeric_cdf_dy<M: BivariateLifetime + ?Sized>(model: &M, s: f64, y: f64) -> f64 {
    integrate_x(model, y, f64::NEG_INFINITY, s)
}

/// `∫_s^∞ f(x, y) dx` by quadrature.
pub fn numeric_survival_dy<M: BivariateLifetime + ?Sized>(model: &M, s: f64, y: f64) -> f64 {
    integrate_x(model, y, s, f64::INFINITY)
}
