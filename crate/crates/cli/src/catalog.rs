//! Model families accepted on the command line.

use std::sync::Arc;

use lifeinfo::copula::{clayton_special, CopulaRef, Independence, SurvivalCopula};
use lifeinfo::models::tte::{LinearHazard, TteModel};
use lifeinfo::models::*;
use lifeinfo::order_stats::OrderStatModel;

use crate::error::CliError;
use crate::expr::{Bound, Expr};

pub struct Family {
    pub signature: &'static str,
    pub about: &'static str,
}

pub const FAMILIES: &[Family] = &[
    Family { signature: "linear", about: "f(x, y) = x + y on the unit square" },
    Family { signature: "triangle(alpha=1, beta=1)", about: "uniform on the triangle alpha x + beta y < 1" },
    Family { signature: "gumbel(theta)", about: "density proportional to exp(-(1 + theta x)(1 + theta y) / theta), theta > 0" },
    Family { signature: "lomax-tte(r, alpha=1, beta=1)", about: "time-transformed exponential with survival (1 + alpha x + beta y)^-r" },
    Family {
        signature: "truncated-tte(omega, alpha=1, beta=1)",
        about: "time-transformed model with W(u) = (u/omega - 1)^2 and hazards alpha x, beta y",
    },
    Family { signature: "freund(a1, a2, a1p, a2p)", about: "Freund load-sharing model; rates switch to a1p / a2p after the first failure" },
    Family { signature: "copula(copula, x=exp(1), y=exp(1))", about: "Sklar construction from a copula and two marginals" },
    Family { signature: "os(n, component=uniform)", about: "minimum and maximum of n >= 2 iid components (os-mi only)" },
    Family { signature: "reflected(model, x0, y0)", about: "the pair (2 x0 - X, 2 y0 - Y) for a bounded model" },
];

pub const MARGINALS: &[Family] = &[
    Family { signature: "uniform(upper=1)", about: "uniform on [0, upper]" },
    Family { signature: "exp(rate=1)", about: "exponential" },
    Family { signature: "weibull(shape, scale=1)", about: "Weibull" },
];

pub const COPULAS: &[Family] = &[
    Family { signature: "clayton", about: "C(u, v) = uv / (u + v - uv)" },
    Family { signature: "independence", about: "C(u, v) = uv" },
    Family { signature: "survival(copula)", about: "survival copula of the argument" },
];

pub struct BivariateModel {
    pub model: ModelRef,
    pub tte: Option<Arc<TteModel>>,
    pub copula: Option<CopulaRef>,
    /// Power-law tails, better served by the logarithmic axis map.
    pub heavy_tailed: bool,
}

pub enum Built {
    Bivariate(BivariateModel),
    OrderStats(OrderStatModel),
}

fn plain(model: ModelRef) -> BivariateModel {
    BivariateModel { model, tte: None, copula: None, heavy_tailed: false }
}

pub fn univariate(e: &Expr) -> Result<Arc<dyn UnivariateLifetime>, CliError> {
    Ok(match e.name.as_str() {
        "uniform" => {
            let b = Bound::new(e, &["upper"])?;
            Arc::new(Uniform::new(b.num(0, Some(1.0))?)?)
        }
        "exp" | "exponential" => {
            let b = Bound::new(e, &["rate"])?;
            Arc::new(Exponential::new(b.num(0, Some(1.0))?)?)
        }
        "weibull" => {
            let b = Bound::new(e, &["shape", "scale"])?;
            Arc::new(Weibull::new(b.num(0, None)?, b.num(1, Some(1.0))?)?)
        }
        other => return Err(CliError::UnknownModel(other.to_string())),
    })
}

pub fn copula(e: &Expr) -> Result<CopulaRef, CliError> {
    Ok(match e.name.as_str() {
        "clayton" => {
            Bound::new(e, &[])?;
            Arc::new(clayton_special())
        }
        "independence" => {
            Bound::new(e, &[])?;
            Arc::new(Independence)
        }
        "survival" => {
            let b = Bound::new(e, &["copula"])?;
            Arc::new(SurvivalCopula::new(copula(&b.expr(0, None)?)?))
        }
        other => return Err(CliError::UnknownModel(other.to_string())),
    })
}

pub fn build(e: &Expr) -> Result<Built, CliError> {
    match e.name.as_str() {
        "os" => {
            let b = Bound::new(e, &["n", "component"])?;
            let n = b.num(0, None)?;
            if !(n >= 1.0 && n.fract() == 0.0 && n <= u32::MAX as f64) {
                return Err(CliError::Config(format!("os: n must be a positive integer, got {n}")));
            }
            let component = univariate(&b.expr(1, Some("uniform"))?)?;
            Ok(Built::OrderStats(OrderStatModel::new(component, n as u32)?))
        }
        _ => Ok(Built::Bivariate(bivariate(e)?)),
    }
}

pub fn bivariate(e: &Expr) -> Result<BivariateModel, CliError> {
    Ok(match e.name.as_str() {
        "linear" => {
            Bound::new(e, &[])?;
            plain(Arc::new(make_linear_unit_square()))
        }
        "triangle" => {
            let b = Bound::new(e, &["alpha", "beta"])?;
            plain(Arc::new(make_uniform_triangle(b.num(0, Some(1.0))?, b.num(1, Some(1.0))?)?))
        }
        "gumbel" => {
            let b = Bound::new(e, &["theta"])?;
            plain(Arc::new(make_gumbel_type(b.num(0, None)?)?))
        }
        "lomax-tte" => {
            let b = Bound::new(e, &["r", "alpha", "beta"])?;
            let m = Arc::new(make_lomax_tte(b.num(0, None)?, b.num(1, Some(1.0))?, b.num(2, Some(1.0))?)?);
            BivariateModel { model: m.clone(), tte: Some(m), copula: None, heavy_tailed: true }
        }
        "truncated-tte" => {
            let b = Bound::new(e, &["omega", "alpha", "beta"])?;
            let r1 = Arc::new(LinearHazard { rate: b.num(1, Some(1.0))? });
            let r2 = Arc::new(LinearHazard { rate: b.num(2, Some(1.0))? });
            let m = Arc::new(make_truncated_quadratic_tte(b.num(0, None)?, r1, r2)?);
            BivariateModel { model: m.clone(), tte: Some(m), copula: None, heavy_tailed: false }
        }
        "freund" => {
            let b = Bound::new(e, &["a1", "a2", "a1p", "a2p"])?;
            plain(Arc::new(make_freund(b.num(0, None)?, b.num(1, None)?, b.num(2, None)?, b.num(3, None)?)?))
        }
        "copula" => {
            let b = Bound::new(e, &["copula", "x", "y"])?;
            let c = copula(&b.expr(0, None)?)?;
            let x = univariate(&b.expr(1, Some("exp(1)"))?)?;
            let y = univariate(&b.expr(2, Some("exp(1)"))?)?;
            BivariateModel { model: Arc::new(make_from_copula(c.clone(), x, y)), tte: None, copula: Some(c), heavy_tailed: false }
        }
        "reflected" => {
            let b = Bound::new(e, &["model", "x0", "y0"])?;
            let inner = bivariate(&b.expr(0, None)?)?;
            if !inner.model.support().is_bounded() {
                return Err(CliError::Config("reflected: the inner model must have bounded support".into()));
            }
            plain(Arc::new(make_reflected(inner.model, b.num(1, None)?, b.num(2, None)?)))
        }
        "os" => return Err(CliError::Config("os models are only accepted by the os-mi measure".into())),
        other => return Err(CliError::UnknownModel(other.to_string())),
    })
}

pub fn listing() -> String {
    let mut out = String::from("Model families:\n");
    let section = |out: &mut String, items: &[Family]| {
        for f in items {
            out.push_str(&format!("  {:<40} {}\n", f.signature, f.about));
        }
    };
    section(&mut out, FAMILIES);
    out.push_str("\nMarginals and components (copula x/y, os component):\n");
    section(&mut out, MARGINALS);
    out.push_str("\nCopulas (copula argument):\n");
    section(&mut out, COPULAS);
    out.push_str("\nArguments are positional or named, e.g. os(n=3, uniform) or copula(clayton, exp(2), weibull(2)).\n");
    out
}
