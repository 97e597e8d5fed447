//! The measures a sweep can evaluate, one grid point at a time.

use lifeinfo::copula_mi::{past_mi_copula, residual_mi_survival_copula};
use lifeinfo::entropy::{joint_entropy, marginal_entropy, verify_decomposition, Axis};
use lifeinfo::error::Error;
use lifeinfo::mc::mc_mutual_information;
use lifeinfo::mi::{region_mi, region_mi_bound, residual_mi_tte, BoundDirection};
use lifeinfo::order_stats::{os_mi_closed_form, os_mi_direct_quantiles, CLOSED_FORM_ABS_ERROR};
use lifeinfo::region::{ConditioningRegion, MeasureResult, RegionKind};
use serde_json::{json, Value};

use crate::catalog::Built;
use crate::config::Resolved;
use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    PastMi,
    ResidualMi,
    MixedEntropy,
    OsMi,
    CopulaPastMi,
    CopulaResidualMi,
    Bounds,
    McValidate,
    DecompositionCheck,
}

pub struct MeasureInfo {
    pub measure: Measure,
    pub name: &'static str,
    pub about: &'static str,
}

pub const MEASURES: &[MeasureInfo] = &[
    MeasureInfo {
        measure: Measure::PastMi,
        name: "past-mi",
        about: "(s,t)  past information: log F(s,t) + 1/F(s,t) ∫_0^s∫_0^t f log[f / (∂F/∂x ∂F/∂y)]",
    },
    MeasureInfo {
        measure: Measure::ResidualMi,
        name: "residual-mi",
        about: "(s,t)  residual information: log F̄(s,t) + 1/F̄(s,t) ∫_s^∞∫_t^∞ f log[f / (∂F̄/∂x ∂F̄/∂y)]; route=tte integrates in the time-transformed scale",
    },
    MeasureInfo {
        measure: Measure::MixedEntropy,
        name: "mixed-entropy",
        about: "(s,t)  joint entropy -∫∫ g log g of the conditioned pair; region defaults to past-residual (X <= s, Y > t)",
    },
    MeasureInfo {
        measure: Measure::OsMi,
        name: "os-mi",
        about: "(p,q)  information between min and max of n iid lifetimes given min <= ξ_p, max > ξ_q; p < q only; route closed-form (default) or direct",
    },
    MeasureInfo {
        measure: Measure::CopulaPastMi,
        name: "copula-past-mi",
        about: "(p,q)  past information at (ξ_p, η_q) from the copula alone: log C(p,q) + 1/C(p,q) ∫_0^p∫_0^q c log[c / (∂_u C ∂_v C)]",
    },
    MeasureInfo {
        measure: Measure::CopulaResidualMi,
        name: "copula-residual-mi",
        about: "(p,q)  residual information at (ξ_p, η_q) from the survival copula on [0, 1-p] × [0, 1-q]",
    },
    MeasureInfo {
        measure: Measure::Bounds,
        name: "bounds",
        about: "(s,t)  bound log a(s,t) + log P from the corner dependence ratio; JSON adds the direction and the exact value",
    },
    MeasureInfo {
        measure: Measure::McValidate,
        name: "mc-validate",
        about: "(s,t)  Monte-Carlo information (value, standard error); converged = agreement with quadrature within 3(se + err)",
    },
    MeasureInfo {
        measure: Measure::DecompositionCheck,
        name: "decomposition-check",
        about: "(s,t)  H - [ℋ(P1..P4) + Σ Pi Hi], the defect of the four-region entropy split",
    },
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Quadrature,
    Tte,
    ClosedForm,
    Direct,
}

impl Route {
    pub fn resolve(measure: Measure, name: Option<&str>, model: &Built) -> Result<Self, CliError> {
        let route = match (measure, name) {
            (Measure::OsMi, None | Some("closed-form")) => Route::ClosedForm,
            (Measure::OsMi, Some("direct")) => Route::Direct,
            (Measure::ResidualMi, Some("tte")) => match model {
                Built::Bivariate(b) if b.tte.is_some() => Route::Tte,
                _ => return Err(CliError::Config("route tte needs a lomax-tte or truncated-tte model".into())),
            },
            (_, None | Some("quadrature")) if measure != Measure::OsMi => Route::Quadrature,
            (_, Some(other)) => return Err(CliError::Config(format!("measure {} has no route '{other}'", measure.name()))),
            _ => unreachable!(),
        };
        Ok(route)
    }
}

impl Measure {
    pub fn name(self) -> &'static str {
        MEASURES.iter().find(|m| m.measure == self).map(|m| m.name).unwrap_or("?")
    }

    pub fn from_name(name: &str) -> Result<Self, CliError> {
        let key = name.trim().to_ascii_lowercase().replace('_', "-");
        MEASURES.iter().find(|m| m.name == key).map(|m| m.measure).ok_or_else(|| CliError::UnknownMeasure(name.to_string()))
    }

    /// Column names of the grid coordinates.
    pub fn axis_names(self) -> (&'static str, &'static str) {
        match self {
            Measure::OsMi | Measure::CopulaPastMi | Measure::CopulaResidualMi => ("p", "q"),
            _ => ("s", "t"),
        }
    }

    pub fn uses_region(self) -> bool {
        matches!(self, Measure::MixedEntropy | Measure::Bounds | Measure::McValidate)
    }

    pub fn default_region(self) -> RegionKind {
        match self {
            Measure::PastMi => RegionKind::PastPast,
            Measure::MixedEntropy => RegionKind::PastResidual,
            _ => RegionKind::ResidualResidual,
        }
    }

    pub fn check_model(self, model: &Built) -> Result<(), CliError> {
        match (self, model) {
            (Measure::OsMi, Built::OrderStats(_)) => Ok(()),
            (Measure::OsMi, _) => Err(CliError::Config("measure os-mi needs an os(n, component) model".into())),
            (_, Built::OrderStats(_)) => Err(CliError::Config(format!("measure {} needs a bivariate model, not os(...)", self.name()))),
            (Measure::CopulaPastMi | Measure::CopulaResidualMi, Built::Bivariate(b)) if b.copula.is_none() => {
                Err(CliError::Config(format!("measure {} needs a copula(...) model", self.name())))
            }
            _ => Ok(()),
        }
    }
}

pub fn listing() -> String {
    let mut out = String::from("Measures (grid axes, definition):\n");
    for m in MEASURES {
        out.push_str(&format!("  {:<20} {}\n", m.name, m.about));
    }
    out.push_str("\nregion (mixed-entropy, bounds, mc-validate): past-past, residual-residual, past-residual, residual-past\n");
    out
}

/// One output row.
#[derive(Clone, Debug)]
pub struct Record {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    /// The conditioning event has probability at most 1e-12.
    pub null_region: bool,
    pub extras: Vec<(&'static str, Value)>,
}

impl Record {
    fn ok(a: f64, b: f64, m: MeasureResult) -> Self {
        Self { a, b, value: m.value, error: m.numerical_error, converged: m.converged, null_region: false, extras: Vec::new() }
    }

    fn failed(a: f64, b: f64, e: Error) -> Self {
        match e {
            Error::ZeroRegionProbability(_) => {
                Self { a, b, value: f64::NAN, error: f64::NAN, converged: false, null_region: true, extras: Vec::new() }
            }
            Error::NonConvergence { value, error_estimate } => {
                Self { a, b, value, error: error_estimate, converged: false, null_region: false, extras: Vec::new() }
            }
            other => Self {
                a,
                b,
                value: f64::NAN,
                error: f64::NAN,
                converged: false,
                null_region: false,
                extras: vec![("message", json!(other.to_string()))],
            },
        }
    }

    fn with(mut self, key: &'static str, v: Value) -> Self {
        self.extras.push((key, v));
        self
    }

    pub fn message(&self) -> Option<&str> {
        self.extras.iter().find(|(k, _)| *k == "message").and_then(|(_, v)| v.as_str())
    }
}

fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

fn direction_name(d: BoundDirection) -> &'static str {
    match d {
        BoundDirection::Upper => "upper",
        BoundDirection::Lower => "lower",
        BoundDirection::Tight => "tight",
        BoundDirection::Inapplicable => "inapplicable",
    }
}

/// Evaluates the measure at grid point number `index`, `(a, b)`.
pub fn evaluate(run: &Resolved, index: usize, a: f64, b: f64) -> Record {
    let spec = &run.spec;
    let model = match &run.model {
        Built::OrderStats(osm) => {
            let r = match run.route {
                Route::Direct => os_mi_direct_quantiles(osm, a, b, spec),
                _ => os_mi_closed_form(a, b, osm.n())
                    .map(|v| MeasureResult { numerical_error: CLOSED_FORM_ABS_ERROR, ..MeasureResult::exact(v) }),
            };
            return r.map(|m| Record::ok(a, b, m)).unwrap_or_else(|e| Record::failed(a, b, e));
        }
        Built::Bivariate(bm) => bm,
    };
    let m = model.model.as_ref();
    let attempt = || -> Result<Record, Error> {
        match run.measure {
            Measure::PastMi => Ok(Record::ok(a, b, region_mi(m, &ConditioningRegion::past(m, a, b)?, spec)?)),
            Measure::ResidualMi => match (&model.tte, run.route) {
                (Some(tte), Route::Tte) => Ok(Record::ok(a, b, residual_mi_tte(tte, a, b, spec)?)),
                _ => Ok(Record::ok(a, b, region_mi(m, &ConditioningRegion::residual(m, a, b)?, spec)?)),
            },
            Measure::MixedEntropy => {
                let region = ConditioningRegion::new(m, run.region, a, b)?;
                let h = joint_entropy(m, &region, spec)?;
                let hx = marginal_entropy(m, &region, Axis::X, spec)?;
                let hy = marginal_entropy(m, &region, Axis::Y, spec)?;
                let mut rec = Record::ok(a, b, h);
                rec.converged &= hx.converged && hy.converged;
                Ok(rec.with("region", json!(run.region.as_str())).with("h_x", num(hx.value)).with("h_y", num(hy.value)))
            }
            Measure::CopulaPastMi | Measure::CopulaResidualMi => {
                let c = model.copula.clone().expect("checked when the config was resolved");
                let r = if run.measure == Measure::CopulaPastMi {
                    past_mi_copula(c.as_ref(), a, b, spec)?
                } else {
                    residual_mi_survival_copula(c, a, b, spec)?
                };
                Ok(Record::ok(a, b, r))
            }
            Measure::Bounds => {
                let region = ConditioningRegion::new(m, run.region, a, b)?;
                let report = region_mi_bound(m, &region)?;
                let mi = region_mi(m, &region, spec)?;
                let holds = match report.direction {
                    BoundDirection::Upper => mi.value <= report.bound_value + mi.numerical_error,
                    BoundDirection::Lower => mi.value >= report.bound_value - mi.numerical_error,
                    BoundDirection::Tight => (mi.value - report.bound_value).abs() <= mi.numerical_error.max(1e-8),
                    BoundDirection::Inapplicable => true,
                };
                let rec =
                    Record { a, b, value: report.bound_value, error: 0.0, converged: mi.converged, null_region: false, extras: Vec::new() };
                Ok(rec
                    .with("region", json!(run.region.as_str()))
                    .with("direction", json!(direction_name(report.direction)))
                    .with("corner_ratio", num(report.corner_ratio))
                    .with("mi", num(mi.value))
                    .with("mi_error", num(mi.numerical_error))
                    .with("holds", json!(holds)))
            }
            Measure::McValidate => {
                let region = ConditioningRegion::new(m, run.region, a, b)?;
                let quad = region_mi(m, &region, spec)?;
                let mc = mc_mutual_information(m, &region, run.samples, run.seed.wrapping_add(index as u64))?;
                let diff = mc.mean - quad.value;
                let agree = diff.abs() <= 3.0 * (mc.std_error + quad.numerical_error);
                let rec = Record {
                    a,
                    b,
                    value: mc.mean,
                    error: mc.std_error,
                    converged: quad.converged && agree,
                    null_region: false,
                    extras: Vec::new(),
                };
                Ok(rec
                    .with("region", json!(run.region.as_str()))
                    .with("quadrature", num(quad.value))
                    .with("quadrature_error", num(quad.numerical_error))
                    .with("difference", num(diff))
                    .with("samples", json!(mc.n_samples))
                    .with("acceptance_rate", num(mc.acceptance_rate)))
            }
            Measure::DecompositionCheck => {
                let d = verify_decomposition(m, a, b, spec)?;
                let rec = Record::ok(
                    a,
                    b,
                    MeasureResult { value: d.residual, numerical_error: d.numerical_error, evaluations: 0, converged: true },
                );
                Ok(rec.with("joint_entropy", num(d.joint_entropy)).with("probabilities", json!(d.probabilities.map(num))))
            }
            Measure::OsMi => unreachable!("os-mi is checked to carry an os model"),
        }
    };
    attempt().unwrap_or_else(|e| Record::failed(a, b, e))
}
