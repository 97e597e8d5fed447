//! Run configuration: a JSON file plus command-line overrides.

use std::path::{Path, PathBuf};

use lifeinfo::quadrature::{QuadratureSpec, Transform};
use lifeinfo::region::RegionKind;
use serde::Deserialize;

use crate::catalog::{self, Built};
use crate::error::CliError;
use crate::expr::{self, Arg, Expr};
use crate::measure::{Measure, Route};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Option<ModelField>,
    pub measure: Option<String>,
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub quadrature: QuadratureOverrides,
    pub output: Option<OutputConfig>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub region: Option<String>,
    pub route: Option<String>,
}

/// Either an expression string or `{"family": ..., "params": {...}}`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ModelField {
    Expr(String),
    Object {
        family: String,
        #[serde(default)]
        params: serde_json::Map<String, serde_json::Value>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub s: Option<AxisField>,
    pub t: Option<AxisField>,
    pub p: Option<AxisField>,
    pub q: Option<AxisField>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum AxisField {
    Range { min: f64, max: f64, steps: usize },
    Values(Vec<f64>),
    Keyword(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureOverrides {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub transform: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!("unknown output format '{other}' (expected csv or json)"))),
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Default)]
pub struct Overrides {
    pub model: Option<String>,
    pub measure: Option<String>,
    pub grid: Option<String>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub region: Option<String>,
    pub route: Option<String>,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
}

pub struct Resolved {
    pub model_text: String,
    pub model: Built,
    pub measure: Measure,
    pub route: Route,
    pub region: RegionKind,
    pub points: Vec<(f64, f64)>,
    pub spec: QuadratureSpec,
    pub seed: u64,
    pub samples: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub warnings: Vec<String>,
}

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_SAMPLES: usize = 20_000;
/// Distance kept from 0 and 1 when quantile levels are clipped.
const LEVEL_MARGIN: f64 = 1e-6;

pub fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn json_to_arg(key: &str, v: &serde_json::Value) -> Result<Arg, CliError> {
    match v {
        serde_json::Value::Number(n) => Ok(Arg::Num(n.as_f64().unwrap_or(f64::NAN))),
        serde_json::Value::String(s) => Ok(Arg::Expr(expr::parse(s)?)),
        serde_json::Value::Object(o) => {
            let family = o
                .get("family")
                .and_then(|f| f.as_str())
                .ok_or_else(|| CliError::Config(format!("parameter '{key}': nested model needs a 'family' string")))?;
            let empty = serde_json::Map::new();
            let params = match o.get("params") {
                Some(serde_json::Value::Object(p)) => p,
                None => &empty,
                Some(_) => return Err(CliError::Config(format!("parameter '{key}': 'params' must be an object"))),
            };
            Ok(Arg::Expr(object_expr(family, params)?))
        }
        other => Err(CliError::Config(format!("parameter '{key}': unsupported value {other}"))),
    }
}

fn object_expr(family: &str, params: &serde_json::Map<String, serde_json::Value>) -> Result<Expr, CliError> {
    let args = params.iter().map(|(k, v)| Ok((Some(k.to_ascii_lowercase()), json_to_arg(k, v)?))).collect::<Result<_, CliError>>()?;
    Ok(Expr { name: family.to_ascii_lowercase(), args })
}

fn parse_transform(s: &str) -> Result<Transform, CliError> {
    match s.to_ascii_lowercase().replace('_', "-").as_str() {
        "none" => Ok(Transform::None),
        "rational-map" | "rational" => Ok(Transform::RationalMap),
        "log-map" | "log" => Ok(Transform::LogMap),
        other => Err(CliError::Config(format!("unknown transform '{other}' (expected none, rational-map or log-map)"))),
    }
}

/// `min:max:steps`, `[v1;v2;...]`, or a keyword.
fn parse_axis(text: &str) -> Result<AxisField, CliError> {
    let text = text.trim();
    if let Some(inner) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let values = inner
            .split(';')
            .map(|v| v.trim().parse::<f64>().map_err(|_| CliError::Config(format!("bad grid value '{v}'"))))
            .collect::<Result<_, _>>()?;
        return Ok(AxisField::Values(values));
    }
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [min, max, steps] => {
            let bad = || CliError::Config(format!("bad grid axis '{text}' (expected min:max:steps)"));
            Ok(AxisField::Range {
                min: min.trim().parse().map_err(|_| bad())?,
                max: max.trim().parse().map_err(|_| bad())?,
                steps: steps.trim().parse().map_err(|_| bad())?,
            })
        }
        [word] if word.chars().all(|c| c.is_ascii_alphabetic()) => Ok(AxisField::Keyword(word.to_ascii_lowercase())),
        _ => Err(CliError::Config(format!("bad grid axis '{text}' (expected min:max:steps)"))),
    }
}

/// The `--grid` flag: one axis (the second is `same`) or two separated by a comma.
pub fn parse_grid_flag(text: &str) -> Result<(AxisField, AxisField), CliError> {
    let mut parts = text.splitn(2, ',');
    let first = parse_axis(parts.next().unwrap_or(""))?;
    let second = match parts.next() {
        Some(p) => parse_axis(p)?,
        None => AxisField::Keyword("same".into()),
    };
    Ok((first, second))
}

fn axis_values(field: &AxisField, name: &str) -> Result<Vec<f64>, CliError> {
    match field {
        AxisField::Range { min, max, steps } => {
            if !(min.is_finite() && max.is_finite()) || min > max {
                return Err(CliError::Config(format!("grid axis {name}: need finite min <= max, got {min}..{max}")));
            }
            match steps {
                0 => Err(CliError::Config(format!("grid axis {name}: steps must be >= 1"))),
                1 => Ok(vec![*min]),
                &n => Ok((0..n).map(|i| min + (max - min) * i as f64 / (n - 1) as f64).collect()),
            }
        }
        AxisField::Values(v) => {
            if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
                return Err(CliError::Config(format!("grid axis {name}: values must be finite and non-empty")));
            }
            Ok(v.clone())
        }
        AxisField::Keyword(k) => Err(CliError::Config(format!("grid axis {name}: '{k}' is only allowed on the second axis"))),
    }
}

fn clip(values: &mut [f64], lo: f64, hi: f64, name: &str, warnings: &mut Vec<String>) {
    let (min, max) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if min < lo || max > hi {
        for v in values.iter_mut() {
            *v = v.clamp(lo, hi);
        }
        warnings.push(format!("grid axis {name} spans [{min}, {max}], clipped to the admissible range [{lo}, {hi}]"));
    }
}

fn build_points(
    first: &AxisField,
    second: &AxisField,
    names: (&str, &str),
    ranges: ((f64, f64), (f64, f64)),
    warnings: &mut Vec<String>,
) -> Result<Vec<(f64, f64)>, CliError> {
    let mut a = axis_values(first, names.0)?;
    clip(&mut a, ranges.0 .0, ranges.0 .1, names.0, warnings);
    let paired = |f: &dyn Fn(f64) -> f64| a.iter().map(|&x| (x, f(x))).collect::<Vec<_>>();
    let cross = |b: &[f64]| a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect::<Vec<_>>();
    let points = match second {
        AxisField::Keyword(k) => match k.as_str() {
            "same" => cross(&a),
            "diagonal" => paired(&|x| x),
            "complement" if names.1 == "q" => paired(&|x| 1.0 - x),
            other => return Err(CliError::Config(format!("grid axis {}: unknown keyword '{other}'", names.1))),
        },
        field => {
            let mut b = axis_values(field, names.1)?;
            clip(&mut b, ranges.1 .0, ranges.1 .1, names.1, warnings);
            cross(&b)
        }
    };
    if names.1 == "t" {
        let (lo, hi) = ranges.1;
        if points.iter().any(|&(_, y)| y < lo || y > hi) {
            warnings.push(format!("grid axis t leaves the admissible range [{lo}, {hi}], clipped"));
            return Ok(points.into_iter().map(|(x, y)| (x, y.clamp(lo, hi))).collect());
        }
    }
    Ok(points)
}

pub fn resolve(file: RunConfig, flags: Overrides) -> Result<Resolved, CliError> {
    let measure_name =
        flags.measure.or(file.measure).ok_or_else(|| CliError::Config("no measure given (use --measure or the 'measure' key)".into()))?;
    let measure = Measure::from_name(&measure_name)?;

    let model_expr = match (flags.model, file.model) {
        (Some(text), _) | (None, Some(ModelField::Expr(text))) => expr::parse(&text)?,
        (None, Some(ModelField::Object { family, params })) => object_expr(&family, &params)?,
        (None, None) => return Err(CliError::Config("no model given (use --model or the 'model' key)".into())),
    };
    let model = catalog::build(&model_expr)?;
    measure.check_model(&model)?;

    let route = Route::resolve(measure, flags.route.or(file.route).as_deref(), &model)?;
    let region = match flags.region.or(file.region) {
        Some(r) => {
            if !measure.uses_region() {
                return Err(CliError::Config(format!("measure {measure_name} does not take a region")));
            }
            r.parse::<RegionKind>()?
        }
        None => measure.default_region(),
    };

    let q = &file.quadrature;
    let mut spec = QuadratureSpec::default();
    if let Some(v) = q.rel_tol {
        spec.rel_tol = v;
    }
    if let Some(v) = q.abs_tol {
        spec.abs_tol = v;
    }
    if let Some(v) = q.max_subdivisions {
        spec.max_subdivisions = v;
    }
    spec.transform = match &q.transform {
        Some(t) => parse_transform(t)?,
        None => match &model {
            Built::Bivariate(b) if b.heavy_tailed => Transform::LogMap,
            _ => Transform::RationalMap,
        },
    };
    if let Some(tol) = flags.tol {
        spec.rel_tol = tol;
        spec.abs_tol = tol * 1e-2;
    }
    spec.validate()?;

    let mut warnings = Vec::new();
    let names = measure.axis_names();
    let (first, second) = match flags.grid {
        Some(g) => parse_grid_flag(&g)?,
        None => {
            let g = file.grid.ok_or_else(|| CliError::Config("no grid given (use --grid or the 'grid' key)".into()))?;
            let stray = if names.0 == "s" { g.p.is_some() || g.q.is_some() } else { g.s.is_some() || g.t.is_some() };
            let (a, b) = if names.0 == "s" { (g.s, g.t) } else { (g.p, g.q) };
            if stray {
                return Err(CliError::Config(format!(
                    "measure {measure_name} sweeps ({}, {}); other grid axes are not allowed",
                    names.0, names.1
                )));
            }
            let a = a.ok_or_else(|| CliError::Config(format!("grid axis {} missing", names.0)))?;
            (a, b.unwrap_or(AxisField::Keyword("same".into())))
        }
    };
    let ranges = match &model {
        Built::Bivariate(b) if names.0 == "s" => (b.model.support().x_bounds(), b.model.support().y_bounds()),
        _ => ((LEVEL_MARGIN, 1.0 - LEVEL_MARGIN), (LEVEL_MARGIN, 1.0 - LEVEL_MARGIN)),
    };
    let mut points = build_points(&first, &second, names, ranges, &mut warnings)?;
    if measure == Measure::OsMi {
        points.retain(|&(p, q)| p < q);
    }

    let out = file.output.unwrap_or_default();
    let output = flags.output.or(out.path);
    let format = match flags.format.or(out.format) {
        Some(f) => f.parse()?,
        None => match output.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            _ => Format::Csv,
        },
    };

    Ok(Resolved {
        model_text: model_expr.to_string(),
        model,
        measure,
        route,
        region,
        points,
        spec,
        seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        samples: flags.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES),
        output,
        format,
        warnings,
    })
}
