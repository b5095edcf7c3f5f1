//! Config-file schema for custom runs.
//!
//! A single TOML document with a strict schema (unknown keys are rejected).
//! Every scalar accepts plain decimal or power-of-two notation ("2^-12"),
//! since the study parameters are all powers of two. Polynomials appear as
//! coefficient arrays, constant term first; the flux datum is a polynomial in
//! the horizon.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use nlvc_core::harness::GridMode;
use nlvc_core::poly::{Polynomial, MAX_DEGREE};
use nlvc_core::quad::QuadratureSpec;
use nlvc_core::Strategy;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Scalar accepting `1.25`, `3`, or `"2^-12"`.
#[derive(Debug, Clone, Copy)]
pub struct Real(pub f64);

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Real;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a power-of-two string like \"2^-12\"")
            }
            fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<Real, E> {
                Ok(Real(v))
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_str<E: serde::de::Error>(self, s: &str) -> Result<Real, E> {
                parse_pow2(s).map(Real).ok_or_else(|| {
                    E::custom(format!(
                        "expected a number or \"2^<integer>\", got {s:?}"
                    ))
                })
            }
        }
        de.deserialize_any(V)
    }
}

fn parse_pow2(s: &str) -> Option<f64> {
    let rest = s.trim().strip_prefix("2^")?;
    let exp: i32 = rest.parse().ok()?;
    Some(2f64.powi(exp))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub domain: DomainSection,
    pub kernel: KernelSection,
    pub grid: GridSection,
    pub problem: ProblemSection,
    #[serde(default)]
    pub quad: QuadSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub a: Real,
    pub b: Real,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSection {
    pub family: String,
    pub epsilon: Option<Real>,
    pub epsilon_list: Option<Vec<Real>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub mode: String,
    pub h: Option<Real>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    /// Source polynomial in x, constant term first.
    pub source: Vec<Real>,
    /// Flux datum as a polynomial in the horizon, constant term first.
    pub g_l: Vec<Real>,
    /// Volumetric Dirichlet datum, a polynomial in x.
    pub v_n: Vec<Real>,
    pub strategy: String,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct QuadSection {
    pub points: Option<u64>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<String>,
    pub formats: Option<Vec<String>>,
}

/// Everything a custom run needs, validated.
#[derive(Debug, Clone)]
pub struct SolvePlan {
    pub a: f64,
    pub b: f64,
    pub epsilons: Vec<f64>,
    pub mode: GridMode,
    pub fixed_h: Option<f64>,
    pub source: Polynomial,
    pub flux_of_eps: Polynomial,
    pub volume_data: Polynomial,
    pub strategies: Vec<Strategy>,
    pub quad: QuadratureSpec,
    pub out_path: Option<String>,
    pub formats: Vec<String>,
}

impl SolvePlan {
    pub fn grid_spacing(&self, eps: f64) -> f64 {
        match self.mode {
            GridMode::FixedH => self.fixed_h.expect("validated"),
            GridMode::Quadratic => eps * eps,
            GridMode::Linear => eps / 4.0,
        }
    }
}

pub fn load(path: &Path) -> Result<SolvePlan, ConfigError> {
    let text = fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let cfg: RunConfig =
        toml::from_str(&text).map_err(|e| ConfigError(format!("config parse error: {e}")))?;
    validate(cfg)
}

fn poly_from(values: &[Real], what: &str) -> Result<Polynomial, ConfigError> {
    if values.is_empty() {
        return Err(ConfigError(format!("{what}: coefficient array is empty")));
    }
    if values.len() > MAX_DEGREE + 1 {
        return Err(ConfigError(format!(
            "{what}: degree {} exceeds the cap {MAX_DEGREE}",
            values.len() - 1
        )));
    }
    let coeffs: Vec<f64> = values.iter().map(|r| r.0).collect();
    Ok(Polynomial::new(&coeffs))
}

fn validate(cfg: RunConfig) -> Result<SolvePlan, ConfigError> {
    let a = cfg.domain.a.0;
    let b = cfg.domain.b.0;
    if !(b > a) {
        return Err(ConfigError(format!("domain: need b > a, got a={a}, b={b}")));
    }

    match cfg.kernel.family.as_str() {
        "constant-integrable" | "constant" => {}
        other => {
            return Err(ConfigError(format!(
                "kernel.family: unknown family {other:?}; supported: \"constant-integrable\""
            )))
        }
    }
    let epsilons: Vec<f64> = match (&cfg.kernel.epsilon, &cfg.kernel.epsilon_list) {
        (Some(e), None) => vec![e.0],
        (None, Some(list)) if !list.is_empty() => list.iter().map(|r| r.0).collect(),
        (None, Some(_)) => {
            return Err(ConfigError("kernel.epsilon_list is empty".into()))
        }
        (Some(_), Some(_)) => {
            return Err(ConfigError(
                "kernel: give either epsilon or epsilon_list, not both".into(),
            ))
        }
        (None, None) => {
            return Err(ConfigError(
                "kernel: one of epsilon or epsilon_list is required".into(),
            ))
        }
    };
    for &eps in &epsilons {
        if !(eps > 0.0 && eps < (b - a) / 2.0) {
            return Err(ConfigError(format!(
                "kernel.epsilon = {eps}: need 0 < epsilon < (b-a)/2 = {}",
                (b - a) / 2.0
            )));
        }
    }

    let mode = match cfg.grid.mode.as_str() {
        "fixed-h" => GridMode::FixedH,
        "quadratic" => GridMode::Quadratic,
        "linear" => GridMode::Linear,
        other => {
            return Err(ConfigError(format!(
                "grid.mode: unknown mode {other:?}; supported: fixed-h, quadratic, linear"
            )))
        }
    };
    let fixed_h = cfg.grid.h.map(|r| r.0);
    match mode {
        GridMode::FixedH => {
            let h = fixed_h.ok_or_else(|| ConfigError("grid: mode fixed-h needs h".into()))?;
            if !(h > 0.0) {
                return Err(ConfigError(format!("grid.h = {h}: must be positive")));
            }
        }
        _ => {
            if fixed_h.is_some() {
                return Err(ConfigError(
                    "grid.h is only meaningful with mode = \"fixed-h\"".into(),
                ));
            }
        }
    }

    let strategies = match cfg.problem.strategy.as_str() {
        "neumann" => vec![Strategy::Neumann],
        "dirichlet" => vec![Strategy::Dirichlet],
        "both" => vec![Strategy::Neumann, Strategy::Dirichlet],
        other => {
            return Err(ConfigError(format!(
                "problem.strategy: unknown strategy {other:?}; supported: neumann, dirichlet, both"
            )))
        }
    };

    let points = cfg.quad.points.unwrap_or(4) as usize;
    let quad = QuadratureSpec::new(points)
        .map_err(|e| ConfigError(format!("quad.points: {e}")))?;

    let formats = cfg
        .output
        .formats
        .unwrap_or_else(|| vec!["csv".into(), "json".into()]);
    for f in &formats {
        if f != "csv" && f != "json" {
            return Err(ConfigError(format!(
                "output.formats: unknown format {f:?}; supported: csv, json"
            )));
        }
    }

    Ok(SolvePlan {
        a,
        b,
        epsilons,
        mode,
        fixed_h,
        source: poly_from(&cfg.problem.source, "problem.source")?,
        flux_of_eps: poly_from(&cfg.problem.g_l, "problem.g_l")?,
        volume_data: poly_from(&cfg.problem.v_n, "problem.v_n")?,
        strategies,
        quad,
        out_path: cfg.output.path,
        formats,
    })
}
