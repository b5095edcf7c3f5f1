//! Result emission: a fixed-column CSV for reading and diffing, and a JSON
//! document carrying full-precision values, solver metadata and any sampled
//! curves.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use nlvc_core::harness::{ComparisonResult, CurveSample, GridRule, ResultSet};
use nlvc_core::metrics::{format_error, format_rate, ConvergenceRecord};
use nlvc_core::Strategy;

pub const CSV_HEADER: &str = "case,strategy,h,eps,eE,rateE,e0,rate0";

/// Dyadic values print in the power-of-two notation the study grids use.
pub fn format_grid_value(x: f64) -> String {
    if x > 0.0 {
        let l = x.log2();
        let r = l.round();
        let back = 2f64.powi(r as i32);
        if (back - x).abs() <= 1e-12 * x {
            return if r == 0.0 {
                "1".to_string()
            } else {
                format!("2^{}", r as i64)
            };
        }
    }
    format!("{x:?}")
}

pub fn csv_row(case: &str, strategy: Strategy, rec: &ConvergenceRecord) -> String {
    format!(
        "{case},{strategy},{h},{eps},{ee},{re},{e0},{r0}",
        strategy = strategy.name(),
        h = format_grid_value(rec.h),
        eps = format_grid_value(rec.epsilon),
        ee = format_error(rec.e_energy),
        re = format_rate(rec.rate_energy),
        e0 = format_error(rec.e_l2),
        r0 = format_rate(rec.rate_l2),
    )
}

pub fn result_sets_csv(sets: &[ResultSet]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for set in sets {
        for rec in &set.records {
            out.push_str(&csv_row(set.case_name, set.strategy, rec));
            out.push('\n');
        }
    }
    out
}

pub fn comparison_csv(cmp: &ComparisonResult) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    out.push_str(&csv_row(cmp.case_name, Strategy::Neumann, &cmp.neumann));
    out.push('\n');
    out.push_str(&csv_row(cmp.case_name, Strategy::Dirichlet, &cmp.dirichlet));
    out.push('\n');
    out
}

#[derive(Serialize)]
pub struct JsonRecord {
    pub h: f64,
    pub epsilon: f64,
    pub e_energy: f64,
    pub rate_energy: Option<f64>,
    pub e_l2: f64,
    pub rate_l2: Option<f64>,
}

impl From<&ConvergenceRecord> for JsonRecord {
    fn from(r: &ConvergenceRecord) -> Self {
        JsonRecord {
            h: r.h,
            epsilon: r.epsilon,
            e_energy: r.e_energy,
            rate_energy: r.rate_energy,
            e_l2: r.e_l2,
            rate_l2: r.rate_l2,
        }
    }
}

#[derive(Serialize)]
pub struct JsonSweep {
    pub case: String,
    pub strategy: String,
    pub grid_rule: String,
    pub records: Vec<JsonRecord>,
}

#[derive(Serialize)]
pub struct JsonCurvePoint {
    pub x: f64,
    pub neumann: f64,
    pub dirichlet: f64,
    pub local: f64,
}

#[derive(Serialize)]
pub struct JsonMetadata {
    pub tool: String,
    pub version: String,
    /// Scale convention of the diffusion/interaction operator pair.
    pub operator_convention: String,
    pub quad_points: usize,
    pub threads: usize,
}

#[derive(Serialize)]
pub struct JsonDocument {
    pub command: String,
    pub metadata: JsonMetadata,
    pub results: Vec<JsonSweep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curves: Option<Vec<JsonCurvePoint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layer_gap_neumann: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layer_gap_dirichlet: Option<f64>,
}

pub fn metadata(quad_points: usize, threads: usize) -> JsonMetadata {
    JsonMetadata {
        tool: "nlvc".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        operator_convention: "factor-free: L u = int (u(y)-u(x)) gamma dy".to_string(),
        quad_points,
        threads,
    }
}

pub fn sweep_json(set: &ResultSet) -> JsonSweep {
    JsonSweep {
        case: set.case_name.to_string(),
        strategy: set.strategy.name().to_string(),
        grid_rule: grid_rule_name(&set.grid),
        records: set.records.iter().map(JsonRecord::from).collect(),
    }
}

fn grid_rule_name(rule: &GridRule) -> String {
    match rule {
        GridRule::FixedH(h) => format!("fixed-h {}", format_grid_value(*h)),
        GridRule::Quadratic => "quadratic".to_string(),
        GridRule::Linear => "linear".to_string(),
    }
}

pub fn curves_json(curves: &[CurveSample]) -> Vec<JsonCurvePoint> {
    curves
        .iter()
        .map(|c| JsonCurvePoint {
            x: c.x,
            neumann: c.neumann,
            dirichlet: c.dirichlet,
            local: c.local,
        })
        .collect()
}

/// Writes `<stem>.csv` / `<stem>.json` under `dir` as requested.
pub fn write_files(
    dir: &Path,
    stem: &str,
    csv: &str,
    doc: &JsonDocument,
    formats: &[String],
) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    if formats.iter().any(|f| f == "csv") {
        let mut f = fs::File::create(dir.join(format!("{stem}.csv")))?;
        f.write_all(csv.as_bytes())?;
    }
    if formats.iter().any(|f| f == "json") {
        let text = serde_json::to_string_pretty(doc).expect("serializable");
        let mut f = fs::File::create(dir.join(format!("{stem}.json")))?;
        f.write_all(text.as_bytes())?;
        f.write_all(b"\n")?;
    }
    Ok(())
}

/// Plain-text dump of an assembled system for cross-checking: the upper
/// triangle of the matrix as `i j value` rows and the load as `i value` rows,
/// full precision.
pub fn write_system(
    dir: &Path,
    stem: &str,
    matrix: &nlvc_core::band::SymBandMatrix,
    rhs: &[f64],
) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut m = fs::File::create(dir.join(format!("{stem}-matrix.txt")))?;
    for (i, j, v) in matrix.triplets() {
        if v != 0.0 {
            writeln!(m, "{i} {j} {v:?}")?;
        }
    }
    let mut r = fs::File::create(dir.join(format!("{stem}-rhs.txt")))?;
    for (i, v) in rhs.iter().enumerate() {
        writeln!(r, "{i} {v:?}")?;
    }
    Ok(())
}
