//! Report documents, sweep specifications and their JSON/CSV encodings.
//!
//! Floats are written with 17 significant digits so every value round-trips;
//! records are sorted, so identical inputs give byte-identical files.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Map, Number, Value};

use crate::params::RawParams;
use crate::report::{ResidualReport, Verdict};
use crate::suites::{run_suite, Point, Record, Suite};

pub const SCHEMA_VERSION: &str = "1.0";
pub const DEFAULT_POINT_CAP: usize = 100_000;
pub const AXIS_NAMES: [&str; 9] = ["p", "q", "alpha", "gamma", "l", "nu0", "h", "j", "dim"];

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("invalid sweep spec: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unknown axis {0:?}")]
    UnknownAxis(String),
    #[error("axis {0:?} has no values")]
    EmptyAxis(String),
    #[error("axis {name:?} value {value} is not a positive integer dimension")]
    BadDim { name: String, value: f64 },
    #[error("sweep has {size} jobs, above the cap of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("sweep lists no suites")]
    NoSuites,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

/// Fixed coordinates; anything omitted falls back to the point defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixed {
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub l: Option<f64>,
    pub nu0: Option<f64>,
    pub h: Option<f64>,
    pub j: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub fixed: Fixed,
    pub suites: Vec<Suite>,
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_dims() -> Vec<usize> {
    vec![8]
}

fn default_tol() -> f64 {
    1e-10
}

fn set_axis(point: &mut Point, name: &str, value: f64) {
    match name {
        "p" => point.params.p = value,
        "q" => point.params.q = value,
        "alpha" => point.params.alpha = value,
        "gamma" => point.params.gamma = value,
        "l" => point.params.l = value,
        "nu0" => point.nu0 = value,
        "h" => point.h = value,
        "j" => point.j = value,
        "dim" => point.dim = value as usize,
        _ => unreachable!("axis names are validated"),
    }
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let spec: SweepSpec = serde_json::from_str(text)?;
        spec.validate(DEFAULT_POINT_CAP)?;
        Ok(spec)
    }

    pub fn validate(&self, cap: usize) -> Result<(), SpecError> {
        if self.suites.is_empty() {
            return Err(SpecError::NoSuites);
        }
        for axis in &self.axes {
            if !AXIS_NAMES.contains(&axis.name.as_str()) {
                return Err(SpecError::UnknownAxis(axis.name.clone()));
            }
            if axis.values.is_empty() {
                return Err(SpecError::EmptyAxis(axis.name.clone()));
            }
            if axis.name == "dim" {
                if let Some(&value) = axis.values.iter().find(|v| !(v.fract() == 0.0 && **v >= 1.0)) {
                    return Err(SpecError::BadDim { name: axis.name.clone(), value });
                }
            }
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(SpecError::BadDim { name: "dims".into(), value: 0.0 });
        }
        let size = self.job_count();
        if size > cap {
            return Err(SpecError::TooLarge { size, cap });
        }
        Ok(())
    }

    fn has_dim_axis(&self) -> bool {
        self.axes.iter().any(|a| a.name == "dim")
    }

    /// Grid points times suites (and times `dims` unless a `dim` axis is given).
    pub fn job_count(&self) -> usize {
        let grid = self.axes.iter().fold(1usize, |acc, a| acc.saturating_mul(a.values.len()));
        let dims = if self.has_dim_axis() { 1 } else { self.dims.len() };
        grid.saturating_mul(dims).saturating_mul(self.suites.len())
    }

    fn base_point(&self) -> Point {
        let d = Point::default();
        let f = &self.fixed;
        Point {
            params: RawParams::new(
                f.p.unwrap_or(d.params.p),
                f.q.unwrap_or(d.params.q),
                f.alpha.unwrap_or(d.params.alpha),
                f.gamma.unwrap_or(d.params.gamma),
                f.l.unwrap_or(d.params.l),
            ),
            nu0: f.nu0.unwrap_or(d.nu0),
            h: f.h.unwrap_or(d.h),
            j: f.j.unwrap_or(d.j),
            dim: d.dim,
        }
    }

    /// Every point of the Cartesian product, including the dimension.
    pub fn points(&self) -> Vec<Point> {
        let mut points = vec![self.base_point()];
        for axis in &self.axes {
            points = points
                .into_iter()
                .flat_map(|pt| {
                    axis.values.iter().map(move |&v| {
                        let mut next = pt;
                        set_axis(&mut next, &axis.name, v);
                        next
                    })
                })
                .collect();
        }
        if !self.has_dim_axis() {
            points = points
                .into_iter()
                .flat_map(|pt| self.dims.iter().map(move |&dim| Point { dim, ..pt }))
                .collect();
        }
        points
    }

    /// Run every (suite, point) job in parallel; records come back sorted.
    pub fn run(&self) -> Vec<Record> {
        let jobs: Vec<(Suite, Point)> =
            self.points().into_iter().flat_map(|pt| self.suites.iter().map(move |&s| (s, pt))).collect();
        let mut records: Vec<Record> = jobs.par_iter().map(|(suite, pt)| run_suite(*suite, pt, self.tol)).collect();
        sort_records(&mut records);
        records
    }
}

pub fn sort_records(records: &mut [Record]) {
    records.sort_by(|a, b| a.cmp_key(b));
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub vacuous: usize,
    pub documented: usize,
    pub rejected: usize,
}

impl Summary {
    pub fn of(records: &[Record]) -> Self {
        let mut s = Summary { total: records.len(), ..Summary::default() };
        for r in records {
            match r.verdict {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::Vacuous => s.vacuous += 1,
                Verdict::Documented => s.documented += 1,
                Verdict::Rejected(_) => s.rejected += 1,
            }
        }
        s
    }

    /// Exit status: 1 when any gated check failed, else 0.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.fail > 0)
    }
}

/// A complete report: metadata, input echo, sorted records and a summary.
#[derive(Debug, Clone)]
pub struct ReportDocument {
    pub tool_version: String,
    /// Seconds since the Unix epoch; `None` for reproducible output.
    pub timestamp: Option<u64>,
    pub input: Value,
    pub records: Vec<Record>,
}

impl ReportDocument {
    pub fn new(input: Value, mut records: Vec<Record>, timestamp: bool) -> Self {
        sort_records(&mut records);
        let timestamp = timestamp.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        ReportDocument { tool_version: env!("CARGO_PKG_VERSION").to_string(), timestamp, input, records }
    }

    pub fn summary(&self) -> Summary {
        Summary::of(&self.records)
    }

    pub fn to_value(&self) -> Value {
        let s = self.summary();
        json!({
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": "qdeform", "version": self.tool_version},
            "timestamp": self.timestamp,
            "input": self.input,
            "records": self.records.iter().map(record_value).collect::<Vec<_>>(),
            "summary": {
                "total": s.total,
                "pass": s.pass,
                "fail": s.fail,
                "vacuous": s.vacuous,
                "documented_discrepancy": s.documented,
                "rejected": s.rejected,
            },
        })
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_value()).expect("report values serialize");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(["suite", "p", "q", "alpha", "gamma", "l", "nu0", "dim", "residual", "verdict", "note"])
            .expect("in-memory csv");
        for r in &self.records {
            let p = &r.point.params;
            writer
                .write_record([
                    r.suite.name().to_string(),
                    fmt_float(p.p),
                    fmt_float(p.q),
                    fmt_float(p.alpha),
                    fmt_float(p.gamma),
                    fmt_float(p.l),
                    fmt_float(r.point.nu0),
                    r.point.dim.to_string(),
                    r.residual.map(fmt_float).unwrap_or_default(),
                    r.verdict.label(),
                    r.note.clone(),
                ])
                .expect("in-memory csv");
        }
        String::from_utf8(writer.into_inner().expect("in-memory csv")).expect("utf-8 csv")
    }
}

/// 17 significant digits in scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON number with 17 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    match fmt_float(x).parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::Null,
    }
}

fn opt_num(x: Option<f64>) -> Value {
    x.map(num).unwrap_or(Value::Null)
}

pub fn params_value(p: &RawParams) -> Value {
    let mut map = Map::new();
    map.insert("p".into(), num(p.p));
    map.insert("q".into(), num(p.q));
    map.insert("alpha".into(), num(p.alpha));
    map.insert("gamma".into(), num(p.gamma));
    map.insert("l".into(), num(p.l));
    Value::Object(map)
}

pub fn point_value(pt: &Point) -> Value {
    json!({
        "params": params_value(&pt.params),
        "nu0": num(pt.nu0),
        "h": num(pt.h),
        "j": num(pt.j),
        "dim": pt.dim,
    })
}

fn check_value(r: &ResidualReport) -> Value {
    json!({
        "relation": r.relation,
        "residual": num(r.residual),
        "tolerance": num(r.tolerance),
        "verdict": r.verdict.label(),
        "note": r.note,
    })
}

fn record_value(r: &Record) -> Value {
    json!({
        "suite": r.suite.name(),
        "params": params_value(&r.point.params),
        "nu0": num(r.point.nu0),
        "h": num(r.point.h),
        "j": num(r.point.j),
        "dim": r.point.dim,
        "residual": opt_num(r.residual),
        "tolerance": opt_num(r.tolerance),
        "verdict": r.verdict.label(),
        "note": r.note,
        "checks": r.checks.iter().map(check_value).collect::<Vec<_>>(),
    })
}

/// Write `contents` next to `path` and rename into place, so readers never
/// see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut file = std::fs::File::create(&tmp)?;
        file.write_all(contents)?;
        file.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> SweepSpec {
        SweepSpec::from_json(text).unwrap()
    }

    #[test]
    fn grid_sizes() {
        let s = spec(
            r#"{"axes":[{"name":"p","values":[0.6,0.7,0.8,0.9,1.1]},{"name":"q","values":[0.6,0.7,0.8,0.9,1.2]}],
                "fixed":{"alpha":1,"gamma":1,"l":1},"suites":["gchj","js-su2"],"dims":[4],"tol":1e-10}"#,
        );
        assert_eq!(s.job_count(), 50);
        let records = s.run();
        assert_eq!(records.len(), 50);
        assert!(records.iter().all(|r| r.verdict == Verdict::Pass), "{:?}", Summary::of(&records));

        let single = spec(r#"{"suites":["gchj"]}"#);
        assert_eq!(single.points().len(), 1);
    }

    #[test]
    fn spec_errors() {
        assert!(matches!(SweepSpec::from_json(r#"{"suites":[]}"#), Err(SpecError::NoSuites)));
        assert!(matches!(
            SweepSpec::from_json(r#"{"axes":[{"name":"x","values":[1]}],"suites":["gchj"]}"#),
            Err(SpecError::UnknownAxis(_))
        ));
        assert!(matches!(SweepSpec::from_json(r#"{"suites":["bogus"]}"#), Err(SpecError::Parse(_))));
        let big = r#"{"axes":[{"name":"p","values":[RANGE]},{"name":"q","values":[RANGE]}],"suites":["params"]}"#
            .replace("RANGE", &(1..=400).map(|i| i.to_string()).collect::<Vec<_>>().join(","));
        assert!(matches!(SweepSpec::from_json(&big), Err(SpecError::TooLarge { .. })));
    }

    #[test]
    fn deterministic_json() {
        let s = spec(r#"{"axes":[{"name":"p","values":[0.9,0.5]}],"suites":["ghy","gchj"],"dims":[3,2]}"#);
        let a = ReportDocument::new(json!({}), s.run(), false).to_json();
        let b = ReportDocument::new(json!({}), s.run(), false).to_json();
        assert_eq!(a, b);
        let doc: Value = serde_json::from_str(&a).unwrap();
        let first = &doc["records"][0];
        assert_eq!(first["suite"], "gchj");
        assert_eq!(first["params"]["p"].to_string(), "5.0000000000000000e-1");
    }

    #[test]
    fn rejected_points_are_reported() {
        let s = spec(r#"{"axes":[{"name":"q","values":[1.1,1.3]}],"fixed":{"p":0.8},"suites":["ward"]}"#);
        let records = s.run();
        assert_eq!(records[0].verdict, Verdict::Pass);
        assert_eq!(records[1].verdict.label(), "rejected: BaseNotContractive");
        assert_eq!(Summary::of(&records).exit_code(), 0);
    }

    #[test]
    fn csv_columns() {
        let s = spec(r#"{"suites":["params"],"dims":[4]}"#);
        let doc = ReportDocument::new(json!({}), s.run(), false);
        let text = doc.to_csv();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "suite,p,q,alpha,gamma,l,nu0,dim,residual,verdict,note");
        assert!(lines.next().unwrap().starts_with("params,1.0000000000000000e0,"));
    }

    #[test]
    fn atomic_write() {
        let dir = std::env::temp_dir().join(format!("qdeform-doc-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.json");
        write_atomic(&path, b"{}").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "{}");
        assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
