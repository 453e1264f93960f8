//! Body and spec files, value lists, and CSV output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use convex_trig_core::pendulum::Direction;
use convex_trig_core::{ConvexBody, SeparatrixPolicy, System, Tolerances, Vec2};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// On-disk body description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Polygon { vertices: Vec<[f64; 2]> },
    Ellipse { a: f64, b: f64 },
    /// Radii at `φ_j = 2πj/N`.
    Radial { samples: Vec<f64> },
}

impl From<&BodySpec> for ConvexBody {
    fn from(s: &BodySpec) -> Self {
        match s {
            BodySpec::Polygon { vertices } => ConvexBody::polygon(vertices.iter().copied()),
            BodySpec::Ellipse { a, b } => ConvexBody::ellipse(*a, *b),
            BodySpec::Radial { samples } => ConvexBody::radial(samples.clone()),
        }
    }
}

impl From<&ConvexBody> for BodySpec {
    fn from(b: &ConvexBody) -> Self {
        match b {
            ConvexBody::Polygon { vertices } => BodySpec::Polygon {
                vertices: vertices.iter().map(|v| [v.x, v.y]).collect(),
            },
            ConvexBody::Ellipse { a, b } => BodySpec::Ellipse { a: *a, b: *b },
            ConvexBody::Radial { samples } => BodySpec::Radial {
                samples: samples.clone(),
            },
        }
    }
}

/// Initial data of an extremal, as read from `--spec`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    /// Optional; must agree with the command line when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    #[serde(alias = "H")]
    pub h: f64,
    #[serde(default)]
    pub q: f64,
    #[serde(default)]
    pub phi0: f64,
    #[serde(default)]
    pub theta_polar0: f64,
    #[serde(default)]
    pub omega0: f64,
    #[serde(default)]
    pub x0: Vec<f64>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<T> {
    serde_json::from_str(text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    parse_json(&read(path)?, path)
}

/// Reads and validates a body file.
pub fn load_body(path: &Path, tol: &Tolerances) -> Result<(BodySpec, ConvexBody)> {
    let spec: BodySpec = read_json(path)?;
    let body = ConvexBody::from(&spec);
    let violations = body.validate_with(tol);
    if !violations.is_empty() {
        return Err(CliError::InvalidBody(violations));
    }
    Ok((spec, body))
}

/// Seventeen significant digits: enough to round-trip every `f64`. Negative
/// zero is written as zero.
pub fn num(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

/// `a,b,c`, a single value, or `start:stop:step` with `stop` excluded.
pub fn parse_values(s: &str) -> Result<Vec<f64>> {
    let bad = |what: &str| CliError::Usage(format!("bad value list {s:?}: {what}"));
    let number = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(t));
    if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(number).collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(bad("expected start:stop:step"));
        };
        if !(step > 0.0) || !start.is_finite() || !stop.is_finite() {
            return Err(bad("step must be positive"));
        }
        let count = ((stop - start) / step - 1e-9).ceil().max(0.0) as usize;
        Ok((0..count).map(|i| start + step * i as f64).collect())
    } else {
        s.split(',').filter(|t| !t.trim().is_empty()).map(number).collect()
    }
}

/// `stay`, `dwell:<time>`, `exit:increasing` or `exit:decreasing`.
pub fn parse_policy(s: &str) -> Result<SeparatrixPolicy> {
    let bad = || CliError::Usage(format!("unknown policy {s:?}"));
    let (head, arg) = s.split_once(':').unwrap_or((s, ""));
    match (head, arg) {
        ("stay", "") => Ok(SeparatrixPolicy::StayForever),
        ("dwell", t) => match t.parse::<f64>() {
            Ok(t) if t >= 0.0 => Ok(SeparatrixPolicy::Dwell(t)),
            _ => Err(bad()),
        },
        ("exit", "increasing" | "inc" | "+") => Ok(SeparatrixPolicy::ImmediateExit(Direction::Increasing)),
        ("exit", "decreasing" | "dec" | "-") => Ok(SeparatrixPolicy::ImmediateExit(Direction::Decreasing)),
        _ => Err(bad()),
    }
}

pub fn parse_system(s: &str) -> Result<System> {
    s.parse()
        .map_err(|_| CliError::Usage(format!("unknown system {s:?}; expected one of heisenberg, grushin, martinet, engel, cartan")))
}

/// A CSV table, written to a file or handed back for standard output.
pub struct Sink {
    pub path: Option<PathBuf>,
    writer: csv::Writer<Vec<u8>>,
}

impl Sink {
    pub fn new(path: Option<&Path>) -> Self {
        Self {
            path: path.map(Path::to_path_buf),
            writer: csv::WriterBuilder::new().flexible(false).from_writer(Vec::new()),
        }
    }

    pub fn header(&mut self, cols: &[&str]) -> Result<()> {
        Ok(self.writer.write_record(cols)?)
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        Ok(self.writer.write_record(fields)?)
    }

    /// Writes the file, or the table to `stdout` when there is no path.
    pub fn finish(self, stdout: &mut dyn Write) -> Result<Option<PathBuf>> {
        let bytes = self.writer.into_inner().map_err(|e| CliError::Write(e.into_error()))?;
        emit(self.path.as_deref(), &bytes, stdout)?;
        Ok(self.path)
    }
}

/// Writes `bytes` to `path`, or to `stdout` when there is no path.
pub fn emit(path: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::io(p, e)),
        None => Ok(stdout.write_all(bytes)?),
    }
}

pub fn vec_fields(v: Vec2) -> [String; 2] {
    [num(v.x), num(v.y)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ranges_exclude_stop() {
        assert_eq!(parse_values("0:8:1").unwrap(), (0..8).map(f64::from).collect::<Vec<_>>());
        assert_eq!(parse_values("0:1:0.25").unwrap().len(), 4);
        assert_eq!(parse_values("1, 2.5,-3").unwrap(), vec![1.0, 2.5, -3.0]);
        assert_eq!(parse_values("3.14").unwrap(), vec![3.14]);
        assert!(parse_values("0:1:0").is_err());
        assert!(parse_values("0:1").is_err());
        assert!(parse_values("x").is_err());
    }

    #[test]
    fn policies() {
        assert_eq!(parse_policy("stay").unwrap(), SeparatrixPolicy::StayForever);
        assert_eq!(parse_policy("dwell:1.5").unwrap(), SeparatrixPolicy::Dwell(1.5));
        assert_eq!(
            parse_policy("exit:dec").unwrap(),
            SeparatrixPolicy::ImmediateExit(Direction::Decreasing)
        );
        assert!(parse_policy("dwell:-1").is_err());
        assert!(parse_policy("wait").is_err());
    }

    #[test]
    fn body_json_forms() {
        let p: BodySpec = serde_json::from_str(r#"{"type":"polygon","vertices":[[1,-1],[1,1],[-1,1],[-1,-1]]}"#).unwrap();
        assert_eq!(ConvexBody::from(&p), ConvexBody::square(1.0));
        let e: BodySpec = serde_json::from_str(r#"{"type":"ellipse","a":1,"b":2}"#).unwrap();
        assert_eq!(e, BodySpec::Ellipse { a: 1.0, b: 2.0 });
        let r: BodySpec = serde_json::from_str(r#"{"type":"radial","samples":[1,1,1,1,1,1]}"#).unwrap();
        assert_eq!(BodySpec::from(&ConvexBody::from(&r)), r);
        assert!(serde_json::from_str::<BodySpec>(r#"{"type":"blob"}"#).is_err());
        assert!(serde_json::from_str::<BodySpec>(r#"{"type":"ellipse","a":1,"b":2,"c":3}"#).is_err());
    }

    #[test]
    fn spec_defaults() {
        let s: SpecFile = serde_json::from_str(r#"{"H": 2, "q": 1}"#).unwrap();
        assert_eq!((s.h, s.q, s.phi0, s.x0.len()), (2.0, 1.0, 0.0, 0));
    }

    #[test]
    fn number_format() {
        assert_eq!(num(1.0), "1.0000000000000000e0");
        assert_eq!(num(-0.1), "-1.0000000000000001e-1");
        assert_eq!(num(-0.0), num(0.0));
    }

    proptest! {
        #[test]
        fn numbers_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::POSITIVE | proptest::num::f64::NEGATIVE) {
            prop_assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
