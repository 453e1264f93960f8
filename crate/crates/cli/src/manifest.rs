//! Run records written next to every output.

use std::fs;
use std::path::{Path, PathBuf};

use convex_trig_core::Tolerances;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::io::BodySpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceRecord {
    pub geo: f64,
    pub corner: f64,
    pub ode_rel: f64,
    pub ode_abs: f64,
    pub event_time: f64,
    pub q_switch: f64,
    pub radial_samples: usize,
}

impl From<&Tolerances> for ToleranceRecord {
    fn from(t: &Tolerances) -> Self {
        Self {
            geo: t.geo,
            corner: t.corner,
            ode_rel: t.ode_rel,
            ode_abs: t.ode_abs,
            event_time: t.event_time,
            q_switch: t.q_switch,
            radial_samples: t.radial_samples,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Arguments after the program name; `replay` feeds them back in.
    pub args: Vec<String>,
    pub body: Option<BodySpec>,
    pub parameters: serde_json::Value,
    pub tolerances: ToleranceRecord,
    pub seed: u64,
    pub outputs: Vec<PathBuf>,
    pub duration_seconds: f64,
}

impl RunManifest {
    /// `<dir>/<first output name>.manifest.json` with `--manifest-dir`,
    /// otherwise next to the first output. `None` when there is nowhere to put it.
    pub fn location(&self, dir: Option<&Path>) -> Option<PathBuf> {
        let first = self.outputs.first();
        let name = match first.and_then(|p| p.file_name()) {
            Some(n) => format!("{}.manifest.json", n.to_string_lossy()),
            None => format!("{}.manifest.json", self.command),
        };
        match (dir, first) {
            (Some(d), _) => Some(d.join(name)),
            (None, Some(p)) => Some(p.with_file_name(name)),
            (None, None) => None,
        }
    }

    pub fn write(&self, dir: Option<&Path>) -> Result<Option<PathBuf>> {
        let Some(path) = self.location(dir) else {
            return Ok(None);
        };
        if let Some(d) = dir {
            fs::create_dir_all(d).map_err(|e| CliError::io(d, e))?;
        }
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
        Ok(Some(path))
    }
}
