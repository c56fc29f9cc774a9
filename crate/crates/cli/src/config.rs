//! JSON sweep description.
//!
//! ```json
//! {"target": "contrast_map",
//!  "grids": {"theta": [0.3, 1.0], "f_T": [0.1, 0.5]},
//!  "fixed": {"eta": 0.9, "N": 2},
//!  "output": {"path": "out.csv", "format": "csv"}}
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    #[serde(rename = "contrast_map")]
    ContrastMap,
    #[serde(rename = "gain_vs_M", alias = "gain_vs_m")]
    GainVsM,
    #[serde(rename = "snr")]
    Snr,
    #[serde(rename = "verify")]
    Verify,
}

impl Target {
    pub fn as_str(&self) -> &'static str {
        match self {
            Target::ContrastMap => "contrast_map",
            Target::GainVsM => "gain_vs_M",
            Target::Snr => "snr",
            Target::Verify => "verify",
        }
    }

    /// Every parameter the target reads, in sweep (row-major) order.
    pub fn parameters(&self) -> &'static [&'static str] {
        match self {
            Target::ContrastMap => &["theta", "f_T", "eta", "N"],
            Target::GainVsM => &["M", "k", "lambda"],
            Target::Snr => &["mode", "M", "k", "lambda", "delta", "theta", "eta", "N", "f_T"],
            Target::Verify => &["n", "theta", "eta", "N", "f_bar", "tolerance", "cutoff"],
        }
    }

    /// Parameters that must stay scalar.
    fn scalar_only(&self) -> &'static [&'static str] {
        match self {
            Target::Verify => &["tolerance", "cutoff"],
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub target: Target,
    #[serde(default)]
    pub grids: BTreeMap<String, Vec<GridValue>>,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: OutputSpec,
}

fn numbers(xs: &[f64]) -> Vec<GridValue> {
    xs.iter().copied().map(GridValue::Number).collect()
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

impl SweepConfig {
    /// Config with the built-in grids and scalars of `target`.
    pub fn defaults(target: Target) -> Self {
        let mut grids = BTreeMap::new();
        let mut fixed = BTreeMap::new();
        match target {
            Target::ContrastMap => {
                grids.insert("theta".into(), numbers(&linspace(0.05, 3.1, 50)));
                grids.insert("f_T".into(), numbers(&linspace(0.01, 2.0, 50)));
                fixed.insert("eta".into(), 1.0);
                fixed.insert("N".into(), 1.0);
            }
            Target::GainVsM => {
                grids.insert("M".into(), numbers(&linspace(4.0, 12.0, 9)));
                grids.insert("k".into(), numbers(&[0.0, 0.25, 0.5, 0.75, 1.0]));
                fixed.insert("lambda".into(), 1e-4);
            }
            Target::Snr => {
                grids.insert(
                    "mode".into(),
                    ["uncorrelated", "giant_spin", "partial", "nn_ising"]
                        .iter()
                        .map(|s| GridValue::Text(s.to_string()))
                        .collect(),
                );
                grids.insert("M".into(), numbers(&[4.0, 8.0, 12.0]));
                grids.insert("k".into(), numbers(&[0.5]));
                fixed.insert("lambda".into(), 0.0);
                fixed.insert("delta".into(), 0.1);
                fixed.insert("theta".into(), 0.5);
                fixed.insert("eta".into(), 0.9);
                fixed.insert("N".into(), 1.0);
                fixed.insert("f_T".into(), 0.1);
            }
            Target::Verify => {
                grids.insert("n".into(), numbers(&[0.0, 1.0]));
                grids.insert("theta".into(), numbers(&[0.1, 0.5, 1.0, 2.0, 3.0]));
                grids.insert("eta".into(), numbers(&[0.5, 0.9, 1.0]));
                grids.insert("N".into(), numbers(&[1.0, 2.0, 4.0]));
                grids.insert("f_bar".into(), numbers(&[0.0, 0.2, 1.0]));
                fixed.insert("tolerance".into(), 1e-8);
                fixed.insert("cutoff".into(), 0.0);
            }
        }
        Self {
            target,
            grids,
            fixed,
            output: OutputSpec::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Fills parameters absent from both `grids` and `fixed` with the target defaults.
    pub fn with_defaults(mut self) -> Self {
        let base = Self::defaults(self.target);
        for name in self.target.parameters() {
            if self.grids.contains_key(*name) || self.fixed.contains_key(*name) {
                continue;
            }
            if let Some(g) = base.grids.get(*name) {
                self.grids.insert(name.to_string(), g.clone());
            } else if let Some(v) = base.fixed.get(*name) {
                self.fixed.insert(name.to_string(), *v);
            }
        }
        self
    }

    /// Sets a scalar, replacing any grid of the same name.
    pub fn set_fixed(&mut self, name: &str, value: f64) {
        self.grids.remove(name);
        self.fixed.insert(name.to_string(), value);
    }

    pub fn validate(&self) -> Result<()> {
        let known = self.target.parameters();
        for name in self.grids.keys().chain(self.fixed.keys()) {
            if !known.contains(&name.as_str()) {
                return Err(CliError::Config(format!(
                    "unknown parameter `{name}` for target {} (expected one of {known:?})",
                    self.target.as_str()
                )));
            }
            if self.grids.contains_key(name) && self.fixed.contains_key(name) {
                return Err(CliError::Config(format!("`{name}` given both as grid and fixed")));
            }
        }
        for (name, values) in &self.grids {
            if values.is_empty() {
                return Err(CliError::Config(format!("grid `{name}` is empty")));
            }
            if self.target.scalar_only().contains(&name.as_str()) {
                return Err(CliError::Config(format!("`{name}` must be a fixed scalar")));
            }
        }
        for name in known {
            if !self.grids.contains_key(*name) && !self.fixed.contains_key(*name) {
                return Err(CliError::Config(format!("missing parameter `{name}`")));
            }
        }
        Ok(())
    }

    /// Values of `name` as a list, whether given as grid or scalar.
    pub fn values(&self, name: &str) -> Result<Vec<GridValue>> {
        if let Some(g) = self.grids.get(name) {
            Ok(g.clone())
        } else if let Some(v) = self.fixed.get(name) {
            Ok(vec![GridValue::Number(*v)])
        } else {
            Err(CliError::Config(format!("missing parameter `{name}`")))
        }
    }

    pub fn reals(&self, name: &str) -> Result<Vec<f64>> {
        self.values(name)?
            .into_iter()
            .map(|v| match v {
                GridValue::Number(x) => Ok(x),
                GridValue::Text(s) => Err(CliError::Config(format!("`{name}`: expected number, got \"{s}\""))),
            })
            .collect()
    }

    pub fn counts(&self, name: &str) -> Result<Vec<usize>> {
        self.reals(name)?
            .into_iter()
            .map(|x| {
                if x >= 0.0 && x.fract() == 0.0 && x < 1e9 {
                    Ok(x as usize)
                } else {
                    Err(CliError::Config(format!("`{name}`: {x} is not a non-negative integer")))
                }
            })
            .collect()
    }

    pub fn scalar(&self, name: &str) -> Result<f64> {
        match self.reals(name)?.as_slice() {
            [x] => Ok(*x),
            _ => Err(CliError::Config(format!("`{name}` must be a single value"))),
        }
    }

    pub fn texts(&self, name: &str) -> Result<Vec<String>> {
        self.values(name)?
            .into_iter()
            .map(|v| match v {
                GridValue::Text(s) => Ok(s),
                GridValue::Number(x) => Err(CliError::Config(format!("`{name}`: expected string, got {x}"))),
            })
            .collect()
    }
}
