//! Machine-readable run reports.
//!
//! One JSON object per run. Floats are written with 17 significant digits so
//! a report parses back to the same bits; non-finite floats are written as
//! `null` and read back as `None`.
//!
//! Schema (all keys always present):
//!
//! ```text
//! version     string      crate version that wrote the report
//! command     string      subcommand name
//! args        [string]    arguments as given
//! rng_seed    int | null
//! parameters  object      resolved parameters
//! solutions   [Solution]  distinct fixed points, ordered by λ
//! checks      [Check]     named pass/fail outcomes with measured values
//! warnings    [string]
//! data        object      command-specific payload
//! timings_ms  object      wall-clock times; excluded from reproducibility
//! ```

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::solver::FixedPointReport;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: Option<f64>,
    pub threshold: Option<f64>,
    pub detail: Option<String>,
}

impl Check {
    /// Passes when `measured ≤ threshold`.
    pub fn at_most(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            passed: measured <= threshold,
            measured: Some(measured),
            threshold: Some(threshold),
            detail: None,
        }
    }

    /// Passes when `measured ≥ threshold`.
    pub fn at_least(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            passed: measured >= threshold,
            measured: Some(measured),
            threshold: Some(threshold),
            detail: None,
        }
    }

    pub fn flag(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            measured: None,
            threshold: None,
            detail: Some(detail.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub seed_id: usize,
    pub seed_label: String,
    pub lambda: Option<f64>,
    pub residual_r: Option<f64>,
    pub residual_h: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// `R`-space values at the nodes.
    pub f: Vec<Option<f64>>,
    /// `H`-space values, when `α > 1`.
    pub h: Option<Vec<Option<f64>>>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn finite_all(values: &[f64]) -> Vec<Option<f64>> {
    values.iter().map(|&v| finite(v)).collect()
}

impl From<&FixedPointReport> for Solution {
    fn from(r: &FixedPointReport) -> Self {
        Self {
            seed_id: r.seed_id,
            seed_label: r.seed_label.clone(),
            lambda: finite(r.lambda),
            residual_r: finite(r.residual_r),
            residual_h: r.residual_h.and_then(finite),
            iterations: r.iterations,
            converged: r.converged,
            f: finite_all(r.f.values()),
            h: r.h.as_ref().map(|h| finite_all(h.values())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub command: String,
    pub args: Vec<String>,
    pub rng_seed: Option<u64>,
    pub parameters: BTreeMap<String, Value>,
    pub solutions: Vec<Solution>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub data: BTreeMap<String, Value>,
    pub timings_ms: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, args: Vec<String>) -> Self {
        Self {
            version: VERSION.to_string(),
            command: command.into(),
            args,
            rng_seed: None,
            parameters: BTreeMap::new(),
            solutions: Vec::new(),
            checks: Vec::new(),
            warnings: Vec::new(),
            data: BTreeMap::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters.insert(key.to_string(), to_value(value));
    }

    pub fn datum(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(key.to_string(), to_value(value));
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// The report with timings removed, for reproducibility comparisons.
    pub fn without_timings(&self) -> Self {
        Self {
            timings_ms: BTreeMap::new(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("report: {e}")))
    }

    /// Writes to `path`, or to stdout without one.
    pub fn write(&self, path: Option<&Path>) -> Result<()> {
        let text = self.to_json();
        match path {
            Some(path) => std::fs::write(path, text + "\n")?,
            None => println!("{text}"),
        }
        Ok(())
    }
}

/// Values destined for a report; non-finite floats become `null`.
fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).unwrap_or(Value::Null)
}

/// Pretty JSON with every float as `d.dddddddddddddddde±x`.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, ReportFormatter::default());
    value.serialize(&mut ser).expect("report values serialize");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

#[derive(Default)]
struct ReportFormatter {
    pretty: PrettyFormatter<'static>,
}

impl Formatter for ReportFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(writer)
    }
}
