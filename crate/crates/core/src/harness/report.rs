//! Experiment reports and their JSON/CSV forms.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::rng::RngConfig;

pub const REPORT_SCHEMA: &str = "euler-adic/stat-report/v1";

/// How an estimate is judged against its reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", content = "value", rename_all = "snake_case")]
pub enum Tolerance {
    /// `|value - reference| <= k * std_error`; with a zero standard error
    /// the two must agree to 1e-12 relative.
    StdErrors(f64),
    /// `|value - reference| <= r * |reference|`.
    Relative(f64),
    /// `value <= reference`.
    AtMost,
    /// `value >= reference`.
    AtLeast,
    /// `value > reference`.
    Above,
    /// Recorded only.
    Info,
}

impl Tolerance {
    pub fn accepts(self, value: f64, std_error: f64, reference: Option<f64>) -> bool {
        let Some(reference) = reference else {
            return matches!(self, Tolerance::Info);
        };
        if !value.is_finite() {
            return false;
        }
        let diff = (value - reference).abs();
        match self {
            Tolerance::StdErrors(k) => {
                if std_error > 0.0 {
                    diff <= k * std_error
                } else {
                    diff <= 1e-12 * reference.abs().max(value.abs())
                }
            }
            Tolerance::Relative(r) => diff <= r * reference.abs(),
            Tolerance::AtMost => value <= reference,
            Tolerance::AtLeast => value >= reference,
            Tolerance::Above => value > reference,
            Tolerance::Info => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub name: String,
    pub value: f64,
    pub std_error: f64,
    /// Exact value of the estimate when it is itself exact, as `p/q`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact_value: Option<String>,
    /// Exact reference as `p/q`, when one exists.
    pub reference: Option<String>,
    pub reference_value: Option<f64>,
    pub tolerance: Tolerance,
    pub passed: bool,
}

impl Estimate {
    pub fn new(
        name: impl Into<String>,
        value: f64,
        std_error: f64,
        reference_value: Option<f64>,
        tolerance: Tolerance,
    ) -> Self {
        Estimate {
            name: name.into(),
            value,
            std_error,
            exact_value: None,
            reference: None,
            reference_value,
            tolerance,
            passed: tolerance.accepts(value, std_error, reference_value),
        }
    }

    pub fn with_exact_reference(mut self, reference: String) -> Self {
        self.reference = Some(reference);
        self
    }

    pub fn with_exact_value(mut self, value: String) -> Self {
        self.exact_value = Some(value);
        self
    }

    /// Re-derives `passed` from the stored numbers.
    pub fn recheck(&self) -> bool {
        self.tolerance
            .accepts(self.value, self.std_error, self.reference_value)
    }
}

/// Tabular data for plotting, already formatted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub schema: String,
    pub experiment: String,
    pub params: serde_json::Map<String, serde_json::Value>,
    pub rng: Option<RngConfig>,
    pub samples: u64,
    pub estimates: Vec<Estimate>,
    pub notes: Vec<String>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub series: Option<Series>,
}

impl StatReport {
    pub fn new(experiment: &str, rng: Option<RngConfig>, samples: u64) -> Self {
        StatReport {
            schema: REPORT_SCHEMA.to_string(),
            experiment: experiment.to_string(),
            params: serde_json::Map::new(),
            rng,
            samples,
            estimates: Vec::new(),
            notes: Vec::new(),
            passed: true,
            series: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn push(&mut self, estimate: Estimate) {
        self.passed &= estimate.passed;
        self.estimates.push(estimate);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn estimate(&self, name: &str) -> Option<&Estimate> {
        self.estimates.iter().find(|e| e.name == name)
    }

    pub fn first_failure(&self) -> Option<&Estimate> {
        self.estimates.iter().find(|e| !e.passed)
    }

    /// True when every stored `passed` flag matches its numbers.
    pub fn is_consistent(&self) -> bool {
        self.estimates.iter().all(|e| e.passed == e.recheck())
            && self.passed == self.estimates.iter().all(|e| e.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable") + "\n"
    }

    /// The series if present, otherwise one row per estimate.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        if let Some(series) = &self.series {
            writeln!(out, "{}", series.columns.join(","))?;
            for row in &series.rows {
                writeln!(out, "{}", row.join(","))?;
            }
            return Ok(());
        }
        writeln!(out, "name,value,std_error,reference,passed")?;
        for e in &self.estimates {
            let reference = match (&e.reference, e.reference_value) {
                (Some(exact), _) => exact.clone(),
                (None, Some(v)) => format_sig(v, 12),
                (None, None) => String::new(),
            };
            writeln!(
                out,
                "{},{},{},{},{}",
                e.name,
                format_sig(e.value, 12),
                format_sig(e.std_error, 12),
                reference,
                e.passed
            )?;
        }
        Ok(())
    }
}

/// `x` with `digits` significant digits: fixed notation for moderate
/// magnitudes, scientific otherwise.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}
