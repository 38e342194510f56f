//! Machine-readable reproduction reports and their text rendering.

use exotic_core::{Error, Result};
use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: u32 = 1;
pub const CONCLUSION: &str = "exotic: SW nonvanishing in the unique small-perturbation chamber";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn token(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub step: String,
    pub status: Status,
    pub detail: String,
    pub values: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub scenario: String,
    pub steps: Vec<Step>,
    pub conclusion: Option<String>,
    pub pass: bool,
}

impl Report {
    pub fn new(scenario: &str, steps: Vec<Step>, conclusion: Option<String>) -> Self {
        let pass = steps.iter().all(|s| s.status != Status::Fail);
        Report { schema: REPORT_SCHEMA, scenario: scenario.into(), steps, conclusion, pass }
    }

    pub fn step(&self, name: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.step == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("scenario {}\n", self.scenario);
        for s in &self.steps {
            out.push_str(&format!("{} {}: {}\n", s.status.token(), s.step, s.detail));
        }
        if let Some(c) = &self.conclusion {
            out.push_str(&format!("conclusion: {c}\n"));
        }
        out.push_str(&format!("overall: {}\n", if self.pass { "PASS" } else { "FAIL" }));
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(Error::UnknownFormat(other.into())),
        }
    }
}

pub fn emit(report: &Report, format: Format) -> Result<String> {
    Ok(match format {
        Format::Text => report.to_text(),
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
    })
}
