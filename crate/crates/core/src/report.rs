//! Report records shared by all suites. JSON is the primary format; the
//! text rendering is derived from it.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// One verified (or refuted) statement.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, Value>,
}

impl Check {
    pub fn new(suite: &str, name: &str, passed: bool) -> Self {
        Check {
            suite: suite.to_string(),
            name: name.to_string(),
            passed,
            detail: None,
            data: BTreeMap::new(),
        }
    }

    pub fn pass(suite: &str, name: &str) -> Self {
        Self::new(suite, name, true)
    }

    pub fn fail(suite: &str, name: &str, detail: impl Into<String>) -> Self {
        Self::new(suite, name, false).with_detail(detail)
    }

    /// Passes iff `residual` is `None`; otherwise the residual is the detail.
    pub fn from_residual(suite: &str, name: &str, residual: Option<String>) -> Self {
        match residual {
            None => Self::pass(suite, name),
            Some(r) => Self::fail(suite, name, r),
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn with(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.data.insert(key.to_string(), v.into());
        self
    }
}

/// Top-level report. Field order and map ordering are fixed, so equal runs
/// serialise to identical bytes.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub config: BTreeMap<String, Value>,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub results: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema: 1,
            command: command.to_string(),
            config: BTreeMap::new(),
            passed: true,
            checks: Vec::new(),
            results: BTreeMap::new(),
        }
    }

    pub fn config(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.config.insert(key.to_string(), v.into());
        self
    }

    pub fn push(&mut self, c: Check) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        for c in cs {
            self.push(c);
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// Plain-text rendering of the JSON value.
    pub fn to_text(&self) -> String {
        let v = serde_json::to_value(self).expect("report serialises");
        let mut out = String::new();
        out.push_str(&format!(
            "{} [{}]\n",
            self.command,
            if self.passed { "PASS" } else { "FAIL" }
        ));
        if let Some(Value::Object(cfg)) = v.get("config") {
            for (k, x) in cfg {
                out.push_str(&format!("  {k} = {}\n", scalar_text(x)));
            }
        }
        if let Some(Value::Array(checks)) = v.get("checks") {
            for c in checks {
                let ok = c.get("passed").and_then(Value::as_bool).unwrap_or(false);
                let suite = c.get("suite").and_then(Value::as_str).unwrap_or("");
                let name = c.get("name").and_then(Value::as_str).unwrap_or("");
                out.push_str(&format!("{} {suite}/{name}", if ok { "ok  " } else { "FAIL" }));
                if let Some(Value::Object(data)) = c.get("data") {
                    for (k, x) in data {
                        out.push_str(&format!(" {k}={}", scalar_text(x)));
                    }
                }
                out.push('\n');
                if let Some(d) = c.get("detail").and_then(Value::as_str) {
                    out.push_str(&format!("      {d}\n"));
                }
            }
        }
        if let Some(Value::Object(res)) = v.get("results") {
            for (k, x) in res {
                out.push_str(&format!("  {k}: {}\n", scalar_text(x)));
            }
        }
        out
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
