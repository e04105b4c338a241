//! Versioned JSON reports.

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: String,
    /// Only filled in when timing is requested, so reports stay reproducible.
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub parameters: Value,
    pub checks: Vec<Check>,
    pub status: Status,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
    #[serde(skip)]
    timing: bool,
}

impl Report {
    pub fn new(suite: &str, parameters: Value, timing: bool) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            parameters,
            checks: Vec::new(),
            status: Status::Pass,
            data: Value::Null,
            timing,
        }
    }

    pub fn push(&mut self, name: impl Into<String>, ok: bool, witness: impl Into<String>) {
        self.push_timed(name, ok, witness, None);
    }

    fn push_timed(
        &mut self,
        name: impl Into<String>,
        ok: bool,
        witness: impl Into<String>,
        ms: Option<u64>,
    ) {
        let status = Status::from_bool(ok);
        if status == Status::Fail {
            self.status = Status::Fail;
        }
        self.checks.push(Check {
            name: name.into(),
            status,
            witness: witness.into(),
            timing_ms: ms,
        });
    }

    /// Runs `f`, recording its verdict and, if enabled, its wall time.
    /// An `Err` is a failed check whose witness is the error text.
    pub fn run<F, E>(&mut self, name: impl Into<String>, f: F)
    where
        F: FnOnce() -> Result<(bool, String), E>,
        E: std::fmt::Display,
    {
        let start = Instant::now();
        let r = f();
        let ms = self.timing.then(|| start.elapsed().as_millis() as u64);
        match r {
            Ok((ok, w)) => self.push_timed(name, ok, w, ms),
            Err(e) => self.push_timed(name, false, format!("error: {e}"), ms),
        }
    }

    /// Like [`Report::run`] for producers of several checks.
    pub fn run_many<F, E>(&mut self, name: &str, f: F)
    where
        F: FnOnce() -> Result<Vec<(String, bool, String)>, E>,
        E: std::fmt::Display,
    {
        let start = Instant::now();
        let r = f();
        let ms = self.timing.then(|| start.elapsed().as_millis() as u64);
        match r {
            Ok(list) => {
                for (n, ok, w) in list {
                    self.push_timed(n, ok, w, ms);
                }
            }
            Err(e) => self.push_timed(name, false, format!("error: {e}"), ms),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("suite {}\n", self.suite);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            s.push_str(&format!("{tag}  {}: {}", c.name, c.witness));
            if let Some(ms) = c.timing_ms {
                s.push_str(&format!(" ({ms} ms)"));
            }
            s.push('\n');
        }
        if !self.data.is_null() {
            s.push_str(&serde_json::to_string_pretty(&self.data).expect("data serializes"));
            s.push('\n');
        }
        s.push_str(match self.status {
            Status::Pass => "status: pass\n",
            Status::Fail => "status: fail\n",
        });
        s
    }
}
