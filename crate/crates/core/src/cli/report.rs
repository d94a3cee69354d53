//! JSON and text rendering of results.

use serde::Serialize;
use serde_json::{json, Value};

use crate::complex::BettiTable;
use crate::error::Error;
use crate::growth::{Cx, GrowthReport, RationalSeries, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Series {
    pub num: Vec<i64>,
    pub den: Vec<i64>,
}

impl From<&RationalSeries> for Series {
    fn from(s: &RationalSeries) -> Self {
        Series {
            num: s.num_i64(),
            den: s.den_i64(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: &'static str,
    pub witness: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, verdict: Verdict, witness: Value) -> Self {
        Check {
            name: name.into(),
            verdict: verdict_str(verdict),
            witness,
        }
    }

    pub fn bool(name: impl Into<String>, ok: bool, witness: Value) -> Self {
        Self::new(name, Verdict::from_bool(ok), witness)
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "pass",
        Verdict::No => "fail",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn cx_value(c: Cx) -> Value {
    match c {
        Cx::Finite(n) => json!(n),
        other => json!(other.to_string()),
    }
}

pub fn symmetric_value(v: Verdict) -> Value {
    match v {
        Verdict::Yes => json!(true),
        Verdict::No => json!(false),
        Verdict::Inconclusive => json!("inconclusive"),
    }
}

/// Field order is part of the output contract.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub betti_plus: Option<Vec<usize>>,
    pub betti_minus: Option<Vec<usize>>,
    pub poincare_plus: Option<Series>,
    pub poincare_minus: Option<Series>,
    pub cx_plus: Option<Value>,
    pub cx_minus: Option<Value>,
    pub symmetric: Option<Value>,
    pub checks: Vec<Check>,
    pub command: String,
    pub details: Value,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            details: json!({}),
            ..Default::default()
        }
    }

    pub fn detail(&mut self, key: &str, value: Value) {
        if let Value::Object(m) = &mut self.details {
            m.insert(key.into(), value);
        }
    }

    pub fn set_betti(&mut self, table: &BettiTable, minus: bool) {
        self.betti_plus = Some(table.plus());
        if minus {
            self.betti_minus = Some(table.minus());
        }
    }

    pub fn set_series(&mut self, g: &GrowthReport, minus: bool) {
        self.poincare_plus = g.poincare_plus().map(Series::from);
        if minus {
            self.poincare_minus = g.poincare_minus().map(Series::from);
        }
    }

    pub fn set_cx(&mut self, g: &GrowthReport, minus: bool) {
        self.cx_plus = Some(cx_value(g.cx_plus.value));
        self.detail("cx_plus_heuristic", json!(g.cx_plus.heuristic));
        if minus {
            self.cx_minus = Some(cx_value(g.cx_minus.value));
            self.detail("cx_minus_heuristic", json!(g.cx_minus.heuristic));
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        if let Some(b) = &self.betti_plus {
            out += &format!("betti+  (n = 0..): {}\n", list(b));
        }
        if let Some(b) = &self.betti_minus {
            out += &format!("betti-  (n = -1..): {}\n", list(b));
        }
        let series = |s: &Series| format!("num {:?} / den {:?}", s.num, s.den);
        if let Some(s) = &self.poincare_plus {
            out += &format!("P+: {}\n", series(s));
        }
        if let Some(s) = &self.poincare_minus {
            out += &format!("P-: {}\n", series(s));
        }
        let show = |v: &Value| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        if let Some(c) = &self.cx_plus {
            out += &format!("cx+: {}\n", show(c));
        }
        if let Some(c) = &self.cx_minus {
            out += &format!("cx-: {}\n", show(c));
        }
        if let Some(s) = &self.symmetric {
            out += &format!("symmetric: {}\n", show(s));
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            out += &format!("  {:<width$}  {:<12}", c.name, c.verdict);
            if !c.witness.is_null() {
                out += &format!("  {}", c.witness);
            }
            out.push('\n');
        }
        out
    }
}

/// Exit status for an error: 2 for bad input, 3 for a refused
/// precondition, 4 for an internal fault.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Fault(_) => 4,
        Error::Precondition(_) | Error::NotTotallyReflexive(_) | Error::GrowthLimit { .. } => 3,
        _ => 2,
    }
}

pub fn error_json(e: &Error) -> String {
    let mut body = json!({ "kind": e.kind(), "message": e.to_string() });
    if let Error::Parse { line, col, msg } = e {
        body["line"] = json!(line);
        body["col"] = json!(col);
        body["message"] = json!(msg);
    }
    serde_json::to_string_pretty(&json!({ "error": body })).expect("error serializes") + "\n"
}
