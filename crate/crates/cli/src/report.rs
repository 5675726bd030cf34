//! JSON and text reports. Rationals are always strings `p` or `p/q`.

use gitmilnor_core::stability::{BudgetReport, Certificate, StabilityVerdict};
use gitmilnor_core::{FramedOnePs, LinearChange, OnePs, Rational};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    pub n: usize,
    /// Degree of the form, or of the generators.
    pub degree: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub operation: String,
    pub input: Value,
    pub result: Value,
    pub certificate: Value,
    pub seed: u64,
    /// Wall-clock milliseconds; the only nondeterministic field.
    pub timing_ms: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Same as [`Report::to_json`] with the timing field zeroed.
    pub fn to_json_without_timing(&self) -> String {
        Report { timing_ms: 0.0, ..self.clone() }.to_json()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("operation: {}\n", self.operation);
        out.push_str(&text_lines("input", &self.input));
        out.push_str(&text_lines("result", &self.result));
        if !self.certificate.is_null() {
            out.push_str(&text_lines("certificate", &self.certificate));
        }
        out.push_str(&format!("seed: {}\ntiming_ms: {:.3}\n", self.seed, self.timing_ms));
        out
    }
}

fn text_lines(prefix: &str, value: &Value) -> String {
    match value {
        Value::Object(map) => map.iter().map(|(k, v)| text_lines(&format!("{prefix}.{k}"), v)).collect(),
        Value::String(s) => format!("{prefix}: {s}\n"),
        other => format!("{prefix}: {other}\n"),
    }
}

pub fn rational(v: &Rational) -> Value {
    Value::String(v.to_string())
}

pub fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

/// Row-major matrix of rational strings.
pub fn frame(t: &LinearChange) -> Value {
    Value::Array(t.rows().map(rationals).collect())
}

pub fn one_ps(l: &OnePs) -> Value {
    json!(l.weights())
}

pub fn framed(c: &FramedOnePs) -> Value {
    json!({ "frame": frame(&c.frame), "lambda": one_ps(&c.lambda) })
}

pub fn budget(b: &BudgetReport) -> Value {
    json!({ "frames_tried": b.frames_tried, "seed": b.seed })
}

pub fn certificate(c: &Certificate) -> Value {
    match c {
        Certificate::Destabilizing(f) => json!({ "kind": "destabilizing", "frame": frame(&f.frame), "lambda": one_ps(&f.lambda) }),
        Certificate::Supporting { lambda, combination } => {
            json!({ "kind": "supporting", "lambda": one_ps(lambda), "combination": rationals(combination) })
        }
        Certificate::Interior { combination } => json!({ "kind": "interior", "combination": rationals(combination) }),
        Certificate::Budget(b) => json!({ "kind": "budget", "frames_tried": b.frames_tried, "seed": b.seed }),
    }
}

pub fn verdict(v: &StabilityVerdict) -> Value {
    json!({ "status": v.status.to_string(), "certificate": certificate(&v.certificate) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use gitmilnor_core::rational::{frac, parse_rational};

    #[test]
    fn rationals_are_strings_and_parse_back() {
        let values = [frac(1, 36), frac(-7, 3), frac(4, 1)];
        let v = rationals(&values);
        assert_eq!(v, json!(["1/36", "-7/3", "4"]));
        let text = serde_json::to_string(&v).unwrap();
        let back: Vec<String> = serde_json::from_str(&text).unwrap();
        let parsed: Vec<Rational> = back.iter().map(|s| parse_rational(s).unwrap()).collect();
        assert_eq!(parsed, values);
    }

    #[test]
    fn frames_are_row_major() {
        let t = LinearChange::from_rows(vec![vec![frac(1, 2), frac(0, 1)], vec![frac(3, 1), frac(2, 1)]]).unwrap();
        assert_eq!(frame(&t), json!([["1/2", "0"], ["3", "2"]]));
    }
}
