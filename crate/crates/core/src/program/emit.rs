// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON and CSV output. Key order is fixed, so equal inputs give equal bytes.

use serde_json::{json, Map, Value};

use super::exec::{ExpectationValue, Mode, ResultRecord, SweepRow, SweepTable};
use crate::error::Error;
use crate::linalg::{c, Complex64};
use crate::spin::{BellLabel, Populations};

const AXES: [&str; 3] = ["x", "y", "z"];

fn cnum(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn expectation_value(v: &ExpectationValue) -> Value {
    match v {
        ExpectationValue::Sz(x) => json!(x),
        ExpectationValue::Populations(p) => Value::Object(p.iter().map(|(l, x)| (l.name().to_string(), json!(x))).collect()),
        ExpectationValue::Statevector(a) => Value::Array(a.iter().map(|&z| cnum(z)).collect()),
        ExpectationValue::Moment(m) => json!(m),
    }
}

fn record_value(r: &ResultRecord) -> Value {
    let s = &r.final_state;
    let product: Vec<Value> = s.amplitudes().iter().map(|&z| cnum(z)).collect();
    let bell: Map<String, Value> = BellLabel::ALL
        .iter()
        .map(|&l| (l.name().to_string(), cnum(s.bell_component(l))))
        .collect();
    let expectations: Map<String, Value> = r
        .expectations
        .iter()
        .map(|(k, v)| (k.clone(), expectation_value(v)))
        .collect();
    let mut out = Map::new();
    out.insert("mode".into(), json!(r.mode.name()));
    out.insert("final_state".into(), json!({ "product": product, "bell": bell }));
    out.insert("expectations".into(), Value::Object(expectations));
    if let Some(d) = r.max_unitarity_defect {
        out.insert("max_unitarity_defect".into(), json!(d));
    }
    Value::Object(out)
}

pub fn record_json(r: &ResultRecord) -> String {
    let mut s = serde_json::to_string_pretty(&record_value(r)).expect("finite values serialize");
    s.push('\n');
    s
}

/// Two columns, `key,value`, one scalar per row with dotted keys.
pub fn record_csv(r: &ResultRecord) -> String {
    let mut out = String::from("key,value\n");
    let mut row = |k: String, v: f64| out.push_str(&format!("{k},{v:.6}\n"));
    let s = &r.final_state;
    for (i, z) in s.amplitudes().iter().enumerate() {
        row(format!("final_state.product.{i}.re"), z.re);
        row(format!("final_state.product.{i}.im"), z.im);
    }
    for l in BellLabel::ALL {
        let z = s.bell_component(l);
        row(format!("final_state.bell.{l}.re"), z.re);
        row(format!("final_state.bell.{l}.im"), z.im);
    }
    for (k, v) in &r.expectations {
        match v {
            ExpectationValue::Sz(x) => row(k.clone(), *x),
            ExpectationValue::Populations(p) => {
                for (l, x) in p.iter() {
                    row(format!("{k}.{l}"), x);
                }
            }
            ExpectationValue::Statevector(a) => {
                for (i, z) in a.iter().enumerate() {
                    row(format!("{k}.{i}.re"), z.re);
                    row(format!("{k}.{i}.im"), z.im);
                }
            }
            ExpectationValue::Moment(m) => {
                for (a, x) in AXES.iter().zip(m) {
                    row(format!("{k}.{a}"), *x);
                }
            }
        }
    }
    out
}

pub fn table_json(t: &SweepTable) -> String {
    let rows: Vec<Value> = t.rows.iter().map(|r| json!([r.theta, r.delta, r.value])).collect();
    let v = json!({ "observable": t.observable, "columns": ["theta", "delta", "value"], "rows": rows });
    let mut s = serde_json::to_string_pretty(&v).expect("finite values serialize");
    s.push('\n');
    s
}

/// Header `theta,delta,value`, then one row per grid point, six decimals.
pub fn table_csv(t: &SweepTable) -> String {
    let mut out = String::from("theta,delta,value\n");
    for r in &t.rows {
        out.push_str(&format!("{:.6},{:.6},{:.6}\n", r.theta, r.delta, r.value));
    }
    out
}

/// What can be recovered from a result document.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordSnapshot {
    pub mode: Mode,
    pub product: [Complex64; 4],
    pub bell: [Complex64; 4],
    pub expectations: Vec<(String, ExpectationValue)>,
}

impl RecordSnapshot {
    pub fn of(r: &ResultRecord) -> Self {
        let a = r.final_state.amplitudes();
        Self {
            mode: r.mode,
            product: [a[0], a[1], a[2], a[3]],
            bell: BellLabel::ALL.map(|l| r.final_state.bell_component(l)),
            expectations: r.expectations.clone(),
        }
    }

    /// Largest absolute difference over every number in both snapshots, or
    /// `None` when they differ in shape.
    pub fn max_diff(&self, other: &RecordSnapshot) -> Option<f64> {
        if self.mode != other.mode || self.expectations.len() != other.expectations.len() {
            return None;
        }
        let mut worst = 0.0f64;
        for (a, b) in self.product.iter().zip(&other.product).chain(self.bell.iter().zip(&other.bell)) {
            worst = worst.max((a - b).norm());
        }
        for ((ka, va), (kb, vb)) in self.expectations.iter().zip(&other.expectations) {
            if ka != kb {
                return None;
            }
            let d = match (va, vb) {
                (ExpectationValue::Sz(x), ExpectationValue::Sz(y)) => (x - y).abs(),
                (ExpectationValue::Populations(p), ExpectationValue::Populations(q)) => p.max_diff(q),
                (ExpectationValue::Statevector(p), ExpectationValue::Statevector(q)) => {
                    p.iter().zip(q).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
                }
                (ExpectationValue::Moment(p), ExpectationValue::Moment(q)) => {
                    p.iter().zip(q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
                }
                _ => return None,
            };
            worst = worst.max(d);
        }
        Some(worst)
    }
}

fn bad(what: &str) -> Error {
    Error::Io(format!("malformed result document: {what}"))
}

fn read_f64(v: &Value, what: &str) -> Result<f64, Error> {
    v.as_f64().ok_or_else(|| bad(what))
}

fn read_cnum(v: &Value) -> Result<Complex64, Error> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(c(read_f64(re, "complex")?, read_f64(im, "complex")?)),
        _ => Err(bad("complex number")),
    }
}

fn read_expectation(v: &Value) -> Result<ExpectationValue, Error> {
    match v {
        Value::Number(_) => Ok(ExpectationValue::Sz(read_f64(v, "sz")?)),
        Value::Object(m) => {
            let mut p = [0.0; 4];
            for (slot, l) in p.iter_mut().zip(BellLabel::ALL) {
                *slot = read_f64(m.get(l.name()).ok_or_else(|| bad("population"))?, "population")?;
            }
            Ok(ExpectationValue::Populations(Populations::from_values(p)))
        }
        Value::Array(items) if items.len() == 4 && items.iter().all(Value::is_array) => {
            let z: Vec<Complex64> = items.iter().map(read_cnum).collect::<Result<_, _>>()?;
            Ok(ExpectationValue::Statevector([z[0], z[1], z[2], z[3]]))
        }
        Value::Array(items) if items.len() == 3 => Ok(ExpectationValue::Moment([
            read_f64(&items[0], "moment")?,
            read_f64(&items[1], "moment")?,
            read_f64(&items[2], "moment")?,
        ])),
        _ => Err(bad("expectation")),
    }
}

pub fn read_record_json(text: &str) -> Result<RecordSnapshot, Error> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
    let mode = match v["mode"].as_str() {
        Some("closed") => Mode::Closed,
        Some("full") => Mode::Full,
        _ => return Err(bad("mode")),
    };
    let fs = &v["final_state"];
    let product: Vec<Complex64> = fs["product"]
        .as_array()
        .ok_or_else(|| bad("product"))?
        .iter()
        .map(read_cnum)
        .collect::<Result<_, _>>()?;
    if product.len() != 4 {
        return Err(bad("product length"));
    }
    let mut bell = [c(0.0, 0.0); 4];
    for (slot, l) in bell.iter_mut().zip(BellLabel::ALL) {
        *slot = read_cnum(fs["bell"].get(l.name()).ok_or_else(|| bad("bell"))?)?;
    }
    let expectations = v["expectations"]
        .as_object()
        .ok_or_else(|| bad("expectations"))?
        .iter()
        .map(|(k, x)| Ok((k.clone(), read_expectation(x)?)))
        .collect::<Result<_, Error>>()?;
    Ok(RecordSnapshot { mode, product: [product[0], product[1], product[2], product[3]], bell, expectations })
}

pub fn read_table_json(text: &str) -> Result<SweepTable, Error> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
    let observable = v["observable"].as_str().ok_or_else(|| bad("observable"))?.to_string();
    let rows = v["rows"]
        .as_array()
        .ok_or_else(|| bad("rows"))?
        .iter()
        .map(|r| match r.as_array().map(Vec::as_slice) {
            Some([t, d, x]) => Ok(SweepRow { theta: read_f64(t, "theta")?, delta: read_f64(d, "delta")?, value: read_f64(x, "value")? }),
            _ => Err(bad("row")),
        })
        .collect::<Result<_, Error>>()?;
    Ok(SweepTable { observable, rows })
}
