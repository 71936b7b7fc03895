//! Versioned verification-report records and the CSV point format.
//!
//! Reports are plain data with deterministic serialization (struct field
//! order, sorted maps): identical inputs produce byte-identical JSON.

use crate::error::Result;
use std::collections::BTreeMap;
use std::io::Write as IoWrite;

pub const REPORT_VERSION: u32 = 1;

/// One named check inside a suite.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub samples: Vec<SampleRecord>,
    pub fitted: BTreeMap<String, f64>,
    pub targets: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SampleRecord {
    pub coordinates: Vec<f64>,
    pub value: f64,
}

/// A suite run: version tag, suite name, its checks, overall pass flag.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct VerificationReport {
    pub version: u32,
    pub suite: String,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(suite: &str, checks: Vec<CheckRecord>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        VerificationReport { version: REPORT_VERSION, suite: suite.to_string(), checks, pass }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

impl CheckRecord {
    pub fn new(name: &str) -> Self {
        CheckRecord {
            name: name.to_string(),
            parameters: BTreeMap::new(),
            samples: Vec::new(),
            fitted: BTreeMap::new(),
            targets: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            pass: false,
        }
    }

    pub fn param(mut self, key: &str, value: serde_json::Value) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn fit(mut self, key: &str, value: f64) -> Self {
        self.fitted.insert(key.to_string(), value);
        self
    }

    pub fn target(mut self, key: &str, value: f64) -> Self {
        self.targets.insert(key.to_string(), value);
        self
    }

    pub fn tolerance(mut self, key: &str, value: f64) -> Self {
        self.tolerances.insert(key.to_string(), value);
        self
    }

    pub fn sample(mut self, coordinates: Vec<f64>, value: f64) -> Self {
        self.samples.push(SampleRecord { coordinates, value });
        self
    }

    pub fn passed(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}

/// Write point data as CSV rows `x1..xn,t,value`.
pub fn write_point_csv<W: IoWrite>(
    w: &mut W,
    n: usize,
    rows: &[(Vec<f64>, f64, f64)],
) -> Result<()> {
    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    header.push("t".into());
    header.push("value".into());
    writeln!(w, "{}", header.join(","))?;
    for (x, t, v) in rows {
        let mut cols: Vec<String> = x.iter().map(|c| format!("{c}")).collect();
        cols.push(format!("{t}"));
        cols.push(format!("{v}"));
        writeln!(w, "{}", cols.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_serialization_is_deterministic() {
        let mk = || {
            VerificationReport::new(
                "decay",
                vec![CheckRecord::new("time_ray")
                    .param("s", serde_json::json!(0.5))
                    .fit("exponent", -2.01)
                    .target("exponent", -2.0)
                    .tolerance("exponent", 0.15)
                    .sample(vec![0.0, -100.0], 1.2e-5)
                    .passed(true)],
            )
        };
        assert_eq!(mk().to_json(), mk().to_json());
        let r = mk();
        assert!(r.pass);
        assert_eq!(r.version, 1);
        // a failing check fails the suite
        let bad = VerificationReport::new(
            "decay",
            vec![CheckRecord::new("a").passed(true), CheckRecord::new("b").passed(false)],
        );
        assert!(!bad.pass);
    }

    #[test]
    fn csv_rows_have_header_and_values() {
        let mut buf = Vec::new();
        write_point_csv(&mut buf, 2, &[(vec![0.5, -1.0], 2.0, 3.25)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "x1,x2,t,value\n0.5,-1,2,3.25\n");
    }

    #[test]
    fn report_roundtrips_through_json() {
        let r = VerificationReport::new("symbol", vec![CheckRecord::new("eigen").passed(true)]);
        let back: VerificationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
