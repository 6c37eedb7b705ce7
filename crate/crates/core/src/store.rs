//! JSON line records and the versioned line store.
//!
//! All scalars are written as strings. Objects are emitted with sorted keys, so a store
//! read back and written again is byte-identical.

use std::path::Path;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::field::{FieldError, FieldSpec};
use crate::geometry::{GeometryError, LineA, NUM_COORDS};
use crate::sampler::Sample;
use crate::strata::{classify_line, FiberReport};

pub const FORMAT_VERSION: u64 = 1;
pub const ORDER: &str = "a32,a31,a30,a23,a21,a20,a13,a12,a10,a03,a02,a01";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error("unsupported store format {0}")]
    Format(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type StoreResult<T> = Result<T, StoreError>;

/// How a line was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub strategy: String,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub timestamp: Option<String>,
}

impl Provenance {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("strategy".into(), json!(self.strategy));
        if let Some(s) = self.seed {
            m.insert("seed".into(), json!(s.to_string()));
        }
        if let Some(t) = self.trials {
            m.insert("trials".into(), json!(t.to_string()));
        }
        if let Some(t) = &self.timestamp {
            m.insert("timestamp".into(), json!(t));
        }
        Value::Object(m)
    }

    fn from_json(v: &Value) -> StoreResult<Self> {
        let num = |key: &str| -> StoreResult<Option<u64>> {
            match v.get(key) {
                None => Ok(None),
                Some(Value::String(s)) => s
                    .parse()
                    .map(Some)
                    .map_err(|_| StoreError::Malformed(format!("provenance.{key} = {s:?}"))),
                Some(Value::Number(n)) => Ok(n.as_u64()),
                Some(other) => Err(StoreError::Malformed(format!("provenance.{key} = {other}"))),
            }
        };
        Ok(Provenance {
            strategy: v
                .get("strategy")
                .and_then(Value::as_str)
                .ok_or_else(|| StoreError::Malformed("provenance.strategy".into()))?
                .to_string(),
            seed: num("seed")?,
            trials: num("trials")?,
            timestamp: v.get("timestamp").and_then(Value::as_str).map(str::to_string),
        })
    }
}

/// Line serialization: field, coordinate order and the two Stiefel rows.
pub fn line_to_json(line: &LineA) -> Value {
    json!({
        "field": line.field(),
        "order": ORDER,
        "rows": line.rows().iter().map(|r| r.iter().map(|x| x.to_text()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn line_from_json(v: &Value) -> StoreResult<LineA> {
    let field: FieldSpec = serde_json::from_value(
        v.get("field")
            .cloned()
            .ok_or_else(|| StoreError::Malformed("missing field".into()))?,
    )?;
    if let Some(o) = v.get("order") {
        if o.as_str() != Some(ORDER) {
            return Err(StoreError::Malformed(format!("unexpected coordinate order {o}")));
        }
    }
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .filter(|r| r.len() == 2)
        .ok_or_else(|| StoreError::Malformed("rows must be two arrays".into()))?;
    let mut parsed = Vec::with_capacity(2);
    for r in rows {
        let r = r
            .as_array()
            .filter(|r| r.len() == NUM_COORDS)
            .ok_or_else(|| StoreError::Malformed(format!("each row needs {NUM_COORDS} entries")))?;
        let mut row = Vec::with_capacity(NUM_COORDS);
        for x in r {
            let text = x
                .as_str()
                .ok_or_else(|| StoreError::Malformed(format!("scalar {x} is not a string")))?;
            row.push(field.parse_value(text)?);
        }
        parsed.push(row);
    }
    let q = parsed.pop().expect("two rows");
    let p = parsed.pop().expect("two rows");
    Ok(LineA::new(p, q)?)
}

/// A stored line with provenance and its cached classification.
#[derive(Debug, Clone)]
pub struct LineRecord {
    pub line: LineA,
    pub provenance: Provenance,
    pub report: Option<Value>,
}

impl LineRecord {
    pub fn from_sample(s: &Sample) -> Self {
        LineRecord {
            line: s.line.clone(),
            provenance: Provenance {
                strategy: s.strategy.to_string(),
                seed: Some(s.seed),
                trials: Some(s.trials),
                timestamp: None,
            },
            report: Some(s.report.to_json()),
        }
    }

    /// A record for an arbitrary line, classified on the spot.
    pub fn from_line(line: LineA, strategy: &str) -> StoreResult<Self> {
        let report = classify_line(&line)?.to_json();
        Ok(LineRecord {
            line,
            provenance: Provenance {
                strategy: strategy.to_string(),
                seed: None,
                trials: None,
                timestamp: None,
            },
            report: Some(report),
        })
    }

    pub fn to_json(&self) -> Value {
        let mut v = line_to_json(&self.line);
        let m = v.as_object_mut().expect("object");
        m.insert("provenance".into(), self.provenance.to_json());
        if let Some(r) = &self.report {
            m.insert("report".into(), r.clone());
        }
        v
    }

    pub fn from_json(v: &Value) -> StoreResult<Self> {
        Ok(LineRecord {
            line: line_from_json(v)?,
            provenance: match v.get("provenance") {
                Some(p) => Provenance::from_json(p)?,
                None => Provenance {
                    strategy: "unknown".into(),
                    seed: None,
                    trials: None,
                    timestamp: None,
                },
            },
            report: v.get("report").cloned(),
        })
    }
}

/// A versioned collection of records; failed sampling slots are kept alongside.
#[derive(Debug, Clone, Default)]
pub struct LineStore {
    /// Raw record objects; parsing happens on use so one bad record does not block the rest.
    pub records: Vec<Value>,
    pub failures: Vec<Value>,
}

impl LineStore {
    pub fn push(&mut self, r: &LineRecord) {
        self.records.push(r.to_json());
    }

    pub fn to_json(&self) -> Value {
        json!({
            "format": FORMAT_VERSION,
            "records": self.records,
            "failures": self.failures,
        })
    }

    /// Canonical text: pretty-printed, sorted keys, trailing newline.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> StoreResult<Self> {
        let v: Value = serde_json::from_str(text)?;
        let format = v
            .get("format")
            .and_then(Value::as_u64)
            .ok_or_else(|| StoreError::Malformed("missing format".into()))?;
        if format != FORMAT_VERSION {
            return Err(StoreError::Format(format));
        }
        let arr = |key: &str| -> StoreResult<Vec<Value>> {
            match v.get(key) {
                None => Ok(Vec::new()),
                Some(Value::Array(a)) => Ok(a.clone()),
                Some(_) => Err(StoreError::Malformed(format!("{key} must be an array"))),
            }
        };
        Ok(LineStore {
            records: arr("records")?,
            failures: arr("failures")?,
        })
    }

    pub fn load(path: &Path) -> StoreResult<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> StoreResult<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Classification of one stored record; the line must lie in Q.
pub fn classify_record(v: &Value) -> StoreResult<FiberReport> {
    let line = line_from_json(v)?;
    Ok(classify_line(&line)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::z5::example_line;

    #[test]
    fn round_trip_is_byte_identical() {
        let mut store = LineStore::default();
        store.push(&LineRecord::from_line(example_line(FieldSpec::Rational), "z5-example").unwrap());
        store.push(&LineRecord::from_line(example_line(FieldSpec::Prime(31)), "z5-example").unwrap());
        let text = store.to_text();
        let back = LineStore::from_text(&text).unwrap();
        assert_eq!(back.to_text(), text);
        let rec = LineRecord::from_json(&back.records[0]).unwrap();
        assert_eq!(rec.line, example_line(FieldSpec::Rational));
    }

    #[test]
    fn bad_rows_rejected() {
        let v = json!({"field": {"kind": "prime", "modulus": "31"}, "rows": [["1"], ["2"]]});
        assert!(matches!(line_from_json(&v), Err(StoreError::Malformed(_))));
    }
}
