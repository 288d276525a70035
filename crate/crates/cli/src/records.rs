use std::str::FromStr;

use num_bigint::BigInt;
use pellcrit::{StatusKind, Verdict};
use serde::{Deserialize, Serialize};
use serde_json::Number;

pub type Witness = [Number; 2];

pub fn witness(v: &Verdict) -> Option<Witness> {
    v.witness().map(|(x, y)| [big(x), big(y)])
}

fn big(v: &BigInt) -> Number {
    Number::from_str(&v.to_string()).expect("integers are valid JSON numbers")
}

pub fn status(k: StatusKind) -> String {
    k.as_str().to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub criteria_ms: f64,
    pub oracle_ms: f64,
}

/// One decision for `x² − Dy² = n`, alongside the oracle's answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    #[serde(rename = "D")]
    pub d: i64,
    pub n: i64,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    pub provenance: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    pub oracle_status: String,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<Timings>,
}

/// A trichotomy classification and the targets the oracle finds solvable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub p: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<u64>,
    #[serde(rename = "D")]
    pub d: i64,
    pub target: Option<i64>,
    pub provenance: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    pub oracle_targets: Vec<i64>,
    pub agree: bool,
}

/// Θ-character values for `D = 2d` and the closed forms they are checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterCheck {
    pub d: u64,
    #[serde(rename = "D")]
    pub big_d: i64,
    pub theta: [Number; 3],
    pub chi: [i8; 4],
    pub pm3: bool,
    pub norm_one: bool,
    pub minus_one: bool,
    pub mod16: bool,
    pub quartic_2: bool,
    pub multiplicative: bool,
    pub ok: bool,
}

/// Flat CSV form of any record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub family: String,
    #[serde(rename = "D")]
    pub d: i64,
    pub key: String,
    pub result: String,
    pub provenance: String,
    pub witness_x: Option<String>,
    pub witness_y: Option<String>,
    pub agree: bool,
}

fn split(w: &Option<Witness>) -> (Option<String>, Option<String>) {
    match w {
        Some([x, y]) => (Some(x.to_string()), Some(y.to_string())),
        None => (None, None),
    }
}

impl Row {
    pub fn from_query(family: &str, r: &QueryResult) -> Row {
        let (witness_x, witness_y) = split(&r.witness);
        Row {
            family: family.into(),
            d: r.d,
            key: r.n.to_string(),
            result: r.status.clone(),
            provenance: r.provenance.clone(),
            witness_x,
            witness_y,
            agree: r.agree,
        }
    }

    pub fn from_classification(family: &str, c: &Classification) -> Row {
        let (witness_x, witness_y) = split(&c.witness);
        Row {
            family: family.into(),
            d: c.d,
            key: match c.q {
                Some(q) => format!("{} {}", c.p, q),
                None => c.p.to_string(),
            },
            result: c.target.map_or("none".into(), |t| t.to_string()),
            provenance: c.provenance.clone(),
            witness_x,
            witness_y,
            agree: c.agree,
        }
    }

    pub fn from_characters(c: &CharacterCheck) -> Row {
        Row {
            family: "2d".into(),
            d: c.big_d,
            key: c.d.to_string(),
            result: format!("{:?}", c.chi),
            provenance: "theta-character".into(),
            witness_x: None,
            witness_y: None,
            agree: c.ok,
        }
    }
}
