//! Machine-readable report documents.

use std::str::FromStr;

use num_bigint::BigInt;
use qrrt_core::{Divergence, Status, VerificationReport};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Big integers as bare JSON numbers.
fn ser_big<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    serde_json::Number::from_str(&v.to_string()).map_err(serde::ser::Error::custom)?.serialize(s)
}

fn de_big<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    let n = serde_json::Number::deserialize(d)?;
    BigInt::from_str(&n.to_string()).map_err(serde::de::Error::custom)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonDivergence {
    pub location: String,
    pub a_exp: i64,
    pub q_exp: i64,
    #[serde(serialize_with = "ser_big", deserialize_with = "de_big")]
    pub lhs_coeff: BigInt,
    #[serde(serialize_with = "ser_big", deserialize_with = "de_big")]
    pub rhs_coeff: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonReport {
    pub name: String,
    pub status: String,
    pub q_order: i64,
    pub a_order: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_divergence: Option<JsonDivergence>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub version: u32,
    pub reports: Vec<JsonReport>,
}

impl From<&VerificationReport> for JsonReport {
    fn from(r: &VerificationReport) -> Self {
        JsonReport {
            name: r.target.clone(),
            status: r.status.as_str().to_string(),
            q_order: r.checked_q_order,
            a_order: r.checked_a_order,
            first_divergence: r.first_divergence.as_ref().map(|d| JsonDivergence {
                location: d.location.clone(),
                a_exp: d.a_exp,
                q_exp: d.q_exp,
                lhs_coeff: d.lhs_coeff.clone(),
                rhs_coeff: d.rhs_coeff.clone(),
            }),
            elapsed_ms: r.elapsed_ms,
        }
    }
}

impl JsonReport {
    /// Back to a report; notes are not part of the schema and come back empty.
    pub fn to_report(&self) -> Option<VerificationReport> {
        let status = match self.status.as_str() {
            "pass" => Status::Pass,
            "fail" => Status::Fail,
            "ambiguous" => Status::Ambiguous,
            _ => return None,
        };
        Some(VerificationReport {
            target: self.name.clone(),
            status,
            checked_q_order: self.q_order,
            checked_a_order: self.a_order,
            first_divergence: self.first_divergence.as_ref().map(|d| Divergence {
                location: d.location.clone(),
                a_exp: d.a_exp,
                q_exp: d.q_exp,
                lhs_coeff: d.lhs_coeff.clone(),
                rhs_coeff: d.rhs_coeff.clone(),
            }),
            elapsed_ms: self.elapsed_ms,
            notes: Vec::new(),
        })
    }
}

/// `{"version":1,"reports":[...]}` with keys in schema order.
pub fn emit_json(reports: &[VerificationReport]) -> String {
    let doc = Document { version: 1, reports: reports.iter().map(JsonReport::from).collect() };
    serde_json::to_string(&doc).expect("reports serialize")
}

pub fn parse_json(text: &str) -> serde_json::Result<Vec<VerificationReport>> {
    let doc: Document = serde_json::from_str(text)?;
    doc.reports
        .iter()
        .map(|r| r.to_report().ok_or_else(|| serde::de::Error::custom(format!("unknown status '{}'", r.status))))
        .collect()
}
