//! JSON encodings for orders, certificates and reports.
//!
//! Partial orders serialize as generator edges and are transitively closed
//! on load; total orders serialize as their permutation. Malformed input is
//! a load error, never a silent repair.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::construct::{ConstructionFamily, ProofCheckReport, StarReport};
use crate::error::{Error, Result};
use crate::order::{OrderRelation, TotalOrder};
use crate::shatter::{ShatterCertificate, VcReport};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderJson {
    pub n: usize,
    pub relations: Vec<(u32, u32)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TotalOrderJson {
    pub n: usize,
    pub seq: Vec<u32>,
}

/// Either order form; totals are orders too, so readers accept both.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyOrderJson {
    Relations(OrderJson),
    Seq(TotalOrderJson),
}

pub fn order_to_json(order: &OrderRelation) -> OrderJson {
    OrderJson {
        n: order.n(),
        relations: order.edges(),
    }
}

pub fn order_from_json(doc: &OrderJson) -> Result<OrderRelation> {
    OrderRelation::from_generators(doc.n, &doc.relations).map_err(invariant_from)
}

pub fn total_to_json(order: &TotalOrder) -> TotalOrderJson {
    TotalOrderJson {
        n: order.n(),
        seq: order.seq().to_vec(),
    }
}

pub fn total_from_json(doc: &TotalOrderJson) -> Result<TotalOrder> {
    if doc.seq.len() != doc.n {
        return Err(Error::InvariantViolation {
            what: "total order",
            detail: format!("n = {} but seq has {} entries", doc.n, doc.seq.len()),
        });
    }
    TotalOrder::from_seq(doc.seq.clone()).map_err(invariant_from)
}

pub fn any_order_from_json(doc: &AnyOrderJson) -> Result<OrderRelation> {
    match doc {
        AnyOrderJson::Relations(o) => order_from_json(o),
        AnyOrderJson::Seq(t) => Ok(total_from_json(t)?.to_relation()),
    }
}

fn invariant_from(e: Error) -> Error {
    match e {
        Error::CyclicInput => Error::InvariantViolation {
            what: "order",
            detail: "generator edges contain a directed cycle".into(),
        },
        other => other,
    }
}

/// Parses an order (either encoding) from a JSON string.
pub fn parse_order(text: &str) -> Result<OrderRelation> {
    let doc: AnyOrderJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    any_order_from_json(&doc)
}

/// Compact single-line encoding of an order.
pub fn order_json_string(order: &OrderRelation) -> String {
    serde_json::to_string(&order_to_json(order)).expect("serializable")
}

/// Pretty encoding of a certificate.
pub fn certificate_json_string(cert: &ShatterCertificate) -> String {
    serde_json::to_string_pretty(&certificate_to_json(cert)).expect("serializable")
}

pub fn load_order(path: &Path) -> Result<OrderRelation> {
    parse_order(&read(path)?)
}

pub fn save_order(path: &Path, order: &OrderRelation) -> Result<()> {
    write(path, &to_pretty(&order_to_json(order))?)
}

pub fn parse_total_order(text: &str) -> Result<TotalOrder> {
    let doc: TotalOrderJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    total_from_json(&doc)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub n: usize,
    pub ground: Vec<OrderJson>,
    /// Witness per subset bitmask, keyed by the mask as a decimal string.
    pub witnesses: BTreeMap<String, OrderJson>,
}

pub fn certificate_to_json(cert: &ShatterCertificate) -> CertificateJson {
    let n = cert
        .ground()
        .first()
        .map(OrderRelation::n)
        .or_else(|| cert.witnesses().values().next().map(OrderRelation::n))
        .unwrap_or(1);
    CertificateJson {
        n,
        ground: cert.ground().iter().map(order_to_json).collect(),
        witnesses: cert
            .witnesses()
            .iter()
            .map(|(mask, w)| (mask.to_string(), order_to_json(w)))
            .collect(),
    }
}

pub fn certificate_from_json(doc: &CertificateJson) -> Result<ShatterCertificate> {
    let ground = doc
        .ground
        .iter()
        .map(order_from_json)
        .collect::<Result<Vec<_>>>()?;
    let mut witnesses = BTreeMap::new();
    for (key, w) in &doc.witnesses {
        let mask: u64 = key
            .parse()
            .map_err(|_| Error::Parse(format!("witness mask key {key:?} is not an integer")))?;
        witnesses.insert(mask, order_from_json(w)?);
    }
    Ok(ShatterCertificate::from_parts(ground, witnesses))
}

pub fn parse_certificate(text: &str) -> Result<ShatterCertificate> {
    let doc: CertificateJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    certificate_from_json(&doc)
}

pub fn load_certificate(path: &Path) -> Result<ShatterCertificate> {
    parse_certificate(&read(path)?)
}

pub fn save_certificate(path: &Path, cert: &ShatterCertificate) -> Result<()> {
    write(path, &to_pretty(&certificate_to_json(cert))?)
}

/// Shattered-set file for the proof checker: a list of total orders.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TotalOrderSetJson {
    pub n: usize,
    pub set: Vec<TotalOrderJson>,
}

pub fn total_set_to_json(n: usize, set: &[TotalOrder]) -> TotalOrderSetJson {
    TotalOrderSetJson {
        n,
        set: set.iter().map(total_to_json).collect(),
    }
}

pub fn total_set_from_json(doc: &TotalOrderSetJson) -> Result<Vec<TotalOrder>> {
    doc.set
        .iter()
        .map(|t| {
            if t.n != doc.n {
                return Err(Error::SizeMismatch {
                    left: doc.n,
                    right: t.n,
                });
            }
            total_from_json(t)
        })
        .collect()
}

pub fn load_total_set(path: &Path) -> Result<(usize, Vec<TotalOrder>)> {
    let doc: TotalOrderSetJson =
        serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((doc.n, total_set_from_json(&doc)?))
}

pub fn save_total_set(path: &Path, n: usize, set: &[TotalOrder]) -> Result<()> {
    write(path, &to_pretty(&total_set_to_json(n, set))?)
}

pub fn family_to_json(fam: &ConstructionFamily) -> Value {
    json!({
        "kind": fam.kind().as_str(),
        "n": fam.n(),
        "k": fam.k(),
        "part_count": fam.len(),
        "vertex_names": fam.vertex_names(),
        "parts": fam
            .parts()
            .iter()
            .zip(fam.part_names())
            .map(|(p, name)| json!({ "name": name, "edges": p.edges() }))
            .collect::<Vec<_>>(),
    })
}

pub fn star_report_to_json(report: &StarReport) -> Value {
    json!({
        "kind": report.kind.as_str(),
        "n": report.n,
        "part_count": report.part_count,
        "subsets_tested": report.subsets_tested,
        "failures": report
            .failures
            .iter()
            .map(|f| json!({ "subset": f.subset, "detail": f.detail }))
            .collect::<Vec<_>>(),
        "fallback_count": report.fallback_count,
        "passed": report.passed(),
    })
}

pub fn proofcheck_report_to_json(report: &ProofCheckReport) -> Value {
    json!({
        "n": report.n,
        "set_size": report.set_size,
        "edge_count": report.edge_count,
        "edges": report.edge_graph.edges(),
        "assignment": report
            .edge_assignment
            .iter()
            .map(|a| json!({
                "ground_index": a.ground_index,
                "edge": a.edge,
                "witness": order_to_json(&a.witness),
            }))
            .collect::<Vec<_>>(),
        "checks": {
            "acyclic": report.checks.acyclic,
            "no_parallel_path": report.checks.no_parallel_path,
            "triangle_free": report.checks.triangle_free,
            "mantel_bound": report.checks.mantel_bound,
        },
        "all_checks_passed": report.checks.all(),
    })
}

pub fn vc_report_to_json(report: &VcReport) -> Value {
    json!({
        "dimension": report.dimension,
        "ground_indices": report.ground_indices,
        "exhaustion": serde_json::to_value(&report.exhaustion).expect("serializable"),
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_round_trip() {
        let ord = OrderRelation::from_generators(4, &[(1, 2), (3, 4)]).unwrap();
        let doc = order_to_json(&ord);
        assert_eq!(order_from_json(&doc).unwrap(), ord);
    }

    #[test]
    fn load_closes_generators() {
        let ord = parse_order(r#"{"n":3,"relations":[[1,2],[2,3]]}"#).unwrap();
        assert!(ord.less(1, 3));
    }

    #[test]
    fn cyclic_generators_rejected() {
        let err = parse_order(r#"{"n":2,"relations":[[1,2],[2,1]]}"#).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { .. }));
    }

    #[test]
    fn malformed_json_is_parse_error() {
        assert!(matches!(parse_order("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_order(r#"{"n":2}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn seq_encoding_accepted_for_orders() {
        let ord = parse_order(r#"{"n":3,"seq":[3,1,2]}"#).unwrap();
        assert!(ord.is_total());
        assert!(ord.less(3, 2));
    }

    #[test]
    fn total_order_validation() {
        assert!(parse_total_order(r#"{"n":3,"seq":[1,2,3]}"#).is_ok());
        assert!(parse_total_order(r#"{"n":3,"seq":[1,2]}"#).is_err());
        assert!(parse_total_order(r#"{"n":3,"seq":[1,2,2]}"#).is_err());
    }

    #[test]
    fn certificate_round_trip() {
        let ground: Vec<OrderRelation> = [[1u32, 2, 3], [2, 3, 1], [3, 1, 2]]
            .iter()
            .map(|s| TotalOrder::from_seq(s.to_vec()).unwrap().to_relation())
            .collect();
        let witnesses = crate::enumerate::Family::all_partial(3).unwrap();
        let cert = crate::shatter::is_shattered(&ground, &witnesses)
            .unwrap()
            .expect("cyclic-shift triple is shattered at n=3");
        let doc = certificate_to_json(&cert);
        let text = serde_json::to_string(&doc).unwrap();
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back, cert);
        assert!(crate::shatter::verify_certificate(&back).is_ok());
    }
}
