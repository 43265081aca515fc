//! Graph and certificate interchange formats.
//!
//! Graph JSON: `{"n": 6, "edges": [[0,2],[0,3,1.5],...]}` with 0-indexed
//! vertices and an optional third weight element defaulting to 1. Parsing
//! rejects self-loops, out-of-range endpoints, and duplicate pairs.
//! Serialization is canonical — edges sorted, weights always explicit,
//! every number printed with 15 significant digits — so
//! parse-then-serialize is idempotent byte for byte.

use std::collections::BTreeSet;

use crate::graph::Graph;
use crate::transfer::TransferCertificate;
use crate::{Error, Result};

/// Formats with 15 significant digits, trailing zeros trimmed
/// (the `%.15g` convention).
pub fn fmt_g15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.14e}", x);
    let (mant, exp) = sci.split_once('e').expect("always present");
    let p: i32 = exp.parse().expect("valid exponent");
    if !(-4..15).contains(&p) {
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{mant}e{p}")
    } else {
        let prec = (14 - p).max(0) as usize;
        let fixed = format!("{x:.prec$}");
        if fixed.contains('.') {
            fixed
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            fixed
        }
    }
}

/// Parses the graph JSON format.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::GraphFormat(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::GraphFormat("top level must be an object".into()))?;
    let n = obj
        .get("n")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::GraphFormat("missing or non-integer field \"n\"".into()))?
        as usize;
    let edges = obj
        .get("edges")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::GraphFormat("missing or non-array field \"edges\"".into()))?;

    let mut g = Graph::new(n);
    let mut seen = BTreeSet::new();
    for (i, item) in edges.iter().enumerate() {
        let arr = item
            .as_array()
            .filter(|a| a.len() == 2 || a.len() == 3)
            .ok_or_else(|| Error::GraphFormat(format!("edge {i} must be [u, v] or [u, v, w]")))?;
        let u = arr[0]
            .as_u64()
            .ok_or_else(|| Error::GraphFormat(format!("edge {i}: non-integer endpoint")))?
            as usize;
        let v = arr[1]
            .as_u64()
            .ok_or_else(|| Error::GraphFormat(format!("edge {i}: non-integer endpoint")))?
            as usize;
        let w = match arr.get(2) {
            Some(wv) => wv
                .as_f64()
                .filter(|w| w.is_finite())
                .ok_or_else(|| Error::GraphFormat(format!("edge {i}: non-numeric weight")))?,
            None => 1.0,
        };
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
        }
        g.add_edge(u, v, w)?;
    }
    Ok(g)
}

/// Canonical graph JSON.
pub fn graph_to_json(g: &Graph) -> String {
    let edges: Vec<String> = g
        .edges()
        .map(|(u, v, w)| format!("[{u},{v},{}]", fmt_g15(w)))
        .collect();
    format!(
        "{{\"n\":{},\"edges\":[{}]}}",
        g.vertex_count(),
        edges.join(",")
    )
}

/// Certificate JSON: `{"src":[a,b],"dst":[c,d],"time":t,"fidelity":f,
/// "phase":[re,im]|null,"method":tag,"tolerance":tol,"verdict":bool}`.
pub fn certificate_to_json(c: &TransferCertificate) -> String {
    let phase = match c.phase {
        Some(p) => format!("[{},{}]", fmt_g15(p.re), fmt_g15(p.im)),
        None => "null".to_string(),
    };
    format!(
        "{{\"src\":[{},{}],\"dst\":[{},{}],\"time\":{},\"fidelity\":{},\"phase\":{},\"method\":\"{}\",\"tolerance\":{},\"verdict\":{}}}",
        c.src.a(),
        c.src.b(),
        c.dst.a(),
        c.dst.b(),
        fmt_g15(c.time),
        fmt_g15(c.fidelity),
        phase,
        c.method.tag(),
        fmt_g15(c.tolerance),
        c.verdict
    )
}

/// Combined output of the constructors: the graph plus its certificates.
pub fn construction_to_json(g: &Graph, certs: &[TransferCertificate]) -> String {
    let certs: Vec<String> = certs.iter().map(certificate_to_json).collect();
    format!(
        "{{\"graph\":{},\"certificates\":[{}]}}",
        graph_to_json(g),
        certs.join(",")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::complete_bipartite;

    #[test]
    fn g15_formatting() {
        assert_eq!(fmt_g15(0.0), "0");
        assert_eq!(fmt_g15(-0.0), "0");
        assert_eq!(fmt_g15(1.0), "1");
        assert_eq!(fmt_g15(2.0), "2");
        assert_eq!(fmt_g15(-1.5), "-1.5");
        assert_eq!(fmt_g15(0.25), "0.25");
        assert_eq!(fmt_g15(std::f64::consts::FRAC_PI_2), "1.5707963267949");
        assert_eq!(fmt_g15(1e-5), "1e-5");
        assert_eq!(fmt_g15(1e16), "1e16");
        assert_eq!(fmt_g15(0.999999999999999), "0.999999999999999");
        assert_eq!(fmt_g15(123456.789), "123456.789");
    }

    #[test]
    fn parse_minimal_graph() {
        let g = parse_graph(r#"{"n": 3, "edges": [[0,1],[1,2,0.5]]}"#).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.weight(0, 1), 1.0);
        assert_eq!(g.weight(1, 2), 0.5);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(parse_graph("[]").is_err());
        assert!(parse_graph(r#"{"edges": []}"#).is_err());
        assert!(parse_graph(r#"{"n": 2}"#).is_err());
        assert!(parse_graph(r#"{"n": 2, "edges": [[0]]}"#).is_err());
        assert!(parse_graph(r#"{"n": 2, "edges": [[0,0]]}"#).is_err());
        assert!(parse_graph(r#"{"n": 2, "edges": [[0,5]]}"#).is_err());
        assert!(matches!(
            parse_graph(r#"{"n": 2, "edges": [[0,1],[1,0,2.0]]}"#),
            Err(Error::DuplicateEdge(0, 1))
        ));
    }

    #[test]
    fn zero_weight_edge_is_absence() {
        let g = parse_graph(r#"{"n": 3, "edges": [[0,1,0],[1,2]]}"#).unwrap();
        assert_eq!(g.edge_count(), 1);
        // but the pair still counts as used once
        assert!(parse_graph(r#"{"n": 3, "edges": [[0,1,0],[0,1]]}"#).is_err());
    }

    #[test]
    fn round_trip_is_canonical_and_idempotent() {
        let text = r#"{"edges": [[3,  2, 0.5], [0, 2], [0, 1, 2]], "n": 4}"#;
        let once = graph_to_json(&parse_graph(text).unwrap());
        assert_eq!(once, r#"{"n":4,"edges":[[0,1,2],[0,2,1],[2,3,0.5]]}"#);
        let twice = graph_to_json(&parse_graph(&once).unwrap());
        assert_eq!(once, twice);
    }

    #[test]
    fn certificate_json_shape() {
        let g = complete_bipartite(2, 4);
        let cert = crate::transfer::check_pair_lpst(
            &g,
            &crate::graph::PairState::new(0, 2).unwrap(),
            &crate::graph::PairState::new(1, 2).unwrap(),
            std::f64::consts::FRAC_PI_2,
            1e-9,
        )
        .unwrap();
        let js = certificate_to_json(&cert);
        let v: serde_json::Value = serde_json::from_str(&js).unwrap();
        assert_eq!(v["src"], serde_json::json!([0, 2]));
        assert_eq!(v["dst"], serde_json::json!([1, 2]));
        assert_eq!(v["method"], "direct-check");
        assert_eq!(v["verdict"], true);
        assert!(v["phase"].is_array());
        assert!((v["fidelity"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn empty_graph_round_trip() {
        let g = parse_graph(r#"{"n": 0, "edges": []}"#).unwrap();
        assert_eq!(graph_to_json(&g), r#"{"n":0,"edges":[]}"#);
    }
}
