//! Graph serialization: the stable JSON schema and DOT output.
//!
//! JSON field order is fixed by struct declaration order; output is UTF-8
//! and newline-terminated, so equal graphs export byte-identically.

use crate::algebra::{make_field, FieldSpec, ProjPoint};
use crate::error::Error;
use crate::grammar::parse_fq;
use crate::hecke::{Edge, GraphVertex, HeckeGraph, Level, OperatorDesc, PlaceSpec};
use crate::reduction::{RamVertex, UnramVertex};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Serialize, Deserialize)]
struct VertexJson {
    n: u32,
    w: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeJson {
    src: usize,
    dst: usize,
    mult: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    q: u64,
    level: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    degree_y: u32,
    at_x: bool,
    radius: u32,
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
    frontier: Vec<usize>,
}

fn vertex_to_json(v: &GraphVertex, f: &FieldSpec) -> VertexJson {
    match v {
        GraphVertex::Unram(UnramVertex(n)) => VertexJson { n: *n, w: "base".into() },
        GraphVertex::Ram(RamVertex::Base) => VertexJson { n: 0, w: "base".into() },
        GraphVertex::Ram(RamVertex::Pair(n, w)) => {
            VertexJson { n: *n, w: w.format(f) }
        }
    }
}

fn vertex_from_json(v: &VertexJson, level: Level, f: &FieldSpec) -> Result<GraphVertex, Error> {
    match level {
        Level::Unramified => {
            if v.w != "base" {
                return Err(Error::Parse(format!("unramified vertex with label {}", v.w)));
            }
            Ok(GraphVertex::Unram(UnramVertex(v.n)))
        }
        Level::RamifiedL1 => {
            if v.w == "base" {
                if v.n != 0 {
                    return Err(Error::Parse("base vertex with nonzero index".into()));
                }
                return Ok(GraphVertex::Ram(RamVertex::Base));
            }
            Ok(GraphVertex::Ram(RamVertex::Pair(v.n, parse_proj(&v.w, f)?)))
        }
        Level::GeneralR(_) => Err(Error::Parse("no vertex encoding at general level".into())),
    }
}

pub(crate) fn parse_proj(s: &str, f: &FieldSpec) -> Result<ProjPoint, Error> {
    let body = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("bad projective point {s}")))?;
    let (lhs, rhs) = body
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("bad projective point {s}")))?;
    match (lhs.trim(), rhs.trim()) {
        ("0", "1") => Ok(ProjPoint::Infinity),
        ("1", a) => Ok(ProjPoint::Finite(parse_fq(a, f)?)),
        _ => Err(Error::Parse(format!("bad projective point {s}"))),
    }
}

/// Serializes the graph to the stable JSON schema, newline-terminated.
pub fn graph_to_json(g: &HeckeGraph) -> String {
    let f = &g.desc.field;
    let (level, r) = match g.desc.level {
        Level::Unramified => ("K", None),
        Level::RamifiedL1 => ("K1", None),
        Level::GeneralR(r) => ("Kr", Some(r)),
    };
    let (degree_y, at_x) = match g.desc.place {
        PlaceSpec::AtX => (1, true),
        PlaceSpec::DegreeD(d) => (d, false),
    };
    let doc = GraphJson {
        q: f.q(),
        level: level.into(),
        r,
        degree_y,
        at_x,
        radius: g.radius,
        vertices: g.vertices.iter().map(|v| vertex_to_json(v, f)).collect(),
        edges: g
            .edges
            .iter()
            .map(|e| EdgeJson { src: e.src, dst: e.dst, mult: e.mult })
            .collect(),
        frontier: g.frontier.iter().copied().collect(),
    };
    let mut s = serde_json::to_string(&doc).expect("serialization");
    s.push('\n');
    s
}

/// Parses a graph back from the JSON schema. The field is reconstructed from
/// q (a prime power factors uniquely), so the round trip is exact.
pub fn graph_from_json(s: &str) -> Result<HeckeGraph, Error> {
    let doc: GraphJson =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("graph json: {e}")))?;
    let (p, e) = factor_prime_power(doc.q)
        .ok_or_else(|| Error::Parse(format!("{} is not a prime power", doc.q)))?;
    let field = make_field(p, e)?;
    let level = match doc.level.as_str() {
        "K" => Level::Unramified,
        "K1" => Level::RamifiedL1,
        "Kr" => Level::GeneralR(doc.r.ok_or_else(|| Error::Parse("Kr without r".into()))?),
        other => return Err(Error::Parse(format!("unknown level {other}"))),
    };
    let place = if doc.at_x { PlaceSpec::AtX } else { PlaceSpec::DegreeD(doc.degree_y) };
    let desc = OperatorDesc::new(field, level, place)?;
    let vertices: Vec<GraphVertex> = doc
        .vertices
        .iter()
        .map(|v| vertex_from_json(v, level, &desc.field))
        .collect::<Result<_, _>>()?;
    let nvert = vertices.len();
    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in &doc.edges {
        if e.src >= nvert || e.dst >= nvert || e.mult == 0 {
            return Err(Error::Parse("edge out of range".into()));
        }
        edges.push(Edge { src: e.src, dst: e.dst, mult: e.mult });
    }
    let frontier: BTreeSet<usize> = doc.frontier.iter().copied().collect();
    if frontier.iter().any(|&i| i >= nvert) {
        return Err(Error::Parse("frontier index out of range".into()));
    }
    Ok(HeckeGraph { desc, radius: doc.radius, vertices, edges, frontier })
}

pub fn factor_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut e = 0;
            let mut rest = q;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            return if rest == 1 { Some((p, e)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

/// DOT output: one node per vertex labelled c_n or c'_{n,w}, one directed
/// edge per (src, dst) pair labelled with its multiplicity. Paired reverse
/// edges stay as two directed edges.
pub fn graph_to_dot(g: &HeckeGraph) -> String {
    let f = &g.desc.field;
    let mut out = String::from("digraph hecke {\n  rankdir=LR;\n");
    for (i, v) in g.vertices.iter().enumerate() {
        let style = if g.is_frontier(i) { ", style=dashed" } else { "" };
        out.push_str(&format!("  v{} [label=\"{}\"{}];\n", i, v.format(f), style));
    }
    for e in &g.edges {
        out.push_str(&format!("  v{} -> v{} [label=\"{}\"];\n", e.src, e.dst, e.mult));
    }
    out.push_str("}\n");
    out
}

/// Structural equality for round-trip checks: same field model, level,
/// place, radius, vertices, edges and frontier.
pub fn same_graph(a: &HeckeGraph, b: &HeckeGraph) -> bool {
    a.desc.field == b.desc.field
        && a.desc.level == b.desc.level
        && a.desc.place == b.desc.place
        && a.radius == b.radius
        && a.vertices == b.vertices
        && a.edges == b.edges
        && a.frontier == b.frontier
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;
    use crate::hecke::build_graph;

    #[test]
    fn json_round_trip_is_identical() {
        for (q, level, place) in [
            (2u64, Level::Unramified, PlaceSpec::DegreeD(2)),
            (3, Level::RamifiedL1, PlaceSpec::DegreeD(1)),
            (2, Level::RamifiedL1, PlaceSpec::AtX),
        ] {
            let f = make_field(q, 1).unwrap();
            let desc = OperatorDesc::new(f, level, place).unwrap();
            let g = build_graph(&desc, 5).unwrap();
            let json = graph_to_json(&g);
            let g2 = graph_from_json(&json).unwrap();
            assert!(same_graph(&g, &g2));
            assert_eq!(graph_to_json(&g2), json);
        }
    }

    #[test]
    fn prime_power_factoring() {
        assert_eq!(factor_prime_power(8), Some((2, 3)));
        assert_eq!(factor_prime_power(9), Some((3, 2)));
        assert_eq!(factor_prime_power(7), Some((7, 1)));
        assert_eq!(factor_prime_power(12), None);
        assert_eq!(factor_prime_power(1), None);
    }

    #[test]
    fn dot_contains_labels_and_edges() {
        let f = make_field(2, 1).unwrap();
        let desc = OperatorDesc::new(f, Level::RamifiedL1, PlaceSpec::AtX).unwrap();
        let g = build_graph(&desc, 2).unwrap();
        let dot = graph_to_dot(&g);
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("c'_0"));
        assert!(dot.contains("->"));
    }
}
