//! Text format for measurement patterns.
//!
//! ```text
//! # two-node J(0)
//! node 1 2
//! edge 1 2
//! input 1
//! output 2
//! angle 1 0
//! flow 1 2
//! ```
//!
//! Angles are integers `k` meaning `k·π/4`, restricted to `{0, 1, 2, 4, 6}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use super::graph::{NodeId, OpenGraph};
use super::pattern::{MeasurementPattern, ALLOWED_OCTANTS};
use crate::angle::Angle;
use crate::error::{Error, Result};

fn node(tok: &str, line: usize) -> Result<NodeId> {
    tok.parse::<u32>()
        .map(NodeId)
        .map_err(|_| Error::parse(line, format!("`{tok}` is not a node id")))
}

pub fn parse_pattern(text: &str) -> Result<MeasurementPattern> {
    let mut nodes = BTreeSet::new();
    let mut edges = Vec::new();
    let mut inputs: Option<Vec<NodeId>> = None;
    let mut outputs: Option<Vec<NodeId>> = None;
    let mut angles = BTreeMap::new();
    let mut flow = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = content.split_whitespace();
        let Some(kw) = toks.next() else { continue };
        let args: Vec<&str> = toks.collect();
        let ids = || {
            args.iter()
                .map(|t| node(t, line))
                .collect::<Result<Vec<_>>>()
        };
        let exactly = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::parse(line, format!("`{kw}` takes {n} arguments")))
            }
        };
        match kw {
            "node" => {
                if args.is_empty() {
                    return Err(Error::parse(line, "`node` needs at least one id"));
                }
                nodes.extend(ids()?);
            }
            "edge" => {
                exactly(2)?;
                let v = ids()?;
                edges.push((v[0], v[1]));
            }
            "input" | "output" => {
                let slot = if kw == "input" {
                    &mut inputs
                } else {
                    &mut outputs
                };
                if slot.is_some() {
                    return Err(Error::parse(line, format!("`{kw}` given twice")));
                }
                *slot = Some(ids()?);
            }
            "angle" => {
                exactly(2)?;
                let n = node(args[0], line)?;
                let k: u8 = args[1]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("`{}` is not an angle", args[1])))?;
                if !ALLOWED_OCTANTS.contains(&k) {
                    return Err(Error::parse(
                        line,
                        format!("angle {k} (x pi/4) not in {{0, 1, 2, 4, 6}}"),
                    ));
                }
                if angles.insert(n, Angle::Octant(k)).is_some() {
                    return Err(Error::parse(line, format!("second angle for node {n}")));
                }
            }
            "flow" => {
                exactly(2)?;
                let v = ids()?;
                if flow.insert(v[0], v[1]).is_some() {
                    return Err(Error::parse(
                        line,
                        format!("second flow entry for node {}", v[0]),
                    ));
                }
            }
            other => return Err(Error::parse(line, format!("unknown record `{other}`"))),
        }
    }
    let graph = OpenGraph::new(
        nodes,
        edges,
        inputs.unwrap_or_default(),
        outputs.unwrap_or_default(),
    )?;
    MeasurementPattern::from_flow(graph, flow, angles)
}

pub fn load_pattern(path: &Path) -> Result<MeasurementPattern> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_pattern(&text).map_err(|e| e.in_file(path))
}

pub fn format_pattern(pattern: &MeasurementPattern) -> String {
    let g = pattern.graph();
    let join = |v: &[NodeId]| {
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    let all: Vec<NodeId> = g.nodes().iter().copied().collect();
    writeln!(out, "node {}", join(&all)).unwrap();
    for (a, b) in g.edges() {
        writeln!(out, "edge {a} {b}").unwrap();
    }
    writeln!(out, "input {}", join(g.inputs())).unwrap();
    writeln!(out, "output {}", join(g.outputs())).unwrap();
    for (n, a) in pattern.angles() {
        match a.as_octant() {
            Some(k) => writeln!(out, "angle {n} {k}").unwrap(),
            None => writeln!(
                out,
                "# angle {n} {} rad is not representable",
                a.as_radians()
            )
            .unwrap(),
        }
    }
    for (x, fx) in pattern.flow().map() {
        writeln!(out, "flow {x} {fx}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const J0: &str =
        "# J(0)\nnode 1 2\nedge 1 2\ninput 1\noutput 2\nangle 1 0  # measure at 0\nflow 1 2\n";

    #[test]
    fn parses_and_round_trips() {
        let p = parse_pattern(J0).unwrap();
        assert_eq!(p.angle(NodeId(1)), Some(Angle::ZERO));
        let again = parse_pattern(&format_pattern(&p)).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = J0.replace("angle 1 0", "angle 1 3");
        match parse_pattern(&bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_pattern("node 1\nwibble 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
