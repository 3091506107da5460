//! Graph serialization.
//!
//! Edge list: first line `n m`, then one `u v` line per edge with `u < v`,
//! 0-based, sorted. JSON: `{"n", "directed", "labels", "edges"}`. DOT is
//! write-only.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

pub fn to_edge_list(g: &Graph) -> Result<String> {
    if g.is_directed() {
        return Err(Error::InvalidInput("edge lists hold undirected graphs only".into()));
    }
    let edges = g.edges();
    let mut out = format!("{} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        writeln!(out, "{u} {v}").unwrap();
    }
    Ok(out)
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    let [n, m] = parse_pair(header, 1)?;
    let mut g = Graph::empty(n);
    let mut count = 0;
    for (i, line) in lines {
        let [u, v] = parse_pair(line, i + 1)?;
        if u >= v || v >= n {
            return Err(Error::Parse { line: i + 1, msg: format!("edge {u} {v} needs u < v < n") });
        }
        if g.has_arc(u, v) {
            return Err(Error::Parse { line: i + 1, msg: format!("duplicate edge {u} {v}") });
        }
        g.add_edge(u, v)?;
        count += 1;
    }
    if count != m {
        return Err(Error::Parse { line: 1, msg: format!("header announces {m} edges, found {count}") });
    }
    Ok(g)
}

fn parse_pair(line: &str, lineno: usize) -> Result<[usize; 2]> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse { line: lineno, msg: format!("expected two integers, got {line:?}") });
    }
    let parse = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse { line: lineno, msg: format!("{s:?}: {e}") });
    Ok([parse(fields[0])?, parse(fields[1])?])
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    directed: bool,
    labels: Option<Vec<String>>,
    edges: Vec<[usize; 2]>,
}

pub fn to_json(g: &Graph) -> Result<String> {
    let doc = GraphJson {
        n: g.n(),
        directed: g.is_directed(),
        labels: g.labels().map(<[String]>::to_vec),
        edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

pub fn parse_json(text: &str) -> Result<Graph> {
    let doc: GraphJson = serde_json::from_str(text)?;
    let mut g = if doc.directed { Graph::empty_directed(doc.n) } else { Graph::empty(doc.n) };
    for [u, v] in doc.edges {
        g.add_edge(u, v)?;
    }
    g.set_labels(doc.labels)?;
    Ok(g)
}

/// Parses JSON when the text starts with `{`, an edge list otherwise.
pub fn parse_any(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_edge_list(text)
    }
}

pub fn to_dot(g: &Graph) -> String {
    let (kw, op) = if g.is_directed() { ("digraph", "->") } else { ("graph", "--") };
    let mut out = format!("{kw} G {{\n");
    if let Some(labels) = g.labels() {
        for (v, l) in labels.iter().enumerate() {
            writeln!(out, "  {v} [label=\"{}\"];", l.replace('"', "\\\"")).unwrap();
        }
    }
    for (u, v) in g.edges() {
        writeln!(out, "  {u} {op} {v};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{cayley_graph, grid_graph};
    use crate::group::Group;
    use crate::groupring::connection_set;

    fn family_graph() -> Graph {
        let g = Group::dihedral_klein(3).unwrap();
        cayley_graph(&g, &connection_set(&g, 3).unwrap()).unwrap()
    }

    #[test]
    fn edge_list_header() {
        let text = to_edge_list(&family_graph()).unwrap();
        assert_eq!(text.lines().next(), Some("24 96"));
        assert_eq!(text.lines().count(), 97);
    }

    #[test]
    fn edge_list_round_trip() {
        let text = to_edge_list(&grid_graph(3, 5).unwrap()).unwrap();
        let back = parse_edge_list(&text).unwrap();
        assert_eq!(to_edge_list(&back).unwrap(), text);
    }

    #[test]
    fn json_round_trip() {
        let g = family_graph();
        let text = to_json(&g).unwrap();
        let back = parse_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(to_json(&back).unwrap(), text);
        assert_eq!(parse_any(&text).unwrap(), g);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("3 1\n0 0\n").is_err());
        assert!(parse_edge_list("3 2\n0 1\n").is_err());
        assert!(parse_edge_list("3 1\n2 1\n").is_err());
        assert!(parse_edge_list("3 2\n0 1\n0 1\n").is_err());
        assert!(parse_edge_list("3 x\n").is_err());
        assert!(parse_json("{\"n\": 2}").is_err());
        assert!(parse_json("{\"n\": 2, \"directed\": false, \"labels\": null, \"edges\": [[0, 2]]}").is_err());
    }

    #[test]
    fn dot_output() {
        let dot = to_dot(&grid_graph(2, 2).unwrap());
        assert!(dot.starts_with("graph G {"));
        assert_eq!(dot.matches(" -- ").count(), 4);
        assert!(dot.contains("label=\"(1,1)\""));
    }

    #[test]
    fn directed_edge_list_refused() {
        let mut g = Graph::empty_directed(2);
        g.add_edge(0, 1).unwrap();
        assert!(to_edge_list(&g).is_err());
        let back = parse_json(&to_json(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
