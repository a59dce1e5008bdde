//! Text formats: graph files, embedding files and layout files.
//!
//! Graph file: the vertex count on the first line, then comma-separated
//! `u v` pairs (on one or more lines). `#` starts a comment. A `;` may stand
//! in for the first line break, so `4; 0 1,0 2` is a complete graph file.

use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError};
use crate::layout::{LayoutError, LinearLayout, VertexOrder};
use crate::rotation::{RotationError, RotationSystem};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rotation(#[from] RotationError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

fn malformed(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim().to_string()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

fn parse_usize(tok: &str, line: usize) -> Result<usize, FormatError> {
    tok.parse()
        .map_err(|_| malformed(line, format!("expected a vertex id, found {tok:?}")))
}

fn parse_pair(item: &str, line: usize) -> Result<(usize, usize), FormatError> {
    let toks: Vec<&str> = item.split_whitespace().collect();
    match toks.as_slice() {
        [a, b] => Ok((parse_usize(a, line)?, parse_usize(b, line)?)),
        _ => Err(malformed(line, format!("expected \"u v\", found {item:?}"))),
    }
}

fn parse_pair_list(body: &str, line: usize) -> Result<Vec<(usize, usize)>, FormatError> {
    body.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_pair(s, line))
        .collect()
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut lines = content_lines(text);
    if lines.is_empty() {
        return Err(malformed(1, "missing vertex count"));
    }
    let (first_no, first) = lines.remove(0);
    let (head, rest) = match first.split_once(';') {
        Some((h, r)) => (h.trim().to_string(), Some(r.trim().to_string())),
        None => (first.clone(), None),
    };
    let n = head
        .parse::<usize>()
        .map_err(|_| malformed(first_no, format!("expected vertex count, found {head:?}")))?;
    let mut pairs = Vec::new();
    if let Some(r) = rest {
        pairs.extend(parse_pair_list(&r, first_no)?);
    }
    for (no, l) in &lines {
        pairs.extend(parse_pair_list(l, *no)?);
    }
    Ok(Graph::from_edges(n, pairs)?)
}

pub fn serialize_graph(g: &Graph) -> String {
    let pairs: Vec<String> = g.edges().iter().map(|e| e.to_string()).collect();
    format!("{}\n{}\n", g.vertex_count(), pairs.join(","))
}

/// Embedding file: line `i` lists the neighbors of vertex `i` counterclockwise.
/// Isolated vertices have empty lines, so blank lines count here; only
/// trailing blank lines and `#` comment lines are ignored.
pub fn parse_rotation(text: &str, g: &Graph) -> Result<RotationSystem, FormatError> {
    let mut rows: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .collect();
    while rows.len() > g.vertex_count() && rows.last().is_some_and(|(_, l)| l.is_empty()) {
        rows.pop();
    }
    let mut rot = Vec::with_capacity(rows.len());
    for (no, l) in rows {
        // Accept an optional "v:" prefix.
        let body = match l.split_once(':') {
            Some((_, b)) => b,
            None => l,
        };
        let list = body
            .split_whitespace()
            .map(|t| parse_usize(t, no))
            .collect::<Result<Vec<_>, _>>()?;
        rot.push(list);
    }
    Ok(RotationSystem::new(g, rot)?)
}

pub fn serialize_rotation(r: &RotationSystem) -> String {
    let mut s = String::new();
    for list in r.rotations() {
        let toks: Vec<String> = list.iter().map(usize::to_string).collect();
        s.push_str(&toks.join(" "));
        s.push('\n');
    }
    s
}

/// Layout file: `order: v0 v1 ...` followed by `page i: u v, u v, ...`
/// lines with `i` counted from 1.
pub fn parse_layout(text: &str) -> Result<LinearLayout, FormatError> {
    let mut order: Option<VertexOrder> = None;
    let mut pages: Vec<(usize, Vec<Edge>)> = Vec::new();
    for (no, l) in content_lines(text) {
        let (key, body) = l
            .split_once(':')
            .ok_or_else(|| malformed(no, "expected \"order:\" or \"page i:\""))?;
        let key = key.trim();
        if key == "order" {
            let seq = body
                .split_whitespace()
                .map(|t| parse_usize(t, no))
                .collect::<Result<Vec<_>, _>>()?;
            order = Some(VertexOrder::from_sequence(seq)?);
        } else if let Some(idx) = key.strip_prefix("page") {
            let idx = parse_usize(idx.trim(), no)?;
            let mut edges = Vec::new();
            for (a, b) in parse_pair_list(body, no)? {
                if a == b {
                    return Err(GraphError::SelfLoop(a).into());
                }
                edges.push(Edge::new(a, b));
            }
            pages.push((idx, edges));
        } else {
            return Err(malformed(no, format!("unknown key {key:?}")));
        }
    }
    let order = order.ok_or_else(|| malformed(1, "missing order line"))?;
    pages.sort_by_key(|(i, _)| *i);
    for (expect, (i, _)) in pages.iter().enumerate() {
        if *i != expect + 1 {
            return Err(malformed(1, format!("page numbers must be 1..k, found {i}")));
        }
    }
    Ok(LinearLayout::new(order, pages.into_iter().map(|(_, e)| e).collect()))
}

pub fn serialize_layout(layout: &LinearLayout) -> String {
    let seq: Vec<String> = layout.order.sequence().iter().map(usize::to_string).collect();
    let mut s = format!("order: {}\n", seq.join(" "));
    for (i, page) in layout.pages.iter().enumerate() {
        let pairs: Vec<String> = page.iter().map(|e| e.to_string()).collect();
        s.push_str(&format!("page {}: {}\n", i + 1, pairs.join(", ")));
    }
    s
}

/// Path line: `path: v1 v2 ...`.
pub fn serialize_path(path: &[usize]) -> String {
    let toks: Vec<String> = path.iter().map(usize::to_string).collect();
    format!("path: {}\n", toks.join(" "))
}

pub fn parse_path(text: &str) -> Result<Vec<usize>, FormatError> {
    for (no, l) in content_lines(text) {
        if let Some(body) = l.strip_prefix("path:") {
            return body.split_whitespace().map(|t| parse_usize(t, no)).collect();
        }
    }
    Err(malformed(1, "missing path line"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_examples() {
        let k4 = parse_graph("4; 0 1,0 2,0 3,1 2,1 3,2 3").unwrap();
        assert_eq!(k4, Graph::complete(4));
        let single = parse_graph("1;").unwrap();
        assert_eq!((single.vertex_count(), single.edge_count()), (1, 0));
        assert_eq!(
            parse_graph("3; 0 1,0 1"),
            Err(FormatError::Graph(GraphError::DuplicateEdge(Edge::new(0, 1))))
        );
    }

    #[test]
    fn graph_file_with_comments_and_lines() {
        let g = parse_graph("# cycle\n3\n0 1, 1 2\n2 0 # closing edge\n").unwrap();
        assert_eq!(g, Graph::cycle(3));
        assert!(matches!(parse_graph("3\n0 1 2"), Err(FormatError::Malformed { line: 2, .. })));
        assert!(matches!(parse_graph("x"), Err(FormatError::Malformed { .. })));
        assert!(matches!(
            parse_graph("2\n0 2"),
            Err(FormatError::Graph(GraphError::VertexOutOfRange { .. }))
        ));
        assert_eq!(parse_graph(&serialize_graph(&Graph::empty(3))).unwrap(), Graph::empty(3));
    }

    #[test]
    fn rotation_examples() {
        let k4 = Graph::complete(4);
        let r = parse_rotation("1 2 3\n0 3 2\n0 1 3\n0 2 1\n", &k4).unwrap();
        assert!(r.is_plane());
        assert_eq!(r.face_count(), 4);
        assert_eq!(parse_rotation(&serialize_rotation(&r), &k4).unwrap(), r);

        let c4 = Graph::cycle(4);
        let r = parse_rotation("1 3\n0 2\n1 3\n2 0\n", &c4).unwrap();
        assert_eq!(r.face_count(), 2);

        assert!(parse_rotation("1 2\n0 2\n1 0\n", &Graph::path(3)).is_err());
    }

    #[test]
    fn rotation_with_isolated_vertex() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let r = parse_rotation("1\n0\n\n", &g).unwrap();
        assert_eq!(r.rotation(2), &[] as &[usize]);
    }

    #[test]
    fn layout_round_trip() {
        let text = "order: 0 2 1 3\npage 1: 0 1, 2 3\npage 2: 0 2\n";
        let l = parse_layout(text).unwrap();
        assert_eq!(l.order.sequence(), &[0, 2, 1, 3]);
        assert_eq!(l.pages.len(), 2);
        assert_eq!(serialize_layout(&l), text);
        assert!(parse_layout("page 1: 0 1\n").is_err());
        assert!(parse_layout("order: 0 0\n").is_err());
        assert!(parse_layout("order: 0 1\npage 2: 0 1\n").is_err());
    }

    #[test]
    fn path_line() {
        assert_eq!(parse_path(&serialize_path(&[2, 0, 1])).unwrap(), vec![2, 0, 1]);
    }
}
