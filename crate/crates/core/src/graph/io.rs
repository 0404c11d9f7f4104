//! Text formats.
//!
//! Graphs use a DIMACS-like layout: an optional run of `c` comment lines,
//! one header `p <n> <m>` (an `edge` token after `p` is tolerated), then
//! `m` lines `e <u> <v>`. Vertices are 0-based unless `one_based` is set.
//! Hypergraphs are JSON objects `{"n": int, "edges": [[int, ...], ...]}`.

use super::{Graph, Hypergraph, HypergraphJson};
use crate::error::{Error, Result};

pub fn parse_graph(text: &str, one_based: bool) -> Result<Graph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |message: String| Error::Parse { line: line_no, message };
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(err("duplicate 'p' header".into()));
                }
                let nums: Vec<&str> = fields[1..].iter().copied().filter(|f| *f != "edge").collect();
                if nums.len() != 2 {
                    return Err(err(format!("expected 'p <n> <m>', found '{line}'")));
                }
                let n = parse_count(nums[0]).map_err(err)?;
                let m = parse_count(nums[1]).map_err(err)?;
                if n == 0 {
                    return Err(err("vertex count must be positive".into()));
                }
                header = Some((n, m, line_no));
            }
            "e" => {
                let Some((n, _, _)) = header else {
                    return Err(err("edge line before 'p' header".into()));
                };
                if fields.len() != 3 {
                    return Err(err(format!("expected 'e <u> <v>', found '{line}'")));
                }
                let mut ends = [0usize; 2];
                for (slot, f) in ends.iter_mut().zip(&fields[1..]) {
                    let v = parse_count(f).map_err(err)?;
                    let v = if one_based {
                        v.checked_sub(1).ok_or_else(|| err("vertex 0 in 1-based input".into()))?
                    } else {
                        v
                    };
                    if v >= n {
                        return Err(err(format!("vertex {f} out of range for {n} vertices")));
                    }
                    *slot = v;
                }
                if ends[0] == ends[1] {
                    return Err(err(format!("loop at vertex {}", fields[1])));
                }
                edges.push((ends[0], ends[1]));
            }
            other => return Err(err(format!("unknown line type '{other}'"))),
        }
    }
    let (n, m, p_line) = header.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing 'p <n> <m>' header".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: p_line,
            message: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, edges)
}

fn parse_count(s: &str) -> std::result::Result<usize, String> {
    s.parse::<usize>()
        .map_err(|_| format!("'{s}' is not a non-negative integer"))
}

impl Graph {
    /// Serializes in the 0-based text format accepted by [`parse_graph`].
    pub fn to_text(&self) -> String {
        let mut s = format!("p {} {}\n", self.n(), self.edge_count());
        for (u, v) in self.edges() {
            s.push_str(&format!("e {u} {v}\n"));
        }
        s
    }
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let raw: HypergraphJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    Hypergraph::new(raw.n, raw.edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_c5() {
        let text = "c five-cycle\np 5 5\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 4 0\n";
        assert_eq!(parse_graph(text, false).unwrap(), Graph::cycle(5).unwrap());
    }

    #[test]
    fn one_based_flag() {
        let text = "p edge 3 2\ne 1 2\ne 2 3\n";
        assert_eq!(parse_graph(text, true).unwrap(), Graph::path(3).unwrap());
        assert!(parse_graph("p 3 1\ne 0 1\n", true).is_err());
    }

    #[test]
    fn round_trips_text() {
        let g = Graph::cycle(7).unwrap().complement();
        assert_eq!(parse_graph(&g.to_text(), false).unwrap(), g);
    }

    #[test]
    fn malformed_edge_cites_line() {
        let err = parse_graph("p 3 2\ne 0 1\ne 1 x\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_graph("p 3 1\n\ne 0 7\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn header_problems() {
        assert!(matches!(parse_graph("e 0 1\n", false), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("p 3 2\ne 0 1\n", false), Err(Error::Parse { line: 1, .. })));
        assert!(parse_graph("", false).is_err());
        assert!(parse_graph("p 0 0\n", false).is_err());
    }

    #[test]
    fn parses_hypergraph_json() {
        let h = parse_hypergraph(r#"{"n": 3, "edges": [[0,1],[1,2]]}"#).unwrap();
        assert_eq!(h.n(), 3);
        assert_eq!(h.edges().len(), 2);
        assert!(parse_hypergraph(r#"{"n": 3, "edges": [[0,1]]}"#).is_err());
        assert!(parse_hypergraph("{").is_err());
    }
}
