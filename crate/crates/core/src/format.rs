//! Text formats.
//!
//! `.2s`: `2s v1`, `n N`, `k K`, then N rows of N tokens (label ids, `-` on the
//! diagonal). `.g`: `g v1`, `n N`, then one `u v` edge per line. `.t`: like `.g`
//! with arcs. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::structure::{Label, TwoStructure, DEFAULT_MAX_N};
use crate::vset::{VertexSet, MAX_VERTICES};

pub fn to_2s(s: &TwoStructure) -> String {
    let mut out = format!("2s v1\nn {}\nk {}\n", s.n(), s.k());
    for v in 0..s.n() {
        let row: Vec<String> = (0..s.n())
            .map(|w| if v == w { "-".to_string() } else { s.label(v, w).to_string() })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn graph_to_g(g: &Graph) -> String {
    let mut out = format!("g v1\nn {}\n", g.n());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// `.t` text for a tournament-like structure: arc `(u,v)` whenever `label(u,v) = 1`.
pub fn tournament_to_t(s: &TwoStructure) -> String {
    let mut out = format!("t v1\nn {}\n", s.n());
    for u in 0..s.n() {
        for v in 0..s.n() {
            if u != v && s.label(u, v) == 1 {
                writeln!(out, "{u} {v}").unwrap();
            }
        }
    }
    out
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn header_value(it: &mut dyn Iterator<Item = (usize, &str)>, key: &str, last: usize) -> Result<(usize, usize)> {
    let (line, text) = it.next().ok_or_else(|| perr(last + 1, format!("missing `{key}` line")))?;
    let mut parts = text.split_whitespace();
    if parts.next() != Some(key) {
        return Err(perr(line, format!("expected `{key} <value>`")));
    }
    let v = parts
        .next()
        .and_then(|t| t.parse::<usize>().ok())
        .ok_or_else(|| perr(line, format!("bad value for `{key}`")))?;
    if parts.next().is_some() {
        return Err(perr(line, "trailing tokens"));
    }
    Ok((line, v))
}

/// Parses any of the three formats, rejecting inputs with more than `max_n` vertices.
pub fn parse_with_limit(text: &str, max_n: usize) -> Result<TwoStructure> {
    let mut it = lines(text);
    let (hl, header) = it.next().ok_or_else(|| perr(1, "empty input"))?;
    let kind = match header {
        "2s v1" => "2s",
        "g v1" => "g",
        "t v1" => "t",
        _ => return Err(perr(hl, format!("unknown header `{header}`"))),
    };
    let (nl, n) = header_value(&mut it, "n", hl)?;
    let limit = max_n.min(MAX_VERTICES);
    if n > limit {
        return Err(Error::SizeLimitExceeded { what: "vertex count", size: n, limit });
    }
    if kind == "2s" {
        let (kl, k) = header_value(&mut it, "k", nl)?;
        let mut rows = Vec::with_capacity(n);
        let mut last = kl;
        for (line, text) in it.by_ref() {
            last = line;
            let row = text
                .split_whitespace()
                .map(|t| match t {
                    "-" => Ok(None),
                    _ => t.parse::<Label>().map(Some).map_err(|_| perr(line, format!("bad token `{t}`"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != n {
                return Err(perr(line, format!("expected {n} tokens, found {}", row.len())));
            }
            rows.push(row);
            if rows.len() == n {
                break;
            }
        }
        if rows.len() != n {
            return Err(perr(last + 1, format!("expected {n} rows, found {}", rows.len())));
        }
        if let Some((line, _)) = it.next() {
            return Err(perr(line, "unexpected content after the label table"));
        }
        return TwoStructure::from_matrix(n, k, &rows);
    }
    let mut edges = Vec::new();
    for (line, text) in it {
        let nums: Vec<usize> = text
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| perr(line, format!("bad vertex `{t}`"))))
            .collect::<Result<_>>()?;
        if nums.len() != 2 {
            return Err(perr(line, "expected `u v`"));
        }
        edges.push((nums[0], nums[1]));
    }
    TwoStructure::from_graph(n, &edges, kind == "t")
}

pub fn parse(text: &str) -> Result<TwoStructure> {
    parse_with_limit(text, DEFAULT_MAX_N)
}

/// Parses `0,1,2` (whitespace tolerated) into a set.
pub fn parse_vertex_list(text: &str) -> Result<VertexSet> {
    let mut out = VertexSet::EMPTY;
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let v: usize = tok.parse().map_err(|_| perr(1, format!("bad vertex `{tok}`")))?;
        if v >= MAX_VERTICES {
            return Err(Error::VertexOutOfRange { vertex: v, n: MAX_VERTICES });
        }
        out.insert(v);
    }
    Ok(out)
}

pub fn vertex_list(s: VertexSet) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_2s() {
        let s = TwoStructure::from_fn(4, 3, |v, w| ((v * 7 + w * 3) % 3) as Label);
        let text = to_2s(&s);
        assert!(text.starts_with("2s v1\nn 4\nk 3\n- "));
        assert_eq!(parse(&text).unwrap(), s);
    }

    #[test]
    fn graph_and_tournament_shorthand() {
        let g = parse("g v1\nn 4\n0 1\n1 2\n# comment\n2 3\n").unwrap();
        assert_eq!(g, TwoStructure::from_graph(4, &[(0, 1), (1, 2), (2, 3)], false).unwrap());
        let t = parse("t v1\nn 3\n0 1\n1 2\n2 0\n").unwrap();
        assert!(t.is_tournament());
        assert_eq!(parse(&tournament_to_t(&t)).unwrap(), t);
        let gg = Graph::from_edges(3, &[(0, 2)]).unwrap();
        assert_eq!(parse(&graph_to_g(&gg)).unwrap(), gg.to_two_structure());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse("xx\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("2s v1\nn 2\nk 2\n- 0\n"), Err(Error::Parse { line: 5, .. })));
        assert!(matches!(parse("2s v1\nn 2\nk 2\n- 0 1\n"), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse("2s v1\nn 2\nk 2\n- 2\n0 -\n"), Err(Error::LabelOutOfRange { .. })));
        assert!(matches!(parse("2s v1\nn 2\nk 2\n0 0\n0 -\n"), Err(Error::DiagonalLabeled(0))));
        assert!(matches!(parse("g v1\nn 30\n"), Err(Error::SizeLimitExceeded { .. })));
        assert!(matches!(parse("g v1\nn 3\n0 5\n"), Err(Error::InvalidEdge(0, 5))));
    }

    #[test]
    fn vertex_lists() {
        let x = parse_vertex_list("0, 1,2 3").unwrap();
        assert_eq!(x.to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(vertex_list(x), "0,1,2,3");
        assert!(parse_vertex_list("a").is_err());
    }
}
