//! Plain-text edge lists.
//!
//! ```text
//! n m
//! u v          (m arc lines, arc u -> v)
//! part i: v …  (optional, one line per part)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored when reading. The
//! canonical written form lists arcs in lexicographic order followed by the
//! parts in index order, each with ascending vertex ids.

use crate::digraph::{Digraph, GraphError};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EdgeListError {
    #[error("line {line}: malformed header, expected \"n m\"")]
    Header { line: usize },
    #[error("line {line}: malformed arc, expected \"u v\"")]
    Arc { line: usize },
    #[error("line {line}: malformed part line, expected \"part i: v ...\"")]
    Part { line: usize },
    #[error("header announces {expected} arcs, found {found}")]
    ArcCount { expected: usize, found: usize },
    #[error("part lines must be numbered 0..k in order")]
    PartOrder,
    #[error("missing header")]
    MissingHeader,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn parse_pair(text: &str) -> Option<(usize, usize)> {
    let mut it = text.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

pub fn read_edge_list(text: &str) -> Result<Digraph, EdgeListError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(EdgeListError::MissingHeader)?;
    let (n, m) = parse_pair(header).ok_or(EdgeListError::Header { line: header_line })?;

    let mut arcs = Vec::with_capacity(m);
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for (line, content) in lines {
        if let Some(rest) = content.strip_prefix("part") {
            let (index, members) = rest.split_once(':').ok_or(EdgeListError::Part { line })?;
            let index: usize = index
                .trim()
                .parse()
                .map_err(|_| EdgeListError::Part { line })?;
            if index != parts.len() {
                return Err(EdgeListError::PartOrder);
            }
            let members = members
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<Vec<usize>, _>>()
                .map_err(|_| EdgeListError::Part { line })?;
            parts.push(members);
        } else {
            arcs.push(parse_pair(content).ok_or(EdgeListError::Arc { line })?);
        }
    }
    if arcs.len() != m {
        return Err(EdgeListError::ArcCount {
            expected: m,
            found: arcs.len(),
        });
    }
    let g = if parts.is_empty() {
        Digraph::new(n, arcs)?
    } else {
        Digraph::with_parts(n, arcs, parts)?
    };
    Ok(g)
}

pub fn write_edge_list(g: &Digraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.arc_count()).unwrap();
    for (u, v) in g.arcs() {
        writeln!(out, "{u} {v}").unwrap();
    }
    if let Some(parts) = g.parts() {
        for (i, part) in parts.iter().enumerate() {
            write!(out, "part {i}:").unwrap();
            for v in part {
                write!(out, " {v}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{random_k_partite_tournament, random_tournament};
    use proptest::prelude::*;

    #[test]
    fn reads_three_cycle() {
        let g = read_edge_list("3 3\n0 1\n1 2\n2 0\n").unwrap();
        assert!(g.is_tournament());
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn canonicalises() {
        let g = read_edge_list("# comment\n3 3\n\n2 0\n0 1\n1 2\n").unwrap();
        assert_eq!(write_edge_list(&g), "3 3\n0 1\n1 2\n2 0\n");
    }

    #[test]
    fn reads_parts() {
        let text = "4 4\n0 1\n1 2\n2 3\n3 0\npart 0: 0 2\npart 1: 1 3\n";
        let g = read_edge_list(text).unwrap();
        assert!(g.is_k_partite_tournament(2));
        assert_eq!(write_edge_list(&g), text);
    }

    #[test]
    fn errors() {
        assert_eq!(
            read_edge_list("2 1\n0 0\n"),
            Err(EdgeListError::Graph(GraphError::Loop(0)))
        );
        assert_eq!(
            read_edge_list("2 2\n0 1\n0 1\n"),
            Err(EdgeListError::Graph(GraphError::DuplicateArc(0, 1)))
        );
        assert_eq!(
            read_edge_list("2 1\n0 5\n"),
            Err(EdgeListError::Graph(GraphError::UnknownVertex {
                vertex: 5,
                n: 2
            }))
        );
        assert_eq!(
            read_edge_list("two\n"),
            Err(EdgeListError::Header { line: 1 })
        );
        assert_eq!(read_edge_list(""), Err(EdgeListError::MissingHeader));
        assert_eq!(
            read_edge_list("3 1\n0 1 2\n"),
            Err(EdgeListError::Arc { line: 2 })
        );
        assert_eq!(
            read_edge_list("3 2\n0 1\n"),
            Err(EdgeListError::ArcCount {
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            read_edge_list("2 1\n0 1\npart 1: 0\n"),
            Err(EdgeListError::PartOrder)
        );
    }

    proptest! {
        #[test]
        fn round_trip_tournaments(n in 1usize..30, seed in any::<u64>()) {
            let g = random_tournament(n, seed).unwrap();
            prop_assert_eq!(read_edge_list(&write_edge_list(&g)).unwrap(), g);
        }

        #[test]
        fn round_trip_multipartite(sizes in prop::collection::vec(1usize..5, 2..4), seed in any::<u64>()) {
            let g = random_k_partite_tournament(&sizes, seed).unwrap();
            let text = write_edge_list(&g);
            let back = read_edge_list(&text).unwrap();
            prop_assert_eq!(write_edge_list(&back), text);
            prop_assert_eq!(back, g);
        }
    }
}
