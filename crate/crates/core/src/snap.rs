//! SNAP edge lists: one `u v` pair per line meaning `u → v`, `#` comments.
//! Vertex ids are remapped densely in order of first appearance.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::graph::{DirectedGraph, Edge, VertexId};

#[derive(Debug, Error)]
pub enum SnapError {
    #[error("line {line}: expected two vertex ids, found {found} tokens")]
    TokenCount { line: usize, found: usize },
    #[error("line {line}: {token:?} is not a non-negative integer")]
    BadToken { line: usize, token: String },
    #[error("more than 2^32 distinct vertex ids")]
    TooManyVertices,
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Clone, Debug)]
pub struct SnapGraph {
    pub graph: DirectedGraph,
    /// Original id of each dense vertex.
    pub ids: Vec<u64>,
}

pub fn parse_snap_edgelist(text: &str) -> Result<SnapGraph, SnapError> {
    let mut dense: HashMap<u64, VertexId> = HashMap::new();
    let mut ids = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |raw: u64| -> Result<VertexId, SnapError> {
        if let Some(&v) = dense.get(&raw) {
            return Ok(v);
        }
        let v = VertexId::try_from(ids.len()).map_err(|_| SnapError::TooManyVertices)?;
        dense.insert(raw, v);
        ids.push(raw);
        Ok(v)
    };
    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw_line.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(SnapError::TokenCount {
                line,
                found: tokens.len(),
            });
        }
        let mut ends = [0u64; 2];
        for (slot, token) in ends.iter_mut().zip(&tokens) {
            *slot = token.parse().map_err(|_| SnapError::BadToken {
                line,
                token: token.to_string(),
            })?;
        }
        let src = intern(ends[0])?;
        let dst = intern(ends[1])?;
        edges.push(Edge::new(src, dst));
    }
    let graph = DirectedGraph::new(ids.len(), edges).map_err(|_| SnapError::TooManyVertices)?;
    Ok(SnapGraph { graph, ids })
}

pub fn read_snap_file(path: &Path) -> Result<SnapGraph, SnapError> {
    let text = fs::read_to_string(path).map_err(|source| SnapError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_snap_edgelist(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comment_and_one_edge() {
        let g = parse_snap_edgelist("# c\n0 1\n").unwrap();
        assert_eq!(g.graph.edge_count(), 1);
        assert_eq!(g.graph.vertex_count(), 2);
    }

    #[test]
    fn self_loop_remaps_to_one_vertex() {
        let g = parse_snap_edgelist("5 5\n").unwrap();
        assert_eq!(g.graph.vertex_count(), 1);
        assert_eq!(g.graph.edges(), &[Edge::new(0, 0)]);
        assert_eq!(g.ids, vec![5]);
    }

    #[test]
    fn parallel_edges_are_kept() {
        let g = parse_snap_edgelist("0 1\n0 1\n").unwrap();
        assert_eq!(g.graph.edge_count(), 2);
    }

    #[test]
    fn tabs_blank_lines_and_sparse_ids() {
        let g = parse_snap_edgelist("# FromNodeId\tToNodeId\n\n10\t3\n3 99\n").unwrap();
        assert_eq!(g.ids, vec![10, 3, 99]);
        assert_eq!(g.graph.edges(), &[Edge::new(0, 1), Edge::new(1, 2)]);
    }

    #[test]
    fn malformed_lines_carry_line_numbers() {
        match parse_snap_edgelist("0 1\n# x\n2 b\n") {
            Err(SnapError::BadToken { line: 3, token }) => assert_eq!(token, "b"),
            other => panic!("{other:?}"),
        }
        match parse_snap_edgelist("0 1 2\n") {
            Err(SnapError::TokenCount { line: 1, found: 3 }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_snap_edgelist("1\n"),
            Err(SnapError::TokenCount { line: 1, found: 1 })
        ));
        assert!(parse_snap_edgelist("-1 2\n").is_err());
    }

    #[test]
    fn missing_file_names_the_path() {
        let err = read_snap_file(Path::new("/nonexistent/graph.txt")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/graph.txt"));
    }
}
