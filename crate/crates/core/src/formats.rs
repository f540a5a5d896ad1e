//! Reading and writing graphs as JSON documents or graph6 strings.
//!
//! JSON is the primary interchange format:
//! `{"vertices": n, "edges": [[u,v],...], "marks": {"edge":[a,b], "apex": c}}`
//! where `marks` is optional and turns the document into a marked calligraph.
//! graph6 (the standard ASCII encoding, up to 62 vertices) is supported for
//! interoperability with graph corpora.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("invalid graph6 byte 0x{byte:02x} at offset {offset}")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("graph6 input truncated at offset {offset} (need {missing} more bytes)")]
    Truncated { offset: usize, missing: usize },
    #[error("trailing data at offset {offset}")]
    TrailingData { offset: usize },
    #[error("graph6 padding bits are not zero at offset {offset}")]
    NonzeroPadding { offset: usize },
    #[error("graphs over 62 vertices are not supported by this graph6 writer/reader")]
    TooLarge,
    #[error("empty input")]
    Empty,
    #[error("JSON error at byte offset {offset}: {message}")]
    Json { offset: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Graph6,
    Json,
}

/// Optional calligraph marks carried by the JSON format. `edge` is ordered:
/// its first entry plays the role the base-class entry `b` is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marks {
    pub edge: [usize; 2],
    pub apex: usize,
}

/// A parsed graph document: the graph plus optional marks.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphDoc {
    pub graph: Graph,
    pub marks: Option<Marks>,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    vertices: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    marks: Option<Marks>,
}

pub fn parse_graph(text: &str, format: Format) -> Result<Graph, ParseError> {
    Ok(parse_doc(text, format)?.graph)
}

pub fn parse_doc(text: &str, format: Format) -> Result<GraphDoc, ParseError> {
    match format {
        Format::Graph6 => Ok(GraphDoc { graph: parse_graph6(text)?, marks: None }),
        Format::Json => parse_json(text),
    }
}

pub fn serialize_graph(g: &Graph, format: Format) -> Result<String, ParseError> {
    match format {
        Format::Graph6 => write_graph6(g),
        Format::Json => Ok(write_json(g, None)),
    }
}

/// Guesses the format from the first non-whitespace byte.
pub fn sniff_format(text: &str) -> Format {
    match text.trim_start().as_bytes().first() {
        Some(b'{') => Format::Json,
        _ => Format::Graph6,
    }
}

pub fn parse_json(text: &str) -> Result<GraphDoc, ParseError> {
    let doc: JsonGraph = serde_json::from_str(text).map_err(|e| ParseError::Json {
        offset: offset_of(text, e.line(), e.column()),
        message: e.to_string(),
    })?;
    let graph = Graph::new(doc.vertices, doc.edges.iter().map(|&[u, v]| (u, v)))?;
    Ok(GraphDoc { graph, marks: doc.marks })
}

pub fn write_json(g: &Graph, marks: Option<Marks>) -> String {
    let doc = JsonGraph {
        vertices: g.vertex_count(),
        edges: g.edges().map(|(u, v)| [u, v]).collect(),
        marks,
    };
    serde_json::to_string(&doc).expect("graph document serializes")
}

fn offset_of(text: &str, line: usize, column: usize) -> usize {
    // serde_json reports 1-based line and column.
    let mut remaining = line.saturating_sub(1);
    let mut offset = 0usize;
    for (i, b) in text.bytes().enumerate() {
        if remaining == 0 {
            break;
        }
        if b == b'\n' {
            remaining -= 1;
            offset = i + 1;
        }
    }
    offset + column.saturating_sub(1)
}

/// Decodes a graph6 string (single graph, optional trailing newline).
pub fn parse_graph6(text: &str) -> Result<Graph, ParseError> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let bytes = bytes.strip_prefix(b">>graph6<<").unwrap_or(bytes);
    if bytes.is_empty() {
        return Err(ParseError::Empty);
    }
    if bytes[0] == 126 {
        // Multi-byte size prefix: deliberately unsupported (n > 62).
        return Err(ParseError::TooLarge);
    }
    if !(63..126).contains(&bytes[0]) {
        return Err(ParseError::InvalidByte { offset: 0, byte: bytes[0] });
    }
    let n = (bytes[0] - 63) as usize;
    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() < 1 + nbytes {
        return Err(ParseError::Truncated {
            offset: bytes.len(),
            missing: 1 + nbytes - bytes.len(),
        });
    }
    if bytes.len() > 1 + nbytes {
        return Err(ParseError::TrailingData { offset: 1 + nbytes });
    }
    let mut edges = Vec::new();
    let mut bit = 0usize;
    // Column-major upper triangle: (0,1), (0,2), (1,2), (0,3), ...
    for j in 1..n {
        for i in 0..j {
            let byte = bytes[1 + bit / 6];
            if !(63..126).contains(&byte) {
                return Err(ParseError::InvalidByte { offset: 1 + bit / 6, byte });
            }
            let word = byte - 63;
            if word & (0x20 >> (bit % 6)) != 0 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    // Remaining padding bits must be zero.
    while bit < nbytes * 6 {
        let byte = bytes[1 + bit / 6];
        if !(63..126).contains(&byte) {
            return Err(ParseError::InvalidByte { offset: 1 + bit / 6, byte });
        }
        if (byte - 63) & (0x20 >> (bit % 6)) != 0 {
            return Err(ParseError::NonzeroPadding { offset: 1 + bit / 6 });
        }
        bit += 1;
    }
    Ok(Graph::new(n, edges)?)
}

pub fn write_graph6(g: &Graph) -> Result<String, ParseError> {
    let n = g.vertex_count();
    if n > 62 {
        return Err(ParseError::TooLarge);
    }
    let nbits = n * n.saturating_sub(1) / 2;
    let mut words = vec![0u8; nbits.div_ceil(6)];
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            if g.has_edge(i, j) {
                words[bit / 6] |= 0x20 >> (bit % 6);
            }
            bit += 1;
        }
    }
    let mut out = String::with_capacity(1 + words.len());
    out.push((n as u8 + 63) as char);
    out.extend(words.iter().map(|&w| (w + 63) as char));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph6_triangle() {
        // Independently decoded: 'B' encodes n = 3, 'w' - 63 = 0b111000, so the
        // bits for (0,1), (0,2), (1,2) are all set.
        let g = parse_graph6("Bw").unwrap();
        let k3 = Graph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(g, k3);
        assert_eq!(write_graph6(&k3).unwrap(), "Bw");
    }

    #[test]
    fn graph6_single_vertex() {
        let g = parse_graph6("@").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn graph6_errors_carry_offsets() {
        match parse_graph6("B").unwrap_err() {
            ParseError::Truncated { offset: 1, missing: 1 } => {}
            other => panic!("unexpected error {other:?}"),
        }
        match parse_graph6("Bw ").unwrap_err() {
            ParseError::InvalidByte { offset: 1, .. } | ParseError::TrailingData { .. } => {}
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn json_roundtrip_with_marks() {
        let text = r#"{"vertices":3,"edges":[[1,2],[0,1]],"marks":{"edge":[1,2],"apex":0}}"#;
        let doc = parse_json(text).unwrap();
        assert_eq!(doc.graph, Graph::new(3, [(1, 2), (0, 1)]).unwrap());
        assert_eq!(doc.marks, Some(Marks { edge: [1, 2], apex: 0 }));
        let emitted = write_json(&doc.graph, doc.marks);
        assert_eq!(parse_json(&emitted).unwrap(), doc);
    }

    #[test]
    fn json_single_vertex_no_edges() {
        let doc = parse_json(r#"{"vertices":1,"edges":[]}"#).unwrap();
        assert_eq!(doc.graph.vertex_count(), 1);
        assert!(doc.marks.is_none());
    }

    #[test]
    fn json_error_reports_offset() {
        let err = parse_json("{\"vertices\":3,\n\"edges\":[[0,1]").unwrap_err();
        match err {
            ParseError::Json { offset, .. } => assert!(offset >= 15),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn sniffing() {
        assert_eq!(sniff_format("  {\"vertices\":1}"), Format::Json);
        assert_eq!(sniff_format("Bw"), Format::Graph6);
    }
}
