//! Reading graphs and representations from files.

use std::path::Path;

use qsym_core::{Error, Graph, Representation, Result};

/// Graph JSON `{"n", "edges"}`, or plain text: a line with `n`, then one
/// `u v` edge per line. Blank lines and `#` comments are skipped.
pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    parse_graph(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        return Ok(serde_json::from_str(text)?);
    }
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .enumerate()
        .filter(|(_, l)| !l.is_empty());
    let (_, first) = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let n: usize = first.parse().map_err(|_| Error::Parse(format!("bad vertex count '{first}'")))?;
    let mut edges = Vec::new();
    for (no, line) in lines {
        let ends: Vec<usize> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("line {}: bad edge '{line}'", no + 1)))?;
        match ends.as_slice() {
            [u, v] => edges.push((*u, *v)),
            _ => return Err(Error::Parse(format!("line {}: expected 'u v', got '{line}'", no + 1))),
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn read_representation(path: &Path) -> Result<Representation> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
