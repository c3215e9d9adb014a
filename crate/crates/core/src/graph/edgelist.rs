//! Plain-text edge lists: first line `N`, then one whitespace-separated
//! `i j` pair per line, 0-indexed. Blank lines and `#` comments are skipped.

use std::io::{BufRead, Write};

use super::{GraphError, Network};

pub fn parse_edge_list(text: &str) -> Result<Network, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines.next().ok_or(GraphError::Parse {
        line: 1,
        message: "missing node count".into(),
    })?;
    let node_count: usize = header.parse().map_err(|_| GraphError::Parse {
        line: line_no,
        message: format!("expected node count, found {header:?}"),
    })?;

    let mut edges = Vec::new();
    for (line, l) in lines {
        let mut parts = l.split_whitespace();
        let mut field = |name: &str| -> Result<usize, GraphError> {
            let tok = parts.next().ok_or_else(|| GraphError::Parse {
                line,
                message: format!("missing {name} endpoint"),
            })?;
            tok.parse().map_err(|_| GraphError::Parse {
                line,
                message: format!("invalid node index {tok:?}"),
            })
        };
        let a = field("first")?;
        let b = field("second")?;
        if parts.next().is_some() {
            return Err(GraphError::Parse {
                line,
                message: "expected exactly two indices".into(),
            });
        }
        edges.push((a, b));
    }
    Network::new(node_count, &edges)
}

pub fn read_edge_list<R: BufRead>(mut reader: R) -> Result<Network, GraphError> {
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| GraphError::Io(e.to_string()))?;
    parse_edge_list(&text)
}

pub fn write_edge_list<W: Write>(net: &Network, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{}", net.node_count())?;
    for (a, b) in net.edges() {
        writeln!(w, "{a} {b}")?;
    }
    Ok(())
}
