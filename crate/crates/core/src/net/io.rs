use std::io::{BufRead, Write};

use super::{NetError, NetworkGraph};

/// Writes `nodes <N>` followed by one `u v` line per link, in link id order.
pub fn write_edge_list<W: Write>(g: &NetworkGraph, mut out: W) -> Result<(), NetError> {
    writeln!(out, "nodes {}", g.node_count())?;
    for &(u, v) in g.links() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

/// Parses the format produced by [`write_edge_list`]. Blank lines and lines
/// starting with `#` are skipped.
pub fn read_edge_list<R: BufRead>(input: R) -> Result<NetworkGraph, NetError> {
    let mut node_count = None;
    let mut links = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let parse_err = |msg: &str| NetError::Parse {
            line: lineno,
            msg: msg.to_string(),
        };
        match node_count {
            None => {
                if fields.next() != Some("nodes") {
                    return Err(parse_err("expected `nodes <N>` header"));
                }
                let n = fields
                    .next()
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| parse_err("bad node count"))?;
                if fields.next().is_some() {
                    return Err(parse_err("trailing fields after node count"));
                }
                node_count = Some(n);
            }
            Some(_) => {
                let mut next = || {
                    fields
                        .next()
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| parse_err("expected `u v`"))
                };
                let u = next()?;
                let v = next()?;
                if fields.next().is_some() {
                    return Err(parse_err("trailing fields after link"));
                }
                links.push((u, v));
            }
        }
    }
    let n = node_count.ok_or(NetError::Parse {
        line: 0,
        msg: "missing `nodes <N>` header".into(),
    })?;
    NetworkGraph::new(n, links)
}
