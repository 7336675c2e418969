//! graph6 encoding (printable characters 63..=126, six bits per character).
//!
//! The header `N(n)` is one byte `n + 63` for `n <= 62`, otherwise `~`
//! followed by three bytes carrying `n` in 18 bits. The adjacency bits follow
//! the upper triangle column by column: `x(0,1), x(0,2), x(1,2), x(0,3), ...`,
//! packed big-endian into six-bit groups and zero padded.

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_ORDER};

const OPTIONAL_HEADER: &str = ">>graph6<<";

fn bad(msg: impl Into<String>) -> Error {
    Error::Graph6(msg.into())
}

pub fn write(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(4 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

/// Parses one graph6 string. A trailing newline is tolerated; anything else
/// after the encoded graph is an error.
pub fn read(text: &str) -> Result<Graph> {
    let text = text.strip_prefix(OPTIONAL_HEADER).unwrap_or(text);
    let text = text.strip_suffix('\n').unwrap_or(text);
    let text = text.strip_suffix('\r').unwrap_or(text);
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(bad("empty input"));
    }
    if let Some(pos) = bytes.iter().position(|b| !(63..=126).contains(b)) {
        return Err(bad(format!(
            "byte {:#04x} at offset {pos} is not a graph6 character",
            bytes[pos]
        )));
    }
    let (n, body) = match bytes[0] {
        126 => {
            if bytes.len() >= 2 && bytes[1] == 126 {
                return Err(bad("eight-byte size header is not supported (order too large)"));
            }
            if bytes.len() < 4 {
                return Err(bad("truncated size header"));
            }
            let n = bytes[1..4]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &bytes[4..])
        }
        b => ((b - 63) as usize, &bytes[1..]),
    };
    if n > MAX_ORDER {
        return Err(Error::OrderOutOfRange(n));
    }
    let bits = n * n.saturating_sub(1) / 2;
    let needed = bits.div_ceil(6);
    if body.len() < needed {
        return Err(bad(format!(
            "truncated bit stream: expected {needed} data bytes, found {}",
            body.len()
        )));
    }
    if body.len() > needed {
        return Err(bad(format!("{} trailing bytes after the graph", body.len() - needed)));
    }
    let mut g = Graph::new(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j)?;
            }
            k += 1;
        }
    }
    if bits % 6 != 0 {
        let last = body[needed - 1] - 63;
        if last & ((1 << (6 - bits % 6)) - 1) != 0 {
            return Err(bad("nonzero padding bits"));
        }
    }
    Ok(g)
}

/// Parses every non-empty line of `text`.
pub fn read_all(text: &str) -> Result<Vec<Graph>> {
    text.lines()
        .map(str::trim_end)
        .filter(|l| !l.is_empty())
        .map(read)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(write(&k3), "Bw");
        assert_eq!(read("Bw").unwrap(), k3);
    }

    #[test]
    fn known_strings() {
        // petgraph's test vector: 5 vertices, edges ac ae bd de
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(write(&g), "DQc");
        // a 6-vertex example string round-trips
        let h = read("E?~o").unwrap();
        assert_eq!(h.order(), 6);
        assert_eq!(write(&h), "E?~o");
    }

    #[test]
    fn large_header() {
        let g = Graph::cycle(100).unwrap();
        let s = write(&g);
        assert!(s.starts_with('~'));
        assert_eq!(read(&s).unwrap(), g);
    }

    #[test]
    fn errors() {
        assert!(read("").is_err());
        assert!(read("B").is_err(), "truncated");
        assert!(read("Bww").is_err(), "trailing garbage");
        assert!(read("B x").is_err(), "bad character");
        assert!(read("Bx").is_err(), "padding bits set");
        assert!(read("~?").is_err(), "truncated header");
    }

    #[test]
    fn optional_header_and_newline() {
        assert_eq!(read(">>graph6<<Bw\n").unwrap(), Graph::complete(3).unwrap());
    }

    #[test]
    fn trivial_orders() {
        assert_eq!(write(&Graph::new(0).unwrap()), "?");
        assert_eq!(read("?").unwrap().order(), 0);
        assert_eq!(write(&Graph::new(1).unwrap()), "@");
    }
}
