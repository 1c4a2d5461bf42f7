//! graph6 and plain edge-list serialization.
//!
//! graph6: a size header (`n + 63` for `n < 63`, otherwise `126` followed by
//! three 6-bit groups), then the upper triangle of the adjacency matrix in
//! column-major order (`(0,1), (0,2), (1,2), (0,3), ..`), packed big-endian
//! into 6-bit groups, each offset by 63 and zero-padded at the end.

use crate::error::{Error, Result};
use crate::graph::Graph;

const GRAPH6_HEADER: &str = ">>graph6<<";

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.adjacent(i, j) as u8;
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

pub fn from_graph6(s: &str) -> Result<Graph> {
    let s = s.trim();
    let s = s.strip_prefix(GRAPH6_HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Parse("empty graph6 string".into()));
    }
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Parse(format!("invalid graph6 byte {b:#04x}")));
    }
    let (n, body) = if bytes[0] < 126 {
        ((bytes[0] - 63) as usize, &bytes[1..])
    } else {
        if bytes.len() < 4 || bytes[1] == 126 {
            return Err(Error::Parse("unsupported graph6 size header".into()));
        }
        let n = bytes[1..4].iter().fold(0usize, |a, &b| (a << 6) | (b - 63) as usize);
        (n, &bytes[4..])
    };
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if body.len() != expected {
        return Err(Error::Parse(format!(
            "graph6 body for n={n} needs {expected} bytes, found {}",
            body.len()
        )));
    }
    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                g.add_edge(i, j)?;
            }
            k += 1;
        }
    }
    // padding bits must be zero
    if nbits % 6 != 0 {
        let last = body[expected - 1] - 63;
        if last & ((1u8 << (6 - nbits % 6)) - 1) != 0 {
            return Err(Error::Parse("non-zero graph6 padding bits".into()));
        }
    }
    Ok(g)
}

/// `n` on the first line, then one `u v` pair per line.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses the edge-list format. Blank lines and `#` comments are ignored.
pub fn from_edge_list(s: &str) -> Result<Graph> {
    let mut lines = s
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("missing vertex count".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Parse(format!("bad vertex count {header:?}")))?;
    let mut g = Graph::empty(n)?;
    for line in lines {
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad edge line {line:?}"))))
            .collect::<Result<_>>()?;
        let [u, v] = nums[..] else {
            return Err(Error::Parse(format!("edge line needs two vertices: {line:?}")));
        };
        g.add_edge(u, v)?;
    }
    Ok(g)
}
