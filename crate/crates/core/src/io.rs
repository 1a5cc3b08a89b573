//! Graph descriptions and file formats: edge lists, graph6 and DOT.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Path,
    Cycle,
    Star,
    Complete,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Path, Family::Cycle, Family::Star, Family::Complete];

    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Star => "star",
            Family::Complete => "complete",
        }
    }

    /// `star` counts leaves (the graph has `n + 1` vertices); the other
    /// families count vertices.
    pub fn graph(self, n: usize) -> Result<Graph> {
        match self {
            Family::Path => Graph::path(n),
            Family::Cycle => Graph::cycle(n),
            Family::Star => Graph::star(n),
            Family::Complete => Graph::complete(n),
        }
    }

    /// Smallest valid parameter.
    pub fn min_param(self) -> usize {
        match self {
            Family::Cycle => 3,
            _ => 1,
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown graph family `{s}`")))
    }
}

/// A base graph together with the text that describes it in reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGraph {
    pub name: String,
    pub graph: Graph,
}

impl NamedGraph {
    pub fn family(family: Family, n: usize) -> Result<Self> {
        Ok(NamedGraph {
            name: format!("{}:{n}", family.name()),
            graph: family.graph(n)?,
        })
    }
}

/// Parses `path:N`, `cycle:N`, `star:N`, `complete:N` or `file:PATH`.
pub fn parse_graph_spec(spec: &str) -> Result<NamedGraph> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| Error::Usage(format!("graph spec `{spec}` is not of the form KIND:ARG")))?;
    if kind == "file" {
        let text = std::fs::read_to_string(arg).map_err(|e| Error::Io(format!("{arg}: {e}")))?;
        let graph = parse_edge_list(&text)?;
        if graph.n() == 0 {
            return Err(Error::EmptyGraph);
        }
        return Ok(NamedGraph {
            name: spec.to_string(),
            graph,
        });
    }
    let family: Family = kind.parse()?;
    let n: usize = arg
        .parse()
        .map_err(|_| Error::Usage(format!("graph size `{arg}` is not a non-negative integer")))?;
    NamedGraph::family(family, n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub graph: Graph,
    pub warnings: Vec<String>,
}

/// Parses the `n m` header followed by `m` lines `u v` (0-based). `#`
/// starts a comment; blank lines are skipped. Duplicate edges are merged
/// with a warning.
pub fn parse_edge_list_with_warnings(text: &str) -> Result<EdgeList> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let pair = |line: usize, l: &str| -> Result<(usize, usize)> {
        let fields: Vec<&str> = l.split_whitespace().collect();
        let parse = |f: &str| {
            f.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("`{f}` is not a non-negative integer"),
            })
        };
        match fields.as_slice() {
            [a, b] => Ok((parse(a)?, parse(b)?)),
            _ => Err(Error::Parse {
                line,
                message: format!("expected two fields, found {}", fields.len()),
            }),
        }
    };
    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing `n m` header".into(),
    })?;
    let (n, m) = pair(header_line, header)?;
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    let mut warnings = Vec::new();
    let mut last_line = header_line;
    for (line, l) in lines {
        last_line = line;
        let (u, v) = pair(line, l)?;
        let fail = |message: String| Err(Error::Parse { line, message });
        if u >= n || v >= n {
            return fail(format!("endpoint {} out of range for {n} vertices", u.max(v)));
        }
        if u == v {
            return fail(format!("loop at vertex {u}"));
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            warnings.push(format!("line {line}: duplicate edge {u} {v} ignored"));
        }
        edges.push(key);
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Ok(EdgeList {
        graph: Graph::from_edges(n, edges)?,
        warnings,
    })
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    parse_edge_list_with_warnings(text).map(|e| e.graph)
}

/// Header line then one edge per line, `u < v`, lexicographic.
pub fn emit_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

const GRAPH6_MAX: u64 = 68_719_476_735;

/// Standard graph6 text of `g`, without trailing newline.
pub fn to_graph6(g: &Graph) -> Result<String> {
    let n = g.n() as u64;
    if n > GRAPH6_MAX {
        return Err(Error::Graph6(format!("order {n} exceeds the format limit")));
    }
    let mut bytes = Vec::new();
    if n <= 62 {
        bytes.push(n as u8 + 63);
    } else if n <= 258_047 {
        bytes.push(126);
        bytes.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    } else {
        bytes.extend([126, 126]);
        bytes.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    }
    let bits = g.n() * g.n().saturating_sub(1) / 2;
    let start = bytes.len();
    bytes.resize(start + bits.div_ceil(6), 0);
    for (i, j) in g.edges() {
        let t = j * (j - 1) / 2 + i;
        bytes[start + t / 6] |= 1 << (5 - t % 6);
    }
    for b in &mut bytes[start..] {
        *b += 63;
    }
    Ok(String::from_utf8(bytes).expect("graph6 bytes are printable ASCII"))
}

pub fn from_graph6(text: &str) -> Result<Graph> {
    let text = text.trim_end_matches(['\n', '\r']);
    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
    let bytes = text.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Graph6(format!("byte {b} outside 63..=126")));
    }
    let digits = |range: std::ops::Range<usize>| -> Result<u64> {
        let part = bytes
            .get(range)
            .ok_or_else(|| Error::Graph6("truncated size header".into()))?;
        Ok(part.iter().fold(0, |acc, &b| (acc << 6) | u64::from(b - 63)))
    };
    let (n, body_start) = match bytes {
        [] => return Err(Error::Graph6("empty input".into())),
        [126, 126, ..] => (digits(2..8)?, 8),
        [126, ..] => (digits(1..4)?, 4),
        [b, ..] => (u64::from(b - 63), 1),
    };
    let n = usize::try_from(n).map_err(|_| Error::Graph6(format!("order {n} does not fit in memory")))?;
    let bits = n * n.saturating_sub(1) / 2;
    let body = &bytes[body_start..];
    if body.len() != bits.div_ceil(6) {
        return Err(Error::Graph6(format!(
            "expected {} body bytes for order {n}, found {}",
            bits.div_ceil(6),
            body.len()
        )));
    }
    let mut edges = Vec::new();
    for (byte_index, &b) in body.iter().enumerate() {
        let b = b - 63;
        if b == 0 {
            continue;
        }
        for offset in (0..6).filter(|o| b >> (5 - o) & 1 == 1) {
            let t = byte_index * 6 + offset;
            if t >= bits {
                return Err(Error::Graph6("non-zero padding bits".into()));
            }
            // column j holds bits j(j-1)/2 .. j(j+1)/2
            let mut j = (1 + (1 + 8 * t).isqrt()).div_ceil(2);
            while j * (j - 1) / 2 > t {
                j -= 1;
            }
            while (j + 1) * j / 2 <= t {
                j += 1;
            }
            edges.push((t - j * (j - 1) / 2, j));
        }
    }
    Graph::from_edges(n, edges)
}

/// Undirected DOT text; vertex `i` is labelled with `labels[i]` when given.
pub fn to_dot(g: &Graph, labels: Option<&[Configuration]>) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        match labels.and_then(|l| l.get(v)) {
            Some(c) => {
                let _ = writeln!(out, "  {v} [label=\"{c}\"];");
            }
            None => {
                let _ = writeln!(out, "  {v};");
            }
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}
