//! Plain comma-separated network, trace and config files.
//!
//! Network files for prefix `p` are `p.nodes.csv` (`id,class`) and
//! `p.edges.csv` (`source,target`); undirected edges are stored once with
//! `source < target`. Output is LF-terminated and sorted, so equal graphs
//! give byte-identical files.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::generators::{GrowthTrace, TraceEvent};
use crate::graph::{AttributedGraph, Class};

/// Tolerance used when deciding whether a sweep range reaches its endpoint.
pub const RANGE_EPS: f64 = 1e-12;

pub fn nodes_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, ".nodes.csv")
}

pub fn edges_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, ".edges.csv")
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn nodes_csv(g: &AttributedGraph) -> String {
    let mut out = String::from("id,class\n");
    for (v, c) in g.labels().iter().enumerate() {
        let _ = writeln!(out, "{v},{}", c.index());
    }
    out
}

pub fn edges_csv(g: &AttributedGraph) -> String {
    let mut out = String::from("source,target\n");
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u},{v}");
    }
    out
}

pub fn write_network(g: &AttributedGraph, prefix: &Path) -> Result<()> {
    write_text(&nodes_path(prefix), &nodes_csv(g))?;
    write_text(&edges_path(prefix), &edges_csv(g))
}

/// Line-oriented CSV reader that checks the header and yields
/// `(line_number, fields)` for each non-empty row.
struct Rows<'a> {
    path: &'a Path,
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    width: usize,
}

impl<'a> Rows<'a> {
    fn new(path: &'a Path, text: &'a str, header: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == header => {}
            Some((_, h)) => {
                return Err(parse_err(
                    path,
                    1,
                    format!("expected header `{header}`, found `{}`", h.trim()),
                ))
            }
            None => return Err(parse_err(path, 1, format!("missing header `{header}`"))),
        }
        Ok(Rows {
            path,
            lines,
            width: header.split(',').count(),
        })
    }
}

impl<'a> Iterator for Rows<'a> {
    type Item = Result<(usize, Vec<&'a str>)>;

    fn next(&mut self) -> Option<Self::Item> {
        for (i, line) in self.lines.by_ref() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != self.width {
                return Some(Err(parse_err(
                    self.path,
                    i + 1,
                    format!("expected {} fields, found {}", self.width, fields.len()),
                )));
            }
            return Some(Ok((i + 1, fields)));
        }
        None
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_owned(),
        line,
        message: message.into(),
    }
}

fn parse_id(path: &Path, line: usize, field: &str) -> Result<usize> {
    field
        .parse()
        .map_err(|_| parse_err(path, line, format!("invalid node id `{field}`")))
}

pub fn parse_nodes(path: &Path, text: &str) -> Result<Vec<Class>> {
    let mut labels = Vec::new();
    for row in Rows::new(path, text, "id,class")? {
        let (line, f) = row?;
        let id = parse_id(path, line, f[0])?;
        if id != labels.len() {
            return Err(parse_err(
                path,
                line,
                format!(
                    "node ids must be dense and ascending: expected {}, found {id}",
                    labels.len()
                ),
            ));
        }
        let class = f[1]
            .parse::<usize>()
            .ok()
            .and_then(Class::from_index)
            .ok_or_else(|| {
                parse_err(
                    path,
                    line,
                    format!("class must be 0 or 1, found `{}`", f[1]),
                )
            })?;
        labels.push(class);
    }
    Ok(labels)
}

pub fn parse_edges(path: &Path, text: &str, g: &mut AttributedGraph) -> Result<()> {
    let n = g.node_count();
    for row in Rows::new(path, text, "source,target")? {
        let (line, f) = row?;
        let u = parse_id(path, line, f[0])?;
        let v = parse_id(path, line, f[1])?;
        if u >= n || v >= n {
            return Err(parse_err(
                path,
                line,
                format!("edge ({u},{v}) references a node outside 0..{n}"),
            ));
        }
        if u == v {
            return Err(parse_err(path, line, format!("self-loop on node {u}")));
        }
        if !g.add_edge(u, v)? {
            return Err(parse_err(path, line, format!("duplicate edge ({u},{v})")));
        }
    }
    Ok(())
}

pub fn read_network(prefix: &Path, directed: bool) -> Result<AttributedGraph> {
    let np = nodes_path(prefix);
    let labels = parse_nodes(&np, &read_text(&np)?)?;
    let mut g = AttributedGraph::new(directed, labels)?;
    let ep = edges_path(prefix);
    parse_edges(&ep, &read_text(&ep)?, &mut g)?;
    Ok(g)
}

pub fn trace_csv(trace: &GrowthTrace) -> String {
    let mut out = String::from("source,target,kind\n");
    for e in &trace.events {
        let _ = writeln!(out, "{},{},{}", e.source, e.target, e.kind);
    }
    out
}

pub fn write_trace(trace: &GrowthTrace, path: &Path) -> Result<()> {
    write_text(path, &trace_csv(trace))
}

pub fn parse_trace(path: &Path, text: &str, directed: bool, n: usize) -> Result<GrowthTrace> {
    let mut events = Vec::new();
    for row in Rows::new(path, text, "source,target,kind")? {
        let (line, f) = row?;
        let source = parse_id(path, line, f[0])?;
        let target = parse_id(path, line, f[1])?;
        let kind = f[2]
            .parse()
            .map_err(|_| parse_err(path, line, format!("unknown event kind `{}`", f[2])))?;
        events.push(TraceEvent {
            source,
            target,
            kind,
        });
    }
    let trace = GrowthTrace::from_events(directed, n, events);
    trace.validate()?;
    Ok(trace)
}

pub fn read_trace(path: &Path, directed: bool, n: usize) -> Result<GrowthTrace> {
    parse_trace(path, &read_text(path)?, directed, n)
}

/// Flat `key=value` configuration. Blank lines and `#` comments are ignored;
/// keys outside the allowed set are rejected.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunConfig {
    entries: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(path: &Path, text: &str, allowed: &[&str]) -> Result<Self> {
        let mut cfg = RunConfig::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                parse_err(path, i + 1, format!("expected key=value, found `{line}`"))
            })?;
            let key = key.trim();
            if !allowed.contains(&key) {
                return Err(parse_err(path, i + 1, format!("unknown key `{key}`")));
            }
            if cfg
                .entries
                .insert(key.to_owned(), value.trim().to_owned())
                .is_some()
            {
                return Err(parse_err(path, i + 1, format!("duplicate key `{key}`")));
            }
        }
        Ok(cfg)
    }

    pub fn read(path: &Path, allowed: &[&str]) -> Result<Self> {
        Self::parse(path, &read_text(path)?, allowed)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.insert(key.into(), value.into());
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Sorted `key=value` lines; parses back to an equal config.
    pub fn to_text(&self) -> String {
        self.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_text())
    }
}

/// Parses `start:stop:step` (inclusive of `stop` within [`RANGE_EPS`]) or a
/// single number. Values are `start + i*step`, rounded to 12 decimals.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::invalid(format!("invalid number `{s}` in range `{text}`")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [x] => Ok(vec![num(x)?]),
        [a, b, s] => {
            let (start, stop, step) = (num(a)?, num(b)?, num(s)?);
            if step <= 0.0 || stop < start - RANGE_EPS {
                return Err(Error::invalid(format!("empty or unbounded range `{text}`")));
            }
            let mut out = Vec::new();
            let mut i = 0u32;
            loop {
                let v = start + f64::from(i) * step;
                if v > stop + RANGE_EPS {
                    break;
                }
                out.push((v * 1e12).round() / 1e12);
                i += 1;
            }
            Ok(out)
        }
        _ => Err(Error::invalid(format!(
            "range `{text}` is not start:stop:step"
        ))),
    }
}

/// Parses a comma-separated list, trimming entries and rejecting duplicates.
pub fn parse_list<T, F>(text: &str, mut item: F) -> Result<Vec<T>>
where
    F: FnMut(&str) -> Result<T>,
    T: PartialEq,
{
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for raw in text.split(',') {
        let s = raw.trim();
        if s.is_empty() {
            return Err(Error::invalid(format!("empty entry in list `{text}`")));
        }
        if !seen.insert(s.to_owned()) {
            return Err(Error::invalid(format!(
                "duplicate entry `{s}` in list `{text}`"
            )));
        }
        out.push(item(s)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_pah, EventKind};
    use crate::graph::MixingMatrix;
    use proptest::prelude::*;
    use Class::{Majority as A, Minority as B};

    fn parse_network(nodes: &str, edges: &str, directed: bool) -> Result<AttributedGraph> {
        let labels = parse_nodes(Path::new("n"), nodes)?;
        let mut g = AttributedGraph::new(directed, labels)?;
        parse_edges(Path::new("e"), edges, &mut g)?;
        Ok(g)
    }

    fn line_of(e: Error) -> usize {
        match e {
            Error::Parse { line, .. } => line,
            other => panic!("not a parse error: {other}"),
        }
    }

    #[test]
    fn canonical_undirected_edge() {
        let mut g = AttributedGraph::new(false, vec![A, B]).unwrap();
        g.add_edge(1, 0).unwrap();
        assert_eq!(edges_csv(&g), "source,target\n0,1\n");
        assert_eq!(nodes_csv(&g), "id,class\n0,0\n1,1\n");
        let empty = AttributedGraph::new(true, vec![A; 3]).unwrap();
        assert_eq!(edges_csv(&empty), "source,target\n");
    }

    #[test]
    fn malformed_rows_are_reported_with_lines() {
        let nodes = "id,class\n0,0\n1,0\n2,0\n3,0\n4,0\n5,0\n";
        let e = parse_network(nodes, "source,target\n0,1\n5,5\n", false).unwrap_err();
        assert_eq!(line_of(e), 3);
        let e = parse_network("id,class\n0,0\n1,2\n", "source,target\n", false).unwrap_err();
        assert_eq!(line_of(e), 3);
        let e = parse_network("id,class\n0,0\n2,0\n", "source,target\n", false).unwrap_err();
        assert_eq!(line_of(e), 3);
        let e = parse_network(nodes, "source,target\n0,1\n1,0\n", false).unwrap_err();
        assert_eq!(line_of(e), 3);
        assert!(parse_network(nodes, "source,target\n0,1\n1,0\n", true).is_ok());
        let e = parse_network(nodes, "source,target\n0,9\n", false).unwrap_err();
        assert_eq!(line_of(e), 2);
        let e = parse_network(nodes, "0,1\n", false).unwrap_err();
        assert_eq!(line_of(e), 1);
        let e = parse_network(nodes, "", false).unwrap_err();
        assert_eq!(line_of(e), 1);
    }

    #[test]
    fn network_round_trip_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let (g, trace) = gen_pah(300, 2, 0.2, MixingMatrix::symmetric(0.8).unwrap(), 4).unwrap();
        let prefix = dir.path().join("net");
        write_network(&g, &prefix).unwrap();
        assert_eq!(read_network(&prefix, false).unwrap(), g);
        let tp = dir.path().join("trace.csv");
        write_trace(&trace, &tp).unwrap();
        assert_eq!(read_trace(&tp, false, 300).unwrap(), trace);
    }

    #[test]
    fn trace_rows() {
        let text = "source,target,kind\n2,0,pah-pick\n2,1,tc-pick\n3,2,fallback-uniform\n";
        let t = parse_trace(Path::new("t"), text, false, 4).unwrap();
        assert_eq!(t.seed_size, 2);
        assert_eq!(t.events[1].kind, EventKind::TcPick);
        let e =
            parse_trace(Path::new("t"), "source,target,kind\n2,0,bogus\n", false, 4).unwrap_err();
        assert_eq!(line_of(e), 2);
    }

    #[test]
    fn config_rules() {
        let allowed = ["model", "n", "h"];
        let cfg = RunConfig::parse(
            Path::new("c"),
            "# run\nmodel = pah\n\nn=100 # nodes\n",
            &allowed,
        )
        .unwrap();
        assert_eq!(cfg.get("model"), Some("pah"));
        assert_eq!(cfg.get("n"), Some("100"));
        assert_eq!(cfg.to_text(), "model=pah\nn=100\n");
        assert_eq!(
            RunConfig::parse(Path::new("c"), &cfg.to_text(), &allowed).unwrap(),
            cfg
        );
        let e = RunConfig::parse(Path::new("c"), "n=1\nbogus=2\n", &allowed).unwrap_err();
        assert_eq!(line_of(e), 2);
        assert!(RunConfig::parse(Path::new("c"), "n=1\nn=2\n", &allowed).is_err());
        assert!(RunConfig::parse(Path::new("c"), "n\n", &allowed).is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(
            parse_range("0.1:0.9:0.1").unwrap(),
            vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
        );
        assert_eq!(parse_range("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_range("0.3").unwrap(), vec![0.3]);
        assert_eq!(parse_range("1:1:1").unwrap(), vec![1.0]);
        assert!(parse_range("1:0:0.1").is_err());
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("a").is_err());
    }

    #[test]
    fn lists() {
        let v = parse_list("1, 2,3", |s| {
            s.parse::<u32>().map_err(|_| Error::invalid(s))
        })
        .unwrap();
        assert_eq!(v, vec![1, 2, 3]);
        assert!(parse_list("1,1", |s| Ok(s.to_owned())).is_err());
        assert!(parse_list("1,,2", |s| Ok(s.to_owned())).is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip(
            minority in proptest::collection::vec(any::<bool>(), 1..40),
            edges in proptest::collection::vec((0usize..40, 0usize..40), 0..120),
            directed in any::<bool>(),
        ) {
            let n = minority.len();
            let labels = minority.iter().map(|&b| if b { B } else { A }).collect();
            let mut g = AttributedGraph::new(directed, labels).unwrap();
            for (u, v) in edges {
                let (u, v) = (u % n, v % n);
                if u != v { g.add_edge(u, v).unwrap(); }
            }
            let back = parse_network(&nodes_csv(&g), &edges_csv(&g), directed).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(edges_csv(&back), edges_csv(&g));
        }
    }
}
