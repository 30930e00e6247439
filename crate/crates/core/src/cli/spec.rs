//! Input files: a basis, one `map:` line per generator, and optionally a
//! graph, a filtration order and a declared inverse.
//!
//! ```text
//! basis: e0 e1 e2 e3
//! map: e0 -> e0
//! map: e1 -> e1 e0
//! map: e2 -> e2 e0
//! map: e3 -> e3 e0 e1 e2^-1
//! ```
//!
//! With `edge: <gen> <from> <to>` lines the generators are edges of a graph
//! (vertices in first-use order unless `vertices:` is given) and the map
//! lines describe the graph map; otherwise the graph is a rose.

use std::collections::HashMap;

use thiserror::Error;

use crate::train_track::{GraphEdge, GraphMap, MarkedGraph, TrackError};
use crate::word::{Endomorphism, FreeBasis, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown generator {name}")]
    UnknownGenerator { line: usize, name: String },
    #[error("line {line}: duplicate {what} for {name}")]
    Duplicate { line: usize, what: &'static str, name: String },
    #[error("missing basis line")]
    MissingBasis,
    #[error("missing image for generator {0}")]
    MissingImage(String),
    #[error("missing edge line for generator {0}")]
    MissingEdge(String),
    #[error("missing inverse image for generator {0}")]
    MissingInverse(String),
    #[error("line {line}: {source}")]
    Word { line: usize, source: WordError },
    #[error("order must list every generator exactly once")]
    BadOrder,
    #[error(transparent)]
    Graph(#[from] TrackError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecFile {
    pub basis: FreeBasis,
    /// the map on generators (edges, when a graph is given)
    pub map: Endomorphism,
    pub graph: Option<MarkedGraph>,
    pub order: Vec<usize>,
    pub inverse: Option<Vec<Word>>,
    pub warnings: Vec<String>,
}

impl SpecFile {
    /// The candidate filtered graph map (a rose when no edges are given).
    pub fn graph_map(&self) -> Result<GraphMap, TrackError> {
        let graph = self
            .graph
            .clone()
            .unwrap_or_else(|| MarkedGraph::rose(self.basis.names()));
        GraphMap::new(graph, self.map.images().to_vec(), self.order.clone())
    }

    /// The automorphism of the free group: the map itself on a rose, the
    /// induced map in the marking basis otherwise.
    pub fn automorphism(&self) -> Result<Endomorphism, TrackError> {
        match &self.graph {
            None => Ok(self.map.clone()),
            Some(_) => self.graph_map()?.induced_automorphism(),
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> SpecError {
    SpecError::Syntax {
        line,
        message: message.into(),
    }
}

fn split_names(s: &str) -> Vec<&str> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect()
}

pub fn parse_spec(text: &str) -> Result<SpecFile, SpecError> {
    let mut basis: Option<FreeBasis> = None;
    let mut maps: Vec<(usize, String, String)> = Vec::new();
    let mut inverses: Vec<(usize, String, String)> = Vec::new();
    let mut edges: Vec<(usize, String, String, String)> = Vec::new();
    let mut vertices: Option<Vec<String>> = None;
    let mut order: Option<(usize, Vec<String>)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content
            .split_once(':')
            .ok_or_else(|| syntax(line, "expected `key: value`"))?;
        let rest = rest.trim();
        match key.trim() {
            "basis" => {
                if basis.is_some() {
                    return Err(SpecError::Duplicate { line, what: "basis line", name: "basis".into() });
                }
                basis = Some(FreeBasis::new(split_names(rest)).map_err(|source| SpecError::Word { line, source })?);
            }
            k @ ("map" | "inverse") => {
                let (g, img) = rest
                    .split_once("->")
                    .ok_or_else(|| syntax(line, format!("expected `{k}: <gen> -> <word>`")))?;
                let entry = (line, g.trim().to_string(), img.trim().to_string());
                if k == "map" {
                    maps.push(entry);
                } else {
                    inverses.push(entry);
                }
            }
            "edge" => {
                let parts = split_names(rest);
                let [g, a, b] = parts[..] else {
                    return Err(syntax(line, "expected `edge: <gen> <from> <to>`"));
                };
                edges.push((line, g.into(), a.into(), b.into()));
            }
            "vertices" => vertices = Some(split_names(rest).into_iter().map(String::from).collect()),
            "order" => order = Some((line, split_names(rest).into_iter().map(String::from).collect())),
            other => return Err(syntax(line, format!("unknown key {other}"))),
        }
    }
    let basis = basis.ok_or(SpecError::MissingBasis)?;
    let mut warnings = Vec::new();
    let images = collect_images(&basis, &maps, "map", &mut warnings)?
        .into_iter()
        .enumerate()
        .map(|(g, w)| w.ok_or_else(|| SpecError::MissingImage(basis.name(g).to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let inverse = if inverses.is_empty() {
        None
    } else {
        Some(
            collect_images(&basis, &inverses, "inverse", &mut warnings)?
                .into_iter()
                .enumerate()
                .map(|(g, w)| w.ok_or_else(|| SpecError::MissingInverse(basis.name(g).to_string())))
                .collect::<Result<Vec<_>, _>>()?,
        )
    };
    let graph = if edges.is_empty() {
        None
    } else {
        Some(build_graph(&basis, &edges, vertices)?)
    };
    let order = match order {
        None => (0..basis.rank()).collect(),
        Some((line, names)) => {
            let mut seen = vec![false; basis.rank()];
            let mut out = Vec::new();
            for n in names {
                let g = basis
                    .index_of(&n)
                    .ok_or(SpecError::UnknownGenerator { line, name: n.clone() })?;
                if std::mem::replace(&mut seen[g], true) {
                    return Err(SpecError::BadOrder);
                }
                out.push(g);
            }
            if out.len() != basis.rank() {
                return Err(SpecError::BadOrder);
            }
            out
        }
    };
    let map = Endomorphism::new(basis.clone(), images).expect("images checked against basis");
    Ok(SpecFile {
        basis,
        map,
        graph,
        order,
        inverse,
        warnings,
    })
}

fn collect_images(
    basis: &FreeBasis,
    lines: &[(usize, String, String)],
    what: &'static str,
    warnings: &mut Vec<String>,
) -> Result<Vec<Option<Word>>, SpecError> {
    let mut out: Vec<Option<Word>> = vec![None; basis.rank()];
    for (line, g, img) in lines {
        let line = *line;
        let idx = basis
            .index_of(g)
            .ok_or_else(|| SpecError::UnknownGenerator { line, name: g.clone() })?;
        if out[idx].is_some() {
            return Err(SpecError::Duplicate { line, what, name: g.clone() });
        }
        let raw_len = raw_length(img);
        let w = basis.parse_word(img).map_err(|source| match source {
            WordError::UnknownGenerator(name) => SpecError::UnknownGenerator { line, name },
            source => SpecError::Word { line, source },
        })?;
        if w.len() != raw_len {
            warnings.push(format!(
                "line {line}: {what} image of {g} was not reduced; using {}",
                basis.format_word(&w)
            ));
        }
        out[idx] = Some(w);
    }
    Ok(out)
}

/// Letters written, counting `x^k` as `|k|` letters.
fn raw_length(img: &str) -> usize {
    img.split_whitespace()
        .filter(|t| *t != "1")
        .map(|t| match t.split_once('^') {
            Some((_, k)) => k.parse::<i64>().map(|k| k.unsigned_abs() as usize).unwrap_or(1),
            None => 1,
        })
        .sum()
}

fn build_graph(
    basis: &FreeBasis,
    edges: &[(usize, String, String, String)],
    vertices: Option<Vec<String>>,
) -> Result<MarkedGraph, SpecError> {
    let mut names = vertices.unwrap_or_default();
    let mut ends: Vec<Option<(String, String)>> = vec![None; basis.rank()];
    for (line, g, a, b) in edges {
        let idx = basis
            .index_of(g)
            .ok_or_else(|| SpecError::UnknownGenerator { line: *line, name: g.clone() })?;
        if ends[idx].is_some() {
            return Err(SpecError::Duplicate { line: *line, what: "edge line", name: g.clone() });
        }
        for v in [a, b] {
            if !names.contains(v) {
                names.push(v.clone());
            }
        }
        ends[idx] = Some((a.clone(), b.clone()));
    }
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let graph_edges = ends
        .iter()
        .enumerate()
        .map(|(g, e)| {
            let (a, b) = e.as_ref().ok_or_else(|| SpecError::MissingEdge(basis.name(g).to_string()))?;
            Ok(GraphEdge {
                name: basis.name(g).to_string(),
                init: index[a.as_str()],
                term: index[b.as_str()],
            })
        })
        .collect::<Result<Vec<_>, SpecError>>()?;
    Ok(MarkedGraph::new(names, graph_edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINEAR4: &str = "\
# linearly growing automorphism of F4
basis: e0 e1 e2 e3
map: e0 -> e0
map: e1 -> e1 e0
map: e2 -> e2 e0
map: e3 -> e3 e0 e1 e2^-1
";

    #[test]
    fn parses_rose() {
        let s = parse_spec(LINEAR4).unwrap();
        assert_eq!(s.basis.rank(), 4);
        assert!(s.graph.is_none());
        assert_eq!(s.order, [0, 1, 2, 3]);
        assert_eq!(s.graph_map().unwrap().graph().vertex_count(), 1);
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn missing_image_is_named() {
        let text = LINEAR4.replace("map: e2 -> e2 e0\n", "");
        assert_eq!(parse_spec(&text), Err(SpecError::MissingImage("e2".into())));
    }

    #[test]
    fn identity_rank_one() {
        let s = parse_spec("basis: a\nmap: a -> a\n").unwrap();
        assert!(s.map.is_identity());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_spec("basis: a\nmap: a -> b\n"),
            Err(SpecError::UnknownGenerator { line: 2, .. })
        ));
        assert!(matches!(
            parse_spec("basis: a\nmap: a -> a\nmap: a -> a\n"),
            Err(SpecError::Duplicate { line: 3, .. })
        ));
        assert_eq!(parse_spec("map: a -> a\n"), Err(SpecError::MissingBasis));
        assert!(matches!(parse_spec("basis: a\nfoo\n"), Err(SpecError::Syntax { line: 2, .. })));
    }

    #[test]
    fn unreduced_image_warns() {
        let s = parse_spec("basis: a b\nmap: a -> a\nmap: b -> b a a^-1 a\n").unwrap();
        assert_eq!(s.basis.format_word(s.map.image(1)), "b a");
        assert_eq!(s.warnings.len(), 1);
    }

    #[test]
    fn powers_are_not_warned() {
        let s = parse_spec("basis: a b\nmap: a -> a\nmap: b -> b a^2\n").unwrap();
        assert!(s.warnings.is_empty());
        assert_eq!(s.map.image(1).len(), 3);
    }

    #[test]
    fn graph_and_order() {
        let text = "\
basis: a b e
vertices: u v
edge: a u u
edge: b v v
edge: e u v
map: a -> a
map: b -> b
map: e -> e b
order: a b e
inverse: a -> a
inverse: b -> b
inverse: e -> e b^-1
";
        let s = parse_spec(text).unwrap();
        let g = s.graph.as_ref().unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge(2).term, 1);
        assert!(s.inverse.is_some());
        let phi = s.automorphism().unwrap();
        assert!(phi.is_identity());
    }

    #[test]
    fn bad_order() {
        assert_eq!(
            parse_spec("basis: a b\nmap: a -> a\nmap: b -> b\norder: a a\n"),
            Err(SpecError::BadOrder)
        );
    }
}
