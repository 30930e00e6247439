use std::collections::{HashMap, VecDeque};

use crate::word::{FreeBasis, Letter, Word};

use super::TrackError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphEdge {
    pub name: String,
    pub init: usize,
    pub term: usize,
}

/// Finite graph with named vertices and oriented, named edges.
///
/// Edge paths are [`Word`]s over the edge set: letter `i` crosses edge `i`
/// forwards, its inverse crosses it backwards. Tightening a path is free
/// reduction of that word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedGraph {
    vertices: Vec<String>,
    edges: Vec<GraphEdge>,
}

/// Edge path with its endpoints; `None` endpoints for the trivial path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePath {
    pub word: Word,
    pub ends: Option<(usize, usize)>,
}

impl EdgePath {
    pub fn is_closed(&self) -> bool {
        self.ends.is_none_or(|(a, b)| a == b)
    }

    pub fn is_immersed(&self) -> bool {
        Word::is_reduced_sequence(self.word.letters())
    }
}

impl MarkedGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<GraphEdge>) -> Result<Self, TrackError> {
        for e in &edges {
            if e.init >= vertices.len() || e.term >= vertices.len() {
                return Err(TrackError::UnknownVertex(e.name.clone()));
            }
        }
        Ok(Self { vertices, edges })
    }

    /// One vertex with a loop per name.
    pub fn rose<S: AsRef<str>>(names: &[S]) -> Self {
        Self {
            vertices: vec!["v0".to_string()],
            edges: names
                .iter()
                .map(|n| GraphEdge {
                    name: n.as_ref().to_string(),
                    init: 0,
                    term: 0,
                })
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &GraphEdge {
        &self.edges[e]
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn edge_basis(&self) -> FreeBasis {
        FreeBasis::new(self.edges.iter().map(|e| e.name.clone())).expect("edge names validated")
    }

    /// Start and end vertex of a single step.
    pub fn step_ends(&self, l: Letter) -> (usize, usize) {
        let e = &self.edges[l.index()];
        if l.inverse {
            (e.term, e.init)
        } else {
            (e.init, e.term)
        }
    }

    /// Checks consecutive steps are incident.
    pub fn path(&self, letters: &[Letter]) -> Result<EdgePath, TrackError> {
        let mut ends: Option<(usize, usize)> = None;
        for &l in letters {
            if l.index() >= self.edges.len() {
                return Err(TrackError::Incidence(format!("edge #{}", l.index())));
            }
            let (a, b) = self.step_ends(l);
            ends = match ends {
                None => Some((a, b)),
                Some((s, t)) if t == a => Some((s, b)),
                Some(_) => {
                    return Err(TrackError::Incidence(self.edges[l.index()].name.clone()));
                }
            };
        }
        Ok(EdgePath {
            word: Word::reduce(letters.iter().copied()),
            ends,
        })
    }

    pub fn format_path(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.letters()
            .iter()
            .map(|l| {
                let n = &self.edges[l.index()].name;
                if l.inverse {
                    format!("{n}^-1")
                } else {
                    n.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Connected components of the subgraph spanned by `edges`, as
    /// (vertex list, edge list) pairs. With `all_vertices`, vertices not
    /// touched by any listed edge form singleton components.
    pub fn components(&self, edges: &[usize], all_vertices: bool) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut x = x;
            while p[x] != r {
                let n = p[x];
                p[x] = r;
                x = n;
            }
            r
        }
        let mut touched = vec![all_vertices; self.vertices.len()];
        for &e in edges {
            let (a, b) = (self.edges[e].init, self.edges[e].term);
            touched[a] = true;
            touched[b] = true;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut by_root: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for v in 0..self.vertices.len() {
            if !touched[v] {
                continue;
            }
            let r = find(&mut parent, v);
            let i = *slot.entry(r).or_insert_with(|| {
                by_root.push((r, Vec::new(), Vec::new()));
                by_root.len() - 1
            });
            by_root[i].1.push(v);
        }
        let mut sorted_edges = edges.to_vec();
        sorted_edges.sort_unstable();
        for e in sorted_edges {
            let r = find(&mut parent, self.edges[e].init);
            by_root[slot[&r]].2.push(e);
        }
        by_root.into_iter().map(|(_, v, e)| (v, e)).collect()
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<usize> = (0..self.edges.len()).collect();
        self.components(&all, true).len() <= 1
    }

    /// First Betti number of the subgraph spanned by `edges`.
    pub fn betti(&self, edges: &[usize]) -> usize {
        let comps = self.components(edges, false);
        let v: usize = comps.iter().map(|c| c.0.len()).sum();
        edges.len() + comps.len() - v
    }

    /// Valence of `v` counted over `edges` (loops count twice).
    pub fn valence(&self, v: usize, edges: &[usize]) -> usize {
        edges
            .iter()
            .map(|&e| (self.edges[e].init == v) as usize + (self.edges[e].term == v) as usize)
            .sum()
    }

    /// Subgraph on the listed edges and their endpoints; vertex and edge
    /// names are kept.
    pub fn subgraph(&self, edges: &[usize], extra_vertices: &[usize]) -> (MarkedGraph, Vec<usize>, Vec<usize>) {
        let mut vmap: HashMap<usize, usize> = HashMap::new();
        let mut vkeep = Vec::new();
        let mut ends: Vec<usize> = Vec::new();
        for &e in edges {
            ends.push(self.edges[e].init);
            ends.push(self.edges[e].term);
        }
        ends.extend_from_slice(extra_vertices);
        ends.sort_unstable();
        ends.dedup();
        for v in ends {
            vmap.insert(v, vkeep.len());
            vkeep.push(v);
        }
        let g = MarkedGraph {
            vertices: vkeep.iter().map(|&v| self.vertices[v].clone()).collect(),
            edges: edges
                .iter()
                .map(|&e| GraphEdge {
                    name: self.edges[e].name.clone(),
                    init: vmap[&self.edges[e].init],
                    term: vmap[&self.edges[e].term],
                })
                .collect(),
        };
        (g, vkeep, edges.to_vec())
    }
}

/// Identification of `π₁(Γ, base)` with a free basis: a spanning tree built
/// greedily in a given edge order; the edges outside it are the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marking {
    pub base: usize,
    pub tree: Vec<bool>,
    /// tree path from the base vertex to each vertex
    pub tree_paths: Vec<Word>,
    /// basis position of each non-tree edge
    pub basis_slot: Vec<Option<usize>>,
    pub basis: FreeBasis,
}

impl Marking {
    pub fn new(graph: &MarkedGraph, order: &[usize]) -> Result<Self, TrackError> {
        if !graph.is_connected() {
            return Err(TrackError::Disconnected);
        }
        let n = graph.vertex_count();
        let mut comp: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut tree = vec![false; graph.edge_count()];
        for &e in order {
            let (a, b) = (graph.edge(e).init, graph.edge(e).term);
            let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
            if ra != rb {
                comp[ra] = rb;
                tree[e] = true;
            }
        }
        // BFS over tree edges from the base.
        let base = 0;
        let mut tree_paths: Vec<Option<Word>> = vec![None; n];
        tree_paths[base] = Some(Word::empty());
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            let here = tree_paths[v].clone().expect("visited");
            for (i, e) in graph.edges().iter().enumerate() {
                if !tree[i] {
                    continue;
                }
                let step = if e.init == v && tree_paths[e.term].is_none() {
                    Some((e.term, Letter::pos(i)))
                } else if e.term == v && tree_paths[e.init].is_none() {
                    Some((e.init, Letter::neg(i)))
                } else {
                    None
                };
                if let Some((w, l)) = step {
                    let mut p = here.clone();
                    p.push(l);
                    tree_paths[w] = Some(p);
                    queue.push_back(w);
                }
            }
        }
        let mut basis_slot = vec![None; graph.edge_count()];
        let mut names = Vec::new();
        for (i, e) in graph.edges().iter().enumerate() {
            if !tree[i] {
                basis_slot[i] = Some(names.len());
                names.push(e.name.clone());
            }
        }
        if names.is_empty() {
            return Err(TrackError::SimplyConnected);
        }
        Ok(Self {
            base,
            tree,
            tree_paths: tree_paths.into_iter().map(|p| p.expect("connected")).collect(),
            basis_slot,
            basis: FreeBasis::new(names).expect("edge names validated"),
        })
    }

    /// Reads a path as a word in the basis by dropping tree edges.
    pub fn read(&self, path: &Word) -> Word {
        path.letters()
            .iter()
            .filter_map(|l| self.basis_slot[l.index()].map(|s| Letter::new(s, !l.inverse)))
            .collect()
    }

    /// Element of `π₁(Γ, base)` given by a loop at `v`, moved to the base
    /// along the tree.
    pub fn loop_at(&self, v: usize, path: &Word) -> Word {
        self.read(&path.conjugate_by(&self.tree_paths[v]))
    }

    /// Loop at the base vertex crossing the non-tree edge `e` once.
    pub fn basis_loop(&self, graph: &MarkedGraph, e: usize) -> Word {
        let edge = graph.edge(e);
        let mut w = self.tree_paths[edge.init].clone();
        w.push(Letter::pos(e));
        w.append_inverse(&self.tree_paths[edge.term]);
        w
    }
}
