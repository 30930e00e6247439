use crate::word::{Endomorphism, Letter, Word};

use super::graph::{EdgePath, MarkedGraph, Marking};
use super::TrackError;

/// Graph self-map fixing every vertex, given by edge-path images, together
/// with a candidate filtration order (position -> edge).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMap {
    graph: MarkedGraph,
    map: Endomorphism,
    order: Vec<usize>,
}

impl GraphMap {
    pub fn new(graph: MarkedGraph, images: Vec<Word>, order: Vec<usize>) -> Result<Self, TrackError> {
        let map = Endomorphism::new(graph.edge_basis(), images)
            .map_err(|e| TrackError::Incidence(e.to_string()))?;
        let mut seen = vec![false; graph.edge_count()];
        if order.len() != graph.edge_count() {
            return Err(TrackError::BadOrder);
        }
        for &e in &order {
            if e >= seen.len() || seen[e] {
                return Err(TrackError::BadOrder);
            }
            seen[e] = true;
        }
        Ok(Self { graph, map, order })
    }

    /// The rose carrying `phi`, filtered in basis order.
    pub fn rose(phi: &Endomorphism) -> Self {
        let graph = MarkedGraph::rose(phi.basis().names());
        Self {
            graph,
            map: Endomorphism::new(phi.basis().clone(), phi.images().to_vec()).expect("same rank"),
            order: (0..phi.rank()).collect(),
        }
    }

    pub fn graph(&self) -> &MarkedGraph {
        &self.graph
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn with_order(&self, order: Vec<usize>) -> Result<Self, TrackError> {
        Self::new(self.graph.clone(), self.map.images().to_vec(), order)
    }

    pub fn image(&self, e: usize) -> &Word {
        self.map.image(e)
    }

    pub fn images(&self) -> &[Word] {
        self.map.images()
    }

    /// The map on edge paths (tightened).
    pub fn apply(&self, path: &Word) -> Word {
        self.map.apply(path)
    }

    pub fn edge_map(&self) -> &Endomorphism {
        &self.map
    }

    pub fn marking(&self) -> Result<Marking, TrackError> {
        Marking::new(&self.graph, &self.order)
    }

    /// Automorphism of `π₁(Γ, base)` in the basis of the marking.
    pub fn induced_automorphism(&self) -> Result<Endomorphism, TrackError> {
        let m = self.marking()?;
        let mut images = Vec::new();
        for e in 0..self.graph.edge_count() {
            if m.tree[e] {
                continue;
            }
            let loop_e = m.basis_loop(&self.graph, e);
            images.push(m.read(&self.apply(&loop_e)));
        }
        Ok(Endomorphism::new(m.basis.clone(), images).expect("marking basis"))
    }

    /// Restriction to an `f`-invariant set of edges; names are preserved.
    pub fn restrict(&self, edges: &[usize]) -> Result<GraphMap, TrackError> {
        let mut local = vec![None; self.graph.edge_count()];
        for (i, &e) in edges.iter().enumerate() {
            local[e] = Some(i);
        }
        let (graph, _, _) = self.graph.subgraph(edges, &[]);
        let mut images = Vec::with_capacity(edges.len());
        for &e in edges {
            let mut w = Word::empty();
            for l in self.image(e).letters() {
                match local[l.index()] {
                    Some(i) => w.push(Letter::new(i, !l.inverse)),
                    None => {
                        return Err(TrackError::NotInvariant {
                            edge: self.graph.edge(e).name.clone(),
                            leaves_to: self.graph.edge(l.index()).name.clone(),
                        })
                    }
                }
            }
            images.push(w);
        }
        let order = self
            .order
            .iter()
            .filter_map(|&e| local[e])
            .collect();
        GraphMap::new(graph, images, order)
    }
}

/// A graph map whose filtration satisfies: every vertex fixed, each level
/// adds one edge, and `f(e_i) = e_i p_i` with `p_i` an immersed closed path
/// in the lower levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredRepresentative {
    map: GraphMap,
    suffixes: Vec<Word>,
    position: Vec<usize>,
}

/// Checks a candidate filtered graph map; returns the first violation.
pub fn verify_representative(candidate: GraphMap) -> Result<FilteredRepresentative, TrackError> {
    let g = candidate.graph();
    if !g.is_connected() {
        return Err(TrackError::Disconnected);
    }
    let mut position = vec![0; g.edge_count()];
    for (i, &e) in candidate.order().iter().enumerate() {
        position[e] = i;
    }
    let mut suffixes = vec![Word::empty(); g.edge_count()];
    for (i, &e) in candidate.order().iter().enumerate() {
        let name = || g.edge(e).name.clone();
        let image = candidate.image(e);
        let letters = image.letters();
        g.path(letters)?;
        if letters.first() != Some(&Letter::pos(e)) {
            return Err(TrackError::MissingPrefix { edge: name() });
        }
        let rest = &letters[1..];
        if let Some(l) = rest.iter().find(|l| position[l.index()] >= i) {
            return Err(TrackError::SuffixUsesLaterEdge {
                edge: name(),
                uses: g.edge(l.index()).name.clone(),
            });
        }
        let path = g.path(rest)?;
        let at = g.edge(e).term;
        if let Some((a, b)) = path.ends {
            if a != at || b != at {
                return Err(TrackError::SuffixNotClosed { edge: name() });
            }
        }
        if !Word::is_reduced_sequence(rest) {
            return Err(TrackError::SuffixNotImmersed { edge: name() });
        }
        suffixes[e] = path.word;
    }
    Ok(FilteredRepresentative {
        map: candidate,
        suffixes,
        position,
    })
}

impl FilteredRepresentative {
    pub fn map(&self) -> &GraphMap {
        &self.map
    }

    pub fn graph(&self) -> &MarkedGraph {
        self.map.graph()
    }

    pub fn order(&self) -> &[usize] {
        self.map.order()
    }

    pub fn edge_count(&self) -> usize {
        self.graph().edge_count()
    }

    pub fn suffix(&self, e: usize) -> &Word {
        &self.suffixes[e]
    }

    pub fn position(&self, e: usize) -> usize {
        self.position[e]
    }

    pub fn is_invariant(&self, e: usize) -> bool {
        self.suffixes[e].is_empty()
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.graph().edge(e).name
    }

    /// Edges of the `i`-th filtration level.
    pub fn level(&self, i: usize) -> &[usize] {
        &self.order()[..i]
    }

    /// Invariant edges moved below all others, keeping relative order.
    /// This is always allowed: an invariant edge has no suffix to depend on
    /// lower edges.
    pub fn normalized(&self) -> FilteredRepresentative {
        let (mut inv, rest): (Vec<usize>, Vec<usize>) =
            self.order().iter().partition(|&&e| self.is_invariant(e));
        inv.extend(rest);
        verify_representative(self.map.with_order(inv).expect("permutation"))
            .expect("sinking invariant edges keeps the filtration valid")
    }

    pub fn is_normalized(&self) -> bool {
        let k = self.invariant_count();
        self.order()[..k].iter().all(|&e| self.is_invariant(e))
    }

    pub fn invariant_count(&self) -> usize {
        self.suffixes.iter().filter(|s| s.is_empty()).count()
    }

    /// `f` applied `k` times with backtracks removed after each application.
    pub fn tighten(&self, path: &[Letter], k: u32) -> Result<EdgePath, TrackError> {
        let mut p = self.graph().path(path)?;
        for _ in 0..k {
            p.word = self.map.apply(&p.word);
        }
        Ok(p)
    }

    /// Whether a closed immersed path is fixed up to tightening.
    pub fn is_nielsen(&self, path: &[Letter]) -> Result<bool, TrackError> {
        let p = self.graph().path(path)?;
        if !p.is_closed() {
            return Err(TrackError::NotClosed);
        }
        if !Word::is_reduced_sequence(path) {
            return Err(TrackError::NotImmersed);
        }
        Ok(self.map.apply(&p.word) == p.word)
    }

    pub fn restrict(&self, edges: &[usize]) -> Result<FilteredRepresentative, TrackError> {
        verify_representative(self.map.restrict(edges)?)
    }
}
