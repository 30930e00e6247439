use crate::train_track::{FilteredRepresentative, GrowthTable, MarkedGraph};

use super::{stable_letter, PieceKind, SplittingDescriptor, SplittingKind, ThicknessError, VertexPiece};

/// A splitting together with the restricted representatives of its
/// non-simply-connected pieces (`None` for tree pieces).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitting {
    pub descriptor: SplittingDescriptor,
    pub restricted: Vec<Option<FilteredRepresentative>>,
}

fn names(g: &MarkedGraph, edges: &[usize]) -> Vec<String> {
    edges.iter().map(|&e| g.edge(e).name.clone()).collect()
}

fn vertex_names(g: &MarkedGraph, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| g.vertex_name(v).to_string()).collect()
}

/// Name of the `t` loop at a vertex: plain `t` on a one-vertex graph.
fn t_name(g: &MarkedGraph, stable: &str, v: usize) -> String {
    if g.vertex_count() == 1 {
        stable.to_string()
    } else {
        format!("{stable}_{}", g.vertex_name(v))
    }
}

fn piece(
    f: &FilteredRepresentative,
    vertices: &[usize],
    edges: &[usize],
) -> Result<(VertexPiece, Option<FilteredRepresentative>), ThicknessError> {
    let g = f.graph();
    let betti = (edges.len() + 1).saturating_sub(vertices.len());
    let (kind, restricted) = if betti > 0 {
        (PieceKind::ThickVertex, Some(f.restrict(edges)?))
    } else {
        (PieceKind::EdgeGroupConjugate, None)
    };
    Ok((
        VertexPiece {
            vertices: vertex_names(g, vertices),
            edges: names(g, edges),
            betti,
            kind,
        },
        restricted,
    ))
}

/// Removes the highest edge `e_n`. The rest of the graph is invariant, so
/// the mapping torus splits as a one-edge graph of groups whose edge group
/// is generated by a `t`, with HNN relation `e_n⁻¹ t_a e_n = p_n t_b`.
pub fn topmost_splitting(f: &FilteredRepresentative) -> Result<Splitting, ThicknessError> {
    let f = f.normalized();
    let n = f.edge_count();
    if n == f.invariant_count() {
        return Err(ThicknessError::BaseCase);
    }
    let g = f.graph();
    let top = f.order()[n - 1];
    let lower = f.level(n - 1).to_vec();
    let comps = g.components(&lower, true);
    let mut pieces = Vec::new();
    let mut restricted = Vec::new();
    for (vs, es) in &comps {
        let (p, r) = piece(&f, vs, es)?;
        pieces.push(p);
        restricted.push(r);
    }
    let trees = pieces
        .iter()
        .filter(|p| p.kind == PieceKind::EdgeGroupConjugate)
        .count();
    if pieces.is_empty() || pieces.len() > 2 || trees > 1 {
        return Err(ThicknessError::Inconsistent(format!(
            "removing {} leaves {} pieces, {} of them trees",
            g.edge(top).name,
            pieces.len(),
            trees
        )));
    }
    let stable = stable_letter(&g.edge_basis());
    let edge = g.edge(top);
    let p = g.format_path(f.suffix(top));
    let ta = t_name(g, &stable, edge.init);
    let tb = t_name(g, &stable, edge.term);
    let rhs = if f.suffix(top).is_empty() {
        tb.clone()
    } else {
        format!("{p} {tb}")
    };
    let relation = format!("{e}^-1 {ta} {e} = {rhs}", e = edge.name);
    Ok(Splitting {
        descriptor: SplittingDescriptor {
            kind: SplittingKind::TopmostEdge,
            removed: vec![edge.name.clone()],
            pieces,
            edge_groups: vec![format!("{}: conjugate to <{stable}>", edge.name)],
            relations: vec![relation],
        },
        restricted,
    })
}

/// Removes the doomed part of the graph: the edges of top degree, every
/// lower edge whose component of the top-degree-free subgraph is a tree,
/// and the vertices left with only doomed edges. What survives is an
/// invariant subgraph of lower growth.
pub fn doomed_split(f: &FilteredRepresentative, table: &GrowthTable) -> Result<Splitting, ThicknessError> {
    if table.eta < 2 {
        return Err(ThicknessError::DegreeTooLow(table.eta));
    }
    let g = f.graph();
    let n = f.edge_count();
    let mut in_e = vec![false; n];
    for &e in &table.e_set {
        in_e[e] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&e| !in_e[e]).collect();
    let mut doomed = in_e.clone();
    for (vs, es) in g.components(&free, true) {
        if es.len() + 1 == vs.len() {
            for e in es {
                doomed[e] = true;
            }
        }
    }
    let survivors: Vec<usize> = (0..n).filter(|&e| !doomed[e]).collect();
    let doomed_vertices: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| g.valence(v, &survivors) == 0)
        .collect();
    let mut pieces = Vec::new();
    let mut restricted = Vec::new();
    for (vs, es) in g.components(&survivors, false) {
        for &e in &es {
            if let Some(l) = f.map().image(e).letters().iter().find(|l| doomed[l.index()]) {
                return Err(ThicknessError::Inconsistent(format!(
                    "image of surviving edge {} crosses doomed edge {}",
                    g.edge(e).name,
                    g.edge(l.index()).name
                )));
            }
        }
        let (p, r) = piece(f, &vs, &es)?;
        pieces.push(p);
        restricted.push(r);
    }
    for &v in &doomed_vertices {
        let (p, r) = piece(f, &[v], &[])?;
        pieces.push(p);
        restricted.push(r);
    }
    let removed: Vec<usize> = f.order().iter().copied().filter(|&e| doomed[e]).collect();
    let stable = stable_letter(&g.edge_basis());
    Ok(Splitting {
        descriptor: SplittingDescriptor {
            kind: SplittingKind::DoomedRemoval,
            removed: names(g, &removed),
            pieces,
            edge_groups: removed
                .iter()
                .map(|&e| format!("{}: conjugate to <{stable}>", g.edge(e).name))
                .collect(),
            relations: Vec::new(),
        },
        restricted,
    })
}
