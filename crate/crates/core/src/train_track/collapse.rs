use crate::word::{Letter, Word};

use super::graph::{GraphEdge, MarkedGraph};
use super::{verify_representative, FilteredRepresentative, GraphMap, TrackError};

/// Contracts the non-loop edge `e`, folding `gone` into the other endpoint.
fn contract(graph: &MarkedGraph, images: &[Word], order: &[usize], e: usize, gone: usize) -> (MarkedGraph, Vec<Word>, Vec<usize>) {
    let edge = graph.edge(e);
    let kept = if edge.init == gone { edge.term } else { edge.init };
    let vmap = |v: usize| {
        let v = if v == gone { kept } else { v };
        if v > gone {
            v - 1
        } else {
            v
        }
    };
    let emap = |x: usize| if x > e { x - 1 } else { x };
    let vertices = graph
        .vertex_names()
        .iter()
        .enumerate()
        .filter(|&(v, _)| v != gone)
        .map(|(_, n)| n.clone())
        .collect();
    let edges = graph
        .edges()
        .iter()
        .enumerate()
        .filter(|&(x, _)| x != e)
        .map(|(_, ed)| GraphEdge {
            name: ed.name.clone(),
            init: vmap(ed.init),
            term: vmap(ed.term),
        })
        .collect();
    let images = images
        .iter()
        .enumerate()
        .filter(|&(x, _)| x != e)
        .map(|(_, w)| {
            w.letters()
                .iter()
                .filter(|l| l.index() != e)
                .map(|l| Letter::new(emap(l.index()), !l.inverse))
                .collect::<Word>()
        })
        .collect();
    let order = order.iter().filter(|&&x| x != e).map(|&x| emap(x)).collect();
    (
        MarkedGraph::new(vertices, edges).expect("endpoints remapped"),
        images,
        order,
    )
}

/// Collapses free faces of the invariant subgraph until each of its
/// components is a point or has no valence-one vertex. Only invariant,
/// non-loop edges are contracted, so the result is homotopy equivalent and
/// induces the same automorphism.
pub fn collapse_free_faces(f: &FilteredRepresentative) -> Result<FilteredRepresentative, TrackError> {
    let mut graph = f.graph().clone();
    let mut images = f.map().images().to_vec();
    let mut order = f.order().to_vec();
    loop {
        let invariant: Vec<usize> = (0..graph.edge_count())
            .filter(|&e| images[e].letters() == [Letter::pos(e)])
            .collect();
        let face = (0..graph.vertex_count()).find_map(|v| {
            if graph.valence(v, &invariant) != 1 {
                return None;
            }
            invariant
                .iter()
                .copied()
                .find(|&e| graph.edge(e).init == v || graph.edge(e).term == v)
                .map(|e| (e, v))
        });
        match face {
            Some((e, v)) => {
                let next = contract(&graph, &images, &order, e, v);
                graph = next.0;
                images = next.1;
                order = next.2;
            }
            None => break,
        }
    }
    verify_representative(GraphMap::new(graph, images, order)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::train_track::representative::tests::linear4_map;
    use proptest::prelude::*;

    #[test]
    fn rose_unchanged() {
        let f = verify_representative(linear4_map()).unwrap();
        let c = collapse_free_faces(&f).unwrap();
        assert_eq!(c, f);
    }

    #[test]
    fn invariant_segment_collapses() {
        // invariant segment s from p to q, invariant loop a at p, and a loop c
        // at q whose suffix runs back along s to a
        let g = MarkedGraph::new(
            vec!["p".into(), "q".into()],
            vec![
                GraphEdge { name: "s".into(), init: 0, term: 1 },
                GraphEdge { name: "a".into(), init: 0, term: 0 },
                GraphEdge { name: "c".into(), init: 1, term: 1 },
            ],
        )
        .unwrap();
        let b = g.edge_basis();
        let imgs = vec![
            b.parse_word("s").unwrap(),
            b.parse_word("a").unwrap(),
            b.parse_word("c s^-1 a s").unwrap(),
        ];
        let f = verify_representative(GraphMap::new(g, imgs, vec![0, 1, 2]).unwrap()).unwrap();
        let before = f.map().induced_automorphism().unwrap();
        let c = collapse_free_faces(&f).unwrap();
        assert_eq!(c.graph().vertex_count(), 1);
        assert_eq!(c.graph().edge_count(), 2);
        assert_eq!(c.graph().format_path(c.suffix(1)), "a");
        let after = c.map().induced_automorphism().unwrap();
        assert_eq!(before, after);
    }

    // A random tree of invariant edges hanging off the four-petal rose.
    fn tree_fixture(parents: &[usize]) -> FilteredRepresentative {
        let mut vertices = vec!["v0".to_string()];
        let mut edges: Vec<GraphEdge> = ["e0", "e1", "e2", "e3"]
            .iter()
            .map(|n| GraphEdge { name: n.to_string(), init: 0, term: 0 })
            .collect();
        for (i, &p) in parents.iter().enumerate() {
            vertices.push(format!("w{i}"));
            let parent = p % vertices.len().saturating_sub(1).max(1);
            edges.push(GraphEdge {
                name: format!("h{i}"),
                init: parent,
                term: i + 1,
            });
        }
        let g = MarkedGraph::new(vertices, edges).unwrap();
        let b = g.edge_basis();
        let mut imgs: Vec<Word> = ["e0", "e1 e0", "e2 e0", "e3 e0 e1 e2^-1"]
            .iter()
            .map(|s| b.parse_word(s).unwrap())
            .collect();
        let mut order = vec![0];
        for i in 0..parents.len() {
            imgs.push(Word::gen(4 + i));
            order.push(4 + i);
        }
        order.extend([1, 2, 3]);
        verify_representative(GraphMap::new(g, imgs, order).unwrap()).unwrap()
    }

    fn level_bettis(f: &FilteredRepresentative) -> Vec<usize> {
        (0..=f.edge_count())
            .map(|i| f.graph().betti(f.level(i)))
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn tree_collapses_to_core(parents in prop::collection::vec(0usize..8, 1..8)) {
            let f = tree_fixture(&parents);
            let c = collapse_free_faces(&f).unwrap();
            // every invariant component is a point or core graph
            let inv: Vec<usize> = (0..c.edge_count()).filter(|&e| c.is_invariant(e)).collect();
            for v in 0..c.graph().vertex_count() {
                prop_assert!(c.graph().valence(v, &inv) != 1);
            }
            // Betti numbers of the levels survive, matched by surviving edges
            let before = level_bettis(&f);
            let after = level_bettis(&c);
            prop_assert_eq!(before.last(), after.last());
            let mut j = 0;
            for i in 0..=f.edge_count() {
                let kept = f.order()[..i]
                    .iter()
                    .filter(|&&e| c.graph().edge_index(f.edge_name(e)).is_some())
                    .count();
                j = j.max(kept);
                prop_assert_eq!(before[i], after[kept]);
            }
            prop_assert!(j <= c.edge_count());
            prop_assert_eq!(
                f.map().induced_automorphism().unwrap(),
                c.map().induced_automorphism().unwrap()
            );
        }
    }
}
