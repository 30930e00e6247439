use std::collections::BTreeMap;

use super::{Letter, Word};

#[derive(Debug, Clone, Default)]
struct Vertex {
    /// slot of the outgoing letter -> (target, label)
    out: BTreeMap<usize, (usize, Word)>,
    /// set once the vertex has been folded into another one
    merged_into: Option<(usize, Word)>,
}

/// Folded (immersed) core graph of a finitely generated subgroup.
///
/// Every edge carries a label: a word in the subgroup generators
/// `x0, x1, ...`. Reading a closed path at the basepoint spells an element of
/// the free group, and the product of labels along it spells the same element
/// in terms of the generators. Folding preserves this, which is what lets
/// [`express`](Self::express) rewrite members in the generators.
#[derive(Debug, Clone)]
pub struct SubgroupGraph {
    rank: usize,
    vertices: Vec<Vertex>,
}

type PendingEdge = (usize, Letter, usize, Word);

impl SubgroupGraph {
    pub const BASE: usize = 0;

    pub fn new(rank: usize, gens: &[Word]) -> Self {
        let mut g = SubgroupGraph {
            rank,
            vertices: vec![Vertex::default()],
        };
        let mut work: Vec<PendingEdge> = Vec::new();
        for (i, w) in gens.iter().enumerate() {
            let n = w.len();
            if n == 0 {
                continue;
            }
            let mut prev = Self::BASE;
            for (k, &l) in w.letters().iter().enumerate() {
                let next = if k + 1 == n {
                    Self::BASE
                } else {
                    g.vertices.push(Vertex::default());
                    g.vertices.len() - 1
                };
                let label = if k == 0 {
                    Word::gen(i)
                } else {
                    Word::empty()
                };
                work.push((prev, l, next, label));
                prev = next;
            }
        }
        // Insert in reverse so edges are processed in generator order.
        work.reverse();
        g.run(work);
        g
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn resolve(&self, mut u: usize, mut v: usize, mut label: Word) -> (usize, usize, Word) {
        while let Some((k, c)) = &self.vertices[u].merged_into {
            label = c.mul(&label);
            u = *k;
        }
        while let Some((k, c)) = &self.vertices[v].merged_into {
            label.append_inverse(c);
            v = *k;
        }
        (u, v, label)
    }

    fn run(&mut self, mut work: Vec<PendingEdge>) {
        while let Some((u, l, v, label)) = work.pop() {
            let (u, v, label) = self.resolve(u, v, label);
            if let Some((w, beta)) = self.vertices[u].out.get(&l.slot()).cloned() {
                if w != v {
                    self.merge(v, &label, w, &beta, &mut work);
                    work.push((u, l, v, label));
                }
                continue;
            }
            if let Some((z, gamma)) = self.vertices[v].out.get(&l.inv().slot()).cloned() {
                if z != u {
                    self.merge(u, &label.inverse(), z, &gamma, &mut work);
                    work.push((u, l, v, label));
                }
                continue;
            }
            self.vertices[u].out.insert(l.slot(), (v, label.clone()));
            self.vertices[v].out.insert(l.inv().slot(), (u, label.inverse()));
        }
    }

    /// Identifies `a` and `b`, both reached from one vertex along the same
    /// letter with labels `alpha` and `beta`.
    fn merge(&mut self, a: usize, alpha: &Word, b: usize, beta: &Word, work: &mut Vec<PendingEdge>) {
        let (gone, kept, correction) = if b == Self::BASE {
            (a, b, beta.inverse().mul(alpha))
        } else {
            (b, a, alpha.inverse().mul(beta))
        };
        let out = std::mem::take(&mut self.vertices[gone].out);
        for (&slot, (y, _)) in &out {
            if *y != gone {
                let back = Letter::from_slot(slot).inv().slot();
                if matches!(self.vertices[*y].out.get(&back), Some((t, _)) if *t == gone) {
                    self.vertices[*y].out.remove(&back);
                }
            }
        }
        self.vertices[gone].merged_into = Some((kept, correction));
        for (slot, (y, label)) in out {
            work.push((gone, Letter::from_slot(slot), y, label));
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| v.merged_into.is_none())
            .count()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.iter().map(|v| v.out.len()).sum::<usize>() / 2
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.trace(w).map(|(end, _)| end == Self::BASE).unwrap_or(false)
    }

    /// Rewrites a member of the subgroup as a reduced word in the generators.
    pub fn express(&self, w: &Word) -> Option<Word> {
        match self.trace(w)? {
            (Self::BASE, label) => Some(label),
            _ => None,
        }
    }

    fn trace(&self, w: &Word) -> Option<(usize, Word)> {
        let mut at = Self::BASE;
        let mut acc = Word::empty();
        for l in w.letters() {
            let (next, label) = self.vertices[at].out.get(&l.slot())?;
            acc.append(label);
            at = *next;
        }
        Some((at, acc))
    }
}

/// Decides `w ∈ ⟨gens⟩` by folding.
pub fn stallings_membership(rank: usize, gens: &[Word], w: &Word) -> bool {
    SubgroupGraph::new(rank, gens).contains(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::FreeBasis;
    use proptest::prelude::*;

    fn ab() -> FreeBasis {
        FreeBasis::new(["a", "b"]).unwrap()
    }

    #[test]
    fn ab_b_contains_a() {
        let b = ab();
        let gens = [b.parse_word("a b").unwrap(), b.parse_word("b").unwrap()];
        let a = b.parse_word("a").unwrap();
        assert!(stallings_membership(2, &gens, &a));
        let g = SubgroupGraph::new(2, &gens);
        // a = (ab) b^-1
        assert_eq!(g.express(&a).unwrap(), Word::reduce([Letter::pos(0), Letter::neg(1)]));
    }

    #[test]
    fn a_squared_excludes_a() {
        let b = ab();
        let gens = [b.parse_word("a a").unwrap()];
        assert!(!stallings_membership(2, &gens, &b.parse_word("a").unwrap()));
        assert!(stallings_membership(2, &gens, &b.parse_word("a^-4").unwrap()));
        let g = SubgroupGraph::new(2, &gens);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn full_basis_contains_everything() {
        let b = ab();
        let gens = [b.parse_word("a").unwrap(), b.parse_word("b").unwrap()];
        for s in ["a b a^-1 b^-1", "b b b", "1", "a^-7 b"] {
            assert!(stallings_membership(2, &gens, &b.parse_word(s).unwrap()));
        }
    }

    #[test]
    fn conjugate_not_contained() {
        let b = ab();
        let gens = [b.parse_word("a b a^-1").unwrap()];
        assert!(!stallings_membership(2, &gens, &b.parse_word("b").unwrap()));
        assert!(stallings_membership(2, &gens, &b.parse_word("a b^3 a^-1").unwrap()));
    }

    #[test]
    fn empty_generators() {
        let g = SubgroupGraph::new(2, &[Word::empty()]);
        assert!(g.contains(&Word::empty()));
        assert!(!g.contains(&Word::gen(0)));
    }

    // Subgroup words (products of generators) are members, and the
    // expression maps back to the same element.
    fn subgroup_case() -> impl Strategy<Value = (Vec<Word>, Vec<(usize, bool)>)> {
        let gen = prop::collection::vec((0..3usize, any::<bool>()), 1..6)
            .prop_map(|v| v.into_iter().map(|(g, s)| Letter::new(g, s)).collect::<Word>());
        (
            prop::collection::vec(gen, 1..4),
            prop::collection::vec((0..4usize, any::<bool>()), 0..10),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn products_are_members((gens, picks) in subgroup_case()) {
            let mut w = Word::empty();
            for (i, s) in picks {
                let i = i % gens.len();
                if s { w.append(&gens[i]) } else { w.append_inverse(&gens[i]) }
            }
            let g = SubgroupGraph::new(3, &gens);
            let expr = g.express(&w);
            prop_assert!(expr.is_some());
            // evaluate the expression back in F
            let mut back = Word::empty();
            for l in expr.unwrap().letters() {
                if l.inverse { back.append_inverse(&gens[l.index()]) } else { back.append(&gens[l.index()]) }
            }
            prop_assert_eq!(back, w);
        }
    }
}
