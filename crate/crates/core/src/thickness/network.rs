use std::collections::VecDeque;

use crate::cayley::NormalForm;
use crate::train_track::{FilteredRepresentative, Marking};
use crate::word::{stallings_membership, Letter, Word};

use super::{Adjacency, MarkedGroup, Network, NetworkMember, ThicknessError, TorusSubgroup};

/// `K × ⟨s⟩` with `K` given by fiber generators and `s` commuting with it.
struct Member {
    gens: Vec<Word>,
    s: NormalForm,
}

impl Member {
    /// `g = k sᵐ` forces `m` to be the `t`-exponent of `g`, because `K`
    /// lies in the fiber and `s` has exponent one.
    fn contains(&self, group: &MarkedGroup, g: &NormalForm) -> Result<bool, ThicknessError> {
        let m = g.t_exp;
        let step = if m >= 0 { group.inverse(&self.s)? } else { self.s.clone() };
        let mut rest = g.clone();
        for _ in 0..m.unsigned_abs() {
            rest = group.mul(&rest, &step)?;
        }
        if rest.t_exp != 0 {
            return Ok(false);
        }
        Ok(stallings_membership(group.marking.basis.rank(), &self.gens, &rest.fiber))
    }

    fn candidates(&self) -> Vec<NormalForm> {
        let mut c = vec![self.s.clone()];
        c.extend(self.gens.iter().map(|w| NormalForm::fiber(w.clone())));
        c
    }
}

fn torus_data(
    f: &FilteredRepresentative,
    group: &MarkedGroup,
) -> Result<Vec<(TorusSubgroup, Member)>, ThicknessError> {
    let f = f.normalized();
    let g = f.graph();
    let mut out = Vec::new();
    for pos in f.invariant_count()..f.edge_count() {
        let e = f.order()[pos];
        let p = f.suffix(e);
        if !f.is_nielsen(p.letters())? {
            return Err(ThicknessError::NotNielsen(f.edge_name(e).to_string()));
        }
        let v = g.edge(e).term;
        let t = group.t_at(f.map(), v);
        let pw = group.marking.loop_at(v, p);
        let pe = NormalForm::fiber(pw.clone());
        if !group.commute(&t, &pe)? {
            return Err(ThicknessError::Inconsistent(format!(
                "torus generators for {} do not commute",
                f.edge_name(e)
            )));
        }
        let host = g
            .components(f.level(pos), true)
            .into_iter()
            .find(|(vs, _)| vs.contains(&v))
            .map(|(_, es)| es.iter().map(|&x| g.edge(x).name.clone()).collect())
            .unwrap_or_default();
        out.push((
            TorusSubgroup {
                edge: f.edge_name(e).to_string(),
                t_element: group.format(&t),
                p_element: group.format(&pe),
                nielsen_path: g.format_path(p),
                host,
            },
            Member { gens: vec![pw], s: t },
        ));
    }
    Ok(out)
}

/// One torus `⟨t_j, p_j⟩` per non-invariant edge, with `t_j` the `t` at the
/// terminal vertex of `e_j` and `p_j` its suffix, which must be Nielsen.
pub fn build_tori(f: &FilteredRepresentative) -> Result<Vec<TorusSubgroup>, ThicknessError> {
    let group = MarkedGroup::new(f.map())?;
    Ok(torus_data(f, &group)?.into_iter().map(|(t, _)| t).collect())
}

/// Invariant sub-mapping tori and tori, chained by shared non-trivial
/// elements. An incomplete network is reported through `connected`.
pub fn build_network(f: &FilteredRepresentative) -> Result<Network, ThicknessError> {
    let group = MarkedGroup::new(f.map())?;
    let g = f.graph();
    let invariant: Vec<usize> = (0..f.edge_count()).filter(|&e| f.is_invariant(e)).collect();
    let mut members = Vec::new();
    let mut data = Vec::new();
    for (vs, es) in g.components(&invariant, false) {
        if es.len() < vs.len() {
            continue;
        }
        let (sub, vkeep, _) = g.subgraph(&es, &[]);
        let order: Vec<usize> = (0..es.len()).collect();
        let local = Marking::new(&sub, &order)?;
        let u = vkeep[local.base];
        let gens: Vec<Word> = (0..es.len())
            .filter(|&i| !local.tree[i])
            .map(|i| {
                let path: Word = local
                    .basis_loop(&sub, i)
                    .letters()
                    .iter()
                    .map(|l| Letter::new(es[l.index()], !l.inverse))
                    .collect();
                group.marking.loop_at(u, &path)
            })
            .collect();
        let s = group.t_at(f.map(), u);
        for k in &gens {
            if !group.commute(&s, &NormalForm::fiber(k.clone()))? {
                return Err(ThicknessError::Inconsistent(format!(
                    "invariant component at {} does not commute with its t",
                    g.vertex_name(u)
                )));
            }
        }
        members.push(NetworkMember {
            label: format!("W0[{}]", g.vertex_name(u)),
            layer: 0,
            fiber_gens: gens.iter().map(|w| group.marking.basis.format_word(w)).collect(),
            t_element: group.format(&s),
        });
        data.push(Member { gens, s });
    }
    for (torus, member) in torus_data(f, &group)? {
        members.push(NetworkMember {
            label: format!("T[{}]", torus.edge),
            layer: 1,
            fiber_gens: vec![torus.p_element.clone()],
            t_element: torus.t_element.clone(),
        });
        data.push(member);
    }
    let mut adjacency = Vec::new();
    for a in 0..data.len() {
        for b in a + 1..data.len() {
            let cands = data[a].candidates().into_iter().chain(data[b].candidates());
            for c in cands {
                if c.is_identity() {
                    continue;
                }
                if data[a].contains(&group, &c)? && data[b].contains(&group, &c)? {
                    adjacency.push(Adjacency {
                        a,
                        b,
                        witness: group.format(&c),
                    });
                    break;
                }
            }
        }
    }
    let chain_bound = diameter(data.len(), &adjacency);
    Ok(Network {
        members,
        adjacency,
        connected: chain_bound.is_some(),
        chain_bound,
    })
}

/// Diameter of the adjacency graph, `None` when it is disconnected.
fn diameter(n: usize, adjacency: &[Adjacency]) -> Option<u32> {
    let mut nbrs = vec![Vec::new(); n];
    for a in adjacency {
        nbrs[a.a].push(a.b);
        nbrs[a.b].push(a.a);
    }
    let mut best = 0;
    for s in 0..n {
        let mut dist = vec![u32::MAX; n];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &y in &nbrs[x] {
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    q.push_back(y);
                }
            }
        }
        for &d in &dist {
            if d == u32::MAX {
                return None;
            }
            best = best.max(d);
        }
    }
    Some(best)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::thickness::splitting::tests::{linear4, rose};
    use crate::train_track::{verify_representative, GraphEdge, GraphMap, MarkedGraph};

    /// Invariant loops `a` at u and `b` at v joined by `e: u -> v`, `e -> e b`.
    pub(crate) fn two_loops() -> FilteredRepresentative {
        let g = MarkedGraph::new(
            vec!["u".into(), "v".into()],
            vec![
                GraphEdge { name: "a".into(), init: 0, term: 0 },
                GraphEdge { name: "b".into(), init: 1, term: 1 },
                GraphEdge { name: "e".into(), init: 0, term: 1 },
            ],
        )
        .unwrap();
        let basis = g.edge_basis();
        let imgs = ["a", "b", "e b"].iter().map(|s| basis.parse_word(s).unwrap()).collect();
        verify_representative(GraphMap::new(g, imgs, vec![0, 1, 2]).unwrap()).unwrap()
    }

    #[test]
    fn linear4_tori() {
        let tori = build_tori(&linear4()).unwrap();
        let pairs: Vec<(&str, &str, &str)> = tori
            .iter()
            .map(|t| (t.edge.as_str(), t.t_element.as_str(), t.p_element.as_str()))
            .collect();
        assert_eq!(
            pairs,
            [("e1", "t", "e0"), ("e2", "t", "e0"), ("e3", "t", "e0 e1 e2^-1")]
        );
        assert_eq!(tori[2].host, ["e0", "e1", "e2"]);
    }

    #[test]
    fn linear4_network() {
        let n = build_network(&linear4()).unwrap();
        let labels: Vec<&str> = n.members.iter().map(|m| m.label.as_str()).collect();
        assert_eq!(labels, ["W0[v0]", "T[e1]", "T[e2]", "T[e3]"]);
        assert_eq!(n.adjacency.len(), 6);
        assert!(n.adjacency.iter().all(|a| a.witness == "t"));
        assert!(n.connected);
        assert_eq!(n.chain_bound, Some(1));
    }

    #[test]
    fn identity_network() {
        let n = build_network(&rose(&["a", "b"], &["a", "b"])).unwrap();
        assert_eq!(n.members.len(), 1);
        assert_eq!(n.members[0].fiber_gens, ["a", "b"]);
        assert!(build_tori(&rose(&["a"], &["a"])).unwrap().is_empty());
        assert_eq!(n.chain_bound, Some(0));
    }

    #[test]
    fn two_loops_chain_through_torus() {
        let f = two_loops();
        let n = build_network(&f).unwrap();
        let labels: Vec<&str> = n.members.iter().map(|m| m.label.as_str()).collect();
        assert_eq!(labels, ["W0[u]", "W0[v]", "T[e]"]);
        let pairs: Vec<(usize, usize)> = n.adjacency.iter().map(|a| (a.a, a.b)).collect();
        assert!(pairs.contains(&(0, 2)) && pairs.contains(&(1, 2)));
        assert!(n.connected);
        let a_side = n.adjacency.iter().find(|a| (a.a, a.b) == (0, 2)).unwrap();
        assert_eq!(a_side.witness, "t");
    }

    #[test]
    fn non_nielsen_suffix_rejected() {
        let f = rose(&["a", "b", "c"], &["a", "b a", "c b"]);
        assert_eq!(build_tori(&f), Err(ThicknessError::NotNielsen("c".into())));
    }

    #[test]
    fn membership_is_exact() {
        let f = linear4();
        let group = MarkedGroup::new(f.map()).unwrap();
        let torus = Member {
            gens: vec![group.marking.basis.parse_word("e0 e1 e2^-1").unwrap()],
            s: NormalForm::t_power(1),
        };
        let inside = group.torus.parse_element("e0 e1 e2^-1 t e0 e1 e2^-1 t^3", "t").unwrap();
        assert!(torus.contains(&group, &inside).unwrap());
        let outside = group.torus.parse_element("e1 t", "t").unwrap();
        assert!(!torus.contains(&group, &outside).unwrap());
    }
}
