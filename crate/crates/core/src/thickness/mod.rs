//! Splittings of mapping tori and certificates of strong thickness.

mod certify;
mod network;
mod splitting;

use thiserror::Error;

use crate::cayley::{Gen, MappingTorus, NormalForm};
use crate::train_track::{GraphMap, Marking, TrackError};
use crate::word::{Certification, Endomorphism, FreeBasis, Letter, Word};

pub use certify::{certify_thickness, LOWER_BOUND_NOTE};
pub use network::{build_network, build_tori};
pub use splitting::{doomed_split, topmost_splitting, Splitting};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThicknessError {
    #[error("map is not an automorphism: generator {0} is not in the image")]
    NotAutomorphism(String),
    #[error(transparent)]
    Track(#[from] TrackError),
    #[error("every edge is invariant; there is nothing to split")]
    BaseCase,
    #[error("doomed splitting needs growth degree at least 2, got {0}")]
    DegreeTooLow(u32),
    #[error("suffix of {0} is not a Nielsen path")]
    NotNielsen(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

/// `⟨ basis, t | t s t⁻¹ Φ(s)⁻¹ ⟩`. Relators are words over the basis
/// extended by the stable letter, which has the last index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: FreeBasis,
    pub stable: String,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn stable_index(&self) -> usize {
        self.generators.rank() - 1
    }

    /// `< e0, t | t e0 t^-1 = e0 >` style, one equation per relator.
    pub fn render(&self) -> String {
        let t = self.stable_index();
        let eqs: Vec<String> = self
            .relators
            .iter()
            .map(|r| {
                // t s t^-1 Φ(s)^-1: split after the third letter
                let (head, tail) = r.letters().split_at(3.min(r.len()));
                let lhs = Word::reduce(head.iter().copied());
                let rhs = Word::reduce(tail.iter().copied()).inverse();
                format!(
                    "{} = {}",
                    self.generators.format_word(&lhs),
                    self.generators.format_word(&rhs)
                )
            })
            .collect();
        debug_assert!(self.relators.iter().all(|r| r.letters()[0] == Letter::pos(t)));
        format!("< {} | {} >", self.generators.names().join(", "), eqs.join(", "))
    }

    /// The relator as a sequence of torus generators.
    pub fn relator_gens(&self, i: usize) -> Vec<Gen> {
        let t = self.stable_index();
        self.relators[i]
            .letters()
            .iter()
            .map(|&l| {
                if l.index() == t {
                    Gen::T { inverse: l.inverse }
                } else {
                    Gen::Fiber(l)
                }
            })
            .collect()
    }
}

/// `"t"` unless the basis already uses it.
pub fn stable_letter(basis: &FreeBasis) -> String {
    std::iter::once("t".to_string())
        .chain(std::iter::once("T".to_string()))
        .chain((0..).map(|i| format!("t{i}")))
        .find(|n| basis.index_of(n).is_none())
        .expect("infinitely many candidates")
}

pub fn mapping_torus_presentation(phi: &Endomorphism) -> Result<GroupPresentation, ThicknessError> {
    let certified = match phi.certification() {
        Certification::Unknown => phi.clone().certified(),
        _ => phi.clone(),
    };
    if let Certification::NotAutomorphism { missing } = certified.certification() {
        return Err(ThicknessError::NotAutomorphism(phi.basis().name(*missing).to_string()));
    }
    let stable = stable_letter(phi.basis());
    let mut names = phi.basis().names().to_vec();
    names.push(stable.clone());
    let generators = FreeBasis::new(names).expect("stable letter is fresh");
    let t = Letter::pos(phi.rank());
    let relators = (0..phi.rank())
        .map(|s| {
            let mut w = Word::from_letter(t);
            w.push(Letter::pos(s));
            w.push(t.inv());
            w.append_inverse(phi.image(s));
            w
        })
        .collect();
    Ok(GroupPresentation {
        generators,
        stable,
        relators,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceKind {
    /// a sub-mapping torus over a non-simply-connected piece
    ThickVertex,
    /// a tree piece, whose vertex group is conjugate to an edge group
    EdgeGroupConjugate,
}

impl PieceKind {
    pub fn label(self) -> &'static str {
        match self {
            PieceKind::ThickVertex => "thick-vertex",
            PieceKind::EdgeGroupConjugate => "edge-group-conjugate",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "thick-vertex" => Some(PieceKind::ThickVertex),
            "edge-group-conjugate" => Some(PieceKind::EdgeGroupConjugate),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPiece {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub betti: usize,
    pub kind: PieceKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplittingKind {
    TopmostEdge,
    DoomedRemoval,
}

impl SplittingKind {
    pub fn label(self) -> &'static str {
        match self {
            SplittingKind::TopmostEdge => "topmost-edge",
            SplittingKind::DoomedRemoval => "doomed-removal",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "topmost-edge" => Some(SplittingKind::TopmostEdge),
            "doomed-removal" => Some(SplittingKind::DoomedRemoval),
            _ => None,
        }
    }
}

/// Graph-of-groups splitting read off a filtered representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingDescriptor {
    pub kind: SplittingKind,
    pub removed: Vec<String>,
    pub pieces: Vec<VertexPiece>,
    /// one per removed edge, each conjugate to the cyclic group of a `t`
    pub edge_groups: Vec<String>,
    /// HNN relations for the removed edges, e.g. `e3^-1 t e3 = e0 e1 e2^-1 t`
    pub relations: Vec<String>,
}

/// `⟨t_j, p_j⟩ ≅ ℤ²` attached to a linearly growing edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusSubgroup {
    pub edge: String,
    /// the `t` at the terminal vertex of the edge, in base coordinates
    pub t_element: String,
    /// the suffix loop moved to the base vertex
    pub p_element: String,
    /// the suffix as an edge path
    pub nielsen_path: String,
    /// edges of the lower level component containing the terminal vertex
    pub host: Vec<String>,
}

/// A member `K × ⟨s⟩` of the network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkMember {
    pub label: String,
    /// 0 for invariant sub-mapping tori, 1 for tori
    pub layer: u8,
    pub fiber_gens: Vec<String>,
    pub t_element: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    pub a: usize,
    pub b: usize,
    /// a non-trivial element lying in both members
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    pub members: Vec<NetworkMember>,
    pub adjacency: Vec<Adjacency>,
    pub connected: bool,
    /// diameter of the adjacency graph, when connected
    pub chain_bound: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductWitness {
    pub fiber_rank: usize,
    pub loop_element: String,
    pub t_element: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateNode {
    /// `π₁ × ⟨t⟩`, a product of two infinite groups
    Product(ProductWitness),
    Linear {
        splitting: SplittingDescriptor,
        tori: Vec<TorusSubgroup>,
        network: Network,
    },
    Splitting {
        splitting: SplittingDescriptor,
        children: Vec<ThicknessCertificate>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThicknessCertificate {
    pub order: u32,
    /// growth degree; divergence is polynomial of degree at least `eta + 1`
    pub eta: u32,
    /// the representative is for `Φ^power`
    pub power: u32,
    pub edges: Vec<String>,
    pub node: CertificateNode,
}

impl ThicknessCertificate {
    pub fn kind(&self) -> &'static str {
        match self.node {
            CertificateNode::Product(_) => "product",
            CertificateNode::Linear { .. } => "linear",
            CertificateNode::Splitting { .. } => "splitting",
        }
    }

    pub fn children(&self) -> &[ThicknessCertificate] {
        match &self.node {
            CertificateNode::Splitting { children, .. } => children,
            _ => &[],
        }
    }

    pub fn tori(&self) -> &[TorusSubgroup] {
        match &self.node {
            CertificateNode::Linear { tori, .. } => tori,
            _ => &[],
        }
    }

    pub fn splitting(&self) -> Option<&SplittingDescriptor> {
        match &self.node {
            CertificateNode::Linear { splitting, .. } | CertificateNode::Splitting { splitting, .. } => {
                Some(splitting)
            }
            CertificateNode::Product(_) => None,
        }
    }

    pub fn network(&self) -> Option<&Network> {
        match &self.node {
            CertificateNode::Linear { network, .. } => Some(network),
            _ => None,
        }
    }
}

/// The group of a representative in the coordinates of its marking.
pub(crate) struct MarkedGroup {
    pub marking: Marking,
    pub torus: MappingTorus,
    pub stable: String,
}

impl MarkedGroup {
    pub fn new(f: &GraphMap) -> Result<Self, ThicknessError> {
        let marking = f.marking()?;
        let phi = f.induced_automorphism()?;
        let stable = stable_letter(&marking.basis);
        Ok(Self {
            marking,
            torus: MappingTorus::new(phi),
            stable,
        })
    }

    /// The `t` loop traced by vertex `v`, moved to the base along the tree:
    /// `τ_v f(τ_v)⁻¹ t`.
    pub fn t_at(&self, f: &GraphMap, v: usize) -> NormalForm {
        let tau = &self.marking.tree_paths[v];
        let w = tau.mul(&f.apply(tau).inverse());
        NormalForm::new(self.marking.read(&w), 1)
    }

    pub fn format(&self, nf: &NormalForm) -> String {
        nf.format(&self.marking.basis, &self.stable)
    }

    pub fn mul(&self, a: &NormalForm, b: &NormalForm) -> Result<NormalForm, ThicknessError> {
        self.torus
            .mul(a, b)
            .map_err(|e| ThicknessError::Inconsistent(e.to_string()))
    }

    pub fn inverse(&self, a: &NormalForm) -> Result<NormalForm, ThicknessError> {
        self.torus
            .inverse(a)
            .map_err(|e| ThicknessError::Inconsistent(e.to_string()))
    }

    pub fn commute(&self, a: &NormalForm, b: &NormalForm) -> Result<bool, ThicknessError> {
        Ok(self.mul(a, b)? == self.mul(b, a)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::MappingTorus;

    #[test]
    fn linear4_presentation() {
        let phi = Endomorphism::from_strs(
            &["e0", "e1", "e2", "e3"],
            &["e0", "e1 e0", "e2 e0", "e3 e0 e1 e2^-1"],
        )
        .unwrap();
        let p = mapping_torus_presentation(&phi).unwrap();
        assert_eq!(
            p.render(),
            "< e0, e1, e2, e3, t | t e0 t^-1 = e0, t e1 t^-1 = e1 e0, t e2 t^-1 = e2 e0, \
             t e3 t^-1 = e3 e0 e1 e2^-1 >"
        );
        let g = MappingTorus::new(phi);
        for i in 0..p.relators.len() {
            assert!(g.evaluate(&p.relator_gens(i)).unwrap().is_identity());
        }
    }

    #[test]
    fn rank_one_identity() {
        let phi = Endomorphism::from_strs(&["a"], &["a"]).unwrap();
        let p = mapping_torus_presentation(&phi).unwrap();
        assert_eq!(p.relators.len(), 1);
        assert_eq!(p.generators.format_word(&p.relators[0]), "t a t^-1 a^-1");
    }

    #[test]
    fn chain_presentation() {
        let phi = Endomorphism::from_strs(&["a", "b", "c"], &["a", "b a", "c b"]).unwrap();
        let p = mapping_torus_presentation(&phi).unwrap();
        assert_eq!(
            p.render(),
            "< a, b, c, t | t a t^-1 = a, t b t^-1 = b a, t c t^-1 = c b >"
        );
    }

    #[test]
    fn stable_letter_avoids_basis() {
        let phi = Endomorphism::from_strs(&["t", "T"], &["t", "T t"]).unwrap();
        let p = mapping_torus_presentation(&phi).unwrap();
        assert_eq!(p.stable, "t0");
    }

    #[test]
    fn non_automorphism_rejected() {
        let phi = Endomorphism::from_strs(&["a", "b"], &["a a", "b"]).unwrap();
        assert_eq!(
            mapping_torus_presentation(&phi),
            Err(ThicknessError::NotAutomorphism("a".into()))
        );
    }
}
