use rayon::prelude::*;

use crate::cayley::NormalForm;
use crate::train_track::{collapse_free_faces, edge_growth_degrees, FilteredRepresentative};
use crate::word::Word;

use super::{
    build_network, build_tori, doomed_split, topmost_splitting, CertificateNode, MarkedGroup,
    ProductWitness, ThicknessCertificate, ThicknessError,
};

/// Why order `eta` cannot be improved: a cited result, not recomputed here.
pub const LOWER_BOUND_NOTE: &str =
    "divergence is polynomial of degree at least eta + 1 by a known lower bound, so the order is at least eta";

/// Certifies strong thickness of order `η` recursively: a product leaf when
/// every edge is invariant, a network of tori for linear growth, and a
/// doomed-edge splitting with child certificates above that.
pub fn certify_thickness(
    f: &FilteredRepresentative,
    max_n: u32,
    power: u32,
) -> Result<ThicknessCertificate, ThicknessError> {
    let table = edge_growth_degrees(f, max_n)?;
    if !table.is_consistent() {
        let names: Vec<&str> = table.mismatches.iter().map(|&e| f.edge_name(e)).collect();
        return Err(ThicknessError::Inconsistent(format!(
            "slope and suffix degrees disagree on {}",
            names.join(", ")
        )));
    }
    let edges = f.order().iter().map(|&e| f.edge_name(e).to_string()).collect();
    let node = match table.eta {
        0 => CertificateNode::Product(product_witness(f)?),
        1 => {
            let core = collapse_free_faces(f)?.normalized();
            CertificateNode::Linear {
                splitting: topmost_splitting(&core)?.descriptor,
                tori: build_tori(&core)?,
                network: build_network(&core)?,
            }
        }
        _ => {
            let split = doomed_split(f, &table)?;
            let children = split
                .restricted
                .par_iter()
                .flatten()
                .map(|child| certify_thickness(child, max_n, power))
                .collect::<Result<Vec<_>, _>>()?;
            let deepest = children.iter().map(|c| c.order).max().unwrap_or(0);
            if deepest + 1 != table.eta {
                return Err(ThicknessError::Inconsistent(format!(
                    "children reach order {deepest}, expected {}",
                    table.eta - 1
                )));
            }
            CertificateNode::Splitting {
                splitting: split.descriptor,
                children,
            }
        }
    };
    Ok(ThicknessCertificate {
        order: table.eta,
        eta: table.eta,
        power,
        edges,
        node,
    })
}

/// `Φ` is the identity on `π₁`, so `t` is central and the group is
/// `F × ℤ`. Every basis loop is checked against `t`.
fn product_witness(f: &FilteredRepresentative) -> Result<ProductWitness, ThicknessError> {
    let group = MarkedGroup::new(f.map())?;
    let t = NormalForm::t_power(1);
    let rank = group.marking.basis.rank();
    for g in 0..rank {
        if !group.commute(&t, &NormalForm::fiber(Word::gen(g)))? {
            return Err(ThicknessError::Inconsistent(format!(
                "{} does not commute with t",
                group.marking.basis.name(g)
            )));
        }
    }
    Ok(ProductWitness {
        fiber_rank: rank,
        loop_element: group.marking.basis.name(0).to_string(),
        t_element: group.stable.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thickness::network::tests::two_loops;
    use crate::thickness::splitting::tests::{bridge, linear4, rose};
    use crate::thickness::PieceKind;
    use crate::train_track::DEFAULT_HORIZON;

    #[test]
    fn identity_is_order_zero() {
        for names in [&["a"][..], &["a", "b"], &["a", "b", "c"]] {
            let c = certify_thickness(&rose(names, names), DEFAULT_HORIZON, 1).unwrap();
            assert_eq!(c.order, 0);
            let CertificateNode::Product(w) = &c.node else { panic!() };
            assert_eq!(w.fiber_rank, names.len());
        }
    }

    #[test]
    fn linear4_is_order_one() {
        let c = certify_thickness(&linear4(), DEFAULT_HORIZON, 1).unwrap();
        assert_eq!(c.order, 1);
        assert_eq!(c.kind(), "linear");
        assert_eq!(c.splitting().unwrap().relations, ["e3^-1 t e3 = e0 e1 e2^-1 t"]);
        let p: Vec<&str> = c.tori().iter().map(|t| t.p_element.as_str()).collect();
        assert_eq!(p, ["e0", "e0", "e0 e1 e2^-1"]);
    }

    #[test]
    fn chain_is_order_two() {
        let c = certify_thickness(&rose(&["a", "b", "c"], &["a", "b a", "c b"]), DEFAULT_HORIZON, 1).unwrap();
        assert_eq!(c.order, 2);
        assert_eq!(c.children().len(), 1);
        assert_eq!(c.children()[0].order, 1);
        assert_eq!(c.children()[0].edges, ["a", "b"]);
    }

    #[test]
    fn four_chain_is_order_three() {
        let f = rose(&["a", "b", "c", "d"], &["a", "b a", "c b", "d c"]);
        let c = certify_thickness(&f, DEFAULT_HORIZON, 1).unwrap();
        assert_eq!(c.order, 3);
        assert_eq!(c.children()[0].order, 2);
        assert_eq!(c.children()[0].children()[0].order, 1);
    }

    #[test]
    fn bridge_is_order_two() {
        let c = certify_thickness(&bridge(), DEFAULT_HORIZON, 1).unwrap();
        assert_eq!(c.order, 2);
        let s = c.splitting().unwrap();
        assert_eq!(s.pieces.iter().filter(|p| p.kind == PieceKind::ThickVertex).count(), 1);
        assert_eq!(c.children().len(), 1);
    }

    #[test]
    fn two_loops_is_order_one() {
        let c = certify_thickness(&two_loops(), DEFAULT_HORIZON, 1).unwrap();
        assert_eq!(c.order, 1);
        assert!(c.network().unwrap().connected);
    }

    #[test]
    fn power_is_recorded() {
        let c = certify_thickness(&linear4(), DEFAULT_HORIZON, 3).unwrap();
        assert_eq!(c.power, 3);
    }
}
