//! Certificates as [`Block`] trees and back.

use crate::thickness::{
    Adjacency, CertificateNode, Network, NetworkMember, PieceKind, ProductWitness, SplittingDescriptor,
    SplittingKind, ThicknessCertificate, TorusSubgroup, VertexPiece, LOWER_BOUND_NOTE,
};

use super::format::{Block, FormatError};

fn join(names: &[String]) -> String {
    names.join(" ")
}

fn split(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

fn bad(block: &Block, key: &str, value: &str) -> FormatError {
    FormatError::BadValue {
        block: block.name.clone(),
        key: key.to_string(),
        value: value.to_string(),
    }
}

fn one<'a>(b: &'a Block, name: &str) -> Result<&'a Block, FormatError> {
    b.find(name).ok_or_else(|| FormatError::MissingKey {
        block: b.name.clone(),
        key: name.to_string(),
    })
}

pub fn certificate_to_block(c: &ThicknessCertificate) -> Block {
    let mut b = Block::new("certificate")
        .entry("order", c.order)
        .entry("eta", c.eta)
        .entry("power", c.power)
        .entry("kind", c.kind())
        .entry("edges", join(&c.edges))
        .entry("lower_bound", LOWER_BOUND_NOTE);
    match &c.node {
        CertificateNode::Product(w) => {
            b.children.push(
                Block::new("product")
                    .entry("fiber_rank", w.fiber_rank)
                    .entry("loop", &w.loop_element)
                    .entry("t", &w.t_element),
            );
        }
        CertificateNode::Linear { splitting, tori, network } => {
            b.children.push(splitting_to_block(splitting));
            for t in tori {
                b.children.push(
                    Block::new("torus")
                        .entry("edge", &t.edge)
                        .entry("t", &t.t_element)
                        .entry("p", &t.p_element)
                        .entry("nielsen_path", &t.nielsen_path)
                        .entry("host", join(&t.host)),
                );
            }
            b.children.push(network_to_block(network));
        }
        CertificateNode::Splitting { splitting, children } => {
            b.children.push(splitting_to_block(splitting));
            b.children.extend(children.iter().map(certificate_to_block));
        }
    }
    b
}

fn splitting_to_block(s: &SplittingDescriptor) -> Block {
    let mut b = Block::new("splitting")
        .entry("kind", s.kind.label())
        .entry("removed", join(&s.removed));
    for g in &s.edge_groups {
        b.push("edge_group", g);
    }
    for r in &s.relations {
        b.push("relation", r);
    }
    for p in &s.pieces {
        b.children.push(
            Block::new("piece")
                .entry("kind", p.kind.label())
                .entry("vertices", join(&p.vertices))
                .entry("edges", join(&p.edges))
                .entry("betti", p.betti),
        );
    }
    b
}

fn network_to_block(n: &Network) -> Block {
    let mut b = Block::new("network").entry("connected", n.connected).entry(
        "chain_bound",
        n.chain_bound.map_or("none".to_string(), |d| d.to_string()),
    );
    for m in &n.members {
        let mut mb = Block::new("member")
            .entry("label", &m.label)
            .entry("layer", m.layer)
            .entry("t", &m.t_element);
        for g in &m.fiber_gens {
            mb.push("gen", g);
        }
        b.children.push(mb);
    }
    for a in &n.adjacency {
        b.children.push(
            Block::new("adjacency")
                .entry("a", a.a)
                .entry("b", a.b)
                .entry("witness", &a.witness),
        );
    }
    b
}

pub fn certificate_from_block(b: &Block) -> Result<ThicknessCertificate, FormatError> {
    b.expect_name("certificate")?;
    let kind = b.require("kind")?;
    let node = match kind {
        "product" => {
            let p = one(b, "product")?;
            CertificateNode::Product(ProductWitness {
                fiber_rank: p.parse_value("fiber_rank")?,
                loop_element: p.require("loop")?.to_string(),
                t_element: p.require("t")?.to_string(),
            })
        }
        "linear" => CertificateNode::Linear {
            splitting: splitting_from_block(one(b, "splitting")?)?,
            tori: b
                .children_named("torus")
                .map(|t| {
                    Ok(TorusSubgroup {
                        edge: t.require("edge")?.to_string(),
                        t_element: t.require("t")?.to_string(),
                        p_element: t.require("p")?.to_string(),
                        nielsen_path: t.require("nielsen_path")?.to_string(),
                        host: split(t.require("host")?),
                    })
                })
                .collect::<Result<_, FormatError>>()?,
            network: network_from_block(one(b, "network")?)?,
        },
        "splitting" => CertificateNode::Splitting {
            splitting: splitting_from_block(one(b, "splitting")?)?,
            children: b
                .children_named("certificate")
                .map(certificate_from_block)
                .collect::<Result<_, _>>()?,
        },
        other => return Err(bad(b, "kind", other)),
    };
    Ok(ThicknessCertificate {
        order: b.parse_value("order")?,
        eta: b.parse_value("eta")?,
        power: b.parse_value("power")?,
        edges: split(b.require("edges")?),
        node,
    })
}

fn splitting_from_block(b: &Block) -> Result<SplittingDescriptor, FormatError> {
    let kind = b.require("kind")?;
    Ok(SplittingDescriptor {
        kind: SplittingKind::from_label(kind).ok_or_else(|| bad(b, "kind", kind))?,
        removed: split(b.require("removed")?),
        pieces: b
            .children_named("piece")
            .map(|p| {
                let kind = p.require("kind")?;
                Ok(VertexPiece {
                    vertices: split(p.require("vertices")?),
                    edges: split(p.require("edges")?),
                    betti: p.parse_value("betti")?,
                    kind: PieceKind::from_label(kind).ok_or_else(|| bad(p, "kind", kind))?,
                })
            })
            .collect::<Result<_, FormatError>>()?,
        edge_groups: b.all("edge_group").into_iter().map(String::from).collect(),
        relations: b.all("relation").into_iter().map(String::from).collect(),
    })
}

fn network_from_block(b: &Block) -> Result<Network, FormatError> {
    let bound = b.require("chain_bound")?;
    Ok(Network {
        connected: b.parse_value("connected")?,
        chain_bound: match bound {
            "none" => None,
            v => Some(v.parse().map_err(|_| bad(b, "chain_bound", v))?),
        },
        members: b
            .children_named("member")
            .map(|m| {
                Ok(NetworkMember {
                    label: m.require("label")?.to_string(),
                    layer: m.parse_value("layer")?,
                    fiber_gens: m.all("gen").into_iter().map(String::from).collect(),
                    t_element: m.require("t")?.to_string(),
                })
            })
            .collect::<Result<_, FormatError>>()?,
        adjacency: b
            .children_named("adjacency")
            .map(|a| {
                Ok(Adjacency {
                    a: a.parse_value("a")?,
                    b: a.parse_value("b")?,
                    witness: a.require("witness")?.to_string(),
                })
            })
            .collect::<Result<_, FormatError>>()?,
    })
}
