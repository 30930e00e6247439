use std::collections::HashMap;

use rayon::prelude::*;

use super::{CayleyError, Gen, MappingTorus, NormalForm};

pub(crate) const NONE: u32 = u32::MAX;

/// Exact word-metric ball over the inverse-closed generators
/// [`MappingTorus::generators`]. Elements are stored in BFS discovery order,
/// which is deterministic.
#[derive(Debug, Clone)]
pub struct CayleyBall {
    pub center: NormalForm,
    pub radius: u32,
    gens: Vec<Gen>,
    elements: Vec<NormalForm>,
    index: HashMap<NormalForm, u32>,
    dist: Vec<u32>,
    /// BFS parent and the generator index leading from it
    parent: Vec<(u32, u8)>,
    /// `neighbors[i * deg + g]`: index of `elements[i] · gens[g]`, or `NONE`
    neighbors: Vec<u32>,
}

/// Breadth-first ball of radius `r` about `center`. Fails rather than
/// truncating once more than `budget` elements are found.
pub fn ball(
    torus: &MappingTorus,
    center: &NormalForm,
    r: u32,
    budget: usize,
) -> Result<CayleyBall, CayleyError> {
    let gens = torus.generators();
    let deg = gens.len();
    let mut elements = vec![center.clone()];
    let mut index = HashMap::from([(center.clone(), 0u32)]);
    let mut dist = vec![0u32];
    let mut parent = vec![(NONE, 0u8)];
    let mut neighbors: Vec<u32> = Vec::new();
    let mut start = 0usize;
    for layer in 0..=r {
        let end = elements.len();
        // products for the whole frontier, in parallel but collected in order
        let products: Vec<Vec<NormalForm>> = elements[start..end]
            .par_iter()
            .map(|nf| {
                gens.iter()
                    .map(|&g| torus.multiply(nf, g))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        for (offset, row) in products.into_iter().enumerate() {
            let i = (start + offset) as u32;
            for (g, nf) in row.into_iter().enumerate() {
                let j = match index.get(&nf) {
                    Some(&j) => j,
                    None if layer < r => {
                        if elements.len() >= budget {
                            return Err(CayleyError::BallBudget { radius: r, limit: budget });
                        }
                        let j = elements.len() as u32;
                        index.insert(nf.clone(), j);
                        elements.push(nf);
                        dist.push(layer + 1);
                        parent.push((i, g as u8));
                        j
                    }
                    None => NONE,
                };
                neighbors.push(j);
            }
        }
        start = end;
    }
    debug_assert_eq!(neighbors.len(), elements.len() * deg);
    Ok(CayleyBall {
        center: center.clone(),
        radius: r,
        gens,
        elements,
        index,
        dist,
        parent,
        neighbors,
    })
}

impl CayleyBall {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn generators(&self) -> &[Gen] {
        &self.gens
    }

    pub fn degree(&self) -> usize {
        self.gens.len()
    }

    pub fn elements(&self) -> &[NormalForm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &NormalForm {
        &self.elements[i]
    }

    pub fn index_of(&self, nf: &NormalForm) -> Option<usize> {
        self.index.get(nf).map(|&i| i as usize)
    }

    pub fn contains(&self, nf: &NormalForm) -> bool {
        self.index.contains_key(nf)
    }

    pub fn distance(&self, nf: &NormalForm) -> Option<u32> {
        self.index_of(nf).map(|i| self.dist[i])
    }

    pub fn distance_at(&self, i: usize) -> u32 {
        self.dist[i]
    }

    /// Index of `elements[i] · gens[g]` when it lies in the ball.
    pub fn neighbor(&self, i: usize, g: usize) -> Option<usize> {
        let j = self.neighbors[i * self.gens.len() + g];
        (j != NONE).then_some(j as usize)
    }

    pub(crate) fn neighbor_row(&self, i: usize) -> &[u32] {
        let d = self.gens.len();
        &self.neighbors[i * d..(i + 1) * d]
    }

    /// Indices of the elements at distance exactly `r`.
    pub fn sphere(&self, r: u32) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.dist[i] == r).collect()
    }

    /// Sizes of the spheres of radius `0..=radius`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.radius as usize + 1];
        for &d in &self.dist {
            sizes[d as usize] += 1;
        }
        sizes
    }

    /// A geodesic from the center, read off the BFS parents.
    pub fn geodesic_to(&self, i: usize) -> Vec<Gen> {
        let mut path = Vec::new();
        let mut cur = i;
        while self.parent[cur].0 != NONE {
            let (p, g) = self.parent[cur];
            path.push(self.gens[g as usize]);
            cur = p as usize;
        }
        path.reverse();
        path
    }
}
