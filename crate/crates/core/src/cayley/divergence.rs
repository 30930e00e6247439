use std::collections::VecDeque;

use rayon::prelude::*;

use super::ball::{ball, CayleyBall, NONE};
use super::{Budget, CayleyError, Gen, MappingTorus, NormalForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chi {
    Value(u32),
    Disconnected,
}

impl Chi {
    pub fn value(self) -> Option<u32> {
        match self {
            Chi::Value(v) => Some(v),
            Chi::Disconnected => None,
        }
    }
}

/// The sphere points attaining the maximum and a shortest avoiding path
/// between them (empty when they are disconnected).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub y: NormalForm,
    pub z: NormalForm,
    pub path: Vec<Gen>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivergenceSample {
    pub r: u32,
    /// paths must stay out of the open ball of this radius about the identity
    pub avoid_radius: u32,
    /// radius of the ball the paths were searched in
    pub horizon: u32,
    pub sphere_size: usize,
    pub chi: Chi,
    pub witness: Witness,
}

/// Farthest pair found by one search: `(length, y, z)` as sphere positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PairSearch {
    Farthest(u32, usize, usize),
    Disconnected(usize, usize),
}

/// `χ(r)` about the identity: the largest distance between two points of the
/// `r`-sphere when paths must avoid the open `⌊r/2⌋`-ball. Paths are searched
/// inside `B(⌈C·r⌉)`, and the horizon grows by one while some pair is
/// disconnected, up to `4r` or the ball budget.
pub fn divergence_chi(
    torus: &MappingTorus,
    r: u32,
    horizon_factor: f64,
    budget: &Budget,
) -> Result<DivergenceSample, CayleyError> {
    if r < 2 {
        return Err(CayleyError::RadiusTooSmall(r));
    }
    if !horizon_factor.is_finite() || horizon_factor < 1.0 {
        return Err(CayleyError::BadHorizon(horizon_factor));
    }
    let h = r / 2;
    let mut horizon = (horizon_factor * r as f64).ceil() as u32;
    let limit = horizon.max(4 * r);
    let mut last_disconnected = None;
    loop {
        let b = match ball(torus, &NormalForm::identity(), horizon, budget.ball) {
            Ok(b) => b,
            Err(CayleyError::BallBudget { .. }) if last_disconnected.is_some() => break,
            Err(e) => return Err(e),
        };
        let mut sphere = b.sphere(r);
        sphere.sort_by(|&i, &j| b.element(i).cmp(b.element(j)));
        let allowed: Vec<bool> = (0..b.len()).map(|i| b.distance_at(i) >= h).collect();
        match farthest_pair(&b, &sphere, &allowed) {
            PairSearch::Farthest(len, y, z) => {
                let path = shortest_path(&b, &allowed, sphere[y], sphere[z]).expect("pair was connected");
                let sample = DivergenceSample {
                    r,
                    avoid_radius: h,
                    horizon,
                    sphere_size: sphere.len(),
                    chi: Chi::Value(len),
                    witness: Witness {
                        y: b.element(sphere[y]).clone(),
                        z: b.element(sphere[z]).clone(),
                        path,
                    },
                };
                verify_witness(torus, &sample).expect("witness re-verifies");
                return Ok(sample);
            }
            PairSearch::Disconnected(y, z) => {
                last_disconnected = Some(DivergenceSample {
                    r,
                    avoid_radius: h,
                    horizon,
                    sphere_size: sphere.len(),
                    chi: Chi::Disconnected,
                    witness: Witness {
                        y: b.element(sphere[y]).clone(),
                        z: b.element(sphere[z]).clone(),
                        path: Vec::new(),
                    },
                });
            }
        }
        if horizon >= limit {
            break;
        }
        horizon += 1;
    }
    Ok(last_disconnected.expect("loop exits only after a disconnected search"))
}

/// Multi-source BFS, 64 sphere points per batch as bits of one word.
fn farthest_pair(b: &CayleyBall, sphere: &[usize], allowed: &[bool]) -> PairSearch {
    let n = b.len();
    let mut target = vec![NONE; n];
    for (pos, &v) in sphere.iter().enumerate() {
        target[v] = pos as u32;
    }
    let results: Vec<PairSearch> = sphere
        .par_chunks(64)
        .enumerate()
        .map(|(batch, sources)| {
            let base = batch * 64;
            let full = if sources.len() == 64 { u64::MAX } else { (1u64 << sources.len()) - 1 };
            let mut visited = vec![0u64; n];
            let mut frontier = vec![0u64; n];
            for (bit, &s) in sources.iter().enumerate() {
                visited[s] |= 1 << bit;
                frontier[s] |= 1 << bit;
            }
            let mut best_len = vec![0u32; sources.len()];
            let mut best_z: Vec<usize> = (0..sources.len()).map(|bit| base + bit).collect();
            let mut level = 0;
            loop {
                level += 1;
                let mut next = vec![0u64; n];
                let mut grew = false;
                for v in 0..n {
                    if !allowed[v] || visited[v] == full {
                        continue;
                    }
                    let mut m = 0u64;
                    for &u in b.neighbor_row(v) {
                        if u != NONE {
                            m |= frontier[u as usize];
                        }
                    }
                    m &= !visited[v];
                    if m == 0 {
                        continue;
                    }
                    next[v] = m;
                    visited[v] |= m;
                    grew = true;
                    let tp = target[v];
                    if tp != NONE {
                        let mut bits = m;
                        while bits != 0 {
                            let bit = bits.trailing_zeros() as usize;
                            bits &= bits - 1;
                            if level > best_len[bit] || (level == best_len[bit] && (tp as usize) < best_z[bit]) {
                                best_len[bit] = level;
                                best_z[bit] = tp as usize;
                            }
                        }
                    }
                }
                if !grew {
                    break;
                }
                frontier = next;
            }
            // a pair the batch never reached
            for (tp, &v) in sphere.iter().enumerate() {
                let missing = full & !visited[v];
                if missing != 0 {
                    return PairSearch::Disconnected(base + missing.trailing_zeros() as usize, tp);
                }
            }
            let mut best = PairSearch::Farthest(0, base, base);
            for bit in 0..sources.len() {
                best = better(best, PairSearch::Farthest(best_len[bit], base + bit, best_z[bit]));
            }
            best
        })
        .collect();
    results
        .into_iter()
        .reduce(better)
        .unwrap_or(PairSearch::Farthest(0, 0, 0))
}

/// Disconnection wins; otherwise the longer distance, ties to the first pair.
fn better(a: PairSearch, b: PairSearch) -> PairSearch {
    use PairSearch::*;
    match (a, b) {
        (Disconnected(y1, z1), Disconnected(y2, z2)) => {
            if (y2, z2) < (y1, z1) {
                b
            } else {
                a
            }
        }
        (Disconnected(..), _) => a,
        (_, Disconnected(..)) => b,
        (Farthest(l1, y1, z1), Farthest(l2, y2, z2)) => {
            if l2 > l1 || (l2 == l1 && (y2, z2) < (y1, z1)) {
                b
            } else {
                a
            }
        }
    }
}

/// BFS with parents inside the allowed region, generators tried in order.
fn shortest_path(b: &CayleyBall, allowed: &[bool], from: usize, to: usize) -> Option<Vec<Gen>> {
    let mut parent = vec![(NONE, 0u8); b.len()];
    let mut seen = vec![false; b.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = Vec::new();
            let mut cur = to;
            while cur != from {
                let (p, g) = parent[cur];
                path.push(b.generators()[g as usize]);
                cur = p as usize;
            }
            path.reverse();
            return Some(path);
        }
        for (g, &v) in b.neighbor_row(u).iter().enumerate() {
            if v != NONE && allowed[v as usize] && !seen[v as usize] {
                seen[v as usize] = true;
                parent[v as usize] = (u as u32, g as u8);
                queue.push_back(v as usize);
            }
        }
    }
    None
}

/// Replays the witness path with normal-form arithmetic and checks its
/// endpoints, its length, and that it stays out of the open avoided ball and
/// inside the horizon.
pub fn verify_witness(torus: &MappingTorus, sample: &DivergenceSample) -> Result<(), String> {
    let Chi::Value(len) = sample.chi else {
        return Ok(());
    };
    let w = &sample.witness;
    if w.path.len() as u32 != len {
        return Err(format!("path has length {}, expected {len}", w.path.len()));
    }
    let b = ball(torus, &NormalForm::identity(), sample.horizon, usize::MAX).map_err(|e| e.to_string())?;
    for (name, end) in [("y", &w.y), ("z", &w.z)] {
        if b.distance(end) != Some(sample.r) {
            return Err(format!("{name} is not on the sphere of radius {}", sample.r));
        }
    }
    let mut cur = w.y.clone();
    for (step, &g) in w.path.iter().enumerate() {
        cur = torus.multiply(&cur, g).map_err(|e| e.to_string())?;
        match b.distance(&cur) {
            Some(d) if d >= sample.avoid_radius => {}
            Some(d) => return Err(format!("step {step} enters the avoided ball at distance {d}")),
            None => return Err(format!("step {step} leaves the horizon")),
        }
    }
    if cur != w.z {
        return Err("path does not end at z".into());
    }
    Ok(())
}
