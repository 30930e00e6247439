use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::GraphMap;

pub const SPECTRAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    /// row/column `i` is the edge at filtration position `i`
    pub order: Vec<usize>,
    /// `entries[i][j]`: occurrences of edge `order[j]` (either direction) in `f(order[i])`
    pub entries: Vec<Vec<u64>>,
    pub spectral_radius: f64,
    pub exponential: bool,
}

impl TransitionMatrix {
    /// Ones on the diagonal, zeros above it.
    pub fn is_lower_unitriangular(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, &x)| (j == i && x == 1) || (j < i) || (j > i && x == 0))
        })
    }
}

pub fn transition_analysis(f: &GraphMap) -> TransitionMatrix {
    let order = f.order().to_vec();
    let n = order.len();
    let mut pos = vec![0; n];
    for (i, &e) in order.iter().enumerate() {
        pos[e] = i;
    }
    let mut entries = vec![vec![0u64; n]; n];
    for (i, &e) in order.iter().enumerate() {
        for l in f.image(e).letters() {
            entries[i][pos[l.index()]] += 1;
        }
    }
    let spectral_radius = spectral_radius(&entries);
    TransitionMatrix {
        order,
        entries,
        spectral_radius,
        exponential: spectral_radius > 1.0 + SPECTRAL_TOLERANCE,
    }
}

/// Spectral radius of a nonnegative integer matrix: the largest Perron root
/// over its irreducible diagonal blocks.
pub fn spectral_radius(m: &[Vec<u64>]) -> f64 {
    let n = m.len();
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if m[i][j] > 0 {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    tarjan_scc(&g)
        .into_iter()
        .map(|comp| {
            let idx: Vec<usize> = comp.iter().map(|v| v.index()).collect();
            let block: Vec<Vec<f64>> = idx
                .iter()
                .map(|&i| idx.iter().map(|&j| m[i][j] as f64).collect())
                .collect();
            perron_root(&block)
        })
        .fold(0.0, f64::max)
}

/// Perron root of an irreducible nonnegative block (or a 1x1 block).
fn perron_root(b: &[Vec<f64>]) -> f64 {
    let n = b.len();
    if n == 1 {
        return b[0][0];
    }
    // Integer irreducible block with all row sums 1 is a cyclic permutation.
    if b.iter().all(|row| row.iter().sum::<f64>() == 1.0) {
        return 1.0;
    }
    // Power iteration on I + B (primitive), bracketed by Collatz-Wielandt bounds.
    let mut x = vec![1.0; n];
    for _ in 0..100_000 {
        let y: Vec<f64> = (0..n)
            .map(|i| x[i] + (0..n).map(|j| b[i][j] * x[j]).sum::<f64>())
            .collect();
        let ratios = (0..n).map(|i| y[i] / x[i]);
        let (lo, hi) = ratios.fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
        let norm = y.iter().cloned().fold(0.0, f64::max);
        x = y.iter().map(|v| v / norm).collect();
        if hi - lo < 1e-13 * hi {
            return 0.5 * (lo + hi) - 1.0;
        }
    }
    let y: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| b[i][j] * x[j]).sum::<f64>())
        .collect();
    y.iter().zip(&x).map(|(a, b)| a / b).fold(0.0, f64::max)
}
