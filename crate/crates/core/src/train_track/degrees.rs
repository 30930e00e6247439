use rayon::prelude::*;

use crate::word::{classify_growth, GrowthClass, GrowthSamples, Letter, Word, DEFAULT_WORD_CAP};

use super::{FilteredRepresentative, TrackError};

pub const DEFAULT_HORIZON: u32 = 64;

/// Polynomial growth degree of every edge, with the derived data the
/// decomposition needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthTable {
    /// degree from the slope of `|f^n(e)|`, indexed by edge
    pub degrees: Vec<u32>,
    /// `0` for invariant edges, else `1 +` the degree of the suffix orbit
    pub recursive: Vec<u32>,
    pub eta: u32,
    /// edges of top degree
    pub e_set: Vec<usize>,
    /// number of bottom levels made of invariant edges, in `order`
    pub i0: usize,
    /// normalized filtration (invariant edges first)
    pub order: Vec<usize>,
    /// edges whose two degree computations disagree
    pub mismatches: Vec<usize>,
}

impl GrowthTable {
    pub fn degree(&self, e: usize) -> u32 {
        self.degrees[e]
    }

    pub fn is_consistent(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// For each edge of top degree, an edge of degree `eta - 1` crossed by
    /// its suffix, if any.
    pub fn e_set_witnesses(&self, f: &FilteredRepresentative) -> Vec<(usize, Option<usize>)> {
        self.e_set
            .iter()
            .map(|&e| {
                let w = f
                    .suffix(e)
                    .letters()
                    .iter()
                    .map(|l| l.index())
                    .find(|&x| self.eta >= 1 && self.degrees[x] == self.eta - 1);
                (e, w)
            })
            .collect()
    }
}

/// Lengths of `f^n(path)` for `n = 1..=max_n`, reported as growth samples.
pub fn orbit_samples(f: &FilteredRepresentative, path: &Word, max_n: u32) -> GrowthSamples {
    let mut values = Vec::with_capacity(max_n as usize);
    let mut cur = path.clone();
    let mut truncated = false;
    for n in 1..=max_n {
        match f.map().edge_map().apply_capped(&cur, DEFAULT_WORD_CAP) {
            Ok(next) => cur = next,
            Err(_) => {
                truncated = true;
                break;
            }
        }
        values.push((n, cur.len() as u64));
    }
    GrowthSamples {
        values,
        truncated,
        degree_bound: f.edge_count(),
    }
}

fn fitted_degree(f: &FilteredRepresentative, e: usize, path: &Word, max_n: u32) -> Result<u32, TrackError> {
    let samples = orbit_samples(f, path, max_n);
    let profile = classify_growth(&samples).map_err(|_| TrackError::HorizonTooShort(max_n))?;
    match profile.class {
        GrowthClass::Polynomial(d) => Ok(d),
        other => Err(TrackError::InconclusiveEdge {
            edge: f.edge_name(e).to_string(),
            class: other.label(),
        }),
    }
}

/// Edge degrees by slope fit over `max_n` iterations, cross-checked against
/// the suffix recursion.
pub fn edge_growth_degrees(f: &FilteredRepresentative, max_n: u32) -> Result<GrowthTable, TrackError> {
    let n = f.edge_count();
    let rows: Vec<(u32, u32)> = (0..n)
        .into_par_iter()
        .map(|e| {
            let d = fitted_degree(f, e, &Word::from_letter(Letter::pos(e)), max_n)?;
            let r = if f.is_invariant(e) {
                0
            } else {
                1 + fitted_degree(f, e, f.suffix(e), max_n)?
            };
            Ok((d, r))
        })
        .collect::<Result<_, TrackError>>()?;
    let degrees: Vec<u32> = rows.iter().map(|r| r.0).collect();
    let recursive: Vec<u32> = rows.iter().map(|r| r.1).collect();
    let mismatches = (0..n)
        .filter(|&e| degrees[e] != recursive[e] || (degrees[e] == 0) != f.is_invariant(e))
        .collect();
    let eta = degrees.iter().copied().max().unwrap_or(0);
    let e_set = (0..n).filter(|&e| degrees[e] == eta).collect();
    let normalized = f.normalized();
    Ok(GrowthTable {
        degrees,
        recursive,
        eta,
        e_set,
        i0: normalized.invariant_count(),
        order: normalized.order().to_vec(),
        mismatches,
    })
}
