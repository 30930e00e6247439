use thiserror::Error;

use super::{Endomorphism, Word};

/// Default cap on the length of any iterated image.
pub const DEFAULT_WORD_CAP: usize = 1_000_000;

/// Median tail ratio above which growth may be exponential.
pub const EXPONENTIAL_RATIO: f64 = 1.05;
/// Largest RMS log-residual accepted for a polynomial fit.
pub const MAX_RESIDUAL: f64 = 0.15;
/// Ratio of late to early tail excess (`ratio - 1`) above which the ratios
/// are treated as converging to a constant rather than decaying like `η/n`.
pub const PLATEAU_DECAY: f64 = 0.85;
pub const MIN_SAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrowthError {
    #[error("need at least {MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("max_n must be positive")]
    ZeroHorizon,
}

/// `(n, GR(n))` pairs for `n = 1..`, plus the degree bound that applies
/// (the rank for automorphisms, the edge count for graph maps).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthSamples {
    pub values: Vec<(u32, u64)>,
    pub truncated: bool,
    pub degree_bound: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthClass {
    Polynomial(u32),
    Exponential,
    Inconclusive,
}

impl GrowthClass {
    pub fn degree(self) -> Option<u32> {
        match self {
            GrowthClass::Polynomial(d) => Some(d),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GrowthClass::Polynomial(_) => "polynomial",
            GrowthClass::Exponential => "exponential",
            GrowthClass::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProfile {
    pub samples: GrowthSamples,
    pub class: GrowthClass,
    /// least-squares slope of log GR against log n over the tail
    pub slope: f64,
    pub residual: f64,
    /// median of GR(n+1)/GR(n) over the tail
    pub tail_ratio: f64,
    pub plateau: f64,
}

/// Samples `GR(n) = max_s |Φ^n(s)|` for `1 <= n <= max_n`, reducing after
/// every application. Stops early (and marks the result truncated) once an
/// image would exceed `cap` letters.
pub fn growth_function(
    phi: &Endomorphism,
    max_n: u32,
    cap: usize,
) -> Result<GrowthSamples, GrowthError> {
    if max_n == 0 {
        return Err(GrowthError::ZeroHorizon);
    }
    let mut current: Vec<Word> = (0..phi.rank()).map(Word::gen).collect();
    let mut values = Vec::with_capacity(max_n as usize);
    let mut truncated = false;
    'outer: for n in 1..=max_n {
        let mut next = Vec::with_capacity(current.len());
        for w in &current {
            match phi.apply_capped(w, cap) {
                Ok(img) => next.push(img),
                Err(_) => {
                    truncated = true;
                    break 'outer;
                }
            }
        }
        let gr = next.iter().map(Word::len).max().unwrap_or(0) as u64;
        values.push((n, gr));
        current = next;
    }
    Ok(GrowthSamples {
        values,
        truncated,
        degree_bound: phi.rank(),
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 1.0;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn ratios(tail: &[(u32, u64)]) -> Vec<f64> {
    tail.windows(2)
        .map(|p| p[1].1.max(1) as f64 / p[0].1.max(1) as f64)
        .collect()
}

/// Least squares for y = a + b x; returns (b, rms residual).
pub(crate) fn fit_line(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let icept = my - slope * mx;
    let ss: f64 = points
        .iter()
        .map(|p| (p.1 - icept - slope * p.0).powi(2))
        .sum();
    (slope, (ss / n).sqrt())
}

/// Polynomial vs exponential verdict from a sampled growth function.
///
/// The tail is the last half of the samples. Exponential growth needs the
/// median tail ratio above [`EXPONENTIAL_RATIO`] and, in addition, either a
/// log-log slope beyond the degree bound or ratios that have stopped
/// decaying. Otherwise the degree is the rounded log-log slope, accepted
/// when the fit residual is below [`MAX_RESIDUAL`].
pub fn classify_growth(samples: &GrowthSamples) -> Result<GrowthProfile, GrowthError> {
    let vals = &samples.values;
    if vals.len() < MIN_SAMPLES {
        return Err(GrowthError::TooFewSamples(vals.len()));
    }
    let tail = &vals[vals.len() / 2..];
    let rs = ratios(tail);
    let tail_ratio = median(rs.clone());
    let half = rs.len() / 2;
    let early = median(rs[..half].to_vec()) - 1.0;
    let late = median(rs[half..].to_vec()) - 1.0;
    let plateau = if early > 1e-12 { late / early } else { 0.0 };

    let points: Vec<(f64, f64)> = tail
        .iter()
        .map(|&(n, g)| ((n as f64).ln(), (g.max(1) as f64).ln()))
        .collect();
    let (slope, residual) = fit_line(&points);

    let bound = samples.degree_bound as f64;
    let class = if tail_ratio > EXPONENTIAL_RATIO && (slope > bound + 0.5 || plateau > PLATEAU_DECAY)
    {
        GrowthClass::Exponential
    } else {
        let eta = slope.round().max(0.0);
        if residual < MAX_RESIDUAL && eta <= bound {
            GrowthClass::Polynomial(eta as u32)
        } else {
            GrowthClass::Inconclusive
        }
    };
    Ok(GrowthProfile {
        samples: samples.clone(),
        class,
        slope,
        residual,
        tail_ratio,
        plateau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Endomorphism;

    fn linear4() -> Endomorphism {
        Endomorphism::from_strs(
            &["e0", "e1", "e2", "e3"],
            &["e0", "e1 e0", "e2 e0", "e3 e0 e1 e2^-1"],
        )
        .unwrap()
    }

    fn fib() -> Endomorphism {
        Endomorphism::from_strs(&["a", "b"], &["a b", "a"]).unwrap()
    }

    // Plain iterate-and-reduce through explicit letter vectors.
    fn oracle_lengths(phi: &Endomorphism, n: u32) -> Vec<u64> {
        let mut cur: Vec<Vec<crate::word::Letter>> =
            (0..phi.rank()).map(|g| vec![crate::word::Letter::pos(g)]).collect();
        let mut out = Vec::new();
        for _ in 0..n {
            cur = cur
                .iter()
                .map(|w| {
                    let mut raw = Vec::new();
                    for l in w {
                        let img = phi.image(l.index()).letters().to_vec();
                        if l.inverse {
                            raw.extend(img.iter().rev().map(|x| x.inv()));
                        } else {
                            raw.extend(img);
                        }
                    }
                    Word::reduce(raw).letters().to_vec()
                })
                .collect();
            out.push(cur.iter().map(|w| w.len() as u64).max().unwrap());
        }
        out
    }

    #[test]
    fn identity_is_constant() {
        let id = Endomorphism::identity(crate::word::FreeBasis::new(["a", "b"]).unwrap());
        let s = growth_function(&id, 16, DEFAULT_WORD_CAP).unwrap();
        assert!(s.values.iter().all(|&(_, g)| g == 1));
        let p = classify_growth(&s).unwrap();
        assert_eq!(p.class, GrowthClass::Polynomial(0));
    }

    #[test]
    fn linear4_is_linear() {
        let s = growth_function(&linear4(), 10, DEFAULT_WORD_CAP).unwrap();
        assert_eq!(s.values[0], (1, 4));
        let expected = oracle_lengths(&linear4(), 10);
        for (i, &(n, g)) in s.values.iter().enumerate() {
            assert_eq!(g, 3 * n as u64 + 1);
            assert_eq!(g, expected[i]);
        }
        let s = growth_function(&linear4(), 64, DEFAULT_WORD_CAP).unwrap();
        assert_eq!(classify_growth(&s).unwrap().class, GrowthClass::Polynomial(1));
    }

    #[test]
    fn fibonacci_is_exponential() {
        let s = growth_function(&fib(), 20, DEFAULT_WORD_CAP).unwrap();
        assert_eq!(
            s.values.iter().map(|v| v.1).collect::<Vec<_>>(),
            oracle_lengths(&fib(), 20)
        );
        let p = classify_growth(&s).unwrap();
        assert_eq!(p.class, GrowthClass::Exponential);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((p.tail_ratio - golden).abs() / golden < 0.02);
    }

    #[test]
    fn truncation_is_reported() {
        let s = growth_function(&fib(), 64, 10_000).unwrap();
        assert!(s.truncated);
        assert!(s.values.len() < 64);
        assert!(s.values.iter().all(|&(_, g)| g <= 10_000));
        assert_eq!(classify_growth(&s).unwrap().class, GrowthClass::Exponential);
    }

    #[test]
    fn chain_degrees() {
        let c3 = Endomorphism::from_strs(&["a", "b", "c"], &["a", "b a", "c b"]).unwrap();
        let s = growth_function(&c3, 64, DEFAULT_WORD_CAP).unwrap();
        for &(n, g) in &s.values {
            assert_eq!(g, 1 + (n as u64) * (n as u64 + 1) / 2);
        }
        assert_eq!(classify_growth(&s).unwrap().class, GrowthClass::Polynomial(2));
        let c4 = Endomorphism::from_strs(&["a", "b", "c", "d"], &["a", "b a", "c b", "d c"])
            .unwrap();
        let s = growth_function(&c4, 64, DEFAULT_WORD_CAP).unwrap();
        assert_eq!(classify_growth(&s).unwrap().class, GrowthClass::Polynomial(3));
    }

    #[test]
    fn too_few_samples() {
        let s = growth_function(&linear4(), 5, DEFAULT_WORD_CAP).unwrap();
        assert_eq!(classify_growth(&s), Err(GrowthError::TooFewSamples(5)));
        assert_eq!(
            growth_function(&linear4(), 0, DEFAULT_WORD_CAP),
            Err(GrowthError::ZeroHorizon)
        );
    }

    #[test]
    fn submultiplicative() {
        for phi in [linear4(), fib()] {
            let s = growth_function(&phi, 24, DEFAULT_WORD_CAP).unwrap();
            let gr = |n: usize| s.values[n - 1].1;
            for m in 1..12 {
                for n in 1..12 {
                    assert!(gr(m + n) <= gr(m) * gr(n));
                }
            }
        }
    }

    #[test]
    fn slow_exponential_not_polynomial() {
        // a -> b, b -> c, c -> a b : growth rate ~1.3247 (plastic number)
        let phi = Endomorphism::from_strs(&["a", "b", "c"], &["b", "c", "a b"]).unwrap();
        let s = growth_function(&phi, 64, DEFAULT_WORD_CAP).unwrap();
        let p = classify_growth(&s).unwrap();
        assert_eq!(p.class, GrowthClass::Exponential, "{p:?}");
    }
}
