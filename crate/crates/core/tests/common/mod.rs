//! Brute-force reference implementations shared by the integration tests.
//! They avoid the library's arithmetic on purpose: letters are signed
//! integers, powers are recomputed on every use, and BFS runs one source at
//! a time.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

/// `+ (g + 1)` for a generator, `-(g + 1)` for its inverse.
pub type Letters = Vec<i32>;

pub fn reduce(w: &[i32]) -> Letters {
    let mut out: Letters = Vec::new();
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn invert(w: &[i32]) -> Letters {
    w.iter().rev().map(|l| -l).collect()
}

/// Parses `"e1 e0^-1"` against the given names.
pub fn parse(names: &[&str], text: &str) -> Letters {
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        if tok == "1" {
            continue;
        }
        let (name, inv) = match tok.strip_suffix("^-1") {
            Some(n) => (n, true),
            None => (tok, false),
        };
        let g = names.iter().position(|n| *n == name).expect("known name") as i32 + 1;
        out.push(if inv { -g } else { g });
    }
    out
}

pub struct Substitution {
    pub images: Vec<Letters>,
}

impl Substitution {
    pub fn new(names: &[&str], images: &[&str]) -> Self {
        Self {
            images: images.iter().map(|s| parse(names, s)).collect(),
        }
    }

    pub fn apply(&self, w: &[i32]) -> Letters {
        let mut out = Vec::new();
        for &l in w {
            let img = &self.images[(l.unsigned_abs() - 1) as usize];
            if l > 0 {
                out.extend_from_slice(img);
            } else {
                out.extend(invert(img));
            }
        }
        reduce(&out)
    }

    pub fn iterate(&self, w: &[i32], n: u32) -> Letters {
        let mut cur = w.to_vec();
        for _ in 0..n {
            cur = self.apply(&cur);
        }
        cur
    }

    /// `max_s |Φⁿ(s)|` for `n = 1..=max_n`.
    pub fn growth(&self, max_n: u32) -> Vec<u64> {
        let rank = self.images.len() as i32;
        let mut cur: Vec<Letters> = (1..=rank).map(|g| vec![g]).collect();
        (1..=max_n)
            .map(|_| {
                cur = cur.iter().map(|w| self.apply(w)).collect();
                cur.iter().map(|w| w.len() as u64).max().unwrap_or(0)
            })
            .collect()
    }
}

/// The mapping torus of `phi` given together with its inverse.
pub struct Torus {
    pub phi: Substitution,
    pub inv: Substitution,
}

pub type Element = (Letters, i64);

impl Torus {
    pub fn new(names: &[&str], images: &[&str], inverse: &[&str]) -> Self {
        Self {
            phi: Substitution::new(names, images),
            inv: Substitution::new(names, inverse),
        }
    }

    pub fn rank(&self) -> i32 {
        self.phi.images.len() as i32
    }

    /// Right multiplication by `g` (a signed fiber letter) or by `t^±1`
    /// (`0` is `t`, anything else out of range is `t⁻¹`).
    pub fn step(&self, x: &Element, g: i32) -> Element {
        let (w, k) = x;
        if g == 0 {
            return (w.clone(), k + 1);
        }
        if g.unsigned_abs() as i32 > self.rank() {
            return (w.clone(), k - 1);
        }
        let map = if *k >= 0 { &self.phi } else { &self.inv };
        let img = map.iterate(&[g], k.unsigned_abs() as u32);
        let mut out = w.clone();
        out.extend(img);
        (reduce(&out), *k)
    }

    pub fn moves(&self) -> Vec<i32> {
        let mut m: Vec<i32> = (1..=self.rank()).flat_map(|g| [g, -g]).collect();
        m.push(0);
        m.push(self.rank() + 1);
        m
    }

    pub fn ball(&self, r: u32) -> HashMap<Element, u32> {
        let start: Element = (Vec::new(), 0);
        let mut dist = HashMap::from([(start.clone(), 0)]);
        let mut queue = VecDeque::from([start]);
        let moves = self.moves();
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            if d == r {
                continue;
            }
            for &g in &moves {
                let y = self.step(&x, g);
                if !dist.contains_key(&y) {
                    dist.insert(y.clone(), d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Largest avoiding distance between `r`-sphere points inside
    /// `B(horizon)` minus the open `⌊r/2⌋`-ball; `None` if some pair is cut off.
    pub fn chi(&self, r: u32, horizon: u32) -> Option<u32> {
        let dist = self.ball(horizon);
        let h = r / 2;
        let elems: Vec<&Element> = dist.keys().collect();
        let index: HashMap<&Element, usize> = elems.iter().enumerate().map(|(i, x)| (*x, i)).collect();
        let moves = self.moves();
        let allowed: Vec<bool> = elems.iter().map(|x| dist[*x] >= h).collect();
        let adj: Vec<Vec<usize>> = elems
            .iter()
            .map(|x| {
                moves
                    .iter()
                    .filter_map(|&g| index.get(&self.step(x, g)).copied())
                    .filter(|&j| allowed[j])
                    .collect()
            })
            .collect();
        let sphere: Vec<usize> = (0..elems.len()).filter(|&i| dist[elems[i]] == r).collect();
        let mut worst = 0;
        let mut seen = vec![u32::MAX; elems.len()];
        for &y in &sphere {
            seen.iter_mut().for_each(|s| *s = u32::MAX);
            seen[y] = 0;
            let mut queue = VecDeque::from([y]);
            while let Some(x) = queue.pop_front() {
                for &z in &adj[x] {
                    if seen[z] == u32::MAX {
                        seen[z] = seen[x] + 1;
                        queue.push_back(z);
                    }
                }
            }
            for &z in &sphere {
                if seen[z] == u32::MAX {
                    return None;
                }
                worst = worst.max(seen[z]);
            }
        }
        Some(worst)
    }
}
