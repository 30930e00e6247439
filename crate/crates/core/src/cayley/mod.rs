//! Normal forms, Cayley balls and divergence samples in `F ⋊_Φ ℤ`.

mod ball;
mod divergence;

use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::word::{Certification, Endomorphism, FreeBasis, Letter, Word, DEFAULT_WORD_CAP};

pub use ball::{ball, CayleyBall};
pub use divergence::{divergence_chi, verify_witness, Chi, DivergenceSample, Witness};

pub const DEFAULT_BALL_BUDGET: usize = 4_000_000;
pub const BALL_BUDGET_VAR: &str = "MTORUS_BALL_BUDGET";
pub const WORD_CAP_VAR: &str = "MTORUS_WORD_CAP";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CayleyError {
    #[error("negative powers need an automorphism; {0} is not invertible")]
    NotInvertible(String),
    #[error("ball of radius {radius} exceeds the budget of {limit} elements")]
    BallBudget { radius: u32, limit: usize },
    #[error("a power image exceeds {cap} letters")]
    WordCap { cap: usize },
    #[error("divergence needs radius at least 2, got {0}")]
    RadiusTooSmall(u32),
    #[error("horizon factor must be at least 1, got {0}")]
    BadHorizon(f64),
}

/// Caps shared by the search routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub ball: usize,
    pub word_cap: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            ball: DEFAULT_BALL_BUDGET,
            word_cap: DEFAULT_WORD_CAP,
        }
    }
}

impl Budget {
    /// Defaults overridden by `MTORUS_BALL_BUDGET` and `MTORUS_WORD_CAP`.
    pub fn from_env() -> Self {
        let read = |var: &str, default: usize| {
            std::env::var(var)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .unwrap_or(default)
        };
        let d = Self::default();
        Self {
            ball: read(BALL_BUDGET_VAR, d.ball),
            word_cap: read(WORD_CAP_VAR, d.word_cap),
        }
    }
}

/// `w t^k`. Every element has exactly one such form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    pub fiber: Word,
    pub t_exp: i64,
}

impl NormalForm {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(fiber: Word, t_exp: i64) -> Self {
        Self { fiber, t_exp }
    }

    pub fn fiber(w: Word) -> Self {
        Self { fiber: w, t_exp: 0 }
    }

    pub fn t_power(k: i64) -> Self {
        Self {
            fiber: Word::empty(),
            t_exp: k,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.fiber.is_empty() && self.t_exp == 0
    }

    pub fn format(&self, basis: &FreeBasis, t: &str) -> String {
        match (self.fiber.is_empty(), self.t_exp) {
            (_, 0) => basis.format_word(&self.fiber),
            (true, 1) => t.to_string(),
            (true, k) => format!("{t}^{k}"),
            (false, 1) => format!("{} {t}", basis.format_word(&self.fiber)),
            (false, k) => format!("{} {t}^{k}", basis.format_word(&self.fiber)),
        }
    }
}

/// A generator of the mapping torus or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    Fiber(Letter),
    T { inverse: bool },
}

impl Gen {
    pub fn inverse(self) -> Gen {
        match self {
            Gen::Fiber(l) => Gen::Fiber(l.inv()),
            Gen::T { inverse } => Gen::T { inverse: !inverse },
        }
    }

    pub fn format(self, basis: &FreeBasis, t: &str) -> String {
        match self {
            Gen::Fiber(l) if l.inverse => format!("{}^-1", basis.name(l.index())),
            Gen::Fiber(l) => basis.name(l.index()).to_string(),
            Gen::T { inverse: false } => t.to_string(),
            Gen::T { inverse: true } => format!("{t}^-1"),
        }
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.fiber, self.t_exp)
    }
}

/// Cached images `Φ^k(s)` for the basis, one layer per exponent.
#[derive(Debug, Default)]
struct PowerTable {
    forward: Vec<Arc<Vec<Word>>>,
    backward: Vec<Arc<Vec<Word>>>,
}

/// `G = ⟨F, t | t s t⁻¹ = Φ(s)⟩` with normal-form arithmetic
/// `(u, k)(v, m) = (u Φᵏ(v), k + m)`.
#[derive(Debug)]
pub struct MappingTorus {
    phi: Endomorphism,
    inverse: Option<Endomorphism>,
    word_cap: usize,
    powers: RwLock<PowerTable>,
}

impl Clone for MappingTorus {
    fn clone(&self) -> Self {
        Self::with_word_cap(self.phi.clone(), self.word_cap)
    }
}

impl MappingTorus {
    pub fn new(phi: Endomorphism) -> Self {
        Self::with_word_cap(phi, DEFAULT_WORD_CAP)
    }

    /// Certifies `phi` if that has not happened yet. A non-invertible map
    /// still supports non-negative exponents.
    pub fn with_word_cap(phi: Endomorphism, word_cap: usize) -> Self {
        let phi = match phi.certification() {
            Certification::Unknown => phi.certified(),
            _ => phi,
        };
        let inverse = phi.inverse();
        let identity: Vec<Word> = (0..phi.rank()).map(Word::gen).collect();
        let layer0 = Arc::new(identity);
        Self {
            phi,
            inverse,
            word_cap,
            powers: RwLock::new(PowerTable {
                forward: vec![layer0.clone()],
                backward: vec![layer0],
            }),
        }
    }

    pub fn phi(&self) -> &Endomorphism {
        &self.phi
    }

    pub fn basis(&self) -> &FreeBasis {
        self.phi.basis()
    }

    pub fn rank(&self) -> usize {
        self.phi.rank()
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse.is_some()
    }

    /// `[s0, s0⁻¹, s1, s1⁻¹, …, t, t⁻¹]`, the order used by every search.
    pub fn generators(&self) -> Vec<Gen> {
        let mut gens = Vec::with_capacity(2 * self.rank() + 2);
        for g in 0..self.rank() {
            gens.push(Gen::Fiber(Letter::pos(g)));
            gens.push(Gen::Fiber(Letter::neg(g)));
        }
        gens.push(Gen::T { inverse: false });
        gens.push(Gen::T { inverse: true });
        gens
    }

    /// Images of the basis under `Φᵏ`.
    pub fn layer(&self, k: i64) -> Result<Arc<Vec<Word>>, CayleyError> {
        let idx = k.unsigned_abs() as usize;
        {
            let table = self.powers.read().expect("power table lock");
            let side = if k >= 0 { &table.forward } else { &table.backward };
            if let Some(layer) = side.get(idx) {
                return Ok(layer.clone());
            }
        }
        let map = if k >= 0 {
            &self.phi
        } else {
            self.inverse
                .as_ref()
                .ok_or_else(|| CayleyError::NotInvertible(self.phi.describe().join(", ")))?
        };
        let mut table = self.powers.write().expect("power table lock");
        let side = if k >= 0 { &mut table.forward } else { &mut table.backward };
        while side.len() <= idx {
            let last = side.last().expect("layer 0").clone();
            let next = last
                .iter()
                .map(|w| map.apply_capped(w, self.word_cap))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CayleyError::WordCap { cap: self.word_cap })?;
            side.push(Arc::new(next));
        }
        Ok(side[idx].clone())
    }

    /// `Φᵏ(w)`.
    pub fn phi_power(&self, k: i64, w: &Word) -> Result<Word, CayleyError> {
        let layer = self.layer(k)?;
        let mut out = Word::empty();
        for &l in w.letters() {
            let img = &layer[l.index()];
            if l.inverse {
                out.append_inverse(img);
            } else {
                out.append(img);
            }
            if out.len() > self.word_cap {
                return Err(CayleyError::WordCap { cap: self.word_cap });
            }
        }
        Ok(out)
    }

    /// Right multiplication by one generator.
    pub fn multiply(&self, nf: &NormalForm, gen: Gen) -> Result<NormalForm, CayleyError> {
        match gen {
            Gen::T { inverse } => Ok(NormalForm::new(
                nf.fiber.clone(),
                nf.t_exp + if inverse { -1 } else { 1 },
            )),
            Gen::Fiber(l) => {
                let layer = self.layer(nf.t_exp)?;
                let img = &layer[l.index()];
                let mut fiber = nf.fiber.clone();
                if l.inverse {
                    fiber.append_inverse(img);
                } else {
                    fiber.append(img);
                }
                Ok(NormalForm::new(fiber, nf.t_exp))
            }
        }
    }

    pub fn mul(&self, a: &NormalForm, b: &NormalForm) -> Result<NormalForm, CayleyError> {
        let moved = self.phi_power(a.t_exp, &b.fiber)?;
        Ok(NormalForm::new(a.fiber.mul(&moved), a.t_exp + b.t_exp))
    }

    /// `(w, k)⁻¹ = (Φ⁻ᵏ(w⁻¹), −k)`.
    pub fn inverse(&self, a: &NormalForm) -> Result<NormalForm, CayleyError> {
        Ok(NormalForm::new(
            self.phi_power(-a.t_exp, &a.fiber.inverse())?,
            -a.t_exp,
        ))
    }

    /// The element spelled by a sequence of generators.
    pub fn evaluate(&self, gens: &[Gen]) -> Result<NormalForm, CayleyError> {
        let mut nf = NormalForm::identity();
        for &g in gens {
            nf = self.multiply(&nf, g)?;
        }
        Ok(nf)
    }

    /// The element of a word in the basis and `t` written in the usual
    /// notation, e.g. `t e1 t^-1 e0^-1 e1^-1`.
    pub fn parse_element(&self, text: &str, t: &str) -> Result<NormalForm, String> {
        let mut gens = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = crate::word::split_exponent(tok).map_err(|e| e.to_string())?;
            let base = if name == t {
                Gen::T { inverse: false }
            } else {
                let g = self
                    .basis()
                    .index_of(name)
                    .ok_or_else(|| format!("unknown generator {name}"))?;
                Gen::Fiber(Letter::pos(g))
            };
            let step = if exp < 0 { base.inverse() } else { base };
            for _ in 0..exp.unsigned_abs() {
                gens.push(step);
            }
        }
        self.evaluate(&gens).map_err(|e| e.to_string())
    }
}
