//! Free-group words over a fixed basis, endomorphisms, growth and
//! subgroup membership.
//!
//! A [`Word`] is always kept freely reduced. Inverses of generators are
//! carried by a sign bit on each [`Letter`]; they never get names of their own.

mod endo;
mod folding;
mod growth;

pub use endo::{Certification, Endomorphism};
pub use folding::{stallings_membership, SubgroupGraph};
pub use growth::{
    classify_growth, growth_function, GrowthClass, GrowthProfile, GrowthSamples,
    DEFAULT_WORD_CAP,
};

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("basis must contain at least one generator")]
    EmptyBasis,
    #[error("invalid generator name {0:?}")]
    InvalidName(String),
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("bases differ")]
    BasisMismatch,
    #[error("word length cap of {cap} letters exceeded")]
    LengthCap { cap: usize },
}

/// Ordered list of distinct generator names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeBasis {
    names: Vec<String>,
}

impl FreeBasis {
    pub fn new<I, S>(names: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(WordError::EmptyBasis);
        }
        let mut seen = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(WordError::InvalidName(n.clone()));
            }
            if seen.insert(n.as_str(), i).is_some() {
                return Err(WordError::DuplicateName(n.clone()));
            }
        }
        Ok(Self { names })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Parses whitespace-separated tokens such as `e0 e1^-1 a^3`. The
    /// literal `1` (or an empty string) denotes the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = split_exponent(tok)?;
            let gen = self
                .index_of(name)
                .ok_or_else(|| WordError::UnknownGenerator(name.to_string()))?;
            let letter = Letter::new(gen, exp > 0);
            for _ in 0..exp.unsigned_abs() {
                letters.push(letter);
            }
        }
        Ok(Word::reduce(letters))
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.letters()
            .iter()
            .map(|l| {
                if l.inverse {
                    format!("{}^-1", self.names[l.gen as usize])
                } else {
                    self.names[l.gen as usize].clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn check_word(&self, w: &Word) -> Result<(), WordError> {
        for l in w.letters() {
            if l.gen as usize >= self.rank() {
                return Err(WordError::IndexOutOfRange {
                    index: l.gen as usize,
                    rank: self.rank(),
                });
            }
        }
        Ok(())
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Splits `x^-2` into (`x`, -2); a bare name has exponent 1.
pub(crate) fn split_exponent(tok: &str) -> Result<(&str, i64), WordError> {
    match tok.split_once('^') {
        None => Ok((tok, 1)),
        Some((name, exp)) => {
            let e: i64 = exp
                .parse()
                .map_err(|_| WordError::InvalidName(tok.to_string()))?;
            if e == 0 {
                return Err(WordError::InvalidName(tok.to_string()));
            }
            Ok((name, e))
        }
    }
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, positive: bool) -> Self {
        Self {
            gen: gen as u32,
            inverse: !positive,
        }
    }

    pub fn pos(gen: usize) -> Self {
        Self::new(gen, true)
    }

    pub fn neg(gen: usize) -> Self {
        Self::new(gen, false)
    }

    pub fn inv(self) -> Self {
        Self {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn index(self) -> usize {
        self.gen as usize
    }

    /// Position in the inverse-closed alphabet `g0, g0^-1, g1, g1^-1, ...`.
    pub fn slot(self) -> usize {
        2 * self.gen as usize + self.inverse as usize
    }

    pub fn from_slot(slot: usize) -> Self {
        Self {
            gen: (slot / 2) as u32,
            inverse: slot % 2 == 1,
        }
    }
}

/// A freely reduced word.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn gen(index: usize) -> Self {
        Self {
            letters: vec![Letter::pos(index)],
        }
    }

    pub fn from_letter(l: Letter) -> Self {
        Self { letters: vec![l] }
    }

    /// Free reduction by a single left-to-right pass with a stack.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Self::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Appends with cancellation at the boundary.
    pub fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inv()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn append(&mut self, other: &Word) {
        for &l in &other.letters {
            self.push(l);
        }
    }

    pub fn append_inverse(&mut self, other: &Word) {
        for &l in other.letters.iter().rev() {
            self.push(l.inv());
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.append(other);
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::empty();
        for _ in 0..k.unsigned_abs() {
            w.append(&base);
        }
        w
    }

    pub fn conjugate_by(&self, g: &Word) -> Word {
        let mut w = g.clone();
        w.append(self);
        w.append_inverse(g);
        w
    }

    /// Strips matching inverse letters from both ends.
    pub fn cyclically_reduce(&self) -> Word {
        let l = &self.letters;
        let (mut i, mut j) = (0, l.len());
        while j > i + 1 && l[i] == l[j - 1].inv() {
            i += 1;
            j -= 1;
        }
        Word {
            letters: l[i..j].to_vec(),
        }
    }

    pub fn is_reduced_sequence(letters: &[Letter]) -> bool {
        letters.windows(2).all(|p| p[0] != p[1].inv())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word::reduce(iter)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l.inverse {
                write!(f, "x{}^-1", l.gen)?;
            } else {
                write!(f, "x{}", l.gen)?;
            }
        }
        Ok(())
    }
}

/// Reduces a raw sequence of named letters; `cyclic` additionally strips
/// cancelling ends.
pub fn free_reduce(
    basis: &FreeBasis,
    letters: &[(&str, bool)],
    cyclic: bool,
) -> Result<Word, WordError> {
    let mut w = Word::empty();
    for &(name, positive) in letters {
        let gen = basis
            .index_of(name)
            .ok_or_else(|| WordError::UnknownGenerator(name.to_string()))?;
        w.push(Letter::new(gen, positive));
    }
    Ok(if cyclic { w.cyclically_reduce() } else { w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn linear4_basis() -> FreeBasis {
        FreeBasis::new(["e0", "e1", "e2", "e3"]).unwrap()
    }

    // Rescan until no cancelling pair remains.
    fn naive_reduce(mut v: Vec<Letter>) -> Vec<Letter> {
        loop {
            let pos = v.windows(2).position(|p| p[0] == p[1].inv());
            match pos {
                Some(i) => {
                    v.drain(i..i + 2);
                }
                None => return v,
            }
        }
    }

    #[test]
    fn cancelling_pair_is_empty() {
        let b = linear4_basis();
        let w = free_reduce(&b, &[("e0", true), ("e0", false)], false).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn torus_example_reduction() {
        let b = linear4_basis();
        let raw = [
            ("e0", true),
            ("e1", true),
            ("e0", true),
            ("e0", false),
            ("e2", false),
        ];
        let w = free_reduce(&b, &raw, false).unwrap();
        assert_eq!(b.format_word(&w), "e0 e1 e2^-1");
    }

    #[test]
    fn unknown_generator() {
        let b = linear4_basis();
        assert_eq!(
            free_reduce(&b, &[("x", true)], false),
            Err(WordError::UnknownGenerator("x".into()))
        );
    }

    #[test]
    fn cyclic_flag() {
        let b = linear4_basis();
        let w = b.parse_word("e1 e0 e2 e1^-1").unwrap();
        assert_eq!(b.format_word(&w.cyclically_reduce()), "e0 e2");
        let raw = [("e1", true), ("e0", true), ("e1", false)];
        assert_eq!(
            b.format_word(&free_reduce(&b, &raw, true).unwrap()),
            "e0"
        );
    }

    #[test]
    fn parse_powers() {
        let b = FreeBasis::new(["a", "b"]).unwrap();
        let w = b.parse_word("a^3 b^-2 b a^-1").unwrap();
        assert_eq!(b.format_word(&w), "a a a b^-1 a^-1");
        assert!(b.parse_word("a^0").is_err());
        assert!(b.parse_word("1").unwrap().is_empty());
    }

    #[test]
    fn basis_validation() {
        assert_eq!(
            FreeBasis::new(Vec::<String>::new()),
            Err(WordError::EmptyBasis)
        );
        assert!(matches!(
            FreeBasis::new(["a", "a"]),
            Err(WordError::DuplicateName(_))
        ));
        assert!(matches!(
            FreeBasis::new(["a", "b^"]),
            Err(WordError::InvalidName(_))
        ));
    }

    #[test]
    fn random_200_letters_match_naive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let raw: Vec<Letter> = (0..200)
                .map(|_| Letter::new(rng.gen_range(0..3), rng.gen_bool(0.5)))
                .collect();
            let w = Word::reduce(raw.clone());
            assert_eq!(w.letters(), naive_reduce(raw).as_slice());
        }
    }

    fn letters(rank: usize, max: usize) -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec((0..rank, any::<bool>()), 0..max)
            .prop_map(|v| v.into_iter().map(|(g, s)| Letter::new(g, s)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn reduction_idempotent(raw in letters(4, 60)) {
            let w = Word::reduce(raw);
            prop_assert!(Word::is_reduced_sequence(w.letters()));
            prop_assert_eq!(Word::reduce(w.letters().to_vec()), w);
        }

        #[test]
        fn product_length_bound(u in letters(3, 30), v in letters(3, 30)) {
            let (u, v) = (Word::reduce(u), Word::reduce(v));
            prop_assert!(u.mul(&v).len() <= u.len() + v.len());
            prop_assert!(u.mul(&u.inverse()).is_empty());
        }
    }
}
