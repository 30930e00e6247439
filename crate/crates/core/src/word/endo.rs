use super::{FreeBasis, Letter, SubgroupGraph, Word, WordError};

/// Outcome of checking whether an endomorphism is invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certification {
    Unknown,
    /// Images of the basis under the inverse automorphism.
    Automorphism(Vec<Word>),
    /// The named generator is not in the image subgroup.
    NotAutomorphism { missing: usize },
}

/// Map from basis generators to reduced words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endomorphism {
    basis: FreeBasis,
    images: Vec<Word>,
    certification: Certification,
}

impl Endomorphism {
    pub fn new(basis: FreeBasis, images: Vec<Word>) -> Result<Self, WordError> {
        if images.len() != basis.rank() {
            return Err(WordError::BasisMismatch);
        }
        for w in &images {
            basis.check_word(w)?;
        }
        Ok(Self {
            basis,
            images,
            certification: Certification::Unknown,
        })
    }

    pub fn identity(basis: FreeBasis) -> Self {
        let images = (0..basis.rank()).map(Word::gen).collect();
        Self {
            basis,
            images,
            certification: Certification::Unknown,
        }
    }

    /// Builds from `(name, image text)` pairs in basis order.
    pub fn from_strs(names: &[&str], images: &[&str]) -> Result<Self, WordError> {
        let basis = FreeBasis::new(names.iter().copied())?;
        let images = images
            .iter()
            .map(|s| basis.parse_word(s))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(basis, images)
    }

    pub fn basis(&self) -> &FreeBasis {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, gen: usize) -> &Word {
        &self.images[gen]
    }

    pub fn certification(&self) -> &Certification {
        &self.certification
    }

    pub fn inverse_images(&self) -> Option<&[Word]> {
        match &self.certification {
            Certification::Automorphism(inv) => Some(inv),
            _ => None,
        }
    }

    /// The certified inverse as an endomorphism, itself certified.
    pub fn inverse(&self) -> Option<Endomorphism> {
        let inv = self.inverse_images()?;
        Some(Endomorphism {
            basis: self.basis.clone(),
            images: inv.to_vec(),
            certification: Certification::Automorphism(self.images.clone()),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [Letter::pos(i)])
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Word::empty();
        for &l in w.letters() {
            push_image(&mut out, &self.images[l.index()], l.inverse);
        }
        out
    }

    /// Like [`apply`](Self::apply) but stops once the partial image exceeds
    /// `cap` letters.
    pub fn apply_capped(&self, w: &Word, cap: usize) -> Result<Word, WordError> {
        let mut out = Word::empty();
        for &l in w.letters() {
            push_image(&mut out, &self.images[l.index()], l.inverse);
            if out.len() > cap {
                return Err(WordError::LengthCap { cap });
            }
        }
        Ok(out)
    }

    pub fn apply_checked(&self, w: &Word) -> Result<Word, WordError> {
        self.basis.check_word(w)?;
        Ok(self.apply(w))
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism, WordError> {
        if self.basis != other.basis {
            return Err(WordError::BasisMismatch);
        }
        let images = other.images.iter().map(|w| self.apply(w)).collect();
        let certification = match (&self.certification, &other.certification) {
            (Certification::Automorphism(a), Certification::Automorphism(b)) => {
                // (self ∘ other)^-1 = other^-1 ∘ self^-1
                let inv_other = Endomorphism {
                    basis: self.basis.clone(),
                    images: b.clone(),
                    certification: Certification::Unknown,
                };
                Certification::Automorphism(a.iter().map(|w| inv_other.apply(w)).collect())
            }
            _ => Certification::Unknown,
        };
        Ok(Endomorphism {
            basis: self.basis.clone(),
            images,
            certification,
        })
    }

    pub fn power(&self, k: u32) -> Endomorphism {
        let mut acc = Endomorphism {
            basis: self.basis.clone(),
            images: (0..self.rank()).map(Word::gen).collect(),
            certification: Certification::Automorphism((0..self.rank()).map(Word::gen).collect()),
        };
        for _ in 0..k {
            acc = self.compose(&acc).expect("same basis");
        }
        acc
    }

    /// Decides invertibility. Free groups are Hopfian, so surjectivity is
    /// enough; the inverse is read off the folded image subgroup and
    /// double-checked by composition.
    pub fn certify(&self) -> Certification {
        let graph = SubgroupGraph::new(self.rank(), &self.images);
        let mut inverse = Vec::with_capacity(self.rank());
        for g in 0..self.rank() {
            match graph.express(&Word::gen(g)) {
                Some(w) => inverse.push(w),
                None => return Certification::NotAutomorphism { missing: g },
            }
        }
        let inv = Endomorphism {
            basis: self.basis.clone(),
            images: inverse.clone(),
            certification: Certification::Unknown,
        };
        for g in 0..self.rank() {
            let back = self.apply(inv.image(g));
            assert_eq!(back, Word::gen(g), "folding produced a wrong inverse");
        }
        Certification::Automorphism(inverse)
    }

    /// Runs [`certify`](Self::certify) and stores the outcome.
    pub fn certified(mut self) -> Self {
        self.certification = self.certify();
        self
    }

    /// Accepts a user-supplied inverse after checking both compositions.
    pub fn with_declared_inverse(mut self, inverse: Vec<Word>) -> Result<Self, usize> {
        let inv = Endomorphism {
            basis: self.basis.clone(),
            images: inverse.clone(),
            certification: Certification::Unknown,
        };
        for g in 0..self.rank() {
            if self.apply(inv.image(g)) != Word::gen(g) {
                return Err(g);
            }
            if inv.apply(self.image(g)) != Word::gen(g) {
                return Err(g);
            }
        }
        self.certification = Certification::Automorphism(inverse);
        Ok(self)
    }

    pub fn describe(&self) -> Vec<String> {
        (0..self.rank())
            .map(|g| {
                format!(
                    "{} -> {}",
                    self.basis.name(g),
                    self.basis.format_word(&self.images[g])
                )
            })
            .collect()
    }
}

fn push_image(out: &mut Word, image: &Word, inverse: bool) {
    if inverse {
        out.append_inverse(image);
    } else {
        out.append(image);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn linear4() -> Endomorphism {
        Endomorphism::from_strs(
            &["e0", "e1", "e2", "e3"],
            &["e0", "e1 e0", "e2 e0", "e3 e0 e1 e2^-1"],
        )
        .unwrap()
    }

    fn fmt(phi: &Endomorphism, w: &Word) -> String {
        phi.basis().format_word(w)
    }

    #[test]
    fn linear4_images() {
        let phi = linear4();
        let b = phi.basis().clone();
        let e3 = b.parse_word("e3").unwrap();
        assert_eq!(fmt(&phi, &phi.apply(&e3)), "e3 e0 e1 e2^-1");
        let p3 = b.parse_word("e0 e1 e2^-1").unwrap();
        assert_eq!(phi.apply(&p3), p3);
    }

    #[test]
    fn identity_fixes_words() {
        let id = Endomorphism::identity(FreeBasis::new(["a", "b"]).unwrap());
        let w = id.basis().parse_word("a b^-1 a a b").unwrap();
        assert_eq!(id.apply(&w), w);
        assert!(id.is_identity());
    }

    #[test]
    fn compose_with_identity() {
        let phi = linear4();
        let id = Endomorphism::identity(phi.basis().clone());
        assert_eq!(id.compose(&phi).unwrap().images(), phi.images());
        assert_eq!(phi.compose(&id).unwrap().images(), phi.images());
    }

    #[test]
    fn linear4_squared() {
        let phi = linear4();
        let sq = phi.compose(&phi).unwrap();
        assert_eq!(fmt(&phi, sq.image(3)), "e3 e0 e1 e2^-1 e0 e1 e2^-1");
    }

    #[test]
    fn linear4_inverse() {
        let phi = linear4().certified();
        let inv = phi.inverse_images().expect("automorphism");
        let b = phi.basis();
        let shown: Vec<String> = inv.iter().map(|w| b.format_word(w)).collect();
        assert_eq!(
            shown,
            ["e0", "e1 e0^-1", "e2 e0^-1", "e3 e2 e1^-1 e0^-1"]
        );
        let inverse = phi.inverse().unwrap();
        let id = phi.compose(&inverse).unwrap();
        assert!(id.is_identity());
        assert!(inverse.compose(&phi).unwrap().is_identity());
    }

    #[test]
    fn non_surjective_map() {
        let phi = Endomorphism::from_strs(&["a", "b"], &["a", "a"]).unwrap();
        assert_eq!(phi.certify(), Certification::NotAutomorphism { missing: 1 });
    }

    #[test]
    fn identity_certifies_to_identity() {
        let id = Endomorphism::identity(FreeBasis::new(["a", "b", "c"]).unwrap()).certified();
        let inv = id.inverse().unwrap();
        assert!(inv.is_identity());
    }

    #[test]
    fn declared_inverse_checked() {
        let phi = linear4();
        let b = phi.basis().clone();
        let good: Vec<Word> = ["e0", "e1 e0^-1", "e2 e0^-1", "e3 e2 e1^-1 e0^-1"]
            .iter()
            .map(|s| b.parse_word(s).unwrap())
            .collect();
        assert!(phi.clone().with_declared_inverse(good.clone()).is_ok());
        let mut bad = good;
        bad[3] = b.parse_word("e3").unwrap();
        assert_eq!(phi.with_declared_inverse(bad), Err(3));
    }

    #[test]
    fn basis_mismatch() {
        let a = linear4();
        let b = Endomorphism::identity(FreeBasis::new(["a"]).unwrap());
        assert_eq!(a.compose(&b), Err(WordError::BasisMismatch));
        let w = Word::gen(5);
        assert!(a.apply_checked(&w).is_err());
    }

    #[test]
    fn power_inverse_tracks() {
        let phi = linear4().certified();
        let cube = phi.power(3);
        let inv = cube.inverse().unwrap();
        assert!(cube.compose(&inv).unwrap().is_identity());
    }

    fn word(rank: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0..rank, any::<bool>()), 0..25)
            .prop_map(|v| v.into_iter().map(|(g, s)| Letter::new(g, s)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn homomorphism_law_linear4(u in word(4), v in word(4)) {
            let phi = linear4();
            prop_assert_eq!(phi.apply(&u.mul(&v)), phi.apply(&u).mul(&phi.apply(&v)));
        }

        #[test]
        fn homomorphism_law_chain(u in word(3), v in word(3)) {
            let phi = Endomorphism::from_strs(&["a", "b", "c"], &["a", "b a", "c b"]).unwrap();
            prop_assert_eq!(phi.apply(&u.mul(&v)), phi.apply(&u).mul(&phi.apply(&v)));
        }

        #[test]
        fn homomorphism_law_fibonacci(u in word(2), v in word(2)) {
            let phi = Endomorphism::from_strs(&["a", "b"], &["a b", "a"]).unwrap();
            prop_assert_eq!(phi.apply(&u.mul(&v)), phi.apply(&u).mul(&phi.apply(&v)));
        }
    }
}
