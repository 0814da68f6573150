//! Bounded verification of Brinkhuis sets.
//!
//! A candidate assigns to every letter `b_i` of `B` a set `U_i` of `r`
//! words of length `l`. It is a Brinkhuis set when every substitution of
//! the letters of a powerfree word by members of the corresponding sets
//! yields a powerfree word. No finite test is known, so verification checks
//! all powerfree words up to a chosen length and certifies only that.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::packed::SuffixTracker;
use crate::words::{power_suffix, Alphabet, FreenessSpec, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BrinkhuisCandidate {
    alphabet: Alphabet,
    sets: Vec<Vec<Word>>,
    length: usize,
}

impl BrinkhuisCandidate {
    /// One set of `r` words of common length per letter of `alphabet`.
    pub fn new(alphabet: Alphabet, sets: Vec<Vec<Word>>) -> Result<Self> {
        let r = sets.first().map_or(0, Vec::len);
        let length = sets.first().and_then(|s| s.first()).map_or(0, Word::len);
        if sets.len() != alphabet.size() || r == 0 || length == 0 {
            return Err(Error::InvalidMorphism(format!(
                "need one nonempty set per letter of an alphabet of size {}",
                alphabet.size()
            )));
        }
        for set in &sets {
            if set.len() != r {
                return Err(Error::InvalidMorphism("sets differ in size".into()));
            }
            for w in set {
                if w.len() != length {
                    return Err(Error::InvalidMorphism("words differ in length".into()));
                }
                w.check_alphabet(alphabet)?;
            }
        }
        Ok(BrinkhuisCandidate {
            alphabet,
            sets,
            length,
        })
    }

    /// `U_i = {rho(a_i1), .., rho(a_ir)}` for a morphism given by its
    /// images, grouped `r` at a time.
    pub fn from_images(alphabet: Alphabet, images: &[Word], r: usize) -> Result<Self> {
        if r == 0 || images.len() != r * alphabet.size() {
            return Err(Error::DimensionMismatch(format!(
                "{} images do not form {} groups of {r}",
                images.len(),
                alphabet.size()
            )));
        }
        BrinkhuisCandidate::new(alphabet, images.chunks(r).map(<[Word]>::to_vec).collect())
    }

    pub fn r(&self) -> usize {
        self.sets[0].len()
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn sets(&self) -> &[Vec<Word>] {
        &self.sets
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum BrinkhuisVerdict {
    /// `word` with `assignment[i]` the index chosen in the set of
    /// `word[i]` gives `image`, which is not powerfree.
    Refuted {
        word: Word,
        assignment: Vec<usize>,
        image: Word,
    },
    /// No failure among powerfree words of length at most `max_len`. This
    /// is a bounded certificate, not a proof.
    VerifiedUpTo { max_len: usize },
}

struct Walk<'a> {
    candidate: &'a BrinkhuisCandidate,
    spec: FreenessSpec,
    depth: usize,
    word: Vec<u8>,
    choice: Vec<usize>,
    tracker: SuffixTracker,
}

impl Walk<'_> {
    fn refutation(&self) -> BrinkhuisVerdict {
        BrinkhuisVerdict::Refuted {
            word: Word::from(self.word.as_slice()),
            assignment: self.choice.clone(),
            image: Word::from(self.tracker.letters()),
        }
    }

    /// Appends `(letter, choice)`; `Some(failed)` if the source word stays
    /// powerfree, where `failed` tells whether the image broke.
    fn push(&mut self, letter: u8, j: usize) -> Option<bool> {
        self.word.push(letter);
        if power_suffix(&self.word, self.spec).is_some() {
            self.word.pop();
            return None;
        }
        self.choice.push(j);
        let mut failed = false;
        for &b in self.candidate.sets[letter as usize][j].letters() {
            failed |= self.tracker.push(b);
        }
        Some(failed)
    }

    fn pop(&mut self, mark: usize) {
        self.word.pop();
        self.choice.pop();
        self.tracker.truncate(mark);
    }

    /// Failures among extensions of exactly `self.depth` letters.
    fn rec(&mut self) -> Option<BrinkhuisVerdict> {
        let n = self.candidate.alphabet.size() as u8;
        for a in 0..n {
            for j in 0..self.candidate.r() {
                let mark = self.tracker.len();
                let Some(failed) = self.push(a, j) else {
                    continue;
                };
                let found = if failed {
                    (self.word.len() == self.depth).then(|| self.refutation())
                } else if self.word.len() < self.depth {
                    self.rec()
                } else {
                    None
                };
                if found.is_some() {
                    return found;
                }
                self.pop(mark);
            }
        }
        None
    }
}

/// Checks every powerfree word of length at most `max_len` under every
/// choice of substitutes. Lengths are tried in increasing order, so a
/// refutation has minimal length.
pub fn verify_brinkhuis(
    candidate: &BrinkhuisCandidate,
    spec: FreenessSpec,
    max_len: usize,
) -> Result<BrinkhuisVerdict> {
    let n = candidate.alphabet.size() as u8;
    let roots: Vec<(u8, usize)> = (0..n)
        .flat_map(|a| (0..candidate.r()).map(move |j| (a, j)))
        .collect();
    for depth in 1..=max_len {
        let first = AtomicUsize::new(usize::MAX);
        let found: Vec<Option<BrinkhuisVerdict>> = roots
            .par_iter()
            .enumerate()
            .map(|(i, &(a, j))| {
                if i > first.load(Ordering::Relaxed) {
                    return None;
                }
                let mut walk = Walk {
                    candidate,
                    spec,
                    depth,
                    word: Vec::new(),
                    choice: Vec::new(),
                    tracker: SuffixTracker::new(candidate.alphabet, spec),
                };
                let failed = walk.push(a, j)?;
                let r = if failed {
                    (depth == 1).then(|| walk.refutation())
                } else if depth > 1 {
                    walk.rec()
                } else {
                    None
                };
                if r.is_some() {
                    first.fetch_min(i, Ordering::Relaxed);
                }
                r
            })
            .collect();
        if let Some(v) = found.into_iter().flatten().next() {
            return Ok(v);
        }
    }
    Ok(BrinkhuisVerdict::VerifiedUpTo { max_len })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::Morphism;

    fn words(s: &[&str]) -> Vec<Word> {
        s.iter().map(|w| Word::parse(w).unwrap()).collect()
    }

    #[test]
    fn singleton_sets_of_a_powerfree_morphism_pass() {
        let tm = Morphism::thue_morse();
        let c = BrinkhuisCandidate::from_images(Alphabet::BINARY, tm.images(), 1).unwrap();
        for l in 1..=10 {
            assert_eq!(
                verify_brinkhuis(&c, FreenessSpec::CUBEFREE, l).unwrap(),
                BrinkhuisVerdict::VerifiedUpTo { max_len: l }
            );
        }
    }

    #[test]
    fn non_powerfree_member_is_refuted_at_length_one() {
        let c = BrinkhuisCandidate::new(
            Alphabet::BINARY,
            vec![words(&["0110", "0001"]), words(&["1001", "1011"])],
        )
        .unwrap();
        match verify_brinkhuis(&c, FreenessSpec::CUBEFREE, 5).unwrap() {
            BrinkhuisVerdict::Refuted {
                word,
                assignment,
                image,
            } => {
                assert_eq!(word.len(), 1);
                assert_eq!(assignment, vec![1]);
                assert_eq!(image.to_string(), "0001");
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn corrupted_morphism_is_refuted_quickly() {
        // Thue-Morse squared with one image letter flipped.
        let c = BrinkhuisCandidate::new(Alphabet::BINARY, vec![words(&["0111"]), words(&["1001"])])
            .unwrap();
        match verify_brinkhuis(&c, FreenessSpec::CUBEFREE, 10).unwrap() {
            BrinkhuisVerdict::Refuted { word, image, .. } => {
                assert!(word.len() <= 3);
                assert!(!image.is_powerfree(FreenessSpec::CUBEFREE));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn mixed_substitutions_are_checked() {
        // Each set alone is fine as a morphism, but mixing produces cubes.
        let c = BrinkhuisCandidate::new(
            Alphabet::BINARY,
            vec![words(&["01", "00"]), words(&["10", "11"])],
        )
        .unwrap();
        assert!(matches!(
            verify_brinkhuis(&c, FreenessSpec::CUBEFREE, 4).unwrap(),
            BrinkhuisVerdict::Refuted { .. }
        ));
    }

    #[test]
    fn malformed_candidates() {
        assert!(BrinkhuisCandidate::new(Alphabet::BINARY, vec![words(&["01"])]).is_err());
        assert!(
            BrinkhuisCandidate::new(Alphabet::BINARY, vec![words(&["01"]), words(&["1"])]).is_err()
        );
        assert!(BrinkhuisCandidate::new(
            Alphabet::BINARY,
            vec![words(&["01", "10"]), words(&["1"])]
        )
        .is_err());
    }
}
