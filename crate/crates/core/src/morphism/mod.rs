//! Morphisms between free monoids: application, iteration, substitution
//! matrices and letter frequencies, plus the exact and sufficient
//! powerfreeness tests and the search for uniform powerfree morphisms.

mod linalg;
mod matrix;
mod search;
mod testset;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

pub use linalg::nullspace;
pub use matrix::SubstitutionMatrix;
pub use search::{
    canonicalize_generating_set, orbit_of, search_bean_generating_sets,
    search_uniform_generating_sets, symmetry_group, Orbit, SearchOptions, SearchResult,
};
pub use testset::{
    t_min, ImageChecker, RwTestSet, TestSetKind, TestSetSummary, Visitor, T_MIN_LETTERS,
};
pub use verify::{
    bean_kpowerfree_sufficient, bean_squarefree_sufficient, cubefree_binary_test,
    find_image_failure, keranen_binary_uniform_test, keranen_length_bound, kpowerfree_uniform_test,
    squarefree_ternary_test, squarefree_uniform_test, verify_powerfree, BeanVerdict, BeanViolation,
    UniformMethod, Verification, VerificationMethod, VerifiedMorphism,
};

/// A morphism `A* -> B*` given by one image word per source letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    source: Alphabet,
    target: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(source: Alphabet, target: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != source.size() {
            return Err(Error::InvalidMorphism(format!(
                "{} images for a source alphabet of size {}",
                images.len(),
                source.size()
            )));
        }
        for w in &images {
            w.check_alphabet(target)?;
        }
        Ok(Morphism {
            source,
            target,
            images,
        })
    }

    /// One image per source letter `0, 1, ..`, parsed from the serialized
    /// word form.
    pub fn from_images<S: AsRef<str>>(target: Alphabet, images: &[S]) -> Result<Self> {
        let source = Alphabet::new(images.len())?;
        let images = images
            .iter()
            .map(|s| Word::parse(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(source, target, images)
    }

    /// Morphism into `{0, 1}*`.
    pub fn binary<S: AsRef<str>>(images: &[S]) -> Result<Self> {
        Morphism::from_images(Alphabet::BINARY, images)
    }

    /// `0 -> 01, 1 -> 10`.
    pub fn thue_morse() -> Self {
        Morphism::binary(&["01", "10"]).expect("valid images")
    }

    pub fn source(&self) -> Alphabet {
        self.source
    }

    pub fn target(&self) -> Alphabet {
        self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, letter: u8) -> &Word {
        &self.images[letter as usize]
    }

    /// Common image length `l` if the morphism is `l`-uniform.
    pub fn uniform_length(&self) -> Option<usize> {
        let l = self.images.first()?.len();
        self.images.iter().all(|w| w.len() == l).then_some(l)
    }

    pub fn require_uniform(&self) -> Result<usize> {
        self.uniform_length().ok_or(Error::NonUniform)
    }

    pub fn apply_letters(&self, w: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(w.len() * self.images.first().map_or(0, Word::len));
        for &a in w {
            out.extend_from_slice(self.images[a as usize].letters());
        }
        out
    }

    pub fn apply(&self, w: &Word) -> Word {
        Word::new(self.apply_letters(w.letters()))
    }

    /// Prefix of the fixed point generated from `seed`, of length at least
    /// `min_length`. Requires an endomorphism whose image of `seed` starts
    /// with `seed` and is longer than one letter.
    pub fn iterate(&self, seed: u8, min_length: usize) -> Result<Word> {
        if self.source != self.target {
            return Err(Error::InvalidMorphism(
                "iteration needs equal source and target alphabets".into(),
            ));
        }
        if !self.source.contains(seed) {
            return Err(Error::LetterOutOfRange {
                letter: seed as usize,
                size: self.source.size(),
            });
        }
        let img = self.image(seed);
        if img.letters().first() != Some(&seed) || img.len() < 2 {
            return Err(Error::NonProlongable(seed));
        }
        let mut w = vec![seed];
        while w.len() < min_length {
            w = self.apply_letters(&w);
        }
        Ok(Word::new(w))
    }

    pub fn substitution_matrix(&self) -> SubstitutionMatrix {
        SubstitutionMatrix::of(self)
    }

    /// Letter frequencies of the words generated by a uniform morphism: the
    /// normalized right eigenvector for eigenvalue `l` of the substitution
    /// matrix. When the source alphabet is `r` times larger than the target,
    /// consecutive runs of `r` source letters are grouped and the collapsed
    /// matrix is used.
    pub fn pf_frequencies(&self) -> Result<Vec<num_rational::BigRational>> {
        let l = self.require_uniform()?;
        let (s, t) = (self.source.size(), self.target.size());
        let matrix = if s == t {
            self.substitution_matrix()
        } else if s % t == 0 {
            self.substitution_matrix().collapse(s / t)?
        } else {
            return Err(Error::DimensionMismatch(format!(
                "source size {s} is not a multiple of target size {t}"
            )));
        };
        matrix.perron_frobenius(l as u64)
    }

    /// Swaps `0 <-> 1` in every image.
    pub fn complement(&self) -> Result<Morphism> {
        let images = self
            .images
            .iter()
            .map(|w| w.complement(self.target))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(self.source, self.target, images)
    }

    /// Reverses every image.
    pub fn reversed(&self) -> Morphism {
        Morphism {
            source: self.source,
            target: self.target,
            images: self.images.iter().map(Word::reverse).collect(),
        }
    }

    /// Restriction to the listed source letters, relabelled `0, 1, ..`.
    pub fn restrict(&self, letters: &[u8]) -> Result<Morphism> {
        let images = letters.iter().map(|&a| self.image(a).clone()).collect();
        Morphism::new(Alphabet::new(letters.len())?, self.target, images)
    }

    pub fn to_file(&self, k: Option<u32>) -> MorphismFile {
        MorphismFile {
            k,
            target: Some(self.target.size()),
            images: self
                .images
                .iter()
                .enumerate()
                .map(|(a, w)| (a.to_string(), w.to_string()))
                .collect(),
        }
    }
}

impl std::fmt::Display for Morphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(a, w)| format!("{a}->{w}"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// JSON form of a morphism: `{"k":3,"images":{"0":"01","1":"10"}}`.
///
/// Source letters are the keys `"0".."n-1"`. The target alphabet defaults to
/// the smallest one (at least binary) containing every image letter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorphismFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
    pub images: BTreeMap<String, String>,
}

impl MorphismFile {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn morphism(&self) -> Result<Morphism> {
        let n = self.images.len();
        let mut images = vec![None; n];
        for (key, value) in &self.images {
            let idx: usize = key
                .parse()
                .ok()
                .filter(|&i| i < n)
                .ok_or_else(|| Error::InvalidMorphism(format!("bad source letter {key:?}")))?;
            images[idx] = Some(Word::parse(value)?);
        }
        let images: Vec<Word> = images
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidMorphism("source letters must be 0..n-1".into()))?;
        let inferred = images
            .iter()
            .flat_map(|w| w.letters().iter().copied())
            .max()
            .map_or(2, |m| (m as usize + 1).max(2));
        let target = Alphabet::new(self.target.unwrap_or(inferred))?;
        Morphism::new(Alphabet::new(n)?, target, images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};

    const THUE_MORSE_64: &str = "0110100110010110100101100110100110010110011010010110100110010110";

    fn ratios(v: &[(i64, i64)]) -> Vec<BigRational> {
        v.iter()
            .map(|&(a, b)| BigRational::new(a.into(), b.into()))
            .collect()
    }

    #[test]
    fn thue_morse_application_and_iteration() {
        let tm = Morphism::thue_morse();
        assert_eq!(tm.apply(&Word::parse("0").unwrap()).to_string(), "01");
        assert_eq!(tm.iterate(0, 64).unwrap().to_string(), THUE_MORSE_64);
        assert!(tm.apply(&Word::empty()).is_empty());
        assert_eq!(tm.iterate(1, 4).unwrap().to_string(), "1001");
    }

    #[test]
    fn iteration_needs_prolongable_seed() {
        let m = Morphism::binary(&["10", "01"]).unwrap();
        assert_eq!(m.iterate(0, 10), Err(Error::NonProlongable(0)));
        let id = Morphism::binary(&["0", "1"]).unwrap();
        assert_eq!(id.iterate(0, 10), Err(Error::NonProlongable(0)));
    }

    #[test]
    fn apply_is_a_homomorphism() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let m = Morphism::binary(&["011", "1", "00101"]).unwrap();
        for _ in 0..1000 {
            let u: Vec<u8> = (0..rng.gen_range(0..12))
                .map(|_| rng.gen_range(0..3))
                .collect();
            let v: Vec<u8> = (0..rng.gen_range(0..12))
                .map(|_| rng.gen_range(0..3))
                .collect();
            let uv: Vec<u8> = u.iter().chain(&v).copied().collect();
            let mut expected = m.apply_letters(&u);
            expected.extend(m.apply_letters(&v));
            assert_eq!(m.apply_letters(&uv), expected);
        }
    }

    #[test]
    fn uniform_lengths() {
        let m = Morphism::binary(&["011", "101", "110"]).unwrap();
        assert_eq!(m.uniform_length(), Some(3));
        let w = Word::parse("0120").unwrap();
        assert_eq!(m.apply(&w).len(), 12);
        assert_eq!(
            Morphism::binary(&["0", "11"]).unwrap().uniform_length(),
            None
        );
    }

    #[test]
    fn frequencies_of_known_morphisms() {
        assert_eq!(
            Morphism::thue_morse().pf_frequencies().unwrap(),
            ratios(&[(1, 2), (1, 2)])
        );
        let m27 = Morphism::binary(&["011011010110110011011010110", "011011010110110011010110110"])
            .unwrap();
        assert_eq!(m27.pf_frequencies().unwrap(), ratios(&[(11, 27), (16, 27)]));
        let m13 = Morphism::binary(&[
            "0010010110011",
            "0010011010011",
            "0010110010011",
            "0100101001011",
        ])
        .unwrap();
        assert_eq!(m13.pf_frequencies().unwrap(), ratios(&[(7, 13), (6, 13)]));
    }

    #[test]
    fn identity_has_no_unique_frequency_vector() {
        let id = Morphism::binary(&["0", "1"]).unwrap();
        assert_eq!(id.pf_frequencies(), Err(Error::NonUniqueEigenvector(2)));
    }

    #[test]
    fn json_round_trip() {
        let file = MorphismFile::parse(r#"{"k":3,"images":{"0":"01","1":"10"}}"#).unwrap();
        assert_eq!(file.k, Some(3));
        let m = file.morphism().unwrap();
        assert_eq!(m, Morphism::thue_morse());
        let again = MorphismFile::parse(&m.to_file(Some(3)).to_json()).unwrap();
        assert_eq!(again.morphism().unwrap(), m);
        assert!(MorphismFile::parse(r#"{"images":{"0":"01","2":"10"}}"#)
            .unwrap()
            .morphism()
            .is_err());
    }

    #[test]
    fn symmetries_of_morphisms() {
        let tm = Morphism::thue_morse();
        assert_eq!(
            tm.complement().unwrap(),
            Morphism::binary(&["10", "01"]).unwrap()
        );
        assert_eq!(tm.reversed(), Morphism::binary(&["10", "01"]).unwrap());
    }
}
