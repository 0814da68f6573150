//! Decision procedures and sufficient criteria for powerfree morphisms.

use serde::Serialize;

use super::testset::{t_min, walk_powerfree, ImageChecker, RwTestSet};
use super::Morphism;
use crate::error::{Error, Result};
use crate::words::{is_powerfree, occurrences, FreenessSpec, Word};

fn spec_for(k: u32) -> Result<FreenessSpec> {
    FreenessSpec::new(k)
}

/// First `k`-powerfree source word with length in `min_len..=max_len` whose
/// image is not `k`-powerfree, in depth-first lexicographic order.
pub fn find_image_failure(
    m: &Morphism,
    k: u32,
    min_len: usize,
    max_len: usize,
) -> Result<Option<Word>> {
    let spec = spec_for(k)?;
    let mut checker = ImageChecker::new(m, spec);
    let _ = walk_powerfree(m.source(), spec, min_len, max_len, &mut checker);
    Ok(checker.into_witness())
}

/// Like [`find_image_failure`], scanning lengths from `max_len` down to 1.
fn find_image_failure_descending(m: &Morphism, k: u32, max_len: usize) -> Result<Option<Word>> {
    for len in (1..=max_len).rev() {
        if let Some(w) = find_image_failure(m, k, len, len)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Which condition of a sufficient criterion failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum BeanViolation {
    /// Condition (i): the image of a short powerfree word has a power.
    #[serde(rename = "i")]
    ImageNotPowerfree { word: Word, image: Word },
    /// Condition (ii): `rho(a)` is a factor of `rho(b)` for `a != b`.
    #[serde(rename = "ii")]
    ImageIsFactor { a: u8, b: u8 },
    /// Condition (iii): `rho(a)` occurs inside `rho(b) rho(c)` at `offset`
    /// other than as `rho(b)` or `rho(c)` themselves.
    #[serde(rename = "iii")]
    InnerOccurrence { a: u8, b: u8, c: u8, offset: usize },
}

impl BeanViolation {
    pub fn condition(&self) -> &'static str {
        match self {
            BeanViolation::ImageNotPowerfree { .. } => "i",
            BeanViolation::ImageIsFactor { .. } => "ii",
            BeanViolation::InnerOccurrence { .. } => "iii",
        }
    }
}

impl std::fmt::Display for BeanViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BeanViolation::ImageNotPowerfree { word, image } => {
                write!(f, "condition (i): image of {word} is {image}")
            }
            BeanViolation::ImageIsFactor { a, b } => {
                write!(
                    f,
                    "condition (ii): image of {a} is a factor of the image of {b}"
                )
            }
            BeanViolation::InnerOccurrence { a, b, c, offset } => write!(
                f,
                "condition (iii): image of {a} occurs at offset {offset} in the image of {b}{c}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum BeanVerdict {
    Sufficient,
    Inconclusive(BeanViolation),
}

impl BeanVerdict {
    pub fn is_sufficient(&self) -> bool {
        matches!(self, BeanVerdict::Sufficient)
    }
}

fn condition_i(m: &Morphism, k: u32, max_len: usize) -> Result<Option<BeanViolation>> {
    Ok(
        find_image_failure_descending(m, k, max_len)?.map(|word| {
            BeanViolation::ImageNotPowerfree {
                image: m.apply(&word),
                word,
            }
        }),
    )
}

fn condition_ii(m: &Morphism) -> Option<BeanViolation> {
    let images = m.images();
    for (a, u) in images.iter().enumerate() {
        for (b, v) in images.iter().enumerate() {
            if a != b && u.is_factor_of(v) {
                return Some(BeanViolation::ImageIsFactor {
                    a: a as u8,
                    b: b as u8,
                });
            }
        }
    }
    None
}

fn condition_iii(m: &Morphism) -> Option<BeanViolation> {
    let n = m.source().size() as u8;
    for b in 0..n {
        for c in 0..n {
            let bc = m.apply_letters(&[b, c]);
            for a in 0..n {
                let ra = m.image(a).letters();
                for x in occurrences(ra, &bc) {
                    let y = bc.len() - x - ra.len();
                    if !((x == 0 && a == b) || (y == 0 && a == c)) {
                        return Some(BeanViolation::InnerOccurrence { a, b, c, offset: x });
                    }
                }
            }
        }
    }
    None
}

/// Sufficient criterion for squarefree morphisms: images of squarefree words
/// of length at most 3 are squarefree and no image is a factor of another.
pub fn bean_squarefree_sufficient(m: &Morphism) -> BeanVerdict {
    let violation = condition_i(m, 2, 3)
        .expect("k = 2 is valid")
        .or_else(|| condition_ii(m));
    violation.map_or(BeanVerdict::Sufficient, BeanVerdict::Inconclusive)
}

/// Sufficient criterion for `k`-powerfree morphisms, `k >= 3`.
pub fn bean_kpowerfree_sufficient(m: &Morphism, k: u32) -> Result<BeanVerdict> {
    if k < 3 {
        return Err(Error::InvalidSpec(format!(
            "criterion needs k >= 3, got {k}"
        )));
    }
    let violation = match condition_i(m, k, k as usize + 1)? {
        Some(v) => Some(v),
        None => condition_ii(m).or_else(|| condition_iii(m)),
    };
    Ok(violation.map_or(BeanVerdict::Sufficient, BeanVerdict::Inconclusive))
}

fn squarefree_uniform_witness(m: &Morphism) -> Result<Option<Word>> {
    m.require_uniform()?;
    find_image_failure_descending(m, 2, 3)
}

/// Exact test for uniform morphisms: squarefree iff the images of all
/// squarefree words of length at most 3 are squarefree.
pub fn squarefree_uniform_test(m: &Morphism) -> Result<bool> {
    Ok(squarefree_uniform_witness(m)?.is_none())
}

fn squarefree_ternary_witness(m: &Morphism) -> Result<Option<Word>> {
    if m.source().size() != 3 {
        return Err(Error::UnsupportedAlphabet {
            expected: "a ternary source alphabet",
            actual: m.source().size(),
        });
    }
    find_image_failure(m, 2, 1, 5)
}

/// Exact test for morphisms on three letters: squarefree iff the images of
/// all squarefree words of length at most 5 are squarefree.
pub fn squarefree_ternary_test(m: &Morphism) -> Result<bool> {
    Ok(squarefree_ternary_witness(m)?.is_none())
}

fn cubefree_binary_witness(m: &Morphism) -> Result<Option<Word>> {
    if m.source().size() != 2 {
        return Err(Error::UnsupportedAlphabet {
            expected: "a binary source alphabet",
            actual: m.source().size(),
        });
    }
    if m.target().size() < 2 {
        return Err(Error::UnsupportedAlphabet {
            expected: "a target alphabet with at least two letters",
            actual: m.target().size(),
        });
    }
    Ok(t_min()
        .into_iter()
        .find(|w| !is_powerfree(&m.apply_letters(w.letters()), FreenessSpec::CUBEFREE)))
}

/// Exact test for morphisms on two letters: cubefree iff the twelve words of
/// the minimal test-set have cubefree images.
pub fn cubefree_binary_test(m: &Morphism) -> Result<bool> {
    Ok(cubefree_binary_witness(m)?.is_none())
}

/// Exact method for uniform morphisms and `k >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UniformMethod {
    /// Stream the test-set `T(k)` of the source alphabet.
    TestSet,
    /// Check every `k`-powerfree source word up to the given length, or up
    /// to `k (Card + 1) + 1` when absent.
    LengthBound(Option<usize>),
}

fn kpowerfree_uniform_witness(m: &Morphism, k: u32, method: UniformMethod) -> Result<Option<Word>> {
    m.require_uniform()?;
    let spec = spec_for(k)?;
    if k < 3 {
        return Err(Error::InvalidSpec(format!(
            "uniform test needs k >= 3, got {k}"
        )));
    }
    let card = m.source().size();
    let bound = k as usize * (card + 1) + 1;
    match method {
        // With one letter the powerfree source words are a^j, j < k.
        _ if card == 1 => find_image_failure(m, k, 1, k as usize - 1),
        UniformMethod::LengthBound(max_len) => {
            find_image_failure(m, k, 1, max_len.unwrap_or(bound))
        }
        UniformMethod::TestSet => {
            let ts = RwTestSet::new(k, m.source())?;
            let runs = ts.par_walk(|| ImageChecker::new(m, spec));
            Ok(runs
                .into_iter()
                .find(|(_, flow)| flow.is_break())
                .and_then(|(checker, _)| checker.into_witness()))
        }
    }
}

/// Exact test for uniform morphisms, `k >= 3`.
pub fn kpowerfree_uniform_test(m: &Morphism, k: u32, method: UniformMethod) -> Result<bool> {
    Ok(kpowerfree_uniform_witness(m, k, method)?.is_none())
}

/// `4` for `3 <= k <= 6`, `floor(2 (k + 1) / 3)` for `k >= 7`.
pub fn keranen_length_bound(k: u32) -> usize {
    if k <= 6 {
        4
    } else {
        (2 * (k as usize + 1)) / 3
    }
}

/// Exact test for uniform morphisms on two letters whose images `rho(0)`,
/// `rho(1)`, `rho(01)` are distinct and primitive.
pub fn keranen_binary_uniform_test(m: &Morphism, k: u32) -> Result<bool> {
    if k < 3 {
        return Err(Error::InvalidSpec(format!("test needs k >= 3, got {k}")));
    }
    if m.source().size() != 2 {
        return Err(Error::UnsupportedAlphabet {
            expected: "a binary source alphabet",
            actual: m.source().size(),
        });
    }
    m.require_uniform()?;
    let (a, b) = (m.image(0), m.image(1));
    if a == b {
        return Err(Error::Precondition("images of 0 and 1 are equal".into()));
    }
    for (name, w) in [
        ("rho(0)", a.clone()),
        ("rho(1)", b.clone()),
        ("rho(01)", a.concat(b)),
    ] {
        if !w.is_primitive() {
            return Err(Error::Precondition(format!(
                "{name} = {w} is not primitive"
            )));
        }
    }
    Ok(find_image_failure(m, k, 1, keranen_length_bound(k))?.is_none())
}

/// The procedure that decided a verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerificationMethod {
    SquarefreeUniform,
    SquarefreeTernary,
    Tmin,
    TestSet,
    LengthBound { max_len: usize },
    BeanSufficient,
}

/// Receipt that a morphism was shown `k`-powerfree. Only this module
/// creates receipts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifiedMorphism {
    morphism: Morphism,
    k: u32,
    method: VerificationMethod,
}

impl VerifiedMorphism {
    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn method(&self) -> VerificationMethod {
        self.method
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Verified(VerifiedMorphism),
    Refuted {
        witness: Word,
        image: Word,
        method: VerificationMethod,
    },
}

impl Verification {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verification::Verified(_))
    }

    pub fn receipt(self) -> Option<VerifiedMorphism> {
        match self {
            Verification::Verified(v) => Some(v),
            Verification::Refuted { .. } => None,
        }
    }

    pub fn method(&self) -> VerificationMethod {
        match self {
            Verification::Verified(v) => v.method,
            Verification::Refuted { method, .. } => *method,
        }
    }
}

/// Decides whether `m` is `k`-powerfree with the cheapest exact test that
/// applies, falling back to the sufficient criterion. Fails when only the
/// sufficient criterion applies and it is inconclusive.
pub fn verify_powerfree(m: &Morphism, k: u32) -> Result<Verification> {
    spec_for(k)?;
    let card = m.source().size();
    let uniform = m.uniform_length().is_some();
    let (method, witness) = if k == 2 && uniform {
        (
            VerificationMethod::SquarefreeUniform,
            squarefree_uniform_witness(m)?,
        )
    } else if k == 2 && card == 3 {
        (
            VerificationMethod::SquarefreeTernary,
            squarefree_ternary_witness(m)?,
        )
    } else if k == 3 && card == 2 && m.target().size() >= 2 {
        (VerificationMethod::Tmin, cubefree_binary_witness(m)?)
    } else if k >= 3 && uniform && card >= 2 {
        (
            VerificationMethod::TestSet,
            kpowerfree_uniform_witness(m, k, UniformMethod::TestSet)?,
        )
    } else if k >= 3 && uniform {
        let max_len = k as usize - 1;
        (
            VerificationMethod::LengthBound { max_len },
            kpowerfree_uniform_witness(m, k, UniformMethod::LengthBound(Some(max_len)))?,
        )
    } else {
        let verdict = if k == 2 {
            bean_squarefree_sufficient(m)
        } else {
            bean_kpowerfree_sufficient(m, k)?
        };
        return match verdict {
            BeanVerdict::Sufficient => Ok(Verification::Verified(VerifiedMorphism {
                morphism: m.clone(),
                k,
                method: VerificationMethod::BeanSufficient,
            })),
            BeanVerdict::Inconclusive(v) => Err(Error::Precondition(format!(
                "no exact test applies and the sufficient criterion is inconclusive: {v}"
            ))),
        };
    };
    Ok(match witness {
        None => Verification::Verified(VerifiedMorphism {
            morphism: m.clone(),
            k,
            method,
        }),
        Some(witness) => Verification::Refuted {
            image: m.apply(&witness),
            witness,
            method,
        },
    })
}

impl Serialize for VerifiedMorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("VerifiedMorphism", 3)?;
        st.serialize_field("images", &self.morphism.images())?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("method", &self.method)?;
        st.end()
    }
}
