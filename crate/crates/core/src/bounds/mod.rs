//! Entropy and letter-frequency bounds: morphism and Brinkhuis lower
//! bounds, count-based upper bounds, and a registry of published values.

mod brinkhuis;
mod reference;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::enumerator::{letter_count_range, EnumerationConfig};
use crate::error::{Error, Result};
use crate::morphism::{VerificationMethod, VerifiedMorphism};
use crate::words::{Alphabet, FreenessSpec};

pub use brinkhuis::{verify_brinkhuis, BrinkhuisCandidate, BrinkhuisVerdict};
pub use reference::{reference_constants, ReferenceConstant, ReferenceConstants, ReferenceKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Upper,
    Lower,
}

/// Where a bound came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Provenance {
    /// `ln c(n) / n` from an exact count.
    Count { n: usize, count: String },
    /// `ln r / (l - 1)` from a verified uniform morphism.
    Morphism {
        k: u32,
        r: usize,
        length: usize,
        source_size: usize,
        target_size: usize,
        method: VerificationMethod,
        /// Letter frequencies of the generated words, when prescribed.
        #[serde(skip_serializing_if = "Option::is_none")]
        frequencies: Option<Vec<String>>,
    },
    /// `ln r / (l - 1)` from a Brinkhuis set with parameters `(r, l)`.
    Brinkhuis { r: usize, length: usize },
    /// A published value.
    Reference { key: String, citation: String },
}

/// A bound on an entropy, in nats.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyBound {
    pub value: f64,
    pub kind: BoundKind,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl EntropyBound {
    pub fn new(value: f64, kind: BoundKind, provenance: Provenance) -> Self {
        EntropyBound {
            value,
            kind,
            provenance,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn citation(&self) -> Option<&str> {
        match &self.provenance {
            Provenance::Reference { citation, .. } => Some(citation),
            _ => None,
        }
    }

    /// `{kind, value, nats, provenance, citation}`; `nats` marks the unit.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "kind": self.kind,
            "value": self.value,
            "nats": true,
            "provenance": self.provenance,
            "citation": self.citation(),
        });
        if let Some(note) = &self.note {
            v["note"] = note.clone().into();
        }
        v
    }
}

/// `ln r / (l - 1)`.
fn log_ratio(r: usize, length: usize) -> Result<f64> {
    if r == 0 || length < 2 {
        return Err(Error::DegenerateInput(format!(
            "need r >= 1 and l >= 2, got r = {r}, l = {length}"
        )));
    }
    Ok((r as f64).ln() / (length - 1) as f64)
}

fn morphism_provenance(
    receipt: &VerifiedMorphism,
    r: usize,
    frequencies: Option<&[BigRational]>,
) -> Result<(usize, Provenance)> {
    let m = receipt.morphism();
    let length = m.require_uniform()?;
    let (source, target) = (m.source().size(), m.target().size());
    if r == 0 || source != r * target {
        return Err(Error::DimensionMismatch(format!(
            "source size {source} is not {r} times the target size {target}"
        )));
    }
    Ok((
        length,
        Provenance::Morphism {
            k: receipt.k(),
            r,
            length,
            source_size: source,
            target_size: target,
            method: receipt.method(),
            frequencies: frequencies.map(|f| f.iter().map(ToString::to_string).collect()),
        },
    ))
}

/// `h(F(k)(B)) >= ln r / (l - 1)` for a verified `l`-uniform `k`-powerfree
/// morphism from `r |B|` letters to `B`.
pub fn lower_bound_from_morphism(receipt: &VerifiedMorphism, r: usize) -> Result<EntropyBound> {
    let (length, provenance) = morphism_provenance(receipt, r, None)?;
    Ok(EntropyBound::new(
        log_ratio(r, length)?,
        BoundKind::Lower,
        provenance,
    ))
}

/// The same bound for words with prescribed letter frequencies. Source
/// letters `g r .. g r + r - 1` form group `g`; all images in a group must
/// have equal letter counts. Returns the frequencies, given by the collapsed
/// substitution matrix.
pub fn lower_bound_with_frequencies(
    receipt: &VerifiedMorphism,
    r: usize,
) -> Result<(Vec<BigRational>, EntropyBound)> {
    let m = receipt.morphism();
    let length = m.require_uniform()?;
    morphism_provenance(receipt, r, None)?;
    let collapsed = m.substitution_matrix().collapse(r)?;
    let frequencies = collapsed.perron_frobenius(length as u64)?;
    let (_, provenance) = morphism_provenance(receipt, r, Some(&frequencies))?;
    let bound = EntropyBound::new(log_ratio(r, length)?, BoundKind::Lower, provenance);
    Ok((frequencies, bound))
}

/// `ln r / (l - 1)` for a `(k, l, r)` Brinkhuis set.
pub fn brinkhuis_bound(r: usize, length: usize) -> Result<EntropyBound> {
    Ok(EntropyBound::new(
        log_ratio(r, length)?,
        BoundKind::Lower,
        Provenance::Brinkhuis { r, length },
    ))
}

/// Bounds on the frequency of one letter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyBound {
    pub letter: u8,
    #[serde(serialize_with = "ratio_string")]
    pub lower: BigRational,
    #[serde(serialize_with = "ratio_string")]
    pub upper: BigRational,
    pub provenance: String,
}

fn ratio_string<S: serde::Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// Frequency bounds from exact letter-count ranges and verified morphisms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyReport {
    /// `min / n <= f <= max / n` for the requested letter.
    pub range: FrequencyBound,
    /// `f_min <= min_i f_i` for each morphism's frequency vector.
    #[serde(serialize_with = "ratio_option")]
    pub f_min_upper: Option<BigRational>,
    /// All frequency vectors, one per morphism.
    pub morphism_frequencies: Vec<Vec<String>>,
}

fn ratio_option<S: serde::Serializer>(
    r: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

fn ratio(a: usize, b: usize) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Frequency bounds from the letter-count range `(min, max)` at length `n`
/// together with the letter frequencies of verified morphisms.
pub fn frequency_bounds_from_range(
    letter: u8,
    n: usize,
    range: (usize, usize),
    source_label: &str,
    morphisms: &[VerifiedMorphism],
) -> Result<FrequencyReport> {
    if n == 0 {
        return Err(Error::DegenerateInput(
            "frequency bounds need n >= 1".into(),
        ));
    }
    let mut f_min_upper: Option<BigRational> = None;
    let mut morphism_frequencies = Vec::new();
    for receipt in morphisms {
        let f = receipt.morphism().pf_frequencies()?;
        let min = f.iter().min().cloned().expect("nonempty alphabet");
        f_min_upper = Some(match f_min_upper {
            Some(cur) if cur <= min => cur,
            _ => min,
        });
        morphism_frequencies.push(f.iter().map(ToString::to_string).collect());
    }
    Ok(FrequencyReport {
        range: FrequencyBound {
            letter,
            lower: ratio(range.0, n),
            upper: ratio(range.1, n),
            provenance: format!("letter-count range at n = {n} ({source_label})"),
        },
        f_min_upper,
        morphism_frequencies,
    })
}

/// Enumerates the letter-count range at length `n`, then combines it with
/// the morphisms' frequencies.
pub fn frequency_bounds_from_enumeration_and_morphisms(
    spec: FreenessSpec,
    alphabet: Alphabet,
    n: usize,
    letter: u8,
    morphisms: &[VerifiedMorphism],
    config: &EnumerationConfig,
) -> Result<FrequencyReport> {
    let range = letter_count_range(spec, alphabet, n, letter, config)?;
    frequency_bounds_from_range(letter, n, range, "enumeration", morphisms)
}
