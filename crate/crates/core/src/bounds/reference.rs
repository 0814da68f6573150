//! Published bounds and estimates, bundled as a static data file.

use serde::{Deserialize, Serialize};

use super::{BoundKind, EntropyBound, Provenance};

const REFERENCE_JSON: &str = include_str!("../../data/reference_constants.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    Upper,
    Lower,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceConstant {
    pub key: String,
    /// `binary-cubefree` or `ternary-squarefree`.
    pub language: String,
    /// `entropy`, `growth`, `f0`, `f_min` or `f_max`.
    pub quantity: String,
    pub kind: ReferenceKind,
    pub value: f64,
    /// Exact rational form, when the value is a fraction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub citation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ReferenceConstant {
    /// Entropy entries as bounds; `None` for other quantities.
    pub fn entropy_bound(&self) -> Option<EntropyBound> {
        if self.quantity != "entropy" {
            return None;
        }
        let kind = match self.kind {
            ReferenceKind::Upper => BoundKind::Upper,
            ReferenceKind::Lower => BoundKind::Lower,
            ReferenceKind::Exact => return None,
        };
        let bound = EntropyBound::new(
            self.value,
            kind,
            Provenance::Reference {
                key: self.key.clone(),
                citation: self.citation.clone(),
            },
        );
        Some(match &self.note {
            Some(n) => bound.with_note(n.clone()),
            None => bound,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceConstants {
    entries: Vec<ReferenceConstant>,
}

impl ReferenceConstants {
    pub fn entries(&self) -> &[ReferenceConstant] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&ReferenceConstant> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn for_language<'a>(
        &'a self,
        language: &'a str,
    ) -> impl Iterator<Item = &'a ReferenceConstant> {
        self.entries.iter().filter(move |e| e.language == language)
    }

    /// Entropy bounds for `language` of the given kind.
    pub fn entropy_bounds(&self, language: &str, kind: BoundKind) -> Vec<EntropyBound> {
        self.for_language(language)
            .filter_map(ReferenceConstant::entropy_bound)
            .filter(|b| b.kind == kind)
            .collect()
    }

    /// Smallest published upper bound on the entropy of `language`.
    pub fn best_entropy_upper(&self, language: &str) -> Option<f64> {
        self.entropy_bounds(language, BoundKind::Upper)
            .iter()
            .map(|b| b.value)
            .reduce(f64::min)
    }
}

pub fn reference_constants() -> ReferenceConstants {
    let entries = serde_json::from_str(REFERENCE_JSON).expect("bundled registry is valid JSON");
    ReferenceConstants { entries }
}
