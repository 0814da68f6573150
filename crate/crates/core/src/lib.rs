//! Powerfree words over small alphabets: enumeration and letter statistics,
//! generating functions of length-p powerfree languages, powerfree
//! morphisms with their test-sets, and entropy and frequency bounds.
//!
//! ```
//! use powerfree_core::{count_powerfree, Alphabet, EnumerationConfig, FreenessSpec};
//!
//! let table = count_powerfree(
//!     FreenessSpec::CUBEFREE,
//!     Alphabet::BINARY,
//!     10,
//!     &EnumerationConfig::with_workers(1),
//! )
//! .unwrap();
//! assert_eq!(table.get(10).unwrap(), &118u32.into());
//! ```

pub mod bounds;
pub mod enumerator;
pub mod error;
pub mod genfun;
pub mod morphism;
pub mod packed;
pub mod words;

pub use bounds::{
    brinkhuis_bound, lower_bound_from_morphism, lower_bound_with_frequencies, reference_constants,
    verify_brinkhuis, BoundKind, BrinkhuisCandidate, BrinkhuisVerdict, EntropyBound,
    FrequencyBound, Provenance,
};
pub use enumerator::{
    count_joint, count_powerfree, distribution_stats, entropy_upper_from_count, fit_asymptotics,
    letter_count_range, variance_slope, CountTable, EnumerationConfig, FrequencyStats,
    JointCountTable, Source,
};
pub use error::{Error, Result};
pub use genfun::{
    all_poles, build_transfer_system, dominant_growth, dominant_pole, exact_generating_function,
    series_coefficients, PoleSet, Polynomial, RationalFunction, TransferSystem,
};
pub use morphism::{
    verify_powerfree, Morphism, MorphismFile, RwTestSet, SubstitutionMatrix, Verification,
    VerifiedMorphism,
};
pub use words::{is_powerfree, Alphabet, FreenessSpec, Word};

/// Formats a real with 12 significant digits, `.` as decimal separator and
/// no trailing zeros. Very large or small magnitudes use exponent notation.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&exp) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
