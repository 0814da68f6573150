//! Length-`p` powerfree languages: transfer systems, exact rational
//! generating functions `B_p(x)`, dominant growth and pole maps.

mod modular;
mod poly;
mod roots;
mod transfer;

pub use modular::{exact_generating_function, rational_from_series};
pub use poly::{Polynomial, RationalFunction};
pub use roots::{all_poles, dominant_pole, DominantPole, PoleSet};
pub use transfer::{
    build_transfer_system, dominant_growth, series_coefficients, Growth, TransferSummary,
    TransferSystem, DEFAULT_STATE_BUDGET,
};

use crate::words::Alphabet;

/// Published `(d_num, d_den)` of `B_p` for binary cubefree words, `p = 0..=14`.
pub const BINARY_CUBEFREE_DEGREES: [(usize, usize); 15] = [
    (0, 1),
    (2, 2),
    (6, 5),
    (21, 13),
    (29, 17),
    (43, 25),
    (85, 57),
    (127, 99),
    (165, 127),
    (300, 254),
    (450, 395),
    (569, 513),
    (1098, 1031),
    (1750, 1656),
    (2627, 2540),
];

/// Default bound on `max(d_num, d_den)` when one is known.
pub fn known_degree_bound(k: u32, p: usize, alphabet: Alphabet) -> Option<usize> {
    (k == 3 && alphabet == Alphabet::BINARY)
        .then(|| BINARY_CUBEFREE_DEGREES.get(p).map(|&(n, d)| n.max(d)))
        .flatten()
}

/// Largest `p` for which the exact path runs by default.
pub const EXACT_DEFAULT_MAX_P: usize = 8;
