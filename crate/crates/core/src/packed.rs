//! Packed words for the enumeration hot paths.
//!
//! A word of length `n` over an alphabet with `b` bits per letter lives in the
//! low `n * b` bits of a `u128`, newest letter in the lowest bits. The suffix
//! of length `k q` has period `q` exactly when the word agrees with itself
//! shifted by `q` letters on the low `(k - 1) q` letters, which is one xor,
//! one shift and one mask.

use crate::error::{Error, Result};
use crate::words::{Alphabet, FreenessSpec};

#[derive(Debug, Clone)]
pub struct PowerChecker {
    spec: FreenessSpec,
    bits: u32,
    /// `(shift, mask)` for each period `q >= 1`, at index `q - 1`.
    probes: Vec<(u32, u128)>,
}

impl PowerChecker {
    pub const CAPACITY_BITS: usize = 128;

    /// Checker for words of length up to `max_len`.
    pub fn new(alphabet: Alphabet, spec: FreenessSpec, max_len: usize) -> Result<Self> {
        let bits = alphabet.bits_per_letter();
        if max_len * bits as usize > Self::CAPACITY_BITS {
            return Err(Error::ResourceLimit(format!(
                "packed words hold at most {} letters over an alphabet of size {}",
                Self::CAPACITY_BITS / bits as usize,
                alphabet.size()
            )));
        }
        let k = spec.k();
        let probes = (1..=spec.max_period(max_len))
            .map(|q| {
                let span = (k - 1) * q as u32 * bits;
                let mask = if span >= 128 {
                    u128::MAX
                } else {
                    (1u128 << span) - 1
                };
                (q as u32 * bits, mask)
            })
            .collect();
        Ok(PowerChecker { spec, bits, probes })
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn spec(&self) -> FreenessSpec {
        self.spec
    }

    /// Appends `letter` to the packed word `x`.
    #[inline]
    pub fn push(&self, x: u128, letter: u8) -> u128 {
        (x << self.bits) | letter as u128
    }

    /// Is there a forbidden power ending at the last letter of the packed
    /// word `x` of length `len`?
    #[inline]
    pub fn has_power_suffix(&self, x: u128, len: usize) -> bool {
        let max_q = self.spec.max_period(len);
        self.probes[..max_q]
            .iter()
            .any(|&(shift, mask)| (x ^ (x >> shift)) & mask == 0)
    }

    pub fn pack(&self, letters: &[u8]) -> u128 {
        letters.iter().fold(0u128, |x, &a| self.push(x, a))
    }

    pub fn unpack(&self, x: u128, len: usize) -> Vec<u8> {
        let letter_mask = (1u128 << self.bits) - 1;
        (0..len)
            .rev()
            .map(|i| ((x >> (i as u32 * self.bits)) & letter_mask) as u8)
            .collect()
    }
}

/// Incrementally growing word of unbounded length that reports whether each
/// appended letter completes a forbidden power.
///
/// Lane `q` of a `u128` stands for period `q`. Bit planes of the recent
/// letters give, in one pass, which periods the new letter continues; a
/// bit-sliced counter per lane holds the current run of agreeing positions,
/// saturated at `(k - 1) q`. Periods beyond the lanes compare letters.
#[derive(Debug, Clone)]
pub struct SuffixTracker {
    spec: FreenessSpec,
    bits: usize,
    width: usize,
    lanes: usize,
    /// Bit-sliced `(k - 1) q` per lane.
    target: Vec<u128>,
    letters: Vec<u8>,
    /// Per letter: `bits` planes, `width` counter slices, then the lanes
    /// whose counter has reached its target. Bit `d` of plane `j` is bit `j`
    /// of the letter `d` places before the last.
    states: Vec<u128>,
}

const MAX_WIDTH: usize = 16;

impl SuffixTracker {
    pub fn new(alphabet: Alphabet, spec: FreenessSpec) -> Self {
        let bits = alphabet.bits_per_letter() as usize;
        let k1 = spec.k() as usize - 1;
        let lanes = 127.min(((1usize << MAX_WIDTH) - 1) / k1.max(1));
        let width = (usize::BITS - (k1 * lanes).leading_zeros()) as usize;
        let mut target = vec![0u128; width];
        for q in 1..=lanes {
            let t = k1 * q;
            for (i, plane) in target.iter_mut().enumerate() {
                if (t >> i) & 1 == 1 {
                    *plane |= 1 << q;
                }
            }
        }
        SuffixTracker {
            spec,
            bits,
            width,
            lanes,
            target,
            letters: Vec::new(),
            states: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    fn stride(&self) -> usize {
        self.bits + self.width + 1
    }

    /// Appends `letter`; true if the new word ends in a forbidden power.
    #[inline]
    pub fn push(&mut self, letter: u8) -> bool {
        let stride = self.stride();
        let len = self.letters.len() + 1;
        self.letters.push(letter);
        let start = self.states.len();
        if start == 0 {
            self.states.resize(stride, 0);
        } else {
            self.states.extend_from_within(start - stride..start);
        }
        let (prev, next) = if start == 0 {
            (None, &mut self.states[..])
        } else {
            let (head, next) = self.states.split_at_mut(start);
            (Some(&head[start - stride..]), next)
        };
        let mut agree = lane_mask(len - 1);
        for (j, plane) in next[..self.bits].iter_mut().enumerate() {
            let shifted = *plane << 1;
            let bit = (letter >> j) & 1 == 1;
            agree &= if bit { shifted } else { !shifted };
            *plane = shifted | bit as u128;
        }
        let prev_full = prev.map_or(0, |p| p[stride - 1]);
        let grow = agree & !prev_full;
        let keep = agree & prev_full;
        let mut carry = u128::MAX;
        let mut full = u128::MAX;
        for (c, t) in next[self.bits..stride - 1].iter_mut().zip(&self.target) {
            let v = ((*c ^ carry) & grow) | (*c & keep);
            carry &= *c;
            *c = v;
            full &= !(v ^ t);
        }
        let full = full & lane_mask(self.lanes) & agree;
        next[stride - 1] = full;
        let max_q = self.spec.max_period(len);
        if full & lane_mask(max_q) != 0 {
            return true;
        }
        let k1 = self.spec.k() as usize - 1;
        let w = &self.letters;
        (self.lanes + 1..=max_q).any(|q| (len - k1 * q..len).all(|i| w[i] == w[i - q]))
    }

    pub fn truncate(&mut self, len: usize) {
        self.letters.truncate(len);
        let stride = self.stride();
        self.states.truncate(len * stride);
    }

    pub fn clear(&mut self) {
        self.truncate(0);
    }
}

/// Lanes `1..=q`, capped at 127.
#[inline]
fn lane_mask(q: usize) -> u128 {
    if q >= 127 {
        u128::MAX << 1
    } else {
        ((1u128 << (q + 1)) - 1) & !1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{all_words, power_suffix};

    #[test]
    fn packed_check_matches_slice_check() {
        for (alphabet, spec) in [
            (Alphabet::BINARY, FreenessSpec::CUBEFREE),
            (
                Alphabet::BINARY,
                FreenessSpec::with_period_cap(3, 2).unwrap(),
            ),
            (Alphabet::TERNARY, FreenessSpec::SQUAREFREE),
        ] {
            let max_len = if alphabet.size() == 2 { 13 } else { 8 };
            let checker = PowerChecker::new(alphabet, spec, max_len).unwrap();
            for len in 1..=max_len {
                for word in all_words(alphabet, len) {
                    let x = checker.pack(&word);
                    assert_eq!(checker.unpack(x, len), word);
                    assert_eq!(
                        checker.has_power_suffix(x, len),
                        power_suffix(&word, spec).is_some(),
                        "{word:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn tracker_matches_slice_check() {
        for (alphabet, spec, len) in [
            (Alphabet::BINARY, FreenessSpec::CUBEFREE, 12),
            (Alphabet::TERNARY, FreenessSpec::SQUAREFREE, 8),
            (
                Alphabet::BINARY,
                FreenessSpec::with_period_cap(3, 2).unwrap(),
                10,
            ),
        ] {
            for word in all_words(alphabet, len) {
                let mut t = SuffixTracker::new(alphabet, spec);
                for (i, &a) in word.iter().enumerate() {
                    assert_eq!(t.push(a), power_suffix(&word[..=i], spec).is_some());
                }
            }
        }
    }

    #[test]
    fn tracker_matches_slice_check_on_random_words() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (size, k) in [(2, 3), (2, 4), (3, 2), (5, 3), (2, 40)] {
            let alphabet = Alphabet::new(size).unwrap();
            let spec = FreenessSpec::new(k).unwrap();
            for _ in 0..200 {
                // Short periodic stretches make powers common.
                let mut word: Vec<u8> = Vec::new();
                while word.len() < 300 {
                    let q = rng.gen_range(1..6);
                    let block: Vec<u8> = (0..q).map(|_| rng.gen_range(0..size as u8)).collect();
                    let reps = rng.gen_range(1..2 * k as usize);
                    word.extend(block.iter().cycle().take(q * reps));
                }
                let mut t = SuffixTracker::new(alphabet, spec);
                for (i, &a) in word.iter().enumerate() {
                    assert_eq!(
                        t.push(a),
                        power_suffix(&word[..=i], spec).is_some(),
                        "{size} {k} {i}"
                    );
                }
                t.truncate(100);
                for (i, &a) in word[100..].iter().enumerate() {
                    assert_eq!(t.push(a), power_suffix(&word[..=100 + i], spec).is_some());
                }
            }
        }
    }

    #[test]
    fn tracker_handles_periods_beyond_the_lanes() {
        let base: Vec<u8> = (0..130u32)
            .map(|i| ((i * 7 + i / 3 + i / 11) % 2) as u8)
            .collect();
        let spec = FreenessSpec::CUBEFREE;
        let word: Vec<u8> = base.iter().cycle().take(390).copied().collect();
        let mut t = SuffixTracker::new(Alphabet::BINARY, spec);
        let flags: Vec<bool> = word.iter().map(|&a| t.push(a)).collect();
        for (i, &f) in flags.iter().enumerate() {
            assert_eq!(f, power_suffix(&word[..=i], spec).is_some(), "{i}");
        }
    }

    #[test]
    fn tracker_handles_long_periods() {
        // A cube of period 50 needs the letter-by-letter path.
        let base: Vec<u8> = (0..50u32).map(|i| ((i * 7 + i / 3) % 2) as u8).collect();
        let spec = FreenessSpec::CUBEFREE;
        let word: Vec<u8> = base.iter().cycle().take(150).copied().collect();
        let mut t = SuffixTracker::new(Alphabet::BINARY, spec);
        let flags: Vec<bool> = word.iter().map(|&a| t.push(a)).collect();
        for (i, &f) in flags.iter().enumerate() {
            assert_eq!(f, power_suffix(&word[..=i], spec).is_some(), "{i}");
        }
        assert!(flags[149]);
        t.truncate(10);
        assert_eq!(t.letters(), &word[..10]);
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(PowerChecker::new(Alphabet::BINARY, FreenessSpec::CUBEFREE, 128).is_ok());
        assert!(PowerChecker::new(Alphabet::BINARY, FreenessSpec::CUBEFREE, 129).is_err());
        assert!(PowerChecker::new(Alphabet::TERNARY, FreenessSpec::SQUAREFREE, 65).is_err());
    }
}
