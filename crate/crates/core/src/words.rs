//! Alphabets, words and power detection.
//!
//! Letters are small integers `0..size`. A [`Word`] owns its letters as bytes;
//! the hot enumeration loops use the packed form in [`crate::packed`] instead.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite alphabet `{0, 1, .., size - 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Alphabet {
    size: u8,
}

impl Alphabet {
    pub const UNARY: Alphabet = Alphabet { size: 1 };
    pub const BINARY: Alphabet = Alphabet { size: 2 };
    pub const TERNARY: Alphabet = Alphabet { size: 3 };

    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > u8::MAX as usize {
            return Err(Error::InvalidAlphabet(format!(
                "size must lie in 1..=255, got {size}"
            )));
        }
        Ok(Alphabet { size: size as u8 })
    }

    pub fn size(self) -> usize {
        self.size as usize
    }

    pub fn letters(self) -> impl Iterator<Item = u8> + Clone {
        0..self.size
    }

    pub fn contains(self, letter: u8) -> bool {
        letter < self.size
    }

    /// Bits needed to store one letter in packed form.
    pub fn bits_per_letter(self) -> u32 {
        match self.size {
            1 | 2 => 1,
            s => u8::BITS - (s - 1).leading_zeros(),
        }
    }

    pub fn require_binary(self) -> Result<()> {
        if self.size == 2 {
            Ok(())
        } else {
            Err(Error::UnsupportedAlphabet {
                expected: "a binary alphabet",
                actual: self.size(),
            })
        }
    }
}

/// A finite word over some alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    /// Wraps raw letters without alphabet validation.
    pub fn new(letters: Vec<u8>) -> Self {
        Word { letters }
    }

    /// Builds a word, checking every letter against `alphabet`.
    pub fn over(alphabet: Alphabet, letters: Vec<u8>) -> Result<Self> {
        let word = Word { letters };
        word.check_alphabet(alphabet)?;
        Ok(word)
    }

    pub fn check_alphabet(&self, alphabet: Alphabet) -> Result<()> {
        match self.letters.iter().find(|&&a| !alphabet.contains(a)) {
            Some(&a) => Err(Error::LetterOutOfRange {
                letter: a as usize,
                size: alphabet.size(),
            }),
            None => Ok(()),
        }
    }

    /// Parses the serialized form: plain digits (`"0110"`), or comma-separated
    /// indices when letters exceed 9 (`"10,3,11"`). The empty string is `ε`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains(',') {
            let letters = s
                .split(',')
                .map(|t| t.trim().parse::<u8>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::ParseWord(s.to_string()))?;
            return Ok(Word { letters });
        }
        let letters = s
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::ParseWord(s.to_string()))?;
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: u8) {
        self.letters.push(letter);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// `self` repeated `n` times.
    pub fn pow(&self, n: usize) -> Word {
        Word {
            letters: self.letters.repeat(n),
        }
    }

    pub fn count(&self, letter: u8) -> usize {
        self.letters.iter().filter(|&&a| a == letter).count()
    }

    pub fn is_factor_of(&self, other: &Word) -> bool {
        is_factor(&self.letters, &other.letters)
    }

    pub fn reverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    /// Swaps `0 <-> 1`. Only defined over a binary alphabet.
    pub fn complement(&self, alphabet: Alphabet) -> Result<Word> {
        alphabet.require_binary()?;
        self.check_alphabet(alphabet)?;
        Ok(Word {
            letters: self.letters.iter().map(|&a| 1 - a).collect(),
        })
    }

    /// Applies a letter permutation given as `perm[old] = new`.
    pub fn permute(&self, perm: &[u8]) -> Word {
        Word {
            letters: self.letters.iter().map(|&a| perm[a as usize]).collect(),
        }
    }

    pub fn is_powerfree(&self, spec: FreenessSpec) -> bool {
        is_powerfree(&self.letters, spec)
    }

    pub fn is_primitive(&self) -> bool {
        is_primitive(&self.letters)
    }
}

impl From<Vec<u8>> for Word {
    fn from(letters: Vec<u8>) -> Self {
        Word { letters }
    }
}

impl From<&[u8]> for Word {
    fn from(letters: &[u8]) -> Self {
        Word {
            letters: letters.to_vec(),
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.iter().any(|&a| a > 9) {
            let parts: Vec<String> = self.letters.iter().map(|a| a.to_string()).collect();
            f.write_str(&parts.join(","))
        } else {
            for &a in &self.letters {
                write!(f, "{a}")?;
            }
            Ok(())
        }
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// The forbidden powers: `k`-th powers of all nonempty words, or only of
/// those of length at most `period_cap`.
///
/// A period cap of zero forbids nothing; it is the degenerate full language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreenessSpec {
    k: u32,
    period_cap: Option<usize>,
}

impl FreenessSpec {
    pub const SQUAREFREE: FreenessSpec = FreenessSpec {
        k: 2,
        period_cap: None,
    };
    pub const CUBEFREE: FreenessSpec = FreenessSpec {
        k: 3,
        period_cap: None,
    };

    pub fn new(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidSpec(format!(
                "power k must be at least 2, got {k}"
            )));
        }
        Ok(FreenessSpec {
            k,
            period_cap: None,
        })
    }

    pub fn with_period_cap(k: u32, period_cap: usize) -> Result<Self> {
        Ok(FreenessSpec {
            period_cap: Some(period_cap),
            ..FreenessSpec::new(k)?
        })
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn period_cap(self) -> Option<usize> {
        self.period_cap
    }

    /// Largest period that can be forbidden in a word of length `len`.
    #[inline]
    pub fn max_period(self, len: usize) -> usize {
        let by_len = len / self.k as usize;
        match self.period_cap {
            Some(p) => p.min(by_len),
            None => by_len,
        }
    }
}

impl fmt::Display for FreenessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.period_cap {
            Some(p) => write!(f, "k={} p={}", self.k, p),
            None => write!(f, "k={}", self.k),
        }
    }
}

/// Does the suffix of length `k * q` of `w` have period `q`?
#[inline]
fn suffix_has_period(w: &[u8], k: usize, q: usize) -> bool {
    let n = w.len();
    let start = n - k * q;
    // Compare from the end: the newest letters are the likeliest to differ.
    (start..n - q).rev().all(|i| w[i] == w[i + q])
}

/// Period of a forbidden power ending at the last letter of `w`, if any.
#[inline]
pub fn power_suffix(w: &[u8], spec: FreenessSpec) -> Option<usize> {
    let k = spec.k as usize;
    (1..=spec.max_period(w.len())).find(|&q| suffix_has_period(w, k, q))
}

/// `true` iff `w` contains no factor `u^k` with `u` nonempty (and `|u| <= p`
/// under a period cap).
pub fn is_powerfree(w: &[u8], spec: FreenessSpec) -> bool {
    (1..=w.len()).all(|end| power_suffix(&w[..end], spec).is_none())
}

/// Position and period of the first forbidden power in `w`, as
/// `(start, period)`.
pub fn find_power(w: &[u8], spec: FreenessSpec) -> Option<(usize, usize)> {
    let k = spec.k as usize;
    (1..=w.len()).find_map(|end| power_suffix(&w[..end], spec).map(|q| (end - k * q, q)))
}

/// `true` iff `w·a` is powerfree, assuming `w` already is. Only powers whose
/// last letter is the appended one are examined.
pub fn extends_powerfree(w: &[u8], a: u8, spec: FreenessSpec) -> bool {
    let mut buf = Vec::with_capacity(w.len() + 1);
    buf.extend_from_slice(w);
    buf.push(a);
    power_suffix(&buf, spec).is_none()
}

/// `true` iff `w` is nonempty and not a proper power `v^n`, `n > 1`.
pub fn is_primitive(w: &[u8]) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    !(1..n)
        .filter(|d| n.is_multiple_of(*d))
        .any(|d| (d..n).all(|i| w[i] == w[i - d]))
}

pub fn is_factor(needle: &[u8], haystack: &[u8]) -> bool {
    needle.is_empty() || haystack.windows(needle.len()).any(|win| win == needle)
}

/// All positions where `needle` occurs in `haystack`.
pub fn occurrences<'a>(needle: &'a [u8], haystack: &'a [u8]) -> impl Iterator<Item = usize> + 'a {
    let n = needle.len();
    (0..=haystack.len().saturating_sub(n))
        .filter(move |&i| haystack.len() >= n && &haystack[i..i + n] == needle)
}

/// Every word of length `len` over `alphabet`, in lexicographic order.
pub fn all_words(alphabet: Alphabet, len: usize) -> impl Iterator<Item = Vec<u8>> {
    let s = alphabet.size() as u64;
    let total = s.checked_pow(len as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut idx| {
        let mut w = vec![0u8; len];
        for slot in w.iter_mut().rev() {
            *slot = (idx % s) as u8;
            idx /= s;
        }
        w
    })
}

/// Calls `visit` on every powerfree word of length at most `max_len`, in
/// depth-first (prefix) order, including the empty word.
pub fn for_each_powerfree(
    alphabet: Alphabet,
    spec: FreenessSpec,
    max_len: usize,
    visit: &mut impl FnMut(&[u8]),
) {
    fn go(
        buf: &mut Vec<u8>,
        alphabet: Alphabet,
        spec: FreenessSpec,
        max_len: usize,
        visit: &mut impl FnMut(&[u8]),
    ) {
        visit(buf);
        if buf.len() == max_len {
            return;
        }
        for a in alphabet.letters() {
            buf.push(a);
            if power_suffix(buf, spec).is_none() {
                go(buf, alphabet, spec, max_len, visit);
            }
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(max_len);
    go(&mut buf, alphabet, spec, max_len, visit);
}

/// All powerfree words of exactly length `len`, lexicographically ordered.
pub fn powerfree_words(alphabet: Alphabet, spec: FreenessSpec, len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_powerfree(alphabet, spec, len, &mut |w| {
        if w.len() == len {
            out.push(Word::from(w));
        }
    });
    out
}
