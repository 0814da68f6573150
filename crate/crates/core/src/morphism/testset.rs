//! Test-sets for powerfree morphisms: the twelve-word set for binary cubefree
//! morphisms and the streamed set `T(k) = U(k) ∪ (F(k) ∩ V(k))` for uniform
//! morphisms.
//!
//! Words are produced depth-first. A [`Visitor`] sees every letter pushed and
//! popped along the way, so image checks can be maintained incrementally, and
//! stops the stream by returning `Break` from [`Visitor::emit`].

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::Morphism;
use crate::error::{Error, Result};
use crate::packed::SuffixTracker;
use crate::words::{power_suffix, Alphabet, FreenessSpec, Word};

/// `abbabba, baabaab, ababba, babaab, abbaba, baabab, aabba, bbaab, abbaa,
/// baabb, ababa, babab` with `a = 0`, `b = 1`.
pub const T_MIN_LETTERS: [&str; 12] = [
    "0110110", "1001001", "010110", "101001", "011010", "100101", "00110", "11001", "01100",
    "10011", "01010", "10101",
];

pub fn t_min() -> Vec<Word> {
    T_MIN_LETTERS
        .iter()
        .map(|s| Word::parse(s).expect("valid word"))
        .collect()
}

/// Receives the depth-first stream of a test-set walk.
pub trait Visitor {
    /// A letter was appended to the current word.
    fn enter(&mut self, letter: u8);
    /// The last letter was removed.
    fn leave(&mut self);
    /// The current word belongs to the set.
    fn emit(&mut self, word: &[u8]) -> ControlFlow<()>;
}

/// Which test-set a verifier consumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestSetKind {
    Tmin,
    Rw { k: u32 },
    LengthBound { k: u32, max_len: usize },
}

/// Tracks `rho(w)` for the current word `w` of a walk and fails at the first
/// emitted word whose image contains a forbidden power.
///
/// Once an image prefix contains a power, every extension does too, so the
/// checker stops extending the image until the walk backtracks past the
/// offending letter.
#[derive(Debug, Clone)]
pub struct ImageChecker<'a> {
    images: &'a [Word],
    tracker: SuffixTracker,
    marks: Vec<usize>,
    depth: usize,
    poisoned_at: Option<usize>,
    witness: Option<Word>,
}

impl<'a> ImageChecker<'a> {
    pub fn new(m: &'a Morphism, spec: FreenessSpec) -> Self {
        ImageChecker {
            images: m.images(),
            tracker: SuffixTracker::new(m.target(), spec),
            marks: Vec::new(),
            depth: 0,
            poisoned_at: None,
            witness: None,
        }
    }

    /// First source word whose image failed.
    pub fn witness(&self) -> Option<&Word> {
        self.witness.as_ref()
    }

    pub fn into_witness(self) -> Option<Word> {
        self.witness
    }
}

impl Visitor for ImageChecker<'_> {
    fn enter(&mut self, letter: u8) {
        self.depth += 1;
        if self.poisoned_at.is_some() {
            return;
        }
        self.marks.push(self.tracker.len());
        for &b in self.images[letter as usize].letters() {
            if self.tracker.push(b) {
                self.poisoned_at = Some(self.depth);
                break;
            }
        }
    }

    fn leave(&mut self) {
        match self.poisoned_at {
            Some(d) if d < self.depth => {}
            _ => {
                self.poisoned_at = None;
                let mark = self.marks.pop().expect("balanced enter/leave");
                self.tracker.truncate(mark);
            }
        }
        self.depth -= 1;
    }

    fn emit(&mut self, word: &[u8]) -> ControlFlow<()> {
        if self.poisoned_at.is_some() {
            self.witness = Some(Word::from(word));
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    }
}

/// Counts emitted words by length.
#[derive(Debug, Clone, Default)]
struct Counter {
    by_length: Vec<u64>,
}

impl Visitor for Counter {
    fn enter(&mut self, _: u8) {}
    fn leave(&mut self) {}
    fn emit(&mut self, word: &[u8]) -> ControlFlow<()> {
        if self.by_length.len() <= word.len() {
            self.by_length.resize(word.len() + 1, 0);
        }
        self.by_length[word.len()] += 1;
        ControlFlow::Continue(())
    }
}

/// Depth-first walk over the `spec`-free words over `alphabet` with length
/// in `min_len..=max_len`, emitting each in lexicographic order.
pub fn walk_powerfree<V: Visitor>(
    alphabet: Alphabet,
    spec: FreenessSpec,
    min_len: usize,
    max_len: usize,
    visitor: &mut V,
) -> ControlFlow<()> {
    fn rec<V: Visitor>(
        n: u8,
        spec: FreenessSpec,
        min_len: usize,
        max_len: usize,
        buf: &mut Vec<u8>,
        visitor: &mut V,
    ) -> ControlFlow<()> {
        if buf.len() >= min_len {
            visitor.emit(buf)?;
        }
        if buf.len() == max_len {
            return ControlFlow::Continue(());
        }
        for a in 0..n {
            buf.push(a);
            if power_suffix(buf, spec).is_none() {
                visitor.enter(a);
                let r = rec(n, spec, min_len, max_len, buf, visitor);
                visitor.leave();
                if r.is_break() {
                    buf.pop();
                    return r;
                }
            }
            buf.pop();
        }
        ControlFlow::Continue(())
    }
    rec(
        alphabet.size() as u8,
        spec,
        min_len,
        max_len,
        &mut Vec::with_capacity(max_len),
        visitor,
    )
}

/// Size and length profile of a test-set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TestSetSummary {
    pub k: u32,
    pub alphabet: usize,
    pub count: u64,
    pub max_len: usize,
    /// `(length, count)` for every length that occurs.
    pub by_length: Vec<(usize, u64)>,
}

/// The test-set `T(k)` for `k`-powerfreeness of uniform morphisms on an
/// alphabet with at least two letters.
///
/// `U(k)` is taken as the nonempty `k`-powerfree words of length at most
/// `k + 1`; `V(k)` consists of the words `a0 w1 a1 .. wk ak` where each `wi`
/// uses every letter at most once and the lengths `|wi|` differ by at most
/// one. Both parts come from one depth-first walk over `k`-powerfree words
/// that keeps, for every admissible length vector, whether the current
/// prefix still fits it, so words are emitted once and in lexicographic
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RwTestSet {
    k: u32,
    alphabet: Alphabet,
}

/// A unit of parallel work: a one-letter word, or the subtree below a
/// two-letter prefix.
#[derive(Debug, Clone, Copy)]
enum Job {
    Single(u8),
    Subtree(u8, u8),
}

impl RwTestSet {
    pub fn new(k: u32, alphabet: Alphabet) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidSpec(format!(
                "test-set needs k >= 3, got {k}"
            )));
        }
        if alphabet.size() < 2 {
            return Err(Error::UnsupportedAlphabet {
                expected: "at least two letters",
                actual: alphabet.size(),
            });
        }
        if alphabet.size() > 32 {
            return Err(Error::ResourceLimit(
                "test-set alphabet above 32 letters".into(),
            ));
        }
        Ok(RwTestSet { k, alphabet })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn spec(&self) -> FreenessSpec {
        FreenessSpec::new(self.k).expect("k >= 3")
    }

    /// `k (Card + 1) + 1`.
    pub fn max_len_bound(&self) -> usize {
        self.k as usize * (self.alphabet.size() + 1) + 1
    }

    /// All admissible `(|w1|, .., |wk|)` with `sum >= 1`.
    fn length_vectors(&self) -> Vec<Vec<usize>> {
        let k = self.k as usize;
        let card = self.alphabet.size();
        let mut out = Vec::new();
        for total in 1..=k * card {
            let (base, extra) = (total / k, total % k);
            // Choose which `extra` positions get `base + 1`.
            for bits in 0u64..(1 << k) {
                if bits.count_ones() as usize != extra {
                    continue;
                }
                let v: Vec<usize> = (0..k).map(|i| base + ((bits >> i) & 1) as usize).collect();
                if v.iter().all(|&l| l <= card) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// For each length vector, which positions hold a separator letter `aj`.
    fn patterns(&self) -> Vec<Vec<bool>> {
        self.length_vectors()
            .iter()
            .map(|v| {
                let mut sep = vec![true];
                for &l in v {
                    sep.extend(std::iter::repeat_n(false, l));
                    sep.push(true);
                }
                sep
            })
            .collect()
    }

    fn jobs(&self) -> Vec<Job> {
        let mut jobs = Vec::new();
        for a in self.alphabet.letters() {
            jobs.push(Job::Single(a));
            for b in self.alphabet.letters() {
                jobs.push(Job::Subtree(a, b));
            }
        }
        jobs
    }

    fn run_job<V: Visitor>(
        &self,
        patterns: &[Vec<bool>],
        job: Job,
        visitor: &mut V,
    ) -> ControlFlow<()> {
        let mut walk = Walk {
            n: self.alphabet.size() as u8,
            short: self.k as usize + 1,
            spec: self.spec(),
            patterns,
            masks: Vec::with_capacity(patterns.len() * self.max_len_bound()),
            buf: Vec::with_capacity(self.max_len_bound()),
            visitor,
        };
        match job {
            Job::Single(a) => {
                walk.visitor.enter(a);
                let r = walk.visitor.emit(&[a]);
                walk.visitor.leave();
                r
            }
            Job::Subtree(a, b) => {
                walk.buf.push(a);
                walk.masks.extend(std::iter::repeat_n(0, patterns.len()));
                walk.visitor.enter(a);
                let r = walk.child(b);
                walk.visitor.leave();
                r
            }
        }
    }

    /// Streams the whole set through one visitor.
    pub fn walk<V: Visitor>(&self, visitor: &mut V) -> ControlFlow<()> {
        let patterns = self.patterns();
        for job in self.jobs() {
            self.run_job(&patterns, job, visitor)?;
        }
        ControlFlow::Continue(())
    }

    /// Streams the set in independent chunks on the rayon pool, one fresh
    /// visitor per chunk. Returns the visitors in stream order, stopping at
    /// the earliest chunk that breaks: chunks after it may be skipped, chunks
    /// before it always run, so the first break is the same as in a serial
    /// walk.
    pub fn par_walk<V, F>(&self, make: F) -> Vec<(V, ControlFlow<()>)>
    where
        V: Visitor + Send,
        F: Fn() -> V + Sync,
    {
        let patterns = self.patterns();
        let jobs = self.jobs();
        let first_break = AtomicUsize::new(usize::MAX);
        let results: Vec<Option<(V, ControlFlow<()>)>> = jobs
            .par_iter()
            .enumerate()
            .map(|(i, &job)| {
                if i > first_break.load(Ordering::Relaxed) {
                    return None;
                }
                let mut v = make();
                let flow = self.run_job(&patterns, job, &mut v);
                if flow.is_break() {
                    first_break.fetch_min(i, Ordering::Relaxed);
                }
                Some((v, flow))
            })
            .collect();
        let stop = first_break.load(Ordering::Relaxed);
        results
            .into_iter()
            .enumerate()
            .filter(|&(i, _)| i <= stop)
            .filter_map(|(_, r)| r)
            .collect()
    }

    pub fn summary(&self) -> TestSetSummary {
        let mut by_length: Vec<u64> = Vec::new();
        for (c, _) in self.par_walk(Counter::default) {
            if by_length.len() < c.by_length.len() {
                by_length.resize(c.by_length.len(), 0);
            }
            for (i, x) in c.by_length.iter().enumerate() {
                by_length[i] += x;
            }
        }
        let by_length: Vec<(usize, u64)> = by_length
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .collect();
        TestSetSummary {
            k: self.k,
            alphabet: self.alphabet.size(),
            count: by_length.iter().map(|&(_, c)| c).sum(),
            max_len: by_length.last().map_or(0, |&(l, _)| l),
            by_length,
        }
    }

    /// Collects the set; only sensible for small alphabets.
    pub fn words(&self) -> Vec<Word> {
        struct Collect(Vec<Word>);
        impl Visitor for Collect {
            fn enter(&mut self, _: u8) {}
            fn leave(&mut self) {}
            fn emit(&mut self, word: &[u8]) -> ControlFlow<()> {
                self.0.push(Word::from(word));
                ControlFlow::Continue(())
            }
        }
        let mut c = Collect(Vec::new());
        let _ = self.walk(&mut c);
        c.0
    }
}

/// Letters used so far in the current block; `DEAD` once the prefix no
/// longer fits the pattern.
const DEAD: u64 = 1 << 63;

struct Walk<'a, V> {
    n: u8,
    short: usize,
    spec: FreenessSpec,
    patterns: &'a [Vec<bool>],
    /// One mask per pattern and prefix length, flattened.
    masks: Vec<u64>,
    buf: Vec<u8>,
    visitor: &'a mut V,
}

impl<V: Visitor> Walk<'_, V> {
    /// Appends `a` to the current prefix and walks the subtree below it.
    fn child(&mut self, a: u8) -> ControlFlow<()> {
        let pos = self.buf.len();
        self.buf.push(a);
        if power_suffix(&self.buf, self.spec).is_some() {
            self.buf.pop();
            return ControlFlow::Continue(());
        }
        let np = self.patterns.len();
        let base = self.masks.len() - np;
        let len = pos + 1;
        let (mut fits, mut longer) = (false, false);
        for (i, sep) in self.patterns.iter().enumerate() {
            let m = self.masks[base + i];
            let next = if m & DEAD != 0 || pos >= sep.len() {
                DEAD
            } else if sep[pos] {
                0
            } else if m & (1 << a) != 0 {
                DEAD
            } else {
                m | (1 << a)
            };
            if next & DEAD == 0 {
                fits |= sep.len() == len;
                longer |= sep.len() > len;
            }
            self.masks.push(next);
        }
        self.visitor.enter(a);
        let mut r = ControlFlow::Continue(());
        if len <= self.short || fits {
            r = self.visitor.emit(&self.buf);
        }
        if r.is_continue() && (len < self.short || longer) {
            for b in 0..self.n {
                r = self.child(b);
                if r.is_break() {
                    break;
                }
            }
        }
        self.visitor.leave();
        self.masks.truncate(self.masks.len() - np);
        self.buf.pop();
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{all_words, is_powerfree};
    use std::collections::BTreeSet;

    /// Does `word` split as `a0 w1 a1 .. wk ak` with `|wi| = lens[i-1]` and
    /// every `wi` free of repeated letters?
    fn decomposes(word: &[u8], lens: &[usize]) -> bool {
        let mut idx = 1;
        for &l in lens {
            let mut used = 0u32;
            for &a in &word[idx..idx + l] {
                if used & (1 << a) != 0 {
                    return false;
                }
                used |= 1 << a;
            }
            idx += l + 1;
        }
        true
    }

    /// Independent reading of the definition: filter all words up to the
    /// length bound.
    fn brute_force(k: usize, card: usize) -> BTreeSet<Vec<u8>> {
        let alphabet = Alphabet::new(card).unwrap();
        let spec = FreenessSpec::new(k as u32).unwrap();
        let mut out = BTreeSet::new();
        for len in 1..=k * (card + 1) + 1 {
            for w in all_words(alphabet, len) {
                if !is_powerfree(&w, spec) {
                    continue;
                }
                if len <= k + 1 || in_v(&w, k) {
                    out.insert(w);
                }
            }
        }
        out
    }

    fn in_v(w: &[u8], k: usize) -> bool {
        let inner = w.len() - (k + 1);
        let (base, extra) = (inner / k, inner % k);
        (0u32..1 << k)
            .filter(|b| b.count_ones() as usize == extra)
            .any(|b| {
                let lens: Vec<usize> = (0..k).map(|i| base + ((b >> i) & 1) as usize).collect();
                decomposes(w, &lens)
            })
    }

    #[test]
    fn t_min_is_cubefree_and_has_twelve_words() {
        let t = t_min();
        assert_eq!(t.len(), 12);
        assert!(t.iter().all(|w| w.is_powerfree(FreenessSpec::CUBEFREE)));
        assert_eq!(t.iter().collect::<BTreeSet<_>>().len(), 12);
    }

    #[test]
    fn streamed_set_matches_definition() {
        for (k, card) in [(3, 2), (4, 2), (3, 3)] {
            let ts = RwTestSet::new(k as u32, Alphabet::new(card).unwrap()).unwrap();
            let words: Vec<Vec<u8>> = ts.words().into_iter().map(Word::into_letters).collect();
            let set: BTreeSet<Vec<u8>> = words.iter().cloned().collect();
            assert_eq!(set.len(), words.len(), "duplicates for k={k}, card={card}");
            assert_eq!(set, brute_force(k, card), "k={k}, card={card}");
            let summary = ts.summary();
            assert_eq!(summary.count as usize, words.len());
            assert!(summary.max_len <= ts.max_len_bound());
        }
    }

    #[test]
    fn binary_cubefree_baseline() {
        let s = RwTestSet::new(3, Alphabet::BINARY).unwrap().summary();
        assert_eq!(s.count, brute_force(3, 2).len() as u64);
        assert_eq!(s.max_len, 10);
    }

    #[test]
    fn parallel_walk_stops_at_first_failure() {
        let ts = RwTestSet::new(3, Alphabet::TERNARY).unwrap();
        let m = Morphism::binary(&["001", "011", "010"]).unwrap();
        let spec = FreenessSpec::CUBEFREE;
        let mut serial = ImageChecker::new(&m, spec);
        assert!(ts.walk(&mut serial).is_break());
        let parallel = ts.par_walk(|| ImageChecker::new(&m, spec));
        let (last, flow) = parallel.last().unwrap();
        assert!(flow.is_break());
        assert_eq!(last.witness(), serial.witness());
    }

    #[test]
    fn rejects_small_parameters() {
        assert!(RwTestSet::new(2, Alphabet::BINARY).is_err());
        assert!(RwTestSet::new(3, Alphabet::UNARY).is_err());
    }
}
