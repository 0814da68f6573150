//! Exhaustive counting of powerfree words.
//!
//! Words are grown one letter at a time; only powers ending at the new letter
//! are checked. All powerfree prefixes of a fixed depth are generated
//! serially, then their subtrees are counted on a worker pool and the integer
//! tallies are summed, so results do not depend on the schedule.

mod fixture;
mod stats;

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::packed::PowerChecker;
use crate::words::{Alphabet, FreenessSpec};

pub use fixture::{
    fixture_counts, fixture_joint_n80, parse_counts_csv, parse_joint_csv, FIXTURE_COUNTS_CSV,
    FIXTURE_JOINT_CSV,
};
pub use stats::{
    distribution_stats, entropy_upper_from_count, fit_asymptotics, gaussian_density, ln_biguint,
    variance_slope, AsymptoticFit, FrequencyStats,
};

/// Environment variable overriding [`EnumerationConfig::node_budget`].
pub const NODE_BUDGET_ENV: &str = "POWERFREE_NODE_BUDGET";

/// Where a table's numbers came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Enumeration,
    ClosedForm,
    TransferSystem,
    Fixture,
}

impl Source {
    pub fn label(self) -> &'static str {
        match self {
            Source::Enumeration => "enumeration",
            Source::ClosedForm => "closed-form",
            Source::TransferSystem => "transfer-system",
            Source::Fixture => "fixture",
        }
    }
}

/// Exact counts `c(n)` of powerfree words for `n = 0..=max_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountTable {
    spec: FreenessSpec,
    alphabet: Alphabet,
    counts: Vec<BigUint>,
    source: Source,
}

impl CountTable {
    pub(crate) fn new(
        spec: FreenessSpec,
        alphabet: Alphabet,
        counts: Vec<BigUint>,
        source: Source,
    ) -> Self {
        debug_assert!(counts.first().is_none_or(|c| c.is_one()));
        CountTable {
            spec,
            alphabet,
            counts,
            source,
        }
    }

    pub fn spec(&self) -> FreenessSpec {
        self.spec
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn max_n(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.counts.get(n)
    }

    /// Counts indexed by length.
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// `n,count` rows with a header; a `source` column is added when the
    /// numbers do not come from a fresh computation.
    pub fn to_csv(&self) -> String {
        let tagged = self.source == Source::Fixture;
        let mut out = String::from(if tagged {
            "n,count,source\n"
        } else {
            "n,count\n"
        });
        for (n, c) in self.counts.iter().enumerate() {
            if tagged {
                let _ = writeln!(out, "{n},{c},{}", self.source.label());
            } else {
                let _ = writeln!(out, "{n},{c}");
            }
        }
        out
    }
}

/// Counts `b(n, n0)` of binary powerfree words of length `n` with `n0`
/// occurrences of the letter 0, for `n0 = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointCountTable {
    n: usize,
    counts: Vec<BigUint>,
    source: Source,
}

impl JointCountTable {
    pub(crate) fn new(n: usize, counts: Vec<BigUint>, source: Source) -> Self {
        debug_assert_eq!(counts.len(), n + 1);
        JointCountTable { n, counts, source }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> Source {
        self.source
    }

    /// Counts indexed by `n0`.
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn get(&self, n0: usize) -> BigUint {
        self.counts.get(n0).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// `b(n, n0) = b(n, n - n0)` for every `n0`.
    pub fn is_symmetric(&self) -> bool {
        (0..=self.n).all(|i| self.counts[i] == self.counts[self.n - i])
    }

    /// Smallest and largest `n0` with a nonzero count.
    pub fn support(&self) -> Option<(usize, usize)> {
        let lo = self.counts.iter().position(|c| !c.is_zero())?;
        let hi = self.counts.iter().rposition(|c| !c.is_zero())?;
        Some((lo, hi))
    }

    pub fn to_csv(&self, header: bool) -> String {
        let mut out = String::new();
        if header {
            out.push_str("n,n0,count\n");
        }
        for (n0, c) in self.counts.iter().enumerate() {
            let _ = writeln!(out, "{},{n0},{c}", self.n);
        }
        out
    }
}

/// Knobs for the enumerator.
#[derive(Debug, Clone)]
pub struct EnumerationConfig {
    pub workers: usize,
    /// Depth at which subtrees are handed to workers.
    pub prefix_depth: usize,
    /// Refuse runs whose projected node count exceeds this.
    pub node_budget: u64,
}

impl EnumerationConfig {
    pub const DEFAULT_NODE_BUDGET: u64 = 4_000_000_000;

    pub fn with_workers(workers: usize) -> Self {
        EnumerationConfig {
            workers: workers.max(1),
            ..Default::default()
        }
    }
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        let node_budget = std::env::var(NODE_BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().replace('_', "").parse().ok())
            .unwrap_or(Self::DEFAULT_NODE_BUDGET);
        EnumerationConfig {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            prefix_depth: 12,
            node_budget,
        }
    }
}

/// Raw per-length tallies. `hist[(n * s + a) * (n_max + 1) + c]` counts words
/// of length `n` containing letter `a` exactly `c` times.
#[derive(Debug, Clone)]
struct Tally {
    counts: Vec<u64>,
    hist: Vec<u64>,
}

impl Tally {
    fn new(n_max: usize, s: usize, with_hist: bool) -> Self {
        let hist_len = if with_hist {
            (n_max + 1) * s * (n_max + 1)
        } else {
            0
        };
        Tally {
            counts: vec![0; n_max + 1],
            hist: vec![0; hist_len],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.counts
            .iter_mut()
            .zip(&other.counts)
            .for_each(|(a, b)| *a += b);
        self.hist
            .iter_mut()
            .zip(&other.hist)
            .for_each(|(a, b)| *a += b);
        self
    }
}

struct Walker {
    checker: PowerChecker,
    s: usize,
    n_max: usize,
}

impl Walker {
    #[inline]
    fn record<const HIST: bool>(&self, tally: &mut Tally, len: usize, letter_counts: &[u8]) {
        tally.counts[len] += 1;
        if HIST {
            let stride = self.n_max + 1;
            for (a, &c) in letter_counts.iter().enumerate() {
                tally.hist[(len * self.s + a) * stride + c as usize] += 1;
            }
        }
    }

    /// Counts every proper extension of the powerfree word `x` of length
    /// `len` up to `n_max`.
    fn descend<const HIST: bool>(
        &self,
        x: u128,
        len: usize,
        letter_counts: &mut [u8],
        tally: &mut Tally,
    ) {
        if len == self.n_max {
            return;
        }
        let next = len + 1;
        for a in 0..self.s as u8 {
            let y = self.checker.push(x, a);
            if self.checker.has_power_suffix(y, next) {
                continue;
            }
            if HIST {
                letter_counts[a as usize] += 1;
            }
            self.record::<HIST>(tally, next, letter_counts);
            self.descend::<HIST>(y, next, letter_counts, tally);
            if HIST {
                letter_counts[a as usize] -= 1;
            }
        }
    }

    /// Serial pass to `depth`, returning the frontier prefixes.
    fn frontier<const HIST: bool>(&self, depth: usize, tally: &mut Tally) -> Vec<(u128, Vec<u8>)> {
        let mut out = Vec::new();
        let mut stack = vec![(0u128, 0usize, vec![0u8; self.s])];
        self.record::<HIST>(tally, 0, &stack[0].2);
        while let Some((x, len, lc)) = stack.pop() {
            if len == depth {
                out.push((x, lc));
                continue;
            }
            // Reverse so the frontier comes out in lexicographic order.
            for a in (0..self.s as u8).rev() {
                let y = self.checker.push(x, a);
                if self.checker.has_power_suffix(y, len + 1) {
                    continue;
                }
                let mut lc2 = lc.clone();
                lc2[a as usize] += 1;
                self.record::<HIST>(tally, len + 1, &lc2);
                stack.push((y, len + 1, lc2));
            }
        }
        out
    }
}

/// Projected total node count from the tallies of a completed prefix pass.
fn projected_nodes(counts: &[u64], depth: usize, n_max: usize) -> f64 {
    let done: f64 = counts[..=depth].iter().map(|&c| c as f64).sum();
    if depth == n_max || counts[depth] == 0 {
        return done;
    }
    let back = depth.min(4);
    let base = counts[depth - back].max(1) as f64;
    let growth = (counts[depth] as f64 / base).powf(1.0 / back as f64);
    let mut total = done;
    let mut level = counts[depth] as f64;
    for _ in depth..n_max {
        level *= growth;
        total += level;
    }
    total
}

fn run(
    spec: FreenessSpec,
    alphabet: Alphabet,
    n_max: usize,
    config: &EnumerationConfig,
    with_hist: bool,
) -> Result<Tally> {
    let s = alphabet.size();
    if spec.period_cap() == Some(0) {
        if n_max > 60 {
            return Err(Error::ResourceLimit(
                "letter statistics of the full language are limited to length 60".into(),
            ));
        }
        return Ok(closed_form(alphabet, n_max, with_hist));
    }
    let walker = Walker {
        checker: PowerChecker::new(alphabet, spec, n_max)?,
        s,
        n_max,
    };
    let depth = config.prefix_depth.min(n_max);
    let mut tally = Tally::new(n_max, s, with_hist);
    let frontier = if with_hist {
        walker.frontier::<true>(depth, &mut tally)
    } else {
        walker.frontier::<false>(depth, &mut tally)
    };
    let projected = projected_nodes(&tally.counts, depth, n_max);
    if projected > config.node_budget as f64 {
        return Err(Error::ResourceLimit(format!(
            "enumerating {spec} words over {s} letters to length {n_max} visits about \
             {projected:.3e} nodes, budget is {} (set {NODE_BUDGET_ENV} to raise it)",
            config.node_budget
        )));
    }
    if depth == n_max {
        return Ok(tally);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::ResourceLimit(format!("cannot start worker pool: {e}")))?;
    let subtrees = pool.install(|| {
        frontier
            .par_iter()
            .fold(
                || Tally::new(n_max, s, with_hist),
                |mut t, (x, lc)| {
                    let mut lc = lc.clone();
                    if with_hist {
                        walker.descend::<true>(*x, depth, &mut lc, &mut t);
                    } else {
                        walker.descend::<false>(*x, depth, &mut lc, &mut t);
                    }
                    t
                },
            )
            .reduce(|| Tally::new(n_max, s, with_hist), Tally::merge)
    });
    Ok(tally.merge(subtrees))
}

/// Tallies for the unconstrained language, where every word is allowed.
fn closed_form(alphabet: Alphabet, n_max: usize, with_hist: bool) -> Tally {
    let s = alphabet.size();
    let mut tally = Tally::new(n_max, s, with_hist);
    for n in 0..=n_max {
        tally.counts[n] = (s as u64).saturating_pow(n as u32);
        if with_hist {
            let stride = n_max + 1;
            for a in 0..s {
                for c in 0..=n {
                    let ways = binomial(n, c)
                        .saturating_mul(((s - 1) as u64).saturating_pow((n - c) as u32));
                    tally.hist[(n * s + a) * stride + c] = ways;
                }
            }
        }
    }
    tally
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Exact numbers of powerfree words of every length `0..=n_max`.
pub fn count_powerfree(
    spec: FreenessSpec,
    alphabet: Alphabet,
    n_max: usize,
    config: &EnumerationConfig,
) -> Result<CountTable> {
    if spec.period_cap() == Some(0) {
        let counts = (0..=n_max)
            .map(|n| BigUint::from(alphabet.size()).pow(n as u32))
            .collect();
        return Ok(CountTable::new(spec, alphabet, counts, Source::ClosedForm));
    }
    let tally = run(spec, alphabet, n_max, config, false)?;
    let source = Source::Enumeration;
    let counts = tally.counts.into_iter().map(BigUint::from).collect();
    Ok(CountTable::new(spec, alphabet, counts, source))
}

/// Largest `n <= n_max` whose enumeration fits the node budget, judged
/// from a serial pass to the prefix depth.
pub fn max_length_within_budget(
    spec: FreenessSpec,
    alphabet: Alphabet,
    n_max: usize,
    config: &EnumerationConfig,
) -> Result<usize> {
    if spec.period_cap() == Some(0) {
        return Ok(n_max);
    }
    let walker = Walker {
        checker: PowerChecker::new(alphabet, spec, n_max.max(1))?,
        s: alphabet.size(),
        n_max,
    };
    let depth = config.prefix_depth.min(n_max);
    let mut tally = Tally::new(n_max, alphabet.size(), false);
    walker.frontier::<false>(depth, &mut tally);
    let budget = config.node_budget as f64;
    let fits = |n: usize| {
        let nodes = if n <= depth {
            tally.counts[..=n].iter().map(|&c| c as f64).sum()
        } else {
            projected_nodes(&tally.counts, depth, n)
        };
        nodes <= budget
    };
    Ok((0..=n_max).take_while(|&n| fits(n)).last().unwrap_or(0))
}

/// Full letter statistics from one enumeration: counts per length plus the
/// distribution of each letter's occurrence count.
#[derive(Debug, Clone)]
pub struct LetterHistogram {
    spec: FreenessSpec,
    alphabet: Alphabet,
    n_max: usize,
    counts: Vec<u64>,
    hist: Vec<u64>,
}

impl LetterHistogram {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn count_table(&self) -> CountTable {
        let counts = self.counts.iter().map(|&c| BigUint::from(c)).collect();
        CountTable::new(self.spec, self.alphabet, counts, Source::Enumeration)
    }

    fn row(&self, n: usize, letter: u8) -> &[u64] {
        let stride = self.n_max + 1;
        let start = (n * self.alphabet.size() + letter as usize) * stride;
        &self.hist[start..start + n + 1]
    }

    /// Joint table `b(n, n0)` for a binary alphabet.
    pub fn joint(&self, n: usize) -> Result<JointCountTable> {
        self.alphabet.require_binary()?;
        if n > self.n_max {
            return Err(Error::DegenerateInput(format!(
                "length {n} beyond enumerated maximum {}",
                self.n_max
            )));
        }
        let counts = self.row(n, 0).iter().map(|&c| BigUint::from(c)).collect();
        Ok(JointCountTable::new(n, counts, Source::Enumeration))
    }

    /// Smallest and largest number of occurrences of `letter` among the
    /// powerfree words of length `n`.
    pub fn letter_range(&self, n: usize, letter: u8) -> Result<(usize, usize)> {
        if n > self.n_max || !self.alphabet.contains(letter) {
            return Err(Error::DegenerateInput(format!(
                "no statistics for length {n}, letter {letter}"
            )));
        }
        let row = self.row(n, letter);
        let lo = row.iter().position(|&c| c > 0);
        let hi = row.iter().rposition(|&c| c > 0);
        match (lo, hi) {
            (Some(lo), Some(hi)) => Ok((lo, hi)),
            _ => Err(Error::EmptyLanguage(n)),
        }
    }
}

/// One enumeration to `n_max` that also records per-letter occurrence counts.
pub fn letter_histogram(
    spec: FreenessSpec,
    alphabet: Alphabet,
    n_max: usize,
    config: &EnumerationConfig,
) -> Result<LetterHistogram> {
    let tally = run(spec, alphabet, n_max, config, true)?;
    Ok(LetterHistogram {
        spec,
        alphabet,
        n_max,
        counts: tally.counts,
        hist: tally.hist,
    })
}

/// Joint counts `b(n, n0)` over a binary alphabet.
pub fn count_joint(
    spec: FreenessSpec,
    alphabet: Alphabet,
    n: usize,
    config: &EnumerationConfig,
) -> Result<JointCountTable> {
    alphabet.require_binary()?;
    letter_histogram(spec, alphabet, n, config)?.joint(n)
}

/// Minimum and maximum occurrences of `letter` over powerfree words of
/// length `n`.
pub fn letter_count_range(
    spec: FreenessSpec,
    alphabet: Alphabet,
    n: usize,
    letter: u8,
    config: &EnumerationConfig,
) -> Result<(usize, usize)> {
    letter_histogram(spec, alphabet, n, config)?.letter_range(n, letter)
}
