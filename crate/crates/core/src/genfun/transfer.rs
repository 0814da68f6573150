//! Transfer systems for length-`p` powerfree languages.
//!
//! A word avoids `k`-th powers of period at most `p` exactly when each of its
//! factors of length `k p` does, so the states are the admissible words of
//! length `k p - 1` and a letter moves to the suffix of the extended word.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::enumerator::{CountTable, Source};
use crate::error::{Error, Result};
use crate::packed::PowerChecker;
use crate::words::{for_each_powerfree, Alphabet, FreenessSpec, Word};

/// Refuse systems with more states than this by default.
pub const DEFAULT_STATE_BUDGET: usize = 4_000_000;

const REJECT: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct TransferSystem {
    spec: FreenessSpec,
    p: usize,
    alphabet: Alphabet,
    state_len: usize,
    /// Packed states in lexicographic order.
    states: Vec<u128>,
    bits: u32,
    /// `transitions[s * card + a]`, or `REJECT`.
    transitions: Vec<u32>,
    /// `b_p(n)` for `n < state_len`.
    short_counts: Vec<BigUint>,
}

/// Summary for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferSummary {
    pub k: u32,
    pub p: usize,
    pub alphabet: usize,
    pub state_len: usize,
    pub states: usize,
    pub transitions: usize,
}

impl TransferSystem {
    /// The system for words over `alphabet` without `k`-th powers of
    /// period at most `p`. `p = 0` gives the full language.
    pub fn build(k: u32, p: usize, alphabet: Alphabet) -> Result<Self> {
        Self::build_with_budget(k, p, alphabet, DEFAULT_STATE_BUDGET)
    }

    pub fn build_with_budget(
        k: u32,
        p: usize,
        alphabet: Alphabet,
        max_states: usize,
    ) -> Result<Self> {
        let spec = FreenessSpec::with_period_cap(k, p)?;
        let card = alphabet.size();
        if p == 0 {
            return Ok(TransferSystem {
                spec,
                p,
                alphabet,
                state_len: 0,
                states: vec![0],
                bits: alphabet.bits_per_letter(),
                transitions: vec![0; card],
                short_counts: Vec::new(),
            });
        }
        let state_len = k as usize * p - 1;
        let checker = PowerChecker::new(alphabet, spec, state_len + 1).map_err(|_| {
            Error::ResourceLimit(format!(
                "states of length {state_len} do not fit the packed form"
            ))
        })?;
        let mut short = vec![0u64; state_len];
        let mut states = Vec::new();
        let mut overflow = false;
        for_each_powerfree(alphabet, spec, state_len, &mut |w| {
            if w.len() < state_len {
                short[w.len()] += 1;
            } else if states.len() < max_states {
                states.push(checker.pack(w));
            } else {
                overflow = true;
            }
        });
        if overflow {
            return Err(Error::ResourceLimit(format!(
                "more than {max_states} states for k = {k}, p = {p}"
            )));
        }
        // Lexicographic order of equal-length words is numeric order of
        // their packed forms.
        debug_assert!(states.windows(2).all(|w| w[0] < w[1]));
        let bits = checker.bits();
        let mask = if state_len as u32 * bits >= 128 {
            u128::MAX
        } else {
            (1u128 << (state_len as u32 * bits)) - 1
        };
        let transitions: Vec<u32> = states
            .par_iter()
            .flat_map_iter(|&x| {
                let states = &states;
                let checker = &checker;
                (0..card as u8).map(move |a| {
                    let y = checker.push(x, a);
                    if checker.has_power_suffix(y, state_len + 1) {
                        REJECT
                    } else {
                        let idx = states
                            .binary_search(&(y & mask))
                            .expect("suffix is a state");
                        idx as u32
                    }
                })
            })
            .collect();
        Ok(TransferSystem {
            spec,
            p,
            alphabet,
            state_len,
            states,
            bits,
            transitions,
            short_counts: short.into_iter().map(BigUint::from).collect(),
        })
    }

    pub fn spec(&self) -> FreenessSpec {
        self.spec
    }

    pub fn k(&self) -> u32 {
        self.spec.k()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// Length of the state words, `k p - 1` (0 when `p = 0`).
    pub fn state_len(&self) -> usize {
        self.state_len
    }

    pub fn state_words(&self) -> Vec<Word> {
        let mask = (1u128 << self.bits) - 1;
        self.states
            .iter()
            .map(|&x| {
                Word::new(
                    (0..self.state_len)
                        .rev()
                        .map(|i| ((x >> (i as u32 * self.bits)) & mask) as u8)
                        .collect(),
                )
            })
            .collect()
    }

    /// Successor of state `s` under `letter`, if the extension is allowed.
    pub fn successor(&self, s: usize, letter: u8) -> Option<usize> {
        let t = self.transitions[s * self.alphabet.size() + letter as usize];
        (t != REJECT).then_some(t as usize)
    }

    pub fn short_counts(&self) -> &[BigUint] {
        &self.short_counts
    }

    pub fn summary(&self) -> TransferSummary {
        TransferSummary {
            k: self.k(),
            p: self.p,
            alphabet: self.alphabet.size(),
            state_len: self.state_len,
            states: self.states.len(),
            transitions: self.transitions.iter().filter(|&&t| t != REJECT).count(),
        }
    }

    /// `out[s] = sum of v[t]` over the successors `t` of `s`.
    pub(crate) fn step<T, F>(&self, v: &[T], zero: T, add: F) -> Vec<T>
    where
        T: Clone + Send + Sync,
        F: Fn(T, &T) -> T + Sync,
    {
        let card = self.alphabet.size();
        self.transitions
            .par_chunks(card)
            .map(|row| {
                row.iter()
                    .filter(|&&t| t != REJECT)
                    .fold(zero.clone(), |acc, &t| add(acc, &v[t as usize]))
            })
            .collect()
    }

    /// `b_p(n)` for `n = 0..=n_max`, walking from every state with weights
    /// produced by `step`. Generic over the number type.
    fn counts_with<T, F, S>(&self, n_max: usize, one: T, zero: T, add: F, small: S) -> Vec<T>
    where
        T: Clone + Send + Sync,
        F: Fn(T, &T) -> T + Sync,
        S: Fn(&BigUint) -> T,
    {
        let mut out: Vec<T> = self
            .short_counts
            .iter()
            .take(n_max + 1)
            .map(small)
            .collect();
        let mut v = vec![one; self.states.len()];
        for n in self.state_len..=n_max {
            if n > self.state_len {
                v = self.step(&v, zero.clone(), &add);
            }
            out.push(v.iter().fold(zero.clone(), &add));
        }
        out
    }

    /// Exact `b_p(n)` for `n <= n_max`.
    pub fn series(&self, n_max: usize) -> Vec<BigUint> {
        self.counts_with(
            n_max,
            BigUint::one(),
            BigUint::zero(),
            |a, b| a + b,
            Clone::clone,
        )
    }

    /// `b_p(n) mod m` for `n <= n_max`; `m < 2^63`.
    pub fn series_mod(&self, n_max: usize, m: u64) -> Vec<u64> {
        let big = BigUint::from(m);
        self.counts_with(
            n_max,
            1 % m,
            0,
            |a, b| {
                let s = a + b;
                if s >= m {
                    s - m
                } else {
                    s
                }
            },
            |c| (c % &big).try_into().expect("reduced"),
        )
    }
}

/// Builds the system; see [`TransferSystem::build`].
pub fn build_transfer_system(k: u32, p: usize, alphabet: Alphabet) -> Result<TransferSystem> {
    TransferSystem::build(k, p, alphabet)
}

/// Exact counts `b_p(n)`, `n <= n_max`, by iterating the system.
pub fn series_coefficients(ts: &TransferSystem, n_max: usize) -> CountTable {
    CountTable::new(
        ts.spec(),
        ts.alphabet(),
        ts.series(n_max),
        Source::TransferSystem,
    )
}

/// Spectral radius of the transfer system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Growth {
    pub lambda: f64,
    /// `ln lambda`.
    pub h: f64,
    pub iterations: usize,
}

/// Power iteration on `A + I`, which has the same dominant eigenvector as
/// `A` and no other eigenvalue of equal modulus. Stops when two successive
/// Rayleigh quotients agree to well within `tol` (or to rounding level).
pub fn dominant_growth(ts: &TransferSystem, tol: f64) -> Result<Growth> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Precondition(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    const CAP: usize = 100_000;
    let n = ts.state_count();
    let mut v = vec![1.0 / n as f64; n];
    let mut prev = f64::NAN;
    let mut calm = 0;
    for it in 1..=CAP {
        let mut w = ts.step(&v, 0.0, |a, b| a + b);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi += vi;
        }
        let sum: f64 = w.iter().sum();
        let lambda = sum - 1.0;
        if lambda <= 0.0 {
            return Ok(Growth {
                lambda: 0.0,
                h: f64::NEG_INFINITY,
                iterations: it,
            });
        }
        for x in w.iter_mut() {
            *x /= sum;
        }
        v = w;
        // Rounding noise in the sums sets a floor on attainable agreement.
        if (lambda - prev).abs() < (tol * 0.01).max(1e-13 * lambda) {
            calm += 1;
            if calm >= 3 {
                return Ok(Growth {
                    lambda,
                    h: lambda.ln(),
                    iterations: it,
                });
            }
        } else {
            calm = 0;
        }
        prev = lambda;
    }
    Err(Error::NonConvergence(format!(
        "power iteration did not settle to {tol} in {CAP} steps"
    )))
}
