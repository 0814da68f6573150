//! Bundled reference counts for binary cubefree words beyond desk-scale
//! enumeration: `b(n)` for `n <= 80` and the joint table `b(80, n0)`.
//!
//! The files use the same CSV layout the enumerator writes.

use num_bigint::BigUint;

use super::{CountTable, JointCountTable, Source};
use crate::error::{Error, Result};
use crate::words::{Alphabet, FreenessSpec};

pub const FIXTURE_COUNTS_CSV: &str = include_str!("../../data/binary_cubefree_counts.csv");
pub const FIXTURE_JOINT_CSV: &str = include_str!("../../data/binary_cubefree_joint_n80.csv");

fn data_rows(csv: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    csv.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .filter(|(_, l)| !l.starts_with('n'))
        .map(|(i, l)| (i + 1, l.split(',').map(str::trim).collect()))
}

fn field<T: std::str::FromStr>(fields: &[&str], idx: usize, line: usize) -> Result<T> {
    fields
        .get(idx)
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| Error::Fixture(format!("bad field {idx} on line {line}")))
}

/// Parses `n,count` rows. Lengths must run `0, 1, 2, ...` without gaps.
pub fn parse_counts_csv(
    csv: &str,
    spec: FreenessSpec,
    alphabet: Alphabet,
    source: Source,
) -> Result<CountTable> {
    let mut counts = Vec::new();
    for (line, fields) in data_rows(csv) {
        let n: usize = field(&fields, 0, line)?;
        if n != counts.len() {
            return Err(Error::Fixture(format!(
                "expected n = {} on line {line}",
                counts.len()
            )));
        }
        counts.push(field::<BigUint>(&fields, 1, line)?);
    }
    if counts.first().is_none_or(|c| *c != BigUint::from(1u8)) {
        return Err(Error::Fixture(
            "count table must start with c(0) = 1".into(),
        ));
    }
    Ok(CountTable::new(spec, alphabet, counts, source))
}

/// Parses `n,n0,count` rows for a single `n`; missing `n0` rows are zero.
pub fn parse_joint_csv(csv: &str, source: Source) -> Result<JointCountTable> {
    let mut n_seen = None;
    let mut entries = Vec::new();
    for (line, fields) in data_rows(csv) {
        let n: usize = field(&fields, 0, line)?;
        if *n_seen.get_or_insert(n) != n {
            return Err(Error::Fixture(format!("mixed lengths on line {line}")));
        }
        let n0: usize = field(&fields, 1, line)?;
        if n0 > n {
            return Err(Error::Fixture(format!("n0 > n on line {line}")));
        }
        entries.push((n0, field::<BigUint>(&fields, 2, line)?));
    }
    let n = n_seen.ok_or_else(|| Error::Fixture("empty joint table".into()))?;
    let mut counts = vec![BigUint::default(); n + 1];
    for (n0, c) in entries {
        counts[n0] = c;
    }
    Ok(JointCountTable::new(n, counts, source))
}

/// `b(n)` for binary cubefree words, `n = 0..=80`.
pub fn fixture_counts() -> CountTable {
    parse_counts_csv(
        FIXTURE_COUNTS_CSV,
        FreenessSpec::CUBEFREE,
        Alphabet::BINARY,
        Source::Fixture,
    )
    .expect("bundled count fixture is well formed")
}

/// `b(80, n0)` for binary cubefree words.
pub fn fixture_joint_n80() -> JointCountTable {
    parse_joint_csv(FIXTURE_JOINT_CSV, Source::Fixture)
        .expect("bundled joint fixture is well formed")
}
