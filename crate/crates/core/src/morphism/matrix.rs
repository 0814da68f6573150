//! Substitution matrices and their Perron-Frobenius vectors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{linalg::nullspace, Morphism};
use crate::error::{Error, Result};

/// `M[i][j]` = occurrences of target letter `i` in the image of source
/// letter `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubstitutionMatrix {
    entries: Vec<Vec<u64>>,
}

impl SubstitutionMatrix {
    pub fn of(m: &Morphism) -> Self {
        let entries = m
            .target()
            .letters()
            .map(|b| m.images().iter().map(|w| w.count(b) as u64).collect())
            .collect();
        SubstitutionMatrix { entries }
    }

    pub fn from_rows(entries: Vec<Vec<u64>>) -> Result<Self> {
        let cols = entries.first().map_or(0, Vec::len);
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(SubstitutionMatrix { entries })
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.cols())
            .map(|j| self.entries.iter().map(|r| r[j]).sum())
            .collect()
    }

    /// Collapses a `s x rs` matrix to `s x s` by grouping source columns
    /// `g r .. g r + r - 1`. Every column of a group must be identical.
    pub fn collapse(&self, r: usize) -> Result<SubstitutionMatrix> {
        let (rows, cols) = (self.rows(), self.cols());
        if r == 0 || cols % r != 0 || cols / r != rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot group {cols} source letters into {rows} groups of {r}"
            )));
        }
        for g in 0..rows {
            let first = g * r;
            for j in first + 1..first + r {
                if let Some(b) = (0..rows).find(|&b| self.entries[b][j] != self.entries[b][first]) {
                    return Err(Error::ColumnStatistics {
                        letter: b as u8,
                        group: g,
                        first: first as u8,
                        second: j as u8,
                        left: self.entries[b][first] as usize,
                        right: self.entries[b][j] as usize,
                    });
                }
            }
        }
        let entries = self
            .entries
            .iter()
            .map(|row| (0..rows).map(|g| row[g * r]).collect())
            .collect();
        Ok(SubstitutionMatrix { entries })
    }

    /// Normalized nonnegative rational solution of `M f = eigenvalue f`.
    pub fn perron_frobenius(&self, eigenvalue: u64) -> Result<Vec<BigRational>> {
        let n = self.rows();
        if n != self.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix is not square",
                n,
                self.cols()
            )));
        }
        let shifted: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = if i == j { eigenvalue as i64 } else { 0 };
                        BigRational::from_integer(BigInt::from(self.entries[i][j] as i64 - d))
                    })
                    .collect()
            })
            .collect();
        let mut basis = nullspace(&shifted);
        if basis.len() != 1 {
            return Err(Error::NonUniqueEigenvector(basis.len()));
        }
        let v = basis.pop().expect("one basis vector");
        let total: BigRational = v.iter().sum();
        if total.is_zero() {
            return Err(Error::Precondition("eigenvector has zero sum".into()));
        }
        let f: Vec<BigRational> = v.into_iter().map(|x| x / &total).collect();
        if f.iter().any(Signed::is_negative) {
            return Err(Error::Precondition("eigenvector is not nonnegative".into()));
        }
        Ok(f)
    }

    /// Exact check of `M f = eigenvalue f`.
    pub fn is_eigenvector(&self, f: &[BigRational], eigenvalue: u64) -> bool {
        f.len() == self.cols()
            && self.entries.iter().zip(f).all(|(row, fi)| {
                let lhs: BigRational = row.iter().zip(f).map(|(&m, x)| x * BigInt::from(m)).sum();
                lhs == fi * BigInt::from(eigenvalue)
            })
    }
}
