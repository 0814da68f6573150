//! Letter-count distributions, variance scaling and count-based entropy
//! estimates.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{CountTable, JointCountTable};
use crate::bounds::{BoundKind, EntropyBound, Provenance};
use crate::error::{Error, Result};

/// Natural logarithm of an arbitrarily large positive integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    BigRational::new(num.clone(), den.clone())
        .to_f64()
        .unwrap_or(f64::NAN)
}

/// Summary of the distribution of the letter-0 count at one length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyStats {
    pub n: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub mean: BigRational,
    /// Variance of `n0` (letters squared).
    pub variance: f64,
    pub min_count: usize,
    pub max_count: usize,
    /// `(x, g_n(x))` with `x = e / sqrt(n)`, `e = n0 - n/2` and
    /// `g_n(x) = sqrt(n) b(n, n0) / b(n)`.
    pub scaled_points: Vec<(f64, f64)>,
}

fn serialize_ratio<S: serde::Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

impl FrequencyStats {
    /// Trapezoid-rule integral of the scaled points.
    pub fn scaled_integral(&self) -> f64 {
        self.scaled_points
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum()
    }

    /// `(e, b(n, n/2 + e) / b(n), Gaussian with the same variance at e)`.
    pub fn gaussian_comparison(&self) -> Vec<(f64, f64, f64)> {
        let sqrt_n = (self.n as f64).sqrt();
        self.scaled_points
            .iter()
            .map(|&(x, g)| {
                let e = x * sqrt_n;
                (e, g / sqrt_n, gaussian_density(e, self.variance))
            })
            .collect()
    }

    pub fn stats_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.n,
            crate::format_real(self.variance),
            self.min_count,
            self.max_count
        )
    }

    pub fn scaled_csv(&self, header: bool) -> String {
        let mut out = String::new();
        if header {
            out.push_str("x,g\n");
        }
        for &(x, g) in &self.scaled_points {
            let _ = writeln!(out, "{},{}", crate::format_real(x), crate::format_real(g));
        }
        out
    }
}

/// Density of a centred normal distribution.
pub fn gaussian_density(x: f64, variance: f64) -> f64 {
    (-x * x / (2.0 * variance)).exp() / (2.0 * std::f64::consts::PI * variance).sqrt()
}

/// Mean, variance, extreme counts and rescaled profile of a joint table.
pub fn distribution_stats(joint: &JointCountTable) -> Result<FrequencyStats> {
    let n = joint.n();
    let total = BigInt::from(joint.total());
    if total.is_zero() {
        return Err(Error::DegenerateInput(format!(
            "joint table for n = {n} is empty"
        )));
    }
    let counts: Vec<BigInt> = joint.counts().iter().cloned().map(BigInt::from).collect();
    let first: BigInt = counts
        .iter()
        .enumerate()
        .map(|(n0, c)| c * BigInt::from(n0))
        .sum();
    let mean = BigRational::new(first, total.clone());
    // Exact second central moment: sum c (n0 - mean)^2 / total.
    let second: BigRational = counts
        .iter()
        .enumerate()
        .map(|(n0, c)| {
            let d = BigRational::from_integer(BigInt::from(n0)) - &mean;
            &d * &d * BigRational::from_integer(c.clone())
        })
        .sum();
    let variance = (second / BigRational::from_integer(total.clone()))
        .to_f64()
        .unwrap_or(f64::NAN);
    let (min_count, max_count) = joint.support().expect("nonzero total has support");
    let sqrt_n = (n as f64).sqrt();
    let scaled_points = counts
        .iter()
        .enumerate()
        .map(|(n0, c)| {
            let e = n0 as f64 - n as f64 / 2.0;
            (e / sqrt_n, sqrt_n * ratio_f64(c, &total))
        })
        .collect();
    Ok(FrequencyStats {
        n,
        mean,
        variance,
        min_count,
        max_count,
        scaled_points,
    })
}

fn least_squares(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Ordinary least-squares slope of the variance against `n`.
pub fn variance_slope(stats: &[FrequencyStats]) -> Result<f64> {
    let points: Vec<(f64, f64)> = stats.iter().map(|s| (s.n as f64, s.variance)).collect();
    if points.len() < 2 {
        return Err(Error::DegenerateInput("need at least two lengths".into()));
    }
    least_squares(&points)
        .map(|(slope, _)| slope)
        .ok_or_else(|| Error::DegenerateInput("all lengths are equal".into()))
}

/// `ln(count) / n`, an upper bound on the entropy of any factorial language
/// with `count` words of length `n`.
pub fn entropy_upper_from_count(n: usize, count: &BigUint) -> Result<EntropyBound> {
    if count.is_zero() || n == 0 {
        return Err(Error::DegenerateInput(
            "count bound needs n >= 1 and a nonzero count".into(),
        ));
    }
    Ok(EntropyBound::new(
        ln_biguint(count) / n as f64,
        BoundKind::Upper,
        Provenance::Count {
            n,
            count: count.to_string(),
        },
    ))
}

/// Fit of `c(n) ~ A * growth^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticFit {
    pub amplitude: f64,
    pub growth: f64,
    /// `1 / growth`, the radius of convergence of the counting series.
    pub radius: f64,
}

/// Least-squares fit of `ln c(n) = ln A + n ln(growth)` over `window`.
pub fn fit_asymptotics(table: &CountTable, window: RangeInclusive<usize>) -> Result<AsymptoticFit> {
    let points: Vec<(f64, f64)> = window
        .filter_map(|n| {
            table
                .get(n)
                .filter(|c| !c.is_zero())
                .map(|c| (n as f64, ln_biguint(c)))
        })
        .collect();
    if points.len() < 4 {
        return Err(Error::DegenerateInput(
            "fit window needs at least four nonzero counts".into(),
        ));
    }
    let (slope, intercept) = least_squares(&points)
        .ok_or_else(|| Error::DegenerateInput("fit window is degenerate".into()))?;
    Ok(AsymptoticFit {
        amplitude: intercept.exp(),
        growth: slope.exp(),
        radius: (-slope).exp(),
    })
}
