//! Poles of rational generating functions.

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::poly::{Polynomial, RationalFunction};
use crate::error::{Error, Result};

/// Sturm chain of a polynomial, each member scaled by a positive factor.
struct Sturm {
    chain: Vec<Polynomial>,
}

impl Sturm {
    fn new(p: &Polynomial) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            if chain[n - 1].degree() == Some(0) {
                break;
            }
            let r = chain[n - 2].pseudo_remainder(&chain[n - 1]);
            let content = r.content();
            let r = Polynomial::new(r.coefficients().iter().map(|c| -(c / &content)).collect());
            chain.push(r);
        }
        Sturm { chain }
    }

    /// Sign changes along the chain at `m / 2^e`, zeros skipped.
    fn variations(&self, m: &BigInt, e: u32) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.chain {
            let s = p.sign_at_dyadic(m, e);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }
}

/// The dominant singularity `x_c` and `h_p = -ln x_c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominantPole {
    pub x_c: f64,
    pub h: f64,
    /// Isolating interval `(lo, hi]` of width below `1e-12`.
    pub lo: f64,
    pub hi: f64,
}

/// Smallest positive real root of the denominator in `(0, 1]`, isolated by
/// Sturm sequences and bisection on dyadic rationals.
pub fn dominant_pole(rf: &RationalFunction) -> Result<DominantPole> {
    let den = rf.den();
    if den.degree().unwrap_or(0) == 0 {
        return Err(Error::NoPositiveRoot);
    }
    let sturm = Sturm::new(den);
    // Bisect on m / 2^e with lo = m_lo / 2^e, hi = (m_lo + 1) / 2^e.
    const E: u32 = 44;
    let zero = BigInt::from(0);
    let v0 = sturm.variations(&zero, 0);
    if v0 == sturm.variations(&BigInt::from(1), 0) {
        return Err(Error::NoPositiveRoot);
    }
    let (mut lo, mut hi) = (BigInt::from(0), BigInt::from(1u64) << E);
    let v_lo = v0;
    while &hi - &lo > BigInt::from(1) {
        let mid: BigInt = (&lo + &hi) >> 1;
        if sturm.variations(&mid, E) < v_lo {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let scale = (E as f64).exp2();
    let to_f = |m: &BigInt| -> f64 { m.to_string().parse::<f64>().expect("integer") / scale };
    let (lo, hi) = (to_f(&lo), to_f(&hi));
    // Final polish inside the bracket; a root exactly at `hi` is kept.
    let x_c = if den.sign_at_dyadic(&BigInt::from((hi * scale) as u64), E) == 0 {
        hi
    } else {
        newton_in_bracket(den, lo, hi)
    };
    Ok(DominantPole {
        x_c,
        h: -x_c.ln(),
        lo,
        hi,
    })
}

fn newton_in_bracket(p: &Polynomial, lo: f64, hi: f64) -> f64 {
    let d = p.derivative();
    let mut x = 0.5 * (lo + hi);
    for _ in 0..8 {
        let fx = p.eval_f64(x);
        let dx = d.eval_f64(x);
        if dx == 0.0 {
            break;
        }
        let next = x - fx / dx;
        if !(lo..=hi).contains(&next) {
            break;
        }
        x = next;
    }
    x
}

/// All roots of a denominator, with multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleSet {
    pub roots: Vec<(Complex64, usize)>,
    /// Bound on `|den(z)| / sum |c_i| |z|^i` for every listed root.
    pub residual_tolerance: f64,
}

impl PoleSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    /// The positive real root of least modulus.
    pub fn dominant(&self) -> Option<f64> {
        self.roots
            .iter()
            .filter(|(z, _)| z.im.abs() < 1e-9 * z.norm().max(1.0) && z.re > 0.0)
            .map(|(z, _)| z.re)
            .min_by(f64::total_cmp)
    }

    /// `re,im,multiplicity` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,multiplicity\n");
        for (z, m) in &self.roots {
            out.push_str(&format!(
                "{},{},{}\n",
                crate::format_real(z.re),
                crate::format_real(z.im),
                m
            ));
        }
        out
    }
}

fn relative_residual(p: &Polynomial, z: Complex64) -> f64 {
    let scale = p.abs_eval(z.norm());
    if scale == 0.0 {
        0.0
    } else {
        p.eval_complex(z).norm() / scale
    }
}

/// Aberth iteration from the given starting points.
fn aberth(
    p: &Polynomial,
    d: &Polynomial,
    mut z: Vec<Complex64>,
    iterations: usize,
) -> Vec<Complex64> {
    let n = z.len();
    for _ in 0..iterations {
        let mut largest = 0.0f64;
        for i in 0..n {
            let f = p.eval_complex(z[i]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / d.eval_complex(z[i]);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if w.is_finite() {
                z[i] -= w;
                largest = largest.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if largest < 1e-15 {
            break;
        }
    }
    z
}

/// All complex roots of the denominator with relative residual below `tol`.
/// Roots closer than `10 tol` (relative) are merged into one entry with
/// their count as multiplicity.
pub fn all_poles(rf: &RationalFunction, tol: f64) -> Result<PoleSet> {
    let den = rf.den();
    let degree = den.degree().unwrap_or(0);
    if degree == 0 {
        return Err(Error::Precondition("denominator is constant".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Precondition(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let d = den.derivative();
    let coeffs: Vec<f64> = den
        .coefficients()
        .iter()
        .map(|c| c.to_string().parse::<f64>().unwrap_or(f64::NAN))
        .collect();
    // Start on a circle of the geometric-mean root modulus.
    let radius = (coeffs[0].abs() / coeffs[degree].abs()).powf(1.0 / degree as f64);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(degree as u64);
    for attempt in 0..6 {
        let jitter = if attempt == 0 { 0.0 } else { 0.1 };
        let start: Vec<Complex64> = (0..degree)
            .map(|i| {
                let angle = std::f64::consts::TAU * (i as f64 + 0.25) / degree as f64
                    + jitter * rng.gen_range(-1.0..1.0);
                let r = radius * (1.0 + jitter * rng.gen_range(-1.0..1.0));
                Complex64::from_polar(r, angle)
            })
            .collect();
        let z = aberth(den, &d, start, 2000);
        if z.iter()
            .all(|&zi| zi.is_finite() && relative_residual(den, zi) < tol)
        {
            return Ok(PoleSet {
                roots: cluster(z, tol),
                residual_tolerance: tol,
            });
        }
    }
    Err(Error::NonConvergence(format!(
        "root finder did not reach residual {tol} for degree {degree}"
    )))
}

fn cluster(mut z: Vec<Complex64>, tol: f64) -> Vec<(Complex64, usize)> {
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for zi in z {
        let radius = 10.0 * tol * zi.norm().max(1.0);
        match groups
            .iter_mut()
            .find(|(c, m)| (*c / *m as f64 - zi).norm() < radius)
        {
            Some((c, m)) => {
                *c += zi;
                *m += 1;
            }
            None => groups.push((zi, 1)),
        }
    }
    let mut out: Vec<(Complex64, usize)> = groups
        .into_iter()
        .map(|(c, m)| {
            let mut z = c / m as f64;
            if z.im.abs() < 10.0 * tol * z.norm().max(1.0) {
                z.im = 0.0;
            }
            (z, m)
        })
        .collect();
    out.sort_by(|a, b| {
        a.0.norm()
            .total_cmp(&b.0.norm())
            .then(a.0.arg().total_cmp(&b.0.arg()))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_i64s(num), Polynomial::from_i64s(den)).unwrap()
    }

    #[test]
    fn dominant_poles_of_small_functions() {
        let b0 = dominant_pole(&rf(&[1], &[1, -2])).unwrap();
        assert_eq!(b0.x_c, 0.5);
        assert!((b0.h - std::f64::consts::LN_2).abs() < 1e-15);
        let b1 = dominant_pole(&rf(&[1, 1, 1], &[1, -1, -1])).unwrap();
        assert!((b1.x_c - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
        assert!(b1.hi - b1.lo < 1e-12);
        assert!(matches!(
            dominant_pole(&rf(&[1], &[1, 1])),
            Err(Error::NoPositiveRoot)
        ));
        assert!(matches!(
            dominant_pole(&rf(&[1], &[1, 0, 1])),
            Err(Error::NoPositiveRoot)
        ));
    }

    #[test]
    fn pole_sets() {
        let b0 = all_poles(&rf(&[1], &[1, -2]), 1e-12).unwrap();
        assert_eq!(b0.roots.len(), 1);
        assert!((b0.roots[0].0 - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        let b1 = all_poles(&rf(&[1, 1, 1], &[1, -1, -1]), 1e-12).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((b1.roots[0].0.re - (phi - 1.0)).abs() < 1e-12);
        assert!((b1.roots[1].0.re + phi).abs() < 1e-12);
        assert!(b1
            .to_csv()
            .starts_with("re,im,multiplicity\n0.61803398875,0,1\n"));
        // (1 - 2x)^2 (1 + x^2) has a double root.
        let sq = all_poles(&rf(&[1], &[1, -4, 5, -4, 4]), 1e-6).unwrap();
        assert_eq!(sq.total_multiplicity(), 4);
        assert!(sq
            .roots
            .iter()
            .any(|&(z, m)| m == 2 && (z.re - 0.5).abs() < 1e-6));
        assert_eq!(sq.dominant().map(|x| (x * 1e6).round()), Some(5e5));
    }
}
