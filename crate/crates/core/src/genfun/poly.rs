//! Integer polynomials and rational generating functions.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Polynomial with exact integer coefficients in ascending powers. The
/// highest stored coefficient is nonzero; the zero polynomial stores none.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coefficients: Vec<BigInt>,
}

impl Polynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Polynomial { coefficients }
    }

    pub fn from_i64s(coefficients: &[i64]) -> Self {
        Polynomial::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::from_i64s(&[1])
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coefficients.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coefficients.last()
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    /// The product truncated below `x^n`.
    pub fn mul_truncated(&self, series: &[BigInt], n: usize) -> Polynomial {
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.coefficients.iter().enumerate().take(n) {
            for (j, b) in series.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coefficients
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn scale_div(&self, d: &BigInt) -> Polynomial {
        Polynomial::new(self.coefficients.iter().map(|c| c / d).collect())
    }

    fn neg(&self) -> Polynomial {
        Polynomial::new(self.coefficients.iter().map(|c| -c).collect())
    }

    /// Divided by its content, with positive leading coefficient.
    pub fn primitive_part(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let p = self.scale_div(&self.content());
        if p.leading().is_some_and(Signed::is_negative) {
            p.neg()
        } else {
            p
        }
    }

    /// A positive multiple of `self mod b`, computed over the integers.
    pub fn pseudo_remainder(&self, b: &Polynomial) -> Polynomial {
        let db = b.degree().expect("nonzero divisor");
        let lb = b.leading().expect("nonzero divisor");
        let (scale, sign) = (lb.abs(), lb.signum());
        let mut r = self.coefficients.clone();
        while r.len() > db {
            let top = r.len() - 1;
            let lr = &r[top] * &sign;
            let shift = top - db;
            for c in r.iter_mut() {
                *c *= &scale;
            }
            for (j, bc) in b.coefficients.iter().enumerate() {
                r[shift + j] -= &lr * bc;
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Polynomial::new(r)
    }

    /// Exact quotient when `divisor` divides `self` in `Z[x]`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let db = divisor.degree()?;
        let lb = divisor.leading()?.clone();
        let mut r = self.coefficients.clone();
        if r.len() <= db {
            return r.is_empty().then(Polynomial::zero);
        }
        let mut q = vec![BigInt::zero(); r.len() - db];
        for top in (db..r.len()).rev() {
            let (c, rem) = r[top].div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (j, bc) in divisor.coefficients.iter().enumerate() {
                r[top - db + j] -= &c * bc;
            }
            q[top - db] = c;
        }
        r.iter().all(Zero::is_zero).then(|| Polynomial::new(q))
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_remainder(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| {
                acc * z + c.to_f64().unwrap_or(f64::NAN)
            })
    }

    /// `sum |c_i| |z|^i`, the scale against which residuals are measured.
    pub fn abs_eval(&self, r: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.abs().to_f64().unwrap_or(f64::NAN))
    }

    /// Sign of the value at `m / 2^e`.
    pub fn sign_at_dyadic(&self, m: &BigInt, e: u32) -> i8 {
        // Horner on the homogenized form sum c_i m^i 2^(e (d - i)).
        let scale = BigInt::one() << e;
        let mut acc = BigInt::zero();
        let mut pow = BigInt::one();
        for c in self.coefficients.iter().rev() {
            acc = acc * m + c * &pow;
            pow *= &scale;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// Human-readable form such as `1 + 2x - x^2`.
    pub fn to_pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{i}"),
            };
            if i == 0 || !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            out.push_str(&mono);
        }
        out
    }

    /// `c0,c1,...`.
    pub fn to_coefficient_list(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self.coefficients.iter().map(ToString::to_string).collect();
        parts.join(",")
    }

    pub fn parse_coefficient_list(s: &str) -> Result<Polynomial> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Format(format!("bad coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Polynomial::new)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pretty())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coefficients.iter().map(ToString::to_string))
    }
}

/// `num / den` with `gcd(num, den) = 1` and `den(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Cancels the gcd and scales so that `den(0) = 1`.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.coeff(0).is_zero() {
            return Err(Error::DegenerateInput("denominator vanishes at 0".into()));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree().unwrap_or(0) > 0 {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        } else {
            (num, den)
        };
        let c = den.coeff(0);
        if !c.is_one() {
            let unit = if c.is_negative() {
                -BigInt::one()
            } else {
                BigInt::one()
            };
            let d = &c * &unit;
            let common = num.content().gcd(&den.content()).gcd(&d);
            if common != d {
                return Err(Error::DegenerateInput(format!(
                    "cannot normalize den(0) = {c} with integer coefficients"
                )));
            }
            num = num.scale_div(&c);
            den = den.scale_div(&c);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// `(deg num, deg den)`, with the zero polynomial of degree 0.
    pub fn degrees(&self) -> (usize, usize) {
        (
            self.num.degree().unwrap_or(0),
            self.den.degree().unwrap_or(0),
        )
    }

    /// The first `n` coefficients of the power series.
    pub fn series(&self, n: usize) -> Vec<BigInt> {
        let d = self.den.coefficients();
        let mut out: Vec<BigInt> = Vec::with_capacity(n);
        for i in 0..n {
            let mut s = self.num.coeff(i);
            for (j, dj) in d.iter().enumerate().skip(1).take(i) {
                s -= dj * &out[i - j];
            }
            out.push(s);
        }
        out
    }

    /// Does the series start with `counts`?
    pub fn matches_counts(&self, counts: &[BigUint]) -> bool {
        self.series(counts.len())
            .iter()
            .zip(counts)
            .all(|(a, b)| a.to_biguint().as_ref() == Some(b))
    }

    /// `num: c0,c1,... / den: c0,c1,...`.
    pub fn to_coefficient_string(&self) -> String {
        format!(
            "num: {} / den: {}",
            self.num.to_coefficient_list(),
            self.den.to_coefficient_list()
        )
    }

    pub fn parse_coefficient_string(s: &str) -> Result<Self> {
        let bad = || Error::Format(format!("expected `num: .. / den: ..`, got {s:?}"));
        let (n, d) = s.split_once('/').ok_or_else(bad)?;
        let n = n.trim().strip_prefix("num:").ok_or_else(bad)?;
        let d = d.trim().strip_prefix("den:").ok_or_else(bad)?;
        RationalFunction::new(
            Polynomial::parse_coefficient_list(n)?,
            Polynomial::parse_coefficient_list(d)?,
        )
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_i64s(c)
    }

    #[test]
    fn arithmetic_and_gcd() {
        let a = p(&[1, -1]).mul(&p(&[2, 3, 1]));
        assert_eq!(a, p(&[2, 1, -2, -1]));
        assert_eq!(a.degree(), Some(3));
        assert_eq!(a.derivative(), p(&[1, -4, -3]));
        let g = a.gcd(&p(&[1, -1]).mul(&p(&[5, 1])));
        assert_eq!(g, p(&[-1, 1]));
        assert_eq!(a.div_exact(&p(&[1, -1])), Some(p(&[2, 3, 1])));
        assert_eq!(a.div_exact(&p(&[1, 5])), None);
        assert!(p(&[0, 0]).is_zero());
    }

    #[test]
    fn canonical_form() {
        let rf = RationalFunction::new(
            p(&[1, 1, 1]).mul(&p(&[1, 2])),
            p(&[1, -1, -1]).mul(&p(&[1, 2])),
        )
        .unwrap();
        assert_eq!(rf.to_coefficient_string(), "num: 1,1,1 / den: 1,-1,-1");
        assert_eq!(rf.to_string(), "(1 + x + x^2)/(1 - x - x^2)");
        let neg = RationalFunction::new(p(&[-2]), p(&[-2, 4])).unwrap();
        assert_eq!(neg.to_coefficient_string(), "num: 1 / den: 1,-2");
        assert!(RationalFunction::new(p(&[1]), p(&[2, 1])).is_err());
        assert!(RationalFunction::new(p(&[1]), p(&[0, 1])).is_err());
        let s: Vec<i64> = rf.series(7).iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(s, vec![1, 2, 4, 6, 10, 16, 26]);
        assert_eq!(
            RationalFunction::parse_coefficient_string(&rf.to_coefficient_string()).unwrap(),
            rf
        );
        assert_eq!(
            RationalFunction::parse_coefficient_string("num: 1,1,1/den: 1,-1,-1").unwrap(),
            rf
        );
        assert!(RationalFunction::parse_coefficient_string("1,1,1 / 1,-1,-1").is_err());
    }

    #[test]
    fn dyadic_signs() {
        // 1 - x - x^2 has its root at 0.618...
        let d = p(&[1, -1, -1]);
        assert_eq!(d.sign_at_dyadic(&BigInt::from(1), 1), 1);
        assert_eq!(d.sign_at_dyadic(&BigInt::from(3), 2), -1);
        assert_eq!(p(&[-1, 2]).sign_at_dyadic(&BigInt::from(1), 1), 0);
    }
}
