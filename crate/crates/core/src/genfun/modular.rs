//! Exact rational generating functions from series coefficients.
//!
//! The minimal linear recurrence is found modulo several word-sized primes
//! by Berlekamp-Massey, the images are combined by Chinese remaindering and
//! lifted back by rational reconstruction. The result is then checked
//! against exact coefficients.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Polynomial, RationalFunction};
use super::transfer::TransferSystem;
use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^62` in decreasing order.
fn primes() -> impl Iterator<Item = u64> {
    (0..)
        .map(|i| (1u64 << 62) - 1 - 2 * i)
        .filter(|&n| is_prime(n))
}

/// Connection polynomial `C` with `C(0) = 1` and length `L` of the shortest
/// recurrence generating `s` over `Z/m`, `m` prime.
fn berlekamp_massey(s: &[u64], m: u64) -> (Vec<u64>, usize) {
    let mut c = vec![1u64];
    let mut b = vec![1u64];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last = 1u64;
    for n in 0..s.len() {
        let mut d = s[n];
        for (i, &ci) in c.iter().enumerate().skip(1).take(n) {
            d = (d + mul_mod(ci, s[n - i], m)) % m;
        }
        if d == 0 {
            shift += 1;
            continue;
        }
        let coef = mul_mod(d, pow_mod(last, m - 2, m), m);
        let t = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            c[i + shift] = (c[i + shift] + m - mul_mod(coef, bi, m)) % m;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = t;
            last = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.resize(l + 1, 0);
    (c, l)
}

/// `n / d` with `|n|, d <= sqrt(m / 2)` and `n = a d (mod m)`, if any.
fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let sign = t1.signum();
    let (n, d) = (r1 * &sign, t1 * sign);
    (n.gcd(&d).is_one()).then_some((n, d))
}

/// Residues of the connection polynomial combined so far.
struct Crt {
    modulus: BigInt,
    residues: Vec<BigInt>,
}

impl Crt {
    fn add(&mut self, image: &[u64], p: u64) {
        let pb = BigInt::from(p);
        if self.residues.is_empty() {
            self.residues = image.iter().map(|&c| BigInt::from(c)).collect();
            self.modulus = pb;
            return;
        }
        // x = r + M ((c - r) M^-1 mod p)
        let m_mod_p: u64 = (&self.modulus % &pb).try_into().expect("reduced");
        let inv = pow_mod(m_mod_p, p - 2, p);
        for (r, &c) in self.residues.iter_mut().zip(image) {
            let r_mod_p: u64 = (&*r % &pb).try_into().expect("reduced");
            let t = mul_mod((c + p - r_mod_p) % p, inv, p);
            *r += &self.modulus * BigInt::from(t);
        }
        self.modulus *= pb;
    }

    fn lift(&self) -> Option<Vec<BigInt>> {
        self.residues
            .iter()
            .map(|r| {
                let (n, d) = rational_reconstruction(r, &self.modulus)?;
                d.is_one().then_some(n)
            })
            .collect()
    }
}

/// The rational function with series `counts`, provided its recurrence has
/// length at most `max_order`. `counts` must hold at least `2 max_order`
/// terms; every term is checked.
pub fn rational_from_series(counts: &[BigUint], max_order: usize) -> Result<RationalFunction> {
    if counts.len() < 2 * max_order {
        return Err(Error::Precondition(format!(
            "{} terms cannot pin down a recurrence of order {max_order}",
            counts.len()
        )));
    }
    let series: Vec<BigInt> = counts.iter().map(|c| BigInt::from(c.clone())).collect();
    let image = |p: u64| -> (Vec<u64>, usize) {
        let pb = BigUint::from(p);
        let s: Vec<u64> = counts
            .iter()
            .map(|c| (c % &pb).try_into().expect("reduced"))
            .collect();
        berlekamp_massey(&s, p)
    };
    let mut crt = Crt {
        modulus: BigInt::one(),
        residues: Vec::new(),
    };
    let mut order = 0;
    let mut previous: Option<Vec<BigInt>> = None;
    for (used, p) in primes().enumerate() {
        let (c, l) = image(p);
        if l > max_order {
            return Err(Error::ReconstructionFailure(format!(
                "no recurrence of order <= {max_order} fits; the degree bound is too small"
            )));
        }
        if l < order {
            // The prime divides a leading coefficient: skip it.
            continue;
        }
        if l > order {
            order = l;
            crt = Crt {
                modulus: BigInt::one(),
                residues: Vec::new(),
            };
            previous = None;
        }
        crt.add(&c, p);
        let lifted = crt.lift();
        if let Some(coeffs) = lifted.as_ref().filter(|_| lifted == previous) {
            let den = Polynomial::new(coeffs.clone());
            let num = den.mul_truncated(&series, order.max(1));
            let rf = RationalFunction::new(num, den)?;
            if rf.series(series.len()) != series {
                return Err(Error::ReconstructionFailure(
                    "reconstructed function disagrees with the series".into(),
                ));
            }
            return Ok(rf);
        }
        previous = lifted;
        if used > 200 {
            break;
        }
    }
    Err(Error::ReconstructionFailure(
        "modular images did not stabilize".into(),
    ))
}

/// `B_p(x)` for the transfer system, assuming `max(d_num, d_den) <=
/// degree_bound`. Verified against `3 degree_bound + 10` exact coefficients.
pub fn exact_generating_function(
    ts: &TransferSystem,
    degree_bound: usize,
) -> Result<RationalFunction> {
    let n_terms = 3 * degree_bound + 10;
    let counts = ts.series(n_terms - 1);
    rational_from_series(&counts, degree_bound + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3215031751));
        let first = primes().next().unwrap();
        assert_eq!(first, (1 << 62) - 57);
    }

    #[test]
    fn berlekamp_massey_on_fibonacci() {
        let s = [1u64, 1, 2, 3, 5, 8, 13, 21, 34];
        let (c, l) = berlekamp_massey(&s, 1_000_000_007);
        assert_eq!(l, 2);
        assert_eq!(c, vec![1, 1_000_000_006, 1_000_000_006]);
    }

    #[test]
    fn reconstruction() {
        let m = BigInt::from(1_000_000_007u64);
        let a = (BigInt::from(3) * BigInt::from(333_333_336u64)).mod_floor(&m);
        // 333333336 is 1/3 mod m, so a = 1.
        assert_eq!(
            rational_reconstruction(&a, &m),
            Some((BigInt::one(), BigInt::one()))
        );
        let half = BigInt::from(500_000_004u64);
        assert_eq!(
            rational_reconstruction(&half, &m),
            Some((BigInt::one(), BigInt::from(2)))
        );
    }

    #[test]
    fn large_coefficients_need_several_primes() {
        let rf = RationalFunction::new(
            Polynomial::from_i64s(&[1, 7]),
            Polynomial::from_i64s(&[1, 0, -123_456_789_012_345]),
        )
        .unwrap();
        let s: Vec<BigUint> = rf
            .series(20)
            .into_iter()
            .map(|c| c.to_biguint().unwrap())
            .collect();
        assert_eq!(rational_from_series(&s, 3).unwrap(), rf);
    }

    #[test]
    fn too_small_a_bound_is_reported() {
        let s: Vec<BigUint> = (0..20u32)
            .map(|n| BigUint::from(2u32).pow(n) + 1u32)
            .collect();
        assert!(matches!(
            rational_from_series(&s, 1),
            Err(Error::ReconstructionFailure(_))
        ));
        assert!(rational_from_series(&s, 2).is_ok());
    }
}
