//! Small finite fields `GF(p^k)` with table arithmetic.
//!
//! Elements are `u16` indices: the base-`p` digits of an index are the
//! coefficients of a polynomial in the generator, lowest degree first, so the
//! prime subfield is `0..p`.

use crate::error::{Error, Result};
use crate::whb::is_prime;

/// Largest supported field size.
pub const MAX_ORDER: u64 = 256;

#[derive(Debug, Clone)]
pub struct GaloisField {
    p: u64,
    k: u32,
    q: usize,
    /// Coefficients of the monic modulus, lowest degree first, leading 1 omitted.
    modulus: Vec<u64>,
    add: Vec<u16>,
    mul: Vec<u16>,
}

impl GaloisField {
    /// The field of order `q`, which must be a prime power.
    pub fn new(q: u64) -> Result<Self> {
        if !(2..=MAX_ORDER).contains(&q) {
            return Err(Error::input(format!("field order {q} out of range 2..={MAX_ORDER}")));
        }
        let p = (2..=q).find(|d| q % d == 0).expect("q >= 2");
        let mut k = 0;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        if rest != 1 || !is_prime(p) {
            return Err(Error::input(format!("{q} is not a prime power")));
        }
        let modulus = if k == 1 { vec![0] } else { first_irreducible(p, k) };
        let qs = q as usize;
        let mut field = GaloisField { p, k, q: qs, modulus, add: vec![0; qs * qs], mul: vec![0; qs * qs] };
        for a in 0..qs {
            for b in 0..qs {
                field.add[a * qs + b] = field.slow_add(a, b) as u16;
                field.mul[a * qs + b] = field.slow_mul(a, b) as u16;
            }
        }
        Ok(field)
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Modulus coefficients, lowest degree first, including the leading 1.
    pub fn modulus(&self) -> Vec<u64> {
        let mut m = self.modulus.clone();
        m.push(1);
        m
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn pow(&self, a: u16, e: u32) -> u16 {
        let mut r = 1u16;
        for _ in 0..e {
            r = self.mul(r, a);
        }
        r
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, c: u64) -> u16 {
        (c % self.p) as u16
    }

    fn digits(&self, a: usize) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.k as usize);
        let mut a = a as u64;
        for _ in 0..self.k {
            v.push(a % self.p);
            a /= self.p;
        }
        v
    }

    fn index(&self, digits: &[u64]) -> usize {
        digits.iter().rev().fold(0u64, |acc, &d| acc * self.p + d) as usize
    }

    fn slow_add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.digits(a), self.digits(b));
        let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.index(&s)
    }

    fn slow_mul(&self, a: usize, b: usize) -> usize {
        let p = self.p;
        let k = self.k as usize;
        let (x, y) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * k];
        for (i, u) in x.iter().enumerate() {
            for (j, v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u * v) % p;
            }
        }
        // Reduce with t^k = -(m_0 + ... + m_{k-1} t^{k-1}).
        for top in (k..2 * k).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, m) in self.modulus.iter().enumerate() {
                let sub = (c * m) % p;
                prod[top - k + i] = (prod[top - k + i] + p - sub) % p;
            }
        }
        self.index(&prod[..k])
    }
}

/// The first monic irreducible of degree `k` over `F_p`, ordering candidates
/// by their lower coefficients read as a base-`p` number, constant term least
/// significant. Returns the lower coefficients.
fn first_irreducible(p: u64, k: u32) -> Vec<u64> {
    let count = p.pow(k);
    for n in 0..count {
        let mut lower = Vec::with_capacity(k as usize);
        let mut rest = n;
        for _ in 0..k {
            lower.push(rest % p);
            rest /= p;
        }
        let mut poly = lower.clone();
        poly.push(1);
        if is_irreducible(&poly, p) {
            return lower;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = mod_inverse(b[db], p);
    while r.len() > db {
        let top = *r.last().expect("nonempty");
        if top != 0 {
            let c = (top * lead_inv) % p;
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (c * bi) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    (1..p).find(|x| (a * x) % p == 1).expect("nonzero element of a prime field")
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for n in 0..p.pow(d as u32) {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut rest = n;
            for _ in 0..d {
                divisor.push(rest % p);
                rest /= p;
            }
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_moduli() {
        assert_eq!(GaloisField::new(4).unwrap().modulus(), vec![1, 1, 1]);
        assert_eq!(GaloisField::new(8).unwrap().modulus(), vec![1, 1, 0, 1]);
        assert_eq!(GaloisField::new(16).unwrap().modulus(), vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn rejects_non_prime_powers() {
        for q in [0, 1, 6, 12, 100, 512] {
            assert!(GaloisField::new(q).is_err(), "{q}");
        }
    }

    #[test]
    fn field_axioms() {
        for q in [2, 3, 4, 5, 8, 9, 16, 25, 27] {
            let f = GaloisField::new(q).unwrap();
            let n = q as u16;
            for a in 0..n {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                // Inverses exist and a^q = a.
                if a != 0 {
                    assert!((1..n).any(|b| f.mul(a, b) == 1), "q={q} a={a}");
                }
                assert_eq!(f.pow(a, q as u32), a);
                for b in 0..n {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..n {
                        let lhs = f.mul(a, f.add(b, c));
                        let rhs = f.add(f.mul(a, b), f.mul(a, c));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn prime_subfield() {
        let f = GaloisField::new(9).unwrap();
        assert_eq!(f.from_int(7), 1);
        assert_eq!(f.add(2, 1), 0);
    }
}
