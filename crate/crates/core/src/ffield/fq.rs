use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::poly;

/// Largest base field order for which addition and multiplication tables are built.
pub const MAX_BASE_ORDER: u64 = 1024;

/// An odd prime power `q = p^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u32,
    s: u32,
}

impl PrimePower {
    pub fn new(p: u64, s: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenCharacteristic(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 {
            return Err(Error::InvalidDegree("s must be at least 1".into()));
        }
        let q = (p as u128).checked_pow(s).unwrap_or(u128::MAX);
        if q > MAX_BASE_ORDER as u128 {
            return Err(Error::FieldTooLarge { p, s, max: MAX_BASE_ORDER });
        }
        Ok(PrimePower { p: p as u32, s })
    }

    /// Splits `q` into `p^s`, rejecting anything that is not an odd prime power.
    pub fn from_order(q: u64) -> Result<Self> {
        if q < 3 {
            return Err(Error::Parse(format!("{q} is not an odd prime power")));
        }
        let p = (2..=q).find(|d| q % d == 0).unwrap();
        let mut rest = q;
        let mut s = 0;
        while rest % p == 0 {
            rest /= p;
            s += 1;
        }
        if rest != 1 {
            return Err(Error::Parse(format!("{q} is not a prime power")));
        }
        PrimePower::new(p, s)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.s)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// The finite field GF(q), q = p^s, realised as GF(p)[y]/(g(y)).
///
/// Elements are `u32` codes `c_0 + c_1 p + ... + c_{s-1} p^{s-1}` where
/// `(c_0, ..., c_{s-1})` is the residue of the element in the power basis of `y`.
/// For `s = 1` the code is the residue mod `p` itself. All arithmetic goes
/// through precomputed tables, so the field is cheap to clone.
#[derive(Clone)]
pub struct BaseField {
    order: PrimePower,
    q: u32,
    modulus: Vec<u32>,
    tables: Arc<Tables>,
}

impl fmt::Debug for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseField")
            .field("p", &self.order.p)
            .field("s", &self.order.s)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.modulus == other.modulus
    }
}

impl Eq for BaseField {}

impl BaseField {
    /// GF(p), with the trivial defining polynomial `y`.
    pub fn prime(p: u64) -> Result<Self> {
        let order = PrimePower::new(p, 1)?;
        let pp = order.p;
        let q = pp as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = ((a + b) % q) as u32;
                mul[a * q + b] = ((a * b) % q) as u32;
            }
        }
        let neg = (0..q).map(|a| ((q - a) % q) as u32).collect();
        let mut inv = vec![0; q];
        for a in 1..q {
            inv[a] = (1..q).find(|b| (a * b) % q == 1).unwrap() as u32;
        }
        Ok(BaseField { order, q: pp, modulus: vec![0, 1], tables: Arc::new(Tables { add, mul, neg, inv }) })
    }

    /// GF(p^s), defined by the canonical irreducible of degree `s` over GF(p).
    pub fn new(p: u64, s: u32) -> Result<Self> {
        let order = PrimePower::new(p, s)?;
        let prime = BaseField::prime(p)?;
        if s == 1 {
            return Ok(prime);
        }
        let modulus = poly::find_irreducible(&prime, s as usize);
        let pp = order.p;
        let q = order.q() as usize;
        let digits = |code: usize| -> Vec<u32> {
            let mut c = code;
            (0..s)
                .map(|_| {
                    let d = (c % pp as usize) as u32;
                    c /= pp as usize;
                    d
                })
                .collect()
        };
        let encode = |ds: &[u32]| -> u32 { ds.iter().rev().fold(0u32, |acc, &d| acc * pp + d) };
        let all: Vec<Vec<u32>> = (0..q).map(digits).collect();
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let sum: Vec<u32> = all[a].iter().zip(&all[b]).map(|(x, y)| (x + y) % pp).collect();
                add[a * q + b] = encode(&sum);
                let prod = poly::rem(&prime, &poly::mul(&prime, &all[a], &all[b]), &modulus);
                let mut padded = prod;
                padded.resize(s as usize, 0);
                mul[a * q + b] = encode(&padded);
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u32).collect();
        let mut inv = vec![0; q];
        for a in 1..q {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u32;
        }
        Ok(BaseField { order, q: q as u32, modulus, tables: Arc::new(Tables { add, mul, neg, inv }) })
    }

    pub fn order(&self) -> PrimePower {
        self.order
    }

    pub fn p(&self) -> u32 {
        self.order.p
    }

    pub fn s(&self) -> u32 {
        self.order.s
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic defining polynomial over GF(p), little-endian digits.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.tables.add[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.tables.mul[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.tables.neg[a as usize]
    }

    /// Multiplicative inverse; `inv(0)` is 0.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.tables.inv[a as usize]
    }

    pub fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// The element `k * 1` for an integer `k`.
    pub fn from_int(&self, k: u64) -> u32 {
        (k % self.order.p as u64) as u32
    }

    /// `-1` is a square in GF(q) iff q = 1 (mod 4).
    pub fn minus_one_is_square(&self) -> bool {
        self.q % 4 == 1
    }

    pub fn is_valid(&self, code: u32) -> bool {
        code < self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_orders() {
        assert_eq!(PrimePower::new(2, 1), Err(Error::EvenCharacteristic(2)));
        assert_eq!(PrimePower::new(9, 1), Err(Error::NotPrime(9)));
        assert!(PrimePower::new(3, 0).is_err());
        assert!(matches!(PrimePower::new(3, 7), Err(Error::FieldTooLarge { .. })));
        assert_eq!(PrimePower::from_order(27).unwrap(), PrimePower::new(3, 3).unwrap());
        assert!(PrimePower::from_order(12).is_err());
        assert!(PrimePower::from_order(8).is_err());
    }

    #[test]
    fn gf9_is_a_field() {
        let f = BaseField::new(3, 2).unwrap();
        assert_eq!(f.q(), 9);
        assert_eq!(f.modulus(), &[1, 0, 1]);
        for a in 0..9 {
            assert_eq!(f.add(a, f.neg(a)), 0);
            assert_eq!(f.mul(a, 1), a);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for b in 0..9 {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..9 {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
        // the multiplicative group is cyclic of order 8
        assert!((1..9).any(|g| (1..8).all(|e| f.pow(g, e) != 1)));
    }

    #[test]
    fn minus_one_square_matches_brute_force() {
        for (p, s) in [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
            let f = BaseField::new(p, s).unwrap();
            let m1 = f.neg(1);
            let brute = (0..f.q()).any(|x| f.mul(x, x) == m1);
            assert_eq!(brute, f.minus_one_is_square(), "q = {}", f.q());
        }
    }
}
