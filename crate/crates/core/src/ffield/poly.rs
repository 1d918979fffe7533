//! Dense univariate polynomials over a [`BaseField`], stored little-endian.
//!
//! Only what the tower construction needs: products, remainders, gcd and
//! Rabin's irreducibility test.

use crate::ffield::fq::BaseField;

pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Degree of a trimmed polynomial; `None` for zero.
pub fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(f: &BaseField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let len = a.len().max(b.len());
    let out = (0..len).map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect();
    trim(out)
}

pub fn sub(f: &BaseField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let nb: Vec<u32> = b.iter().map(|&c| f.neg(c)).collect();
    add(f, a, &nb)
}

pub fn mul(f: &BaseField, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Remainder of `a` modulo a nonzero `m`.
pub fn rem(f: &BaseField, a: &[u32], m: &[u32]) -> Vec<u32> {
    let dm = degree(m).expect("division by the zero polynomial");
    let lead_inv = f.inv(m[dm]);
    let mut r = trim(a.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let factor = f.mul(r[dr], lead_inv);
        let shift = dr - dm;
        for (k, &c) in m.iter().enumerate().take(dm + 1) {
            r[shift + k] = f.sub(r[shift + k], f.mul(factor, c));
        }
        r = trim(r);
    }
    r
}

pub fn mulmod(f: &BaseField, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &BaseField, base: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut acc = rem(f, &[1], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &b, m);
        }
        b = mulmod(f, &b, &b, m);
        e >>= 1;
    }
    acc
}

/// Monic gcd.
pub fn gcd(f: &BaseField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    match degree(&x) {
        None => x,
        Some(d) => {
            let li = f.inv(x[d]);
            x.iter().map(|&c| f.mul(c, li)).collect()
        }
    }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `m` of degree `d` is irreducible over GF(q) iff
/// `x^(q^d) = x mod m` and `gcd(x^(q^(d/r)) - x, m) = 1` for every prime `r | d`.
pub fn is_irreducible(f: &BaseField, m: &[u32]) -> bool {
    let Some(d) = degree(m) else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let q = f.q() as u64;
    let x = vec![0, 1];
    // frob[k] = x^(q^k) mod m
    let mut frob = vec![rem(f, &x, m)];
    for k in 1..=d {
        let next = powmod(f, &frob[k - 1], q, m);
        frob.push(next);
    }
    if trim(frob[d].clone()) != rem(f, &x, m) {
        return false;
    }
    prime_factors(d).into_iter().all(|r| {
        let h = sub(f, &frob[d / r], &x);
        degree(&gcd(f, &h, m)) == Some(0)
    })
}

/// The least monic irreducible of the given degree, scanning the low
/// coefficients `(c_0, ..., c_{d-1})` in increasing order of `sum c_i q^i`.
pub fn find_irreducible(f: &BaseField, degree: usize) -> Vec<u32> {
    assert!(degree >= 1, "irreducible polynomials have degree >= 1");
    let q = f.q();
    let mut coeffs = vec![0u32; degree + 1];
    coeffs[degree] = 1;
    loop {
        if is_irreducible(f, &coeffs) {
            return coeffs;
        }
        // odometer on c_0 (least significant) .. c_{d-1}
        let mut k = 0;
        loop {
            coeffs[k] += 1;
            if coeffs[k] < q {
                break;
            }
            coeffs[k] = 0;
            k += 1;
            assert!(k < degree, "no irreducible of degree {degree} found");
        }
    }
}
