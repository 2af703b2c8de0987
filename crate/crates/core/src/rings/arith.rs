//! Small integer helpers shared by the ring implementations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// p-adic valuation of a nonzero integer. Returns `None` for zero.
pub fn valuation(a: &BigInt, p: &BigInt) -> Option<u32> {
    if a.is_zero() {
        return None;
    }
    let mut v = 0;
    let mut x = a.clone();
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return Some(v);
        }
        x = q;
        v += 1;
    }
}

/// Strips every factor of `p` from `a` (which must be nonzero).
pub fn strip(a: &BigInt, p: &BigInt) -> (BigInt, u32) {
    let mut v = 0;
    let mut x = a.clone();
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return (x, v);
        }
        x = q;
        v += 1;
    }
}

pub fn modulo(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

pub fn pow(base: &BigInt, e: u32) -> BigInt {
    num_traits::pow(base.clone(), e as usize)
}

pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Factorisation of a nonzero integer into `(prime, exponent)` pairs, ascending.
/// Trial division; the toolkit only meets desk-scale numbers here.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let (rest, v) = strip(&n, &d);
        if v > 0 {
            out.push((d.clone(), v));
            n = rest;
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: &BigInt) -> bool {
    let f = factor(n);
    f.len() == 1 && f[0].1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_and_strip() {
        let p = BigInt::from(5);
        assert_eq!(valuation(&BigInt::from(250), &p), Some(3));
        assert_eq!(valuation(&BigInt::from(-7), &p), Some(0));
        assert_eq!(valuation(&BigInt::zero(), &p), None);
        assert_eq!(strip(&BigInt::from(250), &p), (BigInt::from(2), 3));
    }

    #[test]
    fn inverse_and_factor() {
        assert_eq!(mod_inverse(&BigInt::from(3), &BigInt::from(25)), Some(BigInt::from(17)));
        assert_eq!(mod_inverse(&BigInt::from(5), &BigInt::from(25)), None);
        assert_eq!(factor(&BigInt::from(360)), vec![(BigInt::from(2), 3), (BigInt::from(3), 2), (BigInt::from(5), 1)]);
        assert!(is_prime(&BigInt::from(97)));
        assert!(!is_prime(&BigInt::from(1)));
    }
}
