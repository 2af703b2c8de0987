//! Concrete principal ideal rings used by the linear-algebra kernel.
//!
//! Every implementation supplies a Euclidean-style `div_rem` whose remainder
//! is either zero or strictly smaller under `size`. For the local rings the
//! size is the p-adic valuation, for the integers the absolute value and for
//! fields it is constant.

use std::fmt::Debug;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::arith;

/// Commutative ring arithmetic over an explicit element type.
#[allow(clippy::wrong_self_convention)]
pub trait RingOps: Clone + Debug + Send + Sync {
    type E: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn from_int(&self, n: &BigInt) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;

    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(b))
    }
}

pub trait Pid: RingOps {
    /// Euclidean size of a nonzero element.
    fn size(&self, a: &Self::E) -> BigUint;

    /// `a = q*b + r` with `r == 0` or `size(r) < size(b)`.
    fn div_rem(&self, a: &Self::E, b: &Self::E) -> (Self::E, Self::E);

    /// Returns `(n, u)` with `u` a unit and `u*a = n` the normal associate.
    fn normalize(&self, a: &Self::E) -> (Self::E, Self::E);

    fn unit_inverse(&self, u: &Self::E) -> Option<Self::E>;

    /// Nonnegative integer generating the same ideal as `a` up to units
    /// (0 for the zero ideal, 1 for units).
    fn divisor(&self, a: &Self::E) -> BigInt;

    fn is_unit(&self, a: &Self::E) -> bool {
        self.unit_inverse(a).is_some()
    }

    fn exact_div(&self, a: &Self::E, b: &Self::E) -> Option<Self::E> {
        if self.is_zero(b) {
            return if self.is_zero(a) { Some(self.zero()) } else { None };
        }
        let (q, r) = self.div_rem(a, b);
        self.is_zero(&r).then_some(q)
    }

    fn gcd(&self, a: &Self::E, b: &Self::E) -> Self::E {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !self.is_zero(&y) {
            let (_, r) = self.div_rem(&x, &y);
            x = y;
            y = r;
        }
        if self.is_zero(&x) {
            x
        } else {
            self.normalize(&x).0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Integers;

impl RingOps for Integers {
    type E = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
}

impl Pid for Integers {
    fn size(&self, a: &BigInt) -> BigUint {
        a.magnitude().clone()
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        a.div_mod_floor(b)
    }
    fn normalize(&self, a: &BigInt) -> (BigInt, BigInt) {
        if a.is_negative() {
            (-a, -BigInt::one())
        } else {
            (a.clone(), BigInt::one())
        }
    }
    fn unit_inverse(&self, u: &BigInt) -> Option<BigInt> {
        (u.abs().is_one()).then(|| u.clone())
    }
    fn divisor(&self, a: &BigInt) -> BigInt {
        a.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rationals;

impl RingOps for Rationals {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

impl Pid for Rationals {
    fn size(&self, _: &BigRational) -> BigUint {
        BigUint::zero()
    }
    fn div_rem(&self, a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
        (a / b, BigRational::zero())
    }
    fn normalize(&self, a: &BigRational) -> (BigRational, BigRational) {
        (BigRational::one(), a.recip())
    }
    fn unit_inverse(&self, u: &BigRational) -> Option<BigRational> {
        (!u.is_zero()).then(|| u.recip())
    }
    fn divisor(&self, a: &BigRational) -> BigInt {
        if a.is_zero() {
            BigInt::zero()
        } else {
            BigInt::one()
        }
    }
}

/// The field ℤ/p, residues kept in `0..p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    pub p: BigInt,
}

impl RingOps for PrimeField {
    type E = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one().mod_floor(&self.p)
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.mod_floor(&self.p)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a + b).mod_floor(&self.p)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b).mod_floor(&self.p)
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        (-a).mod_floor(&self.p)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
}

impl Pid for PrimeField {
    fn size(&self, _: &BigInt) -> BigUint {
        BigUint::zero()
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        let inv = arith::mod_inverse(b, &self.p).expect("nonzero residue is invertible");
        ((a * inv).mod_floor(&self.p), BigInt::zero())
    }
    fn normalize(&self, a: &BigInt) -> (BigInt, BigInt) {
        let inv = arith::mod_inverse(a, &self.p).expect("nonzero residue is invertible");
        (BigInt::one(), inv)
    }
    fn unit_inverse(&self, u: &BigInt) -> Option<BigInt> {
        if u.is_zero() {
            None
        } else {
            arith::mod_inverse(u, &self.p)
        }
    }
    fn divisor(&self, a: &BigInt) -> BigInt {
        if a.is_zero() {
            BigInt::zero()
        } else {
            BigInt::one()
        }
    }
}

/// ℤ_(p): fractions whose reduced denominator is prime to `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalIntegers {
    pub p: BigInt,
}

impl LocalIntegers {
    pub fn valuation(&self, a: &BigRational) -> Option<u32> {
        arith::valuation(a.numer(), &self.p)
    }
}

impl RingOps for LocalIntegers {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

impl Pid for LocalIntegers {
    fn size(&self, a: &BigRational) -> BigUint {
        BigUint::from(self.valuation(a).unwrap_or(0))
    }
    fn div_rem(&self, a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
        match (self.valuation(a), self.valuation(b)) {
            (None, _) => (BigRational::zero(), BigRational::zero()),
            (Some(va), Some(vb)) if va >= vb => (a / b, BigRational::zero()),
            _ => (BigRational::zero(), a.clone()),
        }
    }
    fn normalize(&self, a: &BigRational) -> (BigRational, BigRational) {
        let v = self.valuation(a).expect("normalize of nonzero element");
        let n = BigRational::from_integer(arith::pow(&self.p, v));
        let u = &n / a;
        (n, u)
    }
    fn unit_inverse(&self, u: &BigRational) -> Option<BigRational> {
        (self.valuation(u) == Some(0)).then(|| u.recip())
    }
    fn divisor(&self, a: &BigRational) -> BigInt {
        match self.valuation(a) {
            None => BigInt::zero(),
            Some(v) => arith::pow(&self.p, v),
        }
    }
}

/// ℤ_p known modulo p^precision. Residues are kept in `0..p^precision`;
/// a residue of valuation `>= precision` is indistinguishable from zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicPrecision {
    pub p: BigInt,
    pub precision: u32,
    modulus: BigInt,
}

impl PadicPrecision {
    pub fn new(p: BigInt, precision: u32) -> Self {
        let modulus = arith::pow(&p, precision);
        PadicPrecision { p, precision, modulus }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn valuation(&self, a: &BigInt) -> Option<u32> {
        arith::valuation(a, &self.p)
    }
}

impl RingOps for PadicPrecision {
    type E = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one().mod_floor(&self.modulus)
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.mod_floor(&self.modulus)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a + b).mod_floor(&self.modulus)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b).mod_floor(&self.modulus)
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        (-a).mod_floor(&self.modulus)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
}

impl Pid for PadicPrecision {
    fn size(&self, a: &BigInt) -> BigUint {
        BigUint::from(self.valuation(a).unwrap_or(self.precision))
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        let (Some(va), Some(vb)) = (self.valuation(a), self.valuation(b)) else {
            return (BigInt::zero(), a.clone());
        };
        if va < vb {
            return (BigInt::zero(), a.clone());
        }
        let shift = arith::pow(&self.p, vb);
        let unit = b / &shift;
        let inv = arith::mod_inverse(&unit, &self.modulus).expect("unit part is invertible");
        (((a / &shift) * inv).mod_floor(&self.modulus), BigInt::zero())
    }
    fn normalize(&self, a: &BigInt) -> (BigInt, BigInt) {
        let v = self.valuation(a).expect("normalize of nonzero element");
        let shift = arith::pow(&self.p, v);
        let inv = arith::mod_inverse(&(a / &shift), &self.modulus).expect("unit part is invertible");
        (shift.mod_floor(&self.modulus), inv)
    }
    fn unit_inverse(&self, u: &BigInt) -> Option<BigInt> {
        if u.is_zero() {
            return None;
        }
        arith::mod_inverse(u, &self.modulus)
    }
    fn divisor(&self, a: &BigInt) -> BigInt {
        match self.valuation(a) {
            None => BigInt::zero(),
            Some(v) => arith::pow(&self.p, v),
        }
    }
}
