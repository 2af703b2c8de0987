//! Exact arithmetic for the supported commutative rings.
//!
//! A [`RingDescriptor`] names a ring from a small closed family; elements are
//! untyped [`Elem`] payloads whose meaning is fixed by the descriptor they are
//! used with. All payloads are kept in canonical form, so structural equality
//! is ring equality (equality modulo `I^N` for truncated completions).

pub mod arith;
mod element;
pub mod ideal;
pub mod invariant;
pub(crate) mod json;
pub mod linear;
pub mod matrix;
pub mod module;
pub mod pid;
mod pid_ring;
mod quotient;
pub mod snf;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use element::{Elem, ModElem, RingElement};
pub use ideal::IdealSpec;
pub use invariant::{ModuleInvariant, Validity};
pub use linear::{cokernel_invariant, smith_normal_form};
pub use matrix::{Mat, MatOps};
pub use module::StructuredModuleDescriptor;
pub use pid::{Pid, RingOps};
pub use pid_ring::PidRing;
pub use quotient::{annihilator_of, quotient_ring, CompletionModel, QuotientFlavor, RingMap};

/// The supported ring classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Integers,
    IntegersMod(BigInt),
    Rationals,
    PrimeField(BigInt),
    /// ℤ_(p)
    LocalizedAtPrime(BigInt),
    TruncatedCompletion(Arc<Truncation>),
    SquareZero(Arc<SquareZeroData>),
}

/// `lim_n R/I^n` known modulo `I^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Truncation {
    pub base: RingDescriptor,
    pub ideal: Vec<Elem>,
    pub precision: u32,
    pub model: CompletionModel,
    /// Ring in which the payloads live: `R/I^N`, represented exactly.
    pub element_ring: RingDescriptor,
}

/// `A ⊕ M` with `M² = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareZeroData {
    pub base: RingDescriptor,
    pub module: StructuredModuleDescriptor,
}

impl RingDescriptor {
    pub fn integers_mod(m: impl Into<BigInt>) -> Result<Self> {
        let m = m.into();
        if !m.is_positive() {
            return Err(Error::InvalidArgument(format!("modulus must be positive, got {m}")));
        }
        Ok(RingDescriptor::IntegersMod(m))
    }

    pub fn prime_field(p: impl Into<BigInt>) -> Result<Self> {
        let p = p.into();
        if !arith::is_prime(&p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        Ok(RingDescriptor::PrimeField(p))
    }

    pub fn localized(p: impl Into<BigInt>) -> Result<Self> {
        let p = p.into();
        if !arith::is_prime(&p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        Ok(RingDescriptor::LocalizedAtPrime(p))
    }

    /// ℤ_(p) ⊕ ℚ/ℤ_(p), the square-zero counterexample ring.
    pub fn prufer_extension(p: impl Into<BigInt>) -> Result<Self> {
        let p = p.into();
        let base = RingDescriptor::localized(p.clone())?;
        RingDescriptor::square_zero(base, StructuredModuleDescriptor::Prufer(p))
    }

    pub fn square_zero(base: RingDescriptor, module: StructuredModuleDescriptor) -> Result<Self> {
        module.check_base(&base)?;
        Ok(RingDescriptor::SquareZero(Arc::new(SquareZeroData { base, module })))
    }

    /// `R̂ = lim R/I^n` at precision `N`.
    pub fn truncated_completion(base: RingDescriptor, ideal: Vec<Elem>, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidArgument("precision must be at least 1".into()));
        }
        if ideal.is_empty() {
            return Err(Error::InvalidArgument("ideal needs at least one generator".into()));
        }
        for g in &ideal {
            base.check(g)?;
        }
        let (model, element_ring) = quotient::completion_model(&base, &ideal, precision)?;
        Ok(RingDescriptor::TruncatedCompletion(Arc::new(Truncation { base, ideal, precision, model, element_ring })))
    }

    /// Integers, rationals, prime fields and ℤ_(p).
    pub fn is_pid(&self) -> bool {
        matches!(
            self,
            RingDescriptor::Integers
                | RingDescriptor::Rationals
                | RingDescriptor::PrimeField(_)
                | RingDescriptor::LocalizedAtPrime(_)
        )
    }

    pub fn is_structured(&self) -> bool {
        matches!(self, RingDescriptor::SquareZero(_))
    }

    /// Precision tag attached to answers computed in this ring.
    pub fn validity(&self) -> Validity {
        match self {
            RingDescriptor::TruncatedCompletion(t) => Validity::ModuloIdealPower(t.precision),
            _ => Validity::Exact,
        }
    }

    /// The prime a bare `p` refers to when parsing elements, if the ring has one.
    pub fn distinguished_prime(&self) -> Option<BigInt> {
        match self {
            RingDescriptor::PrimeField(p) | RingDescriptor::LocalizedAtPrime(p) => Some(p.clone()),
            RingDescriptor::IntegersMod(m) => {
                let f = arith::factor(m);
                (f.len() == 1).then(|| f[0].0.clone())
            }
            RingDescriptor::TruncatedCompletion(t) => t.base.distinguished_prime(),
            RingDescriptor::SquareZero(sz) => match &sz.module {
                StructuredModuleDescriptor::Prufer(p) => Some(p.clone()),
                _ => sz.base.distinguished_prime(),
            },
            _ => None,
        }
    }

    /// Checks that a payload is a canonical element of this ring.
    pub fn check(&self, x: &Elem) -> Result<()> {
        let canon = self.canonical(x)?;
        if &canon == x {
            Ok(())
        } else {
            Err(Error::Parse(format!("{x:?} is not in canonical form for {self}")))
        }
    }

    /// Brings a payload of the right shape into canonical form.
    pub fn canonical(&self, x: &Elem) -> Result<Elem> {
        let bad = || Error::Parse(format!("payload {x:?} does not belong to {self}"));
        match (self, x) {
            (RingDescriptor::Integers, Elem::Int(_)) => Ok(x.clone()),
            (RingDescriptor::IntegersMod(m), Elem::Int(a)) | (RingDescriptor::PrimeField(m), Elem::Int(a)) => {
                Ok(Elem::Int(a.mod_floor(m)))
            }
            (RingDescriptor::Rationals, Elem::Frac(_)) => Ok(x.clone()),
            (RingDescriptor::Rationals, Elem::Int(a)) => Ok(Elem::Frac(BigRational::from_integer(a.clone()))),
            (RingDescriptor::LocalizedAtPrime(p), Elem::Frac(q)) => {
                if (q.denom() % p).is_zero() {
                    Err(Error::Parse(format!("{q} has denominator divisible by {p}")))
                } else {
                    Ok(x.clone())
                }
            }
            (RingDescriptor::LocalizedAtPrime(_), Elem::Int(a)) => Ok(Elem::Frac(BigRational::from_integer(a.clone()))),
            (RingDescriptor::TruncatedCompletion(t), _) => t.element_ring.canonical(x),
            (RingDescriptor::SquareZero(sz), Elem::Pair(a, m)) => {
                Ok(Elem::Pair(Box::new(sz.base.canonical(a)?), sz.module.canonical(&sz.base, m)?))
            }
            _ => Err(bad()),
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<Elem> {
        let not_here = || Error::InvalidArgument(format!("{q} has no image in {self}"));
        match self {
            RingDescriptor::Integers => {
                if q.is_integer() {
                    Ok(Elem::Int(q.to_integer()))
                } else {
                    Err(not_here())
                }
            }
            RingDescriptor::IntegersMod(m) | RingDescriptor::PrimeField(m) => {
                let inv = arith::mod_inverse(q.denom(), m).ok_or_else(not_here)?;
                Ok(Elem::Int((q.numer() * inv).mod_floor(m)))
            }
            RingDescriptor::Rationals => Ok(Elem::Frac(q.clone())),
            RingDescriptor::LocalizedAtPrime(p) => {
                if (q.denom() % p).is_zero() {
                    Err(not_here())
                } else {
                    Ok(Elem::Frac(q.clone()))
                }
            }
            RingDescriptor::TruncatedCompletion(t) => t.element_ring.from_rational(q),
            RingDescriptor::SquareZero(sz) => Ok(Elem::Pair(Box::new(sz.base.from_rational(q)?), sz.module.zero())),
        }
    }

    /// Rational value of an element of ℤ, ℚ, ℤ_(p) or a residue ring
    /// (least nonnegative representative). Square-zero elements report their
    /// base part.
    pub(crate) fn lift_rational(&self, x: &Elem) -> BigRational {
        match x {
            Elem::Int(a) => BigRational::from_integer(a.clone()),
            Elem::Frac(q) => q.clone(),
            Elem::Pair(a, _) => match self {
                RingDescriptor::SquareZero(sz) => sz.base.lift_rational(a),
                _ => unreachable!("pair payload outside a square-zero ring"),
            },
        }
    }

    pub fn is_unit(&self, x: &Elem) -> bool {
        self.inverse(x).is_some()
    }

    pub fn inverse(&self, x: &Elem) -> Option<Elem> {
        match (self, x) {
            (RingDescriptor::Integers, Elem::Int(a)) => a.abs().is_one().then(|| x.clone()),
            (RingDescriptor::IntegersMod(m), Elem::Int(a)) | (RingDescriptor::PrimeField(m), Elem::Int(a)) => {
                if m.is_one() {
                    return Some(Elem::Int(BigInt::zero()));
                }
                arith::mod_inverse(a, m).map(Elem::Int)
            }
            (RingDescriptor::Rationals, Elem::Frac(q)) => (!q.is_zero()).then(|| Elem::Frac(q.recip())),
            (RingDescriptor::LocalizedAtPrime(p), Elem::Frac(q)) => {
                (arith::valuation(q.numer(), p) == Some(0)).then(|| Elem::Frac(q.recip()))
            }
            (RingDescriptor::TruncatedCompletion(t), _) => t.element_ring.inverse(x),
            (RingDescriptor::SquareZero(sz), Elem::Pair(a, m)) => {
                let ai = sz.base.inverse(a)?;
                let ai2 = sz.base.mul(&ai, &ai);
                let minus = sz.base.neg(&ai2);
                let mi = sz.module.scale(&sz.base, &minus, m);
                Some(Elem::Pair(Box::new(ai), mi))
            }
            _ => None,
        }
    }

    pub fn pow(&self, x: &Elem, e: u32) -> Elem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// The underlying PID view, for the kinds that have one.
    pub fn as_pid(&self) -> Result<PidRing> {
        PidRing::new(self)
    }

    pub fn element(&self, value: Elem) -> Result<RingElement> {
        self.check(&value)?;
        Ok(RingElement { ring: self.clone(), value })
    }

    pub fn int(&self, n: i64) -> Elem {
        self.from_int(&BigInt::from(n))
    }
}

impl RingOps for RingDescriptor {
    type E = Elem;

    fn zero(&self) -> Elem {
        self.from_int(&BigInt::zero())
    }

    fn one(&self) -> Elem {
        self.from_int(&BigInt::one())
    }

    fn from_int(&self, n: &BigInt) -> Elem {
        match self {
            RingDescriptor::Integers => Elem::Int(n.clone()),
            RingDescriptor::IntegersMod(m) | RingDescriptor::PrimeField(m) => Elem::Int(n.mod_floor(m)),
            RingDescriptor::Rationals | RingDescriptor::LocalizedAtPrime(_) => {
                Elem::Frac(BigRational::from_integer(n.clone()))
            }
            RingDescriptor::TruncatedCompletion(t) => t.element_ring.from_int(n),
            RingDescriptor::SquareZero(sz) => Elem::Pair(Box::new(sz.base.from_int(n)), sz.module.zero()),
        }
    }

    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (RingDescriptor::Integers, Elem::Int(x), Elem::Int(y)) => Elem::Int(x + y),
            (RingDescriptor::IntegersMod(m), Elem::Int(x), Elem::Int(y))
            | (RingDescriptor::PrimeField(m), Elem::Int(x), Elem::Int(y)) => Elem::Int((x + y).mod_floor(m)),
            (RingDescriptor::Rationals, Elem::Frac(x), Elem::Frac(y))
            | (RingDescriptor::LocalizedAtPrime(_), Elem::Frac(x), Elem::Frac(y)) => Elem::Frac(x + y),
            (RingDescriptor::TruncatedCompletion(t), _, _) => t.element_ring.add(a, b),
            (RingDescriptor::SquareZero(sz), Elem::Pair(x, m), Elem::Pair(y, n)) => {
                Elem::Pair(Box::new(sz.base.add(x, y)), sz.module.add(&sz.base, m, n))
            }
            _ => panic!("payload mismatch in {self}: {a:?} + {b:?}"),
        }
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (RingDescriptor::Integers, Elem::Int(x), Elem::Int(y)) => Elem::Int(x * y),
            (RingDescriptor::IntegersMod(m), Elem::Int(x), Elem::Int(y))
            | (RingDescriptor::PrimeField(m), Elem::Int(x), Elem::Int(y)) => Elem::Int((x * y).mod_floor(m)),
            (RingDescriptor::Rationals, Elem::Frac(x), Elem::Frac(y))
            | (RingDescriptor::LocalizedAtPrime(_), Elem::Frac(x), Elem::Frac(y)) => Elem::Frac(x * y),
            (RingDescriptor::TruncatedCompletion(t), _, _) => t.element_ring.mul(a, b),
            (RingDescriptor::SquareZero(sz), Elem::Pair(x, m), Elem::Pair(y, n)) => {
                // (a, m)(a', m') = (aa', am' + a'm)
                let left = sz.module.scale(&sz.base, x, n);
                let right = sz.module.scale(&sz.base, y, m);
                Elem::Pair(Box::new(sz.base.mul(x, y)), sz.module.add(&sz.base, &left, &right))
            }
            _ => panic!("payload mismatch in {self}: {a:?} * {b:?}"),
        }
    }

    fn neg(&self, a: &Elem) -> Elem {
        match (self, a) {
            (RingDescriptor::Integers, Elem::Int(x)) => Elem::Int(-x),
            (RingDescriptor::IntegersMod(m), Elem::Int(x)) | (RingDescriptor::PrimeField(m), Elem::Int(x)) => {
                Elem::Int((-x).mod_floor(m))
            }
            (RingDescriptor::Rationals, Elem::Frac(x)) | (RingDescriptor::LocalizedAtPrime(_), Elem::Frac(x)) => {
                Elem::Frac(-x)
            }
            (RingDescriptor::TruncatedCompletion(t), _) => t.element_ring.neg(a),
            (RingDescriptor::SquareZero(sz), Elem::Pair(x, m)) => {
                Elem::Pair(Box::new(sz.base.neg(x)), sz.module.neg(&sz.base, m))
            }
            _ => panic!("payload mismatch in {self}: -{a:?}"),
        }
    }

    fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Int(x) => x.is_zero(),
            Elem::Frac(x) => x.is_zero(),
            Elem::Pair(x, m) => self.base_is_zero(x) && m.is_zero(),
        }
    }
}

impl RingDescriptor {
    fn base_is_zero(&self, x: &Elem) -> bool {
        match self {
            RingDescriptor::SquareZero(sz) => sz.base.is_zero(x),
            _ => self.is_zero(x),
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers => f.write_str("Z"),
            RingDescriptor::IntegersMod(m) => write!(f, "Z/{m}"),
            RingDescriptor::Rationals => f.write_str("Q"),
            RingDescriptor::PrimeField(p) => write!(f, "F_{p}"),
            RingDescriptor::LocalizedAtPrime(p) => write!(f, "Z_({p})"),
            RingDescriptor::TruncatedCompletion(t) => {
                let gens: Vec<String> = t.ideal.iter().map(|g| g.render(&t.base)).collect();
                write!(f, "completion of {} at ({}) mod I^{}", t.base, gens.join(", "), t.precision)
            }
            RingDescriptor::SquareZero(sz) => write!(f, "{} (+) {}", sz.base, sz.module),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_zero_product_rule() {
        let r = RingDescriptor::prufer_extension(5).unwrap();
        let a = Elem::parse_str(&r, "[\"2\", \"1/5^1\"]").unwrap();
        let b = Elem::parse_str(&r, "[\"3\", \"2/5^2\"]").unwrap();
        // (2, 1/5)(3, 2/25) = (6, 2*2/25 + 3/5) = (6, 19/25)
        let prod = r.mul(&a, &b);
        assert_eq!(prod.render(&r), "[\"6\",\"19/5^2\"]");
        let m = Elem::parse_str(&r, "[\"0\", \"3/5^1\"]").unwrap();
        let n = Elem::parse_str(&r, "[\"0\", \"7/5^3\"]").unwrap();
        assert!(r.is_zero(&r.mul(&m, &n)));
    }

    #[test]
    fn units_per_kind() {
        let z = RingDescriptor::Integers;
        assert!(z.is_unit(&z.int(-1)));
        assert!(!z.is_unit(&z.int(2)));
        let zl = RingDescriptor::localized(5).unwrap();
        assert!(zl.is_unit(&zl.int(3)));
        assert!(!zl.is_unit(&zl.int(10)));
        let sz = RingDescriptor::prufer_extension(3).unwrap();
        let x = Elem::parse_str(&sz, "[\"2\", \"1/3^2\"]").unwrap();
        let inv = sz.inverse(&x).unwrap();
        assert_eq!(sz.mul(&x, &inv), sz.one());
    }

    #[test]
    fn rejects_bad_constructors() {
        assert!(RingDescriptor::prime_field(6).is_err());
        assert!(RingDescriptor::integers_mod(0).is_err());
        assert!(RingDescriptor::truncated_completion(RingDescriptor::Integers, vec![], 3).is_err());
    }
}
