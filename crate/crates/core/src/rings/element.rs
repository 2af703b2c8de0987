use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use super::arith;
use super::module::StructuredModuleDescriptor;
use super::RingDescriptor;
use crate::error::{Error, Result};

/// Canonical payload of a ring element. Which variant is used is fixed by
/// the ring: integers and residues use `Int`, ℚ and ℤ_(p) use `Frac`,
/// square-zero rings use `Pair`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Elem {
    Int(BigInt),
    Frac(BigRational),
    Pair(Box<Elem>, ModElem),
}

/// Element of a structured module.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ModElem {
    /// `num / p^exp` in ℚ/ℤ_(p), with `0 <= num < p^exp` and `p ∤ num`
    /// unless `num == 0` (then `exp == 0`).
    Prufer { num: BigInt, exp: u32 },
    /// Coordinates in the invariant-factor basis of a finitely presented module.
    Coords(Vec<Elem>),
}

impl ModElem {
    pub fn is_zero(&self) -> bool {
        match self {
            ModElem::Prufer { num, .. } => num.is_zero(),
            ModElem::Coords(c) => c.iter().all(|x| match x {
                Elem::Int(a) => a.is_zero(),
                Elem::Frac(q) => q.is_zero(),
                Elem::Pair(..) => false,
            }),
        }
    }
}

/// An element together with the ring it lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    pub ring: RingDescriptor,
    pub value: Elem,
}

impl RingElement {
    pub fn parse(ring: &RingDescriptor, text: &str) -> Result<Self> {
        let value = Elem::parse_str(ring, text)?;
        Ok(RingElement { ring: ring.clone(), value })
    }

    pub fn to_json(&self) -> Value {
        self.value.to_json(&self.ring)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.value.render(&self.ring))
    }
}

/// Parses `n`, `-n`, `p`, `p^k`, `n^k` with `p` the ring's distinguished prime.
fn parse_atom(token: &str, p: Option<&BigInt>) -> Result<BigInt> {
    let token = token.trim();
    let (neg, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, token),
    };
    let (base, exp) = match body.split_once('^') {
        Some((b, e)) => {
            let e: u32 = e.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in {token:?}")))?;
            (b.trim(), e)
        }
        None => (body, 1),
    };
    let base = if base == "p" {
        p.cloned().ok_or_else(|| Error::Parse(format!("{token:?} uses p but no prime is in scope")))?
    } else {
        base.parse::<BigInt>().map_err(|_| Error::Parse(format!("cannot read {token:?} as an integer")))?
    };
    let v = arith::pow(&base, exp);
    Ok(if neg { -v } else { v })
}

fn parse_rational(token: &str, p: Option<&BigInt>) -> Result<BigRational> {
    match token.split_once('/') {
        Some((a, b)) => {
            let den = parse_atom(b, p)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {token:?}")));
            }
            Ok(BigRational::new(parse_atom(a, p)?, den))
        }
        None => Ok(BigRational::from_integer(parse_atom(token, p)?)),
    }
}

fn scalar_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::Parse(format!("expected a scalar element, got {other}"))),
    }
}

/// `q` as an element of ℚ/ℤ_(p).
pub(crate) fn prufer_from_rational(q: &BigRational, p: &BigInt) -> ModElem {
    let (unit_den, k) = arith::strip(q.denom(), p);
    let modulus = arith::pow(p, k);
    let inv = arith::mod_inverse(&unit_den, &modulus).expect("denominator part is prime to p");
    prufer_canonical(q.numer() * inv, k, p)
}

pub(crate) fn prufer_canonical(num: BigInt, exp: u32, p: &BigInt) -> ModElem {
    let modulus = arith::pow(p, exp);
    let mut num = arith::modulo(&num, &modulus);
    let mut exp = exp;
    if num.is_zero() {
        return ModElem::Prufer { num, exp: 0 };
    }
    while exp > 0 && (&num % p).is_zero() {
        num /= p;
        exp -= 1;
    }
    if exp == 0 {
        num = BigInt::zero();
    }
    ModElem::Prufer { num, exp }
}

impl Elem {
    pub fn int(n: i64) -> Self {
        Elem::Int(BigInt::from(n))
    }

    /// Parses either a bare token (`"12"`, `"3/4"`, `"p"`) or a JSON value.
    pub fn parse_str(ring: &RingDescriptor, text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('[') || t.starts_with('"') {
            let v: Value = serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
            Elem::from_json(ring, &v)
        } else {
            Elem::from_json(ring, &Value::String(t.to_string()))
        }
    }

    pub fn from_json(ring: &RingDescriptor, v: &Value) -> Result<Self> {
        let p = ring.distinguished_prime();
        match ring {
            RingDescriptor::SquareZero(sz) => match v {
                Value::Array(items) if items.len() == 2 => {
                    let a = Elem::from_json(&sz.base, &items[0])?;
                    let m = sz.module.parse_element(&sz.base, &items[1])?;
                    ring.canonical(&Elem::Pair(Box::new(a), m))
                }
                other => {
                    let q = parse_rational(&scalar_text(other)?, p.as_ref())?;
                    ring.from_rational(&q)
                }
            },
            _ => {
                let q = parse_rational(&scalar_text(v)?, p.as_ref())?;
                ring.from_rational(&q).map_err(|e| Error::Parse(e.to_string()))
            }
        }
    }

    pub fn to_json(&self, ring: &RingDescriptor) -> Value {
        match (ring, self) {
            (RingDescriptor::SquareZero(sz), Elem::Pair(a, m)) => {
                Value::Array(vec![a.to_json(&sz.base), sz.module.element_to_json(&sz.base, m)])
            }
            (RingDescriptor::TruncatedCompletion(t), _) => self.to_json(&t.element_ring),
            _ => Value::String(self.scalar_string()),
        }
    }

    /// Text form: the bare token for scalars, compact JSON for pairs.
    pub fn render(&self, ring: &RingDescriptor) -> String {
        match self.to_json(ring) {
            Value::String(s) => s,
            other => other.to_string(),
        }
    }

    fn scalar_string(&self) -> String {
        match self {
            Elem::Int(a) => a.to_string(),
            Elem::Frac(q) if q.denom().is_one() => q.numer().to_string(),
            Elem::Frac(q) => format!("{}/{}", q.numer(), q.denom()),
            Elem::Pair(..) => unreachable!("pair rendered without its ring"),
        }
    }

    pub(crate) fn as_int(&self) -> &BigInt {
        match self {
            Elem::Int(a) => a,
            other => panic!("expected an integer payload, got {other:?}"),
        }
    }

    pub(crate) fn as_frac(&self) -> &BigRational {
        match self {
            Elem::Frac(q) => q,
            other => panic!("expected a fraction payload, got {other:?}"),
        }
    }
}

impl StructuredModuleDescriptor {
    pub(crate) fn parse_element(&self, base: &RingDescriptor, v: &Value) -> Result<ModElem> {
        match self {
            StructuredModuleDescriptor::Prufer(p) => {
                let q = parse_rational(&scalar_text(v)?, Some(p))?;
                Ok(prufer_from_rational(&q, p))
            }
            StructuredModuleDescriptor::FinitelyPresented(fp) => {
                let items = match v {
                    Value::Array(items) => items,
                    other => return Err(Error::Parse(format!("expected coordinate list, got {other}"))),
                };
                if items.len() != fp.slots.len() {
                    return Err(Error::Parse(format!("expected {} coordinates, got {}", fp.slots.len(), items.len())));
                }
                let coords = items.iter().map(|x| Elem::from_json(base, x)).collect::<Result<Vec<_>>>()?;
                self.canonical(base, &ModElem::Coords(coords))
            }
        }
    }

    pub(crate) fn element_to_json(&self, base: &RingDescriptor, m: &ModElem) -> Value {
        match (self, m) {
            (StructuredModuleDescriptor::Prufer(p), ModElem::Prufer { num, exp }) => {
                if num.is_zero() {
                    Value::String("0".into())
                } else {
                    Value::String(format!("{num}/{p}^{exp}"))
                }
            }
            (_, ModElem::Coords(c)) => Value::Array(c.iter().map(|x| x.to_json(base)).collect()),
            _ => unreachable!("module element does not match its descriptor"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_with_prime_symbol() {
        let r = RingDescriptor::localized(5).unwrap();
        assert_eq!(Elem::parse_str(&r, "p").unwrap(), r.int(5));
        assert_eq!(Elem::parse_str(&r, "p^2").unwrap(), r.int(25));
        assert_eq!(Elem::parse_str(&r, "-3/2").unwrap().render(&r), "-3/2");
        assert!(Elem::parse_str(&r, "1/5").is_err());
        assert!(Elem::parse_str(&RingDescriptor::Integers, "p").is_err());
    }

    #[test]
    fn residues_are_reduced() {
        let r = RingDescriptor::integers_mod(12).unwrap();
        assert_eq!(Elem::parse_str(&r, "-1").unwrap().render(&r), "11");
        assert_eq!(Elem::parse_str(&r, "1/5").unwrap().render(&r), "5");
        assert!(Elem::parse_str(&r, "1/2").is_err());
    }

    #[test]
    fn prufer_canonical_forms() {
        let p = BigInt::from(5);
        assert_eq!(prufer_canonical(BigInt::from(10), 2, &p), ModElem::Prufer { num: BigInt::from(2), exp: 1 });
        assert_eq!(prufer_canonical(BigInt::from(25), 2, &p), ModElem::Prufer { num: BigInt::zero(), exp: 0 });
        let q = BigRational::new(BigInt::from(7), BigInt::from(50));
        // 7/50 = 7 * 2^{-1} / 25 and 2^{-1} = 13 mod 25
        assert_eq!(prufer_from_rational(&q, &p), ModElem::Prufer { num: BigInt::from(16), exp: 2 });
    }
}
