use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{arith, Elem, RingDescriptor, RingElement, RingOps};
use crate::error::{Error, Result};

/// A finitely generated ideal, recorded by its generator sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealSpec {
    pub ring: RingDescriptor,
    pub generators: Vec<Elem>,
}

impl IdealSpec {
    pub fn new(ring: RingDescriptor, generators: Vec<Elem>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidArgument("an ideal needs at least one generator".into()));
        }
        for g in &generators {
            ring.check(g)?;
        }
        Ok(IdealSpec { ring, generators })
    }

    pub fn parse(ring: &RingDescriptor, tokens: &[&str]) -> Result<Self> {
        let gens = tokens.iter().map(|t| Elem::parse_str(ring, t)).collect::<Result<Vec<_>>>()?;
        IdealSpec::new(ring.clone(), gens)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn element(&self, i: usize) -> RingElement {
        RingElement { ring: self.ring.clone(), value: self.generators[i].clone() }
    }

    /// `(s_1^n, …, s_r^n)`
    pub fn generator_powers(&self, n: u32) -> IdealSpec {
        IdealSpec { ring: self.ring.clone(), generators: self.generators.iter().map(|s| self.ring.pow(s, n)).collect() }
    }

    /// The same generators read in another ring through a reduction map.
    pub fn extend_to(&self, ring: &RingDescriptor) -> Result<IdealSpec> {
        let gens = self
            .generators
            .iter()
            .map(|s| ring.from_rational(&self.ring.lift_rational(s)))
            .collect::<Result<Vec<_>>>()?;
        IdealSpec::new(ring.clone(), gens)
    }

    /// Nonnegative integer `g` with `I = (g)` (up to units) in every ring class
    /// where ideals are principal and generated by an integer. Square-zero
    /// rings report the generator of the ideal of base parts.
    pub fn principal_generator(&self) -> Result<BigInt> {
        principal_generator(&self.ring, &self.generators)
    }
}

pub(crate) fn principal_generator(ring: &RingDescriptor, gens: &[Elem]) -> Result<BigInt> {
    let all_zero = gens.iter().all(|g| ring.is_zero(g));
    match ring {
        RingDescriptor::Integers => Ok(gens.iter().fold(BigInt::zero(), |acc, g| acc.gcd(g.as_int()))),
        RingDescriptor::IntegersMod(m) => Ok(gens.iter().fold(m.clone(), |acc, g| acc.gcd(g.as_int()))),
        RingDescriptor::Rationals | RingDescriptor::PrimeField(_) => {
            Ok(if all_zero { BigInt::zero() } else { BigInt::one() })
        }
        RingDescriptor::LocalizedAtPrime(p) => {
            let v = gens.iter().filter_map(|g| arith::valuation(g.as_frac().numer(), p)).min();
            Ok(v.map_or_else(BigInt::zero, |v| arith::pow(p, v)))
        }
        RingDescriptor::TruncatedCompletion(t) => principal_generator(&t.element_ring, gens),
        RingDescriptor::SquareZero(sz) => {
            let base_parts: Vec<Elem> = gens
                .iter()
                .map(|g| match g {
                    Elem::Pair(a, _) => (**a).clone(),
                    other => other.clone(),
                })
                .collect();
            principal_generator(&sz.base, &base_parts)
        }
    }
}

impl fmt::Display for IdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.render(&self.ring)).collect();
        write!(f, "({})", gens.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_of_principal_classes() {
        let z = RingDescriptor::Integers;
        assert_eq!(IdealSpec::parse(&z, &["4", "6"]).unwrap().principal_generator().unwrap(), BigInt::from(2));
        assert_eq!(IdealSpec::parse(&z, &["0"]).unwrap().principal_generator().unwrap(), BigInt::zero());
        let z12 = RingDescriptor::integers_mod(12).unwrap();
        assert_eq!(IdealSpec::parse(&z12, &["8"]).unwrap().principal_generator().unwrap(), BigInt::from(4));
        let zl = RingDescriptor::localized(3).unwrap();
        assert_eq!(IdealSpec::parse(&zl, &["18", "2/7"]).unwrap().principal_generator().unwrap(), BigInt::from(1));
        assert_eq!(IdealSpec::parse(&zl, &["18", "-9"]).unwrap().principal_generator().unwrap(), BigInt::from(9));
        assert!(IdealSpec::new(z, vec![]).is_err());
    }
}
