//! Quotients `R/I^n`, the finite model of `R̂`, reduction maps and annihilators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ideal::principal_generator;
use super::{arith, Elem, IdealSpec, ModuleInvariant, RingDescriptor, RingElement, RingOps};
use crate::error::{Error, Result};
use crate::rings::module::StructuredModuleDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuotientFlavor {
    /// `I^n`
    Powers,
    /// `I^(n) = (s_1^n, …, s_r^n)`
    GeneratorPowers,
}

/// How the payload ring of a truncated completion relates to `R̂`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CompletionModel {
    /// `R/I^N` is computed exactly; answers are about that finite stage.
    Exact,
    /// `R̂ = ∏ ℤ_p` over the listed primes, each known modulo `p^e`.
    Padic { primes: Vec<(BigInt, u32)> },
}

/// `R/I^n` for a principal ideal with integer generator `g`.
fn quotient_by_generator(ring: &RingDescriptor, g: &BigInt, n: u32) -> Result<RingDescriptor> {
    match ring {
        RingDescriptor::Integers | RingDescriptor::LocalizedAtPrime(_) => {
            if g.is_zero() {
                Ok(ring.clone())
            } else {
                RingDescriptor::integers_mod(arith::pow(g, n))
            }
        }
        RingDescriptor::IntegersMod(m) => RingDescriptor::integers_mod(m.gcd(&arith::pow(g, n))),
        RingDescriptor::Rationals | RingDescriptor::PrimeField(_) => {
            if g.is_zero() {
                Ok(ring.clone())
            } else {
                RingDescriptor::integers_mod(1)
            }
        }
        RingDescriptor::TruncatedCompletion(t) => quotient_by_generator(&t.element_ring, g, n),
        RingDescriptor::SquareZero(sz) => {
            if g.is_zero() {
                return Err(Error::UnsupportedQuotient(format!("{ring} modulo an ideal with zero base part")));
            }
            if !sz.module.absorbed_by(&sz.base, g) {
                return Err(Error::UnsupportedQuotient(format!("{} is not absorbed by ({g}) in {ring}", sz.module)));
            }
            quotient_by_generator(&sz.base, g, n)
        }
    }
}

pub(crate) fn quotient_descriptor(ring: &RingDescriptor, gens: &[Elem], n: u32) -> Result<RingDescriptor> {
    let g = principal_generator(ring, gens)?;
    quotient_by_generator(ring, &g, n)
}

pub(crate) fn completion_model(
    base: &RingDescriptor,
    gens: &[Elem],
    precision: u32,
) -> Result<(CompletionModel, RingDescriptor)> {
    let g = principal_generator(base, gens)?;
    let padic = |g: &BigInt| -> Result<(CompletionModel, RingDescriptor)> {
        let primes = arith::factor(g).into_iter().map(|(p, a)| (p, a * precision)).collect();
        Ok((CompletionModel::Padic { primes }, RingDescriptor::integers_mod(arith::pow(g, precision))?))
    };
    match base {
        RingDescriptor::Integers | RingDescriptor::LocalizedAtPrime(_) if !g.is_zero() && !g.is_one() => padic(&g),
        RingDescriptor::SquareZero(sz) => {
            let reduced = quotient_by_generator(base, &g, precision)?;
            if g.is_one() || !sz.base.is_pid() {
                Ok((CompletionModel::Exact, reduced))
            } else {
                padic(&g)
            }
        }
        RingDescriptor::TruncatedCompletion(_) => Err(Error::unsupported("truncated_completion", base)),
        _ => Ok((CompletionModel::Exact, quotient_by_generator(base, &g, precision)?)),
    }
}

/// A ring homomorphism produced by this toolkit: reduction to a quotient or
/// the map into a truncated completion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingMap {
    source: RingDescriptor,
    target: RingDescriptor,
}

impl RingMap {
    pub(crate) fn new(source: RingDescriptor, target: RingDescriptor) -> Self {
        RingMap { source, target }
    }

    pub fn source(&self) -> &RingDescriptor {
        &self.source
    }

    pub fn target(&self) -> &RingDescriptor {
        &self.target
    }

    /// `R → R̂` for a truncated completion ring.
    pub fn completion(target: &RingDescriptor) -> Result<Self> {
        match target {
            RingDescriptor::TruncatedCompletion(t) => Ok(RingMap::new(t.base.clone(), target.clone())),
            other => Err(Error::InvalidArgument(format!("{other} is not a truncated completion"))),
        }
    }

    /// Reduction between two residue rings `ℤ/m → ℤ/m'` with `m' | m`.
    pub fn residue_reduction(source: &RingDescriptor, target: &RingDescriptor) -> Result<Self> {
        let modulus = |r: &RingDescriptor| match r {
            RingDescriptor::IntegersMod(m) => Some(m.clone()),
            RingDescriptor::TruncatedCompletion(t) => match &t.element_ring {
                RingDescriptor::IntegersMod(m) => Some(m.clone()),
                _ => None,
            },
            _ => None,
        };
        match (modulus(source), modulus(target)) {
            (Some(m), Some(k)) if (&m % &k).is_zero() => Ok(RingMap::new(source.clone(), target.clone())),
            _ => Err(Error::InvalidArgument(format!("no reduction map {source} -> {target}"))),
        }
    }

    pub fn apply(&self, x: &Elem) -> Result<Elem> {
        self.target.from_rational(&self.source.lift_rational(x))
    }

    pub fn compose(&self, after: &RingMap) -> Result<RingMap> {
        if self.target != after.source {
            return Err(Error::RingMismatch(self.target.to_string(), after.source.to_string()));
        }
        Ok(RingMap::new(self.source.clone(), after.target.clone()))
    }
}

/// `R/I^n` (or `R/I^(n)`) with its reduction map. The two flavours agree in
/// every supported class, since all of them have principal ideals.
pub fn quotient_ring(ideal: &IdealSpec, n: u32, flavor: QuotientFlavor) -> Result<(RingDescriptor, RingMap)> {
    if n == 0 {
        return Err(Error::InvalidArgument("quotient exponent must be at least 1".into()));
    }
    let q = match flavor {
        QuotientFlavor::Powers => quotient_descriptor(&ideal.ring, &ideal.generators, n)?,
        QuotientFlavor::GeneratorPowers => quotient_descriptor(&ideal.ring, &ideal.generator_powers(n).generators, 1)?,
    };
    Ok((q.clone(), RingMap::new(ideal.ring.clone(), q)))
}

/// Isomorphism class of `Ann_R(s)`.
pub fn annihilator_of(s: &RingElement) -> Result<ModuleInvariant> {
    let ring = &s.ring;
    let x = &s.value;
    match ring {
        RingDescriptor::Integers
        | RingDescriptor::Rationals
        | RingDescriptor::PrimeField(_)
        | RingDescriptor::LocalizedAtPrime(_) => {
            Ok(if ring.is_zero(x) { ModuleInvariant::free(1) } else { ModuleInvariant::zero() })
        }
        RingDescriptor::IntegersMod(m) => Ok(ModuleInvariant::cyclic(m.gcd(x.as_int()))),
        RingDescriptor::TruncatedCompletion(t) => {
            let validity = ring.validity();
            match &t.model {
                CompletionModel::Exact => {
                    let inner = RingElement { ring: t.element_ring.clone(), value: x.clone() };
                    Ok(annihilator_of(&inner)?.with_validity(validity))
                }
                CompletionModel::Padic { primes } => {
                    let zero_at: Vec<bool> =
                        primes.iter().map(|(p, e)| (x.as_int() % arith::pow(p, *e)).is_zero()).collect();
                    if zero_at.iter().all(|z| *z) {
                        Ok(ModuleInvariant::free(1).with_validity(validity))
                    } else if zero_at.iter().all(|z| !*z) {
                        Ok(ModuleInvariant::zero().with_validity(validity))
                    } else {
                        Err(Error::Inconclusive(format!("{s} vanishes at some but not all primes of {ring}")))
                    }
                }
            }
        }
        RingDescriptor::SquareZero(sz) => {
            let Elem::Pair(a, m) = x else { unreachable!("square-zero payload is a pair") };
            if !m.is_zero() {
                return Err(Error::Inconclusive(format!("annihilator of {s} with nonzero module part")));
            }
            if sz.base.is_zero(a) {
                return Err(Error::Inconclusive(format!("annihilator of zero in {ring} is the whole ring")));
            }
            let g = principal_generator(&sz.base, std::slice::from_ref(a))?;
            match &sz.module {
                StructuredModuleDescriptor::Prufer(p) => {
                    let v = arith::valuation(&g, p).unwrap_or(0);
                    Ok(ModuleInvariant::cyclic(arith::pow(p, v)))
                }
                StructuredModuleDescriptor::FinitelyPresented(fp) => {
                    let factors: Vec<BigInt> =
                        fp.slots.iter().map(|d| if d.is_zero() { BigInt::one() } else { d.gcd(&g) }).collect();
                    Ok(ModuleInvariant::from_cyclic_factors(0, &factors))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(ring: &RingDescriptor, t: &str) -> RingElement {
        RingElement::parse(ring, t).unwrap()
    }

    #[test]
    fn quotients_of_each_class() {
        let z = RingDescriptor::Integers;
        let i = IdealSpec::parse(&z, &["5"]).unwrap();
        assert_eq!(quotient_ring(&i, 3, QuotientFlavor::Powers).unwrap().0, RingDescriptor::integers_mod(125).unwrap());
        let unit = IdealSpec::parse(&z, &["2", "3"]).unwrap();
        assert_eq!(
            quotient_ring(&unit, 1, QuotientFlavor::Powers).unwrap().0,
            RingDescriptor::integers_mod(1).unwrap()
        );
        let r = RingDescriptor::prufer_extension(5).unwrap();
        let i = IdealSpec::parse(&r, &["5"]).unwrap();
        let (q, phi) = quotient_ring(&i, 2, QuotientFlavor::Powers).unwrap();
        assert_eq!(q, RingDescriptor::integers_mod(25).unwrap());
        let x = Elem::parse_str(&r, "[\"7\", \"1/5^3\"]").unwrap();
        assert_eq!(phi.apply(&x).unwrap(), Elem::int(7));
        let z12 = RingDescriptor::integers_mod(12).unwrap();
        let i = IdealSpec::parse(&z12, &["2"]).unwrap();
        assert_eq!(quotient_ring(&i, 5, QuotientFlavor::Powers).unwrap().0, RingDescriptor::integers_mod(4).unwrap());
    }

    #[test]
    fn annihilators() {
        let r = RingDescriptor::prufer_extension(5).unwrap();
        let inv = annihilator_of(&el(&r, "5")).unwrap();
        assert_eq!(inv.torsion, vec![BigInt::from(5)]);
        assert!(annihilator_of(&el(&RingDescriptor::Integers, "5")).unwrap().is_zero());
        let z4 = RingDescriptor::integers_mod(4).unwrap();
        assert_eq!(annihilator_of(&el(&z4, "2")).unwrap().torsion, vec![BigInt::from(2)]);
        let zl = RingDescriptor::localized(5).unwrap();
        let rhat = RingDescriptor::truncated_completion(
            zl,
            vec![Elem::parse_str(&RingDescriptor::localized(5).unwrap(), "5").unwrap()],
            4,
        )
        .unwrap();
        let a = annihilator_of(&el(&rhat, "5")).unwrap();
        assert!(a.is_zero());
        assert_eq!(a.validity, super::super::Validity::ModuloIdealPower(4));
        let nonzero_module = Elem::parse_str(&r, "[\"5\", \"1/5\"]").unwrap();
        assert!(annihilator_of(&RingElement { ring: r.clone(), value: nonzero_module }).is_err());
    }

    #[test]
    fn completion_models() {
        let z = RingDescriptor::Integers;
        let rhat = RingDescriptor::truncated_completion(z.clone(), vec![Elem::int(12)], 2).unwrap();
        let RingDescriptor::TruncatedCompletion(t) = &rhat else { unreachable!() };
        assert_eq!(t.model, CompletionModel::Padic { primes: vec![(BigInt::from(2), 4), (BigInt::from(3), 2)] });
        assert_eq!(t.element_ring, RingDescriptor::integers_mod(144).unwrap());
        let z12 = RingDescriptor::integers_mod(12).unwrap();
        let rhat = RingDescriptor::truncated_completion(z12, vec![Elem::int(2), Elem::int(3)], 3).unwrap();
        let RingDescriptor::TruncatedCompletion(t) = &rhat else { unreachable!() };
        assert_eq!(t.model, CompletionModel::Exact);
        assert_eq!(t.element_ring, RingDescriptor::integers_mod(1).unwrap());
    }
}
