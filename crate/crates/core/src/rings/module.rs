//! Modules used as the square-zero part of a ring.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::element::{prufer_canonical, prufer_from_rational};
use super::matrix::Mat;
use super::pid::Pid;
use super::snf::smith_normal_form;
use super::{arith, Elem, ModElem, RingDescriptor, RingOps};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StructuredModuleDescriptor {
    /// ℚ/ℤ_(p)
    Prufer(BigInt),
    FinitelyPresented(FpModule),
}

/// `base^generators / im(relations)`, stored with its invariant factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpModule {
    pub base: RingDescriptor,
    pub relations: Mat<Elem>,
    /// Normalised divisor per surviving cyclic summand, 0 for a free one.
    pub slots: Vec<BigInt>,
}

impl StructuredModuleDescriptor {
    pub fn finitely_presented(base: &RingDescriptor, relations: Mat<Elem>) -> Result<Self> {
        let pid = base.as_pid()?;
        for x in relations.entries() {
            base.check(x)?;
        }
        let snf = smith_normal_form(&pid, &relations);
        let mut slots: Vec<BigInt> =
            snf.diagonal().iter().map(|d| pid.divisor(d)).filter(|d| d != &BigInt::from(1)).collect();
        slots.extend(std::iter::repeat_n(BigInt::zero(), relations.rows() - snf.rank));
        Ok(StructuredModuleDescriptor::FinitelyPresented(FpModule { base: base.clone(), relations, slots }))
    }

    pub(crate) fn check_base(&self, base: &RingDescriptor) -> Result<()> {
        match self {
            StructuredModuleDescriptor::Prufer(p) => match base {
                RingDescriptor::Integers => Ok(()),
                RingDescriptor::LocalizedAtPrime(q) if q == p => Ok(()),
                _ => Err(Error::InvalidArgument(format!("Q/Z_({p}) is not a module over {base}"))),
            },
            StructuredModuleDescriptor::FinitelyPresented(fp) => {
                if &fp.base == base {
                    Ok(())
                } else {
                    Err(Error::RingMismatch(fp.base.to_string(), base.to_string()))
                }
            }
        }
    }

    pub fn zero(&self) -> ModElem {
        match self {
            StructuredModuleDescriptor::Prufer(_) => ModElem::Prufer { num: BigInt::zero(), exp: 0 },
            StructuredModuleDescriptor::FinitelyPresented(fp) => {
                ModElem::Coords(fp.slots.iter().map(|_| fp.base.zero()).collect())
            }
        }
    }

    /// Least representative of `x` modulo the slot divisor `d` in `base`.
    fn reduce(base: &RingDescriptor, x: &Elem, d: &BigInt) -> Elem {
        if d.is_zero() {
            return x.clone();
        }
        let q = base.lift_rational(x);
        let inv = arith::mod_inverse(q.denom(), d).expect("denominator is a unit modulo the slot");
        let r = (q.numer() * inv).mod_floor(d);
        match x {
            Elem::Frac(_) => Elem::Frac(BigRational::from_integer(r)),
            _ => Elem::Int(r),
        }
    }

    pub(crate) fn canonical(&self, base: &RingDescriptor, m: &ModElem) -> Result<ModElem> {
        match (self, m) {
            (StructuredModuleDescriptor::Prufer(p), ModElem::Prufer { num, exp }) => {
                Ok(prufer_canonical(num.clone(), *exp, p))
            }
            (StructuredModuleDescriptor::FinitelyPresented(fp), ModElem::Coords(c)) if c.len() == fp.slots.len() => {
                let mut out = Vec::with_capacity(c.len());
                for (x, d) in c.iter().zip(&fp.slots) {
                    let x = base.canonical(x)?;
                    out.push(Self::reduce(base, &x, d));
                }
                Ok(ModElem::Coords(out))
            }
            _ => Err(Error::Parse(format!("{m:?} is not an element of {self}"))),
        }
    }

    pub(crate) fn add(&self, base: &RingDescriptor, a: &ModElem, b: &ModElem) -> ModElem {
        match (self, a, b) {
            (
                StructuredModuleDescriptor::Prufer(p),
                ModElem::Prufer { num: n1, exp: e1 },
                ModElem::Prufer { num: n2, exp: e2 },
            ) => {
                let e = (*e1).max(*e2);
                let num = n1 * arith::pow(p, e - e1) + n2 * arith::pow(p, e - e2);
                prufer_canonical(num, e, p)
            }
            (StructuredModuleDescriptor::FinitelyPresented(fp), ModElem::Coords(x), ModElem::Coords(y)) => {
                ModElem::Coords(
                    x.iter().zip(y).zip(&fp.slots).map(|((u, v), d)| Self::reduce(base, &base.add(u, v), d)).collect(),
                )
            }
            _ => panic!("module payload mismatch"),
        }
    }

    pub(crate) fn neg(&self, base: &RingDescriptor, a: &ModElem) -> ModElem {
        self.scale(base, &base.neg(&base.one()), a)
    }

    pub(crate) fn scale(&self, base: &RingDescriptor, c: &Elem, a: &ModElem) -> ModElem {
        match (self, a) {
            (StructuredModuleDescriptor::Prufer(p), ModElem::Prufer { num, exp }) => {
                let q = base.lift_rational(c) * BigRational::new(num.clone(), arith::pow(p, *exp));
                prufer_from_rational(&q, p)
            }
            (StructuredModuleDescriptor::FinitelyPresented(fp), ModElem::Coords(x)) => {
                ModElem::Coords(x.iter().zip(&fp.slots).map(|(u, d)| Self::reduce(base, &base.mul(c, u), d)).collect())
            }
            _ => panic!("module payload mismatch"),
        }
    }

    /// Whether `g·M = M`, so that `M` disappears in `R/(g)`.
    pub(crate) fn absorbed_by(&self, base: &RingDescriptor, g: &BigInt) -> bool {
        match self {
            StructuredModuleDescriptor::Prufer(_) => !g.is_zero(),
            StructuredModuleDescriptor::FinitelyPresented(fp) => fp.slots.iter().all(|d| {
                if d.is_zero() {
                    return base.is_unit(&base.from_int(g));
                }
                g.gcd(d) == BigInt::from(1)
            }),
        }
    }
}

impl fmt::Display for StructuredModuleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructuredModuleDescriptor::Prufer(p) => write!(f, "Q/Z_({p})"),
            StructuredModuleDescriptor::FinitelyPresented(fp) => {
                let parts: Vec<String> =
                    fp.slots.iter().map(|d| if d.is_zero() { "R".to_string() } else { format!("R/{d}") }).collect();
                if parts.is_empty() {
                    f.write_str("0")
                } else {
                    f.write_str(&parts.join(" + "))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presented_module_slots() {
        let z = RingDescriptor::Integers;
        let rel = Mat::from_rows(vec![vec![Elem::int(2), Elem::int(0)], vec![Elem::int(0), Elem::int(3)]], 2).unwrap();
        let m = StructuredModuleDescriptor::finitely_presented(&z, rel).unwrap();
        let StructuredModuleDescriptor::FinitelyPresented(fp) = &m else { unreachable!() };
        assert_eq!(fp.slots, vec![BigInt::from(6)]);
        let x = ModElem::Coords(vec![Elem::int(5)]);
        let y = m.add(&z, &x, &x);
        assert_eq!(y, ModElem::Coords(vec![Elem::int(4)]));
        assert!(m.absorbed_by(&z, &BigInt::from(5)));
        assert!(!m.absorbed_by(&z, &BigInt::from(2)));
    }

    #[test]
    fn prufer_scaling_kills_low_powers() {
        let z5 = RingDescriptor::localized(5).unwrap();
        let m = StructuredModuleDescriptor::Prufer(BigInt::from(5));
        let x = ModElem::Prufer { num: BigInt::from(3), exp: 1 };
        assert!(m.scale(&z5, &z5.int(5), &x).is_zero());
        let half = Elem::Frac(BigRational::new(1.into(), 2.into()));
        assert_eq!(m.scale(&z5, &half, &x), ModElem::Prufer { num: BigInt::from(4), exp: 1 });
    }
}
