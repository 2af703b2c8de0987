use num_bigint::{BigInt, BigUint};

use super::pid::{Integers, LocalIntegers, Pid, PrimeField, Rationals, RingOps};
use super::{Elem, RingDescriptor};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum Kind {
    Z,
    Q,
    Fp(PrimeField),
    Loc(LocalIntegers),
}

/// A PID-class [`RingDescriptor`] viewed through the [`Pid`] interface, so
/// the Smith normal form kernel can run directly on [`Elem`] matrices.
#[derive(Debug, Clone)]
pub struct PidRing {
    kind: Kind,
    descriptor: RingDescriptor,
}

impl PidRing {
    pub fn new(ring: &RingDescriptor) -> Result<Self> {
        let kind = match ring {
            RingDescriptor::Integers => Kind::Z,
            RingDescriptor::Rationals => Kind::Q,
            RingDescriptor::PrimeField(p) => Kind::Fp(PrimeField { p: p.clone() }),
            RingDescriptor::LocalizedAtPrime(p) => Kind::Loc(LocalIntegers { p: p.clone() }),
            other => return Err(Error::unsupported("smith_normal_form", other)),
        };
        Ok(PidRing { kind, descriptor: ring.clone() })
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.descriptor
    }
}

macro_rules! dispatch {
    ($self:expr, $wrap_int:ident, $wrap_frac:ident, |$r:ident, $conv:ident| $body:expr) => {
        match &$self.kind {
            Kind::Z => {
                let $r = &Integers;
                let $conv = |e: &Elem| e.as_int().clone();
                let out = $body;
                $wrap_int(out)
            }
            Kind::Fp(f) => {
                let $r = f;
                let $conv = |e: &Elem| e.as_int().clone();
                let out = $body;
                $wrap_int(out)
            }
            Kind::Q => {
                let $r = &Rationals;
                let $conv = |e: &Elem| e.as_frac().clone();
                let out = $body;
                $wrap_frac(out)
            }
            Kind::Loc(l) => {
                let $r = l;
                let $conv = |e: &Elem| e.as_frac().clone();
                let out = $body;
                $wrap_frac(out)
            }
        }
    };
}

fn wi(x: BigInt) -> Elem {
    Elem::Int(x)
}
fn wf(x: num_rational::BigRational) -> Elem {
    Elem::Frac(x)
}
fn pair_i((a, b): (BigInt, BigInt)) -> (Elem, Elem) {
    (Elem::Int(a), Elem::Int(b))
}
fn pair_f((a, b): (num_rational::BigRational, num_rational::BigRational)) -> (Elem, Elem) {
    (Elem::Frac(a), Elem::Frac(b))
}
fn opt_i(x: Option<BigInt>) -> Option<Elem> {
    x.map(Elem::Int)
}
fn opt_f(x: Option<num_rational::BigRational>) -> Option<Elem> {
    x.map(Elem::Frac)
}
fn same<T>(x: T) -> T {
    x
}

impl RingOps for PidRing {
    type E = Elem;

    fn zero(&self) -> Elem {
        self.descriptor.zero()
    }
    fn one(&self) -> Elem {
        self.descriptor.one()
    }
    fn from_int(&self, n: &BigInt) -> Elem {
        self.descriptor.from_int(n)
    }
    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        dispatch!(self, wi, wf, |r, c| r.add(&c(a), &c(b)))
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        dispatch!(self, wi, wf, |r, c| r.mul(&c(a), &c(b)))
    }
    fn neg(&self, a: &Elem) -> Elem {
        dispatch!(self, wi, wf, |r, c| r.neg(&c(a)))
    }
    fn is_zero(&self, a: &Elem) -> bool {
        self.descriptor.is_zero(a)
    }
}

impl Pid for PidRing {
    fn size(&self, a: &Elem) -> BigUint {
        dispatch!(self, same, same, |r, c| r.size(&c(a)))
    }
    fn div_rem(&self, a: &Elem, b: &Elem) -> (Elem, Elem) {
        dispatch!(self, pair_i, pair_f, |r, c| r.div_rem(&c(a), &c(b)))
    }
    fn normalize(&self, a: &Elem) -> (Elem, Elem) {
        dispatch!(self, pair_i, pair_f, |r, c| r.normalize(&c(a)))
    }
    fn unit_inverse(&self, u: &Elem) -> Option<Elem> {
        dispatch!(self, opt_i, opt_f, |r, c| r.unit_inverse(&c(u)))
    }
    fn divisor(&self, a: &Elem) -> BigInt {
        dispatch!(self, same, same, |r, c| r.divisor(&c(a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::matrix::Mat;
    use crate::rings::snf::smith_normal_form;

    #[test]
    fn snf_runs_on_tagged_elements() {
        let r = RingDescriptor::localized(5).unwrap();
        let pid = r.as_pid().unwrap();
        let a = Mat::from_rows(vec![vec![r.int(10), r.int(3)], vec![r.int(25), r.int(0)]], 2).unwrap();
        let s = smith_normal_form(&pid, &a);
        assert_eq!(s.rank, 2);
        assert_eq!(pid.divisor(&s.d[(0, 0)]), BigInt::from(1));
        assert_eq!(pid.divisor(&s.d[(1, 1)]), BigInt::from(25));
        assert!(RingDescriptor::integers_mod(4).unwrap().as_pid().is_err());
    }
}
