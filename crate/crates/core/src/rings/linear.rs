//! Ring-level entry points to the Smith normal form kernel.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::matrix::Mat;
use super::pid::{Integers, PadicPrecision};
use super::snf::{self, Snf};
use super::{CompletionModel, Elem, ModuleInvariant, PidRing, RingDescriptor};
use crate::error::{Error, Result};

/// `U·A·V = D` over a PID-class ring.
pub fn smith_normal_form(ring: &RingDescriptor, a: &Mat<Elem>) -> Result<Snf<PidRing>> {
    let pid = ring.as_pid()?;
    Ok(snf::smith_normal_form(&pid, a))
}

/// Integer lift of a residue-ring matrix.
pub(crate) fn lift_to_integers(a: &Mat<Elem>) -> Mat<BigInt> {
    a.map(|x| x.as_int().clone())
}

/// Invariant of `ℤ^rows / (im A + m·ℤ^rows)`.
pub(crate) fn modular_cokernel(a: &Mat<BigInt>, m: &BigInt) -> ModuleInvariant {
    let n = a.rows();
    let mi = Mat::from_fn(n, n, |i, j| if i == j { m.clone() } else { BigInt::zero() });
    let rel = a.hstack(&mi).expect("same row count");
    let (free, torsion) = snf::cokernel_divisors(&Integers, &rel);
    ModuleInvariant::from_cyclic_factors(free, &torsion)
}

/// Invariant over `∏ ℤ_p` where each factor is known modulo `p^e`. The
/// per-prime answers are merged; differing free ranks are not expressible
/// as a single invariant.
pub(crate) fn padic_cokernel(a: &Mat<BigInt>, primes: &[(BigInt, u32)]) -> Result<ModuleInvariant> {
    let mut free = None;
    let mut torsion = Vec::new();
    for (p, e) in primes {
        let zp = PadicPrecision::new(p.clone(), *e);
        let local = a.map(|x| x.mod_floor(zp.modulus()));
        let (f, t) = snf::cokernel_divisors(&zp, &local);
        match free {
            None => free = Some(f),
            Some(g) if g != f => {
                return Err(Error::Inconclusive(format!("free rank differs between primes ({g} vs {f})")));
            }
            _ => {}
        }
        torsion.extend(t);
    }
    Ok(ModuleInvariant::from_cyclic_factors(free.unwrap_or(a.rows()), &torsion))
}

/// Invariant of `target / im(A)`.
pub fn cokernel_invariant(a: &Mat<Elem>, ring: &RingDescriptor) -> Result<ModuleInvariant> {
    match ring {
        RingDescriptor::IntegersMod(m) => Ok(modular_cokernel(&lift_to_integers(a), m)),
        RingDescriptor::TruncatedCompletion(t) => {
            let inv = match &t.model {
                CompletionModel::Exact => cokernel_invariant(a, &t.element_ring)?,
                CompletionModel::Padic { primes } => padic_cokernel(&lift_to_integers(a), primes)?,
            };
            Ok(inv.with_validity(ring.validity()))
        }
        _ => {
            let pid = ring.as_pid().map_err(|_| Error::unsupported("cokernel_invariant", ring))?;
            let (free, torsion) = snf::cokernel_divisors(&pid, a);
            Ok(ModuleInvariant::from_cyclic_factors(free, &torsion))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{MatOps, RingOps};

    fn mat(ring: &RingDescriptor, rows: &[&[i64]], cols: usize) -> Mat<Elem> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| ring.int(x)).collect()).collect(), cols).unwrap()
    }

    #[test]
    fn listed_cokernels() {
        let z = RingDescriptor::Integers;
        let inv = cokernel_invariant(&mat(&z, &[&[2, 0], &[0, 3]], 2), &z).unwrap();
        assert_eq!((inv.free_rank, inv.torsion.clone()), (0, vec![BigInt::from(6)]));
        let empty = mat(&z, &[&[]], 0);
        assert_eq!(cokernel_invariant(&empty, &z).unwrap(), ModuleInvariant::free(1));
        let zl = RingDescriptor::localized(5).unwrap();
        let inv = cokernel_invariant(&mat(&zl, &[&[25]], 1), &zl).unwrap();
        assert_eq!(inv.torsion, vec![BigInt::from(25)]);
        let z4 = RingDescriptor::integers_mod(4).unwrap();
        let inv = cokernel_invariant(&mat(&z4, &[&[2]], 1), &z4).unwrap();
        assert_eq!(inv.torsion, vec![BigInt::from(2)]);
        let sz = RingDescriptor::prufer_extension(5).unwrap();
        assert!(cokernel_invariant(&Mat::zeros(&sz, 1, 1), &sz).is_err());
    }

    #[test]
    fn padic_cokernel_merges_primes() {
        let z = RingDescriptor::Integers;
        let rhat = RingDescriptor::truncated_completion(z, vec![Elem::int(6)], 3).unwrap();
        let a = mat(&rhat, &[&[12]], 1);
        let inv = cokernel_invariant(&a, &rhat).unwrap();
        assert_eq!(inv.torsion, vec![BigInt::from(12)]);
        let zero = mat(&rhat, &[&[0]], 1);
        assert_eq!(cokernel_invariant(&zero, &rhat).unwrap().free_rank, 1);
        assert!(rhat.is_zero(&rhat.int(216)));
    }
}
