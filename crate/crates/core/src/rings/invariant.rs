use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rings::matrix::Mat;
use crate::rings::pid::Integers;
use crate::rings::snf::cokernel_divisors;

/// Whether an answer is exact or only known modulo `I^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Validity {
    Exact,
    ModuloIdealPower(u32),
}

impl Validity {
    /// The weaker of two tags.
    pub fn meet(self, other: Validity) -> Validity {
        match (self, other) {
            (Validity::Exact, v) | (v, Validity::Exact) => v,
            (Validity::ModuloIdealPower(a), Validity::ModuloIdealPower(b)) => Validity::ModuloIdealPower(a.min(b)),
        }
    }
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Validity::Exact => f.write_str("exact"),
            Validity::ModuloIdealPower(n) => write!(f, "valid modulo I^{n}"),
        }
    }
}

/// Isomorphism class of a finitely generated module over a PID-like ring:
/// `R^free_rank ⊕ R/(d_1) ⊕ … ⊕ R/(d_k)` with `d_1 | d_2 | …`.
///
/// Divisors are stored as their normalised positive integer generators
/// (`|d|` over ℤ, `p^v` over ℤ_(p), divisors of `m` over ℤ/m), so equality
/// up to units is plain equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleInvariant {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub validity: Validity,
}

impl ModuleInvariant {
    pub fn zero() -> Self {
        ModuleInvariant { free_rank: 0, torsion: Vec::new(), validity: Validity::Exact }
    }

    pub fn free(rank: usize) -> Self {
        ModuleInvariant { free_rank: rank, torsion: Vec::new(), validity: Validity::Exact }
    }

    /// ℤ/d as a cyclic module; `d = 0` gives the free module of rank one
    /// and a unit gives zero.
    pub fn cyclic(d: BigInt) -> Self {
        if d.is_zero() {
            Self::free(1)
        } else if d.is_one() {
            Self::zero()
        } else {
            ModuleInvariant { free_rank: 0, torsion: vec![d], validity: Validity::Exact }
        }
    }

    /// Normalises an arbitrary list of cyclic factors into a divisor chain.
    pub fn from_cyclic_factors(free_rank: usize, factors: &[BigInt]) -> Self {
        let mut free = free_rank;
        let nonzero: Vec<BigInt> = factors
            .iter()
            .filter(|d| {
                if d.is_zero() {
                    free += 1;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        let k = nonzero.len();
        let diag = Mat::from_fn(k, k, |i, j| if i == j { nonzero[i].clone() } else { BigInt::zero() });
        let (_, torsion) = cokernel_divisors(&Integers, &diag);
        ModuleInvariant { free_rank: free, torsion, validity: Validity::Exact }
    }

    pub fn with_validity(mut self, validity: Validity) -> Self {
        self.validity = validity;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Same isomorphism class, ignoring the validity tag.
    pub fn same_class(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut factors = self.torsion.clone();
        factors.extend(other.torsion.iter().cloned());
        Self::from_cyclic_factors(self.free_rank + other.free_rank, &factors)
            .with_validity(self.validity.meet(other.validity))
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d)
    }

    /// Number of cyclic factors (minimal number of generators).
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Smallest `k` with `g^k` killing the module, or `None` when no power
    /// of `g` does (free part, or torsion prime to `g`).
    pub fn annihilation_exponent(&self, g: &BigInt) -> Option<u32> {
        if self.free_rank > 0 {
            return None;
        }
        let top = match self.torsion.last() {
            None => return Some(0),
            Some(t) => t.clone(),
        };
        let mut power = BigInt::one();
        for k in 0..=64u32 {
            if (&power % &top).is_zero() {
                return Some(k);
            }
            power *= g;
            if g.is_zero() {
                return None;
            }
        }
        None
    }
}

impl fmt::Display for ModuleInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            f.write_str("0")?;
        } else {
            let mut parts = Vec::new();
            if self.free_rank == 1 {
                parts.push("R".to_string());
            } else if self.free_rank > 1 {
                parts.push(format!("R^{}", self.free_rank));
            }
            parts.extend(self.torsion.iter().map(|d| format!("R/{d}")));
            f.write_str(&parts.join(" ⊕ "))?;
        }
        if let Validity::ModuloIdealPower(n) = self.validity {
            write!(f, " (mod I^{n})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_factors_merge_into_chain() {
        let inv = ModuleInvariant::from_cyclic_factors(0, &[BigInt::from(2), BigInt::from(3)]);
        assert_eq!(inv.torsion, vec![BigInt::from(6)]);
        let inv = ModuleInvariant::from_cyclic_factors(1, &[BigInt::from(4), BigInt::from(2), BigInt::from(1)]);
        assert_eq!(inv.free_rank, 1);
        assert_eq!(inv.torsion, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn annihilation_exponent_of_prime_powers() {
        let inv = ModuleInvariant::from_cyclic_factors(0, &[BigInt::from(5), BigInt::from(25)]);
        assert_eq!(inv.annihilation_exponent(&BigInt::from(5)), Some(2));
        assert_eq!(inv.annihilation_exponent(&BigInt::from(3)), None);
        assert_eq!(ModuleInvariant::zero().annihilation_exponent(&BigInt::from(3)), Some(0));
        assert_eq!(ModuleInvariant::free(1).annihilation_exponent(&BigInt::from(3)), None);
    }

    #[test]
    fn validity_meet_keeps_weakest() {
        let v = Validity::Exact.meet(Validity::ModuloIdealPower(4));
        assert_eq!(v, Validity::ModuloIdealPower(4));
        assert_eq!(v.meet(Validity::ModuloIdealPower(2)), Validity::ModuloIdealPower(2));
    }
}
