//! Homology through the Smith normal form kernel.
//!
//! PID-class rings are handled directly. Over ℤ/m the complex is lifted to ℤ:
//! if `U d_i V = D` over ℤ then the cycles mod `m` form the lattice
//! `V · diag(e) · ℤ^n` with `e_j = m / gcd(m, D_jj)` (and `e_j = 1` past the
//! rank), and the boundaries are the columns of `V^{-1} [d_{i+1} | m·I]`
//! divided row-wise by `e`. Truncated completions of p-adic type run the
//! same PID algorithm over ℤ_p at finite precision, one prime at a time.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{cone, dual, tensor, ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::rings::arith::factor;
use crate::rings::pid::PadicPrecision;
use crate::rings::snf::{cokernel_divisors, smith_diagonal, smith_normal_form, solve};
use crate::rings::{
    CompletionModel, Elem, Mat, MatOps, ModuleInvariant, Pid, PidRing, RingDescriptor, RingOps, Validity,
};

enum Engine {
    Pid(PidRing),
    Modular(BigInt),
    Padic(Vec<(BigInt, u32)>),
}

fn engine(ring: &RingDescriptor) -> Result<(Engine, Validity)> {
    match ring {
        RingDescriptor::IntegersMod(m) => Ok((Engine::Modular(m.clone()), Validity::Exact)),
        RingDescriptor::TruncatedCompletion(t) => {
            let e = match &t.model {
                CompletionModel::Exact => engine(&t.element_ring)?.0,
                CompletionModel::Padic { primes } => Engine::Padic(primes.clone()),
            };
            Ok((e, ring.validity()))
        }
        _ => {
            let pid = PidRing::new(ring).map_err(|_| Error::unsupported("homology", ring))?;
            Ok((Engine::Pid(pid), Validity::Exact))
        }
    }
}

/// `ker d_in / im d_out` over a PID whose modules here are all free: the
/// kernel is saturated, so only ranks and the divisors of `d_out` matter.
fn domain_degree<P: Pid>(pid: &P, d_in: &Mat<P::E>, d_out: &Mat<P::E>) -> (usize, Vec<BigInt>) {
    let rank_in = smith_diagonal(pid, d_in).len();
    let (coker_free, torsion) = cokernel_divisors(pid, d_out);
    (coker_free - rank_in, torsion)
}

/// Cyclic factors of `ker d_in / im d_out` over `ℤ/p^e`. If `u d_in v = diag(p^k_j)`
/// the cycles are `⊕ ℤ/p^k_j` (spanned by the columns of `v` scaled by `p^(e-k_j)`),
/// plus a copy of `ℤ/p^e` for each column past the rank.
fn chain_ring_degree(zp: &PadicPrecision, d_in: &Mat<BigInt>, d_out: &Mat<BigInt>) -> Vec<BigInt> {
    let q = zp.modulus();
    let snf = smith_normal_form(zp, d_in);
    let n = d_in.cols();
    let order: Vec<BigInt> =
        (0..n).map(|j| if j < snf.rank { zp.divisor(&snf.d[(j, j)]) } else { q.clone() }).collect();
    let raw = snf.v_inv.mul(zp, d_out).expect("d_in and d_out compose");
    let relations = Mat::from_fn(n, raw.cols() + n, |r, c| {
        if c < raw.cols() {
            &raw[(r, c)] / (q / &order[r])
        } else if c - raw.cols() == r {
            order[r].mod_floor(q)
        } else {
            BigInt::zero()
        }
    });
    let (free, mut torsion) = cokernel_divisors(zp, &relations);
    torsion.extend(std::iter::repeat_n(q.clone(), free));
    torsion
}

/// `ker d_in / im d_out` through the kernel basis; valid at finite p-adic precision.
fn pid_degree<P: Pid>(pid: &P, d_in: &Mat<P::E>, d_out: &Mat<P::E>) -> (usize, Vec<BigInt>) {
    let snf = smith_normal_form(pid, d_in);
    let n = d_in.cols();
    let rows: Vec<usize> = (snf.rank..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    let coords = snf.v_inv.select(&rows, &cols);
    let rel = coords.mul(pid, d_out).expect("d_in and d_out compose");
    cokernel_divisors(pid, &rel)
}

fn degree_invariant(engine: &Engine, t: &FreeComplex, i: i64) -> Result<ModuleInvariant> {
    let d_in = t.differential(i);
    let d_out = t.differential(i + 1);
    match engine {
        Engine::Pid(pid) => {
            let (free, torsion) = domain_degree(pid, &d_in, &d_out);
            Ok(ModuleInvariant::from_cyclic_factors(free, &torsion))
        }
        Engine::Modular(m) => {
            let mut factors = Vec::new();
            for (p, e) in factor(m) {
                let zp = PadicPrecision::new(p, e);
                let red = |a: &Mat<Elem>| a.map(|x| x.as_int().mod_floor(zp.modulus()));
                factors.extend(chain_ring_degree(&zp, &red(&d_in), &red(&d_out)));
            }
            Ok(ModuleInvariant::from_cyclic_factors(0, &factors))
        }
        Engine::Padic(primes) => {
            let mut free = None;
            let mut torsion = Vec::new();
            for (p, e) in primes {
                let zp = PadicPrecision::new(p.clone(), *e);
                let red = |a: &Mat<Elem>| a.map(|x| x.as_int().mod_floor(zp.modulus()));
                let (f, tor) = pid_degree(&zp, &red(&d_in), &red(&d_out));
                match free {
                    Some(g) if g != f => {
                        return Err(Error::Inconclusive(format!(
                            "H_{i} has free rank {g} at one prime and {f} at another"
                        )))
                    }
                    _ => free = Some(f),
                }
                torsion.extend(tor);
            }
            Ok(ModuleInvariant::from_cyclic_factors(free.unwrap_or(t.rank(i)), &torsion))
        }
    }
}

pub fn homology_in_degree(t: &FreeComplex, i: i64) -> Result<ModuleInvariant> {
    let (e, validity) = engine(t.ring())?;
    Ok(degree_invariant(&e, t, i)?.with_validity(validity))
}

/// `H_i` for every degree in the stored range.
pub fn homology(t: &FreeComplex) -> Result<BTreeMap<i64, ModuleInvariant>> {
    let (e, validity) = engine(t.ring())?;
    let (lo, hi) = t.range();
    let degrees: Vec<i64> = (lo..=hi).collect();
    let out = degrees
        .par_iter()
        .map(|&i| Ok((i, degree_invariant(&e, t, i)?.with_validity(validity))))
        .collect::<Result<Vec<_>>>()?;
    Ok(out.into_iter().collect())
}

/// Direct sum of a family of invariants.
pub fn total_invariant(h: &BTreeMap<i64, ModuleInvariant>) -> ModuleInvariant {
    h.values().fold(ModuleInvariant::zero(), |acc, x| acc.direct_sum(x))
}

pub fn is_quasi_iso(f: &ChainMap) -> Result<bool> {
    let c = cone(f)?;
    Ok(homology(&c.complex)?.values().all(ModuleInvariant::is_zero))
}

/// `H_i(a^∨ ⊗ b)` for every degree; degree `-k` is `Hom(a, Σ^k b)`.
pub fn graded_hom(a: &FreeComplex, b: &FreeComplex) -> Result<BTreeMap<i64, ModuleInvariant>> {
    homology(&tensor(&dual(a), b)?)
}

/// `Hom_{D(R)}(a, b) = H_0(a^∨ ⊗ b)`.
pub fn hom_group(a: &FreeComplex, b: &FreeComplex) -> Result<ModuleInvariant> {
    let t = tensor(&dual(a), b)?;
    let (lo, hi) = t.range();
    if (lo..=hi).contains(&0) {
        homology_in_degree(&t, 0)
    } else {
        Ok(ModuleInvariant::zero().with_validity(t.ring().validity()))
    }
}

/// `H_i` as an explicit quotient `P^k / im(relations)` together with the
/// coordinates of cycles, so that chain maps induce matrices on homology.
/// Available for PID-class rings and (through an integer lift) for ℤ/m.
#[derive(Debug, Clone)]
pub struct Presented {
    pid: PidRing,
    /// `k × n`: cycle `x` has coordinates `(coords · x)_j / scale_j`.
    coords: Mat<Elem>,
    scale: Vec<Elem>,
    /// `n × k`: representative cycles.
    basis: Mat<Elem>,
    relations: Mat<Elem>,
}

impl Presented {
    pub fn of(t: &FreeComplex, i: i64) -> Result<Self> {
        let d_in = t.differential(i);
        let d_out = t.differential(i + 1);
        match t.ring() {
            RingDescriptor::IntegersMod(m) => Ok(Presented::modular(m, &d_in, &d_out)),
            ring => {
                let pid = PidRing::new(ring).map_err(|_| Error::unsupported("presented homology", ring))?;
                let snf = smith_normal_form(&pid, &d_in);
                let n = d_in.cols();
                let kept: Vec<usize> = (snf.rank..n).collect();
                let all: Vec<usize> = (0..n).collect();
                let coords = snf.v_inv.select(&kept, &all);
                let basis = snf.v.select(&all, &kept);
                let relations = coords.mul(&pid, &d_out)?;
                let scale = vec![pid.one(); kept.len()];
                Ok(Presented { pid, coords, scale, basis, relations })
            }
        }
    }

    fn modular(m: &BigInt, d_in: &Mat<Elem>, d_out: &Mat<Elem>) -> Self {
        let z = RingDescriptor::Integers;
        let pid = PidRing::new(&z).expect("integers are a PID");
        let snf = smith_normal_form(&pid, d_in);
        let n = d_in.cols();
        let scale: Vec<Elem> = (0..n)
            .map(|j| {
                if j < snf.rank {
                    let d = snf.d[(j, j)].as_int();
                    Elem::Int(m / m.gcd(d))
                } else {
                    Elem::Int(BigInt::one())
                }
            })
            .collect();
        let basis = Mat::from_fn(n, n, |r, c| Elem::Int(snf.v[(r, c)].as_int() * scale[c].as_int()));
        let mi = Mat::from_fn(n, n, |r, c| Elem::Int(if r == c { m.clone() } else { BigInt::from(0) }));
        let gens = d_out.hstack(&mi).expect("same row count");
        let raw = snf.v_inv.mul(&pid, &gens).expect("shapes agree");
        let relations =
            Mat::from_fn(raw.rows(), raw.cols(), |r, c| Elem::Int(raw[(r, c)].as_int() / scale[r].as_int()));
        Presented { pid, coords: snf.v_inv, scale, basis, relations }
    }

    pub fn generators(&self) -> usize {
        self.basis.cols()
    }

    pub fn relations(&self) -> &Mat<Elem> {
        &self.relations
    }

    pub fn pid(&self) -> &PidRing {
        &self.pid
    }

    pub fn invariant(&self) -> ModuleInvariant {
        let (free, torsion) = cokernel_divisors(&self.pid, &self.relations);
        ModuleInvariant::from_cyclic_factors(free, &torsion)
    }

    /// Coordinates of a cycle.
    pub fn coordinates(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        let y = self.coords.apply(&self.pid, x);
        y.iter()
            .zip(&self.scale)
            .map(|(v, s)| {
                self.pid.exact_div(v, s).ok_or_else(|| Error::InvalidArgument("vector is not a cycle".into()))
            })
            .collect()
    }

    /// Matrix of the map induced on homology by a chain-map component
    /// `f_i: C_i → C'_i` (entries read in the lifted ring).
    pub fn induced(&self, f: &Mat<Elem>, target: &Presented) -> Result<Mat<Elem>> {
        let k = self.generators();
        let mut cols = Vec::with_capacity(k);
        for j in 0..k {
            let image = f.apply(&self.pid, &self.basis.column(j));
            cols.push(target.coordinates(&image)?);
        }
        Ok(Mat::from_fn(target.generators(), k, |r, c| cols[c][r].clone()))
    }

    /// Whether every column of `a` lies in `span(b) + im(relations)`.
    pub fn contained(&self, a: &Mat<Elem>, b: &Mat<Elem>) -> bool {
        let span = b.hstack(&self.relations).expect("same ambient rank");
        (0..a.cols()).all(|j| solve(&self.pid, &span, &a.column(j)).is_some())
    }

    /// Invariant of the submodule generated by the columns of `a`.
    pub fn image_invariant(&self, a: &Mat<Elem>) -> ModuleInvariant {
        let joint = a.hstack(&self.relations).expect("same ambient rank");
        let snf = smith_normal_form(&self.pid, &joint);
        let kept: Vec<usize> = (snf.rank..joint.cols()).collect();
        let top: Vec<usize> = (0..a.cols()).collect();
        let kernel = snf.v.select(&top, &kept);
        let (free, torsion) = cokernel_divisors(&self.pid, &kernel);
        ModuleInvariant::from_cyclic_factors(free, &torsion)
    }
}
