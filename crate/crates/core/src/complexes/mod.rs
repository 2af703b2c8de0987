//! Bounded complexes of finite-rank free modules, homologically indexed
//! (`d_i: C_i → C_{i-1}`), and the constructions on them.

mod homology;
mod json;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rings::matrix::block;
use crate::rings::{Elem, Mat, MatOps, RingDescriptor, RingMap, RingOps};

pub use homology::{graded_hom, hom_group, homology, homology_in_degree, is_quasi_iso, total_invariant, Presented};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeComplex {
    ring: RingDescriptor,
    lo: i64,
    hi: i64,
    ranks: Vec<usize>,
    /// `diffs[k]` is `d_{lo+1+k}`.
    diffs: Vec<Mat<Elem>>,
}

fn sign(ring: &RingDescriptor, k: i64) -> Elem {
    if k.rem_euclid(2) == 0 {
        ring.one()
    } else {
        ring.neg(&ring.one())
    }
}

impl FreeComplex {
    /// Builds a complex on degrees `lo..=hi`. Differentials not listed are zero.
    pub fn new(
        ring: RingDescriptor,
        lo: i64,
        hi: i64,
        ranks: Vec<usize>,
        differentials: BTreeMap<i64, Mat<Elem>>,
    ) -> Result<Self> {
        if hi < lo {
            return Err(Error::InvalidComplex(format!("empty degree range [{lo}, {hi}]")));
        }
        if ranks.len() as i64 != hi - lo + 1 {
            return Err(Error::InvalidComplex(format!("{} ranks for degree range [{lo}, {hi}]", ranks.len())));
        }
        for &i in differentials.keys() {
            if i <= lo || i > hi {
                return Err(Error::InvalidComplex(format!("differential d_{i} outside ({lo}, {hi}]")));
            }
        }
        let mut diffs = Vec::new();
        for i in lo + 1..=hi {
            let (r, c) = (ranks[(i - 1 - lo) as usize], ranks[(i - lo) as usize]);
            let d = match differentials.get(&i) {
                Some(d) => {
                    if d.shape() != (r, c) {
                        return Err(Error::DimensionMismatch(format!(
                            "d_{i} is {}x{}, expected {r}x{c}",
                            d.rows(),
                            d.cols()
                        )));
                    }
                    for x in d.entries() {
                        ring.check(x)?;
                    }
                    d.clone()
                }
                None => Mat::zeros(&ring, r, c),
            };
            diffs.push(d);
        }
        let t = FreeComplex { ring, lo, hi, ranks, diffs };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        for i in self.lo + 2..=self.hi {
            let dd = self.differential(i - 1).mul(&self.ring, &self.differential(i))?;
            if !dd.is_zero(&self.ring) {
                return Err(Error::InvalidComplex(format!("d_{} d_{} is not zero", i - 1, i)));
            }
        }
        Ok(())
    }

    /// The complex with a single copy of `R^rank` in degree `deg`.
    pub fn concentrated(ring: RingDescriptor, deg: i64, rank: usize) -> Self {
        FreeComplex { ring, lo: deg, hi: deg, ranks: vec![rank], diffs: Vec::new() }
    }

    /// The tensor unit `R` in degree 0.
    pub fn unit(ring: &RingDescriptor) -> Self {
        FreeComplex::concentrated(ring.clone(), 0, 1)
    }

    pub fn zero(ring: &RingDescriptor) -> Self {
        FreeComplex::concentrated(ring.clone(), 0, 0)
    }

    /// `R --s--> R` in degrees 1 and 0.
    pub fn two_term(ring: &RingDescriptor, s: &Elem) -> Self {
        let d = Mat::filled(1, 1, s.clone());
        FreeComplex { ring: ring.clone(), lo: 0, hi: 1, ranks: vec![1, 1], diffs: vec![d] }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn rank(&self, i: i64) -> usize {
        if i < self.lo || i > self.hi {
            0
        } else {
            self.ranks[(i - self.lo) as usize]
        }
    }

    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        (self.lo..=self.hi).map(|i| (i, self.rank(i))).collect()
    }

    /// `d_i: C_i → C_{i-1}`, zero outside the stored range.
    pub fn differential(&self, i: i64) -> Mat<Elem> {
        if i > self.lo && i <= self.hi {
            self.diffs[(i - self.lo - 1) as usize].clone()
        } else {
            Mat::zeros(&self.ring, self.rank(i - 1), self.rank(i))
        }
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// Smallest degree window containing every nonzero term.
    pub fn support(&self) -> Option<(i64, i64)> {
        let nz: Vec<i64> = (self.lo..=self.hi).filter(|&i| self.rank(i) > 0).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    /// The same complex stored on a wider degree window.
    pub fn widen(&self, lo: i64, hi: i64) -> Self {
        let (lo, hi) = (lo.min(self.lo), hi.max(self.hi));
        let ranks = (lo..=hi).map(|i| self.rank(i)).collect();
        let diffs = (lo + 1..=hi).map(|i| self.differential(i)).collect();
        FreeComplex { ring: self.ring.clone(), lo, hi, ranks, diffs }
    }

    /// Drops zero terms at both ends.
    pub fn trimmed(&self) -> Self {
        match self.support() {
            None => FreeComplex::zero(&self.ring),
            Some((a, b)) => {
                let ranks = (a..=b).map(|i| self.rank(i)).collect();
                let diffs = (a + 1..=b).map(|i| self.differential(i)).collect();
                FreeComplex { ring: self.ring.clone(), lo: a, hi: b, ranks, diffs }
            }
        }
    }

    fn from_parts(ring: RingDescriptor, lo: i64, hi: i64, ranks: Vec<usize>, diffs: Vec<Mat<Elem>>) -> Result<Self> {
        let t = FreeComplex { ring, lo, hi, ranks, diffs };
        t.validate()?;
        Ok(t)
    }
}

impl fmt::Display for FreeComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = (self.lo..=self.hi).rev().map(|i| format!("{i}:R^{}", self.rank(i))).collect();
        write!(f, "[{}] over {}", terms.join(" -> "), self.ring)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: FreeComplex,
    target: FreeComplex,
    components: BTreeMap<i64, Mat<Elem>>,
}

impl ChainMap {
    /// Components not listed are zero. Validates shapes and `d f = f d`.
    pub fn new(source: FreeComplex, target: FreeComplex, components: BTreeMap<i64, Mat<Elem>>) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch(source.ring.to_string(), target.ring.to_string()));
        }
        let ring = source.ring.clone();
        let lo = source.lo.min(target.lo);
        let hi = source.hi.max(target.hi);
        let mut comps = BTreeMap::new();
        for (&i, m) in &components {
            if m.shape() != (target.rank(i), source.rank(i)) {
                return Err(Error::DimensionMismatch(format!(
                    "component f_{i} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.rank(i),
                    source.rank(i)
                )));
            }
        }
        for i in lo..=hi {
            let m = components.get(&i).cloned().unwrap_or_else(|| Mat::zeros(&ring, target.rank(i), source.rank(i)));
            comps.insert(i, m);
        }
        let f = ChainMap { source, target, components: comps };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        let ring = &self.source.ring;
        let (lo, hi) = self.window();
        for i in lo..=hi + 1 {
            let left = self.target.differential(i).mul(ring, &self.component(i))?;
            let right = self.component(i - 1).mul(ring, &self.source.differential(i))?;
            if left != right {
                return Err(Error::InvalidComplex(format!("chain map does not commute with d_{i}")));
            }
        }
        Ok(())
    }

    fn window(&self) -> (i64, i64) {
        (self.source.lo.min(self.target.lo), self.source.hi.max(self.target.hi))
    }

    pub fn identity(t: &FreeComplex) -> Self {
        let comps = (t.lo..=t.hi).map(|i| (i, Mat::identity(&t.ring, t.rank(i)))).collect();
        ChainMap { source: t.clone(), target: t.clone(), components: comps }
    }

    /// Multiplication by a ring element.
    pub fn scalar(t: &FreeComplex, c: &Elem) -> Self {
        let comps = (t.lo..=t.hi).map(|i| (i, Mat::identity(&t.ring, t.rank(i)).scale(&t.ring, c))).collect();
        ChainMap { source: t.clone(), target: t.clone(), components: comps }
    }

    pub fn zero(source: &FreeComplex, target: &FreeComplex) -> Result<Self> {
        ChainMap::new(source.clone(), target.clone(), BTreeMap::new())
    }

    pub fn source(&self) -> &FreeComplex {
        &self.source
    }

    pub fn target(&self) -> &FreeComplex {
        &self.target
    }

    pub fn component(&self, i: i64) -> Mat<Elem> {
        self.components
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(&self.source.ring, self.target.rank(i), self.source.rank(i)))
    }

    /// `after ∘ self`
    pub fn then(&self, after: &ChainMap) -> Result<ChainMap> {
        if self.target != after.source {
            return Err(Error::InvalidComplex("composed maps do not share a complex".into()));
        }
        let ring = &self.source.ring;
        let mut comps = BTreeMap::new();
        let lo = self.source.lo.min(after.target.lo);
        let hi = self.source.hi.max(after.target.hi);
        for i in lo..=hi {
            comps.insert(i, after.component(i).mul(ring, &self.component(i))?);
        }
        ChainMap::new(self.source.clone(), after.target.clone(), comps)
    }
}

/// The mapping cone with its canonical maps `target → cone → Σ source`.
#[derive(Debug, Clone)]
pub struct Cone {
    pub complex: FreeComplex,
    pub inclusion: ChainMap,
    pub projection: ChainMap,
}

/// `cone(f)_i = T_i ⊕ S_{i-1}` with `d = [[d_T, f], [0, -d_S]]`.
pub fn cone(f: &ChainMap) -> Result<Cone> {
    let (s, t) = (&f.source, &f.target);
    if s.ring != t.ring {
        return Err(Error::RingMismatch(s.ring.to_string(), t.ring.to_string()));
    }
    let ring = &s.ring;
    let lo = t.lo.min(s.lo + 1);
    let hi = t.hi.max(s.hi + 1);
    let ranks: Vec<usize> = (lo..=hi).map(|i| t.rank(i) + s.rank(i - 1)).collect();
    let minus = ring.neg(&ring.one());
    let mut diffs = Vec::new();
    for i in lo + 1..=hi {
        let d = block(
            &t.differential(i),
            &f.component(i - 1),
            &Mat::zeros(ring, s.rank(i - 2), t.rank(i)),
            &s.differential(i - 1).scale(ring, &minus),
        )?;
        diffs.push(d);
    }
    let complex = FreeComplex::from_parts(ring.clone(), lo, hi, ranks, diffs)?;
    let shifted = shift(s, 1)?;
    let mut inc = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for i in lo..=hi {
        let (a, b) = (t.rank(i), s.rank(i - 1));
        inc.insert(i, Mat::from_fn(a + b, a, |r, c| if r == c { ring.one() } else { ring.zero() }));
        proj.insert(i, Mat::from_fn(b, a + b, |r, c| if c == a + r { ring.one() } else { ring.zero() }));
    }
    let inclusion = ChainMap::new(t.clone(), complex.clone(), inc)?;
    let projection = ChainMap::new(complex.clone(), shifted, proj)?;
    Ok(Cone { complex, inclusion, projection })
}

/// `Σ^k t`: `(Σ^k t)_i = t_{i-k}`, differentials multiplied by `(-1)^k`.
pub fn shift(t: &FreeComplex, k: i64) -> Result<FreeComplex> {
    let e = sign(&t.ring, k);
    let diffs = t.diffs.iter().map(|d| d.scale(&t.ring, &e)).collect();
    FreeComplex::from_parts(t.ring.clone(), t.lo + k, t.hi + k, t.ranks.clone(), diffs)
}

/// Offsets of the `(i, j)` summands inside `(a ⊗ b)_n`, `i` ascending.
fn tensor_layout(a: &FreeComplex, b: &FreeComplex, n: i64) -> Vec<(i64, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for i in a.lo..=a.hi {
        let j = n - i;
        let size = a.rank(i) * b.rank(j);
        if size > 0 {
            out.push((i, off));
            off += size;
        }
    }
    out
}

/// Total complex with `d(x ⊗ y) = dx ⊗ y + (-1)^i x ⊗ dy` for `x` in degree `i`.
pub fn tensor(a: &FreeComplex, b: &FreeComplex) -> Result<FreeComplex> {
    if a.ring != b.ring {
        return Err(Error::RingMismatch(a.ring.to_string(), b.ring.to_string()));
    }
    let ring = &a.ring;
    let (lo, hi) = (a.lo + b.lo, a.hi + b.hi);
    let rank = |n: i64| (a.lo..=a.hi).map(|i| a.rank(i) * b.rank(n - i)).sum::<usize>();
    let ranks: Vec<usize> = (lo..=hi).map(rank).collect();
    let mut diffs = Vec::new();
    for n in lo + 1..=hi {
        let src = tensor_layout(a, b, n);
        let dst = tensor_layout(a, b, n - 1);
        let mut d = Mat::zeros(ring, rank(n - 1), rank(n));
        let dst_off = |i: i64| dst.iter().find(|(k, _)| *k == i).map(|(_, o)| *o);
        for &(i, so) in &src {
            let j = n - i;
            if let Some(to) = dst_off(i - 1) {
                let m = a.differential(i).kron(ring, &Mat::identity(ring, b.rank(j)));
                paste(&mut d, &m, to, so);
            }
            if let Some(to) = dst_off(i) {
                let m = Mat::identity(ring, a.rank(i)).kron(ring, &b.differential(j)).scale(ring, &sign(ring, i));
                paste(&mut d, &m, to, so);
            }
        }
        diffs.push(d);
    }
    FreeComplex::from_parts(ring.clone(), lo, hi, ranks, diffs)
}

fn paste(into: &mut Mat<Elem>, m: &Mat<Elem>, r0: usize, c0: usize) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            into[(r0 + i, c0 + j)] = m[(i, j)].clone();
        }
    }
}

/// `f ⊗ g: a ⊗ b → a' ⊗ b'`; no signs appear since both maps have degree 0.
pub fn tensor_maps(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    let src = tensor(&f.source, &g.source)?;
    let dst = tensor(&f.target, &g.target)?;
    let ring = src.ring.clone();
    let mut comps = BTreeMap::new();
    let lo = src.lo.min(dst.lo);
    let hi = src.hi.max(dst.hi);
    for n in lo..=hi {
        let mut m = Mat::zeros(&ring, dst.rank(n), src.rank(n));
        let sl = tensor_layout(&f.source, &g.source, n);
        let dl = tensor_layout(&f.target, &g.target, n);
        for &(i, so) in &sl {
            if let Some(&(_, to)) = dl.iter().find(|(k, _)| *k == i) {
                let block = f.component(i).kron(&ring, &g.component(n - i));
                paste(&mut m, &block, to, so);
            }
        }
        comps.insert(n, m);
    }
    ChainMap::new(src, dst, comps)
}

/// `(a^∨)_i = (a_{-i})^*` with `d^∨_i = (d_{1-i})^T`; an involution on the nose.
pub fn dual(a: &FreeComplex) -> FreeComplex {
    let (lo, hi) = (-a.hi, -a.lo);
    let ranks = (lo..=hi).map(|i| a.rank(-i)).collect();
    let diffs = (lo + 1..=hi).map(|i| a.differential(1 - i).transpose()).collect();
    FreeComplex { ring: a.ring.clone(), lo, hi, ranks, diffs }
}

/// Entrywise image along a ring map.
pub fn base_change(t: &FreeComplex, phi: &RingMap) -> Result<FreeComplex> {
    if phi.source() != &t.ring {
        return Err(Error::RingMismatch(phi.source().to_string(), t.ring.to_string()));
    }
    let diffs = t.diffs.iter().map(|d| d.try_map(|x| phi.apply(x))).collect::<Result<Vec<_>>>()?;
    FreeComplex::from_parts(phi.target().clone(), t.lo, t.hi, t.ranks.clone(), diffs)
}

pub fn base_change_map(f: &ChainMap, phi: &RingMap) -> Result<ChainMap> {
    let src = base_change(&f.source, phi)?;
    let dst = base_change(&f.target, phi)?;
    let comps =
        f.components.iter().map(|(&i, m)| Ok((i, m.try_map(|x| phi.apply(x))?))).collect::<Result<BTreeMap<_, _>>>()?;
    ChainMap::new(src, dst, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::ModuleInvariant;
    use num_bigint::BigInt;

    fn z() -> RingDescriptor {
        RingDescriptor::Integers
    }

    #[test]
    fn cone_of_scalar_is_two_term() {
        let u = FreeComplex::unit(&z());
        let c = cone(&ChainMap::scalar(&u, &Elem::int(2))).unwrap();
        assert_eq!(c.complex, FreeComplex::two_term(&z(), &Elem::int(2)));
        let id = cone(&ChainMap::identity(&u)).unwrap();
        assert!(homology(&id.complex).unwrap().values().all(ModuleInvariant::is_zero));
        let zero = cone(&ChainMap::zero(&u, &u).unwrap()).unwrap();
        let h = homology(&zero.complex).unwrap();
        assert_eq!(h[&0], ModuleInvariant::free(1));
        assert_eq!(h[&1], ModuleInvariant::free(1));
    }

    #[test]
    fn rejects_non_complexes() {
        let mut d = BTreeMap::new();
        d.insert(1, Mat::filled(1, 1, Elem::int(1)));
        d.insert(2, Mat::filled(1, 1, Elem::int(1)));
        assert!(FreeComplex::new(z(), 0, 2, vec![1, 1, 1], d).is_err());
        let mut d = BTreeMap::new();
        d.insert(1, Mat::filled(2, 1, Elem::int(1)));
        assert!(FreeComplex::new(z(), 0, 1, vec![1, 1], d).is_err());
    }

    #[test]
    fn tensor_of_two_cones() {
        let a = FreeComplex::two_term(&z(), &Elem::int(2));
        let b = FreeComplex::two_term(&z(), &Elem::int(3));
        let h = homology(&tensor(&a, &b).unwrap()).unwrap();
        assert!(h.values().all(ModuleInvariant::is_zero));
        let p = FreeComplex::two_term(&z(), &Elem::int(5));
        let h = homology(&tensor(&p, &p).unwrap()).unwrap();
        assert!(h[&2].is_zero());
        assert_eq!(h[&1], ModuleInvariant::cyclic(BigInt::from(5)));
        assert_eq!(h[&0], ModuleInvariant::cyclic(BigInt::from(5)));
    }

    #[test]
    fn dual_is_an_involution() {
        let a = FreeComplex::two_term(&z(), &Elem::int(2));
        let b = FreeComplex::two_term(&z(), &Elem::int(3));
        let k = tensor(&a, &b).unwrap();
        assert_eq!(dual(&dual(&k)), k);
        let u = FreeComplex::unit(&z());
        assert_eq!(dual(&u), u);
        let h = homology(&dual(&FreeComplex::two_term(&z(), &Elem::int(4)))).unwrap();
        assert_eq!(h[&-1], ModuleInvariant::cyclic(BigInt::from(4)));
        assert!(h[&0].is_zero());
    }

    #[test]
    fn shift_moves_homology() {
        let a = FreeComplex::two_term(&z(), &Elem::int(6));
        let s = shift(&a, 3).unwrap();
        assert_eq!(homology(&s).unwrap()[&3], ModuleInvariant::cyclic(BigInt::from(6)));
        assert_eq!(shift(&s, -3).unwrap(), a);
        assert_eq!(shift(&a, 0).unwrap(), a);
    }

    #[test]
    fn base_change_to_residue_ring() {
        let k = FreeComplex::two_term(&z(), &Elem::int(5));
        let ideal = crate::rings::IdealSpec::parse(&z(), &["5"]).unwrap();
        let (_, phi) = crate::rings::quotient_ring(&ideal, 1, crate::rings::QuotientFlavor::Powers).unwrap();
        let kb = base_change(&k, &phi).unwrap();
        let h = homology(&kb).unwrap();
        assert_eq!(h[&0], ModuleInvariant::cyclic(BigInt::from(5)));
        assert_eq!(h[&1], ModuleInvariant::cyclic(BigInt::from(5)));
        assert_eq!(base_change(&FreeComplex::unit(&z()), &phi).unwrap(), FreeComplex::unit(phi.target()));
    }
}
