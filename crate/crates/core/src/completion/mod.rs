//! Classical `I`-adic completion at finite precision, derived completion
//! over the Koszul tower, the `(1 − τ)` completeness test and idempotent
//! lifting.

mod checks;
mod derived;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::complexes::FreeComplex;
use crate::error::{Error, Result};
use crate::koszul_tower::quotient_invariant;
use crate::rings::{
    cokernel_invariant, quotient_ring, Elem, IdealSpec, Mat, MatOps, ModuleInvariant, QuotientFlavor, RingDescriptor,
    RingMap, RingOps, Validity,
};

pub use checks::{derived_complete_check, separatedness_check, Carrier, DerivedVerdict, Separatedness, Witness};
pub use derived::{derived_completion, CompletionReport, DegreeReport, Lim1, LimInvariant};

/// The inverse system of rings `R/I → … → R/I^N` (stage `n` at index `n-1`).
#[derive(Debug, Clone)]
pub struct Tower {
    ideal: IdealSpec,
    stages: Vec<RingDescriptor>,
    maps: Vec<RingMap>,
}

impl Tower {
    pub fn ideal(&self) -> &IdealSpec {
        &self.ideal
    }

    pub fn precision(&self) -> u32 {
        self.stages.len() as u32
    }

    pub fn stage(&self, n: u32) -> &RingDescriptor {
        &self.stages[n as usize - 1]
    }

    pub fn stages(&self) -> &[RingDescriptor] {
        &self.stages
    }

    /// `R/I^n → R/I^{n-1}` for `n ≥ 2`.
    pub fn map(&self, n: u32) -> &RingMap {
        &self.maps[n as usize - 2]
    }

    /// The composite `R/I^from → R/I^to`.
    pub fn reduction(&self, from: u32, to: u32) -> Result<RingMap> {
        if to == 0 || to > from || from > self.precision() {
            return Err(Error::InvalidArgument(format!("no reduction from stage {from} to stage {to}")));
        }
        let mut m = RingMap::new(self.stage(from).clone(), self.stage(from).clone());
        for n in (to + 1..=from).rev() {
            m = m.compose(self.map(n))?;
        }
        Ok(m)
    }

    /// The face `R̂ mod I^N`.
    pub fn completion(&self) -> Result<RingDescriptor> {
        RingDescriptor::truncated_completion(self.ideal.ring.clone(), self.ideal.generators.clone(), self.precision())
    }
}

pub fn classical_completion_tower(ideal: &IdealSpec, precision: u32) -> Result<Tower> {
    if precision == 0 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    let stages = (1..=precision)
        .map(|n| quotient_ring(ideal, n, QuotientFlavor::Powers).map(|(q, _)| q))
        .collect::<Result<Vec<_>>>()?;
    let maps = stages.windows(2).map(|w| RingMap::new(w[1].clone(), w[0].clone())).collect();
    Ok(Tower { ideal: ideal.clone(), stages, maps })
}

/// Modules the completion operations know how to handle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleSpec {
    /// `R^rows / im(relations)`.
    Presented { ring: RingDescriptor, relations: Mat<Elem> },
    /// `R` as a module over itself.
    Regular(RingDescriptor),
    /// `ℚ/ℤ_(p)` over ℤ or ℤ_(p).
    Prufer { ring: RingDescriptor, p: BigInt },
    /// `ℚ` over ℤ or ℤ_(p).
    Fractions(RingDescriptor),
}

impl ModuleSpec {
    pub fn free(ring: &RingDescriptor, rank: usize) -> Self {
        ModuleSpec::Presented { ring: ring.clone(), relations: Mat::zeros(ring, rank, 0) }
    }

    pub fn cyclic(ring: &RingDescriptor, d: &Elem) -> Self {
        ModuleSpec::Presented { ring: ring.clone(), relations: Mat::filled(1, 1, d.clone()) }
    }

    pub fn ring(&self) -> &RingDescriptor {
        match self {
            ModuleSpec::Presented { ring, .. }
            | ModuleSpec::Regular(ring)
            | ModuleSpec::Prufer { ring, .. }
            | ModuleSpec::Fractions(ring) => ring,
        }
    }

    /// Invariant of a finitely generated module of a PID-like class.
    pub(crate) fn invariant(&self) -> Option<ModuleInvariant> {
        match self {
            ModuleSpec::Presented { ring, relations } => cokernel_invariant(relations, ring).ok(),
            ModuleSpec::Regular(r) if !r.is_structured() => Some(quotient_invariant(&zero_quotient(r))),
            _ => None,
        }
    }
}

/// `R/0` as a descriptor, so that [`quotient_invariant`] reads off `R` itself.
fn zero_quotient(r: &RingDescriptor) -> RingDescriptor {
    match r {
        RingDescriptor::TruncatedCompletion(t) => t.element_ring.clone(),
        other => other.clone(),
    }
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleSpec::Presented { ring, relations } if relations.shape() == (1, 1) => {
                write!(f, "{ring}/({})", relations[(0, 0)].render(ring))
            }
            ModuleSpec::Presented { ring, relations } => {
                write!(f, "coker of a {}x{} matrix over {ring}", relations.rows(), relations.cols())
            }
            ModuleSpec::Regular(r) => write!(f, "{r}"),
            ModuleSpec::Prufer { p, .. } => write!(f, "Q/Z_({p})"),
            ModuleSpec::Fractions(_) => f.write_str("Q"),
        }
    }
}

/// `M/I^n M` for `n = 1..N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleCompletion {
    pub stages: Vec<ModuleInvariant>,
    /// Smallest `n` from which the stages stop changing.
    pub stabilized_at: Option<u32>,
}

impl ModuleCompletion {
    pub fn invariant(&self) -> &ModuleInvariant {
        self.stages.last().expect("at least one stage")
    }
}

fn quotient_stage(m: &ModuleSpec, g: &BigInt, n: u32) -> Result<ModuleInvariant> {
    match m {
        ModuleSpec::Presented { ring, relations } => {
            let gn = ring.from_int(&num_traits::pow(g.clone(), n as usize));
            let rows = relations.rows();
            let extra = Mat::from_fn(rows, rows, |i, j| if i == j { gn.clone() } else { ring.zero() });
            cokernel_invariant(&relations.hstack(&extra)?, ring)
        }
        ModuleSpec::Regular(ring) => {
            let ideal = IdealSpec::new(ring.clone(), vec![ring.from_int(g)])?;
            let (q, _) = quotient_ring(&ideal, n, QuotientFlavor::Powers)?;
            Ok(quotient_invariant(&q))
        }
        ModuleSpec::Prufer { .. } | ModuleSpec::Fractions(_) => {
            if g.is_zero() {
                Err(Error::InvalidArgument(format!("{m} is not finitely generated")))
            } else {
                Ok(ModuleInvariant::zero())
            }
        }
    }
}

/// `M̂ = lim M/I^n M` at precision `N`, with the stabilisation pattern.
pub fn complete_module(m: &ModuleSpec, ideal: &IdealSpec, precision: u32) -> Result<ModuleCompletion> {
    if precision == 0 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    if m.ring() != &ideal.ring {
        return Err(Error::RingMismatch(m.ring().to_string(), ideal.ring.to_string()));
    }
    let g = ideal.principal_generator()?;
    let tag = Validity::ModuloIdealPower(precision).meet(ideal.ring.validity());
    let stages =
        (1..=precision).map(|n| quotient_stage(m, &g, n).map(|v| v.with_validity(tag))).collect::<Result<Vec<_>>>()?;
    let last = stages.last().expect("precision >= 1");
    let mut from = precision;
    while from > 1 && stages[from as usize - 2].same_class(last) {
        from -= 1;
    }
    let stabilized_at = (from < precision || precision == 1).then_some(from);
    Ok(ModuleCompletion { stages, stabilized_at })
}

/// Whether `M ≅ lim M/I^n M` can be certified from the tower: it must
/// stabilise before `N` at the invariant of `M` itself.
pub fn classically_complete(m: &ModuleSpec, ideal: &IdealSpec, precision: u32) -> Result<Option<bool>> {
    let c = complete_module(m, ideal, precision)?;
    let Some(own) = m.invariant() else {
        return Ok(None);
    };
    Ok(match c.stabilized_at {
        Some(n) if n < precision => Some(c.invariant().same_class(&own)),
        _ => Some(false),
    })
}

/// Stages `F_n` over `R/I^n` of a lifted idempotent.
#[derive(Debug, Clone)]
pub struct IdempotentLift {
    pub stages: Vec<(RingDescriptor, Mat<Elem>)>,
}

impl IdempotentLift {
    pub fn top(&self) -> &Mat<Elem> {
        &self.stages.last().expect("at least one stage").1
    }
}

fn lift_matrix(e: &Mat<Elem>, phi: &RingMap) -> Result<Mat<Elem>> {
    e.try_map(|x| phi.apply(x))
}

/// Lifts an idempotent over `R/I` to `R/I^N` by `F ↦ 3F² − 2F³` at each stage.
pub fn idempotent_lift(e: &Mat<Elem>, tower: &Tower, precision: u32) -> Result<IdempotentLift> {
    if precision == 0 || precision > tower.precision() {
        return Err(Error::InvalidArgument(format!(
            "precision {precision} outside the tower (1..={})",
            tower.precision()
        )));
    }
    if e.rows() != e.cols() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", e.rows(), e.cols())));
    }
    let base = tower.stage(1);
    let e = e.try_map(|x| base.canonical(x))?;
    if e.mul(base, &e)? != e {
        return Err(Error::NotIdempotent(base.to_string()));
    }
    let mut stages = vec![(base.clone(), e.clone())];
    for n in 2..=precision {
        let ring = tower.stage(n);
        let up = RingMap::new(tower.stage(n - 1).clone(), ring.clone());
        let f = lift_matrix(&stages.last().expect("nonempty").1, &up)?;
        let f2 = f.mul(ring, &f)?;
        let f3 = f2.mul(ring, &f)?;
        let next = f2.scale(ring, &ring.int(3)).add(ring, &f3.scale(ring, &ring.int(-2)))?;
        if next.mul(ring, &next)? != next {
            return Err(Error::NotIdempotent(ring.to_string()));
        }
        stages.push((ring.clone(), next));
    }
    Ok(IdempotentLift { stages })
}

/// `K × K` truncation of `1 − τ`: `1` on the diagonal, `−s` on the superdiagonal,
/// as a complex `R^K → R^K` in degrees 1 and 0.
pub fn f_s_truncation(ring: &RingDescriptor, s: &Elem, k: usize) -> Result<FreeComplex> {
    let minus_s = ring.neg(s);
    let d = Mat::from_fn(k, k, |i, j| {
        if i == j {
            ring.one()
        } else if j == i + 1 {
            minus_s.clone()
        } else {
            ring.zero()
        }
    });
    FreeComplex::new(ring.clone(), 0, 1, vec![k, k], [(1, d)].into())
}

/// Stage `K` of the telescope `R → R → …` along `s`: `R^{K-1} → R^K`,
/// `e_n ↦ e_n − s·e_{n+1}`. Its `H_0` is `R`, generated by `1/s^{K-1}`.
pub fn f_s_stage(ring: &RingDescriptor, s: &Elem, k: usize) -> Result<FreeComplex> {
    if k == 0 {
        return Err(Error::InvalidArgument("telescope stage must be at least 1".into()));
    }
    let minus_s = ring.neg(s);
    let d = Mat::from_fn(k, k - 1, |i, j| {
        if i == j {
            ring.one()
        } else if i == j + 1 {
            minus_s.clone()
        } else {
            ring.zero()
        }
    });
    FreeComplex::new(ring.clone(), 0, 1, vec![k, k - 1], [(1, d)].into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::homology;

    fn zi(g: &str) -> IdealSpec {
        IdealSpec::parse(&RingDescriptor::Integers, &[g]).unwrap()
    }

    #[test]
    fn classical_towers() {
        let t = classical_completion_tower(&zi("5"), 4).unwrap();
        let mods: Vec<String> = t.stages().iter().map(ToString::to_string).collect();
        assert_eq!(mods, ["Z/5", "Z/25", "Z/125", "Z/625"]);
        let direct = t.reduction(4, 1).unwrap();
        assert_eq!(direct.apply(&Elem::int(624)).unwrap(), Elem::int(4));
        let sz = RingDescriptor::prufer_extension(5).unwrap();
        let t2 = classical_completion_tower(&IdealSpec::parse(&sz, &["p"]).unwrap(), 3).unwrap();
        assert_eq!(t2.stage(3), &RingDescriptor::integers_mod(125).unwrap());
        let t3 = classical_completion_tower(&zi("1"), 2).unwrap();
        assert_eq!(t3.stage(2), &RingDescriptor::integers_mod(1).unwrap());
    }

    #[test]
    fn module_completions() {
        let z = RingDescriptor::Integers;
        let c = complete_module(&ModuleSpec::free(&z, 1), &zi("3"), 4).unwrap();
        assert_eq!(c.invariant().torsion, vec![BigInt::from(81)]);
        assert_eq!(c.stabilized_at, None);
        let c = complete_module(&ModuleSpec::cyclic(&z, &Elem::int(3)), &zi("3"), 4).unwrap();
        assert_eq!(c.stabilized_at, Some(1));
        let c = complete_module(&ModuleSpec::Fractions(z.clone()), &zi("3"), 4).unwrap();
        assert!(c.stages.iter().all(ModuleInvariant::is_zero));
        assert_eq!(classically_complete(&ModuleSpec::cyclic(&z, &Elem::int(9)), &zi("3"), 4).unwrap(), Some(true));
        assert_eq!(classically_complete(&ModuleSpec::cyclic(&z, &Elem::int(12)), &zi("3"), 4).unwrap(), Some(false));
    }

    #[test]
    fn idempotents_lift() {
        let t = classical_completion_tower(&zi("5"), 4).unwrap();
        let f5 = t.stage(1);
        let e = Mat::from_rows(vec![vec![f5.int(1), f5.int(2)], vec![f5.int(0), f5.int(0)]], 2).unwrap();
        let lift = idempotent_lift(&e, &t, 4).unwrap();
        let top = t.stage(4);
        let f = lift.top();
        assert_eq!(f.mul(top, f).unwrap(), *f);
        let back = t.reduction(4, 1).unwrap();
        assert_eq!(f.try_map(|x| back.apply(x)).unwrap(), e);
        let bad = Mat::filled(1, 1, f5.int(2));
        assert!(matches!(idempotent_lift(&bad, &t, 3), Err(Error::NotIdempotent(_))));
    }

    #[test]
    fn telescopes() {
        let z = RingDescriptor::Integers;
        let one = f_s_truncation(&z, &Elem::int(3), 1).unwrap();
        assert_eq!(one.differential(1), Mat::identity(&z, 1));
        let h = homology(&f_s_truncation(&z, &Elem::int(3), 4).unwrap()).unwrap();
        assert!(h.values().all(ModuleInvariant::is_zero));
        let h = homology(&f_s_stage(&z, &Elem::int(3), 4).unwrap()).unwrap();
        assert_eq!(h[&0], ModuleInvariant::free(1));
        assert!(h[&1].is_zero());
    }
}
