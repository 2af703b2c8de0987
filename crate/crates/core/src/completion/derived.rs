//! `holim_n (k^(n) ⊗ t)` through the lim / lim¹ sequence of the homology towers.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::complexes::{tensor, tensor_maps, ChainMap, FreeComplex, Presented};
use crate::error::{Error, Result};
use crate::koszul_tower::KoszulTower;
use crate::rings::json::int_json;
use crate::rings::{arith, Elem, IdealSpec, Mat, MatOps, ModuleInvariant, Validity};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimInvariant {
    /// The stable images stop changing; the limit is this module.
    Finite(ModuleInvariant),
    /// Stable images are cyclic of growing order: `∏ ℤ_p` over the primes.
    ProCyclic { primes: Vec<BigInt> },
    /// Growing, not cyclic: the stable images themselves.
    ProObject { stages: Vec<ModuleInvariant> },
    /// The tower did not satisfy Mittag-Leffler by the given precision.
    Undetermined,
}

impl LimInvariant {
    pub fn to_json(&self) -> Value {
        match self {
            LimInvariant::Finite(m) => json!({"kind": "finite", "module": m.to_json()}),
            LimInvariant::ProCyclic { primes } if primes.len() == 1 => {
                json!({"kind": "pro-cyclic", "p": int_json(&primes[0])})
            }
            LimInvariant::ProCyclic { primes } => {
                json!({"kind": "pro-cyclic", "primes": primes.iter().map(int_json).collect::<Vec<_>>()})
            }
            LimInvariant::ProObject { stages } => {
                json!({"kind": "pro-object", "stages": stages.iter().map(ModuleInvariant::to_json).collect::<Vec<_>>()})
            }
            LimInvariant::Undetermined => json!({"kind": "inconclusive"}),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, LimInvariant::Finite(m) if m.is_zero())
    }
}

impl fmt::Display for LimInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimInvariant::Finite(m) => write!(f, "{m}"),
            LimInvariant::ProCyclic { primes } => {
                let factors: Vec<String> = primes.iter().map(|p| format!("Z_{p}")).collect();
                write!(f, "{}", factors.join(" x "))
            }
            LimInvariant::ProObject { stages } => {
                let shown: Vec<String> = stages.iter().map(ToString::to_string).collect();
                write!(f, "pro-object [{}]", shown.join(", "))
            }
            LimInvariant::Undetermined => write!(f, "undetermined"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lim1 {
    Vanishes,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    /// `H_i(k^(n) ⊗ t)` for `n = 1..N`.
    pub stages: Vec<ModuleInvariant>,
    /// `m` such that the image of stage `n + m - 1` in stage `n` is already
    /// the image of stage `N`, for every `n`.
    pub ml_stabilized_at: Option<u32>,
    pub lim: LimInvariant,
    /// `lim¹` of this degree's tower; it feeds `H_{i-1}` of the limit.
    pub lim1_of_tower: Lim1,
    /// `lim¹ H_{i+1}`, the other contribution to `H_i(holim)`.
    pub lim1_vanishes: Lim1,
    /// `H_i(holim)` when both contributions are known.
    pub holim: Option<LimInvariant>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionReport {
    pub precision: u32,
    pub degrees: BTreeMap<i64, DegreeReport>,
}

impl CompletionReport {
    pub fn determined(&self) -> bool {
        self.degrees.values().all(|d| d.holim.is_some())
    }

    /// Every degree of the limit vanishes.
    pub fn is_zero(&self) -> bool {
        self.degrees.values().all(|d| d.holim.as_ref().is_some_and(LimInvariant::is_zero))
    }

    pub fn to_json(&self) -> Value {
        let degrees: serde_json::Map<String, Value> = self
            .degrees
            .iter()
            .map(|(i, d)| {
                let lim1 = match d.lim1_vanishes {
                    Lim1::Vanishes => "vanishes",
                    Lim1::Inconclusive => "inconclusive",
                };
                let entry = json!({
                    "stages": d.stages.iter().map(ModuleInvariant::to_json).collect::<Vec<_>>(),
                    "lim": d.lim.to_json(),
                    "lim1": lim1,
                    "ml_at": d.ml_stabilized_at,
                    "holim": d.holim.as_ref().map(LimInvariant::to_json),
                });
                (i.to_string(), entry)
            })
            .collect();
        let verdict = if self.determined() { "determined" } else { "inconclusive" };
        json!({"precision": self.precision, "tower": "koszul", "degrees": degrees, "verdict": verdict})
    }
}

/// Homology tower of one degree: presentations and the transition matrices
/// `H_i(C_n) → H_i(C_{n-1})` in their generators.
struct DegreeTower {
    pres: Vec<Presented>,
    down: Vec<Mat<Elem>>,
}

impl DegreeTower {
    fn build(stages: &[FreeComplex], maps: &[ChainMap], i: i64) -> Result<Self> {
        let pres = stages.iter().map(|c| Presented::of(c, i)).collect::<Result<Vec<_>>>()?;
        let mut down = Vec::with_capacity(maps.len());
        for (k, f) in maps.iter().enumerate() {
            down.push(pres[k + 1].induced(&f.component(i), &pres[k])?);
        }
        Ok(DegreeTower { pres, down })
    }

    /// Matrix of `H(C_m) → H(C_n)` for `m ≥ n` (1-based).
    fn composite(&self, n: usize, m: usize) -> Mat<Elem> {
        let pid = self.pres[n - 1].pid();
        let mut a = Mat::identity(pid, self.pres[n - 1].generators());
        for j in n + 1..=m {
            a = a.mul(pid, &self.down[j - 2]).expect("tower maps compose");
        }
        a
    }

    fn same_image(&self, n: usize, a: &Mat<Elem>, b: &Mat<Elem>) -> bool {
        let p = &self.pres[n - 1];
        p.contained(a, b) && p.contained(b, a)
    }

    /// Smallest lag `k` with `im(C_{n+k}) = im(C_N)` inside every `C_n`,
    /// accepted only if it was seen to repeat before the top stage.
    fn ml_lag(&self) -> Option<usize> {
        let top = self.pres.len();
        if self.pres.iter().all(|p| p.invariant().is_zero()) {
            return Some(0);
        }
        let finals: Vec<Mat<Elem>> = (1..=top).map(|n| self.composite(n, top)).collect();
        (0..top.saturating_sub(1))
            .find(|&k| (1..=top - k).all(|n| self.same_image(n, &self.composite(n, n + k), &finals[n - 1])))
    }

    fn stable_images(&self, lag: usize) -> Vec<ModuleInvariant> {
        let top = self.pres.len();
        (1..=top - lag).map(|n| self.pres[n - 1].image_invariant(&self.composite(n, top))).collect()
    }
}

fn classify(stable: &[ModuleInvariant], tag: Validity) -> LimInvariant {
    let tail = &stable[stable.len() / 2..];
    let last = tail.last().expect("at least one stable image");
    if tail.iter().all(|m| m.same_class(last)) && (tail.len() >= 2 || last.is_zero()) {
        return LimInvariant::Finite(last.clone().with_validity(tag));
    }
    let cyclic = tail.iter().all(|m| m.free_rank == 0 && m.torsion.len() == 1);
    let growing = tail.windows(2).all(|w| w[0].torsion_order() < w[1].torsion_order());
    if cyclic && growing && tail.len() >= 2 {
        let mut primes: Vec<BigInt> = Vec::new();
        for w in tail.windows(2) {
            let (hi, lo) = (w[1].torsion_order(), w[0].torsion_order());
            for (p, _) in arith::factor(&hi.div_floor(&lo)) {
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
        primes.sort();
        return LimInvariant::ProCyclic { primes };
    }
    if stable.len() < 2 {
        return LimInvariant::Undetermined;
    }
    LimInvariant::ProObject { stages: tail.to_vec() }
}

/// The derived completion `[e_Y, t] = holim_n (k^(n) ⊗ t)` at precision `N`.
pub fn derived_completion(t: &FreeComplex, ideal: &IdealSpec, precision: u32) -> Result<CompletionReport> {
    if precision == 0 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    if t.ring() != &ideal.ring {
        return Err(Error::RingMismatch(t.ring().to_string(), ideal.ring.to_string()));
    }
    let tower = KoszulTower::new(ideal.clone());
    let id = ChainMap::identity(t);
    let stages =
        (1..=precision).into_par_iter().map(|n| tensor(tower.stage(n)?.as_ref(), t)).collect::<Result<Vec<_>>>()?;
    let maps =
        (2..=precision).into_par_iter().map(|n| tensor_maps(&tower.map_q(n)?, &id)).collect::<Result<Vec<_>>>()?;
    let (lo, hi) = stages[0].range();
    let tag = Validity::ModuloIdealPower(precision);
    let per_degree = (lo..=hi)
        .into_par_iter()
        .map(|i| {
            let dt = DegreeTower::build(&stages, &maps, i)?;
            let lag = dt.ml_lag();
            let lim = match lag {
                Some(k) => classify(&dt.stable_images(k), tag),
                None => LimInvariant::Undetermined,
            };
            let inv = dt.pres.iter().map(Presented::invariant).collect();
            Ok((i, inv, lag, lim))
        })
        .collect::<Result<Vec<_>>>()?;
    let ml: BTreeMap<i64, bool> = per_degree.iter().map(|(i, _, lag, _)| (*i, lag.is_some())).collect();
    let lim1 = |i: i64| {
        if *ml.get(&i).unwrap_or(&true) {
            Lim1::Vanishes
        } else {
            Lim1::Inconclusive
        }
    };
    let degrees = per_degree
        .into_iter()
        .map(|(i, stages, lag, lim)| {
            let lim1_vanishes = lim1(i + 1);
            let holim = (lim1_vanishes == Lim1::Vanishes && lim != LimInvariant::Undetermined).then(|| lim.clone());
            let report = DegreeReport {
                stages,
                ml_stabilized_at: lag.map(|k| k as u32 + 1),
                lim,
                lim1_of_tower: lim1(i),
                lim1_vanishes,
                holim,
            };
            (i, report)
        })
        .collect();
    Ok(CompletionReport { precision, degrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::FreeComplex;
    use crate::rings::RingDescriptor;

    #[test]
    fn unit_over_integers_is_pro_cyclic() {
        let z = RingDescriptor::Integers;
        let ideal = IdealSpec::parse(&z, &["5"]).unwrap();
        let r = derived_completion(&FreeComplex::unit(&z), &ideal, 6).unwrap();
        let d0 = &r.degrees[&0];
        assert_eq!(d0.lim, LimInvariant::ProCyclic { primes: vec![BigInt::from(5)] });
        assert_eq!(d0.ml_stabilized_at, Some(1));
        // direct inverse limit oracle: the stage orders are 5^n
        for (n, m) in d0.stages.iter().enumerate() {
            assert_eq!(m.torsion_order(), BigInt::from(5).pow(n as u32 + 1));
        }
        assert!(r.degrees.values().all(|d| d.lim1_vanishes == Lim1::Vanishes));
        assert!(r.degrees[&1].holim.as_ref().unwrap().is_zero());
        assert_eq!(r.to_json()["degrees"]["0"]["lim"], json!({"kind": "pro-cyclic", "p": 5}));
    }

    #[test]
    fn trivial_completions() {
        let q = RingDescriptor::Rationals;
        let r = derived_completion(&FreeComplex::unit(&q), &IdealSpec::parse(&q, &["3"]).unwrap(), 4).unwrap();
        assert!(r.is_zero());
        let z = RingDescriptor::Integers;
        let r = derived_completion(&FreeComplex::unit(&z), &IdealSpec::parse(&z, &["1"]).unwrap(), 4).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn torsion_complex_is_already_complete() {
        let z = RingDescriptor::Integers;
        let ideal = IdealSpec::parse(&z, &["3"]).unwrap();
        let r = derived_completion(&FreeComplex::two_term(&z, &z.int(3)), &ideal, 5).unwrap();
        assert_eq!(
            r.degrees[&0].holim,
            Some(LimInvariant::Finite(
                ModuleInvariant::cyclic(BigInt::from(3)).with_validity(Validity::ModuloIdealPower(5))
            ))
        );
        // H_1 of each stage is Z/3 but the transition maps are multiplication by 3
        assert!(r.degrees[&1].stages.iter().all(|m| m.same_class(&ModuleInvariant::cyclic(BigInt::from(3)))));
        assert!(r.degrees[&1].holim.as_ref().unwrap().is_zero());
        assert!(r.determined());
    }
}
