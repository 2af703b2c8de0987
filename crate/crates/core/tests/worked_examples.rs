use num_bigint::BigInt;
use num_integer::Integer;

use koszulkit::completion::{classical_completion_tower, separatedness_check, ModuleSpec, Separatedness};
use koszulkit::complexes::{base_change, cone, dual, homology, is_quasi_iso, ChainMap, FreeComplex};
use koszulkit::criteria::{counterexample_gallery, gallery, koszul_complete_check, Verdict};
use koszulkit::koszul_tower::{ell_homology, koszul, KoszulTower};
use koszulkit::rings::{quotient_ring, IdealSpec, ModuleInvariant, QuotientFlavor, RingDescriptor, RingOps};

fn ideal(ring: &RingDescriptor, gens: &[i64]) -> IdealSpec {
    IdealSpec::new(ring.clone(), gens.iter().map(|&g| ring.int(g)).collect()).unwrap()
}

fn at(h: &std::collections::BTreeMap<i64, ModuleInvariant>, i: i64) -> ModuleInvariant {
    h.get(&i).cloned().unwrap_or_else(ModuleInvariant::zero)
}

/// Size of `{x in Z/m : s x = 0}` by enumeration.
fn annihilator_size(m: i64, s: i64) -> i64 {
    (0..m).filter(|x| (s * x) % m == 0).count() as i64
}

#[test]
fn dual_of_cone_over_zmod_12() {
    let ring = RingDescriptor::integers_mod(12).unwrap();
    for s in [2i64, 3, 4, 6] {
        let h = homology(&dual(&FreeComplex::two_term(&ring, &ring.int(s)))).unwrap();
        assert_eq!(at(&h, -1).torsion_order(), BigInt::from(s.gcd(&12)));
        assert_eq!(at(&h, 0).torsion_order(), BigInt::from(annihilator_size(12, s)));
    }
}

#[test]
fn koszul_h0_is_gcd_quotient() {
    let z = RingDescriptor::Integers;
    for (a, b) in [(4i64, 6i64), (9, 12), (10, 15), (7, 11)] {
        let h = homology(&koszul(&ideal(&z, &[a, b])).unwrap()).unwrap();
        let g = a.gcd(&b);
        assert_eq!(at(&h, 0).torsion_order(), BigInt::from(g));
        assert_eq!(at(&h, 0).free_rank, 0);
    }
}

#[test]
fn tower_maps_are_not_quasi_isomorphisms() {
    let tower = KoszulTower::new(ideal(&RingDescriptor::Integers, &[2]));
    let q2 = tower.map_q(2).unwrap();
    assert!(!is_quasi_iso(&q2).unwrap());
    assert!(is_quasi_iso(&ChainMap::identity(&tower.stage(2).unwrap())).unwrap());
    assert_eq!(at(&homology(&tower.stage(2).unwrap()).unwrap(), 0).torsion, vec![BigInt::from(4)]);
}

#[test]
fn cone_of_multiplication_matches_koszul() {
    let z = RingDescriptor::Integers;
    let t = FreeComplex::unit(&z);
    let c = cone(&ChainMap::scalar(&t, &z.int(7))).unwrap().complex;
    assert_eq!(homology(&c).unwrap(), homology(&koszul(&ideal(&z, &[7])).unwrap()).unwrap());
}

#[test]
fn residue_base_change_doubles_the_residue_field() {
    let z = RingDescriptor::Integers;
    let i = ideal(&z, &[5]);
    let (_, map) = quotient_ring(&i, 1, QuotientFlavor::Powers).unwrap();
    let h = homology(&base_change(&koszul(&i).unwrap(), &map).unwrap()).unwrap();
    assert_eq!(at(&h, 0).torsion, vec![BigInt::from(5)]);
    assert_eq!(at(&h, 1).torsion, vec![BigInt::from(5)]);
}

#[test]
fn ell_homology_sees_the_annihilator() {
    let ring = RingDescriptor::integers_mod(9).unwrap();
    let h = ell_homology(&KoszulTower::new(ideal(&ring, &[3])), 1).unwrap();
    assert_eq!(at(&h, 1).torsion_order(), BigInt::from(annihilator_size(9, 3)));
    assert!(at(&h, 0).is_zero());
}

#[test]
fn unit_ideal_tower_is_zero() {
    let tower = classical_completion_tower(&ideal(&RingDescriptor::Integers, &[1]), 3).unwrap();
    for ring in tower.stages() {
        assert!(ring.is_zero(&ring.one()));
    }
}

#[test]
fn prufer_module_is_not_separated() {
    let z = RingDescriptor::Integers;
    let m = ModuleSpec::Prufer { ring: z.clone(), p: BigInt::from(3) };
    let s = separatedness_check(&m, &ideal(&z, &[3]), 5).unwrap();
    assert!(matches!(s, Separatedness::NotSeparated { .. }));
    let r = separatedness_check(&ModuleSpec::Regular(z.clone()), &ideal(&z, &[3]), 5).unwrap();
    assert!(matches!(r, Separatedness::SeparatedAtN(5)));
}

#[test]
fn counterexample_for_several_primes() {
    for p in [2u32, 3, 5, 7] {
        let ring = RingDescriptor::prufer_extension(p).unwrap();
        let v = koszul_complete_check(&ideal(&ring, &[p as i64]), 6).unwrap();
        assert_eq!(v.verdict, Verdict::NotComplete, "p = {p}");
        let w = v.witness.unwrap();
        assert_eq!(w.degree, 1);
        assert_eq!(w.lhs.torsion, vec![BigInt::from(p)]);
        assert!(w.rhs.is_zero());
    }
}

#[test]
fn gallery_presets() {
    assert_eq!(gallery("exa-no", 5, 8).unwrap().observed, "not_complete");
    assert_eq!(gallery("noetherian-Z", 3, 8).unwrap().observed, "complete");
    assert_eq!(gallery("regular-flat", 5, 8).unwrap().observed, "complete");
    assert!(gallery("nope", 5, 8).is_err());
    assert!(counterexample_gallery(3, 6).unwrap().iter().all(|e| e.pass()));
}
