use super::*;
use crate::fixtures;
use crate::ground::int;
use crate::resolution::minimal_resolution;

fn inv(rank: usize, torsion: &[i64]) -> Invariants {
    Invariants { rank, torsion: torsion.iter().map(|&t| int(t)).collect() }
}

fn elems(r: &Ring, xs: &[&str]) -> Vec<RingElement> {
    xs.iter().map(|x| r.parse(x).unwrap()).collect()
}

#[test]
fn koszul_on_two_and_u() {
    let ku = fixtures::ring("ku").unwrap();
    let k = koszul_complex(&ku, &elems(&ku, &["2", "u"])).unwrap();
    assert_eq!(k.complex.betti(), vec![vec![0], vec![0, 2], vec![2]]);
    let d2 = &k.complex.differentials[1];
    // d(e1 e2) = u1 e2 - u2 e1
    assert_eq!(ku.format(&d2.images[0][0]), "-u");
    assert_eq!(ku.format(&d2.images[0][1]), "2");
    let h = complex_homology(&k.complex, (0, 12)).unwrap();
    assert_eq!(h.table.get(0, 0), inv(0, &[2]));
    assert!(h.table.nonzero().all(|(&(p, d), _)| p == 0 && d == 0));
}

#[test]
fn koszul_on_a_repeated_element() {
    let ku = fixtures::ring("ku").unwrap();
    let k = koszul_complex(&ku, &elems(&ku, &["u", "u"])).unwrap();
    let h = complex_homology(&k.complex, (0, 8)).unwrap();
    assert!((0..=8).any(|d| !h.table.get(1, d).is_zero()));
    let single = koszul_complex(&ku, &elems(&ku, &["u"])).unwrap();
    assert_eq!(single.complex.betti(), vec![vec![0], vec![2]]);
}

#[test]
fn zero_differentials_give_the_modules() {
    let ku = fixtures::ring("ku").unwrap();
    let k = koszul_complex(&ku, &elems(&ku, &["0"])).unwrap();
    let h = complex_homology(&k.complex, (0, 4)).unwrap();
    assert_eq!(h.table.get(0, 2), inv(1, &[]));
    assert_eq!(h.table.get(1, 0), inv(1, &[]));
}

#[test]
fn tor_of_coprime_torsion_vanishes() {
    let z = fixtures::ring("Z_triv").unwrap();
    let a = crate::module::ModulePresentation::cyclic(&z, &elems(&z, &["2"])).unwrap();
    let b = crate::module::ModulePresentation::cyclic(&z, &elems(&z, &["3"])).unwrap();
    let t = tor(&a, &b, 2, (0, 0)).unwrap();
    assert!(t.table.nonzero().next().is_none());
    let t = tor(&a, &a, 2, (0, 0)).unwrap();
    assert_eq!(t.get(0, 0), inv(0, &[2]));
    assert_eq!(t.get(1, 0), inv(0, &[2]));
    assert!(t.get(2, 0).is_zero());
}

#[test]
fn tor_of_residue_field_matches_betti_numbers() {
    let kappa = fixtures::module("ku_mod_2u@2").unwrap();
    let t = tor(&kappa, &kappa, 3, (0, 12)).unwrap();
    assert_eq!(t.certified, Some((0, 12)));
    let dims = t.residue_dimensions().unwrap();
    let expected: std::collections::BTreeMap<(usize, i64), usize> =
        [((0, 0), 1), ((1, 0), 1), ((1, 2), 1), ((2, 2), 1)].into_iter().collect();
    assert_eq!(dims, expected);
}

#[test]
fn tor_with_free_coefficients() {
    let ku = fixtures::ring("ku@2").unwrap();
    let r = crate::module::ModulePresentation::free(&ku, vec![0]).unwrap();
    let m = fixtures::module("ku_mod_u@2").unwrap();
    let t = tor(&r, &m, 2, (0, 6)).unwrap();
    for d in 0..=6 {
        assert_eq!(t.get(0, d), m.degree_piece(d).unwrap().invariants);
        assert!(t.get(1, d).is_zero() && t.get(2, d).is_zero());
    }
}

#[test]
fn periodic_tor_needs_a_full_period() {
    let ku = fixtures::ring("KU@3").unwrap();
    let a = crate::module::ModulePresentation::free(&ku, vec![3]).unwrap();
    let b = crate::module::ModulePresentation::free(&ku, vec![-3]).unwrap();
    let page = kunneth_e2_page(&a, &b, 2, (-2, 2)).unwrap();
    assert_eq!(page.tor.certified, Some((-2, 2)));
    assert!(page.tor.table.nonzero().all(|(&(p, _), _)| p == 0));
    assert_eq!(page.tor.get(0, 0), inv(1, &[]));
    assert_eq!(tor(&a, &b, 1, (0, 0)).unwrap().certified, None);
}

#[test]
fn collapse_for_minimal_resolutions() {
    let kappa = fixtures::module("Z_mod_2@2").unwrap();
    let q = minimal_resolution(&kappa, 3, (0, 0)).unwrap();
    let v = minimal_collapse_check(&kappa, &q.complex, (0, 0)).unwrap();
    assert!(v.collapsed);

    let z = kappa.ring().clone();
    let f1 = crate::module::ModulePresentation::free(&z, vec![0, 0]).unwrap();
    let f0 = crate::module::ModulePresentation::free(&z, vec![0, 0]).unwrap();
    let padded = ModuleMap::new(&f1, &f0, 0, vec![vec![z.parse("2").unwrap(), RingElement::zero()], vec![
        RingElement::zero(),
        z.one(),
    ]])
    .unwrap();
    let c = FreeComplex { ring: z.clone(), modules: vec![f0, f1], differentials: vec![padded], augmentation: None };
    match minimal_collapse_check(&kappa, &c, (0, 0)) {
        Err(Error::NotMinimal(m)) => assert!(m.contains("d_1")),
        other => panic!("expected a refusal, got {other:?}"),
    }
    let r = crate::module::ModulePresentation::free(&z, vec![0]).unwrap();
    let trivial = minimal_resolution(&r, 2, (0, 0)).unwrap();
    assert!(minimal_collapse_check(&kappa, &trivial.complex, (0, 0)).unwrap().collapsed);
}

#[test]
fn three_column_scenarios() {
    let collapsed = three_column_analysis(&[1, 0, 0], 1).unwrap();
    assert!(collapsed.consistent && collapsed.collapse);
    let wide = three_column_analysis(&[2, 1, 2], 1).unwrap();
    assert!(!wide.consistent);
    assert!(wide.cases[1].reason.contains("could not be a resolution"));
    let thin = three_column_analysis(&[1, 1, 1], 1).unwrap();
    assert!(!thin.consistent);
    assert!(thin.cases[1].reason.contains("non-trivial kernel"));
    assert!(three_column_analysis(&[1, 0, 0, 1], 1).is_err());
}

#[test]
fn ku_tower_degree_zero() {
    let ku = fixtures::ring("ku@2").unwrap();
    let gens = elems(&ku, &["2", "u"]);
    let t = quotient_tower(&ku, &gens, &[2, 1], (0, 10)).unwrap();
    assert_eq!(t.sequences.len(), 1);
    assert!(t.all_exact());
    let (_, z4) = t.modules.iter().find(|(e, _)| e == &vec![2, 1]).unwrap();
    assert_eq!(z4.degree_piece(0).unwrap().invariants, inv(0, &[4]));
    let flat = quotient_tower(&ku, &gens, &[1, 1], (0, 4)).unwrap();
    assert!(flat.sequences.is_empty());
    assert!(quotient_tower(&ku, &gens, &[0, 1], (0, 4)).is_err());
}

#[test]
fn cofinality_for_ku() {
    let ku = fixtures::ring("ku@2").unwrap();
    let gens = elems(&ku, &["2", "u"]);
    let report = ideal_cofinality_check(&ku, &gens, 3, 6).unwrap();
    assert!(report.complete());
    for e in &report.entries {
        let (a, b) = (e.exponents[0], e.exponents[1]);
        assert_eq!(e.power_inside, Some(a + b - 1));
        assert_eq!(e.inside_power, Some(a.min(b)));
    }
}
