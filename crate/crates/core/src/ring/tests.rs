use super::*;
use crate::fixtures;
use crate::ground::{int, Invariants};

fn inv(rank: usize, torsion: &[i64]) -> Invariants {
    Invariants { rank, torsion: torsion.iter().map(|&t| int(t)).collect() }
}

fn nf(r: &Ring, text: &str) -> String {
    r.format(&r.normal_form(&r.parse(text).unwrap()).unwrap())
}

#[test]
fn periodic_and_connective_bases() {
    let ku_big = fixtures::ring("KU").unwrap();
    let b = ku_big.degree_basis(4).unwrap();
    assert_eq!(b.invariants, inv(1, &[]));
    assert_eq!(ku_big.format_monomial(&b.monomials()[0]), "u^2");
    assert_eq!(ku_big.degree_basis(-6).unwrap().invariants, inv(1, &[]));
    assert!(ku_big.degree_basis(3).unwrap().is_zero());

    let ku = fixtures::ring("ku").unwrap();
    assert!(ku.degree_basis(3).unwrap().is_zero());
    assert!(ku.degree_basis(-2).unwrap().is_zero());
    assert_eq!(ku.degree_basis(6).unwrap().invariants, inv(1, &[]));
}

#[test]
fn ko_pieces() {
    let ko = fixtures::ring("KO").unwrap();
    let expected = [
        (0, inv(1, &[])),
        (1, inv(0, &[2])),
        (2, inv(0, &[2])),
        (3, inv(0, &[])),
        (4, inv(1, &[])),
        (8, inv(1, &[])),
        (9, inv(0, &[2])),
        (-4, inv(1, &[])),
        (-7, inv(0, &[2])),
    ];
    for (d, want) in expected {
        assert_eq!(ko.degree_basis(d).unwrap().invariants, want, "degree {d}");
    }
}

#[test]
fn normal_forms() {
    let ko = fixtures::ring("KO").unwrap();
    assert_eq!(nf(&ko, "y^2"), "4*w");
    assert_eq!(nf(&ko, "eta*y"), "0");
    assert_eq!(nf(&ko, "3*eta"), "eta");
    assert_eq!(nf(&ko, "y^3"), "4*y*w");
    let ku = fixtures::ring("KU").unwrap();
    assert_eq!(nf(&ku, "u*u^-1"), "1");
    assert_eq!(nf(&ku, "u^3*u^-1"), "u^2");
}

#[test]
fn multiplication_signs_and_torsion() {
    let ko = fixtures::ring("KO").unwrap();
    let eta = ko.parse("eta").unwrap();
    let sq = ko.mul(&eta, &eta).unwrap();
    assert_eq!(ko.format(&sq), "eta^2");
    assert!(ko.is_zero_element(&ko.scale(&sq, &int(2))).unwrap());
    assert!(!ko.is_zero_element(&sq).unwrap());

    let ext = RingPresentation::from_relations(
        GroundRing::Integers,
        vec![
            GeneratorDecl::new("e1", 1, GeneratorKind::Nilpotent(2)),
            GeneratorDecl::new("e2", 1, GeneratorKind::Nilpotent(2)),
        ],
        &[] as &[&str],
        RingFlags::default(),
    )
    .unwrap();
    let (a, b) = (ext.generator(0), ext.generator(1));
    let ab = ext.mul(&a, &b).unwrap();
    let ba = ext.mul(&b, &a).unwrap();
    assert_eq!(ab, ext.neg(&ba));
    assert!(!ab.is_zero());
}

#[test]
fn validation_errors() {
    let bad = RingPresentation::from_relations(
        GroundRing::Integers,
        vec![GeneratorDecl::new("y", 4, GeneratorKind::Polynomial), GeneratorDecl::new("w", 6, GeneratorKind::Invertible)],
        &["y^2 - 4*w"],
        RingFlags::default(),
    );
    assert!(matches!(bad, Err(Error::Inhomogeneous(_))));
    let zero_poly = RingPresentation::from_relations(
        GroundRing::Integers,
        vec![GeneratorDecl::new("t", 0, GeneratorKind::Polynomial)],
        &[] as &[&str],
        RingFlags::default(),
    );
    assert!(matches!(zero_poly, Err(Error::Validation(_))));
    let two_periodic = RingPresentation::from_relations(
        GroundRing::Integers,
        vec![GeneratorDecl::new("u", 2, GeneratorKind::Invertible), GeneratorDecl::new("v", 4, GeneratorKind::Invertible)],
        &[] as &[&str],
        RingFlags::default(),
    );
    assert!(matches!(two_periodic, Err(Error::Validation(m)) if m.contains("unbounded")));
    let dup = RingPresentation::from_relations(
        GroundRing::Integers,
        vec![GeneratorDecl::new("u", 2, GeneratorKind::Polynomial), GeneratorDecl::new("u", 4, GeneratorKind::Polynomial)],
        &[] as &[&str],
        RingFlags::default(),
    );
    assert!(matches!(dup, Err(Error::Validation(m)) if m.contains("duplicate")));
}

#[test]
fn odd_generators_get_the_commutativity_relation() {
    let r = RingPresentation::from_relations(
        GroundRing::Integers,
        vec![GeneratorDecl::new("x", 3, GeneratorKind::Polynomial)],
        &[] as &[&str],
        RingFlags::default(),
    )
    .unwrap();
    assert_eq!(r.auto_relations().len(), 1);
    assert_eq!(r.degree_basis(6).unwrap().invariants, inv(0, &[2]));
    let s = fixtures::ring("S_trunc5").unwrap();
    // eta is killed by 2 already, so only nu gets the extra relation
    assert_eq!(s.auto_relations().len(), 1);
    assert_eq!(s.format(&s.auto_relations()[0]), "2*nu^2");
}

#[test]
fn sphere_stems() {
    let s = fixtures::ring("S_trunc5").unwrap();
    let want = [(0, inv(1, &[])), (1, inv(0, &[2])), (2, inv(0, &[2])), (3, inv(0, &[24])), (4, inv(0, &[])), (5, inv(0, &[]))];
    for (d, w) in want {
        assert_eq!(s.degree_basis(d).unwrap().invariants, w, "degree {d}");
    }
    assert!(matches!(s.degree_basis(6), Err(Error::WindowExceeded { .. })));
    assert_eq!(nf(&s, "eta^3"), "12*nu");
}

#[test]
fn quotients() {
    let ku_big = fixtures::ring("KU").unwrap();
    let q = ku_big.quotient_ring(&[ku_big.parse("3").unwrap()]).unwrap();
    for d in [-4, 0, 2, 8] {
        assert_eq!(q.degree_basis(d).unwrap().invariants, inv(0, &[3]));
    }
    let ku = fixtures::ring("ku").unwrap();
    let q = ku.quotient_ring(&[ku.parse("2").unwrap(), ku.parse("u").unwrap()]).unwrap();
    assert_eq!(q.degree_basis(0).unwrap().invariants, inv(0, &[2]));
    for d in 1..=12 {
        assert!(q.degree_basis(d).unwrap().is_zero());
    }
    let same = ku.quotient_ring(&[]).unwrap();
    assert_eq!(*same, *ku);
}

#[test]
fn localization() {
    let ko = fixtures::ring("KO").unwrap();
    let at3 = ko.localize_ground(Localization::Prime(3)).unwrap();
    assert!(at3.degree_basis(1).unwrap().is_zero());
    assert!(at3.degree_basis(2).unwrap().is_zero());
    let at2 = ko.localize_ground(Localization::Prime(2)).unwrap();
    assert_eq!(at2.degree_basis(1).unwrap().invariants, inv(0, &[2]));
    assert!(ko.localize_ground(Localization::Prime(4)).is_err());
}

#[test]
fn maximal_ideals() {
    let show = |r: &Ring| r.graded_max_ideal().unwrap().iter().map(|e| r.format(e)).collect::<Vec<_>>();
    assert_eq!(show(&fixtures::ring("ku@2").unwrap()), ["2", "u"]);
    assert_eq!(show(&fixtures::ring("KU@5").unwrap()), ["5"]);
    assert_eq!(show(&fixtures::ring("KO@2").unwrap()), ["2", "eta", "y"]);
    assert!(matches!(fixtures::ring("KO").unwrap().graded_max_ideal(), Err(Error::NotGradedLocal)));
}

#[test]
fn residue_fields() {
    for (name, period) in [("ku@2", None), ("KU@3", Some(2)), ("KO@2", Some(8))] {
        let r = fixtures::ring(name).unwrap();
        let q = r.residue_quotient((-16, 16)).unwrap();
        assert_eq!(q.verdict, GradedFieldVerdict::GradedField { dimension: 1, period }, "{name}");
    }
    let z4 = fixtures::ring("Zp_triv@2").unwrap();
    let not_field = z4.quotient_ring(&[z4.parse("4").unwrap()]).unwrap();
    let flags = RingFlags { graded_local: Some(true), max_ideal0: vec![], ..RingFlags::default() };
    let fake = not_field.with_ground(not_field.ground().clone(), flags).unwrap();
    assert!(!fake.residue_quotient((0, 0)).unwrap().verdict.is_field());
}

#[test]
fn eilenberg_condition() {
    for name in ["ku@2", "ko@2", "S_trunc5@2", "Zp_triv@3"] {
        let r = fixtures::ring(name).unwrap();
        assert!(r.eilenberg_check((0, 12)).unwrap().passed, "{name}");
    }
    let v = fixtures::ring("KU").unwrap().eilenberg_check((0, 12)).unwrap();
    assert!(!v.passed && !v.connective);
    assert_eq!(v.negative_witness, Some(-12));
    let undeclared = fixtures::ring("ku").unwrap().eilenberg_check((0, 4)).unwrap();
    assert!(!undeclared.passed && undeclared.connective);
}

#[test]
fn group_rings() {
    let ku2 = fixtures::ring("ku[C2]").unwrap();
    assert_eq!(ku2.degree_basis(0).unwrap().invariants, inv(2, &[]));
    assert_eq!(ku2.degree_basis(4).unwrap().invariants, inv(2, &[]));
    let klein = fixtures::ring("Z_triv[C2xC2]").unwrap();
    assert_eq!(klein.degree_basis(0).unwrap().invariants, inv(4, &[]));
    let trivial = fixtures::ring("Z_triv[C1]").unwrap();
    assert_eq!(*trivial, *fixtures::ring("Z_triv").unwrap());
    let local = fixtures::ring("ku@2[C2]").unwrap();
    assert_eq!(local.flags().graded_local, Some(true));
    let show: Vec<String> = local.graded_max_ideal().unwrap().iter().map(|e| local.format(e)).collect();
    assert_eq!(show, ["2", "g - 1", "u"]);
    assert_eq!(fixtures::ring("ku@3[C2]").unwrap().flags().graded_local, None);
}

#[test]
fn unit_detection() {
    let zs5 = fixtures::ring("ZS5").unwrap();
    assert!(!zs5.is_unit_element(&zs5.parse("s").unwrap()).unwrap());
    assert!(zs5.is_unit_element(&zs5.parse("-1").unwrap()).unwrap());
    let ku = fixtures::ring("KU").unwrap();
    assert!(ku.is_unit_element(&ku.parse("-u^3").unwrap()).unwrap());
    assert!(!ku.is_unit_element(&ku.parse("2*u").unwrap()).unwrap());
}
