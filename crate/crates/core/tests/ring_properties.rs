use gradus::fixtures;
use gradus::ground::{int, Scalar};
use gradus::module::ModulePresentation;
use gradus::ring::{Localization, Ring, RingElement, RingPresentation};
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// A random combination of the reduced monomials of degree `d`.
fn element(r: &Ring, d: i64, coefficients: &[i64]) -> RingElement {
    let mut e = RingElement::zero();
    for (m, &c) in r.reduced_monomials(d).into_iter().zip(coefficients.iter().cycle()) {
        e = r.add(&e, &RingElement::monomial(m, int(c)));
    }
    e
}

fn in_window(r: &Ring, degrees: &[i64]) -> bool {
    degrees.iter().all(|&d| r.check_window(d).is_ok())
}

fn odd_rings() -> Vec<Ring> {
    ["KO", "ko", "S_trunc5"].iter().map(|n| fixtures::ring(n).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_commute_up_to_sign(
        which in 0usize..3,
        da in 0i64..6,
        db in 0i64..6,
        ca in prop::collection::vec(-3i64..=3, 1..4),
        cb in prop::collection::vec(-3i64..=3, 1..4),
    ) {
        let r = &odd_rings()[which];
        prop_assume!(in_window(r, &[da, db, da + db]));
        let a = element(r, da, &ca);
        let b = element(r, db, &cb);
        let ab = r.normal_form(&r.mul(&a, &b).unwrap()).unwrap();
        let ba = r.normal_form(&r.mul(&b, &a).unwrap()).unwrap();
        let expected = if da % 2 != 0 && db % 2 != 0 { r.neg(&ba) } else { ba };
        prop_assert_eq!(ab, expected);
    }

    #[test]
    fn odd_squares_are_two_torsion(which in 0usize..3, d in prop::sample::select(vec![1i64, 3, 5]), c in prop::collection::vec(-3i64..=3, 1..4)) {
        let r = &odd_rings()[which];
        prop_assume!(in_window(r, &[d, 2 * d]));
        let g = element(r, d, &c);
        let square = r.mul(&g, &g).unwrap();
        prop_assert!(r.is_zero_element(&r.scale(&square, &int(2))).unwrap());
    }

    #[test]
    fn relation_order_is_irrelevant(which in 0usize..4, seed in any::<u64>()) {
        let name = ["KO", "ko", "S_trunc5", "ZS5"][which];
        let r = fixtures::ring(name).unwrap();
        let mut relations: Vec<String> = r.relations().iter().map(|e| r.format(e)).collect();
        let mut x = seed;
        for i in (1..relations.len()).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            relations.swap(i, (x >> 33) as usize % (i + 1));
        }
        let s = RingPresentation::from_relations(r.ground().clone(), r.generators().to_vec(), &relations, r.flags().clone()).unwrap();
        for d in -4..=8 {
            if r.check_window(d).is_ok() {
                prop_assert_eq!(&r.degree_basis(d).unwrap().invariants, &s.degree_basis(d).unwrap().invariants);
            }
        }
    }

    #[test]
    fn quotient_ring_matches_cyclic_module(
        which in 0usize..2,
        degrees in prop::collection::vec(prop::sample::select(vec![0i64, 2, 4, 8]), 1..3),
        c in prop::collection::vec(-4i64..=4, 1..4),
    ) {
        let r = fixtures::ring(["ku", "ko"][which]).unwrap();
        let ideal: Vec<RingElement> = degrees.iter().map(|&d| element(&r, d, &c)).collect();
        let q = r.quotient_ring(&ideal).unwrap();
        let m = ModulePresentation::cyclic(&r, &ideal).unwrap();
        for d in 0..=12 {
            prop_assert_eq!(&q.degree_basis(d).unwrap().invariants, &m.degree_piece(d).unwrap().invariants);
        }
    }

    #[test]
    fn localization_keeps_the_p_part(which in 0usize..3, p in prop::sample::select(vec![2u64, 3, 5])) {
        let r = fixtures::ring(["ko", "S_trunc5", "ZS5"][which]).unwrap();
        let local = r.localize_ground(Localization::Prime(p)).unwrap();
        let k = local.ground().clone();
        for d in 0..=8 {
            if r.check_window(d).is_err() {
                continue;
            }
            let global = &r.degree_basis(d).unwrap().invariants;
            let mut expected: Vec<u64> = global
                .torsion
                .iter()
                .map(|t| {
                    let mut t = t.to_integer().to_u64().unwrap();
                    let mut part = 1;
                    while t % p == 0 {
                        t /= p;
                        part *= p;
                    }
                    part
                })
                .filter(|&q| q > 1)
                .collect();
            expected.sort_unstable();
            let got = &local.degree_basis(d).unwrap().invariants;
            prop_assert_eq!(got.rank, global.rank);
            let torsion: Vec<Scalar> = got.torsion.iter().map(|t| k.normalize(t).1).collect();
            let expected: Vec<Scalar> = expected.into_iter().map(|q| int(q as i64)).collect();
            prop_assert_eq!(torsion, expected, "degree {}", d);
        }
    }
}
