mod common;

use common::random_module;
use gradus::fixtures;
use gradus::ground::{int, Invariants, Scalar};
use gradus::homology::{koszul_complex, quotient_tower, tor};
use gradus::ring::RingElement;
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const V: Option<(&str, i64)> = Some(("u", 2));
const WINDOW: (i64, i64) = (0, 6);

fn order(inv: &Invariants) -> Option<Scalar> {
    (inv.rank == 0).then(|| inv.torsion.iter().fold(Scalar::one(), |acc, t| acc * t))
}

fn power_of_two(e: u32) -> Scalar {
    int(1 << e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn tor_is_balanced(seed in any::<u64>()) {
        let r = fixtures::ring("ku@2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_module(&mut rng, &r, V);
        let n = random_module(&mut rng, &r, V);
        let mn = tor(&m, &n, 2, WINDOW).unwrap();
        let nm = tor(&n, &m, 2, WINDOW).unwrap();
        prop_assert_eq!(mn.certified, Some(WINDOW));
        prop_assert_eq!(nm.certified, Some(WINDOW));
        for p in 0..=2 {
            for d in WINDOW.0..=WINDOW.1 {
                prop_assert_eq!(mn.get(p, d), nm.get(p, d), "Tor_{} in degree {}", p, d);
            }
        }
    }

    #[test]
    fn tor_zero_is_the_tensor_product(seed in any::<u64>(), local in any::<bool>()) {
        let r = fixtures::ring(if local { "ku@2" } else { "ku" }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_module(&mut rng, &r, V);
        let n = random_module(&mut rng, &r, V);
        let t = tor(&m, &n, 1, WINDOW).unwrap();
        let product = m.tensor(&n).unwrap();
        for d in WINDOW.0..=WINDOW.1 {
            prop_assert_eq!(t.get(0, d), product.degree_piece(d).unwrap().invariants);
        }
    }

    #[test]
    fn koszul_homology_of_regular_sequences(a in 1u32..=3, b in 1i64..=3) {
        let r = fixtures::ring("ku").unwrap();
        let sequence: Vec<RingElement> = [format!("{}", 1 << a), format!("u^{b}")].iter().map(|t| r.parse(t).unwrap()).collect();
        let k = koszul_complex(&r, &sequence).unwrap();
        for d in 0..=10 {
            // H_0 = Z[u]/(2^a, u^b): Z/2^a in even degrees below 2b
            let expected = if d % 2 == 0 && d < 2 * b { power_of_two(a) } else { Scalar::one() };
            prop_assert_eq!(order(&k.complex.homology_at(0, d).unwrap()), Some(expected));
            for p in 1..=2 {
                prop_assert!(k.complex.homology_at(p, d).unwrap().is_zero(), "H_{} in degree {}", p, d);
            }
        }
    }

    #[test]
    fn koszul_detects_repeated_elements(b in 1i64..=3) {
        let r = fixtures::ring("ku").unwrap();
        let u = r.parse(&format!("u^{b}")).unwrap();
        let k = koszul_complex(&r, &[u.clone(), u]).unwrap();
        // e_1 - e_2 is a cycle in degree 2b that is not a boundary
        prop_assert!(!k.complex.homology_at(1, 2 * b).unwrap().is_zero());
    }

    #[test]
    fn quotient_tower_is_exact_with_known_orders(a in 1u32..=3, b in 1u32..=3) {
        let r = fixtures::ring("ku").unwrap();
        let gens = vec![r.parse("2").unwrap(), r.parse("u").unwrap()];
        let report = quotient_tower(&r, &gens, &[a, b], (0, 10)).unwrap();
        prop_assert!(report.all_exact());
        prop_assert_eq!(report.modules.len(), (a * b) as usize);
        for (exps, m) in &report.modules {
            for d in 0..=10 {
                let expected = if d % 2 == 0 && d < 2 * exps[1] as i64 { power_of_two(exps[0]) } else { Scalar::one() };
                prop_assert_eq!(order(&m.degree_piece(d).unwrap().invariants), Some(expected));
            }
        }
    }
}
