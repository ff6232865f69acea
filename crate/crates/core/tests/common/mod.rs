//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use gradus::module::{Module, ModuleMap, ModulePresentation};
use gradus::ring::{Ring, RingElement};
use rand::Rng;

pub fn free(r: &Ring, shifts: Vec<i64>) -> Module {
    ModulePresentation::free(r, shifts).unwrap()
}

/// `c * v^e` as text, with `v` a ring generator name.
pub fn term(c: i64, v: &str, e: i64) -> String {
    if e == 0 {
        c.to_string()
    } else {
        format!("{c}*{v}^{e}")
    }
}

/// A random homogeneous element of degree `d` over a ring whose positive
/// part is generated by one variable `v` of degree `step`; zero when `d` is
/// not reachable.
pub fn random_element<R: Rng>(rng: &mut R, r: &Ring, v: Option<(&str, i64)>, d: i64) -> RingElement {
    let text = match v {
        None if d == 0 => rng.gen_range(-4..=4).to_string(),
        Some((name, step)) if d >= 0 && d % step == 0 => term(rng.gen_range(-4..=4), name, d / step),
        _ => "0".to_string(),
    };
    r.parse(&text).unwrap()
}

/// A random finitely presented module: up to three generators with shifts
/// in multiples of `step`, and up to two homogeneous relations.
pub fn random_module<R: Rng>(rng: &mut R, r: &Ring, v: Option<(&str, i64)>) -> Module {
    let step = v.map_or(0, |(_, s)| s);
    let rank = rng.gen_range(1..=3);
    let shifts: Vec<i64> = (0..rank).map(|_| step * rng.gen_range(0..=1)).collect();
    let mut relations = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let degree = step * rng.gen_range(0..=2);
        let row: Vec<RingElement> = shifts.iter().map(|&s| random_element(rng, r, v, degree - s)).collect();
        relations.push(row);
    }
    let names = (0..rank).map(|i| format!("x{i}")).collect();
    ModulePresentation::new(r, names, shifts, relations).unwrap()
}

/// A random element of `M` in degree `d`.
pub fn random_module_element<R: Rng>(rng: &mut R, m: &Module, v: Option<(&str, i64)>, d: i64) -> Vec<RingElement> {
    m.shifts().iter().map(|&s| random_element(rng, m.ring(), v, d - s)).collect()
}

/// Two covers of `M`: the identity on its generators, and a unitriangular
/// change of generators followed by up to two extra random generators.
pub fn random_covers<R: Rng>(rng: &mut R, m: &Module, v: Option<(&str, i64)>) -> (ModuleMap, ModuleMap) {
    let ring = m.ring();
    let p = free(ring, m.shifts().to_vec());
    let identity = ModuleMap::new(&p, m, 0, (0..m.rank()).map(|i| m.generator(i)).collect()).unwrap();
    let step = v.map_or(0, |(_, s)| s);
    let mut shifts = m.shifts().to_vec();
    let mut images = Vec::new();
    for i in 0..m.rank() {
        let mut x = m.generator(i);
        for j in 0..i {
            let c = random_element(rng, ring, v, m.shifts()[i] - m.shifts()[j]);
            x[j] = ring.add(&x[j], &c);
        }
        images.push(x);
    }
    for _ in 0..rng.gen_range(0..=2) {
        let s = step * rng.gen_range(0..=2);
        shifts.push(s);
        images.push(random_module_element(rng, m, v, s));
    }
    let f = free(ring, shifts);
    let other = ModuleMap::new(&f, m, 0, images).unwrap();
    (identity, other)
}

/// `Σ^a R` presented on generators `x` (shift `a`) and `y` (shift `a + e`)
/// with the relation `y = r x`, `r` of degree `e`.
pub fn twisted_shift(r: &Ring, a: i64, e: i64, coefficient: &str) -> Module {
    let names = vec!["x".to_string(), "y".to_string()];
    let relation = vec![r.neg(&r.parse(coefficient).unwrap()), r.one()];
    ModulePresentation::new(r, names, vec![a, a + e], vec![relation]).unwrap()
}
