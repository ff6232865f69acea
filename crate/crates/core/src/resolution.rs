//! Free and minimal free resolutions.
//!
//! Stage `n` picks generators of `ker d_{n-1}` degree by degree on the
//! window, so `ker d_{n-1} = im d_n` holds in every window degree by
//! construction. Nothing is claimed outside the window.

use crate::error::{Error, Result};
use crate::ground::Invariants;
use crate::module::{choose_generators, Module, ModuleElement, ModuleMap, ModulePresentation};
use crate::ring::{Ring, RingElement};

/// `F_L -> ... -> F_1 -> F_0 (-> M)` with free `F_n`.
#[derive(Debug, Clone)]
pub struct FreeComplex {
    pub ring: Ring,
    pub modules: Vec<Module>,
    /// `differentials[n - 1] = d_n: F_n -> F_{n-1}`.
    pub differentials: Vec<ModuleMap>,
    pub augmentation: Option<ModuleMap>,
}

impl FreeComplex {
    pub fn length(&self) -> usize {
        self.modules.len().saturating_sub(1)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.rank()).collect()
    }

    /// Generator shifts of each `F_n`, sorted.
    pub fn betti(&self) -> Vec<Vec<i64>> {
        self.modules
            .iter()
            .map(|m| {
                let mut s = m.shifts().to_vec();
                s.sort_unstable();
                s
            })
            .collect()
    }

    /// `d_n d_{n+1} = 0` entrywise and `augmentation d_1 = 0` in `M`.
    pub fn is_complex(&self) -> Result<bool> {
        for pair in self.differentials.windows(2) {
            let dd = pair[0].compose_unchecked(&pair[1])?;
            for e in dd.images.iter().flatten() {
                if !self.ring.is_zero_element(e)? {
                    return Ok(false);
                }
            }
        }
        if let (Some(eps), Some(d1)) = (&self.augmentation, self.differentials.first()) {
            let comp = eps.compose_unchecked(d1)?;
            for (img, s) in comp.images.iter().zip(d1.source.shifts()) {
                if !eps.target.is_zero_element(*s, img)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Homology invariants `H_n` in degree `d`, with `H_0 = F_0 / im d_1`.
    pub fn homology_at(&self, n: usize, d: i64) -> Result<Invariants> {
        crate::homology::homology_at(&self.modules, &self.differentials, n, d)
    }
}

#[derive(Debug, Clone)]
pub struct ResolutionReport {
    pub complex: FreeComplex,
    /// Degrees on which `ker d_n = im d_{n+1}` (and `im augmentation = M`)
    /// were established.
    pub window: (i64, i64),
    /// `None` when the ring is not graded-local.
    pub minimal: Option<bool>,
    /// Whether the last kernel vanished on the window, so the complex stops
    /// there; otherwise the length cap was reached.
    pub terminated: bool,
}

impl ResolutionReport {
    pub fn betti(&self) -> Vec<Vec<i64>> {
        self.complex.betti()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.complex.ranks()
    }
}

/// Resolution starting from the presentation of `m`: `F_0` on its
/// generators and `F_1` on its relations.
pub fn free_resolution(m: &Module, length: usize, window: (i64, i64)) -> Result<ResolutionReport> {
    let ring = m.ring().clone();
    let f0 = ModulePresentation::free(&ring, m.shifts().to_vec())?;
    let eps = ModuleMap::new(&f0, m, 0, (0..m.rank()).map(|i| m.generator(i)).collect())?;
    let mut first: Vec<(ModuleElement, i64)> =
        m.relations().iter().cloned().zip(m.relation_degrees().iter().copied()).collect();
    first.sort_by_key(|g| g.1);
    build(ring, f0, eps, Some(first), length, window, &[])
}

/// Minimal resolution over a graded-local ring: `F_0` lifts a residue basis
/// of `M` degree by degree, and each later stage is chosen minimally modulo
/// the maximal ideal.
pub fn minimal_resolution(m: &Module, length: usize, window: (i64, i64)) -> Result<ResolutionReport> {
    let ring = m.ring().clone();
    let ideal = ring.graded_max_ideal()?;
    let ideal0: Vec<RingElement> = ideal
        .iter()
        .filter(|e| ring.homogeneous_degree(e).ok().flatten().unwrap_or(0) == 0)
        .cloned()
        .collect();
    let k = ring.ground().clone();
    let gens = choose_generators(m, window, &ideal0, |d| {
        Ok(crate::ground::Lattice::full(&k, m.degree_data(d)?.dim()))
    })?;
    let f0 = ModulePresentation::free(&ring, gens.iter().map(|g| g.1).collect())?;
    let eps = ModuleMap::new(&f0, m, 0, gens.into_iter().map(|g| g.0).collect())?;
    let mut report = build(ring, f0, eps, None, length, window, &ideal0)?;
    report.minimal = Some(is_minimal(&report.complex)?);
    Ok(report)
}

fn build(
    ring: Ring,
    f0: Module,
    eps: ModuleMap,
    first: Option<Vec<(ModuleElement, i64)>>,
    length: usize,
    window: (i64, i64),
    ideal0: &[RingElement],
) -> Result<ResolutionReport> {
    for d in window.0..=window.1 {
        if !eps.is_surjective_at(d)? {
            return Err(Error::Validation(format!("augmentation is not onto in degree {d}")));
        }
    }
    let mut modules = vec![f0];
    let mut differentials: Vec<ModuleMap> = Vec::new();
    let mut previous = eps.clone();
    let mut first = first;
    let mut terminated = false;
    for _ in 0..length {
        let gens = match first.take() {
            Some(g) => g,
            None => previous.kernel_generators(window, ideal0)?,
        };
        if gens.is_empty() {
            terminated = true;
            break;
        }
        let fn_ = ModulePresentation::free(&ring, gens.iter().map(|g| g.1).collect())?;
        let target = modules.last().expect("F_0 exists").clone();
        let dn = ModuleMap::new(&fn_, &target, 0, gens.into_iter().map(|g| g.0).collect())?;
        modules.push(fn_);
        differentials.push(dn.clone());
        previous = dn;
    }
    if !terminated {
        terminated = previous.kernel_generators(window, &[])?.is_empty();
    }
    let complex = FreeComplex { ring, modules, differentials, augmentation: Some(eps) };
    if !complex.is_complex()? {
        return Err(Error::Validation("resolution differentials do not square to zero".into()));
    }
    Ok(ResolutionReport { complex, window, minimal: None, terminated })
}

/// Every differential entry lies in the maximal graded ideal.
pub fn is_minimal(c: &FreeComplex) -> Result<bool> {
    let ideal = c.ring.graded_max_ideal()?;
    let q = c.ring.quotient_ring(&ideal)?;
    for d in &c.differentials {
        for e in d.images.iter().flatten() {
            if !q.is_zero_element(e)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchanuelVerdict {
    pub isomorphic: bool,
    pub first_failure: Option<i64>,
    pub window: (i64, i64),
}

/// Compares `P ⊕ ker(F -> M)` with `F ⊕ ker(P -> M)` degreewise, for covers
/// `p: P -> M` and `f: F -> M`.
pub fn schanuel_compare(p: &ModuleMap, f: &ModuleMap, window: (i64, i64)) -> Result<SchanuelVerdict> {
    p.source.same_ring(&f.source)?;
    if *p.target != *f.target {
        return Err(Error::Validation("the two covers present different modules".into()));
    }
    let k = p.source.ring().ground();
    for d in window.0..=window.1 {
        for cover in [p, f] {
            if !cover.is_surjective_at(d)? {
                return Err(Error::Validation(format!("cover is not onto in degree {d}")));
            }
        }
    }
    let kernel = |g: &ModuleMap, d: i64| -> Result<Invariants> {
        g.kernel_lattice(d)?.quotient_invariants(k, &g.source.degree_data(d)?.relations)
    };
    for d in window.0..=window.1 {
        let left = p.source.degree_piece(d)?.invariants.direct_sum(&kernel(f, d)?, k);
        let right = f.source.degree_piece(d)?.invariants.direct_sum(&kernel(p, d)?, k);
        if left != right {
            return Ok(SchanuelVerdict { isomorphic: false, first_failure: Some(d), window });
        }
    }
    Ok(SchanuelVerdict { isomorphic: true, first_failure: None, window })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn free_modules_resolve_in_length_zero() {
        let ku = fixtures::ring("ku@2").unwrap();
        let f = ModulePresentation::free(&ku, vec![0, 3]).unwrap();
        let r = minimal_resolution(&f, 4, (0, 10)).unwrap();
        assert_eq!(r.ranks(), vec![2]);
        assert!(r.terminated);
        assert_eq!(r.minimal, Some(true));
    }

    #[test]
    fn residue_field_of_ku() {
        let m = fixtures::module("ku_mod_2u@2").unwrap();
        let r = minimal_resolution(&m, 4, (0, 12)).unwrap();
        assert_eq!(r.betti(), vec![vec![0], vec![0, 2], vec![2]]);
        assert!(r.terminated);
        assert_eq!(r.minimal, Some(true));
        let free = free_resolution(&m, 4, (0, 12)).unwrap();
        assert_eq!(free.ranks(), vec![1, 2, 1]);
    }

    #[test]
    fn two_torsion_over_integers() {
        let m = fixtures::module("Z_mod_2").unwrap();
        let r = free_resolution(&m, 3, (0, 0)).unwrap();
        assert_eq!(r.ranks(), vec![1, 1]);
        assert!(r.terminated);
        let local = fixtures::module("Z_mod_2@2").unwrap();
        let r = minimal_resolution(&local, 3, (0, 0)).unwrap();
        assert_eq!(r.ranks(), vec![1, 1]);
        assert_eq!(r.minimal, Some(true));
    }

    #[test]
    fn unit_entries_are_not_minimal() {
        let z = fixtures::ring("Zp_triv@2").unwrap();
        let f1 = ModulePresentation::free(&z, vec![0, 0]).unwrap();
        let f0 = ModulePresentation::free(&z, vec![0, 0]).unwrap();
        let d = ModuleMap::new(&f1, &f0, 0, vec![vec![z.parse("2").unwrap(), z.parse("0").unwrap()], vec![
            z.parse("0").unwrap(),
            z.one(),
        ]])
        .unwrap();
        let c = FreeComplex { ring: z.clone(), modules: vec![f0, f1], differentials: vec![d], augmentation: None };
        assert!(!is_minimal(&c).unwrap());
        assert!(matches!(is_minimal(&FreeComplex { ring: fixtures::ring("Z_triv").unwrap(), ..c }), Err(Error::NotGradedLocal)));
    }

    #[test]
    fn schanuel_on_two_covers_of_z_mod_2() {
        let z = fixtures::ring("Z_triv").unwrap();
        let m = fixtures::module("Z_mod_2").unwrap();
        let p = ModulePresentation::free(&z, vec![0]).unwrap();
        let f = ModulePresentation::free(&z, vec![0, 0]).unwrap();
        let cover_p = ModuleMap::new(&p, &m, 0, vec![vec![z.one()]]).unwrap();
        let cover_f = ModuleMap::new(&f, &m, 0, vec![vec![z.one()], vec![z.parse("3").unwrap()]]).unwrap();
        let v = schanuel_compare(&cover_p, &cover_f, (0, 0)).unwrap();
        assert!(v.isomorphic);
        assert!(schanuel_compare(&cover_p, &cover_p, (0, 0)).unwrap().isomorphic);
    }
}
