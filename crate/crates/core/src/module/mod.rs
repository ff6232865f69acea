//! Finitely presented graded modules.
//!
//! A module element is a vector of ring elements, one per generator. In
//! degree `d` the free coordinates are the rule-reduced monomials of degree
//! `d - shift_i` for each generator; the relation lattice collects the ring's
//! linear relations blockwise and every monomial multiple of every module
//! relation landing in degree `d`.

mod map;

pub(crate) use map::choose_generators;
pub use map::{KernelReport, ModuleMap};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ground::{Invariants, Lattice, Scalar};
use crate::ring::{DegreeBasis, Ring, RingElement};

pub type Module = Arc<ModulePresentation>;
pub type ModuleElement = Vec<RingElement>;

/// Abelian-group invariants of one degree of a module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreePiece {
    pub degree: i64,
    pub invariants: Invariants,
}

/// Degreewise linear data of a module.
#[derive(Debug)]
pub struct ModuleDegree {
    pub degree: i64,
    blocks: Vec<Arc<DegreeBasis>>,
    offsets: Vec<usize>,
    dim: usize,
    pub relations: Lattice,
    pub invariants: Invariants,
}

impl ModuleDegree {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block(&self, i: usize) -> &DegreeBasis {
        &self.blocks[i]
    }

    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    /// Free coordinates of a homogeneous element of this degree.
    pub fn coordinates(&self, ring: &Ring, x: &[RingElement]) -> Result<Vec<Scalar>> {
        let mut v = vec![Scalar::zero(); self.dim];
        for (i, e) in x.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let c = self.blocks[i].coordinates_of_reduced(&ring.rewrite(e)?)?;
            v[self.offsets[i]..self.offsets[i] + c.len()].clone_from_slice(&c);
        }
        Ok(v)
    }

    pub fn element(&self, v: &[Scalar]) -> ModuleElement {
        self.blocks
            .iter()
            .enumerate()
            .map(|(i, b)| b.element(&v[self.offsets[i]..self.offsets[i] + b.len()]))
            .collect()
    }

    /// Unit vector of the `j`-th free coordinate.
    pub fn unit_vector(&self, j: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim];
        v[j] = Scalar::one();
        v
    }

    /// Generator index and monomial of the `j`-th free coordinate.
    pub fn locate(&self, j: usize) -> (usize, &crate::ring::Monomial) {
        for (i, b) in self.blocks.iter().enumerate() {
            let o = self.offsets[i];
            if j >= o && j < o + b.len() {
                return (i, &b.monomials()[j - o]);
            }
        }
        panic!("coordinate {j} out of range")
    }
}

pub struct ModulePresentation {
    ring: Ring,
    names: Vec<String>,
    shifts: Vec<i64>,
    relations: Vec<ModuleElement>,
    relation_degrees: Vec<i64>,
    cache: Mutex<HashMap<i64, Arc<ModuleDegree>>>,
}

impl fmt::Debug for ModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModulePresentation(shifts {:?}, {} relations)", self.shifts, self.relations.len())
    }
}

impl PartialEq for ModulePresentation {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring)
            && self.shifts == other.shifts
            && self.names == other.names
            && self.relations == other.relations
    }
}

impl ModulePresentation {
    /// Validates homogeneity and canonicalizes relation order.
    pub fn new(ring: &Ring, names: Vec<String>, shifts: Vec<i64>, relations: Vec<ModuleElement>) -> Result<Module> {
        if names.len() != shifts.len() {
            return Err(Error::ShapeMismatch(format!("{} names for {} generators", names.len(), shifts.len())));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Validation(format!("duplicate module generator name {n:?}")));
            }
        }
        let mut rows: Vec<(String, ModuleElement, i64)> = Vec::new();
        for row in relations {
            if row.len() != shifts.len() {
                return Err(Error::ShapeMismatch(format!(
                    "relation with {} entries for {} generators",
                    row.len(),
                    shifts.len()
                )));
            }
            let row: ModuleElement = row.iter().map(|e| ring.normal_form(e)).collect::<Result<_>>()?;
            let Some(deg) = element_degree(ring, &shifts, &row)? else { continue };
            let key: Vec<String> = row.iter().map(|e| ring.format(e)).collect();
            rows.push((key.join("|"), row, deg));
        }
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        rows.dedup_by(|a, b| a.0 == b.0);
        Ok(Arc::new(ModulePresentation {
            ring: ring.clone(),
            names,
            shifts,
            relation_degrees: rows.iter().map(|r| r.2).collect(),
            relations: rows.into_iter().map(|r| r.1).collect(),
            cache: Mutex::new(HashMap::new()),
        }))
    }

    /// Generators named `g0, g1, ...`.
    pub fn with_shifts(ring: &Ring, shifts: Vec<i64>, relations: Vec<ModuleElement>) -> Result<Module> {
        let names = (0..shifts.len()).map(|i| format!("g{i}")).collect();
        ModulePresentation::new(ring, names, shifts, relations)
    }

    pub fn free(ring: &Ring, shifts: Vec<i64>) -> Result<Module> {
        ModulePresentation::with_shifts(ring, shifts, Vec::new())
    }

    pub fn zero(ring: &Ring) -> Module {
        ModulePresentation::free(ring, Vec::new()).expect("empty module")
    }

    /// `R / (ideal)` on one generator of degree zero.
    pub fn cyclic(ring: &Ring, ideal: &[RingElement]) -> Result<Module> {
        ModulePresentation::with_shifts(ring, vec![0], ideal.iter().map(|e| vec![e.clone()]).collect())
    }

    /// Parses relation rows written as expressions.
    pub fn from_expressions<S: AsRef<str>>(
        ring: &Ring,
        names: Vec<String>,
        shifts: Vec<i64>,
        rows: &[Vec<S>],
    ) -> Result<Module> {
        let rels: Result<Vec<ModuleElement>> =
            rows.iter().map(|r| r.iter().map(|t| ring.parse(t.as_ref())).collect()).collect();
        ModulePresentation::new(ring, names, shifts, rels?)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn relations(&self) -> &[ModuleElement] {
        &self.relations
    }

    pub fn relation_degrees(&self) -> &[i64] {
        &self.relation_degrees
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn min_shift(&self) -> Option<i64> {
        self.shifts.iter().copied().min()
    }

    pub fn max_shift(&self) -> Option<i64> {
        self.shifts.iter().copied().max()
    }

    pub fn format_element(&self, x: &[RingElement]) -> Vec<String> {
        x.iter().map(|e| self.ring.format(e)).collect()
    }

    pub fn generator(&self, i: usize) -> ModuleElement {
        (0..self.rank()).map(|j| if i == j { self.ring.one() } else { RingElement::zero() }).collect()
    }

    pub fn degree_data(&self, d: i64) -> Result<Arc<ModuleDegree>> {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&d) {
            return Ok(hit.clone());
        }
        let data = Arc::new(self.compute_degree(d)?);
        self.cache.lock().expect("cache lock").insert(d, data.clone());
        Ok(data)
    }

    fn compute_degree(&self, d: i64) -> Result<ModuleDegree> {
        let ring = &self.ring;
        let k = ring.ground();
        let blocks: Vec<Arc<DegreeBasis>> =
            self.shifts.iter().map(|s| ring.degree_basis(d - s)).collect::<Result<_>>()?;
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for b in &blocks {
            offsets.push(dim);
            dim += b.len();
        }
        let mut data = ModuleDegree {
            degree: d,
            blocks,
            offsets,
            dim,
            relations: Lattice::zero(dim),
            invariants: Invariants::zero(),
        };
        let mut vectors = Vec::new();
        for (i, b) in data.blocks.iter().enumerate() {
            for r in b.relations.basis() {
                let mut v = vec![Scalar::zero(); dim];
                v[data.offsets[i]..data.offsets[i] + r.len()].clone_from_slice(r);
                vectors.push(v);
            }
        }
        for (row, delta) in self.relations.iter().zip(&self.relation_degrees) {
            for m in ring.reduced_monomials(d - delta) {
                let m = RingElement::monomial(m, Scalar::one());
                let x: ModuleElement = row.iter().map(|e| ring.mul_reduced(&m, e)).collect::<Result<_>>()?;
                vectors.push(data.coordinates(ring, &x)?);
            }
        }
        data.relations = Lattice::span(k, dim, vectors);
        data.invariants = data.relations.cokernel_invariants(k);
        Ok(data)
    }

    pub fn degree_piece(&self, d: i64) -> Result<DegreePiece> {
        Ok(DegreePiece { degree: d, invariants: self.degree_data(d)?.invariants.clone() })
    }

    /// Whether a homogeneous element of degree `d` vanishes in the module.
    pub fn is_zero_element(&self, d: i64, x: &[RingElement]) -> Result<bool> {
        let data = self.degree_data(d)?;
        Ok(data.relations.contains(self.ring.ground(), &data.coordinates(&self.ring, x)?))
    }

    /// Degree of a homogeneous element; `None` for zero.
    pub fn element_degree(&self, x: &[RingElement]) -> Result<Option<i64>> {
        element_degree(&self.ring, &self.shifts, x)
    }

    /// `Σ^k M`.
    pub fn shift(&self, k: i64) -> Result<Module> {
        ModulePresentation::new(
            &self.ring,
            self.names.clone(),
            self.shifts.iter().map(|s| s + k).collect(),
            self.relations.clone(),
        )
    }

    pub fn direct_sum(&self, other: &ModulePresentation) -> Result<Module> {
        self.same_ring(other)?;
        let (m, n) = (self.rank(), other.rank());
        let mut rels = Vec::new();
        for r in &self.relations {
            let mut row = r.clone();
            row.extend(std::iter::repeat(RingElement::zero()).take(n));
            rels.push(row);
        }
        for r in &other.relations {
            let mut row: ModuleElement = std::iter::repeat(RingElement::zero()).take(m).collect();
            row.extend(r.iter().cloned());
            rels.push(row);
        }
        let mut shifts = self.shifts.clone();
        shifts.extend(&other.shifts);
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        let distinct = names.iter().enumerate().all(|(i, x)| !names[..i].contains(x));
        if distinct {
            ModulePresentation::new(&self.ring, names, shifts, rels)
        } else {
            ModulePresentation::with_shifts(&self.ring, shifts, rels)
        }
    }

    /// `M ⊗_R N` on generators `g_i ⊗ h_j` (index `i * rank N + j`).
    ///
    /// `g_i ⊗ (r h_j) = (-1)^{|r| |g_i|} r (g_i ⊗ h_j)`.
    pub fn tensor(&self, other: &ModulePresentation) -> Result<Module> {
        self.same_ring(other)?;
        let ring = &self.ring;
        let (m, n) = (self.rank(), other.rank());
        let mut shifts = Vec::with_capacity(m * n);
        for s in &self.shifts {
            for t in &other.shifts {
                shifts.push(s + t);
            }
        }
        let mut rels = Vec::new();
        for rho in &self.relations {
            for j in 0..n {
                let mut row = vec![RingElement::zero(); m * n];
                for i in 0..m {
                    row[i * n + j] = rho[i].clone();
                }
                rels.push(row);
            }
        }
        for (sigma, eps) in other.relations.iter().zip(&other.relation_degrees) {
            for i in 0..m {
                let mut row = vec![RingElement::zero(); m * n];
                for j in 0..n {
                    let entry_degree = eps - other.shifts[j];
                    let odd = (entry_degree * self.shifts[i]).rem_euclid(2) == 1;
                    row[i * n + j] = if odd { ring.neg(&sigma[j]) } else { sigma[j].clone() };
                }
                rels.push(row);
            }
        }
        ModulePresentation::with_shifts(ring, shifts, rels)
    }

    /// The same presentation over `ring`, whose generator names must cover
    /// those used by the relations; coefficients are re-read there.
    pub fn base_change(&self, ring: &Ring) -> Result<Module> {
        let rels: Result<Vec<ModuleElement>> = self
            .relations
            .iter()
            .map(|row| row.iter().map(|e| ring.parse(&self.ring.format(e))).collect())
            .collect();
        ModulePresentation::new(ring, self.names.clone(), self.shifts.clone(), rels?)
    }

    /// `M / m M` for the maximal graded ideal.
    pub fn residue_module(&self) -> Result<Module> {
        let ideal = self.ring.graded_max_ideal()?;
        self.reduce_by(&ideal)
    }

    /// `M / I M`, keeping the generators of `M`.
    pub fn reduce_by(&self, ideal: &[RingElement]) -> Result<Module> {
        let mut rels = self.relations.clone();
        for i in 0..self.rank() {
            for x in ideal {
                let mut row = vec![RingElement::zero(); self.rank()];
                row[i] = x.clone();
                rels.push(row);
            }
        }
        ModulePresentation::new(&self.ring, self.names.clone(), self.shifts.clone(), rels)
    }

    /// Minimal number of generators per degree: dimensions of `M / m M`
    /// over the residue field.
    pub fn min_generators(&self, window: (i64, i64)) -> Result<Vec<(i64, usize)>> {
        let residue = self.residue_module()?;
        let k = self.ring.ground();
        let mut out = Vec::new();
        for d in window.0..=window.1 {
            let inv = residue.degree_piece(d)?.invariants;
            let dim = inv.residue_dimension(k).ok_or_else(|| {
                Error::Validation(format!("M/mM in degree {d} is {inv}, not a residue vector space"))
            })?;
            if dim > 0 {
                out.push((d, dim));
            }
        }
        Ok(out)
    }

    pub(crate) fn same_ring(&self, other: &ModulePresentation) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)))
        }
    }
}

pub(crate) fn element_degree(ring: &Ring, shifts: &[i64], x: &[RingElement]) -> Result<Option<i64>> {
    let mut deg = None;
    for (e, s) in x.iter().zip(shifts) {
        if let Some(d) = ring.homogeneous_degree(e)? {
            match deg {
                None => deg = Some(d + s),
                Some(d0) if d0 != d + s => {
                    return Err(Error::Inhomogeneous(format!(
                        "module element mixes degrees {d0} and {}",
                        d + s
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(deg)
}
