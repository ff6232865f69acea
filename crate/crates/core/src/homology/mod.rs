//! Koszul complexes, homology tables, Tor and E2 pages, and the quotient
//! tower checks.

mod analysis;
mod tor;
mod tower;

pub use analysis::{three_column_analysis, ColumnCase, ThreeColumnVerdict};
pub use tor::{kunneth_e2_page, minimal_collapse_check, tor, CollapseVerdict, E2Page, TorTable};
pub use tower::{ideal_cofinality_check, quotient_tower, CofinalityEntry, CofinalityReport, TowerReport, TowerSequence};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::{GroundRing, Invariants, InvariantsJson, Lattice};
use crate::module::{Module, ModuleMap, ModulePresentation};
use crate::resolution::FreeComplex;
use crate::ring::{Ring, RingElement};

/// Invariants indexed by homological degree `p` and internal degree `d`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedTable {
    pub entries: BTreeMap<(usize, i64), Invariants>,
}

impl GradedTable {
    pub fn get(&self, p: usize, d: i64) -> Invariants {
        self.entries.get(&(p, d)).cloned().unwrap_or_default()
    }

    /// Nonzero entries only.
    pub fn nonzero(&self) -> impl Iterator<Item = (&(usize, i64), &Invariants)> {
        self.entries.iter().filter(|(_, v)| !v.is_zero())
    }

    pub fn is_zero_above(&self, p: usize) -> bool {
        self.nonzero().all(|((q, _), _)| *q <= p)
    }

    pub fn to_json(&self, k: &GroundRing) -> Vec<TableEntryJson> {
        self.nonzero()
            .map(|(&(p, d), v)| {
                let InvariantsJson { rank, torsion } = v.to_json(k);
                TableEntryJson { p, d, rank, torsion }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableEntryJson {
    pub p: usize,
    pub d: i64,
    pub rank: usize,
    pub torsion: Vec<String>,
}

/// `H_n` in internal degree `d` of `modules[n] <- modules[n+1]`, where
/// `maps[n - 1]: modules[n] -> modules[n-1]`.
pub fn homology_at(modules: &[Module], maps: &[ModuleMap], n: usize, d: i64) -> Result<Invariants> {
    let f = &modules[n];
    let k = f.ring().ground();
    let data = f.degree_data(d)?;
    let cycles = match n.checked_sub(1).and_then(|i| maps.get(i)) {
        Some(dn) => dn.kernel_lattice(d)?,
        None => Lattice::full(k, data.dim()),
    };
    let boundaries = match maps.get(n) {
        Some(next) => next.image_lattice(d)?,
        None => data.relations.clone(),
    };
    cycles.quotient_invariants(k, &boundaries)
}

#[derive(Debug, Clone)]
pub struct HomologyReport {
    pub table: GradedTable,
    pub window: (i64, i64),
}

pub fn complex_homology(c: &FreeComplex, window: (i64, i64)) -> Result<HomologyReport> {
    let mut table = GradedTable::default();
    for n in 0..c.modules.len() {
        for d in window.0..=window.1 {
            table.entries.insert((n, d), homology_at(&c.modules, &c.differentials, n, d)?);
        }
    }
    Ok(HomologyReport { table, window })
}

/// Exterior algebra on `e_i` of bidegree `(1, |u_i|)` with `d e_i = u_i`.
#[derive(Debug, Clone)]
pub struct KoszulComplex {
    pub complex: FreeComplex,
    pub sequence: Vec<RingElement>,
    /// `labels[p][j]`: the increasing index set of the `j`-th generator of
    /// `K_p`.
    pub labels: Vec<Vec<Vec<usize>>>,
}

/// Subsets of `0..n` of size `p` in lexicographic order.
fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// Builds the Koszul complex; `d` is
/// `d(e_S) = Σ_j (-1)^{ε_j} u_{s_j} e_{S - s_j}` where `ε_j` sums the total
/// parities `1 + |u_s|` of the factors before `s_j`, weighted by that of `e_{s_j}`.
pub fn koszul_complex(ring: &Ring, sequence: &[RingElement]) -> Result<KoszulComplex> {
    let n = sequence.len();
    let mut degrees = Vec::with_capacity(n);
    let mut seq = Vec::with_capacity(n);
    for u in sequence {
        let u = ring.normal_form(u)?;
        let d = match ring.homogeneous_degree(&u)? {
            Some(d) => d,
            None => 0,
        };
        degrees.push(d);
        seq.push(u);
    }
    let parity = |i: usize| (1 + degrees[i]).rem_euclid(2);
    let labels: Vec<Vec<Vec<usize>>> = (0..=n).map(|p| subsets(n, p)).collect();
    let modules: Vec<Module> = labels
        .iter()
        .map(|ls| ModulePresentation::free(ring, ls.iter().map(|s| s.iter().map(|&i| degrees[i]).sum()).collect()))
        .collect::<Result<_>>()?;
    let mut differentials = Vec::with_capacity(n);
    for p in 1..=n {
        let lower = &labels[p - 1];
        let mut images = Vec::with_capacity(labels[p].len());
        for s in &labels[p] {
            let mut img = vec![RingElement::zero(); lower.len()];
            let mut before = 0;
            for (j, &i) in s.iter().enumerate() {
                let rest: Vec<usize> = s.iter().enumerate().filter(|&(l, _)| l != j).map(|(_, &x)| x).collect();
                let idx = lower.binary_search(&rest).expect("faces are listed");
                let sign = (before * parity(i)) % 2;
                img[idx] = if sign == 0 { seq[i].clone() } else { ring.neg(&seq[i]) };
                before += parity(i);
            }
            images.push(img);
        }
        differentials.push(ModuleMap::new(&modules[p], &modules[p - 1], 0, images)?);
    }
    let quotient = ModulePresentation::cyclic(ring, &seq)?;
    let augmentation = ModuleMap::new(&modules[0], &quotient, 0, vec![vec![ring.one()]])?;
    let complex = FreeComplex { ring: ring.clone(), modules, differentials, augmentation: Some(augmentation) };
    if !complex.is_complex()? {
        return Err(Error::Validation("Koszul differential does not square to zero".into()));
    }
    Ok(KoszulComplex { complex, sequence: seq, labels })
}

#[cfg(test)]
mod tests;
