use serde::Serialize;

use crate::error::{Error, Result};
use crate::module::{Module, ModuleMap, ModulePresentation};
use crate::ring::{Ring, RingElement};

/// `0 -> Σ^{|u_j|} R/(.., u_j^{i-1}, ..) -> R/(.., u_j^i, ..) -> R/(.., u_j, ..) -> 0`.
#[derive(Debug, Clone, Serialize)]
pub struct TowerSequence {
    pub exponents: Vec<u32>,
    pub index: usize,
    pub exact: bool,
    /// First degree where exactness fails.
    pub first_failure: Option<i64>,
}

#[derive(Debug, Clone)]
pub struct TowerReport {
    pub generators: Vec<RingElement>,
    /// Every quotient `R/(u_1^{i_1}, ..)` with exponents up to the given ones.
    pub modules: Vec<(Vec<u32>, Module)>,
    pub sequences: Vec<TowerSequence>,
    pub window: (i64, i64),
}

impl TowerReport {
    pub fn all_exact(&self) -> bool {
        self.sequences.iter().all(|s| s.exact)
    }
}

fn powers(ring: &Ring, gens: &[RingElement], exps: &[u32]) -> Result<Vec<RingElement>> {
    gens.iter().zip(exps).map(|(u, &e)| ring.pow(u, e)).collect()
}

fn quotient(ring: &Ring, gens: &[RingElement], exps: &[u32]) -> Result<Module> {
    ModulePresentation::cyclic(ring, &powers(ring, gens, exps)?)
}

/// All exponent vectors `1 <= e <= bound` componentwise, lexicographically.
fn exponent_box(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &b in bound {
        out = out.into_iter().flat_map(|v| (1..=b).map(move |e| [v.clone(), vec![e]].concat())).collect();
    }
    out
}

/// Builds the quotient tower below `exponents` and checks every short exact
/// sequence degreewise on `window`.
pub fn quotient_tower(ring: &Ring, gens: &[RingElement], exponents: &[u32], window: (i64, i64)) -> Result<TowerReport> {
    if gens.len() != exponents.len() {
        return Err(Error::ShapeMismatch(format!("{} generators for {} exponents", gens.len(), exponents.len())));
    }
    if exponents.contains(&0) {
        return Err(Error::InvalidInput("tower exponents must be at least 1".into()));
    }
    let mut modules = Vec::new();
    let mut sequences = Vec::new();
    for exps in exponent_box(exponents) {
        let middle = quotient(ring, gens, &exps)?;
        for j in 0..gens.len() {
            if exps[j] < 2 {
                continue;
            }
            let uj = &gens[j];
            let deg = ring.homogeneous_degree(uj)?.unwrap_or(0);
            let mut sub_exps = exps.clone();
            sub_exps[j] -= 1;
            let sub = quotient(ring, gens, &sub_exps)?.shift(deg)?;
            let mut top_exps = exps.clone();
            top_exps[j] = 1;
            let top = quotient(ring, gens, &top_exps)?;
            let mult = ModuleMap::new(&sub, &middle, 0, vec![vec![uj.clone()]])?;
            let proj = ModuleMap::new(&middle, &top, 0, vec![vec![ring.one()]])?;
            let first_failure = first_inexact_degree(&mult, &proj, window)?;
            sequences.push(TowerSequence { exponents: exps.clone(), index: j, exact: first_failure.is_none(), first_failure });
        }
        modules.push((exps, middle));
    }
    Ok(TowerReport { generators: gens.to_vec(), modules, sequences, window })
}

/// `f` injective, `g` surjective and `ker g = im f` in each degree.
fn first_inexact_degree(f: &ModuleMap, g: &ModuleMap, window: (i64, i64)) -> Result<Option<i64>> {
    let k = f.source.ring().ground();
    for d in window.0..=window.1 {
        let image = f.image_lattice(d)?;
        let kernel = g.kernel_lattice(d)?;
        let exact = f.is_injective_at(d)?
            && g.is_surjective_at(d)?
            && image.contains_lattice(k, &kernel)
            && kernel.contains_lattice(k, &image);
        if !exact {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CofinalityEntry {
    pub exponents: Vec<u32>,
    /// Least `l` with `m^l` inside the tower ideal; `None` when the power
    /// bound ran out.
    pub power_inside: Option<u32>,
    /// Largest `l` up to the bound with the tower ideal inside `m^l`.
    pub inside_power: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CofinalityReport {
    pub entries: Vec<CofinalityEntry>,
    pub exponent_bound: u32,
    pub power_bound: u32,
}

impl CofinalityReport {
    /// Every entry found both containments.
    pub fn complete(&self) -> bool {
        self.entries.iter().all(|e| e.power_inside.is_some() && e.inside_power.is_some())
    }
}

/// Products of `l` generators, with repetition.
fn ideal_power(ring: &Ring, gens: &[RingElement], l: u32) -> Result<Vec<RingElement>> {
    let mut out = vec![ring.one()];
    for _ in 0..l {
        let mut next = Vec::new();
        for x in &out {
            for u in gens {
                next.push(ring.mul(x, u)?);
            }
        }
        out = next;
    }
    // keep one copy of each product
    let mut keyed: Vec<(String, RingElement)> = out.into_iter().map(|e| (ring.format(&e), e)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    Ok(keyed.into_iter().map(|(_, e)| e).collect())
}

/// For every exponent vector up to `exponent_bound`, finds the powers of
/// `m = (gens)` comparable with `(u_1^{i_1}, ..)`, searching `l` up to
/// `power_bound`. Each containment is decided by normal forms in the
/// quotient ring.
pub fn ideal_cofinality_check(
    ring: &Ring,
    gens: &[RingElement],
    exponent_bound: u32,
    power_bound: u32,
) -> Result<CofinalityReport> {
    let powers_of_m: Vec<Vec<RingElement>> =
        (0..=power_bound).map(|l| ideal_power(ring, gens, l)).collect::<Result<_>>()?;
    let mut entries = Vec::new();
    for exps in exponent_box(&vec![exponent_bound; gens.len()]) {
        let tower = powers(ring, gens, &exps)?;
        let q = ring.quotient_ring(&tower)?;
        let mut power_inside = None;
        for l in 1..=power_bound {
            if all_zero(&q, &powers_of_m[l as usize])? {
                power_inside = Some(l);
                break;
            }
        }
        let mut inside_power = None;
        for l in 1..=power_bound {
            let q = ring.quotient_ring(&powers_of_m[l as usize])?;
            if all_zero(&q, &tower)? {
                inside_power = Some(l);
            } else {
                break;
            }
        }
        entries.push(CofinalityEntry { exponents: exps, power_inside, inside_power });
    }
    Ok(CofinalityReport { entries, exponent_bound, power_bound })
}

fn all_zero(q: &Ring, xs: &[RingElement]) -> Result<bool> {
    for x in xs {
        if !q.is_zero_element(x)? {
            return Ok(false);
        }
    }
    Ok(true)
}
