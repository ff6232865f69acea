use std::collections::BTreeMap;

use super::{homology_at, GradedTable};
use crate::error::{Error, Result};
use crate::ground::{GroundRing, Invariants};
use crate::module::{Module, ModuleMap};
use crate::resolution::{free_resolution, is_minimal, minimal_resolution, FreeComplex, ResolutionReport};
use crate::ring::RingElement;

/// `Tor_{p,d}(M, N)` computed as `H_p(M ⊗ Q)` for a resolution `Q` of `N`.
#[derive(Debug, Clone)]
pub struct TorTable {
    pub table: GradedTable,
    pub window: (i64, i64),
    /// Internal degrees on which the entries equal the true Tor groups;
    /// `None` when the resolution cannot be certified.
    pub certified: Option<(i64, i64)>,
    pub pmax: usize,
    /// Sorted generator shifts of the resolution used.
    pub betti: Vec<Vec<i64>>,
    pub ground: GroundRing,
}

impl TorTable {
    pub fn get(&self, p: usize, d: i64) -> Invariants {
        self.table.get(p, d)
    }

    /// Whether `Tor_p` vanishes for `lo <= p <= hi` on the certified window.
    pub fn vanishes(&self, lo: usize, hi: usize) -> Option<bool> {
        let (a, b) = self.certified?;
        Some((lo..=hi).all(|p| (a..=b).all(|d| self.get(p, d).is_zero())))
    }

    /// Dimensions over the residue field, when every entry is a vector space
    /// over it.
    pub fn residue_dimensions(&self) -> Option<BTreeMap<(usize, i64), usize>> {
        self.table
            .entries
            .iter()
            .map(|(&key, v)| v.residue_dimension(&self.ground).map(|n| (key, n)))
            .filter(|e| !matches!(e, Some((_, 0))))
            .collect()
    }

    /// Total residue dimension of column `p` over the certified window.
    pub fn column_dimension(&self, p: usize) -> Option<usize> {
        let dims = self.residue_dimensions()?;
        Some(dims.iter().filter(|((q, _), _)| *q == p).map(|(_, n)| n).sum())
    }
}

/// The Künneth E2 page: a Tor table plus the graded group it abuts to.
#[derive(Debug, Clone)]
pub struct E2Page {
    pub tor: TorTable,
    pub abutment: Option<Vec<(i64, Invariants)>>,
}

pub fn kunneth_e2_page(m: &Module, n: &Module, pmax: usize, window: (i64, i64)) -> Result<E2Page> {
    Ok(E2Page { tor: tor(m, n, pmax, window)?, abutment: None })
}

/// Resolves `N` and computes `H_p(M ⊗ Q)` for `p <= pmax`.
///
/// Over a connective ring the resolution is built on a window reaching
/// every generator that can meet `[a, b]` after tensoring, so the whole
/// window is certified. Over a periodic ring the window must cover a full
/// period. Otherwise nothing is certified.
pub fn tor(m: &Module, n: &Module, pmax: usize, window: (i64, i64)) -> Result<TorTable> {
    m.same_ring(n)?;
    let ring = m.ring();
    let (a, b) = window;
    let (res_window, certified) = if ring.is_connective() {
        let n0 = n.min_shift().unwrap_or(a);
        let m0 = m.min_shift().unwrap_or(0);
        ((a.min(n0), b.max(b - m0)), Some(window))
    } else if ring.period().is_some_and(|p| b - a + 1 >= p) {
        (window, Some(window))
    } else {
        (window, None)
    };
    let q = resolve(n, pmax + 1, res_window)?;
    let complex = tensor_complex(m, &q.complex)?;
    let mut table = GradedTable::default();
    for p in 0..=pmax {
        for d in a..=b {
            let h = if p < complex.0.len() { homology_at(&complex.0, &complex.1, p, d)? } else { Invariants::zero() };
            table.entries.insert((p, d), h);
        }
    }
    Ok(TorTable { table, window, certified, pmax, betti: q.betti(), ground: ring.ground().clone() })
}

fn resolve(n: &Module, length: usize, window: (i64, i64)) -> Result<ResolutionReport> {
    if n.ring().flags().graded_local == Some(true) {
        minimal_resolution(n, length, window)
    } else {
        free_resolution(n, length, window)
    }
}

/// `M ⊗ Q_p` with differentials `1 ⊗ d_p`.
pub(crate) fn tensor_complex(m: &Module, q: &FreeComplex) -> Result<(Vec<Module>, Vec<ModuleMap>)> {
    let modules: Vec<Module> = q.modules.iter().map(|f| m.tensor(f)).collect::<Result<_>>()?;
    let mut maps = Vec::with_capacity(q.differentials.len());
    for (p, d) in q.differentials.iter().enumerate() {
        maps.push(tensor_identity(m, d, &modules[p + 1], &modules[p])?);
    }
    Ok((modules, maps))
}

/// `1_M ⊗ f` between `M ⊗ F` and `M ⊗ G`: generator `g_i ⊗ h_j` goes to
/// `Σ_l (-1)^{|r| |g_i|} r (g_i ⊗ h_l)` for `f(h_j) = Σ_l r h_l`.
pub(crate) fn tensor_identity(m: &Module, f: &ModuleMap, source: &Module, target: &Module) -> Result<ModuleMap> {
    let ring = m.ring();
    let (sr, tr) = (f.source.rank(), f.target.rank());
    let mut images = Vec::with_capacity(m.rank() * sr);
    for (i, gi) in m.shifts().iter().enumerate() {
        for j in 0..sr {
            let mut img = vec![RingElement::zero(); m.rank() * tr];
            for (l, r) in f.images[j].iter().enumerate() {
                if r.is_zero() {
                    continue;
                }
                let deg = ring.homogeneous_degree(r)?.unwrap_or(0);
                img[i * tr + l] = if (deg * gi).rem_euclid(2) == 1 { ring.neg(r) } else { r.clone() };
            }
            images.push(img);
        }
    }
    ModuleMap::new(source, target, f.degree, images)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseVerdict {
    pub collapsed: bool,
    /// First `(p, d)` where `κ ⊗ d_p` is nonzero.
    pub first_nonzero: Option<(usize, i64)>,
    pub window: (i64, i64),
}

/// Checks that every differential of `κ ⊗ Q` vanishes on the window. A
/// complex that is not minimal is refused with `NotMinimal`, naming the
/// first surviving induced differential.
pub fn minimal_collapse_check(kappa: &Module, q: &FreeComplex, window: (i64, i64)) -> Result<CollapseVerdict> {
    let first_nonzero = first_nonzero_induced(kappa, q, window)?;
    if !is_minimal(q)? {
        let location = match first_nonzero {
            Some((p, d)) => format!("induced differential d_{p} is nonzero in degree {d}"),
            None => "a differential entry is a unit".into(),
        };
        return Err(Error::NotMinimal(location));
    }
    Ok(CollapseVerdict { collapsed: first_nonzero.is_none(), first_nonzero, window })
}

fn first_nonzero_induced(kappa: &Module, q: &FreeComplex, window: (i64, i64)) -> Result<Option<(usize, i64)>> {
    let (_, maps) = tensor_complex(kappa, q)?;
    for (p, f) in maps.iter().enumerate() {
        for d in window.0..=window.1 {
            if !f.is_zero_at(d)? {
                return Ok(Some((p + 1, d)));
            }
        }
    }
    Ok(None)
}
