//! Invertibility: residue ranks, local verdicts, Picard-pair certificates,
//! cyclicity search, idempotent images and group-ring idempotents.

mod certificate;
mod group;
mod idempotent;

pub use certificate::{
    check_picard_pair, check_picard_pair_at_primes, PicardCertificate, PicardVerdict, PrimeVerdict, TensorIso,
};
pub use group::{character_idempotents, group_ring, split_by_idempotents, IdempotentSet};
pub(crate) use certificate::{at_primes_labelled, check_labelled};
pub use idempotent::{projective_as_idempotent_image, IdempotentImage, ProjectiveVerdict};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground::{GroundRing, Scalar, SmithDecomposition};
use crate::module::{Module, ModuleMap, ModulePresentation};
use crate::resolution::minimal_resolution;
use crate::ring::GradedFieldVerdict;

/// Dimensions of `(M / m M)_d` over the residue field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueRank {
    pub dimensions: Vec<(i64, usize)>,
    /// Sum over one period of the ring, or over the window when it has none.
    pub total: usize,
    pub period: Option<i64>,
    pub window: (i64, i64),
}

/// Residue dimensions of `M`. The total is complete: over a periodic ring
/// the window must cover a period, otherwise it must cover every generator
/// shift of `M`; anything less is inconclusive.
pub fn residue_rank(m: &Module, window: (i64, i64)) -> Result<ResidueRank> {
    let ring = m.ring();
    let (a, b) = window;
    let residue = ring.residue_quotient(window)?;
    match residue.verdict {
        GradedFieldVerdict::GradedField { .. } => {}
        GradedFieldVerdict::NotField { degree, reason } => {
            return Err(Error::Validation(format!("residue ring is not a graded field (degree {degree}: {reason})")));
        }
        GradedFieldVerdict::Inconclusive(reason) => return Err(Error::Inconclusive(reason)),
    }
    let period = ring.period();
    let counted = match period {
        Some(p) if b - a + 1 >= p => (a, a + p - 1),
        Some(p) => {
            return Err(Error::Inconclusive(format!("window [{a}, {b}] is shorter than the period {p}")));
        }
        None => {
            if let (Some(lo), Some(hi)) = (m.min_shift(), m.max_shift()) {
                if lo < a || hi > b {
                    return Err(Error::Inconclusive(format!(
                        "generators in degrees [{lo}, {hi}] are not all inside [{a}, {b}]"
                    )));
                }
            }
            window
        }
    };
    let dimensions = m.min_generators(window)?;
    let total = dimensions.iter().filter(|(d, _)| *d >= counted.0 && *d <= counted.1).map(|(_, n)| n).sum();
    Ok(ResidueRank { dimensions, total, period, window })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LocalInvertibility {
    /// `M ≅ Σ^shift R` on the window.
    Free { shift: i64, window: (i64, i64) },
    Refused { stage: String, reason: String },
}

impl LocalInvertibility {
    pub fn shift(&self) -> Option<i64> {
        match self {
            LocalInvertibility::Free { shift, .. } => Some(*shift),
            LocalInvertibility::Refused { .. } => None,
        }
    }
}

/// Over a graded-local ring, `M` is invertible exactly when it has residue
/// rank one and the Nakayama lift `Σ^k R -> M` has no kernel, i.e. the
/// minimal resolution stops at `F_0`.
///
/// Over a periodic ring the shift is only defined modulo the period; the
/// representative congruent to a generator shift of `M` is reported.
pub fn local_invertibility(m: &Module, length: usize, window: (i64, i64)) -> Result<LocalInvertibility> {
    let ring = m.ring();
    if ring.flags().graded_local != Some(true) {
        return Err(Error::NotGradedLocal);
    }
    let rank = residue_rank(m, window)?;
    if rank.total != 1 {
        return Ok(LocalInvertibility::Refused {
            stage: "residue_rank".into(),
            reason: format!("residue rank is {}, not 1", rank.total),
        });
    }
    // in a periodic ring, degrees below the residue generator are reached
    // only through negative powers of the periodicity unit, so the window
    // starts at that generator and spans at least one period
    let window = match rank.period {
        Some(p) => {
            let t = rank.dimensions.first().map_or(window.0, |x| x.0);
            (t, t + (window.1 - window.0).max(p - 1))
        }
        None => window,
    };
    let res = minimal_resolution(m, length.max(1), window)?;
    let f0 = &res.complex.modules[0];
    if f0.rank() != 1 {
        return Ok(LocalInvertibility::Refused {
            stage: "residue_rank".into(),
            reason: format!("{} generators were needed on the window", f0.rank()),
        });
    }
    if let Some(f1) = res.complex.modules.get(1) {
        let d = f1.min_shift().expect("F_1 is nonzero");
        return Ok(LocalInvertibility::Refused {
            stage: "kernel".into(),
            reason: format!("the lift Σ^{} R -> M has a kernel in degree {d}", f0.shifts()[0]),
        });
    }
    let mut shift = f0.shifts()[0];
    if let (Some(p), Some(s)) = (ring.period(), m.min_shift()) {
        shift += (s - shift).div_euclid(p) * p;
    }
    Ok(LocalInvertibility::Free { shift, window })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicSearch {
    /// Degree and coordinates of a verified single generator.
    pub generator: Option<(i64, Vec<String>)>,
    pub candidates: usize,
    pub bound: u64,
    pub note: String,
}

/// Searches homogeneous elements of `M` whose coordinates in an adapted
/// basis of each degree piece are bounded by `bound` (canonical residues on
/// torsion summands). A candidate is accepted when `R -> M`, `1 |-> t`, is
/// onto in every generator degree, which makes `t` a generator.
///
/// Candidate degrees run over `[min shift, max shift]` of the presentation.
pub fn cyclic_generator_search(m: &Module, bound: u64) -> Result<CyclicSearch> {
    let ring = m.ring();
    let k = ring.ground();
    let mut candidates = 0;
    let (Some(lo), Some(hi)) = (m.min_shift(), m.max_shift()) else {
        return Ok(CyclicSearch { generator: Some((0, Vec::new())), candidates, bound, note: "M = 0".into() });
    };
    for d in lo..=hi {
        let data = m.degree_data(d)?;
        let source = ModulePresentation::free(ring, vec![d])?;
        for v in quotient_candidates(k, &data.relations, data.dim(), bound)? {
            candidates += 1;
            let t = data.element(&v);
            let map = ModuleMap::new(&source, m, 0, vec![t.clone()])?;
            let mut onto = true;
            for s in m.shifts() {
                if !map.is_surjective_at(*s)? {
                    onto = false;
                    break;
                }
            }
            if onto {
                return Ok(CyclicSearch {
                    generator: Some((d, m.format_element(&t))),
                    candidates,
                    bound,
                    note: "generator verified".into(),
                });
            }
        }
    }
    Ok(CyclicSearch {
        generator: None,
        candidates,
        bound,
        note: "search exhausted; this does not prove that M needs two generators".into(),
    })
}

/// Representatives of `ground^dim / relations` in an adapted basis: free
/// coordinates in `[-bound, bound]` (all of `F_p` over a prime field) and
/// torsion coordinates among canonical residues.
pub(crate) fn quotient_candidates(
    k: &GroundRing,
    relations: &crate::ground::Lattice,
    dim: usize,
    bound: u64,
) -> Result<Vec<Vec<Scalar>>> {
    let rows: Vec<Vec<Scalar>> = relations.basis().to_vec();
    let a = crate::ground::GroundMatrix::from_rows(rows, dim)?;
    // rows of U A V = D, so w = v V has the relations on the diagonal
    let snf = SmithDecomposition::compute(k, &a);
    let v_inverse = inverse(k, &snf.v)?;
    let bound = bound as i64;
    let mut ranges: Vec<Vec<Scalar>> = Vec::with_capacity(dim);
    for i in 0..dim {
        let values: Vec<Scalar> = match snf.diagonal.get(i) {
            Some(t) if k.is_unit(t) => vec![Scalar::from_integer(0.into())],
            Some(t) => match GroundRing::modulus_u64(t) {
                Some(n) => (0..n as i64).map(|x| k.from_i64(x)).collect(),
                None => return Err(Error::Validation(format!("torsion {t} too large to enumerate"))),
            },
            None => match k {
                GroundRing::PrimeField(p) => (0..*p as i64).map(|x| k.from_i64(x)).collect(),
                _ => std::iter::once(0).chain((1..=bound).flat_map(|x| [x, -x])).map(|x| k.from_i64(x)).collect(),
            },
        };
        ranges.push(values);
    }
    let mut out = vec![Vec::new()];
    for r in &ranges {
        let mut next = Vec::with_capacity(out.len() * r.len());
        for w in &out {
            for x in r {
                let mut w = w.clone();
                w.push(x.clone());
                next.push(w);
            }
        }
        out = next;
    }
    // order by size so small candidates come first
    out.sort_by_key(|w| w.iter().map(|x| k.size(x)).sum::<num_bigint::BigInt>());
    let vt = v_inverse.transpose();
    out.into_iter().filter(|w| w.iter().any(|x| !num_traits::Zero::is_zero(x))).map(|w| vt.apply(k, &w)).collect()
}

/// Inverse of a unimodular matrix, column by column.
fn inverse(k: &GroundRing, v: &crate::ground::GroundMatrix) -> Result<crate::ground::GroundMatrix> {
    let n = v.rows();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Scalar::from_integer(0.into()); n];
        e[j] = k.from_i64(1);
        let x = crate::ground::solve_linear(k, v, &e)?
            .ok_or_else(|| Error::Validation("change of basis is not invertible".into()))?;
        cols.push(x);
    }
    Ok(crate::ground::GroundMatrix::from_columns(&cols, n))
}
