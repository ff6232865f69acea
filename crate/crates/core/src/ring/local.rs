use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::element::RingElement;
use super::{Ring, RingPresentation};
use crate::error::{Error, Result};
use crate::ground::{GroundRing, Scalar};

/// Largest residue degree piece searched exhaustively for units.
const BRUTE_FORCE_LIMIT: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradedFieldVerdict {
    /// Every nonzero homogeneous element in the window is a unit.
    GradedField { dimension: usize, period: Option<i64> },
    NotField { degree: i64, reason: String },
    Inconclusive(String),
}

impl GradedFieldVerdict {
    pub fn is_field(&self) -> bool {
        matches!(self, GradedFieldVerdict::GradedField { .. })
    }
}

/// `R / m` together with the graded-field verdict on a window.
#[derive(Debug, Clone)]
pub struct ResidueQuotient {
    pub ideal: Vec<RingElement>,
    pub ring: Ring,
    pub verdict: GradedFieldVerdict,
    pub window: (i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EilenbergVerdict {
    pub passed: bool,
    pub connective: bool,
    pub declared_local: bool,
    pub finitely_generated: bool,
    /// First negative degree with a nonzero piece, if any.
    pub negative_witness: Option<i64>,
    pub window: (i64, i64),
}

impl RingPresentation {
    pub fn residue_quotient(&self, window: (i64, i64)) -> Result<ResidueQuotient> {
        let ideal = self.graded_max_ideal()?;
        let ring = self.quotient_ring(&ideal)?;
        let verdict = graded_field_verdict(&ring, window)?;
        Ok(ResidueQuotient { ideal, ring, verdict, window })
    }

    /// Checks the hypotheses under which every finitely generated module has
    /// a minimal free resolution: connective, declared local in degree zero,
    /// degreewise finitely generated.
    pub fn eilenberg_check(&self, window: (i64, i64)) -> Result<EilenbergVerdict> {
        let (a, b) = window;
        let reach = a.abs().max(b.abs()).max(1);
        let mut negative_witness = None;
        for d in -reach..0 {
            match self.degree_basis(d) {
                Ok(basis) if !basis.is_zero() => {
                    negative_witness = Some(d);
                    break;
                }
                Ok(_) | Err(Error::WindowExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        let mut finitely_generated = true;
        for d in a..=b {
            match self.degree_basis(d) {
                Ok(_) | Err(Error::WindowExceeded { .. }) => {}
                Err(_) => finitely_generated = false,
            }
        }
        let connective = negative_witness.is_none();
        let declared_local = self.flags.graded_local == Some(true);
        Ok(EilenbergVerdict {
            passed: connective && declared_local && finitely_generated,
            connective,
            declared_local,
            finitely_generated,
            negative_witness,
            window,
        })
    }
}

fn graded_field_verdict(q: &RingPresentation, window: (i64, i64)) -> Result<GradedFieldVerdict> {
    let k = q.ground().clone();
    let zero = q.degree_basis(0)?;
    let Some(dim) = zero.invariants.residue_dimension(&k) else {
        return Ok(GradedFieldVerdict::NotField {
            degree: 0,
            reason: format!("degree-0 part {} is not a vector space over a prime field", zero.invariants),
        });
    };
    if dim == 0 {
        return Ok(GradedFieldVerdict::NotField { degree: 0, reason: "the quotient is zero".into() });
    }
    let p = match zero.invariants.torsion.first() {
        Some(t) => GroundRing::modulus_u64(t).unwrap_or(0),
        None => k.residue_characteristic().unwrap_or(0),
    };
    let mut period = None;
    for d in window.0..=window.1 {
        let basis = match q.degree_basis(d) {
            Ok(b) => b,
            Err(Error::WindowExceeded { .. }) => continue,
            Err(e) => return Err(e),
        };
        if basis.is_zero() {
            continue;
        }
        if d > 0 && period.is_none() {
            period = Some(d);
        }
        if basis.invariants != zero.invariants {
            return Ok(GradedFieldVerdict::NotField {
                degree: d,
                reason: format!("piece {} differs from the degree-0 field {}", basis.invariants, zero.invariants),
            });
        }
        match piece_has_unit(q, &k, d, dim, p, d == 0) {
            Ok(true) => {}
            Ok(false) => {
                return Ok(GradedFieldVerdict::NotField {
                    degree: d,
                    reason: "no homogeneous unit in this degree".into(),
                })
            }
            Err(Error::WindowExceeded { degree, .. }) => {
                return Ok(GradedFieldVerdict::Inconclusive(format!(
                    "unit test in degree {d} needs degree {degree}, outside the ring's window"
                )))
            }
            Err(Error::Inconclusive(m)) => return Ok(GradedFieldVerdict::Inconclusive(m)),
            Err(e) => return Err(e),
        }
    }
    Ok(GradedFieldVerdict::GradedField { dimension: dim, period })
}

/// With `every`, all nonzero elements must be units (the degree-0 field
/// test); otherwise one unit suffices, since a unit `x` gives `R_d = x R_0`.
fn piece_has_unit(q: &RingPresentation, k: &GroundRing, d: i64, dim: usize, p: u64, every: bool) -> Result<bool> {
    let basis = q.degree_basis(d)?;
    if dim == 1 {
        // any element outside the relation lattice generates the piece
        for (i, _) in basis.monomials().iter().enumerate() {
            let mut v = vec![Scalar::zero(); basis.len()];
            v[i] = k.from_i64(1);
            if !basis.relations.contains(k, &v) {
                return q.is_unit_element(&basis.element(&v));
            }
        }
        return Ok(false);
    }
    if !every {
        for (i, _) in basis.monomials().iter().enumerate() {
            let mut v = vec![Scalar::zero(); basis.len()];
            v[i] = k.from_i64(1);
            if !basis.relations.contains(k, &v) && q.is_unit_element(&basis.element(&v))? {
                return Ok(true);
            }
        }
    }
    let count = BigInt::from(p).pow(dim as u32);
    if p == 0 || count > BigInt::from(BRUTE_FORCE_LIMIT) {
        return Err(Error::Inconclusive(format!("degree {d} piece too large to search for units")));
    }
    // enumerate residues over the monomial coordinates; classes repeat, which is harmless
    let n = basis.len();
    let total = BigInt::from(p).pow(n as u32).to_u64().unwrap_or(u64::MAX);
    if total > BRUTE_FORCE_LIMIT * 16 {
        return Err(Error::Inconclusive(format!("degree {d} piece too large to search for units")));
    }
    let mut found = false;
    for code in 1..total {
        let mut c = code;
        let v: Vec<Scalar> = (0..n)
            .map(|_| {
                let x = (c % p) as i64;
                c /= p;
                k.from_i64(x)
            })
            .collect();
        if basis.relations.contains(k, &v) {
            continue;
        }
        let unit = q.is_unit_element(&basis.element(&v))?;
        if every && !unit {
            return Ok(false);
        }
        found |= unit;
        if found && !every {
            return Ok(true);
        }
    }
    Ok(found)
}
