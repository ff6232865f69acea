use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::{solve_linear, GroundMatrix, GroundRing, Lattice, Scalar};
use crate::homology::{tor, TableEntryJson};
use crate::module::{Module, ModuleElement, ModuleMap, ModulePresentation};
use crate::ring::Localization;

/// Candidate generators of `(M ⊗ N)_0` tried before giving up.
const GENERATOR_BUDGET: usize = 2_000;

/// `Σ^0 R -> M ⊗ N` in one degree: `forward` is the matrix of `r |-> r t`
/// on free coordinates and `backward` a matrix inverse to it modulo the
/// relation lattices on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorIso {
    pub degree: i64,
    pub forward: Vec<Vec<String>>,
    pub backward: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardCertificate {
    pub pair: [String; 2],
    pub window: (i64, i64),
    #[serde(rename = "L")]
    pub length: usize,
    /// Image of `1` in `(M ⊗ N)_0`.
    pub generator: Vec<String>,
    pub tensor_iso: Vec<TensorIso>,
    /// Nonzero Tor entries for `1 <= p <= L`; empty on a certificate.
    pub tor: Vec<TableEntryJson>,
    pub tor_zero: bool,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PicardVerdict {
    Certified(PicardCertificate),
    /// `condition` is `tensor_unit` or `tor`; `p` is set for Tor failures.
    Refused { condition: String, degree: i64, p: Option<usize>, reason: String },
    Inconclusive { reason: String },
}

impl PicardVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, PicardVerdict::Certified(_))
    }

    pub fn is_refused(&self) -> bool {
        matches!(self, PicardVerdict::Refused { .. })
    }

    pub fn certificate(&self) -> Option<&PicardCertificate> {
        match self {
            PicardVerdict::Certified(c) => Some(c),
            _ => None,
        }
    }
}

fn format_matrix(k: &GroundRing, a: &GroundMatrix) -> Vec<Vec<String>> {
    (0..a.rows()).map(|i| a.row(i).iter().map(|x| k.format(x)).collect()).collect()
}

fn parse_matrix(k: &GroundRing, rows: &[Vec<String>], cols: usize) -> Result<GroundMatrix> {
    let parsed: Result<Vec<Vec<Scalar>>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    x.parse::<Scalar>()
                        .map_err(|_| Error::InvalidInput(format!("bad matrix entry {x:?}")))
                        .and_then(|v| k.embed(&v))
                })
                .collect()
        })
        .collect();
    GroundMatrix::from_rows(parsed?, cols)
}

/// Decides whether `(M, N)` is a Picard pair on the window: `M ⊗ N ≅ R`
/// through an explicit degreewise isomorphism and `Tor_p(M, N) = 0` for
/// `1 <= p <= L`. A refusal is a proof on the window; when the Tor window
/// cannot be certified or no generator is found the verdict is inconclusive.
pub fn check_picard_pair(m: &Module, n: &Module, length: usize, window: (i64, i64)) -> Result<PicardVerdict> {
    check_labelled(m, n, ["M".into(), "N".into()], length, window)
}

pub(crate) fn check_labelled(
    m: &Module,
    n: &Module,
    pair: [String; 2],
    length: usize,
    window: (i64, i64),
) -> Result<PicardVerdict> {
    m.same_ring(n)?;
    let ring = m.ring();
    let k = ring.ground();
    let t = m.tensor(n)?;
    let unit = ModulePresentation::free(ring, vec![0])?;
    // generator degrees of M ⊗ N outside the window are compared too, so a
    // shift of R that agrees with R on the window is not mistaken for it
    let mut degrees: Vec<i64> = (window.0..=window.1).collect();
    degrees.extend(t.shifts().iter().copied().filter(|d| *d < window.0 || *d > window.1));
    degrees.sort_unstable();
    degrees.dedup();
    for &d in &degrees {
        let pieces = t.degree_piece(d).and_then(|l| Ok((l.invariants, unit.degree_piece(d)?.invariants)));
        let (left, right) = match pieces {
            Ok(p) => p,
            Err(e) if e.is_inconclusive() => return Ok(PicardVerdict::Inconclusive { reason: e.to_string() }),
            Err(e) => return Err(e),
        };
        if left != right {
            return Ok(PicardVerdict::Refused {
                condition: "tensor_unit".into(),
                degree: d,
                p: None,
                reason: format!("(M ⊗ N)_{d} is {left} but R_{d} is {right}"),
            });
        }
    }
    let table = match tor(m, n, length, window) {
        Ok(t) => t,
        Err(e) if e.is_inconclusive() => return Ok(PicardVerdict::Inconclusive { reason: e.to_string() }),
        Err(e) => return Err(e),
    };
    if table.certified.is_none() {
        return Ok(PicardVerdict::Inconclusive {
            reason: "the window does not certify Tor for this ring; a periodic ring needs a full period".into(),
        });
    }
    for p in 1..=length {
        for d in window.0..=window.1 {
            let x = table.get(p, d);
            if !x.is_zero() {
                return Ok(PicardVerdict::Refused {
                    condition: "tor".into(),
                    degree: d,
                    p: Some(p),
                    reason: format!("Tor_{p} is {x} in degree {d}"),
                });
            }
        }
    }
    let Some(generator) = find_generator(&unit, &t, &degrees)? else {
        return Ok(PicardVerdict::Inconclusive {
            reason: format!("no generator of (M ⊗ N)_0 among {GENERATOR_BUDGET} candidates"),
        });
    };
    let map = ModuleMap::new(&unit, &t, 0, vec![generator.clone()])?;
    let mut tensor_iso = Vec::new();
    for d in window.0..=window.1 {
        let forward = map.matrix_at(d)?;
        let backward = backward_matrix(k, &forward, &t.degree_data(d)?.relations)?;
        tensor_iso.push(TensorIso { degree: d, forward: format_matrix(k, &forward), backward: format_matrix(k, &backward) });
    }
    Ok(PicardVerdict::Certified(PicardCertificate {
        pair,
        window,
        length,
        generator: t.format_element(&generator),
        tensor_iso,
        tor: Vec::new(),
        tor_zero: true,
        verdict: "certified".into(),
    }))
}

/// Solves `A b_j ≡ e_j` modulo the target relations for each unit vector.
fn backward_matrix(k: &GroundRing, a: &GroundMatrix, target_relations: &Lattice) -> Result<GroundMatrix> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut columns: Vec<Vec<Scalar>> = (0..cols).map(|j| a.column(j)).collect();
    columns.extend(target_relations.basis().iter().cloned());
    let augmented = GroundMatrix::from_columns(&columns, rows);
    let mut out = Vec::with_capacity(rows);
    for j in 0..rows {
        let mut e = vec![Scalar::from_integer(0.into()); rows];
        e[j] = k.from_i64(1);
        let x = solve_linear(k, &augmented, &e)?
            .ok_or_else(|| Error::Validation("forward map is not onto".into()))?;
        out.push(x[..cols].to_vec());
    }
    Ok(GroundMatrix::from_columns(&out, cols))
}

/// A degree-0 element `t` with `r |-> r t` bijective in each of `degrees`:
/// unit vectors first, then signed pairs, then small combinations, within a
/// fixed budget.
fn find_generator(unit: &Module, t: &Module, degrees: &[i64]) -> Result<Option<ModuleElement>> {
    let k = t.ring().ground();
    let data = t.degree_data(0)?;
    let n = data.dim();
    let tried = std::cell::Cell::new(0usize);
    let test = |v: Vec<Scalar>| -> Result<Option<ModuleElement>> {
        tried.set(tried.get() + 1);
        if data.relations.contains(k, &v) {
            return Ok(None);
        }
        let x = data.element(&v);
        let map = ModuleMap::new(unit, t, 0, vec![x.clone()])?;
        for &d in degrees {
            if !map.is_surjective_at(d)? || !map.is_injective_at(d)? {
                return Ok(None);
            }
        }
        Ok(Some(x))
    };
    for i in 0..n {
        if let Some(x) = test(data.unit_vector(i))? {
            return Ok(Some(x));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for s in [1, -1] {
                let mut v = data.unit_vector(i);
                v[j] = k.from_i64(s);
                if let Some(x) = test(v)? {
                    return Ok(Some(x));
                }
            }
        }
    }
    // small combinations in an adapted basis of the degree piece
    for v in super::quotient_candidates(k, &data.relations, n, 2)? {
        if tried.get() >= GENERATOR_BUDGET {
            break;
        }
        if let Some(x) = test(v)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

impl PicardCertificate {
    /// Re-checks the certificate against `(M, N)`: the forward matrices are
    /// recomputed from the generator, the backward matrices must invert them
    /// modulo relations, and Tor must vanish again.
    pub fn replay(&self, m: &Module, n: &Module) -> Result<()> {
        m.same_ring(n)?;
        let ring = m.ring();
        let k = ring.ground();
        let t = m.tensor(n)?;
        let unit = ModulePresentation::free(ring, vec![0])?;
        let generator: ModuleElement = self.generator.iter().map(|e| ring.parse(e)).collect::<Result<_>>()?;
        if generator.len() != t.rank() {
            return Err(Error::Validation("generator has the wrong number of coordinates".into()));
        }
        let map = ModuleMap::new(&unit, &t, 0, vec![generator])?;
        let degrees: Vec<i64> = self.tensor_iso.iter().map(|x| x.degree).collect();
        if degrees != (self.window.0..=self.window.1).collect::<Vec<_>>() {
            return Err(Error::Validation("isomorphism data does not cover the window".into()));
        }
        for iso in &self.tensor_iso {
            let d = iso.degree;
            let forward = map.matrix_at(d)?;
            if format_matrix(k, &forward) != iso.forward {
                return Err(Error::Validation(format!("forward matrix differs in degree {d}")));
            }
            let (src, tgt) = (unit.degree_data(d)?, t.degree_data(d)?);
            let backward = parse_matrix(k, &iso.backward, tgt.dim())?;
            if backward.rows() != src.dim() {
                return Err(Error::Validation(format!("backward matrix has the wrong shape in degree {d}")));
            }
            let ok = maps_into(k, &forward, &src.relations, &tgt.relations)?
                && maps_into(k, &backward, &tgt.relations, &src.relations)?
                && identity_modulo(k, &backward.mul(k, &forward)?, &src.relations)?
                && identity_modulo(k, &forward.mul(k, &backward)?, &tgt.relations)?;
            if !ok {
                return Err(Error::Validation(format!("matrices are not inverse isomorphisms in degree {d}")));
            }
        }
        let table = tor(m, n, self.length, self.window)?;
        if table.certified != Some(self.window) {
            return Err(Error::Inconclusive("Tor is no longer certified on the window".into()));
        }
        for p in 1..=self.length {
            for d in self.window.0..=self.window.1 {
                if !table.get(p, d).is_zero() {
                    return Err(Error::Validation(format!("Tor_{p} is nonzero in degree {d}")));
                }
            }
        }
        Ok(())
    }
}

fn maps_into(k: &GroundRing, a: &GroundMatrix, from: &Lattice, to: &Lattice) -> Result<bool> {
    for r in from.basis() {
        if !to.contains(k, &a.apply(k, r)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn identity_modulo(k: &GroundRing, a: &GroundMatrix, rel: &Lattice) -> Result<bool> {
    for j in 0..a.cols() {
        let mut c = a.column(j);
        c[j] = k.sub(&c[j], &k.from_i64(1));
        if !rel.contains(k, &c) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeVerdict {
    pub prime: u64,
    pub verdict: PicardVerdict,
}

/// Runs the check over each localization `R_(p)` of the ground ring. The
/// pair is certified when every prime certifies, refused when some prime
/// refuses, and inconclusive otherwise.
pub fn check_picard_pair_at_primes(
    m: &Module,
    n: &Module,
    primes: &[u64],
    length: usize,
    window: (i64, i64),
) -> Result<(PicardVerdict, Vec<PrimeVerdict>)> {
    at_primes_labelled(m, n, ["M", "N"], primes, length, window)
}

/// As `check_picard_pair_at_primes`; certificates name the pair
/// `label@p`.
pub(crate) fn at_primes_labelled(
    m: &Module,
    n: &Module,
    labels: [&str; 2],
    primes: &[u64],
    length: usize,
    window: (i64, i64),
) -> Result<(PicardVerdict, Vec<PrimeVerdict>)> {
    m.same_ring(n)?;
    if primes.is_empty() {
        return Err(Error::InvalidInput("no primes given".into()));
    }
    let mut out = Vec::with_capacity(primes.len());
    for &p in primes {
        let local = m.ring().localize_ground(Localization::Prime(p))?;
        let (mp, np) = (m.base_change(&local)?, n.base_change(&local)?);
        let verdict = check_labelled(&mp, &np, [format!("{}@{p}", labels[0]), format!("{}@{p}", labels[1])], length, window)?;
        out.push(PrimeVerdict { prime: p, verdict });
    }
    let overall = if let Some(r) = out.iter().find(|v| v.verdict.is_refused()) {
        r.verdict.clone()
    } else if let Some(i) = out.iter().find(|v| !v.verdict.is_certified()) {
        i.verdict.clone()
    } else {
        out[0].verdict.clone()
    };
    Ok((overall, out))
}
