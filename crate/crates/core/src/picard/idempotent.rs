use crate::error::{Error, Result};
use crate::ground::{solve_linear, GroundMatrix, GroundRing, Scalar};
use crate::homology::tor;
use crate::module::{Module, ModuleElement, ModuleMap, ModulePresentation};
use crate::ring::{Localization, Ring};

/// `M` as the image of an idempotent `ε: F -> F` on the free module over
/// its generators, with `ε = σ π` for a section `σ` of `π: F -> M`.
#[derive(Debug, Clone)]
pub struct IdempotentImage {
    pub free: Module,
    pub epsilon: ModuleMap,
    pub section: Vec<ModuleElement>,
    pub image: Module,
    /// Degrees on which `im ε ⊕ im (1 - ε) = F` was checked.
    pub window: (i64, i64),
}

impl IdempotentImage {
    /// Rows `ε(e_i)`, formatted.
    pub fn matrix(&self) -> Vec<Vec<String>> {
        self.epsilon.images.iter().map(|r| self.free.format_element(r)).collect()
    }
}

#[derive(Debug, Clone)]
pub enum ProjectiveVerdict {
    Image(IdempotentImage),
    Refused { reason: String },
}

/// Local rings on which `Tor_1(M, κ)` is tested: the ring itself when it is
/// graded-local, otherwise its localizations at 2 and 3 when those are
/// declared local.
fn tested_localizations(ring: &Ring) -> Result<Vec<(Option<u64>, Ring)>> {
    if ring.flags().graded_local == Some(true) {
        return Ok(vec![(None, ring.clone())]);
    }
    if ring.flags().local_at_each_prime != Some(true) || *ring.ground() != GroundRing::Integers {
        return Ok(Vec::new());
    }
    [2, 3].into_iter().map(|p| Ok((Some(p), ring.localize_ground(Localization::Prime(p))?))).collect()
}

/// Realizes `M` as the image of an idempotent endomorphism of a free module.
///
/// A nonzero `Tor_1(M, κ)` at a tested maximal ideal refuses on the window.
/// Otherwise a section of `F -> M` is solved for exactly; when none exists
/// `M` is not projective and the answer is a refusal as well.
pub fn projective_as_idempotent_image(m: &Module, window: (i64, i64)) -> Result<ProjectiveVerdict> {
    let ring = m.ring();
    for (prime, local) in tested_localizations(ring)? {
        let ml = if prime.is_some() { m.base_change(&local)? } else { m.clone() };
        let kappa = ModulePresentation::cyclic(&local, &local.graded_max_ideal()?)?;
        let table = tor(&kappa, &ml, 1, window)?;
        if table.certified.is_none() {
            return Err(Error::Inconclusive("the window does not certify Tor_1 against the residue field".into()));
        }
        for d in window.0..=window.1 {
            let x = table.get(1, d);
            if !x.is_zero() {
                let at = prime.map(|p| format!(" at {p}")).unwrap_or_default();
                return Ok(ProjectiveVerdict::Refused {
                    reason: format!("Tor_1(M, residue){at} is {x} in degree {d}, so M is not projective"),
                });
            }
        }
    }
    let free = ModulePresentation::free(ring, m.shifts().to_vec())?;
    let Some(section) = solve_section(m, &free)? else {
        return Ok(ProjectiveVerdict::Refused {
            reason: "F -> M has no section, so M is not projective".into(),
        });
    };
    let epsilon = ModuleMap::new(&free, &free, 0, section.clone())?;
    let square = epsilon.compose(&epsilon)?;
    for (i, s) in free.shifts().iter().enumerate() {
        let diff: ModuleElement =
            square.images[i].iter().zip(&epsilon.images[i]).map(|(a, b)| ring.sub(a, b)).collect();
        if !free.is_zero_element(*s, &diff)? {
            return Err(Error::Validation(format!("ε² differs from ε on generator {i}")));
        }
    }
    check_splitting(m, &free, &epsilon, window)?;
    Ok(ProjectiveVerdict::Image(IdempotentImage { free, epsilon, section, image: m.clone(), window }))
}

/// Solves for `σ(g_i) ∈ F_{s_i}` with `σ(g_i) ≡ g_i` modulo the relations of
/// `M` and every relation of `M` sent to zero in `F`.
fn solve_section(m: &Module, free: &Module) -> Result<Option<Vec<ModuleElement>>> {
    let ring = m.ring();
    let k = ring.ground();
    let r = m.rank();
    let data: Vec<_> = m.shifts().iter().map(|&s| free.degree_data(s)).collect::<Result<_>>()?;
    let mdata: Vec<_> = m.shifts().iter().map(|&s| m.degree_data(s)).collect::<Result<_>>()?;
    let mut offsets = Vec::with_capacity(r);
    let mut cols = 0;
    for d in &data {
        offsets.push(cols);
        cols += d.dim();
    }
    // extra unknowns absorb relation lattices
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    let mut extra: Vec<(usize, Vec<Scalar>)> = Vec::new();
    let zero = || Scalar::from_integer(0.into());
    let mut row0 = 0;
    for i in 0..r {
        let n = data[i].dim();
        for q in 0..n {
            let mut row = vec![zero(); cols];
            row[offsets[i] + q] = k.from_i64(1);
            rows.push(row);
        }
        let target = mdata[i].coordinates(ring, &m.generator(i))?;
        rhs.extend(target);
        for rel in mdata[i].relations.basis() {
            extra.push((row0, rel.iter().map(|x| k.neg(x)).collect()));
        }
        row0 += n;
    }
    for (rel, &e) in m.relations().iter().zip(m.relation_degrees()) {
        let fd = free.degree_data(e)?;
        let mut block = vec![vec![zero(); cols]; fd.dim()];
        for (i, x) in rel.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            // left multiplication, so odd signs match the relation row
            for q in 0..data[i].dim() {
                let u = data[i].element(&data[i].unit_vector(q));
                let xu: ModuleElement = u.iter().map(|e| ring.mul(x, e)).collect::<Result<_>>()?;
                for (p, c) in fd.coordinates(ring, &xu)?.into_iter().enumerate() {
                    block[p][offsets[i] + q] = k.add(&block[p][offsets[i] + q], &c);
                }
            }
        }
        for row in block {
            rows.push(row);
            rhs.push(zero());
        }
        for frel in fd.relations.basis() {
            extra.push((row0, frel.iter().map(|x| k.neg(x)).collect()));
        }
        row0 += fd.dim();
    }
    let total = cols + extra.len();
    for row in rows.iter_mut() {
        row.resize(total, zero());
    }
    for (c, (start, v)) in extra.iter().enumerate() {
        for (p, x) in v.iter().enumerate() {
            rows[start + p][cols + c] = x.clone();
        }
    }
    let a = GroundMatrix::from_rows(rows, total)?;
    let Some(x) = solve_linear(k, &a, &rhs)? else { return Ok(None) };
    Ok(Some((0..r).map(|i| data[i].element(&x[offsets[i]..offsets[i] + data[i].dim()])).collect()))
}

/// `im ε + im (1 - ε) = F_d` with intersection inside the relations, and
/// `im ε` has the invariants of `M_d`.
fn check_splitting(m: &Module, free: &Module, epsilon: &ModuleMap, window: (i64, i64)) -> Result<()> {
    let ring = m.ring();
    let k = ring.ground();
    let complement: Vec<ModuleElement> = (0..free.rank())
        .map(|i| free.generator(i).iter().zip(&epsilon.images[i]).map(|(a, b)| ring.sub(a, b)).collect())
        .collect();
    let one_minus = ModuleMap::new(free, free, 0, complement)?;
    for d in window.0..=window.1 {
        let data = free.degree_data(d)?;
        let (p, q) = (epsilon.image_lattice(d)?, one_minus.image_lattice(d)?);
        let full = crate::ground::Lattice::full(k, data.dim());
        if !p.sum(k, &q).contains_lattice(k, &full) || !data.relations.contains_lattice(k, &p.intersection(k, &q)) {
            return Err(Error::Validation(format!("im ε and im (1 - ε) do not split F in degree {d}")));
        }
        if p.quotient_invariants(k, &data.relations)? != m.degree_piece(d)?.invariants {
            return Err(Error::Validation(format!("im ε differs from M in degree {d}")));
        }
    }
    Ok(())
}
