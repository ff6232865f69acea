use serde::Serialize;

use crate::error::{Error, Result};
use crate::module::Module;
use crate::ring::{GeneratorKind, Ring, RingElement};

/// `R[C_{n_1} x ... x C_{n_r}]`; factors of order one are dropped.
pub fn group_ring(ring: &Ring, orders: &[u64]) -> Result<Ring> {
    ring.group_ring(orders)
}

/// Orthogonal idempotents summing to one, with the products that were
/// checked in normal form.
#[derive(Debug, Clone, Serialize)]
pub struct IdempotentSet {
    #[serde(skip)]
    pub ring: Option<Ring>,
    #[serde(skip)]
    pub elements: Vec<RingElement>,
    pub formatted: Vec<String>,
    pub transcript: Vec<String>,
    pub verified: bool,
}

impl IdempotentSet {
    /// Builds the set and checks `e_i e_j = δ_ij e_i` and `Σ e_i = 1`.
    pub fn new(ring: &Ring, elements: Vec<RingElement>) -> Result<IdempotentSet> {
        let elements: Vec<RingElement> = elements.iter().map(|e| ring.normal_form(e)).collect::<Result<_>>()?;
        let formatted: Vec<String> = elements.iter().map(|e| ring.format(e)).collect();
        let mut transcript = Vec::new();
        let mut verified = true;
        for i in 0..elements.len() {
            for j in i..elements.len() {
                let product = ring.mul(&elements[i], &elements[j])?;
                let expected = if i == j { elements[i].clone() } else { RingElement::zero() };
                let ok = ring.is_zero_element(&ring.sub(&product, &expected))?;
                verified &= ok;
                let rhs = if i == j { format!("e{i}") } else { "0".into() };
                transcript.push(format!("e{i}*e{j} = {rhs}: {}", if ok { "ok" } else { "fails" }));
            }
        }
        let sum = elements.iter().fold(RingElement::zero(), |acc, e| ring.add(&acc, e));
        let ok = ring.is_zero_element(&ring.sub(&sum, &ring.one()))?;
        verified &= ok;
        transcript.push(format!("sum = 1: {}", if ok { "ok" } else { "fails" }));
        Ok(IdempotentSet { ring: Some(ring.clone()), elements, formatted, transcript, verified })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// All products `e_i f_j`, for a product of two groups.
    pub fn combine(&self, other: &IdempotentSet) -> Result<IdempotentSet> {
        let ring = self.ring.as_ref().ok_or_else(|| Error::Validation("idempotent set has no ring".into()))?;
        let mut out = Vec::with_capacity(self.len() * other.len());
        for e in &self.elements {
            for f in &other.elements {
                out.push(ring.mul(e, f)?);
            }
        }
        IdempotentSet::new(ring, out)
    }
}

/// The group generator of order `n`: a degree-0 generator of kind
/// `integral(n)` with `g^n = 1`. The last such generator is used.
fn group_generator(ring: &Ring, n: u64) -> Result<RingElement> {
    for (i, g) in ring.generators().iter().enumerate().rev() {
        if g.kind == GeneratorKind::Integral(n as u32) && g.degree == 0 {
            let x = ring.generator(i);
            if ring.is_zero_element(&ring.sub(&ring.pow(&x, n as u32)?, &ring.one()))? {
                return Ok(x);
            }
        }
    }
    Err(Error::InvalidInput(format!("no group generator g with g^{n} = 1")))
}

/// `e_i = (1/n) Σ_j ζ^{-ij} g^j` for a primitive `n`-th root of unity `ζ`.
pub fn character_idempotents(ring: &Ring, root: &RingElement, n: u64) -> Result<IdempotentSet> {
    if n == 0 {
        return Err(Error::InvalidInput("group order must be positive".into()));
    }
    let k = ring.ground();
    let inv_n = k
        .inverse(&k.from_i64(n as i64))
        .ok_or_else(|| Error::InvalidInput(format!("{n} not invertible in {k}")))?;
    let m = n as u32;
    if !ring.is_zero_element(&ring.sub(&ring.pow(root, m)?, &ring.one()))? {
        return Err(Error::Validation(format!("{} is not an {n}-th root of unity", ring.format(root))));
    }
    for d in 1..m {
        if m % d == 0 && ring.is_zero_element(&ring.sub(&ring.pow(root, d)?, &ring.one()))? {
            return Err(Error::Validation(format!("{} has order dividing {d}, not {n}", ring.format(root))));
        }
    }
    let g = group_generator(ring, n)?;
    let root_inverse = ring.pow(root, m - 1)?;
    let mut elements = Vec::with_capacity(m as usize);
    for i in 0..m {
        let mut e = RingElement::zero();
        for j in 0..m {
            let coefficient = ring.pow(&root_inverse, (i * j) % m)?;
            e = ring.add(&e, &ring.mul(&coefficient, &ring.pow(&g, j)?)?);
        }
        elements.push(ring.scale(&e, &inv_n));
    }
    let set = IdempotentSet::new(ring, elements)?;
    if !set.verified {
        return Err(Error::Validation(format!("idempotent check failed: {}", set.transcript.join("; "))));
    }
    Ok(set)
}

/// Summands `e_i M ≅ M / (1 - e_i) M`, checked to add up to `M` in every
/// window degree.
pub fn split_by_idempotents(m: &Module, set: &IdempotentSet, window: (i64, i64)) -> Result<Vec<Module>> {
    let ring = m.ring();
    let checked = IdempotentSet::new(ring, set.elements.clone())?;
    if !set.verified || !checked.verified {
        return Err(Error::Validation("idempotent set is not verified".into()));
    }
    let summands: Vec<Module> =
        set.elements.iter().map(|e| m.reduce_by(&[ring.sub(&ring.one(), e)])).collect::<Result<_>>()?;
    let k = ring.ground();
    for d in window.0..=window.1 {
        let total = summands
            .iter()
            .try_fold(crate::ground::Invariants::zero(), |acc, s| Ok::<_, Error>(acc.direct_sum(&s.degree_piece(d)?.invariants, k)))?;
        if total != m.degree_piece(d)?.invariants {
            return Err(Error::Validation(format!("summands do not add up to M in degree {d}")));
        }
    }
    Ok(summands)
}
