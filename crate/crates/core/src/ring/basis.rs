use std::collections::HashMap;

use num_traits::{One, Zero};

use super::element::{Monomial, RingElement};
use super::{GeneratorKind, RingPresentation, Shape};
use crate::error::{Error, Result};
use crate::ground::{Invariants, Lattice, Scalar};

/// One graded piece `R_d`: the rule-reduced monomials of degree `d` and the
/// lattice of linear relations among them.
#[derive(Debug, Clone)]
pub struct DegreeBasis {
    pub degree: i64,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    pub relations: Lattice,
    pub invariants: Invariants,
}

impl DegreeBasis {
    pub(crate) fn compute(ring: &RingPresentation, d: i64) -> Result<DegreeBasis> {
        let monomials = enumerate(ring, d);
        let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut basis = DegreeBasis {
            degree: d,
            monomials,
            index,
            relations: Lattice::zero(0),
            invariants: Invariants::zero(),
        };
        let k = ring.ground();
        let mut vectors = Vec::new();
        for (r, delta) in &ring.linear {
            for m in enumerate(ring, d - delta) {
                let p = ring.mul_reduced(&RingElement::monomial(m, Scalar::one()), r)?;
                vectors.push(basis.coordinates_of_reduced(&p)?);
            }
        }
        basis.relations = Lattice::span(k, basis.monomials.len(), vectors);
        basis.invariants = basis.relations.cokernel_invariants(k);
        Ok(basis)
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Whether the piece is the zero group.
    pub fn is_zero(&self) -> bool {
        self.invariants.is_zero()
    }

    /// Coordinates of an element already rewritten into reduced monomials.
    pub fn coordinates_of_reduced(&self, e: &RingElement) -> Result<Vec<Scalar>> {
        let mut v = vec![Scalar::zero(); self.monomials.len()];
        for (m, c) in e.terms() {
            let i = self.index.get(m).ok_or_else(|| {
                Error::Inhomogeneous(format!("monomial {:?} does not lie in degree {}", m.exponents(), self.degree))
            })?;
            v[*i] = c.clone();
        }
        Ok(v)
    }

    pub fn element_terms(&self, v: &[Scalar]) -> Vec<(Monomial, Scalar)> {
        self.monomials
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    }

    /// Element with the given coordinates; monomials are distinct, so no
    /// coefficients merge.
    pub fn element(&self, v: &[Scalar]) -> RingElement {
        RingElement::from_terms(self.element_terms(v), |a, b| a + b)
    }
}

/// Rule-reduced monomials of degree `d`, in canonical order.
pub(crate) fn enumerate(ring: &RingPresentation, d: i64) -> Vec<Monomial> {
    let gens = ring.generators();
    let n = gens.len();
    let bounded: Vec<(usize, i64)> = (0..n)
        .filter_map(|i| ring.rules[i].as_ref().map(|r| (i, r.power)))
        .collect();
    let unbounded_poly: Vec<usize> = (0..n)
        .filter(|&i| ring.rules[i].is_none() && gens[i].kind == GeneratorKind::Polynomial)
        .collect();
    let mut out = Vec::new();
    let mut exps = vec![0i64; n];
    fn bounded_rec(
        ring: &RingPresentation,
        bounded: &[(usize, i64)],
        poly: &[usize],
        exps: &mut Vec<i64>,
        remaining: i64,
        out: &mut Vec<Monomial>,
    ) {
        match bounded.split_first() {
            Some((&(i, k), rest)) => {
                let deg = ring.generators()[i].degree;
                for e in 0..k {
                    exps[i] = e;
                    bounded_rec(ring, rest, poly, exps, remaining - e * deg, out);
                }
                exps[i] = 0;
            }
            None => match ring.shape {
                Shape::Periodic(g) => {
                    let deg = ring.generators()[g].degree;
                    if remaining % deg == 0 {
                        exps[g] = remaining / deg;
                        out.push(Monomial(exps.clone()));
                        exps[g] = 0;
                    }
                }
                Shape::Positive => poly_rec(ring, poly, exps, remaining, out),
            },
        }
    }
    fn poly_rec(ring: &RingPresentation, poly: &[usize], exps: &mut Vec<i64>, remaining: i64, out: &mut Vec<Monomial>) {
        match poly.split_first() {
            None => {
                if remaining == 0 {
                    out.push(Monomial(exps.clone()));
                }
            }
            Some((&i, rest)) => {
                let deg = ring.generators()[i].degree;
                let mut e = 0;
                while e * deg <= remaining {
                    exps[i] = e;
                    poly_rec(ring, rest, exps, remaining - e * deg, out);
                    e += 1;
                }
                exps[i] = 0;
            }
        }
    }
    bounded_rec(ring, &bounded, &unbounded_poly, &mut exps, d, &mut out);
    out.sort();
    out
}
