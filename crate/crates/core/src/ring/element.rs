use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Zero;

use crate::ground::Scalar;

/// Exponent vector over the ring's generators, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn generator(n: usize, i: usize, e: i64) -> Self {
        let mut v = vec![0; n];
        v[i] = e;
        Monomial(v)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub(crate) fn extended(&self, extra: usize) -> Monomial {
        let mut v = self.0.clone();
        v.extend(std::iter::repeat(0).take(extra));
        Monomial(v)
    }
}

/// Graded-lexicographic: larger exponent sum first, then larger exponents in
/// declaration order first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.total().cmp(&self.total()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite ground-linear combination of monomials with nonzero coefficients.
///
/// Arithmetic lives on [`super::RingPresentation`], which knows the signs, the
/// ground ring and the relations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RingElement {
    terms: BTreeMap<Monomial, Scalar>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement::default()
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut e = RingElement::zero();
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub(crate) fn into_terms(self) -> BTreeMap<Monomial, Scalar> {
        self.terms
    }

    /// Builds from raw terms; `add` merges equal monomials, zeros are dropped.
    pub(crate) fn from_terms<I, F>(terms: I, add: F) -> Self
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
        F: Fn(&Scalar, &Scalar) -> Scalar,
    {
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match map.get_mut(&m) {
                Some(x) => *x = add(x, &c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        RingElement { terms: map }
    }

    pub(crate) fn extended(&self, extra: usize) -> RingElement {
        RingElement { terms: self.terms.iter().map(|(m, c)| (m.extended(extra), c.clone())).collect() }
    }

    pub(crate) fn map_coefficients<F>(&self, f: F) -> crate::error::Result<RingElement>
    where
        F: Fn(&Scalar) -> crate::error::Result<Scalar>,
    {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let c = f(c)?;
            if !c.is_zero() {
                terms.insert(m.clone(), c);
            }
        }
        Ok(RingElement { terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_graded_lex() {
        let mut ms = vec![Monomial(vec![0, 1]), Monomial(vec![2, 0]), Monomial(vec![1, 1]), Monomial(vec![0, 0])];
        ms.sort();
        assert_eq!(ms, vec![Monomial(vec![2, 0]), Monomial(vec![1, 1]), Monomial(vec![0, 1]), Monomial(vec![0, 0])]);
    }
}
