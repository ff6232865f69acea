use num_traits::{One, Zero};

use super::matrix::{cokernel_invariants, elimination, GroundMatrix, Invariants, SmithDecomposition};
use super::{GroundRing, Scalar};
use crate::error::{Error, Result};

/// A submodule of `ground^dim`, stored as its canonical echelon basis.
///
/// Invariants: rows are nonzero, pivot columns strictly increase, each pivot
/// is normalized, and entries above a pivot are canonical residues modulo it.
/// Two lattices are equal iff their stored bases are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(k: &GroundRing, dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| {
                let mut r = vec![Scalar::zero(); dim];
                r[i] = k.from_i64(1);
                r
            })
            .collect();
        Lattice { dim, rows, pivots: (0..dim).collect() }
    }

    pub fn span<I>(k: &GroundRing, dim: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let mut work: Vec<Vec<Scalar>> = vectors
            .into_iter()
            .inspect(|v| assert_eq!(v.len(), dim, "vector length"))
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let mut pivots = Vec::new();
        for c in 0..dim {
            let mut pivot: Option<Vec<Scalar>> = None;
            let mut rest = Vec::with_capacity(work.len());
            for mut v in work.drain(..) {
                if v[c].is_zero() {
                    rest.push(v);
                    continue;
                }
                match pivot.as_mut() {
                    None => pivot = Some(v),
                    Some(p) => {
                        let [x, y, z, w] = elimination(k, &p[c], &v[c]);
                        let mut new_p = Vec::with_capacity(dim);
                        for j in 0..dim {
                            let a = k.add(&k.mul(&x, &p[j]), &k.mul(&y, &v[j]));
                            let b = k.add(&k.mul(&z, &p[j]), &k.mul(&w, &v[j]));
                            new_p.push(a);
                            v[j] = b;
                        }
                        *p = new_p;
                        if v.iter().any(|x| !x.is_zero()) {
                            rest.push(v);
                        }
                    }
                }
            }
            work = rest;
            if let Some(mut p) = pivot {
                let (unit, _) = k.normalize(&p[c]);
                let inv = k.inverse(&unit).expect("unit");
                for x in p.iter_mut() {
                    *x = k.mul(x, &inv);
                }
                rows.push(p);
                pivots.push(c);
            }
        }
        let mut lat = Lattice { dim, rows, pivots };
        lat.reduce_upper(k);
        lat
    }

    fn reduce_upper(&mut self, k: &GroundRing) {
        for i in (0..self.rows.len()).rev() {
            let c = self.pivots[i];
            let (head, tail) = self.rows.split_at_mut(i);
            let pivot_row = &tail[0];
            for row in head.iter_mut() {
                let q = quotient_toward_residue(k, &row[c], &pivot_row[c]);
                if !q.is_zero() {
                    for j in c..self.dim {
                        row[j] = k.sub(&row[j], &k.mul(&q, &pivot_row[j]));
                    }
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Canonical representative of `v` modulo the lattice: equal for two
    /// vectors exactly when their difference lies in the lattice.
    pub fn reduce(&self, k: &GroundRing, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.dim, "vector length");
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let q = quotient_toward_residue(k, &v[c], &row[c]);
            if !q.is_zero() {
                for j in c..self.dim {
                    v[j] = k.sub(&v[j], &k.mul(&q, &row[j]));
                }
            }
        }
        v
    }

    pub fn contains(&self, k: &GroundRing, v: &[Scalar]) -> bool {
        self.reduce(k, v).iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, k: &GroundRing, other: &Lattice) -> bool {
        other.rows.iter().all(|r| self.contains(k, r))
    }

    /// Coefficients expressing `v` in the stored basis, if `v` lies in the lattice.
    pub fn coordinates(&self, k: &GroundRing, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut v = v.to_vec();
        let mut out = Vec::with_capacity(self.rows.len());
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let q = k.divide(&v[c], &row[c])?;
            if !q.is_zero() {
                for j in c..self.dim {
                    v[j] = k.sub(&v[j], &k.mul(&q, &row[j]));
                }
            }
            out.push(q);
        }
        v.iter().all(Zero::is_zero).then_some(out)
    }

    pub fn sum(&self, k: &GroundRing, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        Lattice::span(k, self.dim, self.rows.iter().chain(&other.rows).cloned())
    }

    pub fn intersection(&self, k: &GroundRing, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        // {(a, b) : sum a_i r_i = sum b_j s_j}
        let (r, s) = (self.rank(), other.rank());
        let mut m = GroundMatrix::zeros(self.dim, r + s);
        for (i, row) in self.rows.iter().enumerate() {
            for (t, x) in row.iter().enumerate() {
                m[(t, i)] = x.clone();
            }
        }
        for (j, row) in other.rows.iter().enumerate() {
            for (t, x) in row.iter().enumerate() {
                m[(t, r + j)] = k.neg(x);
            }
        }
        let kernel = kernel_vectors(k, &m);
        Lattice::span(
            k,
            self.dim,
            kernel.into_iter().map(|c| combine(k, &self.rows, &c[..r], self.dim)),
        )
    }

    /// Image of the lattice under `a` (vectors are columns).
    pub fn image(&self, k: &GroundRing, a: &GroundMatrix) -> Result<Lattice> {
        if a.cols() != self.dim {
            return Err(Error::ShapeMismatch("lattice image".into()));
        }
        let imgs: Result<Vec<_>> = self.rows.iter().map(|r| a.apply(k, r)).collect();
        Ok(Lattice::span(k, a.rows(), imgs?))
    }

    /// `{x : a x ∈ target}`.
    pub fn preimage(k: &GroundRing, a: &GroundMatrix, target: &Lattice) -> Result<Lattice> {
        if a.rows() != target.dim {
            return Err(Error::ShapeMismatch("lattice preimage".into()));
        }
        let n = a.cols();
        let r = target.rank();
        let mut m = GroundMatrix::zeros(a.rows(), n + r);
        for i in 0..a.rows() {
            for j in 0..n {
                m[(i, j)] = a[(i, j)].clone();
            }
        }
        for (j, row) in target.rows.iter().enumerate() {
            for (t, x) in row.iter().enumerate() {
                m[(t, n + j)] = k.neg(x);
            }
        }
        let kernel = kernel_vectors(k, &m);
        Ok(Lattice::span(k, n, kernel.into_iter().map(|c| c[..n].to_vec())))
    }

    pub fn kernel(k: &GroundRing, a: &GroundMatrix) -> Lattice {
        Lattice::span(k, a.cols(), kernel_vectors(k, a))
    }

    /// Invariants of `self / sub`; `sub` must be contained in `self`.
    pub fn quotient_invariants(&self, k: &GroundRing, sub: &Lattice) -> Result<Invariants> {
        let columns: Option<Vec<Vec<Scalar>>> = sub.rows.iter().map(|v| self.coordinates(k, v)).collect();
        let columns = columns.ok_or_else(|| Error::Validation("sublattice is not contained in lattice".into()))?;
        let m = GroundMatrix::from_columns(&columns, self.rank());
        Ok(cokernel_invariants(k, &m))
    }

    /// Invariants of `ground^dim / self`.
    pub fn cokernel_invariants(&self, k: &GroundRing) -> Invariants {
        let m = GroundMatrix::from_columns(&self.rows, self.dim);
        cokernel_invariants(k, &m)
    }
}

/// `q` with `a - q*d` the canonical residue of `a` modulo `d`.
fn quotient_toward_residue(k: &GroundRing, a: &Scalar, d: &Scalar) -> Scalar {
    if a.is_zero() {
        return Scalar::zero();
    }
    let r = k.canonical_residue(a, d);
    k.divide(&k.sub(a, &r), d).expect("residue differs by a multiple")
}

fn combine(k: &GroundRing, rows: &[Vec<Scalar>], coeffs: &[Scalar], dim: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); dim];
    for (row, c) in rows.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o = k.add(o, &k.mul(c, x));
        }
    }
    out
}

/// A basis of the kernel of `a`, read off the Smith transform.
pub(crate) fn kernel_vectors(k: &GroundRing, a: &GroundMatrix) -> Vec<Vec<Scalar>> {
    if a.rows() == 0 {
        return (0..a.cols())
            .map(|i| {
                let mut v = vec![Scalar::zero(); a.cols()];
                v[i] = Scalar::one();
                v
            })
            .collect();
    }
    let snf = SmithDecomposition::compute(k, a);
    (snf.rank()..a.cols()).map(|j| snf.v.column(j)).collect()
}

#[cfg(test)]
mod tests {
    use super::super::int;
    use super::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn echelon_is_canonical() {
        let z = GroundRing::Integers;
        let a = Lattice::span(&z, 2, vec![v(&[2, 1]), v(&[0, 3])]);
        let b = Lattice::span(&z, 2, vec![v(&[2, 4]), v(&[2, 1]), v(&[0, 3])]);
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[v(&[2, 1]), v(&[0, 3])]);
        let c = Lattice::span(&z, 2, vec![v(&[-2, 5]), v(&[0, -3])]);
        assert_eq!(a, c);
    }

    #[test]
    fn membership_and_reduction() {
        let z = GroundRing::Integers;
        let l = Lattice::span(&z, 2, vec![v(&[2, 0]), v(&[0, 3])]);
        assert!(l.contains(&z, &v(&[4, -9])));
        assert!(!l.contains(&z, &v(&[1, 0])));
        assert_eq!(l.reduce(&z, &v(&[5, -1])), v(&[1, 2]));
        assert_eq!(l.coordinates(&z, &v(&[4, -9])), Some(v(&[2, -3])));
    }

    #[test]
    fn kernel_and_preimage() {
        let z = GroundRing::Integers;
        let a = GroundMatrix::from_rows(vec![v(&[2, 4])], 2).unwrap();
        let ker = Lattice::kernel(&z, &a);
        assert_eq!(ker, Lattice::span(&z, 2, vec![v(&[2, -1])]));
        let target = Lattice::span(&z, 1, vec![v(&[4])]);
        let pre = Lattice::preimage(&z, &a, &target).unwrap();
        // 2x + 4y ∈ 4Z  <=>  x even
        assert_eq!(pre, Lattice::span(&z, 2, vec![v(&[2, 0]), v(&[0, 1])]));
    }

    #[test]
    fn intersection_and_quotient() {
        let z = GroundRing::Integers;
        let a = Lattice::span(&z, 1, vec![v(&[4])]);
        let b = Lattice::span(&z, 1, vec![v(&[6])]);
        assert_eq!(a.intersection(&z, &b), Lattice::span(&z, 1, vec![v(&[12])]));
        assert_eq!(a.sum(&z, &b), Lattice::span(&z, 1, vec![v(&[2])]));
        let full = Lattice::full(&z, 2);
        let sub = Lattice::span(&z, 2, vec![v(&[2, 0]), v(&[0, 0])]);
        let q = full.quotient_invariants(&z, &sub).unwrap();
        assert_eq!(q, Invariants { rank: 1, torsion: vec![int(2)] });
    }

    #[test]
    fn local_ground_residues() {
        let z3 = GroundRing::localized_at(3).unwrap();
        let l = Lattice::span(&z3, 2, vec![v(&[6, 1]), v(&[0, 9])]);
        assert_eq!(l.pivots(), &[0, 1]);
        assert_eq!(l.basis()[0][0], int(3));
        assert!(l.contains(&z3, &v(&[12, 2])));
        assert!(!l.contains(&z3, &v(&[3, 0])));
    }
}
