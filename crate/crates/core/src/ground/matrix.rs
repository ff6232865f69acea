use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{GroundRing, Scalar};
use crate::error::{Error, Result};

/// Dense rectangular matrix of ground scalars, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl GroundMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GroundMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!("row of length {} in a {cols}-column matrix", row.len())));
            }
            data.extend(row);
        }
        Ok(GroundMatrix { rows: n, cols, data })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Scalar>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, k: &GroundRing, other: &GroundMatrix) -> Result<GroundMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)] = k.add(&out[(i, j)], &k.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, k: &GroundRing, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self[(i, j)].is_zero() {
                        acc = k.add(&acc, &k.mul(&self[(i, j)], x));
                    }
                }
                acc
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Replaces rows (a, b) by (x*ra + y*rb, z*ra + w*rb).
    fn combine_rows(&mut self, k: &GroundRing, a: usize, b: usize, t: [&Scalar; 4]) {
        for j in 0..self.cols {
            let (ra, rb) = (self[(a, j)].clone(), self[(b, j)].clone());
            if ra.is_zero() && rb.is_zero() {
                continue;
            }
            self[(a, j)] = k.add(&k.mul(t[0], &ra), &k.mul(t[1], &rb));
            self[(b, j)] = k.add(&k.mul(t[2], &ra), &k.mul(t[3], &rb));
        }
    }

    fn combine_cols(&mut self, k: &GroundRing, a: usize, b: usize, t: [&Scalar; 4]) {
        for i in 0..self.rows {
            let (ca, cb) = (self[(i, a)].clone(), self[(i, b)].clone());
            if ca.is_zero() && cb.is_zero() {
                continue;
            }
            self[(i, a)] = k.add(&k.mul(t[0], &ca), &k.mul(t[1], &cb));
            self[(i, b)] = k.add(&k.mul(t[2], &ca), &k.mul(t[3], &cb));
        }
    }

    /// Determinant computed in the fraction field (or in F_p itself).
    pub fn determinant(&self, k: &GroundRing) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch("determinant of a non-square matrix".into()));
        }
        let field = match k {
            GroundRing::PrimeField(_) => k.clone(),
            _ => GroundRing::Rationals,
        };
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = field.neg(&det);
            }
            let pivot = m[(c, c)].clone();
            det = field.mul(&det, &pivot);
            let inv = field.inverse(&pivot).expect("nonzero in a field");
            for r in c + 1..n {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let f = field.mul(&m[(r, c)], &inv);
                for j in c..n {
                    let v = field.sub(&m[(r, j)], &field.mul(&f, &m[(c, j)]));
                    m[(r, j)] = v;
                }
            }
        }
        Ok(det)
    }
}

impl std::ops::Index<(usize, usize)> for GroundMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for GroundMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

/// Unimodular 2x2 transform `[x y; z w]` sending `(a, b)` to `(g, 0)`.
/// When `a | b` the first row is `(1, 0)`, so the pivot never moves.
pub(crate) fn elimination(k: &GroundRing, a: &Scalar, b: &Scalar) -> [Scalar; 4] {
    if let Some(q) = k.divide(b, a) {
        return [Scalar::one(), Scalar::zero(), k.neg(&q), Scalar::one()];
    }
    let (g, x, y) = k.gcd_bezout(a, b);
    let ag = k.divide(a, &g).expect("gcd divides");
    let bg = k.divide(b, &g).expect("gcd divides");
    [x, y, k.neg(&bg), ag]
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: GroundMatrix,
    pub v: GroundMatrix,
    pub d: GroundMatrix,
    /// Nonzero diagonal entries, canonically normalized, each dividing the next.
    pub diagonal: Vec<Scalar>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    pub fn compute(k: &GroundRing, a: &GroundMatrix) -> SmithDecomposition {
        let (m, n) = (a.rows, a.cols);
        let mut d = a.clone();
        let mut u = GroundMatrix::identity(m);
        let mut v = GroundMatrix::identity(n);
        let one = Scalar::one();
        let zero = Scalar::zero();
        let mut t = 0;
        while t < m.min(n) {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize, num_bigint::BigInt)> = None;
            for i in t..m {
                for j in t..n {
                    if !d[(i, j)].is_zero() {
                        let s = k.size(&d[(i, j)]);
                        if best.as_ref().map_or(true, |b| s < b.2) {
                            best = Some((i, j, s));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..m {
                    if d[(i, t)].is_zero() {
                        continue;
                    }
                    let tr = elimination(k, &d[(t, t)], &d[(i, t)]);
                    let tr = [&tr[0], &tr[1], &tr[2], &tr[3]];
                    d.combine_rows(k, t, i, tr);
                    u.combine_rows(k, t, i, tr);
                }
                for j in t + 1..n {
                    if d[(t, j)].is_zero() {
                        continue;
                    }
                    let tr = elimination(k, &d[(t, t)], &d[(t, j)]);
                    let tr = [&tr[0], &tr[1], &tr[2], &tr[3]];
                    d.combine_cols(k, t, j, tr);
                    v.combine_cols(k, t, j, tr);
                    dirty = true;
                }
                if dirty && (t + 1..m).any(|i| !d[(i, t)].is_zero()) {
                    continue;
                }
                // the pivot must divide the whole trailing block
                let pivot = d[(t, t)].clone();
                let offender = (t + 1..m)
                    .find(|&i| (t + 1..n).any(|j| k.divide(&d[(i, j)], &pivot).is_none()));
                match offender {
                    Some(i) => {
                        let tr = [&one, &one, &zero, &one];
                        d.combine_rows(k, t, i, tr);
                        u.combine_rows(k, t, i, tr);
                    }
                    None => break,
                }
            }
            let (unit, _) = k.normalize(&d[(t, t)]);
            let inv = k.inverse(&unit).expect("unit");
            for j in 0..n {
                d[(t, j)] = k.mul(&d[(t, j)], &inv);
            }
            for j in 0..m {
                u[(t, j)] = k.mul(&u[(t, j)], &inv);
            }
            t += 1;
        }
        let diagonal = (0..m.min(n)).map(|i| d[(i, i)].clone()).take_while(|x| !x.is_zero()).collect();
        SmithDecomposition { u, v, d, diagonal }
    }
}

/// Abelian-group invariants of a finitely generated ground module:
/// `ground^rank ⊕ ⊕ ground/(t_i)` with `t_1 | t_2 | …`, all non-units.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Invariants {
    pub rank: usize,
    pub torsion: Vec<Scalar>,
}

impl Invariants {
    pub fn zero() -> Self {
        Invariants::default()
    }

    pub fn free(rank: usize) -> Self {
        Invariants { rank, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Invariants of a direct sum, recanonicalized into a divisibility chain.
    pub fn direct_sum(&self, other: &Invariants, k: &GroundRing) -> Invariants {
        let diag: Vec<Scalar> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        let n = diag.len();
        let mut m = GroundMatrix::zeros(n, n);
        for (i, x) in diag.into_iter().enumerate() {
            m[(i, i)] = x;
        }
        let mut out = cokernel_invariants(k, &m);
        out.rank += self.rank + other.rank;
        out
    }

    /// Dimension over the residue field when the group is a vector space over
    /// it; `None` otherwise.
    pub fn residue_dimension(&self, k: &GroundRing) -> Option<usize> {
        if k.is_field() {
            return Some(self.rank);
        }
        if self.is_zero() {
            return Some(0);
        }
        if self.rank > 0 {
            return None;
        }
        let first = self.torsion.first()?;
        if self.torsion.iter().all(|t| t == first) && super::is_prime(GroundRing::modulus_u64(first)?) {
            Some(self.torsion.len())
        } else {
            None
        }
    }

    pub fn to_json(&self, k: &GroundRing) -> InvariantsJson {
        InvariantsJson { rank: self.rank, torsion: self.torsion.iter().map(|t| k.format(t)).collect() }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct InvariantsJson {
    pub rank: usize,
    pub torsion: Vec<String>,
}

impl fmt::Display for Invariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("R".to_string()),
            r => parts.push(format!("R^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("R/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Invariants of the cokernel of `a`, whose columns are relations among the
/// row generators.
pub fn cokernel_invariants(k: &GroundRing, a: &GroundMatrix) -> Invariants {
    let snf = SmithDecomposition::compute(k, a);
    Invariants {
        rank: a.rows() - snf.rank(),
        torsion: snf.diagonal.into_iter().filter(|x| !k.is_unit(x)).collect(),
    }
}

/// Solves `a * x = b` over the ground ring; `Ok(None)` when no solution exists.
pub fn solve_linear(k: &GroundRing, a: &GroundMatrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != a.rows() {
        return Err(Error::ShapeMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    let snf = SmithDecomposition::compute(k, a);
    let c = snf.u.apply(k, b)?;
    let mut y = vec![Scalar::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        if i < snf.rank() {
            match k.divide(ci, &snf.diagonal[i]) {
                Some(q) => y[i] = q,
                None => return Ok(None),
            }
        } else if !ci.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(snf.v.apply(k, &y)?))
}

#[cfg(test)]
mod tests {
    use super::super::int;
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn mat(rows: &[&[i64]]) -> GroundMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        GroundMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(), cols).unwrap()
    }

    /// Independent oracle over Z: the k-th determinantal divisor d_k is the gcd
    /// of all k-minors, and the invariant factors are d_k / d_{k-1}.
    fn invariant_factors_by_minors(a: &GroundMatrix) -> Vec<i64> {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let z = GroundRing::Integers;
        let mut prev = 1i64;
        let mut out = Vec::new();
        for k in 1..=a.rows().min(a.cols()) {
            let mut g = 0i64;
            for rs in subsets(a.rows(), k) {
                for cs in subsets(a.cols(), k) {
                    let minor = GroundMatrix::from_rows(
                        rs.iter().map(|&i| cs.iter().map(|&j| a[(i, j)].clone()).collect()).collect(),
                        k,
                    )
                    .unwrap();
                    let det: i64 = minor.determinant(&z).unwrap().to_integer().try_into().unwrap();
                    g = num_integer::gcd(g, det);
                }
            }
            if g == 0 {
                break;
            }
            out.push(g / prev);
            prev = g;
        }
        out
    }

    #[test]
    fn diag_two_three() {
        let a = mat(&[&[2, 0], &[0, 3]]);
        let snf = SmithDecomposition::compute(&GroundRing::Integers, &a);
        assert_eq!(snf.diagonal, vec![int(1), int(6)]);
        assert_eq!(invariant_factors_by_minors(&a), vec![1, 6]);
    }

    #[test]
    fn identity_and_unit_entries() {
        let snf = SmithDecomposition::compute(&GroundRing::Integers, &GroundMatrix::identity(3));
        assert_eq!(snf.diagonal, vec![int(1); 3]);
        let z3 = GroundRing::localized_at(3).unwrap();
        let snf = SmithDecomposition::compute(&z3, &mat(&[&[2]]));
        assert_eq!(snf.diagonal, vec![int(1)]);
    }

    #[test]
    fn decomposition_identity_and_unimodularity() {
        let k = GroundRing::Integers;
        let a = mat(&[&[4, 6, 2], &[2, 8, 10], &[6, 0, 12], &[1, 1, 1]]);
        let snf = SmithDecomposition::compute(&k, &a);
        let uav = snf.u.mul(&k, &a).unwrap().mul(&k, &snf.v).unwrap();
        assert_eq!(uav, snf.d);
        assert!(k.is_unit(&snf.u.determinant(&k).unwrap()));
        assert!(k.is_unit(&snf.v.determinant(&k).unwrap()));
        let expected: Vec<Scalar> = invariant_factors_by_minors(&a).into_iter().map(int).collect();
        assert_eq!(snf.diagonal, expected);
    }

    #[test]
    fn solve_examples() {
        let z = GroundRing::Integers;
        assert_eq!(solve_linear(&z, &mat(&[&[2]]), &[int(4)]).unwrap(), Some(vec![int(2)]));
        assert_eq!(solve_linear(&z, &mat(&[&[2]]), &[int(3)]).unwrap(), None);
        let z5 = GroundRing::localized_at(5).unwrap();
        let x = solve_linear(&z5, &mat(&[&[2]]), &[int(3)]).unwrap().unwrap();
        assert_eq!(x, vec![BigRational::new(BigInt::from(3), BigInt::from(2))]);
        assert_eq!(&x[0] * int(2), int(3));
        assert!(solve_linear(&z, &mat(&[&[2]]), &[int(3), int(1)]).is_err());
    }

    #[test]
    fn cokernel_examples() {
        let z = GroundRing::Integers;
        assert_eq!(cokernel_invariants(&z, &mat(&[&[2]])), Invariants { rank: 0, torsion: vec![int(2)] });
        assert_eq!(cokernel_invariants(&z, &GroundMatrix::zeros(1, 0)), Invariants::free(1));
        let inv = cokernel_invariants(&z, &mat(&[&[2, 0], &[0, 0]]));
        assert_eq!(inv, Invariants { rank: 1, torsion: vec![int(2)] });
    }

    #[test]
    fn prime_field_invariants_are_rank() {
        let f5 = GroundRing::prime_field(5).unwrap();
        let a = GroundMatrix::from_rows(
            vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(1)], vec![int(0), int(1), int(1)]],
            3,
        )
        .unwrap();
        let snf = SmithDecomposition::compute(&f5, &a);
        assert!(snf.diagonal.iter().all(|x| f5.is_unit(x)));
        assert_eq!(snf.rank(), 2);
    }
}
