//! Exact sparse linear algebra over ℚ.
//!
//! Matrices are stored row-major as sorted sparse rows. Elimination picks, in
//! every column, the candidate pivot with the smallest bit size, which keeps
//! coefficient growth in check on the very sparse bar complexes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar, always kept in lowest terms with positive denominator.
pub type Scalar = BigRational;

/// Shorthand for an integer scalar.
pub fn q(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Shorthand for `num/den`. Panics on a zero denominator.
pub fn qr(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"a"` or `"a/b"` (optionally signed). Rejects zero denominators.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Scalar::from_integer),
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().ok()?;
            let d = d.trim().parse::<BigInt>().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Scalar::new(n, d))
        }
    }
}

/// Canonical text form: `"a"` for integers, `"a/b"` otherwise.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn bit_size(x: &Scalar) -> u64 {
    x.numer().bits() + x.denom().bits()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinError {
    #[error("d_out * d_in is not zero")]
    CompositionNonzero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Sparse matrix over ℚ. Zero entries are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Scalar)>>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format_scalar(&self.get(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, Scalar::one()));
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            m.data[i] = row
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, x)| (j, x.clone()))
                .collect();
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let dense: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_dense(&dense)
    }

    /// Builds a matrix whose columns are the given dense vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                if !x.is_zero() {
                    m.data[i].push((j, x.clone()));
                }
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

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.data[r].binary_search_by_key(&c, |(j, _)| *j) {
            Ok(k) => self.data[r][k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |(j, _)| *j) {
            Ok(k) => {
                if x.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = x;
                }
            }
            Err(k) => {
                if !x.is_zero() {
                    row.insert(k, (c, x));
                }
            }
        }
    }

    pub fn row(&self, r: usize) -> &[(usize, Scalar)] {
        &self.data[r]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c)).collect()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, x) in row {
                t.data[*j].push((i, x.clone()));
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "mul_vec length mismatch");
        self.data
            .iter()
            .map(|row| row.iter().fold(Scalar::zero(), |acc, (j, x)| acc + x * &v[*j]))
            .collect()
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "mul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, x) in row {
                for (j, y) in &other.data[*k] {
                    *acc.entry(*j).or_insert_with(Scalar::zero) += x * y;
                }
            }
            out.data[i] = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        }
        out
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            let mut row = self.data[i].clone();
            row.extend(other.data[i].iter().map(|(j, x)| (j + self.cols, x.clone())));
            out.data[i] = row;
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.cols);
        let mut out = self.clone();
        out.rows += other.rows;
        out.data.extend(other.data.iter().cloned());
        out
    }

    /// Restricts to the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> SparseMatrix {
        let pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut out = Self::zeros(self.rows, cols.len());
        for (i, row) in self.data.iter().enumerate() {
            let mut r: Vec<(usize, Scalar)> =
                row.iter().filter_map(|(j, x)| pos.get(j).map(|&k| (k, x.clone()))).collect();
            r.sort_by_key(|(k, _)| *k);
            out.data[i] = r;
        }
        out
    }
}

/// `target -= factor * source`, both sorted sparse rows.
fn axpy_row(target: &[(usize, Scalar)], factor: &Scalar, source: &[(usize, Scalar)]) -> Vec<(usize, Scalar)> {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut a, mut b) = (0, 0);
    while a < target.len() || b < source.len() {
        let ca = target.get(a).map(|e| e.0);
        let cb = source.get(b).map(|e| e.0);
        match (ca, cb) {
            (Some(x), Some(y)) if x == y => {
                let v = &target[a].1 - factor * &source[b].1;
                if !v.is_zero() {
                    out.push((x, v));
                }
                a += 1;
                b += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(target[a].clone());
                a += 1;
            }
            (Some(_), None) => {
                out.push(target[a].clone());
                a += 1;
            }
            (_, Some(y)) => {
                out.push((y, -(factor * &source[b].1)));
                b += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: SparseMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Rref {
    /// Reduces `v` (length = cols) against the pivot rows; the result has zero
    /// entries in every pivot column.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (j, x) in self.matrix.row(i) {
                v[*j] -= &f * x;
            }
        }
        v
    }
}

/// Exact reduced row echelon form over ℚ.
pub fn rref(m: &SparseMatrix) -> Rref {
    let mut rows: Vec<Vec<(usize, Scalar)>> = m.data.iter().filter(|r| !r.is_empty()).cloned().collect();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..m.cols {
        if pr >= rows.len() {
            break;
        }
        // smallest-bit-size pivot among the remaining rows
        let mut best: Option<(usize, u64)> = None;
        for (r, row) in rows.iter().enumerate().skip(pr) {
            if let Ok(k) = row.binary_search_by_key(&col, |(j, _)| *j) {
                let size = bit_size(&row[k].1);
                if best.is_none_or(|(_, s)| size < s) {
                    best = Some((r, size));
                }
            }
        }
        let Some((r, _)) = best else { continue };
        rows.swap(pr, r);
        let lead = rows[pr].iter().find(|(j, _)| *j == col).map(|(_, x)| x.clone()).unwrap();
        let inv = lead.recip();
        for e in rows[pr].iter_mut() {
            e.1 = &e.1 * &inv;
        }
        let pivot_row = rows[pr].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == pr {
                continue;
            }
            if let Ok(k) = row.binary_search_by_key(&col, |(j, _)| *j) {
                let f = row[k].1.clone();
                *row = axpy_row(row, &f, &pivot_row);
            }
        }
        pivots.push(col);
        pr += 1;
    }
    rows.truncate(pr);
    let rank = pr;
    let mut matrix = SparseMatrix::zeros(m.rows, m.cols);
    for (i, row) in rows.into_iter().enumerate() {
        matrix.data[i] = row;
    }
    Rref { matrix, pivots, rank }
}

pub fn rank(m: &SparseMatrix) -> usize {
    rref(m).rank
}

/// Basis of the null space, one vector per free column.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    let r = rref(m);
    kernel_from_rref(&r, m.cols)
}

fn kernel_from_rref(r: &Rref, cols: usize) -> Vec<Vec<Scalar>> {
    let pivot_set: std::collections::BTreeSet<usize> = r.pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (i, &p) in r.pivots.iter().enumerate() {
            let x = r.matrix.get(i, free);
            if !x.is_zero() {
                v[p] = -x;
            }
        }
        basis.push(v);
    }
    basis
}

/// Some exact solution of `m x = b`, or `None` when the system is inconsistent.
pub fn solve(m: &SparseMatrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(b.len(), m.rows, "right-hand side length must equal row count");
    let rhs = SparseMatrix::from_columns(m.rows, &[b.to_vec()]);
    let r = rref(&m.hstack(&rhs));
    if r.pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); m.cols];
    for (i, &p) in r.pivots.iter().enumerate() {
        x[p] = r.matrix.get(i, m.cols);
    }
    Some(x)
}

/// Homology at the middle term of `C_in --d_in--> C_mid --d_out--> C_out`.
#[derive(Clone, Debug)]
pub struct Homology {
    pub dim: usize,
    /// Cycles whose classes form a basis of ker(d_out)/im(d_in).
    pub representatives: Vec<Vec<Scalar>>,
}

/// Exact homology dimension and representative cycles.
///
/// Matrices act on column vectors: `d_in` is `dim C_mid × dim C_in` and
/// `d_out` is `dim C_out × dim C_mid`.
pub fn quotient_and_homology(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<Homology, LinError> {
    if d_in.rows() != d_out.cols() {
        return Err(LinError::DimensionMismatch(format!(
            "d_in has {} rows but d_out has {} columns",
            d_in.rows(),
            d_out.cols()
        )));
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(LinError::CompositionNonzero);
    }
    let mid = d_in.rows();
    let cycles = kernel_basis(d_out);
    // rows = image vectors, then greedily add cycles that raise the rank
    let mut span = d_in.transpose();
    let mut span_rref = rref(&span);
    let mut reps = Vec::new();
    for z in cycles {
        let reduced = span_rref.reduce(&z);
        if reduced.iter().all(Zero::is_zero) {
            continue;
        }
        span = span.vstack(&SparseMatrix::from_dense(std::slice::from_ref(&z)));
        span_rref = rref(&span);
        reps.push(z);
    }
    debug_assert!(reps.len() <= mid);
    Ok(Homology { dim: reps.len(), representatives: reps })
}

/// Solution of an affine system given only as a residual function.
#[derive(Clone, Debug)]
pub enum AffineSolution {
    Solved(Vec<Scalar>),
    /// Residual at the origin, reduced modulo the image of the linear part.
    Unsolvable { residual: Vec<Scalar> },
}

/// Solves `residual(x) = 0` for an affine `residual`, probing it at the origin
/// and at each unit vector to recover the matrix.
pub fn solve_affine<F>(unknowns: usize, residual: F) -> AffineSolution
where
    F: Fn(&[Scalar]) -> Vec<Scalar>,
{
    let origin = vec![Scalar::zero(); unknowns];
    let c = residual(&origin);
    if c.iter().all(Zero::is_zero) {
        return AffineSolution::Solved(origin);
    }
    let mut columns = Vec::with_capacity(unknowns);
    for j in 0..unknowns {
        let mut e = origin.clone();
        e[j] = Scalar::one();
        let r = residual(&e);
        assert_eq!(r.len(), c.len(), "residual length must not depend on the point");
        columns.push(r.iter().zip(&c).map(|(a, b)| a - b).collect::<Vec<_>>());
    }
    let m = SparseMatrix::from_columns(c.len(), &columns);
    let neg: Vec<Scalar> = c.iter().map(|x| -x).collect();
    match solve(&m, &neg) {
        Some(x) => AffineSolution::Solved(x),
        None => {
            let image = rref(&m.transpose());
            AffineSolution::Unsolvable { residual: image.reduce(&c) }
        }
    }
}

/// Determinant by cofactor expansion; only for small test matrices.
pub fn determinant_cofactor(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    if n == 0 {
        return Scalar::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = Scalar::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Scalar>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * determinant_cofactor(&minor);
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(m: &SparseMatrix) -> Option<SparseMatrix> {
    if m.rows != m.cols {
        return None;
    }
    let n = m.rows;
    let r = rref(&m.hstack(&SparseMatrix::identity(n)));
    if r.rank < n || r.pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    let mut inv = SparseMatrix::zeros(n, n);
    for i in 0..n {
        for (j, x) in r.matrix.row(i) {
            if *j >= n {
                inv.set(i, j - n, x.clone());
            }
        }
    }
    Some(inv)
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn abs_max_bits(v: &[Scalar]) -> u64 {
    v.iter().map(|x| x.abs().numer().bits()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rref_dependent_rows() {
        let r = rref(&SparseMatrix::from_i64(&[vec![1, 2], vec![2, 4]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.matrix.get(0, 1), q(2));
    }

    #[test]
    fn rref_zero() {
        assert_eq!(rref(&SparseMatrix::from_i64(&[vec![0]])).rank, 0);
    }

    #[test]
    fn rref_invertible_6x6_matches_cofactor_oracle() {
        let rows = vec![
            vec![2, -1, 0, 3, 1, 0],
            vec![1, 4, 2, 0, -2, 1],
            vec![0, 1, 5, -1, 0, 2],
            vec![3, 0, 1, 2, 1, -1],
            vec![-1, 2, 0, 1, 3, 0],
            vec![0, 0, 1, 1, -1, 4],
        ];
        let m = SparseMatrix::from_i64(&rows);
        let det = determinant_cofactor(&m.to_dense());
        assert!(!det.is_zero());
        assert_eq!(rref(&m).rank, 6);
        assert_eq!(rref(&m).pivots, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&SparseMatrix::zeros(2, 3)).len(), 3);
        let m = SparseMatrix::from_i64(&[vec![1, 1, 0], vec![0, 0, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert!(is_zero_vec(&m.mul_vec(&k[0])));
        assert_eq!(k[0], vec![q(-1), q(1), q(0)]);
    }

    #[test]
    fn solve_examples() {
        let b = vec![q(3), qr(-1, 2), q(7)];
        assert_eq!(solve(&SparseMatrix::identity(3), &b), Some(b.clone()));
        assert_eq!(solve(&SparseMatrix::zeros(3, 3), &b), None);
        let m = SparseMatrix::from_i64(&[vec![1, 2, 0], vec![0, 1, 1], vec![3, -1, 2], vec![1, 3, 1]]);
        let planted = vec![q(1), q(-2), q(5)];
        let b = m.mul_vec(&planted);
        let x = solve(&m, &b).expect("consistent");
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn homology_examples() {
        let z = SparseMatrix::zeros(3, 3);
        assert_eq!(quotient_and_homology(&z, &z).unwrap().dim, 3);
        let id = SparseMatrix::identity(3);
        assert_eq!(quotient_and_homology(&id, &SparseMatrix::zeros(1, 3)).unwrap().dim, 0);
        // the (p,q) = (1,0) differential out of the word-length-3 part
        let d_in = SparseMatrix::zeros(2, 3);
        let d_out = SparseMatrix::from_i64(&[vec![1, 0]]);
        assert_eq!(quotient_and_homology(&d_in, &d_out).unwrap().dim, 1);
        assert_eq!(
            quotient_and_homology(&id, &id).unwrap_err(),
            LinError::CompositionNonzero
        );
    }

    #[test]
    fn scalar_text_round_trip() {
        assert_eq!(parse_scalar("4/6"), Some(qr(2, 3)));
        assert_eq!(parse_scalar("-3"), Some(q(-3)));
        assert_eq!(parse_scalar("1/0"), None);
        assert_eq!(parse_scalar("x"), None);
        assert_eq!(format_scalar(&qr(-2, 4)), "-1/2");
        assert_eq!(format_scalar(&q(5)), "5");
    }

    #[test]
    fn affine_solver() {
        // x0 + x1 - 3 = 0, x1 - 1 = 0
        let sol = solve_affine(2, |x| vec![&x[0] + &x[1] - q(3), &x[1] - q(1)]);
        match sol {
            AffineSolution::Solved(x) => assert_eq!(x, vec![q(2), q(1)]),
            _ => panic!(),
        }
        let bad = solve_affine(1, |x| vec![x[0].clone(), x[0].clone() - q(1)]);
        assert!(matches!(bad, AffineSolution::Unsolvable { .. }));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r)
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in small_matrix()) {
            let m = SparseMatrix::from_i64(&rows);
            let k = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + k.len(), m.cols());
            for v in &k {
                prop_assert!(is_zero_vec(&m.mul_vec(v)));
            }
        }

        #[test]
        fn solve_is_exact_or_rank_jumps(rows in small_matrix(), seed in proptest::collection::vec(-3i64..4, 6)) {
            let m = SparseMatrix::from_i64(&rows);
            let b: Vec<Scalar> = (0..m.rows()).map(|i| q(seed[i % seed.len()])).collect();
            match solve(&m, &b) {
                Some(x) => prop_assert_eq!(m.mul_vec(&x), b),
                None => {
                    let aug = m.hstack(&SparseMatrix::from_columns(m.rows(), &[b]));
                    prop_assert!(rank(&aug) > rank(&m));
                }
            }
        }

        #[test]
        fn homology_dimension_formula(rows in small_matrix()) {
            // d_out = m, d_in = projection onto ker m built from the kernel basis
            let m = SparseMatrix::from_i64(&rows);
            let k = kernel_basis(&m);
            let keep: Vec<Vec<Scalar>> = k.iter().take(k.len() / 2).cloned().collect();
            let d_in = SparseMatrix::from_columns(m.cols(), &keep);
            let h = quotient_and_homology(&d_in, &m).unwrap();
            prop_assert_eq!(h.dim, k.len() - rank(&d_in));
        }
    }
}
