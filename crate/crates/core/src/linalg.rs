//! Dense exact linear algebra over a [`Field`].

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::field::Field;

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Builds a `rows x cols.len()` matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| F::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
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

    pub fn mul(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let v = out[(i, j)].clone() + a.clone() * b.clone();
                        out[(i, j)] = v;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..rhs.cols {
                out[(i, self.cols + j)] = rhs[(i, j)].clone();
            }
        }
        out
    }

    pub fn vstack(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Matrix {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix<F>) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inverse().expect("nonzero pivot");
            for j in c..self.cols {
                let v = self[(r, j)].clone() * inv.clone();
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self[(i, c)].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let pv = self[(r, j)].clone();
                    if !pv.is_zero() {
                        let v = self[(i, j)].clone() - factor.clone() * pv;
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns form a basis of the right null space, one per free column of
    /// the RREF, with a 1 in that free position.
    pub fn kernel_basis(&self) -> Matrix<F> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (idx, &f) in free.iter().enumerate() {
            k[(f, idx)] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                k[(p, idx)] = -r[(row, f)].clone();
            }
        }
        k
    }

    /// Some `x` with `self * x = b`, free variables set to zero; `None` if the
    /// system is inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::from_cols(self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

/// Repeated solves against one fixed matrix.
///
/// Stores the RREF `R` together with the invertible `E` such that
/// `E * m = R`, so each right-hand side costs one matrix-vector product.
#[derive(Clone, Debug)]
pub struct LinearSolver<F> {
    cols: usize,
    transform: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> LinearSolver<F> {
    pub fn new(m: &Matrix<F>) -> Self {
        let aug = m.hstack(&Matrix::identity(m.rows()));
        let (r, all_pivots) = aug.rref();
        let pivots: Vec<usize> = all_pivots.into_iter().filter(|&c| c < m.cols()).collect();
        let mut transform = Matrix::zeros(m.rows(), m.rows());
        for i in 0..m.rows() {
            for j in 0..m.rows() {
                transform[(i, j)] = r[(i, m.cols() + j)].clone();
            }
        }
        LinearSolver {
            cols: m.cols(),
            transform,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        let c = self.transform.mul_vec(b);
        if c[self.pivots.len()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &p) in self.pivots.iter().enumerate() {
            x[p] = c[row].clone();
        }
        Some(x)
    }
}

/// A subspace of `F^n` kept as a reduced echelon basis, growable one vector
/// at a time.
#[derive(Clone, Debug)]
pub struct Subspace<F> {
    ambient: usize,
    // each row has a 1 at its pivot and zeros at every other row's pivot
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn new(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn spanned_by<'a>(ambient: usize, vectors: impl IntoIterator<Item = &'a Vec<F>>) -> Self {
        let mut s = Self::new(ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its component along the pivot directions.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p].clone();
            if c.is_zero() {
                continue;
            }
            for (wi, ri) in w.iter_mut().zip(row) {
                if !ri.is_zero() {
                    *wi = wi.clone() - c.clone() * ri.clone();
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut w = self.reduce(v);
        let Some(q) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[q].inverse().expect("nonzero");
        for x in w.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for row in self.rows.iter_mut() {
            let c = row[q].clone();
            if c.is_zero() {
                continue;
            }
            for (ri, wi) in row.iter_mut().zip(&w) {
                if !wi.is_zero() {
                    *ri = ri.clone() - c.clone() * wi.clone();
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(q);
        true
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.rows
    }

    /// Coordinates not used as pivots, in increasing order. Their standard
    /// basis vectors span a complement.
    pub fn complement_coordinates(&self) -> Vec<usize> {
        let mut used = vec![false; self.ambient];
        for &p in &self.pivots {
            used[p] = true;
        }
        (0..self.ambient).filter(|&i| !used[i]).collect()
    }
}

/// The quotient `F^n / S` with basis the standard vectors at the
/// complement coordinates of `S`.
#[derive(Clone, Debug)]
pub struct Quotient<F> {
    sub: Subspace<F>,
    complement: Vec<usize>,
}

impl<F: Field> Quotient<F> {
    pub fn new(sub: Subspace<F>) -> Self {
        let complement = sub.complement_coordinates();
        Quotient { sub, complement }
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn ambient(&self) -> usize {
        self.sub.ambient()
    }

    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    pub fn project(&self, v: &[F]) -> Vec<F> {
        let w = self.sub.reduce(v);
        self.complement.iter().map(|&i| w[i].clone()).collect()
    }

    /// Standard lift of the `k`-th quotient basis vector.
    pub fn lift(&self, k: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.sub.ambient()];
        v[self.complement[k]] = F::one();
        v
    }

    /// Matrix of the projection `F^n -> F^n / S`.
    pub fn projection_matrix(&self) -> Matrix<F> {
        let n = self.ambient();
        let mut m = Matrix::zeros(self.dim(), n);
        for j in 0..n {
            let mut e = vec![F::zero(); n];
            e[j] = F::one();
            for (i, v) in self.project(&e).into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, PrimeField};
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    type F7 = Fp<7>;
    type F5 = Fp<5>;
    type F3 = Fp<3>;

    #[test]
    fn rref_proportional_rows() {
        let m = Matrix::<F7>::from_i64_rows(&[&[1, 2], &[2, 4]]);
        let (r, p) = m.rref();
        assert_eq!(r, Matrix::from_i64_rows(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_identity_and_permutation() {
        let id = Matrix::<F7>::identity(3);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1, 2]));
        let m = Matrix::<F5>::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.rref().0, Matrix::identity(2));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::<F7>::zeros(2, 3).kernel_basis().cols(), 3);
        let inv = Matrix::<F7>::from_i64_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(inv.kernel_basis().cols(), 0);
    }

    #[test]
    fn kernel_of_row_one_one_mod_three_matches_enumeration() {
        // oracle: enumerate all 9 vectors of GF(3)^2
        let mut null = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                if (a + b) % 3 == 0 && (a, b) != (0, 0) {
                    null.push((a, b));
                }
            }
        }
        assert_eq!(null, vec![(1, 2), (2, 1)]);
        let k = Matrix::<F3>::from_i64_rows(&[&[1, 1]]).kernel_basis();
        assert_eq!(k.cols(), 1);
        let v = (k[(0, 0)].residue(), k[(1, 0)].residue());
        assert!(null.contains(&v));
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::<F7>::identity(3);
        let b = vec![F7::new(3), F7::new(1), F7::new(6)];
        assert_eq!(id.solve(&b), Some(b.clone()));

        // exhaustive oracle: no (x, y) in GF(7)^2 has x + 2y = 1 and 2x + 4y = 3
        let consistent = (0..7).any(|x| (0..7).any(|y| (x + 2 * y) % 7 == 1 && (2 * x + 4 * y) % 7 == 3));
        assert!(!consistent);
        let m = Matrix::<F7>::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.solve(&[F7::new(1), F7::new(3)]), None);

        let row = Matrix::<F7>::from_i64_rows(&[&[1, 1]]);
        assert_eq!(row.solve(&[F7::zero()]), Some(vec![F7::zero(), F7::zero()]));
    }

    #[test]
    fn solver_agrees_with_solve() {
        let m = Matrix::<F7>::from_i64_rows(&[&[1, 2, 0], &[2, 4, 1], &[0, 0, 3]]);
        let s = LinearSolver::new(&m);
        assert_eq!(s.rank(), 2);
        let b = vec![F7::new(1), F7::new(3), F7::new(3)];
        assert_eq!(s.solve(&b), m.solve(&b));
        let bad = vec![F7::new(1), F7::new(3), F7::new(4)];
        assert_eq!(s.solve(&bad), None);
    }

    #[test]
    fn subspace_and_quotient() {
        let mut s = Subspace::<F7>::new(3);
        assert!(s.insert(&[F7::one(), F7::one(), F7::zero()]));
        assert!(!s.insert(&[F7::new(2), F7::new(2), F7::zero()]));
        let q = Quotient::new(s);
        assert_eq!(q.dim(), 2);
        assert_eq!(q.complement(), &[1, 2]);
        // (1,0,0) == -(0,1,0) modulo the span of (1,1,0)
        assert_eq!(q.project(&[F7::one(), F7::zero(), F7::zero()]), vec![F7::new(6), F7::zero()]);
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix<Fp<7>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(0i64..7, r * c).prop_map(move |v| {
                let rows = v.chunks(c).map(|ch| ch.iter().map(|&x| Fp::new(x)).collect()).collect();
                Matrix::from_rows(rows)
            })
        })
    }

    proptest! {
        #[test]
        fn kernel_is_annihilated_and_rank_nullity_holds(m in arb_matrix()) {
            let k = m.kernel_basis();
            prop_assert!(m.mul(&k).is_zero());
            prop_assert_eq!(m.rank() + k.cols(), m.cols());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn solve_is_exact_or_rank_grows(m in arb_matrix(), seed in proptest::collection::vec(0i64..7, 6)) {
            let b: Vec<Fp<7>> = (0..m.rows()).map(|i| Fp::new(seed[i])).collect();
            match m.solve(&b) {
                Some(x) => prop_assert_eq!(m.mul_vec(&x), b),
                None => {
                    let aug = m.hstack(&Matrix::from_cols(m.rows(), &[b]));
                    prop_assert!(aug.rank() > m.rank());
                }
            }
        }

        #[test]
        fn rref_is_idempotent(m in arb_matrix()) {
            let (r, p) = m.rref();
            prop_assert_eq!(r.rref(), (r.clone(), p));
        }
    }
}
