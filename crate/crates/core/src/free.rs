//! Graded free modules `⊕ A(-e_j)` and matrices over `A` between them.


use crate::algebra::{GradedAlgebra, RingElem};
use crate::field::PrimeField;
use crate::linalg::Matrix;

/// Free module with generators in the given internal degrees.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FreeModule {
    pub twists: Vec<i32>,
}

impl FreeModule {
    pub fn new(twists: Vec<i32>) -> Self {
        FreeModule { twists }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    /// Degrees where the module can be nonzero.
    pub fn degree_bounds<F: PrimeField>(&self, alg: &GradedAlgebra<F>) -> Option<(i32, i32)> {
        let lo = *self.twists.iter().min()?;
        let hi = *self.twists.iter().max()? + alg.top() as i32;
        Some((lo, hi))
    }

    pub fn piece_dim<F: PrimeField>(&self, alg: &GradedAlgebra<F>, d: i32) -> usize {
        self.twists.iter().map(|&e| alg.dim_at(d - e)).sum()
    }

    /// Start offset of each generator's block in the degree-`d` piece.
    pub fn offsets<F: PrimeField>(&self, alg: &GradedAlgebra<F>, d: i32) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.rank());
        let mut acc = 0;
        for &e in &self.twists {
            out.push(acc);
            acc += alg.dim_at(d - e);
        }
        out
    }

    /// Multiplication by `x_i` from degree `d` to `d + 1`.
    pub fn var_action<F: PrimeField>(&self, alg: &GradedAlgebra<F>, i: usize, d: i32) -> Matrix<F> {
        let src = self.offsets(alg, d);
        let tgt = self.offsets(alg, d + 1);
        let mut m = Matrix::zeros(self.piece_dim(alg, d + 1), self.piece_dim(alg, d));
        for (j, &e) in self.twists.iter().enumerate() {
            let block = alg.var_action(i, d - e);
            m.set_block(tgt[j], src[j], &block);
        }
        m
    }

    /// Splits a degree-`d` vector into one ring element per generator.
    pub fn vector_to_column<F: PrimeField>(&self, alg: &GradedAlgebra<F>, d: i32, v: &[F]) -> Vec<RingElem<F>> {
        let offs = self.offsets(alg, d);
        self.twists
            .iter()
            .enumerate()
            .map(|(j, &e)| {
                let len = alg.dim_at(d - e);
                alg.elem_from_piece(d - e, &v[offs[j]..offs[j] + len])
            })
            .collect()
    }

    /// Inverse of [`FreeModule::vector_to_column`], keeping only the
    /// components of the right degree.
    pub fn column_to_vector<F: PrimeField>(&self, alg: &GradedAlgebra<F>, d: i32, col: &[RingElem<F>]) -> Vec<F> {
        let mut v = Vec::with_capacity(self.piece_dim(alg, d));
        for (j, &e) in self.twists.iter().enumerate() {
            v.extend(alg.piece(&col[j], d - e));
        }
        v
    }

    pub fn dual(&self) -> FreeModule {
        FreeModule::new(self.twists.iter().map(|e| -e).collect())
    }
}

/// Matrix with entries in `A`; column `j` is the image of generator `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct RingMatrix<F> {
    rows: usize,
    cols: usize,
    entries: Vec<RingElem<F>>,
}

impl<F: PrimeField> RingMatrix<F> {
    pub fn zeros(alg: &GradedAlgebra<F>, rows: usize, cols: usize) -> Self {
        RingMatrix {
            rows,
            cols,
            entries: vec![alg.zero_elem(); rows * cols],
        }
    }

    pub fn from_columns(alg: &GradedAlgebra<F>, rows: usize, cols: Vec<Vec<RingElem<F>>>) -> Self {
        let mut m = Self::zeros(alg, rows, cols.len());
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, e) in col.into_iter().enumerate() {
                *m.get_mut(i, j) = e;
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

    pub fn get(&self, i: usize, j: usize) -> &RingElem<F> {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut RingElem<F> {
        &mut self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[RingElem<F>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.iter().all(|c| c.is_zero()))
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        RingMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, alg: &GradedAlgebra<F>, rhs: &RingMatrix<F>) -> RingMatrix<F> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in ring matrix product");
        let mut out = Self::zeros(alg, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if alg.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if alg.is_zero(b) {
                        continue;
                    }
                    let p = alg.mul(a, b);
                    let e = out.get_mut(i, j);
                    *e = alg.add(e, &p);
                }
            }
        }
        out
    }

    pub fn add(&self, alg: &GradedAlgebra<F>, rhs: &RingMatrix<F>) -> RingMatrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RingMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| alg.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, alg: &GradedAlgebra<F>, rhs: &RingMatrix<F>) -> RingMatrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RingMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| alg.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, alg: &GradedAlgebra<F>, c: F) -> RingMatrix<F> {
        RingMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| alg.scale(a, c)).collect(),
        }
    }

    /// Reduction mod `m`: the matrix of constant terms.
    pub fn constant_part(&self, alg: &GradedAlgebra<F>) -> Matrix<F> {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = alg.constant_term(self.get(i, j));
            }
        }
        m
    }

    /// All entries lie in the maximal ideal.
    pub fn is_minimal(&self, alg: &GradedAlgebra<F>) -> bool {
        self.entries.iter().all(|e| alg.constant_term(e).is_zero())
    }

    /// Every entry `(i, j)` is homogeneous of degree
    /// `source[j] + shift - target[i]`.
    pub fn is_homogeneous(&self, alg: &GradedAlgebra<F>, source: &FreeModule, target: &FreeModule, shift: i32) -> bool {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = source.twists[j] + shift - target.twists[i];
                let e = self.get(i, j);
                if alg.support_degrees(e).iter().any(|&d| d as i32 != want) {
                    return false;
                }
            }
        }
        true
    }

    /// The `k`-linear map `source_d -> target_{d + shift}`.
    pub fn degree_matrix(
        &self,
        alg: &GradedAlgebra<F>,
        source: &FreeModule,
        target: &FreeModule,
        shift: i32,
        d: i32,
    ) -> Matrix<F> {
        assert_eq!(self.cols, source.rank());
        assert_eq!(self.rows, target.rank());
        let so = source.offsets(alg, d);
        let to = target.offsets(alg, d + shift);
        let mut m = Matrix::zeros(target.piece_dim(alg, d + shift), source.piece_dim(alg, d));
        for (j, &e) in source.twists.iter().enumerate() {
            if alg.dim_at(d - e) == 0 {
                continue;
            }
            for (i, &f) in target.twists.iter().enumerate() {
                let entry = self.get(i, j);
                if alg.is_zero(entry) || alg.dim_at(d + shift - f) == 0 {
                    continue;
                }
                let block = alg.mul_matrix(entry, d - e, e + shift - f);
                m.set_block(to[i], so[j], &block);
            }
        }
        m
    }

    pub fn format(&self, alg: &GradedAlgebra<F>) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| alg.format_elem(self.get(i, j))).collect())
            .collect()
    }
}
