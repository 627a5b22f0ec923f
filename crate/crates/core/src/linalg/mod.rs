//! Dense vectors and matrices over F_q.
//!
//! Every routine pivots deterministically (leftmost column, topmost row) so
//! that derived codes are byte-identical across runs and thread counts.

pub mod gf2;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{Elem, Gf};

/// A vector over F_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FVector {
    field: Gf,
    entries: Vec<Elem>,
}

impl FVector {
    pub fn new(field: &Gf, entries: Vec<Elem>) -> Self {
        debug_assert!(entries.iter().all(|&e| (e as u32) < field.q()));
        FVector {
            field: field.clone(),
            entries,
        }
    }

    pub fn zeros(field: &Gf, len: usize) -> Self {
        FVector::new(field, vec![0; len])
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Elem] {
        &mut self.entries
    }

    pub fn into_entries(self) -> Vec<Elem> {
        self.entries
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &FVector) -> FVector {
        let f = &self.field;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        FVector::new(f, entries)
    }

    pub fn scale(&self, c: Elem) -> FVector {
        let f = &self.field;
        FVector::new(f, self.entries.iter().map(|&a| f.mul(c, a)).collect())
    }

    pub fn dot(&self, other: &FVector) -> Elem {
        dot(&self.field, &self.entries, &other.entries)
    }
}

pub(crate) fn dot(f: &Gf, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// `dst += c * src`, entrywise.
pub(crate) fn axpy(f: &Gf, dst: &mut [Elem], c: Elem, src: &[Elem]) {
    if c == 0 {
        return;
    }
    let add = f.add_table();
    let lut = scaled_lut(f, c);
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = add[((*d as usize) << 4) | lut[s as usize] as usize];
    }
}

fn scaled_lut(f: &Gf, c: Elem) -> [Elem; 16] {
    let mut lut = [0; 16];
    for x in f.elements() {
        lut[x as usize] = f.mul(c, x);
    }
    lut
}

/// A row-major dense matrix over F_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMatrix {
    field: Gf,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

/// Output of [`FMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl FMatrix {
    pub fn zeros(field: &Gf, rows: usize, cols: usize) -> Self {
        FMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Gf, n: usize) -> Self {
        let mut m = FMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_data(field: &Gf, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(FMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from equal-length rows. `cols` is needed for the
    /// zero-row case.
    pub fn from_rows(field: &Gf, cols: usize, rows: &[Vec<Elem>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        FMatrix::from_data(field, rows.len(), cols, data)
    }

    pub fn from_vectors(field: &Gf, cols: usize, rows: &[FVector]) -> Result<Self> {
        let raw: Vec<Vec<Elem>> = rows.iter().map(|v| v.entries().to_vec()).collect();
        FMatrix::from_rows(field, cols, &raw)
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> FVector {
        FVector::new(&self.field, self.row(i).to_vec())
    }

    pub fn row_vectors(&self) -> Vec<FVector> {
        (0..self.rows).map(|i| self.row_vector(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn transpose(&self) -> FMatrix {
        let mut t = FMatrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = FMatrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a != 0 {
                    let (f, src) = (&self.field, other.row(k));
                    axpy(f, out.row_mut(i), a, src);
                }
            }
        }
        Ok(out)
    }

    /// `M v` for a column vector `v`.
    pub fn mul_vec(&self, v: &FVector) -> Result<FVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let entries = (0..self.rows)
            .map(|i| dot(&self.field, self.row(i), v.entries()))
            .collect();
        Ok(FVector::new(&self.field, entries))
    }

    /// `v M` for a row vector `v`.
    pub fn vec_mul(&self, v: &[Elem]) -> Result<FVector> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = vec![0; self.cols];
        for (i, &c) in v.iter().enumerate() {
            axpy(&self.field, &mut out, c, self.row(i));
        }
        Ok(FVector::new(&self.field, out))
    }

    pub fn select_rows(&self, idx: &[usize]) -> FMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        FMatrix {
            field: self.field.clone(),
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> FMatrix {
        let mut out = FMatrix::zeros(&self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FMatrix::from_data(&self.field, self.rows + other.rows, self.cols, data)
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row counts".into()));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        FMatrix::from_data(&self.field, self.rows, cols, data)
    }

    /// Reduced row echelon form with leftmost-column, topmost-row pivoting.
    pub fn rref(&self) -> Rref {
        let mut matrix = self.clone();
        let pivots = if self.field.is_binary() {
            let mut bits = gf2::BitMatrix::from_fmatrix(self);
            let pivots = bits.rref();
            matrix = bits.to_fmatrix();
            pivots
        } else {
            matrix.rref_in_place()
        };
        let rank = pivots.len();
        Rref {
            matrix,
            pivots,
            rank,
        }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let add = *f.add_table();
        let (rows, cols) = (self.rows, self.cols);
        let parallel = rows * cols >= 1 << 18;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if p != r {
                for j in c..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let scale = f.inv(self.data[r * cols + c]).expect("pivot is nonzero");
            let lut = scaled_lut(&f, scale);
            for j in c..cols {
                let e = &mut self.data[r * cols + j];
                *e = lut[*e as usize];
            }
            let pivot: Vec<Elem> = self.data[r * cols + c..(r + 1) * cols].to_vec();
            let eliminate = |i: usize, row: &mut [Elem]| {
                let factor = row[c];
                if i == r || factor == 0 {
                    return;
                }
                let lut = scaled_lut(&f, f.neg(factor));
                for (d, &s) in row[c..].iter_mut().zip(&pivot) {
                    *d = add[((*d as usize) << 4) | lut[s as usize] as usize];
                }
            };
            if parallel {
                self.data
                    .par_chunks_mut(cols)
                    .enumerate()
                    .for_each(|(i, row)| eliminate(i, row));
            } else {
                for (i, row) in self.data.chunks_mut(cols).enumerate() {
                    eliminate(i, row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{x : M x = 0}`: one vector per free column of the RREF, in
    /// increasing column order, with a 1 at that column.
    pub fn nullspace_basis(&self) -> Vec<FVector> {
        let Rref { matrix, pivots, .. } = self.rref();
        let f = &self.field;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(matrix.get(i, free));
                }
                FVector::new(f, v)
            })
            .collect()
    }

    /// One solution of `M x = b` with every free variable set to zero.
    pub fn solve(&self, b: &FVector) -> Result<FVector> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let column = FMatrix::from_data(&self.field, self.rows, 1, b.entries().to_vec())?;
        let Rref { matrix, pivots, .. } = self.hstack(&column)?.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::Inconsistent);
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = matrix.get(i, self.cols);
        }
        Ok(FVector::new(&self.field, x))
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<FMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let Rref { matrix, pivots, .. } = self
            .hstack(&FMatrix::identity(&self.field, n))?
            .rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::RankDeficient(format!("{n}x{n} matrix is singular")));
        }
        let right: Vec<usize> = (n..2 * n).collect();
        Ok(matrix.select_cols(&right))
    }

    /// `L` with `L M = I` for `M` of full column rank. The rows of `M` used
    /// are the pivot columns of `rref(M^T)`.
    pub fn left_inverse(&self) -> Result<FMatrix> {
        let info = self.transpose().rref();
        if info.rank < self.cols {
            return Err(Error::RankDeficient(format!(
                "column rank {} < {} columns",
                info.rank, self.cols
            )));
        }
        let square = self.select_rows(&info.pivots);
        let inv = square.inverse()?;
        let mut l = FMatrix::zeros(&self.field, self.cols, self.rows);
        for (j, &row) in info.pivots.iter().enumerate() {
            for i in 0..self.cols {
                l.set(i, row, inv.get(i, j));
            }
        }
        Ok(l)
    }

    /// Kronecker product: `(A ⊗ B)[(i1, i2), (j1, j2)] = A[i1, j1] B[i2, j2]`.
    pub fn kronecker(&self, other: &FMatrix) -> FMatrix {
        let f = &self.field;
        let (rb, cb) = (other.rows, other.cols);
        let mut out = FMatrix::zeros(f, self.rows * rb, self.cols * cb);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a == 0 {
                    continue;
                }
                for i2 in 0..rb {
                    for j2 in 0..cb {
                        out.set(i1 * rb + i2, j1 * cb + j2, f.mul(a, other.get(i2, j2)));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(q: u32, rows: &[&[Elem]]) -> FMatrix {
        let f = Gf::new(q).unwrap();
        let raw: Vec<Vec<Elem>> = rows.iter().map(|r| r.to_vec()).collect();
        FMatrix::from_rows(&f, raw[0].len(), &raw).unwrap()
    }

    fn hamming_parity() -> FMatrix {
        mat(
            2,
            &[
                &[1, 0, 1, 0, 1, 0, 1],
                &[0, 1, 1, 0, 0, 1, 1],
                &[0, 0, 0, 1, 1, 1, 1],
            ],
        )
    }

    #[test]
    fn rref_examples() {
        let f2 = Gf::binary();
        let id = FMatrix::identity(&f2, 3);
        let r = id.rref();
        assert_eq!((r.matrix.clone(), r.rank), (id, 3));

        let z = FMatrix::zeros(&Gf::new(5).unwrap(), 2, 3);
        assert_eq!(z.rref().rank, 0);
        assert_eq!(z.rref().matrix, z);

        let m = mat(5, &[&[1, 2], &[2, 4]]);
        let r = m.rref();
        assert_eq!(r.matrix, mat(5, &[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn nullspace_examples() {
        let f2 = Gf::binary();
        assert!(FMatrix::identity(&f2, 4).nullspace_basis().is_empty());
        let ns = mat(2, &[&[1, 1]]).nullspace_basis();
        assert_eq!(ns, vec![FVector::new(&f2, vec![1, 1])]);

        let h = hamming_parity();
        let ns = h.nullspace_basis();
        assert_eq!(ns.len(), 4);
        for v in &ns {
            assert!(h.mul_vec(v).unwrap().is_zero());
        }
        assert_eq!(FMatrix::from_vectors(&f2, 7, &ns).unwrap().rank(), 4);
    }

    #[test]
    fn solve_examples() {
        let f3 = Gf::new(3).unwrap();
        let b = FVector::new(&f3, vec![2, 0, 1]);
        assert_eq!(FMatrix::identity(&f3, 3).solve(&b).unwrap(), b);

        let f2 = Gf::binary();
        let x = mat(2, &[&[1, 1]]).solve(&FVector::new(&f2, vec![1])).unwrap();
        assert_eq!(x.entries(), &[1, 0]);

        let bad = mat(2, &[&[1], &[1]]).solve(&FVector::new(&f2, vec![0, 1]));
        assert_eq!(bad, Err(Error::Inconsistent));
        let mismatch = mat(2, &[&[1], &[1]]).solve(&FVector::new(&f2, vec![0]));
        assert!(matches!(mismatch, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn left_inverse_examples() {
        let f2 = Gf::binary();
        let id = FMatrix::identity(&f2, 3);
        assert_eq!(id.left_inverse().unwrap(), id);

        let rep = mat(2, &[&[1], &[1], &[1]]);
        assert_eq!(rep.left_inverse().unwrap(), mat(2, &[&[1, 0, 0]]));

        // transposed [7,3] simplex generator
        let g = mat(
            2,
            &[
                &[0, 0, 0, 1, 1, 1, 1],
                &[0, 1, 1, 0, 0, 1, 1],
                &[1, 0, 1, 0, 1, 0, 1],
            ],
        )
        .transpose();
        let l = g.left_inverse().unwrap();
        assert_eq!(l.mul(&g).unwrap(), FMatrix::identity(&f2, 3));

        let deficient = mat(3, &[&[1, 2], &[2, 1]]);
        assert!(matches!(deficient.left_inverse(), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn kronecker_examples() {
        let f3 = Gf::new(3).unwrap();
        let b = mat(3, &[&[1, 2, 0], &[0, 1, 1]]);
        assert_eq!(mat(3, &[&[1]]).kronecker(&b), b);
        let i2 = FMatrix::identity(&f3, 2);
        assert_eq!(i2.kronecker(&i2), FMatrix::identity(&f3, 4));
        let a = mat(3, &[&[1, 2], &[0, 1]]);
        let k = a.kronecker(&b);
        assert_eq!((k.rows(), k.cols()), (4, 6));
        assert_eq!(k.get(2 + 1, 3 + 2), f3.mul(a.get(1, 1), b.get(1, 2)));
    }

    fn arb_matrix() -> impl Strategy<Value = FMatrix> {
        (prop::sample::select(vec![2u32, 3, 4]), 1usize..=12, 1usize..=12).prop_flat_map(
            |(q, r, c)| {
                prop::collection::vec(0..q as Elem, r * c).prop_map(move |data| {
                    FMatrix::from_data(&Gf::new(q).unwrap(), r, c, data).unwrap()
                })
            },
        )
    }

    proptest! {
        #[test]
        fn nullspace_is_kernel(m in arb_matrix()) {
            let ns = m.nullspace_basis();
            prop_assert_eq!(m.rank() + ns.len(), m.cols());
            for v in &ns {
                prop_assert!(m.mul_vec(v).unwrap().is_zero());
            }
        }

        #[test]
        fn rref_idempotent(m in arb_matrix()) {
            let once = m.rref().matrix;
            prop_assert_eq!(once.rref().matrix, once);
        }

        #[test]
        fn left_inverse_property(m in arb_matrix()) {
            if let Ok(l) = m.left_inverse() {
                prop_assert_eq!(l.mul(&m).unwrap(), FMatrix::identity(m.field(), m.cols()));
            } else {
                prop_assert!(m.rank() < m.cols());
            }
        }

        #[test]
        fn binary_fast_path_matches_generic(
            data in prop::collection::vec(0..2u8, 7 * 70)
        ) {
            let f2 = Gf::binary();
            let m = FMatrix::from_data(&f2, 7, 70, data).unwrap();
            let mut generic = m.clone();
            let pivots = generic.rref_in_place();
            let fast = m.rref();
            prop_assert_eq!(fast.pivots, pivots);
            prop_assert_eq!(fast.matrix, generic);
        }
    }
}
