//! Sparse matrices in triplet/compressed-row form, plus diagonal Hodge stars.
//!
//! All operators assembled by this crate are small-stencil incidence or
//! Laplacian matrices; a plain CSR representation with deterministic
//! (sorted) column order is enough and keeps outputs byte-reproducible.

use std::fmt;

/// Real sparse matrix in compressed-row storage with sorted column indices.
#[derive(Clone, PartialEq)]
pub struct SparseOperator {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl fmt::Debug for SparseOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SparseOperator({}x{}, nnz={})",
            self.nrows,
            self.ncols,
            self.nnz()
        )
    }
}

impl SparseOperator {
    /// Builds from (row, col, value) triplets; duplicates are summed,
    /// exact zeros produced by summation are kept (they do not affect
    /// results and dropping them would make structure order-dependent).
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        mut triplets: Vec<(usize, usize, f64)>,
    ) -> Self {
        for &(r, c, _) in &triplets {
            assert!(r < nrows && c < ncols, "triplet out of bounds");
        }
        triplets.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx: Vec<usize> = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for &(r, c, v) in &triplets {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        SparseOperator {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseOperator {
            nrows,
            ncols,
            row_ptr: vec![0; nrows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseOperator {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Diagonal matrix from entries.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        SparseOperator {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: diag.to_vec(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        (&self.col_idx[a..b], &self.values[a..b])
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(i) => vals[i],
            Err(_) => 0.0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    pub fn transpose(&self) -> Self {
        let mut triplets: Vec<(usize, usize, f64)> =
            self.iter().map(|(r, c, v)| (c, r, v)).collect();
        triplets.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        Self::from_triplets(self.ncols, self.nrows, triplets)
    }

    /// y = A x
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        let mut y = vec![0.0; self.nrows];
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            let mut acc = 0.0;
            for (&c, &v) in cols.iter().zip(vals) {
                acc += v * x[c];
            }
            y[r] = acc;
        }
        y
    }

    /// y = Aᵀ x
    pub fn mul_vec_transpose(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.nrows);
        let mut y = vec![0.0; self.ncols];
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                y[c] += v * x[r];
            }
        }
        y
    }

    /// C = A B by row-wise sparse accumulation.
    pub fn matmul(&self, other: &SparseOperator) -> SparseOperator {
        assert_eq!(self.ncols, other.nrows, "matmul shape mismatch");
        let mut triplets = Vec::new();
        let mut acc: Vec<f64> = vec![0.0; other.ncols];
        let mut touched: Vec<usize> = Vec::new();
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&k, &av) in cols.iter().zip(vals) {
                let (bcols, bvals) = other.row(k);
                for (&c, &bv) in bcols.iter().zip(bvals) {
                    if acc[c] == 0.0 && !touched.contains(&c) {
                        touched.push(c);
                    }
                    acc[c] += av * bv;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                triplets.push((r, c, acc[c]));
                acc[c] = 0.0;
            }
            touched.clear();
        }
        SparseOperator::from_triplets(self.nrows, other.ncols, triplets)
    }

    /// A + B
    pub fn add(&self, other: &SparseOperator) -> SparseOperator {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut triplets: Vec<(usize, usize, f64)> = self.iter().collect();
        triplets.extend(other.iter());
        SparseOperator::from_triplets(self.nrows, self.ncols, triplets)
    }

    /// diag(d) · A
    pub fn scale_rows(&self, d: &[f64]) -> SparseOperator {
        assert_eq!(d.len(), self.nrows);
        let mut out = self.clone();
        for r in 0..self.nrows {
            for i in out.row_ptr[r]..out.row_ptr[r + 1] {
                out.values[i] *= d[r];
            }
        }
        out
    }

    /// A · diag(d)
    pub fn scale_cols(&self, d: &[f64]) -> SparseOperator {
        assert_eq!(d.len(), self.ncols);
        let mut out = self.clone();
        for i in 0..out.values.len() {
            out.values[i] *= d[out.col_idx[i]];
        }
        out
    }

    pub fn scaled(&self, s: f64) -> SparseOperator {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= s;
        }
        out
    }

    /// Keeps rows listed in `rows` (in order), producing a len(rows) × ncols matrix.
    pub fn select_rows(&self, rows: &[usize]) -> SparseOperator {
        let mut triplets = Vec::new();
        for (new_r, &r) in rows.iter().enumerate() {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                triplets.push((new_r, c, v));
            }
        }
        SparseOperator::from_triplets(rows.len(), self.ncols, triplets)
    }

    /// Keeps columns listed in `cols`; `old_to_new[c]` must map kept columns.
    pub fn select_cols(&self, old_to_new: &[Option<usize>], new_ncols: usize) -> SparseOperator {
        assert_eq!(old_to_new.len(), self.ncols);
        let mut triplets = Vec::new();
        for (r, c, v) in self.iter() {
            if let Some(nc) = old_to_new[c] {
                triplets.push((r, nc, v));
            }
        }
        SparseOperator::from_triplets(self.nrows, new_ncols, triplets)
    }

    /// Maximum absolute row sum (operator infinity norm).
    pub fn norm_inf(&self) -> f64 {
        (0..self.nrows)
            .map(|r| self.row(r).1.iter().map(|v| v.abs()).sum())
            .fold(0.0, f64::max)
    }

    /// max |A - Aᵀ| entry, for symmetry checks.
    pub fn asymmetry(&self) -> f64 {
        let t = self.transpose();
        let mut m: f64 = 0.0;
        for (r, c, v) in self.iter() {
            m = m.max((v - t.get(r, c)).abs());
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn to_dense(&self) -> faer::Mat<f64> {
        let mut m = faer::Mat::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.iter() {
            m[(r, c)] += v;
        }
        m
    }
}

/// Which boundary condition an operator was assembled under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    /// Dirichlet: forms vanish on tangent directions of the boundary.
    Normal,
    /// Neumann: dual forms vanish on the boundary (realized on the shifted dual grid).
    Tangential,
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryCondition::Normal => write!(f, "normal"),
            BoundaryCondition::Tangential => write!(f, "tangential"),
        }
    }
}

/// Positive diagonal Hodge star `S_k` restricted to included k-cells.
#[derive(Clone, Debug)]
pub struct DiagonalStar {
    pub k: usize,
    pub bc: BoundaryCondition,
    pub diag: Vec<f64>,
}

impl DiagonalStar {
    pub fn new(k: usize, bc: BoundaryCondition, diag: Vec<f64>) -> Self {
        assert!(
            diag.iter().all(|&d| d > 0.0 && d.is_finite()),
            "Hodge star entries must be strictly positive and finite"
        );
        DiagonalStar { k, bc, diag }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn inverse(&self) -> Vec<f64> {
        self.diag.iter().map(|d| 1.0 / d).collect()
    }

    pub fn identity(k: usize, bc: BoundaryCondition, n: usize) -> Self {
        DiagonalStar {
            k,
            bc,
            diag: vec![1.0; n],
        }
    }
}
