//! Dense matrices with polynomial entries.

use crate::error::Error;
use crate::poly::{Polynomial, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMat {
    pub rows: usize,
    pub cols: usize,
    nvars: usize,
    data: Vec<Polynomial>,
}

impl PolyMat {
    pub fn zero(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMat {
            rows,
            cols,
            nvars,
            data: vec![Polynomial::zero(nvars); rows * cols],
        }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = Self::zero(n, n, nvars);
        for i in 0..n {
            m.set(i, i, Polynomial::one(nvars));
        }
        m
    }

    pub fn scalar(n: usize, p: &Polynomial) -> Self {
        let mut m = Self::zero(n, n, p.nvars());
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, nvars: usize, f: impl Fn(usize, usize) -> Polynomial) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let p = f(i, j);
                assert_eq!(p.nvars(), nvars);
                data.push(p);
            }
        }
        PolyMat { rows, cols, nvars, data }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        assert_eq!(p.nvars(), self.nvars);
        self.data[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.rows == other.rows && self.cols == other.cols);
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.rows == other.rows && self.cols == other.cols);
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zero(self.rows, other.cols, self.nvars);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j);
                    let v = cur + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn scale_poly(&self, p: &Polynomial) -> Self {
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            data: self.data.iter().map(|a| a * p).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            data: self.data.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        let data: Vec<Polynomial> = self.data.iter().map(&f).collect();
        assert!(data.iter().all(|p| p.nvars() == data[0].nvars()));
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            nvars: if data.is_empty() { self.nvars } else { data[0].nvars() },
            data,
        }
    }

    pub fn apply_witt(&self, m: u32, acting: &[usize]) -> Self {
        self.map(|p| p.apply_witt(m, acting))
    }

    pub fn pow(&self, n: u32) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut acc = Self::identity(self.rows, self.nvars);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Kronecker product with (i,j) indexed row-major, left factor outer.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rows * other.rows, self.cols * other.cols, self.nvars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i * other.rows + k, j * other.cols + l, a * b);
                    }
                }
            }
        }
        out
    }

    /// Stack blocks: `blocks[i][j]` becomes the (i,j) block.
    pub fn from_blocks(blocks: &[Vec<&PolyMat>]) -> Self {
        let nvars = blocks[0][0].nvars;
        let row_sizes: Vec<usize> = blocks.iter().map(|r| r[0].rows).collect();
        let col_sizes: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut out = Self::zero(rows, cols, nvars);
        let mut roff = 0;
        for (bi, brow) in blocks.iter().enumerate() {
            let mut coff = 0;
            for (bj, b) in brow.iter().enumerate() {
                assert_eq!(b.rows, row_sizes[bi]);
                assert_eq!(b.cols, col_sizes[bj]);
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        out.set(roff + i, coff + j, b.get(i, j).clone());
                    }
                }
                coff += b.cols;
            }
            roff += row_sizes[bi];
        }
        out
    }

    /// Determinant by fraction-free Bareiss elimination (entries stay
    /// polynomial at every step).
    pub fn det(&self) -> Result<Polynomial, Error> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Ok(Polynomial::one(self.nvars));
        }
        let mut a: Vec<Vec<Polynomial>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = 1i64;
        let mut prev = Polynomial::one(self.nvars);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Ok(Polynomial::zero(self.nvars));
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.exact_div(&prev)?;
                }
                a[i][k] = Polynomial::zero(self.nvars);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign < 0 { -&d } else { d })
    }

    /// Every entry homogeneous of q-degree `col_deg[j] + shift - row_deg[i]`.
    pub fn is_graded(&self, row_deg: &[i64], col_deg: &[i64], shift: i64) -> bool {
        assert_eq!(row_deg.len(), self.rows);
        assert_eq!(col_deg.len(), self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = col_deg[j] + shift - row_deg[i];
                if !self.get(i, j).is_homogeneous_of(want) {
                    return false;
                }
            }
        }
        true
    }

    /// Evaluate a polynomial at pairwise-commuting square matrices, sending
    /// variable `i` to `images[i]`. Constants map to multiples of the identity.
    pub fn eval_poly(p: &Polynomial, images: &[PolyMat]) -> PolyMat {
        assert!(!images.is_empty());
        let n = images[0].rows;
        let nvars = images[0].nvars;
        let mut out = PolyMat::zero(n, n, nvars);
        for (mono, c) in p.terms() {
            let mut term = PolyMat::identity(n, nvars).scale(c);
            for (v, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[v].pow(e as u32));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Matrix units convenience for tests.
    pub fn from_entries(rows: usize, cols: usize, nvars: usize, entries: Vec<Polynomial>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        for p in &entries {
            assert_eq!(p.nvars(), nvars);
        }
        PolyMat { rows, cols, nvars, data: entries }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.nvars, |i, j| self.get(j, i).clone())
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(rows: usize, nvars: usize, cols: &[Vec<Polynomial>]) -> Self {
        let mut m = Self::zero(rows, cols.len(), nvars);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, p) in col.iter().enumerate() {
                m.set(i, j, p.clone());
            }
        }
        m
    }

    /// True when the matrix is `c * identity` for a constant `c`.
    pub fn is_constant_diagonal(&self) -> Option<Rat> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0);
        if !c.is_constant() {
            return None;
        }
        let c = c.constant_coeff();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i == j {
                    if self.get(i, j) != &Polynomial::constant(self.nvars, c.clone()) {
                        return None;
                    }
                } else if !self.get(i, j).is_zero() {
                    return None;
                }
            }
        }
        Some(c)
    }
}
