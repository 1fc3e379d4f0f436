//! Exact linear algebra over the rationals: row reduction, kernels, and
//! deterministic basis completion. Pivoting is by position (first nonzero),
//! so every result is a deterministic function of the input.

use crate::poly::Rat;
use num_traits::Zero;

/// Dense column vector.
pub type QVec = Vec<Rat>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn from_columns(rows: usize, cols: &[QVec]) -> Self {
        let mut m = Self::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m.set(i, j, c[i].clone());
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> QVec {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Rat]) -> QVec {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Rat::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = Rat::zero();
            for j in 0..self.cols {
                let a = self.get(i, j);
                if !a.is_zero() && !v[j].is_zero() {
                    acc += a * &v[j];
                }
            }
            out[i] = acc;
        }
        out
    }

    pub fn rank(&self) -> usize {
        Echelon::from_columns(self.rows, (0..self.cols).map(|j| self.column(j))).dim()
    }

    /// Basis of the kernel, deterministic in the column order.
    pub fn nullspace(&self) -> Vec<QVec> {
        // Row-reduce a working copy.
        let mut a = self.clone();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut r = 0usize;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..a.cols {
                    let tmp = a.get(p, j).clone();
                    a.set(p, j, a.get(r, j).clone());
                    a.set(r, j, tmp);
                }
            }
            let inv = {
                let piv = a.get(r, c).clone();
                piv.recip()
            };
            for j in c..a.cols {
                let v = a.get(r, j) * &inv;
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i != r && !a.get(i, c).is_zero() {
                    let f = a.get(i, c).clone();
                    for j in c..a.cols {
                        let v = a.get(i, j) - &(&f * a.get(r, j));
                        a.set(i, j, v);
                    }
                }
            }
            pivots.push((r, c));
            r += 1;
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for f in 0..a.cols {
            if pivot_cols.contains(&f) {
                continue;
            }
            let mut v = vec![Rat::zero(); a.cols];
            v[f] = Rat::from_integer(1.into());
            for &(pr, pc) in &pivots {
                v[pc] = -a.get(pr, f).clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// Incremental row-echelon store for column vectors: tracks a growing
/// independent set and reduces new vectors against it.
pub struct Echelon {
    dim: usize,
    /// (pivot position, normalized vector) sorted by insertion
    rows: Vec<(usize, QVec)>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new() }
    }

    pub fn from_columns(dim: usize, cols: impl IntoIterator<Item = QVec>) -> Self {
        let mut e = Self::new(dim);
        for c in cols {
            e.try_add(c);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the stored vectors.
    pub fn reduce(&self, mut v: QVec) -> QVec {
        assert_eq!(v.len(), self.dim);
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for i in 0..self.dim {
                    if !row[i].is_zero() {
                        v[i] = &v[i] - &(&f * &row[i]);
                    }
                }
            }
        }
        v
    }

    /// Add `v` if independent; returns true when the rank grew.
    pub fn try_add(&mut self, v: QVec) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].clone().recip();
        let norm: QVec = r.iter().map(|x| x * &inv).collect();
        self.rows.push((p, norm));
        true
    }

    pub fn contains(&self, v: QVec) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }
}

/// Solves `A x = b` for a matrix with independent columns, precomputing the
/// elimination once. Used to express cycles in a chosen (boundary, homology)
/// basis.
pub struct ColumnSolver {
    n_rows: usize,
    n_cols: usize,
    /// Echelon rows over the augmented space: each is (pivot, vector, coeffs)
    /// with `vector = reduced column`, `coeffs` expressing it in A's columns.
    elim: Vec<(usize, QVec, QVec)>,
}

impl ColumnSolver {
    /// `cols` must be linearly independent.
    pub fn new(n_rows: usize, cols: &[QVec]) -> Self {
        let n_cols = cols.len();
        let mut elim: Vec<(usize, QVec, QVec)> = Vec::new();
        for (j, c) in cols.iter().enumerate() {
            let mut v = c.clone();
            let mut co = vec![Rat::zero(); n_cols];
            co[j] = Rat::from_integer(1.into());
            for (p, row, rco) in &elim {
                if !v[*p].is_zero() {
                    let f = v[*p].clone();
                    for i in 0..n_rows {
                        if !row[i].is_zero() {
                            v[i] = &v[i] - &(&f * &row[i]);
                        }
                    }
                    for i in 0..n_cols {
                        if !rco[i].is_zero() {
                            co[i] = &co[i] - &(&f * &rco[i]);
                        }
                    }
                }
            }
            let p = v
                .iter()
                .position(|x| !x.is_zero())
                .expect("ColumnSolver: dependent columns");
            let inv = v[p].clone().recip();
            let v: QVec = v.iter().map(|x| x * &inv).collect();
            let co: QVec = co.iter().map(|x| x * &inv).collect();
            elim.push((p, v, co));
        }
        ColumnSolver { n_rows, n_cols, elim }
    }

    /// Coordinates of `b` in the column basis; `None` when `b` is outside the
    /// column span.
    pub fn solve(&self, b: &[Rat]) -> Option<QVec> {
        assert_eq!(b.len(), self.n_rows);
        let mut v = b.to_vec();
        let mut co = vec![Rat::zero(); self.n_cols];
        for (p, row, rco) in &self.elim {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for i in 0..self.n_rows {
                    if !row[i].is_zero() {
                        v[i] = &v[i] - &(&f * &row[i]);
                    }
                }
                for i in 0..self.n_cols {
                    if !rco[i].is_zero() {
                        co[i] = &co[i] + &(&f * &rco[i]);
                    }
                }
            }
        }
        if v.iter().all(|x| x.is_zero()) {
            Some(co)
        } else {
            None
        }
    }
}
