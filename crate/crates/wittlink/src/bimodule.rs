//! W+-equivariant bimodules in free presentation.
//!
//! A bimodule is stored as a free module over the left variables: a graded
//! basis, one matrix per right variable giving its action on coordinate
//! columns, and connection matrices `D_0 .. D_M` so that the Witt generator
//! `L_m` acts on a coordinate column `p` as `L_m p + D_m p`.
//!
//! Conventions, used everywhere: coordinates are column vectors and every
//! action is `matrix * vector`. With that choice the structure equations are
//!
//! * right action is a ring action: `Y_j Y_l = Y_l Y_j`;
//! * semidirect Leibniz rule: `L_m(Y_j) + [D_m, Y_j] = Y_j^{m+1}`;
//! * representation: `L_m(D_n) - L_n(D_m) + [D_m, D_n] = (n-m) D_{m+n}`.

use crate::error::Error;
use crate::laurent::Laurent;
use crate::matrix::PolyMat;
use crate::poly::{Polynomial, VarSet};
use crate::witt::FlatSequence;
use serde_json::json;

/// Connection depth kept on every module; enough for `L_0 .. L_6`.
pub const CONN_DEPTH: u32 = 6;

#[derive(Debug, Clone)]
pub struct EquivariantBimodule {
    pub left_vars: VarSet,
    pub right_vars: VarSet,
    /// q-degrees of the basis elements, before the global shift.
    pub basis_qdeg: Vec<i64>,
    /// Right-variable action matrices over the left polynomial ring.
    pub y_action: Vec<PolyMat>,
    /// Connection matrices `D_m`, `m = 0 ..= CONN_DEPTH`.
    pub conn: Vec<PolyMat>,
    pub q_shift: i64,
    pub a_shift_doubled: i64,
}

impl EquivariantBimodule {
    pub fn rank(&self) -> usize {
        self.basis_qdeg.len()
    }

    pub fn nvars(&self) -> usize {
        self.left_vars.len()
    }

    /// q-degree of basis element `i` including the global shift.
    pub fn degree(&self, i: usize) -> i64 {
        self.basis_qdeg[i] + self.q_shift
    }

    pub fn conn_depth(&self) -> u32 {
        self.conn.len() as u32 - 1
    }

    fn acting(&self) -> Vec<usize> {
        (0..self.nvars()).collect()
    }

    /// q-rank as a Laurent polynomial in q.
    pub fn q_rank(&self) -> Laurent {
        let mut l = Laurent::zero();
        for i in 0..self.rank() {
            l.add_term(self.degree(i), 1);
        }
        l
    }

    /// Structural validity report; empty means all invariants hold up to the
    /// requested Witt depth.
    pub fn check(&self, m_max: u32) -> Vec<String> {
        let mut bad = Vec::new();
        let n = self.rank();
        let acting = self.acting();
        if self.y_action.len() != self.right_vars.len() {
            bad.push("one action matrix required per right variable".into());
            return bad;
        }
        for y in &self.y_action {
            if y.rows != n || y.cols != n {
                bad.push("action matrix shape mismatch".into());
                return bad;
            }
        }
        // Right action commutes.
        for j in 0..self.y_action.len() {
            for l in j + 1..self.y_action.len() {
                if !self.y_action[j].commutator(&self.y_action[l]).is_zero() {
                    bad.push(format!(
                        "right action does not commute: [{}, {}]",
                        self.right_vars.name(j),
                        self.right_vars.name(l)
                    ));
                }
            }
        }
        // Gradings.
        for (j, y) in self.y_action.iter().enumerate() {
            if !y.is_graded(&self.basis_qdeg, &self.basis_qdeg, 2) {
                bad.push(format!(
                    "action of {} is not homogeneous of q-degree 2",
                    self.right_vars.name(j)
                ));
            }
        }
        let depth = m_max.min(self.conn_depth());
        for m in 0..=depth {
            if !self.conn[m as usize].is_graded(&self.basis_qdeg, &self.basis_qdeg, 2 * m as i64) {
                bad.push(format!("D_{m} is not homogeneous of q-degree {}", 2 * m));
            }
        }
        // Leibniz compatibility: L_m(Y_j) + [D_m, Y_j] = Y_j^{m+1}.
        for m in 0..=depth {
            let dm = &self.conn[m as usize];
            for (j, y) in self.y_action.iter().enumerate() {
                let lhs = y.apply_witt(m, &acting).add(&dm.commutator(y));
                let rhs = y.pow(m + 1);
                if lhs != rhs {
                    bad.push(format!(
                        "equivariance fails for {} at m={m}",
                        self.right_vars.name(j)
                    ));
                }
            }
        }
        // Representation: L_m(D_n) - L_n(D_m) + [D_m, D_n] - (n-m) D_{m+n} = 0.
        for m in 0..=depth {
            for nn in 0..=depth.saturating_sub(m) {
                let dm = &self.conn[m as usize];
                let dn = &self.conn[nn as usize];
                let dmn = &self.conn[(m + nn) as usize];
                let defect = dn
                    .apply_witt(m, &acting)
                    .sub(&dm.apply_witt(nn, &acting))
                    .add(&dm.commutator(dn))
                    .sub(&dmn.scale(&crate::poly::rat(nn as i64 - m as i64)));
                if !defect.is_zero() {
                    bad.push(format!("connection curvature nonzero at (m,n)=({m},{nn})"));
                }
            }
        }
        bad
    }

    /// Shift the connection by a flat sequence over the left variables:
    /// `D_m' = D_m + a_m * I`. Rejects non-flat sequences.
    pub fn connection_shift(&self, a: &FlatSequence) -> Result<Self, Error> {
        let acting = self.acting();
        let depth = self.conn_depth().min(a.m_max());
        if !crate::witt::is_flat(a, &acting, depth)? {
            return Err(Error::NotFlat(0, 0));
        }
        let mut out = self.clone();
        out.conn = (0..=depth)
            .map(|m| {
                let am = a.term(m)?;
                Ok(self.conn[m as usize].add(&PolyMat::scalar(self.rank(), &am)))
            })
            .collect::<Result<_, Error>>()?;
        Ok(out)
    }

    pub fn q_shifted(&self, by: i64) -> Self {
        let mut out = self.clone();
        out.q_shift += by;
        out
    }

    pub fn a_shifted_doubled(&self, by: i64) -> Self {
        let mut out = self.clone();
        out.a_shift_doubled += by;
        out
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(self.left_vars, other.left_vars);
        assert_eq!(self.right_vars, other.right_vars);
        assert_eq!(self.a_shift_doubled, other.a_shift_doubled, "a-shifts must agree");
        let nv = self.nvars();
        let z12 = PolyMat::zero(self.rank(), other.rank(), nv);
        let z21 = PolyMat::zero(other.rank(), self.rank(), nv);
        let block = |a: &PolyMat, b: &PolyMat| PolyMat::from_blocks(&[vec![a, &z12], vec![&z21, b]]);
        let basis_qdeg = self
            .basis_qdeg
            .iter()
            .map(|d| d + self.q_shift)
            .chain(other.basis_qdeg.iter().map(|d| d + other.q_shift))
            .collect();
        EquivariantBimodule {
            left_vars: self.left_vars.clone(),
            right_vars: self.right_vars.clone(),
            basis_qdeg,
            y_action: self
                .y_action
                .iter()
                .zip(&other.y_action)
                .map(|(a, b)| block(a, b))
                .collect(),
            conn: self
                .conn
                .iter()
                .zip(&other.conn)
                .map(|(a, b)| block(a, b))
                .collect(),
            q_shift: 0,
            a_shift_doubled: self.a_shift_doubled,
        }
    }

    /// Tensor product over the middle variables: `M(x;y) (x) N(y;z)` with the
    /// Leibniz Witt action. Middle variables are eliminated by evaluating N's
    /// polynomial data at M's commuting right-action matrices. Basis pairs
    /// `(i, j)` are flattened row-major with the left factor outer.
    pub fn tensor_middle(&self, other: &Self) -> Result<Self, Error> {
        if self.right_vars != other.left_vars {
            return Err(Error::VariableMismatch(format!(
                "tensor: right vars {:?} vs left vars {:?}",
                self.right_vars.names(),
                other.left_vars.names()
            )));
        }
        let rm = self.rank();
        let rn = other.rank();
        let nv = self.nvars();
        let depth = self.conn_depth().min(other.conn_depth());
        let eval = |p: &Polynomial| PolyMat::eval_poly(p, &self.y_action);

        // Right action of z_l: block (j', j) is N's entry evaluated at Y^M.
        let mut y_action = Vec::with_capacity(other.right_vars.len());
        for zl in &other.y_action {
            let mut mat = PolyMat::zero(rm * rn, rm * rn, nv);
            for jp in 0..rn {
                for j in 0..rn {
                    let e = zl.get(jp, j);
                    if e.is_zero() {
                        continue;
                    }
                    let blk = eval(e);
                    for ip in 0..rm {
                        for i in 0..rm {
                            let v = blk.get(ip, i);
                            if !v.is_zero() {
                                mat.set(ip * rn + jp, i * rn + j, v.clone());
                            }
                        }
                    }
                }
            }
            y_action.push(mat);
        }

        // Connection: D_m (x) I + (D_m^N evaluated through Y^M).
        let mut conn = Vec::with_capacity(depth as usize + 1);
        for m in 0..=depth as usize {
            let mut mat = PolyMat::zero(rm * rn, rm * rn, nv);
            // left part
            for ip in 0..rm {
                for i in 0..rm {
                    let v = self.conn[m].get(ip, i);
                    if v.is_zero() {
                        continue;
                    }
                    for j in 0..rn {
                        mat.set(ip * rn + j, i * rn + j, v.clone());
                    }
                }
            }
            // right part, transported
            for jp in 0..rn {
                for j in 0..rn {
                    let e = other.conn[m].get(jp, j);
                    if e.is_zero() {
                        continue;
                    }
                    let blk = eval(e);
                    for ip in 0..rm {
                        for i in 0..rm {
                            let v = blk.get(ip, i);
                            if !v.is_zero() {
                                let cur = mat.get(ip * rn + jp, i * rn + j).clone();
                                mat.set(ip * rn + jp, i * rn + j, &cur + v);
                            }
                        }
                    }
                }
            }
            conn.push(mat);
        }

        let mut basis_qdeg = Vec::with_capacity(rm * rn);
        for i in 0..rm {
            for j in 0..rn {
                basis_qdeg.push(self.basis_qdeg[i] + other.basis_qdeg[j]);
            }
        }

        Ok(EquivariantBimodule {
            left_vars: self.left_vars.clone(),
            right_vars: other.right_vars.clone(),
            basis_qdeg,
            y_action,
            conn,
            q_shift: self.q_shift + other.q_shift,
            a_shift_doubled: self.a_shift_doubled + other.a_shift_doubled,
        })
    }

    /// Rename the variable sets without touching the data.
    pub fn renamed(&self, left: VarSet, right: VarSet) -> Self {
        assert_eq!(left.len(), self.left_vars.len());
        assert_eq!(right.len(), self.right_vars.len());
        let mut out = self.clone();
        out.left_vars = left;
        out.right_vars = right;
        out
    }

    /// Deterministic JSON document for fixtures and interchange.
    pub fn to_json(&self) -> serde_json::Value {
        let mat = |m: &PolyMat| -> serde_json::Value {
            let rows: Vec<Vec<String>> = (0..m.rows)
                .map(|i| {
                    (0..m.cols)
                        .map(|j| m.get(i, j).display(&self.left_vars).to_string())
                        .collect()
                })
                .collect();
            json!(rows)
        };
        json!({
            "schema": 1,
            "left_vars": self.left_vars.names(),
            "right_vars": self.right_vars.names(),
            "basis_qdeg": self.basis_qdeg,
            "q_shift": self.q_shift,
            "a_shift_doubled": self.a_shift_doubled,
            "y_action": self.y_action.iter().map(mat).collect::<Vec<_>>(),
            "conn": self.conn.iter().map(mat).collect::<Vec<_>>(),
        })
    }
}

/// Connection matrices of a cyclic module: basis element `i` is the class of
/// the right-variable monomial `labels[i]` (with `labels[0] = 1`), and `D_m`
/// applies the Witt derivation to those representatives through the action
/// matrices.
pub fn cyclic_connection(labels: &[Polynomial], y_action: &[PolyMat], depth: u32) -> Vec<PolyMat> {
    assert!(!y_action.is_empty());
    let rank = y_action[0].rows;
    let nv = y_action[0].nvars();
    assert_eq!(labels.len(), rank);
    let acting: Vec<usize> = (0..labels[0].nvars()).collect();
    let mut e1 = vec![Polynomial::zero(nv); rank];
    e1[0] = Polynomial::one(nv);
    (0..=depth)
        .map(|m| {
            let cols: Vec<Vec<Polynomial>> = labels
                .iter()
                .map(|mu| {
                    let lm = mu.apply_witt(m, &acting);
                    let mat = PolyMat::eval_poly(&lm, y_action);
                    (0..rank).map(|i| mat.get(i, 0).clone()).collect()
                })
                .collect();
            PolyMat::from_columns(rank, nv, &cols)
        })
        .collect()
}

/// A homomorphism of equivariant bimodules, as a matrix on coordinate columns.
#[derive(Debug, Clone)]
pub struct BimoduleHom {
    pub source: EquivariantBimodule,
    pub target: EquivariantBimodule,
    pub matrix: PolyMat,
    /// q-degree of the map: image of a degree-d element has degree `d + q_shift`.
    pub q_shift: i64,
    pub a_shift_doubled: i64,
}

impl BimoduleHom {
    pub fn new(source: EquivariantBimodule, target: EquivariantBimodule, matrix: PolyMat) -> Self {
        assert_eq!(matrix.rows, target.rank());
        assert_eq!(matrix.cols, source.rank());
        BimoduleHom {
            source,
            target,
            matrix,
            q_shift: 0,
            a_shift_doubled: 0,
        }
    }

    pub fn identity(m: &EquivariantBimodule) -> Self {
        Self::new(m.clone(), m.clone(), PolyMat::identity(m.rank(), m.nvars()))
    }

    pub fn with_q_shift(mut self, q: i64) -> Self {
        self.q_shift = q;
        self
    }

    /// Intertwining report; empty means the map is a valid W+-equivariant
    /// bimodule homomorphism up to the requested depth.
    pub fn check(&self, m_max: u32) -> Vec<String> {
        let mut bad = Vec::new();
        let acting: Vec<usize> = (0..self.source.nvars()).collect();
        if self.source.right_vars != self.target.right_vars {
            bad.push("source and target right variables differ".into());
            return bad;
        }
        for (j, (ys, yt)) in self
            .source
            .y_action
            .iter()
            .zip(&self.target.y_action)
            .enumerate()
        {
            if self.matrix.mul(ys) != yt.mul(&self.matrix) {
                bad.push(format!(
                    "does not intertwine the action of {}",
                    self.source.right_vars.name(j)
                ));
            }
        }
        let depth = m_max
            .min(self.source.conn_depth())
            .min(self.target.conn_depth());
        for m in 0..=depth {
            let ds = &self.source.conn[m as usize];
            let dt = &self.target.conn[m as usize];
            let defect = self
                .matrix
                .apply_witt(m, &acting)
                .add(&dt.mul(&self.matrix))
                .sub(&self.matrix.mul(ds));
            if !defect.is_zero() {
                bad.push(format!("does not intertwine L_{m}"));
            }
        }
        // Grading audit.
        let src: Vec<i64> = (0..self.source.rank()).map(|i| self.source.degree(i)).collect();
        let tgt: Vec<i64> = (0..self.target.rank()).map(|i| self.target.degree(i)).collect();
        if !self.matrix.is_graded(&tgt, &src, self.q_shift) {
            bad.push(format!("matrix is not homogeneous of q-degree {}", self.q_shift));
        }
        bad
    }

    pub fn compose(&self, inner: &Self) -> Self {
        BimoduleHom {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&inner.matrix),
            q_shift: self.q_shift + inner.q_shift,
            a_shift_doubled: self.a_shift_doubled + inner.a_shift_doubled,
        }
    }

    pub fn scale(&self, c: &crate::poly::Rat) -> Self {
        let mut out = self.clone();
        out.matrix = out.matrix.scale(c);
        out
    }
}

/// Tensor of homomorphisms over the middle variables, matching the basis
/// order of [`EquivariantBimodule::tensor_middle`]. `g`'s entries live over
/// the middle ring and are transported through the Y-matrices of `f`'s target.
pub fn hom_tensor(f: &BimoduleHom, g: &BimoduleHom) -> Result<BimoduleHom, Error> {
    let source = f.source.tensor_middle(&g.source)?;
    let target = f.target.tensor_middle(&g.target)?;
    let rm_t = f.target.rank();
    let rn_t = g.target.rank();
    let rm_s = f.source.rank();
    let rn_s = g.source.rank();
    let nv = f.source.nvars();
    let mut mat = PolyMat::zero(rm_t * rn_t, rm_s * rn_s, nv);
    for jp in 0..rn_t {
        for j in 0..rn_s {
            let e = g.matrix.get(jp, j);
            if e.is_zero() {
                continue;
            }
            let blk = PolyMat::eval_poly(e, &f.target.y_action).mul(&f.matrix);
            for ip in 0..rm_t {
                for i in 0..rm_s {
                    let v = blk.get(ip, i);
                    if !v.is_zero() {
                        mat.set(ip * rn_t + jp, i * rn_s + j, v.clone());
                    }
                }
            }
        }
    }
    let mut out = BimoduleHom::new(source, target, mat);
    out.q_shift = f.q_shift + g.q_shift;
    out.a_shift_doubled = f.a_shift_doubled + g.a_shift_doubled;
    Ok(out)
}

/// Check that `u` is an isomorphism witnessing `a ~ b`: invertible over the
/// polynomial ring (constant nonzero determinant) and intertwining.
pub fn is_isomorphic_via(a: &EquivariantBimodule, b: &EquivariantBimodule, u: &PolyMat, m_max: u32) -> bool {
    let hom = BimoduleHom::new(a.clone(), b.clone(), u.clone());
    if !hom.check(m_max).is_empty() {
        return false;
    }
    match u.det() {
        Ok(d) => d.is_constant() && !d.is_zero(),
        Err(_) => false,
    }
}
