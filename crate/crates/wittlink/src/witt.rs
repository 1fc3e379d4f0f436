//! Flat connection sequences and their curvature.
//!
//! A sequence `a_0, a_1, ...` of polynomials is flat when
//! `L_m a_n - L_n a_m - (n-m) a_{m+n} = 0` for all m, n. Flat sequences shift
//! the Witt action on a module without breaking the commutation relations.
//! The two closed-form families are `pi'_m(x) = (m+1) x^m` and
//! `pi_m(x,y) = (y^{m+1} - x^{m+1})/(y - x)`.

use crate::error::Error;
use crate::matrix::PolyMat;
use crate::poly::{rat, Polynomial, Rat};

#[derive(Debug, Clone)]
pub enum SeqRule {
    /// `pi'(x)`: m-th term `(m+1) x^m`.
    PiPrime(usize),
    /// `pi(x, y)`: m-th term `sum_{i=0..m} x^i y^{m-i}`.
    Pi(usize, usize),
    /// Rational linear combination of flat sequences.
    Linear(Vec<(Rat, FlatSequence)>),
    /// Eagerly stored terms, index 0 first.
    Explicit(Vec<Polynomial>),
}

#[derive(Debug, Clone)]
pub struct FlatSequence {
    nvars: usize,
    rule: SeqRule,
    m_max: u32,
}

pub const DEFAULT_M_MAX: u32 = 6;

impl FlatSequence {
    pub fn pi_prime(nvars: usize, var: usize) -> Self {
        FlatSequence {
            nvars,
            rule: SeqRule::PiPrime(var),
            m_max: DEFAULT_M_MAX,
        }
    }

    pub fn pi(nvars: usize, a: usize, b: usize) -> Self {
        FlatSequence {
            nvars,
            rule: SeqRule::Pi(a, b),
            m_max: DEFAULT_M_MAX,
        }
    }

    pub fn linear(parts: Vec<(Rat, FlatSequence)>) -> Self {
        assert!(!parts.is_empty());
        let nvars = parts[0].1.nvars;
        let m_max = parts.iter().map(|(_, s)| s.m_max).min().unwrap();
        FlatSequence {
            nvars,
            rule: SeqRule::Linear(parts),
            m_max,
        }
    }

    pub fn explicit(terms: Vec<Polynomial>) -> Self {
        assert!(!terms.is_empty());
        let nvars = terms[0].nvars();
        let m_max = terms.len() as u32 - 1;
        FlatSequence {
            nvars,
            rule: SeqRule::Explicit(terms),
            m_max,
        }
    }

    pub fn zero(nvars: usize, m_max: u32) -> Self {
        FlatSequence {
            nvars,
            rule: SeqRule::Explicit(vec![Polynomial::zero(nvars); m_max as usize + 1]),
            m_max,
        }
    }

    pub fn negate(&self) -> Self {
        FlatSequence::linear(vec![(rat(-1), self.clone())])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn m_max(&self) -> u32 {
        self.m_max
    }

    /// The m-th term of the sequence.
    pub fn term(&self, m: u32) -> Result<Polynomial, Error> {
        if m > self.m_max {
            return Err(Error::Truncated {
                index: m,
                max: self.m_max,
            });
        }
        Ok(match &self.rule {
            SeqRule::PiPrime(v) => {
                let mut exps = vec![0u16; self.nvars];
                exps[*v] = m as u16;
                Polynomial::monomial(self.nvars, &exps, rat(m as i64 + 1))
            }
            SeqRule::Pi(a, b) => {
                let mut p = Polynomial::zero(self.nvars);
                for i in 0..=m {
                    let mut exps = vec![0u16; self.nvars];
                    exps[*a] += i as u16;
                    exps[*b] += (m - i) as u16;
                    p.add_term(crate::poly::Monomial(exps), rat(1));
                }
                p
            }
            SeqRule::Linear(parts) => {
                let mut p = Polynomial::zero(self.nvars);
                for (c, s) in parts {
                    p = &p + &s.term(m)?.scale(c);
                }
                p
            }
            SeqRule::Explicit(terms) => terms[m as usize].clone(),
        })
    }

    /// Short description used in reports ("pi'(x1)", "pi(x1,x2)", ...).
    pub fn describe(&self, names: &crate::poly::VarSet) -> String {
        match &self.rule {
            SeqRule::PiPrime(v) => format!("pi'({})", names.name(*v)),
            SeqRule::Pi(a, b) => format!("pi({},{})", names.name(*a), names.name(*b)),
            SeqRule::Linear(parts) => parts
                .iter()
                .map(|(c, s)| format!("{}*{}", c, s.describe(names)))
                .collect::<Vec<_>>()
                .join(" + "),
            SeqRule::Explicit(_) => "explicit".to_string(),
        }
    }
}

/// Curvature `L_m a_n - L_n a_m - (n-m) a_{m+n}` of a scalar sequence.
pub fn curvature_scalar(
    s: &FlatSequence,
    m: u32,
    n: u32,
    acting: &[usize],
) -> Result<Polynomial, Error> {
    let am = s.term(m)?;
    let an = s.term(n)?;
    let amn = s.term(m + n)?;
    let lhs = &an.apply_witt(m, acting) - &am.apply_witt(n, acting);
    Ok(&lhs - &amn.scale(&rat(n as i64 - m as i64)))
}

/// True when all curvatures with `m + n <= upto` vanish.
pub fn is_flat(s: &FlatSequence, acting: &[usize], upto: u32) -> Result<bool, Error> {
    for m in 0..=upto {
        for n in 0..=(upto - m) {
            if !curvature_scalar(s, m, n, acting)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A sequence of square matrices `A_0, A_1, ...` describing a Witt action on
/// the generators of a free module: `L_m` acts on the coefficient vector as
/// `L_m + A_m`.
#[derive(Debug, Clone)]
pub struct ConnectionMatrixSeq {
    pub size: usize,
    mats: Vec<PolyMat>,
}

impl ConnectionMatrixSeq {
    pub fn new(mats: Vec<PolyMat>) -> Self {
        assert!(!mats.is_empty());
        let size = mats[0].rows;
        for m in &mats {
            assert!(m.rows == size && m.cols == size);
        }
        ConnectionMatrixSeq { size, mats }
    }

    pub fn zero(size: usize, nvars: usize, m_max: u32) -> Self {
        Self::new(vec![PolyMat::zero(size, size, nvars); m_max as usize + 1])
    }

    pub fn m_max(&self) -> u32 {
        self.mats.len() as u32 - 1
    }

    pub fn term(&self, m: u32) -> Result<&PolyMat, Error> {
        self.mats.get(m as usize).ok_or(Error::Truncated {
            index: m,
            max: self.m_max(),
        })
    }
}

/// Matrix curvature `L_m A_n - L_n A_m + [A_n, A_m] - (n-m) A_{m+n}` for a
/// sequence of matrices satisfying `L_m p = A_m p` on a column of relations.
/// Zero curvature makes the associated Koszul action a Witt representation;
/// even without it, the curvature annihilates the relation column.
pub fn curvature_matrix(
    a: &ConnectionMatrixSeq,
    m: u32,
    n: u32,
    acting: &[usize],
) -> Result<PolyMat, Error> {
    let am = a.term(m)?;
    let an = a.term(n)?;
    let amn = a.term(m + n)?;
    let out = an
        .apply_witt(m, acting)
        .sub(&am.apply_witt(n, acting))
        .add(&an.commutator(am))
        .sub(&amn.scale(&rat(n as i64 - m as i64)));
    Ok(out)
}

/// Gauge construction: when `L_m p = a_m p` has polynomial solutions `a_m`,
/// the sequence `a` is flat. Errors out at the first index where the division
/// is not exact.
pub fn flat_from_gauge(
    p: &Polynomial,
    acting: &[usize],
    m_max: u32,
) -> Result<FlatSequence, Error> {
    assert!(!p.is_zero());
    let mut terms = Vec::with_capacity(m_max as usize + 1);
    for m in 0..=m_max {
        let lp = p.apply_witt(m, acting);
        let am = lp
            .exact_div(p)
            .map_err(|_| Error::GaugeNonDivisible { m })?;
        terms.push(am);
    }
    Ok(FlatSequence::explicit(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarSet;
    use proptest::prelude::*;

    const X: usize = 0;
    const Y: usize = 1;

    #[test]
    fn sequence_terms() {
        let pp = FlatSequence::pi_prime(1, 0);
        // (m+1) x^m at m=1 is 2x
        assert_eq!(pp.term(1).unwrap(), Polynomial::var(1, 0).scale(&rat(2)));
        let pi = FlatSequence::pi(2, X, Y);
        assert_eq!(pi.term(0).unwrap(), Polynomial::one(2));
        let x = Polynomial::var(2, X);
        let y = Polynomial::var(2, Y);
        assert_eq!(pi.term(1).unwrap(), &x + &y);
        // pi_2 = x^2 + xy + y^2
        assert_eq!(pi.term(2).unwrap(), &(&x.pow(2) + &(&x * &y)) + &y.pow(2));
    }

    #[test]
    fn truncation_error() {
        let pp = FlatSequence::pi_prime(1, 0);
        assert!(matches!(
            pp.term(DEFAULT_M_MAX + 1),
            Err(Error::Truncated { .. })
        ));
    }

    #[test]
    fn builtin_sequences_are_flat() {
        let pp = FlatSequence::pi_prime(1, 0);
        assert!(curvature_scalar(&pp, 1, 2, &[0]).unwrap().is_zero());
        assert!(is_flat(&pp, &[0], 6).unwrap());
        let pi = FlatSequence::pi(2, X, Y);
        assert!(curvature_scalar(&pi, 2, 3, &[X, Y]).unwrap().is_zero());
        assert!(is_flat(&pi, &[X, Y], 6).unwrap());
    }

    #[test]
    fn explicit_nonflat_curvature() {
        // a_0 = 0, a_1 = x^2: curvature(0,1) = L_0 x^2 - 0 - x^2 = x^2
        let x = Polynomial::var(1, 0);
        let s = FlatSequence::explicit(vec![Polynomial::zero(1), x.pow(2)]);
        assert_eq!(curvature_scalar(&s, 0, 1, &[0]).unwrap(), x.pow(2));
    }

    #[test]
    fn gauge_reproduces_pi() {
        let x = Polynomial::var(2, X);
        let y = Polynomial::var(2, Y);
        let g = flat_from_gauge(&(&y - &x), &[X, Y], 4).unwrap();
        let pi = FlatSequence::pi(2, X, Y);
        for m in 0..=4 {
            assert_eq!(g.term(m).unwrap(), pi.term(m).unwrap());
        }
        // gauge of a unit is the zero sequence
        let one = Polynomial::one(1);
        let z = flat_from_gauge(&one, &[0], 4).unwrap();
        for m in 0..=4 {
            assert!(z.term(m).unwrap().is_zero());
        }
        // x + y admits no gauge: L_1(x+y) = x^2+y^2 is not a multiple
        let err = flat_from_gauge(&(&x + &y), &[X, Y], 2);
        assert!(matches!(err, Err(Error::GaugeNonDivisible { m: 1 })));
    }

    #[test]
    fn matrix_curvature_cases() {
        // all-zero connection
        let z = ConnectionMatrixSeq::zero(2, 2, 6);
        assert!(curvature_matrix(&z, 1, 2, &[X, Y]).unwrap().is_zero());
        // scalar flat sequence times identity
        let pi = FlatSequence::pi(2, X, Y);
        let mats: Vec<PolyMat> = (0..=6)
            .map(|m| PolyMat::scalar(3, &pi.term(m).unwrap()))
            .collect();
        let a = ConnectionMatrixSeq::new(mats);
        for m in 0..=3 {
            for n in 0..=3 {
                assert!(curvature_matrix(&a, m, n, &[X, Y]).unwrap().is_zero());
            }
        }
        // entrywise gauge of p = y - x placed on a diagonal
        let g = flat_from_gauge(
            &(&Polynomial::var(2, Y) - &Polynomial::var(2, X)),
            &[X, Y],
            6,
        )
        .unwrap();
        let mats: Vec<PolyMat> = (0..=6)
            .map(|m| PolyMat::scalar(2, &g.term(m).unwrap()))
            .collect();
        let a = ConnectionMatrixSeq::new(mats);
        for m in 0..=3u32 {
            for n in 0..=3u32 {
                assert!(curvature_matrix(&a, m, n, &[X, Y]).unwrap().is_zero());
            }
        }
    }

    /// Matrices that satisfy `L_m p = A_m p` without being flat still have
    /// curvature annihilating the relation column.
    #[test]
    fn weak_relation_on_nonflat_gauge() {
        // Variables x1, x2, y1, y2; relations p_i = y_i - x_i.
        let nv = 4;
        let acting: Vec<usize> = (0..4).collect();
        let x1 = Polynomial::var(nv, 0);
        let x2 = Polynomial::var(nv, 1);
        let y1 = Polynomial::var(nv, 2);
        let y2 = Polynomial::var(nv, 3);
        let p1 = &y1 - &x1;
        let p2 = &y2 - &x2;
        // Diagonal gauge pi_m(x_i, y_i) plus a perturbation that kills (p1, p2).
        let g1 = flat_from_gauge(&p1, &acting, 6).unwrap();
        let g2 = flat_from_gauge(&p2, &acting, 6).unwrap();
        let perturb = |m: u32| -> PolyMat {
            // degree-(m-1) multiplier; zero at m = 0
            if m == 0 {
                return PolyMat::zero(2, 2, nv);
            }
            let gmul = x1.pow(m - 1);
            PolyMat::from_entries(
                2,
                2,
                nv,
                vec![
                    &(-&p2) * &gmul,
                    &p1 * &gmul,
                    Polynomial::zero(nv),
                    Polynomial::zero(nv),
                ],
            )
        };
        let mats: Vec<PolyMat> = (0..=6u32)
            .map(|m| {
                PolyMat::from_entries(
                    2,
                    2,
                    nv,
                    vec![
                        g1.term(m).unwrap(),
                        Polynomial::zero(nv),
                        Polynomial::zero(nv),
                        g2.term(m).unwrap(),
                    ],
                )
                .add(&perturb(m))
            })
            .collect();
        let a = ConnectionMatrixSeq::new(mats.clone());
        // Check the defining relation L_m p = A_m p.
        for m in 0..=3u32 {
            let lp1 = p1.apply_witt(m, &acting);
            let lp2 = p2.apply_witt(m, &acting);
            let a_m = a.term(m).unwrap();
            let r1 = &(&(a_m.get(0, 0) * &p1) + &(a_m.get(0, 1) * &p2)) - &lp1;
            let r2 = &(&(a_m.get(1, 0) * &p1) + &(a_m.get(1, 1) * &p2)) - &lp2;
            assert!(r1.is_zero() && r2.is_zero());
        }
        // Not flat...
        let f12 = curvature_matrix(&a, 1, 2, &acting).unwrap();
        assert!(!f12.is_zero());
        // ...but the curvature annihilates the relation column.
        for m in 0..=2u32 {
            for n in 0..=2u32 {
                let f = curvature_matrix(&a, m, n, &acting).unwrap();
                let r1 = &(f.get(0, 0) * &p1) + &(f.get(0, 1) * &p2);
                let r2 = &(f.get(1, 0) * &p1) + &(f.get(1, 1) * &p2);
                assert!(r1.is_zero() && r2.is_zero());
            }
        }
    }

    #[test]
    fn describe_names() {
        let vars = VarSet::new(vec!["x1", "x2"]);
        let s = FlatSequence::pi(2, 0, 1);
        assert_eq!(s.describe(&vars), "pi(x1,x2)");
    }

    proptest! {
        /// A rational combination of flat sequences is flat.
        #[test]
        fn linear_combination_flat(num in -5i64..=5, den in 1i64..=4, m in 0u32..=3, n in 0u32..=3) {
            let pi = FlatSequence::pi(2, X, Y);
            // pi'(x) viewed inside Q[x, y]
            let ppx = FlatSequence::pi_prime(2, X);
            let comb = FlatSequence::linear(vec![
                (crate::poly::ratio(num, den), pi),
                (rat(1), ppx),
            ]);
            let c = curvature_scalar(&comb, m, n, &[X, Y]).unwrap();
            prop_assert!(c.is_zero());
        }
    }
}
