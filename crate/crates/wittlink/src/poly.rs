//! Exact sparse multivariate polynomials over the rationals.
//!
//! Every variable carries q-degree 2, so the q-degree of a monomial is twice
//! its total degree. Coefficients are arbitrary-precision rationals; the
//! positive half of the Witt algebra acts through [`Polynomial::apply_witt`].

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Error;

/// Shared rational type used throughout the crate.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Rational from a fraction.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// An ordered list of variable names. The order fixes the exponent layout of
/// every polynomial built over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = std::collections::BTreeSet::new();
        for n in &names {
            assert!(seen.insert(n.clone()), "duplicate variable {n}");
        }
        VarSet { names }
    }

    /// Variables `x1..xn`.
    pub fn strands(prefix: &str, n: usize) -> Self {
        VarSet::new((1..=n).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Dense exponent vector, one entry per variable of the ambient `VarSet`.
/// Ordered by total degree first, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn constant(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// Componentwise division; `None` when not divisible.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = Vec::with_capacity(self.0.len());
        for (&a, &b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            e.push(a - b);
        }
        Some(Monomial(e))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse polynomial in canonical form: no zero coefficients, terms kept in
/// graded-lexicographic order by the `BTreeMap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::constant(nvars), c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range");
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), Rat::one());
        p
    }

    pub fn monomial(nvars: usize, exps: &[u16], c: Rat) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial(exps.to_vec()), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    /// The constant term.
    pub fn constant_coeff(&self) -> Rat {
        self.terms
            .get(&Monomial::constant(self.nvars))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// q-degree of a homogeneous polynomial; every variable has q-degree 2.
    pub fn q_degree(&self) -> i64 {
        2 * self.total_degree() as i64
    }

    /// All terms share the same total degree (zero counts as homogeneous).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.total_degree());
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    /// True when the polynomial is homogeneous of the given q-degree
    /// (the zero polynomial is homogeneous of every degree).
    pub fn is_homogeneous_of(&self, qdeg: i64) -> bool {
        self.is_zero() || (self.is_homogeneous() && self.q_degree() == qdeg)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Leading (greatest) term under graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Action of the Witt generator `L_m = sum_i v^{m+1} d/dv` over the given
    /// variable indices. Raises q-degree by exactly `2m` on homogeneous input.
    pub fn apply_witt(&self, m: u32, acting: &[usize]) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (mono, c) in &self.terms {
            for &v in acting {
                let e = mono.0[v];
                if e == 0 {
                    continue;
                }
                // v^{m+1} * d/dv (c * mono) = c*e * v^m * mono
                let mut exps = mono.0.clone();
                exps[v] = e + m as u16;
                out.add_term(Monomial(exps), c * rat(e as i64));
            }
        }
        out
    }

    /// Substitute each variable by the polynomial `image(i)`; images must all
    /// share one variable count.
    pub fn substitute(&self, image: &dyn Fn(usize) -> Polynomial, out_nvars: usize) -> Polynomial {
        let mut out = Polynomial::zero(out_nvars);
        for (mono, c) in &self.terms {
            let mut term = Polynomial::constant(out_nvars, c.clone());
            for (i, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    term = &term * &image(i).pow(e as u32);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Swap two variables everywhere.
    pub fn swap_vars(&self, a: usize, b: usize) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.swap(a, b);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Exact division by `d`. Returns `Err(Error::NonDivisible)` when `self`
    /// is not a polynomial multiple of `d`.
    pub fn exact_div(&self, d: &Polynomial) -> Result<Polynomial, Error> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        let (dm, dc) = {
            let (m, c) = d.leading().unwrap();
            (m.clone(), c.clone())
        };
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.leading().unwrap();
                (m.clone(), c.clone())
            };
            let Some(qm) = rm.div(&dm) else {
                return Err(Error::NonDivisible);
            };
            let qc = &rc / &dc;
            quot.add_term(qm.clone(), qc.clone());
            rem = &rem - &d.mul_monomial(&qm, &qc);
        }
        Ok(quot)
    }

    /// Render against a variable set; canonical: graded-lex descending.
    pub fn display<'a>(&'a self, vars: &'a VarSet) -> PolyDisplay<'a> {
        assert_eq!(vars.len(), self.nvars);
        PolyDisplay { poly: self, vars }
    }

    /// Parse the text format produced by [`Polynomial::display`]:
    /// `c*x1^a*y2^b ± ...` with rational `c` written as `p/q`.
    pub fn parse(input: &str, vars: &VarSet) -> Result<Polynomial, Error> {
        let nvars = vars.len();
        let mut out = Polynomial::zero(nvars);
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() || s == "0" {
            return Ok(out);
        }
        // Split into signed chunks.
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut first = true;
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && !first && !cur.is_empty() {
                chunks.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && first {
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
            first = false;
        }
        if !cur.is_empty() {
            chunks.push((neg, cur));
        }
        for (neg, chunk) in chunks {
            let mut coeff = Rat::one();
            let mut exps = vec![0u16; nvars];
            for factor in chunk.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {chunk:?}")));
                }
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => {
                        let e: u16 = e
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                        (b, e)
                    }
                    None => (factor, 1),
                };
                if let Some(i) = vars.index_of(base) {
                    exps[i] += exp;
                } else {
                    // numeric coefficient, possibly p/q
                    let c = parse_rat(base)
                        .ok_or_else(|| Error::Parse(format!("unknown factor {base:?}")))?;
                    for _ in 0..exp.max(1).min(1) {}
                    if exp != 1 {
                        return Err(Error::Parse(format!("exponent on constant {factor:?}")));
                    }
                    coeff = &coeff * &c;
                }
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(Monomial(exps), coeff);
        }
        Ok(out)
    }
}

fn parse_rat(s: &str) -> Option<Rat> {
    if let Some((n, d)) = s.split_once('/') {
        let n: num_bigint::BigInt = n.parse().ok()?;
        let d: num_bigint::BigInt = d.parse().ok()?;
        Some(Rat::new(n, d))
    } else {
        let n: num_bigint::BigInt = s.parse().ok()?;
        Some(Rat::from_integer(n))
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    vars: &'a VarSet,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // descending graded-lex
        for (mono, c) in self.poly.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !abs.is_one() || mono.total_degree() == 0 {
                if abs.denom().is_one() {
                    parts.push(format!("{}", abs.numer()));
                } else {
                    parts.push(format!("{}/{}", abs.numer(), abs.denom()));
                }
            }
            for (i, &e) in mono.0.iter().enumerate() {
                if e == 1 {
                    parts.push(self.vars.name(i).to_string());
                } else if e > 1 {
                    parts.push(format!("{}^{}", self.vars.name(i), e));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Self) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "mixed variable sets");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Self) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "mixed variable sets");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Self) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "mixed variable sets");
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xy() -> (VarSet, Polynomial, Polynomial) {
        let vars = VarSet::new(vec!["x", "y"]);
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        (vars, x, y)
    }

    #[test]
    fn ring_identities() {
        let (_, x, y) = xy();
        // (x+y)(x-y) = x^2 - y^2
        let lhs = &(&x + &y) * &(&x - &y);
        let rhs = &x.pow(2) - &y.pow(2);
        assert_eq!(lhs, rhs);
        // p + 0 = p
        let p = &(&x + &y) * &x;
        assert_eq!(&p + &Polynomial::zero(2), p);
        // (y-x)^2 = y^2 - 2xy + x^2
        let d = &y - &x;
        let sq = &d * &d;
        let expect = &(&y.pow(2) - &(&x * &y).scale(&rat(2))) + &x.pow(2);
        assert_eq!(sq, expect);
    }

    #[test]
    fn witt_basic() {
        let (_, x, y) = xy();
        // L_0 x^2 = 2x^2 (Euler operator)
        assert_eq!(x.pow(2).apply_witt(0, &[0]), x.pow(2).scale(&rat(2)));
        // L_1 x^2 = 2x^3
        assert_eq!(x.pow(2).apply_witt(1, &[0]), x.pow(3).scale(&rat(2)));
        // L_2 (x+y) = x^3 + y^3, acting on both variables
        assert_eq!((&x + &y).apply_witt(2, &[0, 1]), &x.pow(3) + &y.pow(3));
    }

    #[test]
    fn witt_degree_shift() {
        let (_, x, y) = xy();
        let p = &(&x * &y) * &y; // homogeneous q-degree 6
        for m in 0..4u32 {
            let q = p.apply_witt(m, &[0, 1]);
            assert!(q.is_homogeneous_of(6 + 2 * m as i64));
        }
    }

    #[test]
    fn substitution() {
        let (_, x, y) = xy();
        // (y - x) with y -> x collapses to 0
        let d = &y - &x;
        let z = d.substitute(&|i| if i == 1 { Polynomial::var(2, 0) } else { Polynomial::var(2, i) }, 2);
        assert!(z.is_zero());
        // x^2 with x -> l (renaming into a 1-var ring)
        let p = x.pow(2);
        let r = p.substitute(&|_| Polynomial::var(1, 0), 1);
        assert_eq!(r, Polynomial::var(1, 0).pow(2));
        // x + y with x -> x, y -> x + z
        let vars3 = 3usize;
        let s = (&x + &y).substitute(
            &|i| {
                if i == 0 {
                    Polynomial::var(vars3, 0)
                } else {
                    &Polynomial::var(vars3, 0) + &Polynomial::var(vars3, 2)
                }
            },
            vars3,
        );
        let expect = &Polynomial::var(3, 0).scale(&rat(2)) + &Polynomial::var(3, 2);
        assert_eq!(s, expect);
    }

    #[test]
    fn exact_division() {
        let (_, x, y) = xy();
        let d = &y - &x;
        let p = &d * &(&(&x * &y) + &x.pow(2));
        assert_eq!(p.exact_div(&d).unwrap(), &(&x * &y) + &x.pow(2));
        let bad = &x + &y;
        assert!(matches!(bad.exact_div(&d), Err(Error::NonDivisible)));
    }

    #[test]
    fn parse_roundtrip() {
        let vars = VarSet::new(vec!["x1", "y2"]);
        let p = Polynomial::parse("1/2*x1^2*y2 - 3*y2 + 2", &vars).unwrap();
        let s = p.display(&vars).to_string();
        let q = Polynomial::parse(&s, &vars).unwrap();
        assert_eq!(p, q);
        assert_eq!(s, "1/2*x1^2*y2 - 3*y2 + 2");
    }

    fn arb_poly(nvars: usize, max_deg: u16, max_terms: usize) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(
            (
                proptest::collection::vec(0..=max_deg, nvars),
                -6i64..=6,
            ),
            0..=max_terms,
        )
        .prop_map(move |terms| {
            let mut p = Polynomial::zero(nvars);
            for (exps, c) in terms {
                p.add_term(Monomial(exps), rat(c));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn leibniz(p in arb_poly(2, 3, 4), q in arb_poly(2, 3, 4), m in 0u32..4) {
            let acting = [0usize, 1];
            let lhs = (&p * &q).apply_witt(m, &acting);
            let rhs = &(&p.apply_witt(m, &acting) * &q) + &(&p * &q.apply_witt(m, &acting));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn witt_commutator(exps in proptest::collection::vec(0u16..=2, 3), m in 0u32..=4, n in 0u32..=4) {
            // [L_m, L_n] = (n - m) L_{m+n} on monomials of degree <= 6
            let p = Polynomial::monomial(3, &exps, rat(1));
            let acting = [0usize, 1, 2];
            let lhs = &p.apply_witt(n, &acting).apply_witt(m, &acting)
                - &p.apply_witt(m, &acting).apply_witt(n, &acting);
            let rhs = p.apply_witt(m + n, &acting).scale(&rat(n as i64 - m as i64));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn division_inverts_multiplication(p in arb_poly(2, 2, 3), d in arb_poly(2, 2, 3)) {
            prop_assume!(!d.is_zero());
            let prod = &p * &d;
            let q = prod.exact_div(&d).unwrap();
            prop_assert_eq!(q, p);
        }
    }
}
