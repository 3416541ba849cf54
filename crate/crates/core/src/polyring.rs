//! Sparse polynomials with exact rational coefficients over the `ℓ × n`
//! variable grid `X = (x_ij)`.
//!
//! Monomials are compared lexicographically on the column-major reading word
//! of their exponent matrices: column 1 top to bottom, then column 2, and so on.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::shapes::{DegreeVector, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("the zero polynomial has no leading monomial")]
    ZeroPolynomial,
    #[error("index matrix has {cols} columns but only {n} variables per row")]
    TooManyColumns { cols: usize, n: usize },
    #[error("expected {expected} scalars, got {got}")]
    ScalarCount { expected: usize, got: usize },
}

/// `X^A` for an `ℓ × n` exponent matrix `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    ell: usize,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(ell: usize, n: usize) -> Self {
        Monomial { ell, exps: vec![0; ell * n] }
    }

    pub fn from_exponents(ell: usize, exps: Vec<u32>) -> Self {
        assert!(ell > 0 && exps.len().is_multiple_of(ell));
        Monomial { ell, exps }
    }

    /// The single variable `x_{ij}` (0-based row `i`, column `j`).
    pub fn var(ell: usize, n: usize, i: usize, j: usize) -> Self {
        let mut m = Monomial::one(ell, n);
        m.exps[j * ell + i] = 1;
        m
    }

    /// `X^A` with `A` zero-padded on the right to `n` columns.
    pub fn from_matrix(a: &IntMatrix, n: usize) -> Result<Self, PolyError> {
        if a.cols() > n {
            return Err(PolyError::TooManyColumns { cols: a.cols(), n });
        }
        Ok(Monomial { ell: a.rows(), exps: a.padded(n).reading_word().to_vec() })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn n(&self) -> usize {
        self.exps.len() / self.ell
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, i: usize, j: usize) -> u32 {
        self.exps[j * self.ell + i]
    }

    pub fn to_matrix(&self) -> IntMatrix {
        IntMatrix::from_reading_word(self.ell, self.exps.clone()).expect("valid shape")
    }

    pub fn degree_vector(&self) -> DegreeVector {
        let mut d = vec![0u32; self.ell];
        for (k, &e) in self.exps.iter().enumerate() {
            d[k % self.ell] += e;
        }
        DegreeVector(d)
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    fn same_shape(&self, other: &Monomial) -> Result<(), PolyError> {
        if self.ell != other.ell || self.exps.len() != other.exps.len() {
            return Err(PolyError::ShapeMismatch(self.ell, self.n(), other.ell, other.n()));
        }
        Ok(())
    }

    /// Lex comparison on the column-major reading word.
    pub fn lex_compare(&self, other: &Monomial) -> Result<Ordering, PolyError> {
        self.same_shape(other)?;
        Ok(self.exps.cmp(&other.exps))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.same_shape(other).is_ok());
        Monomial {
            ell: self.ell,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// Multiplies by `x_{ij}`.
    pub fn times_var(&self, i: usize, j: usize) -> Monomial {
        let mut m = self.clone();
        m.exps[j * self.ell + i] += 1;
        m
    }

    /// Divides by `x_{ij}`, if possible.
    pub fn div_var(&self, i: usize, j: usize) -> Option<Monomial> {
        let k = j * self.ell + i;
        if self.exps[k] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.exps[k] -= 1;
        Some(m)
    }

    /// Reinterprets this monomial on a grid of `new_n` columns, shifting
    /// every column right by `offset`.
    pub fn shifted(&self, offset: usize, new_n: usize) -> Monomial {
        assert!(offset + self.n() <= new_n);
        let mut exps = vec![0; self.ell * new_n];
        exps[offset * self.ell..(offset + self.n()) * self.ell].copy_from_slice(&self.exps);
        Monomial { ell: self.ell, exps }
    }

    /// Every monomial of degree vector `d` in `n` columns, in decreasing lex order.
    pub fn all_of_degree(d: &DegreeVector, n: usize) -> Vec<Monomial> {
        let ell = d.ell();
        let rows: Vec<Vec<Vec<u32>>> = d.components().iter().map(|&k| weak_compositions(k, n)).collect();
        let mut out = Vec::new();
        let mut pick = vec![0usize; ell];
        if rows.iter().any(|r| r.is_empty()) {
            return out;
        }
        loop {
            let mut exps = vec![0; ell * n];
            for (i, r) in rows.iter().enumerate() {
                for (j, &e) in r[pick[i]].iter().enumerate() {
                    exps[j * ell + i] = e;
                }
            }
            out.push(Monomial { ell, exps });
            let mut i = ell;
            loop {
                if i == 0 {
                    out.sort_unstable_by(|a, b| b.cmp(a));
                    return out;
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < rows[i].len() {
                    break;
                }
                pick[i] = 0;
            }
        }
    }
}

/// All weak compositions of `k` into `n` parts.
pub fn weak_compositions(k: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if n == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for v in (0..=left).rev() {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
    }
    rec(0, k, &mut cur, &mut out);
    out
}

const ROW_NAMES: [char; 6] = ['x', 'y', 'z', 'u', 'v', 'w'];

impl fmt::Display for Monomial {
    /// `x[i][j]^e * ...` with 1-based indices; `1` for the constant monomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for j in 0..self.n() {
            for i in 0..self.ell {
                let e = self.exp(i, j);
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, " * ")?;
                }
                first = false;
                write!(f, "x[{}][{}]", i + 1, j + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl Monomial {
    /// Compact letter form (`x2^2 y2^2 x4 y4^3`), rows named x, y, z, ...
    pub fn to_letters(&self) -> String {
        let mut parts = Vec::new();
        for j in 0..self.n() {
            for i in 0..self.ell {
                let e = self.exp(i, j);
                if e == 0 {
                    continue;
                }
                let name = if self.ell <= ROW_NAMES.len() {
                    format!("{}{}", ROW_NAMES[i], j + 1)
                } else {
                    format!("x[{}][{}]", i + 1, j + 1)
                };
                parts.push(if e > 1 { format!("{name}^{e}") } else { name });
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

/// A finite sum of monomials with nonzero rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    ell: usize,
    n: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(ell: usize, n: usize) -> Self {
        Polynomial { ell, n, terms: BTreeMap::new() }
    }

    pub fn one(ell: usize, n: usize) -> Self {
        Polynomial::from_monomial(Monomial::one(ell, n), BigRational::one())
    }

    pub fn from_monomial(m: Monomial, c: BigRational) -> Self {
        let (ell, n) = (m.ell(), m.n());
        let mut p = Polynomial::zero(ell, n);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(ell: usize, n: usize, terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Polynomial::zero(ell, n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        debug_assert_eq!((m.ell(), m.n()), (self.ell, self.n));
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn leading_monomial(&self) -> Result<&Monomial, PolyError> {
        self.terms.keys().next_back().ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_term(&self) -> Result<(&Monomial, &BigRational), PolyError> {
        self.terms.iter().next_back().ok_or(PolyError::ZeroPolynomial)
    }

    /// The common degree vector of all terms, if the polynomial is nonzero
    /// and multihomogeneous.
    pub fn multidegree(&self) -> Option<DegreeVector> {
        let mut it = self.terms.keys().map(Monomial::degree_vector);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_multihomogeneous(&self) -> bool {
        self.is_zero() || self.multidegree().is_some()
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.ell, self.n);
        }
        Polynomial {
            ell: self.ell,
            n: self.n,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            ell: self.ell,
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    fn check_shape(&self, other: &Polynomial) {
        assert_eq!(
            (self.ell, self.n),
            (other.ell, other.n),
            "polynomials over different variable grids"
        );
    }

    /// Substitutes `x_ij <- q_i x_ij`.
    pub fn scale_specialize(&self, q: &[BigRational]) -> Result<Polynomial, PolyError> {
        if q.len() != self.ell {
            return Err(PolyError::ScalarCount { expected: self.ell, got: q.len() });
        }
        let mut out = Polynomial::zero(self.ell, self.n);
        for (m, c) in &self.terms {
            let mut f = c.clone();
            for (qi, &di) in q.iter().zip(m.degree_vector().components()) {
                f *= pow(qi, di);
            }
            out.add_term(m.clone(), f);
        }
        Ok(out)
    }

    /// Moves every term onto a grid with `new_n` columns, shifted right by `offset`.
    pub fn shifted(&self, offset: usize, new_n: usize) -> Polynomial {
        Polynomial {
            ell: self.ell,
            n: new_n,
            terms: self.terms.iter().map(|(m, c)| (m.shifted(offset, new_n), c.clone())).collect(),
        }
    }
}

fn pow(x: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, other: &Polynomial) -> Polynomial {
        self.check_shape(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, other: &Polynomial) -> Polynomial {
        self.check_shape(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, other: &Polynomial) -> Polynomial {
        self.check_shape(other);
        let mut out = Polynomial::zero(self.ell, self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }
}

fn fmt_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    /// `c * x[i][j]^e * ... + ...`, largest monomial first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            write!(f, "{} * {}", fmt_coeff(&c.abs()), m)?;
        }
        Ok(())
    }
}

impl Polynomial {
    /// Letter form, largest monomial first, coefficients of ±1 omitted.
    pub fn to_letters(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            if !a.is_one() {
                s.push_str(&fmt_coeff(&a));
                s.push(' ');
            }
            s.push_str(&m.to_letters());
        }
        s
    }
}

#[derive(Serialize)]
struct RawTerm {
    coeff: String,
    exponents: IntMatrix,
}

impl Serialize for Polynomial {
    /// JSON term list in decreasing lex order.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<RawTerm> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| RawTerm { coeff: fmt_coeff(c), exponents: m.to_matrix() })
            .collect();
        terms.serialize(s)
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(ell: usize, rows: &[&[u32]]) -> Monomial {
        let a = IntMatrix::from_rows(rows).unwrap();
        assert_eq!(a.rows(), ell);
        Monomial::from_matrix(&a, a.cols()).unwrap()
    }

    #[test]
    fn lex_compare_examples() {
        // x2^2 y2^2 x4 y4^3 vs x2^2 x3 y3^3 y4^2
        let a = mono(2, &[&[0, 2, 0, 1], &[0, 2, 0, 3]]);
        let b = mono(2, &[&[0, 2, 1, 0], &[0, 0, 3, 2]]);
        assert_eq!(a.lex_compare(&b).unwrap(), Ordering::Greater);
        assert_eq!(a.lex_compare(&a).unwrap(), Ordering::Equal);
        let x1 = Monomial::var(2, 1, 0, 0);
        let y1 = Monomial::var(2, 1, 1, 0);
        assert_eq!(x1.lex_compare(&y1).unwrap(), Ordering::Greater);
        let other = Monomial::one(2, 3);
        assert!(matches!(x1.lex_compare(&other), Err(PolyError::ShapeMismatch(..))));
    }

    #[test]
    fn leading_monomial_examples() {
        let p = Polynomial::from_monomial(Monomial::var(1, 3, 0, 1), rat(3));
        assert_eq!(p.leading_monomial().unwrap(), &Monomial::var(1, 3, 0, 1));
        assert_eq!(Polynomial::zero(1, 3).leading_monomial(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn scale_specialize_examples() {
        let m = Monomial::var(2, 2, 0, 0).mul(&Monomial::var(2, 2, 1, 1));
        let f = Polynomial::from_monomial(m.clone(), rat(1));
        let g = f.scale_specialize(&[rat(2), rat(3)]).unwrap();
        assert_eq!(g, Polynomial::from_monomial(m, rat(6)));
        assert_eq!(f.scale_specialize(&[rat(1), rat(1)]).unwrap(), f);
        assert!(f.scale_specialize(&[rat(1)]).is_err());
    }

    #[test]
    fn all_of_degree_counts() {
        let d = DegreeVector(vec![2, 1]);
        let ms = Monomial::all_of_degree(&d, 3);
        // C(4,2) * C(3,2)
        assert_eq!(ms.len(), 18);
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
        assert!(ms.iter().all(|m| m.degree_vector() == d));
    }

    #[test]
    fn display_forms() {
        let m = mono(2, &[&[0, 2, 0, 1], &[0, 2, 0, 3]]);
        assert_eq!(m.to_letters(), "x2^2 y2^2 x4 y4^3");
        assert_eq!(Monomial::var(1, 2, 0, 1).to_string(), "x[1][2]");
        let p = &Polynomial::from_monomial(Monomial::var(1, 2, 0, 0), rat(2))
            - &Polynomial::from_monomial(Monomial::var(1, 2, 0, 1), rat(1));
        assert_eq!(p.to_string(), "2 * x[1][1] - 1 * x[1][2]");
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"[{"coeff":"2","exponents":{"rows":1,"cols":2,"entries":[[1],[0]]}},{"coeff":"-1","exponents":{"rows":1,"cols":2,"entries":[[0],[1]]}}]"#
        );
    }
}
