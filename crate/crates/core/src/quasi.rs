//! The three polynomial families: monomial quasi-invariants `M_A`, monomial
//! colored quasi-symmetric functions `M̄_C`, and the recursive `G[A]`.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::polyring::{Monomial, PolyError, Polynomial};
use crate::shapes::{
    composition_closure, delta, theta, ColoredComposition, IntMatrix, RComposition, RMatrix,
    ShapeError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuasiError {
    #[error("index matrix {0} is not trans")]
    NotTrans(IntMatrix),
    #[error("index matrix has {len} columns but only {n} variables per row")]
    TooLong { len: usize, n: usize },
    #[error("family built for r = {expected}, got an r-matrix with r = {got}")]
    ModulusMismatch { expected: u32, got: u32 },
    #[error("family built for {expected} rows, got {got}")]
    RowMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Sum over increasing column selections; zero when `A` is longer than `n`.
fn selections_sum(a: &IntMatrix, n: usize) -> Polynomial {
    let ell = a.rows();
    let k = a.cols();
    let mut out = Polynomial::zero(ell, n);
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut exps = vec![0u32; ell * n];
        for (t, &j) in idx.iter().enumerate() {
            exps[j * ell..(j + 1) * ell].copy_from_slice(a.column(t));
        }
        out.add_term(Monomial::from_exponents(ell, exps), BigRational::one());
        // next k-subset of 0..n
        let mut t = k;
        loop {
            if t == 0 {
                return out;
            }
            t -= 1;
            if idx[t] < n - k + t {
                idx[t] += 1;
                for u in t + 1..k {
                    idx[u] = idx[u - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `M_A = Σ_{Y ⊆ X} Y^A`, `Y` running over ordered selections of
/// `len(A)` columns of `X`.
pub fn monomial_quasi_invariant(a: &RComposition, n: usize) -> Result<Polynomial, QuasiError> {
    if a.len() > n {
        return Err(QuasiError::TooLong { len: a.len(), n });
    }
    Ok(selections_sum(a.matrix(), n))
}

/// `M̄_C`: exponents placed on index chains where consecutive nonzero
/// entries of the reading word satisfy `a <= b` inside a column and `a < b`
/// across a column boundary. Zero entries carry no index.
pub fn monomial_colored_qsym(c: &ColoredComposition, n: usize) -> Result<Polynomial, QuasiError> {
    let m = c.matrix();
    let ell = m.rows();
    if c.len() > n * ell {
        return Err(QuasiError::TooLong { len: c.len(), n: n * ell });
    }
    // (row, column, exponent, strict-from-previous)
    let mut slots: Vec<(usize, usize, u32, bool)> = Vec::new();
    let mut prev_col = None;
    for j in 0..m.cols() {
        for i in 0..ell {
            let e = m.get(i, j);
            if e > 0 {
                let strict = prev_col.is_some_and(|p| p != j);
                slots.push((i, j, e, strict));
                prev_col = Some(j);
            }
        }
    }
    let mut out = Polynomial::zero(ell, n);
    let mut exps = vec![0u32; ell * n];
    fn rec(
        k: usize,
        lo: usize,
        slots: &[(usize, usize, u32, bool)],
        ell: usize,
        n: usize,
        exps: &mut Vec<u32>,
        out: &mut Polynomial,
    ) {
        if k == slots.len() {
            out.add_term(Monomial::from_exponents(ell, exps.clone()), BigRational::one());
            return;
        }
        let (i, _, e, strict) = slots[k];
        let start = if k > 0 && strict { lo + 1 } else { lo };
        for a in start..n {
            exps[a * ell + i] += e;
            rec(k + 1, a, slots, ell, n, exps, out);
            exps[a * ell + i] -= e;
        }
    }
    rec(0, 0, &slots, ell, n, &mut exps, &mut out);
    Ok(out)
}

/// Builder for the `G[A]` family of a fixed `G(r, n)` and row count,
/// memoized on the index matrix.
#[derive(Debug, Clone)]
pub struct GFamily {
    r: u32,
    ell: usize,
    n: usize,
    memo: HashMap<IntMatrix, Polynomial>,
}

impl GFamily {
    pub fn new(r: u32, ell: usize, n: usize) -> Self {
        GFamily { r, ell, n, memo: HashMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&mut self, a: &RMatrix) -> Result<Polynomial, QuasiError> {
        if a.r() != self.r {
            return Err(QuasiError::ModulusMismatch { expected: self.r, got: a.r() });
        }
        if a.matrix().rows() != self.ell {
            return Err(QuasiError::RowMismatch { expected: self.ell, got: a.matrix().rows() });
        }
        if a.len() > self.n {
            return Err(QuasiError::TooLong { len: a.len(), n: self.n });
        }
        if !a.is_trans() {
            return Err(QuasiError::NotTrans(a.matrix().clone()));
        }
        self.g_unchecked(a.matrix())
    }

    fn g_unchecked(&mut self, a: &IntMatrix) -> Result<Polynomial, QuasiError> {
        if let Some(p) = self.memo.get(a) {
            return Ok(p.clone());
        }
        let rm = RMatrix::new(a.clone(), self.r)?;
        if !rm.is_trans() {
            return Err(QuasiError::NotTrans(a.clone()));
        }
        let result = match rm.split_at_rightmost_zero() {
            None => {
                let comp = RComposition::try_from(rm)?;
                let mut acc = Polynomial::zero(self.ell, self.n);
                for b in composition_closure(&comp) {
                    acc = &acc + &selections_sum(&b, self.n);
                }
                acc
            }
            Some(split) => {
                let j = split.zero_index();
                let v = &split.pivot;
                let th = theta(v, self.r)?;
                let de = delta(v, self.r)?;
                let mut merged = split.head.clone();
                merged.push_column(v);
                let merged = merged.concat(&split.tail)?;
                let mut reduced = split.head.clone();
                reduced.push_column(&de);
                let reduced = reduced.concat(&split.tail)?.trimmed();
                if reduced.cols() == 0 {
                    return Err(QuasiError::NotTrans(a.clone()));
                }
                let first = self.g_unchecked(&merged)?;
                let second = self.g_unchecked(&reduced)?;
                let mut cofactor = IntMatrix::zeros(self.ell, j);
                cofactor.push_column(&th);
                let x = Monomial::from_matrix(&cofactor, self.n)?;
                &first - &second.mul_monomial(&x)
            }
        };
        self.memo.insert(a.clone(), result.clone());
        Ok(result)
    }

    /// Whether the lex-leading monomial of `G[A]` is `X^A`.
    pub fn verify_leading(&mut self, a: &RMatrix) -> Result<bool, QuasiError> {
        let g = self.g(a)?;
        let target = Monomial::from_matrix(a.matrix(), self.n)?;
        Ok(g.leading_monomial().ok() == Some(&target))
    }
}

/// `M[2 1; 2 3]`-style label.
pub fn bracket(kind: &str, a: &IntMatrix) -> String {
    format!("{kind}{a}")
}
