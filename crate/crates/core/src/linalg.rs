//! Exact sparse linear algebra over `Q` and over prime fields `F_p`.
//!
//! [`Rref`] keeps an incrementally maintained reduced row echelon form in
//! which the pivot of a row is its smallest column index. Every row has a 1
//! at its pivot and zeros at all other pivot columns, so reducing a vector
//! takes one pass over its entries.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub trait Field: Clone + Send + Sync + Debug {
    type Elem: Clone + Send + Sync + Debug + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` when the denominator vanishes in this field.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
    fn name(&self) -> String;
}

/// The rationals, with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn name(&self) -> String {
        "Q".into()
    }
}

/// `Z/pZ` for a prime `p < 2^32`, chosen at runtime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p < (1 << 32) && is_prime(p), "{p} is not a prime below 2^32");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * a % self.p;
            }
            a = a * a % self.p;
            e >>= 1;
        }
        acc
    }

    fn reduce_big(&self, x: &BigInt) -> u64 {
        let m = x.mod_floor(&BigInt::from(self.p));
        m.to_u64().expect("reduced below p")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let d = self.reduce_big(q.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(&self.reduce_big(q.numer()), &self.inv(&d)))
    }
    fn name(&self) -> String {
        format!("F_{}", self.p)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `count` distinct primes drawn uniformly from `(2^30, 2^31)`.
pub fn random_primes(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out: Vec<u64> = Vec::with_capacity(count);
    while out.len() < count {
        let c = rng.gen_range((1u64 << 30) + 1..(1u64 << 31)) | 1;
        if is_prime(c) && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

pub type SparseVec<E> = Vec<(u32, E)>;

/// Scratch space for dense accumulation of sparse combinations.
#[derive(Debug)]
pub struct Workspace<E> {
    vals: Vec<E>,
    live: Vec<bool>,
    touched: Vec<u32>,
}

impl<E: Clone> Workspace<E> {
    pub fn new(ncols: usize, zero: E) -> Self {
        Workspace { vals: vec![zero; ncols], live: vec![false; ncols], touched: Vec::new() }
    }

    fn axpy<F: Field<Elem = E>>(&mut self, field: &F, c: u32, a: &E) {
        let k = c as usize;
        if !self.live[k] {
            self.live[k] = true;
            self.touched.push(c);
            self.vals[k] = a.clone();
        } else {
            self.vals[k] = field.add(&self.vals[k], a);
        }
    }

    fn drain<F: Field<Elem = E>>(&mut self, field: &F) -> SparseVec<E> {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &c in &self.touched {
            let k = c as usize;
            self.live[k] = false;
            let v = std::mem::replace(&mut self.vals[k], field.zero());
            if !field.is_zero(&v) {
                out.push((c, v));
            }
        }
        self.touched.clear();
        out
    }
}

/// Incremental reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Rref<F: Field> {
    field: F,
    ncols: usize,
    rows: Vec<SparseVec<F::Elem>>,
    pivot_row: Vec<Option<u32>>,
}

impl<F: Field> Rref<F> {
    pub fn new(field: F, ncols: usize) -> Self {
        Rref { field, ncols, rows: Vec::new(), pivot_row: vec![None; ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_row[c].is_some()
    }

    pub fn workspace(&self) -> Workspace<F::Elem> {
        Workspace::new(self.ncols, self.field.zero())
    }

    /// Normal form of `v` modulo the row space: supported on non-pivot columns.
    pub fn reduce(&self, v: &[(u32, F::Elem)], ws: &mut Workspace<F::Elem>) -> SparseVec<F::Elem> {
        let f = &self.field;
        for (c, a) in v {
            if f.is_zero(a) {
                continue;
            }
            match self.pivot_row[*c as usize] {
                None => ws.axpy(f, *c, a),
                Some(r) => {
                    for (c2, b) in &self.rows[r as usize] {
                        if c2 != c {
                            ws.axpy(f, *c2, &f.neg(&f.mul(a, b)));
                        }
                    }
                }
            }
        }
        ws.drain(f)
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    pub fn insert(&mut self, v: &[(u32, F::Elem)], ws: &mut Workspace<F::Elem>) -> bool {
        let w = self.reduce(v, ws);
        self.insert_reduced(w)
    }

    fn insert_reduced(&mut self, mut w: SparseVec<F::Elem>) -> bool {
        if w.is_empty() {
            return false;
        }
        let f = self.field.clone();
        let p = w[0].0;
        let lead_inv = f.inv(&w[0].1);
        for (_, x) in w.iter_mut() {
            *x = f.mul(x, &lead_inv);
        }
        for row in self.rows.iter_mut() {
            if let Ok(k) = row.binary_search_by_key(&p, |e| e.0) {
                let factor = row[k].1.clone();
                *row = axpy_sparse(&f, row, &f.neg(&factor), &w);
            }
        }
        self.pivot_row[p as usize] = Some(self.rows.len() as u32);
        self.rows.push(w);
        true
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_row[c].is_some()).collect()
    }
}

/// `x + a·y` for sorted sparse vectors.
fn axpy_sparse<F: Field>(f: &F, x: &[(u32, F::Elem)], a: &F::Elem, y: &[(u32, F::Elem)]) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            let v = f.mul(a, &y[j].1);
            if !f.is_zero(&v) {
                out.push((y[j].0, v));
            }
            j += 1;
        } else {
            let v = f.add(&x[i].1, &f.mul(a, &y[j].1));
            if !f.is_zero(&v) {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of a list of sparse rows.
pub fn rank_of<F: Field>(field: F, ncols: usize, rows: impl IntoIterator<Item = SparseVec<F::Elem>>) -> usize {
    let mut rref = Rref::new(field, ncols);
    let mut ws = rref.workspace();
    for r in rows {
        if rref.is_full() {
            break;
        }
        rref.insert(&r, &mut ws);
    }
    rref.rank()
}

/// Exact inverse of a square rational matrix (dense, row-major), or `None`
/// if singular.
pub fn invert_dense(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for k in 0..2 * n {
                    let delta = &factor * &a[col][k];
                    a[r][k] -= delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
