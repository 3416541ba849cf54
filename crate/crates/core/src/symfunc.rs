//! Truncated symmetric functions in the monomial (`m`), complete homogeneous
//! (`h`) and Schur (`s`) bases.
//!
//! A value read off an `ell`-variable Hilbert series only determines the
//! `m`-coefficients of partitions with at most `ell` parts. Such values carry
//! a visibility bound, and conversions that would need the missing
//! coefficients return [`SymError::Invisible`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::HilbertSeries;
use crate::linalg::invert_dense;
use crate::shapes::DegreeVector;

/// Largest degree for which transition tables are built.
pub const MAX_TABLE_DEGREE: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("partition parts must be positive")]
    ZeroPart,
    #[error("degree {0} exceeds the supported table degree {MAX_TABLE_DEGREE}")]
    DegreeTooLarge(u32),
    #[error("coefficients in degree {degree} need partitions with more than {visible} parts")]
    Invisible { degree: u32, visible: usize },
    #[error("dimensions are not symmetric under permuting the grading at {0}")]
    Asymmetric(DegreeVector),
    #[error("cannot parse symmetric function: {0}")]
    Parse(String),
    #[error("bases differ: {0} and {1}")]
    BasisMismatch(Basis, Basis),
}

/// Integer partition with parts stored in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts; rejects zeros.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, SymError> {
        if parts.contains(&0) {
            return Err(SymError::ZeroPart);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The nonzero components of `d`, sorted.
    pub fn from_degree(d: &DegreeVector) -> Self {
        Partition(d.sorted_parts().into_iter().filter(|&x| x > 0).collect())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `d_μ`, the product of the factorials of the part multiplicities.
    pub fn multiplicity_factorial(&self) -> BigUint {
        let mut acc = BigUint::one();
        let mut run = 0u32;
        for (k, p) in self.0.iter().enumerate() {
            run = if k > 0 && self.0[k - 1] == *p { run + 1 } else { 1 };
            acc *= run;
        }
        acc
    }

    /// Partitions of `d` in decreasing lex order.
    pub fn all(d: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(d, d, &mut Vec::new(), &mut out);
        out
    }

    /// Dominance order on partitions of the same size.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let (mut a, mut b) = (0u32, 0u32);
        for k in 0..self.len().max(other.len()) {
            a += self.0.get(k).copied().unwrap_or(0);
            b += other.0.get(k).copied().unwrap_or(0);
            if a < b {
                return false;
            }
        }
        true
    }

    /// Multiset union of parts.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition(v)
    }

    /// The distinct partitions obtained by deleting one part.
    pub fn remove_one_part(&self) -> Vec<Partition> {
        let mut out: Vec<Partition> = Vec::new();
        for k in 0..self.len() {
            if k > 0 && self.0[k] == self.0[k - 1] {
                continue;
            }
            let mut v = self.0.clone();
            v.remove(k);
            out.push(Partition(v));
        }
        out
    }

    /// Conjugate partition.
    pub fn conjugate(&self) -> Partition {
        let top = self.0.first().copied().unwrap_or(0);
        Partition((1..=top).map(|i| self.0.iter().filter(|&&p| p >= i).count() as u32).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    #[serde(rename = "m")]
    M,
    #[serde(rename = "h")]
    H,
    #[serde(rename = "s")]
    S,
}

impl Basis {
    fn letter(self) -> char {
        match self {
            Basis::M => 'm',
            Basis::H => 'h',
            Basis::S => 's',
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Basis {
    type Err = SymError;
    fn from_str(s: &str) -> Result<Self, SymError> {
        match s {
            "m" => Ok(Basis::M),
            "h" => Ok(Basis::H),
            "s" => Ok(Basis::S),
            _ => Err(SymError::Parse(format!("unknown basis {s:?}"))),
        }
    }
}

/// Transition data for one degree. Row `i` of `s_to_m` holds the
/// `m`-coefficients of `s_{partitions[i]}`; likewise for the others.
#[derive(Debug)]
pub struct DegreeTable {
    pub degree: u32,
    pub partitions: Vec<Partition>,
    pub index: HashMap<Partition, usize>,
    pub s_to_m: Vec<Vec<BigRational>>,
    pub h_to_m: Vec<Vec<BigRational>>,
    pub m_to_s: Vec<Vec<BigRational>>,
    pub m_to_h: Vec<Vec<BigRational>>,
}

/// Number of semistandard tableaux of shape `lambda` and content `mu`.
pub fn kostka(lambda: &Partition, mu: &[u32]) -> BigInt {
    fn rec(lambda: Vec<u32>, mu: &[u32], memo: &mut HashMap<(Vec<u32>, usize), BigInt>) -> BigInt {
        let Some((&last, rest)) = mu.split_last() else {
            return if lambda.iter().all(|&x| x == 0) { BigInt::one() } else { BigInt::zero() };
        };
        if let Some(v) = memo.get(&(lambda.clone(), mu.len())) {
            return v.clone();
        }
        // remove a horizontal strip of size `last`
        let mut total = BigInt::zero();
        let mut cur = lambda.clone();
        fn strips(
            k: usize,
            left: u32,
            lambda: &[u32],
            cur: &mut Vec<u32>,
            rest: &[u32],
            memo: &mut HashMap<(Vec<u32>, usize), BigInt>,
            total: &mut BigInt,
        ) {
            if k == lambda.len() {
                if left == 0 {
                    let mut next = cur.clone();
                    while next.last() == Some(&0) {
                        next.pop();
                    }
                    *total += rec(next, rest, memo);
                }
                return;
            }
            let floor = lambda.get(k + 1).copied().unwrap_or(0);
            let most = (lambda[k] - floor).min(left);
            for t in 0..=most {
                cur[k] = lambda[k] - t;
                strips(k + 1, left - t, lambda, cur, rest, memo, total);
            }
            cur[k] = lambda[k];
        }
        strips(0, last, &lambda, &mut cur, rest, memo, &mut total);
        memo.insert((lambda, mu.len()), total.clone());
        total
    }
    if lambda.size() != mu.iter().sum::<u32>() {
        return BigInt::zero();
    }
    rec(lambda.parts().to_vec(), mu, &mut HashMap::new())
}

fn build_table(d: u32) -> DegreeTable {
    let partitions = Partition::all(d);
    let index: HashMap<Partition, usize> = partitions.iter().enumerate().map(|(k, p)| (p.clone(), k)).collect();
    let k: Vec<Vec<BigInt>> =
        partitions.iter().map(|l| partitions.iter().map(|m| kostka(l, m.parts())).collect()).collect();
    let np = partitions.len();
    let s_to_m: Vec<Vec<BigRational>> =
        k.iter().map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    // h_mu = sum_lambda K_{lambda mu} s_lambda
    let h_to_m: Vec<Vec<BigRational>> = (0..np)
        .map(|mu| {
            (0..np)
                .map(|nu| {
                    let v: BigInt = (0..np).map(|l| &k[l][mu] * &k[l][nu]).sum();
                    BigRational::from_integer(v)
                })
                .collect()
        })
        .collect();
    let m_to_s = invert_dense(&s_to_m).expect("Kostka matrix is unitriangular");
    let m_to_h = invert_dense(&h_to_m).expect("h to m matrix is invertible");
    DegreeTable { degree: d, partitions, index, s_to_m, h_to_m, m_to_s, m_to_h }
}

impl DegreeTable {
    /// Whether `s_λ = m_λ + (terms m_μ with μ strictly dominated by λ)`.
    pub fn is_dominance_triangular(&self) -> bool {
        self.partitions.iter().enumerate().all(|(a, l)| {
            self.partitions.iter().enumerate().all(|(b, m)| {
                let x = &self.s_to_m[a][b];
                if a == b {
                    x.is_one()
                } else {
                    x.is_zero() || l.dominates(m)
                }
            })
        })
    }

    fn to_m(&self, basis: Basis) -> &[Vec<BigRational>] {
        match basis {
            Basis::S => &self.s_to_m,
            Basis::H => &self.h_to_m,
            Basis::M => unreachable!(),
        }
    }

    fn from_m(&self, basis: Basis) -> &[Vec<BigRational>] {
        match basis {
            Basis::S => &self.m_to_s,
            Basis::H => &self.m_to_h,
            Basis::M => unreachable!(),
        }
    }
}

static TABLES: OnceLock<Mutex<HashMap<u32, Arc<DegreeTable>>>> = OnceLock::new();

/// Cached transition table for degree `d`.
pub fn degree_table(d: u32) -> Result<Arc<DegreeTable>, SymError> {
    if d > MAX_TABLE_DEGREE {
        return Err(SymError::DegreeTooLarge(d));
    }
    let cache = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("table cache").get(&d) {
        return Ok(t.clone());
    }
    let t = Arc::new(build_table(d));
    cache.lock().expect("table cache").entry(d).or_insert_with(|| t.clone());
    Ok(t)
}

/// Transition tables for every degree `0..=cap`.
pub fn transition_matrices(cap: u32) -> Result<Vec<Arc<DegreeTable>>, SymError> {
    (0..=cap).map(degree_table).collect()
}

/// A symmetric function truncated at `degree_cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymFunc {
    basis: Basis,
    coeffs: BTreeMap<Partition, BigRational>,
    degree_cap: u32,
    /// Largest part count whose coefficients are known, `None` if all are.
    visibility: Option<usize>,
}

impl SymFunc {
    pub fn zero(basis: Basis, degree_cap: u32) -> Self {
        SymFunc { basis, coeffs: BTreeMap::new(), degree_cap, visibility: None }
    }

    pub fn one(basis: Basis, degree_cap: u32) -> Self {
        let mut f = SymFunc::zero(basis, degree_cap);
        f.add_term(Partition::empty(), BigRational::one());
        f
    }

    /// Terms above the cap are dropped.
    pub fn from_terms(basis: Basis, degree_cap: u32, terms: impl IntoIterator<Item = (Partition, BigRational)>) -> Self {
        let mut f = SymFunc::zero(basis, degree_cap);
        for (p, c) in terms {
            f.add_term(p, c);
        }
        f
    }

    pub fn with_visibility(mut self, visible: usize) -> Self {
        self.visibility = if visible as u32 >= self.degree_cap { None } else { Some(visible) };
        self
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn visibility(&self) -> Option<usize> {
        self.visibility
    }

    /// Whether every coefficient in degree `d` is known.
    pub fn is_degree_visible(&self, d: u32) -> bool {
        self.visibility.is_none_or(|v| d as usize <= v)
    }

    pub fn add_term(&mut self, p: Partition, c: BigRational) {
        if p.size() > self.degree_cap || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(p.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&p);
        }
    }

    /// Nonzero terms, in increasing partition order.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &BigRational)> {
        self.coeffs.iter()
    }

    /// Coefficient of a basis element, or an error if it is not determined.
    pub fn coeff(&self, p: &Partition) -> Result<BigRational, SymError> {
        let known = match self.basis {
            Basis::H => self.is_degree_visible(p.size()),
            _ => self.visibility.is_none_or(|v| p.len() <= v),
        };
        if !known {
            return Err(SymError::Invisible { degree: p.size(), visible: self.visibility.unwrap_or(0) });
        }
        Ok(self.coeffs.get(p).cloned().unwrap_or_else(BigRational::zero))
    }

    pub fn truncated(&self, cap: u32) -> SymFunc {
        let cap = cap.min(self.degree_cap);
        let mut f = SymFunc::from_terms(self.basis, cap, self.coeffs.clone());
        if let Some(v) = self.visibility {
            f = f.with_visibility(v);
        }
        f
    }

    fn degree_vec(&self, t: &DegreeTable) -> Vec<BigRational> {
        t.partitions.iter().map(|p| self.coeffs.get(p).cloned().unwrap_or_else(BigRational::zero)).collect()
    }

    /// Coefficients in degree `d` expressed in `target`.
    fn convert_degree(&self, target: Basis, d: u32) -> Result<Vec<(Partition, BigRational)>, SymError> {
        let t = degree_table(d)?;
        let np = t.partitions.len();
        let src = self.degree_vec(&t);
        let full = self.is_degree_visible(d);
        if !full && (self.basis == Basis::H || target == Basis::H) && self.basis != target {
            return Err(SymError::Invisible { degree: d, visible: self.visibility.unwrap_or(0) });
        }
        let vis = |p: &Partition| full || p.len() <= self.visibility.unwrap_or(usize::MAX);
        let m: Vec<BigRational> = if self.basis == Basis::M {
            src
        } else {
            let rows = t.to_m(self.basis);
            (0..np)
                .map(|b| {
                    if !vis(&t.partitions[b]) {
                        return BigRational::zero();
                    }
                    (0..np).filter(|&a| !src[a].is_zero()).map(|a| &src[a] * &rows[a][b]).sum()
                })
                .collect()
        };
        let out: Vec<BigRational> = if target == Basis::M {
            m
        } else {
            let rows = t.from_m(target);
            // with partial visibility only triangular entries contribute
            (0..np)
                .map(|b| {
                    if !vis(&t.partitions[b]) {
                        return BigRational::zero();
                    }
                    (0..np).filter(|&a| !m[a].is_zero() && vis(&t.partitions[a])).map(|a| &m[a] * &rows[a][b]).sum()
                })
                .collect()
        };
        Ok(t.partitions.iter().cloned().zip(out).filter(|(p, c)| !c.is_zero() && vis(p)).collect())
    }

    /// Re-expands in `target`. With partial visibility, `m` and `s` are
    /// interchangeable on the visible partitions, while `h` needs every
    /// coefficient of a degree.
    pub fn to_basis(&self, target: Basis) -> Result<SymFunc, SymError> {
        if target == self.basis {
            return Ok(self.clone());
        }
        let mut f = SymFunc::zero(target, self.degree_cap);
        f.visibility = self.visibility;
        for d in 0..=self.degree_cap {
            for (p, c) in self.convert_degree(target, d)? {
                f.add_term(p, c);
            }
        }
        Ok(f)
    }

    /// Product, computed in the `h` basis.
    pub fn mul(&self, other: &SymFunc) -> Result<SymFunc, SymError> {
        let a = self.to_basis(Basis::H)?;
        let b = other.to_basis(Basis::H)?;
        let cap = a.degree_cap.min(b.degree_cap);
        let mut out = SymFunc::zero(Basis::H, cap);
        for (p, x) in &a.coeffs {
            for (q, y) in &b.coeffs {
                if p.size() + q.size() <= cap {
                    out.add_term(p.union(q), x * y);
                }
            }
        }
        out.to_basis(self.basis)
    }

    pub fn add(&self, other: &SymFunc) -> Result<SymFunc, SymError> {
        if self.basis != other.basis {
            return Err(SymError::BasisMismatch(self.basis, other.basis));
        }
        let mut out = SymFunc::from_terms(self.basis, self.degree_cap.min(other.degree_cap), self.coeffs.clone());
        for (p, c) in &other.coeffs {
            out.add_term(p.clone(), c.clone());
        }
        out.visibility = match (self.visibility, other.visibility) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> SymFunc {
        let mut out = SymFunc::zero(self.basis, self.degree_cap);
        out.visibility = self.visibility;
        for (p, x) in &self.coeffs {
            out.add_term(p.clone(), x * c);
        }
        out
    }

    /// Polynomial in `q_1..q_ell`, as coefficients indexed by exponent vector.
    pub fn evaluate(&self, ell: usize) -> Result<BTreeMap<DegreeVector, BigRational>, SymError> {
        if let Some(v) = self.visibility {
            if v < ell && (v as u32) < self.degree_cap {
                return Err(SymError::Invisible { degree: v as u32 + 1, visible: v });
            }
        }
        let m = self.to_basis(Basis::M)?;
        let mut out = BTreeMap::new();
        for t in 0..=self.degree_cap {
            for d in DegreeVector::all_with_total(ell, t) {
                let c = m.coeffs.get(&Partition::from_degree(&d)).cloned().unwrap_or_else(BigRational::zero);
                if !c.is_zero() {
                    out.insert(d, c);
                }
            }
        }
        Ok(out)
    }

    /// `m`-expansion read off a permutation-symmetric Hilbert series.
    pub fn from_hilbert(series: &HilbertSeries) -> Result<SymFunc, SymError> {
        let mut f = SymFunc::zero(Basis::M, series.max_total_degree);
        for (d, &v) in &series.dims {
            let p = Partition::from_degree(d);
            let mut sorted = d.components().to_vec();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            if series.dims.get(&DegreeVector(sorted.clone())) != Some(&v) {
                return Err(SymError::Asymmetric(d.clone()));
            }
            if sorted == d.components() {
                f.add_term(p, BigRational::from_integer(v.into()));
            }
        }
        Ok(f.with_visibility(series.ell))
    }

    /// Renders as e.g. `1+3h₁+3h₂+2h₁²+5h₃`.
    pub fn render(&self) -> String {
        let mut terms: Vec<(&Partition, &BigRational)> = self.coeffs.iter().collect();
        terms.sort_by(|a, b| a.0.size().cmp(&b.0.size()).then_with(|| b.0.cmp(a.0)));
        if terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (p, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if neg {
                s.push('-');
            } else if k > 0 {
                s.push('+');
            }
            let a = c.abs();
            if p.is_empty() || !a.is_one() {
                s.push_str(&a.to_string());
            }
            s.push_str(&self.render_partition(p));
        }
        s
    }

    fn render_partition(&self, p: &Partition) -> String {
        if p.is_empty() {
            return String::new();
        }
        let letter = self.basis.letter();
        match self.basis {
            Basis::H => {
                let mut s = String::new();
                let mut k = 0;
                while k < p.len() {
                    let part = p.0[k];
                    let run = p.0[k..].iter().take_while(|&&x| x == part).count();
                    s.push(letter);
                    s.push_str(&subscript(&part.to_string()));
                    if run > 1 {
                        s.push_str(&superscript(&run.to_string()));
                    }
                    k += run;
                }
                s
            }
            _ => {
                let sep = if p.0.iter().any(|&x| x >= 10) { "," } else { "" };
                let body: Vec<String> = p.0.iter().map(|x| x.to_string()).collect();
                format!("{letter}{}", subscript(&body.join(sep)))
            }
        }
    }

    /// Parses the rendered form; also accepts ASCII digits, `^` exponents,
    /// `*` after coefficients and the Unicode minus sign.
    pub fn parse(text: &str, degree_cap: Option<u32>) -> Result<SymFunc, SymError> {
        let terms = parse_terms(text)?;
        let basis = terms.iter().find_map(|t| t.0).unwrap_or(Basis::H);
        let cap = degree_cap.unwrap_or_else(|| terms.iter().map(|t| t.1.size()).max().unwrap_or(0));
        let mut f = SymFunc::zero(basis, cap);
        for (b, p, c) in terms {
            if let Some(b) = b {
                if b != basis {
                    return Err(SymError::BasisMismatch(basis, b));
                }
            }
            f.add_term(p, c);
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        let j = SymJson {
            basis: self.basis,
            terms: self.coeffs.iter().map(|(p, c)| TermJson { partition: p.clone(), coeff: c.to_string() }).collect(),
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }

    pub fn from_json(s: &str, degree_cap: Option<u32>) -> Result<SymFunc, SymError> {
        let j: SymJson = serde_json::from_str(s).map_err(|e| SymError::Parse(e.to_string()))?;
        let mut terms = Vec::new();
        for t in j.terms {
            let p = Partition::new(t.partition.0)?;
            let c: BigRational = t.coeff.parse().map_err(|_| SymError::Parse(format!("bad coefficient {}", t.coeff)))?;
            terms.push((p, c));
        }
        let cap = degree_cap.unwrap_or_else(|| terms.iter().map(|t| t.0.size()).max().unwrap_or(0));
        Ok(SymFunc::from_terms(j.basis, cap, terms))
    }
}

impl fmt::Display for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    partition: Partition,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct SymJson {
    basis: Basis,
    terms: Vec<TermJson>,
}

const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

fn subscript(s: &str) -> String {
    s.chars().map(|c| c.to_digit(10).map_or(c, |d| SUB[d as usize])).collect()
}

fn superscript(s: &str) -> String {
    s.chars().map(|c| c.to_digit(10).map_or(c, |d| SUP[d as usize])).collect()
}

fn digit_of(c: char, table: &[char; 10]) -> Option<u32> {
    table.iter().position(|&x| x == c).map(|d| d as u32)
}

type ParsedTerm = (Option<Basis>, Partition, BigRational);

fn parse_terms(text: &str) -> Result<Vec<ParsedTerm>, SymError> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = |msg: &str, at: usize| SymError::Parse(format!("{msg} at position {at} in {text:?}"));
    let mut k = 0;
    let mut out = Vec::new();
    if chars.is_empty() {
        return Err(err("empty input", 0));
    }
    while k < chars.len() {
        let mut sign = BigRational::one();
        match chars[k] {
            '+' => k += 1,
            '-' | '−' => {
                sign = -sign;
                k += 1;
            }
            _ if !out.is_empty() => return Err(err("expected a sign", k)),
            _ => {}
        }
        let start = k;
        while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '/') {
            k += 1;
        }
        let coeff: BigRational = if k > start {
            let s: String = chars[start..k].iter().collect();
            s.parse().map_err(|_| err("bad coefficient", start))?
        } else {
            BigRational::one()
        };
        if k < chars.len() && chars[k] == '*' {
            k += 1;
        }
        let mut basis = None;
        let mut parts: Vec<u32> = Vec::new();
        let mut factors = 0;
        while k < chars.len() && matches!(chars[k], 'h' | 's' | 'm') {
            let b: Basis = chars[k].to_string().parse()?;
            if basis.is_some_and(|x| x != b) {
                return Err(err("mixed bases in one term", k));
            }
            basis = Some(b);
            k += 1;
            if k < chars.len() && chars[k] == '_' {
                k += 1;
            }
            let braced = k < chars.len() && chars[k] == '{';
            if braced {
                k += 1;
            }
            // subscript: groups of digits, optionally comma separated
            let mut groups: Vec<String> = vec![String::new()];
            while k < chars.len() {
                let c = chars[k];
                if let Some(d) = digit_of(c, &SUB).or_else(|| c.to_digit(10)) {
                    groups.last_mut().expect("nonempty").push(char::from_digit(d, 10).expect("digit"));
                } else if c == ',' {
                    groups.push(String::new());
                } else {
                    break;
                }
                k += 1;
            }
            if braced {
                if k >= chars.len() || chars[k] != '}' {
                    return Err(err("unclosed brace", k));
                }
                k += 1;
            }
            if groups.iter().any(|g| g.is_empty()) {
                return Err(err("missing subscript", k));
            }
            let mut exp = String::new();
            if k < chars.len() && chars[k] == '^' {
                k += 1;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    exp.push(chars[k]);
                    k += 1;
                }
            } else {
                while k < chars.len() {
                    match digit_of(chars[k], &SUP) {
                        Some(d) => exp.push(char::from_digit(d, 10).expect("digit")),
                        None => break,
                    }
                    k += 1;
                }
            }
            let exp: usize = if exp.is_empty() { 1 } else { exp.parse().map_err(|_| err("bad exponent", k))? };
            let num = |g: &str| g.parse::<u32>().map_err(|_| err("bad part", k));
            let factor: Vec<u32> = match b {
                Basis::H if groups.len() == 1 => vec![num(&groups[0])?],
                Basis::H => return Err(err("h factors take a single part", k)),
                _ if groups.len() > 1 => groups.iter().map(|g| num(g)).collect::<Result<_, _>>()?,
                _ => groups[0].chars().map(|c| c.to_digit(10).expect("digit")).collect(),
            };
            if b != Basis::H && (factors > 0 || exp != 1) {
                return Err(err("m and s terms take a single factor", k));
            }
            for _ in 0..exp {
                parts.extend_from_slice(&factor);
            }
            factors += 1;
        }
        if k == start && factors == 0 {
            return Err(err("expected a term", k));
        }
        let p = Partition::new(parts).map_err(|_| err("zero part", k))?;
        out.push((basis, p, sign * coeff));
    }
    Ok(out)
}

impl FromStr for SymFunc {
    type Err = SymError;
    fn from_str(s: &str) -> Result<Self, SymError> {
        SymFunc::parse(s, None)
    }
}

/// `(n)_k = n (n-1) ... (n-k+1)`.
pub fn falling_factorial(n: u32, k: usize) -> BigInt {
    (0..k as i64).map(|i| BigInt::from(n as i64 - i)).product()
}

/// `h`-expansion of `(1 + H)^n (1 - H)` up to degree `cap`, with
/// `H = h_1 + h_2 + ...`.
pub fn low_degree_expansion(n: u32, cap: u32) -> SymFunc {
    let mut big_h = SymFunc::zero(Basis::H, cap);
    for k in 1..=cap {
        big_h.add_term(Partition(vec![k]), BigRational::one());
    }
    let one = SymFunc::one(Basis::H, cap);
    let plus = one.add(&big_h).expect("same basis");
    let minus = one.add(&big_h.scale(&-BigRational::one())).expect("same basis");
    let mut acc = one;
    for _ in 0..n {
        acc = acc.mul(&plus).expect("h basis");
    }
    acc.mul(&minus).expect("h basis")
}

/// `(n)_{k(μ)}/d_μ - Σ_ν (n)_{k(ν)}/d_ν`, `ν` running over the distinct
/// partitions obtained by deleting one part of `μ`.
pub fn low_degree_coefficient(n: u32, mu: &Partition) -> BigRational {
    let term = |p: &Partition| {
        BigRational::new(falling_factorial(n, p.len()), BigInt::from(p.multiplicity_factorial()))
    };
    if mu.is_empty() {
        return BigRational::one();
    }
    let mut c = term(mu);
    for nu in mu.remove_one_part() {
        c -= term(&nu);
    }
    c
}

/// Universal `h`-expansion for `G(r, 2)`:
/// `(Σ_{k<r} h_k)^2 + Σ_{k<r} (k+1) h_{r+k} + Σ_{0<k<r} (r-k) h_{2r-1+k}`.
pub fn g_r2_formula(r: u32) -> SymFunc {
    let cap = 3 * r - 2;
    let h = |k: u32| if k == 0 { Partition::empty() } else { Partition(vec![k]) };
    let mut f = SymFunc::zero(Basis::H, cap);
    for a in 0..r {
        for b in 0..r {
            f.add_term(h(a).union(&h(b)), BigRational::one());
        }
    }
    for k in 0..r {
        f.add_term(h(r + k), BigRational::from_integer((k + 1).into()));
    }
    for k in 1..r {
        f.add_term(h(2 * r - 1 + k), BigRational::from_integer((r - k).into()));
    }
    f
}

/// `(n-k)/(n+k) * C(n+k, k)`.
pub fn ballot_number(n: u32, k: u32) -> BigRational {
    let c: BigInt = (0..k).fold(BigInt::one(), |acc, i| acc * (n + k - i) / (i + 1));
    BigRational::new(BigInt::from(n as i64 - k as i64) * c, BigInt::from(n + k))
}

/// Coefficients of `((1-q^r)/(1-q))^n * Σ_k ballot(n, k) q^{rk}`.
pub fn ell1_closed_form(r: u32, n: u32) -> Vec<BigInt> {
    let mut base = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::zero(); base.len() + r as usize - 1];
        for (i, c) in base.iter().enumerate() {
            for j in 0..r as usize {
                next[i + j] += c;
            }
        }
        base = next;
    }
    let mut out = vec![BigInt::zero(); base.len() + (r * n) as usize];
    for k in 0..n {
        let b = ballot_number(n, k);
        assert!(b.is_integer());
        let b = b.to_integer();
        for (i, c) in base.iter().enumerate() {
            out[i + (r * k) as usize] += c * &b;
        }
    }
    while out.len() > 1 && out.last().is_some_and(|x| x.is_zero()) {
        out.pop();
    }
    out
}

/// Outcome of an `h`-positivity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPositivityReport {
    pub negatives: Vec<(Partition, BigRational)>,
    pub threshold_degree: u32,
    /// Whether every resolved coefficient in degrees below the threshold
    /// is nonnegative; `None` when some such degree could not be resolved.
    pub nonnegative_below_threshold: Option<bool>,
    /// Degrees whose `h`-coefficients are not determined by the input.
    pub unresolved_degrees: Vec<u32>,
}

impl HPositivityReport {
    pub fn is_partial(&self) -> bool {
        !self.unresolved_degrees.is_empty()
    }

    pub fn is_h_positive(&self) -> Option<bool> {
        if self.is_partial() {
            None
        } else {
            Some(self.negatives.is_empty())
        }
    }
}

/// Negative `h`-coefficients of `f`, and whether all degrees strictly below
/// `threshold_degree` are free of them.
pub fn h_positivity_report(f: &SymFunc, threshold_degree: u32) -> Result<HPositivityReport, SymError> {
    let mut negatives = Vec::new();
    let mut unresolved = Vec::new();
    for d in 0..=f.degree_cap() {
        match f.convert_degree(Basis::H, d) {
            Ok(terms) => negatives.extend(terms.into_iter().filter(|(_, c)| c.is_negative())),
            Err(SymError::Invisible { .. }) => unresolved.push(d),
            Err(e) => return Err(e),
        }
    }
    let below = if unresolved.iter().any(|&d| d < threshold_degree) {
        None
    } else {
        Some(negatives.iter().all(|(p, _)| p.size() >= threshold_degree))
    };
    Ok(HPositivityReport { negatives, threshold_degree, nonnegative_below_threshold: below, unresolved_degrees: unresolved })
}

/// Smallest integer degree not below `n/2`.
pub fn conjecture_threshold(n: u32) -> u32 {
    n.div_ceil(2)
}
