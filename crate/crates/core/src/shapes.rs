//! Integer index matrices: r-matrices, r-composition matrices, colored
//! compositions, and the column decompositions feeding the `G[A]` family.
//!
//! Every matrix is stored column-major, so the entries slice *is* the
//! reading word (columns left to right, each column top to bottom).

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("matrix must have at least one row")]
    NoRows,
    #[error("column {col} has {got} entries, expected {expected}")]
    RaggedColumn { col: usize, got: usize, expected: usize },
    #[error("column {col} sums to {sum}, which is not divisible by r = {r}")]
    ColumnNotDivisible { col: usize, sum: u32, r: u32 },
    #[error("r must be positive")]
    ZeroModulus,
    #[error("the last column of an r-matrix must be nonzero")]
    TrailingZeroColumn,
    #[error("column {0} of an r-composition has zero sum")]
    ZeroColumn(usize),
    #[error("reading word has a run of {ell} consecutive zeros ending at position {pos}")]
    ZeroRun { ell: usize, pos: usize },
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("vector entry sum {sum} is not divisible by r = {r}")]
    VectorNotDivisible { sum: u32, r: u32 },
    #[error("row count mismatch: {0} vs {1}")]
    RowMismatch(usize, usize),
}

/// A vector in `N^ℓ`, used for multidegrees `d` and row sums.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeVector(pub Vec<u32>);

impl DegreeVector {
    pub fn zero(ell: usize) -> Self {
        DegreeVector(vec![0; ell])
    }

    pub fn ell(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DegreeVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self - e_i`, or `None` when component `i` is zero.
    pub fn minus_unit(&self, i: usize) -> Option<DegreeVector> {
        let mut v = self.0.clone();
        v[i] = v[i].checked_sub(1)?;
        Some(DegreeVector(v))
    }

    pub fn checked_sub(&self, other: &DegreeVector) -> Option<DegreeVector> {
        if !other.le(self) {
            return None;
        }
        Some(DegreeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// Sorted into weakly decreasing order, trailing zeros dropped.
    pub fn sorted_parts(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.0.iter().copied().filter(|&x| x > 0).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// All degree vectors of length `ell` with the given total, in
    /// lexicographically decreasing order.
    pub fn all_with_total(ell: usize, total: u32) -> Vec<DegreeVector> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; ell];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<DegreeVector>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(DegreeVector(cur.clone()));
                return;
            }
            for v in (0..=left).rev() {
                cur[i] = v;
                rec(i + 1, left - v, cur, out);
            }
        }
        if ell > 0 {
            rec(0, total, &mut cur, &mut out);
        }
        out
    }

    /// All `e` with `0 <= e <= self` componentwise.
    pub fn box_below(&self) -> Vec<DegreeVector> {
        let mut out = vec![Vec::new()];
        for &c in &self.0 {
            out = out
                .into_iter()
                .flat_map(|p: Vec<u32>| {
                    (0..=c).map(move |v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(DegreeVector).collect()
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// An `ℓ × k` matrix of nonnegative integers, stored column-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl IntMatrix {
    pub fn from_columns<C: AsRef<[u32]>>(rows: usize, columns: &[C]) -> Result<Self, ShapeError> {
        if rows == 0 {
            return Err(ShapeError::NoRows);
        }
        let mut entries = Vec::with_capacity(rows * columns.len());
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            if c.len() != rows {
                return Err(ShapeError::RaggedColumn { col: j, got: c.len(), expected: rows });
            }
            entries.extend_from_slice(c);
        }
        Ok(IntMatrix { rows, cols: columns.len(), entries })
    }

    /// Builds a matrix from its rows, the way matrices are usually written down.
    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self, ShapeError> {
        if rows.is_empty() {
            return Err(ShapeError::NoRows);
        }
        let cols = rows[0].as_ref().len();
        let mut entries = vec![0; rows.len() * cols];
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(ShapeError::RaggedColumn { col: i, got: r.len(), expected: cols });
            }
            for (j, &x) in r.iter().enumerate() {
                entries[j * rows.len() + i] = x;
            }
        }
        Ok(IntMatrix { rows: rows.len(), cols, entries })
    }

    pub fn from_reading_word(rows: usize, word: Vec<u32>) -> Result<Self, ShapeError> {
        if rows == 0 {
            return Err(ShapeError::NoRows);
        }
        if !word.len().is_multiple_of(rows) {
            return Err(ShapeError::RaggedColumn {
                col: word.len() / rows,
                got: word.len() % rows,
                expected: rows,
            });
        }
        Ok(IntMatrix { rows, cols: word.len() / rows, entries: word })
    }

    pub fn empty(rows: usize) -> Self {
        assert!(rows > 0);
        IntMatrix { rows, cols: 0, entries: Vec::new() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0);
        IntMatrix { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[j * self.rows + i]
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.entries[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.entries.chunks_exact(self.rows)
    }

    pub fn reading_word(&self) -> &[u32] {
        &self.entries
    }

    pub fn total(&self) -> u32 {
        self.entries.iter().sum()
    }

    pub fn row_sums(&self) -> DegreeVector {
        let mut d = vec![0u32; self.rows];
        for c in self.columns() {
            for (s, x) in d.iter_mut().zip(c) {
                *s += x;
            }
        }
        DegreeVector(d)
    }

    pub fn column_sum(&self, j: usize) -> u32 {
        self.column(j).iter().sum()
    }

    pub fn concat(&self, other: &IntMatrix) -> Result<IntMatrix, ShapeError> {
        if self.rows != other.rows {
            return Err(ShapeError::RowMismatch(self.rows, other.rows));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(IntMatrix { rows: self.rows, cols: self.cols + other.cols, entries })
    }

    pub fn push_column(&mut self, col: &[u32]) {
        assert_eq!(col.len(), self.rows);
        self.entries.extend_from_slice(col);
        self.cols += 1;
    }

    /// Columns `range` as a new matrix.
    pub fn slice(&self, start: usize, end: usize) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: end - start,
            entries: self.entries[start * self.rows..end * self.rows].to_vec(),
        }
    }

    /// Zero-pads on the right up to `cols` columns.
    pub fn padded(&self, cols: usize) -> IntMatrix {
        let mut m = self.clone();
        if cols > m.cols {
            m.entries.resize(cols * m.rows, 0);
            m.cols = cols;
        }
        m
    }

    /// Removes trailing zero columns.
    pub fn trimmed(&self) -> IntMatrix {
        let mut cols = self.cols;
        while cols > 0 && self.column(cols - 1).iter().all(|&x| x == 0) {
            cols -= 1;
        }
        self.slice(0, cols)
    }

    pub fn is_zero_column(&self, j: usize) -> bool {
        self.column(j).iter().all(|&x| x == 0)
    }

    /// Replaces columns `j` and `j+1` by their sum.
    pub fn merge_adjacent(&self, j: usize) -> IntMatrix {
        let mut out = IntMatrix::empty(self.rows);
        for (k, c) in self.columns().enumerate() {
            if k == j + 1 {
                continue;
            }
            if k == j {
                let s: Vec<u32> = c.iter().zip(self.column(j + 1)).map(|(a, b)| a + b).collect();
                out.push_column(&s);
            } else {
                out.push_column(c);
            }
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    /// Row-wise bracket notation, e.g. `[2 1; 2 3]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<u32>>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.columns().map(|c| c.to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawMatrix::deserialize(d)?;
        if raw.entries.len() != raw.cols {
            return Err(D::Error::custom(format!(
                "cols = {} but {} columns given",
                raw.cols,
                raw.entries.len()
            )));
        }
        IntMatrix::from_columns(raw.rows, &raw.entries).map_err(D::Error::custom)
    }
}

/// An integer matrix whose column sums are all divisible by `r`, with a
/// nonzero last column. Internal zero columns are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RMatrix {
    base: IntMatrix,
    r: u32,
}

impl RMatrix {
    pub fn new(base: IntMatrix, r: u32) -> Result<Self, ShapeError> {
        if r == 0 {
            return Err(ShapeError::ZeroModulus);
        }
        for j in 0..base.cols() {
            let sum = base.column_sum(j);
            if !sum.is_multiple_of(r) {
                return Err(ShapeError::ColumnNotDivisible { col: j, sum, r });
            }
        }
        if base.cols() > 0 && base.is_zero_column(base.cols() - 1) {
            return Err(ShapeError::TrailingZeroColumn);
        }
        Ok(RMatrix { base, r })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.base
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn len(&self) -> usize {
        self.base.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.base.cols() == 0
    }

    /// Sum of all entries divided by `r`.
    pub fn r_size(&self) -> u32 {
        self.base.total() / self.r
    }

    /// True iff some prefix of `j >= 1` columns has r-size at least `j`.
    pub fn is_trans(&self) -> bool {
        let mut acc = 0u32;
        for (j, c) in self.base.columns().enumerate() {
            acc += c.iter().sum::<u32>();
            if acc / self.r >= (j + 1) as u32 {
                return true;
            }
        }
        false
    }

    pub fn is_composition(&self) -> bool {
        (0..self.len()).all(|j| !self.base.is_zero_column(j))
    }

    /// The factorization `B 0 V C` around the rightmost zero column, if any.
    pub fn split_at_rightmost_zero(&self) -> Option<ZeroSplit> {
        let z = (0..self.len()).rev().find(|&j| self.base.is_zero_column(j))?;
        // the last column is nonzero, so V exists
        Some(ZeroSplit {
            head: self.base.slice(0, z),
            pivot: self.base.column(z + 1).to_vec(),
            tail: self.base.slice(z + 2, self.len()),
        })
    }
}

/// `A = head · 0 · pivot · tail` where the zero column is the rightmost one
/// and `tail` is zero-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroSplit {
    pub head: IntMatrix,
    pub pivot: Vec<u32>,
    pub tail: IntMatrix,
}

impl ZeroSplit {
    /// Index of the zero column (0-based), i.e. the length of `head`.
    pub fn zero_index(&self) -> usize {
        self.head.cols()
    }
}

/// An r-matrix with no zero column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RComposition(RMatrix);

impl RComposition {
    pub fn new(base: IntMatrix, r: u32) -> Result<Self, ShapeError> {
        let m = RMatrix::new(base, r)?;
        if let Some(j) = (0..m.len()).find(|&j| m.base.is_zero_column(j)) {
            return Err(ShapeError::ZeroColumn(j));
        }
        Ok(RComposition(m))
    }

    pub fn as_rmatrix(&self) -> &RMatrix {
        &self.0
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0.base
    }

    pub fn r(&self) -> u32 {
        self.0.r
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> DegreeVector {
        self.0.base.row_sums()
    }
}

impl TryFrom<RMatrix> for RComposition {
    type Error = ShapeError;

    fn try_from(m: RMatrix) -> Result<Self, ShapeError> {
        RComposition::new(m.base, m.r)
    }
}

/// An `ℓ × p` matrix whose reading word has no run of `ℓ` consecutive zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ColoredComposition(IntMatrix);

impl ColoredComposition {
    pub fn new(base: IntMatrix) -> Result<Self, ShapeError> {
        let ell = base.rows();
        let mut run = 0;
        for (pos, &x) in base.reading_word().iter().enumerate() {
            run = if x == 0 { run + 1 } else { 0 };
            if run >= ell {
                return Err(ShapeError::ZeroRun { ell, pos });
            }
        }
        Ok(ColoredComposition(base))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.0.cols() == 0
    }

    pub fn degree(&self) -> DegreeVector {
        self.0.row_sums()
    }
}

fn check_r_vector(v: &[u32], r: u32) -> Result<(), ShapeError> {
    if r == 0 {
        return Err(ShapeError::ZeroModulus);
    }
    let sum: u32 = v.iter().sum();
    if sum == 0 {
        return Err(ShapeError::ZeroVector);
    }
    if !sum.is_multiple_of(r) {
        return Err(ShapeError::VectorNotDivisible { sum, r });
    }
    Ok(())
}

/// `A(V)`: the lexicographically largest matrix whose columns have r-size
/// one, sum to `V`, and decrease weakly from left to right.
///
/// Each column is filled greedily from the top with `min(remaining, budget)`.
pub fn canonical_decomposition(v: &[u32], r: u32) -> Result<IntMatrix, ShapeError> {
    check_r_vector(v, r)?;
    let mut rest = v.to_vec();
    let mut out = IntMatrix::empty(v.len());
    while rest.iter().any(|&x| x > 0) {
        let mut budget = r;
        let col: Vec<u32> = rest
            .iter_mut()
            .map(|x| {
                let take = (*x).min(budget);
                budget -= take;
                *x -= take;
                take
            })
            .collect();
        out.push_column(&col);
    }
    Ok(out)
}

/// First column of `A(V)`.
pub fn theta(v: &[u32], r: u32) -> Result<Vec<u32>, ShapeError> {
    Ok(canonical_decomposition(v, r)?.column(0).to_vec())
}

/// `V - θ(V)`.
pub fn delta(v: &[u32], r: u32) -> Result<Vec<u32>, ShapeError> {
    let t = theta(v, r)?;
    Ok(v.iter().zip(&t).map(|(a, b)| a - b).collect())
}

/// `S(V)`: closure of `{A(V)}` under merging two adjacent columns.
pub fn closure_set(v: &[u32], r: u32) -> Result<Vec<IntMatrix>, ShapeError> {
    let start = canonical_decomposition(v, r)?;
    let mut seen = BTreeSet::new();
    let mut stack = vec![start];
    while let Some(m) = stack.pop() {
        if !seen.insert(m.clone()) {
            continue;
        }
        for j in 0..m.cols().saturating_sub(1) {
            let merged = m.merge_adjacent(j);
            if !seen.contains(&merged) {
                stack.push(merged);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// `S(A)`: all concatenations `B_1 ⋯ B_k` with `B_i ∈ S(A_i)`.
pub fn composition_closure(a: &RComposition) -> Vec<IntMatrix> {
    let mut acc: BTreeSet<IntMatrix> = BTreeSet::new();
    acc.insert(IntMatrix::empty(a.matrix().rows()));
    for col in a.matrix().columns() {
        let options = closure_set(col, a.r()).expect("composition columns are valid r-vectors");
        let mut next = BTreeSet::new();
        for prefix in &acc {
            for b in &options {
                next.insert(prefix.concat(b).expect("same row count"));
            }
        }
        acc = next;
    }
    acc.into_iter().collect()
}

/// All nonzero columns `c <= bound` (componentwise) with `sum(c) ≡ 0 mod r`.
fn columns_below(bound: &[u32], r: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; bound.len()];
    fn rec(i: usize, bound: &[u32], r: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == bound.len() {
            let s: u32 = cur.iter().sum();
            if s > 0 && s.is_multiple_of(r) {
                out.push(cur.clone());
            }
            return;
        }
        for x in 0..=bound[i] {
            cur[i] = x;
            rec(i + 1, bound, r, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, bound, r, &mut cur, &mut out);
    out
}

/// Every r-composition matrix with row sums `d` and at most `max_len` columns.
pub fn rcompositions_of_degree(d: &DegreeVector, r: u32, max_len: usize) -> Vec<RComposition> {
    let ell = d.ell();
    let mut out = Vec::new();
    let mut current = IntMatrix::empty(ell);
    fn rec(
        rest: &[u32],
        r: u32,
        max_len: usize,
        current: &mut IntMatrix,
        out: &mut Vec<RComposition>,
    ) {
        if rest.iter().all(|&x| x == 0) {
            if current.cols() > 0 {
                out.push(RComposition::new(current.clone(), r).expect("built valid"));
            }
            return;
        }
        if current.cols() == max_len {
            return;
        }
        for c in columns_below(rest, r) {
            let next: Vec<u32> = rest.iter().zip(&c).map(|(a, b)| a - b).collect();
            current.push_column(&c);
            rec(&next, r, max_len, current, out);
            *current = current.slice(0, current.cols() - 1);
        }
    }
    rec(d.components(), r, max_len, &mut current, &mut out);
    out
}

/// Every colored composition with row sums `d` and at most `max_len` columns.
pub fn colored_compositions_of_degree(d: &DegreeVector, max_len: usize) -> Vec<ColoredComposition> {
    let ell = d.ell();
    let mut out = Vec::new();
    let mut current = IntMatrix::empty(ell);
    fn rec(
        rest: &[u32],
        trailing: usize,
        max_len: usize,
        current: &mut IntMatrix,
        out: &mut Vec<ColoredComposition>,
    ) {
        let ell = rest.len();
        if rest.iter().all(|&x| x == 0) {
            if current.cols() > 0 {
                out.push(ColoredComposition::new(current.clone()).expect("built valid"));
            }
            return;
        }
        if current.cols() == max_len {
            return;
        }
        for c in columns_below(rest, 1) {
            let leading = c.iter().take_while(|&&x| x == 0).count();
            if trailing + leading >= ell {
                continue;
            }
            let tz = c.iter().rev().take_while(|&&x| x == 0).count();
            let next: Vec<u32> = rest.iter().zip(&c).map(|(a, b)| a - b).collect();
            current.push_column(&c);
            rec(&next, tz, max_len, current, out);
            *current = current.slice(0, current.cols() - 1);
        }
    }
    rec(d.components(), 0, max_len, &mut current, &mut out);
    out
}

/// Every r-matrix (internal zero columns allowed, last column nonzero) with
/// `ell` rows, at most `max_len` columns and entries at most `max_entry`.
pub fn rmatrices_bounded(ell: usize, r: u32, max_len: usize, max_entry: u32) -> Vec<RMatrix> {
    let mut cols: Vec<Vec<u32>> = vec![vec![0; ell]];
    cols.extend(columns_below(&vec![max_entry; ell], r));
    let mut out = Vec::new();
    let mut frontier = vec![IntMatrix::empty(ell)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for m in &frontier {
            for c in &cols {
                let mut m2 = m.clone();
                m2.push_column(c);
                if !m2.is_zero_column(m2.cols() - 1) {
                    out.push(RMatrix::new(m2.clone(), r).expect("built valid"));
                }
                next.push(m2);
            }
        }
        frontier = next;
    }
    out
}
