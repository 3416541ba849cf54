//! Multigraded Hilbert series of `R/J`, where `R` is the polynomial ring in
//! an `ell x n` grid of variables and `J` is generated by a family of
//! multihomogeneous polynomials without constant term.
//!
//! The main engine works one multidegree at a time. For `d != 0` it forms
//! the formal space `W_d` spanned by tokens `x_ij * s` with `s` a standard
//! basis element of `(R/J)_{d - e_i}`. Every monomial of degree `d` has one
//! image in `W_d` per way of splitting off a variable, and
//! `(R/J)_d = W_d / K_d` where `K_d` is spanned by the differences of those
//! images together with the images of generators of degree exactly `d`.
//! The non-pivot tokens of an echelon form of `K_d` are the standard basis
//! at `d`, and reducing an image gives the normal form used one level up.
//!
//! A direct route that ranks the full spanning set `{m * g}` of `J_d` is
//! kept as an independent reference.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{random_primes, rank_of, Field, PrimeField, Rationals, Rref, SparseVec};
use crate::polyring::{Monomial, Polynomial};
use crate::quasi::{monomial_quasi_invariant, QuasiError};
use crate::shapes::{rcompositions_of_degree, DegreeVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HilbertError {
    #[error("invalid group G({r}, {n}): r and n must be positive")]
    InvalidGroup { r: u32, n: usize },
    #[error("ell must be positive")]
    ZeroEll,
    #[error("degree {d} has {monomials} monomials, over the budget of {budget}")]
    Resource { d: DegreeVector, monomials: BigUint, budget: u64 },
    #[error("generator coefficient {0} has no image in {1}")]
    Coefficient(String, String),
    #[error("generator is not multihomogeneous of degree {0}")]
    NotHomogeneous(DegreeVector),
    #[error("modular dimensions disagree at {d}: {a} vs {b}")]
    PrimeDisagreement { d: DegreeVector, a: u64, b: u64 },
    #[error("exact confirmation failed at {d}: modular {modular}, exact {exact}")]
    ConfirmationFailed { d: DegreeVector, modular: u64, exact: u64 },
    #[error("degree vector {0} has the wrong number of components")]
    DegreeShape(DegreeVector),
    #[error("malformed series data: {0}")]
    Parse(String),
    #[error(transparent)]
    Quasi(#[from] QuasiError),
}

/// The group `G(r, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub r: u32,
    pub n: usize,
}

impl GroupSpec {
    pub fn new(r: u32, n: usize) -> Result<Self, HilbertError> {
        if r == 0 || n == 0 {
            return Err(HilbertError::InvalidGroup { r, n });
        }
        Ok(GroupSpec { r, n })
    }

    pub fn symmetric(n: usize) -> Self {
        GroupSpec { r: 1, n }
    }

    /// `2rn - r - n`, the top total degree of a nonzero quotient component.
    pub fn degree_bound(&self) -> u32 {
        let (r, n) = (self.r as i64, self.n as i64);
        (2 * r * n - r - n).max(0) as u32
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({}, {})", self.r, self.n)
    }
}

/// Source of ideal generators of a given multidegree.
pub trait GeneratorSource: Sync {
    /// Generators of `J` whose degree vector is exactly `d` (`d != 0`).
    fn generators(&self, ell: usize, n: usize, d: &DegreeVector) -> Result<Vec<Polynomial>, HilbertError>;

    /// Short label, `None` for the quasi-invariant ideal.
    fn label(&self) -> Option<String> {
        None
    }
}

/// `M_A` for every r-composition matrix `A` with at most `n` columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuasiInvariants {
    pub r: u32,
}

impl GeneratorSource for QuasiInvariants {
    fn generators(&self, _ell: usize, n: usize, d: &DegreeVector) -> Result<Vec<Polynomial>, HilbertError> {
        rcompositions_of_degree(d, self.r, n)
            .iter()
            .map(|a| monomial_quasi_invariant(a, n).map_err(HilbertError::from))
            .collect()
    }
}

/// A source with extra polynomials thrown in.
pub struct Augmented<'a> {
    base: &'a dyn GeneratorSource,
    extra: HashMap<DegreeVector, Vec<Polynomial>>,
}

impl<'a> Augmented<'a> {
    pub fn new(base: &'a dyn GeneratorSource, extra: Vec<Polynomial>) -> Result<Self, HilbertError> {
        let mut map: HashMap<DegreeVector, Vec<Polynomial>> = HashMap::new();
        for p in extra {
            let Some(d) = p.multidegree() else { continue };
            if !p.is_multihomogeneous() {
                return Err(HilbertError::NotHomogeneous(d));
            }
            map.entry(d).or_default().push(p);
        }
        Ok(Augmented { base, extra: map })
    }
}

impl GeneratorSource for Augmented<'_> {
    fn generators(&self, ell: usize, n: usize, d: &DegreeVector) -> Result<Vec<Polynomial>, HilbertError> {
        let mut out = self.base.generators(ell, n, d)?;
        if let Some(extra) = self.extra.get(d) {
            out.extend(extra.iter().cloned());
        }
        Ok(out)
    }

    fn label(&self) -> Option<String> {
        self.base.label()
    }
}

/// All quasi-invariant generators `M_A` of total degree `1..=cap`.
pub fn ideal_generators(w: GroupSpec, ell: usize, cap: u32) -> Vec<Polynomial> {
    let src = QuasiInvariants { r: w.r };
    (1..=cap)
        .flat_map(|t| DegreeVector::all_with_total(ell, t))
        .flat_map(|d| src.generators(ell, w.n, &d).expect("compositions fit in n columns"))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    /// Exact arithmetic over `Q` throughout.
    Exact,
    /// Two random primes in `(2^30, 2^31)` that must agree, then an exact
    /// rerun over every degree of total at most `confirm_total`.
    Modular { confirm_total: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub rank: RankMode,
    /// Largest number of monomials allowed in a single multidegree.
    pub max_monomials: u64,
    pub seed: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { rank: RankMode::Exact, max_monomials: 50_000_000, seed: 0x5eed }
    }
}

impl EngineConfig {
    pub fn modular(confirm_total: u32) -> Self {
        EngineConfig { rank: RankMode::Modular { confirm_total }, ..Default::default() }
    }
}

/// `dim R_d = prod_i C(d_i + n - 1, n - 1)`.
pub fn ambient_dim(d: &DegreeVector, n: usize) -> BigUint {
    d.components().iter().map(|&k| binomial(k as u64 + n as u64 - 1, n as u64 - 1)).product()
}

fn binomial(a: u64, b: u64) -> BigUint {
    let b = b.min(a - b);
    let mut acc = BigUint::from(1u32);
    for k in 0..b {
        acc = acc * BigUint::from(a - k) / BigUint::from(k + 1);
    }
    acc
}

fn check_budget(d: &DegreeVector, n: usize, budget: u64) -> Result<(), HilbertError> {
    let m = ambient_dim(d, n);
    if m > BigUint::from(budget) {
        return Err(HilbertError::Resource { d: d.clone(), monomials: m, budget });
    }
    Ok(())
}

fn to_field<F: Field>(field: &F, c: &BigRational) -> Result<F::Elem, HilbertError> {
    field.from_rational(c).ok_or_else(|| HilbertError::Coefficient(c.to_string(), field.name()))
}

/// Normal forms at one multidegree; monomials absent from `nf` reduce to 0.
struct Level<E> {
    dim: usize,
    nf: HashMap<Monomial, SparseVec<E>>,
}

fn unit(ell: usize, i: usize) -> DegreeVector {
    let mut v = vec![0; ell];
    v[i] = 1;
    DegreeVector(v)
}

fn plus(a: &DegreeVector, b: &DegreeVector) -> DegreeVector {
    DegreeVector(a.components().iter().zip(b.components()).map(|(x, y)| x + y).collect())
}

fn accumulate<F: Field>(field: &F, items: impl IntoIterator<Item = (u32, F::Elem)>) -> SparseVec<F::Elem> {
    let mut acc: BTreeMap<u32, F::Elem> = BTreeMap::new();
    for (c, v) in items {
        match acc.get_mut(&c) {
            Some(x) => *x = field.add(x, &v),
            None => {
                acc.insert(c, v);
            }
        }
    }
    acc.into_iter().filter(|(_, v)| !field.is_zero(v)).collect()
}

struct LevelInput<'a, F: Field> {
    field: &'a F,
    n: usize,
    ell: usize,
    source: &'a dyn GeneratorSource,
    prev: &'a HashMap<DegreeVector, Level<F::Elem>>,
    budget: u64,
}

impl<F: Field> LevelInput<'_, F> {
    fn process(&self, d: &DegreeVector, need_nf: bool) -> Result<Level<F::Elem>, HilbertError> {
        let (field, n, ell) = (self.field, self.n, self.ell);
        // token layout: block (i, j) holds x_ij * S_{d - e_i}
        let mut offset = vec![0u32; ell];
        let mut sub_dim = vec![0usize; ell];
        let mut width = 0usize;
        let mut subs: Vec<Option<&Level<F::Elem>>> = vec![None; ell];
        for i in 0..ell {
            if let Some(sub) = d.minus_unit(i) {
                let lvl = &self.prev[&sub];
                offset[i] = width as u32;
                sub_dim[i] = lvl.dim;
                width += n * lvl.dim;
                subs[i] = Some(lvl);
            }
        }
        if width == 0 {
            return Ok(Level { dim: 0, nf: HashMap::new() });
        }
        check_budget(d, n, self.budget)?;

        let image = |m: &Monomial, i: usize, j: usize| -> SparseVec<F::Elem> {
            let q = m.div_var(i, j).expect("variable divides monomial");
            let base = offset[i] + (j * sub_dim[i]) as u32;
            match subs[i].and_then(|l| l.nf.get(&q)) {
                Some(v) => v.iter().map(|(s, c)| (base + s, c.clone())).collect(),
                None => Vec::new(),
            }
        };
        let first_factor = |m: &Monomial| -> (usize, usize) {
            let k = m.exponents().iter().position(|&e| e > 0).expect("nonconstant");
            (k % ell, k / ell)
        };

        let mut rref = Rref::new(field.clone(), width);
        let mut ws = rref.workspace();
        for g in self.source.generators(ell, n, d)? {
            if rref.is_full() {
                break;
            }
            let mut items = Vec::new();
            for (m, c) in g.terms() {
                if m.degree_vector() != *d {
                    return Err(HilbertError::NotHomogeneous(d.clone()));
                }
                let c = to_field(field, c)?;
                let (i, j) = first_factor(m);
                items.extend(image(m, i, j).into_iter().map(|(s, v)| (s, field.mul(&c, &v))));
            }
            let v = accumulate(field, items);
            rref.insert(&v, &mut ws);
        }

        let monomials = Monomial::all_of_degree(d, n);
        for m in &monomials {
            if rref.is_full() {
                break;
            }
            let mut factors = m.exponents().iter().enumerate().filter(|(_, &e)| e > 0).map(|(k, _)| (k % ell, k / ell));
            let (i0, j0) = factors.next().expect("nonconstant");
            let v0 = image(m, i0, j0);
            for (i, j) in factors {
                let v = image(m, i, j);
                let diff = accumulate(field, v.into_iter().chain(v0.iter().map(|(s, c)| (*s, field.neg(c)))));
                if !diff.is_empty() {
                    rref.insert(&diff, &mut ws);
                }
            }
        }

        let dim = width - rref.rank();
        let mut nf = HashMap::new();
        if need_nf && dim > 0 {
            let mut standard = vec![u32::MAX; width];
            let mut next = 0u32;
            for (c, slot) in standard.iter_mut().enumerate() {
                if !rref.is_pivot(c) {
                    *slot = next;
                    next += 1;
                }
            }
            for m in monomials {
                let (i, j) = first_factor(&m);
                let red = rref.reduce(&image(&m, i, j), &mut ws);
                if !red.is_empty() {
                    let v: SparseVec<F::Elem> = red.into_iter().map(|(c, x)| (standard[c as usize], x)).collect();
                    nf.insert(m, v);
                }
            }
        }
        Ok(Level { dim, nf })
    }
}

/// Quotient dimensions over a downward-closed set of multidegrees.
pub fn dims_over<F: Field>(
    field: &F,
    n: usize,
    ell: usize,
    source: &dyn GeneratorSource,
    degrees: &[DegreeVector],
    budget: u64,
) -> Result<BTreeMap<DegreeVector, u64>, HilbertError> {
    let wanted: HashSet<&DegreeVector> = degrees.iter().collect();
    let mut by_total: BTreeMap<u32, Vec<DegreeVector>> = BTreeMap::new();
    for d in degrees {
        if d.ell() != ell {
            return Err(HilbertError::DegreeShape(d.clone()));
        }
        by_total.entry(d.total()).or_default().push(d.clone());
    }
    let mut out = BTreeMap::new();
    let mut prev: HashMap<DegreeVector, Level<F::Elem>> = HashMap::new();
    for (total, level_degrees) in by_total {
        let cur: Vec<(DegreeVector, Level<F::Elem>)> = if total == 0 {
            let mut nf = HashMap::new();
            nf.insert(Monomial::one(ell, n), vec![(0u32, field.one())]);
            vec![(DegreeVector::zero(ell), Level { dim: 1, nf })]
        } else {
            let input = LevelInput { field, n, ell, source, prev: &prev, budget };
            level_degrees
                .par_iter()
                .map(|d| {
                    let need_nf = (0..ell).any(|i| wanted.contains(&plus(d, &unit(ell, i))));
                    input.process(d, need_nf).map(|l| (d.clone(), l))
                })
                .collect::<Result<_, _>>()?
        };
        prev = HashMap::with_capacity(cur.len());
        for (d, lvl) in cur {
            out.insert(d.clone(), lvl.dim as u64);
            prev.insert(d, lvl);
        }
    }
    Ok(out)
}

/// `dim R_d - rank J_d` with `J_d` spanned by every `m * g`, `g` a generator
/// of degree `e <= d` and `m` a monomial of degree `d - e`.
pub fn direct_quotient_dim<F: Field>(
    field: &F,
    n: usize,
    source: &dyn GeneratorSource,
    d: &DegreeVector,
    budget: u64,
) -> Result<u64, HilbertError> {
    let ell = d.ell();
    if d.total() == 0 {
        return Ok(1);
    }
    check_budget(d, n, budget)?;
    let monomials = Monomial::all_of_degree(d, n);
    let index: HashMap<&Monomial, u32> = monomials.iter().enumerate().map(|(k, m)| (m, k as u32)).collect();
    let mut rows = Vec::new();
    for e in d.box_below() {
        if e.total() == 0 {
            continue;
        }
        let gens = source.generators(ell, n, &e)?;
        if gens.is_empty() {
            continue;
        }
        let cofactors = Monomial::all_of_degree(&d.checked_sub(&e).expect("e <= d"), n);
        for g in &gens {
            let coeffs: Vec<(&Monomial, F::Elem)> =
                g.terms().map(|(m, c)| to_field(field, c).map(|x| (m, x))).collect::<Result<_, _>>()?;
            for cf in &cofactors {
                let mut row: SparseVec<F::Elem> = coeffs.iter().map(|(m, c)| (index[&m.mul(cf)], c.clone())).collect();
                row.sort_unstable_by_key(|e| e.0);
                rows.push(row);
            }
        }
    }
    let rank = rank_of(field.clone(), monomials.len(), rows);
    Ok((monomials.len() - rank) as u64)
}

/// Runs [`dims_over`] according to the configured rank mode.
pub fn dims_with_config(
    n: usize,
    ell: usize,
    source: &dyn GeneratorSource,
    degrees: &[DegreeVector],
    cfg: &EngineConfig,
) -> Result<BTreeMap<DegreeVector, u64>, HilbertError> {
    match cfg.rank {
        RankMode::Exact => dims_over(&Rationals, n, ell, source, degrees, cfg.max_monomials),
        RankMode::Modular { confirm_total } => {
            let primes = random_primes(cfg.seed, 2);
            let a = dims_over(&PrimeField::new(primes[0]), n, ell, source, degrees, cfg.max_monomials)?;
            let b = dims_over(&PrimeField::new(primes[1]), n, ell, source, degrees, cfg.max_monomials)?;
            for (d, x) in &a {
                if b[d] != *x {
                    return Err(HilbertError::PrimeDisagreement { d: d.clone(), a: *x, b: b[d] });
                }
            }
            let small: Vec<DegreeVector> = degrees.iter().filter(|d| d.total() <= confirm_total).cloned().collect();
            let exact = dims_over(&Rationals, n, ell, source, &small, cfg.max_monomials)?;
            for (d, x) in &exact {
                if a[d] != *x {
                    return Err(HilbertError::ConfirmationFailed { d: d.clone(), modular: a[d], exact: *x });
                }
            }
            Ok(a)
        }
    }
}

/// Truncated multigraded Hilbert series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    pub group: GroupSpec,
    pub ell: usize,
    pub max_total_degree: u32,
    /// `None` for the quasi-invariant ideal.
    pub ideal: Option<String>,
    pub dims: BTreeMap<DegreeVector, u64>,
}

#[derive(Serialize, Deserialize)]
struct DimEntry {
    d: Vec<u32>,
    dim: u64,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    group: GroupSpec,
    ell: usize,
    cap: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    ideal: Option<String>,
    dims: Vec<DimEntry>,
}

impl HilbertSeries {
    /// `None` above the truncation degree.
    pub fn get(&self, d: &DegreeVector) -> Option<u64> {
        if d.total() > self.max_total_degree {
            return None;
        }
        Some(self.dims.get(d).copied().unwrap_or(0))
    }

    /// Sum of dims in each total degree `0..=max_total_degree`.
    pub fn by_total_degree(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.max_total_degree as usize + 1];
        for (d, v) in &self.dims {
            out[d.total() as usize] += v;
        }
        out
    }

    /// Total dimension of the truncated quotient.
    pub fn total_dim(&self) -> u64 {
        self.dims.values().sum()
    }

    /// Largest total degree carrying a nonzero dimension.
    pub fn top_degree(&self) -> u32 {
        self.dims.iter().filter(|(_, &v)| v > 0).map(|(d, _)| d.total()).max().unwrap_or(0)
    }

    /// Whether every dimension is invariant under permuting degree components.
    pub fn is_permutation_symmetric(&self) -> bool {
        self.dims.iter().all(|(d, v)| {
            let mut sorted = d.components().to_vec();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            self.dims.get(&DegreeVector(sorted)) == Some(v)
        })
    }

    pub fn to_json(&self) -> String {
        let j = SeriesJson {
            group: self.group,
            ell: self.ell,
            cap: self.max_total_degree,
            ideal: self.ideal.clone(),
            dims: self.dims.iter().map(|(d, &dim)| DimEntry { d: d.0.clone(), dim }).collect(),
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, HilbertError> {
        let j: SeriesJson = serde_json::from_str(s).map_err(|e| HilbertError::Parse(e.to_string()))?;
        let mut dims = BTreeMap::new();
        for e in j.dims {
            if e.d.len() != j.ell {
                return Err(HilbertError::DegreeShape(DegreeVector(e.d)));
            }
            dims.insert(DegreeVector(e.d), e.dim);
        }
        Ok(HilbertSeries { group: j.group, ell: j.ell, max_total_degree: j.cap, ideal: j.ideal, dims })
    }

    pub fn to_csv(&self) -> String {
        let mut s: String = (1..=self.ell).map(|i| format!("d{i},")).collect();
        s.push_str("dim\n");
        for (d, v) in &self.dims {
            for x in d.components() {
                s.push_str(&format!("{x},"));
            }
            s.push_str(&format!("{v}\n"));
        }
        s
    }
}

/// Series of `R/J` for an arbitrary generator source, over all degrees of
/// total at most `cap`.
pub fn series_for_source(
    group: GroupSpec,
    ell: usize,
    source: &dyn GeneratorSource,
    cap: u32,
    cfg: &EngineConfig,
) -> Result<HilbertSeries, HilbertError> {
    if ell == 0 {
        return Err(HilbertError::ZeroEll);
    }
    let degrees: Vec<DegreeVector> = (0..=cap).flat_map(|t| DegreeVector::all_with_total(ell, t)).collect();
    let dims = dims_with_config(group.n, ell, source, &degrees, cfg)?;
    Ok(HilbertSeries { group, ell, max_total_degree: cap, ideal: source.label(), dims })
}

/// Multigraded Hilbert series of the co-quasi-invariant quotient, truncated
/// at `cap` (default: the degree bound `2rn - r - n`).
pub fn hilbert_series(w: GroupSpec, ell: usize, cap: Option<u32>, cfg: &EngineConfig) -> Result<HilbertSeries, HilbertError> {
    let cap = cap.unwrap_or_else(|| w.degree_bound());
    series_for_source(w, ell, &QuasiInvariants { r: w.r }, cap, cfg)
}

/// Dimension of the quotient at one multidegree.
pub fn quotient_dim(w: GroupSpec, ell: usize, d: &DegreeVector, cfg: &EngineConfig) -> Result<u64, HilbertError> {
    if d.ell() != ell {
        return Err(HilbertError::DegreeShape(d.clone()));
    }
    let dims = dims_with_config(w.n, ell, &QuasiInvariants { r: w.r }, &d.box_below(), cfg)?;
    Ok(dims[d])
}

/// Whether the quotient vanishes in total degrees `bound + 1` and `bound + 2`.
pub fn verify_degree_bound(w: GroupSpec, ell: usize, cfg: &EngineConfig) -> Result<bool, HilbertError> {
    let s = hilbert_series(w, ell, Some(w.degree_bound() + 2), cfg)?;
    Ok(s.dims.iter().all(|(d, &v)| d.total() <= w.degree_bound() || v == 0))
}
