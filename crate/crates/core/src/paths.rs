//! Dyck paths, `ell`-Dyck paths with long horizontal steps, colored Dyck
//! paths, the bijection `phi` between the last two, and the lattice-path
//! encoding of exponent matrices.
//!
//! Paths are written as strings over `U` (up) and `R` (right; of length
//! `ell` for `ell`-paths).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::polyring::weak_compositions;
use crate::shapes::IntMatrix;
use crate::symfunc::{Partition, SymFunc};

/// Largest number of paths any enumeration will produce.
pub const ENUMERATION_LIMIT: u64 = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("invalid path {0:?}: {1}")]
    Invalid(String, &'static str),
    #[error("invalid coloring: {0}")]
    Coloring(&'static str),
    #[error("{path} is not the image of a colored Dyck path of height {n}: {reason}")]
    NotInImage { path: String, n: usize, reason: &'static str },
    #[error("enumeration of {0} paths exceeds the limit {ENUMERATION_LIMIT}")]
    LimitExceeded(BigUint),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Up,
    Right,
}

fn parse_steps(s: &str) -> Result<Vec<Step>, PathError> {
    s.chars()
        .map(|c| match c {
            'U' | 'u' => Ok(Step::Up),
            'R' | 'r' => Ok(Step::Right),
            _ => Err(PathError::Invalid(s.into(), "steps must be U or R")),
        })
        .collect()
}

fn render_steps(steps: &[Step]) -> String {
    steps.iter().map(|s| if *s == Step::Up { 'U' } else { 'R' }).collect()
}

/// Lattice path from the origin with up steps `(0,1)` and right steps
/// `(ell,0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePath {
    ell: usize,
    steps: Vec<Step>,
}

impl LatticePath {
    pub fn new(ell: usize, steps: Vec<Step>) -> Self {
        assert!(ell > 0);
        LatticePath { ell, steps }
    }

    pub fn parse(ell: usize, s: &str) -> Result<Self, PathError> {
        Ok(LatticePath::new(ell, parse_steps(s)?))
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Every visited lattice point, starting at the origin.
    pub fn points(&self) -> Vec<(usize, usize)> {
        let mut p = (0, 0);
        let mut out = vec![p];
        for s in &self.steps {
            match s {
                Step::Up => p.1 += 1,
                Step::Right => p.0 += self.ell,
            }
            out.push(p);
        }
        out
    }

    pub fn end(&self) -> (usize, usize) {
        *self.points().last().expect("nonempty")
    }

    /// Whether every point satisfies `x <= y`.
    pub fn is_ell_dyck(&self) -> bool {
        self.points().iter().all(|&(x, y)| x <= y)
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_steps(&self.steps))
    }
}

pub fn is_ell_dyck(path: &LatticePath) -> bool {
    path.is_ell_dyck()
}

/// For each entry `a` of the reading word of `a_mat`, `a` right steps of
/// length `ell` followed by one up step.
pub fn pi_encoding(a_mat: &IntMatrix) -> LatticePath {
    let mut steps = Vec::new();
    for &a in a_mat.reading_word() {
        steps.extend(std::iter::repeat_n(Step::Right, a as usize));
        steps.push(Step::Up);
    }
    LatticePath::new(a_mat.rows(), steps)
}

/// Dyck path of height `n` with unit steps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckPath {
    steps: Vec<Step>,
}

impl DyckPath {
    pub fn new(steps: Vec<Step>) -> Result<Self, PathError> {
        let p = LatticePath::new(1, steps);
        let (x, y) = p.end();
        if x != y {
            return Err(PathError::Invalid(p.to_string(), "does not end on the diagonal"));
        }
        if !p.is_ell_dyck() {
            return Err(PathError::Invalid(p.to_string(), "goes below the diagonal"));
        }
        Ok(DyckPath { steps: p.steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn height(&self) -> usize {
        self.steps.len() / 2
    }

    pub fn points(&self) -> Vec<(usize, usize)> {
        LatticePath::new(1, self.steps.clone()).points()
    }

    /// Horizontal-step counts at levels `0..=n`.
    pub fn level_counts(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.height() + 1];
        let mut y = 0;
        for s in &self.steps {
            match s {
                Step::Up => y += 1,
                Step::Right => out[y] += 1,
            }
        }
        out
    }

    /// Nonzero horizontal-step counts at levels `1..n`, in level order.
    pub fn nu(&self) -> Vec<u32> {
        let c = self.level_counts();
        c[1..self.height()].iter().copied().filter(|&a| a > 0).collect()
    }

    pub fn nu_partition(&self) -> Partition {
        Partition::new(self.nu()).expect("positive parts")
    }

    /// x-coordinate of the first point at height `n`.
    pub fn chi(&self) -> u32 {
        let n = self.height();
        self.points().into_iter().find(|p| p.1 == n).map_or(0, |p| p.0 as u32)
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_steps(&self.steps))
    }
}

impl FromStr for DyckPath {
    type Err = PathError;
    fn from_str(s: &str) -> Result<Self, PathError> {
        DyckPath::new(parse_steps(s)?)
    }
}

/// `ell`-Dyck path of height `n * ell`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EllDyckPath(LatticePath);

impl EllDyckPath {
    pub fn new(path: LatticePath) -> Result<Self, PathError> {
        let (x, y) = path.end();
        if x != y || y % path.ell != 0 {
            return Err(PathError::Invalid(path.to_string(), "does not end on the diagonal at a multiple of ell"));
        }
        if !path.is_ell_dyck() {
            return Err(PathError::Invalid(path.to_string(), "goes below the diagonal"));
        }
        Ok(EllDyckPath(path))
    }

    pub fn parse(ell: usize, s: &str) -> Result<Self, PathError> {
        EllDyckPath::new(LatticePath::parse(ell, s)?)
    }

    pub fn path(&self) -> &LatticePath {
        &self.0
    }

    pub fn ell(&self) -> usize {
        self.0.ell
    }

    /// `n`, so that the height is `n * ell`.
    pub fn n(&self) -> usize {
        self.0.end().1 / self.0.ell
    }

    /// Number of right steps at each height `0..=n*ell`.
    pub fn level_profile(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.0.end().1 + 1];
        let mut y = 0;
        for s in &self.0.steps {
            match s {
                Step::Up => y += 1,
                Step::Right => out[y] += 1,
            }
        }
        out
    }
}

impl fmt::Display for EllDyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Dyck path whose horizontal steps below the top level carry colors
/// `1..=ell`, weakly increasing along each level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredDyckPath {
    path: DyckPath,
    ell: usize,
    colors: Vec<u32>,
}

impl ColoredDyckPath {
    /// `colors` lists the colors of the horizontal steps at levels `< n`,
    /// left to right.
    pub fn new(path: DyckPath, ell: usize, colors: Vec<u32>) -> Result<Self, PathError> {
        let counts = path.level_counts();
        let n = path.height();
        let needed: u32 = counts[..n].iter().sum();
        if colors.len() != needed as usize {
            return Err(PathError::Coloring("one color per horizontal step below the top level"));
        }
        if colors.iter().any(|&c| c == 0 || c as usize > ell) {
            return Err(PathError::Coloring("colors must lie in 1..=ell"));
        }
        let mut k = 0;
        for &a in &counts[..n] {
            let level = &colors[k..k + a as usize];
            if level.windows(2).any(|w| w[0] > w[1]) {
                return Err(PathError::Coloring("colors must weakly increase along a level"));
            }
            k += a as usize;
        }
        Ok(ColoredDyckPath { path, ell, colors })
    }

    pub fn path(&self) -> &DyckPath {
        &self.path
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// `a[k-1][j-1]`: number of level-`k` steps of color `j`, `k < n`.
    pub fn color_counts(&self) -> Vec<Vec<u32>> {
        let n = self.path.height();
        let counts = self.path.level_counts();
        let mut out = vec![vec![0u32; self.ell]; n.saturating_sub(1)];
        let mut k = 0;
        for (level, &a) in counts[..n].iter().enumerate() {
            for &c in &self.colors[k..k + a as usize] {
                out[level - 1][c as usize - 1] += 1;
            }
            k += a as usize;
        }
        out
    }
}

impl fmt::Display for ColoredDyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.colors.iter().map(|c| c.to_string()).collect();
        write!(f, "{}[{}]", self.path, c.join(","))
    }
}

/// `(1 / (ell n + 1)) C((ell + 1) n, n)`.
pub fn fuss_catalan(n: usize, ell: usize) -> BigUint {
    binomial((ell + 1) * n, n) / BigUint::from(ell * n + 1)
}

pub fn binomial(a: usize, b: usize) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    (0..b).fold(BigUint::one(), |acc, k| acc * BigUint::from(a - k) / BigUint::from(k + 1))
}

fn check_limit(count: BigUint) -> Result<(), PathError> {
    if count > BigUint::from(ENUMERATION_LIMIT) {
        return Err(PathError::LimitExceeded(count));
    }
    Ok(())
}

/// Every `ell`-Dyck path with `n` right steps, in lex order (`R < U`
/// reversed: paths with earlier up steps first).
fn ell_paths(n: usize, ell: usize) -> Vec<LatticePath> {
    let mut out = Vec::new();
    let mut steps = Vec::with_capacity(n * (ell + 1));
    fn rec(ups: usize, rights: usize, n: usize, ell: usize, steps: &mut Vec<Step>, out: &mut Vec<LatticePath>) {
        if ups == n * ell && rights == n {
            out.push(LatticePath::new(ell, steps.clone()));
            return;
        }
        if ups < n * ell {
            steps.push(Step::Up);
            rec(ups + 1, rights, n, ell, steps, out);
            steps.pop();
        }
        if rights < n && (rights + 1) * ell <= ups {
            steps.push(Step::Right);
            rec(ups, rights + 1, n, ell, steps, out);
            steps.pop();
        }
    }
    rec(0, 0, n, ell, &mut steps, &mut out);
    out
}

pub fn enumerate_dyck(n: usize) -> Result<Vec<DyckPath>, PathError> {
    check_limit(fuss_catalan(n, 1))?;
    Ok(ell_paths(n, 1).into_iter().map(|p| DyckPath { steps: p.steps }).collect())
}

pub fn enumerate_ell_dyck(n: usize, ell: usize) -> Result<Vec<EllDyckPath>, PathError> {
    check_limit(fuss_catalan(n, ell))?;
    Ok(ell_paths(n, ell).into_iter().map(EllDyckPath).collect())
}

/// Number of `ell`-colorings of `path`: `prod_k C(a_k + ell - 1, ell - 1)`.
pub fn colorings_count(path: &DyckPath, ell: usize) -> BigUint {
    let c = path.level_counts();
    c[..path.height()].iter().map(|&a| binomial(a as usize + ell - 1, ell - 1)).product()
}

/// Every `ell`-colored Dyck path of height `n`.
pub fn enumerate_colored(n: usize, ell: usize) -> Result<Vec<ColoredDyckPath>, PathError> {
    check_limit(fuss_catalan(n, ell))?;
    let mut out = Vec::new();
    for path in enumerate_dyck(n)? {
        let counts = path.level_counts();
        let per_level: Vec<Vec<Vec<u32>>> = counts[..n].iter().map(|&a| weak_compositions(a, ell)).collect();
        let mut pick = vec![0usize; n];
        loop {
            let mut colors = Vec::new();
            for (level, choice) in per_level.iter().zip(&pick) {
                for (j, &m) in level[*choice].iter().enumerate() {
                    colors.extend(std::iter::repeat_n(j as u32 + 1, m as usize));
                }
            }
            out.push(ColoredDyckPath { path: path.clone(), ell, colors });
            let mut k = n;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                pick[k] += 1;
                if pick[k] < per_level[k].len() {
                    break;
                }
                pick[k] = 0;
            }
            if pick.iter().all(|&p| p == 0) {
                break;
            }
        }
    }
    Ok(out)
}

/// `ell` up steps, then for each level `k < n` and color `j` the
/// `a_kj` right steps followed by one up step, then the right steps at the
/// top level.
pub fn phi(c: &ColoredDyckPath) -> EllDyckPath {
    let ell = c.ell;
    let n = c.path.height();
    let mut steps = vec![Step::Up; ell];
    let mut used = 0;
    for row in c.color_counts() {
        for a in row {
            steps.extend(std::iter::repeat_n(Step::Right, a as usize));
            steps.push(Step::Up);
            used += a as usize;
        }
    }
    steps.extend(std::iter::repeat_n(Step::Right, n - used));
    EllDyckPath::new(LatticePath::new(ell, steps)).expect("image of a colored Dyck path is ell-Dyck")
}

pub fn phi_inverse(p: &EllDyckPath, n: usize) -> Result<ColoredDyckPath, PathError> {
    let ell = p.ell();
    let bad = |reason| PathError::NotInImage { path: p.to_string(), n, reason };
    if p.n() != n {
        return Err(bad("height is not n * ell"));
    }
    let steps = p.path().steps();
    if n == 0 {
        return Err(bad("empty path"));
    }
    if steps.len() < ell || steps[..ell].iter().any(|&s| s != Step::Up) {
        return Err(bad("does not start with ell up steps"));
    }
    let mut counts = vec![vec![0u32; ell]; n - 1];
    let mut k = ell;
    for row in counts.iter_mut() {
        for a in row.iter_mut() {
            while k < steps.len() && steps[k] == Step::Right {
                *a += 1;
                k += 1;
            }
            if k == steps.len() {
                return Err(bad("too few up steps"));
            }
            k += 1;
        }
    }
    if steps[k..].iter().any(|&s| s != Step::Right) {
        return Err(bad("up steps after the last group"));
    }
    let top = steps.len() - k;
    let mut beta = Vec::new();
    let mut colors = Vec::new();
    beta.push(Step::Up);
    for row in &counts {
        for (j, &a) in row.iter().enumerate() {
            beta.extend(std::iter::repeat_n(Step::Right, a as usize));
            colors.extend(std::iter::repeat_n(j as u32 + 1, a as usize));
        }
        beta.push(Step::Up);
    }
    beta.extend(std::iter::repeat_n(Step::Right, top));
    let path = DyckPath::new(beta).map_err(|_| bad("underlying path leaves the Dyck region"))?;
    ColoredDyckPath::new(path, ell, colors)
}

/// `Σ_{β} Π_{k ∈ ν(β)} C(k + ell - 1, k)`.
pub fn colored_sum(n: usize, ell: usize) -> Result<BigUint, PathError> {
    Ok(enumerate_dyck(n)?
        .iter()
        .map(|b| b.nu().iter().map(|&k| binomial(k as usize + ell - 1, k as usize)).product::<BigUint>())
        .sum())
}

/// Coefficients of `Σ_β q^{χ(β)}` over Dyck paths of height `n`.
pub fn chi_distribution(n: usize) -> Result<Vec<u64>, PathError> {
    let mut out = vec![0u64; n.max(1)];
    for b in enumerate_dyck(n)? {
        out[b.chi() as usize] += 1;
    }
    Ok(out)
}

/// Outcome of a search for assignments `β -> μ(β)` with `|μ(β)| = χ(β)`
/// realizing a given `h`-expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuSearchReport {
    /// `(degree, paths with that χ, total h-coefficient in that degree)`.
    pub per_degree: Vec<(u32, u64, i64)>,
    pub feasible: bool,
    /// Number of distinct assignments (0 when infeasible).
    pub assignments: BigUint,
}

impl MuSearchReport {
    pub fn is_unique(&self) -> bool {
        self.assignments.is_one()
    }
}

/// Experimental: counts the ways to attach a partition `μ(β)` of size
/// `χ(β)` to each Dyck path of height `n` so that `Σ_β h_{μ(β)}` equals
/// `f`. Requires nonnegative integer `h`-coefficients.
pub fn mu_search(f: &SymFunc, n: usize) -> Result<MuSearchReport, PathError> {
    let h = f.to_basis(crate::symfunc::Basis::H).map_err(|_| PathError::Coloring("expansion must convert to h"))?;
    let chi = chi_distribution(n)?;
    let top = (chi.len() as u32).max(h.degree_cap() + 1);
    let mut feasible = true;
    let mut assignments = BigUint::one();
    let mut per_degree = Vec::new();
    for d in 0..top {
        let paths = chi.get(d as usize).copied().unwrap_or(0);
        let coeffs: Vec<i64> = Partition::all(d)
            .iter()
            .map(|p| h.coeff(p).ok().filter(|c| c.is_integer()).and_then(|c| c.to_integer().to_i64()).unwrap_or(-1))
            .collect();
        let total: i64 = coeffs.iter().sum();
        per_degree.push((d, paths, total));
        if coeffs.iter().any(|&c| c < 0) || total != paths as i64 {
            feasible = false;
            continue;
        }
        // multinomial: paths! / prod c!
        let mut ways = factorial(paths);
        for c in coeffs {
            ways /= factorial(c as u64);
        }
        assignments *= ways;
    }
    if !feasible {
        assignments = BigUint::zero();
    }
    Ok(MuSearchReport { per_degree, feasible, assignments })
}

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}
