//! The quotient of the polynomial ring by the ideal generated by the
//! monomial colored quasi-symmetric functions without constant term.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

use crate::hilbert::{series_for_source, EngineConfig, GeneratorSource, GroupSpec, HilbertError, HilbertSeries};
use crate::paths::{enumerate_dyck, pi_encoding, PathError};
use crate::polyring::{Monomial, Polynomial};
use crate::quasi::monomial_colored_qsym;
use crate::shapes::{colored_compositions_of_degree, DegreeVector};
use crate::symfunc::{Basis, SymError, SymFunc};

/// `M̄_C` for every colored composition `C` with at most `n * ell` columns.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ColoredQuasiSymmetric;

impl GeneratorSource for ColoredQuasiSymmetric {
    fn generators(&self, ell: usize, n: usize, d: &DegreeVector) -> Result<Vec<Polynomial>, HilbertError> {
        colored_compositions_of_degree(d, n * ell)
            .iter()
            .map(|c| monomial_colored_qsym(c, n).map_err(HilbertError::from))
            .collect()
    }

    fn label(&self) -> Option<String> {
        Some("colored".into())
    }
}

/// Monomials of total degree at most `cap` whose path encoding is
/// `ell`-Dyck, by increasing degree and decreasing lex order within a
/// degree.
pub fn basis_monomials(n: usize, ell: usize, cap: u32) -> Vec<Monomial> {
    // the path stays weakly above the diagonal iff ell * (w_1 + ... + w_k) <= k - 1
    fn rec(k: usize, sum: u32, left: u32, ell: usize, word: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == word.len() {
            out.push(word.clone());
            return;
        }
        let room = (k as u32) / ell as u32 - sum;
        for w in 0..=room.min(left) {
            word[k] = w;
            rec(k + 1, sum + w, left - w, ell, word, out);
        }
        word[k] = 0;
    }
    let mut words = Vec::new();
    rec(0, 0, cap, ell, &mut vec![0; n * ell], &mut words);
    let mut out: Vec<Monomial> = words.into_iter().map(|w| Monomial::from_exponents(ell, w)).collect();
    out.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| b.cmp(a)));
    debug_assert!(out.iter().all(|m| pi_encoding(&m.to_matrix()).is_ell_dyck()));
    out
}

/// Number of basis monomials in each multidegree.
pub fn basis_census(n: usize, ell: usize, cap: u32) -> BTreeMap<DegreeVector, u64> {
    let mut out = BTreeMap::new();
    for m in basis_monomials(n, ell, cap) {
        *out.entry(m.degree_vector()).or_insert(0) += 1;
    }
    out
}

/// `Σ_β h_{ν(β)}` over Dyck paths of height `n`.
pub fn hilbert_by_paths(n: usize) -> Result<SymFunc, PathError> {
    let cap = n.saturating_sub(1) as u32;
    let mut f = SymFunc::zero(Basis::H, cap);
    for b in enumerate_dyck(n)? {
        f.add_term(b.nu_partition(), BigRational::one());
    }
    Ok(f)
}

/// [`hilbert_by_paths`] evaluated at `ell` variables.
pub fn hilbert_by_paths_evaluated(n: usize, ell: usize) -> Result<BTreeMap<DegreeVector, BigRational>, SymError> {
    hilbert_by_paths(n).expect("height within enumeration limit").evaluate(ell)
}

/// Series of the colored quotient through the linear-algebra engine,
/// truncated at `cap` (default `n`).
pub fn hilbert_by_linear_algebra(n: usize, ell: usize, cap: Option<u32>, cfg: &EngineConfig) -> Result<HilbertSeries, HilbertError> {
    let group = GroupSpec::new(1, n)?;
    series_for_source(group, ell, &ColoredQuasiSymmetric, cap.unwrap_or(n as u32), cfg)
}
