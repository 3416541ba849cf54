//! Independent brute-force checks against the library constructions.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};

use coquasi::colored_quotient::{basis_monomials, ColoredQuasiSymmetric};
use coquasi::hilbert::{
    direct_quotient_dim, dims_over, hilbert_series, series_for_source, Augmented, EngineConfig, GroupSpec,
    QuasiInvariants,
};
use coquasi::linalg::Rationals;
use coquasi::paths::{chi_distribution, pi_encoding};
use coquasi::polyring::{rat, Monomial, Polynomial};
use coquasi::quasi::{monomial_quasi_invariant, GFamily};
use coquasi::shapes::{
    canonical_decomposition, closure_set, delta, rcompositions_of_degree, rmatrices_bounded, DegreeVector, IntMatrix,
    RComposition, RMatrix,
};
use coquasi::symfunc::{ballot_number, Basis, Partition, SymFunc};

fn vectors(ell: usize, max_entry: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..ell {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (0..=max_entry).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Lex-largest reading word over all column sequences of r-size one that
/// decrease weakly and sum to `v`.
fn brute_canonical(v: &[u32], r: u32) -> Vec<u32> {
    fn rec(rest: &[u32], r: u32, prev: Option<&[u32]>, word: &mut Vec<u32>, best: &mut Option<Vec<u32>>) {
        if rest.iter().all(|&x| x == 0) {
            if best.as_ref().is_none_or(|b| *word > *b) {
                *best = Some(word.clone());
            }
            return;
        }
        for c in vectors(rest.len(), r) {
            if c.iter().sum::<u32>() != r || c.iter().zip(rest).any(|(a, b)| a > b) {
                continue;
            }
            if prev.is_some_and(|p| c.as_slice() > p) {
                continue;
            }
            let next: Vec<u32> = rest.iter().zip(&c).map(|(a, b)| a - b).collect();
            word.extend(&c);
            rec(&next, r, Some(&c), word, best);
            word.truncate(word.len() - c.len());
        }
    }
    let mut best = None;
    rec(v, r, None, &mut Vec::new(), &mut best);
    best.expect("some decomposition exists")
}

#[test]
fn canonical_decomposition_is_lex_maximum() {
    let mut checked = 0;
    for r in 1..=3u32 {
        for ell in 1..=3 {
            for v in vectors(ell, 6) {
                let s: u32 = v.iter().sum();
                if s == 0 || !s.is_multiple_of(r) || s / r > 4 {
                    continue;
                }
                let a = canonical_decomposition(&v, r).unwrap();
                assert_eq!(a.reading_word(), brute_canonical(&v, r).as_slice(), "V={v:?} r={r}");
                assert!(a.columns().all(|c| c.iter().sum::<u32>() == r));
                assert!(a.columns().collect::<Vec<_>>().windows(2).all(|w| w[0] >= w[1]));
                assert_eq!(a.row_sums().0, v);
                let s_v = closure_set(&v, r).unwrap();
                assert!(s_v.contains(&a));
                assert!(s_v.contains(&IntMatrix::from_columns(ell, std::slice::from_ref(&v)).unwrap()));
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn trans_survives_both_recursion_branches() {
    let mut split_count = 0;
    for (ell, r, len, entry) in [(1, 1, 4, 3), (1, 2, 4, 3), (1, 3, 4, 3), (2, 1, 3, 2), (2, 2, 3, 2), (2, 3, 3, 2), (3, 2, 3, 1)] {
        for a in rmatrices_bounded(ell, r, len, entry) {
            if !a.is_trans() {
                continue;
            }
            let Some(split) = a.split_at_rightmost_zero() else { continue };
            let mut merged = split.head.clone();
            merged.push_column(&split.pivot);
            let merged = merged.concat(&split.tail).unwrap();
            let mut reduced = split.head.clone();
            reduced.push_column(&delta(&split.pivot, r).unwrap());
            let reduced = reduced.concat(&split.tail).unwrap().trimmed();
            assert!(RMatrix::new(merged, r).unwrap().is_trans(), "{}", a.matrix());
            assert!(reduced.cols() > 0);
            assert!(RMatrix::new(reduced, r).unwrap().is_trans(), "{}", a.matrix());
            split_count += 1;
        }
    }
    assert!(split_count > 50);
}

#[test]
fn leading_zero_column_deletes_first_variable_column() {
    let mut checked = 0;
    for (ell, r) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)] {
        for a in rmatrices_bounded(ell, r, 3, 2) {
            if !a.is_trans() {
                continue;
            }
            let mut z = IntMatrix::zeros(ell, 1);
            z = z.concat(a.matrix()).unwrap();
            let za = RMatrix::new(z, r).unwrap();
            if !za.is_trans() {
                continue;
            }
            let n = a.len() + 2;
            let big = GFamily::new(r, ell, n).g(&za).unwrap();
            let small = GFamily::new(r, ell, n - 1).g(&a).unwrap();
            assert_eq!(big, small.shifted(1, n), "{}", a.matrix());
            checked += 1;
        }
    }
    assert!(checked > 20);
}

#[test]
fn monomial_quasi_invariants_have_distinct_leading_monomials() {
    for (r, ell, n) in [(1, 1, 4), (1, 2, 3), (2, 2, 3), (3, 2, 2), (2, 3, 2)] {
        for t in 1..=4 {
            for d in DegreeVector::all_with_total(ell, t) {
                let mut seen = BTreeSet::new();
                for a in rcompositions_of_degree(&d, r, n) {
                    let p = monomial_quasi_invariant(&a, n).unwrap();
                    assert_eq!(p.multidegree(), Some(d.clone()));
                    assert!(p.is_multihomogeneous());
                    let lead = p.leading_monomial().unwrap().clone();
                    assert_eq!(lead, Monomial::from_matrix(a.matrix(), n).unwrap());
                    assert!(seen.insert(lead));
                }
            }
        }
    }
}

#[test]
fn g_family_is_multihomogeneous() {
    for (r, ell) in [(1, 2), (2, 2), (3, 1), (2, 3)] {
        for a in rmatrices_bounded(ell, r, 3, 2) {
            if !a.is_trans() {
                continue;
            }
            let g = GFamily::new(r, ell, a.len() + 1).g(&a).unwrap();
            assert!(g.is_multihomogeneous());
            assert_eq!(g.multidegree(), Some(a.matrix().row_sums()));
        }
    }
}

#[test]
fn g_family_lies_in_the_ideal() {
    for (r, n, ell, cap) in [(1, 3, 2, 3), (2, 2, 1, 5), (2, 2, 2, 4), (3, 2, 1, 5), (1, 4, 1, 6)] {
        let w = GroupSpec::new(r, n).unwrap();
        let mut fam = GFamily::new(r, ell, n);
        let extra: Vec<Polynomial> = rmatrices_bounded(ell, r, n, cap)
            .into_iter()
            .filter(|a| a.is_trans() && a.matrix().total() <= cap)
            .map(|a| fam.g(&a).unwrap())
            .collect();
        assert!(!extra.is_empty());
        let base = QuasiInvariants { r };
        let aug = Augmented::new(&base, extra).unwrap();
        let cfg = EngineConfig::default();
        let plain = series_for_source(w, ell, &base, cap, &cfg).unwrap();
        let more = series_for_source(w, ell, &aug, cap, &cfg).unwrap();
        assert_eq!(plain.dims, more.dims, "G({r}, {n}) ell={ell}");
    }
}

fn ssyt_content_counts(shape: &[u32], ell: usize) -> BTreeMap<Vec<u32>, u64> {
    let cells: Vec<(usize, usize)> =
        shape.iter().enumerate().flat_map(|(i, &len)| (0..len as usize).map(move |j| (i, j))).collect();
    let mut grid: Vec<Vec<usize>> = shape.iter().map(|&len| vec![0; len as usize]).collect();
    let mut out = BTreeMap::new();
    fn rec(
        k: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        ell: usize,
        out: &mut BTreeMap<Vec<u32>, u64>,
    ) {
        if k == cells.len() {
            let mut content = vec![0u32; ell];
            for row in grid.iter() {
                for &x in row {
                    content[x - 1] += 1;
                }
            }
            *out.entry(content).or_insert(0) += 1;
            return;
        }
        let (i, j) = cells[k];
        let lo_row = if j > 0 { grid[i][j - 1] } else { 1 };
        let lo_col = if i > 0 { grid[i - 1][j] + 1 } else { 1 };
        for x in lo_row.max(lo_col)..=ell {
            grid[i][j] = x;
            rec(k + 1, cells, grid, ell, out);
        }
        grid[i][j] = 0;
    }
    rec(0, &cells, &mut grid, ell, &mut out);
    out
}

#[test]
fn schur_evaluation_counts_tableaux() {
    for size in 1..=6u32 {
        for mu in Partition::all(size) {
            let s = SymFunc::from_terms(Basis::S, size, [(mu.clone(), BigRational::one())]);
            for ell in 1..=3 {
                let values = s.evaluate(ell).unwrap();
                let counts = ssyt_content_counts(mu.parts(), ell);
                for d in DegreeVector::all_with_total(ell, size) {
                    let expected = counts.get(&d.0).copied().unwrap_or(0);
                    let got = values.get(&d).cloned().unwrap_or_else(BigRational::zero);
                    assert_eq!(got, BigRational::from_integer(expected.into()), "s{mu} at {d}");
                }
            }
        }
    }
}

fn count_matrices(rows: &[u32], cols: &[u32]) -> u64 {
    if rows.is_empty() {
        return u64::from(cols.iter().all(|&c| c == 0));
    }
    let mut total = 0;
    for v in vectors(cols.len(), rows[0]) {
        if v.iter().sum::<u32>() != rows[0] || v.iter().zip(cols).any(|(a, b)| a > b) {
            continue;
        }
        let rest: Vec<u32> = cols.iter().zip(&v).map(|(c, a)| c - a).collect();
        total += count_matrices(&rows[1..], &rest);
    }
    total
}

#[test]
fn h_to_m_counts_contingency_tables() {
    for size in 1..=6u32 {
        for mu in Partition::all(size) {
            let h = SymFunc::from_terms(Basis::H, size, [(mu.clone(), BigRational::one())]);
            let m = h.to_basis(Basis::M).unwrap();
            for lambda in Partition::all(size) {
                let expected = count_matrices(mu.parts(), lambda.parts());
                assert_eq!(m.coeff(&lambda).unwrap(), BigRational::from_integer(expected.into()), "h{mu} m{lambda}");
            }
        }
    }
}

#[test]
fn ballot_numbers_match_chi_statistic() {
    for n in 1..=7u32 {
        let chi = chi_distribution(n as usize).unwrap();
        for k in 0..=n {
            let from_paths = chi.get(k as usize).copied().unwrap_or(0);
            assert_eq!(ballot_number(n, k), BigRational::from_integer(from_paths.into()), "n={n} k={k}");
        }
    }
}

#[test]
fn engine_matches_naive_quotient() {
    for (r, n, ell) in [(1, 3, 1), (1, 3, 2), (2, 2, 1), (2, 2, 2), (3, 2, 1), (3, 2, 2), (1, 4, 1), (2, 3, 1)] {
        let w = GroupSpec::new(r, n).unwrap();
        let cap = w.degree_bound() + 1;
        let degrees: Vec<DegreeVector> = (0..=cap).flat_map(|t| DegreeVector::all_with_total(ell, t)).collect();
        let src = QuasiInvariants { r };
        let fast = dims_over(&Rationals, n, ell, &src, &degrees, u64::MAX).unwrap();
        for d in &degrees {
            let slow = direct_quotient_dim(&Rationals, n, &src, d, u64::MAX).unwrap();
            assert_eq!(fast[d], slow, "G({r}, {n}) at {d}");
        }
    }
}

#[test]
fn colored_engine_matches_naive_quotient() {
    for (n, ell) in [(2, 2), (3, 1), (3, 2), (2, 3)] {
        let degrees: Vec<DegreeVector> = (0..=n as u32).flat_map(|t| DegreeVector::all_with_total(ell, t)).collect();
        let fast = dims_over(&Rationals, n, ell, &ColoredQuasiSymmetric, &degrees, u64::MAX).unwrap();
        for d in &degrees {
            let slow = direct_quotient_dim(&Rationals, n, &ColoredQuasiSymmetric, d, u64::MAX).unwrap();
            assert_eq!(fast[d], slow, "n={n} ell={ell} at {d}");
        }
    }
}

#[test]
fn colored_basis_is_exactly_the_dyck_encodings() {
    for (n, ell, cap) in [(3, 1, 4), (3, 2, 3), (2, 3, 3), (4, 2, 3)] {
        let basis: BTreeSet<Monomial> = basis_monomials(n, ell, cap).into_iter().collect();
        for t in 0..=cap {
            for d in DegreeVector::all_with_total(ell, t) {
                for m in Monomial::all_of_degree(&d, n) {
                    assert_eq!(basis.contains(&m), pi_encoding(&m.to_matrix()).is_ell_dyck(), "{m}");
                }
            }
        }
    }
}

#[test]
fn three_variable_sets_for_three_points_need_a_zero_component() {
    let s = hilbert_series(GroupSpec::symmetric(3), 3, Some(4), &EngineConfig::default()).unwrap();
    for (d, &v) in &s.dims {
        if v > 0 {
            assert!(d.components().contains(&0), "{d} has dim {v}");
        }
    }
    assert_eq!(s.get(&DegreeVector(vec![1, 1, 0])), Some(2));
    assert_eq!(s.get(&DegreeVector(vec![1, 1, 1])), Some(0));
}

#[test]
fn scale_specialize_multiplies_by_degree_monomial() {
    let a = RComposition::new(IntMatrix::from_rows(&[[1u32, 3], [0, 1], [2, 0]]).unwrap(), 1).unwrap();
    let f = monomial_quasi_invariant(&a, 3).unwrap();
    let q = [rat(2), rat(3), rat(5)];
    let factor = rat(16 * 3 * 25);
    assert_eq!(f.scale_specialize(&q).unwrap(), f.scale(&factor));
}
