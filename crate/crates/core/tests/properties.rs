//! Randomized invariants.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use coquasi::hilbert::{hilbert_series, EngineConfig, GroupSpec};
use coquasi::paths::{enumerate_colored, phi, phi_inverse};
use coquasi::polyring::{Monomial, Polynomial};
use coquasi::shapes::{DegreeVector, IntMatrix};
use coquasi::symfunc::{Basis, Partition, SymFunc};

const ELL: usize = 2;
const N: usize = 3;

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0u32..3, ELL * N).prop_map(|e| Monomial::from_exponents(ELL, e))
}

fn coefficient() -> impl Strategy<Value = BigRational> {
    (-4i64..=4, 1i64..=3).prop_map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
}

fn polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((monomial(), coefficient()), 0..5).prop_map(|t| Polynomial::from_terms(ELL, N, t))
}

fn partition(max_degree: u32) -> impl Strategy<Value = Partition> {
    (0..=max_degree, any::<prop::sample::Index>()).prop_map(|(d, i)| {
        let all = Partition::all(d);
        all[i.index(all.len())].clone()
    })
}

fn basis() -> impl Strategy<Value = Basis> {
    prop_oneof![Just(Basis::M), Just(Basis::H), Just(Basis::S)]
}

fn symfunc() -> impl Strategy<Value = SymFunc> {
    (basis(), 0u32..=5).prop_flat_map(|(b, cap)| {
        prop::collection::vec((partition(cap), coefficient()), 0..6)
            .prop_map(move |terms| SymFunc::from_terms(b, cap, terms))
    })
}

/// Small groups and variable-set counts whose series are cheap.
fn small_case() -> impl Strategy<Value = (u32, usize, usize)> {
    prop::sample::select(vec![(1, 2, 2), (1, 3, 2), (1, 3, 3), (2, 2, 2), (2, 2, 3), (3, 2, 2), (1, 4, 2)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in polynomial(), b in polynomial(), c in polynomial()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(ELL, N), a.clone());
    }

    #[test]
    fn order_is_multiplicative(a in monomial(), b in monomial(), c in monomial()) {
        let ab = a.lex_compare(&b).unwrap();
        prop_assert_eq!(a.mul(&c).lex_compare(&b.mul(&c)).unwrap(), ab);
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        prop_assert_eq!(b.lex_compare(&a).unwrap(), ab.reverse());
    }

    #[test]
    fn degree_is_additive(a in monomial(), b in monomial()) {
        let sum: Vec<u32> = a.degree_vector().0.iter().zip(&b.degree_vector().0).map(|(x, y)| x + y).collect();
        prop_assert_eq!(a.mul(&b).degree_vector(), DegreeVector(sum));
    }

    #[test]
    fn leading_monomial_of_product(a in polynomial(), b in polynomial()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let lead = a.leading_monomial().unwrap().mul(b.leading_monomial().unwrap());
        let prod = &a * &b;
        prop_assert_eq!(prod.leading_monomial().unwrap(), &lead);
    }

    #[test]
    fn matrix_json_round_trip(rows in 1usize..4, word in prop::collection::vec(0u32..5, 0..12)) {
        let len = word.len() - word.len() % rows;
        let m = IntMatrix::from_reading_word(rows, word[..len].to_vec()).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(serde_json::from_str::<IntMatrix>(&text).unwrap(), m);
    }

    #[test]
    fn symfunc_text_round_trip(f in symfunc()) {
        prop_assume!(f.terms().any(|(p, _)| !p.is_empty()) || f.basis() == Basis::H);
        let back = SymFunc::parse(&f.render(), Some(f.degree_cap())).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn symfunc_json_round_trip(f in symfunc()) {
        let back = SymFunc::from_json(&f.to_json(), Some(f.degree_cap())).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn basis_round_trips(f in symfunc()) {
        let via_m = f.to_basis(Basis::M).unwrap();
        prop_assert_eq!(via_m.to_basis(f.basis()).unwrap(), f.clone());
        for target in [Basis::H, Basis::S] {
            prop_assert_eq!(f.to_basis(target).unwrap().to_basis(f.basis()).unwrap(), f.clone());
        }
    }

    #[test]
    fn products_agree_across_bases(f in symfunc(), g in symfunc()) {
        let cap = f.degree_cap().min(g.degree_cap());
        let (f, g) = (f.truncated(cap), g.truncated(cap));
        let direct = f.mul(&g).unwrap().to_basis(Basis::M).unwrap();
        let via_h = f.to_basis(Basis::H).unwrap().mul(&g.to_basis(Basis::H).unwrap()).unwrap().to_basis(Basis::M).unwrap();
        prop_assert_eq!(direct, via_h);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dims_are_permutation_symmetric((r, n, ell) in small_case()) {
        let s = hilbert_series(GroupSpec::new(r, n).unwrap(), ell, None, &EngineConfig::default()).unwrap();
        prop_assert!(s.is_permutation_symmetric());
    }

    #[test]
    fn truncation_is_monotone((r, n, ell) in small_case(), low in 0u32..4) {
        let w = GroupSpec::new(r, n).unwrap();
        let cfg = EngineConfig::default();
        let big = hilbert_series(w, ell, Some(w.degree_bound() + 1), &cfg).unwrap();
        let small = hilbert_series(w, ell, Some(low.min(w.degree_bound())), &cfg).unwrap();
        for (d, v) in &small.dims {
            prop_assert_eq!(big.get(d), Some(*v));
        }
    }

    #[test]
    fn m_coefficients_are_stable_in_ell((r, n) in prop::sample::select(vec![(1, 2), (1, 3), (1, 4), (2, 2), (3, 2), (2, 3)])) {
        let w = GroupSpec::new(r, n).unwrap();
        let cfg = EngineConfig::default();
        let two = SymFunc::from_hilbert(&hilbert_series(w, 2, None, &cfg).unwrap()).unwrap();
        let three = SymFunc::from_hilbert(&hilbert_series(w, 3, None, &cfg).unwrap()).unwrap();
        for d in 0..=w.degree_bound() {
            for p in Partition::all(d).into_iter().filter(|p| p.len() <= 2) {
                prop_assert_eq!(two.coeff(&p).unwrap(), three.coeff(&p).unwrap(), "{}", p);
            }
        }
    }

    #[test]
    fn phi_round_trips(n in 1usize..=5, ell in 1usize..=3, pick in any::<prop::sample::Index>()) {
        let all = enumerate_colored(n, ell).unwrap();
        let c = &all[pick.index(all.len())];
        let p = phi(c);
        prop_assert_eq!(p.n(), n);
        prop_assert_eq!(&phi_inverse(&p, n).unwrap(), c);
    }
}
