//! End-to-end acceptance run: one line per criterion.

use std::collections::{BTreeSet, HashMap};
use std::io::Write;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use coquasi::colored_quotient::{basis_census, hilbert_by_linear_algebra, hilbert_by_paths_evaluated};
use coquasi::hilbert::{hilbert_series, verify_degree_bound, EngineConfig, GroupSpec, HilbertSeries};
use coquasi::paths::{colored_sum, enumerate_colored, enumerate_ell_dyck, phi, phi_inverse};
use coquasi::polyring::{rat, Monomial, Polynomial};
use coquasi::quasi::GFamily;
use coquasi::shapes::{DegreeVector, IntMatrix, RMatrix};
use coquasi::symfunc::{ell1_closed_form, low_degree_coefficient, low_degree_expansion, Basis, Partition, SymFunc};
use coquasi::tables::{compare_schur, compare_with_series, lookup};

type Outcome = Result<String, String>;
type SeriesCache = Mutex<HashMap<(u32, usize, usize, Option<u32>), Arc<HilbertSeries>>>;

fn config_for(n: usize, ell: usize) -> EngineConfig {
    if n + ell >= 8 {
        EngineConfig::modular(3)
    } else {
        EngineConfig::default()
    }
}

/// Series of the quasi-invariant quotient, memoized across criteria.
fn series(r: u32, n: usize, ell: usize, cap: Option<u32>) -> Arc<HilbertSeries> {
    static CACHE: OnceLock<SeriesCache> = OnceLock::new();
    let key = (r, n, ell, cap);
    if let Some(s) = CACHE.get_or_init(Default::default).lock().unwrap().get(&key) {
        return s.clone();
    }
    let w = GroupSpec::new(r, n).unwrap();
    let s = Arc::new(hilbert_series(w, ell, cap, &config_for(n, ell)).unwrap());
    CACHE.get().unwrap().lock().unwrap().insert(key, s.clone());
    s
}

fn table_check(table: &str, r: u32, n: usize, ell: usize, cap: Option<u32>) -> Result<(), String> {
    let entry = lookup(table, r, n).ok_or_else(|| format!("no {table} entry for n={n}"))?;
    let s = series(r, n, ell, cap);
    let bad = compare_with_series(&entry.expansion, &s).map_err(|e| e.to_string())?;
    match bad.first() {
        None => Ok(()),
        Some(m) => Err(format!(
            "{table} G({r}, {n}) ell={ell}: {} mismatches, first at {} expected {} got {}",
            bad.len(),
            m.d,
            m.expected,
            m.computed
        )),
    }
}

fn criterion_1() -> Outcome {
    for n in 1..=6 {
        for ell in [2, 3] {
            table_check("sn-h", 1, n, ell, None)?;
        }
    }
    Ok("sn-h n=1..6 at ell=2,3".into())
}

fn criterion_2() -> Outcome {
    table_check("sn-h", 1, 7, 2, Some(6))?;
    let s = series(1, 7, 2, Some(6));
    let top = s.get(&DegreeVector(vec![6, 0])).unwrap();
    Ok(format!("n=7 ell=2 degrees <= 6, dim at (6,0) = {top}"))
}

fn criterion_3() -> Outcome {
    for n in 1..=5 {
        let entry = lookup("sn-schur", 1, n).ok_or("missing sn-schur entry")?;
        let s = series(1, n, 2, None);
        let bad = compare_schur(&entry.expansion, &s).map_err(|e| e.to_string())?;
        if let Some(m) = bad.first() {
            return Err(format!("n={n}: s{} expected {} got {}", m.partition, m.expected, m.computed));
        }
    }
    Ok("Schur coefficients n=1..5 at ell=2".into())
}

fn criterion_4() -> Outcome {
    for n in [2, 3] {
        for ell in [1, 2] {
            table_check("g2n-h", 2, n, ell, None)?;
        }
    }
    Ok("G(2,2) and G(2,3) at ell=1,2 up to degrees 4 and 7".into())
}

fn criterion_5() -> Outcome {
    for r in 1..=3u32 {
        for n in 1..=4usize {
            let w = GroupSpec::new(r, n).unwrap();
            let s = series(r, n, 1, Some(w.degree_bound() + 1));
            let mut expected: Vec<u64> = ell1_closed_form(r, n as u32).iter().map(|c| c.to_u64().unwrap()).collect();
            let got = s.by_total_degree();
            expected.resize(got.len().max(expected.len()), 0);
            if got[..] != expected[..got.len()] || expected[got.len()..].iter().any(|&c| c != 0) {
                return Err(format!("G({r}, {n}): expected {expected:?} got {got:?}"));
            }
        }
    }
    Ok("r=1..3, n=1..4".into())
}

fn criterion_6() -> Outcome {
    let groups = [(1, 2), (1, 3), (1, 4), (1, 5), (2, 2), (2, 3), (3, 2)];
    let mut cases = 0;
    for (r, n) in groups {
        for ell in [1, 2] {
            let w = GroupSpec::new(r, n).unwrap();
            if !verify_degree_bound(w, ell, &config_for(n, ell)).map_err(|e| e.to_string())? {
                return Err(format!("{w} ell={ell}: nonzero above degree {}", w.degree_bound()));
            }
            let s = series(r, n, ell, None);
            if s.top_degree() != w.degree_bound() {
                return Err(format!("{w} ell={ell}: top degree {} below the bound", s.top_degree()));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} group/ell cases vanish above 2rn-r-n"))
}

fn mono(ell: usize, n: usize, entries: &[(usize, usize, u32)]) -> Monomial {
    let mut exps = vec![0; ell * n];
    for &(i, j, e) in entries {
        exps[(j - 1) * ell + (i - 1)] += e;
    }
    Monomial::from_exponents(ell, exps)
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut tested = 0;
    let mut seen = BTreeSet::new();
    while tested < 250 {
        let r = rng.gen_range(1..=3u32);
        let ell = rng.gen_range(1..=3usize);
        let len = rng.gen_range(1..=4usize);
        let word: Vec<u32> = (0..ell * len).map(|_| rng.gen_range(0..=3)).collect();
        let Ok(m) = IntMatrix::from_reading_word(ell, word) else { continue };
        let Ok(a) = RMatrix::new(m, r) else { continue };
        if !a.is_trans() || !seen.insert((r, a.matrix().clone())) {
            continue;
        }
        let mut fam = GFamily::new(r, ell, len + 1);
        if !fam.verify_leading(&a).map_err(|e| e.to_string())? {
            return Err(format!("leading monomial of G{} (r={r}) is not X^A", a.matrix()));
        }
        tested += 1;
    }
    let a = RMatrix::new(IntMatrix::from_rows(&[[0u32, 2, 0, 1], [0, 2, 0, 3]]).unwrap(), 2).unwrap();
    let g = GFamily::new(2, 2, 4).g(&a).map_err(|e| e.to_string())?;
    let expected = Polynomial::from_terms(
        2,
        4,
        [
            (mono(2, 4, &[(1, 2, 2), (2, 2, 2), (1, 4, 1), (2, 4, 3)]), rat(1)),
            (mono(2, 4, &[(1, 2, 2), (1, 3, 1), (2, 3, 3), (2, 4, 2)]), rat(-1)),
            (mono(2, 4, &[(1, 2, 2), (2, 3, 2), (1, 4, 1), (2, 4, 3)]), rat(1)),
            (mono(2, 4, &[(1, 3, 2), (2, 3, 2), (1, 4, 1), (2, 4, 3)]), rat(1)),
            (mono(2, 4, &[(1, 3, 3), (2, 3, 3), (2, 4, 2)]), rat(-1)),
        ],
    );
    if g != expected {
        return Err(format!("worked example: got {g}"));
    }
    Ok(format!("{tested} random trans matrices, worked example with {} terms", g.len()))
}

fn criterion_8() -> Outcome {
    for n in 1..=6usize {
        for ell in 1..=4usize {
            let lhs = colored_sum(n, ell).map_err(|e| e.to_string())?;
            let num: BigUint = (0..n).fold(BigUint::from(1u32), |acc, i| acc * ((ell + 1) * n - i) / (i + 1));
            let rhs = num / (ell * n + 1);
            if lhs != rhs {
                return Err(format!("n={n} ell={ell}: {lhs} != {rhs}"));
            }
        }
    }
    Ok("n=1..6, ell=1..4".into())
}

fn criterion_9() -> Outcome {
    for n in 1..=5usize {
        for ell in 1..=3usize {
            let census = basis_census(n, ell, n as u32);
            let paths = hilbert_by_paths_evaluated(n, ell).map_err(|e| e.to_string())?;
            for t in 0..=n as u32 {
                for d in DegreeVector::all_with_total(ell, t) {
                    let a = census.get(&d).copied().unwrap_or(0);
                    let b = paths.get(&d).cloned().unwrap_or_else(BigRational::zero);
                    if BigRational::from_integer(a.into()) != b {
                        return Err(format!("n={n} ell={ell} at {d}: census {a} paths {b}"));
                    }
                }
            }
            if n <= 3 && ell <= 2 {
                let la = hilbert_by_linear_algebra(n, ell, None, &EngineConfig::default()).map_err(|e| e.to_string())?;
                for (d, &v) in &la.dims {
                    if census.get(d).copied().unwrap_or(0) != v {
                        return Err(format!("n={n} ell={ell} at {d}: quotient {v}"));
                    }
                }
            }
        }
    }
    Ok("paths = census for n<=5 ell<=3, = quotient for n<=3 ell<=2".into())
}

fn criterion_10() -> Outcome {
    let mut total = 0;
    for n in 1..=4usize {
        for ell in 1..=3usize {
            let colored = enumerate_colored(n, ell).map_err(|e| e.to_string())?;
            let targets = enumerate_ell_dyck(n, ell).map_err(|e| e.to_string())?;
            let images: BTreeSet<_> = colored.iter().map(phi).collect();
            if images.len() != colored.len() || colored.len() != targets.len() {
                return Err(format!("n={n} ell={ell}: {} colored, {} images, {} targets", colored.len(), images.len(), targets.len()));
            }
            for c in &colored {
                if phi_inverse(&phi(c), n).as_ref() != Ok(c) {
                    return Err(format!("n={n} ell={ell}: round trip fails"));
                }
            }
            for p in &targets {
                let c = phi_inverse(p, n).map_err(|e| e.to_string())?;
                if &phi(&c) != p {
                    return Err(format!("n={n} ell={ell}: {} not recovered", p.path()));
                }
            }
            total += colored.len();
        }
    }
    Ok(format!("{total} colored paths, n<=4 ell<=3"))
}

fn criterion_11() -> Outcome {
    for n in 1..=5usize {
        let colored = hilbert_by_linear_algebra(n, 1, Some(n as u32), &EngineConfig::default()).map_err(|e| e.to_string())?;
        let quasi = series(1, n, 1, Some(n as u32));
        if colored.dims != quasi.dims {
            return Err(format!("n={n}: {:?} vs {:?}", colored.by_total_degree(), quasi.by_total_degree()));
        }
    }
    Ok("n=1..5".into())
}

fn criterion_12() -> Outcome {
    for n in [5usize, 6] {
        let s = series(1, n, 3, Some(3));
        let h = SymFunc::from_hilbert(&s).map_err(|e| e.to_string())?.to_basis(Basis::H).map_err(|e| e.to_string())?;
        let expansion = low_degree_expansion(n as u32, 3);
        for d in 0..=3 {
            for mu in Partition::all(d) {
                let got = h.coeff(&mu).map_err(|e| e.to_string())?;
                let a = expansion.coeff(&mu).map_err(|e| e.to_string())?;
                let b = low_degree_coefficient(n as u32, &mu);
                if got != a || got != b {
                    return Err(format!("n={n} h{mu}: computed {got}, expansion {a}, formula {b}"));
                }
            }
        }
    }
    Ok("n=5,6 at ell=3, degrees <= 3".into())
}

fn random_symfunc(rng: &mut StdRng) -> SymFunc {
    let basis = [Basis::M, Basis::H, Basis::S][rng.gen_range(0..3)];
    let cap = rng.gen_range(0..=6);
    let mut f = SymFunc::zero(basis, cap);
    for _ in 0..rng.gen_range(0..6) {
        let all = Partition::all(rng.gen_range(0..=cap));
        let p = all[rng.gen_range(0..all.len())].clone();
        f.add_term(p, BigRational::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=4).into()));
    }
    f
}

fn criterion_13() -> Outcome {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..200 {
        let f = random_symfunc(&mut rng);
        let back = f.to_basis(Basis::M).and_then(|m| m.to_basis(f.basis())).map_err(|e| e.to_string())?;
        if back != f {
            return Err(format!("basis round trip fails for {f}"));
        }
    }
    let word = |rng: &mut StdRng| Monomial::from_exponents(2, (0..8).map(|_| rng.gen_range(0..3)).collect());
    for _ in 0..2000 {
        let (a, b, c) = (word(&mut rng), word(&mut rng), word(&mut rng));
        if a.lex_compare(&b).unwrap() != a.mul(&c).lex_compare(&b.mul(&c)).unwrap() {
            return Err(format!("order not multiplicative: {a} {b} {c}"));
        }
    }
    for (r, n) in [(1, 2), (1, 3), (1, 4), (2, 2), (3, 2), (2, 3)] {
        let two = series(r, n, 2, None);
        let three = series(r, n, 3, None);
        if !two.is_permutation_symmetric() || !three.is_permutation_symmetric() {
            return Err(format!("G({r}, {n}) dims not symmetric"));
        }
        let f2 = SymFunc::from_hilbert(&two).map_err(|e| e.to_string())?;
        let f3 = SymFunc::from_hilbert(&three).map_err(|e| e.to_string())?;
        for d in 0..=two.max_total_degree {
            for p in Partition::all(d).into_iter().filter(|p| p.len() <= 2) {
                if f2.coeff(&p).ok() != f3.coeff(&p).ok() {
                    return Err(format!("G({r}, {n}) m{p} differs between ell=2 and ell=3"));
                }
            }
        }
    }
    Ok("round trips, order, symmetry and ell-stability".into())
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Outcome); 13] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
        (13, criterion_13),
    ];
    // written to the raw handle so the lines show up without --nocapture
    let mut err = std::io::stderr();
    let mut failed = Vec::new();
    for (k, run) in criteria {
        let line = match run() {
            Ok(detail) => format!("criterion {k}: PASS {detail}"),
            Err(detail) => {
                failed.push(k);
                format!("criterion {k}: FAIL {detail}")
            }
        };
        writeln!(err, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

/// Three variable sets for seven points; long-running.
#[test]
#[ignore]
fn stretch_seven_points_three_sets() {
    let outcome = table_check("sn-h", 1, 7, 3, Some(6));
    let verdict = if outcome.is_ok() { "PASS".into() } else { format!("FAIL {outcome:?}") };
    writeln!(std::io::stderr(), "criterion 2 stretch: {verdict}").unwrap();
    assert!(outcome.is_ok());
}
