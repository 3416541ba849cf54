//! `coquasi` command-line front end.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{ToPrimitive, Zero};

use coquasi::colored_quotient::{basis_census, basis_monomials, hilbert_by_linear_algebra, hilbert_by_paths, hilbert_by_paths_evaluated};
use coquasi::hilbert::{hilbert_series, EngineConfig, GroupSpec, HilbertError, HilbertSeries};
use coquasi::paths::{
    chi_distribution, colored_sum, enumerate_colored, enumerate_dyck, enumerate_ell_dyck, fuss_catalan, phi,
    phi_inverse, PathError,
};
use coquasi::polyring::Polynomial;
use coquasi::quasi::{bracket, GFamily};
use coquasi::shapes::{DegreeVector, IntMatrix, RMatrix};
use coquasi::symfunc::{
    conjecture_threshold, ell1_closed_form, g_r2_formula, h_positivity_report, low_degree_coefficient,
    low_degree_expansion, Basis, Partition, SymFunc,
};
use coquasi::tables::{compare_schur, compare_with_series, entries};

#[derive(Parser)]
#[command(name = "coquasi", version, about = "Co-quasi-invariant spaces of G(r, n) and their Hilbert series")]
struct Cli {
    /// Worker threads for per-degree linear algebra (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Rank modulo two random primes, confirming exactly up to this total degree.
    #[arg(long, global = true, value_name = "DEGREE")]
    modular: Option<u32>,
    /// Largest monomial count allowed in one multidegree.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multigraded Hilbert series of the co-quasi-invariant quotient.
    Hilbert {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Universal symmetric-function expansion of the Hilbert series.
    Expand {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value = "h")]
        basis: BasisArg,
    },
    /// Compares embedded reference tables with computed series.
    VerifyTable {
        #[arg(long, value_enum)]
        table: TableArg,
        /// Variable sets to check (default depends on the table).
        #[arg(long, value_delimiter = ',')]
        ell: Vec<usize>,
        /// Largest n (or r for gr2) to check.
        #[arg(long)]
        max: Option<usize>,
    },
    /// Builds `G[A]` from a matrix file.
    GPoly {
        /// JSON `{"rows","cols","entries"}` or rows such as `0 2 0 1; 0 2 0 3`.
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        r: u32,
        /// Variables per row (default: number of columns).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        check_leading: bool,
    },
    /// Dyck path enumeration and identities.
    Paths {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(value_enum)]
        action: PathAction,
    },
    /// The colored quasi-symmetric quotient.
    Colored {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
        #[arg(value_enum)]
        action: ColoredAction,
    },
    /// `(1+H)^n (1-H)` and the per-partition coefficient formula.
    LowDegree {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        cap: u32,
    },
    /// h-positivity of the S_n series below degree n/2.
    Conjecture {
        #[arg(long)]
        n: usize,
        /// Variable sets (default: enough to resolve degrees below the threshold).
        #[arg(long)]
        ell: Option<usize>,
    },
}

#[derive(clap::Args)]
struct GroupArgs {
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ell: usize,
    /// Largest total degree (default: 2rn - r - n).
    #[arg(long)]
    cap: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    M,
    H,
    S,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Basis {
        match b {
            BasisArg::M => Basis::M,
            BasisArg::H => Basis::H,
            BasisArg::S => Basis::S,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableArg {
    SnH,
    SnSchur,
    G2nH,
    Ell1,
    Gr2,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathAction {
    Enumerate,
    Stats,
    FussCatalan,
    PhiCheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColoredAction {
    Basis,
    Hilbert,
    Crosscheck,
}

enum Failure {
    Mismatch(String),
    Usage(String),
    Resource(String),
}

impl From<HilbertError> for Failure {
    fn from(e: HilbertError) -> Self {
        match e {
            HilbertError::Resource { .. } => Failure::Resource(e.to_string()),
            HilbertError::PrimeDisagreement { .. } | HilbertError::ConfirmationFailed { .. } => {
                Failure::Mismatch(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<PathError> for Failure {
    fn from(e: PathError) -> Self {
        match e {
            PathError::LimitExceeded(_) => Failure::Resource(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

type Run = Result<String, Failure>;

struct Ctx {
    cfg: EngineConfig,
}

impl Ctx {
    fn series(&self, r: u32, n: usize, ell: usize, cap: Option<u32>) -> Result<HilbertSeries, Failure> {
        let w = GroupSpec::new(r, n)?;
        Ok(hilbert_series(w, ell, cap, &self.cfg)?)
    }
}

fn q_monomial(d: &DegreeVector) -> String {
    let mut s = String::new();
    for (i, &e) in d.components().iter().enumerate() {
        match e {
            0 => {}
            1 => write!(s, "q{}", i + 1).unwrap(),
            _ => write!(s, "q{}^{e}", i + 1).unwrap(),
        }
    }
    s
}

fn render_series(s: &HilbertSeries) -> String {
    let mut terms: Vec<(&DegreeVector, u64)> = s.dims.iter().filter(|(_, &v)| v > 0).map(|(d, &v)| (d, v)).collect();
    terms.sort_by(|a, b| a.0.total().cmp(&b.0.total()).then_with(|| b.0.cmp(a.0)));
    let parts: Vec<String> = terms
        .into_iter()
        .map(|(d, v)| match (d.total(), v) {
            (0, _) => v.to_string(),
            (_, 1) => q_monomial(d),
            _ => format!("{v}*{}", q_monomial(d)),
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn cmd_hilbert(ctx: &Ctx, g: &GroupArgs, json: bool, csv: bool) -> Run {
    let s = ctx.series(g.r, g.n, g.ell, g.cap)?;
    if json {
        return Ok(s.to_json());
    }
    if csv {
        return Ok(s.to_csv().trim_end().to_string());
    }
    let mut out = String::new();
    writeln!(out, "{} ell={} cap={}", s.group, s.ell, s.max_total_degree).unwrap();
    writeln!(out, "series: {}", render_series(&s)).unwrap();
    writeln!(out, "by total degree: {:?}", s.by_total_degree()).unwrap();
    write!(out, "total dimension: {}", s.total_dim()).unwrap();
    Ok(out)
}

fn cmd_expand(ctx: &Ctx, g: &GroupArgs, basis: BasisArg) -> Run {
    let s = ctx.series(g.r, g.n, g.ell, g.cap)?;
    let f = SymFunc::from_hilbert(&s).map_err(usage)?;
    let mut out = String::new();
    writeln!(out, "{} ell={} cap={}", s.group, s.ell, s.max_total_degree).unwrap();
    let target: Basis = basis.into();
    match target {
        Basis::H => {
            // only degrees whose partitions all have at most ell parts convert
            let visible = (s.ell as u32).min(s.max_total_degree);
            let g = f.truncated(visible).to_basis(Basis::H).map_err(usage)?;
            writeln!(out, "h: {}", g.render()).unwrap();
            if visible < s.max_total_degree {
                write!(out, "visible: degrees <= {visible}; degrees {}..={} need ell >= degree", visible + 1, s.max_total_degree)
                    .unwrap();
            } else {
                write!(out, "visible: all degrees").unwrap();
            }
        }
        _ => {
            let g = f.to_basis(target).map_err(usage)?;
            writeln!(out, "{}: {}", target, g.render()).unwrap();
            write!(out, "visible: partitions with at most {} parts", s.ell).unwrap();
        }
    }
    Ok(out)
}

fn check_expansion(ctx: &Ctx, label: &str, expansion: &SymFunc, r: u32, n: usize, ell: usize, out: &mut String) -> Result<bool, Failure> {
    let s = ctx.series(r, n, ell, None)?;
    let bad = compare_with_series(expansion, &s).map_err(usage)?;
    match bad.first() {
        None => writeln!(out, "{label} G({r}, {n}) ell={ell}: pass").unwrap(),
        Some(m) => writeln!(
            out,
            "{label} G({r}, {n}) ell={ell}: FAIL ({} mismatches; at {} expected {} computed {})",
            bad.len(),
            m.d,
            m.expected,
            m.computed
        )
        .unwrap(),
    }
    Ok(bad.is_empty())
}

fn cmd_verify_table(ctx: &Ctx, table: TableArg, ells: &[usize], max: Option<usize>) -> Run {
    let mut out = String::new();
    let mut ok = true;
    let pick = |default: &[usize]| if ells.is_empty() { default.to_vec() } else { ells.to_vec() };
    match table {
        TableArg::SnH => {
            for e in entries("sn-h").iter().filter(|e| e.group.n <= max.unwrap_or(6)) {
                for &ell in &pick(&[2]) {
                    ok &= check_expansion(ctx, "sn-h", &e.expansion, 1, e.group.n, ell, &mut out)?;
                }
            }
        }
        TableArg::G2nH => {
            for e in entries("g2n-h").iter().filter(|e| e.group.n <= max.unwrap_or(3)) {
                for &ell in &pick(&[1, 2]) {
                    ok &= check_expansion(ctx, "g2n-h", &e.expansion, 2, e.group.n, ell, &mut out)?;
                }
            }
        }
        TableArg::SnSchur => {
            for e in entries("sn-schur").iter().filter(|e| e.group.n <= max.unwrap_or(5)) {
                for &ell in &pick(&[2]) {
                    let s = ctx.series(1, e.group.n, ell, None)?;
                    let bad = compare_schur(&e.expansion, &s).map_err(usage)?;
                    match bad.first() {
                        None => writeln!(out, "sn-schur n={} ell={ell}: pass", e.group.n).unwrap(),
                        Some(m) => writeln!(
                            out,
                            "sn-schur n={} ell={ell}: FAIL (s{} expected {} computed {})",
                            e.group.n, m.partition, m.expected, m.computed
                        )
                        .unwrap(),
                    }
                    ok &= bad.is_empty();
                }
            }
        }
        TableArg::Ell1 => {
            for r in 1..=3u32 {
                for n in 1..=max.unwrap_or(4) {
                    let w = GroupSpec::new(r, n)?;
                    let s = ctx.series(r, n, 1, Some(w.degree_bound() + 1))?;
                    let got = s.by_total_degree();
                    let expected: Vec<u64> = ell1_closed_form(r, n as u32).iter().map(|c| c.to_u64().unwrap_or(u64::MAX)).collect();
                    let same = (0..got.len().max(expected.len()))
                        .all(|k| got.get(k).copied().unwrap_or(0) == expected.get(k).copied().unwrap_or(0));
                    let verdict = if same { "pass".to_string() } else { format!("FAIL (expected {expected:?} computed {got:?})") };
                    writeln!(out, "ell1 G({r}, {n}): {verdict}").unwrap();
                    ok &= same;
                }
            }
        }
        TableArg::Gr2 => {
            for r in 1..=max.unwrap_or(3) as u32 {
                for &ell in &pick(&[1, 2]) {
                    ok &= check_expansion(ctx, "gr2", &g_r2_formula(r), r, 2, ell, &mut out)?;
                }
            }
        }
    }
    finish(out, ok)
}

fn finish(mut out: String, ok: bool) -> Run {
    if out.ends_with('\n') {
        out.pop();
    }
    if ok {
        Ok(out)
    } else {
        Err(Failure::Mismatch(out))
    }
}

fn read_matrix(path: &PathBuf) -> Result<IntMatrix, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if let Ok(m) = serde_json::from_str::<IntMatrix>(&text) {
        return Ok(m);
    }
    let rows: Vec<Vec<u32>> = text
        .trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split([';', '\n'])
        .filter(|r| !r.trim().is_empty())
        .map(|r| r.split_whitespace().map(|x| x.parse::<u32>()).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()
        .map_err(|e| usage(format!("bad matrix entry: {e}")))?;
    IntMatrix::from_rows(&rows).map_err(usage)
}

fn cmd_gpoly(matrix: &PathBuf, r: u32, n: Option<usize>, check: bool) -> Run {
    let m = read_matrix(matrix)?;
    let a = RMatrix::new(m, r).map_err(usage)?;
    let n = n.unwrap_or(a.len());
    let mut fam = GFamily::new(r, a.matrix().rows(), n);
    let g: Polynomial = fam.g(&a).map_err(usage)?;
    let mut out = format!("{} = {}", bracket("G", a.matrix()), g.to_letters());
    if check {
        let lead = g.leading_monomial().map_err(usage)?.to_letters();
        let ok = fam.verify_leading(&a).map_err(usage)?;
        write!(out, "\nleading monomial: {lead} ({})", if ok { "equals X^A" } else { "differs from X^A" }).unwrap();
        return finish(out, ok);
    }
    Ok(out)
}

fn cmd_paths(n: usize, ell: usize, action: PathAction) -> Run {
    let mut out = String::new();
    match action {
        PathAction::Enumerate => {
            for p in enumerate_ell_dyck(n, ell)? {
                writeln!(out, "{}", p.path()).unwrap();
            }
            Ok(out.trim_end().to_string())
        }
        PathAction::Stats => {
            let paths = enumerate_dyck(n)?;
            writeln!(out, "Dyck paths of height {n}: {}", paths.len()).unwrap();
            for b in &paths {
                writeln!(out, "{}  nu={:?} chi={}", b, b.nu(), b.chi())
                    .unwrap();
            }
            writeln!(out, "chi distribution: {:?}", chi_distribution(n)?).unwrap();
            write!(out, "sum of h_nu: {}", hilbert_by_paths(n)?.render()).unwrap();
            Ok(out)
        }
        PathAction::FussCatalan => {
            let lhs = colored_sum(n, ell)?;
            let rhs = fuss_catalan(n, ell);
            let ok = lhs == rhs;
            finish(format!("{lhs} {} {rhs}", if ok { "=" } else { "!=" }), ok)
        }
        PathAction::PhiCheck => {
            let colored = enumerate_colored(n, ell)?;
            let targets: BTreeSet<_> = enumerate_ell_dyck(n, ell)?.into_iter().collect();
            let images: BTreeSet<_> = colored.iter().map(phi).collect();
            let round = colored.iter().all(|c| phi_inverse(&phi(c), n).as_ref() == Ok(c));
            let ok = round && images == targets && images.len() == colored.len();
            writeln!(out, "colored paths: {}", colored.len()).unwrap();
            writeln!(out, "{ell}-Dyck paths: {}", targets.len()).unwrap();
            writeln!(out, "distinct images: {}", images.len()).unwrap();
            write!(out, "round trip: {}", if round { "identity" } else { "broken" }).unwrap();
            finish(out, ok)
        }
    }
}

fn cmd_colored(ctx: &Ctx, n: usize, ell: usize, action: ColoredAction) -> Run {
    let mut out = String::new();
    match action {
        ColoredAction::Basis => {
            for m in basis_monomials(n, ell, n as u32) {
                writeln!(out, "{}", m.to_letters()).unwrap();
            }
            Ok(out.trim_end().to_string())
        }
        ColoredAction::Hilbert => {
            let f = hilbert_by_paths(n)?;
            writeln!(out, "h: {}", f.render()).unwrap();
            let values = hilbert_by_paths_evaluated(n, ell).map_err(usage)?;
            let parts: Vec<String> = values
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(d, c)| format!("{d}: {c}"))
                .collect();
            write!(out, "at ell={ell}: {}", parts.join(", ")).unwrap();
            Ok(out)
        }
        ColoredAction::Crosscheck => {
            let census = basis_census(n, ell, n as u32);
            let paths = hilbert_by_paths_evaluated(n, ell).map_err(usage)?;
            let la = hilbert_by_linear_algebra(n, ell, None, &ctx.cfg)?;
            let mut ok = true;
            for t in 0..=n as u32 {
                for d in DegreeVector::all_with_total(ell, t) {
                    let a = census.get(&d).copied().unwrap_or(0);
                    let b = paths.get(&d).and_then(|c| c.to_integer().to_u64()).unwrap_or(0);
                    let c = la.get(&d).unwrap_or(0);
                    if a != b || b != c {
                        ok = false;
                        writeln!(out, "{d}: census {a}, paths {b}, quotient {c}").unwrap();
                    }
                }
            }
            write!(out, "census, path formula and quotient {} for n={n} ell={ell}", if ok { "agree" } else { "DISAGREE" }).unwrap();
            finish(out, ok)
        }
    }
}

fn cmd_low_degree(n: u32, cap: u32) -> Run {
    let f = low_degree_expansion(n, cap);
    let mut out = format!("(1+H)^{n}(1-H) = {}\n", f.render());
    let mut ok = true;
    for d in 0..=cap {
        for mu in Partition::all(d) {
            let a = f.coeff(&mu).map_err(usage)?;
            let b = low_degree_coefficient(n, &mu);
            let mark = if a == b { "=" } else { "!=" };
            ok &= a == b;
            writeln!(out, "h{mu}: {a} {mark} {b}").unwrap();
        }
    }
    finish(out, ok)
}

fn cmd_conjecture(ctx: &Ctx, n: usize, ell: Option<usize>) -> Run {
    let threshold = conjecture_threshold(n as u32);
    let ell = ell.unwrap_or_else(|| (threshold as usize).saturating_sub(1).max(1));
    let s = ctx.series(1, n, ell, None)?;
    let f = SymFunc::from_hilbert(&s).map_err(usage)?;
    let report = h_positivity_report(&f, threshold).map_err(usage)?;
    let mut out = format!("G(1, {n}) ell={ell}, threshold degree {threshold}\n");
    for (p, c) in &report.negatives {
        writeln!(out, "negative: h{p} coefficient {c}").unwrap();
    }
    if !report.unresolved_degrees.is_empty() {
        writeln!(out, "unresolved degrees (need more variable sets): {:?}", report.unresolved_degrees).unwrap();
    }
    let verdict = match report.nonnegative_below_threshold {
        Some(true) => "h-positive below the threshold",
        Some(false) => "negative coefficient below the threshold",
        None => "undetermined below the threshold",
    };
    write!(out, "{verdict}").unwrap();
    match report.nonnegative_below_threshold {
        Some(false) => Err(Failure::Mismatch(out)),
        None => Err(Failure::Resource(out)),
        Some(true) => Ok(out),
    }
}

fn run(cli: Cli) -> Run {
    let mut cfg = match cli.modular {
        Some(k) => EngineConfig::modular(k),
        None => EngineConfig::default(),
    };
    if let Some(b) = cli.budget {
        cfg.max_monomials = b;
    }
    let ctx = Ctx { cfg };
    match cli.command {
        Command::Hilbert { group, json, csv } => cmd_hilbert(&ctx, &group, json, csv),
        Command::Expand { group, basis } => cmd_expand(&ctx, &group, basis),
        Command::VerifyTable { table, ell, max } => cmd_verify_table(&ctx, table, &ell, max),
        Command::GPoly { matrix, r, n, check_leading } => cmd_gpoly(&matrix, r, n, check_leading),
        Command::Paths { n, ell, action } => cmd_paths(n, ell, action),
        Command::Colored { n, ell, action } => cmd_colored(&ctx, n, ell, action),
        Command::LowDegree { n, cap } => cmd_low_degree(n, cap),
        Command::Conjecture { n, ell } => cmd_conjecture(&ctx, n, ell),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Mismatch(out)) => {
            println!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(3)
        }
    }
}
