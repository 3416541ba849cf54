//! Reference expansions shipped in `data/tables.txt`, and comparisons of
//! expansions against computed series.

use num_rational::BigRational;
use thiserror::Error;

use crate::hilbert::{GroupSpec, HilbertSeries};
use crate::shapes::DegreeVector;
use crate::symfunc::{Basis, Partition, SymError, SymFunc};

const DATA: &str = include_str!("../data/tables.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Expansion { line: usize, source: SymError },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub table: String,
    pub group: GroupSpec,
    pub expansion: SymFunc,
}

/// Parses lines `<table> <r> <n> : <expansion>`; `#` starts a comment.
pub fn parse_tables(text: &str) -> Result<Vec<TableEntry>, TableError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let syntax = |msg: &str| TableError::Syntax { line, msg: msg.into() };
        let (head, expr) = body.split_once(':').ok_or_else(|| syntax("missing ':'"))?;
        let fields: Vec<&str> = head.split_whitespace().collect();
        let [table, r, n] = fields[..] else {
            return Err(syntax("expected <table> <r> <n>"));
        };
        let r: u32 = r.parse().map_err(|_| syntax("bad r"))?;
        let n: usize = n.parse().map_err(|_| syntax("bad n"))?;
        let group = GroupSpec::new(r, n).map_err(|e| syntax(&e.to_string()))?;
        let expansion = SymFunc::parse(expr.trim(), None).map_err(|source| TableError::Expansion { line, source })?;
        out.push(TableEntry { table: table.into(), group, expansion });
    }
    Ok(out)
}

/// Every embedded entry.
pub fn embedded() -> Vec<TableEntry> {
    parse_tables(DATA).expect("embedded tables parse")
}

pub fn entries(table: &str) -> Vec<TableEntry> {
    embedded().into_iter().filter(|e| e.table == table).collect()
}

pub fn lookup(table: &str, r: u32, n: usize) -> Option<TableEntry> {
    embedded().into_iter().find(|e| e.table == table && e.group.r == r && e.group.n == n)
}

/// A multidegree where an expansion and a series disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub d: DegreeVector,
    pub expected: BigRational,
    pub computed: u64,
}

/// Evaluates `expansion` at `series.ell` variables and compares every
/// multidegree up to the series truncation. Terms of the expansion above
/// that degree are ignored; missing terms count as zero.
pub fn compare_with_series(expansion: &SymFunc, series: &HilbertSeries) -> Result<Vec<Mismatch>, SymError> {
    let cap = series.max_total_degree;
    let f = SymFunc::from_terms(expansion.basis(), cap, expansion.terms().map(|(p, c)| (p.clone(), c.clone())));
    let values = f.evaluate(series.ell)?;
    let mut out = Vec::new();
    for t in 0..=cap {
        for d in DegreeVector::all_with_total(series.ell, t) {
            let expected = values.get(&d).cloned().unwrap_or_default();
            let computed = series.get(&d).unwrap_or(0);
            if expected != BigRational::from_integer(computed.into()) {
                out.push(Mismatch { d, expected, computed });
            }
        }
    }
    Ok(out)
}

/// A partition whose Schur coefficient differs from the reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchurMismatch {
    pub partition: Partition,
    pub expected: BigRational,
    pub computed: BigRational,
}

/// Compares the Schur coefficients extracted from `series` with those of
/// `expansion`, over partitions with at most `series.ell` parts and degree
/// at most the truncation.
pub fn compare_schur(expansion: &SymFunc, series: &HilbertSeries) -> Result<Vec<SchurMismatch>, SymError> {
    let computed = SymFunc::from_hilbert(series)?.to_basis(Basis::S)?;
    let reference = expansion.to_basis(Basis::S)?;
    let mut out = Vec::new();
    for d in 0..=series.max_total_degree {
        for p in Partition::all(d).into_iter().filter(|p| p.len() <= series.ell) {
            let expected = if d <= reference.degree_cap() { reference.coeff(&p)? } else { BigRational::default() };
            let got = computed.coeff(&p)?;
            if expected != got {
                out.push(SchurMismatch { partition: p, expected, computed: got });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_tables_load() {
        let all = embedded();
        assert_eq!(entries("sn-h").len(), 7);
        assert_eq!(entries("sn-schur").len(), 5);
        assert_eq!(entries("g2n-h").len(), 2);
        assert_eq!(all.len(), 14);
        let seven = lookup("sn-h", 1, 7).unwrap();
        assert_eq!(seven.expansion.coeff(&Partition::new(vec![5]).unwrap()).unwrap(), BigRational::from_integer((-36).into()));
        assert_eq!(seven.expansion.basis(), Basis::H);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_tables("# c\nsn-h 1 : 1\n").unwrap_err();
        assert!(matches!(err, TableError::Syntax { line: 2, .. }));
        let err = parse_tables("sn-h 1 2 : 1+q\n").unwrap_err();
        assert!(matches!(err, TableError::Expansion { line: 1, .. }));
    }
}
