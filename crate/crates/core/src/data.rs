//! Binary datasets: loading, indexing and contingency counting.
//!
//! Rows are stored column-wise as [`RowSet`]s. Two text formats are
//! accepted:
//!
//! * **transactions**: one row per line, whitespace-separated item tokens.
//!   Columns appear in order of first occurrence. A blank line is a row with
//!   no items.
//! * **csv01**: a header of column names followed by comma-separated `0`/`1`
//!   rows. Blank lines are skipped.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rowset::RowSet;
use crate::table::{ContingencyTable, Sign};

/// Column index into a [`Dataset`].
pub type AttrId = usize;

/// Default limit on `|X|` for operations that materialise `2^|X|` cells.
pub const DEFAULT_MAX_CELL_ATTRS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Transactions,
    Csv01,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transactions" => Ok(Format::Transactions),
            "csv01" | "csv" => Ok(Format::Csv01),
            other => Err(Error::Config(format!("unknown dataset format {other:?}"))),
        }
    }
}

/// An immutable binary data matrix of `n_rows` rows over named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n_rows: usize,
    names: Vec<String>,
    columns: Vec<RowSet>,
    freqs: Vec<usize>,
    index: HashMap<String, AttrId>,
}

impl Dataset {
    /// Builds a dataset from named column row-sets.
    pub fn from_columns(n_rows: usize, names: Vec<String>, columns: Vec<RowSet>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::domain("column name and column count differ"));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::domain(format!("duplicate column name {name:?}")));
            }
        }
        if let Some(c) = columns.iter().find(|c| c.universe() != n_rows) {
            return Err(Error::domain(format!(
                "column over {} rows in a dataset of {n_rows} rows",
                c.universe()
            )));
        }
        let freqs = columns.iter().map(RowSet::len).collect();
        Ok(Dataset {
            n_rows,
            names,
            columns,
            freqs,
            index,
        })
    }

    /// Builds a dataset from row-major booleans. Mostly useful in tests.
    pub fn from_rows(names: &[&str], rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        let mut columns = vec![RowSet::empty(n); names.len()];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != names.len() {
                return Err(Error::domain(format!(
                    "row {r} has {} values, expected {}",
                    row.len(),
                    names.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                if v {
                    columns[c].insert(r);
                }
            }
        }
        Dataset::from_columns(n, names.iter().map(|s| s.to_string()).collect(), columns)
    }

    pub fn load<R: Read>(mut reader: R, format: Format) -> Result<Self> {
        let mut bytes = Vec::new();
        reader.read_to_end(&mut bytes)?;
        Dataset::parse(&bytes, format)
    }

    pub fn parse(bytes: &[u8], format: Format) -> Result<Self> {
        match format {
            Format::Transactions => Dataset::parse_transactions(bytes),
            Format::Csv01 => Dataset::parse_csv01(bytes),
        }
    }

    pub fn parse_transactions(bytes: &[u8]) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, AttrId> = HashMap::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut n_rows = 0;
        for (lineno, line) in split_lines(bytes) {
            let line = std::str::from_utf8(line)
                .map_err(|e| Error::parse(lineno, format!("invalid UTF-8: {e}")))?;
            for token in line.split_whitespace() {
                let id = match index.get(token) {
                    Some(&id) => id,
                    None => {
                        let id = names.len();
                        names.push(token.to_string());
                        index.insert(token.to_string(), id);
                        members.push(Vec::new());
                        id
                    }
                };
                if members[id].last() != Some(&n_rows) {
                    members[id].push(n_rows);
                }
            }
            n_rows += 1;
        }
        if n_rows == 0 {
            return Err(Error::domain("empty dataset"));
        }
        let columns = members
            .into_iter()
            .map(|rows| RowSet::from_indices(n_rows, rows))
            .collect();
        Dataset::from_columns(n_rows, names, columns)
    }

    pub fn parse_csv01(bytes: &[u8]) -> Result<Self> {
        let mut lines = split_lines(bytes).filter(|(_, l)| !l.iter().all(u8::is_ascii_whitespace));
        let (header_no, header) = lines.next().ok_or_else(|| Error::domain("empty dataset"))?;
        let header = std::str::from_utf8(header)
            .map_err(|e| Error::parse(header_no, format!("invalid UTF-8: {e}")))?;
        let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
        if let Some(pos) = names.iter().position(String::is_empty) {
            return Err(Error::parse(header_no, format!("empty column name at position {}", pos + 1)));
        }
        let mut seen = HashMap::new();
        for name in &names {
            if seen.insert(name.as_str(), ()).is_some() {
                return Err(Error::parse(header_no, format!("duplicate column name {name:?}")));
            }
        }
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); names.len()];
        let mut n_rows = 0;
        for (lineno, line) in lines {
            let line = std::str::from_utf8(line)
                .map_err(|e| Error::parse(lineno, format!("invalid UTF-8: {e}")))?;
            let mut count = 0;
            for (c, field) in line.split(',').enumerate() {
                count += 1;
                if c >= names.len() {
                    continue;
                }
                match field.trim() {
                    "1" => members[c].push(n_rows),
                    "0" => {}
                    other => {
                        return Err(if other.parse::<f64>().is_ok() {
                            Error::Domain(format!(
                                "line {lineno}: value {other:?} in column {:?} is not 0 or 1",
                                names[c]
                            ))
                        } else {
                            Error::parse(lineno, format!("malformed field {other:?}"))
                        })
                    }
                }
            }
            if count != names.len() {
                return Err(Error::parse(
                    lineno,
                    format!("expected {} fields, found {count}", names.len()),
                ));
            }
            n_rows += 1;
        }
        if n_rows == 0 {
            return Err(Error::domain("empty dataset"));
        }
        let columns = members
            .into_iter()
            .map(|rows| RowSet::from_indices(n_rows, rows))
            .collect();
        Dataset::from_columns(n_rows, names, columns)
    }

    /// Serialises in csv01 format.
    pub fn to_csv01(&self) -> String {
        let mut out = self.names.join(",");
        out.push('\n');
        for r in 0..self.n_rows {
            for (c, col) in self.columns.iter().enumerate() {
                if c > 0 {
                    out.push(',');
                }
                out.push(if col.contains(r) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Serialises in transactions format. Column names containing
    /// whitespace do not round-trip.
    pub fn to_transactions(&self) -> String {
        let mut out = String::new();
        for r in 0..self.n_rows {
            let mut first = true;
            for (c, col) in self.columns.iter().enumerate() {
                if col.contains(r) {
                    if !first {
                        out.push(' ');
                    }
                    let _ = write!(out, "{}", self.names[c]);
                    first = false;
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, id: AttrId) -> &str {
        &self.names[id]
    }

    pub fn column(&self, id: AttrId) -> &RowSet {
        &self.columns[id]
    }

    pub fn columns(&self) -> &[RowSet] {
        &self.columns
    }

    /// Per-column frequencies `fr(A_i)`.
    pub fn freqs(&self) -> &[usize] {
        &self.freqs
    }

    pub fn attr_id(&self, name: &str) -> Result<AttrId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    pub fn attr_ids<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<AttrId>> {
        names.iter().map(|n| self.attr_id(n.as_ref())).collect()
    }

    fn check_ids(&self, ids: &[AttrId]) -> Result<()> {
        match ids.iter().find(|&&i| i >= self.n_cols()) {
            Some(bad) => Err(Error::UnknownAttribute(format!("#{bad}"))),
            None => Ok(()),
        }
    }

    /// Rows where every attribute of `x` is 1. The empty conjunction covers
    /// every row.
    pub fn cover(&self, x: &[AttrId]) -> RowSet {
        let mut it = x.iter();
        match it.next() {
            None => RowSet::full(self.n_rows),
            Some(&first) => {
                let mut acc = self.columns[first].clone();
                for &a in it {
                    acc.intersect_with(&self.columns[a]);
                }
                acc
            }
        }
    }

    /// `fr(X)`.
    pub fn freq(&self, x: &[AttrId]) -> usize {
        match x {
            [] => self.n_rows,
            [a] => self.freqs[*a],
            [a, b] => self.columns[*a].intersection_len(&self.columns[*b]),
            _ => self.cover(x).len(),
        }
    }

    /// The 2×2 table of `X → A` (or `X → ¬A`).
    pub fn extract_table(&self, x: &[AttrId], a: AttrId, sign: Sign) -> Result<ContingencyTable> {
        if x.is_empty() {
            return Err(Error::domain("antecedent must be nonempty"));
        }
        self.check_ids(x)?;
        self.check_ids(&[a])?;
        if x.contains(&a) {
            return Err(Error::domain("consequent is a member of the antecedent"));
        }
        let cover = self.cover(x);
        Ok(table_from_cover(self, &cover, a, sign))
    }

    /// Counts all `2^|x|` truth-value combinations of `x`.
    pub fn extract_cells(&self, x: &[AttrId], max_attrs: usize) -> Result<CellCounts> {
        self.check_ids(x)?;
        if x.len() > max_attrs {
            return Err(Error::Capacity {
                what: "attribute set size",
                limit: max_attrs,
                requested: x.len(),
            });
        }
        let mut counts = vec![0u64; 1 << x.len()];
        for r in 0..self.n_rows {
            let mut mask = 0usize;
            for (bit, &a) in x.iter().enumerate() {
                if self.columns[a].contains(r) {
                    mask |= 1 << bit;
                }
            }
            counts[mask] += 1;
        }
        Ok(CellCounts {
            items: x.to_vec(),
            counts,
        })
    }

    /// The dataset restricted to the given rows, renumbered in ascending
    /// order.
    pub fn restrict_rows(&self, rows: &RowSet) -> Dataset {
        let kept: Vec<usize> = rows.iter().collect();
        let n = kept.len();
        let columns = self
            .columns
            .iter()
            .map(|col| {
                RowSet::from_indices(
                    n,
                    kept.iter().enumerate().filter(|(_, &r)| col.contains(r)).map(|(i, _)| i),
                )
            })
            .collect();
        Dataset::from_columns(n, self.names.clone(), columns).expect("restriction keeps names valid")
    }

    /// Row-major copy of the data, one `Vec<AttrId>` per row.
    pub fn rows(&self) -> Vec<Vec<AttrId>> {
        let mut rows = vec![Vec::new(); self.n_rows];
        for (c, col) in self.columns.iter().enumerate() {
            for r in col.iter() {
                rows[r].push(c);
            }
        }
        rows
    }

    /// Number of ones in the matrix.
    pub fn n_ones(&self) -> usize {
        self.freqs.iter().sum()
    }
}

pub(crate) fn table_from_cover(d: &Dataset, cover: &RowSet, a: AttrId, sign: Sign) -> ContingencyTable {
    let n = d.n_rows() as u64;
    let n_x = cover.len() as u64;
    let fa = d.freqs()[a] as u64;
    let xa = cover.intersection_len(d.column(a)) as u64;
    match sign {
        Sign::Positive => ContingencyTable {
            n,
            n_x,
            n_a: fa,
            n_xa: xa,
        },
        Sign::Negated => ContingencyTable {
            n,
            n_x,
            n_a: n - fa,
            n_xa: n_x - xa,
        },
    }
}

fn split_lines(bytes: &[u8]) -> impl Iterator<Item = (usize, &[u8])> {
    let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    let mut lines: Vec<&[u8]> = if bytes.is_empty() {
        Vec::new()
    } else {
        body.split(|&b| b == b'\n').collect()
    };
    for l in &mut lines {
        if let Some(stripped) = l.strip_suffix(b"\r") {
            *l = stripped;
        }
    }
    lines.into_iter().enumerate().map(|(i, l)| (i + 1, l))
}

/// Counts of every truth-value combination of an attribute set. Index bit
/// `i` of a cell corresponds to `items[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCounts {
    pub items: Vec<AttrId>,
    pub counts: Vec<u64>,
}

impl CellCounts {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Count of the all-ones cell, i.e. `fr(X)`.
    pub fn freq(&self) -> u64 {
        *self.counts.last().unwrap_or(&0)
    }

    /// Count of the cell with the given truth values (one per item).
    pub fn get(&self, values: &[bool]) -> u64 {
        let mask = values
            .iter()
            .enumerate()
            .fold(0usize, |m, (i, &v)| if v { m | 1 << i } else { m });
        self.counts[mask]
    }
}

/// A scored dependency rule `X → A` or `X → ¬A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RulePattern {
    pub antecedent: Vec<AttrId>,
    pub consequent: AttrId,
    pub sign: Sign,
    pub table: ContingencyTable,
    pub scores: BTreeMap<String, f64>,
}

impl RulePattern {
    pub fn new(d: &Dataset, antecedent: &[AttrId], consequent: AttrId, sign: Sign) -> Result<Self> {
        let mut antecedent = antecedent.to_vec();
        antecedent.sort_unstable();
        antecedent.dedup();
        let table = d.extract_table(&antecedent, consequent, sign)?;
        Ok(RulePattern {
            antecedent,
            consequent,
            sign,
            table,
            scores: BTreeMap::new(),
        })
    }

    /// Human-readable form such as `smoking, stress -> ¬disease`.
    pub fn display(&self, d: &Dataset) -> String {
        let lhs: Vec<&str> = self.antecedent.iter().map(|&a| d.name(a)).collect();
        let neg = if self.sign == Sign::Negated { "!" } else { "" };
        format!("{} -> {}{}", lhs.join(", "), neg, d.name(self.consequent))
    }
}

/// Parses a rule written as `A, B -> C` or `A B -> !C` (also `¬C`, `~C`).
pub fn parse_rule_spec(spec: &str) -> Result<(Vec<String>, String, Sign)> {
    let (lhs, rhs) = spec
        .split_once("->")
        .ok_or_else(|| Error::parse(1, "rule must contain '->'"))?;
    let antecedent: Vec<String> = lhs
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    if antecedent.is_empty() {
        return Err(Error::parse(1, "empty antecedent"));
    }
    let rhs = rhs.trim();
    let (sign, name) = match rhs.strip_prefix(['!', '~', '¬']) {
        Some(rest) => (Sign::Negated, rest.trim()),
        None => (Sign::Positive, rhs),
    };
    if name.is_empty() || name.contains(|c: char| c == ',' || c.is_whitespace()) {
        return Err(Error::parse(1, "consequent must be a single attribute"));
    }
    Ok((antecedent, name.to_string(), sign))
}
