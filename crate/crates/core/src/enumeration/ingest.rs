//! Reader for the appendix generator database (comma-separated tables with a header row).

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::algebra::{Domain, Operation};
use crate::catalog::{standard_relation, RELATION_KEYS};
use crate::error::{Error, Result};

use super::universe::{RelSet, Universe};

/// Column names used by the database files.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(default)]
pub struct ColumnMapping {
    /// Column holding the function token.
    pub name: String,
    /// Column holding the operation table, leftmost-major, as a string of digits.
    pub table: String,
    /// Header to catalog relation key; headers equal to a catalog key are mapped implicitly.
    pub relations: BTreeMap<String, String>,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        ColumnMapping { name: "name".into(), table: "table".into(), relations: BTreeMap::new() }
    }
}

pub fn read_mapping(path: &Path) -> Result<ColumnMapping> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// One functional generator with its recorded preservation flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorRecord {
    pub name: String,
    pub arity: usize,
    pub operation: Operation,
    /// Catalog relation key to recorded flag.
    pub flags: BTreeMap<String, bool>,
}

#[derive(Default)]
struct Row {
    table: Option<Vec<u8>>,
    flags: BTreeMap<String, bool>,
}

fn relation_key(mapping: &ColumnMapping, header: &str) -> Option<String> {
    if let Some(k) = mapping.relations.get(header) {
        return Some(k.clone());
    }
    RELATION_KEYS.contains(&header).then(|| header.to_string())
}

fn parse_table(cell: &str, file: &Path, name: &str) -> Result<Vec<u8>> {
    cell.chars()
        .filter(|c| !c.is_whitespace() && !matches!(c, '[' | ']' | ',' | ';'))
        .map(|c| match c {
            '0'..='2' => Ok(c as u8 - b'0'),
            _ => Err(Error::Input(format!("{}: table of {name} contains `{c}`", file.display()))),
        })
        .collect()
}

fn arity_of(len: usize) -> Option<usize> {
    (1..=6).find(|&k| 3usize.pow(k as u32) == len)
}

fn read_file(path: &Path, mapping: &ColumnMapping, rows: &mut BTreeMap<String, Row>) -> Result<()> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let headers = reader.headers().map_err(|e| Error::Input(format!("{}: {e}", path.display())))?.clone();
    let name_col = headers
        .iter()
        .position(|h| h == mapping.name)
        .ok_or_else(|| Error::Input(format!("{}: no `{}` column", path.display(), mapping.name)))?;
    let table_col = headers.iter().position(|h| h == mapping.table);
    let flag_cols: Vec<(usize, String)> = headers
        .iter()
        .enumerate()
        .filter_map(|(i, h)| relation_key(mapping, h).map(|k| (i, k)))
        .collect();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let name = rec.get(name_col).unwrap_or_default().to_string();
        if name.is_empty() {
            return Err(Error::Input(format!("{}: row {} has no function name", path.display(), line + 2)));
        }
        let row = rows.entry(name.clone()).or_default();
        if let Some(c) = table_col {
            row.table = Some(parse_table(rec.get(c).unwrap_or_default(), path, &name)?);
        }
        for (c, key) in &flag_cols {
            let flag = match rec.get(*c).unwrap_or_default() {
                "1" => true,
                "0" => false,
                other => {
                    return Err(Error::Input(format!(
                        "{}: row {}, column `{}`: expected 0 or 1, found `{other}`",
                        path.display(),
                        line + 2,
                        &headers[*c]
                    )))
                }
            };
            row.flags.insert(key.clone(), flag);
        }
    }
    Ok(())
}

/// Merges `f_0`, `f_1`, `f_2` ternary slices into the 4-ary table of `f`.
fn merge_slices(rows: &mut BTreeMap<String, Row>) {
    let bases: BTreeSet<String> = rows
        .keys()
        .filter_map(|n| n.strip_suffix("_0").map(str::to_string))
        .filter(|b| (0..3).all(|i| rows.get(&format!("{b}_{i}")).is_some_and(|r| r.table.as_ref().is_some_and(|t| t.len() == 27))))
        .collect();
    for b in bases {
        let mut merged = Row::default();
        let mut table = Vec::with_capacity(81);
        for i in 0..3 {
            let slice = rows.remove(&format!("{b}_{i}")).expect("checked above");
            table.extend(slice.table.expect("checked above"));
            merged.flags.extend(slice.flags);
        }
        let entry = rows.entry(b).or_default();
        entry.table = Some(table);
        entry.flags.extend(merged.flags);
    }
}

/// Reads generator tables and flags, then checks every flag against recomputed preservation.
///
/// An empty path list yields no records.
pub fn ingest_generator_db(paths: &[PathBuf], mapping: &ColumnMapping) -> Result<Vec<GeneratorRecord>> {
    let mut rows: BTreeMap<String, Row> = BTreeMap::new();
    for p in paths {
        if !p.exists() {
            return Err(Error::Input(format!("{}: no such file", p.display())));
        }
        read_file(p, mapping, &mut rows)?;
    }
    merge_slices(&mut rows);
    let d = Domain::new(3)?;
    let mut out = Vec::new();
    for (name, row) in rows {
        let table = row.table.ok_or_else(|| Error::Input(format!("generator {name} has flags but no table")))?;
        let arity = arity_of(table.len())
            .ok_or_else(|| Error::Input(format!("generator {name}: table length {} is not a power of 3", table.len())))?;
        let operation = Operation::new(d, arity, table)?;
        for (key, &flag) in &row.flags {
            let actual = operation.preserves(&standard_relation(key)?)?;
            if actual != flag {
                return Err(Error::Validation(format!(
                    "generator {name}, relation {key}: database says {}, recomputed {}",
                    flag as u8, actual as u8
                )));
            }
        }
        out.push(GeneratorRecord { name, arity, operation, flags: row.flags });
    }
    Ok(out)
}

/// Closed sets whose generators, selected by flags, fail to reproduce them; pairs are
/// `(closed set, invariants of the selected generators)`.
pub fn reconstruct_clones(generators: &[GeneratorRecord], universe: &Universe, closed: &[RelSet]) -> Vec<(RelSet, RelSet)> {
    let masks: Vec<RelSet> = generators.iter().map(|g| universe.preserved_by(&g.operation)).collect();
    closed
        .iter()
        .filter_map(|&x| {
            let got = masks.iter().filter(|&&m| m & x == x).fold(universe.all(), |acc, m| acc & m);
            (got != x).then_some((x, got))
        })
        .collect()
}
