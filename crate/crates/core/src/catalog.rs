use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{CodeError, KnotSymbol, TextileCode};
use crate::enumerate::{has_r1_pattern, has_r2_pattern};
use crate::realize::is_realizable;
use crate::ring::{Poly, RingError};
use crate::zenkina::zenkina_polynomial;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub code: TextileCode,
    pub complexity: u32,
    pub realizable: bool,
    pub r1: bool,
    pub r2: bool,
    pub symbol: KnotSymbol,
    pub zenkina: Option<Poly>,
}

impl CatalogEntry {
    /// Computes every field from the code; the invariant only when asked and defined.
    pub fn describe(code: TextileCode, with_invariant: bool) -> CatalogEntry {
        let zenkina = if with_invariant { zenkina_polynomial(&code).ok() } else { None };
        CatalogEntry {
            complexity: code.complexity(),
            realizable: is_realizable(&code),
            r1: has_r1_pattern(&code),
            r2: has_r2_pattern(&code),
            symbol: code.knot_symbol(),
            zenkina,
            code,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SymbolRecord {
    n: u32,
    k: usize,
    x: i32,
    y: i32,
}

#[derive(Serialize, Deserialize)]
struct Record {
    schema: u32,
    code: String,
    complexity: u32,
    realizable: bool,
    r1: bool,
    r2: bool,
    symbol: SymbolRecord,
    zenkina: Option<String>,
}

impl From<&CatalogEntry> for Record {
    fn from(e: &CatalogEntry) -> Record {
        let total = e.symbol.total();
        Record {
            schema: SCHEMA,
            code: e.code.to_string(),
            complexity: e.complexity,
            realizable: e.realizable,
            r1: e.r1,
            r2: e.r2,
            symbol: SymbolRecord { n: e.symbol.crossings, k: e.symbol.components, x: total.x, y: total.y },
            zenkina: e.zenkina.as_ref().map(ToString::to_string),
        }
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("line {line}: schema {found} is not supported (expected {SCHEMA})")]
    Schema { line: usize, found: u32 },
    #[error("line {line}: {source}")]
    Code { line: usize, source: CodeError },
    #[error("line {line}: {source}")]
    Poly { line: usize, source: RingError },
    #[error("line {line}: field `{field}` disagrees with the code")]
    Inconsistent { line: usize, field: &'static str },
}

pub fn catalog_to_writer(entries: &[CatalogEntry], mut w: impl Write) -> Result<(), CatalogError> {
    for e in entries {
        let text = serde_json::to_string(&Record::from(e)).expect("records serialize");
        w.write_all(text.as_bytes())?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn catalog_to_file(entries: &[CatalogEntry], path: impl AsRef<Path>) -> Result<(), CatalogError> {
    catalog_to_writer(entries, BufWriter::new(File::create(path)?))
}

fn entry_from(line: usize, text: &str) -> Result<CatalogEntry, CatalogError> {
    let r: Record = serde_json::from_str(text).map_err(|source| CatalogError::Json { line, source })?;
    if r.schema != SCHEMA {
        return Err(CatalogError::Schema { line, found: r.schema });
    }
    let code: TextileCode = r.code.parse().map_err(|source| CatalogError::Code { line, source })?;
    let zenkina = match r.zenkina {
        Some(s) => Some(s.parse().map_err(|source| CatalogError::Poly { line, source })?),
        None => None,
    };
    let symbol = code.knot_symbol();
    let total = symbol.total();
    let s = &r.symbol;
    if (s.n, s.k, s.x, s.y) != (symbol.crossings, symbol.components, total.x, total.y) {
        return Err(CatalogError::Inconsistent { line, field: "symbol" });
    }
    if r.complexity != code.complexity() {
        return Err(CatalogError::Inconsistent { line, field: "complexity" });
    }
    Ok(CatalogEntry { code, complexity: r.complexity, realizable: r.realizable, r1: r.r1, r2: r.r2, symbol, zenkina })
}

pub fn catalog_from_reader(r: impl Read) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut out = Vec::new();
    for (k, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(entry_from(k + 1, &line)?);
    }
    Ok(out)
}

pub fn catalog_from_file(path: impl AsRef<Path>) -> Result<Vec<CatalogEntry>, CatalogError> {
    catalog_from_reader(File::open(path)?)
}
