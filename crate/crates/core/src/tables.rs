//! Reference tables with a small errata annex, and a recompute-and-diff driver.

use std::fmt;
use std::str::FromStr;

use crate::code::TextileCode;
use crate::enumerate::{count_abstract, count_realizable, reduced_codes, EnumSpec, Stage};
use crate::ring::{equals_mod_units, Poly};
use crate::zenkina::{invariants_distinct, zenkina_polynomial};

pub const TABLE_VERSION: u32 = 1;

/// (n, l, m, abstract, realizable)
pub const ALL_CODES: [(u32, u32, u32, u64, u64); 5] =
    [(1, 1, 1, 48, 8), (2, 1, 1, 1920, 672), (1, 3, 1, 3840, 368), (2, 2, 1, 23040, 2816), (3, 1, 1, 161280, 24960)];

/// (n, l, m, reduced)
pub const RED_CODES: [(u32, u32, u32, u64); 3] = [(2, 1, 1, 8), (2, 2, 1, 48), (3, 1, 1, 32)];

#[derive(Clone, Copy, Debug)]
pub struct ZenkinaRow {
    pub symbol: &'static str,
    pub code: &'static str,
    pub poly: &'static str,
}

const fn row(symbol: &'static str, code: &'static str, poly: &'static str) -> ZenkinaRow {
    ZenkinaRow { symbol, code, poly }
}

pub const ZENKINA_4: [ZenkinaRow; 8] = [
    row("2^1_(1,1)", "h1+ 1+ 2 v1+ 1 2+", "p^2xy + pqy + qx - 1"),
    row("2^1_(-1,1)", "h1+ 1 2+ v1- 1+ 2", "p^2x^-1y + pqy + qx^-1 - 1"),
    row("2^1_(1,-1)", "h1- 1 2+ v1+ 1+ 2", "p^2xy^-1 + pqy^-1 + qx - 1"),
    row("~2^1_(-1,-1)", "h1- 1+ 2 v1- 1 2+", "p^2x^-1y^-1 + pqy^-1 + qx^-1 - 1"),
    row("~2^1_(1,1)", "h1+ 1 2- v1+ 1- 2", "p^2 + pqy + qx - xy"),
    row("~2^1_(-1,1)", "h1+ 1- 2 v1- 1 2-", "p^2 + pqy + qx - x^-1y"),
    row("~2^1_(1,-1)", "h1- 1- 2 v1+ 1 2-", "p^2 + pqy^-1 + qx - xy^-1"),
    row("2^1_(-1,-1)", "h1- 1 2- v1- 1- 2", "p^2 + pqy^-1 + qx^-1 - x^-1y^-1"),
];

pub const ZENKINA_5X2: [ZenkinaRow; 16] = [
    row("2^1_(2,1)", "h1+ 1+ 2 v1+ 1 2+ v2+", "p^2x^2y + pxy + q(xy-x) - 1"),
    row("2^1_(-2,-1)", "h1- v2- 1+ 2 v1- 1 2+", "p^2x^-2y + px^-1y^-1 + q(x^-1y^-1 - x) - 1"),
    row("2^1_(2,-1)", "h1- v2+ 1- 2 v1+ 1 2-", "p^2 - pqx - qxy^-1 + x^2y^-1"),
    row("2^1_(-2,1)", "h1+ 1- 2 v1- 1 2- v2-", "p^2 - pqx^-1 - qx^-1y + x^-2y"),
    row("2^1_(0,1)", "h1+ v1+ 1 2+ v2- 1+ 2", "p^2y + qxy + pqx^-1 - 1"),
    row("2^1_(0,-1)", "h1- 1 2+ v2+ 1+ 2 v1-", "p^2y^-1 - qxy - pqx^-1 - y"),
    row("2^1_(0bar,1)", "h1+ v1- 1 2- v2+ 1- 2", "p^2 + pqx^-1y + qx - y"),
    row("2^1_(0bar,-1)", "h1- 1 2- v2- 1- 2 v1+", "p^2 + pqxy^-1 + qx^-1 - y^-1"),
    row("~2^1_(2,1)", "h1+ 1 2- v1+ 1- 2 v2+", "p^2 - pqxy - qx^-1 - x^2y"),
    row("~2^1_(-2,-1)", "h1- v2- 1 2- v1- 1- 2", "p^2 - pqx - qxy^-1 + x^-2y^-1"),
    row("~2^1_(2,-1)", "h1- v2+ 1 2+ v1+ 1+ 2", "p^2x^2y^-1 + pqx + qxy^-1 - 1"),
    row("~2^1_(-2,1)", "h1+ 1 2+ v1- 1+ 2 v2-", "p^2x^-2y + px^-1 + q(x^-1y - x^-1) - 1"),
    row("~2^1_(0,1)", "h1+ v1+ 1- 2 v2- 1 2-", "p^2 + pqx^-1y + qx - y"),
    row("~2^1_(0,-1)", "h1- 1- 2 v2+ 1 2- v1-", "p^2 + pqx + qx^-1y^-1 - y^-1"),
    row("~2^1_(0bar,1)", "h1+ v1- 1+ 2 v2+ 1 2+", "p^2y + pqxy^-1 + qx - 1"),
    row("2^1_(0bar,-1)", "h1- 1+ 2 v2- 1 2+ v1+", "p^2y^-1 + qtxy^-1 + qx^-1 - 1"),
];

pub const ZENKINA_5X3: [ZenkinaRow; 8] = [
    row("3^1_(-1,1)", "h1+ 1 2- 3 1+ v1- 3- 2", "(1-q^2)x^-1y - pqx^-1 - qy - (q^2 - p^2)"),
    row("3^1_(1,-1)", "h1- 1 2- v1+ 3+ 2 1- 3", "(1-q^2)x^-1y^-1 - pqy^-1 - qx^-1 + (q^2-p^2)"),
    row("3^1_(1,1)", "h1+ 1 2+ 3 1- v1+ 3+ 2", "(q^2 - p^2)xy - pqy - qx + (1-q^2)"),
    row("3^1_(-1,-1)", "h1- 1 2+ v1- 3- 2 1+ 3", "(q^2 - p^2)x^-1y^-1 - pqy^-1 - qx^-1 + (1-q^2)"),
    row("~3^1_(-1,1)", "h1+ 1- 2 3+ 1 v1- 3 2+", "(q^2 - p^2)x^-1y - pqx^-1 - qy + (1-q^2)"),
    row("~3^1_(1,-1)", "h1- 1+ 2 v1+ 3 2+ 1 3-", "(q^2 - p^2)xy^-1 - pqy^-1 - qx + (1-q^2)"),
    row("~3^1_(1,1)", "h1+ 1+ 2 3- 1 v1+ 3 2-", "(1-q^2)xy - pqy - qx - (q^2 - p^2)"),
    row("~3^1_(-1,-1)", "h1- 1- 2 v1- 3 2- 1 3+", "(1-q^2)x^-1y^-1 - qty^-1 - qx^-1 + (q^2-p^2)"),
];

#[derive(Clone, Copy, Debug)]
pub struct Erratum {
    pub id: &'static str,
    pub table: TableId,
    pub code: &'static str,
    pub note: &'static str,
}

/// Known misprints. Only a row listed here may be excused; a row that matches is
/// reported as a match regardless.
pub const ERRATA: [Erratum; 3] = [
    Erratum {
        id: "z5x2-duplicate-poly",
        table: TableId::Zenkina5x2,
        code: "h1+ v1+ 1- 2 v2- 1 2-",
        note: "printed polynomial repeats the row of h1+ v1- 1 2- v2+ 1- 2",
    },
    Erratum {
        id: "z5x2-duplicate-symbol",
        table: TableId::Zenkina5x2,
        code: "h1- 1+ 2 v2- 1 2+ v1+",
        note: "printed symbol repeats the row of h1- 1 2- v2- 1- 2 v1+",
    },
    Erratum {
        id: "z5x2-truncated-code",
        table: TableId::Zenkina5x2,
        code: "h1+ v1+ 1 2+ v2- 1+ 2",
        note: "printed code lacks its final symbol 2; restored here",
    },
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableId {
    AllCodes,
    RedCodes,
    Zenkina4,
    Zenkina5x2,
    Zenkina5x3,
}

impl TableId {
    pub const ALL: [TableId; 5] =
        [TableId::AllCodes, TableId::RedCodes, TableId::Zenkina4, TableId::Zenkina5x2, TableId::Zenkina5x3];

    pub fn zenkina_rows(self) -> &'static [ZenkinaRow] {
        match self {
            TableId::Zenkina4 => &ZENKINA_4,
            TableId::Zenkina5x2 => &ZENKINA_5X2,
            TableId::Zenkina5x3 => &ZENKINA_5X3,
            _ => &[],
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableId::AllCodes => "allcodes",
            TableId::RedCodes => "redcodes",
            TableId::Zenkina4 => "zenkina4",
            TableId::Zenkina5x2 => "zenkina5x2",
            TableId::Zenkina5x3 => "zenkina5x3",
        })
    }
}

impl FromStr for TableId {
    type Err = String;
    fn from_str(s: &str) -> Result<TableId, String> {
        TableId::ALL.into_iter().find(|t| t.to_string() == s).ok_or_else(|| format!("unknown table `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Match,
    Mismatch,
    Errata(&'static str),
}

#[derive(Clone, Debug)]
pub struct RowDiff {
    pub label: String,
    pub expected: String,
    pub got: String,
    pub status: RowStatus,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct DiffReport {
    pub table: TableId,
    pub rows: Vec<RowDiff>,
}

impl DiffReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != RowStatus::Mismatch)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn mismatches(&self) -> usize {
        self.rows.iter().filter(|r| r.status == RowStatus::Mismatch).count()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TableOptions {
    pub workers: usize,
    pub unit_bound: i64,
    pub allow_errata: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { workers: 0, unit_bound: 4, allow_errata: true }
    }
}

fn count_row(label: String, expected: u64, got: u64, note: String) -> RowDiff {
    let status = if expected == got { RowStatus::Match } else { RowStatus::Mismatch };
    RowDiff { label, expected: expected.to_string(), got: got.to_string(), status, note }
}

fn spec(n: u32, l: u32, m: u32, stage: Stage) -> EnumSpec {
    EnumSpec::new(n, l, m, stage).expect("table rows are valid shapes")
}

/// The symbol without the mirror and bar decorations, which are not computed.
pub fn plain_symbol(s: &str) -> String {
    s.replace('~', "").replace("bar", "")
}

pub fn erratum_for(table: TableId, code: &str) -> Option<&'static Erratum> {
    ERRATA.iter().find(|e| e.table == table && e.code == code)
}

fn zenkina_row(table: TableId, r: &ZenkinaRow, opts: &TableOptions) -> RowDiff {
    let code: TextileCode = r.code.parse().expect("embedded code parses");
    let expected: Poly = r.poly.parse().expect("embedded polynomial parses");
    let label = format!("{} {}", r.symbol, r.code);
    let (got, unit) = match zenkina_polynomial(&code) {
        Ok(f) => {
            let unit = equals_mod_units(&f, &expected, opts.unit_bound).ok().flatten();
            (f.to_string(), unit)
        }
        Err(e) => (format!("error: {e}"), None),
    };
    let symbol_ok = code.knot_symbol().to_string() == plain_symbol(r.symbol);
    let mut notes = Vec::new();
    if let Some(u) = unit {
        notes.push(format!("unit {u}"));
    }
    if !symbol_ok {
        notes.push(format!("symbol computed as {}", code.knot_symbol()));
    }
    let known = erratum_for(table, r.code);
    if let Some(e) = known {
        notes.push(format!("{}: {}", e.id, e.note));
    }
    let status = match (unit.is_some() && symbol_ok, known) {
        (true, _) => RowStatus::Match,
        (false, Some(e)) if opts.allow_errata => RowStatus::Errata(e.id),
        (false, _) => RowStatus::Mismatch,
    };
    RowDiff { label, expected: r.poly.to_string(), got, status, note: notes.join("; ") }
}

pub fn run_table(table: TableId, opts: &TableOptions) -> DiffReport {
    let mut rows = Vec::new();
    match table {
        TableId::AllCodes => {
            for (n, l, m, a, r) in ALL_CODES {
                let s = spec(n, l, m, Stage::Abstract);
                rows.push(count_row(
                    format!("({n},{l},{m}) abstract"),
                    a,
                    count_abstract(&s, opts.workers),
                    String::new(),
                ));
                rows.push(count_row(
                    format!("({n},{l},{m}) realizable"),
                    r,
                    count_realizable(&s, opts.workers),
                    String::new(),
                ));
            }
        }
        TableId::RedCodes => {
            for (n, l, m, want) in RED_CODES {
                let codes = reduced_codes(&spec(n, l, m, Stage::Reduced), opts.workers);
                let got = codes.len() as u64;
                let note = if got == want {
                    String::new()
                } else {
                    let list: Vec<String> = codes.iter().map(ToString::to_string).collect();
                    format!("surviving codes: {}", list.join(" | "))
                };
                rows.push(count_row(format!("({n},{l},{m}) reduced"), want, got, note));
            }
        }
        TableId::Zenkina4 | TableId::Zenkina5x2 | TableId::Zenkina5x3 => {
            for r in table.zenkina_rows() {
                rows.push(zenkina_row(table, r, opts));
            }
            if table != TableId::Zenkina5x2 {
                let codes: Vec<TextileCode> =
                    table.zenkina_rows().iter().map(|r| r.code.parse().expect("embedded code parses")).collect();
                let got = invariants_distinct(&codes, opts.unit_bound).map_or(0, |c| c.len() as u64);
                rows.push(count_row("distinct classes".into(), codes.len() as u64, got, String::new()));
            }
        }
    }
    DiffReport { table, rows }
}
