use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};

use serde_json::json;
use textile::catalog::{catalog_to_writer, CatalogEntry};
use textile::enumerate::{catalog, count, EnumSpec, Stage};
use textile::graph::build_graph;
use textile::realize::trace_cycles;
use textile::ring::{equals_mod_units, Poly};
use textile::tables::{run_table, DiffReport, RowStatus, TableId, TableOptions};
use textile::zenkina::zenkina_polynomial;
use textile::TextileCode;

#[derive(Parser)]
#[command(name = "textile", version, about = "Textile codes for links in the thickened torus")]
struct Cli {
    /// Output format; `check` defaults to json, everything else to text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for enumeration; 0 uses every core.
    #[arg(long, global = true, env = "TEXTILE_WORKERS", default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Decide realizability by tracing turn-left cycles.
    Check {
        code: String,
        /// Include the adjacency list of the textile graph.
        #[arg(long)]
        dump_graph: bool,
    },
    /// Enumerate single-word codes with n crossings, l h-points and m v-points.
    Enumerate {
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'l')]
        l: u32,
        #[arg(short = 'm')]
        m: u32,
        #[arg(long, default_value = "abstract", value_parser = parse_stage)]
        stage: Stage,
        /// Print only the number of codes.
        #[arg(long)]
        count: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Zenkina polynomial of a single-component code.
    Invariant {
        code: String,
        /// Print the determinant as computed.
        #[arg(long, conflicts_with = "reduced")]
        raw: bool,
        /// Divide out the common monomial and fix the sign (default).
        #[arg(long)]
        reduced: bool,
        /// Largest unit exponent tried by --match.
        #[arg(long, default_value_t = 4)]
        unit_bound: i64,
        /// Compare against this polynomial up to units.
        #[arg(long = "match", value_name = "POLY")]
        match_poly: Option<String>,
    },
    /// Homology class of each component.
    Homology { code: String },
    /// Knot symbol n^k_(x,y).
    Symbol { code: String },
    /// Recompute an embedded table and diff it.
    Tables {
        #[arg(value_parser = parse_table)]
        table: TableId,
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        allow_known_errata: bool,
        #[arg(long, default_value_t = 4)]
        unit_bound: i64,
    },
}

fn parse_stage(s: &str) -> Result<Stage, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_table(s: &str) -> Result<TableId, String> {
    s.parse()
}

/// Exit status plus what to print.
struct Outcome {
    status: u8,
    out: String,
}

impl Outcome {
    fn ok(out: String) -> Outcome {
        Outcome { status: 0, out }
    }
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for r in rows {
        w.write_record(&r).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 fields")
}

fn json_line(v: &serde_json::Value) -> String {
    serde_json::to_string(v).expect("json values serialize") + "\n"
}

fn parse(code: &str) -> Result<TextileCode, String> {
    code.parse().map_err(|e| format!("{e}"))
}

fn check(code: &str, dump_graph: bool, format: Format) -> Result<Outcome, String> {
    let code = parse(code)?;
    let report = trace_cycles(&code);
    let graph = build_graph(&code);
    let ext = &graph.ext;
    let cycles: Vec<Vec<String>> =
        report.cycles.iter().map(|c| c.edges.iter().map(|&e| ext.render_edge(e)).collect()).collect();
    let failure = report.failure.map(|f| (f.reason.to_string(), ext.render_edge(f.witness)));
    let dump: Vec<String> = if dump_graph { graph.dump().lines().map(String::from).collect() } else { Vec::new() };
    let out = match format {
        Format::Json => {
            let mut v = json!({
                "realizable": report.realizable,
                "vertices": report.vertex_count,
                "adjacencies": report.adjacency_count,
                "cycles": cycles.iter().map(|c| json!({"len": c.len(), "edges": c})).collect::<Vec<_>>(),
                "failure": failure.as_ref().map(|(reason, edge)| json!({"reason": reason, "edge": edge})),
            });
            if dump_graph {
                v["graph"] = json!(dump);
            }
            json_line(&v)
        }
        Format::Csv => {
            let failure = failure.map(|(r, e)| format!("{r} at {e}")).unwrap_or_default();
            let row = vec![
                report.realizable.to_string(),
                report.vertex_count.to_string(),
                report.adjacency_count.to_string(),
                cycles.len().to_string(),
                failure,
            ];
            csv_text(&["realizable", "vertices", "adjacencies", "cycles", "failure"], [row])
        }
        Format::Text => {
            let mut s = format!(
                "{}\nvertices {}, adjacencies {}, cycles {}\n",
                if report.realizable { "realizable" } else { "unrealizable" },
                report.vertex_count,
                report.adjacency_count,
                cycles.len()
            );
            for (k, c) in cycles.iter().enumerate() {
                s += &format!("{}: {}\n", k + 1, c.join(" "));
            }
            if let Some((reason, edge)) = failure {
                s += &format!("failure: {reason} at {edge}\n");
            }
            for line in dump {
                s += &line;
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome { status: if report.realizable { 0 } else { 1 }, out })
}

fn catalog_csv(entries: &[CatalogEntry]) -> String {
    let header = ["code", "complexity", "realizable", "r1", "r2", "n", "k", "x", "y", "zenkina"];
    csv_text(
        &header,
        entries.iter().map(|e| {
            let h = e.symbol.total();
            vec![
                e.code.to_string(),
                e.complexity.to_string(),
                e.realizable.to_string(),
                e.r1.to_string(),
                e.r2.to_string(),
                e.symbol.crossings.to_string(),
                e.symbol.components.to_string(),
                h.x.to_string(),
                h.y.to_string(),
                e.zenkina.as_ref().map(ToString::to_string).unwrap_or_default(),
            ]
        }),
    )
}

fn enumerate(spec: EnumSpec, only_count: bool, workers: usize, format: Format) -> Result<Outcome, String> {
    if only_count {
        let k = count(&spec, workers);
        return Ok(Outcome::ok(match format {
            Format::Json => {
                json_line(&json!({"n": spec.n, "l": spec.l, "m": spec.m, "stage": spec.stage.to_string(), "count": k}))
            }
            Format::Csv => csv_text(
                &["n", "l", "m", "stage", "count"],
                [vec![
                    spec.n.to_string(),
                    spec.l.to_string(),
                    spec.m.to_string(),
                    spec.stage.to_string(),
                    k.to_string(),
                ]],
            ),
            Format::Text => format!("{k}\n"),
        }));
    }
    let entries = catalog(&spec, workers);
    let out = match format {
        Format::Json => {
            let mut buf = Vec::new();
            catalog_to_writer(&entries, &mut buf).map_err(|e| e.to_string())?;
            String::from_utf8(buf).expect("json is utf-8")
        }
        Format::Csv => catalog_csv(&entries),
        Format::Text => entries.iter().map(|e| format!("{}\n", e.code)).collect(),
    };
    Ok(Outcome::ok(out))
}

fn invariant(code: &str, raw: bool, bound: i64, target: Option<&str>, format: Format) -> Result<Outcome, String> {
    let code = parse(code)?;
    let det = zenkina_polynomial(&code).map_err(|e| e.to_string())?;
    let f = if raw { det } else { det.reduced() };
    if let Some(target) = target {
        let g: Poly = target.parse().map_err(|e| format!("{e}"))?;
        let unit = equals_mod_units(&f, &g, bound).map_err(|e| e.to_string())?;
        let witness = unit.map_or_else(|| "DISTINCT".to_string(), |u| u.to_string());
        let out = match format {
            Format::Json => json_line(
                &json!({"polynomial": f.to_string(), "target": g.to_string(), "equivalent": unit.is_some(), "unit": unit.map(|u| u.to_string())}),
            ),
            Format::Csv => csv_text(&["polynomial", "target", "unit"], [vec![f.to_string(), g.to_string(), witness]]),
            Format::Text => format!("{witness}\n"),
        };
        return Ok(Outcome { status: if unit.is_some() { 0 } else { 1 }, out });
    }
    Ok(Outcome::ok(match format {
        Format::Json => json_line(&json!({"code": code.to_string(), "polynomial": f.to_string()})),
        Format::Csv => csv_text(&["code", "polynomial"], [vec![code.to_string(), f.to_string()]]),
        Format::Text => format!("{f}\n"),
    }))
}

fn homology(code: &str, format: Format) -> Result<Outcome, String> {
    let code = parse(code)?;
    let sym = code.knot_symbol();
    Ok(Outcome::ok(match format {
        Format::Json => {
            let words: Vec<_> = sym.homology.iter().map(|h| json!({"x": h.x, "y": h.y})).collect();
            let t = sym.total();
            json_line(&json!({"words": words, "total": {"x": t.x, "y": t.y}}))
        }
        Format::Csv => csv_text(
            &["word", "x", "y"],
            sym.homology.iter().enumerate().map(|(k, h)| vec![(k + 1).to_string(), h.x.to_string(), h.y.to_string()]),
        ),
        Format::Text => sym.homology.iter().map(|h| format!("{h}\n")).collect(),
    }))
}

fn symbol(code: &str, format: Format) -> Result<Outcome, String> {
    let code = parse(code)?;
    let sym = code.knot_symbol();
    let t = sym.total();
    Ok(Outcome::ok(match format {
        Format::Json => {
            json_line(&json!({"symbol": sym.to_string(), "n": sym.crossings, "k": sym.components, "x": t.x, "y": t.y}))
        }
        Format::Csv => csv_text(
            &["symbol", "n", "k", "x", "y"],
            [vec![
                sym.to_string(),
                sym.crossings.to_string(),
                sym.components.to_string(),
                t.x.to_string(),
                t.y.to_string(),
            ]],
        ),
        Format::Text => format!("{sym}\n"),
    }))
}

fn status_text(s: &RowStatus) -> String {
    match s {
        RowStatus::Match => "match".into(),
        RowStatus::Mismatch => "mismatch".into(),
        RowStatus::Errata(id) => format!("errata({id})"),
    }
}

fn tables(report: &DiffReport, format: Format) -> Outcome {
    let out = match format {
        Format::Json => {
            let rows: Vec<_> = report
                .rows
                .iter()
                .map(|r| json!({"label": r.label, "expected": r.expected, "got": r.got, "status": status_text(&r.status), "note": r.note}))
                .collect();
            json_line(
                &json!({"table": report.table.to_string(), "passed": report.passed(), "mismatches": report.mismatches(), "rows": rows}),
            )
        }
        Format::Csv => csv_text(
            &["label", "expected", "got", "status", "note"],
            report.rows.iter().map(|r| {
                vec![r.label.clone(), r.expected.clone(), r.got.clone(), status_text(&r.status), r.note.clone()]
            }),
        ),
        Format::Text => {
            let mut s = String::new();
            for r in &report.rows {
                s += &format!(
                    "{:<24} {}\n    expected {}\n    got      {}\n",
                    status_text(&r.status),
                    r.label,
                    r.expected,
                    r.got
                );
                if !r.note.is_empty() {
                    s += &format!("    note     {}\n", r.note);
                }
            }
            s += &format!("{}: {} rows, {} mismatches\n", report.table, report.rows.len(), report.mismatches());
            s
        }
    };
    Outcome { status: report.exit_code() as u8, out }
}

fn run(cli: Cli) -> Result<Outcome, String> {
    let text = cli.format.unwrap_or(Format::Text);
    match cli.command {
        Command::Check { code, dump_graph } => check(&code, dump_graph, cli.format.unwrap_or(Format::Json)),
        Command::Enumerate { n, l, m, stage, count, out } => {
            let spec = EnumSpec::new(n, l, m, stage).map_err(|e| e.to_string())?;
            let result = enumerate(spec, count, cli.workers, text)?;
            match out {
                Some(path) => {
                    let mut f = File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                    f.write_all(result.out.as_bytes()).map_err(|e| format!("{}: {e}", path.display()))?;
                    Ok(Outcome::ok(String::new()))
                }
                None => Ok(result),
            }
        }
        Command::Invariant { code, raw, reduced: _, unit_bound, match_poly } => {
            invariant(&code, raw, unit_bound, match_poly.as_deref(), text)
        }
        Command::Homology { code } => homology(&code, text),
        Command::Symbol { code } => symbol(&code, text),
        Command::Tables { table, allow_known_errata, unit_bound } => {
            let opts = TableOptions { workers: cli.workers, unit_bound, allow_errata: allow_known_errata };
            Ok(tables(&run_table(table, &opts), text))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(o) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(o.out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(o.status)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
