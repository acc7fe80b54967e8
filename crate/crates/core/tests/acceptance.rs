mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::{
    all_codes, code, cycle_sets, linearity_ratio, printed_cycle_sets, random_code, random_knot, random_permutation,
    shapes,
};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use textile::enumerate::{count_abstract, count_realizable, enumerate_abstract, reduced_codes, EnumSpec, Stage};
use textile::ring::{normal_form, normal_form_with, Monomial, RuleOrder};
use textile::tables::{run_table, RowStatus, TableId, TableOptions};
use textile::{
    build_graph, equals_mod_units, faces_via_rotation_system, is_realizable, trace_cycles, zenkina_polynomial, Poly,
    TextileCode,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SHAPES: [(u32, u32, u32); 5] = [(1, 1, 1), (2, 1, 1), (1, 3, 1), (2, 2, 1), (3, 1, 1)];
const ABSTRACT: [u64; 5] = [48, 1920, 3840, 23040, 161280];
const REALIZABLE: [u64; 5] = [8, 672, 368, 2816, 24960];
const REDUCED: [((u32, u32, u32), usize); 4] = [((1, 1, 1), 0), ((2, 1, 1), 8), ((2, 2, 1), 48), ((3, 1, 1), 32)];

fn spec(n: u32, l: u32, m: u32, stage: Stage) -> EnumSpec {
    EnumSpec::new(n, l, m, stage).unwrap()
}

fn counts(expected: [u64; 5], count: impl Fn(&EnumSpec) -> u64, stage: Stage) -> Outcome {
    let got: Vec<u64> = SHAPES.iter().map(|&(n, l, m)| count(&spec(n, l, m, stage))).collect();
    let rows: Vec<String> = SHAPES
        .iter()
        .zip(expected)
        .zip(&got)
        .map(|(((n, l, m), want), got)| format!("({n},{l},{m}) {got}/{want}"))
        .collect();
    let text = rows.join(", ");
    if got == expected {
        Ok(text)
    } else {
        Err(text)
    }
}

fn abstract_counts() -> Outcome {
    counts(ABSTRACT, |s| count_abstract(s, 0), Stage::Abstract)
}

fn realizable_counts() -> Outcome {
    counts(REALIZABLE, |s| count_realizable(s, 0), Stage::Realizable)
}

fn reduced_counts() -> Outcome {
    let mut rows = Vec::new();
    let mut diffs = Vec::new();
    for ((n, l, m), want) in REDUCED {
        let survivors = reduced_codes(&spec(n, l, m, Stage::Reduced), 0);
        rows.push(format!("({n},{l},{m}) {}/{want}", survivors.len()));
        if survivors.len() != want {
            let list: Vec<String> = survivors.iter().map(ToString::to_string).collect();
            diffs.push(format!("({n},{l},{m}) survivors: {}", list.join(" | ")));
        }
    }
    if diffs.is_empty() {
        Ok(rows.join(", "))
    } else {
        Err(format!("{}; {}", rows.join(", "), diffs.join("; ")))
    }
}

fn worked_cycles() -> Outcome {
    let c = code("h1+ 1 v2- 2+ ; h2+ v1+ 1- 2");
    let r = trace_cycles(&c);
    if r.cycles.len() == 7 && cycle_sets(&c) == printed_cycle_sets() && r.realizable {
        Ok("7 cycles, edge sets match the printed table".into())
    } else {
        Err(format!("{} cycles, table match {}", r.cycles.len(), cycle_sets(&c) == printed_cycle_sets()))
    }
}

fn worked_invariant() -> Outcome {
    let det = zenkina_polynomial(&code("h1+ 1 2+ 3 1- v1+ 3+ 2")).map_err(|e| e.to_string())?;
    let target: Poly = "(q^2-p^2)*x*y - p*q*y - q*x + (1-q^2)".parse().unwrap();
    match equals_mod_units(&det, &target, 4).map_err(|e| e.to_string())? {
        Some(u) if ["t", "-t"].contains(&u.to_string().as_str()) => Ok(format!("equal up to the unit {u}")),
        Some(u) => Err(format!("equal up to {u}, expected a unit of the form t or -t")),
        None => Err(format!("{det} is not a unit multiple of {target}")),
    }
}

fn invariant_tables() -> Outcome {
    let opts = TableOptions::default();
    let mut summary = Vec::new();
    let mut failed = Vec::new();
    for t in [TableId::Zenkina4, TableId::Zenkina5x2, TableId::Zenkina5x3] {
        let report = run_table(t, &opts);
        let flagged = report.rows.iter().filter(|r| matches!(r.status, RowStatus::Errata(_))).count();
        summary.push(format!("{t}: {} mismatched, {flagged} flagged errata", report.mismatches()));
        failed
            .extend(report.rows.iter().filter(|r| r.status == RowStatus::Mismatch).map(|r| format!("{t} {}", r.label)));
    }
    let text = summary.join(", ");
    if failed.is_empty() {
        Ok(text)
    } else {
        Err(format!("{text}; mismatched rows: {}", failed.join(" | ")))
    }
}

fn same_partition(c: &TextileCode) -> bool {
    let (a, b) = (trace_cycles(c), faces_via_rotation_system(c));
    a.partition() == b.partition() && a.realizable == b.realizable
}

fn oracle_equivalence() -> Outcome {
    let small: Vec<TextileCode> = (2..=4).flat_map(shapes).flat_map(|(n, l, m)| all_codes(n, l, m)).collect();
    let bad_small = small.iter().filter(|c| !same_partition(c)).count();
    let mut rng = StdRng::seed_from_u64(5);
    let bad_random = (0..10_000).filter(|_| !same_partition(&random_code(&mut rng, 5))).count();
    let text = format!(
        "{} exhaustive codes, {bad_small} mismatches; 10000 random complexity-5 codes, {bad_random} mismatches",
        small.len()
    );
    if bad_small + bad_random == 0 {
        Ok(text)
    } else {
        Err(text)
    }
}

fn check(ok: bool, what: &str, failures: &mut Vec<String>) {
    if !ok {
        failures.push(what.to_string());
    }
}

fn random_poly(rng: &mut StdRng) -> Poly {
    let terms: Vec<_> = (0..rng.gen_range(0..6))
        .map(|_| {
            let m = Monomial {
                x: rng.gen_range(-2..=2),
                y: rng.gen_range(-2..=2),
                q: rng.gen_range(0..4),
                p: rng.gen_range(0..4),
                t: rng.gen_range(0..4),
            };
            (m, BigInt::from(rng.gen_range(-3..=3)))
        })
        .collect();
    normal_form(terms)
}

fn property_suites() -> Outcome {
    let mut failures = Vec::new();
    let mut graphs = 0;
    for (n, l, m) in [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2), (1, 3, 1)] {
        for c in enumerate_abstract(spec(n, l, m, Stage::Abstract)) {
            let g = build_graph(&c);
            let regular = g.vertices.iter().all(|&v| g.degree(v) == 4);
            check(regular && g.adjacencies.len() == 2 * g.vertices.len(), &format!("graph of {c}"), &mut failures);
            graphs += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(8);
    let cases = 1000;
    for _ in 0..cases {
        let size = rng.gen_range(2..=5);
        let c = random_code(&mut rng, size);
        let w = rng.gen_range(0..c.words().len());
        let r = c.rotate_word(w, rng.gen_range(0..c.words()[w].len())).unwrap();
        let perm = random_permutation(&mut rng, c.crossings());
        let relabelled = c.relabel_crossings(&perm).unwrap();
        let verdict = is_realizable(&c);
        check(
            is_realizable(&r) == verdict && is_realizable(&relabelled) == verdict,
            &format!("verdict {c}"),
            &mut failures,
        );
        let back: TextileCode = c.to_string().parse().unwrap();
        check(back == c && back.to_string() == c.to_string(), &format!("round trip {c}"), &mut failures);

        let size = rng.gen_range(3..=5);
        let k = random_knot(&mut rng, size);
        let f = zenkina_polynomial(&k).unwrap();
        let rotated = k.rotate_word(0, rng.gen_range(0..k.words()[0].len())).unwrap();
        let relabelled = k.relabel_crossings(&random_permutation(&mut rng, k.crossings())).unwrap();
        check(zenkina_polynomial(&rotated).unwrap() == f, &format!("invariant rotation {k}"), &mut failures);
        check(zenkina_polynomial(&relabelled).unwrap() == f, &format!("invariant relabel {k}"), &mut failures);

        let (a, b, d) = (random_poly(&mut rng), random_poly(&mut rng), random_poly(&mut rng));
        check(&a * &b == &b * &a && &a + &b == &b + &a, "commutativity", &mut failures);
        check(&(&a * &b) * &d == &a * &(&b * &d), "associativity", &mut failures);
        check(&a * &(&b + &d) == &(&a * &b) + &(&a * &d), "distributivity", &mut failures);
        check((&a + &-a.clone()).is_zero() && &a * &Poly::one() == a, "identities", &mut failures);
        let back: Poly = a.to_string().parse().unwrap();
        check(back == a, &format!("polynomial round trip {a}"), &mut failures);

        let mut raw: Vec<(Monomial, BigInt)> = (&a * &b).terms().map(|(m, c)| (*m, c.clone())).collect();
        raw.push((Monomial { x: 0, y: 0, q: 3, p: 2, t: 1 }, BigInt::from(rng.gen_range(-3..=3))));
        let qf = normal_form_with(raw.clone(), RuleOrder::QFirst);
        check(qf == normal_form_with(raw, RuleOrder::PFirst), "rule-order confluence", &mut failures);
        check(qf.terms().all(|(m, _)| m.is_normal()), "normal monomials", &mut failures);
    }
    let text = format!("{graphs} enumerated graphs, {cases} sampled cases per property");
    if failures.is_empty() {
        Ok(text)
    } else {
        Err(format!("{text}; {} failures, first: {}", failures.len(), failures[0]))
    }
}

fn linearity() -> Outcome {
    let ratio = linearity_ratio(100);
    let beyond_l1 = linearity_ratio(1_000);
    let text = format!("N=100 to 1000: {ratio:.1}x (N=1000 to 10000: {beyond_l1:.1}x)");
    if ratio <= 12.0 {
        Ok(text)
    } else {
        Err(text)
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("abstract counts", abstract_counts),
        ("realizable counts", realizable_counts),
        ("reduced counts", reduced_counts),
        ("worked cycles", worked_cycles),
        ("worked invariant", worked_invariant),
        ("invariant tables", invariant_tables),
        ("oracle equivalence", oracle_equivalence),
        ("property suites", property_suites),
        ("linearity", linearity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
