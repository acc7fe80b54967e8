#![allow(dead_code)]

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use textile::graph::{Token, Vertex};
use textile::{extend, trace_cycles, Sign, Symbol, TextileCode};

pub fn code(s: &str) -> TextileCode {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// Unsigned letters for a shape: overs, unders, h points, v points.
#[derive(Clone, Copy)]
enum Letter {
    Over(u32),
    Under(u32),
    H(u32),
    V(u32),
}

fn letters(n: u32, l: u32, m: u32) -> Vec<Letter> {
    (1..=n)
        .map(Letter::Over)
        .chain((1..=n).map(Letter::Under))
        .chain((1..=l).map(Letter::H))
        .chain((1..=m).map(Letter::V))
        .collect()
}

fn signed(letter: Letter, n: u32, l: u32, mask: u64) -> Symbol {
    let bit = |k: u32| if mask >> k & 1 == 1 { Sign::Minus } else { Sign::Plus };
    match letter {
        Letter::Over(i) => Symbol::Over(i),
        Letter::Under(i) => Symbol::Under(i, bit(i - 1)),
        Letter::H(j) => Symbol::H(j, bit(n + j - 1)),
        Letter::V(k) => Symbol::V(k, bit(n + l + k - 1)),
    }
}

/// Reads a successor permutation as a set of cyclic words; None if some word
/// has no boundary letter.
fn words_of(succ: &[usize], letters: &[Letter], n: u32, l: u32, mask: u64) -> Option<TextileCode> {
    let mut seen = vec![false; succ.len()];
    let mut words = Vec::new();
    for start in 0..succ.len() {
        if seen[start] {
            continue;
        }
        let mut word = Vec::new();
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            word.push(signed(letters[k], n, l, mask));
            k = succ[k];
        }
        if !word.iter().any(Symbol::is_boundary) {
            return None;
        }
        words.push(word);
    }
    Some(TextileCode::new(words).expect("generated codes are valid"))
}

/// Every abstract code of the shape, any number of words: one code per
/// permutation of the letters and sign assignment.
pub fn all_codes(n: u32, l: u32, m: u32) -> Vec<TextileCode> {
    let ls = &letters(n, l, m);
    let size = ls.len();
    let signs = 1u64 << (n + l + m);
    (0..size)
        .permutations(size)
        .flat_map(|succ| (0..signs).filter_map(move |mask| words_of(&succ, ls, n, l, mask)))
        .collect()
}

pub fn shapes(complexity: u32) -> Vec<(u32, u32, u32)> {
    (0..=complexity)
        .flat_map(|n| (1..=complexity).map(move |l| (n, l, complexity.saturating_sub(n + l))))
        .filter(|&(n, l, m)| m >= 1 && n + l + m == complexity)
        .collect()
}

pub fn random_code(rng: &mut impl Rng, complexity: u32) -> TextileCode {
    let shapes = shapes(complexity);
    loop {
        let (n, l, m) = *shapes.choose(rng).expect("some shape");
        let ls = letters(n, l, m);
        let mut order: Vec<usize> = (0..ls.len()).collect();
        order.shuffle(rng);
        let mut succ = vec![0; ls.len()];
        for (a, b) in order.iter().zip(order.iter().skip(1)) {
            succ[*a] = *b;
        }
        succ[order[order.len() - 1]] = order[0];
        // split the single cycle into words at random cut points
        let cuts: Vec<usize> = (1..order.len()).filter(|_| rng.gen_bool(0.25)).collect();
        let mut from = 0;
        for &c in cuts.iter().chain(std::iter::once(&order.len())) {
            succ[order[c - 1]] = order[from];
            from = c;
        }
        let mask = rng.gen::<u64>() & ((1 << (n + l + m)) - 1);
        if let Some(c) = words_of(&succ, &ls, n, l, mask) {
            return c;
        }
    }
}

/// Random single-word code with at least one crossing.
pub fn random_knot(rng: &mut impl Rng, complexity: u32) -> TextileCode {
    loop {
        let c = random_code(rng, complexity);
        if c.words().len() == 1 && c.crossings() > 0 {
            return c;
        }
    }
}

pub fn random_permutation(rng: &mut impl Rng, n: u32) -> Vec<u32> {
    let mut p: Vec<u32> = (1..=n).collect();
    p.shuffle(rng);
    p
}

fn vertex_name(t: Token) -> String {
    match t.vertex() {
        Vertex::Crossing(i) => i.to_string(),
        Vertex::HPoint(j) => format!("h{j}"),
        Vertex::VPoint(k) => format!("v{k}"),
        Vertex::Corner => "c".into(),
    }
}

/// The printed cycle table, one row per cycle, as vertex pairs.
const WORKED_CYCLES: [&[(&str, &str)]; 7] = [
    &[("h1", "1"), ("1", "v1"), ("v1", "c"), ("c", "h1")],
    &[("1", "v2"), ("v2", "v1"), ("v1", "1")],
    &[("v2", "2"), ("2", "1"), ("1", "h1"), ("h1", "h2"), ("h2", "v1"), ("v1", "v2")],
    &[("2", "h1"), ("h1", "c"), ("c", "v2"), ("v2", "1"), ("1", "2")],
    &[("2", "v2"), ("v2", "c"), ("c", "h2"), ("h2", "2")],
    &[("h1", "2"), ("2", "h2"), ("h2", "h1")],
    &[("v1", "h2"), ("h2", "c"), ("c", "v1")],
];

fn unordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

type CycleSet = Vec<(String, String)>;

/// Cycles as sorted lists of unordered vertex pairs, themselves sorted.
pub fn cycle_sets(c: &TextileCode) -> Vec<CycleSet> {
    let ext = extend(c);
    let mut out: Vec<CycleSet> = trace_cycles(c)
        .cycles
        .iter()
        .map(|cy| {
            let mut pairs: CycleSet = cy
                .edges
                .iter()
                .map(|&e| {
                    let (a, b) = ext.endpoints(e);
                    unordered(&vertex_name(a), &vertex_name(b))
                })
                .collect();
            pairs.sort();
            pairs
        })
        .collect();
    out.sort();
    out
}

pub fn printed_cycle_sets() -> Vec<CycleSet> {
    let mut out: Vec<CycleSet> = WORKED_CYCLES
        .iter()
        .map(|row| {
            let mut pairs: CycleSet = row.iter().map(|&(a, b)| unordered(a, b)).collect();
            pairs.sort();
            pairs
        })
        .collect();
    out.sort();
    out
}

/// k parallel closed curves of slope one; realizable, 2k letters.
pub fn parallel_lines(k: u32) -> TextileCode {
    let words = (1..=k).map(|i| vec![Symbol::H(i, Sign::Plus), Symbol::V(k + 1 - i, Sign::Plus)]).collect();
    TextileCode::new(words).expect("valid code")
}

/// Best per-call time over several batches; batches keep the timer's
/// resolution out of the picture for short codes.
pub fn seconds_per_check(code: &TextileCode) -> f64 {
    let reps = (2_000_000 / code.len()).max(3);
    (0..9)
        .map(|_| {
            let start = std::time::Instant::now();
            for _ in 0..reps {
                assert!(textile::is_realizable(std::hint::black_box(code)));
            }
            start.elapsed().as_secs_f64() / reps as f64
        })
        .fold(f64::MAX, f64::min)
}

/// Time for 10n letters over time for n letters, on parallel lines.
pub fn linearity_ratio(n: u32) -> f64 {
    seconds_per_check(&parallel_lines(5 * n)) / seconds_per_check(&parallel_lines(n / 2))
}
