use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::catalog::CatalogEntry;
use crate::code::{Sign, Symbol, TextileCode};
use crate::realize::is_realizable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    Abstract,
    Realizable,
    Reduced,
}

impl FromStr for Stage {
    type Err = EnumError;
    fn from_str(s: &str) -> Result<Stage, EnumError> {
        match s {
            "abstract" => Ok(Stage::Abstract),
            "realizable" => Ok(Stage::Realizable),
            "reduced" => Ok(Stage::Reduced),
            _ => Err(EnumError::UnknownStage(s.to_string())),
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Abstract => "abstract",
            Stage::Realizable => "realizable",
            Stage::Reduced => "reduced",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("need at least one h and one v point (got l={l}, m={m})")]
    NoBoundary { l: u32, m: u32 },
    #[error("unknown stage `{0}` (expected abstract, realizable or reduced)")]
    UnknownStage(String),
    #[error("{0} signed symbols is too many to enumerate")]
    TooLarge(u32),
}

/// Shape of the single-word codes to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnumSpec {
    pub n: u32,
    pub l: u32,
    pub m: u32,
    pub stage: Stage,
}

impl EnumSpec {
    pub fn new(n: u32, l: u32, m: u32, stage: Stage) -> Result<EnumSpec, EnumError> {
        if l == 0 || m == 0 {
            return Err(EnumError::NoBoundary { l, m });
        }
        if n + l + m > 40 {
            return Err(EnumError::TooLarge(n + l + m));
        }
        Ok(EnumSpec { n, l, m, stage })
    }

    pub fn complexity(&self) -> u32 {
        self.n + self.l + self.m
    }

    fn signed_symbols(&self) -> u32 {
        self.n + self.l + self.m
    }
}

/// Rotation classes: the 2n+l+m symbols are distinct, so (2n+l+m-1)! arrangements
/// times one sign per signed symbol.
pub fn abstract_count(spec: &EnumSpec) -> u128 {
    let k = 2 * spec.n + spec.l + spec.m;
    (1..k as u128).product::<u128>() << spec.signed_symbols()
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    Over(u32),
    Under(u32),
    H(u32),
    V(u32),
}

/// Every arrangement with h1 in front.
fn arrangements(spec: &EnumSpec) -> impl Iterator<Item = Vec<Slot>> {
    let rest: Vec<Slot> = (1..=spec.n)
        .map(Slot::Over)
        .chain((1..=spec.n).map(Slot::Under))
        .chain((2..=spec.l).map(Slot::H))
        .chain((1..=spec.m).map(Slot::V))
        .collect();
    let k = rest.len();
    rest.into_iter().permutations(k).map(|p| std::iter::once(Slot::H(1)).chain(p).collect())
}

fn build(spec: &EnumSpec, arr: &[Slot], mask: u64) -> TextileCode {
    let sign = |bit: u32| {
        if mask >> bit & 1 == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    };
    let word = arr
        .iter()
        .map(|&s| match s {
            Slot::Over(i) => Symbol::Over(i),
            Slot::Under(i) => Symbol::Under(i, sign(i - 1)),
            Slot::H(j) => Symbol::H(j, sign(spec.n + j - 1)),
            Slot::V(k) => Symbol::V(k, sign(spec.n + spec.l + k - 1)),
        })
        .collect();
    TextileCode::new(vec![word]).expect("generated codes satisfy the occurrence rules")
}

fn codes_of<'a>(spec: &'a EnumSpec, arr: &'a [Slot]) -> impl Iterator<Item = TextileCode> + 'a {
    (0..1u64 << spec.signed_symbols()).map(move |mask| build(spec, arr, mask))
}

/// One representative per rotation class, arrangement by arrangement.
pub fn enumerate_abstract(spec: EnumSpec) -> impl Iterator<Item = TextileCode> {
    arrangements(&spec).flat_map(move |arr| codes_of(&spec, &arr).collect::<Vec<_>>())
}

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool")
}

/// Applies `f` to the codes of each arrangement in parallel; results keep enumeration order.
fn per_arrangement<T: Send>(spec: &EnumSpec, workers: usize, f: impl Fn(TextileCode) -> Option<T> + Sync) -> Vec<T> {
    let arrs: Vec<Vec<Slot>> = arrangements(spec).collect();
    pool(workers).install(|| {
        arrs.par_iter()
            .map(|arr| codes_of(spec, arr).filter_map(&f).collect::<Vec<T>>())
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    })
}

pub fn count_abstract(spec: &EnumSpec, workers: usize) -> u64 {
    per_arrangement(spec, workers, |_| Some(())).len() as u64
}

pub fn count_realizable(spec: &EnumSpec, workers: usize) -> u64 {
    per_arrangement(spec, workers, |c| is_realizable(&c).then_some(())).len() as u64
}

pub fn realizable_codes(spec: &EnumSpec, workers: usize) -> Vec<TextileCode> {
    per_arrangement(spec, workers, |c| is_realizable(&c).then_some(c))
}

/// Over and under occurrence of one crossing next to each other once h/v
/// symbols are skipped.
pub fn has_r1_pattern(code: &TextileCode) -> bool {
    code.words().iter().any(|w| {
        let cs: Vec<Symbol> = w.symbols().iter().copied().filter(|s| !s.is_boundary()).collect();
        let k = cs.len();
        k >= 2 && (0..k).any(|a| cs[a].crossing() == cs[(a + 1) % k].crossing())
    })
}

fn adjacent_pairs(code: &TextileCode) -> impl Iterator<Item = (Symbol, Symbol)> + '_ {
    code.words().iter().flat_map(|w| {
        let s = w.symbols();
        let k = s.len();
        (0..if k > 1 { k } else { 0 }).map(move |a| (s[a], s[(a + 1) % k]))
    })
}

/// Two crossings adjacent as overs somewhere and adjacent as unders of
/// opposite sign elsewhere, in either order.
pub fn has_r2_pattern(code: &TextileCode) -> bool {
    let key = |i: u32, j: u32| (i.min(j), i.max(j));
    let mut overs = HashSet::new();
    let mut unders = HashSet::new();
    for pair in adjacent_pairs(code) {
        match pair {
            (Symbol::Over(i), Symbol::Over(j)) if i != j => {
                overs.insert(key(i, j));
            }
            (Symbol::Under(i, a), Symbol::Under(j, b)) if i != j && a != b => {
                unders.insert(key(i, j));
            }
            _ => {}
        }
    }
    overs.intersection(&unders).next().is_some()
}

/// A stretch free of h/v symbols that contains both occurrences of every
/// crossing it touches: a classical knot tied into one strand.
pub fn has_local_knot(code: &TextileCode) -> bool {
    code.words().iter().any(|w| {
        let s = w.symbols();
        let k = s.len();
        (0..k).any(|start| {
            let mut seen: HashMap<u32, u8> = HashMap::new();
            let mut open = 0i32;
            for len in 1..k {
                let Some(i) = s[(start + len - 1) % k].crossing() else {
                    return false;
                };
                let c = seen.entry(i).or_default();
                *c += 1;
                open += if *c == 1 { 1 } else { -1 };
                if open == 0 {
                    return true;
                }
            }
            false
        })
    })
}

/// Realizable, no reducing pattern, no local knot; canonical and deduplicated.
pub fn reduced_codes(spec: &EnumSpec, workers: usize) -> Vec<TextileCode> {
    let keep = |c: TextileCode| {
        (is_realizable(&c) && !has_r1_pattern(&c) && !has_r2_pattern(&c) && !has_local_knot(&c))
            .then(|| c.canonicalize())
    };
    let unique: BTreeSet<String> = per_arrangement(spec, workers, keep).iter().map(ToString::to_string).collect();
    unique.iter().map(|s| s.parse().expect("canonical text parses")).collect()
}

pub fn reduce_catalog(spec: &EnumSpec, workers: usize) -> Vec<CatalogEntry> {
    let codes = reduced_codes(spec, workers);
    let mut entries: Vec<CatalogEntry> =
        pool(workers).install(|| codes.into_par_iter().map(|c| CatalogEntry::describe(c, true)).collect());
    sort_entries(&mut entries);
    entries
}

fn sort_entries(entries: &mut [CatalogEntry]) {
    entries.sort_by_cached_key(|e| (e.complexity, e.code.to_string()));
}

/// Entries for the requested stage. Abstract and realizable stages keep the
/// enumerated representative (h1 first, labels as generated).
pub fn catalog(spec: &EnumSpec, workers: usize) -> Vec<CatalogEntry> {
    let mut entries = match spec.stage {
        Stage::Reduced => return reduce_catalog(spec, workers),
        Stage::Abstract => per_arrangement(spec, workers, |c| Some(CatalogEntry::describe(c, false))),
        Stage::Realizable => {
            per_arrangement(spec, workers, |c| is_realizable(&c).then(|| CatalogEntry::describe(c, false)))
        }
    };
    sort_entries(&mut entries);
    entries
}

pub fn count(spec: &EnumSpec, workers: usize) -> u64 {
    match spec.stage {
        Stage::Abstract => count_abstract(spec, workers),
        Stage::Realizable => count_realizable(spec, workers),
        Stage::Reduced => reduced_codes(spec, workers).len() as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> TextileCode {
        s.parse().unwrap()
    }

    fn spec(n: u32, l: u32, m: u32) -> EnumSpec {
        EnumSpec::new(n, l, m, Stage::Abstract).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_abstract(spec(1, 1, 1)).count(), 48);
        assert_eq!(abstract_count(&spec(3, 1, 1)), 161280);
        assert_eq!(count_abstract(&spec(2, 1, 1), 2), 1920);
        assert_eq!(enumerate_abstract(spec(0, 1, 1)).map(|c| c.to_string()).collect::<Vec<_>>().len(), 4);
        assert!(EnumSpec::new(1, 0, 1, Stage::Abstract).is_err());
        assert_eq!("reduced".parse::<Stage>().unwrap(), Stage::Reduced);
        assert!("bogus".parse::<Stage>().is_err());
    }

    #[test]
    fn r1_examples() {
        assert!(has_r1_pattern(&code("h1+ 1 1- v1+")));
        assert!(has_r1_pattern(&code("1 h1+ v1+ 1-")));
        assert!(!has_r1_pattern(&code("h1+ 1+ 2 v1+ 1 2+")));
        assert!(has_r1_pattern(&code("h1+ 1 v1+ 1-")));
    }

    #[test]
    fn r2_examples() {
        assert!(has_r2_pattern(&code("h1+ 1 2 v1+ 1+ 2-")));
        assert!(has_r2_pattern(&code("h1+ 2 1 v1+ 1- 2+")));
        assert!(!has_r2_pattern(&code("h1+ 1+ 2 v1+ 1 2+")));
        assert!(!has_r2_pattern(&code("h1+ 1 2 v1+ 1+ 2+")));
        assert!(has_r2_pattern(&code("h1+ 1 2 ; v1+ 2+ 1-")));
    }

    #[test]
    fn local_knots() {
        assert!(has_local_knot(&code("h1+ 1+ 2 3+ 1 2+ 3 v1+")));
        assert!(!has_local_knot(&code("h1+ 1 2+ 3 1- v1+ 3+ 2")));
        assert!(!has_local_knot(&code("h1+ v1+")));
    }
}
