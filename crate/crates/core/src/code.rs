use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Mul, Neg};
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// One letter of a textile code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Over(u32),
    Under(u32, Sign),
    H(u32, Sign),
    V(u32, Sign),
}

impl Symbol {
    fn sort_key(&self) -> (u8, u32, Sign) {
        match *self {
            Symbol::H(j, s) => (0, j, s),
            Symbol::V(k, s) => (1, k, s),
            Symbol::Under(i, s) => (2, i, s),
            Symbol::Over(i) => (3, i, Sign::Plus),
        }
    }

    pub fn crossing(&self) -> Option<u32> {
        match *self {
            Symbol::Over(i) | Symbol::Under(i, _) => Some(i),
            _ => None,
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, Symbol::H(..) | Symbol::V(..))
    }

    fn with_crossing(self, i: u32) -> Symbol {
        match self {
            Symbol::Over(_) => Symbol::Over(i),
            Symbol::Under(_, s) => Symbol::Under(i, s),
            other => other,
        }
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Over(i) => write!(f, "{i}"),
            Symbol::Under(i, s) => write!(f, "{i}{s}"),
            Symbol::H(j, s) => write!(f, "h{j}{s}"),
            Symbol::V(k, s) => write!(f, "v{k}{s}"),
        }
    }
}

impl FromStr for Symbol {
    type Err = &'static str;

    fn from_str(tok: &str) -> Result<Symbol, Self::Err> {
        let (kind, rest) = match tok.as_bytes().first() {
            Some(b'h') => (Some('h'), &tok[1..]),
            Some(b'v') => (Some('v'), &tok[1..]),
            _ => (None, tok),
        };
        let (digits, sign) = match rest.as_bytes().last() {
            Some(b'+') => (&rest[..rest.len() - 1], Some(Sign::Plus)),
            Some(b'-') => (&rest[..rest.len() - 1], Some(Sign::Minus)),
            _ => (rest, None),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err("expected a positive integer index");
        }
        if digits.starts_with('0') {
            return Err("index must not start with 0");
        }
        let index: u32 = digits.parse().map_err(|_| "index out of range")?;
        match (kind, sign) {
            (None, None) => Ok(Symbol::Over(index)),
            (None, Some(s)) => Ok(Symbol::Under(index, s)),
            (Some('h'), Some(s)) => Ok(Symbol::H(index, s)),
            (Some(_), Some(s)) => Ok(Symbol::V(index, s)),
            (Some(_), None) => Err("h/v symbol needs a sign"),
        }
    }
}

/// A cyclic word. Equality and hashing ignore the starting point.
#[derive(Clone, Debug)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Word {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rotated(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Word(v)
    }

    /// Rotation that starts at the least symbol.
    pub fn canonical_rotation(&self) -> Word {
        let start = self.0.iter().enumerate().min_by_key(|(_, s)| **s).map_or(0, |(i, _)| i);
        self.rotated(start)
    }

    fn least_rotation(&self) -> Vec<Symbol> {
        let n = self.0.len();
        (0..n)
            .map(|k| self.rotated(k).0)
            .min_by(|a, b| a.iter().map(Symbol::sort_key).cmp(b.iter().map(Symbol::sort_key)))
            .unwrap_or_default()
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Word) -> bool {
        let n = self.0.len();
        if n != other.0.len() {
            return false;
        }
        n == 0 || (0..n).any(|k| (0..n).all(|i| self.0[(i + k) % n] == other.0[i]))
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.least_rotation().hash(state);
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("h{0} occurs more than once")]
    DuplicateH(u32),
    #[error("v{0} occurs more than once")]
    DuplicateV(u32),
    #[error("crossing {0} has more than one over occurrence")]
    DuplicateOver(u32),
    #[error("crossing {0} has more than one under occurrence")]
    DuplicateUnder(u32),
    #[error("crossing {0} has no over occurrence")]
    MissingOver(u32),
    #[error("crossing {0} has no under occurrence")]
    MissingUnder(u32),
    #[error("index gap: {kind}{index} is missing")]
    IndexGap { kind: &'static str, index: u32 },
    #[error("word {0} has no h or v symbol")]
    NoBoundarySymbol(usize),
    #[error("code has no h symbol")]
    NoHorizontal,
    #[error("code has no v symbol")]
    NoVertical,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid code: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("word index {index} out of range for {words} words")]
    WordIndex { index: usize, words: usize },
    #[error("crossing permutation must be a permutation of 1..={0}")]
    BadPermutation(u32),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct HomologyClass {
    pub x: i32,
    pub y: i32,
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KnotSymbol {
    pub crossings: u32,
    pub components: usize,
    pub homology: Vec<HomologyClass>,
}

impl KnotSymbol {
    pub fn total(&self) -> HomologyClass {
        self.homology.iter().fold(HomologyClass::default(), |a, h| HomologyClass { x: a.x + h.x, y: a.y + h.y })
    }
}

impl fmt::Display for KnotSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}_{}", self.crossings, self.components, self.total())
    }
}

/// A validated textile code: cyclic words over crossings and boundary points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TextileCode {
    words: Vec<Word>,
    n: u32,
    l: u32,
    m: u32,
}

impl TextileCode {
    pub fn new(words: Vec<Vec<Symbol>>) -> Result<TextileCode, CodeError> {
        let words: Vec<Word> = words.into_iter().map(Word).collect();
        let (n, l, m) = validate(&words)?;
        Ok(TextileCode { words, n, l, m })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn crossings(&self) -> u32 {
        self.n
    }

    pub fn horizontals(&self) -> u32 {
        self.l
    }

    pub fn verticals(&self) -> u32 {
        self.m
    }

    pub fn complexity(&self) -> u32 {
        self.n + self.l + self.m
    }

    /// Total number of symbols over all words.
    pub fn len(&self) -> usize {
        self.words.iter().map(Word::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// x sums the signs of v symbols, y those of h symbols.
    pub fn homology_class(&self, word_index: usize) -> Result<HomologyClass, CodeError> {
        let w =
            self.words.get(word_index).ok_or(CodeError::WordIndex { index: word_index, words: self.words.len() })?;
        Ok(word_homology(w))
    }

    pub fn knot_symbol(&self) -> KnotSymbol {
        KnotSymbol {
            crossings: self.n,
            components: self.words.len(),
            homology: self.words.iter().map(word_homology).collect(),
        }
    }

    pub fn rotate_word(&self, word_index: usize, k: usize) -> Result<TextileCode, CodeError> {
        if word_index >= self.words.len() {
            return Err(CodeError::WordIndex { index: word_index, words: self.words.len() });
        }
        let mut out = self.clone();
        out.words[word_index] = out.words[word_index].rotated(k);
        Ok(out)
    }

    /// Renames crossing `i` to `perm[i - 1]`.
    pub fn relabel_crossings(&self, perm: &[u32]) -> Result<TextileCode, CodeError> {
        let n = self.n as usize;
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(CodeError::BadPermutation(self.n));
        }
        for &p in perm {
            if p == 0 || p as usize > n || std::mem::replace(&mut seen[p as usize - 1], true) {
                return Err(CodeError::BadPermutation(self.n));
            }
        }
        Ok(self.map_crossings(|i| perm[i as usize - 1]))
    }

    fn map_crossings(&self, f: impl Fn(u32) -> u32) -> TextileCode {
        let words = self
            .words
            .iter()
            .map(|w| Word(w.0.iter().map(|s| s.crossing().map_or(*s, |i| s.with_crossing(f(i)))).collect()))
            .collect();
        TextileCode { words, ..*self }
    }

    /// Rotates each word to its least symbol, orders words by their text,
    /// then renumbers crossings by first appearance.
    pub fn canonicalize(&self) -> TextileCode {
        let mut words: Vec<Word> = self.words.iter().map(Word::canonical_rotation).collect();
        // first symbols are distinct h/v symbols, so the text order does not depend on labels
        words.sort_by_cached_key(|w| w.to_string());
        let mut label = vec![0u32; self.n as usize];
        let mut next = 0;
        for s in words.iter().flat_map(|w| w.0.iter()) {
            if let Some(i) = s.crossing() {
                let slot = &mut label[i as usize - 1];
                if *slot == 0 {
                    next += 1;
                    *slot = next;
                }
            }
        }
        TextileCode { words, ..*self }.map_crossings(|i| label[i as usize - 1])
    }
}

fn word_homology(w: &Word) -> HomologyClass {
    w.0.iter().fold(HomologyClass::default(), |mut h, s| {
        match s {
            Symbol::V(_, e) => h.x += e.value(),
            Symbol::H(_, e) => h.y += e.value(),
            _ => {}
        }
        h
    })
}

fn validate(words: &[Word]) -> Result<(u32, u32, u32), CodeError> {
    let mut over: HashMap<u32, u32> = HashMap::new();
    let mut under: HashMap<u32, u32> = HashMap::new();
    let mut hs: HashMap<u32, u32> = HashMap::new();
    let mut vs: HashMap<u32, u32> = HashMap::new();
    let mut bad = Vec::new();
    for (wi, w) in words.iter().enumerate() {
        if !w.0.iter().any(Symbol::is_boundary) {
            bad.push(Violation::NoBoundarySymbol(wi));
        }
        for s in &w.0 {
            let (map, i) = match *s {
                Symbol::Over(i) => (&mut over, i),
                Symbol::Under(i, _) => (&mut under, i),
                Symbol::H(j, _) => (&mut hs, j),
                Symbol::V(k, _) => (&mut vs, k),
            };
            *map.entry(i).or_default() += 1;
        }
    }
    let max = |m: &HashMap<u32, u32>| m.keys().copied().max().unwrap_or(0);
    let n = max(&over).max(max(&under));
    let l = max(&hs);
    let m = max(&vs);
    for i in 1..=n {
        match (over.get(&i).copied().unwrap_or(0), under.get(&i).copied().unwrap_or(0)) {
            (0, 0) => bad.push(Violation::IndexGap { kind: "", index: i }),
            (o, u) => {
                if o == 0 {
                    bad.push(Violation::MissingOver(i));
                }
                if o > 1 {
                    bad.push(Violation::DuplicateOver(i));
                }
                if u == 0 {
                    bad.push(Violation::MissingUnder(i));
                }
                if u > 1 {
                    bad.push(Violation::DuplicateUnder(i));
                }
            }
        }
    }
    for (map, top, kind) in [(&hs, l, "h"), (&vs, m, "v")] {
        for j in 1..=top {
            match map.get(&j).copied().unwrap_or(0) {
                0 => bad.push(Violation::IndexGap { kind, index: j }),
                1 => {}
                _ if kind == "h" => bad.push(Violation::DuplicateH(j)),
                _ => bad.push(Violation::DuplicateV(j)),
            }
        }
    }
    if l == 0 {
        bad.push(Violation::NoHorizontal);
    }
    if m == 0 {
        bad.push(Violation::NoVertical);
    }
    if bad.is_empty() {
        Ok((n, l, m))
    } else {
        Err(CodeError::Invalid(bad))
    }
}

impl fmt::Display for TextileCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl FromStr for TextileCode {
    type Err = CodeError;

    fn from_str(text: &str) -> Result<TextileCode, CodeError> {
        let mut words = Vec::new();
        let mut offset = 0;
        for part in text.split(';') {
            let mut word = Vec::new();
            let base = offset;
            offset += part.len() + 1;
            for (at, tok) in tokens(part) {
                let sym = tok
                    .parse::<Symbol>()
                    .map_err(|msg| CodeError::Syntax { pos: base + at, msg: format!("bad token `{tok}`: {msg}") })?;
                word.push(sym);
            }
            if word.is_empty() {
                return Err(CodeError::Syntax { pos: base, msg: "empty word".into() });
            }
            words.push(word);
        }
        TextileCode::new(words)
    }
}

fn tokens(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.split(|c: char| c.is_ascii_whitespace())
        .scan(0usize, |at, tok| {
            let here = *at;
            *at += tok.len() + 1;
            Some((here, tok))
        })
        .filter(|(_, t)| !t.is_empty())
}

pub fn parse_code(text: &str) -> Result<TextileCode, CodeError> {
    text.parse()
}

pub fn serialize_code(code: &TextileCode) -> String {
    code.to_string()
}
