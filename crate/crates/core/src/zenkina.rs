use std::ops::Range;

use thiserror::Error;

use crate::code::{HomologyClass, Sign, Symbol, TextileCode};
use crate::ring::{equals_mod_units, Monomial, Poly, RingError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ZenkinaError {
    #[error("invariant needs a single-component code, got {0} words")]
    MultiComponent(usize),
    #[error("invariant needs at least one crossing")]
    NoCrossings,
    #[error("no crossing {0} in code")]
    UnknownCrossing(u32),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Over,
    Under,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussDiagram {
    pub circle: Vec<(u32, Role)>,
    /// Indexed by crossing - 1: (over position, under position) on the circle.
    pub chords: Vec<(usize, usize)>,
}

impl GaussDiagram {
    pub fn linked(&self, i: u32, j: u32) -> bool {
        let (a, b) = self.chords[i as usize - 1];
        let (lo, hi) = (a.min(b), a.max(b));
        let (c, d) = self.chords[j as usize - 1];
        let inside = |k: usize| lo < k && k < hi;
        i != j && inside(c) != inside(d)
    }

    pub fn parity(&self, i: u32) -> u8 {
        let n = self.chords.len() as u32;
        ((1..=n).filter(|&j| self.linked(i, j)).count() % 2) as u8
    }
}

fn single_word(code: &TextileCode) -> Result<&[Symbol], ZenkinaError> {
    match code.words() {
        [w] if code.crossings() > 0 => Ok(w.symbols()),
        [_] => Err(ZenkinaError::NoCrossings),
        ws => Err(ZenkinaError::MultiComponent(ws.len())),
    }
}

pub fn gauss_diagram(code: &TextileCode) -> Result<GaussDiagram, ZenkinaError> {
    let word = single_word(code)?;
    let mut circle = Vec::new();
    let mut chords = vec![(0, 0); code.crossings() as usize];
    for s in word {
        match *s {
            Symbol::Over(i) => {
                chords[i as usize - 1].0 = circle.len();
                circle.push((i, Role::Over));
            }
            Symbol::Under(i, _) => {
                chords[i as usize - 1].1 = circle.len();
                circle.push((i, Role::Under));
            }
            _ => {}
        }
    }
    Ok(GaussDiagram { circle, chords })
}

pub fn parity(code: &TextileCode, i: u32) -> Result<u8, ZenkinaError> {
    let g = gauss_diagram(code)?;
    if i == 0 || i > code.crossings() {
        return Err(ZenkinaError::UnknownCrossing(i));
    }
    Ok(g.parity(i))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubArc {
    /// Positions in the arc's run; the h/v symbols between sub-arcs belong to neither.
    pub span: Range<usize>,
    pub degree: HomologyClass,
}

/// Stretch of the word from one undercrossing to the next, both included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub start: u32,
    pub end: u32,
    pub run: Vec<Symbol>,
    pub sub_arcs: Vec<SubArc>,
}

impl Arc {
    fn new(run: Vec<Symbol>) -> Arc {
        let index = |s: &Symbol| match *s {
            Symbol::Under(i, _) => i,
            _ => unreachable!("arcs run between undercrossings"),
        };
        let (start, end) = (index(&run[0]), index(&run[run.len() - 1]));
        let mut sub_arcs = Vec::new();
        let mut degree = HomologyClass::default();
        let mut from = 0;
        for (k, s) in run.iter().enumerate() {
            let step = match *s {
                Symbol::V(_, e) => (e.value(), 0),
                Symbol::H(_, e) => (0, e.value()),
                _ => continue,
            };
            sub_arcs.push(SubArc { span: from..k, degree });
            degree.x += step.0;
            degree.y += step.1;
            from = k + 1;
        }
        sub_arcs.push(SubArc { span: from..run.len(), degree });
        Arc { start, end, run, sub_arcs }
    }

    pub fn last_degree(&self) -> HomologyClass {
        self.sub_arcs.last().map(|s| s.degree).unwrap_or_default()
    }

    fn degree_at(&self, k: usize) -> HomologyClass {
        self.sub_arcs.iter().find(|s| s.span.contains(&k)).map(|s| s.degree).unwrap_or_default()
    }
}

/// Arcs ordered by their starting undercrossing.
pub fn arcs(code: &TextileCode) -> Result<Vec<Arc>, ZenkinaError> {
    let word = single_word(code)?;
    let len = word.len();
    let mut out: Vec<Arc> = word
        .iter()
        .enumerate()
        .filter(|(_, s)| matches!(s, Symbol::Under(..)))
        .map(|(u, _)| {
            let mut run = vec![word[u]];
            let mut k = (u + 1) % len;
            loop {
                run.push(word[k]);
                if matches!(word[k], Symbol::Under(..)) {
                    break;
                }
                k = (k + 1) % len;
            }
            Arc::new(run)
        })
        .collect();
    out.sort_by_key(|a| a.start);
    Ok(out)
}

struct Crossings {
    sign: Vec<Sign>,
    odd: Vec<bool>,
}

impl Crossings {
    fn of(code: &TextileCode) -> Result<Crossings, ZenkinaError> {
        let g = gauss_diagram(code)?;
        let n = code.crossings();
        let mut sign = vec![Sign::Plus; n as usize];
        for s in code.words()[0].symbols() {
            if let Symbol::Under(i, e) = *s {
                sign[i as usize - 1] = e;
            }
        }
        let odd = (1..=n).map(|i| g.parity(i) == 1).collect();
        Ok(Crossings { sign, odd })
    }

    fn factor(&self, i: u32, arc: &Arc) -> Poly {
        let k = i as usize - 1;
        let (leave, pass, end) = {
            let z2 = if self.odd[k] { Poly::q() } else { &Poly::one() - &Poly::t() };
            let heavy = if self.odd[k] { Poly::p() } else { Poly::t() };
            match self.sign[k] {
                Sign::Plus => (Poly::constant(-1), z2, heavy),
                Sign::Minus => (heavy, z2, Poly::constant(-1)),
            }
        };
        let at = |d: HomologyClass| Poly::term(Monomial { x: d.x, y: d.y, ..Monomial::ONE }, 1);
        let mut out = Poly::zero();
        if arc.start == i {
            out = &out + &leave;
        }
        for (pos, s) in arc.run.iter().enumerate().take(arc.run.len() - 1).skip(1) {
            if *s == Symbol::Over(i) {
                out = &out + &(&pass * &at(arc.degree_at(pos)));
            }
        }
        if arc.end == i {
            out = &out + &(&end * &at(arc.last_degree()));
        }
        out
    }
}

pub fn incidence_factor(code: &TextileCode, i: u32, arc: &Arc) -> Result<Poly, ZenkinaError> {
    if i == 0 || i > code.crossings() {
        return Err(ZenkinaError::UnknownCrossing(i));
    }
    Ok(Crossings::of(code)?.factor(i, arc))
}

/// Rows are crossings, columns are arcs by starting undercrossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix(pub Vec<Vec<Poly>>);

impl IncidenceMatrix {
    pub fn determinant(&self) -> Poly {
        determinant(&self.0)
    }
}

pub fn zenkina_matrix(code: &TextileCode) -> Result<IncidenceMatrix, ZenkinaError> {
    let cs = Crossings::of(code)?;
    let arcs = arcs(code)?;
    let rows = (1..=code.crossings()).map(|i| arcs.iter().map(|a| cs.factor(i, a)).collect()).collect();
    Ok(IncidenceMatrix(rows))
}

/// Laplace expansion along rows, memoized over the set of used columns.
pub fn determinant(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    let mut minors = vec![Poly::zero(); 1 << n];
    minors[0] = Poly::one();
    for mask in 1usize..1 << n {
        let row = mask.count_ones() as usize - 1;
        let mut acc = Poly::zero();
        for j in (0..n).filter(|j| mask & (1 << j) != 0) {
            let rest = &minors[mask ^ (1 << j)];
            if m[row][j].is_zero() || rest.is_zero() {
                continue;
            }
            let term = &m[row][j] * rest;
            acc = if (mask >> (j + 1)).count_ones() % 2 == 1 { &acc - &term } else { &acc + &term };
        }
        minors[mask] = acc;
    }
    minors.pop().unwrap_or_else(Poly::one)
}

pub fn zenkina_polynomial(code: &TextileCode) -> Result<Poly, ZenkinaError> {
    Ok(zenkina_matrix(code)?.determinant())
}

/// Groups codes whose invariants agree up to units; classes are listed in
/// order of first member.
pub fn invariants_distinct(codes: &[TextileCode], bound: i64) -> Result<Vec<Vec<usize>>, ZenkinaError> {
    let polys = codes.iter().map(zenkina_polynomial).collect::<Result<Vec<_>, _>>()?;
    let mut classes: Vec<Vec<usize>> = Vec::new();
    'next: for (k, f) in polys.iter().enumerate() {
        for class in &mut classes {
            if equals_mod_units(f, &polys[class[0]], bound)?.is_some() {
                class.push(k);
                continue 'next;
            }
        }
        classes.push(vec![k]);
    }
    Ok(classes)
}
