use std::fmt;

use crate::code::{Sign, Symbol, TextileCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Crossing(u32),
    HPoint(u32),
    VPoint(u32),
    Corner,
}

/// A letter of the extended code: a code symbol or an undecorated boundary letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Token {
    Code(Symbol),
    Corner,
    H(u32),
    V(u32),
}

impl Token {
    pub fn vertex(&self) -> Vertex {
        match *self {
            Token::Code(Symbol::Over(i)) | Token::Code(Symbol::Under(i, _)) => Vertex::Crossing(i),
            Token::Code(Symbol::H(j, _)) | Token::H(j) => Vertex::HPoint(j),
            Token::Code(Symbol::V(k, _)) | Token::V(k) => Vertex::VPoint(k),
            Token::Corner => Vertex::Corner,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Code(s) => write!(f, "{s}"),
            Token::Corner => f.write_str("c"),
            Token::H(j) => write!(f, "h{j}"),
            Token::V(k) => write!(f, "v{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordId {
    Code(usize),
    Boundary,
}

impl fmt::Display for WordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordId::Code(w) => write!(f, "{w}"),
            WordId::Boundary => f.write_str("B"),
        }
    }
}

/// The unoriented edge between position `pos` and its cyclic successor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Adjacency {
    pub word: WordId,
    pub pos: usize,
}

/// Edge leaving the symbol at `pos`; `dir` tells whether it runs with the word or against it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedEdge {
    pub word: WordId,
    pub pos: usize,
    pub dir: Sign,
}

/// Code words followed by the boundary word `c h1..hl c v1..vm`, stored flat
/// with lookup tables from each vertex to its two occurrences.
#[derive(Clone, Debug)]
pub struct ExtendedCode {
    tokens: Vec<Token>,
    starts: Vec<u32>,
    word_of: Vec<u32>,
    /// Flat position of each labelled letter: overs, unders, code h, boundary h,
    /// code v, boundary v, then the two corners.
    place: Vec<u32>,
    n: u32,
    l: u32,
    m: u32,
}

impl ExtendedCode {
    pub fn new(code: &TextileCode) -> ExtendedCode {
        let (n, l, m) = (code.crossings(), code.horizontals(), code.verticals());
        let mut tokens = Vec::with_capacity(code.len() + (l + m + 2) as usize);
        let mut starts = Vec::with_capacity(code.words().len() + 2);
        for w in code.words() {
            starts.push(tokens.len() as u32);
            tokens.extend(w.symbols().iter().map(|&s| Token::Code(s)));
        }
        starts.push(tokens.len() as u32);
        tokens.push(Token::Corner);
        tokens.extend((1..=l).map(Token::H));
        tokens.push(Token::Corner);
        tokens.extend((1..=m).map(Token::V));
        starts.push(tokens.len() as u32);

        let mut word_of = vec![0; tokens.len()];
        for w in 0..starts.len() - 1 {
            word_of[starts[w] as usize..starts[w + 1] as usize].fill(w as u32);
        }
        let (n2, l2) = (2 * n as usize, 2 * l as usize);
        let mut place = vec![0; n2 + l2 + 2 * m as usize + 2];
        let mut corner = place.len() - 2;
        for (g, t) in tokens.iter().enumerate() {
            let slot = match *t {
                Token::Code(Symbol::Over(i)) => i as usize - 1,
                Token::Code(Symbol::Under(i, _)) => n as usize + i as usize - 1,
                Token::Code(Symbol::H(j, _)) => n2 + j as usize - 1,
                Token::H(j) => n2 + l as usize + j as usize - 1,
                Token::Code(Symbol::V(k, _)) => n2 + l2 + k as usize - 1,
                Token::V(k) => n2 + l2 + m as usize + k as usize - 1,
                Token::Corner => {
                    corner += 1;
                    corner - 1
                }
            };
            place[slot] = g as u32;
        }
        ExtendedCode { tokens, starts, word_of, place, n, l, m }
    }

    fn at(&self, slot: usize) -> usize {
        self.place[slot] as usize
    }

    pub(crate) fn over(&self, i: u32) -> usize {
        self.at(i as usize - 1)
    }

    pub(crate) fn under(&self, i: u32) -> usize {
        self.at((self.n + i) as usize - 1)
    }

    pub(crate) fn h_code(&self, j: u32) -> usize {
        self.at((2 * self.n + j) as usize - 1)
    }

    pub(crate) fn h_bnd(&self, j: u32) -> usize {
        self.at((2 * self.n + self.l + j) as usize - 1)
    }

    pub(crate) fn v_code(&self, k: u32) -> usize {
        self.at((2 * self.n + 2 * self.l + k) as usize - 1)
    }

    pub(crate) fn v_bnd(&self, k: u32) -> usize {
        self.at((2 * self.n + 2 * self.l + self.m + k) as usize - 1)
    }

    pub(crate) fn corners(&self) -> [usize; 2] {
        let c = self.place.len() - 2;
        [self.at(c), self.at(c + 1)]
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

    /// Number of symbol occurrences, which equals the number of edges.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        (self.n + self.l + self.m + 1) as usize
    }

    fn code_words(&self) -> usize {
        self.starts.len() - 2
    }

    pub fn word_ids(&self) -> impl Iterator<Item = WordId> {
        (0..self.code_words()).map(WordId::Code).chain(std::iter::once(WordId::Boundary))
    }

    fn word_index(&self, id: WordId) -> usize {
        match id {
            WordId::Code(w) => w,
            WordId::Boundary => self.code_words(),
        }
    }

    pub fn word(&self, id: WordId) -> &[Token] {
        let w = self.word_index(id);
        &self.tokens[self.start(w)..self.start(w + 1)]
    }

    pub fn boundary_word(&self) -> &[Token] {
        self.word(WordId::Boundary)
    }

    /// Letters before this flat index belong to code words.
    pub(crate) fn code_letters(&self) -> usize {
        self.start(self.code_words())
    }

    fn start(&self, w: usize) -> usize {
        self.starts[w] as usize
    }

    pub(crate) fn token(&self, g: usize) -> Token {
        self.tokens[g]
    }

    pub(crate) fn flat(&self, word: WordId, pos: usize) -> usize {
        self.start(self.word_index(word)) + pos
    }

    pub(crate) fn occurrence(&self, g: usize) -> (WordId, usize) {
        let w = self.word_of[g] as usize;
        let id = if w == self.code_words() { WordId::Boundary } else { WordId::Code(w) };
        (id, g - self.start(w))
    }

    pub(crate) fn succ(&self, g: usize) -> usize {
        let w = self.word_of[g] as usize;
        if g + 1 == self.start(w + 1) {
            self.start(w)
        } else {
            g + 1
        }
    }

    pub(crate) fn pred(&self, g: usize) -> usize {
        let w = self.word_of[g] as usize;
        if g == self.start(w) {
            self.start(w + 1) - 1
        } else {
            g - 1
        }
    }

    pub(crate) fn step(&self, g: usize, dir: Sign) -> usize {
        match dir {
            Sign::Plus => self.succ(g),
            Sign::Minus => self.pred(g),
        }
    }

    pub(crate) fn edge_id(&self, e: OrientedEdge) -> usize {
        2 * self.flat(e.word, e.pos) + usize::from(e.dir == Sign::Minus)
    }

    pub(crate) fn edge_at(&self, id: usize) -> OrientedEdge {
        let (word, pos) = self.occurrence(id / 2);
        let dir = if id.is_multiple_of(2) { Sign::Plus } else { Sign::Minus };
        OrientedEdge { word, pos, dir }
    }

    pub fn endpoints(&self, e: OrientedEdge) -> (Token, Token) {
        let g = self.flat(e.word, e.pos);
        (self.tokens[g], self.tokens[self.step(g, e.dir)])
    }

    pub fn adjacency(&self, e: OrientedEdge) -> Adjacency {
        match e.dir {
            Sign::Plus => Adjacency { word: e.word, pos: e.pos },
            Sign::Minus => {
                let (word, pos) = self.occurrence(self.pred(self.flat(e.word, e.pos)));
                Adjacency { word, pos }
            }
        }
    }

    /// The same adjacency traversed the other way.
    pub fn reverse(&self, e: OrientedEdge) -> OrientedEdge {
        let (word, pos) = self.occurrence(self.step(self.flat(e.word, e.pos), e.dir));
        OrientedEdge { word, pos, dir: -e.dir }
    }

    /// Renders as `(a,b)+` in code grammar.
    pub fn render_edge(&self, e: OrientedEdge) -> String {
        let (a, b) = self.endpoints(e);
        format!("({a},{b}){}", e.dir)
    }
}

impl fmt::Display for ExtendedCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self
            .word_ids()
            .map(|id| self.word(id).iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        f.write_str(&words.join(" ; "))
    }
}

pub fn extend(code: &TextileCode) -> ExtendedCode {
    ExtendedCode::new(code)
}

#[derive(Clone, Debug)]
pub struct TextileGraph {
    pub ext: ExtendedCode,
    pub vertices: Vec<Vertex>,
    pub adjacencies: Vec<Adjacency>,
}

impl TextileGraph {
    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacencies
            .iter()
            .map(|&a| {
                let e = OrientedEdge { word: a.word, pos: a.pos, dir: Sign::Plus };
                let (x, y) = self.ext.endpoints(e);
                usize::from(x.vertex() == v) + usize::from(y.vertex() == v)
            })
            .sum()
    }

    pub fn oriented_edges(&self) -> impl Iterator<Item = OrientedEdge> + '_ {
        self.adjacencies.iter().flat_map(move |a| {
            let fwd = OrientedEdge { word: a.word, pos: a.pos, dir: Sign::Plus };
            [fwd, self.ext.reverse(fwd)]
        })
    }

    /// One line per adjacency: `wordId:pos  a -- b`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for a in &self.adjacencies {
            let (x, y) = self.ext.endpoints(OrientedEdge { word: a.word, pos: a.pos, dir: Sign::Plus });
            out += &format!("{}:{}  {x} -- {y}\n", a.word, a.pos);
        }
        out
    }
}

pub fn build_graph(code: &TextileCode) -> TextileGraph {
    let ext = ExtendedCode::new(code);
    let (n, l, m) = (code.crossings(), code.horizontals(), code.verticals());
    let vertices = (1..=n)
        .map(Vertex::Crossing)
        .chain((1..=l).map(Vertex::HPoint))
        .chain((1..=m).map(Vertex::VPoint))
        .chain(std::iter::once(Vertex::Corner))
        .collect();
    let adjacencies =
        ext.word_ids().flat_map(|word| (0..ext.word(word).len()).map(move |pos| Adjacency { word, pos })).collect();
    TextileGraph { ext, vertices, adjacencies }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(s: &str) -> TextileGraph {
        build_graph(&s.parse().unwrap())
    }

    fn boundary(l: u32, m: u32) -> String {
        let mut w = vec!["h1+".to_string()];
        w.extend((2..=l).map(|j| format!("h{j}+")));
        w.extend((1..=m).map(|k| format!("v{k}+")));
        let ext = extend(&w.join(" ").parse().unwrap());
        ext.boundary_word().iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }

    #[test]
    fn boundary_words() {
        assert_eq!(boundary(2, 2), "c h1 h2 c v1 v2");
        assert_eq!(boundary(1, 1), "c h1 c v1");
        assert_eq!(boundary(3, 1), "c h1 h2 h3 c v1");
    }

    #[test]
    fn worked_example_graph() {
        let g = graph("h1+ 1 v2- 2+ ; h2+ v1+ 1- 2");
        assert_eq!(g.vertices.len(), 7);
        assert_eq!(g.adjacencies.len(), 14);
        let dump = g.dump();
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(&lines[..4], ["0:0  h1+ -- 1", "0:1  1 -- v2-", "0:2  v2- -- 2+", "0:3  2+ -- h1+"]);
        assert_eq!(
            &lines[8..],
            ["B:0  c -- h1", "B:1  h1 -- h2", "B:2  h2 -- c", "B:3  c -- v1", "B:4  v1 -- v2", "B:5  v2 -- c"]
        );
        for &v in &g.vertices {
            assert_eq!(g.degree(v), 4, "{v:?}");
        }
    }

    #[test]
    fn smallest_graph() {
        let g = graph("h1+ v1+");
        assert_eq!(g.vertices.len(), 3);
        assert_eq!(g.adjacencies.len(), 6);
        assert!(g.vertices.iter().all(|&v| g.degree(v) == 4));
        assert_eq!(g.oriented_edges().count(), 12);
    }

    #[test]
    fn single_symbol_words_are_self_loops() {
        let g = graph("h1+ ; v1+");
        assert_eq!(g.adjacencies.len(), 6);
        assert!(g.vertices.iter().all(|&v| g.degree(v) == 4));
        let e = OrientedEdge { word: WordId::Code(0), pos: 0, dir: Sign::Plus };
        assert_eq!(g.ext.reverse(e), OrientedEdge { dir: Sign::Minus, ..e });
    }

    #[test]
    fn edge_rendering() {
        let g = graph("h1+ 1 v2- 2+ ; h2+ v1+ 1- 2");
        let e = OrientedEdge { word: WordId::Code(1), pos: 2, dir: Sign::Minus };
        assert_eq!(g.ext.render_edge(e), "(1-,v1+)-");
        assert_eq!(g.ext.adjacency(e), Adjacency { word: WordId::Code(1), pos: 1 });
    }
}
