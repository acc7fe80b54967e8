use std::fmt;

use crate::code::{Sign, Symbol, TextileCode};
use crate::graph::{ExtendedCode, OrientedEdge, Token};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureReason {
    /// One cycle runs along a code-word edge in both directions.
    BothPasses,
    /// Tracing came back to an edge owned by an earlier cycle.
    Revisited,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::BothPasses => "cycle passes an edge in both directions",
            FailureReason::Revisited => "oriented edge reached twice",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Failure {
    pub reason: FailureReason,
    pub witness: OrientedEdge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub edges: Vec<OrientedEdge>,
}

#[derive(Clone, Debug)]
pub struct CycleReport {
    pub cycles: Vec<Cycle>,
    pub vertex_count: usize,
    pub adjacency_count: usize,
    pub realizable: bool,
    pub failure: Option<Failure>,
}

impl CycleReport {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.adjacency_count as i64 + self.cycles.len() as i64
    }

    /// Cycles as sorted edge lists, sorted; comparable across tracers.
    pub fn partition(&self) -> Vec<Vec<OrientedEdge>> {
        let mut out: Vec<Vec<OrientedEdge>> = self
            .cycles
            .iter()
            .map(|c| {
                let mut e = c.edges.clone();
                e.sort();
                e
            })
            .collect();
        out.sort();
        out
    }
}

fn sign_at(ext: &ExtendedCode, g: usize) -> Sign {
    match ext.token(g) {
        Token::Code(Symbol::Under(_, s) | Symbol::H(_, s) | Symbol::V(_, s)) => s,
        _ => Sign::Plus,
    }
}

fn encode(g: usize, dir: Sign) -> usize {
    2 * g + usize::from(dir == Sign::Minus)
}

/// Turn-left successor on flat edge ids.
pub(crate) fn next_id(ext: &ExtendedCode, id: usize) -> usize {
    let g = id / 2;
    let d = if id.is_multiple_of(2) { Sign::Plus } else { Sign::Minus };
    let to = ext.step(g, d);
    let (start, dir) = match ext.token(to) {
        Token::Code(Symbol::Over(i)) => {
            let u = ext.under(i);
            (u, sign_at(ext, u) * d)
        }
        Token::Code(Symbol::Under(i, e)) => (ext.over(i), -(e * d)),
        Token::H(j) => {
            let c = ext.h_code(j);
            (c, d * sign_at(ext, c))
        }
        Token::Code(Symbol::H(j, e)) => (ext.h_bnd(j), -(d * e)),
        Token::V(k) => {
            let c = ext.v_code(k);
            (c, -(d * sign_at(ext, c)))
        }
        Token::Code(Symbol::V(k, e)) => (ext.v_bnd(k), d * e),
        Token::Corner => match ext.token(g) {
            Token::H(_) => (to, d),
            _ => {
                let [c0, c1] = ext.corners();
                let other = if to == c0 { c1 } else { c0 };
                (other, -d)
            }
        },
    };
    encode(start, dir)
}

pub fn next_edge(ext: &ExtendedCode, e: OrientedEdge) -> OrientedEdge {
    ext.edge_at(next_id(ext, ext.edge_id(e)))
}

/// Walks the permutation `next` over all 2E edge ids, starting each cycle
/// at the least unused id.
pub(crate) fn collect_cycles(ext: &ExtendedCode, next: impl Fn(usize) -> usize, keep: bool) -> CycleReport {
    let total = 2 * ext.len();
    let code_letters = ext.code_letters();
    let mut owner = vec![u32::MAX; total];
    let mut cycles = Vec::new();
    let mut count = 0usize;
    let mut failure = None;
    'outer: for start in 0..total {
        if owner[start] != u32::MAX {
            continue;
        }
        let c = count as u32;
        count += 1;
        let mut edges = Vec::new();
        let mut e = start;
        loop {
            owner[e] = c;
            if keep {
                edges.push(ext.edge_at(e));
            }
            let g = e / 2;
            let (adj, reverse) = if e % 2 == 0 {
                let h = ext.succ(g);
                (g, 2 * h + 1)
            } else {
                let h = ext.pred(g);
                (h, 2 * h)
            };
            if adj < code_letters && owner[reverse] == c && failure.is_none() {
                failure = Some(Failure { reason: FailureReason::BothPasses, witness: ext.edge_at(e) });
            }
            e = next(e);
            if e == start {
                break;
            }
            if owner[e] != u32::MAX {
                failure = Some(Failure { reason: FailureReason::Revisited, witness: ext.edge_at(e) });
                if keep {
                    cycles.push(Cycle { edges });
                }
                break 'outer;
            }
        }
        if keep {
            cycles.push(Cycle { edges });
        }
    }
    let vertex_count = ext.vertex_count();
    let realizable = failure.is_none() && count == vertex_count;
    if !keep {
        cycles = Vec::new();
    }
    CycleReport { cycles, vertex_count, adjacency_count: ext.len(), realizable, failure }
}

pub fn trace_cycles(code: &TextileCode) -> CycleReport {
    let ext = ExtendedCode::new(code);
    collect_cycles(&ext, |e| next_id(&ext, e), true)
}

pub fn is_realizable(code: &TextileCode) -> bool {
    let ext = ExtendedCode::new(code);
    collect_cycles(&ext, |e| next_id(&ext, e), false).realizable
}
