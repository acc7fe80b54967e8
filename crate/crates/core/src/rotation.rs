//! Face tracing from an explicit rotation system.
//!
//! Each vertex gets its four edge-ends placed at compass angles read off the
//! local pictures: the square's bottom side runs west to east through the h
//! points, its left side runs south to north through the v points, and a
//! crossing has its over strand from south-west to north-east. A face is the
//! orbit of "cross the edge, then take the next end clockwise".

use crate::code::{Sign, Symbol, TextileCode};
use crate::graph::{ExtendedCode, Token};
use crate::realize::{collect_cycles, CycleReport};

// End ids: 2g leaves occurrence g forwards, 2g+1 backwards.
fn fwd(g: usize) -> usize {
    2 * g
}

fn back(g: usize) -> usize {
    2 * g + 1
}

fn sign_of(ext: &ExtendedCode, g: usize) -> Sign {
    match ext.token(g) {
        Token::Code(Symbol::Under(_, s) | Symbol::H(_, s) | Symbol::V(_, s)) => s,
        _ => Sign::Plus,
    }
}

/// Strand passing through the point: (incoming angle, outgoing angle).
fn strand(ext: &ExtendedCode, g: usize, plus: (u16, u16), minus: (u16, u16)) -> [(usize, u16); 2] {
    let (i, o) = if sign_of(ext, g) == Sign::Plus { plus } else { minus };
    [(back(g), i), (fwd(g), o)]
}

fn stars(ext: &ExtendedCode) -> Vec<[(usize, u16); 4]> {
    let mut out = Vec::with_capacity(ext.vertex_count());
    let join = |a: [(usize, u16); 2], b: [(usize, u16); 2]| [a[0], a[1], b[0], b[1]];
    for i in 1..=ext.crossings() {
        let (o, u) = (ext.over(i), ext.under(i));
        out.push(join([(back(o), 225), (fwd(o), 45)], strand(ext, u, (315, 135), (135, 315))));
    }
    for j in 1..=ext.horizontals() {
        let b = ext.h_bnd(j);
        out.push(join([(back(b), 180), (fwd(b), 0)], strand(ext, ext.h_code(j), (270, 90), (90, 270))));
    }
    for k in 1..=ext.verticals() {
        let b = ext.v_bnd(k);
        out.push(join([(back(b), 270), (fwd(b), 90)], strand(ext, ext.v_code(k), (180, 0), (0, 180))));
    }
    let [c0, c1] = ext.corners();
    out.push([(fwd(c0), 0), (back(c1), 180), (fwd(c1), 90), (back(c0), 270)]);
    out
}

pub fn faces_via_rotation_system(code: &TextileCode) -> CycleReport {
    let ext = ExtendedCode::new(code);
    let mut clockwise = vec![0usize; 2 * ext.len()];
    for mut star in stars(&ext) {
        star.sort_by_key(|&(_, a)| std::cmp::Reverse(a));
        for k in 0..4 {
            clockwise[star[k].0] = star[(k + 1) % 4].0;
        }
    }
    let far_end = |d: usize| {
        let g = d / 2;
        if d.is_multiple_of(2) {
            back(ext.succ(g))
        } else {
            fwd(ext.pred(g))
        }
    };
    collect_cycles(&ext, |d| clockwise[far_end(d)], true)
}
