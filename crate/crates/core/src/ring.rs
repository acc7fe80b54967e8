//! Z[p,q,t,x^±1,y^±1] modulo q^2 = (1-t)(1-p) and qp = qt.
//!
//! Normal form keeps q to degree at most one, removes p from any monomial
//! that carries q, and rewrites p^2 t using (p - t)(1 - p)(1 - t) = 0, which
//! the two defining relations imply. With that third rule the rewriting is
//! confluent and normal forms are unique.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::code::Sign;

/// Field order gives the rendering order (descending).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    pub x: i32,
    pub y: i32,
    pub q: u32,
    pub p: u32,
    pub t: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0, q: 0, p: 0, t: 0 };

    fn times(self, o: Monomial) -> Monomial {
        Monomial { x: self.x + o.x, y: self.y + o.y, q: self.q + o.q, p: self.p + o.p, t: self.t + o.t }
    }

    pub fn is_normal(&self) -> bool {
        match self.q {
            0 => self.p < 2 || self.t == 0,
            1 => self.p == 0,
            _ => false,
        }
    }

    fn factors(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut put = |v: char, e: i64| match e {
            0 => {}
            1 => out.push(v.to_string()),
            _ => out.push(format!("{v}^{e}")),
        };
        put('p', self.p.into());
        put('q', self.q.into());
        put('t', self.t.into());
        put('x', self.x.into());
        put('y', self.y.into());
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleOrder {
    /// Expand q^2 before trading p for t.
    QFirst,
    /// Trade p for t before expanding q^2.
    PFirst,
}

fn add_to(terms: &mut BTreeMap<Monomial, BigInt>, m: Monomial, c: BigInt) {
    let slot = terms.entry(m).or_insert_with(BigInt::zero);
    *slot += c;
    if slot.is_zero() {
        terms.remove(&m);
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

type PtForm = Rc<Vec<((u32, u32), BigInt)>>;

thread_local! {
    static PT_FORMS: RefCell<HashMap<(u32, u32), PtForm>> = RefCell::new(HashMap::new());
}

/// Normal form of p^a t^c for a >= 2, c >= 1, from p^2 t = p^2 - p + t - t^2 + p t^2.
fn pt_form(a: u32, c: u32) -> PtForm {
    if let Some(f) = PT_FORMS.with(|m| m.borrow().get(&(a, c)).cloned()) {
        return f;
    }
    let mut acc: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
    let parts = [((a, c - 1), 1), ((a - 1, c - 1), -1), ((a - 2, c), 1), ((a - 2, c + 1), -1), ((a - 1, c + 1), 1)];
    for ((pa, tc), sign) in parts {
        if pa >= 2 && tc >= 1 {
            for (k, v) in pt_form(pa, tc).iter() {
                *acc.entry(*k).or_insert_with(BigInt::zero) += v * sign;
            }
        } else {
            *acc.entry((pa, tc)).or_insert_with(BigInt::zero) += sign;
        }
    }
    let f: PtForm = Rc::new(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
    PT_FORMS.with(|m| m.borrow_mut().insert((a, c), f.clone()));
    f
}

fn push(terms: &mut BTreeMap<Monomial, BigInt>, m: Monomial, c: BigInt, order: RuleOrder) {
    if c.is_zero() {
        return;
    }
    if order == RuleOrder::PFirst && m.q >= 1 && m.p > 0 {
        return push(terms, Monomial { t: m.t + m.p, p: 0, ..m }, c, order);
    }
    if m.q >= 2 {
        // q^(2j) = ((1 - p)(1 - t))^j
        let j = m.q / 2;
        let base = Monomial { q: m.q % 2, ..m };
        for a in 0..=j {
            for b in 0..=j {
                let k = binomial(j, a) * binomial(j, b);
                let k = if (a + b) % 2 == 0 { k } else { -k };
                push(terms, Monomial { p: base.p + a, t: base.t + b, ..base }, &c * k, order);
            }
        }
        return;
    }
    if m.q == 1 && m.p > 0 {
        return add_to(terms, Monomial { t: m.t + m.p, p: 0, ..m }, c);
    }
    if m.q == 0 && m.p >= 2 && m.t >= 1 {
        for ((a, t), k) in pt_form(m.p, m.t).iter() {
            add_to(terms, Monomial { p: *a, t: *t, ..m }, &c * k);
        }
        return;
    }
    add_to(terms, m, c);
}

/// Element in normal form; no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

pub fn normal_form(raw: impl IntoIterator<Item = (Monomial, BigInt)>) -> Poly {
    normal_form_with(raw, RuleOrder::QFirst)
}

pub fn normal_form_with(raw: impl IntoIterator<Item = (Monomial, BigInt)>, order: RuleOrder) -> Poly {
    let mut terms = BTreeMap::new();
    for (m, c) in raw {
        push(&mut terms, m, c, order);
    }
    Poly { terms }
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(1)
    }

    pub fn constant(c: i64) -> Poly {
        Poly::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: i64) -> Poly {
        normal_form([(m, BigInt::from(c))])
    }

    pub fn p() -> Poly {
        Poly::term(Monomial { p: 1, ..Monomial::ONE }, 1)
    }

    pub fn q() -> Poly {
        Poly::term(Monomial { q: 1, ..Monomial::ONE }, 1)
    }

    pub fn t() -> Poly {
        Poly::term(Monomial { t: 1, ..Monomial::ONE }, 1)
    }

    pub fn xy(x: i32, y: i32) -> Poly {
        Poly::term(Monomial { x, y, ..Monomial::ONE }, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| &acc * self)
    }

    pub fn mul_monomial(&self, m: Monomial) -> Poly {
        normal_form(self.terms.iter().map(|(a, c)| (a.times(m), c.clone())))
    }

    fn scale(&self, s: Sign) -> Poly {
        match s {
            Sign::Plus => self.clone(),
            Sign::Minus => -self,
        }
    }

    /// Divides out the largest monomial in p, q, t shared by every term and
    /// makes the leading coefficient positive.
    pub fn reduced(&self) -> Poly {
        let Some(first) = self.terms.keys().next() else {
            return Poly::zero();
        };
        let init = (first.p, first.q, first.t);
        let (p, q, t) = self.terms.keys().fold(init, |(p, q, t), m| (p.min(m.p), q.min(m.q), t.min(m.t)));
        let out = Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial { p: m.p - p, q: m.q - q, t: m.t - t, ..*m }, c.clone()))
                .collect(),
        };
        match out.terms.values().next_back() {
            Some(c) if c.is_negative() => -out,
            _ => out,
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        normal_form(self.terms.iter().chain(o.terms.iter()).map(|(m, c)| (*m, c.clone())))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut terms = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                push(&mut terms, a.times(*b), x * y, RuleOrder::QFirst);
            }
        }
        Poly { terms }
    }
}

macro_rules! by_value {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, o: Poly) -> Poly {
                (&self).$f(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.abs();
            let factors = m.factors().join("*");
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&factors)?;
            } else {
                write!(f, "{abs}*{factors}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: &'static str },
    #[error("unit bound must be at least 1, got {0}")]
    InvalidBound(i64),
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &'static str) -> Result<T, RingError> {
        Err(RingError::Syntax { pos: self.pos, msg })
    }

    fn peek(&mut self) -> Option<u8> {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigInt, RingError> {
        self.peek();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn exponent(&mut self) -> Result<i32, RingError> {
        let neg = self.eat(b'-');
        if !neg {
            self.eat(b'+');
        }
        let at = self.pos;
        let v = i32::try_from(self.uint()?).map_err(|_| RingError::Syntax { pos: at, msg: "exponent too large" })?;
        Ok(if neg { -v } else { v })
    }

    fn expr(&mut self) -> Result<Poly, RingError> {
        let mut acc = Poly::zero();
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => return Ok(acc),
            };
            first = false;
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
        }
    }

    fn term(&mut self) -> Result<Poly, RingError> {
        let mut acc = self.factor()?;
        loop {
            let star = self.eat(b'*');
            match self.peek() {
                Some(b'0'..=b'9' | b'(' | b'p' | b'q' | b't' | b'x' | b'y') => acc = &acc * &self.factor()?,
                _ if star => return self.err("expected factor after '*'"),
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, RingError> {
        match self.peek() {
            Some(b'0'..=b'9') => Ok(normal_form([(Monomial::ONE, self.uint()?)])),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                if self.eat(b'^') {
                    let at = self.pos;
                    let e = self.exponent()?;
                    if e < 0 {
                        return Err(RingError::Syntax { pos: at, msg: "negative power of a sum" });
                    }
                    return Ok(inner.pow(e as u32));
                }
                Ok(inner)
            }
            Some(v @ (b'p' | b'q' | b't' | b'x' | b'y')) => {
                self.pos += 1;
                let mut at = self.pos;
                let e = if self.eat(b'^') {
                    at = self.pos;
                    self.exponent()?
                } else {
                    1
                };
                let mut m = Monomial::ONE;
                match v {
                    b'x' => m.x = e,
                    b'y' => m.y = e,
                    _ if e < 0 => return Err(RingError::Syntax { pos: at, msg: "p, q, t need nonnegative exponents" }),
                    b'p' => m.p = e as u32,
                    b'q' => m.q = e as u32,
                    _ => m.t = e as u32,
                }
                Ok(normal_form([(m, BigInt::one())]))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

impl FromStr for Poly {
    type Err = RingError;

    /// Accepts the canonical rendering plus implicit products and parentheses.
    fn from_str(s: &str) -> Result<Poly, RingError> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let out = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(out)
    }
}

pub fn parse_poly(s: &str) -> Result<Poly, RingError> {
    s.parse()
}

pub fn render_poly(f: &Poly) -> String {
    f.to_string()
}

/// `sign * p^p * q^q * t^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unit {
    pub sign: Sign,
    pub p: i32,
    pub q: i32,
    pub t: i32,
}

impl Unit {
    pub const ONE: Unit = Unit { sign: Sign::Plus, p: 0, q: 0, t: 0 };
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = [('p', self.p), ('q', self.q), ('t', self.t)]
            .iter()
            .filter(|(_, e)| *e != 0)
            .map(|&(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        let sign = if self.sign == Sign::Minus { "-" } else { "" };
        if parts.is_empty() {
            write!(f, "{sign}1")
        } else {
            write!(f, "{sign}{}", parts.join("*"))
        }
    }
}

fn check_bound(bound: i64) -> Result<i32, RingError> {
    if bound < 1 {
        return Err(RingError::InvalidBound(bound));
    }
    Ok(i32::try_from(bound).unwrap_or(i32::MAX).min(1 << 20))
}

/// Plain cross-multiplication in the ring: `f * m1 == s * g * m2` where the
/// unit's positive exponents go into `m2` and its negative ones into `m1`.
pub fn equals_mod_units(f: &Poly, g: &Poly, bound: i64) -> Result<Option<Unit>, RingError> {
    let b = check_bound(bound)?;
    for u in units_by_size(b) {
        let split = |e: i32| (e.min(0).unsigned_abs(), e.max(0) as u32);
        let ((p1, p2), (q1, q2), (t1, t2)) = (split(u.p), split(u.q), split(u.t));
        let lhs = f.mul_monomial(Monomial { p: p1, q: q1, t: t1, ..Monomial::ONE });
        let rhs = g.mul_monomial(Monomial { p: p2, q: q2, t: t2, ..Monomial::ONE }).scale(u.sign);
        if lhs == rhs {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

fn units_by_size(b: i32) -> Vec<Unit> {
    let mut out = Vec::new();
    for p in -b..=b {
        for q in -b..=b {
            for t in -b..=b {
                for sign in [Sign::Plus, Sign::Minus] {
                    out.push(Unit { sign, p, q, t });
                }
            }
        }
    }
    out.sort_by_key(|u| (u.p.abs() + u.q.abs() + u.t.abs(), u.q.abs(), u.p.abs(), u.sign, u.q < 0, u.p < 0, u.t < 0));
    out
}

/// Image in the ring with p, q, t inverted. There q(p - t) = 0 forces p = t
/// and the ring is free on {1, q} over Z[t^±1, (1-t)^-1, x^±1, y^±1], so an
/// element is a pair of Laurent polynomials keyed by (x, y, t).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct Localized {
    even: BTreeMap<(i32, i32, i64), BigInt>,
    odd: BTreeMap<(i32, i32, i64), BigInt>,
}

fn one_minus_t(a: &BTreeMap<(i32, i32, i64), BigInt>) -> BTreeMap<(i32, i32, i64), BigInt> {
    let mut out = a.clone();
    for (&(x, y, t), c) in a {
        let slot = out.entry((x, y, t + 1)).or_insert_with(BigInt::zero);
        *slot -= c;
        if slot.is_zero() {
            out.remove(&(x, y, t + 1));
        }
    }
    out
}

impl Localized {
    fn of(f: &Poly) -> Localized {
        let mut out = Localized::default();
        for (m, c) in f.terms() {
            let (side, key) = if m.q == 0 {
                (&mut out.even, (m.x, m.y, i64::from(m.p) + i64::from(m.t)))
            } else {
                (&mut out.odd, (m.x, m.y, i64::from(m.t)))
            };
            let slot = side.entry(key).or_insert_with(BigInt::zero);
            *slot += c;
            if slot.is_zero() {
                side.remove(&key);
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    fn times_q(&self) -> Localized {
        Localized { even: one_minus_t(&one_minus_t(&self.odd)), odd: self.even.clone() }
    }

    fn times_q_pow(&self, k: u32) -> Localized {
        (0..k).fold(self.clone(), |a, _| a.times_q())
    }

    fn min_t(&self) -> Option<i64> {
        self.even.keys().chain(self.odd.keys()).map(|k| k.2).min()
    }

    fn shifted(&self, k: i64, s: Sign) -> Localized {
        let map = |m: &BTreeMap<(i32, i32, i64), BigInt>| {
            m.iter().map(|(&(x, y, t), c)| ((x, y, t + k), if s == Sign::Minus { -c } else { c.clone() })).collect()
        };
        Localized { even: map(&self.even), odd: map(&self.odd) }
    }

    fn lead(&self) -> Option<&BigInt> {
        self.even.values().next().or_else(|| self.odd.values().next())
    }
}

/// Equality up to a unit `±p^a q^b t^c` with exponents in `[-bound, bound]`,
/// decided in the ring where p, q and t are invertible.
pub fn equals_mod_units_localized(f: &Poly, g: &Poly, bound: i64) -> Result<Option<Unit>, RingError> {
    let b = check_bound(bound)?;
    let (lf, lg) = (Localized::of(f), Localized::of(g));
    if lf.is_zero() || lg.is_zero() {
        return Ok((lf.is_zero() && lg.is_zero()).then_some(Unit::ONE));
    }
    let betas = std::iter::once(0).chain((1..=b).flat_map(|k| [k, -k]));
    for beta in betas {
        let fb = lf.times_q_pow((-beta).max(0) as u32);
        let gb = lg.times_q_pow(beta.max(0) as u32);
        let (Some(tf), Some(tg)) = (fb.min_t(), gb.min_t()) else {
            continue;
        };
        let k = tf - tg;
        if k.abs() > 2 * i64::from(b) {
            continue;
        }
        let sign = if fb.lead().map(Signed::is_negative) == gb.lead().map(Signed::is_negative) {
            Sign::Plus
        } else {
            Sign::Minus
        };
        if gb.shifted(k, sign) == fb {
            // p and t coincide here; report t first
            let k = k as i32;
            let t = k.clamp(-b, b);
            return Ok(Some(Unit { sign, p: k - t, q: beta, t }));
        }
    }
    Ok(None)
}
