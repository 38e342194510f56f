//! Sparse polynomials over `Q` in `x, y, z`, graded-lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::unipoly::UniPoly;
use crate::error::{Error, Result};
use crate::scalar::{int, Int, Rat};

pub const VARIABLES: [&str; 3] = ["x", "y", "z"];

/// Exponents of `x, y, z`. Ordered by total degree, then lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Variable index for `"x"`, `"y"` or `"z"`.
pub fn variable(name: &str) -> Result<usize> {
    VARIABLES.iter().position(|v| *v == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalPoly<T: Int> {
    /// No zero coefficients are stored.
    terms: BTreeMap<Monomial, Rat<T>>,
}

impl<T: Int> Default for RationalPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Int> RationalPoly<T> {
    pub fn zero() -> Self {
        RationalPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Rat<T>) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn monomial(c: Rat<T>, exps: [u32; 3]) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial(exps), c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(Rat::one(), e)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ([u32; 3], Rat<T>)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat<T>) {
        let sum = self.terms.get(&m).cloned().unwrap_or_else(Rat::zero) + c;
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat<T>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.degree_in(var) > 0
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        RationalPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rat<T>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone() * k.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e = [ma.0[0] + mb.0[0], ma.0[1] + mb.0[1], ma.0[2] + mb.0[2]];
                out.add_term(Monomial(e), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(Rat::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, point: &[Rat<T>; 3]) -> Rat<T> {
        self.terms.iter().fold(Rat::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (v, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t * v.clone();
                }
            }
            acc + t
        })
    }

    /// Formal partial derivative in variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.0;
            m2[var] -= 1;
            out.add_term(Monomial(m2), c.clone() * Rat::from_integer(int(i64::from(e))));
        }
        out
    }

    /// Partial derivative by variable name.
    pub fn derivative_by(&self, name: &str) -> Result<Self> {
        Ok(self.derivative(variable(name)?))
    }

    /// Replaces variable `var` by the polynomial `value`.
    pub fn substitute(&self, var: usize, value: &Self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut rest = m.0;
            let e = rest[var];
            rest[var] = 0;
            let term = Self::monomial(c.clone(), rest).mul(&value.pow(e));
            out = out.add(&term);
        }
        out
    }

    /// Sets `z = 1`.
    pub fn dehomogenize(&self) -> Self {
        self.substitute(2, &Self::constant(Rat::one()))
    }

    /// Multiplies each term by the power of `z` that brings it to degree `d`.
    /// Returns `None` if some term already exceeds `d`.
    pub fn homogenize(&self, d: u32) -> Option<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let deg = m.degree();
            if deg > d {
                return None;
            }
            let mut e = m.0;
            e[2] += d - deg;
            out.add_term(Monomial(e), c.clone());
        }
        Some(out)
    }

    /// Univariate view in `var` when that is the only variable present.
    pub fn to_univariate(&self, var: usize) -> Option<UniPoly<T>> {
        let mut coeffs = vec![Rat::zero(); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != var && e > 0) {
                return None;
            }
            coeffs[m.0[var] as usize] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    /// Parses expressions built from rational literals, `x`, `y`, `z`, `+`,
    /// `-`, `*`, `/` by a literal, `^` with a natural exponent, parentheses and
    /// implicit multiplication (`2x^2y`, `(x-z)z^2`).
    pub fn parse(src: &str) -> Result<Self> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let out = p.sum()?;
        if p.pos != p.tokens.len() {
            return Err(Error::PolyParse(format!("unexpected {:?} in {src:?}", p.tokens[p.pos])));
        }
        Ok(out)
    }
}

impl<T: Int> fmt::Display for RationalPoly<T> {
    /// Highest monomial first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono: Vec<String> =
                m.0.iter()
                    .zip(VARIABLES)
                    .filter(|(&e, _)| e > 0)
                    .map(|(&e, v)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
                    .collect();
            let mono = mono.join("*");
            if mono.is_empty() {
                f.write_str(&crate::json::rat_to_string(&mag))?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", crate::json::rat_to_string(&mag), mono)?;
            }
        }
        Ok(())
    }
}

impl<T: Int> fmt::Debug for RationalPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPoly({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    term: [u32; 3],
    coeff: String,
}

impl<T: Int> Serialize for RationalPoly<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(m, c)| TermJson { term: m.0, coeff: crate::json::rat_to_string(c) }))
    }
}

impl<'de, T: Int> Deserialize<'de> for RationalPoly<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<TermJson>::deserialize(d)?;
        let mut p = Self::zero();
        for t in raw {
            let c = crate::json::parse_rat(&t.coeff)
                .ok_or_else(|| serde::de::Error::custom(format!("bad coefficient {:?}", t.coeff)))?;
            p.add_term(Monomial(t.term), c);
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(String),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => {}
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                out.push(Token::Num(chars[start..=i].iter().collect()));
            }
            'x' | 'y' | 'z' => out.push(Token::Var(variable(&c.to_string())?)),
            '+' => out.push(Token::Plus),
            '-' | '\u{2212}' => out.push(Token::Minus),
            '*' => out.push(Token::Star),
            '/' => out.push(Token::Slash),
            '^' => out.push(Token::Caret),
            '(' => out.push(Token::Open),
            ')' => out.push(Token::Close),
            _ if c.is_alphabetic() => return Err(Error::UnknownVariable(c.to_string())),
            _ => return Err(Error::PolyParse(format!("unexpected character {c:?}"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn sum<T: Int>(&mut self) -> Result<RationalPoly<T>> {
        let mut acc = RationalPoly::zero();
        let mut sign = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Token::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.product()?;
            acc = if sign < 0 { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(Token::Plus) => sign = 1,
                Some(Token::Minus) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn product<T: Int>(&mut self) -> Result<RationalPoly<T>> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = d
                        .to_univariate(0)
                        .filter(|u| u.degree() == Some(0))
                        .map(|u| u.leading())
                        .ok_or_else(|| Error::PolyParse("division by a non-constant".into()))?;
                    acc = acc.scale(&(Rat::one() / c));
                }
                Some(Token::Num(_)) | Some(Token::Var(_)) | Some(Token::Open) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power<T: Int>(&mut self) -> Result<RationalPoly<T>> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Token::Num(s)) => {
                    let e: u32 = s.parse().map_err(|_| Error::PolyParse(format!("bad exponent {s}")))?;
                    return Ok(base.pow(e));
                }
                other => return Err(Error::PolyParse(format!("expected exponent, found {other:?}"))),
            }
        }
        Ok(base)
    }

    fn atom<T: Int>(&mut self) -> Result<RationalPoly<T>> {
        match self.next() {
            Some(Token::Num(s)) => {
                let v = T::parse_decimal(&s).ok_or_else(|| Error::PolyParse(format!("bad number {s}")))?;
                Ok(RationalPoly::constant(Rat::from_integer(v)))
            }
            Some(Token::Var(i)) => Ok(RationalPoly::var(i)),
            Some(Token::Open) => {
                let inner = self.sum()?;
                match self.next() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err(Error::PolyParse("unbalanced parenthesis".into())),
                }
            }
            Some(Token::Minus) => Ok(self.power::<T>()?.neg()),
            other => Err(Error::PolyParse(format!("unexpected {other:?}"))),
        }
    }
}
