//! Text forms: one expression grammar read into series, residue-field
//! elements, or dual numbers.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' ['-'] int)?
//! atom  := int | 'th' int | 't' ['^' exp] | 'eps' | 'O(' 't^' exp ')' | '(' expr ')'
//! exp   := ['-'] int ['/' int] | '[' rat (';' rat)* ']'
//! ```
//!
//! A bare exponent is read in the least significant coordinate, so `t^3`
//! means `t^[0;3]` in a rank-2 group and a plain `t` is `t^1`.  The exponent
//! after `t^` is read greedily: `t^2/3` is `t^(2/3)`.  Division by a series
//! is only allowed when the divisor is a single term.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::coeffield::{DualNumber, KElem};
use crate::error::{Error, Result};
use crate::hahn::HahnSeries;
use crate::ordgroup::GroupElem;
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Sym(usize),
    T,
    Eps,
    BigO,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    End,
}

fn perr(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(s[start..i].parse().expect("digits")), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word = &s[start..i];
                let tok = match word {
                    "t" => Tok::T,
                    "eps" => Tok::Eps,
                    "O" => Tok::BigO,
                    w if w.starts_with("th") && w.len() > 2 && w[2..].bytes().all(|b| b.is_ascii_digit()) => {
                        let n: usize = w[2..].parse().map_err(|_| perr(start, "symbol index too large"))?;
                        if n == 0 {
                            return Err(perr(start, "symbols are numbered from th1"));
                        }
                        Tok::Sym(n)
                    }
                    w => return Err(perr(start, format!("unknown identifier `{w}`"))),
                };
                out.push((tok, start));
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b';' => Tok::Semi,
            _ => {
                let ch = s[start..].chars().next().unwrap_or('?');
                return Err(perr(start, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, s.len()));
    Ok(out)
}

/// A bare (rank-free) or bracketed exponent as written.
#[derive(Clone, Debug)]
enum Exp {
    Bare(Q),
    Bracket(Vec<Q>),
}

#[derive(Clone, Debug)]
enum Node {
    Int(BigInt),
    Sym(usize),
    TPow(Exp),
    BigO(Exp),
    Eps,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug)]
struct Expr {
    node: Node,
    offset: usize,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(perr(self.offset(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let offset = self.offset();
            let node = match self.peek() {
                Tok::Plus => {
                    self.bump();
                    Node::Add(Box::new(lhs), Box::new(self.term()?))
                }
                Tok::Minus => {
                    self.bump();
                    Node::Sub(Box::new(lhs), Box::new(self.term()?))
                }
                _ => return Ok(lhs),
            };
            lhs = Expr { node, offset };
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let offset = self.offset();
            let node = match self.peek() {
                Tok::Star => {
                    self.bump();
                    Node::Mul(Box::new(lhs), Box::new(self.unary()?))
                }
                Tok::Slash => {
                    self.bump();
                    Node::Div(Box::new(lhs), Box::new(self.unary()?))
                }
                _ => return Ok(lhs),
            };
            lhs = Expr { node, offset };
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            let offset = self.offset();
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr { node: Node::Neg(Box::new(inner)), offset });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let offset = self.offset();
        self.bump();
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let at = self.offset();
        let Tok::Int(n) = self.bump() else {
            return Err(perr(at, "expected an integer exponent"));
        };
        let n = n.to_i64().filter(|n| *n <= 10_000).ok_or_else(|| perr(at, "exponent too large"))?;
        let n = if neg { -n } else { n };
        Ok(Expr { node: Node::Pow(Box::new(base), n), offset })
    }

    fn rational(&mut self) -> Result<Q> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let at = self.offset();
        let Tok::Int(n) = self.bump() else {
            return Err(perr(at, "expected a number"));
        };
        let mut r = Q::from_integer(n);
        if *self.peek() == Tok::Slash && matches!(self.peek_at(1), Tok::Int(_)) {
            self.bump();
            let at = self.offset();
            let Tok::Int(d) = self.bump() else { unreachable!() };
            if d.is_zero() {
                return Err(perr(at, "zero denominator"));
            }
            r /= Q::from_integer(d);
        }
        Ok(if neg { -r } else { r })
    }

    fn exponent(&mut self) -> Result<Exp> {
        if *self.peek() == Tok::LBracket {
            self.bump();
            let mut coords = vec![self.rational()?];
            while *self.peek() == Tok::Semi {
                self.bump();
                coords.push(self.rational()?);
            }
            self.expect(Tok::RBracket, "`]`")?;
            Ok(Exp::Bracket(coords))
        } else {
            Ok(Exp::Bare(self.rational()?))
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let offset = self.offset();
        let node = match self.bump() {
            Tok::Int(n) => Node::Int(n),
            Tok::Sym(k) => Node::Sym(k),
            Tok::Eps => Node::Eps,
            Tok::T => {
                if *self.peek() == Tok::Caret {
                    self.bump();
                    Node::TPow(self.exponent()?)
                } else {
                    Node::TPow(Exp::Bare(Q::one()))
                }
            }
            Tok::BigO => {
                self.expect(Tok::LParen, "`(` after O")?;
                self.expect(Tok::T, "`t` inside O(...)")?;
                self.expect(Tok::Caret, "`^` inside O(...)")?;
                let e = self.exponent()?;
                self.expect(Tok::RParen, "`)`")?;
                Node::BigO(e)
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(inner);
            }
            Tok::End => return Err(perr(offset, "unexpected end of input")),
            other => return Err(perr(offset, format!("unexpected token {other:?}"))),
        };
        Ok(Expr { node, offset })
    }
}

fn parse_expr(s: &str) -> Result<Expr> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(perr(p.offset(), "trailing input"));
    }
    Ok(e)
}

fn exp_to_elem(e: &Exp, rank: usize, offset: usize) -> Result<GroupElem> {
    match e {
        Exp::Bare(r) => {
            let mut coords = vec![Q::zero(); rank];
            coords[rank - 1] = r.clone();
            Ok(GroupElem::new(coords))
        }
        Exp::Bracket(c) if c.len() == rank => Ok(GroupElem::new(c.clone())),
        Exp::Bracket(c) => Err(perr(offset, format!("exponent has {} coordinates, expected {rank}", c.len()))),
    }
}

fn eval_series(e: &Expr, rank: usize) -> Result<HahnSeries> {
    let bin = |a: &Expr, b: &Expr| -> Result<(HahnSeries, HahnSeries)> { Ok((eval_series(a, rank)?, eval_series(b, rank)?)) };
    Ok(match &e.node {
        Node::Int(n) => HahnSeries::constant(KElem::from_rational(Q::from_integer(n.clone())), rank),
        Node::Sym(k) => HahnSeries::constant(KElem::symbol(*k), rank),
        Node::TPow(x) => HahnSeries::t_pow(exp_to_elem(x, rank, e.offset)?),
        Node::BigO(x) => HahnSeries::big_o(exp_to_elem(x, rank, e.offset)?),
        Node::Eps => return Err(perr(e.offset, "`eps` is not allowed in a series")),
        Node::Add(a, b) => {
            let (x, y) = bin(a, b)?;
            &x + &y
        }
        Node::Sub(a, b) => {
            let (x, y) = bin(a, b)?;
            &x - &y
        }
        Node::Mul(a, b) => {
            let (x, y) = bin(a, b)?;
            &x * &y
        }
        Node::Div(a, b) => {
            let (x, y) = bin(a, b)?;
            &x * &series_inverse(&y, e.offset)?
        }
        Node::Neg(a) => -&eval_series(a, rank)?,
        Node::Pow(a, n) => {
            let x = eval_series(a, rank)?;
            let base = if *n < 0 { series_inverse(&x, e.offset)? } else { x };
            base.pow(n.unsigned_abs() as u32)
        }
    })
}

fn series_inverse(y: &HahnSeries, offset: usize) -> Result<HahnSeries> {
    if y.num_terms() != 1 {
        return Err(perr(offset, format!("can only divide by a single term, not `{y}`")));
    }
    y.inverse_monomial()
}

fn eval_k(e: &Expr) -> Result<KElem> {
    Ok(match &e.node {
        Node::Int(n) => KElem::from_rational(Q::from_integer(n.clone())),
        Node::Sym(k) => KElem::symbol(*k),
        Node::TPow(_) | Node::BigO(_) => return Err(perr(e.offset, "`t` is not allowed in a residue-field element")),
        Node::Eps => return Err(perr(e.offset, "`eps` is not allowed in a residue-field element")),
        Node::Add(a, b) => &eval_k(a)? + &eval_k(b)?,
        Node::Sub(a, b) => &eval_k(a)? - &eval_k(b)?,
        Node::Mul(a, b) => &eval_k(a)? * &eval_k(b)?,
        Node::Div(a, b) => eval_k(a)?.checked_div(&eval_k(b)?).map_err(|_| perr(e.offset, "division by zero"))?,
        Node::Neg(a) => -&eval_k(a)?,
        Node::Pow(a, n) => eval_k(a)?.pow(*n).map_err(|_| perr(e.offset, "zero to a negative power"))?,
    })
}

fn eval_dual(e: &Expr) -> Result<DualNumber> {
    Ok(match &e.node {
        Node::Int(_) | Node::Sym(_) => DualNumber::real(eval_k(e)?),
        Node::Eps => DualNumber::eps(),
        Node::TPow(_) | Node::BigO(_) => return Err(perr(e.offset, "`t` is not allowed in a dual number")),
        Node::Add(a, b) => &eval_dual(a)? + &eval_dual(b)?,
        Node::Sub(a, b) => &eval_dual(a)? - &eval_dual(b)?,
        Node::Mul(a, b) => &eval_dual(a)? * &eval_dual(b)?,
        Node::Div(a, b) => &eval_dual(a)? * &eval_dual(b)?.invert()?,
        Node::Neg(a) => -&eval_dual(a)?,
        Node::Pow(a, n) => {
            let x = eval_dual(a)?;
            let base = if *n < 0 { x.invert()? } else { x };
            let mut out = DualNumber::one();
            for _ in 0..n.unsigned_abs() {
                out = &out * &base;
            }
            out
        }
    })
}

/// Reads a Hahn series with exponents of the given rank.
pub fn parse_series(s: &str, rank: usize) -> Result<HahnSeries> {
    if rank == 0 {
        return Err(Error::Structural("rank must be at least 1".into()));
    }
    eval_series(&parse_expr(s)?, rank)
}

/// Reads an element of k = ℚ(th1, …).
pub fn parse_kelem(s: &str) -> Result<KElem> {
    eval_k(&parse_expr(s)?)
}

/// Reads an element of k[ε], e.g. `1 + (-3)*eps`.
pub fn parse_dual(s: &str) -> Result<DualNumber> {
    eval_dual(&parse_expr(s)?)
}

/// Reads a group element: `[j;i]` or, for the least significant coordinate, a bare rational.
pub fn parse_group_elem(s: &str, rank: usize) -> Result<GroupElem> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0 };
    let offset = p.offset();
    let e = p.exponent()?;
    if *p.peek() != Tok::End {
        return Err(perr(p.offset(), "trailing input"));
    }
    exp_to_elem(&e, rank, offset)
}

/// Splits a comma-separated list at top level (outside brackets and parentheses).
pub fn split_top_level(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

/// Reads a comma-separated tuple of series; parse offsets refer to the whole string.
pub fn parse_series_list(s: &str, rank: usize) -> Result<Vec<HahnSeries>> {
    split_top_level(s)
        .into_iter()
        .map(|(start, part)| {
            parse_series(part, rank).map_err(|e| match e {
                Error::Parse { offset, message } => Error::Parse { offset: offset + start, message },
                other => other,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn reads_the_documented_example() {
        let s = "3/2*t^[0;2] + th1*t^[1;0] + O(t^[2;0])";
        let x = parse_series(s, 2).unwrap();
        assert_eq!(x.num_terms(), 2);
        assert_eq!(x.precision(), Some(&GroupElem::from_ints(&[2, 0])));
        assert_eq!(x.to_string(), s);
    }

    #[test]
    fn bare_exponents_are_least_significant() {
        let x = parse_series("1 + t", 2).unwrap();
        assert_eq!(x.terms()[1].0, GroupElem::from_ints(&[0, 1]));
        let y = parse_series("t^-3", 2).unwrap();
        assert_eq!(y.terms()[0].0, GroupElem::from_ints(&[0, -3]));
    }

    #[test]
    fn rational_exponent_is_greedy() {
        let x = parse_series("t^2/3", 1).unwrap();
        assert_eq!(x.terms()[0].0, GroupElem::new(vec![q(2, 3)]));
        let y = parse_series("t^2/th1", 1).unwrap();
        assert_eq!(y.terms()[0].1, KElem::symbol(1).inv().unwrap());
    }

    #[test]
    fn division_by_monomials_only() {
        assert!(parse_series("t^2/t", 1).unwrap().definitely_equal(&parse_series("t", 1).unwrap()));
        assert!(matches!(parse_series("1/(1 + t)", 1), Err(Error::Parse { offset: 1, .. })));
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(parse_series("1 + ?", 1), Err(Error::Parse { offset: 4, .. })));
        assert!(matches!(parse_series("t^[1;2]", 1), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(parse_series("(1 + t", 1), Err(Error::Parse { offset: 6, .. })));
        assert!(matches!(parse_series_list("t, 1 +", 1), Err(Error::Parse { offset: 6, .. })));
    }

    #[test]
    fn dual_and_k_forms() {
        let d = parse_dual("1 + (-3)*eps").unwrap();
        assert_eq!(d.to_string(), "1 + (-3)*eps");
        assert_eq!(parse_dual("0 + 1*eps").unwrap(), DualNumber::eps());
        let k = parse_kelem("(th1^2 - 1)/(th1 - 1)").unwrap();
        assert_eq!(k.to_string(), "th1 + 1");
    }

    #[test]
    fn group_elements() {
        assert_eq!(parse_group_elem("[1;-2]", 2).unwrap(), GroupElem::from_ints(&[1, -2]));
        assert_eq!(parse_group_elem("5", 2).unwrap(), GroupElem::from_ints(&[0, 5]));
        assert_eq!(parse_group_elem("-1/2", 1).unwrap(), GroupElem::new(vec![q(-1, 2)]));
    }
}
