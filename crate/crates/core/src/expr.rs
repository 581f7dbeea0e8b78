//! Surface syntax for scalars and algebra elements.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' '-'? integer)?
//! atom   := 'q' | 'x1' | 'x0' | 'xm1' | integer | '(' expr ')'
//! ```
//!
//! Products keep their factor order. A divisor must evaluate to a nonzero
//! scalar, and only scalars may carry negative exponents.

use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgElem, BasisIndex, Generator};
use crate::qfield::{Int, RatFunc};

const MAX_DEPTH: usize = 64;
const MAX_EXPONENT: i64 = 4096;
const MAX_SCALAR_DEGREE: u64 = 1 << 14;
const MAX_ALGEBRA_DEGREE: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {pos}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected {
        expected: &'static str,
        found: String,
    },
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEnd(&'static str),
    #[error("negative exponent on a non-scalar")]
    NegativeExponent,
    #[error("divisor is not a scalar")]
    NonScalarDivisor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent too large")]
    ExponentTooLarge,
    #[error("expression nested too deeply")]
    TooDeep,
    #[error("expression is not a scalar")]
    NotScalar,
}

fn err<T>(pos: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
    Err(ParseError { pos, kind })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(Int),
    Q,
    Gen(Generator),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "{n}"),
            Tok::Q => f.write_str("q"),
            Tok::Gen(g) => f.write_str(g.name()),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        let start = pos;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                pos += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'q' => Tok::Q,
            b'0'..=b'9' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let n = src[start..pos].parse().expect("ascii digits");
                out.push((start, Tok::Num(n)));
                continue;
            }
            b'x' => {
                let rest = &src[pos + 1..];
                let (g, len) = if rest.starts_with("m1") {
                    (Generator::Xm1, 3)
                } else if rest.starts_with('1') {
                    (Generator::X1, 2)
                } else if rest.starts_with('0') {
                    (Generator::X0, 2)
                } else {
                    return err(pos, ParseErrorKind::UnexpectedChar('x'));
                };
                pos += len;
                out.push((start, Tok::Gen(g)));
                continue;
            }
            _ => {
                let ch = src[pos..].chars().next().expect("in bounds");
                return err(pos, ParseErrorKind::UnexpectedChar(ch));
            }
        };
        pos += 1;
        out.push((start, tok));
    }
    Ok(out)
}

/// Parsed expression, before evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprTree {
    Num(Int),
    Q,
    Gen(Generator),
    Neg(Box<ExprTree>),
    Add(Box<ExprTree>, Box<ExprTree>),
    Sub(Box<ExprTree>, Box<ExprTree>),
    Mul(Box<ExprTree>, Box<ExprTree>),
    /// Divisor position is kept for error reporting.
    Div(Box<ExprTree>, Box<ExprTree>, usize),
    Pow(Box<ExprTree>, i64, usize),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn unexpected<T>(&self, expected: &'static str) -> Result<T, ParseError> {
        match self.toks.get(self.at) {
            Some((p, t)) => err(
                *p,
                ParseErrorKind::Unexpected {
                    expected,
                    found: t.to_string(),
                },
            ),
            None => err(self.end, ParseErrorKind::UnexpectedEnd(expected)),
        }
    }

    fn expr(&mut self) -> Result<ExprTree, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return err(self.pos(), ParseErrorKind::TooDeep);
        }
        let mut lhs = match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                ExprTree::Neg(Box::new(self.term()?))
            }
            Some(Tok::Plus) => {
                self.at += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    lhs = ExprTree::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    lhs = ExprTree::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ExprTree, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    lhs = ExprTree::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    let pos = self.pos();
                    lhs = ExprTree::Div(Box::new(lhs), Box::new(self.factor()?), pos);
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<ExprTree, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let pos = self.pos();
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            true
        } else {
            false
        };
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return self.unexpected("integer exponent");
        };
        self.at += 1;
        let e = match n.to_i64() {
            Some(v) if v <= MAX_EXPONENT => v,
            _ => return err(pos, ParseErrorKind::ExponentTooLarge),
        };
        Ok(ExprTree::Pow(Box::new(base), if neg { -e } else { e }, pos))
    }

    fn atom(&mut self) -> Result<ExprTree, ParseError> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.unexpected("operand"),
        };
        match tok {
            Tok::Num(n) => {
                self.at += 1;
                Ok(ExprTree::Num(n))
            }
            Tok::Q => {
                self.at += 1;
                Ok(ExprTree::Q)
            }
            Tok::Gen(g) => {
                self.at += 1;
                Ok(ExprTree::Gen(g))
            }
            Tok::LParen => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.unexpected("')'");
                }
                self.at += 1;
                Ok(inner)
            }
            _ => self.unexpected("operand"),
        }
    }
}

pub fn parse_tree(text: &str) -> Result<ExprTree, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        depth: 0,
    };
    let tree = p.expr()?;
    if p.at < p.toks.len() {
        return p.unexpected("end of input");
    }
    Ok(tree)
}

/// Scalar degree bound used to refuse powers that would not fit in memory.
fn scalar_size(c: &RatFunc) -> u64 {
    let n = c.numerator().degree().unwrap_or(0) as u64;
    let d = c.denominator().degree().unwrap_or(0) as u64;
    n.max(d).max(1)
}

impl ExprTree {
    pub fn eval(&self) -> Result<AlgElem, ParseError> {
        Ok(match self {
            ExprTree::Num(n) => AlgElem::scalar(RatFunc::from_integer(n.clone())),
            ExprTree::Q => AlgElem::scalar(RatFunc::q()),
            ExprTree::Gen(g) => g.element(),
            ExprTree::Neg(a) => a.eval()?.neg(),
            ExprTree::Add(a, b) => a.eval()?.add(&b.eval()?),
            ExprTree::Sub(a, b) => a.eval()?.sub(&b.eval()?),
            ExprTree::Mul(a, b) => a.eval()?.mul(&b.eval()?),
            ExprTree::Div(a, b, pos) => {
                let num = a.eval()?;
                let Some(d) = b.eval()?.as_scalar() else {
                    return err(*pos, ParseErrorKind::NonScalarDivisor);
                };
                match d.inv() {
                    Ok(inv) => num.scale(&inv),
                    Err(_) => return err(*pos, ParseErrorKind::DivisionByZero),
                }
            }
            ExprTree::Pow(a, e, pos) => {
                let base = a.eval()?;
                if let Some(c) = base.as_scalar() {
                    if scalar_size(&c) * e.unsigned_abs() > MAX_SCALAR_DEGREE {
                        return err(*pos, ParseErrorKind::ExponentTooLarge);
                    }
                    match c.pow(*e) {
                        Ok(v) => AlgElem::scalar(v),
                        Err(_) => return err(*pos, ParseErrorKind::DivisionByZero),
                    }
                } else {
                    if *e < 0 {
                        return err(*pos, ParseErrorKind::NegativeExponent);
                    }
                    let (mi, mj) = base.extent();
                    if (mi + mj) as u64 * *e as u64 > MAX_ALGEBRA_DEGREE {
                        return err(*pos, ParseErrorKind::ExponentTooLarge);
                    }
                    base.pow(*e as u32)
                }
            }
        })
    }
}

/// Parse and normalize an algebra expression.
pub fn parse(text: &str) -> Result<AlgElem, ParseError> {
    parse_tree(text)?.eval()
}

/// Parse an expression that must denote an element of `Q(q)`.
pub fn parse_scalar(text: &str) -> Result<RatFunc, ParseError> {
    let tree = parse_tree(text)?;
    tree.eval()?.as_scalar().ok_or(ParseError {
        pos: 0,
        kind: ParseErrorKind::NotScalar,
    })
}

pub fn render_monomial(idx: BasisIndex) -> String {
    let mut parts = Vec::new();
    match idx.i {
        0 => {}
        1 => parts.push("x0".to_string()),
        i => parts.push(format!("x0^{i}")),
    }
    let g = if idx.j > 0 { "x1" } else { "xm1" };
    match idx.j.unsigned_abs() {
        0 => {}
        1 => parts.push(g.to_string()),
        j => parts.push(format!("{g}^{j}")),
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn positive_integer(c: &RatFunc) -> bool {
    c.denominator().is_one()
        && c.numerator().degree() == Some(0)
        && !c.numerator().lead().is_negative()
}

/// Canonical text: terms by descending basis index, e.g. `(1/q^2)*x0^2 + (1/q)*x0`.
pub fn render(a: &AlgElem) -> String {
    if a.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = a
        .terms()
        .rev()
        .map(|(idx, c)| {
            let mono = render_monomial(*idx);
            let coeff = if positive_integer(c) {
                c.render()
            } else {
                format!("({c})")
            };
            if *idx == BasisIndex::ONE {
                coeff
            } else if c.is_one() {
                mono
            } else {
                format!("{coeff}*{mono}")
            }
        })
        .collect();
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: u32, j: i32) -> BasisIndex {
        BasisIndex::new(i, j)
    }

    #[test]
    fn relation_from_text() {
        assert_eq!(
            parse("x1*x0").unwrap(),
            AlgElem::term(e(1, 1), RatFunc::q_power(-2))
        );
        assert_eq!(parse("1").unwrap(), AlgElem::one());
        assert!(parse("q^2*x0*xm1 - xm1*x0").unwrap().is_zero());
    }

    #[test]
    fn render_examples() {
        assert_eq!(render(&AlgElem::basis(e(1, 1))), "x0*x1");
        assert_eq!(
            render(&AlgElem::term(e(1, 0), RatFunc::q_power(-1))),
            "(1/q)*x0"
        );
        assert_eq!(render(&AlgElem::zero()), "0");
        assert_eq!(render(&parse("x1*xm1").unwrap()), "(1/q^2)*x0^2 + (1/q)*x0");
        assert_eq!(render(&parse("3 - 2*xm1^2").unwrap()), "3 + (-2)*xm1^2");
    }

    #[test]
    fn order_matters() {
        let a = parse("x1*x0").unwrap();
        let b = parse("x0*x1").unwrap();
        assert_ne!(a, b);
        assert_eq!(a, b.scale(&RatFunc::q_power(-2)));
    }

    #[test]
    fn scalars() {
        assert_eq!(
            parse_scalar("(-q^2+1)/(q^3)").unwrap().render(),
            "(-q^2+1)/q^3"
        );
        assert_eq!(parse_scalar("q^-2").unwrap(), RatFunc::q_power(-2));
        assert_eq!(
            parse_scalar("1/2").unwrap(),
            RatFunc::from_ratio(1, 2).unwrap()
        );
        assert_eq!(
            parse_scalar("x0").unwrap_err().kind,
            ParseErrorKind::NotScalar
        );
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("x0 + * x1").unwrap_err();
        assert_eq!(e.pos, 5);
        assert_eq!(
            parse("x0^-1").unwrap_err().kind,
            ParseErrorKind::NegativeExponent
        );
        assert_eq!(
            parse("x0/x1").unwrap_err().kind,
            ParseErrorKind::NonScalarDivisor
        );
        assert_eq!(
            parse("x0/(q-q)").unwrap_err().kind,
            ParseErrorKind::DivisionByZero
        );
        assert_eq!(
            parse("x2").unwrap_err().kind,
            ParseErrorKind::UnexpectedChar('x')
        );
        assert!(matches!(
            parse("(x0").unwrap_err().kind,
            ParseErrorKind::UnexpectedEnd(_)
        ));
        assert_eq!(
            parse(&"(".repeat(100)).unwrap_err().kind,
            ParseErrorKind::TooDeep
        );
    }
}
