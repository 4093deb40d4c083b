//! Text grammar for polynomials, forms and vector fields.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' atom)*          integer exponent, or wedge of forms
//! atom   := integer | 'x'N | 'dx'N | 'd/dx'N | '(' expr ')'
//! ```
//!
//! Division is only by nonzero constants; `2/5` is therefore a rational
//! literal. The variable count is the highest index mentioned plus one unless
//! an explicit count is supplied.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::extcalc::{KForm, PolyVectorField};
use crate::poly::{Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, "; expected {}", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// A parsed value of whichever kind the text denotes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expression {
    Poly(Poly),
    Form(KForm),
    Field(PolyVectorField),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Dx(usize),
    Partial(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number {n}"),
            Tok::Var(i) => format!("x{i}"),
            Tok::Dx(i) => format!("dx{i}"),
            Tok::Partial(i) => format!("d/dx{i}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn err(pos: Pos, message: impl Into<String>, expected: &[&str]) -> ParseError {
    ParseError {
        line: pos.line,
        column: pos.column,
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let index_after = |start: usize, pos: Pos| -> Result<(usize, usize), ParseError> {
        let mut j = start;
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
        if j == start {
            return Err(err(pos, "missing variable index", &["digit"]));
        }
        let text: String = chars[start..j].iter().collect();
        let idx = text
            .parse::<usize>()
            .map_err(|_| err(pos, format!("variable index {text} too large"), &[]))?;
        Ok((idx, j))
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let starts = |s: &str| chars[i..].iter().take(s.len()).copied().eq(s.chars());
        let (tok, next) = if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            (Tok::Int(text.parse().expect("digits")), j)
        } else if starts("d/dx") {
            let (k, j) = index_after(i + 4, pos)?;
            (Tok::Partial(k), j)
        } else if starts("dx") {
            let (k, j) = index_after(i + 2, pos)?;
            (Tok::Dx(k), j)
        } else if c == 'x' {
            let (k, j) = index_after(i + 1, pos)?;
            (Tok::Var(k), j)
        } else {
            let t = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    return Err(err(
                        pos,
                        format!("unexpected character {c:?}"),
                        &["number", "variable", "operator", "'('", "')'"],
                    ))
                }
            };
            (t, i + 1)
        };
        out.push((tok, pos));
        col += next - i;
        i = next;
    }
    out.push((Tok::End, Pos { line, column: col }));
    Ok(out)
}

#[derive(Debug)]
enum Ast {
    Int(BigInt),
    Var(usize),
    Dx(usize),
    Partial(usize),
    Neg(Box<Ast>),
    Bin(char, Box<Ast>, Box<Ast>, Pos),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

const OPERAND: &[&str] = &["number", "variable", "dxN", "d/dxN", "'('", "'-'"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => '+',
                Tok::Minus => '-',
                _ => return Ok(lhs),
            };
            let (_, pos) = self.bump();
            let rhs = self.term()?;
            lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs), pos);
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => '*',
                Tok::Slash => '/',
                _ => return Ok(lhs),
            };
            let (_, pos) = self.bump();
            let rhs = self.unary()?;
            lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs), pos);
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.atom()?;
        while *self.peek() == Tok::Caret {
            let (_, pos) = self.bump();
            let rhs = self.atom()?;
            lhs = Ast::Bin('^', Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(n) => Ok(Ast::Int(n)),
            Tok::Var(i) => Ok(Ast::Var(i)),
            Tok::Dx(i) => Ok(Ast::Dx(i)),
            Tok::Partial(i) => Ok(Ast::Partial(i)),
            Tok::LParen => {
                let e = self.expr()?;
                let (close, cpos) = self.bump();
                if close != Tok::RParen {
                    return Err(err(cpos, format!("unexpected {}", close.describe()), &["')'", "operator"]));
                }
                Ok(e)
            }
            Tok::End => Err(err(pos, "unexpected end of input", OPERAND)),
            other => Err(err(pos, format!("unexpected {}", other.describe()), OPERAND)),
        }
    }
}

fn parse_ast(src: &str) -> Result<Ast, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0 };
    let ast = p.expr()?;
    let (tok, pos) = p.bump();
    if tok != Tok::End {
        return Err(err(pos, format!("unexpected {}", tok.describe()), &["operator", "end of input"]));
    }
    Ok(ast)
}

fn max_index(ast: &Ast) -> Option<usize> {
    match ast {
        Ast::Int(_) => None,
        Ast::Var(i) | Ast::Dx(i) | Ast::Partial(i) => Some(*i),
        Ast::Neg(a) => max_index(a),
        Ast::Bin(_, a, b, _) => max_index(a).max(max_index(b)),
    }
}

/// Highest variable index mentioned in `src`, if any.
pub fn max_variable_index(src: &str) -> Result<Option<usize>, ParseError> {
    Ok(max_index(&parse_ast(src)?))
}

/// Variable count shared by several sources: the explicit count if given
/// (an error if some index does not fit), otherwise highest index plus one.
pub fn infer_nvars(srcs: &[&str], nvars: Option<usize>) -> Result<usize, ParseError> {
    let mut top: Option<usize> = None;
    for s in srcs {
        top = top.max(max_variable_index(s)?);
    }
    let needed = top.map_or(0, |t| t + 1);
    match nvars {
        Some(n) if n < needed => Err(err(
            Pos { line: 1, column: 1 },
            format!("index {} exceeds the declared {} variables", needed - 1, n),
            &[],
        )),
        Some(n) => Ok(n),
        None => Ok(needed.max(1)),
    }
}

fn eval(ast: &Ast, n: usize) -> Result<Expression, ParseError> {
    use Expression as E;
    Ok(match ast {
        Ast::Int(k) => E::Poly(Poly::constant(Rational::from_integer(k.clone()), n)),
        Ast::Var(i) => E::Poly(Poly::var(*i, n)),
        Ast::Dx(i) => E::Form(KForm::dx(*i, n)),
        Ast::Partial(i) => E::Field(PolyVectorField::partial(*i, n)),
        Ast::Neg(a) => match eval(a, n)? {
            E::Poly(p) => E::Poly(-p),
            E::Form(f) => E::Form(-&f),
            E::Field(v) => E::Field(-&v),
        },
        Ast::Bin(op, a, b, pos) => {
            let pos = *pos;
            let (l, r) = (eval(a, n)?, eval(b, n)?);
            match (op, l, r) {
                ('+', E::Poly(x), E::Poly(y)) => E::Poly(x + y),
                ('-', E::Poly(x), E::Poly(y)) => E::Poly(x - y),
                ('+' | '-', E::Form(x), E::Form(y)) => {
                    if x.degree() != y.degree() && !x.is_zero() && !y.is_zero() {
                        return Err(err(
                            pos,
                            format!("cannot add forms of degree {} and {}", x.degree(), y.degree()),
                            &[],
                        ));
                    }
                    E::Form(if *op == '+' { &x + &y } else { &x - &y })
                }
                ('+', E::Field(x), E::Field(y)) => E::Field(&x + &y),
                ('-', E::Field(x), E::Field(y)) => E::Field(&x - &y),
                ('*', E::Poly(x), E::Poly(y)) => E::Poly(x * y),
                ('*', E::Poly(p), E::Form(f)) | ('*', E::Form(f), E::Poly(p)) => E::Form(f.mul_poly(&p)),
                ('*', E::Poly(p), E::Field(v)) | ('*', E::Field(v), E::Poly(p)) => E::Field(v.mul_poly(&p)),
                ('/', x, E::Poly(y)) => {
                    if !y.is_constant() || y.is_zero() {
                        return Err(err(pos, "division is only by a nonzero constant", &[]));
                    }
                    let inv = y.constant_term().recip();
                    match x {
                        E::Poly(p) => E::Poly(p.scale(&inv)),
                        E::Form(f) => E::Form(f.scale(&inv)),
                        E::Field(v) => E::Field(v.scale(&inv)),
                    }
                }
                ('^', E::Poly(p), E::Poly(e)) => {
                    let c = e.constant_term();
                    let exp = (e.is_constant() && c.is_integer())
                        .then(|| c.to_integer().to_u32())
                        .flatten()
                        .ok_or_else(|| err(pos, "exponent must be a non-negative integer", &["integer"]))?;
                    E::Poly(p.pow(exp))
                }
                ('^', E::Form(x), E::Form(y)) => E::Form(x.wedge(&y)),
                (op, l, r) => {
                    let kind = |e: &E| match e {
                        E::Poly(_) => "polynomial",
                        E::Form(_) => "form",
                        E::Field(_) => "vector field",
                    };
                    return Err(err(pos, format!("cannot apply '{op}' to {} and {}", kind(&l), kind(&r)), &[]));
                }
            }
        }
    })
}

/// Parses any expression.
pub fn parse_expression(src: &str, nvars: Option<usize>) -> Result<Expression, ParseError> {
    let ast = parse_ast(src)?;
    let n = infer_nvars(&[src], nvars)?;
    eval(&ast, n)
}

fn kind_error(expected: &str, found: &Expression) -> ParseError {
    let found = match found {
        Expression::Poly(_) => "a polynomial",
        Expression::Form(_) => "a differential form",
        Expression::Field(_) => "a vector field",
    };
    err(Pos { line: 1, column: 1 }, format!("expression is {found}"), &[expected])
}

pub fn parse_poly(src: &str, nvars: Option<usize>) -> Result<Poly, ParseError> {
    match parse_expression(src, nvars)? {
        Expression::Poly(p) => Ok(p),
        other => Err(kind_error("polynomial", &other)),
    }
}

/// Parses a form; a bare polynomial is read as a 0-form.
pub fn parse_form(src: &str, nvars: Option<usize>) -> Result<KForm, ParseError> {
    match parse_expression(src, nvars)? {
        Expression::Form(f) => Ok(f),
        Expression::Poly(p) if p.is_zero() => Ok(KForm::zero(0, p.nvars())),
        Expression::Poly(p) => Ok(KForm::function(p)),
        other => Err(kind_error("differential form", &other)),
    }
}

/// Parses a vector field; `0` is the zero field.
pub fn parse_field(src: &str, nvars: Option<usize>) -> Result<PolyVectorField, ParseError> {
    match parse_expression(src, nvars)? {
        Expression::Field(v) => Ok(v),
        Expression::Poly(p) if p.is_zero() => Ok(PolyVectorField::zero(p.nvars())),
        other => Err(kind_error("vector field", &other)),
    }
}

/// Splits on top-level commas, so `"x0, x1*(x2+1)"` gives two items.
pub fn split_list(src: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in src.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(src[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = src[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn polynomials() {
        let p = parse_poly("x0^2*x1 - 2/3*x2", None).unwrap();
        assert_eq!(p.nvars(), 3);
        assert_eq!(p.to_string(), "x0^2*x1 - 2/3*x2");
        assert_eq!(parse_poly("(x0 + x1)*(x0 - x1)", None).unwrap(), parse_poly("x0^2 - x1^2", None).unwrap());
        assert_eq!(parse_poly("-2/5", Some(2)).unwrap(), Poly::constant(rat(-2, 5), 2));
        assert_eq!(parse_poly(" x0 \n + 1", None).unwrap().to_string(), "x0 + 1");
    }

    #[test]
    fn forms_and_fields() {
        let w = parse_form("x0*dx1 - x1*dx0", None).unwrap();
        assert_eq!(w.degree(), 1);
        assert_eq!(w.nvars(), 2);
        assert_eq!(w.to_string(), "(-x1)*dx0 + (x0)*dx1");
        let v = parse_field("x1*d/dx0 + x3*d/dx2", None).unwrap();
        assert_eq!(v.nvars(), 4);
        assert_eq!(v.to_string(), "(x1)*d/dx0 + (x3)*d/dx2");
        let w2 = parse_form("(x0 + x1)*dx2^dx0", Some(4)).unwrap();
        assert_eq!(w2.to_string(), "(-x0 - x1)*dx0^dx2");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_poly("x0^2 +", None).unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
        assert!(e.message.contains("end of input"));
        assert!(!e.expected.is_empty());
        let e = parse_poly("x0 +\n  * x1", None).unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_poly("x0 $ 1", None).unwrap_err();
        assert_eq!(e.column, 4);
        assert!(parse_poly("(x0", None).is_err());
        assert!(parse_poly("x0 / x1", None).is_err());
        assert!(parse_poly("x0^x1", None).is_err());
        assert!(parse_form("dx0 + dx0^dx1", None).is_err());
    }

    #[test]
    fn arity() {
        assert_eq!(parse_poly("x1", Some(4)).unwrap().nvars(), 4);
        assert!(parse_poly("x5", Some(4)).is_err());
        assert_eq!(infer_nvars(&["x0", "x2*x1"], None).unwrap(), 3);
    }

    #[test]
    fn list_splitting() {
        assert_eq!(split_list("x0, x1*(x2,x3)"), vec!["x0", "x1*(x2,x3)"]);
        assert!(split_list("").is_empty());
    }
}
