//! Expressions over permutations used in certificate equations.
//!
//! ```text
//! expr  := term ('*' term)*            products, left to right
//! term  := atom ('^' int)*             powers, negative allowed
//! atom  := name                        bound variable or named permutation
//!        | name '(' expr ')'           homomorphism applied to an element
//!        | 'conj' '(' expr ',' expr ')'   conj(a, h) = h⁻¹·a·h
//!        | 'blocks' '(' expr, … ')'    direct sum on consecutive point blocks
//!        | 'id' '(' int ')'            identity of the given degree
//!        | '(' expr ')'
//! ```

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Name(String),
    Apply(String, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Conj(Box<Expr>, Box<Expr>),
    Blocks(Vec<Expr>),
    Id(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if c.is_ascii_digit() || (c == '-' && cs.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let st = i;
            i += 1;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Int(t.parse().map_err(|_| format!("bad integer `{t}`"))?));
        } else if "()*,^".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        match self.next() {
            Some(Tok::Sym(d)) if d == c => Ok(()),
            other => Err(format!("expected `{c}`, found {other:?}")),
        }
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut e = self.term()?;
        while self.peek() == Some(&Tok::Sym('*')) {
            self.pos += 1;
            e = Expr::Mul(Box::new(e), Box::new(self.term()?));
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut e = self.atom()?;
        while self.peek() == Some(&Tok::Sym('^')) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Int(k)) => e = Expr::Pow(Box::new(e), k),
                other => return Err(format!("expected an exponent, found {other:?}")),
            }
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, String> {
        match self.next() {
            Some(Tok::Sym('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if self.peek() != Some(&Tok::Sym('(')) {
                    return Ok(Expr::Name(name));
                }
                self.pos += 1;
                let e = match name.as_str() {
                    "id" => match self.next() {
                        Some(Tok::Int(d)) if d > 0 => Expr::Id(d as usize),
                        other => return Err(format!("id needs a positive degree, found {other:?}")),
                    },
                    "conj" => {
                        let a = self.expr()?;
                        self.expect(',')?;
                        let h = self.expr()?;
                        Expr::Conj(Box::new(a), Box::new(h))
                    }
                    "blocks" => {
                        let mut parts = vec![self.expr()?];
                        while self.peek() == Some(&Tok::Sym(',')) {
                            self.pos += 1;
                            parts.push(self.expr()?);
                        }
                        Expr::Blocks(parts)
                    }
                    _ => Expr::Apply(name, Box::new(self.expr()?)),
                };
                self.expect(')')?;
                Ok(e)
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, String> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input in `{s}`"));
    }
    Ok(e)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Name(n) => write!(f, "{n}"),
            Expr::Apply(m, x) => write!(f, "{m}({x})"),
            Expr::Mul(a, b) => write!(f, "{a} * {b}"),
            Expr::Pow(a, k) => match **a {
                Expr::Mul(..) => write!(f, "({a})^{k}"),
                _ => write!(f, "{a}^{k}"),
            },
            Expr::Conj(a, h) => write!(f, "conj({a}, {h})"),
            Expr::Blocks(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "blocks({})", parts.join(", "))
            }
            Expr::Id(d) => write!(f, "id({d})"),
        }
    }
}
