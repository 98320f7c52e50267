//! Text syntax for [`SetExpr`].
//!
//! ```text
//! expr := ap(a, d) | interval(x, y) | multiples(k) | ipset(g, …)
//!       | thick(lo:hi, …) | bernoulli(p, seed) | shift(expr, c)
//!       | union(expr, …) | intersect(expr, …) | complement(expr)
//! ```
//!
//! Whitespace (including newlines) is ignored between tokens. Errors carry the
//! 1-based line and column of the offending token; arity errors point at the
//! function name. [`SetExpr`]'s `Display` prints the canonical form, which
//! parses back to the same tree.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sets::{Prob, SetExpr};

/// A parsed program: the source text and its expression tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DslProgram {
    pub source: String,
    pub expr: SetExpr,
}

pub fn parse_dsl(text: &str) -> Result<DslProgram> {
    let mut p = Parser::new(text);
    let expr = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(t.pos.err(format!("unexpected `{}` after expression", t.text)));
    }
    Ok(DslProgram { source: text.to_string(), expr })
}

impl FromStr for SetExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_dsl(s).map(|p| p.expr)
    }
}

fn join<T>(
    f: &mut fmt::Formatter<'_>,
    xs: &[T],
    item: impl Fn(&mut fmt::Formatter<'_>, &T) -> fmt::Result,
) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        item(f, x)?;
    }
    Ok(())
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetExpr::Ap { start, step } => write!(f, "ap({start}, {step})"),
            SetExpr::Interval { lo, hi } => write!(f, "interval({lo}, {hi})"),
            SetExpr::Multiples(k) => write!(f, "multiples({k})"),
            SetExpr::IpSet(gs) => {
                f.write_str("ipset(")?;
                join(f, gs, |f, g| write!(f, "{g}"))?;
                f.write_str(")")
            }
            SetExpr::Thick(bs) => {
                f.write_str("thick(")?;
                join(f, bs, |f, (a, b)| write!(f, "{a}:{b}"))?;
                f.write_str(")")
            }
            SetExpr::Bernoulli { p, seed } => write!(f, "bernoulli({p}, {seed})"),
            SetExpr::Union(xs) | SetExpr::Intersect(xs) => {
                f.write_str(if matches!(self, SetExpr::Union(_)) { "union(" } else { "intersect(" })?;
                join(f, xs, |f, x| write!(f, "{x}"))?;
                f.write_str(")")
            }
            SetExpr::Complement(e) => write!(f, "complement({e})"),
            SetExpr::Shift(e, c) => write!(f, "shift({e}, {c})"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

impl Pos {
    fn err(self, msg: String) -> Error {
        Error::Parse { line: self.line, col: self.col, msg }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    Ident,
    Number,
    Open,
    Close,
    Comma,
    Colon,
}

#[derive(Clone, Debug)]
struct Token<'a> {
    kind: Kind,
    text: &'a str,
    pos: Pos,
}

fn tokenize(src: &str) -> Result<Vec<Token<'_>>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            it.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            it.next();
            col += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Kind::Open),
            ')' => Some(Kind::Close),
            ',' => Some(Kind::Comma),
            ':' => Some(Kind::Colon),
            _ => None,
        };
        if let Some(kind) = single {
            it.next();
            col += 1;
            out.push(Token { kind, text: &src[i..i + 1], pos });
            continue;
        }
        let kind = if c.is_ascii_alphabetic() {
            Kind::Ident
        } else if c.is_ascii_digit() {
            Kind::Number
        } else {
            return Err(pos.err(format!("unexpected character `{c}`")));
        };
        let mut end = i;
        while let Some(&(j, d)) = it.peek() {
            let ok = match kind {
                Kind::Ident => d.is_ascii_alphanumeric() || d == '_',
                _ => d.is_ascii_digit() || d == '.',
            };
            if !ok {
                break;
            }
            end = j + d.len_utf8();
            it.next();
            col += 1;
        }
        out.push(Token { kind, text: &src[i..end], pos });
    }
    Ok(out)
}

enum Arg<'a> {
    Expr(SetExpr, Pos),
    Num(&'a str, Pos),
    Block(&'a str, &'a str, Pos),
}

impl Arg<'_> {
    fn pos(&self) -> Pos {
        match self {
            Arg::Expr(_, p) | Arg::Num(_, p) | Arg::Block(_, _, p) => *p,
        }
    }
}

struct Parser<'a> {
    toks: Vec<Token<'a>>,
    at: usize,
    end: Pos,
    err: Option<Error>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let end = {
            let line = src.matches('\n').count() + 1;
            let col = src.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            Pos { line, col }
        };
        match tokenize(src) {
            Ok(toks) => Parser { toks, at: 0, end, err: None },
            Err(e) => Parser { toks: Vec::new(), at: 0, end, err: Some(e) },
        }
    }

    fn peek(&self) -> Option<&Token<'a>> {
        self.toks.get(self.at)
    }

    fn next(&mut self, want: Kind, what: &str) -> Result<Token<'a>> {
        match self.toks.get(self.at) {
            Some(t) if t.kind == want => {
                self.at += 1;
                Ok(t.clone())
            }
            Some(t) => Err(t.pos.err(format!("expected {what}, found `{}`", t.text))),
            None => Err(self.end.err(format!("expected {what}, found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<SetExpr> {
        if let Some(e) = self.err.take() {
            return Err(e);
        }
        let name = self.next(Kind::Ident, "a set expression")?;
        self.next(Kind::Open, "`(`")?;
        let mut args = Vec::new();
        if self.peek().map(|t| t.kind) != Some(Kind::Close) {
            loop {
                args.push(self.arg()?);
                match self.peek().map(|t| t.kind) {
                    Some(Kind::Comma) => self.at += 1,
                    _ => break,
                }
            }
        }
        self.next(Kind::Close, "`,` or `)`")?;
        build(name, args)
    }

    fn arg(&mut self) -> Result<Arg<'a>> {
        match self.peek() {
            Some(t) if t.kind == Kind::Ident => {
                let pos = t.pos;
                Ok(Arg::Expr(self.expr()?, pos))
            }
            Some(t) if t.kind == Kind::Number => {
                let t = t.clone();
                self.at += 1;
                if self.peek().map(|t| t.kind) == Some(Kind::Colon) {
                    self.at += 1;
                    let hi = self.next(Kind::Number, "a block end")?;
                    Ok(Arg::Block(t.text, hi.text, t.pos))
                } else {
                    Ok(Arg::Num(t.text, t.pos))
                }
            }
            Some(t) => Err(t.pos.err(format!("expected an argument, found `{}`", t.text))),
            None => Err(self.end.err("expected an argument, found end of input".into())),
        }
    }
}

fn int(text: &str, pos: Pos) -> Result<u64> {
    text.parse::<u64>().map_err(|_| pos.err(format!("`{text}` is not a non-negative integer")))
}

fn positive(arg: &Arg<'_>, what: &str) -> Result<u64> {
    match arg {
        Arg::Num(t, pos) => {
            let v = int(t, *pos)?;
            if v == 0 {
                return Err(pos.err(format!("{what} must be >= 1, got `{t}`")));
            }
            Ok(v)
        }
        other => Err(other.pos().err(format!("{what} must be a number"))),
    }
}

fn expr_arg(arg: Arg<'_>) -> Result<SetExpr> {
    match arg {
        Arg::Expr(e, _) => Ok(e),
        other => Err(other.pos().err("expected a set expression".into())),
    }
}

fn build(name: Token<'_>, args: Vec<Arg<'_>>) -> Result<SetExpr> {
    let n = args.len();
    let arity = |want: &str, ok: bool| -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(name.pos.err(format!("`{}` takes {want}, got {n}", name.text)))
        }
    };
    let mut it = args.into_iter();
    let e = match name.text {
        "ap" => {
            arity("2 arguments (a, d)", n == 2)?;
            let (a, d) = (it.next().unwrap(), it.next().unwrap());
            SetExpr::Ap { start: positive(&a, "ap start")?, step: positive(&d, "ap step")? }
        }
        "interval" => {
            arity("2 arguments (x, y)", n == 2)?;
            let (x, y) = (it.next().unwrap(), it.next().unwrap());
            let lo = positive(&x, "interval start")?;
            let hi = positive(&y, "interval end")?;
            if hi < lo {
                return Err(y.pos().err(format!("interval end {hi} is below start {lo}")));
            }
            SetExpr::Interval { lo, hi }
        }
        "multiples" => {
            arity("1 argument (k)", n == 1)?;
            SetExpr::Multiples(positive(&it.next().unwrap(), "multiples k")?)
        }
        "ipset" => {
            arity("at least 1 generator", n >= 1)?;
            SetExpr::IpSet(it.map(|a| positive(&a, "ipset generator")).collect::<Result<_>>()?)
        }
        "thick" => {
            arity("at least 1 block lo:hi", n >= 1)?;
            let blocks = it
                .map(|a| match a {
                    Arg::Block(lo, hi, pos) => {
                        let (lo, hi) = (int(lo, pos)?, int(hi, pos)?);
                        if lo == 0 || hi < lo {
                            return Err(pos.err(format!("block {lo}:{hi} needs 1 <= lo <= hi")));
                        }
                        Ok((lo, hi))
                    }
                    other => Err(other.pos().err("thick takes blocks of the form lo:hi".into())),
                })
                .collect::<Result<_>>()?;
            SetExpr::Thick(blocks)
        }
        "bernoulli" => {
            arity("2 arguments (p, seed)", n == 2)?;
            let (p, s) = (it.next().unwrap(), it.next().unwrap());
            let p = match p {
                Arg::Num(t, pos) => t.parse::<Prob>().map_err(|e| pos.err(e.to_string()))?,
                other => return Err(other.pos().err("bernoulli p must be a decimal".into())),
            };
            let seed = match s {
                Arg::Num(t, pos) => int(t, pos)?,
                other => return Err(other.pos().err("bernoulli seed must be an integer".into())),
            };
            SetExpr::Bernoulli { p, seed }
        }
        "shift" => {
            arity("2 arguments (expr, c)", n == 2)?;
            let (e, c) = (it.next().unwrap(), it.next().unwrap());
            SetExpr::Shift(Box::new(expr_arg(e)?), positive(&c, "shift amount")?)
        }
        "union" | "intersect" => {
            arity("at least 1 operand", n >= 1)?;
            let xs = it.map(expr_arg).collect::<Result<Vec<_>>>()?;
            if name.text == "union" {
                SetExpr::Union(xs)
            } else {
                SetExpr::Intersect(xs)
            }
        }
        "complement" => {
            arity("1 argument (expr)", n == 1)?;
            SetExpr::Complement(Box::new(expr_arg(it.next().unwrap())?))
        }
        other => return Err(name.pos.err(format!("unknown function `{other}`"))),
    };
    Ok(e)
}
