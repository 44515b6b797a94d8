//! A small arithmetic expression language for problem files.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?
//! primary := number | name | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | exp
//! name    := x | t | pi | l
//! ```
//!
//! `^` binds tighter than unary minus and is right associative, so
//! `-2^2 = -4` and `2^3^2 = 512`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    T,
    L,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Evaluates at `(x, t)` with domain length `l`.
    pub fn eval(&self, x: f64, t: f64, l: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::X => x,
            Expr::T => t,
            Expr::L => l,
            Expr::Neg(a) => -a.eval(x, t, l),
            Expr::Add(a, b) => a.eval(x, t, l) + b.eval(x, t, l),
            Expr::Sub(a, b) => a.eval(x, t, l) - b.eval(x, t, l),
            Expr::Mul(a, b) => a.eval(x, t, l) * b.eval(x, t, l),
            Expr::Div(a, b) => a.eval(x, t, l) / b.eval(x, t, l),
            Expr::Pow(a, b) => {
                let base = a.eval(x, t, l);
                let e = b.eval(x, t, l);
                if e == e.trunc() && e.abs() <= 64.0 {
                    base.powi(e as i32)
                } else {
                    base.powf(e)
                }
            }
            Expr::Call(f, a) => {
                let v = a.eval(x, t, l);
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                }
            }
        }
    }

    pub fn uses_x(&self) -> bool {
        self.any(&|e| matches!(e, Expr::X))
    }

    pub fn uses_t(&self) -> bool {
        self.any(&|e| matches!(e, Expr::T))
    }

    fn any(&self, p: &dyn Fn(&Expr) -> bool) -> bool {
        if p(self) {
            return true;
        }
        match self {
            Expr::Num(_) | Expr::X | Expr::T | Expr::L => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.any(p),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.any(p) || b.any(p),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::X => f.write_str("x"),
            Expr::T => f.write_str("t"),
            Expr::L => f.write_str("l"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Call(func, a) => {
                let name = match func {
                    Func::Sin => "sin",
                    Func::Cos => "cos",
                    Func::Exp => "exp",
                };
                write!(f, "{name}({a})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Name(String),
    Op(char),
    End,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    col0: usize,
}

/// Parses `src`; reported columns are offset by `col0` and carry `line`.
pub fn parse_at(src: &str, line: usize, col0: usize) -> Result<Expr, ParseError> {
    let toks = lex(src, line, col0)?;
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        col0,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        other => Err(p.error(format!("unexpected {}", describe(other)))),
    }
}

/// Parses a standalone expression (line 1, column 1).
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    parse_at(src, 1, 1)
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Name(n) => format!("name '{n}'"),
        Tok::Op(c) => format!("'{c}'"),
        Tok::End => "end of expression".to_string(),
    }
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let col = col0 + i;
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<f64>().map_err(|_| ParseError {
                line,
                column: col,
                message: format!("malformed number '{text}'"),
            })?;
            out.push((Tok::Num(v), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Name(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(ParseError {
                line,
                column: col,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    out.push((Tok::End, col0 + chars.len()));
    Ok(out)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: String) -> ParseError {
        ParseError {
            line: self.line,
            column: self.toks.get(self.pos).map_or(self.col0, |t| t.1),
            message,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Op('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if let Tok::Op('^') = self.peek() {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.pos;
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect_close()?;
                Ok(e)
            }
            Tok::Name(name) => {
                let func = match name.as_str() {
                    "x" => return Ok(Expr::X),
                    "t" => return Ok(Expr::T),
                    "l" => return Ok(Expr::L),
                    "pi" => return Ok(Expr::Num(std::f64::consts::PI)),
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    "exp" => Func::Exp,
                    _ => {
                        self.pos = at;
                        return Err(self.error(format!(
                            "unknown name '{name}' (expected x, t, l, pi, sin, cos, exp)"
                        )));
                    }
                };
                if self.peek() != &Tok::Op('(') {
                    return Err(self.error(format!("expected '(' after {name}")));
                }
                self.bump();
                let arg = self.expr()?;
                self.expect_close()?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            other => {
                self.pos = at;
                Err(self.error(format!("expected a value, found {}", describe(&other))))
            }
        }
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Op(')') => {
                self.bump();
                Ok(())
            }
            other => Err(self.error(format!("expected ')', found {}", describe(other)))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ev(s: &str, x: f64, t: f64) -> f64 {
        parse(s).unwrap().eval(x, t, 2.0)
    }

    #[test]
    fn precedence() {
        assert_eq!(ev("1 + 2*3", 0.0, 0.0), 7.0);
        assert_eq!(ev("-2^2", 0.0, 0.0), -4.0);
        assert_eq!(ev("2^3^2", 0.0, 0.0), 512.0);
        assert_eq!(ev("2^-1", 0.0, 0.0), 0.5);
        assert_eq!(ev("(1+2)*3 - 4/2", 0.0, 0.0), 7.0);
        assert_eq!(ev("8/2/2", 0.0, 0.0), 2.0);
    }

    #[test]
    fn variables_and_functions() {
        assert!((ev("sin(pi*x/l)", 1.0, 0.0) - 1.0).abs() < 1e-15);
        assert_eq!(ev("x*t + l", 3.0, 4.0), 14.0);
        assert!((ev("exp(-t)*cos(x)", PI, 1.0) + (-1f64).exp()).abs() < 1e-15);
        assert_eq!(ev("1.5e-1 + 2E1", 0.0, 0.0), 20.15);
    }

    #[test]
    fn dependence_flags() {
        let e = parse("1 + t^2").unwrap();
        assert!(e.uses_t() && !e.uses_x());
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_at("1 + * 2", 7, 5).unwrap_err();
        assert_eq!((e.line, e.column), (7, 9));
        let e = parse("sin x").unwrap_err();
        assert_eq!(e.column, 5);
        let e = parse("y + 1").unwrap_err();
        assert_eq!(e.column, 1);
        assert!(e.message.contains("unknown name"));
        let e = parse("(1 + 2").unwrap_err();
        assert!(e.message.contains("expected ')'"));
        let e = parse("1 $ 2").unwrap_err();
        assert_eq!(e.column, 3);
        assert!(parse("1 2").is_err());
    }
}
