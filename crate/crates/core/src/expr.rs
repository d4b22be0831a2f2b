//! A small expression language for sampled functions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | variable | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Variables are `x1..xn`, with `x`, `y`, `z` as aliases for the first three.
//! `sin`, `cos` and `exp` are only available in float mode; exact mode
//! accepts polynomials with rational coefficients.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{powi, Mode, Scalar};

const MAX_DEPTH: usize = 256;
const MAX_INPUT: usize = 1 << 16;
/// Largest integer exponent accepted in exact mode.
pub const MAX_EXACT_POWER: u32 = 1024;
/// Size cap for an exact power, in bits.
const MAX_POWER_BITS: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Function {
    Sin,
    Cos,
    Exp,
}

impl Function {
    fn name(self) -> &'static str {
        match self {
            Function::Sin => "sin",
            Function::Cos => "cos",
            Function::Exp => "exp",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Function::Sin => x.sin(),
            Function::Cos => x.cos(),
            Function::Exp => x.exp(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(String),
    /// 0-based coordinate index.
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Function, Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(s) => write!(f, "{s}"),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl Expr {
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Number(_) => true,
            Expr::Var(_) => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.is_constant(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.is_constant() && b.is_constant()
            }
        }
    }

    /// Checks that the expression can be evaluated in `mode`.
    pub fn check_mode(&self, mode: Mode) -> Result<()> {
        if mode == Mode::Float {
            return Ok(());
        }
        match self {
            Expr::Number(_) | Expr::Var(_) => Ok(()),
            Expr::Neg(a) => a.check_mode(mode),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.check_mode(mode)?;
                b.check_mode(mode)
            }
            Expr::Div(a, b) => {
                if !b.is_constant() {
                    return Err(Error::FloatOnly("division by a non-constant expression".into()));
                }
                a.check_mode(mode)?;
                b.check_mode(mode)
            }
            Expr::Pow(a, b) => {
                if !b.is_constant() {
                    return Err(Error::FloatOnly("non-constant exponent".into()));
                }
                a.check_mode(mode)?;
                b.check_mode(mode)
            }
            Expr::Call(func, _) => Err(Error::FloatOnly(format!("function {}", func.name()))),
        }
    }

    pub fn eval<S: Scalar>(&self, x: &[S]) -> Result<S> {
        let v = match self {
            Expr::Number(s) => S::parse_text(s)?,
            Expr::Var(i) => x.get(*i).cloned().ok_or(Error::DimensionMismatch {
                expected: i + 1,
                actual: x.len(),
            })?,
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let den = b.eval(x)?;
                if den.is_zero() {
                    return Err(Error::InvalidArgument("division by zero".into()));
                }
                a.eval(x)? / den
            }
            Expr::Pow(a, b) => power(a.eval(x)?, b.eval(x)?)?,
            Expr::Call(func, a) => {
                if S::MODE == Mode::Exact {
                    return Err(Error::FloatOnly(format!("function {}", func.name())));
                }
                float(func.apply(a.eval(x)?.to_f64()))?
            }
        };
        if S::MODE == Mode::Float && !v.to_f64().is_finite() {
            return Err(Error::InvalidArgument(format!(
                "non-finite value while evaluating {self}"
            )));
        }
        Ok(v)
    }
}

fn float<S: Scalar>(v: f64) -> Result<S> {
    S::from_f64(v).ok_or_else(|| Error::InvalidArgument(format!("non-finite value {v}")))
}

fn power<S: Scalar>(base: S, exponent: S) -> Result<S> {
    let e = exponent.to_f64();
    let integral = S::from_f64(e.round()).is_some_and(|r| r == exponent);
    if integral && (0.0..=f64::from(MAX_EXACT_POWER)).contains(&e) {
        if base.bit_size().saturating_mul(e as u64) > MAX_POWER_BITS {
            return Err(Error::InvalidArgument(format!("power with exponent {e} is too large")));
        }
        return Ok(powi(&base, e as u64));
    }
    if S::MODE == Mode::Exact {
        return Err(Error::FloatOnly(format!(
            "exponent {} (exact mode needs an integer in 0..={MAX_EXACT_POWER})",
            exponent.to_text()
        )));
    }
    float(base.to_f64().powf(e))
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(String),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && matches!(chars[i], 'e' | 'E') {
                let mut j = i + 1;
                if j < chars.len() && matches!(chars[j], '+' | '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            tokens.push(Token::Number(chars[start..i].iter().collect()));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            tokens.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            tokens.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    n: usize,
    depth: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek_op() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{c}'")))
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Error::Parse(format!("expression nested deeper than {MAX_DEPTH}")));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr> {
        self.enter()?;
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if op == '*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        self.enter()?;
        let e = if self.peek_op() == Some('-') {
            self.pos += 1;
            Expr::Neg(Box::new(self.unary()?))
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(e)
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let token = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
        self.pos += 1;
        match token {
            Token::Number(s) => {
                if s.parse::<f64>().is_err() {
                    return Err(Error::Parse(format!("malformed number '{s}'")));
                }
                Ok(Expr::Number(s))
            }
            Token::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Token::Op(c) => Err(Error::Parse(format!("unexpected '{c}'"))),
            Token::Ident(name) => {
                let func = match name.as_str() {
                    "sin" => Some(Function::Sin),
                    "cos" => Some(Function::Cos),
                    "exp" => Some(Function::Exp),
                    _ => None,
                };
                if let Some(func) = func {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                let index = match name.as_str() {
                    "x" => 0,
                    "y" => 1,
                    "z" => 2,
                    _ => name
                        .strip_prefix('x')
                        .and_then(|s| s.parse::<usize>().ok())
                        .filter(|&i| i >= 1 && !name[1..].starts_with('0'))
                        .map(|i| i - 1)
                        .ok_or_else(|| Error::Parse(format!("unknown identifier '{name}'")))?,
                };
                if index >= self.n {
                    return Err(Error::Parse(format!("variable '{name}' exceeds dimension {}", self.n)));
                }
                Ok(Expr::Var(index))
            }
        }
    }
}

/// Parses an expression in the variables of R^n.
pub fn parse_expr(src: &str, n: usize) -> Result<Expr> {
    if src.len() > MAX_INPUT {
        return Err(Error::Parse(format!("expression longer than {MAX_INPUT} bytes")));
    }
    let mut parser = Parser {
        tokens: tokenize(src)?,
        pos: 0,
        n,
        depth: 0,
    };
    let e = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Parse("trailing input after expression".into()));
    }
    Ok(e)
}

/// Evaluates `expr` at each point.
pub fn sample<S: Scalar>(expr: &Expr, points: &[Vec<S>]) -> Result<Vec<S>> {
    expr.check_mode(S::MODE)?;
    points.iter().map(|p| expr.eval(p)).collect()
}
