use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::lexer::{tokenize, Tok, Token};
use super::{SyntaxError, COMMANDS, KEYWORDS};
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    /// Chart coordinate used as a scalar.
    Var(String),
    /// Previously bound name.
    Name(String),
    Vector(String),
    Covector(String),
    TypedZero { degree: i64, form: bool },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Wedge(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Pair(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Copy)]
pub enum CheckKind {
    Poisson,
    Jacobi,
    Nambu,
    Contact,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Poisson => "poisson",
            CheckKind::Jacobi => "jacobi",
            CheckKind::Nambu => "nambu",
            CheckKind::Contact => "contact",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Command {
    pub name: String,
    pub args: Vec<Expr>,
    /// `var=value` substitutions (only `eval`).
    pub substitutions: Vec<(String, Rational)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Chart {
        name: String,
        variables: Vec<String>,
        homogeneity: Option<String>,
    },
    Delta(Expr),
    Assign { name: String, value: Rhs },
    Run(Command),
    Print(Expr),
    Check { kind: CheckKind, target: Expr },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rhs {
    Expr(Expr),
    Command(Command),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statement {
    pub line: usize,
    pub stmt: Stmt,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Program {
    pub statements: Vec<Statement>,
}

/// Parses a whole program, resolving names statically.
pub fn parse_program(src: &str) -> Result<Program, SyntaxError> {
    let mut p = Parser::new(tokenize(src)?, Scope::default());
    let mut statements = Vec::new();
    while !p.at(&Tok::Eof) {
        if p.eat(&Tok::End) {
            continue;
        }
        let line = p.peek().line;
        let stmt = p.statement()?;
        p.expect_end()?;
        statements.push(Statement { line, stmt });
    }
    Ok(Program { statements })
}

/// Parses a single expression over the given chart variables.
pub fn parse_expr(src: &str, variables: &[String], names: &[String]) -> Result<Expr, SyntaxError> {
    let scope = Scope {
        chart: Some(variables.to_vec()),
        names: names.iter().cloned().collect(),
    };
    let mut p = Parser::new(tokenize(src)?, scope);
    while p.eat(&Tok::End) {}
    let e = p.expr()?;
    while p.eat(&Tok::End) {}
    if !p.at(&Tok::Eof) {
        return Err(p.error_here("unexpected trailing input"));
    }
    Ok(e)
}

#[derive(Default)]
struct Scope {
    chart: Option<Vec<String>>,
    names: HashSet<String>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    scope: Scope,
}

impl Parser {
    fn new(toks: Vec<Token>, scope: Scope) -> Self {
        Parser { toks, pos: 0, scope }
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn at(&self, t: &Tok) -> bool {
        &self.peek().tok == t
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error_here(&self, msg: impl Into<String>) -> SyntaxError {
        let t = self.peek();
        SyntaxError::new(t.line, t.col, format!("{} near `{}`", msg.into(), t.tok))
    }

    fn expect(&mut self, t: &Tok) -> Result<(), SyntaxError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error_here(format!("expected `{t}`")))
        }
    }

    fn expect_end(&mut self) -> Result<(), SyntaxError> {
        if self.eat(&Tok::End) || self.at(&Tok::Eof) {
            Ok(())
        } else {
            Err(self.error_here("expected end of statement"))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error_here("expected a name")),
        }
    }

    fn chart_vars(&self) -> Result<&[String], SyntaxError> {
        self.scope
            .chart
            .as_deref()
            .ok_or_else(|| self.error_here("no chart declared"))
    }

    fn is_chart_var(&self, s: &str) -> bool {
        self.scope.chart.as_ref().is_some_and(|v| v.iter().any(|x| x == s))
    }

    fn statement(&mut self) -> Result<Stmt, SyntaxError> {
        let word = match &self.peek().tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.error_here("expected a statement")),
        };
        if self.peek_at(1) == &Tok::Eq {
            return self.assignment();
        }
        match word.as_str() {
            "chart" => self.chart(),
            "delta" => {
                self.bump();
                Ok(Stmt::Delta(self.expr()?))
            }
            "print" => {
                self.bump();
                Ok(Stmt::Print(self.expr()?))
            }
            "check" => {
                self.bump();
                let kind = match self.ident()?.as_str() {
                    "poisson" => CheckKind::Poisson,
                    "jacobi" => CheckKind::Jacobi,
                    "nambu" => CheckKind::Nambu,
                    "contact" => CheckKind::Contact,
                    other => {
                        return Err(self.error_here(format!("unknown check `{other}`")));
                    }
                };
                Ok(Stmt::Check {
                    kind,
                    target: self.expr()?,
                })
            }
            w if COMMANDS.contains(&w) => Ok(Stmt::Run(self.command()?)),
            _ => Err(self.error_here(format!("unknown command `{word}`"))),
        }
    }

    fn chart(&mut self) -> Result<Stmt, SyntaxError> {
        self.bump();
        if self.scope.chart.is_some() {
            return Err(self.error_here("a chart is already declared"));
        }
        let name = self.ident()?;
        self.expect(&Tok::LParen)?;
        let mut variables: Vec<String> = Vec::new();
        loop {
            let v = self.ident()?;
            if KEYWORDS.contains(&v.as_str()) || COMMANDS.contains(&v.as_str()) {
                return Err(self.error_here(format!("`{v}` is reserved")));
            }
            if variables.contains(&v) {
                return Err(self.error_here(format!("duplicate variable `{v}`")));
            }
            variables.push(v);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::RParen)?;
        for v in &variables {
            if let Some(rest) = v.strip_prefix('d') {
                if variables.iter().any(|w| w == rest) {
                    return Err(self.error_here(format!("variable `{v}` clashes with the covector d{rest}")));
                }
            }
        }
        let homogeneity = if self.at(&Tok::Ident("homog".into())) {
            self.bump();
            let t = self.ident()?;
            if !variables.contains(&t) {
                return Err(self.error_here(format!("`{t}` is not a chart variable")));
            }
            Some(t)
        } else {
            None
        };
        self.scope.chart = Some(variables.clone());
        Ok(Stmt::Chart {
            name,
            variables,
            homogeneity,
        })
    }

    fn assignment(&mut self) -> Result<Stmt, SyntaxError> {
        let name = self.ident()?;
        let reserved = KEYWORDS.contains(&name.as_str())
            || COMMANDS.contains(&name.as_str())
            || self.is_chart_var(&name)
            || name.strip_prefix('d').is_some_and(|r| self.is_chart_var(r));
        if reserved {
            return Err(self.error_here(format!("`{name}` is reserved")));
        }
        if self.scope.names.contains(&name) {
            return Err(self.error_here(format!("`{name}` is already bound")));
        }
        self.expect(&Tok::Eq)?;
        let value = match &self.peek().tok {
            Tok::Ident(w) if COMMANDS.contains(&w.as_str()) => Rhs::Command(self.command()?),
            _ => Rhs::Expr(self.expr()?),
        };
        self.scope.names.insert(name.clone());
        Ok(Stmt::Assign { name, value })
    }

    fn command(&mut self) -> Result<Command, SyntaxError> {
        let name = self.ident()?;
        let mut args = vec![self.expr()?];
        while self.eat(&Tok::Comma) {
            args.push(self.expr()?);
        }
        let mut substitutions = Vec::new();
        if name == "eval" {
            while matches!(self.peek().tok, Tok::Ident(_)) && self.peek_at(1) == &Tok::Eq {
                let v = self.ident()?;
                if !self.is_chart_var(&v) {
                    return Err(self.error_here(format!("`{v}` is not a chart variable")));
                }
                self.bump();
                let neg = self.eat(&Tok::Minus);
                let r = self.number()?;
                substitutions.push((v, if neg { -r } else { r }));
            }
        }
        Ok(Command {
            name,
            args,
            substitutions,
        })
    }

    fn number(&mut self) -> Result<Rational, SyntaxError> {
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Rational::from_integer(n))
            }
            Tok::Ratio(n, d) => {
                self.bump();
                Ok(Rational::new(n, d))
            }
            _ => Err(self.error_here("expected a number")),
        }
    }

    pub fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek_at(0) {
            Tok::Ident(_) => self.peek_at(1) != &Tok::Eq,
            Tok::Vector(_) | Tok::Int(_) | Tok::Ratio(..) | Tok::LParen => true,
            _ => false,
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(&Tok::Star) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(&Tok::Caret) {
                lhs = Expr::Wedge(Box::new(lhs), Box::new(self.factor()?));
            } else if self.starts_atom() {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let mut base = self.atom()?;
        loop {
            let exponent = match (self.peek_at(0), self.peek_at(1), self.peek_at(2)) {
                (Tok::Caret, Tok::Int(n), _) => Some(n.clone()),
                (Tok::Caret, Tok::Minus, Tok::Int(n)) => Some(-n.clone()),
                _ => None,
            };
            let Some(n) = exponent else {
                return Ok(base);
            };
            self.bump();
            if self.at(&Tok::Minus) {
                self.bump();
            }
            let n = n.to_i32().ok_or_else(|| self.error_here("exponent out of range"))?;
            self.bump();
            base = Expr::Pow(Box::new(base), n);
        }
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        let tok = self.peek().clone();
        match tok.tok {
            Tok::Int(n) if n.is_zero() && self.peek_at(1) == &Tok::Colon => {
                self.bump();
                self.bump();
                if self.ident()? != "deg" {
                    return Err(self.error_here("expected `deg`"));
                }
                let neg = self.eat(&Tok::Minus);
                let k = match self.bump().tok {
                    Tok::Int(k) => k,
                    _ => return Err(self.error_here("expected a degree")),
                };
                let k: BigInt = if neg { -k } else { k };
                let degree = k.to_i64().filter(|&d| d >= -1).ok_or_else(|| self.error_here("bad degree"))?;
                let form = self.eat(&Tok::Ident("form".into()));
                Ok(Expr::TypedZero { degree, form })
            }
            Tok::Int(_) | Tok::Ratio(..) => Ok(Expr::Num(self.number()?)),
            Tok::Vector(v) => {
                if !self.chart_vars()?.contains(&v) {
                    return Err(self.error_here(format!("`@{v}` is not a chart direction")));
                }
                self.bump();
                Ok(Expr::Vector(v))
            }
            Tok::Ident(name) => {
                self.chart_vars()?;
                let e = if self.is_chart_var(&name) {
                    Expr::Var(name)
                } else if let Some(v) = name.strip_prefix('d').filter(|r| self.is_chart_var(r)) {
                    Expr::Covector(v.to_string())
                } else if self.scope.names.contains(&name) {
                    Expr::Name(name)
                } else {
                    return Err(self.error_here(format!("undefined name `{name}`")));
                };
                self.bump();
                Ok(e)
            }
            Tok::LParen => {
                self.bump();
                let a = self.expr()?;
                if self.eat(&Tok::Comma) {
                    let b = self.expr()?;
                    self.expect(&Tok::RParen)?;
                    Ok(Expr::Pair(Box::new(a), Box::new(b)))
                } else {
                    self.expect(&Tok::RParen)?;
                    Ok(a)
                }
            }
            _ => Err(self.error_here("expected an expression")),
        }
    }
}
