//! Text frontend: a small language for declaring a chart, binding tensors
//! and running the calculus on them.
//!
//! ```text
//! chart M(x, t) homog t
//! P = @t^@x
//! JN P            # prints (0 : deg 2, 1 @x)
//! check poisson P
//! ```
//!
//! Output uses the input syntax, so printed values can be read back.

mod lexer;
mod parser;
mod session;
mod value;

use std::fmt;

pub use parser::{parse_expr, parse_program, CheckKind, Command, Expr, Program, Rhs, Statement, Stmt};
pub use session::{run_source, Mode, Outcome, Session, Status};
pub use value::{unify, EvalError, Value};

/// Command words; these cannot be used as names.
pub const COMMANDS: &[&str] = &[
    "snbracket",
    "sjbracket",
    "d",
    "d1",
    "lie",
    "wedge",
    "pair",
    "bracket",
    "degree",
    "decompose",
    "J",
    "JN",
    "poissonize",
    "psi",
    "psiN",
    "restrict",
    "invert-symplectic",
    "hamiltonian",
    "contact-reduce",
    "reeb",
    "contact-hamiltonian",
    "contact-bracket",
    "eval",
];

/// Statement keywords, also reserved.
pub const KEYWORDS: &[&str] = &["chart", "homog", "delta", "print", "check", "deg", "form"];

/// A lexical or syntax error with its source position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl SyntaxError {
    pub(crate) fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        SyntaxError {
            line,
            col,
            message: message.into(),
        }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for SyntaxError {}
