use std::fmt;

use num_bigint::BigInt;

use super::SyntaxError;

/// Hyphenated command words lexed as single identifiers.
pub(crate) const HYPHENATED: &[&str] = &[
    "invert-symplectic",
    "contact-reduce",
    "contact-hamiltonian",
    "contact-bracket",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// `@name`
    Vector(String),
    Int(BigInt),
    /// `n/m` written without spaces.
    Ratio(BigInt, BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
    Colon,
    Eq,
    /// Newline or `;`.
    End,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => f.write_str(s),
            Tok::Vector(s) => write!(f, "@{s}"),
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Ratio(n, d) => write!(f, "{n}/{d}"),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Star => f.write_str("*"),
            Tok::Caret => f.write_str("^"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::Comma => f.write_str(","),
            Tok::Colon => f.write_str(":"),
            Tok::Eq => f.write_str("="),
            Tok::End => f.write_str("end of statement"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let push = |out: &mut Vec<Token>, tok| {
            out.push(Token {
                tok,
                line: start.0,
                col: start.1,
            })
        };
        match c {
            '\n' | ';' => {
                push(&mut out, Tok::End);
                i += 1;
                if c == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            c if c.is_whitespace() => {}
            '+' => push(&mut out, Tok::Plus),
            '-' => push(&mut out, Tok::Minus),
            '*' => push(&mut out, Tok::Star),
            '^' => push(&mut out, Tok::Caret),
            '(' => push(&mut out, Tok::LParen),
            ')' => push(&mut out, Tok::RParen),
            ',' => push(&mut out, Tok::Comma),
            ':' => push(&mut out, Tok::Colon),
            '=' => push(&mut out, Tok::Eq),
            '@' => {
                let mut j = i + 1;
                if j >= chars.len() || !is_ident_start(chars[j]) {
                    return Err(SyntaxError::new(line, col, "expected a variable name after `@`"));
                }
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                push(&mut out, Tok::Vector(chars[i + 1..j].iter().collect()));
                col += j - i;
                i = j;
                continue;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let num: BigInt = chars[i..j].iter().collect::<String>().parse().expect("digits");
                let tok = if j + 1 < chars.len() && chars[j] == '/' && chars[j + 1].is_ascii_digit() {
                    let k0 = j + 1;
                    let mut k = k0;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    let den: BigInt = chars[k0..k].iter().collect::<String>().parse().expect("digits");
                    if den == BigInt::from(0) {
                        return Err(SyntaxError::new(line, col, "zero denominator"));
                    }
                    j = k;
                    Tok::Ratio(num, den)
                } else {
                    Tok::Int(num)
                };
                push(&mut out, tok);
                col += j - i;
                i = j;
                continue;
            }
            c if is_ident_start(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let mut word: String = chars[i..j].iter().collect();
                // hyphenated command words
                if j < chars.len() && chars[j] == '-' {
                    let mut k = j + 1;
                    while k < chars.len() && (is_ident_char(chars[k]) || chars[k] == '-') {
                        k += 1;
                    }
                    let long: String = chars[i..k].iter().collect();
                    if HYPHENATED.contains(&long.as_str()) {
                        word = long;
                        j = k;
                    }
                }
                push(&mut out, Tok::Ident(word));
                col += j - i;
                i = j;
                continue;
            }
            other => {
                return Err(SyntaxError::new(line, col, format!("unexpected character `{other}`")));
            }
        }
        i += 1;
        col += 1;
    }
    out.push(Token {
        tok: Tok::End,
        line,
        col,
    });
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}
