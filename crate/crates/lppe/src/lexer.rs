use pa_core::Prob;

use crate::LppeError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    /// Decimal literal such as `1.0`, kept exact.
    Decimal(Prob),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Longest symbols first so that `..` wins over `.` and `:=` over `:`.
const SYMBOLS: &[&str] = &[
    ":=", "..", "=>", "!=", "<=", ">=", "&&", "||", "(", ")", "{", "}", ",", ":", ".", "=", "<", ">", "+", "-", "*",
    "/", "!",
];

pub fn lex(text: &str) -> Result<Vec<Token>, LppeError> {
    let mut tokens = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_text = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = line_text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, col) = (ln + 1, i + 1);
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let tok = if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let int_part: String = chars[start..i].iter().collect();
                // A '.' followed by a digit makes a decimal; `1..6` stays a range.
                if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    let frac_start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let frac: String = chars[frac_start..i].iter().collect();
                    Tok::Decimal(decimal(&int_part, &frac).ok_or_else(|| overflow(line, col))?)
                } else {
                    Tok::Int(int_part.parse().map_err(|_| overflow(line, col))?)
                }
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                Tok::Ident(chars[start..i].iter().collect())
            } else {
                let rest: String = chars[i..].iter().take(2).collect();
                let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
                    return Err(LppeError::Syntax { line, col, msg: format!("unexpected character `{c}`") });
                };
                i += sym.chars().count();
                Tok::Sym(sym)
            };
            tokens.push(Token { tok, line, col });
        }
    }
    let line = text.lines().count().max(1);
    tokens.push(Token { tok: Tok::Eof, line, col: text.lines().last().map_or(1, |l| l.chars().count() + 1) });
    Ok(tokens)
}

fn overflow(line: usize, col: usize) -> LppeError {
    LppeError::Syntax { line, col, msg: "numeric literal out of range".into() }
}

fn decimal(int_part: &str, frac: &str) -> Option<Prob> {
    let digits: num_bigint::BigInt = format!("{int_part}{frac}").parse().ok()?;
    let scale = num_bigint::BigInt::from(10u32).pow(frac.len() as u32);
    Some(Prob::new(digits, scale))
}
