//! Element syntax: a parenthesised tuple with one polynomial per branch.
//!
//! Component `i` is a polynomial in `t{i}` (or plain `t`) with integer or
//! `a/b` coefficients, e.g. `(1 + t1^2, 3*t2 - 1/2 t2)`. Terms of degree at
//! least the conductance are dropped, which is the quotient map onto the
//! truncated algebra; the dropped terms are reported as notes.

use curveter_core::{AlgebraKind, FieldSpec, GermAlgebra, Scalar};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed element {text:?}: {reason}")]
    Syntax { text: String, reason: String },
    #[error("element {text:?} has constant terms that differ, but in A+ the constants are equal")]
    UnequalConstants { text: String },
    #[error("element {text:?}: {source}")]
    Field {
        text: String,
        source: curveter_core::Error,
    },
}

/// A parsed element and notes about truncated terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parsed {
    pub vector: Vec<Scalar>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Number(BigInt),
    Var(Option<usize>),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Token::Number(digits.parse().expect("ascii digits")));
            }
            't' => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let var = if start == i {
                    None
                } else {
                    let n: usize = chars[start..i]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| "variable index too large".to_string())?;
                    Some(n)
                };
                out.push(Token::Var(var));
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

/// Coefficients by degree of one component, as `(numerator, denominator)`.
type Terms = Vec<(usize, BigInt, BigInt)>;

fn parse_polynomial(s: &str, branch: usize) -> Result<Terms, String> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err("empty component".into());
    }
    let mut terms = Vec::new();
    let mut pos = 0;
    let mut first = true;
    while pos < tokens.len() {
        let mut sign = BigInt::from(1);
        match tokens[pos] {
            Token::Plus => pos += 1,
            Token::Minus => {
                sign = -sign;
                pos += 1;
            }
            _ if first => {}
            _ => return Err("expected + or - between terms".into()),
        }
        first = false;
        let (mut num, mut den, mut degree) = (sign, BigInt::from(1), 0usize);
        let mut factors = 0;
        loop {
            match tokens.get(pos) {
                Some(Token::Number(n)) => {
                    num *= n;
                    pos += 1;
                    if tokens.get(pos) == Some(&Token::Slash) {
                        match tokens.get(pos + 1) {
                            Some(Token::Number(d)) if *d != BigInt::from(0) => {
                                den *= d;
                                pos += 2;
                            }
                            _ => return Err("expected a nonzero denominator after /".into()),
                        }
                    }
                }
                Some(Token::Var(v)) => {
                    if let Some(k) = v {
                        if *k != branch + 1 {
                            return Err(format!("t{k} appears in component {}", branch + 1));
                        }
                    }
                    pos += 1;
                    let mut e = 1usize;
                    if tokens.get(pos) == Some(&Token::Caret) {
                        match tokens.get(pos + 1) {
                            Some(Token::Number(n)) => {
                                e = n.try_into().map_err(|_| "exponent too large".to_string())?;
                                pos += 2;
                            }
                            _ => return Err("expected an exponent after ^".into()),
                        }
                    }
                    degree = degree.checked_add(e).ok_or("exponent too large")?;
                }
                _ => break,
            }
            factors += 1;
            match tokens.get(pos) {
                Some(Token::Star) => pos += 1,
                Some(Token::Number(_)) | Some(Token::Var(_)) => {}
                _ => break,
            }
        }
        if factors == 0 {
            return Err("expected a coefficient or variable".into());
        }
        if matches!(tokens.get(pos - 1), Some(Token::Star)) {
            return Err("dangling *".into());
        }
        terms.push((degree, num, den));
    }
    Ok(terms)
}

/// Splits on commas at parenthesis depth `depth`.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn syntax(text: &str, reason: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        text: text.to_string(),
        reason: reason.into(),
    }
}

/// Coefficient vector of `text` in the fixed basis of `alg`.
pub fn parse_element(text: &str, alg: &GermAlgebra) -> Result<Parsed, ParseError> {
    let trimmed = text.trim();
    let inner = trimmed
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| syntax(text, "expected a parenthesised tuple"))?;
    let parts = split_top(inner);
    if parts.len() != alg.branches() {
        return Err(syntax(
            text,
            format!("{} components for {} branches", parts.len(), alg.branches()),
        ));
    }
    let field = alg.field();
    let mut notes = Vec::new();
    let mut constants = Vec::with_capacity(parts.len());
    let mut coords: Vec<Vec<Scalar>> = Vec::with_capacity(parts.len());
    for (i, part) in parts.iter().enumerate() {
        let terms = parse_polynomial(part, i).map_err(|r| syntax(text, r))?;
        let c = alg.conductances()[i];
        let mut coeffs = vec![field.zero(); c];
        let mut constant = field.zero();
        for (degree, num, den) in terms {
            let value = field
                .from_ratio(&num, &den)
                .map_err(|source| ParseError::Field {
                    text: text.to_string(),
                    source,
                })?;
            if degree == 0 {
                constant = constant.add_ref(&value);
            } else if degree < c {
                coeffs[degree] = coeffs[degree].add_ref(&value);
            } else if !value.is_zero() {
                notes.push(format!(
                    "dropped t{}^{degree} from {text:?}: degree reaches the conductance {c}",
                    i + 1
                ));
            }
        }
        if c == 0 {
            return Err(syntax(text, "conductances are positive"));
        }
        coeffs[0] = constant.clone();
        constants.push(constant);
        coords.push(coeffs);
    }
    let mut v = alg.zero();
    match alg.kind() {
        AlgebraKind::Plus => {
            if constants.windows(2).any(|w| w[0] != w[1]) {
                return Err(ParseError::UnequalConstants {
                    text: text.to_string(),
                });
            }
            v[0] = constants[0].clone();
            for (i, cs) in coords.iter().enumerate() {
                for (d, x) in cs.iter().enumerate().skip(1) {
                    v[alg.monomial_index(i, d).expect("degree in range")] = x.clone();
                }
            }
        }
        AlgebraKind::Full => {
            for (i, cs) in coords.iter().enumerate() {
                for (d, x) in cs.iter().enumerate() {
                    v[alg.monomial_index(i, d).expect("degree in range")] = x.clone();
                }
            }
        }
    }
    Ok(Parsed { vector: v, notes })
}

/// A list of tuples, e.g. `(t1, t2), (t1^2, 0)`.
pub fn parse_element_list(text: &str, alg: &GermAlgebra) -> Result<Vec<Parsed>, ParseError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for item in split_top(text) {
        out.push(parse_element(item, alg)?);
    }
    Ok(out)
}

/// Root assignments: branches separated by `;`, roots by `,`, with
/// optional outer parentheses, e.g. `(0,1;0)`.
pub fn parse_roots(text: &str, field: FieldSpec) -> Result<Vec<Vec<Scalar>>, ParseError> {
    let trimmed = text.trim();
    let inner = trimmed
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(trimmed);
    inner
        .split(';')
        .map(|branch| {
            branch
                .split(',')
                .map(|x| {
                    field.parse(x).map_err(|source| ParseError::Field {
                        text: text.to_string(),
                        source,
                    })
                })
                .collect()
        })
        .collect()
}
