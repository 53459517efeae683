//! DIMACS CNF reader and writer.
//!
//! The writer output is fixed: `p cnf <n> <m>`, then one clause per line,
//! literals separated by single spaces and terminated by ` 0`, `\n` line
//! endings, no comments unless requested.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Clause, Instance, Literal};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: malformed header `{text}`, expected `p cnf <vars> <clauses>`")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: second problem line")]
    DuplicateHeader { line: usize },
    #[error("no `p cnf` header found")]
    MissingHeader,
    #[error("line {line}: clause data before the `p cnf` header")]
    ClauseBeforeHeader { line: usize },
    #[error("line {line}: invalid literal `{token}`")]
    InvalidLiteral { line: usize, token: String },
    #[error("line {line}: literal {literal} exceeds the declared {n} variables")]
    VarOutOfRange { line: usize, literal: i64, n: u32 },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("line {line}: last clause is missing its terminating 0")]
    MissingTerminator { line: usize },
    #[error("line {line}: clause count mismatch, header declares {declared} but found {found}")]
    ClauseCountMismatch {
        line: usize,
        declared: usize,
        found: usize,
    },
}

pub fn write_dimacs(instance: &Instance) -> String {
    let mut out = String::with_capacity(16 + instance.m() * 12);
    write_body(instance, &mut out);
    out
}

/// Like [`write_dimacs`] but prefixes each line of `comment` with `c `.
pub fn write_dimacs_with_comment(instance: &Instance, comment: &str) -> String {
    let mut out = String::new();
    for line in comment.lines() {
        out.push_str("c ");
        out.push_str(line);
        out.push('\n');
    }
    write_body(instance, &mut out);
    out
}

fn write_body(instance: &Instance, out: &mut String) {
    let _ = writeln!(out, "p cnf {} {}", instance.n(), instance.m());
    for clause in instance.clauses() {
        for lit in clause.literals() {
            let _ = write!(out, "{} ", lit.to_dimacs());
        }
        out.push_str("0\n");
    }
}

/// Parses DIMACS CNF text.
///
/// Comment lines (`c ...`) may appear anywhere, clauses may span lines, and a
/// line starting with `%` (the SATLIB end marker) stops parsing.
pub fn parse_dimacs(text: &str) -> Result<Instance, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::DuplicateHeader { line });
            }
            header = Some(parse_header(trimmed, line)?);
            continue;
        }
        let Some((n, _)) = header else {
            return Err(DimacsError::ClauseBeforeHeader { line });
        };
        for token in trimmed.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| DimacsError::InvalidLiteral {
                line,
                token: token.to_string(),
            })?;
            if value == 0 {
                let literals = std::mem::take(&mut current);
                let clause = Clause::new(literals).ok_or(DimacsError::EmptyClause { line })?;
                clauses.push(clause);
                continue;
            }
            let lit = Literal::from_dimacs(value).ok_or_else(|| DimacsError::InvalidLiteral {
                line,
                token: token.to_string(),
            })?;
            if lit.var() > n {
                return Err(DimacsError::VarOutOfRange {
                    line,
                    literal: value,
                    n,
                });
            }
            current.push(lit);
        }
    }

    let (n, declared) = header.ok_or(DimacsError::MissingHeader)?;
    if !current.is_empty() {
        return Err(DimacsError::MissingTerminator { line: last_line });
    }
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCountMismatch {
            line: last_line,
            declared,
            found: clauses.len(),
        });
    }
    Ok(Instance::new(n, clauses).expect("variables were range-checked while parsing"))
}

fn parse_header(text: &str, line: usize) -> Result<(u32, usize), DimacsError> {
    let malformed = || DimacsError::MalformedHeader {
        line,
        text: text.to_string(),
    };
    let fields: Vec<&str> = text.split_whitespace().collect();
    match fields.as_slice() {
        ["p", "cnf", vars, clauses] => {
            let n = vars.parse().map_err(|_| malformed())?;
            let m = clauses.parse().map_err(|_| malformed())?;
            Ok((n, m))
        }
        _ => Err(malformed()),
    }
}
