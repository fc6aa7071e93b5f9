//! DIMACS CNF reading and writing.
//!
//! The accepted grammar is the classic one: any number of `c` comment lines,
//! a single `p cnf N L` header, then `L` zero-terminated clauses. Parsing and
//! emission round-trip: `parse_dimacs(emit_dimacs(f))` structurally equals `f`
//! for any formula with nonempty clauses, preserving clause and literal order.

use crate::cnf::{Clause, CnfFormula, Literal};
use thiserror::Error;

/// Parse errors, each carrying the 1-based line where it was detected.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: expected `p cnf <vars> <clauses>` header, found {found:?}")]
    MalformedHeader { line: usize, found: String },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {line}: invalid literal token {token:?}")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: literal {var} exceeds declared variable count {max}")]
    LiteralOutOfRange { line: usize, var: u32, max: u32 },
    #[error("line {line}: clause terminated with no literals")]
    EmptyClause { line: usize },
    #[error("line {line}: end of input inside an unterminated clause")]
    UnterminatedClause { line: usize },
    #[error("line {line}: header declares {expected} clauses but input has {found}")]
    ClauseCountMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
}

/// Parses a DIMACS CNF document into a formula.
pub fn parse_dimacs(input: &str) -> Result<CnfFormula, DimacsError> {
    let mut lines = input.lines().enumerate();

    // Header: skip comments and blank lines until `p ...`.
    let (num_vars, expected_clauses, header_line) = loop {
        let Some((idx, raw)) = lines.next() else {
            return Err(DimacsError::MissingHeader);
        };
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if !trimmed.starts_with('p') {
            return Err(DimacsError::MalformedHeader {
                line,
                found: trimmed.to_string(),
            });
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
            return Err(DimacsError::MalformedHeader {
                line,
                found: trimmed.to_string(),
            });
        }
        let vars: u32 = fields[2].parse().map_err(|_| DimacsError::MalformedHeader {
            line,
            found: trimmed.to_string(),
        })?;
        let clauses: usize = fields[3].parse().map_err(|_| DimacsError::MalformedHeader {
            line,
            found: trimmed.to_string(),
        })?;
        break (vars, clauses, line);
    };

    let mut clauses: Vec<Clause> = Vec::with_capacity(expected_clauses);
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = header_line;

    for (idx, raw) in lines {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        last_line = line;
        for token in trimmed.split_whitespace() {
            let code: i32 = token.parse().map_err(|_| DimacsError::InvalidToken {
                line,
                token: token.to_string(),
            })?;
            if code == 0 {
                if current.is_empty() {
                    return Err(DimacsError::EmptyClause { line });
                }
                clauses.push(Clause::new(std::mem::take(&mut current)));
            } else {
                let lit = Literal::from_dimacs(code).expect("nonzero code");
                if lit.var() > num_vars {
                    return Err(DimacsError::LiteralOutOfRange {
                        line,
                        var: lit.var(),
                        max: num_vars,
                    });
                }
                current.push(lit);
            }
        }
    }

    if !current.is_empty() {
        return Err(DimacsError::UnterminatedClause { line: last_line });
    }
    if clauses.len() != expected_clauses {
        return Err(DimacsError::ClauseCountMismatch {
            line: last_line,
            expected: expected_clauses,
            found: clauses.len(),
        });
    }

    Ok(CnfFormula::new(num_vars, clauses).expect("literals already bounds-checked"))
}

/// Emits a formula in DIMACS form, one clause per line.
pub fn emit_dimacs(formula: &CnfFormula) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "p cnf {} {}\n",
        formula.num_variables(),
        formula.num_clauses()
    ));
    for clause in formula.clauses() {
        for lit in clause.iter() {
            out.push_str(&lit.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}
