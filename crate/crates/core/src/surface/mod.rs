//! Concrete syntax: ASCII lexer, recursive-descent parser and printer.

use std::fmt;

use crate::syntax::{Name, Term};

mod lexer;
mod parser;
mod pretty;

pub use parser::{parse_assumption, parse_conv_query, parse_file, parse_term, parse_typed};
pub use pretty::pretty;

pub fn is_keyword(s: &str) -> bool {
    lexer::KEYWORDS.iter().any(|(k, _)| *k == s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub name: Name,
    pub params: Vec<(Name, Term)>,
    pub ret: Term,
    pub body: Term,
    /// The whole declaration, from `def` to the end of the body.
    pub span: Span,
    pub name_span: Span,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceFile {
    pub decls: Vec<Decl>,
}

/// 1-based line and column of a byte offset.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    pub(crate) fn at(src: &str, offset: usize, expected: Vec<String>, found: String) -> ParseError {
        let (line, col) = line_col(src, offset);
        ParseError {
            offset,
            line,
            col,
            expected,
            found,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expected {}, found {}", self.expected.join(" or "), self.found)
    }
}

impl std::error::Error for ParseError {}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}
