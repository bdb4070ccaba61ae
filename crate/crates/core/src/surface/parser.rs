use std::collections::BTreeSet;
use std::sync::Arc;

use crate::cofib::{Conj, Disj, Endpoint};
use crate::syntax::{name, resolve_globals, Face, Name, Term};

use super::lexer::{lex, Tok, Token};
use super::{Decl, ParseError, SourceFile, Span};

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    /// Furthest failure seen, for error reporting after backtracking.
    expected: Vec<String>,
    expected_at: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> PResult<Self> {
        Ok(Parser {
            src,
            toks: lex(src)?,
            pos: 0,
            expected: Vec::new(),
            expected_at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].start
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&mut self, expected: &[&str]) -> ParseError {
        let off = self.offset();
        if off > self.expected_at || self.expected.is_empty() {
            self.expected = expected.iter().map(|s| s.to_string()).collect();
            self.expected_at = off;
        } else if off == self.expected_at {
            for e in expected {
                if !self.expected.iter().any(|x| x == e) {
                    self.expected.push(e.to_string());
                }
            }
        }
        let found = self.toks[self.pos].tok.describe();
        ParseError::at(self.src, off, self.expected.clone(), found)
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.error(&[&t.describe()]))
        }
    }

    fn ident(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(name(&x))
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn idents(&mut self) -> PResult<Vec<Name>> {
        let mut xs = vec![self.ident()?];
        while let Tok::Ident(_) = self.peek() {
            xs.push(self.ident()?);
        }
        Ok(xs)
    }

    // ---- declarations

    fn file(&mut self) -> PResult<SourceFile> {
        let mut decls: Vec<Decl> = Vec::new();
        let mut seen: BTreeSet<Name> = BTreeSet::new();
        while self.peek() != &Tok::Eof {
            let start = self.offset();
            self.expect(Tok::Def)?;
            let name_start = self.offset();
            let n = self.ident()?;
            let name_end = self.toks[self.pos - 1].end;
            if seen.contains(&n) {
                return Err(ParseError::at(
                    self.src,
                    name_start,
                    vec!["a fresh declaration name".into()],
                    format!("duplicate declaration `{n}`"),
                ));
            }
            let mut params = Vec::new();
            while self.peek() == &Tok::LParen {
                self.bump();
                let xs = self.idents()?;
                self.expect(Tok::Colon)?;
                let ty = self.term()?;
                self.expect(Tok::RParen)?;
                for x in xs {
                    params.push((x, ty.clone()));
                }
            }
            self.expect(Tok::Colon)?;
            let ret = self.term()?;
            self.expect(Tok::FatArrow)?;
            let body = self.term()?;
            let end = self.toks[self.pos.saturating_sub(1)].end;
            // earlier declarations are in scope; parameters shadow them
            let mut scope = seen.clone();
            let mut resolved = Vec::new();
            for (x, ty) in params {
                resolved.push((x.clone(), resolve_globals(&ty, &|y| scope.contains(y))));
                scope.remove(&x);
            }
            let ret = resolve_globals(&ret, &|y| scope.contains(y));
            let body = resolve_globals(&body, &|y| scope.contains(y));
            seen.insert(n.clone());
            decls.push(Decl {
                name: n,
                params: resolved,
                ret,
                body,
                span: Span { start, end },
                name_span: Span {
                    start: name_start,
                    end: name_end,
                },
            });
        }
        Ok(SourceFile { decls })
    }

    // ---- terms

    fn term(&mut self) -> PResult<Term> {
        match self.peek() {
            Tok::Backslash => {
                self.bump();
                self.eat(&Tok::LamKw);
                let xs = self.idents()?;
                self.expect(Tok::Dot)?;
                let body = self.term()?;
                Ok(xs
                    .into_iter()
                    .rev()
                    .fold(body, |acc, x| Term::Lam(x, Arc::new(acc))))
            }
            Tok::PathLam => {
                self.bump();
                let xs = self.idents()?;
                self.expect(Tok::Dot)?;
                let body = self.term()?;
                Ok(Term::PLam(xs, Arc::new(body)))
            }
            Tok::LParen if self.is_telescope() => {
                let mut groups = Vec::new();
                while self.peek() == &Tok::LParen && self.is_telescope() {
                    self.bump();
                    let xs = self.idents()?;
                    self.expect(Tok::Colon)?;
                    let ty = self.term()?;
                    self.expect(Tok::RParen)?;
                    groups.push((xs, ty));
                }
                self.expect(Tok::Arrow)?;
                let cod = self.term()?;
                Ok(groups.into_iter().rev().fold(cod, |acc, (xs, ty)| {
                    xs.into_iter()
                        .rev()
                        .fold(acc, |acc, x| Term::Pi(x, Arc::new(ty.clone()), Arc::new(acc)))
                }))
            }
            _ => {
                let dom = self.join()?;
                if self.eat(&Tok::Arrow) {
                    let cod = self.term()?;
                    Ok(Term::arrow(dom, cod))
                } else {
                    Ok(dom)
                }
            }
        }
    }

    /// `(` ident+ `:` begins a Π telescope group.
    fn is_telescope(&self) -> bool {
        let mut n = 1;
        if !matches!(self.peek_at(n), Tok::Ident(_)) {
            return false;
        }
        while matches!(self.peek_at(n), Tok::Ident(_)) {
            n += 1;
        }
        self.peek_at(n) == &Tok::Colon
    }

    fn join(&mut self) -> PResult<Term> {
        let mut t = self.meet()?;
        while self.eat(&Tok::Join) {
            let r = self.meet()?;
            t = Term::ior(t, r);
        }
        Ok(t)
    }

    fn meet(&mut self) -> PResult<Term> {
        let mut t = self.neg()?;
        while self.eat(&Tok::Meet) {
            let r = self.neg()?;
            t = Term::iand(t, r);
        }
        Ok(t)
    }

    fn neg(&mut self) -> PResult<Term> {
        if self.eat(&Tok::Tilde) {
            Ok(Term::ineg(self.neg()?))
        } else {
            self.app()
        }
    }

    fn app(&mut self) -> PResult<Term> {
        let mut head = match self.peek() {
            Tok::Partial => {
                self.bump();
                let d = self.cof_atom()?;
                let a = self.atom()?;
                Term::partial_ty(d, a)
            }
            Tok::Ext => {
                self.bump();
                self.expect(Tok::LParen)?;
                let xs = self.idents()?;
                self.expect(Tok::RParen)?;
                let a = self.atom()?;
                let faces = if self.peek() == &Tok::SysOpen {
                    self.system_faces()?
                } else {
                    Vec::new()
                };
                Term::ExtTy(xs, Arc::new(a), faces)
            }
            Tok::Sub => {
                self.bump();
                let a = self.atom()?;
                let d = self.cof_atom()?;
                let faces = self.system_faces()?;
                Term::sub(a, d, faces)
            }
            Tok::InS => {
                self.bump();
                let d = self.cof_atom()?;
                Term::in_s(d, self.atom()?)
            }
            Tok::OutS => {
                self.bump();
                let d = self.cof_atom()?;
                Term::out_s(d, self.atom()?)
            }
            Tok::Coe => {
                self.bump();
                let d = self.cof_atom()?;
                let line = self.line_atom()?;
                Term::coe(line, d)
            }
            Tok::HComp => {
                self.bump();
                let d = self.cof_atom()?;
                let a = self.atom()?;
                let w = self.atom()?;
                let u = self.atom()?;
                Term::hcomp(a, w, u, d)
            }
            _ => self.postfix()?,
        };
        while self.starts_atom() {
            let arg = self.postfix()?;
            head = Term::app(head, arg);
        }
        Ok(head)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_) | Tok::Univ | Tok::Interval | Tok::Zero | Tok::One | Tok::LParen | Tok::SysOpen
        )
    }

    fn postfix(&mut self) -> PResult<Term> {
        let head = self.atom()?;
        let mut args = Vec::new();
        while self.eat(&Tok::At) {
            args.push(self.atom()?);
        }
        Ok(if args.is_empty() { head } else { Term::papp(head, args) })
    }

    /// A type line: `(\^i. A)` is read as an ordinary function of `i`.
    fn line_atom(&mut self) -> PResult<Term> {
        let start = self.offset();
        match self.atom()? {
            Term::PLam(xs, body) => {
                if xs.len() != 1 {
                    return Err(ParseError::at(
                        self.src,
                        start,
                        vec!["a type line binding one interval variable".into()],
                        format!("a path abstraction over {} variables", xs.len()),
                    ));
                }
                Ok(Term::Lam(xs[0].clone(), body))
            }
            t => Ok(t),
        }
    }

    fn atom(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(Term::Var(name(&x)))
            }
            Tok::Univ => {
                self.bump();
                Ok(Term::Univ)
            }
            Tok::Interval => {
                self.bump();
                Ok(Term::Interval)
            }
            Tok::Zero => {
                self.bump();
                Ok(Term::zero())
            }
            Tok::One => {
                self.bump();
                Ok(Term::one())
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::SysOpen => self.system(),
            _ => Err(self.error(&["a term"])),
        }
    }

    // ---- partial elements

    /// `[| cof -> t | ... |]` or the trivial `[| t |]`.
    fn system(&mut self) -> PResult<Term> {
        let save = self.pos;
        self.expect(Tok::SysOpen)?;
        if self.eat(&Tok::SysClose) {
            return Ok(Term::PartialEl(Vec::new()));
        }
        let face_start = self.pos;
        let (expected, expected_at) = (self.expected.clone(), self.expected_at);
        let is_face = self.cof().is_ok() && self.peek() == &Tok::Arrow;
        self.pos = face_start;
        self.expected = expected;
        self.expected_at = expected_at;
        if is_face {
            self.pos = save;
            return Ok(Term::PartialEl(self.system_faces()?));
        }
        let t = self.term()?;
        self.expect(Tok::SysClose)?;
        Ok(Term::trivial(t))
    }

    fn system_faces(&mut self) -> PResult<Vec<Face>> {
        self.expect(Tok::SysOpen)?;
        let mut faces = Vec::new();
        if self.eat(&Tok::SysClose) {
            return Ok(faces);
        }
        loop {
            let d = self.cof()?;
            self.expect(Tok::Arrow)?;
            let body = self.term()?;
            for c in d.conjs() {
                faces.push(Face::new(c, body.clone()));
            }
            if self.eat(&Tok::SysClose) {
                return Ok(faces);
            }
            if !self.eat(&Tok::Bar) {
                return Err(self.error(&["`|`", "`|]`"]));
            }
        }
    }

    // ---- cofibrations

    /// A cofibration argument of a keyword form: a constant, a single
    /// condition, or a parenthesized cofibration.
    fn cof_atom(&mut self) -> PResult<Disj> {
        match self.peek() {
            Tok::Top => {
                self.bump();
                Ok(Disj::Truth)
            }
            Tok::Bot => {
                self.bump();
                Ok(Disj::Absurd)
            }
            Tok::LParen => {
                self.bump();
                let d = self.cof()?;
                self.expect(Tok::RParen)?;
                Ok(d)
            }
            Tok::Ident(_) => self.cond(),
            _ => Err(self.error(&["a cofibration"])),
        }
    }

    fn cof(&mut self) -> PResult<Disj> {
        let mut d = self.cof_conj()?;
        while self.eat(&Tok::Join) {
            let r = self.cof_conj()?;
            d = d.or(&r);
        }
        Ok(d)
    }

    fn cof_conj(&mut self) -> PResult<Disj> {
        let mut d = self.cof_atom()?;
        while self.eat(&Tok::Meet) {
            let r = self.cof_atom()?;
            d = d.and(&r);
        }
        Ok(d)
    }

    fn cond(&mut self) -> PResult<Disj> {
        let x = self.ident()?;
        self.expect(Tok::Eq)?;
        let value = match self.peek() {
            Tok::Zero => Endpoint::Zero,
            Tok::One => Endpoint::One,
            _ => return Err(self.error(&["`0`", "`1`"])),
        };
        self.bump();
        Ok(Disj::from_conj(Conj {
            conds: vec![crate::cofib::Cond { var: x, value }],
        }))
    }
}

pub fn parse_file(src: &str) -> PResult<SourceFile> {
    Parser::new(src)?.file()
}

pub fn parse_term(src: &str) -> PResult<Term> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    if p.peek() != &Tok::Eof {
        return Err(p.error(&["end of input"]));
    }
    Ok(t)
}

/// Parses `a == b : T` as used by the REPL's conversion command.
pub fn parse_conv_query(src: &str) -> PResult<(Term, Term, Term)> {
    let mut p = Parser::new(src)?;
    let a = p.term()?;
    p.expect(Tok::EqEq)?;
    let b = p.term()?;
    p.expect(Tok::Colon)?;
    let ty = p.term()?;
    if p.peek() != &Tok::Eof {
        return Err(p.error(&["end of input"]));
    }
    Ok((a, b, ty))
}

/// Parses `t : T`.
pub fn parse_typed(src: &str) -> PResult<(Term, Term)> {
    let mut p = Parser::new(src)?;
    let a = p.term()?;
    p.expect(Tok::Colon)?;
    let ty = p.term()?;
    if p.peek() != &Tok::Eof {
        return Err(p.error(&["end of input"]));
    }
    Ok((a, ty))
}

/// Parses `x y ... : T`.
pub fn parse_assumption(src: &str) -> PResult<(Vec<Name>, Term)> {
    let mut p = Parser::new(src)?;
    let xs = p.idents()?;
    p.expect(Tok::Colon)?;
    let ty = p.term()?;
    if p.peek() != &Tok::Eof {
        return Err(p.error(&["end of input"]));
    }
    Ok((xs, ty))
}
