//! Driver logic for the `cubik` binary, kept in a library so the commands
//! can be exercised against in-memory writers.

#![allow(clippy::result_large_err)]

use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use cubik_core::eval::normalize;
use cubik_core::surface::{self, line_col, parse_assumption, parse_conv_query, parse_typed, Decl};
use cubik_core::syntax::{resolve_globals, Name, Term};
use cubik_core::tyck::{self, Context};
use cubik_core::{pretty, ParseError, TypeError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TYPE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_UNKNOWN: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Position {
    pub file: String,
    pub line: usize,
    pub col: usize,
}

/// A located checker or parser message with a stable code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub position: Option<Position>,
    pub code: &'static str,
    pub message: String,
    /// Endpoint assignment under which a disagreement was found.
    pub counterexample: Option<String>,
}

impl Diagnostic {
    pub fn from_type_error(position: Option<Position>, e: &TypeError) -> Diagnostic {
        let counterexample = e.witness().map(|c| {
            let parts: Vec<String> = c.conds.iter().map(|d| format!("{}/{}", d.value, d.var)).collect();
            format!("[{}]", parts.join(", "))
        });
        Diagnostic {
            severity: Severity::Error,
            position,
            code: e.code(),
            message: e.to_string(),
            counterexample,
        }
    }

    pub fn from_parse_error(file: Option<&str>, e: &ParseError) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            position: file.map(|f| Position {
                file: f.to_string(),
                line: e.line,
                col: e.col,
            }),
            code: "E-PARSE",
            message: e.to_string(),
            counterexample: None,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = &self.position {
            write!(f, "{}:{}:{}: ", p.file, p.line, p.col)?;
        }
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}]: {}", self.code, self.message)?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// Result of checking a whole file.
pub struct Checked {
    pub ctx: Context,
    pub accepted: Vec<Name>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Checks declarations in order. A rejected declaration stays out of
/// scope for the ones after it.
pub fn check_decls(ctx: &Context, file: &str, src: &str, decls: &[Decl]) -> Checked {
    let mut ctx = ctx.clone();
    let mut accepted = Vec::new();
    let mut diagnostics = Vec::new();
    for d in decls {
        match tyck::check_def(&ctx, &d.params, &d.ret, &d.body) {
            Ok(def) => {
                ctx.add_global(d.name.clone(), def);
                accepted.push(d.name.clone());
            }
            Err(e) => {
                let (line, col) = line_col(src, d.name_span.start);
                let pos = Position {
                    file: file.to_string(),
                    line,
                    col,
                };
                diagnostics.push(Diagnostic::from_type_error(Some(pos), &e));
            }
        }
    }
    Checked {
        ctx,
        accepted,
        diagnostics,
    }
}

fn read(path: &Path, err: &mut dyn Write) -> Result<String, i32> {
    std::fs::read_to_string(path).map_err(|e| {
        let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
        EXIT_IO
    })
}

/// `cubik check FILE`.
pub fn cmd_check(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let src = match read(path, err) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let file = path.display().to_string();
    let parsed = match surface::parse_file(&src) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(err, "{}", Diagnostic::from_parse_error(Some(&file), &e));
            return EXIT_PARSE;
        }
    };
    let checked = check_decls(&Context::new(), &file, &src, &parsed.decls);
    let mut diags = checked.diagnostics.iter();
    // report in declaration order
    for d in &parsed.decls {
        if checked.accepted.contains(&d.name) {
            let _ = writeln!(out, "OK {}", d.name);
        } else if let Some(diag) = diags.next() {
            let _ = writeln!(err, "{diag}");
        }
    }
    if checked.diagnostics.is_empty() {
        EXIT_OK
    } else {
        EXIT_TYPE
    }
}

/// `cubik normalize FILE --def NAME`: the normal form of the body, under
/// the declaration's parameters.
pub fn cmd_normalize(path: &Path, def: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let src = match read(path, err) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let file = path.display().to_string();
    let parsed = match surface::parse_file(&src) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(err, "{}", Diagnostic::from_parse_error(Some(&file), &e));
            return EXIT_PARSE;
        }
    };
    let Some(idx) = parsed.decls.iter().position(|d| &*d.name == def) else {
        let _ = writeln!(err, "error: no declaration named `{def}` in {file}");
        return EXIT_UNKNOWN;
    };
    let checked = check_decls(&Context::new(), &file, &src, &parsed.decls[..=idx]);
    if !checked.diagnostics.is_empty() {
        for d in &checked.diagnostics {
            let _ = writeln!(err, "{d}");
        }
        return EXIT_TYPE;
    }
    let d = &parsed.decls[idx];
    let _ = writeln!(out, "{}", pretty(&normal_form_of(&checked.ctx, d)));
    EXIT_OK
}

/// Normal form of a declaration's body in the context of its parameters.
pub fn normal_form_of(ctx: &Context, d: &Decl) -> Term {
    let cx = tyck::params_context(ctx, &d.params);
    normalize(&cx, &d.body, Some(&d.ret))
}

const USAGE: &str = "commands: :check <expr> : <type> | :infer <expr> | :norm <expr> | \
:conv <expr> == <expr> : <type> | :assume <names> : <type> | :load <file> | :quit";

pub enum Reply {
    Text(String),
    Quit,
}

/// Interactive session state: loaded declarations and assumptions.
pub struct Repl {
    pub ctx: Context,
}

impl Default for Repl {
    fn default() -> Self {
        Repl { ctx: Context::new() }
    }
}

impl Repl {
    fn resolve(&self, t: &Term) -> Term {
        let ctx = &self.ctx;
        resolve_globals(t, &|x| ctx.global(x).is_some() && ctx.lookup(x).is_none())
    }

    fn parse_error(e: &ParseError) -> String {
        Diagnostic::from_parse_error(None, e).to_string()
    }

    fn type_error(e: &TypeError) -> String {
        Diagnostic::from_type_error(None, e).to_string()
    }

    pub fn handle(&mut self, line: &str) -> Reply {
        let line = line.trim();
        let (cmd, rest) = match line.split_once(char::is_whitespace) {
            Some((c, r)) => (c, r.trim()),
            None => (line, ""),
        };
        let text = match cmd {
            "" => return Reply::Text(String::new()),
            ":quit" | ":q" => return Reply::Quit,
            ":check" => match parse_typed(rest) {
                Ok((t, ty)) => {
                    let (t, ty) = (self.resolve(&t), self.resolve(&ty));
                    match tyck::check_type(&self.ctx, &ty).and_then(|_| tyck::check(&self.ctx, &t, &ty)) {
                        Ok(()) => "ok".to_string(),
                        Err(e) => Self::type_error(&e),
                    }
                }
                Err(e) => Self::parse_error(&e),
            },
            ":infer" => match surface::parse_term(rest) {
                Ok(t) => match tyck::infer(&self.ctx, &self.resolve(&t)) {
                    Ok(ty) => pretty(&normalize(&self.ctx, &ty, Some(&Term::Univ))),
                    Err(e) => Self::type_error(&e),
                },
                Err(e) => Self::parse_error(&e),
            },
            ":norm" => match surface::parse_term(rest) {
                Ok(t) => {
                    let t = self.resolve(&t);
                    match tyck::infer(&self.ctx, &t) {
                        Ok(ty) => pretty(&normalize(&self.ctx, &t, Some(&ty))),
                        Err(TypeError::CannotInfer(_)) => pretty(&normalize(&self.ctx, &t, None)),
                        Err(e) => Self::type_error(&e),
                    }
                }
                Err(e) => Self::parse_error(&e),
            },
            ":conv" => match parse_conv_query(rest) {
                Ok((a, b, ty)) => {
                    let (a, b, ty) = (self.resolve(&a), self.resolve(&b), self.resolve(&ty));
                    let checked = tyck::check_type(&self.ctx, &ty)
                        .and_then(|_| tyck::check(&self.ctx, &a, &ty))
                        .and_then(|_| tyck::check(&self.ctx, &b, &ty));
                    match checked {
                        Ok(()) if tyck::convert(&self.ctx, &a, &b, &ty) => "yes".to_string(),
                        Ok(()) => "no".to_string(),
                        Err(e) => Self::type_error(&e),
                    }
                }
                Err(e) => Self::parse_error(&e),
            },
            ":assume" => match parse_assumption(rest) {
                Ok((xs, ty)) => {
                    let ty = self.resolve(&ty);
                    match tyck::check_type(&self.ctx, &ty) {
                        Ok(_) => {
                            for x in &xs {
                                self.ctx = self.ctx.extend_typed(x.clone(), &ty);
                            }
                            let names: Vec<&str> = xs.iter().map(|x| &**x).collect();
                            format!("assumed {}", names.join(" "))
                        }
                        Err(e) => Self::type_error(&e),
                    }
                }
                Err(e) => Self::parse_error(&e),
            },
            ":load" => self.load(Path::new(rest)),
            _ => USAGE.to_string(),
        };
        Reply::Text(text)
    }

    fn load(&mut self, path: &Path) -> String {
        let src = match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => return format!("error: cannot read {}: {e}", path.display()),
        };
        let file = path.display().to_string();
        let parsed = match surface::parse_file(&src) {
            Ok(f) => f,
            Err(e) => return Diagnostic::from_parse_error(Some(&file), &e).to_string(),
        };
        let checked = check_decls(&self.ctx, &file, &src, &parsed.decls);
        self.ctx = checked.ctx;
        let mut lines: Vec<String> = checked.diagnostics.iter().map(|d| d.to_string()).collect();
        lines.push(format!("loaded {} declarations", checked.accepted.len()));
        lines.join("\n")
    }
}

/// `cubik repl`: reads commands line by line until `:quit` or end of input.
pub fn cmd_repl(input: &mut dyn BufRead, out: &mut dyn Write) -> i32 {
    let mut repl = Repl::default();
    let mut line = String::new();
    loop {
        let _ = write!(out, "> ");
        let _ = out.flush();
        line.clear();
        match input.read_line(&mut line) {
            Ok(0) => return EXIT_OK,
            Ok(_) => {}
            Err(e) => {
                let _ = writeln!(out, "error: {e}");
                return EXIT_IO;
            }
        }
        match repl.handle(&line) {
            Reply::Quit => return EXIT_OK,
            Reply::Text(t) if t.is_empty() => {}
            Reply::Text(t) => {
                let _ = writeln!(out, "{t}");
            }
        }
    }
}
