use std::fmt::Write;

use crate::cofib::Disj;
use crate::syntax::{free_names, Face, Term};

// precedence levels, loosest first
const TERM: u8 = 0;
const JOIN: u8 = 1;
const MEET: u8 = 2;
const NEG: u8 = 3;
const APP: u8 = 4;
const POSTFIX: u8 = 5;
const ATOM: u8 = 6;

fn level(t: &Term) -> u8 {
    match t {
        Term::Lam(..) | Term::PLam(..) | Term::Pi(..) => TERM,
        Term::IOr(..) => JOIN,
        Term::IAnd(..) => MEET,
        Term::INeg(_) => NEG,
        Term::App(..)
        | Term::PartialTy(..)
        | Term::ExtTy(..)
        | Term::SubTy(..)
        | Term::InS(..)
        | Term::OutS(..)
        | Term::Coe(..)
        | Term::HComp { .. } => APP,
        Term::PApp(..) => POSTFIX,
        Term::Var(_)
        | Term::Global(_)
        | Term::Univ
        | Term::Interval
        | Term::IConst(_)
        | Term::PartialEl(_)
        | Term::TrivialPartial(_) => ATOM,
    }
}

/// Renders a term in surface syntax with as few parentheses as the
/// grammar allows.
pub fn pretty(t: &Term) -> String {
    let mut out = String::new();
    go(t, TERM, &mut out);
    out
}

fn go(t: &Term, min: u8, out: &mut String) {
    if level(t) < min {
        out.push('(');
        go(t, TERM, out);
        out.push(')');
        return;
    }
    match t {
        Term::Var(x) | Term::Global(x) => out.push_str(x),
        Term::Univ => out.push('U'),
        Term::Interval => out.push('I'),
        Term::IConst(e) => write!(out, "{e}").unwrap(),
        Term::Lam(..) => {
            out.push('\\');
            let mut t = t;
            let mut first = true;
            while let Term::Lam(x, b) = t {
                if !first {
                    out.push(' ');
                }
                out.push_str(x);
                first = false;
                t = b;
            }
            out.push_str(". ");
            go(t, TERM, out);
        }
        Term::PLam(xs, b) => {
            out.push_str("\\^");
            out.push_str(&xs.join(" "));
            out.push_str(". ");
            go(b, TERM, out);
        }
        Term::Pi(x, a, b) => {
            if &**x == "_" || !free_names(b).contains(x) {
                go(a, JOIN, out);
                out.push_str(" -> ");
                go(b, TERM, out);
            } else {
                let mut t = t;
                while let Term::Pi(x, a, b) = t {
                    if &**x == "_" || !free_names(b).contains(x) {
                        break;
                    }
                    write!(out, "({x} : ").unwrap();
                    go(a, TERM, out);
                    out.push_str(") ");
                    t = b;
                }
                out.push_str("-> ");
                go(t, TERM, out);
            }
        }
        Term::IOr(a, b) => {
            go(a, JOIN, out);
            out.push_str(" \\/ ");
            go(b, MEET, out);
        }
        Term::IAnd(a, b) => {
            go(a, MEET, out);
            out.push_str(" /\\ ");
            go(b, NEG, out);
        }
        Term::INeg(a) => {
            out.push('~');
            go(a, NEG, out);
        }
        Term::App(f, a) => {
            go(f, APP, out);
            out.push(' ');
            go(a, POSTFIX, out);
        }
        Term::PApp(f, args) => {
            go(f, ATOM, out);
            for a in args {
                out.push_str(" @ ");
                go(a, ATOM, out);
            }
        }
        Term::PartialEl(faces) => system(faces, out),
        Term::TrivialPartial(a) => {
            out.push_str("[| ");
            go(a, TERM, out);
            out.push_str(" |]");
        }
        Term::PartialTy(d, a) => {
            out.push_str("Partial ");
            cof_atom(d, out);
            out.push(' ');
            go(a, ATOM, out);
        }
        Term::ExtTy(xs, a, faces) => {
            write!(out, "Ext ({}) ", xs.join(" ")).unwrap();
            go(a, ATOM, out);
            out.push(' ');
            system(faces, out);
        }
        Term::SubTy(a, d, faces) => {
            out.push_str("Sub ");
            go(a, ATOM, out);
            out.push(' ');
            cof_atom(d, out);
            out.push(' ');
            system(faces, out);
        }
        Term::InS(d, a) | Term::OutS(d, a) => {
            out.push_str(if matches!(t, Term::InS(..)) { "inS " } else { "outS " });
            cof_atom(d, out);
            out.push(' ');
            go(a, ATOM, out);
        }
        Term::Coe(line, d) => {
            out.push_str("coe ");
            cof_atom(d, out);
            out.push(' ');
            match &**line {
                Term::Lam(x, b) => {
                    write!(out, "(\\^{x}. ").unwrap();
                    go(b, TERM, out);
                    out.push(')');
                }
                other => go(other, ATOM, out),
            }
        }
        Term::HComp {
            carrier,
            walls,
            floor,
            cofib,
        } => {
            out.push_str("hcomp ");
            cof_atom(cofib, out);
            for a in [carrier, walls, floor] {
                out.push(' ');
                go(a, ATOM, out);
            }
        }
    }
}

fn cof_atom(d: &Disj, out: &mut String) {
    match d {
        Disj::Truth | Disj::Absurd => write!(out, "{d}").unwrap(),
        Disj::Clauses(_) => write!(out, "({d})").unwrap(),
    }
}

fn system(faces: &[Face], out: &mut String) {
    if faces.is_empty() {
        out.push_str("[| |]");
        return;
    }
    out.push_str("[| ");
    for (i, f) in faces.iter().enumerate() {
        if i > 0 {
            out.push_str(" | ");
        }
        write!(out, "{} -> ", f.cofib).unwrap();
        go(&f.body, TERM, out);
    }
    out.push_str(" |]");
}
