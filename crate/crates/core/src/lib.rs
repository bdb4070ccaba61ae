//! A small kernel for De Morgan cubical type theory: interval algebra,
//! cofibrations, partial elements, extension types, cubical subtypes,
//! coercion and composition, with a bidirectional checker and normalizer.

// Type errors carry the offending terms for messages; they are off the
// hot path, so their size does not matter.
#![allow(clippy::result_large_err)]

pub mod cofib;
pub mod eval;
pub mod interval;
pub mod surface;
pub mod syntax;
pub mod tyck;

pub use cofib::{Cond, Conj, Disj, Endpoint};
pub use eval::Value;
pub use interval::{IExpr, INormal};
pub use surface::{parse_file, parse_term, pretty, Decl, ParseError, SourceFile};
pub use syntax::{alpha_eq, Face, Name, Term};
pub use tyck::{Context, Def, TypeError};
