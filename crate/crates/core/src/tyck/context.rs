use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::cofib::Disj;
use crate::eval;
use crate::syntax::{fresh_name, subst, Name, Subst, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    Interval,
    Typed(Term),
    /// A binder whose type is not known. Only the normalizer's untyped
    /// fallback introduces these.
    Untyped,
}

/// A checked top-level declaration, closed over its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Def {
    pub ty: Term,
    pub value: Term,
}

/// Interval and term bindings in a single ordered sequence, plus the
/// declarations in scope and the active cofibration restriction.
#[derive(Clone, Debug)]
pub struct Context {
    entries: Vec<(Name, Binding)>,
    globals: Arc<BTreeMap<Name, Def>>,
    pub restriction: Disj,
}

impl Default for Context {
    fn default() -> Self {
        Context::new()
    }
}

impl Context {
    pub fn new() -> Context {
        Context {
            entries: Vec::new(),
            globals: Arc::new(BTreeMap::new()),
            restriction: Disj::Truth,
        }
    }

    pub fn entries(&self) -> &[(Name, Binding)] {
        &self.entries
    }

    pub fn lookup(&self, x: &str) -> Option<&Binding> {
        self.entries.iter().rev().find(|(y, _)| &**y == x).map(|(_, b)| b)
    }

    pub fn global(&self, x: &str) -> Option<&Def> {
        self.globals.get(x)
    }

    pub fn globals(&self) -> &BTreeMap<Name, Def> {
        &self.globals
    }

    pub fn add_global(&mut self, name: Name, def: Def) {
        Arc::make_mut(&mut self.globals).insert(name, def);
    }

    pub fn is_interval(&self, x: &str) -> bool {
        matches!(self.lookup(x), Some(Binding::Interval))
    }

    pub fn interval_names(&self) -> BTreeSet<Name> {
        self.entries
            .iter()
            .filter(|(_, b)| *b == Binding::Interval)
            .map(|(x, _)| x.clone())
            .collect()
    }

    pub fn push(&mut self, x: Name, b: Binding) {
        self.entries.push((x, b));
    }

    pub fn extend(&self, x: Name, b: Binding) -> Context {
        let mut c = self.clone();
        c.push(x, b);
        c
    }

    pub fn extend_intervals(&self, xs: &[Name]) -> Context {
        let mut c = self.clone();
        for x in xs {
            c.push(x.clone(), Binding::Interval);
        }
        c
    }

    /// Binds `x : ty`, recording an interval binding when `ty` is `I`.
    pub fn extend_typed(&self, x: Name, ty: &Term) -> Context {
        let b = if matches!(eval::whnf(self, ty), Term::Interval) {
            Binding::Interval
        } else {
            Binding::Typed(ty.clone())
        };
        self.extend(x, b)
    }

    pub fn with_restriction(&self, d: Disj) -> Context {
        Context {
            restriction: d,
            ..self.clone()
        }
    }

    /// Applies a substitution to every recorded type. Used to move into a
    /// face of a cofibration.
    pub fn restrict(&self, s: &Subst) -> Context {
        if s.is_empty() {
            return self.clone();
        }
        Context {
            entries: self
                .entries
                .iter()
                .map(|(x, b)| {
                    let b = match b {
                        Binding::Typed(t) => Binding::Typed(subst(t, s)),
                        other => other.clone(),
                    };
                    (x.clone(), b)
                })
                .collect(),
            globals: self.globals.clone(),
            restriction: crate::syntax::subst_disj(&self.restriction, s),
        }
    }

    fn taken(&self, x: &str, avoid: &BTreeSet<Name>) -> bool {
        avoid.contains(x) || self.lookup(x).is_some() || self.globals.contains_key(x)
    }

    /// A name based on `base` unused in the context and outside `avoid`.
    pub fn fresh(&self, base: &str, avoid: &BTreeSet<Name>) -> Name {
        fresh_name(base, |x| self.taken(x, avoid))
    }

    /// Keeps `x` when it is free to use, otherwise picks a fresh name.
    pub fn fresh_binder(&self, x: &Name, avoid: &BTreeSet<Name>) -> Name {
        if &**x == "_" || !self.taken(x, avoid) {
            x.clone()
        } else {
            self.fresh(x, avoid)
        }
    }
}
