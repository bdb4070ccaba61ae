//! Cofibrations in disjunctive normal form.
//!
//! A cofibration is a disjunction of conjunctions of endpoint conditions
//! `x = 0` / `x = 1`. Constructors keep clauses simplified: no contradictory
//! conjunct, no clause subsumed by another, sorted order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::interval::{self, IExpr};
use crate::syntax::{name, Name};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    Zero,
    One,
}

impl Endpoint {
    pub fn flip(self) -> Endpoint {
        match self {
            Endpoint::Zero => Endpoint::One,
            Endpoint::One => Endpoint::Zero,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Endpoint::Zero => "0",
            Endpoint::One => "1",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cond {
    pub var: Name,
    pub value: Endpoint,
}

impl Cond {
    pub fn new(var: &str, value: Endpoint) -> Cond {
        Cond { var: name(var), value }
    }
}

/// Conjunction of conditions. The empty conjunction is `⊤`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Conj {
    pub conds: Vec<Cond>,
}

impl Conj {
    pub fn single(var: &str, value: Endpoint) -> Conj {
        Conj {
            conds: vec![Cond::new(var, value)],
        }
    }

    /// Builds a simplified conjunction, or `None` if it is contradictory.
    pub fn from_conds(conds: impl IntoIterator<Item = Cond>) -> Option<Conj> {
        simplify_conj(&Conj {
            conds: conds.into_iter().collect(),
        })
    }

    pub fn is_top(&self) -> bool {
        self.conds.is_empty()
    }

    /// Meet of two conjunctions, `None` when contradictory.
    pub fn meet(&self, other: &Conj) -> Option<Conj> {
        Conj::from_conds(self.conds.iter().chain(&other.conds).cloned())
    }

    fn subsumes(&self, other: &Conj) -> bool {
        // self ⊆ other as sets of conditions; both are sorted
        self.conds.iter().all(|c| other.conds.binary_search(c).is_ok())
    }
}

/// Sorts and deduplicates, returning `None` if some variable is asked to be
/// both `0` and `1`.
pub fn simplify_conj(c: &Conj) -> Option<Conj> {
    let mut conds = c.conds.clone();
    conds.sort();
    conds.dedup();
    if conds.windows(2).any(|w| w[0].var == w[1].var) {
        return None;
    }
    Some(Conj { conds })
}

/// Cofibration in DNF.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Disj {
    Absurd,
    Truth,
    /// Non-empty list of non-empty, pairwise non-subsuming, sorted clauses.
    Clauses(Vec<Conj>),
}

impl Disj {
    /// Normalizing constructor from raw clauses (which may be
    /// contradictory, unsorted or redundant).
    pub fn from_conjs(conjs: impl IntoIterator<Item = Conj>) -> Disj {
        let mut cs: Vec<Conj> = conjs.into_iter().filter_map(|c| simplify_conj(&c)).collect();
        if cs.iter().any(Conj::is_top) {
            return Disj::Truth;
        }
        if cs.is_empty() {
            return Disj::Absurd;
        }
        cs.sort();
        cs.dedup();
        let kept: Vec<Conj> = cs
            .iter()
            .enumerate()
            .filter(|(i, c)| {
                !cs.iter()
                    .enumerate()
                    .any(|(j, d)| *i != j && d.subsumes(c) && d != *c)
            })
            .map(|(_, c)| c.clone())
            .collect();
        Disj::Clauses(kept)
    }

    pub fn cond(var: &str, value: Endpoint) -> Disj {
        Disj::Clauses(vec![Conj::single(var, value)])
    }

    pub fn from_conj(c: Conj) -> Disj {
        Disj::from_conjs([c])
    }

    /// The clauses; `Truth` yields the single empty conjunction.
    pub fn conjs(&self) -> Vec<Conj> {
        match self {
            Disj::Absurd => Vec::new(),
            Disj::Truth => vec![Conj::default()],
            Disj::Clauses(cs) => cs.clone(),
        }
    }

    pub fn is_truth(&self) -> bool {
        matches!(self, Disj::Truth)
    }

    pub fn is_absurd(&self) -> bool {
        matches!(self, Disj::Absurd)
    }

    pub fn or(&self, other: &Disj) -> Disj {
        Disj::from_conjs(self.conjs().into_iter().chain(other.conjs()))
    }

    pub fn and(&self, other: &Disj) -> Disj {
        let mut out = Vec::new();
        for a in self.conjs() {
            for b in other.conjs() {
                if let Some(c) = a.meet(&b) {
                    out.push(c);
                }
            }
        }
        Disj::from_conjs(out)
    }

    pub fn vars(&self) -> BTreeSet<Name> {
        self.conjs()
            .iter()
            .flat_map(|c| c.conds.iter().map(|d| d.var.clone()))
            .collect()
    }
}

impl fmt::Display for Conj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conds.is_empty() {
            return f.write_str("TOP");
        }
        for (i, c) in self.conds.iter().enumerate() {
            if i > 0 {
                f.write_str(" /\\ ")?;
            }
            write!(f, "{} = {}", c.var, c.value)?;
        }
        Ok(())
    }
}

impl fmt::Display for Disj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Disj::Absurd => f.write_str("BOT"),
            Disj::Truth => f.write_str("TOP"),
            Disj::Clauses(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" \\/ ")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
        }
    }
}

/// Rewrites one condition under an interval substitution.
pub fn subst_cond(c: &Cond, s: &BTreeMap<Name, IExpr>) -> Disj {
    match s.get(&c.var) {
        None => Disj::Clauses(vec![Conj {
            conds: vec![c.clone()],
        }]),
        Some(IExpr::Var(y)) => Disj::Clauses(vec![Conj {
            conds: vec![Cond {
                var: y.clone(),
                value: c.value,
            }],
        }]),
        Some(IExpr::Zero) if c.value == Endpoint::Zero => Disj::Truth,
        Some(IExpr::One) if c.value == Endpoint::One => Disj::Truth,
        Some(IExpr::Zero) | Some(IExpr::One) => Disj::Absurd,
        // x = 1 holds where e does; x = 0 where ~e does
        Some(e) => match c.value {
            Endpoint::One => interval::to_cofib(e),
            Endpoint::Zero => interval::to_cofib(&IExpr::Neg(Box::new(e.clone()))),
        },
    }
}

pub fn subst_conj(c: &Conj, s: &BTreeMap<Name, IExpr>) -> Disj {
    if s.is_empty() {
        return Disj::from_conj(c.clone());
    }
    c.conds
        .iter()
        .fold(Disj::Truth, |acc, cond| acc.and(&subst_cond(cond, s)))
}

pub fn subst_cofib(d: &Disj, s: &BTreeMap<Name, IExpr>) -> Disj {
    match d {
        Disj::Absurd | Disj::Truth => d.clone(),
        Disj::Clauses(cs) => Disj::from_conjs(cs.iter().flat_map(|c| subst_conj(c, s).conjs())),
    }
}

/// The endpoint assignment a consistent conjunction denotes. `None` for a
/// contradictory conjunction.
pub fn conj_to_subst(c: &Conj) -> Option<BTreeMap<Name, Endpoint>> {
    let c = simplify_conj(c)?;
    Some(c.conds.into_iter().map(|d| (d.var, d.value)).collect())
}

/// The same assignment as interval expressions, for use with `subst_cofib`.
pub fn conj_to_isubst(c: &Conj) -> Option<BTreeMap<Name, IExpr>> {
    conj_to_subst(c).map(|m| {
        m.into_iter()
            .map(|(k, v)| {
                let e = match v {
                    Endpoint::Zero => IExpr::Zero,
                    Endpoint::One => IExpr::One,
                };
                (k, e)
            })
            .collect()
    })
}

/// Does the conjunction `theta` force `d` to hold?
///
/// A contradictory `theta` entails everything.
pub fn entails(theta: &Conj, d: &Disj) -> bool {
    match conj_to_isubst(theta) {
        None => true,
        Some(s) => subst_cofib(d, &s).is_truth(),
    }
}

/// Every clause of `a` entails `b`.
pub fn disj_entails(a: &Disj, b: &Disj) -> bool {
    a.conjs().iter().all(|c| entails(c, b))
}

pub fn cofib_equiv(a: &Disj, b: &Disj) -> bool {
    disj_entails(a, b) && disj_entails(b, a)
}

/// All variables of `d` are accepted by `is_interval`.
pub fn well_formed_with(is_interval: impl Fn(&Name) -> bool, d: &Disj) -> bool {
    d.vars().iter().all(is_interval)
}

pub fn well_formed(psi: &BTreeSet<Name>, d: &Disj) -> bool {
    well_formed_with(|x| psi.contains(x), d)
}
