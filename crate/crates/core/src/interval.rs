//! The De Morgan interval: free De Morgan algebra on interval variables.
//!
//! Normal forms are antichains of clauses, each clause a meet of literals
//! `x` or `~x`. Note that `x /\ ~x` is a genuine element distinct from `0`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::cofib::{Cond, Conj, Disj, Endpoint};
use crate::syntax::{name, Name, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IExpr {
    Zero,
    One,
    Var(Name),
    Neg(Box<IExpr>),
    And(Box<IExpr>, Box<IExpr>),
    Or(Box<IExpr>, Box<IExpr>),
}

impl IExpr {
    pub fn var(x: &str) -> IExpr {
        IExpr::Var(name(x))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: IExpr) -> IExpr {
        IExpr::Neg(Box::new(e))
    }

    pub fn and(a: IExpr, b: IExpr) -> IExpr {
        IExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: IExpr, b: IExpr) -> IExpr {
        IExpr::Or(Box::new(a), Box::new(b))
    }

    /// Reads an interval expression off a term. Variables are accepted
    /// whatever their type; callers know the position is an interval one.
    pub fn from_term(t: &Term) -> Option<IExpr> {
        Some(match t {
            Term::Var(x) => IExpr::Var(x.clone()),
            Term::IConst(Endpoint::Zero) => IExpr::Zero,
            Term::IConst(Endpoint::One) => IExpr::One,
            Term::INeg(a) => IExpr::neg(IExpr::from_term(a)?),
            Term::IAnd(a, b) => IExpr::and(IExpr::from_term(a)?, IExpr::from_term(b)?),
            Term::IOr(a, b) => IExpr::or(IExpr::from_term(a)?, IExpr::from_term(b)?),
            _ => return None,
        })
    }

    pub fn to_term(&self) -> Term {
        match self {
            IExpr::Zero => Term::zero(),
            IExpr::One => Term::one(),
            IExpr::Var(x) => Term::Var(x.clone()),
            IExpr::Neg(a) => Term::INeg(Arc::new(a.to_term())),
            IExpr::And(a, b) => Term::IAnd(Arc::new(a.to_term()), Arc::new(b.to_term())),
            IExpr::Or(a, b) => Term::IOr(Arc::new(a.to_term()), Arc::new(b.to_term())),
        }
    }

    pub fn vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Name>) {
        match self {
            IExpr::Zero | IExpr::One => {}
            IExpr::Var(x) => {
                out.insert(x.clone());
            }
            IExpr::Neg(a) => a.collect_vars(out),
            IExpr::And(a, b) | IExpr::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn subst(&self, s: &BTreeMap<Name, IExpr>) -> IExpr {
        match self {
            IExpr::Var(x) => s.get(x).cloned().unwrap_or_else(|| self.clone()),
            IExpr::Zero | IExpr::One => self.clone(),
            IExpr::Neg(a) => IExpr::neg(a.subst(s)),
            IExpr::And(a, b) => IExpr::and(a.subst(s), b.subst(s)),
            IExpr::Or(a, b) => IExpr::or(a.subst(s), b.subst(s)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Pos,
    Neg,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: Name,
    pub polarity: Polarity,
}

impl Literal {
    fn negate(&self) -> Literal {
        Literal {
            var: self.var.clone(),
            polarity: match self.polarity {
                Polarity::Pos => Polarity::Neg,
                Polarity::Neg => Polarity::Pos,
            },
        }
    }

    fn to_iexpr(&self) -> IExpr {
        let v = IExpr::Var(self.var.clone());
        match self.polarity {
            Polarity::Pos => v,
            Polarity::Neg => IExpr::neg(v),
        }
    }
}

/// Canonical form of an interval expression.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum INormal {
    Zero,
    One,
    /// Sorted antichain of sorted, non-empty clauses.
    Join(Vec<Vec<Literal>>),
}

impl INormal {
    pub fn to_iexpr(&self) -> IExpr {
        match self {
            INormal::Zero => IExpr::Zero,
            INormal::One => IExpr::One,
            INormal::Join(cs) => cs
                .iter()
                .map(|c| {
                    c.iter()
                        .map(Literal::to_iexpr)
                        .reduce(IExpr::and)
                        .expect("clauses are non-empty")
                })
                .reduce(IExpr::or)
                .expect("join is non-empty"),
        }
    }

    pub fn to_term(&self) -> Term {
        self.to_iexpr().to_term()
    }
}

type Clause = BTreeSet<Literal>;
type Clauses = BTreeSet<Clause>;

fn absorb(cs: Clauses) -> Clauses {
    cs.iter()
        .filter(|c| !cs.iter().any(|d| d != *c && d.is_subset(c)))
        .cloned()
        .collect()
}

fn join(a: &Clauses, b: &Clauses) -> Clauses {
    absorb(a.union(b).cloned().collect())
}

fn meet(a: &Clauses, b: &Clauses) -> Clauses {
    let mut out = Clauses::new();
    for x in a {
        for y in b {
            out.insert(x.union(y).cloned().collect());
        }
    }
    absorb(out)
}

fn top() -> Clauses {
    [Clause::new()].into()
}

fn neg(a: &Clauses) -> Clauses {
    // ~(∨ ∧ l) = ∧ ∨ ~l
    a.iter().fold(top(), |acc, clause| {
        let lits: Clauses = clause.iter().map(|l| [l.negate()].into()).collect();
        meet(&acc, &lits)
    })
}

fn clauses(e: &IExpr) -> Clauses {
    match e {
        IExpr::Zero => Clauses::new(),
        IExpr::One => top(),
        IExpr::Var(x) => [[Literal {
            var: x.clone(),
            polarity: Polarity::Pos,
        }]
        .into()]
        .into(),
        IExpr::Neg(a) => neg(&clauses(a)),
        IExpr::And(a, b) => meet(&clauses(a), &clauses(b)),
        IExpr::Or(a, b) => join(&clauses(a), &clauses(b)),
    }
}

pub fn inorm(e: &IExpr) -> INormal {
    let cs = clauses(e);
    if cs.is_empty() {
        INormal::Zero
    } else if cs.contains(&Clause::new()) {
        INormal::One
    } else {
        INormal::Join(cs.into_iter().map(|c| c.into_iter().collect()).collect())
    }
}

pub fn iconv(a: &IExpr, b: &IExpr) -> bool {
    inorm(a) == inorm(b)
}

/// The cofibration "`e = 1`". A clause containing both `x` and `~x`
/// denotes no endpoint assignment and is dropped.
pub fn to_cofib(e: &IExpr) -> Disj {
    match inorm(e) {
        INormal::Zero => Disj::Absurd,
        INormal::One => Disj::Truth,
        INormal::Join(cs) => Disj::from_conjs(cs.into_iter().map(|c| Conj {
            conds: c
                .into_iter()
                .map(|l| Cond {
                    var: l.var,
                    value: match l.polarity {
                        Polarity::Pos => Endpoint::One,
                        Polarity::Neg => Endpoint::Zero,
                    },
                })
                .collect(),
        })),
    }
}

/// Interval expression whose `= 1` locus is the cofibration.
pub fn from_cofib(d: &Disj) -> IExpr {
    match d {
        Disj::Absurd => IExpr::Zero,
        Disj::Truth => IExpr::One,
        Disj::Clauses(cs) => cs
            .iter()
            .map(|c| {
                c.conds
                    .iter()
                    .map(|cond| {
                        let v = IExpr::Var(cond.var.clone());
                        match cond.value {
                            Endpoint::One => v,
                            Endpoint::Zero => IExpr::neg(v),
                        }
                    })
                    .reduce(IExpr::and)
                    .unwrap_or(IExpr::One)
            })
            .reduce(IExpr::or)
            .unwrap_or(IExpr::Zero),
    }
}

/// Normalizes a term built from interval formers; `None` if it contains
/// anything else.
pub fn normalize_term(t: &Term) -> Option<Term> {
    IExpr::from_term(t).map(|e| inorm(&e).to_term())
}
