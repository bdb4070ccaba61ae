//! Core abstract syntax and capture-avoiding substitution.
//!
//! Variables are named. Interval expressions live inside `Term` so that a
//! single substitution function covers terms, interval arguments and the
//! cofibrations attached to partial elements, extension types and Kan
//! operations.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::cofib::{self, Conj, Disj, Endpoint};
use crate::interval::IExpr;

pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// One clause `θ ↦ body` of a partial element or of the boundary of an
/// extension or subtype.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub cofib: Conj,
    pub body: Term,
}

impl Face {
    pub fn new(cofib: Conj, body: Term) -> Self {
        Face { cofib, body }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    /// Locally bound variable (term or interval).
    Var(Name),
    /// Reference to a top-level declaration.
    Global(Name),
    Lam(Name, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    Pi(Name, Arc<Term>, Arc<Term>),
    Univ,
    /// The interval pretype `I`.
    Interval,
    IConst(Endpoint),
    INeg(Arc<Term>),
    IAnd(Arc<Term>, Arc<Term>),
    IOr(Arc<Term>, Arc<Term>),
    PartialEl(Vec<Face>),
    TrivialPartial(Arc<Term>),
    PartialTy(Disj, Arc<Term>),
    ExtTy(Vec<Name>, Arc<Term>, Vec<Face>),
    PLam(Vec<Name>, Arc<Term>),
    PApp(Arc<Term>, Vec<Term>),
    SubTy(Arc<Term>, Disj, Vec<Face>),
    InS(Disj, Arc<Term>),
    OutS(Disj, Arc<Term>),
    Coe(Arc<Term>, Disj),
    HComp {
        carrier: Arc<Term>,
        walls: Arc<Term>,
        floor: Arc<Term>,
        cofib: Disj,
    },
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(name(x))
    }

    pub fn lam(x: &str, body: Term) -> Term {
        Term::Lam(name(x), Arc::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn pi(x: &str, dom: Term, cod: Term) -> Term {
        Term::Pi(name(x), Arc::new(dom), Arc::new(cod))
    }

    pub fn arrow(dom: Term, cod: Term) -> Term {
        Term::pi("_", dom, cod)
    }

    pub fn zero() -> Term {
        Term::IConst(Endpoint::Zero)
    }

    pub fn one() -> Term {
        Term::IConst(Endpoint::One)
    }

    pub fn ineg(t: Term) -> Term {
        Term::INeg(Arc::new(t))
    }

    pub fn iand(a: Term, b: Term) -> Term {
        Term::IAnd(Arc::new(a), Arc::new(b))
    }

    pub fn ior(a: Term, b: Term) -> Term {
        Term::IOr(Arc::new(a), Arc::new(b))
    }

    pub fn plam(xs: &[&str], body: Term) -> Term {
        Term::PLam(xs.iter().map(|x| name(x)).collect(), Arc::new(body))
    }

    pub fn papp(f: Term, args: Vec<Term>) -> Term {
        Term::PApp(Arc::new(f), args)
    }

    pub fn partial_ty(cofib: Disj, carrier: Term) -> Term {
        Term::PartialTy(cofib, Arc::new(carrier))
    }

    pub fn trivial(t: Term) -> Term {
        Term::TrivialPartial(Arc::new(t))
    }

    pub fn ext(xs: &[&str], carrier: Term, faces: Vec<Face>) -> Term {
        Term::ExtTy(xs.iter().map(|x| name(x)).collect(), Arc::new(carrier), faces)
    }

    pub fn sub(carrier: Term, cofib: Disj, faces: Vec<Face>) -> Term {
        Term::SubTy(Arc::new(carrier), cofib, faces)
    }

    pub fn in_s(cofib: Disj, t: Term) -> Term {
        Term::InS(cofib, Arc::new(t))
    }

    pub fn out_s(cofib: Disj, t: Term) -> Term {
        Term::OutS(cofib, Arc::new(t))
    }

    pub fn coe(line: Term, cofib: Disj) -> Term {
        Term::Coe(Arc::new(line), cofib)
    }

    pub fn hcomp(carrier: Term, walls: Term, floor: Term, cofib: Disj) -> Term {
        Term::HComp {
            carrier: Arc::new(carrier),
            walls: Arc::new(walls),
            floor: Arc::new(floor),
            cofib,
        }
    }

    /// Is this one of the interval formers (`0`, `1`, `~`, `/\`, `\/`)?
    pub fn is_interval_former(&self) -> bool {
        matches!(
            self,
            Term::IConst(_) | Term::INeg(_) | Term::IAnd(..) | Term::IOr(..)
        )
    }
}

pub type Subst = BTreeMap<Name, Term>;

/// Builds a substitution from `(name, replacement)` pairs.
pub fn subst_of<'a>(pairs: impl IntoIterator<Item = (&'a str, Term)>) -> Subst {
    pairs.into_iter().map(|(k, v)| (name(k), v)).collect()
}

/// Simultaneous capture-avoiding substitution.
///
/// Cofibrations are rewritten through `cofib::subst_conj`, so a face whose
/// condition is contradicted disappears and a disjunctive result splits the
/// face. Partial elements are not collapsed to trivial ones here; that is
/// the evaluator's job.
pub fn subst(t: &Term, s: &Subst) -> Term {
    if s.is_empty() {
        return t.clone();
    }
    let mut range = BTreeSet::new();
    for v in s.values() {
        collect_names(v, &mut range);
    }
    Substituter { range }.go(t, s)
}

pub fn subst1(t: &Term, x: &Name, v: Term) -> Term {
    let mut s = Subst::new();
    s.insert(x.clone(), v);
    subst(t, &s)
}

/// Interval-only view of a term substitution, for rewriting cofibrations.
pub fn interval_view(s: &Subst) -> BTreeMap<Name, IExpr> {
    s.iter()
        .filter_map(|(k, v)| IExpr::from_term(v).map(|e| (k.clone(), e)))
        .collect()
}

pub fn subst_disj(d: &Disj, s: &Subst) -> Disj {
    cofib::subst_cofib(d, &interval_view(s))
}

pub fn subst_faces(faces: &[Face], s: &Subst) -> Vec<Face> {
    Substituter::for_subst(s).faces(faces, s)
}

struct Substituter {
    range: BTreeSet<Name>,
}

impl Substituter {
    fn for_subst(s: &Subst) -> Self {
        let mut range = BTreeSet::new();
        for v in s.values() {
            collect_names(v, &mut range);
        }
        Substituter { range }
    }

    fn go(&self, t: &Term, s: &Subst) -> Term {
        if s.is_empty() {
            return t.clone();
        }
        match t {
            Term::Var(x) => s.get(x).cloned().unwrap_or_else(|| t.clone()),
            Term::Global(_) | Term::Univ | Term::Interval | Term::IConst(_) => t.clone(),
            Term::Lam(x, b) => {
                let (xs, s2, sub) = self.bind(std::slice::from_ref(x), s, &[b]);
                Term::Lam(xs[0].clone(), Arc::new(sub.go(b, &s2)))
            }
            Term::App(f, a) => Term::App(Arc::new(self.go(f, s)), Arc::new(self.go(a, s))),
            Term::Pi(x, a, b) => {
                let dom = self.go(a, s);
                let (xs, s2, sub) = self.bind(std::slice::from_ref(x), s, &[b]);
                Term::Pi(xs[0].clone(), Arc::new(dom), Arc::new(sub.go(b, &s2)))
            }
            Term::INeg(a) => Term::INeg(Arc::new(self.go(a, s))),
            Term::IAnd(a, b) => Term::IAnd(Arc::new(self.go(a, s)), Arc::new(self.go(b, s))),
            Term::IOr(a, b) => Term::IOr(Arc::new(self.go(a, s)), Arc::new(self.go(b, s))),
            Term::PartialEl(faces) => Term::PartialEl(self.faces(faces, s)),
            Term::TrivialPartial(a) => Term::TrivialPartial(Arc::new(self.go(a, s))),
            Term::PartialTy(d, a) => Term::PartialTy(subst_disj(d, s), Arc::new(self.go(a, s))),
            Term::ExtTy(xs, a, faces) => {
                let face_bodies: Vec<&Term> = faces.iter().map(|f| &f.body).collect();
                let mut bodies: Vec<&Term> = vec![a];
                bodies.extend(face_bodies);
                let (ys, s2, sub) = self.bind(xs, s, &bodies);
                // renamed binders reach the bound cofibrations through s2
                let faces = sub.faces(faces, &s2);
                Term::ExtTy(ys, Arc::new(sub.go(a, &s2)), faces)
            }
            Term::PLam(xs, b) => {
                let (ys, s2, sub) = self.bind(xs, s, &[b]);
                Term::PLam(ys, Arc::new(sub.go(b, &s2)))
            }
            Term::PApp(f, args) => Term::PApp(
                Arc::new(self.go(f, s)),
                args.iter().map(|a| self.go(a, s)).collect(),
            ),
            Term::SubTy(a, d, faces) => {
                Term::SubTy(Arc::new(self.go(a, s)), subst_disj(d, s), self.faces(faces, s))
            }
            Term::InS(d, a) => Term::InS(subst_disj(d, s), Arc::new(self.go(a, s))),
            Term::OutS(d, a) => Term::OutS(subst_disj(d, s), Arc::new(self.go(a, s))),
            Term::Coe(line, d) => Term::Coe(Arc::new(self.go(line, s)), subst_disj(d, s)),
            Term::HComp {
                carrier,
                walls,
                floor,
                cofib,
            } => Term::HComp {
                carrier: Arc::new(self.go(carrier, s)),
                walls: Arc::new(self.go(walls, s)),
                floor: Arc::new(self.go(floor, s)),
                cofib: subst_disj(cofib, s),
            },
        }
    }

    fn faces(&self, faces: &[Face], s: &Subst) -> Vec<Face> {
        let iv = interval_view(s);
        let mut out = Vec::with_capacity(faces.len());
        for face in faces {
            let d = cofib::subst_conj(&face.cofib, &iv);
            let conjs = d.conjs();
            if conjs.is_empty() {
                continue;
            }
            let body = self.go(&face.body, s);
            for c in conjs {
                out.push(Face::new(c, body.clone()));
            }
        }
        out
    }

    /// Enters a binder group, renaming binders that would capture a name
    /// occurring free in the range of the substitution.
    fn bind(&self, xs: &[Name], s: &Subst, bodies: &[&Term]) -> (Vec<Name>, Subst, Substituter) {
        let mut s2 = s.clone();
        for x in xs {
            s2.remove(x);
        }
        if s2.is_empty() || !xs.iter().any(|x| self.range.contains(x)) {
            return (xs.to_vec(), s2, Substituter { range: self.range.clone() });
        }
        let mut avoid: BTreeSet<Name> = self.range.clone();
        avoid.extend(s.keys().cloned());
        for b in bodies {
            collect_names(b, &mut avoid);
        }
        avoid.extend(xs.iter().cloned());
        let mut range = self.range.clone();
        let mut ys = Vec::with_capacity(xs.len());
        for x in xs {
            if self.range.contains(x) {
                let y = fresh_name(x, |n| avoid.contains(n));
                avoid.insert(y.clone());
                range.insert(y.clone());
                s2.insert(x.clone(), Term::Var(y.clone()));
                ys.push(y);
            } else {
                ys.push(x.clone());
            }
        }
        (ys, s2, Substituter { range })
    }
}

/// Turns free variables naming top-level declarations into `Global`s.
pub fn resolve_globals(t: &Term, is_global: &dyn Fn(&Name) -> bool) -> Term {
    let s: Subst = free_names(t)
        .into_iter()
        .filter(|x| is_global(x))
        .map(|x| (x.clone(), Term::Global(x)))
        .collect();
    subst(t, &s)
}

/// Picks a name derived from `base` that `taken` rejects. Trailing digits
/// of `base` are replaced by a counter.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> Name {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() || stem == "_" { "x" } else { stem };
    if !taken(stem) && !crate::surface::is_keyword(stem) {
        return name(stem);
    }
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|c| !taken(c))
        .map(|c| name(&c))
        .expect("infinite supply of names")
}

/// Every free name of the term, term and interval alike.
pub fn free_names(t: &Term) -> BTreeSet<Name> {
    let (mut a, b) = free_vars(t);
    a.extend(b);
    a
}

/// Collects free names plus binder names. Used only for freshness, where
/// over-approximation is harmless.
fn collect_names(t: &Term, acc: &mut BTreeSet<Name>) {
    acc.extend(free_names(t));
}

/// Free variables, split into term variables and interval variables by the
/// position they occur in.
pub fn free_vars(t: &Term) -> (BTreeSet<Name>, BTreeSet<Name>) {
    let mut fv = FreeVars::default();
    fv.go(t, false, &mut Vec::new());
    (fv.terms, fv.intervals)
}

#[derive(Default)]
struct FreeVars {
    terms: BTreeSet<Name>,
    intervals: BTreeSet<Name>,
}

impl FreeVars {
    fn go(&mut self, t: &Term, interval: bool, bound: &mut Vec<Name>) {
        match t {
            Term::Var(x) => {
                if !bound.contains(x) {
                    if interval {
                        self.intervals.insert(x.clone());
                    } else {
                        self.terms.insert(x.clone());
                    }
                }
            }
            Term::Global(_) | Term::Univ | Term::Interval | Term::IConst(_) => {}
            Term::Lam(x, b) => self.under(std::slice::from_ref(x), bound, |fv, bound| {
                fv.go(b, false, bound)
            }),
            Term::App(f, a) => {
                self.go(f, false, bound);
                self.go(a, false, bound);
            }
            Term::Pi(x, a, b) => {
                self.go(a, false, bound);
                self.under(std::slice::from_ref(x), bound, |fv, bound| fv.go(b, false, bound));
            }
            Term::INeg(a) => self.go(a, true, bound),
            Term::IAnd(a, b) | Term::IOr(a, b) => {
                self.go(a, true, bound);
                self.go(b, true, bound);
            }
            Term::PartialEl(faces) => self.faces(faces, bound),
            Term::TrivialPartial(a) => self.go(a, false, bound),
            Term::PartialTy(d, a) => {
                self.disj(d, bound);
                self.go(a, false, bound);
            }
            Term::ExtTy(xs, a, faces) => self.under(xs, bound, |fv, bound| {
                fv.go(a, false, bound);
                fv.faces(faces, bound);
            }),
            Term::PLam(xs, b) => self.under(xs, bound, |fv, bound| fv.go(b, false, bound)),
            Term::PApp(f, args) => {
                self.go(f, false, bound);
                for a in args {
                    self.go(a, true, bound);
                }
            }
            Term::SubTy(a, d, faces) => {
                self.go(a, false, bound);
                self.disj(d, bound);
                self.faces(faces, bound);
            }
            Term::InS(d, a) | Term::OutS(d, a) => {
                self.disj(d, bound);
                self.go(a, false, bound);
            }
            Term::Coe(line, d) => {
                self.go(line, false, bound);
                self.disj(d, bound);
            }
            Term::HComp {
                carrier,
                walls,
                floor,
                cofib,
            } => {
                self.go(carrier, false, bound);
                self.go(walls, false, bound);
                self.go(floor, false, bound);
                self.disj(cofib, bound);
            }
        }
    }

    fn under(&mut self, xs: &[Name], bound: &mut Vec<Name>, f: impl FnOnce(&mut Self, &mut Vec<Name>)) {
        let n = bound.len();
        bound.extend(xs.iter().cloned());
        f(self, bound);
        bound.truncate(n);
    }

    fn conj(&mut self, c: &Conj, bound: &[Name]) {
        for cond in &c.conds {
            if !bound.contains(&cond.var) {
                self.intervals.insert(cond.var.clone());
            }
        }
    }

    fn disj(&mut self, d: &Disj, bound: &[Name]) {
        for c in d.conjs() {
            self.conj(&c, bound);
        }
    }

    fn faces(&mut self, faces: &[Face], bound: &mut Vec<Name>) {
        for f in faces {
            self.conj(&f.cofib, bound);
            self.go(&f.body, false, bound);
        }
    }
}

/// Equality up to renaming of bound variables. Face lists and cofibration
/// clauses compare in order.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    Alpha::default().eq(a, b)
}

#[derive(Default)]
struct Alpha {
    left: Vec<Name>,
    right: Vec<Name>,
}

impl Alpha {
    fn lookup(stack: &[Name], x: &Name) -> Option<usize> {
        stack.iter().rposition(|y| y == x)
    }

    fn var_eq(&self, x: &Name, y: &Name) -> bool {
        match (Self::lookup(&self.left, x), Self::lookup(&self.right, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        }
    }

    fn under<R>(&mut self, xs: &[Name], ys: &[Name], f: impl FnOnce(&mut Self) -> R) -> R {
        let (n, m) = (self.left.len(), self.right.len());
        self.left.extend(xs.iter().cloned());
        self.right.extend(ys.iter().cloned());
        let r = f(self);
        self.left.truncate(n);
        self.right.truncate(m);
        r
    }

    fn conj_eq(&self, a: &Conj, b: &Conj) -> bool {
        a.conds.len() == b.conds.len()
            && a
                .conds
                .iter()
                .zip(&b.conds)
                .all(|(c, d)| c.value == d.value && self.var_eq(&c.var, &d.var))
    }

    fn disj_eq(&self, a: &Disj, b: &Disj) -> bool {
        match (a, b) {
            (Disj::Absurd, Disj::Absurd) | (Disj::Truth, Disj::Truth) => true,
            (Disj::Clauses(xs), Disj::Clauses(ys)) => {
                xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.conj_eq(x, y))
            }
            _ => false,
        }
    }

    fn faces_eq(&mut self, a: &[Face], b: &[Face]) -> bool {
        a.len() == b.len()
            && a
                .iter()
                .zip(b)
                .all(|(f, g)| self.conj_eq(&f.cofib, &g.cofib) && self.eq(&f.body, &g.body))
    }

    fn eq(&mut self, a: &Term, b: &Term) -> bool {
        use Term::*;
        match (a, b) {
            (Var(x), Var(y)) => self.var_eq(x, y),
            (Global(x), Global(y)) => x == y,
            (Univ, Univ) | (Interval, Interval) => true,
            (IConst(x), IConst(y)) => x == y,
            (Lam(x, b1), Lam(y, b2)) => self.under(std::slice::from_ref(x), std::slice::from_ref(y), |s| s.eq(b1, b2)),
            (App(f, x), App(g, y)) => self.eq(f, g) && self.eq(x, y),
            (Pi(x, a1, b1), Pi(y, a2, b2)) => {
                self.eq(a1, a2) && self.under(std::slice::from_ref(x), std::slice::from_ref(y), |s| s.eq(b1, b2))
            }
            (INeg(x), INeg(y)) => self.eq(x, y),
            (IAnd(a1, b1), IAnd(a2, b2)) | (IOr(a1, b1), IOr(a2, b2)) => {
                self.eq(a1, a2) && self.eq(b1, b2)
            }
            (PartialEl(f), PartialEl(g)) => self.faces_eq(f, g),
            (TrivialPartial(x), TrivialPartial(y)) => self.eq(x, y),
            (PartialTy(d1, a1), PartialTy(d2, a2)) => self.disj_eq(d1, d2) && self.eq(a1, a2),
            (ExtTy(xs, a1, f1), ExtTy(ys, a2, f2)) => {
                xs.len() == ys.len()
                    && self.under(xs, ys, |s| s.eq(a1, a2) && s.faces_eq(f1, f2))
            }
            (PLam(xs, b1), PLam(ys, b2)) => {
                xs.len() == ys.len() && self.under(xs, ys, |s| s.eq(b1, b2))
            }
            (PApp(f, xs), PApp(g, ys)) => {
                self.eq(f, g) && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.eq(x, y))
            }
            (SubTy(a1, d1, f1), SubTy(a2, d2, f2)) => {
                self.eq(a1, a2) && self.disj_eq(d1, d2) && self.faces_eq(f1, f2)
            }
            (InS(d1, x), InS(d2, y)) | (OutS(d1, x), OutS(d2, y)) => {
                self.disj_eq(d1, d2) && self.eq(x, y)
            }
            (Coe(l1, d1), Coe(l2, d2)) => self.eq(l1, l2) && self.disj_eq(d1, d2),
            (
                HComp {
                    carrier: a1,
                    walls: w1,
                    floor: u1,
                    cofib: d1,
                },
                HComp {
                    carrier: a2,
                    walls: w2,
                    floor: u2,
                    cofib: d2,
                },
            ) => self.disj_eq(d1, d2) && self.eq(a1, a2) && self.eq(w1, w2) && self.eq(u1, u2),
            _ => false,
        }
    }
}
