//! Weak-head evaluation, Kan operation reduction and full normalization.
//!
//! Values are terms in weak-head normal form. Evaluation is
//! substitution-based; the context supplies the declarations to unfold and
//! the types of neutral variables, which the boundary rules of extension
//! types and subtypes need.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use crate::cofib::{self, Disj, Endpoint};
use crate::interval::{self, IExpr};
use crate::syntax::{free_names, interval_view, subst, subst_faces, Face, Name, Subst, Term};
use crate::tyck::{conv, Binding, Context};

/// A term in weak-head normal form.
pub type Value = Term;

fn trace_enabled() -> bool {
    static ON: OnceLock<bool> = OnceLock::new();
    *ON.get_or_init(|| std::env::var("CUBIK_TRACE").map(|v| v == "1").unwrap_or(false))
}

fn trace(rule: &str, t: &Term) {
    if trace_enabled() {
        eprintln!("[{rule}] {}", crate::surface::pretty(t));
    }
}

/// Names to keep clear of when inventing binders around `terms`.
fn avoid_of<'a>(terms: impl IntoIterator<Item = &'a Term>) -> BTreeSet<Name> {
    terms.into_iter().flat_map(free_names).collect()
}

/// Applies a type line (or any function) to an argument, contracting a
/// syntactic lambda on the spot.
pub fn inst(line: &Term, r: Term) -> Term {
    match line {
        Term::Lam(x, b) => crate::syntax::subst1(b, x, r),
        _ => Term::app(line.clone(), r),
    }
}

fn normalize_interval(t: &Term) -> Term {
    interval::normalize_term(t).unwrap_or_else(|| t.clone())
}

pub fn whnf(ctx: &Context, t: &Term) -> Value {
    match t {
        Term::Global(x) => match ctx.global(x) {
            Some(def) => {
                trace("delta", t);
                whnf(ctx, &def.value)
            }
            None => t.clone(),
        },
        Term::App(f, a) => {
            let f = whnf(ctx, f);
            match &f {
                Term::Lam(x, b) => {
                    trace("beta", t);
                    whnf(ctx, &crate::syntax::subst1(b, x, (**a).clone()))
                }
                Term::Coe(line, d) => match coe_reduce(ctx, line, d, a) {
                    Some(v) => {
                        trace("coe", t);
                        v
                    }
                    None => Term::App(Arc::new(f.clone()), a.clone()),
                },
                _ => Term::App(Arc::new(f.clone()), a.clone()),
            }
        }
        Term::PApp(f, args) => {
            let f = whnf(ctx, f);
            let args: Vec<Term> = args.iter().map(normalize_interval).collect();
            if let Term::PLam(xs, b) = &f {
                if xs.len() == args.len() {
                    trace("path-beta", t);
                    let s: Subst = xs.iter().cloned().zip(args).collect();
                    return whnf(ctx, &subst(b, &s));
                }
            }
            if let Some(Term::ExtTy(xs, _, faces)) = neutral_type(ctx, &f).map(|ty| whnf(ctx, &ty)) {
                if xs.len() == args.len() {
                    let s: Subst = xs.iter().cloned().zip(args.iter().cloned()).collect();
                    if let Term::TrivialPartial(b) = reduce_partial(&faces, &s) {
                        trace("boundary", t);
                        return whnf(ctx, &b);
                    }
                }
            }
            Term::PApp(Arc::new(f), args)
        }
        Term::OutS(d, u) => {
            let u = whnf(ctx, u);
            if let Term::InS(_, v) = &u {
                trace("outS-inS", t);
                return whnf(ctx, v);
            }
            if let Some(Term::SubTy(_, _, faces)) = neutral_type(ctx, &u).map(|ty| whnf(ctx, &ty)) {
                if let Some(face) = faces.iter().find(|f| f.cofib.is_top()) {
                    trace("outS-face", t);
                    return whnf(ctx, &face.body);
                }
            }
            Term::OutS(d.clone(), Arc::new(u))
        }
        Term::InS(d, u) => {
            let u = whnf(ctx, u);
            if let Term::OutS(_, v) = &u {
                trace("inS-outS", t);
                return (**v).clone();
            }
            Term::InS(d.clone(), Arc::new(u))
        }
        Term::PartialEl(faces) => match faces.iter().find(|f| f.cofib.is_top()) {
            Some(face) => {
                trace("partial-trivial", t);
                Term::TrivialPartial(Arc::new(face.body.clone()))
            }
            None => t.clone(),
        },
        Term::HComp {
            carrier,
            walls,
            floor,
            cofib,
        } => match hcomp_reduce(ctx, carrier, cofib, walls, floor) {
            Some(v) => {
                trace("hcomp", t);
                v
            }
            None => t.clone(),
        },
        Term::INeg(_) | Term::IAnd(..) | Term::IOr(..) => normalize_interval(t),
        _ => t.clone(),
    }
}

/// Rewrites the faces of a partial element under `s`. The first satisfied
/// face turns the whole element trivial; contradicted faces disappear.
pub fn reduce_partial(faces: &[Face], s: &Subst) -> Term {
    let iv = interval_view(s);
    let mut out = Vec::new();
    for face in faces {
        let d = cofib::subst_conj(&face.cofib, &iv);
        match d {
            Disj::Truth => return Term::TrivialPartial(Arc::new(subst(&face.body, s))),
            Disj::Absurd => {}
            Disj::Clauses(cs) => {
                let body = subst(&face.body, s);
                out.extend(cs.into_iter().map(|c| Face::new(c, body.clone())));
            }
        }
    }
    Term::PartialEl(out)
}

/// The faces of a partial element value at cofibration `d`. A trivial
/// element contributes its body on every clause of `d`.
pub fn partial_faces(p: &Value, d: &Disj) -> Option<Vec<Face>> {
    match p {
        Term::PartialEl(fs) => Some(fs.clone()),
        Term::TrivialPartial(b) => Some(d.conjs().into_iter().map(|c| Face::new(c, (**b).clone())).collect()),
        _ => None,
    }
}

/// Type of a neutral value, when it can be read off the context.
pub fn neutral_type(ctx: &Context, t: &Value) -> Option<Term> {
    match t {
        Term::Var(x) => match ctx.lookup(x)? {
            Binding::Typed(ty) => Some(ty.clone()),
            Binding::Interval => Some(Term::Interval),
            Binding::Untyped => None,
        },
        Term::Global(x) => ctx.global(x).map(|d| d.ty.clone()),
        Term::App(f, a) => {
            if let Term::Coe(line, _) = &**f {
                return Some(inst(line, Term::one()));
            }
            match whnf(ctx, &neutral_type(ctx, f)?) {
                Term::Pi(x, _, b) => Some(crate::syntax::subst1(&b, &x, (**a).clone())),
                _ => None,
            }
        }
        Term::PApp(f, args) => match whnf(ctx, &neutral_type(ctx, f)?) {
            Term::ExtTy(xs, a, _) if xs.len() == args.len() => {
                let s: Subst = xs.iter().cloned().zip(args.iter().cloned()).collect();
                Some(subst(&a, &s))
            }
            _ => None,
        },
        Term::OutS(_, u) => match whnf(ctx, &neutral_type(ctx, u)?) {
            Term::SubTy(a, _, _) => Some((*a).clone()),
            _ => None,
        },
        Term::HComp {
            carrier,
            walls,
            cofib,
            ..
        } => {
            let top = whnf(ctx, &Term::app((**walls).clone(), Term::one()));
            let faces = partial_faces(&top, cofib)?;
            Some(Term::SubTy(carrier.clone(), cofib.clone(), faces))
        }
        _ => None,
    }
}

/// Reduces `coe(line, theta)(arg)` when a rule applies.
///
/// Frozen-everywhere coercion is the identity. Function and one-dimensional
/// extension type lines reduce structurally. Anything else is stuck; in
/// particular there is no regularity rule for constant neutral lines.
pub fn coe_reduce(ctx: &Context, line: &Term, theta: &Disj, arg: &Term) -> Option<Value> {
    if theta.is_truth() {
        return Some(whnf(ctx, arg));
    }
    let avoid = avoid_of([line, arg]);
    let j = ctx.fresh("j", &avoid);
    let cj = ctx.extend(j.clone(), Binding::Interval);
    let jv = Term::Var(j.clone());
    match whnf(&cj, &inst(line, jv.clone())) {
        Term::Pi(x, dom, cod) => {
            let mut avoid = avoid.clone();
            avoid.extend([j.clone(), x.clone()]);
            avoid.extend(free_names(&dom));
            avoid.extend(free_names(&cod));
            let b = ctx.fresh("a", &avoid);
            avoid.insert(b.clone());
            let y = ctx.fresh("y", &avoid);
            avoid.insert(y.clone());
            let k = ctx.fresh("k", &avoid);
            // the argument coerced back from 1 to r along the domain line
            let back = |r: Term| {
                let dom_line = subst(&dom, &[(j.clone(), Term::ior(r.clone(), Term::ineg(Term::Var(y.clone()))))].into());
                let frozen = IExpr::from_term(&r).map(|e| interval::to_cofib(&e)).unwrap_or(Disj::Absurd);
                Term::app(
                    Term::coe(Term::Lam(y.clone(), Arc::new(dom_line)), theta.or(&frozen)),
                    Term::Var(b.clone()),
                )
            };
            let cod_line = subst(
                &cod,
                &[(j.clone(), Term::Var(k.clone())), (x.clone(), back(Term::Var(k.clone())))].into(),
            );
            let body = Term::app(
                Term::coe(Term::Lam(k.clone(), Arc::new(cod_line)), theta.clone()),
                Term::app(arg.clone(), back(Term::zero())),
            );
            Some(Term::Lam(b, Arc::new(body)))
        }
        Term::ExtTy(xs, carrier, faces) if xs.len() == 1 => {
            let mut avoid = avoid.clone();
            avoid.insert(j.clone());
            avoid.extend(free_names(&carrier));
            let x = ctx.fresh(&xs[0], &avoid);
            avoid.insert(x.clone());
            let y = ctx.fresh("y", &avoid);
            let s: Subst = [(j.clone(), Term::Var(y.clone())), (xs[0].clone(), Term::Var(x.clone()))].into();
            let floor = Term::papp(arg.clone(), vec![Term::Var(x.clone())]);
            let ext_faces = subst_faces(&faces, &s);
            let mut walls: Vec<Face> = theta.conjs().into_iter().map(|c| Face::new(c, floor.clone())).collect();
            walls.extend(ext_faces.iter().cloned());
            let cof = theta.or(&Disj::from_conjs(ext_faces.iter().map(|f| f.cofib.clone())));
            let line = Term::Lam(y.clone(), Arc::new(subst(&carrier, &s)));
            let walls = Term::Lam(y, Arc::new(Term::PartialEl(walls)));
            let cx = ctx.extend(x.clone(), Binding::Interval);
            let body = comp(&cx, &line, &cof, &walls, &floor)?;
            Some(Term::PLam(vec![x], Arc::new(body)))
        }
        _ => None,
    }
}

/// Reduces `hcomp theta carrier walls floor` when a rule applies. The result
/// is an element of the subtype, so it is wrapped in `inS`.
pub fn hcomp_reduce(ctx: &Context, carrier: &Term, theta: &Disj, walls: &Term, floor: &Term) -> Option<Value> {
    if theta.is_truth() {
        return match whnf(ctx, &Term::app(walls.clone(), Term::one())) {
            Term::TrivialPartial(b) => Some(Term::InS(theta.clone(), Arc::new(whnf(ctx, &b)))),
            _ => None,
        };
    }
    let mut avoid = avoid_of([carrier, walls, floor]);
    let i = ctx.fresh("i", &avoid);
    avoid.insert(i.clone());
    let ci = ctx.extend(i.clone(), Binding::Interval);
    let wall_faces = || partial_faces(&whnf(&ci, &Term::app(walls.clone(), Term::Var(i.clone()))), theta);
    match whnf(ctx, carrier) {
        Term::Pi(x, _, cod) => {
            avoid.extend(free_names(&cod));
            let a = ctx.fresh("a", &avoid);
            let av = Term::Var(a.clone());
            let faces = wall_faces()?
                .into_iter()
                .map(|f| Face::new(f.cofib, Term::app(f.body, av.clone())))
                .collect();
            let inner = Term::hcomp(
                crate::syntax::subst1(&cod, &x, av.clone()),
                Term::Lam(i, Arc::new(Term::PartialEl(faces))),
                Term::app(floor.clone(), av),
                theta.clone(),
            );
            let f = Term::Lam(a, Arc::new(Term::out_s(theta.clone(), inner)));
            Some(Term::InS(theta.clone(), Arc::new(f)))
        }
        Term::ExtTy(zs, b, ext) => {
            avoid.extend(free_names(&b));
            let mut ys = Vec::with_capacity(zs.len());
            for z in &zs {
                let y = ctx.fresh(z, &avoid);
                avoid.insert(y.clone());
                ys.push(y);
            }
            let args: Vec<Term> = ys.iter().cloned().map(Term::Var).collect();
            let s: Subst = zs.iter().cloned().zip(args.iter().cloned()).collect();
            let ext = subst_faces(&ext, &s);
            let theta2 = theta.or(&Disj::from_conjs(ext.iter().map(|f| f.cofib.clone())));
            let mut faces: Vec<Face> = wall_faces()?
                .into_iter()
                .map(|f| Face::new(f.cofib, Term::papp(f.body, args.clone())))
                .collect();
            faces.extend(ext);
            let inner = Term::hcomp(
                subst(&b, &s),
                Term::Lam(i, Arc::new(Term::PartialEl(faces))),
                Term::papp(floor.clone(), args),
                theta2.clone(),
            );
            let p = Term::PLam(ys, Arc::new(Term::out_s(theta2, inner)));
            Some(Term::InS(theta.clone(), Arc::new(p)))
        }
        _ => None,
    }
}

/// Is the line constant under every clause of `theta`?
pub fn freezes(ctx: &Context, line: &Term, theta: &Disj) -> bool {
    let x = ctx.fresh("x", &avoid_of([line]));
    let cx = ctx.extend(x.clone(), Binding::Interval);
    let a0 = inst(line, Term::zero());
    let ax = inst(line, Term::Var(x));
    theta
        .conjs()
        .iter()
        .all(|c| conv::conv_under_conj(&cx, c, &a0, &ax, &Term::Univ))
}

/// The path from `u` to `coe(line, theta)(u)`:
/// `\^x. coe(\y. line (x /\ y), theta \/ x = 0)(u)`.
pub fn transp_fill(ctx: &Context, line: &Term, theta: &Disj, u: &Term) -> Term {
    let mut avoid = avoid_of([line, u]);
    avoid.extend(theta.vars());
    let x = ctx.fresh("x", &avoid);
    avoid.insert(x.clone());
    let y = ctx.fresh("y", &avoid);
    let body = inst(line, Term::iand(Term::Var(x.clone()), Term::Var(y.clone())));
    let cof = theta.or(&Disj::cond(&x, Endpoint::Zero));
    Term::PLam(
        vec![x],
        Arc::new(Term::app(Term::coe(Term::Lam(y, Arc::new(body)), cof), u.clone())),
    )
}

/// Coercion from `r` to `1` along the line: `coe(\x. line (x \/ r), r = 1)`.
pub fn forward(ctx: &Context, line: &Term, r: &IExpr) -> Term {
    let rt = r.to_term();
    let mut avoid = avoid_of([line, &rt]);
    avoid.extend(r.vars());
    let x = ctx.fresh("x", &avoid);
    let body = inst(line, Term::ior(Term::Var(x.clone()), rt));
    Term::coe(Term::Lam(x, Arc::new(body)), interval::to_cofib(r))
}

/// Heterogeneous composition along `line`: forward each wall face and the
/// floor to `1`, then compose homogeneously in `line 1`.
///
/// Needs the walls to evaluate to an explicit partial element; returns
/// `None` when they are neutral.
pub fn comp(ctx: &Context, line: &Term, theta: &Disj, walls: &Term, floor: &Term) -> Option<Term> {
    let mut avoid = avoid_of([line, walls, floor]);
    avoid.extend(theta.vars());
    let j = ctx.fresh("j", &avoid);
    let cj = ctx.extend(j.clone(), Binding::Interval);
    let faces = partial_faces(&whnf(&cj, &inst(walls, Term::Var(j.clone()))), theta)?;
    let fwd = forward(ctx, line, &IExpr::Var(j.clone()));
    let faces: Vec<Face> = faces
        .into_iter()
        .map(|f| Face::new(f.cofib, Term::app(fwd.clone(), f.body)))
        .collect();
    let floor = Term::app(forward(ctx, line, &IExpr::Zero), floor.clone());
    Some(Term::out_s(
        theta.clone(),
        Term::hcomp(
            inst(line, Term::one()),
            Term::Lam(j, Arc::new(Term::PartialEl(faces))),
            floor,
            theta.clone(),
        ),
    ))
}

fn line_type() -> Term {
    Term::arrow(Term::Interval, Term::Univ)
}

/// Full normal form, reducing under binders. `ty` guides binder types so
/// that the boundary rules can fire inside; without it the binders are
/// entered untyped.
pub fn normalize(ctx: &Context, t: &Term, ty: Option<&Term>) -> Term {
    let v = whnf(ctx, t);
    let ty = ty.map(|a| whnf(ctx, a));
    match &v {
        Term::Lam(x, b) => {
            let x2 = ctx.fresh_binder(x, &free_names(&v));
            let b = rename(b, x, &x2);
            match &ty {
                Some(Term::Pi(y, dom, cod)) => {
                    let cx = ctx.extend_typed(x2.clone(), dom);
                    let cod = crate::syntax::subst1(cod, y, Term::Var(x2.clone()));
                    Term::Lam(x2, Arc::new(normalize(&cx, &b, Some(&cod))))
                }
                _ => {
                    let cx = ctx.extend(x2.clone(), Binding::Untyped);
                    Term::Lam(x2, Arc::new(normalize(&cx, &b, None)))
                }
            }
        }
        Term::PLam(xs, b) => {
            let (ys, cx, s) = enter_intervals(ctx, xs, &free_names(&v));
            let b = subst(b, &s);
            let carrier = match &ty {
                Some(Term::ExtTy(zs, a, _)) if zs.len() == ys.len() => {
                    let s2: Subst = zs.iter().cloned().zip(ys.iter().cloned().map(Term::Var)).collect();
                    Some(subst(a, &s2))
                }
                _ => None,
            };
            Term::PLam(ys, Arc::new(normalize(&cx, &b, carrier.as_ref())))
        }
        Term::Pi(x, a, b) => {
            let a2 = normalize(ctx, a, Some(&Term::Univ));
            let x2 = ctx.fresh_binder(x, &free_names(&v));
            let b = rename(b, x, &x2);
            let cx = ctx.extend_typed(x2.clone(), a);
            Term::Pi(x2, Arc::new(a2), Arc::new(normalize(&cx, &b, Some(&Term::Univ))))
        }
        Term::PartialTy(d, a) => Term::PartialTy(d.clone(), Arc::new(normalize(ctx, a, Some(&Term::Univ)))),
        Term::ExtTy(xs, a, faces) => {
            let (ys, cx, s) = enter_intervals(ctx, xs, &free_names(&v));
            let a = subst(a, &s);
            let faces = subst_faces(faces, &s);
            let a2 = normalize(&cx, &a, Some(&Term::Univ));
            let faces = normalize_faces(&cx, &faces, Some(&a));
            Term::ExtTy(ys, Arc::new(a2), faces)
        }
        Term::SubTy(a, d, faces) => {
            let a2 = normalize(ctx, a, Some(&Term::Univ));
            Term::SubTy(Arc::new(a2), d.clone(), normalize_faces(ctx, faces, Some(a)))
        }
        Term::PartialEl(faces) => {
            let carrier = match &ty {
                Some(Term::PartialTy(_, a)) => Some((**a).clone()),
                _ => None,
            };
            Term::PartialEl(normalize_faces(ctx, faces, carrier.as_ref()))
        }
        Term::TrivialPartial(u) => {
            let carrier = match &ty {
                Some(Term::PartialTy(_, a)) => Some((**a).clone()),
                _ => None,
            };
            Term::TrivialPartial(Arc::new(normalize(ctx, u, carrier.as_ref())))
        }
        Term::InS(d, u) => {
            let carrier = match &ty {
                Some(Term::SubTy(a, _, _)) => Some((**a).clone()),
                _ => None,
            };
            Term::InS(d.clone(), Arc::new(normalize(ctx, u, carrier.as_ref())))
        }
        Term::Coe(line, d) => Term::Coe(Arc::new(normalize(ctx, line, Some(&line_type()))), d.clone()),
        Term::Var(_) | Term::App(..) | Term::PApp(..) | Term::OutS(..) | Term::HComp { .. } => {
            normalize_neutral(ctx, &v).0
        }
        _ => v,
    }
}

fn rename(t: &Term, from: &Name, to: &Name) -> Term {
    if from == to {
        t.clone()
    } else {
        crate::syntax::subst1(t, from, Term::Var(to.clone()))
    }
}

fn enter_intervals(ctx: &Context, xs: &[Name], avoid: &BTreeSet<Name>) -> (Vec<Name>, Context, Subst) {
    let mut avoid = avoid.clone();
    let mut cx = ctx.clone();
    let mut ys = Vec::with_capacity(xs.len());
    let mut s = Subst::new();
    for x in xs {
        let y = cx.fresh_binder(x, &avoid);
        avoid.insert(y.clone());
        if &y != x {
            s.insert(x.clone(), Term::Var(y.clone()));
        }
        cx.push(y.clone(), Binding::Interval);
        ys.push(y);
    }
    (ys, cx, s)
}

fn normalize_faces(ctx: &Context, faces: &[Face], carrier: Option<&Term>) -> Vec<Face> {
    faces
        .iter()
        .map(|f| match cofib::conj_to_subst(&f.cofib) {
            Some(m) => {
                let s: Subst = m.into_iter().map(|(k, e)| (k, Term::IConst(e))).collect();
                let cx = ctx.restrict(&s);
                let body = subst(&f.body, &s);
                let carrier = carrier.map(|a| subst(a, &s));
                Face::new(f.cofib.clone(), normalize(&cx, &body, carrier.as_ref()))
            }
            None => f.clone(),
        })
        .collect()
}

/// Normalizes a neutral value, returning it with its type when known.
fn normalize_neutral(ctx: &Context, v: &Value) -> (Term, Option<Term>) {
    match v {
        Term::Var(_) => (v.clone(), neutral_type(ctx, v)),
        Term::App(f, a) => {
            if let Term::Coe(line, d) = &**f {
                let line2 = normalize(ctx, line, Some(&line_type()));
                let a2 = normalize(ctx, a, Some(&inst(line, Term::zero())));
                let head = Term::Coe(Arc::new(line2), d.clone());
                return (Term::app(head, a2), Some(inst(line, Term::one())));
            }
            let (f2, fty) = normalize_neutral(ctx, f);
            match fty.map(|t| whnf(ctx, &t)) {
                Some(Term::Pi(x, dom, cod)) => {
                    let a2 = normalize(ctx, a, Some(&dom));
                    (Term::app(f2, a2), Some(crate::syntax::subst1(&cod, &x, (**a).clone())))
                }
                _ => (Term::app(f2, normalize(ctx, a, None)), None),
            }
        }
        Term::PApp(f, args) => {
            let (f2, fty) = normalize_neutral(ctx, f);
            let ty = match fty.map(|t| whnf(ctx, &t)) {
                Some(Term::ExtTy(xs, a, _)) if xs.len() == args.len() => {
                    let s: Subst = xs.iter().cloned().zip(args.iter().cloned()).collect();
                    Some(subst(&a, &s))
                }
                _ => None,
            };
            (Term::papp(f2, args.clone()), ty)
        }
        Term::OutS(d, u) => {
            let (u2, uty) = normalize_neutral(ctx, u);
            let ty = match uty.map(|t| whnf(ctx, &t)) {
                Some(Term::SubTy(a, _, _)) => Some((*a).clone()),
                _ => None,
            };
            (Term::out_s(d.clone(), u2), ty)
        }
        Term::HComp {
            carrier,
            walls,
            floor,
            cofib,
        } => {
            let walls_ty = Term::arrow(Term::Interval, Term::partial_ty(cofib.clone(), (**carrier).clone()));
            let t = Term::hcomp(
                normalize(ctx, carrier, Some(&Term::Univ)),
                normalize(ctx, walls, Some(&walls_ty)),
                normalize(ctx, floor, Some(carrier)),
                cofib.clone(),
            );
            (t, neutral_type(ctx, v))
        }
        _ => (normalize(ctx, v, None), None),
    }
}
