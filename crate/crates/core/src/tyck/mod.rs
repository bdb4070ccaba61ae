//! Bidirectional type checker.
//!
//! Introduction forms (`\x`, `\^x`, partial elements, `inS`) are checked;
//! everything else is inferred and compared with the expected type.
//! Checking under a face substitutes the face's endpoint assignment into
//! the term, the type and the context.

use std::sync::Arc;

use crate::cofib::{self, Conj, Disj};
use crate::eval::{freezes, inst, partial_faces, whnf};
use crate::interval::IExpr;
use crate::syntax::{free_names, subst, subst1, subst_faces, Face, Name, Subst, Term};

mod context;
pub mod conv;
mod error;

pub use context::{Binding, Context, Def};
pub use conv::{conv_types, conv_under_conj, convert};
pub use error::TypeError;

pub type Result<T> = std::result::Result<T, TypeError>;

fn face_subst(c: &Conj) -> Option<Subst> {
    cofib::conj_to_subst(c).map(|m| m.into_iter().map(|(k, e)| (k, Term::IConst(e))).collect())
}

fn check_cofib(ctx: &Context, d: &Disj) -> Result<()> {
    match d.vars().into_iter().find(|x| !ctx.is_interval(x)) {
        None => Ok(()),
        Some(x) => Err(TypeError::IllFormedCofibration(format!(
            "{x} is not an interval variable in {d}"
        ))),
    }
}

fn check_conj(ctx: &Context, c: &Conj) -> Result<()> {
    check_cofib(ctx, &Disj::from_conj(c.clone()))
}

/// Checks that `a` is a type and returns it.
pub fn check_type(ctx: &Context, a: &Term) -> Result<Term> {
    match a {
        Term::Univ | Term::Interval => {}
        Term::Pi(x, dom, cod) => {
            check_type(ctx, dom)?;
            let (y, cod) = enter(ctx, x, cod, &[]);
            check_type(&ctx.extend_typed(y, dom), &cod)?;
        }
        Term::PartialTy(d, carrier) => {
            check_cofib(ctx, d)?;
            check_type(ctx, carrier)?;
        }
        Term::ExtTy(xs, carrier, faces) => {
            for f in faces {
                if let Some(c) = f.cofib.conds.iter().find(|c| !xs.contains(&c.var)) {
                    return Err(TypeError::IllFormedCofibration(format!(
                        "extension faces may only mention the bound variables, found {}",
                        c.var
                    )));
                }
            }
            let (_, cx, s) = enter_intervals(ctx, xs, a);
            let carrier = subst(carrier, &s);
            let faces = subst_faces(faces, &s);
            check_type(&cx, &carrier)?;
            check_partial(&cx, &faces, &carrier)?;
        }
        Term::SubTy(carrier, d, faces) => {
            check_type(ctx, carrier)?;
            check_cofib(ctx, d)?;
            let found = check_partial(ctx, faces, carrier)?;
            if !cofib::cofib_equiv(d, &found) {
                return Err(TypeError::CofibrationMismatch {
                    expected: d.to_string(),
                    found: found.to_string(),
                });
            }
        }
        _ => {
            let ty = infer(ctx, a)?;
            if !matches!(whnf(ctx, &ty), Term::Univ) {
                return Err(TypeError::NotAType(a.clone()));
            }
        }
    }
    Ok(a.clone())
}

/// Renames a binder away from the context when it would shadow something.
fn enter(ctx: &Context, x: &Name, body: &Term, extra: &[&Term]) -> (Name, Term) {
    let mut avoid = free_names(body);
    for t in extra {
        avoid.extend(free_names(t));
    }
    avoid.remove(x);
    let y = ctx.fresh_binder(x, &avoid);
    if &y == x {
        (y, body.clone())
    } else {
        let b = subst1(body, x, Term::Var(y.clone()));
        (y, b)
    }
}

fn enter_intervals(ctx: &Context, xs: &[Name], scope: &Term) -> (Vec<Name>, Context, Subst) {
    let mut avoid = free_names(scope);
    let mut cx = ctx.clone();
    let mut ys = Vec::new();
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

fn mismatch(expected: &Term, found: &Term) -> TypeError {
    TypeError::TypeMismatch {
        expected: expected.clone(),
        found: found.clone(),
    }
}

pub fn check(ctx: &Context, t: &Term, ty: &Term) -> Result<()> {
    let target = whnf(ctx, ty);
    match (t, &target) {
        (Term::Lam(x, b), Term::Pi(y, dom, cod)) => {
            let base = if &**x == "_" { y } else { x };
            let mut avoid = free_names(b);
            avoid.extend(free_names(cod));
            avoid.remove(x);
            avoid.remove(y);
            let z = ctx.fresh_binder(base, &avoid);
            let zv = Term::Var(z.clone());
            let body = subst1(b, x, zv.clone());
            let cod = subst1(cod, y, zv);
            check(&ctx.extend_typed(z, dom), &body, &cod)
        }
        (Term::PLam(xs, b), Term::ExtTy(ys, carrier, faces)) => {
            if xs.len() != ys.len() {
                return Err(TypeError::ExpectedFormer {
                    expected: "a path abstraction binding one variable per dimension",
                    found: target.clone(),
                });
            }
            let (zs, cx, _) = enter_intervals(ctx, xs, &Term::app(t.clone(), target.clone()));
            let zvars: Vec<Term> = zs.iter().cloned().map(Term::Var).collect();
            let sb: Subst = xs.iter().cloned().zip(zvars.iter().cloned()).collect();
            let st: Subst = ys.iter().cloned().zip(zvars).collect();
            let body = subst(b, &sb);
            let carrier = subst(carrier, &st);
            check(&cx, &body, &carrier)?;
            for f in subst_faces(faces, &st) {
                if !conv_under_conj(&cx, &f.cofib, &body, &f.body, &carrier) {
                    return Err(boundary_error(&cx, &f, &body));
                }
            }
            Ok(())
        }
        (Term::PartialEl(faces), Term::PartialTy(d, carrier)) => {
            let found = check_partial(ctx, faces, carrier)?;
            if cofib::cofib_equiv(d, &found) {
                Ok(())
            } else {
                Err(TypeError::CofibrationMismatch {
                    expected: d.to_string(),
                    found: found.to_string(),
                })
            }
        }
        (Term::TrivialPartial(u), Term::PartialTy(_, carrier)) => check(ctx, u, carrier),
        (Term::InS(d, u), Term::SubTy(carrier, e, faces)) => {
            check_cofib(ctx, d)?;
            if !cofib::cofib_equiv(d, e) {
                return Err(TypeError::CofibrationMismatch {
                    expected: e.to_string(),
                    found: d.to_string(),
                });
            }
            check(ctx, u, carrier)?;
            for f in faces {
                if !conv_under_conj(ctx, &f.cofib, u, &f.body, carrier) {
                    return Err(boundary_error(ctx, f, u));
                }
            }
            Ok(())
        }
        (_, Term::Interval) => check_interval(ctx, t),
        _ => {
            let found = infer(ctx, t)?;
            if conv_types(ctx, &found, &target) {
                Ok(())
            } else {
                Err(mismatch(&target, &found))
            }
        }
    }
}

fn boundary_error(ctx: &Context, f: &Face, found: &Term) -> TypeError {
    let s = face_subst(&f.cofib).unwrap_or_default();
    let cx = ctx.restrict(&s);
    TypeError::BoundaryMismatch {
        witness: f.cofib.clone(),
        expected: crate::eval::normalize(&cx, &subst(&f.body, &s), None),
        found: crate::eval::normalize(&cx, &subst(found, &s), None),
    }
}

/// Interval expressions must be built from interval variables, constants
/// and the De Morgan operations, possibly after evaluation.
fn check_interval(ctx: &Context, t: &Term) -> Result<()> {
    match t {
        Term::Var(x) if ctx.is_interval(x) => Ok(()),
        Term::IConst(_) => Ok(()),
        Term::INeg(a) => check_interval(ctx, a),
        Term::IAnd(a, b) | Term::IOr(a, b) => {
            check_interval(ctx, a)?;
            check_interval(ctx, b)
        }
        _ => {
            let found = infer(ctx, t)?;
            if !matches!(whnf(ctx, &found), Term::Interval) {
                return Err(mismatch(&Term::Interval, &found));
            }
            let v = whnf(ctx, t);
            match IExpr::from_term(&v) {
                Some(e) if e.vars().iter().all(|x| ctx.is_interval(x)) => Ok(()),
                _ => Err(TypeError::ExpectedFormer {
                    expected: "an interval expression over interval variables",
                    found: v,
                }),
            }
        }
    }
}

/// Checks the faces of a partial element: each body under its own face,
/// each pair agreeing on the overlap. Returns the covered cofibration.
pub fn check_partial(ctx: &Context, faces: &[Face], carrier: &Term) -> Result<Disj> {
    for f in faces {
        check_conj(ctx, &f.cofib)?;
        if let Some(s) = face_subst(&f.cofib) {
            check(&ctx.restrict(&s), &subst(&f.body, &s), &subst(carrier, &s))?;
        }
    }
    for (i, fi) in faces.iter().enumerate() {
        for (j, fj) in faces.iter().enumerate().skip(i + 1) {
            let Some(overlap) = fi.cofib.meet(&fj.cofib) else {
                continue;
            };
            if !conv_under_conj(ctx, &overlap, &fi.body, &fj.body, carrier) {
                return Err(TypeError::FaceDisagreement { i, j, witness: overlap });
            }
        }
    }
    Ok(Disj::from_conjs(faces.iter().map(|f| f.cofib.clone())))
}

/// Coe and hcomp are only defined on types built from Π, extension types,
/// the universe and neutral types.
fn check_fibrant(ctx: &Context, ty: &Term) -> Result<()> {
    match whnf(ctx, ty) {
        Term::Interval | Term::PartialTy(..) | Term::SubTy(..) => Err(TypeError::NotFibrant(ty.clone())),
        Term::Pi(x, dom, cod) => {
            check_fibrant(ctx, &dom)?;
            let (y, cod) = enter(ctx, &x, &cod, &[]);
            check_fibrant(&ctx.extend_typed(y, &dom), &cod)
        }
        Term::ExtTy(xs, carrier, _) => {
            let (_, cx, s) = enter_intervals(ctx, &xs, &carrier);
            check_fibrant(&cx, &subst(&carrier, &s))
        }
        _ => Ok(()),
    }
}

fn line_type() -> Term {
    Term::arrow(Term::Interval, Term::Univ)
}

pub fn infer(ctx: &Context, t: &Term) -> Result<Term> {
    match t {
        Term::Var(x) => match ctx.lookup(x) {
            Some(Binding::Typed(ty)) => Ok(ty.clone()),
            Some(Binding::Interval) => Ok(Term::Interval),
            Some(Binding::Untyped) => Err(TypeError::CannotInfer(t.clone())),
            None => Err(TypeError::UnboundVariable(x.clone())),
        },
        Term::Global(x) => ctx
            .global(x)
            .map(|d| d.ty.clone())
            .ok_or_else(|| TypeError::UnboundVariable(x.clone())),
        Term::App(f, a) => {
            let fty = infer(ctx, f)?;
            match whnf(ctx, &fty) {
                Term::Pi(x, dom, cod) => {
                    check(ctx, a, &dom)?;
                    Ok(subst1(&cod, &x, (**a).clone()))
                }
                other => Err(TypeError::ExpectedFormer {
                    expected: "a function",
                    found: other,
                }),
            }
        }
        Term::PApp(f, args) => {
            let fty = infer(ctx, f)?;
            match whnf(ctx, &fty) {
                Term::ExtTy(xs, carrier, _) if xs.len() == args.len() => {
                    for a in args {
                        check_interval(ctx, a)?;
                    }
                    let s: Subst = xs.iter().cloned().zip(args.iter().cloned()).collect();
                    Ok(subst(&carrier, &s))
                }
                other => Err(TypeError::ExpectedFormer {
                    expected: "an extension type with one binder per argument",
                    found: other,
                }),
            }
        }
        Term::OutS(d, u) => {
            check_cofib(ctx, d)?;
            let uty = infer(ctx, u)?;
            match whnf(ctx, &uty) {
                Term::SubTy(carrier, e, _) => {
                    if cofib::cofib_equiv(d, &e) {
                        Ok((*carrier).clone())
                    } else {
                        Err(TypeError::CofibrationMismatch {
                            expected: e.to_string(),
                            found: d.to_string(),
                        })
                    }
                }
                other => Err(TypeError::ExpectedFormer {
                    expected: "a subtype",
                    found: other,
                }),
            }
        }
        Term::InS(d, u) => {
            check_cofib(ctx, d)?;
            let carrier = infer(ctx, u)?;
            let faces = d.conjs().into_iter().map(|c| Face::new(c, (**u).clone())).collect();
            Ok(Term::SubTy(Arc::new(carrier), d.clone(), faces))
        }
        Term::Coe(line, d) => {
            check(ctx, line, &line_type())?;
            check_cofib(ctx, d)?;
            let j = ctx.fresh("j", &free_names(line));
            let cj = ctx.extend(j.clone(), Binding::Interval);
            let body = inst(line, Term::Var(j));
            check_fibrant(&cj, &body)?;
            if let Term::ExtTy(xs, _, _) = whnf(&cj, &body) {
                if xs.len() != 1 {
                    return Err(TypeError::ExtCoeDimension(xs.len()));
                }
            }
            if !freezes(ctx, line, d) {
                return Err(TypeError::FreezeViolation {
                    line: (**line).clone(),
                    cofib: d.to_string(),
                });
            }
            Ok(Term::arrow(inst(line, Term::zero()), inst(line, Term::one())))
        }
        Term::HComp {
            carrier,
            walls,
            floor,
            cofib: d,
        } => {
            check_type(ctx, carrier)?;
            if matches!(whnf(ctx, carrier), Term::Univ) {
                return Err(TypeError::NotFibrant((**carrier).clone()));
            }
            check_fibrant(ctx, carrier)?;
            check_cofib(ctx, d)?;
            let partial = Term::partial_ty(d.clone(), (**carrier).clone());
            check(ctx, walls, &Term::arrow(Term::Interval, partial.clone()))?;
            check(ctx, floor, carrier)?;
            let bottom = Term::app((**walls).clone(), Term::zero());
            let floor_partial = Term::trivial((**floor).clone());
            for c in d.conjs() {
                if !conv_under_conj(ctx, &c, &floor_partial, &bottom, &partial) {
                    return Err(TypeError::FloorWallDisagreement { witness: c });
                }
            }
            let top = whnf(ctx, &Term::app((**walls).clone(), Term::one()));
            let faces = partial_faces(&top, d).ok_or_else(|| TypeError::CannotInfer(t.clone()))?;
            Ok(Term::SubTy(carrier.clone(), d.clone(), faces))
        }
        Term::IConst(_) | Term::INeg(_) | Term::IAnd(..) | Term::IOr(..) => {
            check_interval(ctx, t)?;
            Ok(Term::Interval)
        }
        Term::Univ | Term::Interval | Term::Pi(..) | Term::PartialTy(..) | Term::ExtTy(..) | Term::SubTy(..) => {
            check_type(ctx, t)?;
            Ok(Term::Univ)
        }
        Term::Lam(..) | Term::PLam(..) | Term::PartialEl(_) | Term::TrivialPartial(_) => {
            Err(TypeError::CannotInfer(t.clone()))
        }
    }
}

/// Checks a declaration `params : ret => body` and closes it over its
/// parameters.
pub fn check_def(ctx: &Context, params: &[(Name, Term)], ret: &Term, body: &Term) -> Result<Def> {
    let mut cx = ctx.clone();
    for (x, a) in params {
        check_type(&cx, a)?;
        cx = cx.extend_typed(x.clone(), a);
    }
    check_type(&cx, ret)?;
    check(&cx, body, ret)?;
    let ty = params
        .iter()
        .rev()
        .fold(ret.clone(), |acc, (x, a)| Term::Pi(x.clone(), Arc::new(a.clone()), Arc::new(acc)));
    let value = params
        .iter()
        .rev()
        .fold(body.clone(), |acc, (x, _)| Term::Lam(x.clone(), Arc::new(acc)));
    Ok(Def { ty, value })
}

/// The context a declaration's body lives in: the globals plus its
/// parameters.
pub fn params_context(ctx: &Context, params: &[(Name, Term)]) -> Context {
    params
        .iter()
        .fold(ctx.clone(), |cx, (x, a)| cx.extend_typed(x.clone(), a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cofib::Endpoint;
    use crate::syntax::name;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    fn base() -> Context {
        Context::new()
            .extend(name("A"), Binding::Typed(Term::Univ))
            .extend(name("a"), Binding::Typed(v("A")))
            .extend(name("b"), Binding::Typed(v("A")))
    }

    fn path(a: Term, b: Term) -> Term {
        Term::ext(
            &["i"],
            v("A"),
            vec![
                Face::new(Conj::single("i", Endpoint::Zero), a),
                Face::new(Conj::single("i", Endpoint::One), b),
            ],
        )
    }

    #[test]
    fn interval_constants_infer() {
        assert_eq!(infer(&Context::new(), &Term::zero()), Ok(Term::Interval));
        assert_eq!(infer(&Context::new(), &Term::one()), Ok(Term::Interval));
    }

    #[test]
    fn refl_checks_at_path_type() {
        let ctx = base();
        let refl = Term::plam(&["i"], v("a"));
        check(&ctx, &refl, &path(v("a"), v("a"))).unwrap();
        let err = check(&ctx, &refl, &path(v("a"), v("b"))).unwrap_err();
        assert_eq!(err.code(), "E-BOUNDARY");
    }

    #[test]
    fn lambda_checks_and_application_infers() {
        let ctx = base();
        let id = Term::lam("x", v("x"));
        check(&ctx, &id, &Term::arrow(v("A"), v("A"))).unwrap();
        let ctx = ctx.extend(name("f"), Binding::Typed(Term::arrow(v("A"), v("A"))));
        assert_eq!(infer(&ctx, &Term::app(v("f"), v("a"))), Ok(v("A")));
        assert!(infer(&ctx, &id).is_err());
    }

    #[test]
    fn empty_partial_element() {
        let ctx = base();
        check(&ctx, &Term::PartialEl(vec![]), &Term::partial_ty(Disj::Absurd, v("A"))).unwrap();
    }

    #[test]
    fn disagreeing_faces() {
        let ctx = base().extend(name("i"), Binding::Interval);
        let pe = Term::PartialEl(vec![
            Face::new(Conj::single("i", Endpoint::Zero), v("a")),
            Face::new(Conj::default(), v("b")),
        ]);
        let d = Disj::Truth;
        let err = check(&ctx, &pe, &Term::partial_ty(d, v("A"))).unwrap_err();
        assert_eq!(err.code(), "E-FACE-DISAGREE");
    }

    #[test]
    fn ext_faces_must_use_bound_variables() {
        let ctx = base().extend(name("j"), Binding::Interval);
        let ty = Term::ext(&["i"], v("A"), vec![Face::new(Conj::single("j", Endpoint::Zero), v("a"))]);
        assert_eq!(check_type(&ctx, &ty).unwrap_err().code(), "E-COFIB");
    }

    #[test]
    fn freeze_premise() {
        let ctx = base();
        let line = Term::lam("x", path(v("a"), v("a")));
        // constant line freezes anywhere
        infer(&ctx, &Term::coe(line, Disj::Truth)).unwrap();
        let ctx = ctx.extend(name("p"), Binding::Typed(path(v("a"), v("b"))));
        let moving = Term::lam("x", path(v("a"), Term::papp(v("p"), vec![v("x")])));
        assert_eq!(
            infer(&ctx, &Term::coe(moving.clone(), Disj::Truth)).unwrap_err().code(),
            "E-FREEZE"
        );
        infer(&ctx, &Term::coe(moving, Disj::Absurd)).unwrap();
    }

    #[test]
    fn kan_operations_reject_pretypes() {
        let ctx = base();
        let line = Term::lam("_", Term::Interval);
        assert_eq!(infer(&ctx, &Term::coe(line, Disj::Absurd)).unwrap_err().code(), "E-NOT-FIBRANT");
    }
}
