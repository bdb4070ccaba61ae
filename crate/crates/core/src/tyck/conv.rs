//! Type-directed conversion with η for functions, extension types and
//! subtypes. Partial elements are compared face by face.

use std::sync::Arc;

use crate::cofib::{self, Conj};
use crate::eval::{inst, neutral_type, partial_faces, whnf};
use crate::interval::{iconv, IExpr};
use crate::syntax::{free_names, subst, subst1, Face, Subst, Term};

use super::{Binding, Context};

/// Conversion under the context's restriction: one check per clause.
pub fn convert(ctx: &Context, a: &Term, b: &Term, ty: &Term) -> bool {
    let plain = ctx.with_restriction(cofib::Disj::Truth);
    ctx.restriction
        .conjs()
        .iter()
        .all(|c| conv_under_conj(&plain, c, a, b, ty))
}

/// Moves into the face `theta` by substituting its endpoint assignment
/// everywhere, then compares. A contradictory `theta` holds vacuously.
pub fn conv_under_conj(ctx: &Context, theta: &Conj, a: &Term, b: &Term, ty: &Term) -> bool {
    let Some(m) = cofib::conj_to_subst(theta) else {
        return true;
    };
    let s: Subst = m.into_iter().map(|(k, e)| (k, Term::IConst(e))).collect();
    conv(&ctx.restrict(&s), &subst(a, &s), &subst(b, &s), &subst(ty, &s))
}

fn fresh_for(ctx: &Context, base: &str, terms: &[&Term]) -> crate::syntax::Name {
    let avoid = terms.iter().flat_map(|t| free_names(t)).collect();
    ctx.fresh(base, &avoid)
}

/// Conversion of two terms at a type, outside any restriction.
pub fn conv(ctx: &Context, a: &Term, b: &Term, ty: &Term) -> bool {
    match whnf(ctx, ty) {
        Term::Pi(x, dom, cod) => {
            let y = fresh_for(ctx, &x, &[a, b, &cod]);
            let cx = ctx.extend_typed(y.clone(), &dom);
            let yv = Term::Var(y);
            conv(
                &cx,
                &Term::app(a.clone(), yv.clone()),
                &Term::app(b.clone(), yv.clone()),
                &subst1(&cod, &x, yv),
            )
        }
        Term::ExtTy(xs, carrier, _) => {
            let mut cx = ctx.clone();
            let mut s = Subst::new();
            let mut args = Vec::new();
            for x in &xs {
                let y = fresh_for(&cx, x, &[a, b, &carrier]);
                cx.push(y.clone(), Binding::Interval);
                s.insert(x.clone(), Term::Var(y.clone()));
                args.push(Term::Var(y));
            }
            conv(
                &cx,
                &Term::papp(a.clone(), args.clone()),
                &Term::papp(b.clone(), args),
                &subst(&carrier, &s),
            )
        }
        Term::SubTy(carrier, d, _) => conv(
            ctx,
            &Term::out_s(d.clone(), a.clone()),
            &Term::out_s(d, b.clone()),
            &carrier,
        ),
        Term::PartialTy(d, carrier) => d.conjs().iter().all(|theta| {
            let Some(m) = cofib::conj_to_subst(theta) else {
                return true;
            };
            let s: Subst = m.into_iter().map(|(k, e)| (k, Term::IConst(e))).collect();
            let cx = ctx.restrict(&s);
            let va = whnf(&cx, &subst(a, &s));
            let vb = whnf(&cx, &subst(b, &s));
            let carrier = subst(&carrier, &s);
            match (face_value(&va), face_value(&vb)) {
                (Some(u), Some(v)) => conv(&cx, &u, &v, &carrier),
                _ => conv_whnf(&cx, &va, &vb),
            }
        }),
        Term::Interval => {
            let (va, vb) = (whnf(ctx, a), whnf(ctx, b));
            match (IExpr::from_term(&va), IExpr::from_term(&vb)) {
                (Some(x), Some(y)) => iconv(&x, &y),
                _ => conv_whnf(ctx, &va, &vb),
            }
        }
        Term::Univ => conv_types(ctx, a, b),
        _ => conv_whnf(ctx, &whnf(ctx, a), &whnf(ctx, b)),
    }
}

/// The body of a partial element that is total at this point.
fn face_value(p: &Term) -> Option<Term> {
    match p {
        Term::TrivialPartial(u) => Some((**u).clone()),
        _ => None,
    }
}

/// Comparison of values whose type gave no η rule to apply.
fn conv_whnf(ctx: &Context, a: &Term, b: &Term) -> bool {
    if conv_neutral(ctx, a, b).is_some() {
        return true;
    }
    match (a, b) {
        (Term::Univ | Term::Interval | Term::Pi(..) | Term::PartialTy(..) | Term::ExtTy(..) | Term::SubTy(..), _) => {
            conv_types(ctx, a, b)
        }
        (Term::IConst(x), Term::IConst(y)) => x == y,
        (Term::InS(_, u), Term::InS(_, v)) => conv_whnf(ctx, &whnf(ctx, u), &whnf(ctx, v)),
        (Term::TrivialPartial(u), Term::TrivialPartial(v)) => conv_whnf(ctx, &whnf(ctx, u), &whnf(ctx, v)),
        _ => crate::syntax::alpha_eq(a, b),
    }
}

/// Structural comparison of types.
pub fn conv_types(ctx: &Context, a: &Term, b: &Term) -> bool {
    let (a, b) = (whnf(ctx, a), whnf(ctx, b));
    match (&a, &b) {
        (Term::Univ, Term::Univ) | (Term::Interval, Term::Interval) => true,
        (Term::Pi(x, a1, b1), Term::Pi(y, a2, b2)) => {
            if !conv_types(ctx, a1, a2) {
                return false;
            }
            let z = fresh_for(ctx, x, &[b1, b2]);
            let cx = ctx.extend_typed(z.clone(), a1);
            let zv = Term::Var(z);
            conv_types(&cx, &subst1(b1, x, zv.clone()), &subst1(b2, y, zv))
        }
        (Term::PartialTy(d1, a1), Term::PartialTy(d2, a2)) => {
            cofib::cofib_equiv(d1, d2) && conv_types(ctx, a1, a2)
        }
        (Term::ExtTy(xs, a1, f1), Term::ExtTy(ys, a2, f2)) => {
            if xs.len() != ys.len() {
                return false;
            }
            let mut cx = ctx.clone();
            let (mut s1, mut s2) = (Subst::new(), Subst::new());
            for (x, y) in xs.iter().zip(ys) {
                let z = fresh_for(&cx, x, &[a1, a2, &a, &b]);
                cx.push(z.clone(), Binding::Interval);
                s1.insert(x.clone(), Term::Var(z.clone()));
                s2.insert(y.clone(), Term::Var(z));
            }
            let (c1, c2) = (subst(a1, &s1), subst(a2, &s2));
            conv_types(&cx, &c1, &c2)
                && conv_boundaries(
                    &cx,
                    &crate::syntax::subst_faces(f1, &s1),
                    &crate::syntax::subst_faces(f2, &s2),
                    &c1,
                )
        }
        (Term::SubTy(a1, d1, f1), Term::SubTy(a2, d2, f2)) => {
            cofib::cofib_equiv(d1, d2) && conv_types(ctx, a1, a2) && conv_boundaries(ctx, f1, f2, a1)
        }
        _ => conv_neutral(ctx, &a, &b).is_some(),
    }
}

/// Two face lists describe the same partial element of `carrier`.
fn conv_boundaries(ctx: &Context, f1: &[Face], f2: &[Face], carrier: &Term) -> bool {
    let d1 = cofib::Disj::from_conjs(f1.iter().map(|f| f.cofib.clone()));
    let d2 = cofib::Disj::from_conjs(f2.iter().map(|f| f.cofib.clone()));
    cofib::cofib_equiv(&d1, &d2)
        && conv(
            ctx,
            &Term::PartialEl(f1.to_vec()),
            &Term::PartialEl(f2.to_vec()),
            &Term::partial_ty(d1, carrier.clone()),
        )
}

/// Compares two neutral values and returns their common type.
pub fn conv_neutral(ctx: &Context, a: &Term, b: &Term) -> Option<Term> {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) if x == y => neutral_type(ctx, a).or(Some(Term::Univ)),
        (Term::App(f, x), Term::App(g, y)) => {
            if let (Term::Coe(l1, d1), Term::Coe(l2, d2)) = (&**f, &**g) {
                let i = fresh_for(ctx, "i", &[l1, l2]);
                let ci = ctx.extend(i.clone(), Binding::Interval);
                let iv = Term::Var(i);
                let same_coe = cofib::cofib_equiv(d1, d2) && conv_types(&ci, &inst(l1, iv.clone()), &inst(l2, iv));
                return (same_coe && conv(ctx, x, y, &inst(l1, Term::zero()))).then(|| inst(l1, Term::one()));
            }
            let fty = conv_neutral(ctx, f, g)?;
            match whnf(ctx, &fty) {
                Term::Pi(z, dom, cod) => conv(ctx, x, y, &dom).then(|| subst1(&cod, &z, (**x).clone())),
                _ => None,
            }
        }
        (Term::PApp(f, xs), Term::PApp(g, ys)) if xs.len() == ys.len() => {
            let fty = conv_neutral(ctx, f, g)?;
            let args_eq = xs.iter().zip(ys).all(|(x, y)| conv(ctx, x, y, &Term::Interval));
            if !args_eq {
                return None;
            }
            match whnf(ctx, &fty) {
                Term::ExtTy(zs, carrier, _) if zs.len() == xs.len() => {
                    let s: Subst = zs.iter().cloned().zip(xs.iter().cloned()).collect();
                    Some(subst(&carrier, &s))
                }
                _ => None,
            }
        }
        (Term::OutS(_, u), Term::OutS(_, v)) => match whnf(ctx, &conv_neutral(ctx, u, v)?) {
            Term::SubTy(carrier, _, _) => Some((*carrier).clone()),
            _ => None,
        },
        (
            Term::HComp {
                carrier: a1,
                walls: w1,
                floor: u1,
                cofib: d1,
            },
            Term::HComp {
                carrier: a2,
                walls: w2,
                floor: u2,
                cofib: d2,
            },
        ) => {
            let walls_ty = Term::arrow(Term::Interval, Term::PartialTy(d1.clone(), Arc::clone(a1)));
            let same = cofib::cofib_equiv(d1, d2)
                && conv_types(ctx, a1, a2)
                && conv(ctx, u1, u2, a1)
                && conv(ctx, w1, w2, &walls_ty);
            if !same {
                return None;
            }
            let top = whnf(ctx, &Term::app((**w1).clone(), Term::one()));
            let faces = partial_faces(&top, d1)?;
            Some(Term::SubTy(a1.clone(), d1.clone(), faces))
        }
        _ => None,
    }
}
