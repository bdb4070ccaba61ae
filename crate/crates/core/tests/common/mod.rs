//! Generators and oracles shared by the property and acceptance tests.
#![allow(dead_code)]

use std::sync::Arc;

use cubik_core::cofib::{Cond, Conj, Disj, Endpoint};
use cubik_core::syntax::{name, Face, Term};
use cubik_core::IExpr;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

pub const VARS: [&str; 3] = ["x", "y", "z"];

/// One element of the four-element De Morgan algebra per assignment, bit
/// sliced: element k lives in bit k of both words. 0 = (0,0), 1 = (1,1),
/// and the two fixed points of negation are (1,0) and (0,1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dm4(pub u64, pub u64);

impl Dm4 {
    pub const ZERO: Dm4 = Dm4(0, 0);
    pub const ONE: Dm4 = Dm4(!0, !0);

    pub fn and(self, o: Dm4) -> Dm4 {
        Dm4(self.0 & o.0, self.1 & o.1)
    }

    pub fn or(self, o: Dm4) -> Dm4 {
        Dm4(self.0 | o.0, self.1 | o.1)
    }

    pub fn neg(self) -> Dm4 {
        Dm4(!self.1, !self.0)
    }
}

/// The value of variable `v` (0, 1 or 2) across all 64 assignments of
/// three variables into DM4. Assignment k gives variable v the element
/// `(k >> 2v) & 3`, read as two bits.
pub fn dm4_var(v: usize) -> Dm4 {
    let (mut lo, mut hi) = (0u64, 0u64);
    for k in 0..64 {
        let e = (k >> (2 * v)) & 3;
        lo |= ((e & 1) as u64) << k;
        hi |= (((e >> 1) & 1) as u64) << k;
    }
    Dm4(lo, hi)
}

pub fn dm4_eval(e: &IExpr) -> Dm4 {
    match e {
        IExpr::Zero => Dm4::ZERO,
        IExpr::One => Dm4::ONE,
        IExpr::Var(x) => dm4_var(VARS.iter().position(|v| **v == **x).expect("variable outside x y z")),
        IExpr::Neg(a) => dm4_eval(a).neg(),
        IExpr::And(a, b) => dm4_eval(a).and(dm4_eval(b)),
        IExpr::Or(a, b) => dm4_eval(a).or(dm4_eval(b)),
    }
}

fn leaf(consts: bool) -> BoxedStrategy<IExpr> {
    let vars = prop::sample::select(VARS.to_vec()).prop_map(IExpr::var);
    if consts {
        prop_oneof![1 => Just(IExpr::Zero), 1 => Just(IExpr::One), 4 => vars].boxed()
    } else {
        vars.boxed()
    }
}

pub fn arb_iexpr_with(consts: bool) -> BoxedStrategy<IExpr> {
    leaf(consts)
        .prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(IExpr::neg),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| IExpr::and(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| IExpr::or(a, b)),
            ]
        })
        .boxed()
}

pub fn arb_iexpr() -> BoxedStrategy<IExpr> {
    arb_iexpr_with(true)
}

pub fn arb_conj() -> impl Strategy<Value = Conj> {
    prop::collection::vec((prop::sample::select(VARS.to_vec()), any::<bool>()), 1..3).prop_filter_map(
        "contradictory clause",
        |cs| Conj::from_conds(cs.into_iter().map(|(v, b)| Cond::new(v, endpoint(b)))),
    )
}

pub fn arb_disj() -> impl Strategy<Value = Disj> {
    prop_oneof![
        1 => Just(Disj::Absurd),
        1 => Just(Disj::Truth),
        6 => prop::collection::vec(arb_conj(), 1..4).prop_map(Disj::from_conjs),
    ]
}

pub fn endpoint(one: bool) -> Endpoint {
    if one {
        Endpoint::One
    } else {
        Endpoint::Zero
    }
}

/// Draws one value from a strategy with a deterministic runner.
pub fn draw<S: Strategy>(runner: &mut TestRunner, s: &S) -> S::Value {
    s.new_tree(runner).expect("strategy rejected too many values").current()
}

/// Rewrites `e` into an equal expression by De Morgan algebra laws, with
/// choices read off `tape`.
pub fn equal_rewrite(e: &IExpr, tape: &mut dyn Iterator<Item = u8>, depth: usize) -> IExpr {
    let choice = if depth == 0 { 0 } else { tape.next().unwrap_or(0) % 9 };
    let d = depth.saturating_sub(1);
    let rec = |a: &IExpr, tape: &mut dyn Iterator<Item = u8>| equal_rewrite(a, tape, d);
    match (choice, e) {
        (1, IExpr::And(a, b)) => IExpr::and(rec(b, tape), rec(a, tape)),
        (1, IExpr::Or(a, b)) => IExpr::or(rec(b, tape), rec(a, tape)),
        (2, _) => IExpr::neg(IExpr::neg(rec(e, tape))),
        (3, IExpr::Neg(inner)) => match &**inner {
            IExpr::And(a, b) => IExpr::or(IExpr::neg(rec(a, tape)), IExpr::neg(rec(b, tape))),
            IExpr::Or(a, b) => IExpr::and(IExpr::neg(rec(a, tape)), IExpr::neg(rec(b, tape))),
            IExpr::Neg(a) => rec(a, tape),
            IExpr::Zero => IExpr::One,
            IExpr::One => IExpr::Zero,
            IExpr::Var(_) => e.clone(),
        },
        (4, _) => {
            let r = rec(e, tape);
            IExpr::or(r.clone(), IExpr::and(r, IExpr::var("z")))
        }
        (5, _) => {
            let r = rec(e, tape);
            IExpr::and(r.clone(), r)
        }
        (6, IExpr::And(a, bc)) => match &**bc {
            IExpr::Or(b, c) => {
                let a = rec(a, tape);
                IExpr::or(IExpr::and(a.clone(), rec(b, tape)), IExpr::and(a, rec(c, tape)))
            }
            _ => IExpr::and(rec(a, tape), rec(bc, tape)),
        },
        (7, _) => IExpr::or(rec(e, tape), IExpr::Zero),
        (8, _) => IExpr::and(IExpr::One, rec(e, tape)),
        (_, IExpr::Neg(a)) => IExpr::neg(rec(a, tape)),
        (_, IExpr::And(a, b)) => IExpr::and(rec(a, tape), rec(b, tape)),
        (_, IExpr::Or(a, b)) => IExpr::or(rec(a, tape), rec(b, tape)),
        _ => e.clone(),
    }
}

const TERM_VARS: [&str; 6] = ["a", "b", "f", "x", "i", "j"];

fn arb_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(TERM_VARS.to_vec())
}

fn arb_faces(body: BoxedStrategy<Term>) -> impl Strategy<Value = Vec<Face>> {
    prop::collection::vec((arb_conj(), body), 0..3).prop_map(|fs| fs.into_iter().map(|(c, b)| Face::new(c, b)).collect())
}

/// Arbitrary raw terms, not necessarily well typed, covering every
/// constructor the surface syntax can express.
pub fn arb_term() -> BoxedStrategy<Term> {
    let leaf = prop_oneof![
        4 => arb_name().prop_map(Term::var),
        1 => Just(Term::Univ),
        1 => Just(Term::Interval),
        1 => any::<bool>().prop_map(|b| Term::IConst(endpoint(b))),
    ];
    leaf.prop_recursive(4, 48, 4, |t| {
        let binders = || prop::collection::vec(arb_name(), 1..3);
        prop_oneof![
            (arb_name(), t.clone()).prop_map(|(x, b)| Term::lam(x, b)),
            (t.clone(), t.clone()).prop_map(|(f, a)| Term::app(f, a)),
            (arb_name(), t.clone(), t.clone()).prop_map(|(x, a, b)| Term::pi(x, a, b)),
            (t.clone(), t.clone()).prop_map(|(a, b)| Term::arrow(a, b)),
            t.clone().prop_map(Term::ineg),
            (t.clone(), t.clone()).prop_map(|(a, b)| Term::iand(a, b)),
            (t.clone(), t.clone()).prop_map(|(a, b)| Term::ior(a, b)),
            arb_faces(t.clone()).prop_map(Term::PartialEl),
            t.clone().prop_map(Term::trivial),
            (arb_disj(), t.clone()).prop_map(|(d, a)| Term::partial_ty(d, a)),
            (binders(), t.clone(), arb_faces(t.clone()))
                .prop_map(|(xs, a, fs)| Term::ExtTy(xs.into_iter().map(name).collect(), Arc::new(a), fs)),
            (binders(), t.clone()).prop_map(|(xs, b)| Term::PLam(xs.into_iter().map(name).collect(), Arc::new(b))),
            (t.clone(), prop::collection::vec(t.clone(), 1..3)).prop_map(|(f, xs)| Term::papp(f, xs)),
            (t.clone(), arb_disj(), arb_faces(t.clone())).prop_map(|(a, d, fs)| Term::sub(a, d, fs)),
            (arb_disj(), t.clone()).prop_map(|(d, a)| Term::in_s(d, a)),
            (arb_disj(), t.clone()).prop_map(|(d, a)| Term::out_s(d, a)),
            (arb_name(), t.clone(), arb_disj()).prop_map(|(x, a, d)| Term::coe(Term::lam(x, a), d)),
            (t.clone(), t.clone(), t.clone(), arb_disj()).prop_map(|(a, w, u, d)| Term::hcomp(a, w, u, d)),
        ]
    })
    .boxed()
}
