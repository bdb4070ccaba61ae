//! The acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use common::*;
use cubik_core::cofib::{cofib_equiv, Cond, Conj, Disj, Endpoint};
use cubik_core::eval::{self, normalize, reduce_partial, whnf};
use cubik_core::interval::{from_cofib, iconv, inorm, to_cofib};
use cubik_core::syntax::{alpha_eq, subst_of, Face, Term};
use cubik_core::tyck::{self, Context};
use cubik_core::{parse_file, parse_term, pretty, Decl, IExpr, INormal};
use proptest::test_runner::TestRunner;

// pinned budgets
const C1_MAX_DEPTH: usize = 4;
const C2_PAIRS: usize = 10_000;
const C3_SAMPLES: usize = 1_000;
const C5_TIME_BUDGET: Duration = Duration::from_secs(10);
const C8_TERMS: usize = 5_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

struct Loaded {
    ctx: Context,
    decls: Vec<Decl>,
    /// Per declaration: None if accepted, else the error code.
    verdicts: Vec<Option<&'static str>>,
}

fn load(file: &str) -> Loaded {
    let src = std::fs::read_to_string(corpus_dir().join(file)).expect("corpus file");
    let parsed = parse_file(&src).unwrap_or_else(|e| panic!("{file}: {e}"));
    let mut ctx = Context::new();
    let mut verdicts = Vec::new();
    for d in &parsed.decls {
        match tyck::check_def(&ctx, &d.params, &d.ret, &d.body) {
            Ok(def) => {
                ctx.add_global(d.name.clone(), def);
                verdicts.push(None);
            }
            Err(e) => verdicts.push(Some(e.code())),
        }
    }
    Loaded {
        ctx,
        decls: parsed.decls,
        verdicts,
    }
}

// Exhaustive interval expressions over {0, 1, x, y, z}. Every expression
// of depth at most 3 is enumerated outright. Depth 4 applies each former
// to representatives of the depth-3 equivalence classes, which keeps the
// level to a few hundred thousand terms.
fn c1_interval_oracle() -> Outcome {
    let mut classes: HashMap<INormal, Dm4> = HashMap::new();
    let mut values: HashMap<Dm4, INormal> = HashMap::new();
    let mut disagreements = 0usize;
    let mut checked = 0usize;
    let mut record = |e: &IExpr, classes: &mut HashMap<INormal, Dm4>| -> bool {
        checked += 1;
        let n = inorm(e);
        let v = dm4_eval(e);
        let fresh = !classes.contains_key(&n);
        match classes.get(&n) {
            Some(w) if *w != v => disagreements += 1,
            _ => {}
        }
        match values.get(&v) {
            Some(m) if *m != n => disagreements += 1,
            None => {
                values.insert(v, n.clone());
            }
            _ => {}
        }
        classes.entry(n).or_insert(v);
        fresh
    };

    let mut level: Vec<IExpr> = vec![IExpr::Zero, IExpr::One];
    level.extend(VARS.iter().map(|v| IExpr::var(v)));
    for e in &level {
        record(e, &mut classes);
    }
    for depth in 2..=C1_MAX_DEPTH {
        let base: Vec<IExpr> = if depth < C1_MAX_DEPTH {
            level.clone()
        } else {
            // one representative per class
            let mut seen = HashMap::new();
            level.iter().filter(|e| seen.insert(inorm(e), ()).is_none()).cloned().collect()
        };
        let mut next = level.clone();
        for a in &base {
            next.push(IExpr::neg(a.clone()));
            for b in &base {
                next.push(IExpr::and(a.clone(), b.clone()));
                next.push(IExpr::or(a.clone(), b.clone()));
            }
        }
        for e in &next[level.len()..] {
            record(e, &mut classes);
        }
        level = next;
    }

    // iconv itself, on pairs of class representatives
    let reps: Vec<IExpr> = classes.keys().take(400).map(|n| n.to_iexpr()).collect();
    for a in &reps {
        for b in &reps {
            if iconv(a, b) != (dm4_eval(a) == dm4_eval(b)) {
                disagreements += 1;
            }
        }
    }
    outcome(
        disagreements == 0,
        format!(
            "{checked} expressions, {} classes, {}x{} iconv pairs, {disagreements} disagreements",
            classes.len(),
            reps.len(),
            reps.len()
        ),
    )
}

fn c2_normal_forms() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let gen = arb_iexpr();
    let tape = proptest::collection::vec(proptest::prelude::any::<u8>(), 64);
    let mut failures = 0;
    let mut convertible = 0;
    for k in 0..C2_PAIRS {
        let a = draw(&mut runner, &gen);
        // half the pairs are rewritten copies, so the implication is exercised
        let b = if k % 2 == 0 {
            let t = draw(&mut runner, &tape);
            equal_rewrite(&a, &mut t.into_iter(), 4)
        } else {
            draw(&mut runner, &gen)
        };
        if k % 2 == 0 && dm4_eval(&a) != dm4_eval(&b) {
            panic!("rewrite generator broke equality: {a:?} vs {b:?}");
        }
        let (na, nb) = (inorm(&a), inorm(&b));
        if iconv(&a, &b) {
            convertible += 1;
            if na != nb {
                failures += 1;
            }
        }
        if k % 2 == 0 && !iconv(&a, &b) {
            failures += 1;
        }
        if inorm(&na.to_iexpr()) != na || inorm(&nb.to_iexpr()) != nb {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("{C2_PAIRS} pairs ({convertible} convertible), {failures} failures"),
    )
}

fn c3_isomorphism() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let mut failures = 0;
    let gen = arb_iexpr_with(false);
    for _ in 0..C3_SAMPLES {
        let e = draw(&mut runner, &gen);
        let c = to_cofib(&e);
        if !cofib_equiv(&c, &to_cofib(&from_cofib(&c))) {
            failures += 1;
        }
    }
    let disj = arb_disj();
    let mut equivalent = 0;
    for k in 0..C3_SAMPLES {
        let a = draw(&mut runner, &disj);
        let b = if k % 2 == 0 {
            // same cofibration presented differently: reversed clauses
            // plus a redundant strengthening of the first one
            let mut cs = a.conjs();
            cs.reverse();
            if let Some(c) = cs.first().cloned() {
                let v = VARS[k % 3];
                if let Some(extra) = c.meet(&Conj::single(v, endpoint(k % 4 == 0))) {
                    cs.push(extra);
                }
            }
            if a.is_absurd() {
                Disj::Absurd
            } else {
                Disj::from_conjs(cs)
            }
        } else {
            draw(&mut runner, &disj)
        };
        let lhs = cofib_equiv(&a, &b);
        equivalent += lhs as usize;
        if lhs != iconv(&from_cofib(&a), &from_cofib(&b)) {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!(
            "{C3_SAMPLES} round trips, {C3_SAMPLES} cofibration pairs ({equivalent} equivalent), {failures} failures"
        ),
    )
}

#[derive(Clone, Copy)]
enum Atom {
    Const(bool),
    Var(usize, bool),
}

impl Atom {
    fn value(self, rho: [bool; 3]) -> bool {
        match self {
            Atom::Const(b) => b,
            Atom::Var(v, neg) => rho[v] != neg,
        }
    }

    fn term(self) -> Term {
        match self {
            Atom::Const(b) => Term::IConst(endpoint(b)),
            Atom::Var(v, false) => Term::var(VARS[v]),
            Atom::Var(v, true) => Term::ineg(Term::var(VARS[v])),
        }
    }
}

fn assignments() -> impl Iterator<Item = [bool; 3]> {
    (0..8).map(|k| [k & 1 != 0, k & 2 != 0, k & 4 != 0])
}

fn conj_holds(c: &Conj, rho: [bool; 3]) -> bool {
    c.conds.iter().all(|d| {
        let v = VARS.iter().position(|x| **x == *d.var).expect("variable outside x y z");
        rho[v] == (d.value == Endpoint::One)
    })
}

// Brute force: after the substitution a face holds at an assignment iff
// each of its conditions, evaluated through the substituted atom, does.
fn c4_partial_reduction() -> Outcome {
    let mut conjs = Vec::new();
    for k in 0..27 {
        let conds: Vec<Cond> = (0..3)
            .filter_map(|v| match (k / 3usize.pow(v as u32)) % 3 {
                0 => None,
                1 => Some(Cond::new(VARS[v], Endpoint::Zero)),
                _ => Some(Cond::new(VARS[v], Endpoint::One)),
            })
            .collect();
        if !conds.is_empty() {
            conjs.push(Conj::from_conds(conds).unwrap());
        }
    }
    let mut elements: Vec<Vec<Conj>> = conjs.iter().map(|c| vec![c.clone()]).collect();
    for a in &conjs {
        for b in &conjs {
            elements.push(vec![a.clone(), b.clone()]);
        }
    }
    let mut atoms = vec![Atom::Const(false), Atom::Const(true)];
    for v in 0..3 {
        atoms.push(Atom::Var(v, false));
        atoms.push(Atom::Var(v, true));
    }
    let body = |k: usize, sigma: &[Atom; 3]| -> Term {
        Term::apps(Term::var(&format!("b{k}")), sigma.iter().map(|a| a.term()))
    };

    let (mut failures, mut cases) = (0usize, 0usize);
    let (mut trivial, mut dropped, mut renamed) = (0usize, 0usize, 0usize);
    for faces in &elements {
        let partial: Vec<Face> = faces
            .iter()
            .enumerate()
            .map(|(k, c)| Face::new(c.clone(), body(k, &[Atom::Var(0, false), Atom::Var(1, false), Atom::Var(2, false)])))
            .collect();
        for s0 in &atoms {
            for s1 in &atoms {
                for s2 in &atoms {
                    cases += 1;
                    let sigma = [*s0, *s1, *s2];
                    let s = subst_of(VARS.iter().zip(sigma.iter()).map(|(v, a)| (*v, a.term())));
                    let got = reduce_partial(&partial, &s);

                    let sat: Vec<Vec<bool>> = faces
                        .iter()
                        .map(|c| {
                            assignments()
                                .map(|rho| {
                                    c.conds.iter().all(|d| {
                                        let v = VARS.iter().position(|x| **x == *d.var).unwrap();
                                        sigma[v].value(rho) == (d.value == Endpoint::One)
                                    })
                                })
                                .collect()
                        })
                        .collect();
                    let ok = match sat.iter().position(|s| s.iter().all(|b| *b)) {
                        Some(k) => {
                            trivial += 1;
                            matches!(&got, Term::TrivialPartial(b) if alpha_eq(b, &body(k, &sigma)))
                        }
                        None => match &got {
                            Term::PartialEl(out) => {
                                dropped += sat.iter().filter(|s| s.iter().all(|b| !*b)).count();
                                renamed += 1;
                                (0..faces.len()).all(|k| {
                                    let mine: Vec<&Face> =
                                        out.iter().filter(|f| alpha_eq(&f.body, &body(k, &sigma))).collect();
                                    assignments().enumerate().all(|(r, rho)| {
                                        mine.iter().any(|f| conj_holds(&f.cofib, rho)) == sat[k][r]
                                    })
                                }) && out.iter().all(|f| (0..faces.len()).any(|k| alpha_eq(&f.body, &body(k, &sigma))))
                            }
                            _ => false,
                        },
                    };
                    if !ok {
                        failures += 1;
                    }
                }
            }
        }
    }
    outcome(
        failures == 0,
        format!(
            "{cases} cases ({trivial} trivial, {dropped} faces dropped, {renamed} residual systems), {failures} failures"
        ),
    )
}

const CORPUS: [&str; 9] = [
    "partial.cub",
    "partial_bad.cub",
    "path.cub",
    "path_bad.cub",
    "square.cub",
    "subtype.cub",
    "kan.cub",
    "freeze.cub",
    "freeze_bad.cub",
];

fn expected_rejections() -> BTreeMap<(&'static str, &'static str), &'static str> {
    BTreeMap::from([
        (("partial_bad.cub", "parBad"), "E-FACE-DISAGREE"),
        (("path_bad.cub", "wrongEnd"), "E-BOUNDARY"),
        (("freeze_bad.cub", "moveTop"), "E-FREEZE"),
    ])
}

fn c5_corpus() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let rejections = expected_rejections();
    let mut loaded = BTreeMap::new();
    for file in CORPUS {
        let l = load(file);
        for (d, verdict) in l.decls.iter().zip(&l.verdicts) {
            let expected = rejections.get(&(file, &*d.name)).copied();
            if *verdict != expected {
                problems.push(format!("{file}:{} verdict {verdict:?}, expected {expected:?}", d.name));
            }
        }
        loaded.insert(file, l);
    }

    let golden = std::fs::read_to_string(corpus_dir().join("normal_forms.golden")).unwrap();
    let mut goldens = 0;
    for line in golden.lines().filter(|l| !l.trim().is_empty()) {
        let (key, want) = line.split_once(" => ").expect("golden line");
        let (file, def) = key.split_once(' ').expect("golden key");
        let l = &loaded[file];
        let d = l.decls.iter().find(|d| &*d.name == def).expect("golden decl");
        let cx = tyck::params_context(&l.ctx, &d.params);
        let got = pretty(&normalize(&cx, &d.body, Some(&d.ret)));
        goldens += 1;
        if got != want {
            problems.push(format!("{file}:{def} normal form `{got}`, golden `{want}`"));
        }
    }

    // composition along a constant line against plain hcomp
    let kan = &loaded["kan.cub"];
    let find = |n: &str| kan.decls.iter().find(|d| &*d.name == n).unwrap();
    let (comp_d, hcomp_d) = (find("compConst"), find("hcompConst"));
    let cx = tyck::params_context(&kan.ctx, &comp_d.params);
    let a = Term::var("A");
    let line = Term::lam("x", a.clone());
    let i0 = Disj::cond("i", Endpoint::Zero);
    let walls = Term::lam(
        "j",
        Term::PartialEl(vec![Face::new(
            Conj::single("i", Endpoint::Zero),
            Term::papp(Term::var("p"), vec![Term::var("j")]),
        )]),
    );
    let lib_comp = eval::comp(&cx, &line, &i0, &walls, &Term::var("u")).expect("comp on a fibrant line");
    let agree_full = tyck::convert(&cx, &comp_d.body, &hcomp_d.body, &a)
        && tyck::convert(&cx, &lib_comp, &hcomp_d.body, &a);
    let under_i0 = cx.with_restriction(i0.clone());
    let agree_face = tyck::convert(&under_i0, &comp_d.body, &hcomp_d.body, &a)
        && tyck::convert(&under_i0, &lib_comp, &hcomp_d.body, &a);
    if !agree_full {
        problems.push(format!(
            "comp on a constant line is not convertible with hcomp (agreement under i = 0: {agree_face}); comp normalizes to `{}`",
            pretty(&normalize(&cx, &comp_d.body, Some(&a)))
        ));
    }

    let elapsed = start.elapsed();
    if elapsed > C5_TIME_BUDGET {
        problems.push(format!("took {elapsed:?}"));
    }
    let summary = format!("{} files, {goldens} goldens, {:.2?}", CORPUS.len(), elapsed);
    if problems.is_empty() {
        outcome(true, summary)
    } else {
        outcome(false, format!("{summary}; {}", problems.join("; ")))
    }
}

fn c6_freeze() -> Outcome {
    let bad = load("freeze_bad.cub");
    let good = load("freeze.cub");
    let rejected = bad.verdicts.last() == Some(&Some("E-FREEZE"));
    let accepted = good.verdicts.iter().all(Option::is_none);
    outcome(
        rejected && accepted,
        format!("coe TOP on a moving line rejected: {rejected}; coe BOT accepted: {accepted}"),
    )
}

fn c7_subject_reduction() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for file in CORPUS {
        let l = load(file);
        for (d, verdict) in l.decls.iter().zip(&l.verdicts) {
            if verdict.is_some() {
                continue;
            }
            let cx = tyck::params_context(&l.ctx, &d.params);
            let reduct = whnf(&cx, &d.body);
            checked += 1;
            if let Err(e) = tyck::check(&cx, &reduct, &d.ret) {
                failures.push(format!("{file}:{} ({e})", d.name));
            }
        }
    }
    let detail = format!("{checked} declarations, {} failures", failures.len());
    if failures.is_empty() {
        outcome(true, detail)
    } else {
        outcome(false, format!("{detail}: {}", failures.join("; ")))
    }
}

fn c8_round_trip() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let gen = arb_term();
    let mut failures = Vec::new();
    for _ in 0..C8_TERMS {
        let t = draw(&mut runner, &gen);
        let text = pretty(&t);
        match parse_term(&text) {
            Ok(back) if alpha_eq(&t, &back) => {}
            Ok(back) => failures.push(format!("`{text}` reparsed as `{}`", pretty(&back))),
            Err(e) => failures.push(format!("`{text}`: {e}")),
        }
    }
    let detail = format!("{C8_TERMS} terms, {} failures", failures.len());
    match failures.first() {
        None => outcome(true, detail),
        Some(f) => outcome(false, format!("{detail}, first: {f}")),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("C1 interval algebra agrees with DM4", c1_interval_oracle),
        ("C2 normal forms unique and idempotent", c2_normal_forms),
        ("C3 interval/cofibration round trip", c3_isomorphism),
        ("C4 partial element reduction", c4_partial_reduction),
        ("C5 corpus goldens", c5_corpus),
        ("C6 freeze premise", c6_freeze),
        ("C7 subject reduction", c7_subject_reduction),
        ("C8 parse/pretty round trip", c8_round_trip),
    ];
    let mut failed = 0;
    for (label, run) in criteria {
        let t = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("{verdict} {label}: {} [{:.2?}]", o.detail, t.elapsed());
        failed += !o.pass as usize;
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
}
