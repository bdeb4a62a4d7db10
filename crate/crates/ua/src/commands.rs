//! The five commands, each producing a [`Report`].

use std::rc::Rc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use ua_core::algebra::corpus::CorpusEntry;
use ua_core::algebra::fuzz::{check_law, is_gated, verify_certificates, Law, Verdict};
use ua_core::algebra::identities::{check_family, Family};
use ua_core::factorize::{
    diagonal_fill, e_quotient_interval_check, extend_along, factor as factor_hom, ChainHom, IntervalReport,
};
use ua_core::prochain::Completion;
use ua_core::sexpr::Sexpr;
use ua_core::{Carrier, PrincipalFilter, Relation};

use crate::corpus::{Chain, Corpus};
use crate::error::{invalid, InputError};
use crate::expr::{self, Leaves};
use crate::report::{Record, Report, Status};

/// Elements enumerated per level when checking arrows between chains.
pub const LEVEL_BUDGET: u64 = 1 << 22;
pub const DEFAULT_COMPLETE_DEPTH: usize = 8;
pub const DEFAULT_FACTOR_DEPTH: usize = 4;
pub const DEFAULT_TRIALS: usize = 200;
/// Carrier sizes drawn for the random filter trials.
const TRIAL_CARRIER: usize = 6;

#[derive(Clone, Debug)]
pub struct Options {
    pub depth: Option<usize>,
    pub max_carrier: usize,
    pub max_depth: usize,
    pub timings: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { depth: None, max_carrier: 8, max_depth: 16, timings: false }
    }
}

impl Options {
    fn depth_or(&self, default: usize) -> Result<usize, InputError> {
        let d = self.depth.unwrap_or(default);
        if d > self.max_depth {
            return Err(invalid(format!("depth {d} exceeds --max-depth {}", self.max_depth)));
        }
        Ok(d)
    }

    fn check_carrier(&self, e: &CorpusEntry) -> Result<(), InputError> {
        if e.algebra.size() > self.max_carrier {
            return Err(invalid(format!(
                "algebra `{}` has {} elements, above --max-carrier {}",
                e.name,
                e.algebra.size(),
                self.max_carrier
            )));
        }
        Ok(())
    }

    fn stamp(&self, r: Record, start: Instant) -> Record {
        let mut r = r;
        if self.timings {
            r.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        r
    }
}

fn core_input(e: ua_core::Error) -> InputError {
    invalid(e.to_string())
}

pub fn lattice(corpus: &Corpus, algebra: &str, opts: &Options) -> Result<Report, InputError> {
    let start = Instant::now();
    let entry = corpus.entry(algebra)?;
    opts.check_carrier(entry)?;
    let l = entry.algebra.con_lattice(opts.max_carrier).map_err(core_input)?;
    let k = l.len();
    let table =
        |f: &dyn Fn(usize, usize) -> usize| (0..k).map(|i| (0..k).map(|j| f(i, j)).collect()).collect::<Vec<Vec<_>>>();
    let data = json!({
        "size": k,
        "elements": l.elements().iter().map(|u| u.generator().to_string()).collect::<Vec<_>>(),
        "covers": l.covers(),
        "meet": table(&|i, j| l.meet(i, j)),
        "join": table(&|i, j| l.join(i, j)),
        "modular": l.is_modular(),
        "distributive": l.is_distributive(),
    });
    let mut report = Report::default();
    report.push(opts.stamp(Record::new("lattice", algebra, Status::Pass).data(data), start));
    Ok(report)
}

pub fn verify(
    corpus: &Corpus,
    algebra: &str,
    family: &str,
    terms: &[String],
    opts: &Options,
) -> Result<Report, InputError> {
    let start = Instant::now();
    let entry = corpus.entry(algebra)?;
    let family = Family::from_name(family).ok_or_else(|| invalid(format!("unknown family `{family}`")))?;
    let terms = if terms.is_empty() {
        let c = &entry.certificates;
        let missing = || invalid(format!("algebra `{algebra}` has no {} certificate; name the terms", family.name()));
        match family {
            Family::Malcev => vec![c.malcev.clone().ok_or_else(missing)?],
            Family::Arithmetical => {
                vec![c.malcev.clone().ok_or_else(missing)?, c.majority.clone().ok_or_else(missing)?]
            }
            Family::Day => c.day.clone().ok_or_else(missing)?,
        }
    } else {
        terms.iter().map(|n| corpus.term(n).cloned()).collect::<Result<Vec<_>, _>>()?
    };
    let outcomes = check_family(&entry.algebra, family, &terms).map_err(core_input)?;
    let mut report = Report::default();
    for o in outcomes {
        let cx = o.counterexample.as_ref().map(|c| format!("x = {:?}: lhs {} ≠ rhs {}", c.assignment, c.lhs, c.rhs));
        let r =
            Record::new(format!("identity-{}", family.name()), format!("{algebra}/{}", o.name), Status::of(o.holds()));
        report.push(opts.stamp(r.counterexample(cx), start));
    }
    Ok(report)
}

fn verdict_status(v: Verdict) -> Status {
    match v {
        Verdict::Pass => Status::Pass,
        Verdict::Fail => Status::Fail,
        Verdict::ExpectedFail => Status::ExpectedFail,
        Verdict::ExploratoryFail => Status::ExploratoryFail,
    }
}

pub struct FuzzPlan<'a> {
    pub laws: &'a [Law],
    pub seed: u64,
    pub trials: usize,
    /// Only algebras whose name starts with this.
    pub only: Option<&'a str>,
}

pub fn fuzz(corpus: &Corpus, plan: &FuzzPlan, opts: &Options) -> Result<Report, InputError> {
    let entries: Vec<&CorpusEntry> =
        corpus.entries.iter().filter(|e| plan.only.is_none_or(|p| e.name.starts_with(p))).collect();
    for e in &entries {
        opts.check_carrier(e)?;
    }
    let mut sorted = entries.clone();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    let mut laws = plan.laws.to_vec();
    laws.sort();
    laws.dedup();

    let mut report = Report::default();
    if !laws.is_empty() {
        for e in &sorted {
            let start = Instant::now();
            let certs = verify_certificates(e).map_err(core_input)?;
            let lattice = e.algebra.con_lattice(opts.max_carrier).map_err(core_input)?;
            for &law in &laws {
                let (instances, cx) = check_law(e, &lattice, law).map_err(core_input)?;
                let gated = is_gated(law, certs);
                let verdict = Verdict::of(cx.is_some(), e.expect_fail.contains(&law), gated);
                let r = Record::new(law.name(), &e.name, verdict_status(verdict))
                    .counterexample(cx)
                    .data(json!({ "gated": gated, "instances": instances }));
                report.push(opts.stamp(r, start));
            }
        }
    }
    if plan.trials > 0 {
        for r in filter_trials(&sorted, plan.seed, plan.trials, opts)? {
            report.push(r);
        }
    }
    Ok(report)
}

fn random_semiuniformity(rng: &mut ChaCha8Rng, n: usize) -> Relation {
    let carrier = Carrier::new(n).expect("trial carrier is small");
    let p = rng.gen_range(0.0..0.6);
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                pairs.push((a, b));
                pairs.push((b, a));
            }
        }
    }
    Relation::reflexive_from_pairs(carrier, pairs).expect("pairs lie in the carrier")
}

fn random_uniformity(rng: &mut ChaCha8Rng, n: usize) -> Relation {
    random_semiuniformity(rng, n).transitive_closure()
}

/// Result of one trial: `None` when the invariant held.
type Trial = Result<Option<String>, ua_core::Error>;

/// Randomized checks of filter-level invariants, one record per invariant.
fn filter_trials(
    entries: &[&CorpusEntry],
    seed: u64,
    trials: usize,
    opts: &Options,
) -> Result<Vec<Record>, InputError> {
    let n_max = TRIAL_CARRIER.min(opts.max_carrier);
    let pf = PrincipalFilter::principal;
    let mut out = Vec::new();
    let mut run =
        |name: &str, salt: u64, mut body: Box<dyn FnMut(&mut ChaCha8Rng) -> Trial + '_>| -> Result<(), InputError> {
            let start = Instant::now();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let mut cx = None;
            for _ in 0..trials {
                if let Some(c) = body(&mut rng).map_err(core_input)? {
                    cx = Some(c);
                    break;
                }
            }
            let r = Record::new(name, "random", Status::of(cx.is_none()))
                .counterexample(cx)
                .data(json!({ "seed": seed, "trials": trials }));
            out.push(opts.stamp(r, start));
            Ok(())
        };

    run(
        "div0-least-uniformity",
        1,
        Box::new(|rng| {
            let n = rng.gen_range(1..=n_max);
            let f = pf(random_semiuniformity(rng, n));
            let d = f.div0()?;
            // Any equivalence containing the generator contains the closure.
            let wider = f.generator().union(&random_semiuniformity(rng, n))?.transitive_closure();
            let ok = d.is_uniformity() && f.le(&d) && d.generator().is_subset(&wider);
            Ok((!ok).then(|| format!("F = {}", f.generator())))
        }),
    )?;
    run(
        "div0-of-intersection",
        2,
        Box::new(|rng| {
            let n = rng.gen_range(1..=n_max);
            let (f, g) = (pf(random_semiuniformity(rng, n)), pf(random_semiuniformity(rng, n)));
            let lhs = PrincipalFilter::filter_intersection(&[f.clone(), g.clone()])?.div0()?;
            let rhs = PrincipalFilter::join(&[f.div0()?, g.div0()?])?;
            Ok((lhs != rhs).then(|| format!("F = {} G = {}", f.generator(), g.generator())))
        }),
    )?;
    run(
        "join-by-iteration",
        3,
        Box::new(|rng| {
            let n = rng.gen_range(1..=n_max);
            let (u, v) = (pf(random_uniformity(rng, n)), pf(random_uniformity(rng, n)));
            let (fixed, steps) = PrincipalFilter::join_by_iteration(&u, &v)?;
            let join = PrincipalFilter::join(&[u.clone(), v.clone()])?;
            Ok((fixed != join || steps > n * n).then(|| format!("U = {} V = {}", u.generator(), v.generator())))
        }),
    )?;
    run(
        "join-from-composition",
        4,
        Box::new(|rng| {
            let n = rng.gen_range(1..=n_max);
            let (u, v) = (random_uniformity(rng, n), random_uniformity(rng, n));
            let join = PrincipalFilter::join(&[pf(u.clone()), pf(v.clone())])?;
            let product = u.compose(&v)?;
            let ok = product.is_subset(join.generator()) && *join.generator() == product.transitive_closure();
            Ok((!ok).then(|| format!("U = {u} V = {v}")))
        }),
    )?;
    if entries.is_empty() {
        return Ok(out);
    }
    let mut congruences = Vec::with_capacity(entries.len());
    for e in entries {
        congruences.push(e.algebra.congruences(opts.max_carrier).map_err(core_input)?);
    }
    run(
        "compatibility-criteria",
        5,
        Box::new(|rng| {
            let e = entries[rng.gen_range(0..entries.len())];
            let u = random_uniformity(rng, e.algebra.size());
            let by_image = e.algebra.is_compatible_relation(&u);
            let by_argument = e.algebra.compatible_by_argument(&u)?;
            Ok((by_image != by_argument).then(|| format!("{}: U = {u}", e.name)))
        }),
    )?;
    run(
        "permute-iff-join-product",
        6,
        Box::new(|rng| {
            let i = rng.gen_range(0..entries.len());
            let cons = &congruences[i];
            let (a, b) = (&cons[rng.gen_range(0..cons.len())], &cons[rng.gen_range(0..cons.len())]);
            let jp = pf(a.clone()).join_is_product(&pf(b.clone()))?;
            Ok((!jp.agree()).then(|| format!("{}: {a} and {b}", entries[i].name)))
        }),
    )?;
    Ok(out)
}

fn complete_on<C: Leaves>(
    chain: Rc<C>,
    name: &str,
    expr: &Sexpr,
    text: &str,
    depth: usize,
) -> Result<Record, InputError> {
    chain.check_depth(depth).map_err(core_input)?;
    let c = Completion::new(chain);
    let result = expr::eval(&c, expr, depth).and_then(|x| x.levels(depth));
    match result {
        Ok(levels) => {
            Ok(Record::new("complete", name, Status::Pass).depth(depth).data(json!({ "expr": text, "levels": levels })))
        }
        Err(e) if expr::is_input_error(&e) => Err(invalid(format!("expression `{text}`: {e}"))),
        Err(e) => Ok(Record::new("complete", name, Status::Fail)
            .depth(depth)
            .counterexample(Some(e.to_string()))
            .data(json!({ "expr": text }))),
    }
}

pub fn complete(corpus: &Corpus, chain: &str, text: &str, opts: &Options) -> Result<Report, InputError> {
    let start = Instant::now();
    let depth = opts.depth_or(DEFAULT_COMPLETE_DEPTH)?;
    let expr = Sexpr::parse(text).map_err(|e| invalid(format!("expression `{text}`: {e}")))?;
    let r = match corpus.chain(chain)? {
        Chain::Integers(c) => complete_on(c.clone(), chain, &expr, text, depth)?,
        Chain::Tables(c) => complete_on(c.clone(), chain, &expr, text, depth)?,
    };
    let mut report = Report::default();
    report.push(opts.stamp(r, start));
    Ok(report)
}

pub enum FactorTarget<'a> {
    Hom(&'a str),
    Square(&'a str),
    Coarsening(&'a str),
}

/// A failed check, unless the error is a resource cap, which is the
/// caller's to raise.
fn fail_on(check: &str, instance: &str, depth: usize, e: ua_core::Error) -> Result<Record, InputError> {
    match e {
        ua_core::Error::CapExceeded { .. } | ua_core::Error::DepthExceeded { .. } => Err(core_input(e)),
        e => Ok(Record::new(check, instance, Status::Fail).depth(depth).counterexample(Some(e.to_string()))),
    }
}

fn agree(check: &str, instance: &str, depth: usize, a: &ChainHom, b: &ChainHom) -> Result<Record, InputError> {
    match a.first_difference(b, depth, LEVEL_BUDGET) {
        Ok(None) => Ok(Record::new(check, instance, Status::Pass).depth(depth)),
        Ok(Some((level, x))) => Ok(Record::new(check, instance, Status::Fail)
            .depth(depth)
            .counterexample(Some(format!("level {level}, element {x}")))),
        Err(e) => fail_on(check, instance, depth, e),
    }
}

fn property(check: &str, instance: &str, depth: usize, r: ua_core::Result<bool>) -> Result<Record, InputError> {
    match r {
        Ok(ok) => Ok(Record::new(check, instance, Status::of(ok)).depth(depth)),
        Err(e) => fail_on(check, instance, depth, e),
    }
}

fn factor_hom_records(name: &str, f: &ChainHom, depth: usize, report: &mut Report) -> Result<(), InputError> {
    let fac = match factor_hom(f, depth, LEVEL_BUDGET) {
        Ok(fac) => fac,
        Err(e) => {
            report.push(fail_on("factor", name, depth, e)?);
            return Ok(());
        }
    };
    let middle: Vec<Vec<u64>> = (0..=depth).map(|k| fac.middle.elements(k).to_vec()).collect();
    report.push(Record::new("factor", name, Status::Pass).depth(depth).data(json!({ "middle": middle })));
    report.push(property("dense-part", name, depth, fac.e.is_dense(depth, LEVEL_BUDGET))?);
    report.push(property("embedding-part", name, depth, fac.m.is_embedding(depth, LEVEL_BUDGET))?);
    match fac.e.then(&fac.m) {
        Ok(me) => report.push(agree("composite", name, depth, &me, f)?),
        Err(e) => report.push(fail_on("composite", name, depth, e)?),
    }
    Ok(())
}

fn square_records(corpus: &Corpus, name: &str, depth: usize, report: &mut Report) -> Result<(), InputError> {
    let sq = corpus.square(name)?;
    report.push(property("dense-part", name, depth, sq.e.is_dense(depth, LEVEL_BUDGET))?);
    report.push(property("embedding-part", name, depth, sq.m.is_embedding(depth, LEVEL_BUDGET))?);
    let delta = match diagonal_fill(&sq.e, &sq.m, &sq.top, &sq.bottom, depth, LEVEL_BUDGET) {
        Ok(d) => d,
        Err(e) => {
            report.push(fail_on("fill", name, depth, e)?);
            return Ok(());
        }
    };
    let levels: Vec<usize> = (0..=depth).map(|k| delta.sigma(k)).collect();
    report.push(Record::new("fill", name, Status::Pass).depth(depth).data(json!({ "reindex": levels })));
    for (check, lhs, rhs) in
        [("upper-triangle", sq.e.then(&delta), &sq.top), ("lower-triangle", delta.then(&sq.m), &sq.bottom)]
    {
        match lhs {
            Ok(l) => report.push(agree(check, name, depth, &l, rhs)?),
            Err(e) => report.push(fail_on(check, name, depth, e)?),
        }
    }
    // A second fill through the dense arrow alone must coincide.
    match extend_along(&sq.e, &sq.top, depth, LEVEL_BUDGET) {
        Ok(other) => report.push(agree("unique-fill", name, depth, &other, &delta)?),
        Err(e) => report.push(fail_on("unique-fill", name, depth, e)?),
    }
    Ok(())
}

fn named_covers(r: &IntervalReport, order: &[Vec<bool>]) -> Vec<(String, String)> {
    IntervalReport::covers(order).into_iter().map(|(a, b)| (r.names[a].clone(), r.names[b].clone())).collect()
}

fn coarsening_records(corpus: &Corpus, name: &str, depth: usize, report: &mut Report) -> Result<(), InputError> {
    let c = corpus.coarsening(name)?;
    let r = match e_quotient_interval_check(c.base.clone(), &c.quotients, depth, LEVEL_BUDGET) {
        Ok(r) => r,
        Err(e) => {
            report.push(fail_on("interval", name, depth, e)?);
            return Ok(());
        }
    };
    let (interval, quotient) = (named_covers(&r, &r.interval), named_covers(&r, &r.quotient));
    let mut expected_ok = true;
    if let Some(expected) = &c.expected_covers {
        let mut want = expected.clone();
        let mut got = interval.clone();
        want.sort();
        got.sort();
        expected_ok = want == got;
    }
    let data = json!({ "names": r.names, "interval-covers": interval, "quotient-covers": quotient });
    report.push(Record::new("interval", name, Status::of(r.matches() && expected_ok)).depth(depth).data(data));
    Ok(())
}

pub fn factor(corpus: &Corpus, target: FactorTarget, opts: &Options) -> Result<Report, InputError> {
    let start = Instant::now();
    let depth = opts.depth_or(DEFAULT_FACTOR_DEPTH)?;
    let mut report = Report::default();
    match target {
        FactorTarget::Hom(name) => {
            let f = corpus.hom(name)?;
            match f.check(depth, LEVEL_BUDGET) {
                Ok(()) => {
                    report.push(Record::new("homomorphism", name, Status::Pass).depth(depth));
                    factor_hom_records(name, f, depth, &mut report)?;
                }
                Err(e) => report.push(fail_on("homomorphism", name, depth, e)?),
            }
        }
        FactorTarget::Square(name) => square_records(corpus, name, depth, &mut report)?,
        FactorTarget::Coarsening(name) => coarsening_records(corpus, name, depth, &mut report)?,
    }
    if opts.timings {
        for r in &mut report.records {
            r.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
    }
    Ok(report)
}
