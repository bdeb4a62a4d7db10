//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines always print; exits nonzero if any criterion fails.

use std::rc::Rc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ua::commands::{self, FactorTarget, Options};
use ua::corpus::Corpus;
use ua::report::Status;
use ua_core::algebra::corpus::{boolean_algebras, cyclic_group, group_malcev, groups, semilattices, standard_corpus};
use ua_core::algebra::fuzz::{fuzz_laws, Law, Verdict};
use ua_core::algebra::identities::{all_hold, check_family, day_terms_from_malcev, Family};
use ua_core::algebra::shifting::{day_tables, shifting_witness, validate_witness};
use ua_core::factorize::{diagonal_fill, extend_along, factor};
use ua_core::prochain::{CauchySequence, Completion, CongruenceChain, InverseSystem, ModulusChain, ProElement};
use ua_core::{Carrier, PrincipalFilter, Relation, UniformityLattice};

/// Wall-clock limits per criterion.
const LATTICE_LIMIT: Duration = Duration::from_secs(30);
const JOIN_LIMIT: Duration = Duration::from_secs(60);
const COMPLETION_LIMIT: Duration = Duration::from_secs(10);

const SEED: u64 = 7;
const CAP: usize = 8;
const BUDGET: u64 = 1 << 22;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {t:.2?}, limit {limit:.0?}"))
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

// Relations on n ≤ 4 points as bitmasks over n² cells.
fn bit(n: usize, a: usize, b: usize) -> u32 {
    1 << (a * n + b)
}

fn bm_compose(n: usize, r: u32, s: u32) -> u32 {
    let mut out = 0;
    for a in 0..n {
        for b in 0..n {
            if r & bit(n, a, b) != 0 {
                for c in 0..n {
                    if s & bit(n, b, c) != 0 {
                        out |= bit(n, a, c);
                    }
                }
            }
        }
    }
    out
}

fn bm_closure(n: usize, mut r: u32) -> u32 {
    loop {
        let next = r | bm_compose(n, r, r);
        if next == r {
            return r;
        }
        r = next;
    }
}

fn bm_reflexive(n: usize, r: u32) -> bool {
    (0..n).all(|a| r & bit(n, a, a) != 0)
}

fn bm_symmetric(n: usize, r: u32) -> bool {
    (0..n).all(|a| (0..n).all(|b| (r & bit(n, a, b) != 0) == (r & bit(n, b, a) != 0)))
}

fn to_relation(n: usize, r: u32) -> Relation {
    let pairs = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| r & bit(n, a, b) != 0);
    Relation::from_pairs(Carrier::new(n).unwrap(), pairs).unwrap()
}

fn to_mask(n: usize, r: &Relation) -> u32 {
    r.pairs().fold(0, |m, (a, b)| m | bit(n, a, b))
}

/// Unif S on n ≤ 4 against the lattice of equivalence relations; Div₀ on
/// n = 3 against an exhaustive search for dividing sequences.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    for n in 1..=4 {
        let cells = n * n;
        let brute: Vec<u32> =
            (0..1u32 << cells).filter(|&r| bm_reflexive(n, r) && bm_symmetric(n, r) && bm_closure(n, r) == r).collect();
        let classified: Vec<u32> =
            (0..1u32 << cells).filter(|&r| PrincipalFilter::principal(to_relation(n, r)).is_uniformity()).collect();
        ensure(classified == brute, || format!("n = {n}: uniformities are not the equivalences"))?;
        let lattice = UniformityLattice::all_uniformities(Carrier::new(n).unwrap()).map_err(e)?;
        ensure(lattice.len() == brute.len(), || {
            format!("n = {n}: {} elements, expected {}", lattice.len(), brute.len())
        })?;
        let index = |m: u32| lattice.index_of(&PrincipalFilter::principal(to_relation(n, m))).expect("element present");
        for &x in &brute {
            for &y in &brute {
                let (i, j) = (index(x), index(y));
                let ok = lattice.meet(i, j) == index(x & y)
                    && lattice.join(i, j) == index(bm_closure(n, x | y))
                    && lattice.le(i, j) == (x & !y == 0);
                ensure(ok, || format!("n = {n}: lattice operations differ on {x:#b}, {y:#b}"))?;
            }
        }
    }
    // Div₀ on three points: U ⊇ G is divisible iff some V ⊇ G has V∘V ⊆ U
    // with V divisible again, a greatest fixed point over the filter.
    let n = 3;
    let mut checked = 0;
    for g in (0..1u32 << 9).filter(|&r| bm_reflexive(n, r) && bm_symmetric(n, r)) {
        let filter: Vec<u32> = (0..1u32 << 9).filter(|&u| u & g == g).collect();
        let mut divisible = filter.clone();
        loop {
            let next: Vec<u32> = divisible
                .iter()
                .copied()
                .filter(|&u| divisible.iter().any(|&v| bm_compose(n, v, v) & !u == 0))
                .collect();
            if next.len() == divisible.len() {
                break;
            }
            divisible = next;
        }
        let d = PrincipalFilter::principal(to_relation(n, g)).div0().map_err(e)?;
        let gen = to_mask(n, d.generator());
        let expected: Vec<u32> = filter.iter().copied().filter(|&u| u & gen == gen).collect();
        ensure(divisible == expected, || format!("Div₀ differs for generator {g:#b}"))?;
        checked += 1;
    }
    within(start, LATTICE_LIMIT)?;
    Ok(format!("n ≤ 4 lattices isomorphic, Div₀ agrees on {checked} semiuniformities ({:.2?})", start.elapsed()))
}

fn count_verdicts(records: &[ua_core::algebra::fuzz::LawRecord], v: Verdict) -> usize {
    records.iter().filter(|r| r.verdict == v).count()
}

/// Set-level joins of compatible uniformities are compatible on the corpus.
fn criterion_2() -> Outcome {
    let start = Instant::now();
    let corpus = standard_corpus();
    let records = fuzz_laws(&corpus, &[Law::JoinAgreement], CAP).map_err(e)?;
    let pairs: usize = records.iter().map(|r| r.instances).sum();
    let fails: Vec<_> = records.iter().filter(|r| r.verdict != Verdict::Pass).map(|r| r.algebra.clone()).collect();
    ensure(fails.is_empty(), || format!("join not compatible on {fails:?}"))?;
    within(start, JOIN_LIMIT)?;
    Ok(format!("{} algebras, {pairs} pairs, 0 failures ({:.2?})", records.len(), start.elapsed()))
}

/// Mal'cev groups permute and are modular; semilattices record a failure.
fn criterion_3() -> Outcome {
    let records = fuzz_laws(&groups(), &[Law::Permute, Law::Modular], CAP).map_err(e)?;
    ensure(records.iter().all(|r| r.gated && r.verdict == Verdict::Pass), || {
        let bad: Vec<_> = records.iter().filter(|r| r.verdict != Verdict::Pass).map(|r| r.algebra.clone()).collect();
        format!("group counterexamples on {bad:?}")
    })?;
    let slat = fuzz_laws(&semilattices(), &[Law::Permute], CAP).map_err(e)?;
    let expected = count_verdicts(&slat, Verdict::ExpectedFail);
    ensure(expected >= 1 && count_verdicts(&slat, Verdict::Fail) == 0, || "no expected permutability failure".into())?;
    Ok(format!("{} group records pass; {expected} expected semilattice failures", records.len()))
}

/// Arithmetical Boolean algebras have distributive uniformity lattices.
fn criterion_4() -> Outcome {
    let entries = boolean_algebras();
    for entry in &entries {
        let c = &entry.certificates;
        let terms = [c.malcev.clone().ok_or("no Mal'cev term")?, c.majority.clone().ok_or("no majority term")?];
        let outcomes = check_family(&entry.algebra, Family::Arithmetical, &terms).map_err(e)?;
        ensure(all_hold(&outcomes), || format!("{}: certificates fail", entry.name))?;
    }
    let records = fuzz_laws(&entries, &[Law::Distributive], CAP).map_err(e)?;
    ensure(records.iter().all(|r| r.gated && r.verdict == Verdict::Pass), || format!("{records:?}"))?;
    let triples: usize = records.iter().map(|r| r.instances).sum();
    Ok(format!("{} algebras, {triples} triples distributive", records.len()))
}

/// Day terms from the group Mal'cev term, shifting witnesses, partial
/// modularity.
fn criterion_5() -> Outcome {
    let day = day_terms_from_malcev(&group_malcev()).map_err(e)?;
    for entry in groups() {
        let outcomes = check_family(&entry.algebra, Family::Day, &day).map_err(e)?;
        ensure(all_hold(&outcomes), || format!("{}: Day identities fail", entry.name))?;
    }
    let mut witnesses = 0;
    for n in [4, 6] {
        let a = cyclic_group(n);
        let ms = day_tables(&a, &day).map_err(e)?;
        for x in a.congruences(CAP).map_err(e)? {
            let w = shifting_witness(&a, &day, &PrincipalFilter::principal(x.clone()), CAP).map_err(e)?;
            ensure(x.is_subset(&w) && validate_witness(&ms, &w, &x), || format!("Z/{n}: witness {w} for {x} fails"))?;
            witnesses += 1;
        }
    }
    let records = fuzz_laws(&standard_corpus(), &[Law::PartialModularity], CAP).map_err(e)?;
    let gated = records.iter().filter(|r| r.gated).count();
    ensure(records.iter().all(|r| !r.gated || r.verdict == Verdict::Pass), || "partial modularity fails".into())?;
    ensure(gated > 0, || "no algebra carries Day terms".into())?;
    Ok(format!(
        "Day identities on {} groups, {witnesses} witnesses validated, partial modularity on {gated} algebras",
        groups().len()
    ))
}

/// The 2-adic completion at depth 12.
fn criterion_6() -> Outcome {
    let start = Instant::now();
    let depth = 12;
    let chain = Rc::new(ModulusChain::powers(2).map_err(e)?);
    let c = Completion::new(chain.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let sig = chain.signature().clone();
    for (op, (name, arity)) in sig.symbols().iter().enumerate() {
        for _ in 0..100 {
            let args: Vec<i128> = (0..*arity).map(|_| rng.gen_range(-(1i128 << 40)..1i128 << 40)).collect();
            let defect = c.eta_homomorphism_defect(op, &args, depth).map_err(e)?;
            ensure(defect.is_none(), || format!("η fails for {name} on {args:?} at level {defect:?}"))?;
        }
    }
    for base in [0i128, -12345, 987_654_321] {
        for d in 1..1i128 << depth {
            let sep = c.separation_level(&c.eta(base), &c.eta(base + d), depth).map_err(e)?;
            ensure(sep.is_some(), || format!("{base} and {} not separated", base + d))?;
        }
    }
    let partial = CauchySequence::new(|i| Ok((1i128 << i) - 1), |k| k);
    let x = c.cauchy_to_pro(&partial, 8, depth).map_err(e)?;
    let x_plus_one = c.apply_symbol("add", &[x.clone(), c.eta(1)]).map_err(e)?;
    for k in 0..=depth {
        let (lx, l1) = (x.level(k).map_err(e)?, x_plus_one.level(k).map_err(e)?);
        ensure(lx == (1 << k) - 1 && l1 == 0, || format!("level {k}: x = {lx}, x + 1 = {l1}"))?;
    }
    let round = 10;
    for _ in 0..50 {
        let digits: Vec<u64> = (0..=round + 1).map(|_| rng.gen_range(0..2)).collect();
        let ch = chain.clone();
        let p: ProElement = c.from_levels(move |k| Ok(ch.digits_to_level(k, |i| digits[i])));
        let back = c.cauchy_to_pro(&c.pro_to_cauchy(&p).map_err(e)?, 1, round).map_err(e)?;
        ensure(c.approx_eq(&p, &back, round).map_err(e)?, || "φ round trip moves a point".into())?;
    }
    within(start, COMPLETION_LIMIT)?;
    Ok(format!("η homomorphic, Hausdorff below 2^12, x + 1 = 0, 50 round trips ({:.2?})", start.elapsed()))
}

/// Pullback of the quotient uniformity and the iterated-completion square.
fn criterion_7() -> Outcome {
    let depth = 8;
    let fine = Completion::new(Rc::new(ModulusChain::powers(2).map_err(e)?));
    let q = fine.quotient_uniformity(Rc::new(ModulusChain::constant(4).map_err(e)?), depth).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..200 {
        let (a, b): (i128, i128) = (rng.gen_range(-10_000..10_000), rng.gen_range(-10_000..10_000));
        let b = if rng.gen_bool(0.5) { a + 4 * (b % 50) } else { b };
        let related = (a - b).rem_euclid(4) == 0;
        for k in 0..=depth {
            let same = q.nat(k, &fine.eta(a)).map_err(e)? == q.nat(k, &fine.eta(b)).map_err(e)?;
            ensure(same == related, || format!("{a}, {b} at level {k}: quotient says {same}"))?;
        }
    }
    let six = Completion::new(Rc::new(ModulusChain::powers(6).map_err(e)?));
    let samples: Vec<i128> = (0..60).map(|_| rng.gen_range(-1_000_000..1_000_000)).collect();
    let iso = six.iterated_completion_iso(Rc::new(ModulusChain::powers(2).map_err(e)?), 6, &samples).map_err(e)?;
    ensure(iso.commutes(), || format!("square fails on {:?}", iso.mismatches))?;
    Ok(format!("200 pairs pull back to mod 4; 6^k/2^k square commutes on {} samples at depth 6", samples.len()))
}

/// Factorizations, fills and E-quotient intervals on the shipped corpus.
fn criterion_8() -> Outcome {
    let corpus = Corpus::standard();
    let depth = 4;
    let mut factored = 0;
    for (name, f) in &corpus.homs {
        if f.check(depth, BUDGET).is_err() {
            continue;
        }
        let fac = factor(f, depth, BUDGET).map_err(e)?;
        let me = fac.e.then(&fac.m).map_err(e)?;
        let ok = fac.e.is_dense(depth, BUDGET).map_err(e)?
            && fac.m.is_embedding(depth, BUDGET).map_err(e)?
            && me.first_difference(f, depth, BUDGET).map_err(e)?.is_none();
        ensure(ok, || format!("{name}: factorization fails"))?;
        factored += 1;
    }
    for sq in &corpus.squares {
        let delta = diagonal_fill(&sq.e, &sq.m, &sq.top, &sq.bottom, depth, BUDGET).map_err(e)?;
        let upper = sq.e.then(&delta).map_err(e)?.first_difference(&sq.top, depth, BUDGET).map_err(e)?;
        let lower = delta.then(&sq.m).map_err(e)?.first_difference(&sq.bottom, depth, BUDGET).map_err(e)?;
        ensure(upper.is_none() && lower.is_none(), || format!("{}: triangles fail", sq.name))?;
        // A second fill built from `e` and `top` alone, without `m`.
        let other = extend_along(&sq.e, &sq.top, depth, BUDGET).map_err(e)?;
        ensure(other.first_difference(&delta, depth, BUDGET).map_err(e)?.is_none(), || "fill not unique".into())?;
    }
    let opts = Options { depth: Some(depth), ..Options::default() };
    let mut shapes = Vec::new();
    for c in &corpus.coarsenings {
        let report = commands::factor(&corpus, FactorTarget::Coarsening(&c.name), &opts).map_err(e)?;
        let r = &report.records[0];
        ensure(r.status == Status::Pass, || format!("{}: {:?}", c.name, r.counterexample))?;
        shapes.push(format!("{} {}", c.name, r.data["interval-covers"]));
    }
    let chain = shapes.iter().any(|s| s.starts_with("two-adic-chain [[\"z4\",\"z2\"],[\"z2\",\"indiscrete\"]]"));
    let antichain = shapes.iter().any(|s| s == "six-adic-antichain []");
    ensure(chain && antichain, || format!("interval shapes {shapes:?}"))?;
    Ok(format!("{factored} homs factored, {} squares filled, 3-chain and antichain reproduced", corpus.squares.len()))
}

/// Byte-identical fuzz reports from the binary.
fn criterion_9() -> Outcome {
    let run = || {
        std::process::Command::new(env!("CARGO_BIN_EXE_ua"))
            .args(["fuzz", "--seed", "7", "--format", "jsonl"])
            .output()
            .map_err(e)
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.code() == Some(0), || format!("exit {:?}", a.status.code()))?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "reports differ".into())?;
    Ok(format!("{} identical lines", a.stdout.iter().filter(|&&c| c == b'\n').count()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("finite-lattice oracle", criterion_1),
        ("join agreement", criterion_2),
        ("Mal'cev: permuting and modular", criterion_3),
        ("arithmetical: distributive", criterion_4),
        ("Day-term pipeline", criterion_5),
        ("2-adic completion", criterion_6),
        ("quotient pullback", criterion_7),
        ("factorization system", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(msg) => println!("criterion {}: PASS {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
