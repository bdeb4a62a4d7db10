//! Builders for the small algebras the checks run on.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::fuzz::Law;
use super::identities::day_terms_from_malcev;
use super::{FiniteAlgebra, Signature, Term};
use crate::filter::{product_coords, product_index};
use crate::relation::Carrier;
use crate::table::OpTable;

/// Terms certifying Mal'cev conditions. Day terms, when present, are
/// quaternary; the others ternary.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificates {
    pub malcev: Option<Term>,
    pub majority: Option<Term>,
    pub day: Option<Vec<Term>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub algebra: FiniteAlgebra,
    pub certificates: Certificates,
    /// Laws whose failure is anticipated and should not count against a run.
    pub expect_fail: Vec<Law>,
}

impl CorpusEntry {
    fn new(name: &str, algebra: FiniteAlgebra, certificates: Certificates) -> Self {
        CorpusEntry { name: name.to_string(), algebra, certificates, expect_fail: Vec::new() }
    }
}

fn group_signature() -> Signature {
    Signature::new([("mul", 2), ("inv", 1), ("e", 0)]).unwrap()
}

/// A group from its multiplication; identity and inverses are read off the
/// table. Panics if `mul` is not a group law on `0..n`.
pub fn group_from_fn(n: usize, mul: impl Fn(usize, usize) -> usize) -> FiniteAlgebra {
    let m = OpTable::from_fn(n, 2, |a| mul(a[0], a[1])).unwrap();
    let e = (0..n).find(|&e| (0..n).all(|x| m.apply(&[e, x]) == x && m.apply(&[x, e]) == x)).expect("no identity");
    let inv = OpTable::from_fn(n, 1, |a| (0..n).find(|&y| m.apply(&[a[0], y]) == e).expect("no inverse")).unwrap();
    let unit = OpTable::new(n, 0, vec![e]).unwrap();
    FiniteAlgebra::new(Carrier::new(n).unwrap(), group_signature(), vec![m, inv, unit]).unwrap()
}

pub fn cyclic_group(n: usize) -> FiniteAlgebra {
    group_from_fn(n, |a, b| (a + b) % n)
}

/// The group generated by permutations of `0..degree`, elements numbered in
/// lexicographic order of their images (identity first).
pub fn permutation_group(degree: usize, generators: &[Vec<usize>]) -> FiniteAlgebra {
    let id: Vec<usize> = (0..degree).collect();
    let mut elems: BTreeSet<Vec<usize>> = BTreeSet::new();
    elems.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q: Vec<usize> = (0..degree).map(|i| p[g[i]]).collect();
            if elems.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    let elems: Vec<Vec<usize>> = elems.into_iter().collect();
    group_from_fn(elems.len(), |a, b| {
        let q: Vec<usize> = (0..degree).map(|i| elems[a][elems[b][i]]).collect();
        elems.binary_search(&q).unwrap()
    })
}

pub fn symmetric_group_3() -> FiniteAlgebra {
    permutation_group(3, &[vec![1, 2, 0], vec![1, 0, 2]])
}

/// Symmetries of a square, order 8.
pub fn dihedral_group_4() -> FiniteAlgebra {
    permutation_group(4, &[vec![1, 2, 3, 0], vec![3, 2, 1, 0]])
}

/// `±1, ±i, ±j, ±k`, encoded as `4·sign + unit`.
pub fn quaternion_group() -> FiniteAlgebra {
    // UNITS[u][v] = (negate, unit) for the product of units u·v.
    const UNITS: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    group_from_fn(8, |a, b| {
        let (neg, unit) = UNITS[a % 4][b % 4];
        4 * ((a / 4 + b / 4 + neg) % 2) + unit
    })
}

/// Direct product of algebras sharing a signature; elements are encoded with
/// [`product_index`].
pub fn direct_product(factors: &[FiniteAlgebra]) -> FiniteAlgebra {
    let sizes: Vec<usize> = factors.iter().map(FiniteAlgebra::size).collect();
    let n: usize = sizes.iter().product();
    let sig = factors[0].signature().clone();
    let tables = sig
        .symbols()
        .iter()
        .enumerate()
        .map(|(s, &(_, arity))| {
            OpTable::from_fn(n, arity, |args| {
                let coords: Vec<Vec<usize>> = args.iter().map(|&a| product_coords(&sizes, a)).collect();
                let out: Vec<usize> = factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        let local: Vec<usize> = coords.iter().map(|c| c[i]).collect();
                        f.tables()[s].apply(&local)
                    })
                    .collect();
                product_index(&sizes, &out)
            })
            .unwrap()
        })
        .collect();
    FiniteAlgebra::new(Carrier::new(n).unwrap(), sig, tables).unwrap()
}

pub fn klein_group() -> FiniteAlgebra {
    direct_product(&[cyclic_group(2), cyclic_group(2)])
}

/// `Z/n` with `add, neg, zero, mul, one`.
pub fn zn_ring(n: usize) -> FiniteAlgebra {
    let sig = Signature::new([("add", 2), ("neg", 1), ("zero", 0), ("mul", 2), ("one", 0)]).unwrap();
    let tables = vec![
        OpTable::from_fn(n, 2, |a| (a[0] + a[1]) % n).unwrap(),
        OpTable::from_fn(n, 1, |a| (n - a[0]) % n).unwrap(),
        OpTable::new(n, 0, vec![0]).unwrap(),
        OpTable::from_fn(n, 2, |a| a[0] * a[1] % n).unwrap(),
        OpTable::new(n, 0, vec![1 % n]).unwrap(),
    ];
    FiniteAlgebra::new(Carrier::new(n).unwrap(), sig, tables).unwrap()
}

/// The four-element Boolean algebra on bitmasks of two atoms, with `join`,
/// `meet`, `compl`.
pub fn boolean_algebra_2x2() -> FiniteAlgebra {
    let sig = Signature::new([("join", 2), ("meet", 2), ("compl", 1)]).unwrap();
    let tables = vec![
        OpTable::from_fn(4, 2, |a| a[0] | a[1]).unwrap(),
        OpTable::from_fn(4, 2, |a| a[0] & a[1]).unwrap(),
        OpTable::from_fn(4, 1, |a| 3 ^ a[0]).unwrap(),
    ];
    FiniteAlgebra::new(Carrier::new(4).unwrap(), sig, tables).unwrap()
}

fn meet_semilattice(n: usize, meet: impl Fn(usize, usize) -> usize) -> FiniteAlgebra {
    let sig = Signature::new([("meet", 2)]).unwrap();
    let t = OpTable::from_fn(n, 2, |a| meet(a[0], a[1])).unwrap();
    FiniteAlgebra::new(Carrier::new(n).unwrap(), sig, vec![t]).unwrap()
}

/// `0 < 1 < 2` under `min`.
pub fn chain_semilattice() -> FiniteAlgebra {
    meet_semilattice(3, |a, b| a.min(b))
}

/// Bottom `0` below two incomparable atoms `1`, `2`.
pub fn vee_semilattice() -> FiniteAlgebra {
    meet_semilattice(3, |a, b| if a == b { a } else { 0 })
}

pub fn group_malcev() -> Term {
    Term::parse("(mul (mul x0 (inv x1)) x2)").unwrap()
}

pub fn ring_malcev() -> Term {
    Term::parse("(add (add x0 (neg x1)) x2)").unwrap()
}

/// `x0 ⊕ x1 ⊕ x2` written with join, meet and complement.
pub fn boolean_malcev() -> Term {
    let xor = Term::parse("(join (meet x0 (compl x1)) (meet (compl x0) x1))").unwrap();
    let inner = xor.substitute(&[Term::Var(0), Term::Var(1)]).unwrap();
    xor.substitute(&[inner, Term::Var(2)]).unwrap()
}

/// The median `(x0 ∧ x1) ∨ (x1 ∧ x2) ∨ (x0 ∧ x2)`.
pub fn boolean_majority() -> Term {
    Term::parse("(join (join (meet x0 x1) (meet x1 x2)) (meet x0 x2))").unwrap()
}

fn malcev_certificates(p: Term) -> Certificates {
    let day = day_terms_from_malcev(&p).unwrap();
    Certificates { malcev: Some(p), majority: None, day: Some(day) }
}

/// All groups of order at most 8, up to isomorphism.
pub fn groups() -> Vec<CorpusEntry> {
    let z2 = cyclic_group(2);
    let list = vec![
        ("grp-z1", cyclic_group(1)),
        ("grp-z2", cyclic_group(2)),
        ("grp-z3", cyclic_group(3)),
        ("grp-z4", cyclic_group(4)),
        ("grp-z2xz2", klein_group()),
        ("grp-z5", cyclic_group(5)),
        ("grp-z6", cyclic_group(6)),
        ("grp-s3", symmetric_group_3()),
        ("grp-z7", cyclic_group(7)),
        ("grp-z8", cyclic_group(8)),
        ("grp-z4xz2", direct_product(&[cyclic_group(4), z2.clone()])),
        ("grp-z2xz2xz2", direct_product(&[z2.clone(), z2.clone(), z2])),
        ("grp-d4", dihedral_group_4()),
        ("grp-q8", quaternion_group()),
    ];
    list.into_iter().map(|(name, a)| CorpusEntry::new(name, a, malcev_certificates(group_malcev()))).collect()
}

pub fn rings() -> Vec<CorpusEntry> {
    (2..=8)
        .map(|n| {
            let name = alloc::format!("ring-z{n}");
            CorpusEntry::new(&name, zn_ring(n), malcev_certificates(ring_malcev()))
        })
        .collect()
}

pub fn boolean_algebras() -> Vec<CorpusEntry> {
    let mut certs = malcev_certificates(boolean_malcev());
    certs.majority = Some(boolean_majority());
    vec![CorpusEntry::new("bool-2x2", boolean_algebra_2x2(), certs)]
}

/// Semilattices carry no certificates; the chain has a non-permuting pair of
/// congruences, which is anticipated.
pub fn semilattices() -> Vec<CorpusEntry> {
    let mut chain = CorpusEntry::new("slat-chain3", chain_semilattice(), Certificates::default());
    chain.expect_fail = vec![Law::Permute];
    let mut vee = CorpusEntry::new("slat-vee3", vee_semilattice(), Certificates::default());
    vee.expect_fail = vec![Law::Permute];
    vec![chain, vee]
}

pub fn standard_corpus() -> Vec<CorpusEntry> {
    let mut out = groups();
    out.extend(rings());
    out.extend(boolean_algebras());
    out.extend(semilattices());
    out
}
