//! The standard corpus, assembled from the core builders. The shipped
//! `corpus/standard.json` is this document serialized; a test keeps the two
//! in step.

use ua_core::algebra::corpus::{standard_corpus, CorpusEntry};
use ua_core::algebra::Term;

use crate::schema::*;

/// Names terms by the family prefix of the first algebra using them.
struct Terms(Vec<TermDecl>);

impl Terms {
    fn intern(&mut self, t: &Term, name: String) -> String {
        let text = t.to_string();
        let name = if let Term::Var(i) = t { format!("proj-x{i}") } else { name };
        if let Some(d) = self.0.iter().find(|d| d.term == text) {
            return d.name.clone();
        }
        self.0.push(TermDecl { name: name.clone(), term: text });
        name
    }
}

fn algebra_decl(e: &CorpusEntry, terms: &mut Terms) -> AlgebraDecl {
    let family = e.name.split('-').next().unwrap_or(&e.name);
    let a = &e.algebra;
    let operations = a
        .signature()
        .symbols()
        .iter()
        .zip(a.tables())
        .map(|((symbol, arity), t)| OperationDecl { symbol: symbol.clone(), arity: *arity, table: t.values().to_vec() })
        .collect();
    let c = &e.certificates;
    let certificates = CertificateDecl {
        malcev: c.malcev.as_ref().map(|t| terms.intern(t, format!("{family}-malcev"))),
        majority: c.majority.as_ref().map(|t| terms.intern(t, format!("{family}-majority"))),
        day: c
            .day
            .as_ref()
            .map(|ds| ds.iter().enumerate().map(|(i, t)| terms.intern(t, format!("{family}-day{i}"))).collect()),
    };
    AlgebraDecl {
        name: e.name.clone(),
        size: a.size(),
        operations,
        certificates,
        expect_fail: e.expect_fail.iter().map(|l| l.name().to_string()).collect(),
    }
}

fn s(x: &str) -> String {
    x.to_string()
}

fn moduli(name: &str, m: &[u64]) -> ChainDecl {
    ChainDecl::Moduli { name: s(name), moduli: m.to_vec() }
}

fn powers(name: &str, base: u64) -> ChainDecl {
    ChainDecl::Powers { name: s(name), base }
}

fn scale(name: &str, source: &str, target: &str, factor: u64, offset: usize) -> HomDecl {
    HomDecl::Scale {
        name: s(name),
        source: s(source),
        target: s(target),
        factor,
        reindex: ReindexDecl { prefix: vec![], offset },
    }
}

pub fn standard_document() -> CorpusDocument {
    let mut terms = Terms(Vec::new());
    let algebras: Vec<AlgebraDecl> = standard_corpus().iter().map(|e| algebra_decl(e, &mut terms)).collect();
    let chains = vec![
        powers("two-adic", 2),
        powers("two-adic-mid", 2),
        powers("three-adic", 3),
        powers("six-adic", 6),
        powers("twelve-adic", 12),
        moduli("indiscrete", &[1]),
        moduli("z2", &[2]),
        moduli("z2-alt", &[2]),
        moduli("z3", &[3]),
        moduli("z4", &[4]),
        moduli("z4-alt", &[4]),
        moduli("z6", &[6]),
        moduli("z12", &[12]),
        moduli("mod-8-ramp", &[1, 2, 4, 8]),
        ChainDecl::Tables {
            name: s("ring-tower"),
            levels: vec![s("ring-z2"), s("ring-z4"), s("ring-z8")],
            connect: vec![vec![0, 1, 0, 1], vec![0, 1, 2, 3, 0, 1, 2, 3]],
        },
        ChainDecl::Tables { name: s("parity"), levels: vec![s("ring-z2")], connect: vec![] },
    ];
    let homs = vec![
        scale("z4-identity", "z4", "z4-alt", 1, 0),
        scale("reduce-mod4", "two-adic", "z4", 1, 2),
        scale("triple-z2-z6", "z2", "z6", 3, 0),
        scale("double-z2-z6", "z2", "z6", 2, 0),
        scale("nine-z4-z12", "z4", "z12", 9, 0),
        scale("nine-two-adic-z12", "two-adic", "z12", 9, 2),
        scale("two-adic-step", "two-adic", "two-adic-mid", 1, 1),
        scale("nine-mid-z12", "two-adic-mid", "z12", 9, 2),
        HomDecl::Tables {
            name: s("tower-parity"),
            source: s("ring-tower"),
            target: s("parity"),
            tables: vec![vec![0, 1], vec![0, 1, 0, 1], vec![0, 1, 0, 1, 0, 1, 0, 1]],
            reindex: ReindexDecl::default(),
        },
    ];
    let squares = vec![SquareDecl {
        name: s("reduction-square"),
        e: s("two-adic-step"),
        m: s("nine-z4-z12"),
        top: s("reduce-mod4"),
        bottom: s("nine-mid-z12"),
    }];
    let coarsenings = vec![
        CoarseningDecl {
            name: s("two-adic-chain"),
            base: s("two-adic"),
            quotients: vec![s("z4"), s("z2"), s("indiscrete")],
            expected_covers: Some(vec![(s("z4"), s("z2")), (s("z2"), s("indiscrete"))]),
        },
        CoarseningDecl {
            name: s("six-adic-antichain"),
            base: s("six-adic"),
            quotients: vec![s("z2"), s("z3")],
            expected_covers: Some(vec![]),
        },
        CoarseningDecl {
            name: s("two-adic-self"),
            base: s("two-adic"),
            quotients: vec![s("two-adic")],
            expected_covers: Some(vec![]),
        },
    ];
    CorpusDocument { terms: terms.0, algebras, chains, homs, squares, coarsenings }
}
