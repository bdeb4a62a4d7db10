//! Validation of a [`CorpusDocument`] into core objects.

use std::collections::BTreeSet;
use std::path::Path;
use std::rc::Rc;

use ua_core::algebra::corpus::{Certificates, CorpusEntry};
use ua_core::algebra::fuzz::Law;
use ua_core::algebra::{FiniteAlgebra, Signature, Term};
use ua_core::factorize::{ChainHom, Reindex};
use ua_core::prochain::{ModulusChain, System, TableChain};
use ua_core::{Carrier, OpTable};

use crate::error::{invalid, InputError};
use crate::schema::*;

/// The shipped corpus, also used when no `--input` is given.
pub const STANDARD_CORPUS: &str = include_str!("../corpus/standard.json");

#[derive(Clone)]
pub enum Chain {
    Integers(Rc<ModulusChain>),
    Tables(Rc<TableChain>),
}

impl Chain {
    pub fn system(&self) -> System {
        match self {
            Chain::Integers(c) => c.clone(),
            Chain::Tables(c) => c.clone(),
        }
    }
}

pub struct Square {
    pub name: String,
    pub e: ChainHom,
    pub m: ChainHom,
    pub top: ChainHom,
    pub bottom: ChainHom,
}

pub struct Coarsening {
    pub name: String,
    pub base: Rc<ModulusChain>,
    pub quotients: Vec<(String, Rc<ModulusChain>)>,
    pub expected_covers: Option<Vec<(String, String)>>,
}

/// A validated document. Chains referenced by several homomorphisms are
/// shared, so arrows compose exactly when their declared endpoints agree.
pub struct Corpus {
    pub document: CorpusDocument,
    pub terms: Vec<(String, Term)>,
    pub entries: Vec<CorpusEntry>,
    pub chains: Vec<(String, Chain)>,
    pub homs: Vec<(String, ChainHom)>,
    pub squares: Vec<Square>,
    pub coarsenings: Vec<Coarsening>,
}

fn find<'a, T>(items: &'a [(String, T)], what: &str, name: &str) -> Result<&'a T, InputError> {
    items.iter().find(|(n, _)| n == name).map(|(_, t)| t).ok_or_else(|| invalid(format!("unknown {what} `{name}`")))
}

fn check_unique<'a>(what: &str, names: impl IntoIterator<Item = &'a str>) -> Result<(), InputError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if n.is_empty() {
            return Err(invalid(format!("{what} with an empty name")));
        }
        if !seen.insert(n) {
            return Err(invalid(format!("duplicate {what} `{n}`")));
        }
    }
    Ok(())
}

impl Corpus {
    pub fn standard() -> Corpus {
        Corpus::parse(STANDARD_CORPUS).expect("shipped corpus is valid")
    }

    pub fn read(path: &Path) -> Result<Corpus, InputError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| InputError::Io { path: path.display().to_string(), source })?;
        Corpus::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Corpus, InputError> {
        Corpus::load(serde_json::from_str(text)?)
    }

    pub fn load(document: CorpusDocument) -> Result<Corpus, InputError> {
        let doc = &document;
        check_unique("term", doc.terms.iter().map(|t| t.name.as_str()))?;
        check_unique("algebra", doc.algebras.iter().map(|a| a.name.as_str()))?;
        check_unique("chain", doc.chains.iter().map(ChainDecl::name))?;
        check_unique("hom", doc.homs.iter().map(HomDecl::name))?;
        check_unique("square", doc.squares.iter().map(|s| s.name.as_str()))?;
        check_unique("coarsening", doc.coarsenings.iter().map(|c| c.name.as_str()))?;

        let terms = doc
            .terms
            .iter()
            .map(|t| {
                Term::parse(&t.term)
                    .map(|p| (t.name.clone(), p))
                    .map_err(|e| invalid(format!("term `{}`: {e}", t.name)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let entries = doc.algebras.iter().map(|a| load_algebra(a, &terms)).collect::<Result<Vec<_>, _>>()?;
        let algebras: Vec<(String, FiniteAlgebra)> =
            entries.iter().map(|e| (e.name.clone(), e.algebra.clone())).collect();

        let mut chains = Vec::new();
        for c in &doc.chains {
            let chain = load_chain(c, &algebras).map_err(|e| invalid(format!("chain `{}`: {e}", c.name())))?;
            chains.push((c.name().to_string(), chain));
        }

        let mut homs = Vec::new();
        for h in &doc.homs {
            let hom = load_hom(h, &chains).map_err(|e| invalid(format!("hom `{}`: {e}", h.name())))?;
            homs.push((h.name().to_string(), hom));
        }

        let squares = doc
            .squares
            .iter()
            .map(|s| {
                let get =
                    |n: &str| find(&homs, "hom", n).cloned().map_err(|e| invalid(format!("square `{}`: {e}", s.name)));
                Ok(Square {
                    name: s.name.clone(),
                    e: get(&s.e)?,
                    m: get(&s.m)?,
                    top: get(&s.top)?,
                    bottom: get(&s.bottom)?,
                })
            })
            .collect::<Result<Vec<_>, InputError>>()?;

        let coarsenings = doc
            .coarsenings
            .iter()
            .map(|c| load_coarsening(c, &chains).map_err(|e| invalid(format!("coarsening `{}`: {e}", c.name))))
            .collect::<Result<Vec<_>, _>>()?;

        Ok(Corpus { document, terms, entries, chains, homs, squares, coarsenings })
    }

    pub fn term(&self, name: &str) -> Result<&Term, InputError> {
        find(&self.terms, "term", name)
    }

    pub fn entry(&self, name: &str) -> Result<&CorpusEntry, InputError> {
        self.entries.iter().find(|e| e.name == name).ok_or_else(|| invalid(format!("unknown algebra `{name}`")))
    }

    pub fn chain(&self, name: &str) -> Result<&Chain, InputError> {
        find(&self.chains, "chain", name)
    }

    pub fn hom(&self, name: &str) -> Result<&ChainHom, InputError> {
        find(&self.homs, "hom", name)
    }

    pub fn square(&self, name: &str) -> Result<&Square, InputError> {
        self.squares.iter().find(|s| s.name == name).ok_or_else(|| invalid(format!("unknown square `{name}`")))
    }

    pub fn coarsening(&self, name: &str) -> Result<&Coarsening, InputError> {
        self.coarsenings.iter().find(|c| c.name == name).ok_or_else(|| invalid(format!("unknown coarsening `{name}`")))
    }
}

fn load_algebra(a: &AlgebraDecl, terms: &[(String, Term)]) -> Result<CorpusEntry, InputError> {
    let ctx = |e: &dyn std::fmt::Display| invalid(format!("algebra `{}`: {e}", a.name));
    let carrier = Carrier::new(a.size).map_err(|e| ctx(&e))?;
    let signature = Signature::new(a.operations.iter().map(|o| (o.symbol.clone(), o.arity))).map_err(|e| ctx(&e))?;
    let mut tables = Vec::with_capacity(a.operations.len());
    for o in &a.operations {
        let t = OpTable::new(a.size, o.arity, o.table.clone())
            .map_err(|e| ctx(&format!("operation `{}`: {e}", o.symbol)))?;
        tables.push(t);
    }
    let algebra = FiniteAlgebra::new(carrier, signature, tables).map_err(|e| ctx(&e))?;
    let term = |n: &String| find(terms, "term", n).cloned().map_err(|e| ctx(&e));
    let c = &a.certificates;
    let certificates = Certificates {
        malcev: c.malcev.as_ref().map(term).transpose()?,
        majority: c.majority.as_ref().map(term).transpose()?,
        day: c.day.as_ref().map(|ds| ds.iter().map(term).collect::<Result<Vec<_>, _>>()).transpose()?,
    };
    let expect_fail = a
        .expect_fail
        .iter()
        .map(|l| Law::from_name(l).ok_or_else(|| ctx(&format!("unknown law `{l}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CorpusEntry { name: a.name.clone(), algebra, certificates, expect_fail })
}

fn load_chain(c: &ChainDecl, algebras: &[(String, FiniteAlgebra)]) -> Result<Chain, InputError> {
    let core = |e: ua_core::Error| invalid(e.to_string());
    Ok(match c {
        ChainDecl::Moduli { moduli, .. } => Chain::Integers(Rc::new(ModulusChain::new(moduli.clone()).map_err(core)?)),
        ChainDecl::Powers { base, .. } => Chain::Integers(Rc::new(ModulusChain::powers(*base).map_err(core)?)),
        ChainDecl::Tables { levels, connect, .. } => {
            let levels = levels.iter().map(|n| find(algebras, "algebra", n).cloned()).collect::<Result<Vec<_>, _>>()?;
            Chain::Tables(Rc::new(TableChain::new(levels, connect.clone()).map_err(core)?))
        }
    })
}

fn load_reindex(r: &ReindexDecl) -> Result<Reindex, InputError> {
    Reindex::table(r.prefix.clone(), r.offset).map_err(|e| invalid(e.to_string()))
}

fn integer_chain(chains: &[(String, Chain)], name: &str) -> Result<Rc<ModulusChain>, InputError> {
    match find(chains, "chain", name)? {
        Chain::Integers(c) => Ok(c.clone()),
        Chain::Tables(_) => Err(invalid(format!("chain `{name}` is not an integer chain"))),
    }
}

fn load_hom(h: &HomDecl, chains: &[(String, Chain)]) -> Result<ChainHom, InputError> {
    let core = |e: ua_core::Error| invalid(e.to_string());
    match h {
        HomDecl::Scale { source, target, factor, reindex, .. } => {
            let (s, t) = (integer_chain(chains, source)?, integer_chain(chains, target)?);
            ChainHom::scale(s, t, *factor, load_reindex(reindex)?).map_err(core)
        }
        HomDecl::Tables { source, target, tables, reindex, .. } => {
            let (s, t) = (find(chains, "chain", source)?.system(), find(chains, "chain", target)?.system());
            ChainHom::from_tables(s, t, load_reindex(reindex)?, tables.clone()).map_err(core)
        }
    }
}

fn load_coarsening(c: &CoarseningDecl, chains: &[(String, Chain)]) -> Result<Coarsening, InputError> {
    if c.quotients.is_empty() {
        return Err(invalid("no quotients"));
    }
    let base = integer_chain(chains, &c.base)?;
    let quotients = c
        .quotients
        .iter()
        .map(|q| integer_chain(chains, q).map(|ch| (q.clone(), ch)))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(covers) = &c.expected_covers {
        for (a, b) in covers {
            for n in [a, b] {
                if !c.quotients.contains(n) {
                    return Err(invalid(format!("expected cover names `{n}`, which is not a quotient")));
                }
            }
        }
    }
    Ok(Coarsening { name: c.name.clone(), base, quotients, expected_covers: c.expected_covers.clone() })
}
