//! Finite algebras given by operation tables.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::filter::PrincipalFilter;
use crate::lattice::{equivalences, UniformityLattice};
use crate::relation::{Carrier, Relation};
use crate::table::{OpTable, Tuples};

pub mod corpus;
pub mod fuzz;
pub mod identities;
pub mod shifting;
mod term;

pub(crate) use term::Compiled;
pub use term::Term;

/// Carriers at most this large get their congruences by partition scan.
pub const PARTITION_SCAN_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<(String, usize)>,
}

impl Signature {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut out: Vec<(String, usize)> = Vec::new();
        for (name, arity) in symbols {
            let name = name.into();
            if out.iter().any(|(n, _)| *n == name) {
                return Err(Error::DuplicateSymbol(name));
            }
            out.push((name, arity));
        }
        Ok(Signature { symbols: out })
    }

    pub fn symbols(&self) -> &[(String, usize)] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|(n, _)| n == name)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.symbols[i].1)
    }

    /// Resolves symbol names and checks arities.
    pub(crate) fn compile(&self, t: &Term) -> Result<Compiled> {
        match t {
            Term::Var(i) => Ok(Compiled::Var(*i)),
            Term::Op(name, args) => {
                let idx = self.index_of(name).ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
                let arity = self.symbols[idx].1;
                if args.len() != arity {
                    return Err(Error::Arity { expected: arity, found: args.len() });
                }
                let args = args.iter().map(|a| self.compile(a)).collect::<Result<Vec<_>>>()?;
                Ok(Compiled::Op(idx, args.into_boxed_slice()))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    carrier: Carrier,
    signature: Signature,
    tables: Vec<OpTable>,
}

impl FiniteAlgebra {
    /// Tables are given in signature order.
    pub fn new(carrier: Carrier, signature: Signature, tables: Vec<OpTable>) -> Result<Self> {
        if tables.len() != signature.len() {
            return Err(Error::Arity { expected: signature.len(), found: tables.len() });
        }
        for ((_, arity), t) in signature.symbols().iter().zip(&tables) {
            if t.arity() != *arity {
                return Err(Error::Arity { expected: *arity, found: t.arity() });
            }
            if t.size() != carrier.size() {
                return Err(Error::CarrierMismatch { left: carrier.size(), right: t.size() });
            }
        }
        Ok(FiniteAlgebra { carrier, signature, tables })
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn tables(&self) -> &[OpTable] {
        &self.tables
    }

    pub fn table(&self, symbol: &str) -> Result<&OpTable> {
        let i = self.signature.index_of(symbol).ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
        Ok(&self.tables[i])
    }

    pub fn eval_term(&self, t: &Term, env: &[usize]) -> Result<usize> {
        let c = self.signature.compile(t)?;
        if t.var_bound() > env.len() {
            return Err(Error::UnboundVariable(t.var_bound() - 1));
        }
        if let Some(&bad) = env.iter().find(|&&a| a >= self.size()) {
            return Err(Error::ElementOutOfRange { element: bad, size: self.size() });
        }
        Ok(self.eval_compiled(&c, env))
    }

    pub(crate) fn eval_compiled(&self, c: &Compiled, env: &[usize]) -> usize {
        c.eval(&|s, args| self.tables[s].apply(args), env)
    }

    /// The term operation of `t` as an `arity`-ary table.
    pub fn term_table(&self, t: &Term, arity: usize) -> Result<OpTable> {
        if t.var_bound() > arity {
            return Err(Error::Arity { expected: arity, found: t.var_bound() });
        }
        let c = self.signature.compile(t)?;
        OpTable::from_fn(self.size(), arity, |env| self.eval_compiled(&c, env))
    }

    /// `ω(U) ⊆ U` for every basic operation `ω`.
    pub fn is_compatible_relation(&self, u: &Relation) -> bool {
        self.tables.iter().all(|t| u.op_image(t).map(|img| img.is_subset(u)).unwrap_or(false))
    }

    /// Compatibility of a uniformity, decided on the generator. Also checks
    /// the `U^ω ∈ 𝒰` criterion for every symbol and argument position and
    /// fails loudly if the two disagree.
    pub fn is_compatible_filter(&self, f: &PrincipalFilter) -> Result<bool> {
        if !f.is_uniformity() {
            return Err(Error::NotUniformity);
        }
        let by_image = self.is_compatible_relation(f.generator());
        let by_super = self.compatible_by_argument(f.generator())?;
        assert_eq!(by_image, by_super, "compatibility criteria disagree on {f:?}");
        Ok(by_image)
    }

    /// Whether every operation is uniformly continuous in each argument
    /// separately with respect to the principal filter on `g`, i.e.
    /// `g ⊆ g^ω` read at every position. Nullary operations are trivially
    /// continuous.
    pub fn compatible_by_argument(&self, g: &Relation) -> Result<bool> {
        for t in &self.tables {
            for pos in 0..t.arity() {
                if !g.is_subset(&g.u_super_at(t, pos)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Least congruence containing `pairs`.
    pub fn congruence_generated(&self, pairs: &[(usize, usize)]) -> Result<Relation> {
        let mut r = Relation::reflexive_from_pairs(self.carrier, pairs.iter().copied())?;
        loop {
            let mut next = r.union(&r.inverse())?;
            for t in &self.tables {
                next = next.union(&r.op_image(t)?)?;
            }
            let next = next.transitive_closure();
            if next == r {
                return Ok(r);
            }
            r = next;
        }
    }

    /// All congruences, sorted by size then bits. Uses a partition scan up to
    /// [`PARTITION_SCAN_LIMIT`] points and join-closure of principal
    /// congruences above; `cap` bounds the carrier either way.
    pub fn congruences(&self, cap: usize) -> Result<Vec<Relation>> {
        let n = self.size();
        if n > cap {
            return Err(Error::CapExceeded { what: "carrier", size: n, cap });
        }
        let mut out = if n <= PARTITION_SCAN_LIMIT {
            equivalences(self.carrier).into_iter().filter(|r| self.is_compatible_relation(r)).collect()
        } else {
            self.congruences_by_closure()?
        };
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    /// Every congruence is the join of the principal congruences below it.
    pub fn congruences_by_closure(&self) -> Result<Vec<Relation>> {
        let n = self.size();
        let mut found: Vec<Relation> = Vec::new();
        found.push(Relation::identity(self.carrier));
        let mut principal = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let cg = self.congruence_generated(&[(a, b)])?;
                if !principal.contains(&cg) {
                    principal.push(cg);
                }
            }
        }
        let mut frontier = found.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for r in &frontier {
                for p in &principal {
                    let j = r.union(p)?.transitive_closure();
                    if !found.contains(&j) {
                        found.push(j.clone());
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        Ok(found)
    }

    /// `Con A` as a lattice of compatible uniformities.
    pub fn con_lattice(&self, cap: usize) -> Result<UniformityLattice> {
        UniformityLattice::new(self.congruences(cap)?.into_iter().map(PrincipalFilter::principal).collect())
    }

    /// Compatible reflexive symmetric relations (tolerances), i.e. the
    /// generators of compatible semiuniformities. Exhaustive; `cap` bounds
    /// the carrier.
    pub fn tolerances(&self, cap: usize) -> Result<Vec<Relation>> {
        let n = self.size();
        if n > cap {
            return Err(Error::CapExceeded { what: "carrier", size: n, cap });
        }
        let off: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let mut out = Vec::new();
        for mask in Tuples::new(2, off.len()) {
            let pairs = off.iter().zip(&mask).filter(|(_, &m)| m == 1).flat_map(|(&(a, b), _)| [(a, b), (b, a)]);
            let r = Relation::reflexive_from_pairs(self.carrier, pairs)?;
            if self.is_compatible_relation(&r) {
                out.push(r);
            }
        }
        Ok(out)
    }

    /// `𝒰(α ∨ β)` against `𝒰α ∨ 𝒰β` for two congruences: the congruence
    /// generated by the union versus the join of uniformities.
    pub fn congruence_join_agrees(&self, a: &Relation, b: &Relation) -> Result<bool> {
        let pairs: Vec<(usize, usize)> = a.pairs().chain(b.pairs()).collect();
        let cg = PrincipalFilter::principal(self.congruence_generated(&pairs)?);
        let join =
            PrincipalFilter::join(&[PrincipalFilter::principal(a.clone()), PrincipalFilter::principal(b.clone())])?;
        Ok(cg == join)
    }
}
