use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;

use super::{CongruenceChain, EffectiveAlgebra, ProElement, QuotientChain, System};
use crate::algebra::{FiniteAlgebra, Term};
use crate::error::{Error, Result};
use crate::relation::{Carrier, Relation};
use crate::table::OpTable;

type Elem<C> = <<C as CongruenceChain>::Algebra as EffectiveAlgebra>::Elem;

/// The inverse limit of a congruence chain, with `η` and the level-wise
/// algebra structure.
///
/// Points are [`ProElement`]s over the chain. A point belongs to the
/// completion of whichever chain allocation it was built over, so handles
/// sharing an `Rc` share their points.
pub struct Completion<C: CongruenceChain + 'static> {
    chain: Rc<C>,
    system: System,
}

impl<C: CongruenceChain + 'static> Clone for Completion<C> {
    fn clone(&self) -> Self {
        Completion { chain: self.chain.clone(), system: self.system.clone() }
    }
}

/// A sequence `i ↦ s_i` with a modulus: for every `k`, the terms from
/// `modulus(k)` on share one level-`k` class.
pub struct CauchySequence<E> {
    term: Rc<dyn Fn(usize) -> Result<E>>,
    modulus: Rc<dyn Fn(usize) -> usize>,
}

impl<E> Clone for CauchySequence<E> {
    fn clone(&self) -> Self {
        CauchySequence { term: self.term.clone(), modulus: self.modulus.clone() }
    }
}

impl<E> CauchySequence<E> {
    pub fn new(term: impl Fn(usize) -> Result<E> + 'static, modulus: impl Fn(usize) -> usize + 'static) -> Self {
        CauchySequence { term: Rc::new(term), modulus: Rc::new(modulus) }
    }

    pub fn term(&self, i: usize) -> Result<E> {
        (self.term)(i)
    }

    pub fn modulus(&self, k: usize) -> usize {
        (self.modulus)(k)
    }
}

/// The level-`depth` quotient of the base algebra: the Hausdorff quotient up
/// to that depth, exact once the chain is stationary.
pub struct HausdorffQuotient<C: CongruenceChain + 'static> {
    completion: Completion<C>,
    depth: usize,
}

/// Both sides of `η_{𝒱/𝒰} ∘ η_𝒰 = g ∘ η_𝒱` on samples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoReport {
    pub depth: usize,
    /// Fine level read for each mid level.
    pub sigma: Vec<usize>,
    pub samples: usize,
    /// `(sample, first differing level)`.
    pub mismatches: Vec<(String, usize)>,
}

impl IsoReport {
    pub fn commutes(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `(𝒲/𝒰)/(𝒱/𝒰)` against `𝒲/𝒱` along `g`, on samples of the middle
/// completion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleReport {
    pub depth: usize,
    pub samples: usize,
    /// `(sample index, level, left class, right class)`.
    pub mismatches: Vec<(usize, usize, u64, u64)>,
}

impl TripleReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl<C: CongruenceChain + 'static> Completion<C> {
    pub fn new(chain: Rc<C>) -> Self {
        let system: System = chain.clone();
        Completion { chain, system }
    }

    pub fn chain(&self) -> &Rc<C> {
        &self.chain
    }

    pub fn system(&self) -> &System {
        &self.system
    }

    pub(crate) fn same_chain(&self, other: &Completion<C>) -> bool {
        Rc::ptr_eq(&self.chain, &other.chain)
    }

    pub(crate) fn check_member(&self, x: &ProElement) -> Result<()> {
        if Rc::as_ptr(x.system()) as *const () == Rc::as_ptr(&self.chain) as *const () {
            Ok(())
        } else {
            Err(Error::ChainShape("point belongs to the completion of another chain".into()))
        }
    }

    /// `η(a)`, the point with levels `nat_k(a)`.
    pub fn eta(&self, a: Elem<C>) -> ProElement {
        let chain = self.chain.clone();
        ProElement::new(self.system.clone(), move |k| chain.nat(k, &a))
    }

    /// A point given directly by its levels; coherence is checked as levels
    /// are forced.
    pub fn from_levels(&self, levels: impl Fn(usize) -> Result<u64> + 'static) -> ProElement {
        ProElement::new(self.system.clone(), levels)
    }

    /// The basic operation `op`, computed level by level.
    pub fn apply_op(&self, op: usize, args: &[ProElement]) -> Result<ProElement> {
        let symbols = self.chain.signature().symbols();
        let (_, arity) = symbols.get(op).ok_or_else(|| Error::UnknownSymbol(format!("#{op}")))?;
        if args.len() != *arity {
            return Err(Error::Arity { expected: *arity, found: args.len() });
        }
        for x in args {
            self.check_member(x)?;
        }
        let args = args.to_vec();
        let chain = self.chain.clone();
        Ok(self.from_levels(move |k| {
            let lv = args.iter().map(|x| x.level(k)).collect::<Result<Vec<u64>>>()?;
            Ok(chain.apply(k, op, &lv))
        }))
    }

    pub fn apply_symbol(&self, name: &str, args: &[ProElement]) -> Result<ProElement> {
        let op = self.chain.signature().index_of(name).ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        self.apply_op(op, args)
    }

    /// The term operation of `t` on `args`, one level at a time. Variables
    /// beyond `args` are an arity error.
    pub fn apply_term(&self, t: &Term, args: &[ProElement]) -> Result<ProElement> {
        if t.var_bound() > args.len() {
            return Err(Error::Arity { expected: args.len(), found: t.var_bound() });
        }
        let compiled = self.chain.signature().compile(t)?;
        for x in args {
            self.check_member(x)?;
        }
        let args = args.to_vec();
        let chain = self.chain.clone();
        Ok(self.from_levels(move |k| {
            let env = args.iter().map(|x| x.level(k)).collect::<Result<Vec<u64>>>()?;
            Ok(compiled.eval(&|op, a: &[u64]| chain.apply(k, op, a), &env))
        }))
    }

    /// The least level `≤ depth` at which `x` and `y` differ.
    pub fn separation_level(&self, x: &ProElement, y: &ProElement, depth: usize) -> Result<Option<usize>> {
        self.check_member(x)?;
        self.check_member(y)?;
        for k in 0..=depth {
            if x.level(k)? != y.level(k)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// Agreement on levels `0..=depth`. Exact equality is not decidable.
    pub fn approx_eq(&self, x: &ProElement, y: &ProElement, depth: usize) -> Result<bool> {
        Ok(self.separation_level(x, y, depth)?.is_none())
    }

    /// First level `≤ depth` where `η(op(args))` and `op(η(args))` differ.
    pub fn eta_homomorphism_defect(&self, op: usize, args: &[Elem<C>], depth: usize) -> Result<Option<usize>> {
        let lhs = self.eta(self.chain.algebra().apply(op, args));
        let etas: Vec<ProElement> = args.iter().cloned().map(|a| self.eta(a)).collect();
        let rhs = self.apply_op(op, &etas)?;
        self.separation_level(&lhs, &rhs, depth)
    }

    pub fn hausdorff_quotient(&self, depth: usize) -> Result<HausdorffQuotient<C>> {
        self.chain.check_depth(depth)?;
        Ok(HausdorffQuotient { completion: self.clone(), depth })
    }

    /// The limit of a Cauchy sequence: `c_k = nat_k(s_{modulus(k)})`.
    ///
    /// Each level also checks the next `window` terms against the modulus,
    /// and levels `0..=depth` are forced before returning so that violations
    /// surface here.
    pub fn cauchy_to_pro(&self, seq: &CauchySequence<Elem<C>>, window: usize, depth: usize) -> Result<ProElement> {
        let chain = self.chain.clone();
        let seq = seq.clone();
        let x = self.from_levels(move |k| {
            let i = seq.modulus(k);
            let class_i = chain.nat(k, &seq.term(i)?)?;
            for j in i + 1..=i + window {
                let class_j = chain.nat(k, &seq.term(j)?)?;
                if class_j != class_i {
                    return Err(Error::ModulusViolation { level: k, i, j, class_i, class_j });
                }
            }
            Ok(class_i)
        });
        x.level(depth)?;
        Ok(x)
    }

    /// A Cauchy sequence converging to `x`: `s_i = lift(i, x_i)`, with
    /// modulus `k ↦ k`.
    pub fn pro_to_cauchy(&self, x: &ProElement) -> Result<CauchySequence<Elem<C>>> {
        self.check_member(x)?;
        let chain = self.chain.clone();
        let x = x.clone();
        Ok(CauchySequence::new(move |i| Ok(chain.lift(i, x.level(i)?)), |k| k))
    }

    /// First level `≤ depth` at which the two sequences are not eventually
    /// in one class, judged on `window + 1` terms past both moduli.
    pub fn sequences_separation(
        &self,
        s: &CauchySequence<Elem<C>>,
        t: &CauchySequence<Elem<C>>,
        window: usize,
        depth: usize,
    ) -> Result<Option<usize>> {
        self.chain.check_depth(depth)?;
        for k in 0..=depth {
            let start = s.modulus(k).max(t.modulus(k));
            for i in start..=start + window {
                if self.chain.nat(k, &s.term(i)?)? != self.chain.nat(k, &t.term(i)?)? {
                    return Ok(Some(k));
                }
            }
        }
        Ok(None)
    }

    /// `𝒱/𝒰` for a coarser chain `𝒱`, valid on levels `0..=depth`.
    pub fn quotient_uniformity(&self, coarse: Rc<C>, depth: usize) -> Result<QuotientChain<C>> {
        QuotientChain::new(self.clone(), coarse, depth)
    }

    /// Compares `η_{𝒱/𝒰}(η_𝒰(a))` with `g(η_𝒱(a))` on levels `0..=depth`,
    /// where `g` maps a point of the `𝒱`-completion to the point of the
    /// completion of `𝒱/𝒰` with the same levels.
    pub fn iterated_completion_iso(&self, mid: Rc<C>, depth: usize, samples: &[Elem<C>]) -> Result<IsoReport> {
        let q = Rc::new(self.quotient_uniformity(mid.clone(), depth)?);
        let sigma = (0..=depth).map(|k| q.sigma(k)).collect();
        let outer = Completion::new(q);
        let inner = Completion::new(mid);
        let mut mismatches = Vec::new();
        for a in samples {
            let lhs = outer.eta(self.eta(a.clone()));
            let rhs = outer.g(&inner.eta(a.clone()))?;
            if let Some(k) = outer.separation_level(&lhs, &rhs, depth)? {
                mismatches.push((format!("{a:?}"), k));
            }
        }
        Ok(IsoReport { depth, sigma, samples: samples.len(), mismatches })
    }

    /// For `𝒰 ⊆ 𝒱 ⊆ 𝒲` (this chain, `mid`, `coarse`): the classes of
    /// `g(z)` under `(𝒲/𝒰)/(𝒱/𝒰)` against those of `z` under `𝒲/𝒱`, for
    /// points `z` of the `𝒱`-completion.
    pub fn nested_quotient_check(
        &self,
        mid: Rc<C>,
        coarse: Rc<C>,
        depth: usize,
        samples: &[ProElement],
    ) -> Result<TripleReport> {
        let v_over_u = Completion::new(Rc::new(self.quotient_uniformity(mid.clone(), depth)?));
        let w_over_u = Rc::new(self.quotient_uniformity(coarse.clone(), depth)?);
        let nested = v_over_u.quotient_uniformity(w_over_u, depth)?;
        let w_over_v = Completion::new(mid).quotient_uniformity(coarse, depth)?;
        let mut mismatches = Vec::new();
        for (i, z) in samples.iter().enumerate() {
            let gz = v_over_u.g(z)?;
            for k in 0..=depth {
                let (l, r) = (nested.nat(k, &gz)?, w_over_v.nat(k, z)?);
                if l != r {
                    mismatches.push((i, k, l, r));
                }
            }
        }
        Ok(TripleReport { depth, samples: samples.len(), mismatches })
    }
}

impl<D: CongruenceChain + 'static> Completion<QuotientChain<D>> {
    /// The level identity from the completion of the coarse chain of `𝒱/𝒰`
    /// onto the completion of `𝒱/𝒰`.
    pub fn g(&self, z: &ProElement) -> Result<ProElement> {
        let coarse = self.chain.coarse();
        if Rc::as_ptr(z.system()) as *const () != Rc::as_ptr(coarse) as *const () {
            return Err(Error::ChainShape("g expects a point of the coarse chain's completion".into()));
        }
        let z = z.clone();
        Ok(self.from_levels(move |k| z.level(k)))
    }
}

impl<C: CongruenceChain + 'static> HausdorffQuotient<C> {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn size(&self) -> u64 {
        self.completion.chain.level_size(self.depth)
    }

    pub fn class_of(&self, a: &Elem<C>) -> Result<u64> {
        self.completion.chain.nat(self.depth, a)
    }

    /// `nat_k(a) = nat_k(b)` for every `k ≤ depth`.
    pub fn related(&self, a: &Elem<C>, b: &Elem<C>) -> Result<bool> {
        let chain = &self.completion.chain;
        for k in 0..=self.depth {
            if chain.nat(k, a)? != chain.nat(k, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The kernel restricted to `elements`, as a relation on their indices.
    pub fn kernel_on(&self, elements: &[Elem<C>]) -> Result<Relation> {
        let carrier = Carrier::new(elements.len())?;
        let classes = elements.iter().map(|a| self.class_of(a)).collect::<Result<Vec<u64>>>()?;
        let mut r = Relation::empty(carrier);
        for (i, ci) in classes.iter().enumerate() {
            for (j, cj) in classes.iter().enumerate() {
                if ci == cj {
                    r.insert(i, j)?;
                }
            }
        }
        Ok(r)
    }

    /// `Q_depth` as a finite algebra, refused above `cap` elements.
    pub fn algebra(&self, cap: usize) -> Result<FiniteAlgebra> {
        let size = self.size();
        if size > cap as u64 {
            return Err(Error::CapExceeded { what: "quotient", size: size as usize, cap });
        }
        let n = size as usize;
        let chain = &self.completion.chain;
        let sig = chain.signature().clone();
        let tables = sig
            .symbols()
            .iter()
            .enumerate()
            .map(|(op, (_, arity))| {
                OpTable::from_fn(n, *arity, |args| {
                    let args: Vec<u64> = args.iter().map(|&a| a as u64).collect();
                    chain.apply(self.depth, op, &args) as usize
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteAlgebra::new(Carrier::new(n)?, sig, tables)
    }
}
