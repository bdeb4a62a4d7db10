//! Dense/embedding factorization of homomorphisms between inverse limits of
//! finite algebras, checked level by level.
//!
//! A homomorphism of completions is given by level maps `f_k: S_{σ(k)} → T_k`
//! that commute with the connecting maps. It has dense image when every
//! `f_k` is onto: a basic open set of the target fixes one level, and an
//! onto `f_k` meets it. It is an embedding when every `f_k` is one-one: then
//! the pulled-back level kernels are the source's own levels reindexed, so
//! the source uniformity is the inverse image of the target's.
//!
//! Every check runs on levels `0..=depth` and enumerates whole levels, so
//! each takes a `budget` on the number of elements or argument tuples it may
//! visit.

use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Signature;
use crate::error::{Error, Result};
use crate::prochain::{CongruenceChain, InverseSystem, ModulusChain, ProElement, System, REINDEX_SEARCH};
use crate::table::Tuples;

/// A monotone unbounded map from target levels to source levels: the
/// listed prefix, then `k ↦ k + offset`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Reindex {
    prefix: Vec<usize>,
    offset: usize,
}

impl Reindex {
    pub fn identity() -> Self {
        Reindex::default()
    }

    pub fn shift(offset: usize) -> Self {
        Reindex { prefix: Vec::new(), offset }
    }

    pub fn table(prefix: Vec<usize>, offset: usize) -> Result<Self> {
        if prefix.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Reindex(format!("{prefix:?} is not monotone")));
        }
        if let Some(&last) = prefix.last() {
            if last > prefix.len() + offset {
                return Err(Error::Reindex(format!(
                    "prefix ends at {last}, above the tail value {}",
                    prefix.len() + offset
                )));
            }
        }
        Ok(Reindex { prefix, offset })
    }

    pub fn at(&self, k: usize) -> usize {
        self.prefix.get(k).copied().unwrap_or(k + self.offset)
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    /// `k ↦ self(outer(k))`.
    pub fn after(&self, outer: &Reindex) -> Reindex {
        let len = outer.prefix.len().max(self.prefix.len().saturating_sub(outer.offset));
        Reindex { prefix: (0..len).map(|k| self.at(outer.at(k))).collect(), offset: self.offset + outer.offset }
    }
}

type LevelMap = Rc<dyn Fn(usize, u64) -> Result<u64>>;

/// A homomorphism between inverse limits, given by level maps along a
/// reindexing.
#[derive(Clone)]
pub struct ChainHom {
    source: System,
    target: System,
    reindex: Reindex,
    map: LevelMap,
}

impl core::fmt::Debug for ChainHom {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ChainHom").field("reindex", &self.reindex).finish_non_exhaustive()
    }
}

fn same_system(a: &System, b: &System) -> bool {
    Rc::as_ptr(a) as *const () == Rc::as_ptr(b) as *const ()
}

fn level_size(sys: &dyn InverseSystem, k: usize, budget: u64) -> Result<u64> {
    sys.check_depth(k)?;
    let n = sys.level_size(k);
    if n > budget {
        return Err(Error::CapExceeded { what: "level", size: n as usize, cap: budget as usize });
    }
    Ok(n)
}

fn check_signatures(a: &Signature, b: &Signature) -> Result<()> {
    if a != b {
        return Err(Error::ChainShape("source and target have different signatures".into()));
    }
    Ok(())
}

impl ChainHom {
    /// `map(k, x)` is `f_k(x)` for `x` in source level `σ(k)`. Nothing is
    /// checked beyond signatures until [`ChainHom::check`].
    pub fn new(
        source: System,
        target: System,
        reindex: Reindex,
        map: impl Fn(usize, u64) -> Result<u64> + 'static,
    ) -> Result<Self> {
        check_signatures(source.signature(), target.signature())?;
        Ok(ChainHom { source, target, reindex, map: Rc::new(map) })
    }

    pub fn identity(sys: System) -> Self {
        ChainHom { source: sys.clone(), target: sys, reindex: Reindex::identity(), map: Rc::new(|_, x| Ok(x)) }
    }

    /// Level `k` uses `tables[k]`, and the last table past the end.
    pub fn from_tables(source: System, target: System, reindex: Reindex, tables: Vec<Vec<u64>>) -> Result<Self> {
        if tables.is_empty() {
            return Err(Error::ChainShape("no level tables".into()));
        }
        ChainHom::new(source, target, reindex, move |k, x| {
            let t = &tables[k.min(tables.len() - 1)];
            t.get(x as usize).copied().ok_or(Error::ElementOutOfRange { element: x as usize, size: t.len() })
        })
    }

    /// `x ↦ c·x` between residue chains.
    pub fn scale(source: Rc<ModulusChain>, target: Rc<ModulusChain>, c: u64, reindex: Reindex) -> Result<Self> {
        let t = target.clone();
        ChainHom::new(source, target, reindex, move |k, x| {
            let m = t.modulus(k) as u128;
            Ok((c as u128 % m * (x as u128 % m) % m) as u64)
        })
    }

    /// The canonical arrow from the completion of `base` onto that of a
    /// coarser chain, valid on levels `0..=depth`. Level `k` reads base
    /// level `max(k, j)` for the least `j` refining coarse level `k`.
    pub fn canonical<C: CongruenceChain + 'static>(base: Rc<C>, coarse: Rc<C>, depth: usize) -> Result<Self> {
        let sigma = refining_levels(&*base, &*coarse, depth)?;
        let prefix: Vec<usize> = sigma.iter().enumerate().map(|(k, &j)| j.max(k)).collect();
        let offset = prefix[depth] - depth;
        let reindex = Reindex::table(prefix, offset)?;
        let (b, c) = (base.clone(), coarse.clone());
        let r = reindex.clone();
        ChainHom::new(base, coarse, reindex, move |k, x| {
            if k > depth {
                return Err(Error::DepthExceeded { depth: k, cap: depth });
            }
            c.nat(k, &b.lift(r.at(k), x))
        })
    }

    pub fn source(&self) -> &System {
        &self.source
    }

    pub fn target(&self) -> &System {
        &self.target
    }

    pub fn reindex(&self) -> &Reindex {
        &self.reindex
    }

    pub fn sigma(&self, k: usize) -> usize {
        self.reindex.at(k)
    }

    /// `f_k(x)`.
    pub fn level(&self, k: usize, x: u64) -> Result<u64> {
        (self.map)(k, x)
    }

    /// Range, homomorphism and commutation checks on levels `0..=depth`.
    pub fn check(&self, depth: usize, budget: u64) -> Result<()> {
        self.target.check_depth(depth)?;
        let sig = self.source.signature();
        for k in 0..=depth {
            let s = self.sigma(k);
            let n = level_size(&*self.source, s, budget)?;
            let m = self.target.level_size(k);
            let image = (0..n).map(|x| self.level(k, x)).collect::<Result<Vec<u64>>>()?;
            if let Some(x) = image.iter().position(|&y| y >= m) {
                return Err(Error::NotHomomorphism {
                    level: k,
                    detail: format!("f({x}) = {} lies outside a level of size {m}", image[x]),
                });
            }
            for (op, (name, arity)) in sig.symbols().iter().enumerate() {
                let tuples = (n as u128).pow(*arity as u32);
                if tuples > budget as u128 {
                    return Err(Error::CapExceeded {
                        what: "argument tuples",
                        size: tuples as usize,
                        cap: budget as usize,
                    });
                }
                for args in Tuples::new(n as usize, *arity) {
                    let args: Vec<u64> = args.into_iter().map(|a| a as u64).collect();
                    let images: Vec<u64> = args.iter().map(|&a| image[a as usize]).collect();
                    let lhs = image[self.source.apply(s, op, &args) as usize];
                    let rhs = self.target.apply(k, op, &images);
                    if lhs != rhs {
                        return Err(Error::NotHomomorphism {
                            level: k,
                            detail: format!("`{name}` at {args:?}: {lhs} ≠ {rhs}"),
                        });
                    }
                }
            }
            if k > 0 {
                let lo = self.sigma(k - 1);
                for x in 0..n {
                    let up = self.target.connect(k - 1, image[x as usize]);
                    if up != self.level(k - 1, self.source.project(s, lo, x))? {
                        return Err(Error::Commutation { level: k - 1, element: x });
                    }
                }
            }
        }
        Ok(())
    }

    /// The image of a point: `y_k = f_k(x_{σ(k)})`.
    pub fn apply(&self, x: &ProElement) -> Result<ProElement> {
        if !same_system(x.system(), &self.source) {
            return Err(Error::ChainShape("point does not belong to the source".into()));
        }
        let h = self.clone();
        let x = x.clone();
        Ok(ProElement::new(self.target.clone(), move |k| h.level(k, x.level(h.sigma(k))?)))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ChainHom) -> Result<ChainHom> {
        if !same_system(&self.target, &next.source) {
            return Err(Error::ChainShape("composite of arrows that do not meet".into()));
        }
        let (f, g) = (self.clone(), next.clone());
        let reindex = self.reindex.after(&next.reindex);
        ChainHom::new(self.source.clone(), next.target.clone(), reindex, move |k, x| {
            let j = g.sigma(k);
            g.level(k, f.level(j, x)?)
        })
    }

    /// First level `≤ depth` whose map is not onto, with a missed element.
    pub fn first_non_onto(&self, depth: usize, budget: u64) -> Result<Option<(usize, u64)>> {
        for k in 0..=depth {
            let n = level_size(&*self.source, self.sigma(k), budget)?;
            let m = level_size(&*self.target, k, budget)?;
            let mut hit = vec![false; m as usize];
            for x in 0..n {
                hit[self.level(k, x)? as usize] = true;
            }
            if let Some(y) = hit.iter().position(|h| !h) {
                return Ok(Some((k, y as u64)));
            }
        }
        Ok(None)
    }

    /// First level `≤ depth` whose map is not one-one, with the shared value.
    pub fn first_non_injective(&self, depth: usize, budget: u64) -> Result<Option<(usize, u64)>> {
        for k in 0..=depth {
            let n = level_size(&*self.source, self.sigma(k), budget)?;
            let m = level_size(&*self.target, k, budget)?;
            let mut hit = vec![false; m as usize];
            for x in 0..n {
                let y = self.level(k, x)?;
                if core::mem::replace(&mut hit[y as usize], true) {
                    return Ok(Some((k, y)));
                }
            }
        }
        Ok(None)
    }

    /// In `𝐄`: every level map onto, on levels `0..=depth`.
    pub fn is_dense(&self, depth: usize, budget: u64) -> Result<bool> {
        Ok(self.first_non_onto(depth, budget)?.is_none())
    }

    /// In `𝐌`: every level map one-one, on levels `0..=depth`.
    pub fn is_embedding(&self, depth: usize, budget: u64) -> Result<bool> {
        Ok(self.first_non_injective(depth, budget)?.is_none())
    }

    /// First `(k, x)` where the two arrows differ as maps of limits, `x`
    /// taken in the source at level `max(σ(k), σ'(k))`.
    pub fn first_difference(&self, other: &ChainHom, depth: usize, budget: u64) -> Result<Option<(usize, u64)>> {
        if !same_system(&self.source, &other.source) || !same_system(&self.target, &other.target) {
            return Err(Error::ChainShape("compared arrows have different ends".into()));
        }
        for k in 0..=depth {
            let (a, b) = (self.sigma(k), other.sigma(k));
            let s = a.max(b);
            for x in 0..level_size(&*self.source, s, budget)? {
                if self.level(k, self.source.project(s, a, x))? != other.level(k, self.source.project(s, b, x))? {
                    return Ok(Some((k, x)));
                }
            }
        }
        Ok(None)
    }

    /// A level `≤ depth` element of the source whose image agrees with `y`
    /// on levels `0..=depth`, when one exists.
    pub fn approximate(&self, y: &ProElement, depth: usize, budget: u64) -> Result<Option<u64>> {
        let target = y.level(depth)?;
        for x in 0..level_size(&*self.source, self.sigma(depth), budget)? {
            if self.level(depth, x)? == target {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}

/// Least base level refining each coarse level `0..=depth`.
fn refining_levels<C: CongruenceChain>(base: &C, coarse: &C, depth: usize) -> Result<Vec<usize>> {
    coarse.check_depth(depth)?;
    let mut out = Vec::with_capacity(depth + 1);
    let mut j = 0;
    for k in 0..=depth {
        while !base.refines(j, coarse, k) {
            j += 1;
            if j > k + REINDEX_SEARCH || base.check_depth(j).is_err() {
                return Err(Error::NotCoarser { level: k });
            }
        }
        out.push(j);
    }
    Ok(out)
}

/// Levels `0..=depth` of a system restricted to subsets closed under the
/// operations and connecting maps. Element `i` of level `k` stands for the
/// `i`-th smallest member of the subset.
pub struct SubSystem {
    parent: System,
    elements: Vec<Vec<u64>>,
}

impl SubSystem {
    /// Level-wise images of a checked homomorphism.
    pub fn image(f: &ChainHom, depth: usize, budget: u64) -> Result<Self> {
        let mut elements = Vec::with_capacity(depth + 1);
        for k in 0..=depth {
            let n = level_size(&*f.source, f.sigma(k), budget)?;
            let mut img = (0..n).map(|x| f.level(k, x)).collect::<Result<Vec<u64>>>()?;
            img.sort_unstable();
            img.dedup();
            elements.push(img);
        }
        Ok(SubSystem { parent: f.target.clone(), elements })
    }

    pub fn parent(&self) -> &System {
        &self.parent
    }

    pub fn elements(&self, k: usize) -> &[u64] {
        &self.elements[k]
    }

    pub fn index_of(&self, k: usize, y: u64) -> Option<u64> {
        self.elements[k].binary_search(&y).ok().map(|i| i as u64)
    }

    fn index(&self, k: usize, y: u64) -> u64 {
        self.index_of(k, y).expect("subsystem is not closed")
    }
}

impl InverseSystem for SubSystem {
    fn signature(&self) -> &Signature {
        self.parent.signature()
    }

    fn max_level(&self) -> Option<usize> {
        Some(self.elements.len() - 1)
    }

    fn level_size(&self, k: usize) -> u64 {
        self.elements[k].len() as u64
    }

    fn apply(&self, k: usize, op: usize, args: &[u64]) -> u64 {
        let args: Vec<u64> = args.iter().map(|&i| self.elements[k][i as usize]).collect();
        self.index(k, self.parent.apply(k, op, &args))
    }

    fn connect(&self, k: usize, x: u64) -> u64 {
        self.index(k, self.parent.connect(k, self.elements[k + 1][x as usize]))
    }
}

/// `f = m ∘ e` with `e` dense and `m` an embedding, through the level-wise
/// image of `f`.
pub struct Factorization {
    pub middle: Rc<SubSystem>,
    pub e: ChainHom,
    pub m: ChainHom,
    pub depth: usize,
}

pub fn factor(f: &ChainHom, depth: usize, budget: u64) -> Result<Factorization> {
    f.check(depth, budget)?;
    let middle = Rc::new(SubSystem::image(f, depth, budget)?);
    let mid: System = middle.clone();
    let (g, img) = (f.clone(), middle.clone());
    let e = ChainHom::new(f.source.clone(), mid.clone(), f.reindex.clone(), move |k, x| {
        let y = g.level(k, x)?;
        img.index_of(k, y).ok_or(Error::NoLift { level: k, element: y })
    })?;
    let img = middle.clone();
    let m = ChainHom::new(mid, f.target.clone(), Reindex::identity(), move |k, i| {
        let level = &img.elements[k];
        level.get(i as usize).copied().ok_or(Error::ElementOutOfRange { element: i as usize, size: level.len() })
    })?;
    Ok(Factorization { middle, e, m, depth })
}

/// The arrow `δ` with `δ ∘ e = top` on levels `0..=depth`, for a dense `e`
/// and `top` sharing its source.
///
/// Level `k` of `δ` reads level `τ(k)` of `e`'s target, the least level
/// (at least `τ(k-1)`, at most `depth`) on whose classes `top_k` is
/// constant along the fibres of `e`. Fails with the first clash when no
/// such level exists.
pub fn extend_along(e: &ChainHom, top: &ChainHom, depth: usize, budget: u64) -> Result<ChainHom> {
    if !same_system(&e.source, &top.source) {
        return Err(Error::ChainShape("arrows do not share a source".into()));
    }
    let mut tau = Vec::with_capacity(depth + 1);
    let mut tables: Vec<Vec<u64>> = Vec::with_capacity(depth + 1);
    let mut j = 0;
    for k in 0..=depth {
        let mut clash = None;
        loop {
            match fibre_table(e, top, j, k, budget)? {
                Ok(t) => {
                    tau.push(j);
                    tables.push(t);
                    break;
                }
                Err(y) => clash = clash.or(Some(y)),
            }
            j += 1;
            if j > depth || e.target.check_depth(j).is_err() {
                return Err(Error::NoLift { level: k, element: clash.unwrap() });
            }
        }
    }
    let offset = tau[depth].saturating_sub(depth);
    let reindex = Reindex::table(tau, offset)?;
    ChainHom::new(e.target.clone(), top.target.clone(), reindex, move |k, y| {
        let t = tables.get(k).ok_or(Error::DepthExceeded { depth: k, cap: depth })?;
        t.get(y as usize).copied().ok_or(Error::ElementOutOfRange { element: y as usize, size: t.len() })
    })
}

/// `top_k` as a function of `e_j`, or the first `e_j`-class where it is not
/// one (or that `e_j` misses).
fn fibre_table(
    e: &ChainHom,
    top: &ChainHom,
    j: usize,
    k: usize,
    budget: u64,
) -> Result<core::result::Result<Vec<u64>, u64>> {
    let (a, b) = (e.sigma(j), top.sigma(k));
    let s = a.max(b);
    let n = level_size(&*e.source, s, budget)?;
    let size = level_size(&*e.target, j, budget)?;
    let mut table = vec![u64::MAX; size as usize];
    for x in 0..n {
        let y = e.level(j, e.source.project(s, a, x))?;
        let v = top.level(k, top.source.project(s, b, x))?;
        let slot = &mut table[y as usize];
        if *slot == u64::MAX {
            *slot = v;
        } else if *slot != v {
            return Ok(Err(y));
        }
    }
    Ok(match table.iter().position(|&v| v == u64::MAX) {
        Some(y) => Err(y as u64),
        None => Ok(table),
    })
}

/// The unique `δ` with `δ ∘ e = top` and `m ∘ δ = bottom` for a commuting
/// square `m ∘ top = bottom ∘ e`, with `e` dense and `m` an embedding.
pub fn diagonal_fill(
    e: &ChainHom,
    m: &ChainHom,
    top: &ChainHom,
    bottom: &ChainHom,
    depth: usize,
    budget: u64,
) -> Result<ChainHom> {
    for h in [e, m, top, bottom] {
        h.check(depth, budget)?;
    }
    if let Some((level, element)) = top.then(m)?.first_difference(&e.then(bottom)?, depth, budget)? {
        return Err(Error::Commutation { level, element });
    }
    let delta = extend_along(e, top, depth, budget)?;
    delta.check(depth, budget)?;
    for (lhs, rhs) in [(e.then(&delta)?, top), (delta.then(m)?, bottom)] {
        if let Some((level, element)) = lhs.first_difference(rhs, depth, budget)? {
            return Err(Error::Commutation { level, element });
        }
    }
    Ok(delta)
}

/// The interval order of coarsenings against the order of their quotient
/// arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalReport {
    pub depth: usize,
    pub names: Vec<String>,
    /// `interval[a][b]`: each level of `b` is refined by a level of `a`,
    /// so `𝒲_a ≤ 𝒲_b`.
    pub interval: Vec<Vec<bool>>,
    /// `quotient[a][b]`: the canonical arrow to `b` factors through the one
    /// to `a`.
    pub quotient: Vec<Vec<bool>>,
}

impl IntervalReport {
    pub fn matches(&self) -> bool {
        self.interval == self.quotient
    }

    /// Strict covers `(a, b)` of an order matrix.
    pub fn covers(order: &[Vec<bool>]) -> Vec<(usize, usize)> {
        let n = order.len();
        let lt = |a: usize, b: usize| a != b && order[a][b] && !order[b][a];
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)))
            .collect()
    }
}

/// For coarsenings `𝒲` of `base`: the canonical arrows onto their
/// completions, compared by factoring (`η_b = h ∘ η_a` for some `h`) and by
/// kernel inclusion level by level.
pub fn e_quotient_interval_check<C: CongruenceChain + 'static>(
    base: Rc<C>,
    coarsenings: &[(String, Rc<C>)],
    depth: usize,
    budget: u64,
) -> Result<IntervalReport> {
    let mut arrows = Vec::with_capacity(coarsenings.len());
    for (_, w) in coarsenings {
        let eta = ChainHom::canonical(base.clone(), w.clone(), depth)?;
        eta.check(depth, budget)?;
        if let Some((level, element)) = eta.first_non_onto(depth, budget)? {
            return Err(Error::NoLift { level, element });
        }
        arrows.push(eta);
    }
    let n = coarsenings.len();
    let mut interval = vec![vec![false; n]; n];
    let mut quotient = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            interval[a][b] = refining_levels(&*coarsenings[a].1, &*coarsenings[b].1, depth).is_ok();
            quotient[a][b] = match extend_along(&arrows[a], &arrows[b], depth, budget) {
                Ok(_) => true,
                Err(Error::NoLift { .. }) => false,
                Err(other) => return Err(other),
            };
        }
    }
    Ok(IntervalReport { depth, names: coarsenings.iter().map(|(s, _)| s.clone()).collect(), interval, quotient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prochain::Completion;

    const BUDGET: u64 = 1 << 20;

    fn powers(b: u64) -> Rc<ModulusChain> {
        Rc::new(ModulusChain::powers(b).unwrap())
    }

    fn constant(m: u64) -> Rc<ModulusChain> {
        Rc::new(ModulusChain::constant(m).unwrap())
    }

    #[test]
    fn reindex_composition() {
        let a = Reindex::table(vec![0, 0, 1], 0).unwrap();
        let b = Reindex::shift(2);
        let ab = a.after(&b);
        for k in 0..10 {
            assert_eq!(ab.at(k), a.at(b.at(k)));
            assert_eq!(b.after(&a).at(k), b.at(a.at(k)));
        }
        assert!(Reindex::table(vec![2, 1], 5).is_err());
        assert!(Reindex::table(vec![0, 9], 1).is_err());
    }

    #[test]
    fn two_adic_reduction_factors_through_z4() {
        let (src, tgt) = (powers(2), constant(4));
        let f = ChainHom::scale(src.clone(), tgt, 1, Reindex::shift(2)).unwrap();
        let fac = factor(&f, 6, BUDGET).unwrap();
        for k in 0..=6 {
            assert_eq!(fac.middle.elements(k), [0, 1, 2, 3]);
        }
        assert!(fac.e.is_dense(6, BUDGET).unwrap());
        assert!(fac.m.is_embedding(6, BUDGET).unwrap());
        assert!(fac.m.is_dense(6, BUDGET).unwrap());
        assert_eq!(fac.e.then(&fac.m).unwrap().first_difference(&f, 6, BUDGET).unwrap(), None);
    }

    #[test]
    fn tripling_has_image_zero_three() {
        let f = ChainHom::scale(constant(2), constant(6), 3, Reindex::identity()).unwrap();
        let fac = factor(&f, 3, BUDGET).unwrap();
        assert_eq!(fac.middle.elements(0), [0, 3]);
        assert!(!f.is_dense(3, BUDGET).unwrap());
        assert!(f.is_embedding(3, BUDGET).unwrap());
        assert!(fac.e.is_dense(3, BUDGET).unwrap());
        // Doubling is not additive from Z/2 to Z/6: 2·(1+1) = 0 ≠ 2 + 2.
        let bad = ChainHom::scale(constant(2), constant(6), 2, Reindex::identity()).unwrap();
        assert!(matches!(factor(&bad, 3, BUDGET), Err(Error::NotHomomorphism { .. })));
        // The constant map to 1 breaks commutation and zero.
        let one = ChainHom::new(powers(2), constant(6), Reindex::identity(), |_, _| Ok(1)).unwrap();
        assert!(matches!(one.check(2, BUDGET), Err(Error::NotHomomorphism { .. })));
    }

    #[test]
    fn isomorphisms_factor_into_isomorphisms() {
        let (a, b) = (powers(3), powers(3));
        for f in [ChainHom::identity(a.clone()), ChainHom::scale(a, b, 1, Reindex::identity()).unwrap()] {
            let fac = factor(&f, 4, BUDGET).unwrap();
            for h in [&fac.e, &fac.m] {
                assert!(h.is_dense(4, BUDGET).unwrap() && h.is_embedding(4, BUDGET).unwrap());
            }
        }
    }

    #[test]
    fn commutation_failures_are_located() {
        // The zero map at level 2 alone is a homomorphism there, but does
        // not commute with reduction to level 1.
        let c = powers(2);
        let f = ChainHom::new(c.clone(), c, Reindex::identity(), |k, x| Ok(if k == 2 { 0 } else { x })).unwrap();
        assert_eq!(f.check(3, BUDGET), Err(Error::Commutation { level: 1, element: 1 }));
    }

    struct Square {
        two_adic: Rc<ModulusChain>,
        z4: Rc<ModulusChain>,
        z12: Rc<ModulusChain>,
        e: ChainHom,
        m: ChainHom,
        top: ChainHom,
        bottom: ChainHom,
    }

    /// `e`: 2-adic reduction by one level; `m`: `x ↦ 9x` from `Z/4` into
    /// `Z/12` (9 is idempotent of order 4); `top`: reduction mod 4;
    /// `bottom`: `x ↦ 9x` mod 12.
    fn square() -> Square {
        let (a, c, z4, z12) = (powers(2), powers(2), constant(4), constant(12));
        let e = ChainHom::scale(a.clone(), c.clone(), 1, Reindex::shift(1)).unwrap();
        let m = ChainHom::scale(z4.clone(), z12.clone(), 9, Reindex::identity()).unwrap();
        let top = ChainHom::scale(a, z4.clone(), 1, Reindex::shift(2)).unwrap();
        let bottom = ChainHom::scale(c.clone(), z12.clone(), 9, Reindex::shift(2)).unwrap();
        Square { two_adic: c, z4, z12, e, m, top, bottom }
    }

    #[test]
    fn diagonal_of_the_reduction_square() {
        let sq = square();
        assert!(sq.e.is_dense(6, BUDGET).unwrap());
        assert!(sq.m.is_embedding(6, BUDGET).unwrap());
        let delta = diagonal_fill(&sq.e, &sq.m, &sq.top, &sq.bottom, 6, BUDGET).unwrap();
        let reduction = ChainHom::scale(sq.two_adic.clone(), sq.z4.clone(), 1, Reindex::shift(2)).unwrap();
        assert_eq!(delta.first_difference(&reduction, 6, BUDGET).unwrap(), None);
        assert_eq!(delta.sigma(0), 2);
    }

    #[test]
    fn fill_is_unique() {
        let sq = square();
        let delta = diagonal_fill(&sq.e, &sq.m, &sq.top, &sq.bottom, 5, BUDGET).unwrap();
        // Any arrow with δ' ∘ e = top agrees with δ, since e is onto.
        let other = ChainHom::new(sq.two_adic.clone(), sq.z4.clone(), Reindex::shift(3), |_, x| Ok(x % 4)).unwrap();
        assert_eq!(sq.e.then(&other).unwrap().first_difference(&sq.top, 5, BUDGET).unwrap(), None);
        assert_eq!(other.first_difference(&delta, 5, BUDGET).unwrap(), None);
    }

    #[test]
    fn non_commuting_square_is_refused() {
        let sq = square();
        let zero = ChainHom::scale(sq.two_adic.clone(), sq.z12.clone(), 0, Reindex::identity()).unwrap();
        assert!(matches!(diagonal_fill(&sq.e, &sq.m, &sq.top, &zero, 4, BUDGET), Err(Error::Commutation { .. })));
    }

    #[test]
    fn factorizations_are_unique_up_to_isomorphism() {
        let (src, z4, z12) = (powers(2), constant(4), constant(12));
        let f = ChainHom::scale(src.clone(), z12.clone(), 9, Reindex::shift(2)).unwrap();
        let one = factor(&f, 4, BUDGET).unwrap();
        assert_eq!(one.middle.elements(0), [0, 3, 6, 9]);
        // A second factorization through Z/4 itself.
        let e2 = ChainHom::scale(src, z4.clone(), 1, Reindex::shift(2)).unwrap();
        let m2 = ChainHom::scale(z4.clone(), z12, 9, Reindex::identity()).unwrap();
        assert_eq!(e2.then(&m2).unwrap().first_difference(&f, 4, BUDGET).unwrap(), None);
        let there = diagonal_fill(&one.e, &m2, &e2, &one.m, 4, BUDGET).unwrap();
        let back = diagonal_fill(&e2, &one.m, &one.e, &m2, 4, BUDGET).unwrap();
        let mid: System = one.middle.clone();
        assert_eq!(there.then(&back).unwrap().first_difference(&ChainHom::identity(mid), 4, BUDGET).unwrap(), None);
        assert_eq!(back.then(&there).unwrap().first_difference(&ChainHom::identity(z4), 4, BUDGET).unwrap(), None);
    }

    #[test]
    fn dense_arrows_approximate_every_point() {
        let base = powers(2);
        let c = Completion::new(base.clone());
        let e = ChainHom::scale(base.clone(), base.clone(), 1, Reindex::shift(1)).unwrap();
        let y = c.from_levels(move |k| Ok(base.digits_to_level(k, |i| (i as u64 * 7 + 3) % 5)));
        let x = e.approximate(&y, 8, BUDGET).unwrap().unwrap();
        let image = e.apply(&c.eta(x as i128)).unwrap();
        assert!(c.approx_eq(&image, &y, 8).unwrap());
    }

    #[test]
    fn coarsenings_of_the_two_adics_form_a_chain() {
        let ws = vec![("mod4".into(), constant(4)), ("mod2".into(), constant(2)), ("indiscrete".into(), constant(1))];
        let r = e_quotient_interval_check(powers(2), &ws, 4, BUDGET).unwrap();
        assert!(r.matches(), "{r:?}");
        assert_eq!(IntervalReport::covers(&r.interval), [(0, 1), (1, 2)]);
    }

    #[test]
    fn incomparable_coarsenings_form_an_antichain() {
        let ws = vec![("mod2".into(), constant(2)), ("mod3".into(), constant(3))];
        let r = e_quotient_interval_check(powers(6), &ws, 3, BUDGET).unwrap();
        assert!(r.matches());
        assert_eq!(r.interval, [[true, false], [false, true]]);
    }

    #[test]
    fn single_coarsening_is_a_point() {
        let base = powers(2);
        let r = e_quotient_interval_check(base.clone(), &[("self".into(), base)], 4, BUDGET).unwrap();
        assert_eq!(r.interval, [[true]]);
        assert!(r.matches());
    }

    #[test]
    fn finer_chains_are_not_coarsenings() {
        let r = e_quotient_interval_check(constant(4), &[("2adic".into(), powers(2))], 4, BUDGET);
        assert_eq!(r.err(), Some(Error::NotCoarser { level: 3 }));
    }
}
