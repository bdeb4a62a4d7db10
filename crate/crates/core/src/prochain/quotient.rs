use alloc::rc::Rc;
use alloc::vec::Vec;

use super::{Completion, CongruenceChain, EffectiveAlgebra, InverseSystem, ProElement};
use crate::algebra::Signature;
use crate::error::{Error, Result};

/// How many fine levels past `k` are searched for one refining coarse level
/// `k` before the coarse chain is declared not coarser.
pub const REINDEX_SEARCH: usize = 64;

/// A coarser chain `𝒱` carried over to the completion of a finer chain `𝒰`.
///
/// Level `k` identifies two points of the completion when their `𝒱`-classes
/// at level `k` agree. The class of a point is read off fine level `σ(k)`,
/// the least fine level whose kernel lies inside coarse level `k`; `σ` is
/// monotone, and is fixed for levels `0..=depth` at construction.
pub struct QuotientChain<C: CongruenceChain + 'static> {
    completion: Completion<C>,
    coarse: Rc<C>,
    sigma: Vec<usize>,
}

impl<C: CongruenceChain + 'static> QuotientChain<C> {
    pub fn new(completion: Completion<C>, coarse: Rc<C>, depth: usize) -> Result<Self> {
        coarse.check_depth(depth)?;
        let fine = completion.chain().clone();
        if fine.signature() != coarse.signature() {
            return Err(Error::ChainShape("fine and coarse chains have different signatures".into()));
        }
        let mut sigma = Vec::with_capacity(depth + 1);
        let mut j = 0;
        for k in 0..=depth {
            while !fine.refines(j, &coarse, k) {
                j += 1;
                if j > k + REINDEX_SEARCH || fine.check_depth(j).is_err() {
                    return Err(Error::NotCoarser { level: k });
                }
            }
            sigma.push(j);
        }
        Ok(QuotientChain { completion, coarse, sigma })
    }

    /// Highest level of this chain.
    pub fn depth(&self) -> usize {
        self.sigma.len() - 1
    }

    /// The fine level read for coarse level `k`.
    pub fn sigma(&self, k: usize) -> usize {
        self.sigma[k]
    }

    pub fn coarse(&self) -> &Rc<C> {
        &self.coarse
    }

    pub fn completion(&self) -> &Completion<C> {
        &self.completion
    }
}

impl<C: CongruenceChain + 'static> InverseSystem for QuotientChain<C> {
    fn signature(&self) -> &Signature {
        self.coarse.signature()
    }

    fn max_level(&self) -> Option<usize> {
        Some(self.depth())
    }

    fn level_size(&self, k: usize) -> u64 {
        self.coarse.level_size(k)
    }

    fn apply(&self, k: usize, op: usize, args: &[u64]) -> u64 {
        self.coarse.apply(k, op, args)
    }

    fn connect(&self, k: usize, x: u64) -> u64 {
        self.coarse.connect(k, x)
    }
}

impl<C: CongruenceChain + 'static> CongruenceChain for QuotientChain<C> {
    type Algebra = Completion<C>;

    fn algebra(&self) -> &Completion<C> {
        &self.completion
    }

    fn nat(&self, k: usize, x: &ProElement) -> Result<u64> {
        self.check_depth(k)?;
        self.completion.check_member(x)?;
        let j = self.sigma[k];
        let rep = self.completion.chain().lift(j, x.level(j)?);
        self.coarse.nat(k, &rep)
    }

    fn lift(&self, k: usize, class: u64) -> ProElement {
        self.completion.eta(self.coarse.lift(k, class))
    }

    fn refines(&self, j: usize, coarse: &Self, k: usize) -> bool {
        j <= self.depth()
            && k <= coarse.depth()
            && self.completion.same_chain(&coarse.completion)
            && self.coarse.refines(j, &coarse.coarse, k)
    }
}

impl<C: CongruenceChain + 'static> EffectiveAlgebra for Completion<C> {
    type Elem = ProElement;

    fn signature(&self) -> &Signature {
        self.chain().signature()
    }

    fn apply(&self, op: usize, args: &[ProElement]) -> ProElement {
        self.apply_op(op, args).expect("operation applied to elements of another chain or with the wrong arity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prochain::ModulusChain;

    fn powers(b: u64) -> Rc<ModulusChain> {
        Rc::new(ModulusChain::powers(b).unwrap())
    }

    #[test]
    fn reindexing_is_the_least_refining_level() {
        let c = Completion::new(powers(12));
        let q = QuotientChain::new(c, powers(2), 10).unwrap();
        let sigma: Vec<usize> = (0..=10).map(|k| q.sigma(k)).collect();
        // 12^j is divisible by 2^k iff 2j ≥ k.
        assert_eq!(sigma, [0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5]);
    }

    #[test]
    fn coarse_equal_to_fine_separates_as_the_original() {
        let fine = powers(2);
        let c = Completion::new(fine.clone());
        let q = QuotientChain::new(c.clone(), fine, 8).unwrap();
        for a in [-7i128, 0, 3, 11, 200] {
            let x = c.eta(a);
            for k in 0..=8 {
                assert_eq!(q.sigma(k), k);
                assert_eq!(q.nat(k, &x).unwrap(), x.level(k).unwrap());
            }
        }
    }

    #[test]
    fn mod_four_classes_of_two_adic_points() {
        let c = Completion::new(powers(2));
        let four = Rc::new(ModulusChain::constant(4).unwrap());
        let q = QuotientChain::new(c.clone(), four, 5).unwrap();
        assert_eq!(q.sigma(0), 2);
        // −1 = …1111 lies in the class of 3.
        let minus_one = c.from_levels(|k| Ok((1u64 << k) - 1));
        for k in 0..=5 {
            assert_eq!(q.nat(k, &minus_one).unwrap(), 3);
        }
        assert_eq!(q.nat(6, &minus_one), Err(Error::DepthExceeded { depth: 6, cap: 5 }));
    }

    #[test]
    fn finer_target_is_refused() {
        let c = Completion::new(powers(2));
        assert_eq!(QuotientChain::new(c, powers(3), 3).err(), Some(Error::NotCoarser { level: 1 }));
        let c = Completion::new(Rc::new(ModulusChain::constant(4).unwrap()));
        assert_eq!(QuotientChain::new(c, powers(2), 3).err(), Some(Error::NotCoarser { level: 3 }));
    }

    #[test]
    fn foreign_points_are_refused() {
        let c = Completion::new(powers(2));
        let other = Completion::new(powers(2));
        let q = QuotientChain::new(c, powers(2), 3).unwrap();
        assert!(matches!(q.nat(1, &other.eta(1)), Err(Error::ChainShape(_))));
    }
}
