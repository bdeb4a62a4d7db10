//! Congruential uniformities with a countable base, and their completions as
//! inverse limits of finite quotients.
//!
//! A chain `α₀ ⊇ α₁ ⊇ …` of congruences on an algebra `A` is given level by
//! level: a finite quotient `Q_k = A/α_k` with elements `0..|Q_k|`, the class
//! map `nat_k: A → Q_k`, and connecting surjections `π_k: Q_{k+1} → Q_k`
//! with `π_k ∘ nat_{k+1} = nat_k`. The completion is the inverse limit of the
//! `Q_k`; its elements are coherent sequences, evaluated lazily.
//!
//! Cauchy sequences stand in for Cauchy nets: with a countable base every
//! Cauchy net is equivalent to one indexed by the base, so a sequence with an
//! explicit modulus (`level ↦ index`) carries the same information.

use alloc::rc::Rc;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{FiniteAlgebra, Signature};
use crate::error::{Error, Result};

mod chains;
mod completion;
mod element;
mod quotient;

pub use chains::{Integers, ModulusChain, TableChain};
pub use completion::{CauchySequence, Completion, HausdorffQuotient, IsoReport, TripleReport};
pub use element::ProElement;
pub use quotient::{QuotientChain, REINDEX_SEARCH};

/// An algebra whose elements can be represented and whose operations can be
/// evaluated exactly.
pub trait EffectiveAlgebra {
    type Elem: Clone + fmt::Debug + 'static;
    fn signature(&self) -> &Signature;
    /// `op` indexes the signature. Arguments must be represented elements.
    fn apply(&self, op: usize, args: &[Self::Elem]) -> Self::Elem;
}

impl EffectiveAlgebra for FiniteAlgebra {
    type Elem = usize;

    fn signature(&self) -> &Signature {
        FiniteAlgebra::signature(self)
    }

    fn apply(&self, op: usize, args: &[usize]) -> usize {
        self.tables()[op].apply(args)
    }
}

/// Finite levels `Q_k` joined by connecting maps `π_k: Q_{k+1} → Q_k`.
///
/// `apply` and `connect` may panic on levels beyond [`max_level`] or
/// elements outside `0..level_size(k)`; [`ProElement`] checks depth before
/// calling them.
///
/// [`max_level`]: InverseSystem::max_level
pub trait InverseSystem {
    fn signature(&self) -> &Signature;
    /// Highest representable level, or `None` if unbounded.
    fn max_level(&self) -> Option<usize>;
    fn level_size(&self, k: usize) -> u64;
    fn apply(&self, k: usize, op: usize, args: &[u64]) -> u64;
    /// `π_k: Q_{k+1} → Q_k`.
    fn connect(&self, k: usize, x: u64) -> u64;

    /// `π_k ∘ … ∘ π_{j-1}: Q_j → Q_k` for `k ≤ j`.
    fn project(&self, j: usize, k: usize, mut x: u64) -> u64 {
        debug_assert!(k <= j);
        for i in (k..j).rev() {
            x = self.connect(i, x);
        }
        x
    }

    fn check_depth(&self, depth: usize) -> Result<()> {
        match self.max_level() {
            Some(cap) if depth > cap => Err(Error::DepthExceeded { depth, cap }),
            _ => Ok(()),
        }
    }
}

/// An inverse system realized as quotients of an effective algebra.
pub trait CongruenceChain: InverseSystem {
    type Algebra: EffectiveAlgebra;
    fn algebra(&self) -> &Self::Algebra;
    /// Fails only when the element itself cannot be evaluated, as for an
    /// incoherent point of a completion.
    fn nat(&self, k: usize, a: &<Self::Algebra as EffectiveAlgebra>::Elem) -> Result<u64>;
    /// Some element of the class; `nat(k, lift(k, c)) = c`.
    fn lift(&self, k: usize, class: u64) -> <Self::Algebra as EffectiveAlgebra>::Elem;
    /// `ker nat_j ⊆ ker coarse.nat_k`.
    fn refines(&self, j: usize, coarse: &Self, k: usize) -> bool;
}

/// Exhaustive homomorphism and surjectivity check of every connecting map up
/// to `depth`, for levels of at most `budget` elements.
pub fn check_connecting_maps(sys: &dyn InverseSystem, depth: usize, budget: u64) -> Result<()> {
    sys.check_depth(depth)?;
    for k in 0..depth {
        let (lo, hi) = (sys.level_size(k), sys.level_size(k + 1));
        if hi > budget {
            return Err(Error::CapExceeded { what: "level", size: hi as usize, cap: budget as usize });
        }
        let mut hit = alloc::vec![false; lo as usize];
        for x in 0..hi {
            hit[sys.connect(k, x) as usize] = true;
        }
        if hit.iter().any(|h| !h) {
            return Err(Error::ChainShape(alloc::format!("connecting map {k} is not onto")));
        }
        for (op, (_, arity)) in sys.signature().symbols().iter().enumerate() {
            for args in crate::table::Tuples::new(hi as usize, *arity) {
                let args: Vec<u64> = args.into_iter().map(|a| a as u64).collect();
                let down: Vec<u64> = args.iter().map(|&a| sys.connect(k, a)).collect();
                if sys.connect(k, sys.apply(k + 1, op, &args)) != sys.apply(k, op, &down) {
                    return Err(Error::NotHomomorphism {
                        level: k,
                        detail: alloc::format!(
                            "connecting map fails on `{}` at {args:?}",
                            sys.signature().symbols()[op].0
                        ),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Shorthand for a type-erased system.
pub type System = Rc<dyn InverseSystem>;
