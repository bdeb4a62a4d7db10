//! Finite lattices of uniformities, stored as index tables.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::filter::PrincipalFilter;
use crate::relation::{Carrier, Relation};

/// All equivalence relations on `carrier`, one per restricted growth string,
/// in lexicographic order of the strings.
pub fn equivalences(carrier: Carrier) -> Vec<Relation> {
    let n = carrier.size();
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    let mut maxes = vec![0usize; n];
    loop {
        out.push(Relation::kernel_of(carrier, |x| labels[x]));
        // Advance the rightmost position that may still grow.
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            if labels[i] <= maxes[i - 1] {
                labels[i] += 1;
                maxes[i] = maxes[i - 1].max(labels[i]);
                for j in i + 1..n {
                    labels[j] = 0;
                    maxes[j] = maxes[i];
                }
                break;
            }
        }
    }
}

/// A finite lattice of uniformities on one carrier, closed under
/// [`PrincipalFilter::meet`] and [`PrincipalFilter::join`].
///
/// Elements are sorted by generator size, then generator bits, so index 0 is
/// the bottom and the last index the top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformityLattice {
    elements: Vec<PrincipalFilter>,
    meet: Vec<usize>,
    join: Vec<usize>,
}

impl UniformityLattice {
    pub fn new(mut elements: Vec<PrincipalFilter>) -> Result<Self> {
        let first = elements.first().ok_or(Error::EmptyBase)?.carrier();
        for e in &elements {
            if e.carrier() != first {
                return Err(Error::CarrierMismatch { left: first.size(), right: e.carrier().size() });
            }
            if !e.is_uniformity() {
                return Err(Error::NotUniformity);
            }
        }
        elements.sort_by(|a, b| a.generator().len().cmp(&b.generator().len()).then_with(|| a.cmp(b)));
        elements.dedup();
        let k = elements.len();
        let find = |f: &PrincipalFilter| {
            elements.binary_search_by(|e| e.generator().len().cmp(&f.generator().len()).then_with(|| e.cmp(f)))
        };
        let mut meet = vec![0; k * k];
        let mut join = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                let pair = [elements[i].clone(), elements[j].clone()];
                meet[i * k + j] = find(&PrincipalFilter::meet(&pair)?).map_err(|_| Error::NotClosed("meet"))?;
                join[i * k + j] = find(&PrincipalFilter::join(&pair)?).map_err(|_| Error::NotClosed("join"))?;
            }
        }
        Ok(UniformityLattice { elements, meet, join })
    }

    /// `Unif S` for a finite set: every equivalence relation as a generator.
    pub fn all_uniformities(carrier: Carrier) -> Result<Self> {
        Self::new(equivalences(carrier).into_iter().map(PrincipalFilter::principal).collect())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[PrincipalFilter] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &PrincipalFilter {
        &self.elements[i]
    }

    pub fn index_of(&self, f: &PrincipalFilter) -> Option<usize> {
        self.elements.iter().position(|e| e == f)
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.len() + j]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.len() + j]
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.elements[i].le(&self.elements[j])
    }

    /// Pairs `(i, j)` with `i < j` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let k = self.len();
        let mut out = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i != j && self.le(i, j) && !(0..k).any(|m| m != i && m != j && self.le(i, m) && self.le(m, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// First triple `(a, b, c)` with `a ≤ c` and `a ∨ (b ∧ c) ≠ (a ∨ b) ∧ c`.
    pub fn modular_violation(&self) -> Option<(usize, usize, usize)> {
        self.first_triple(|a, b, c| !self.le(a, c) || self.join(a, self.meet(b, c)) == self.meet(self.join(a, b), c))
    }

    /// First triple with `a ∧ (b ∨ c) ≠ (a ∧ b) ∨ (a ∧ c)`.
    pub fn distributive_violation(&self) -> Option<(usize, usize, usize)> {
        self.first_triple(|a, b, c| self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c)))
    }

    pub fn is_modular(&self) -> bool {
        self.modular_violation().is_none()
    }

    pub fn is_distributive(&self) -> bool {
        self.distributive_violation().is_none()
    }

    /// First triple of indices failing `law`, in lexicographic order.
    pub fn first_triple(&self, law: impl Fn(usize, usize, usize) -> bool) -> Option<(usize, usize, usize)> {
        let k = self.len();
        (0..k).flat_map(|a| (0..k).flat_map(move |b| (0..k).map(move |c| (a, b, c)))).find(|&(a, b, c)| !law(a, b, c))
    }
}
