//! Binary relations on a finite carrier, stored as dense bit matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::table::{OpTable, Tuples};

/// Largest carrier accepted by [`Carrier::new`].
pub const DEFAULT_CARRIER_CAP: usize = 64;

/// A finite set `{0, …, n-1}` with `n ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Carrier(usize);

impl Carrier {
    pub fn new(size: usize) -> Result<Self> {
        Self::with_cap(size, DEFAULT_CARRIER_CAP)
    }

    pub fn with_cap(size: usize, cap: usize) -> Result<Self> {
        if size == 0 || size > cap {
            return Err(Error::CarrierSize { size, cap });
        }
        Ok(Carrier(size))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn elements(self) -> core::ops::Range<usize> {
        0..self.0
    }

    fn check(self, element: usize) -> Result<()> {
        if element < self.0 {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { element, size: self.0 })
        }
    }
}

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    carrier: Carrier,
    words: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn empty(carrier: Carrier) -> Self {
        let words = carrier.size().div_ceil(WORD);
        Relation { carrier, words, bits: vec![0; words * carrier.size()] }
    }

    /// The diagonal `Δ`.
    pub fn identity(carrier: Carrier) -> Self {
        let mut r = Self::empty(carrier);
        for a in carrier.elements() {
            r.set(a, a);
        }
        r
    }

    pub fn full(carrier: Carrier) -> Self {
        let mut r = Self::empty(carrier);
        for a in carrier.elements() {
            for b in carrier.elements() {
                r.set(a, b);
            }
        }
        r
    }

    pub fn from_pairs(carrier: Carrier, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut r = Self::empty(carrier);
        for (a, b) in pairs {
            r.insert(a, b)?;
        }
        Ok(r)
    }

    /// `Δ` together with the given pairs.
    pub fn reflexive_from_pairs(carrier: Carrier, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut r = Self::from_pairs(carrier, pairs)?;
        r.union_with(&Self::identity(carrier));
        Ok(r)
    }

    /// The equivalence relation whose classes are the given blocks. Elements
    /// not mentioned form singleton classes.
    pub fn from_blocks(carrier: Carrier, blocks: &[&[usize]]) -> Result<Self> {
        let mut r = Self::identity(carrier);
        for block in blocks {
            for &a in *block {
                for &b in *block {
                    r.insert(a, b)?;
                }
            }
        }
        Ok(r)
    }

    /// The kernel `{(x, y) : label(x) = label(y)}` of a labelling.
    pub fn kernel_of(carrier: Carrier, label: impl Fn(usize) -> usize) -> Self {
        let labels: Vec<usize> = carrier.elements().map(label).collect();
        let mut r = Self::empty(carrier);
        for a in carrier.elements() {
            for b in carrier.elements() {
                if labels[a] == labels[b] {
                    r.set(a, b);
                }
            }
        }
        r
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    #[inline]
    fn row(&self, a: usize) -> &[u64] {
        &self.bits[a * self.words..(a + 1) * self.words]
    }

    #[inline]
    fn row_mut(&mut self, a: usize) -> &mut [u64] {
        let w = self.words;
        &mut self.bits[a * w..(a + 1) * w]
    }

    #[inline]
    fn set(&mut self, a: usize, b: usize) {
        self.row_mut(a)[b / WORD] |= 1u64 << (b % WORD);
    }

    /// Membership; out-of-range elements are simply not related.
    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        a < self.size() && b < self.size() && self.row(a)[b / WORD] >> (b % WORD) & 1 == 1
    }

    pub fn insert(&mut self, a: usize, b: usize) -> Result<()> {
        self.carrier.check(a)?;
        self.carrier.check(b)?;
        self.set(a, b);
        Ok(())
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        if a < self.size() && b < self.size() {
            self.row_mut(a)[b / WORD] &= !(1u64 << (b % WORD));
        }
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.size();
        (0..n).flat_map(move |a| (0..n).filter(move |&b| self.contains(a, b)).map(move |b| (a, b)))
    }

    /// Elements related to `a` on the right.
    pub fn successors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size()).filter(move |&b| self.contains(a, b))
    }

    fn same_carrier(&self, other: &Relation) -> Result<()> {
        if self.carrier == other.carrier {
            Ok(())
        } else {
            Err(Error::CarrierMismatch { left: self.size(), right: other.size() })
        }
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.same_carrier(other)?;
        let mut r = self.clone();
        r.union_with(other);
        Ok(r)
    }

    fn union_with(&mut self, other: &Relation) {
        for (x, y) in self.bits.iter_mut().zip(&other.bits) {
            *x |= *y;
        }
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation> {
        self.same_carrier(other)?;
        let mut r = self.clone();
        for (x, y) in r.bits.iter_mut().zip(&other.bits) {
            *x &= *y;
        }
        Ok(r)
    }

    /// `self ⊆ other`. Relations on different carriers are never comparable.
    pub fn is_subset(&self, other: &Relation) -> bool {
        self.carrier == other.carrier && self.bits.iter().zip(&other.bits).all(|(x, y)| x & !y == 0)
    }

    /// The relational product `U∘V = {(u, v) : ∃w. u U w ∧ w V v}`.
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        self.same_carrier(other)?;
        let mut r = Relation::empty(self.carrier);
        let w = self.words;
        for a in 0..self.size() {
            let mut acc = vec![0u64; w];
            for mid in self.successors(a) {
                for (x, y) in acc.iter_mut().zip(other.row(mid)) {
                    *x |= *y;
                }
            }
            r.row_mut(a).copy_from_slice(&acc);
        }
        Ok(r)
    }

    /// `U^{-1}`, the transpose.
    pub fn inverse(&self) -> Relation {
        let mut r = Relation::empty(self.carrier);
        for (a, b) in self.pairs() {
            r.set(b, a);
        }
        r
    }

    /// `U^1 = U`, `U^{k+1} = U∘U^k`.
    pub fn power(&self, k: usize) -> Result<Relation> {
        if k == 0 {
            return Err(Error::ZeroPower);
        }
        let mut r = self.clone();
        for _ in 1..k {
            r = self.compose(&r)?;
        }
        Ok(r)
    }

    /// Least transitive relation containing `self`, by squaring
    /// `R ← R ∪ R∘R` until nothing changes.
    pub fn transitive_closure(&self) -> Relation {
        let mut r = self.clone();
        loop {
            let mut next = r.compose(&r).expect("same carrier");
            next.union_with(&r);
            if next == r {
                return r;
            }
            r = next;
        }
    }

    pub fn is_reflexive(&self) -> bool {
        self.carrier.elements().all(|a| self.contains(a, a))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(a, b)| self.contains(b, a))
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).expect("same carrier").is_subset(self)
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && self.is_transitive()
    }

    /// Class labels of an equivalence relation: each element is labelled by
    /// the least member of its class. `None` if `self` is not an equivalence.
    pub fn class_labels(&self) -> Option<Vec<usize>> {
        if !self.is_equivalence() {
            return None;
        }
        Some(self.carrier.elements().map(|a| self.successors(a).next().unwrap()).collect())
    }

    /// `ω(U) = {(ω(ā), ω(b̄)) : a_i U b_i for all i}`.
    pub fn op_image(&self, table: &OpTable) -> Result<Relation> {
        if table.size() != self.size() {
            return Err(Error::CarrierMismatch { left: table.size(), right: self.size() });
        }
        let pairs: Vec<(usize, usize)> = self.pairs().collect();
        let mut r = Relation::empty(self.carrier);
        let m = table.arity();
        if m == 0 {
            let c = table.apply(&[]);
            r.set(c, c);
            return Ok(r);
        }
        if pairs.is_empty() {
            return Ok(r);
        }
        let mut left = vec![0; m];
        let mut right = vec![0; m];
        for choice in Tuples::new(pairs.len(), m) {
            for (i, &p) in choice.iter().enumerate() {
                left[i] = pairs[p].0;
                right[i] = pairs[p].1;
            }
            r.set(table.apply(&left), table.apply(&right));
        }
        Ok(r)
    }

    /// `U^ω = {(a, a') : ω(a, b̄) U ω(a', b̄) for every (m-1)-tuple b̄}`.
    pub fn u_super(&self, table: &OpTable) -> Result<Relation> {
        if table.arity() == 0 {
            return Err(Error::NullaryTable);
        }
        if table.size() != self.size() {
            return Err(Error::CarrierMismatch { left: table.size(), right: self.size() });
        }
        let n = self.size();
        let mut r = Relation::empty(self.carrier);
        let mut x = vec![0; table.arity()];
        let mut y = vec![0; table.arity()];
        for a in 0..n {
            for a2 in 0..n {
                let holds = Tuples::new(n, table.arity() - 1).all(|rest| {
                    x[0] = a;
                    y[0] = a2;
                    x[1..].copy_from_slice(&rest);
                    y[1..].copy_from_slice(&rest);
                    self.contains(table.apply(&x), table.apply(&y))
                });
                if holds {
                    r.set(a, a2);
                }
            }
        }
        Ok(r)
    }

    /// `U^ω` read at argument position `pos` instead of the first.
    pub fn u_super_at(&self, table: &OpTable, pos: usize) -> Result<Relation> {
        if pos >= table.arity() {
            return Err(Error::Arity { expected: table.arity(), found: pos + 1 });
        }
        self.u_super(&table.move_to_front(pos))
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation[{}]", self.size())?;
        f.debug_set().entries(self.pairs()).finish()
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(labels) = self.class_labels() {
            // Equivalences print as partitions: {0,2}{1}{3}
            for a in self.carrier.elements() {
                if labels[a] == a {
                    write!(f, "{{")?;
                    let mut first = true;
                    for b in self.successors(a) {
                        if !first {
                            write!(f, ",")?;
                        }
                        write!(f, "{b}")?;
                        first = false;
                    }
                    write!(f, "}}")?;
                }
            }
            Ok(())
        } else {
            write!(f, "{{")?;
            let mut first = true;
            for (a, b) in self.pairs() {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "({a},{b})")?;
                first = false;
            }
            write!(f, "}}")
        }
    }
}

/// A total function between finite carriers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CarrierMap {
    domain: Carrier,
    codomain: Carrier,
    values: Vec<usize>,
}

impl CarrierMap {
    pub fn new(domain: Carrier, codomain: Carrier, values: Vec<usize>) -> Result<Self> {
        if values.len() != domain.size() {
            return Err(Error::TableShape { expected: domain.size(), found: values.len() });
        }
        for &v in &values {
            codomain.check(v)?;
        }
        Ok(CarrierMap { domain, codomain, values })
    }

    pub fn from_fn(domain: Carrier, codomain: Carrier, f: impl Fn(usize) -> usize) -> Result<Self> {
        Self::new(domain, codomain, domain.elements().map(f).collect())
    }

    pub fn identity(carrier: Carrier) -> Self {
        CarrierMap { domain: carrier, codomain: carrier, values: carrier.elements().collect() }
    }

    pub fn domain(&self) -> Carrier {
        self.domain
    }

    pub fn codomain(&self) -> Carrier {
        self.codomain
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn is_onto(&self) -> bool {
        let mut hit = vec![false; self.codomain.size()];
        for &v in &self.values {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// The kernel equivalence `ψ = {(x, y) : f x = f y}`.
    pub fn kernel(&self) -> Relation {
        Relation::kernel_of(self.domain, |x| self.values[x])
    }

    /// `f(U) = {(f x, f y) : x U y}` on the codomain.
    pub fn image_of(&self, u: &Relation) -> Result<Relation> {
        if u.carrier() != self.domain {
            return Err(Error::CarrierMismatch { left: u.size(), right: self.domain.size() });
        }
        let mut r = Relation::empty(self.codomain);
        for (a, b) in u.pairs() {
            r.set(self.values[a], self.values[b]);
        }
        Ok(r)
    }

    /// `f^{-1}(V) = {(x, y) : (f x, f y) ∈ V}` on the domain.
    pub fn preimage_of(&self, v: &Relation) -> Result<Relation> {
        if v.carrier() != self.codomain {
            return Err(Error::CarrierMismatch { left: v.size(), right: self.codomain.size() });
        }
        let mut r = Relation::empty(self.domain);
        for a in self.domain.elements() {
            for b in self.domain.elements() {
                if v.contains(self.values[a], self.values[b]) {
                    r.set(a, b);
                }
            }
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(n: usize) -> Carrier {
        Carrier::new(n).unwrap()
    }

    fn rel(n: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::from_pairs(c(n), pairs.iter().copied()).unwrap()
    }

    fn refl(n: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::reflexive_from_pairs(c(n), pairs.iter().copied()).unwrap()
    }

    /// Relation on `n ≤ 8` from a bit mask over `n²` positions.
    fn from_mask(n: usize, mask: u64) -> Relation {
        let mut r = Relation::empty(c(n));
        for i in 0..n * n {
            if mask >> i & 1 == 1 {
                r.set(i / n, i % n);
            }
        }
        r
    }

    /// Definition-level product, independent of the row-OR implementation.
    fn naive_compose(u: &Relation, v: &Relation) -> Relation {
        let n = u.size();
        let mut r = Relation::empty(u.carrier());
        for a in 0..n {
            for b in 0..n {
                if (0..n).any(|w| u.contains(a, w) && v.contains(w, b)) {
                    r.set(a, b);
                }
            }
        }
        r
    }

    #[test]
    fn carrier_bounds() {
        assert!(Carrier::new(0).is_err());
        assert!(Carrier::new(65).is_err());
        assert!(Carrier::with_cap(200, 256).is_ok());
    }

    #[test]
    fn compose_examples() {
        let u = refl(3, &[]);
        let v = refl(3, &[(1, 2), (0, 1)]);
        assert_eq!(u.compose(&v).unwrap(), v);

        let u = refl(3, &[(0, 1)]);
        let v = refl(3, &[(1, 2)]);
        assert_eq!(u.compose(&v).unwrap(), refl(3, &[(0, 1), (1, 2), (0, 2)]));

        let full = Relation::full(c(3));
        assert_eq!(full.compose(&full).unwrap(), full);
    }

    #[test]
    fn compose_rejects_carrier_mismatch() {
        let err = Relation::identity(c(2)).compose(&Relation::identity(c(3)));
        assert_eq!(err, Err(Error::CarrierMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn wide_carriers_use_several_words() {
        let carrier = Carrier::with_cap(130, 200).unwrap();
        let r = Relation::from_pairs(carrier, [(0, 129), (129, 64), (64, 0)]).unwrap();
        let closure = r.transitive_closure();
        assert!(closure.contains(0, 0));
        assert!(closure.contains(129, 129));
        assert!(closure.contains(64, 129));
        assert_eq!(closure.len(), 9);
        assert_eq!(r.inverse().inverse(), r);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Relation::identity(c(4)).inverse(), Relation::identity(c(4)));
        assert_eq!(refl(2, &[(0, 1)]).inverse(), refl(2, &[(1, 0)]));
    }

    #[test]
    fn power_examples() {
        assert_eq!(Relation::identity(c(3)).power(5).unwrap(), Relation::identity(c(3)));
        let chain = refl(3, &[(0, 1), (1, 2)]);
        assert_eq!(chain.power(2).unwrap(), refl(3, &[(0, 1), (1, 2), (0, 2)]));
        assert_eq!(chain.power(0), Err(Error::ZeroPower));
    }

    #[test]
    fn closure_examples() {
        let eq = Relation::from_blocks(c(4), &[&[0, 2], &[1, 3]]).unwrap();
        assert_eq!(eq.transitive_closure(), eq);
        let path = refl(3, &[(0, 1), (1, 0), (1, 2), (2, 1)]);
        assert_eq!(path.transitive_closure(), Relation::full(c(3)));
    }

    #[test]
    fn op_image_examples() {
        let xor = OpTable::from_fn(2, 2, |a| a[0] ^ a[1]).unwrap();
        let delta = Relation::identity(c(2));
        assert!(delta.op_image(&xor).unwrap().is_subset(&delta));
        // Tuples of pairs from Δ∪{(0,1)}: (0,0),(1,1),(0,1). Images of (a0^a1, b0^b1):
        // e.g. ((0,0),(0,1)) ↦ (0,1); ((0,1),(1,1)) ↦ (1,0); ((0,0),(0,0)) ↦ (0,0); ((1,1),(0,0)) ↦ (1,1).
        let u = refl(2, &[(0, 1)]);
        assert_eq!(u.op_image(&xor).unwrap(), Relation::full(c(2)));
        let constant_one = OpTable::from_fn(3, 2, |_| 1).unwrap();
        let full = Relation::full(c(3));
        assert_eq!(full.op_image(&constant_one).unwrap(), rel(3, &[(1, 1)]));
        let nullary = OpTable::new(3, 0, vec![2]).unwrap();
        assert_eq!(Relation::empty(c(3)).op_image(&nullary).unwrap(), rel(3, &[(2, 2)]));
    }

    #[test]
    fn u_super_examples() {
        let xor = OpTable::from_fn(2, 2, |a| a[0] ^ a[1]).unwrap();
        let full = Relation::full(c(2));
        assert_eq!(full.u_super(&xor).unwrap(), full);
        // a ^ b = a' ^ b for all b iff a = a'.
        let delta = Relation::identity(c(2));
        assert_eq!(delta.u_super(&xor).unwrap(), delta);
        let nullary = OpTable::new(2, 0, vec![0]).unwrap();
        assert_eq!(delta.u_super(&nullary), Err(Error::NullaryTable));
    }

    #[test]
    fn u_super_contains_congruence() {
        // Z/4 under +: mod-2 congruence θ; θ^+ ⊇ θ.
        let add = OpTable::from_fn(4, 2, |a| (a[0] + a[1]) % 4).unwrap();
        let theta = Relation::kernel_of(c(4), |x| x % 2);
        assert!(theta.is_subset(&theta.u_super(&add).unwrap()));
        assert!(theta.is_subset(&theta.u_super_at(&add, 1).unwrap()));
    }

    #[test]
    fn composition_lemma_exhaustive_small() {
        // ω(U∩V) ⊆ ω(U)∩ω(V) and ω(U∘V) ⊆ ω(U)∘ω(V) for all U, V on n = 2
        // and a few tables of arity ≤ 2.
        let n = 2;
        let tables = [
            OpTable::from_fn(n, 1, |a| 1 - a[0]).unwrap(),
            OpTable::from_fn(n, 2, |a| a[0] & a[1]).unwrap(),
            OpTable::from_fn(n, 2, |a| a[0] ^ a[1]).unwrap(),
            OpTable::from_fn(n, 2, |a| a[0]).unwrap(),
            OpTable::new(n, 0, vec![1]).unwrap(),
        ];
        for mu in 0..16u64 {
            for mv in 0..16u64 {
                let u = from_mask(n, mu);
                let v = from_mask(n, mv);
                for t in &tables {
                    let wu = u.op_image(t).unwrap();
                    let wv = v.op_image(t).unwrap();
                    let meet = u.intersection(&v).unwrap().op_image(t).unwrap();
                    assert!(meet.is_subset(&wu.intersection(&wv).unwrap()));
                    let prod = u.compose(&v).unwrap().op_image(t).unwrap();
                    if t.arity() > 0 {
                        assert!(prod.is_subset(&wu.compose(&wv).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn carrier_map_images() {
        let f = CarrierMap::from_fn(c(4), c(2), |x| x % 2).unwrap();
        assert!(f.is_onto());
        assert_eq!(f.preimage_of(&Relation::identity(c(2))).unwrap(), f.kernel());
        assert_eq!(f.image_of(&Relation::identity(c(4))).unwrap(), Relation::identity(c(2)));
        assert!(CarrierMap::new(c(2), c(2), vec![0, 2]).is_err());
    }

    #[test]
    fn display_partitions() {
        let eq = Relation::from_blocks(c(4), &[&[0, 2]]).unwrap();
        assert_eq!(alloc::format!("{eq}"), "{0,2}{1}{3}");
        assert_eq!(alloc::format!("{}", rel(2, &[(0, 1)])), "{(0,1)}");
    }

    fn relation_strategy(n: usize) -> impl Strategy<Value = Relation> {
        any::<u64>().prop_map(move |m| from_mask(n, m & ((1u64 << (n * n)) - 1)))
    }

    proptest! {
        #[test]
        fn compose_matches_definition(n in 1usize..=4, a in any::<u64>(), b in any::<u64>()) {
            let mask = (1u64 << (n * n)) - 1;
            let u = from_mask(n, a & mask);
            let v = from_mask(n, b & mask);
            prop_assert_eq!(u.compose(&v).unwrap(), naive_compose(&u, &v));
        }

        #[test]
        fn compose_is_associative(
            (u, v, w) in (1usize..=4).prop_flat_map(|n| (relation_strategy(n), relation_strategy(n), relation_strategy(n)))
        ) {
            let left = u.compose(&v).unwrap().compose(&w).unwrap();
            let right = u.compose(&v.compose(&w).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn inverse_reverses_products(
            (u, v) in (1usize..=5).prop_flat_map(|n| (relation_strategy(n), relation_strategy(n)))
        ) {
            prop_assert_eq!(u.compose(&v).unwrap().inverse(), v.inverse().compose(&u.inverse()).unwrap());
            prop_assert_eq!(u.inverse().inverse(), u);
        }

        #[test]
        fn closure_is_union_of_powers(u in (1usize..=5).prop_flat_map(relation_strategy)) {
            // Oracle: accumulate U, U², U³, … until the union stops growing.
            let mut acc = u.clone();
            let mut k = 1;
            loop {
                k += 1;
                let next = acc.union(&u.power(k).unwrap()).unwrap();
                if next == acc { break; }
                acc = next;
            }
            prop_assert_eq!(u.transitive_closure(), acc);
        }

        #[test]
        fn reflexive_power_stabilizes_at_closure(u in (1usize..=5).prop_flat_map(relation_strategy)) {
            let n = u.size();
            let r = u.union(&Relation::identity(u.carrier())).unwrap();
            prop_assert_eq!(r.power(n).unwrap(), r.transitive_closure());
        }

        #[test]
        fn u_super_subset_lemma(
            (u, v, w) in (2usize..=3).prop_flat_map(|n| (relation_strategy(n), relation_strategy(n), relation_strategy(n))),
            seed in any::<u64>()
        ) {
            let n = u.size();
            let table = OpTable::from_fn(n, 2, |a| ((seed >> ((a[0] * n + a[1]) * 2)) as usize) % n).unwrap();
            let union = u.union(&v).unwrap().union(&w).unwrap();
            let big = union.u_super(&table).unwrap();
            for part in [&u, &v, &w] {
                prop_assert!(part.u_super(&table).unwrap().is_subset(&big));
            }
        }

        #[test]
        fn op_image_is_monotone(
            (u, v) in (2usize..=3).prop_flat_map(|n| (relation_strategy(n), relation_strategy(n))),
            seed in any::<u64>()
        ) {
            let n = u.size();
            let table = OpTable::from_fn(n, 2, |a| ((seed >> ((a[0] * n + a[1]) * 2)) as usize) % n).unwrap();
            let uv = u.union(&v).unwrap();
            prop_assert!(u.op_image(&table).unwrap().is_subset(&uv.op_image(&table).unwrap()));
        }
    }
}
