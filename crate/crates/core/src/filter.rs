//! Semiuniformities and uniformities on finite carriers.
//!
//! A filter of relations on a finite carrier is closed under finite
//! intersections and the lattice of relations is finite, so the filter is the
//! up-set of its least element. We store that generator and nothing else.
//!
//! Under that representation the axioms collapse:
//!
//! * (U3) every member is reflexive iff the generator is;
//! * (U4) if `G ∈ 𝒰` then `G⁻¹ ∈ 𝒰`, i.e. `G ⊆ G⁻¹`, which forces `G = G⁻¹`;
//!   conversely a symmetric generator makes `U⁻¹ ⊇ G⁻¹ = G` for all `U ∈ 𝒰`;
//! * (U5) for `U = G` some `V ⊇ G` has `V∘V ⊆ G`, so `G∘G ⊆ V∘V ⊆ G`;
//!   conversely a transitive generator serves as `V` for every `U`.
//!
//! So semiuniformities are reflexive symmetric generators and uniformities
//! are equivalence relations. Filters are ordered by reverse inclusion, which
//! on generators is plain inclusion: `𝒰 ≤ 𝒱` iff `gen 𝒰 ⊆ gen 𝒱`. The
//! discrete uniformity (generator `Δ`) is the least element and the
//! indiscrete one (generator `S×S`) the greatest.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::relation::{Carrier, CarrierMap, Relation};

/// Largest carrier a finite product may produce.
pub const PRODUCT_CARRIER_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FilterKind {
    /// Fails (U3) or (U4).
    Neither,
    Semiuniformity,
    Uniformity,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrincipalFilter {
    generator: Relation,
}

impl PrincipalFilter {
    /// The filter of all relations containing `generator`.
    pub fn principal(generator: Relation) -> Self {
        PrincipalFilter { generator }
    }

    /// `Fg(base)`: the filter generated by a nonempty base, whose least
    /// element is the intersection of the base.
    pub fn fg(base: &[Relation]) -> Result<Self> {
        let (first, rest) = base.split_first().ok_or(Error::EmptyBase)?;
        let mut g = first.clone();
        for r in rest {
            g = g.intersection(r)?;
        }
        Ok(PrincipalFilter { generator: g })
    }

    pub fn discrete(carrier: Carrier) -> Self {
        Self::principal(Relation::identity(carrier))
    }

    pub fn indiscrete(carrier: Carrier) -> Self {
        Self::principal(Relation::full(carrier))
    }

    pub fn generator(&self) -> &Relation {
        &self.generator
    }

    pub fn carrier(&self) -> Carrier {
        self.generator.carrier()
    }

    /// Membership: `U ∈ 𝒰` iff `U ⊇ gen 𝒰`.
    pub fn contains(&self, u: &Relation) -> bool {
        self.generator.is_subset(u)
    }

    pub fn classify(&self) -> FilterKind {
        let g = &self.generator;
        if !(g.is_reflexive() && g.is_symmetric()) {
            FilterKind::Neither
        } else if g.is_transitive() {
            FilterKind::Uniformity
        } else {
            FilterKind::Semiuniformity
        }
    }

    pub fn is_semiuniformity(&self) -> bool {
        self.classify() != FilterKind::Neither
    }

    pub fn is_uniformity(&self) -> bool {
        self.classify() == FilterKind::Uniformity
    }

    /// The lattice order `𝒰 ≤ 𝒱` (reverse inclusion of filters).
    pub fn le(&self, other: &PrincipalFilter) -> bool {
        self.generator.is_subset(&other.generator)
    }

    fn require_uniformity(&self) -> Result<()> {
        if self.is_uniformity() {
            Ok(())
        } else {
            Err(Error::NotUniformity)
        }
    }

    fn require_semiuniformity(&self) -> Result<()> {
        if self.is_semiuniformity() {
            Ok(())
        } else {
            Err(Error::NotSemiuniformity)
        }
    }

    fn same_carrier(&self, other: &PrincipalFilter) -> Result<()> {
        if self.carrier() == other.carrier() {
            Ok(())
        } else {
            Err(Error::CarrierMismatch { left: self.carrier().size(), right: other.carrier().size() })
        }
    }

    /// `Div₀𝒰`, the divisible elements of a semiuniformity: the least
    /// uniformity contained in it as a filter. An element `U ⊇ G` starts a
    /// dividing sequence iff it contains the transitive closure of `G`.
    pub fn div0(&self) -> Result<PrincipalFilter> {
        self.require_semiuniformity()?;
        Ok(PrincipalFilter { generator: self.generator.transitive_closure() })
    }

    /// Greatest lower bound of uniformities: intersection of generators.
    pub fn meet(filters: &[PrincipalFilter]) -> Result<PrincipalFilter> {
        let (first, rest) = filters.split_first().ok_or(Error::EmptyBase)?;
        first.require_uniformity()?;
        let mut g = first.generator.clone();
        for f in rest {
            first.same_carrier(f)?;
            f.require_uniformity()?;
            g = g.intersection(&f.generator)?;
        }
        Ok(PrincipalFilter { generator: g })
    }

    /// The intersection of filters, i.e. the join in the lattice of
    /// semiuniformities. Its generator is the union of generators.
    pub fn filter_intersection(filters: &[PrincipalFilter]) -> Result<PrincipalFilter> {
        let (first, rest) = filters.split_first().ok_or(Error::EmptyBase)?;
        let mut g = first.generator.clone();
        for f in rest {
            g = g.union(&f.generator)?;
        }
        Ok(PrincipalFilter { generator: g })
    }

    /// Least upper bound of uniformities, `Div₀(⋂ᵢ 𝒰ᵢ)`.
    pub fn join(filters: &[PrincipalFilter]) -> Result<PrincipalFilter> {
        for f in filters {
            f.require_uniformity()?;
        }
        Self::filter_intersection(filters)?.div0()
    }

    /// `Fg(𝒰∘𝒱)`.
    pub fn compose_filters(&self, other: &PrincipalFilter) -> Result<PrincipalFilter> {
        Ok(PrincipalFilter { generator: self.generator.compose(&other.generator)? })
    }

    /// `Fg(𝒰∘𝒱) = Fg(𝒱∘𝒰)`, which for principal filters is equality of the
    /// two generator products.
    pub fn permutes(&self, other: &PrincipalFilter) -> Result<bool> {
        self.require_semiuniformity()?;
        other.require_semiuniformity()?;
        self.same_carrier(other)?;
        Ok(self.generator.compose(&other.generator)? == other.generator.compose(&self.generator)?)
    }

    /// Compares `𝒰 ∨ 𝒱` with `Fg(𝒰∘𝒱)` and, independently, whether the two
    /// uniformities permute. The two answers always agree.
    pub fn join_is_product(&self, other: &PrincipalFilter) -> Result<JoinProduct> {
        let join = Self::join(&[self.clone(), other.clone()])?;
        let product = self.compose_filters(other)?;
        Ok(JoinProduct { join_is_product: join == product, permutes: self.permutes(other)? })
    }

    /// The bounded form of the `R₀ = 𝒱, R_{k+1} = R_k∘𝒰∘R_k` iteration for
    /// `𝒰 ∨ 𝒱`. Returns the fixed point and the number of steps taken.
    pub fn join_by_iteration(u: &PrincipalFilter, v: &PrincipalFilter) -> Result<(PrincipalFilter, usize)> {
        u.require_uniformity()?;
        v.require_uniformity()?;
        u.same_carrier(v)?;
        let mut r = v.generator.clone();
        let mut steps = 0;
        loop {
            let next = r.compose(&u.generator)?.compose(&r)?;
            if next == r {
                return Ok((PrincipalFilter { generator: r }, steps));
            }
            r = next;
            steps += 1;
        }
    }

    /// `f⁻¹(𝒱)`, generated by `f⁻¹(gen 𝒱)`.
    pub fn inverse_image(f: &CarrierMap, target: &PrincipalFilter) -> Result<PrincipalFilter> {
        Ok(PrincipalFilter { generator: f.preimage_of(&target.generator)? })
    }

    /// Direct image `f_*(𝒰)` through the base `V_U = Δ_T ∪ f(U)`.
    ///
    /// The formula needs `Ū∘ψ∘Ū ⊆ ψ∘U∘ψ` with `ψ = ker f`; for a principal
    /// filter it suffices to test `Ū = U = gen 𝒰`, since larger `Ū` only
    /// enlarge the left side. Inputs failing the test are refused.
    pub fn direct_image(f: &CarrierMap, source: &PrincipalFilter) -> Result<PrincipalFilter> {
        source.require_uniformity()?;
        if source.carrier() != f.domain() {
            return Err(Error::CarrierMismatch { left: source.carrier().size(), right: f.domain().size() });
        }
        let g = &source.generator;
        let psi = f.kernel();
        let lhs = g.compose(&psi)?.compose(g)?;
        let rhs = psi.compose(g)?.compose(&psi)?;
        if let Some(witness) = lhs.pairs().find(|&(a, b)| !rhs.contains(a, b)) {
            return Err(Error::DirectImageHypothesis { witness });
        }
        let generator = f.image_of(g)?.union(&Relation::identity(f.codomain()))?;
        let out = PrincipalFilter { generator };
        debug_assert!(out.is_uniformity());
        Ok(out)
    }

    /// The uniformity `⋀ᵢ πᵢ⁻¹(𝒰ᵢ)` of a finite product. Product elements are
    /// encoded by [`product_index`].
    pub fn product(filters: &[PrincipalFilter]) -> Result<PrincipalFilter> {
        if filters.is_empty() {
            return Err(Error::EmptyProduct);
        }
        let sizes: Vec<usize> = filters.iter().map(|f| f.carrier().size()).collect();
        let total =
            sizes
                .iter()
                .try_fold(1usize, |acc, &s| acc.checked_mul(s))
                .filter(|&t| t <= PRODUCT_CARRIER_CAP)
                .ok_or(Error::CapExceeded { what: "product carrier", size: usize::MAX, cap: PRODUCT_CARRIER_CAP })?;
        let carrier = Carrier::with_cap(total, PRODUCT_CARRIER_CAP)?;
        let mut g = Relation::empty(carrier);
        let coords: Vec<Vec<usize>> = (0..total).map(|x| product_coords(&sizes, x)).collect();
        for x in 0..total {
            for y in 0..total {
                if filters.iter().enumerate().all(|(i, f)| f.generator.contains(coords[x][i], coords[y][i])) {
                    g.insert(x, y)?;
                }
            }
        }
        Ok(PrincipalFilter { generator: g })
    }
}

/// Outcome of [`PrincipalFilter::join_is_product`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JoinProduct {
    pub join_is_product: bool,
    pub permutes: bool,
}

impl JoinProduct {
    pub fn agree(&self) -> bool {
        self.join_is_product == self.permutes
    }
}

/// Mixed-radix index of a tuple in a product carrier, first coordinate most
/// significant.
pub fn product_index(sizes: &[usize], coords: &[usize]) -> usize {
    sizes.iter().zip(coords).fold(0, |acc, (&s, &c)| acc * s + c)
}

pub fn product_coords(sizes: &[usize], mut index: usize) -> Vec<usize> {
    let mut out = alloc::vec![0; sizes.len()];
    for (slot, &s) in out.iter_mut().zip(sizes).rev() {
        *slot = index % s;
        index /= s;
    }
    out
}

impl fmt::Debug for PrincipalFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fg({:?})", self.generator)
    }
}

impl fmt::Display for PrincipalFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}⟩", self.generator)
    }
}
