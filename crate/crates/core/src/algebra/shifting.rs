//! Witness searches around the shifting lemma for Day terms.

use alloc::format;
use alloc::vec::Vec;

use super::identities::{all_hold, check_family, Family};
use super::{FiniteAlgebra, Term};
use crate::error::{Error, Result};
use crate::filter::PrincipalFilter;
use crate::relation::Relation;
use crate::table::{OpTable, Tuples};

/// Day terms tabulated as quaternary operations, after checking the Day
/// identities on the algebra.
pub fn day_tables(a: &FiniteAlgebra, day: &[Term]) -> Result<Vec<OpTable>> {
    let report = check_family(a, Family::Day, day)?;
    if !all_hold(&report) {
        let bad = report.iter().find(|o| !o.holds()).unwrap();
        return Err(Error::InvalidCertificate(format!("Day identity {} fails at {:?}", bad.name, bad.counterexample)));
    }
    day.iter().map(|m| a.term_table(m, 4)).collect()
}

/// First `(a, b, c, d)` with `b X̄ d` and `mᵢ(a,a,c,c) X̄ mᵢ(a,b,d,c)` for
/// all `i`, but not `a X c`.
pub fn shifting_counterexample(ms: &[OpTable], x_bar: &Relation, x: &Relation) -> Option<[usize; 4]> {
    let n = x.size();
    for a in 0..n {
        for c in 0..n {
            if x.contains(a, c) {
                continue;
            }
            for (b, d) in x_bar.pairs() {
                if ms.iter().all(|m| x_bar.contains(m.apply(&[a, a, c, c]), m.apply(&[a, b, d, c]))) {
                    return Some([a, b, c, d]);
                }
            }
        }
    }
    None
}

/// An element `X̄` of the compatible uniformity `𝒳` for which the shifting
/// implication holds with target `gen 𝒳`.
///
/// Candidates are the congruences containing the generator, coarsest first,
/// and finally the generator itself, which always qualifies: if `X` is a
/// congruence, `mᵢ(a,b,b,c) X mᵢ(a,b,d,c)` and the Day identities chain
/// `a = u₀ X u₁ X … X uₙ = c`. Each candidate is validated over all
/// 4-tuples before it is returned.
pub fn shifting_witness(a: &FiniteAlgebra, day: &[Term], x: &PrincipalFilter, cap: usize) -> Result<Relation> {
    let ms = day_tables(a, day)?;
    if !a.is_compatible_filter(x)? {
        return Err(Error::NotCongruence);
    }
    let g = x.generator();
    let mut candidates: Vec<Relation> = a.congruences(cap)?.into_iter().filter(|r| g.is_subset(r) && r != g).collect();
    candidates.reverse();
    candidates.push(g.clone());
    for cand in candidates {
        if shifting_counterexample(&ms, &cand, g).is_none() {
            return Ok(cand);
        }
    }
    unreachable!("the generator of a congruence always satisfies the shifting implication")
}

/// `M(U) = ⋃ᵢ mᵢ(U)`.
pub fn day_image(ms: &[OpTable], u: &Relation) -> Result<Relation> {
    let mut out = Relation::empty(u.carrier());
    for m in ms {
        out = out.union(&u.op_image(m)?)?;
    }
    Ok(out)
}

/// `M(U∘V) ⊆ M(U)∘M(V)`.
pub fn day_image_composition_holds(ms: &[OpTable], u: &Relation, v: &Relation) -> Result<bool> {
    let lhs = day_image(ms, &u.compose(v)?)?;
    let rhs = day_image(ms, u)?.compose(&day_image(ms, v)?)?;
    Ok(lhs.is_subset(&rhs))
}

/// With generators as the chosen entourages: first `(a, b, c, d)` with
/// `a T₀ b T₁ d T₀ c T₁ a` and `b X d` but not `a X c`. Meaningful when
/// `T₀ ∩ T₁ ⊆ X`.
pub fn square_counterexample(t0: &Relation, t1: &Relation, x: &Relation) -> Option<[usize; 4]> {
    let n = x.size();
    for a in 0..n {
        for c in 0..n {
            if x.contains(a, c) {
                continue;
            }
            for b in t0.successors(a) {
                for d in t1.successors(b) {
                    if t0.contains(d, c) && t1.contains(c, a) && x.contains(b, d) {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

/// `(R∘(W∩X)∘R) ∩ W ⊆ X` on generators, given `R ∩ W ⊆ X`.
pub fn shifted_meet_holds(r: &Relation, w: &Relation, x: &Relation) -> Result<bool> {
    let u = w.intersection(x)?;
    let lhs = r.compose(&u)?.compose(r)?.intersection(w)?;
    Ok(lhs.is_subset(x))
}

/// Exhaustive check of the last three lemmas over an algebra: `R` ranges
/// over compatible tolerances, `W`, `X`, `T₁` over congruences, and `U`, `V`
/// for the composition lemma over tolerances. Returns the number of
/// instances checked, or a description of the first failure.
pub fn check_shifting_lemmas(
    a: &FiniteAlgebra,
    day: &[Term],
    cap: usize,
) -> Result<core::result::Result<usize, alloc::string::String>> {
    let ms = day_tables(a, day)?;
    let cons = a.congruences(cap)?;
    let tols = a.tolerances(cap)?;
    let mut checked = 0;
    for u in &tols {
        for v in &tols {
            if !day_image_composition_holds(&ms, u, v)? {
                return Ok(Err(format!("M(U∘V) ⊄ M(U)∘M(V) for U={u} V={v}")));
            }
            checked += 1;
        }
    }
    for r in &tols {
        for w in &cons {
            for x in &cons {
                if !r.intersection(w)?.is_subset(x) {
                    continue;
                }
                if let Some(q) = square_counterexample(r, w, x) {
                    return Ok(Err(format!("square lemma fails for T0={r} T1={w} X={x} at {q:?}")));
                }
                if !shifted_meet_holds(r, w, x)? {
                    return Ok(Err(format!("shifted meet fails for R={r} W={w} X={x}")));
                }
                checked += 1;
            }
        }
    }
    Ok(Ok(checked))
}

/// The shifting implication checked by plain enumeration of all 4-tuples.
pub fn validate_witness(ms: &[OpTable], x_bar: &Relation, x: &Relation) -> bool {
    let n = x.size();
    Tuples::new(n, 4).all(|t| {
        let [a, b, c, d] = [t[0], t[1], t[2], t[3]];
        let premise =
            x_bar.contains(b, d) && ms.iter().all(|m| x_bar.contains(m.apply(&[a, a, c, c]), m.apply(&[a, b, d, c])));
        !premise || x.contains(a, c)
    })
}
