//! Lattice laws over the compatible uniformities of corpus algebras.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::corpus::CorpusEntry;
use super::identities::{all_hold, check_family, Family};
use crate::error::Result;
use crate::filter::PrincipalFilter;
use crate::lattice::UniformityLattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Law {
    Modular,
    Distributive,
    JoinAgreement,
    Permute,
    PartialModularity,
}

impl Law {
    pub const ALL: [Law; 5] =
        [Law::Modular, Law::Distributive, Law::JoinAgreement, Law::Permute, Law::PartialModularity];

    pub fn name(self) -> &'static str {
        match self {
            Law::Modular => "modular",
            Law::Distributive => "distributive",
            Law::JoinAgreement => "join-agreement",
            Law::Permute => "permute",
            Law::PartialModularity => "partial-modularity",
        }
    }

    pub fn from_name(s: &str) -> Option<Law> {
        Law::ALL.into_iter().find(|l| l.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    /// A gated law failed without an annotation.
    Fail,
    /// Failed, and the corpus entry anticipates it.
    ExpectedFail,
    /// Failed, but no certificate predicts the law for this algebra.
    ExploratoryFail,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::ExpectedFail => "expected-fail",
            Verdict::ExploratoryFail => "exploratory-fail",
        }
    }

    pub fn of(failed: bool, expected: bool, gated: bool) -> Verdict {
        match (failed, expected, gated) {
            (false, _, _) => Verdict::Pass,
            (true, true, _) => Verdict::ExpectedFail,
            (true, false, true) => Verdict::Fail,
            (true, false, false) => Verdict::ExploratoryFail,
        }
    }

    pub fn is_unexpected(self) -> bool {
        self == Verdict::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawRecord {
    pub algebra: String,
    pub law: Law,
    /// Whether a verified certificate predicts the law.
    pub gated: bool,
    pub verdict: Verdict,
    /// Instances (pairs or triples) examined.
    pub instances: usize,
    pub counterexample: Option<String>,
}

/// Which certificates an entry carries after verification on its algebra.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifiedCertificates {
    pub malcev: bool,
    pub arithmetical: bool,
    pub day: bool,
}

pub fn verify_certificates(e: &CorpusEntry) -> Result<VerifiedCertificates> {
    let a = &e.algebra;
    let c = &e.certificates;
    let malcev = match &c.malcev {
        Some(p) => all_hold(&check_family(a, Family::Malcev, core::slice::from_ref(p))?),
        None => false,
    };
    let arithmetical = match (&c.malcev, &c.majority) {
        (Some(p), Some(m)) => all_hold(&check_family(a, Family::Arithmetical, &[p.clone(), m.clone()])?),
        _ => false,
    };
    let day = match &c.day {
        Some(ms) => all_hold(&check_family(a, Family::Day, ms)?),
        None => false,
    };
    Ok(VerifiedCertificates { malcev, arithmetical, day })
}

/// Whether a verified certificate predicts `law`. Full modularity is only
/// predicted under a Mal'cev term; under Day terms alone it is open, so only
/// the partial law is gated there.
pub fn is_gated(law: Law, v: VerifiedCertificates) -> bool {
    match law {
        Law::JoinAgreement => true,
        Law::Modular | Law::Permute => v.malcev,
        Law::Distributive => v.arithmetical,
        Law::PartialModularity => v.day,
    }
}

fn show(l: &UniformityLattice, i: usize) -> String {
    format!("{}", l.element(i).generator())
}

/// Checks one law over the compatible-uniformity lattice. Returns the
/// number of instances and the first counterexample.
pub fn check_law(entry: &CorpusEntry, lattice: &UniformityLattice, law: Law) -> Result<(usize, Option<String>)> {
    let k = lattice.len();
    let a = &entry.algebra;
    Ok(match law {
        Law::Modular => (
            k * k * k,
            lattice.modular_violation().map(|(x, y, z)| {
                format!("a={} b={} c={}: a∨(b∧c) ≠ (a∨b)∧c", show(lattice, x), show(lattice, y), show(lattice, z))
            }),
        ),
        Law::Distributive => (
            k * k * k,
            lattice.distributive_violation().map(|(x, y, z)| {
                format!("a={} b={} c={}: a∧(b∨c) ≠ (a∧b)∨(a∧c)", show(lattice, x), show(lattice, y), show(lattice, z))
            }),
        ),
        Law::JoinAgreement => {
            let mut cx = None;
            'outer: for i in 0..k {
                for j in 0..k {
                    let join = PrincipalFilter::join(&[lattice.element(i).clone(), lattice.element(j).clone()])?;
                    if !a.is_compatible_filter(&join)? {
                        cx = Some(format!("join of {} and {} is not compatible", show(lattice, i), show(lattice, j)));
                        break 'outer;
                    }
                }
            }
            (k * k, cx)
        }
        Law::Permute => {
            let mut cx = None;
            'outer: for i in 0..k {
                for j in 0..k {
                    let (u, v) = (lattice.element(i), lattice.element(j));
                    let jp = u.join_is_product(v)?;
                    assert!(jp.agree(), "permutability and join-as-product disagree on {u:?} {v:?}");
                    if !jp.permutes {
                        let uv = u.generator().compose(v.generator())?;
                        let vu = v.generator().compose(u.generator())?;
                        cx = Some(format!("U={} V={}: U∘V={uv:?} V∘U={vu:?}", u.generator(), v.generator()));
                        break 'outer;
                    }
                }
            }
            (k * k, cx)
        }
        Law::PartialModularity => {
            // 𝒰 ≤ 𝒲 with 𝒲 generated by a congruence: every compatible
            // uniformity on a finite algebra is, so 𝒲 ranges over the lattice.
            let hit = lattice.first_triple(|u, v, w| {
                !lattice.le(u, w) || lattice.join(u, lattice.meet(v, w)) == lattice.meet(lattice.join(u, v), w)
            });
            (
                k * k * k,
                hit.map(|(u, v, w)| {
                    format!("U={} V={} W={}: U∨(V∧W) ≠ (U∨V)∧W", show(lattice, u), show(lattice, v), show(lattice, w))
                }),
            )
        }
    })
}

/// Runs `laws` over every entry. Records are sorted by algebra name, then
/// law.
pub fn fuzz_laws(corpus: &[CorpusEntry], laws: &[Law], cap: usize) -> Result<Vec<LawRecord>> {
    let mut out = Vec::new();
    if laws.is_empty() {
        return Ok(out);
    }
    for entry in corpus {
        let certs = verify_certificates(entry)?;
        let lattice = entry.algebra.con_lattice(cap)?;
        for &law in laws {
            let (instances, counterexample) = check_law(entry, &lattice, law)?;
            let gated = is_gated(law, certs);
            let verdict = Verdict::of(counterexample.is_some(), entry.expect_fail.contains(&law), gated);
            out.push(LawRecord { algebra: entry.name.clone(), law, gated, verdict, instances, counterexample });
        }
    }
    out.sort_by(|a, b| a.algebra.cmp(&b.algebra).then(a.law.cmp(&b.law)));
    Ok(out)
}
