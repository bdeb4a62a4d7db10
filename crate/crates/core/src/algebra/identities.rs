//! Identity families for Mal'cev conditions, checked exhaustively.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{FiniteAlgebra, Term};
use crate::error::{Error, Result};
use crate::table::Tuples;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `p(x,x,y) = p(y,x,x) = y`.
    Malcev,
    /// A Mal'cev term plus `M(x,x,y) = M(x,y,x) = M(y,x,x) = x`.
    Arithmetical,
    /// Quaternary `m₀ … mₙ` with the Day identities.
    Day,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Malcev => "malcev",
            Family::Arithmetical => "arithmetical",
            Family::Day => "day",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        [Family::Malcev, Family::Arithmetical, Family::Day].into_iter().find(|f| f.name() == s)
    }
}

/// `lhs = rhs` in variables `x0 … x_{vars-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
    pub vars: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub assignment: Vec<usize>,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityOutcome {
    pub name: String,
    pub counterexample: Option<Counterexample>,
}

impl IdentityOutcome {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn v(i: usize) -> Term {
    Term::Var(i)
}

fn require_arity(t: &Term, arity: usize) -> Result<()> {
    if t.var_bound() > arity {
        Err(Error::Arity { expected: arity, found: t.var_bound() })
    } else {
        Ok(())
    }
}

fn identity(name: String, t: &Term, args: [Term; 4], rhs: Term, vars: usize) -> Result<Identity> {
    Ok(Identity { name, lhs: t.substitute(&args)?, rhs, vars })
}

pub fn malcev_identities(p: &Term) -> Result<Vec<Identity>> {
    require_arity(p, 3)?;
    let (x, y) = (v(0), v(1));
    Ok(vec![
        identity("p(x,x,y)=y".into(), p, [x.clone(), x.clone(), y.clone(), y.clone()], y.clone(), 2)?,
        identity("p(y,x,x)=y".into(), p, [y.clone(), x.clone(), x.clone(), x], y, 2)?,
    ])
}

pub fn majority_identities(m: &Term) -> Result<Vec<Identity>> {
    require_arity(m, 3)?;
    let (x, y) = (v(0), v(1));
    Ok(vec![
        identity("M(x,x,y)=x".into(), m, [x.clone(), x.clone(), y.clone(), x.clone()], x.clone(), 2)?,
        identity("M(x,y,x)=x".into(), m, [x.clone(), y.clone(), x.clone(), x.clone()], x.clone(), 2)?,
        identity("M(y,x,x)=x".into(), m, [y, x.clone(), x.clone(), x.clone()], x, 2)?,
    ])
}

pub fn day_identities(ms: &[Term]) -> Result<Vec<Identity>> {
    if ms.len() < 2 {
        return Err(Error::InvalidCertificate(format!("need at least two Day terms, got {}", ms.len())));
    }
    for m in ms {
        require_arity(m, 4)?;
    }
    let n = ms.len() - 1;
    let (x, y, z, w) = (v(0), v(1), v(2), v(3));
    let mut out = Vec::new();
    for (i, m) in ms.iter().enumerate() {
        out.push(identity(format!("m{i}(x,y,y,x)=x"), m, [x.clone(), y.clone(), y.clone(), x.clone()], x.clone(), 2)?);
    }
    out.push(Identity { name: "m0(x,y,z,w)=x".into(), lhs: ms[0].clone(), rhs: x.clone(), vars: 4 });
    out.push(Identity { name: format!("m{n}(x,y,z,w)=w"), lhs: ms[n].clone(), rhs: w.clone(), vars: 4 });
    for i in 0..n {
        let (args, label) = if i % 2 == 0 {
            ([x.clone(), x.clone(), y.clone(), y.clone()], "m{}(x,x,y,y)=m{}(x,x,y,y)")
        } else {
            ([x.clone(), y.clone(), y.clone(), z.clone()], "m{}(x,y,y,z)=m{}(x,y,y,z)")
        };
        let name = label.replacen("{}", &format!("{i}"), 1).replacen("{}", &format!("{}", i + 1), 1);
        out.push(Identity { name, lhs: ms[i].substitute(&args)?, rhs: ms[i + 1].substitute(&args)?, vars: 3 });
    }
    Ok(out)
}

/// The identities a family imposes on the supplied terms: `[p]` for
/// Mal'cev, `[p, M]` for arithmetical, `[m₀, …, mₙ]` for Day.
pub fn family_identities(family: Family, terms: &[Term]) -> Result<Vec<Identity>> {
    match (family, terms) {
        (Family::Malcev, [p]) => malcev_identities(p),
        (Family::Arithmetical, [p, m]) => {
            let mut out = malcev_identities(p)?;
            out.extend(majority_identities(m)?);
            Ok(out)
        }
        (Family::Day, ms) => day_identities(ms),
        (f, ts) => Err(Error::InvalidCertificate(format!(
            "{} expects {} terms, got {}",
            f.name(),
            if f == Family::Malcev { 1 } else { 2 },
            ts.len()
        ))),
    }
}

/// Evaluates each identity on every assignment and reports the first
/// counterexample per identity.
pub fn check_identities(a: &FiniteAlgebra, ids: &[Identity]) -> Result<Vec<IdentityOutcome>> {
    let mut out = Vec::with_capacity(ids.len());
    for id in ids {
        let lhs = a.signature().compile(&id.lhs)?;
        let rhs = a.signature().compile(&id.rhs)?;
        require_arity(&id.lhs, id.vars)?;
        require_arity(&id.rhs, id.vars)?;
        let counterexample = Tuples::new(a.size(), id.vars).find_map(|env| {
            let (l, r) = (a.eval_compiled(&lhs, &env), a.eval_compiled(&rhs, &env));
            (l != r).then_some(Counterexample { assignment: env, lhs: l, rhs: r })
        });
        out.push(IdentityOutcome { name: id.name.clone(), counterexample });
    }
    Ok(out)
}

pub fn check_family(a: &FiniteAlgebra, family: Family, terms: &[Term]) -> Result<Vec<IdentityOutcome>> {
    check_identities(a, &family_identities(family, terms)?)
}

pub fn all_hold(outcomes: &[IdentityOutcome]) -> bool {
    outcomes.iter().all(IdentityOutcome::holds)
}

/// Day terms `m₀ = x0`, `m₁ = p(x1, x2, x3)`, `m₂ = x3` from a Mal'cev term.
///
/// The Day identities then reduce to the two Mal'cev identities.
/// [`check_identities`] still confirms them on each algebra before use.
pub fn day_terms_from_malcev(p: &Term) -> Result<Vec<Term>> {
    require_arity(p, 3)?;
    Ok(vec![v(0), p.substitute(&[v(1), v(2), v(3)])?, v(3)])
}
