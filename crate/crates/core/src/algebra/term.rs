//! Term trees over a named signature.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::sexpr::Sexpr;

/// A term in variables `x0, x1, …` over operation symbols referenced by name.
///
/// Arity is checked against a signature when the term is compiled or
/// evaluated, not at construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Op(String, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn op(symbol: &str, args: Vec<Term>) -> Term {
        Term::Op(symbol.to_string(), args)
    }

    /// Parses prefix syntax: `x<digits>` is a variable, any other atom a
    /// nullary symbol, and `(f t₁ … tₘ)` an application.
    pub fn parse(input: &str) -> Result<Term> {
        Self::from_sexpr(&Sexpr::parse(input)?)
    }

    pub fn from_sexpr(e: &Sexpr) -> Result<Term> {
        match e {
            Sexpr::Atom(a) => Ok(match parse_var(a) {
                Some(i) => Term::Var(i),
                None => Term::Op(a.clone(), Vec::new()),
            }),
            Sexpr::List(items) => {
                let (head, rest) = items.split_first().ok_or_else(|| Error::Parse("empty application".to_string()))?;
                let name =
                    head.as_atom().ok_or_else(|| Error::Parse(format!("operator must be an atom, got {head}")))?;
                if parse_var(name).is_some() {
                    return Err(Error::Parse(format!("variable `{name}` used as an operator")));
                }
                let args = rest.iter().map(Term::from_sexpr).collect::<Result<Vec<_>>>()?;
                Ok(Term::Op(name.to_string(), args))
            }
        }
    }

    /// One more than the largest variable index, or 0 for a ground term.
    pub fn var_bound(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::Op(_, args) => args.iter().map(Term::var_bound).max().unwrap_or(0),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Op(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Replaces each `xᵢ` by `subst[i]`.
    pub fn substitute(&self, subst: &[Term]) -> Result<Term> {
        match self {
            Term::Var(i) => subst.get(*i).cloned().ok_or(Error::UnboundVariable(*i)),
            Term::Op(s, args) => {
                Ok(Term::Op(s.clone(), args.iter().map(|a| a.substitute(subst)).collect::<Result<_>>()?))
            }
        }
    }
}

fn parse_var(a: &str) -> Option<usize> {
    let digits = a.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// Term with symbols resolved to indices into a signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Compiled {
    Var(usize),
    Op(usize, Box<[Compiled]>),
}

impl Compiled {
    pub(crate) fn eval<T: Copy + Default>(&self, apply: &impl Fn(usize, &[T]) -> T, env: &[T]) -> T {
        match self {
            Compiled::Var(i) => env[*i],
            Compiled::Op(s, args) => {
                let mut vals = [T::default(); 8];
                if args.len() <= vals.len() {
                    for (slot, a) in vals.iter_mut().zip(args.iter()) {
                        *slot = a.eval(apply, env);
                    }
                    apply(*s, &vals[..args.len()])
                } else {
                    let vals: Vec<T> = args.iter().map(|a| a.eval(apply, env)).collect();
                    apply(*s, &vals)
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::Op(s, args) if args.is_empty() => f.write_str(s),
            Term::Op(s, args) => {
                write!(f, "({s}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn parse_display_round_trip() {
        for s in ["x0", "e", "(mul x0 (inv x1))", "(add (add x0 (neg x1)) x2)", "(f)"] {
            let t = Term::parse(s).unwrap();
            let back = Term::parse(&t.to_string()).unwrap();
            assert_eq!(t, back);
        }
        assert_eq!(Term::parse("(f)").unwrap(), Term::parse("f").unwrap());
        assert_eq!(Term::parse("x12").unwrap(), Term::Var(12));
        assert_eq!(Term::parse("xy").unwrap(), Term::op("xy", vec![]));
        assert!(Term::parse("(x0 x1)").is_err());
    }

    #[test]
    fn substitution() {
        let p = Term::parse("(mul (mul x0 (inv x1)) x2)").unwrap();
        assert_eq!(p.var_bound(), 3);
        let q = p.substitute(&[Term::Var(1), Term::Var(2), Term::Var(3)]).unwrap();
        assert_eq!(q.to_string(), "(mul (mul x1 (inv x2)) x3)");
        assert_eq!(p.substitute(&[Term::Var(0)]), Err(Error::UnboundVariable(1)));
        assert_eq!(p.depth(), 3);
    }
}
