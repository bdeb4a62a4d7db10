//! Expressions for `ua complete`: operation symbols of the chain applied to
//! lifted points.
//!
//! ```text
//! expr := (eta N) | (geom B) | symbol | (symbol expr ...)
//! ```
//!
//! `(eta N)` is the image of the carrier element `N` (an integer, or an
//! element of the top level for table chains); `(geom B)` is the limit of
//! the partial sums `1 + B + … + B^(i-1)` with the modulus `k ↦ k`, so it
//! only exists where `B^k` eventually lies in every level.

use ua_core::prochain::{CauchySequence, Completion, CongruenceChain, ModulusChain, ProElement, TableChain};
use ua_core::sexpr::Sexpr;
use ua_core::{Error, Result};

/// Terms past the modulus compared against it at each level.
pub const CAUCHY_WINDOW: usize = 8;

/// How a chain turns leaf forms into points.
pub trait Leaves: CongruenceChain + Sized + 'static {
    fn leaf(c: &Completion<Self>, head: &str, args: &[Sexpr], depth: usize) -> Result<Option<ProElement>>;
}

fn number<T: std::str::FromStr>(args: &[Sexpr], form: &str) -> Result<T> {
    match args {
        [Sexpr::Atom(a)] => a.parse().map_err(|_| Error::Parse(format!("({form} …) needs an integer, got `{a}`"))),
        _ => Err(Error::Parse(format!("({form} …) takes one integer"))),
    }
}

impl Leaves for ModulusChain {
    fn leaf(c: &Completion<Self>, head: &str, args: &[Sexpr], depth: usize) -> Result<Option<ProElement>> {
        match head {
            "eta" => Ok(Some(c.eta(number::<i128>(args, "eta")?))),
            "geom" => {
                let b: i128 = number(args, "geom")?;
                let seq = CauchySequence::new(
                    move |i| {
                        let mut sum = 0i128;
                        let mut p = 1i128;
                        for _ in 0..i {
                            sum = sum.checked_add(p).ok_or(Error::Parse("geometric sum overflows".into()))?;
                            p = p.checked_mul(b).ok_or(Error::Parse("geometric sum overflows".into()))?;
                        }
                        Ok(sum)
                    },
                    |k| k,
                );
                c.cauchy_to_pro(&seq, CAUCHY_WINDOW, depth).map(Some)
            }
            _ => Ok(None),
        }
    }
}

impl Leaves for TableChain {
    fn leaf(c: &Completion<Self>, head: &str, args: &[Sexpr], _depth: usize) -> Result<Option<ProElement>> {
        match head {
            "eta" => {
                let a: usize = number(args, "eta")?;
                let size = c.chain().algebra().size();
                if a >= size {
                    return Err(Error::ElementOutOfRange { element: a, size });
                }
                Ok(Some(c.eta(a)))
            }
            "geom" => Err(Error::Parse("(geom …) needs an integer chain".into())),
            _ => Ok(None),
        }
    }
}

pub fn eval<C: Leaves>(c: &Completion<C>, e: &Sexpr, depth: usize) -> Result<ProElement> {
    match e {
        Sexpr::Atom(a) => c.apply_symbol(a, &[]),
        Sexpr::List(items) => {
            let (head, rest) = items.split_first().ok_or_else(|| Error::Parse("empty expression".into()))?;
            let head = head.as_atom().ok_or_else(|| Error::Parse(format!("operator must be an atom, got {head}")))?;
            if let Some(x) = C::leaf(c, head, rest, depth)? {
                return Ok(x);
            }
            let args = rest.iter().map(|a| eval(c, a, depth)).collect::<Result<Vec<_>>>()?;
            c.apply_symbol(head, &args)
        }
    }
}

/// Errors that describe the input rather than the point being computed.
pub fn is_input_error(e: &Error) -> bool {
    matches!(e, Error::Parse(_) | Error::UnknownSymbol(_) | Error::Arity { .. } | Error::ElementOutOfRange { .. })
}
