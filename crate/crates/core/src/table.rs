//! Operation tables over a finite carrier.
//!
//! A table of arity `m` over a carrier of size `n` is a row-major array of
//! `n^m` entries. The argument tuple `(a_0, …, a_{m-1})` sits at the
//! mixed-radix index `((a_0·n + a_1)·n + …)·n + a_{m-1}`, so the first
//! argument is the most significant digit. Nullary tables have one entry.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpTable {
    size: usize,
    arity: usize,
    values: Vec<usize>,
}

impl OpTable {
    pub fn new(size: usize, arity: usize, values: Vec<usize>) -> Result<Self> {
        let expected =
            checked_pow(size, arity).ok_or(Error::CapExceeded { what: "operation table", size, cap: usize::MAX })?;
        if values.len() != expected {
            return Err(Error::TableShape { expected, found: values.len() });
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= size) {
            return Err(Error::ElementOutOfRange { element: bad, size });
        }
        Ok(OpTable { size, arity, values })
    }

    /// Tabulates `f` over every argument tuple.
    pub fn from_fn(size: usize, arity: usize, mut f: impl FnMut(&[usize]) -> usize) -> Result<Self> {
        let mut values = Vec::new();
        for args in Tuples::new(size, arity) {
            values.push(f(&args));
        }
        Self::new(size, arity, values)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn index(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.size + a)
    }

    /// Panics if `args` has the wrong length or an out-of-range entry; use
    /// [`OpTable::try_apply`] on untrusted input.
    pub fn apply(&self, args: &[usize]) -> usize {
        assert_eq!(args.len(), self.arity, "arity mismatch");
        self.values[self.index(args)]
    }

    pub fn try_apply(&self, args: &[usize]) -> Result<usize> {
        if args.len() != self.arity {
            return Err(Error::Arity { expected: self.arity, found: args.len() });
        }
        if let Some(&bad) = args.iter().find(|&&a| a >= self.size) {
            return Err(Error::ElementOutOfRange { element: bad, size: self.size });
        }
        Ok(self.values[self.index(args)])
    }

    /// The table with argument `pos` moved to the front, the others keeping
    /// their relative order. Used to read `U^ω` at any argument position.
    pub fn move_to_front(&self, pos: usize) -> OpTable {
        assert!(pos < self.arity);
        let mut values = vec![0; self.values.len()];
        let mut original = vec![0; self.arity];
        for (idx, args) in Tuples::new(self.size, self.arity).enumerate() {
            original[pos] = args[0];
            let mut rest = args[1..].iter();
            for (slot, item) in original.iter_mut().enumerate() {
                if slot != pos {
                    *item = *rest.next().unwrap();
                }
            }
            values[idx] = self.apply(&original);
        }
        OpTable { size: self.size, arity: self.arity, values }
    }

    /// The sorted set of values the table takes.
    pub fn image(&self) -> Vec<usize> {
        let mut seen = vec![false; self.size];
        for &v in &self.values {
            seen[v] = true;
        }
        (0..self.size).filter(|&v| seen[v]).collect()
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

/// Odometer over all tuples in `{0..size}^len`, first coordinate most
/// significant. Yields exactly one empty tuple when `len == 0`.
#[derive(Clone, Debug)]
pub struct Tuples {
    size: usize,
    current: Vec<usize>,
    done: bool,
}

impl Tuples {
    pub fn new(size: usize, len: usize) -> Self {
        Tuples { size, current: vec![0; len], done: size == 0 && len > 0 }
    }
}

impl Iterator for Tuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.current[i] += 1;
            if self.current[i] < self.size {
                break;
            }
            self.current[i] = 0;
        }
        Some(out)
    }
}
