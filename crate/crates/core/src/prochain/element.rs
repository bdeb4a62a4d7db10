use alloc::boxed::Box;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use super::System;
use crate::error::{Error, Result};

type LevelFn = Box<dyn Fn(usize) -> Result<u64>>;

/// A point of an inverse limit, given by a level evaluator and memoized.
///
/// Levels are computed in order, and each new level is checked against the
/// one below through the connecting map, so every memoized prefix is
/// coherent. The memo is a `RefCell`: an element and its clones belong to a
/// single thread.
#[derive(Clone)]
pub struct ProElement {
    inner: Rc<Inner>,
}

struct Inner {
    system: System,
    eval: LevelFn,
    memo: RefCell<Vec<u64>>,
}

impl ProElement {
    pub fn new(system: System, eval: impl Fn(usize) -> Result<u64> + 'static) -> Self {
        ProElement { inner: Rc::new(Inner { system, eval: Box::new(eval), memo: RefCell::new(Vec::new()) }) }
    }

    pub fn system(&self) -> &System {
        &self.inner.system
    }

    /// `c_k`. Errors if the depth is not representable, the evaluator fails,
    /// or the result is out of range or incoherent with `c_{k-1}`.
    pub fn level(&self, k: usize) -> Result<u64> {
        if let Some(&c) = self.inner.memo.borrow().get(k) {
            return Ok(c);
        }
        let sys = &self.inner.system;
        sys.check_depth(k)?;
        let start = self.inner.memo.borrow().len();
        for j in start..=k {
            let c = (self.inner.eval)(j)?;
            let size = sys.level_size(j);
            if c >= size {
                return Err(Error::ElementOutOfRange { element: c as usize, size: size as usize });
            }
            let mut memo = self.inner.memo.borrow_mut();
            if j > 0 {
                let lower = memo[j - 1];
                if sys.connect(j - 1, c) != lower {
                    return Err(Error::Incoherent { level: j - 1, upper: c, lower });
                }
            }
            memo.push(c);
        }
        Ok(self.inner.memo.borrow()[k])
    }

    /// `(c_0, …, c_depth)`.
    pub fn levels(&self, depth: usize) -> Result<Vec<u64>> {
        self.level(depth)?;
        Ok(self.inner.memo.borrow()[..=depth].to_vec())
    }

    /// Highest memoized level.
    pub fn evaluated_depth(&self) -> Option<usize> {
        self.inner.memo.borrow().len().checked_sub(1)
    }

    pub fn ptr_eq(&self, other: &ProElement) -> bool {
        Rc::ptr_eq(&self.inner, &other.inner)
    }
}

impl fmt::Debug for ProElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProElement{:?}", self.inner.memo.borrow())
    }
}
