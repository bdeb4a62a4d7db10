use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{CongruenceChain, EffectiveAlgebra, InverseSystem};
use crate::algebra::{FiniteAlgebra, Signature};
use crate::error::{Error, Result};
use crate::relation::Carrier;
use crate::table::OpTable;

/// The integers with `add, neg, zero, mul`.
///
/// There is deliberately no unit constant, so maps like `x ↦ 3x` between
/// residue rings count as homomorphisms. Elements are `i128`; evaluation
/// panics on overflow, which cannot happen for operands below `2^62`.
#[derive(Clone, Debug)]
pub struct Integers {
    signature: Signature,
}

impl Integers {
    pub const ADD: usize = 0;
    pub const NEG: usize = 1;
    pub const ZERO: usize = 2;
    pub const MUL: usize = 3;

    pub fn new() -> Self {
        Integers { signature: Signature::new([("add", 2), ("neg", 1), ("zero", 0), ("mul", 2)]).unwrap() }
    }

    /// `Z/n` as a finite algebra over the same signature.
    pub fn residues(n: usize) -> Result<FiniteAlgebra> {
        let carrier = Carrier::new(n)?;
        let tables = vec![
            OpTable::from_fn(n, 2, |a| (a[0] + a[1]) % n)?,
            OpTable::from_fn(n, 1, |a| (n - a[0]) % n)?,
            OpTable::new(n, 0, vec![0])?,
            OpTable::from_fn(n, 2, |a| a[0] * a[1] % n)?,
        ];
        FiniteAlgebra::new(carrier, Integers::new().signature, tables)
    }
}

impl Default for Integers {
    fn default() -> Self {
        Self::new()
    }
}

impl EffectiveAlgebra for Integers {
    type Elem = i128;

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn apply(&self, op: usize, args: &[i128]) -> i128 {
        match op {
            Self::ADD => args[0].checked_add(args[1]).expect("integer overflow"),
            Self::NEG => args[0].checked_neg().expect("integer overflow"),
            Self::ZERO => 0,
            Self::MUL => args[0].checked_mul(args[1]).expect("integer overflow"),
            _ => panic!("unknown integer operation {op}"),
        }
    }
}

/// Congruences mod `m_k` on the integers, `m_k | m_{k+1}`.
///
/// An explicit list is stationary past its end; a power chain `base^k` is
/// unbounded in principle and capped where `u64` overflows.
#[derive(Clone, Debug)]
pub struct ModulusChain {
    integers: Integers,
    moduli: Vec<u64>,
    stationary: bool,
}

impl ModulusChain {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::ChainShape("empty modulus list".into()));
        }
        if let Some(k) = moduli.iter().position(|&m| m == 0) {
            return Err(Error::ChainShape(format!("modulus at level {k} is zero")));
        }
        for (k, w) in moduli.windows(2).enumerate() {
            if w[1] % w[0] != 0 {
                return Err(Error::ChainShape(format!("m_{k} = {} does not divide m_{} = {}", w[0], k + 1, w[1])));
            }
        }
        Ok(ModulusChain { integers: Integers::new(), moduli, stationary: true })
    }

    /// `m_k = base^k`, starting from `m_0 = 1`.
    pub fn powers(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::ChainShape(format!("power chain base {base} must be at least 2")));
        }
        let mut moduli = vec![1u64];
        while let Some(next) = moduli.last().unwrap().checked_mul(base) {
            moduli.push(next);
        }
        Ok(ModulusChain { integers: Integers::new(), moduli, stationary: false })
    }

    /// Every level is `Z/m`.
    pub fn constant(m: u64) -> Result<Self> {
        Self::new(vec![m])
    }

    pub fn modulus(&self, k: usize) -> u64 {
        match self.moduli.get(k) {
            Some(&m) => m,
            None if self.stationary => *self.moduli.last().unwrap(),
            None => panic!("level {k} beyond the representable depth {}", self.moduli.len() - 1),
        }
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn is_stationary(&self) -> bool {
        self.stationary
    }

    /// The coherent sequence with digits `dᵢ` in the mixed-radix expansion
    /// `Σ dᵢ·mᵢ`, each digit reduced mod `m_{i+1}/m_i`.
    pub fn digits_to_level(&self, k: usize, digit: impl Fn(usize) -> u64) -> u64 {
        let mut acc = 0u64;
        for i in 0..k {
            let radix = self.modulus(i + 1) / self.modulus(i);
            acc += (digit(i) % radix) * self.modulus(i);
        }
        acc
    }
}

impl InverseSystem for ModulusChain {
    fn signature(&self) -> &Signature {
        &self.integers.signature
    }

    fn max_level(&self) -> Option<usize> {
        if self.stationary {
            None
        } else {
            Some(self.moduli.len() - 1)
        }
    }

    fn level_size(&self, k: usize) -> u64 {
        self.modulus(k)
    }

    fn apply(&self, k: usize, op: usize, args: &[u64]) -> u64 {
        let m = self.modulus(k) as u128;
        (match op {
            Integers::ADD => (args[0] as u128 + args[1] as u128) % m,
            Integers::NEG => (m - args[0] as u128 % m) % m,
            Integers::ZERO => 0,
            Integers::MUL => (args[0] as u128 * args[1] as u128) % m,
            _ => panic!("unknown integer operation {op}"),
        }) as u64
    }

    fn connect(&self, k: usize, x: u64) -> u64 {
        x % self.modulus(k)
    }
}

impl CongruenceChain for ModulusChain {
    type Algebra = Integers;

    fn algebra(&self) -> &Integers {
        &self.integers
    }

    fn nat(&self, k: usize, a: &i128) -> Result<u64> {
        Ok(a.rem_euclid(self.modulus(k) as i128) as u64)
    }

    fn lift(&self, _k: usize, class: u64) -> i128 {
        class as i128
    }

    fn refines(&self, j: usize, coarse: &Self, k: usize) -> bool {
        if self.check_depth(j).is_err() || coarse.check_depth(k).is_err() {
            return false;
        }
        self.modulus(j).is_multiple_of(coarse.modulus(k))
    }
}

/// Explicit finite levels with connecting maps. The algebra is the top level
/// and `nat_k` the composite projection onto level `k`. Levels past the top
/// repeat it with identity connecting maps.
#[derive(Clone, Debug)]
pub struct TableChain {
    levels: Vec<FiniteAlgebra>,
    connect: Vec<Vec<usize>>,
    /// `nat[k][a]` for `a` in the top level.
    nat: Vec<Vec<usize>>,
    /// One preimage in the top level per class of level `k`.
    lift: Vec<Vec<usize>>,
}

impl TableChain {
    /// `connect[k]` maps level `k+1` onto level `k`. Each must be a
    /// surjective homomorphism.
    pub fn new(levels: Vec<FiniteAlgebra>, connect: Vec<Vec<usize>>) -> Result<Self> {
        let top = levels.len().checked_sub(1).ok_or_else(|| Error::ChainShape("no levels".into()))?;
        if connect.len() != top {
            return Err(Error::ChainShape(format!(
                "{} levels need {top} connecting maps, got {}",
                levels.len(),
                connect.len()
            )));
        }
        for (k, map) in connect.iter().enumerate() {
            let (lo, hi) = (&levels[k], &levels[k + 1]);
            if lo.signature() != hi.signature() {
                return Err(Error::ChainShape(format!("levels {k} and {} have different signatures", k + 1)));
            }
            if map.len() != hi.size() || map.iter().any(|&x| x >= lo.size()) {
                return Err(Error::ChainShape(format!("connecting map {k} has the wrong shape")));
            }
        }
        let sizes: Vec<usize> = levels.iter().map(FiniteAlgebra::size).collect();
        let mut nat = vec![Vec::new(); levels.len()];
        nat[top] = (0..sizes[top]).collect();
        for k in (0..top).rev() {
            nat[k] = nat[k + 1].iter().map(|&x| connect[k][x]).collect();
        }
        let mut lift = Vec::with_capacity(levels.len());
        for k in 0..=top {
            let mut l = vec![usize::MAX; sizes[k]];
            for a in (0..sizes[top]).rev() {
                l[nat[k][a]] = a;
            }
            lift.push(l);
        }
        let chain = TableChain { levels, connect, nat, lift };
        super::check_connecting_maps(&chain, top, u64::MAX)?;
        Ok(chain)
    }

    pub fn levels(&self) -> &[FiniteAlgebra] {
        &self.levels
    }

    pub fn connecting_maps(&self) -> &[Vec<usize>] {
        &self.connect
    }

    fn clamp(&self, k: usize) -> usize {
        k.min(self.levels.len() - 1)
    }
}

impl InverseSystem for TableChain {
    fn signature(&self) -> &Signature {
        self.levels[0].signature()
    }

    fn max_level(&self) -> Option<usize> {
        None
    }

    fn level_size(&self, k: usize) -> u64 {
        self.levels[self.clamp(k)].size() as u64
    }

    fn apply(&self, k: usize, op: usize, args: &[u64]) -> u64 {
        let args: Vec<usize> = args.iter().map(|&a| a as usize).collect();
        self.levels[self.clamp(k)].tables()[op].apply(&args) as u64
    }

    fn connect(&self, k: usize, x: u64) -> u64 {
        match self.connect.get(k) {
            Some(map) => map[x as usize] as u64,
            None => x,
        }
    }
}

impl CongruenceChain for TableChain {
    type Algebra = FiniteAlgebra;

    fn algebra(&self) -> &FiniteAlgebra {
        self.levels.last().unwrap()
    }

    fn nat(&self, k: usize, a: &usize) -> Result<u64> {
        let row = &self.nat[self.clamp(k)];
        row.get(*a).map(|&c| c as u64).ok_or(Error::ElementOutOfRange { element: *a, size: row.len() })
    }

    fn lift(&self, k: usize, class: u64) -> usize {
        self.lift[self.clamp(k)][class as usize]
    }

    fn refines(&self, j: usize, coarse: &Self, k: usize) -> bool {
        let top = self.algebra().size();
        if coarse.algebra().size() != top {
            return false;
        }
        // The coarse class must be a function of the fine class.
        let mut image = vec![u64::MAX; self.level_size(j) as usize];
        (0..top).all(|a| {
            let (f, c) = (self.nat[self.clamp(j)][a], coarse.nat[coarse.clamp(k)][a] as u64);
            if image[f] == u64::MAX {
                image[f] = c;
            }
            image[f] == c
        })
    }
}
