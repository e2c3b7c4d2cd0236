//! The semigroup algebra `Z[(2^U, ∪)]`: finitely supported maps on subsets
//! with `(a * b)_Z = Σ_{X ∪ Y = Z} a_X b_Y`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::circuits::Ring;
use crate::family::{full_mask, MAX_UNIVERSE};
use crate::Result;

/// Subsets of `{0, …, n-1}` as masks, with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnionAlgebraVec {
    n: usize,
    entries: BTreeMap<u64, BigInt>,
}

impl UnionAlgebraVec {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_UNIVERSE, "ground set too large");
        Self {
            n,
            entries: BTreeMap::new(),
        }
    }

    /// `⟨value, set⟩`; a zero value gives the zero vector.
    pub fn singleton(n: usize, value: impl Into<BigInt>, set: u64) -> Self {
        let mut out = Self::zero(n);
        out.add_term(set, value.into());
        out
    }

    /// `⟨1, ∅⟩`, the multiplicative identity.
    pub fn one(n: usize) -> Self {
        Self::singleton(n, 1, 0)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coefficient(&self, set: u64) -> BigInt {
        self.entries.get(&set).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(value, set)` for vectors of support size at most one; the zero
    /// vector reads as `⟨0, ∅⟩`.
    pub fn as_singleton(&self) -> Option<(BigInt, u64)> {
        let mut it = self.entries.iter();
        match (it.next(), it.next()) {
            (None, _) => Some((BigInt::zero(), 0)),
            (Some((&x, v)), None) => Some((v.clone(), x)),
            _ => None,
        }
    }

    pub fn has_negative(&self) -> bool {
        self.entries.values().any(Signed::is_negative)
    }

    pub fn add_term(&mut self, set: u64, value: BigInt) {
        assert_eq!(set & !full_mask(self.n), 0, "set outside the ground set");
        if value.is_zero() {
            return;
        }
        match self.entries.entry(set) {
            Entry::Vacant(e) => {
                e.insert(value);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += value;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&x, v) in &other.entries {
            out.add_term(x, v.clone());
        }
        out
    }

    /// The union product.
    pub fn union_product(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (&x, a) in &self.entries {
            for (&y, b) in &other.entries {
                out.add_term(x | y, a * b);
            }
        }
        out
    }

    /// Image under `⟨v, W⟩ ↦ ⟨v, W ∩ mask⟩`.
    pub fn restrict(&self, mask: u64) -> Self {
        let mut out = Self::zero(self.n);
        for (&x, v) in &self.entries {
            out.add_term(x & mask, v.clone());
        }
        out
    }
}

/// `Z[(2^U, ∪)]` with `|U| = n` as a circuit ring.
#[derive(Clone, Copy, Debug)]
pub struct UnionAlgebra {
    pub n: usize,
}

impl Ring for UnionAlgebra {
    type Elem = UnionAlgebraVec;

    fn zero(&self) -> UnionAlgebraVec {
        UnionAlgebraVec::zero(self.n)
    }

    fn one(&self) -> UnionAlgebraVec {
        UnionAlgebraVec::one(self.n)
    }

    fn add(&self, a: &UnionAlgebraVec, b: &UnionAlgebraVec) -> Result<UnionAlgebraVec> {
        Ok(a.add(b))
    }

    fn mul(&self, a: &UnionAlgebraVec, b: &UnionAlgebraVec) -> Result<UnionAlgebraVec> {
        Ok(a.union_product(b))
    }
}
