//! The Solomon algebra `Z[P]` of a set-family poset with a minimum.
//!
//! The product `(f ⊗ g)_z = Σ_{x,y} (Σ_{x,y ≤ q ≤ z} μ(q,z)) f_x g_y` makes
//! `f ↦ fζ` a ring isomorphism onto pointwise multiplication. The hashing
//! algorithms only ever use the pointwise side; this type exists so the
//! algebra itself can be checked.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::algebra::UnionAlgebraVec;
use crate::poset_moebius::{mobius_transform_poset, zeta_transform_poset, MobiusTable, PosetOnFamily};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolomonAlgebraVec {
    poset: Arc<PosetOnFamily>,
    entries: Vec<BigInt>,
}

impl SolomonAlgebraVec {
    /// Fails unless the poset has a minimum and `entries` matches its size.
    pub fn new(poset: Arc<PosetOnFamily>, entries: Vec<BigInt>) -> Result<Self> {
        let bottom = poset
            .elements()
            .first()
            .copied()
            .ok_or_else(|| Error::InvalidArgument("empty poset".into()))?;
        if poset.elements().iter().any(|&x| bottom & !x != 0) {
            return Err(Error::InvalidArgument("poset has no minimum".into()));
        }
        if entries.len() != poset.len() {
            return Err(Error::InvalidArgument(format!(
                "{} entries for a poset of size {}",
                entries.len(),
                poset.len()
            )));
        }
        Ok(Self { poset, entries })
    }

    pub fn zero(poset: Arc<PosetOnFamily>) -> Result<Self> {
        let len = poset.len();
        Self::new(poset, vec![BigInt::zero(); len])
    }

    /// `⟨value, x⟩`.
    pub fn unit(poset: Arc<PosetOnFamily>, value: impl Into<BigInt>, x: u64) -> Result<Self> {
        let i = poset
            .index_of(x)
            .ok_or_else(|| Error::NotFound(format!("{x:#b} is not in the poset")))?;
        let mut out = Self::zero(poset)?;
        out.entries[i] = value.into();
        Ok(out)
    }

    /// `⟨1, 0̂⟩`.
    pub fn one(poset: Arc<PosetOnFamily>) -> Result<Self> {
        let bottom = poset.elements().first().copied().unwrap_or(0);
        Self::unit(poset, 1, bottom)
    }

    pub fn poset(&self) -> &Arc<PosetOnFamily> {
        &self.poset
    }

    /// Coefficients in the poset's linear-extension order.
    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_poset(self, other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.poset.clone(), entries)
    }

    /// `fζ` as a vector indexed like the poset.
    pub fn zeta(&self) -> Vec<BigInt> {
        zeta_transform_poset(&self.poset, &self.entries).expect("length checked at construction")
    }

    /// Inverse of [`SolomonAlgebraVec::zeta`].
    pub fn from_zeta(poset: Arc<PosetOnFamily>, values: &[BigInt]) -> Result<Self> {
        let entries = mobius_transform_poset(&poset, values)?;
        Self::new(poset, entries)
    }
}

fn same_poset(f: &SolomonAlgebraVec, g: &SolomonAlgebraVec) -> Result<()> {
    if Arc::ptr_eq(&f.poset, &g.poset) || f.poset == g.poset {
        Ok(())
    } else {
        Err(Error::InvalidArgument("operands live on different posets".into()))
    }
}

/// The Solomon product, summed term by term from its definition.
pub fn solomon_multiply(f: &SolomonAlgebraVec, g: &SolomonAlgebraVec) -> Result<SolomonAlgebraVec> {
    same_poset(f, g)?;
    let poset = &f.poset;
    let mu = MobiusTable::new(poset)?;
    let len = poset.len();
    let mut out = vec![BigInt::zero(); len];
    for (z, slot) in out.iter_mut().enumerate() {
        for x in 0..len {
            if f.entries[x].is_zero() {
                continue;
            }
            for y in 0..len {
                if g.entries[y].is_zero() {
                    continue;
                }
                let coeff: i128 = (0..len)
                    .filter(|&q| poset.leq(x, q) && poset.leq(y, q) && poset.leq(q, z))
                    .map(|q| mu.get(q, z))
                    .sum();
                if coeff != 0 {
                    *slot += BigInt::from(coeff) * &f.entries[x] * &g.entries[y];
                }
            }
        }
    }
    SolomonAlgebraVec::new(poset.clone(), out)
}

/// `h(a) = ⊕_X ⟨a_X, 0̂⟩ ⊗ ⊗_{e ∈ X} ⟨1, e⟩`, where the point `e` of the
/// ground set is the element whose zeta transform is `x ↦ [{e} ⊆ x]`.
///
/// Computed literally with [`solomon_multiply`]; requires `∅` in the poset.
pub fn solomon_embed(a: &UnionAlgebraVec, poset: Arc<PosetOnFamily>) -> Result<SolomonAlgebraVec> {
    if !poset.contains(0) {
        return Err(Error::NotFound("the poset must contain the empty set".into()));
    }
    let point = |e: usize| -> Result<SolomonAlgebraVec> {
        let values: Vec<BigInt> = poset
            .elements()
            .iter()
            .map(|&x| BigInt::from(u8::from(x >> e & 1 == 1)))
            .collect();
        SolomonAlgebraVec::from_zeta(poset.clone(), &values)
    };
    let mut out = SolomonAlgebraVec::zero(poset.clone())?;
    for (set, value) in a.iter() {
        let mut term = SolomonAlgebraVec::unit(poset.clone(), value.clone(), 0)?;
        for e in (0..a.dim()).filter(|&e| set >> e & 1 == 1) {
            term = solomon_multiply(&term, &point(e)?)?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}
