//! The group algebra `Z[Z_2^n]` with XOR convolution as product.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::gf2::Gf2Vec;
use crate::circuits::Ring;
use crate::{Error, Result};

/// A finitely supported map `Z_2^n → Z` with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraVec {
    n: usize,
    entries: BTreeMap<Gf2Vec, BigInt>,
}

impl GroupAlgebraVec {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: BTreeMap::new(),
        }
    }

    /// The singleton `⟨value, point⟩`.
    pub fn singleton(value: impl Into<BigInt>, point: Gf2Vec) -> Self {
        let mut out = Self::zero(point.len());
        out.add_term(point, value.into());
        out
    }

    /// `⟨1, 0ⁿ⟩`, the multiplicative identity.
    pub fn one(n: usize) -> Self {
        Self::singleton(1, Gf2Vec::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coefficient(&self, point: &Gf2Vec) -> BigInt {
        self.entries.get(point).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = &Gf2Vec> {
        self.entries.keys()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Gf2Vec, &BigInt)> {
        self.entries.iter()
    }

    /// `(value, point)` when the support has exactly one element.
    pub fn as_singleton(&self) -> Option<(&BigInt, &Gf2Vec)> {
        let mut it = self.entries.iter();
        match (it.next(), it.next()) {
            (Some((p, v)), None) => Some((v, p)),
            _ => None,
        }
    }

    pub fn add_term(&mut self, point: Gf2Vec, value: BigInt) {
        assert_eq!(point.len(), self.n, "dimension mismatch");
        if value.is_zero() {
            return;
        }
        let slot = self.entries.entry(point);
        match slot {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += value;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, v) in &other.entries {
            out.add_term(p.clone(), v.clone());
        }
        out
    }

    pub fn convolve(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (x, a) in &self.entries {
            for (y, b) in &other.entries {
                out.add_term(x.xor(y), a * b);
            }
        }
        out
    }

    /// Image under `⟨v, y⟩ ↦ ⟨v, yH⟩` for `H` given by its `n` rows.
    pub fn hash(&self, h_rows: &[Gf2Vec], s: usize) -> Self {
        let mut out = Self::zero(s);
        for (y, v) in &self.entries {
            out.add_term(hash_point(y, h_rows, s), v.clone());
        }
        out
    }
}

/// `yH`, the XOR of the rows of `H` selected by `y`.
pub fn hash_point(y: &Gf2Vec, h_rows: &[Gf2Vec], s: usize) -> Gf2Vec {
    let mut out = Gf2Vec::zeros(s);
    for i in y.ones_iter() {
        out.xor_assign(&h_rows[i]);
    }
    out
}

/// `Z[Z_2^n]` as a circuit ring.
#[derive(Clone, Copy, Debug)]
pub struct GroupAlgebra {
    pub n: usize,
}

impl Ring for GroupAlgebra {
    type Elem = GroupAlgebraVec;

    fn zero(&self) -> GroupAlgebraVec {
        GroupAlgebraVec::zero(self.n)
    }

    fn one(&self) -> GroupAlgebraVec {
        GroupAlgebraVec::one(self.n)
    }

    fn add(&self, a: &GroupAlgebraVec, b: &GroupAlgebraVec) -> Result<GroupAlgebraVec> {
        check_dims(self.n, a, b)?;
        Ok(a.add(b))
    }

    fn mul(&self, a: &GroupAlgebraVec, b: &GroupAlgebraVec) -> Result<GroupAlgebraVec> {
        check_dims(self.n, a, b)?;
        Ok(a.convolve(b))
    }
}

fn check_dims(n: usize, a: &GroupAlgebraVec, b: &GroupAlgebraVec) -> Result<()> {
    if a.n != n || b.n != n {
        return Err(Error::InvalidArgument(format!(
            "group algebra dimensions {} and {} differ from {n}",
            a.n, b.n
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_sparse(rng: &mut impl Rng, n: usize, terms: usize) -> GroupAlgebraVec {
        let mut v = GroupAlgebraVec::zero(n);
        for _ in 0..terms {
            v.add_term(
                Gf2Vec::from_u64(rng.gen(), n),
                BigInt::from(rng.gen_range(-5i64..=5)),
            );
        }
        v
    }

    #[test]
    fn singleton_product_xors_points() {
        let a = GroupAlgebraVec::singleton(2, Gf2Vec::parse("10").unwrap());
        let b = GroupAlgebraVec::singleton(3, Gf2Vec::parse("11").unwrap());
        assert_eq!(
            a.convolve(&b),
            GroupAlgebraVec::singleton(6, Gf2Vec::parse("01").unwrap())
        );
        assert!(GroupAlgebraVec::zero(2).as_singleton().is_none());
    }

    #[test]
    fn cancellation_removes_entries() {
        let p = Gf2Vec::parse("1").unwrap();
        let mut v = GroupAlgebraVec::singleton(4, p.clone());
        v.add_term(p, BigInt::from(-4));
        assert_eq!(v.support_len(), 0);
    }

    #[test]
    fn hashing_is_a_ring_homomorphism() {
        let mut rng = crate::rng::stream(5, "hash-hom");
        for _ in 0..100 {
            let n = rng.gen_range(1..10);
            let s = rng.gen_range(1..5);
            let h: Vec<Gf2Vec> = (0..n).map(|_| Gf2Vec::from_u64(rng.gen(), s)).collect();
            let a = random_sparse(&mut rng, n, 6);
            let b = random_sparse(&mut rng, n, 6);
            assert_eq!(a.convolve(&b).hash(&h, s), a.hash(&h, s).convolve(&b.hash(&h, s)));
            assert_eq!(a.add(&b).hash(&h, s), a.hash(&h, s).add(&b.hash(&h, s)));
        }
    }
}
