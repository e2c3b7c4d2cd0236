//! Set Cover by top-coefficient extraction in the union-product algebra.
//!
//! `f[i, j] = f[i-1, j] + f[i-1, j-1] * ⟨1, S_i⟩` makes `f[i, j]_X` the
//! number of `j`-subfamilies of `S_1, …, S_i` with union `X`, so the answer
//! is the top coefficient of `f[m, k]`.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::budget::StepBudget;
use crate::circuits::{Circuit, CircuitBuilder, GateId};
use crate::family::SetFamily;
use crate::union_hash::{extract_top_dovetail, UnionAlgebraVec};
use crate::{Error, Result};

/// Largest universe for which [`union_count`] enumerates reachable unions.
pub const MAX_ALPHA_UNIVERSE: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    family: SetFamily,
    k: usize,
}

impl SetCoverInstance {
    pub fn new(family: SetFamily, k: usize) -> Result<Self> {
        if k > family.len() {
            return Err(Error::InvalidArgument(format!(
                "k = {k} exceeds the family size {}",
                family.len()
            )));
        }
        Ok(Self { family, k })
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// The `f[m, k]` circuit, or `None` when it is identically zero.
pub fn set_cover_circuit(inst: &SetCoverInstance) -> Result<Option<Circuit<UnionAlgebraVec>>> {
    let n = inst.family.universe();
    let k = inst.k;
    let mut b = CircuitBuilder::new();
    // row[j] = f[i, j]; None is the zero vector.
    let mut row: Vec<Option<GateId>> = vec![None; k + 1];
    row[0] = Some(b.input(UnionAlgebraVec::one(n)));
    for &set in inst.family.sets() {
        for j in (1..=k).rev() {
            let take = row[j - 1].map(|prev| {
                let s = b.input(UnionAlgebraVec::singleton(n, 1, set));
                b.mul([prev, s])
            });
            row[j] = match (row[j], take) {
                (Some(a), Some(t)) => Some(b.add([a, t])),
                (a, t) => a.or(t),
            };
        }
    }
    row[k].map(|out| b.finish(out)).transpose()
}

/// Number of `k`-subfamilies whose union is the whole universe.
pub fn set_cover_count(inst: &SetCoverInstance, budget: &mut StepBudget) -> Result<BigUint> {
    let Some(circuit) = set_cover_circuit(inst)? else {
        return Ok(BigUint::zero());
    };
    let top = extract_top_dovetail(&circuit, budget)?.value;
    top.to_biguint()
        .ok_or_else(|| Error::Arithmetic(format!("negative cover count {top}")))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SetCoverDecision {
    pub yes: bool,
    pub count: BigUint,
    /// `|{∪C : |C| = k}|`, when the universe is small enough to enumerate.
    pub union_count: Option<u64>,
    /// `1 - log₂(union_count)/n`, the sparsity exponent of the instance.
    pub alpha: Option<f64>,
}

pub fn set_cover_decide(inst: &SetCoverInstance, budget: &mut StepBudget) -> Result<SetCoverDecision> {
    let count = set_cover_count(inst, budget)?;
    let union_count = union_count(inst);
    let n = inst.family.universe();
    let alpha = union_count
        .filter(|&c| c > 0 && n > 0)
        .map(|c| 1.0 - (c as f64).log2() / n as f64);
    Ok(SetCoverDecision {
        yes: !count.is_zero(),
        count,
        union_count,
        alpha,
    })
}

/// Distinct unions of `k`-subfamilies by a reachability sweep over
/// `2^n`-bit tables; `None` above [`MAX_ALPHA_UNIVERSE`].
pub fn union_count(inst: &SetCoverInstance) -> Option<u64> {
    let n = inst.family.universe();
    if n > MAX_ALPHA_UNIVERSE {
        return None;
    }
    let k = inst.k;
    let size = 1usize << n;
    let mut reach = vec![vec![false; size]; k + 1];
    reach[0][0] = true;
    for &set in inst.family.sets() {
        for j in (1..=k).rev() {
            let (lower, upper) = reach.split_at_mut(j);
            for x in (0..size).filter(|&x| lower[j - 1][x]) {
                upper[0][x | set as usize] = true;
            }
        }
    }
    Some(reach[k].iter().filter(|&&r| r).count() as u64)
}
