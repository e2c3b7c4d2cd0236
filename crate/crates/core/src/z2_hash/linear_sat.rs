//! Linear Sat: count `x ∈ Z_2^n` with `xA = b` and `ω·x ≤ t`.

use num_bigint::{BigInt, BigUint};
use rand::Rng;

use super::algebra::GroupAlgebraVec;
use super::gf2::{gf2_rank_solve, EchelonBasis, Gf2Mat, Gf2Vec};
use super::{hash_z2_extract, DEFAULT_REPEATS};
use crate::circuits::{Circuit, CircuitBuilder, GateId};
use crate::{Error, Result};

/// Largest accepted weight budget `t`.
pub const MAX_WEIGHT_BUDGET: u64 = 1 << 60;

/// Largest number of DP cells `n · (t + 1)` in the counting circuit.
pub const MAX_CIRCUIT_CELLS: u64 = 1 << 24;

/// Largest number of free variables enumerated by the high-rank solver.
pub const MAX_FREE_VARIABLES: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSatInstance {
    a: Gf2Mat,
    b: Gf2Vec,
    weights: Vec<u64>,
    t: u64,
}

impl LinearSatInstance {
    pub fn new(a: Gf2Mat, b: Gf2Vec, weights: Vec<u64>, t: u64) -> Result<Self> {
        if b.len() != a.ncols() {
            return Err(Error::InvalidArgument(format!(
                "b has length {} but A has {} columns",
                b.len(),
                a.ncols()
            )));
        }
        if weights.len() != a.nrows() {
            return Err(Error::InvalidArgument(format!(
                "{} weights for {} rows",
                weights.len(),
                a.nrows()
            )));
        }
        Ok(Self { a, b, weights, t })
    }

    pub fn matrix(&self) -> &Gf2Mat {
        &self.a
    }

    pub fn rhs(&self) -> &Gf2Vec {
        &self.b
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn budget(&self) -> u64 {
        self.t
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn m(&self) -> usize {
        self.a.ncols()
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.n());
        for row in self.a.rows() {
            basis.insert(row);
        }
        basis.rank()
    }

    /// Whether `x` (length `n`) is a solution.
    pub fn accepts(&self, x: &Gf2Vec) -> bool {
        let weight: u128 = x.ones_iter().map(|i| u128::from(self.weights[i])).sum();
        weight <= u128::from(self.t) && self.a.left_mul(x) == self.b
    }
}

/// Circuit over `Z[Z_2^m]` whose output `v` has `v_y` equal to the number of
/// `x` with `xA = y` and `ω·x ≤ t`.
///
/// Cell `f[i, w]` counts prefixes `x ∈ Z_2^i` of weight exactly `w`, by
/// `f[i, w] = f[i-1, w] + f[i-1, w - ω_i] * ⟨1, A_i⟩`; empty cells are
/// omitted, and `t` is capped at `Σ ω_i`.
pub fn linear_sat_circuit(inst: &LinearSatInstance) -> Result<Circuit<GroupAlgebraVec>> {
    if inst.t > MAX_WEIGHT_BUDGET {
        return Err(Error::TooLarge(format!(
            "weight budget {} exceeds 2^60",
            inst.t
        )));
    }
    let total: u128 = inst.weights.iter().map(|&w| u128::from(w)).sum();
    let t = u128::from(inst.t).min(total) as u64;
    let n = inst.n();
    if (n as u64).saturating_mul(t + 1) > MAX_CIRCUIT_CELLS {
        return Err(Error::TooLarge(format!(
            "circuit with {n} × {} cells",
            t + 1
        )));
    }
    let width = t as usize + 1;
    let mut builder = CircuitBuilder::new();
    let mut prev: Vec<Option<GateId>> = vec![None; width];
    prev[0] = Some(builder.input(GroupAlgebraVec::one(inst.m())));
    for (i, row) in inst.a.rows().iter().enumerate() {
        let w_i = inst.weights[i];
        let mut row_gate = None;
        let mut cur = vec![None; width];
        for w in 0..width {
            let keep = prev[w];
            let take = (w as u64)
                .checked_sub(w_i)
                .and_then(|src| prev[src as usize])
                .map(|src| {
                    let r = *row_gate.get_or_insert_with(|| {
                        builder.input(GroupAlgebraVec::singleton(1, row.clone()))
                    });
                    builder.mul([src, r])
                });
            cur[w] = match (keep, take) {
                (Some(a), Some(b)) => Some(builder.add([a, b])),
                (a, b) => a.or(b),
            };
        }
        prev = cur;
    }
    let cells: Vec<GateId> = prev.into_iter().flatten().collect();
    let out = match cells.as_slice() {
        [single] => *single,
        _ => builder.add(cells),
    };
    builder.finish(out)
}

fn support_bound(inst: &LinearSatInstance) -> Result<u64> {
    let rank = inst.rank();
    if rank >= 63 {
        return Err(Error::TooLarge(format!("rank {rank} too large to hash")));
    }
    Ok(1 << rank)
}

fn to_count(x: BigInt) -> Result<BigUint> {
    x.to_biguint()
        .ok_or_else(|| Error::Arithmetic("negative count from hashing".into()))
}

/// One hashed run with `S̃ = 2^{rank A}`; correct with probability ≥ 1/2 and
/// never below the true count.
pub fn linear_sat_count<R: Rng + ?Sized>(inst: &LinearSatInstance, rng: &mut R) -> Result<BigUint> {
    let circuit = linear_sat_circuit(inst)?;
    to_count(hash_z2_extract(&circuit, support_bound(inst)?, &inst.b, rng)?)
}

/// Minimum over `repeats` hashed runs.
///
/// The circuit has nonnegative coefficients, so each run returns a sum of
/// coefficients that includes `v_b`; the minimum is exact unless every run
/// collides.
pub fn linear_sat_count_amplified<R: Rng + ?Sized>(
    inst: &LinearSatInstance,
    repeats: usize,
    rng: &mut R,
) -> Result<BigUint> {
    let circuit = linear_sat_circuit(inst)?;
    let bound = support_bound(inst)?;
    let mut best: Option<BigUint> = None;
    for _ in 0..repeats.max(1) {
        let x = to_count(hash_z2_extract(&circuit, bound, &inst.b, rng)?)?;
        if best.as_ref().is_none_or(|b| x < *b) {
            best = Some(x);
        }
    }
    Ok(best.expect("at least one run"))
}

/// Exact count in `O*(2^{n - rank A})` time and polynomial space.
///
/// Rows are split greedily into a basis `I` and the rest `D`; for every
/// assignment `z` of `D` there is at most one `y` on `I` with
/// `yA_I = b + zA_D`.
pub fn linear_sat_high_rank(inst: &LinearSatInstance) -> Result<BigUint> {
    let mut all = EchelonBasis::new(inst.n());
    let (independent, dependent): (Vec<usize>, Vec<usize>) =
        (0..inst.n()).partition(|&i| all.insert(inst.a.row(i)));
    if dependent.len() > MAX_FREE_VARIABLES {
        return Err(Error::TooLarge(format!(
            "{} free variables to enumerate",
            dependent.len()
        )));
    }
    let mut basis = EchelonBasis::new(independent.len());
    for &i in &independent {
        basis.insert(inst.a.row(i));
    }
    let t = u128::from(inst.t);
    let mut count = 0u128;
    for z in 0u64..1 << dependent.len() {
        let mut target = inst.b.clone();
        let mut weight = 0u128;
        for (k, &j) in dependent.iter().enumerate() {
            if z >> k & 1 == 1 {
                target.xor_assign(inst.a.row(j));
                weight += u128::from(inst.weights[j]);
            }
        }
        let (rem, combo) = basis.reduce(&target);
        if !rem.is_zero() {
            continue;
        }
        weight += combo
            .ones_iter()
            .map(|k| u128::from(inst.weights[independent[k]]))
            .sum::<u128>();
        if weight <= t {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WinWinBranch {
    HighRank,
    Hash,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WinWinOutcome {
    pub branch: WinWinBranch,
    pub rank: usize,
    pub count: BigUint,
}

impl WinWinOutcome {
    pub fn satisfiable(&self) -> bool {
        self.count != BigUint::default()
    }
}

/// High-rank enumeration when `rank A ≥ n/2`, else the amplified hashed
/// count over `repeats` runs (default [`DEFAULT_REPEATS`] when 0).
pub fn linear_sat_winwin<R: Rng + ?Sized>(
    inst: &LinearSatInstance,
    repeats: usize,
    rng: &mut R,
) -> Result<WinWinOutcome> {
    let rank = gf2_rank_solve(&inst.a, &inst.b)?.rank;
    let (branch, count) = if 2 * rank >= inst.n() {
        (WinWinBranch::HighRank, linear_sat_high_rank(inst)?)
    } else {
        let repeats = if repeats == 0 { DEFAULT_REPEATS } else { repeats };
        (
            WinWinBranch::Hash,
            linear_sat_count_amplified(inst, repeats, rng)?,
        )
    };
    Ok(WinWinOutcome {
        branch,
        rank,
        count,
    })
}
