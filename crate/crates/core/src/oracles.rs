//! Brute-force reference implementations.
//!
//! Each oracle enumerates its whole search space and refuses inputs above a
//! hard size gate. None of them calls into the algorithms they check: they
//! read instance data through accessors and redo all arithmetic themselves.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::circuits::{Circuit, Gate};
use crate::cnf_projections::{Clause, CnfFormula};
use crate::z2_hash::{GroupAlgebraVec, LinearSatInstance};
use crate::union_hash::UnionAlgebraVec;
use crate::{Error, Result};

pub const MAX_SUBSET_SUM_N: usize = 24;
pub const MAX_LINEAR_SAT_N: usize = 20;
pub const MAX_CNF_VARS: usize = 20;
pub const MAX_FAMILY_SIZE: usize = 15;
pub const MAX_WHT_BITS: usize = 12;
/// Ground-set limit for the circuit expanders.
pub const MAX_EXPANSION_DIM: usize = 16;

fn gate(what: &str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        return Err(Error::TooLarge(format!(
            "{what} of size {size} exceeds the oracle limit {limit}"
        )));
    }
    Ok(())
}

/// All `2^n` subset sums, indexed by subset mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSums {
    pub sums: Vec<u128>,
    /// `S`, the number of distinct sums.
    pub distinct: usize,
}

impl SubsetSums {
    /// Number of subsets summing to `t`.
    pub fn count(&self, t: u128) -> u64 {
        self.sums.iter().filter(|&&s| s == t).count() as u64
    }

    /// Indices of the first subset (by mask) summing to `t`.
    pub fn witness(&self, t: u128) -> Option<Vec<usize>> {
        let mask = self.sums.iter().position(|&s| s == t)?;
        Some((0..usize::BITS as usize).filter(|i| mask >> i & 1 == 1).collect())
    }
}

pub fn brute_subset_sums(a: &[u64]) -> Result<SubsetSums> {
    gate("subset sum instance", a.len(), MAX_SUBSET_SUM_N)?;
    let mut sums = vec![0u128; 1 << a.len()];
    for mask in 1..sums.len() {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + u128::from(a[low]);
    }
    let distinct = sums.iter().collect::<BTreeSet<_>>().len();
    Ok(SubsetSums { sums, distinct })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSatTruth {
    pub count: u64,
    /// Solutions as masks over the `n` variables, increasing.
    pub witnesses: Vec<u64>,
}

pub fn brute_linear_sat(inst: &LinearSatInstance) -> Result<LinearSatTruth> {
    let n = inst.n();
    let m = inst.m();
    gate("Linear Sat instance", n, MAX_LINEAR_SAT_N)?;
    let rows: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..m).map(|j| inst.matrix().row(i).get(j)).collect())
        .collect();
    let b: Vec<bool> = (0..m).map(|j| inst.rhs().get(j)).collect();
    let witnesses: Vec<u64> = (0..1u64 << n)
        .filter(|&x| {
            let mut y = vec![false; m];
            let mut weight = 0u128;
            for i in (0..n).filter(|i| x >> i & 1 == 1) {
                weight += u128::from(inst.weights()[i]);
                for (yj, rj) in y.iter_mut().zip(&rows[i]) {
                    *yj ^= rj;
                }
            }
            weight <= u128::from(inst.budget()) && y == b
        })
        .collect();
    Ok(LinearSatTruth {
        count: witnesses.len() as u64,
        witnesses,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfTruth {
    pub model_count: u64,
    /// Number of assignments per projection mask, zero entries omitted.
    pub projections: BTreeMap<u64, u64>,
}

pub fn brute_cnf(phi: &CnfFormula) -> Result<CnfTruth> {
    let n = phi.num_vars();
    gate("CNF formula", n, MAX_CNF_VARS)?;
    let m = phi.num_clauses();
    let mut projections = BTreeMap::new();
    for a in 0..1u64 << n {
        let mut pi = 0u64;
        for (j, clause) in phi.clauses().iter().enumerate() {
            let sat = match clause {
                Clause::Tautology => true,
                Clause::Literals(lits) => lits.iter().any(|&l| {
                    let value = a >> (l.unsigned_abs() - 1) & 1 == 1;
                    value == (l > 0)
                }),
            };
            if sat {
                pi |= 1 << j;
            }
        }
        *projections.entry(pi).or_insert(0) += 1;
    }
    let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    Ok(CnfTruth {
        model_count: projections.get(&all).copied().unwrap_or(0),
        projections,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoverMode {
    /// Pairwise disjoint subfamilies of at most `bound` members covering `U`.
    Partition,
    /// Subfamilies of exactly `bound` members covering `U`.
    Cover,
}

/// Subfamilies of `sets` (by index, so duplicates count separately) that
/// partition or cover `{0, …, n-1}`.
pub fn brute_cover_partition(n: usize, sets: &[u64], bound: usize, mode: CoverMode) -> Result<u64> {
    gate("set family", sets.len(), MAX_FAMILY_SIZE)?;
    gate("universe", n, 63)?;
    let full = (1u64 << n) - 1;
    let mut count = 0;
    for c in 0..1u32 << sets.len() {
        let members: Vec<u64> = (0..sets.len())
            .filter(|i| c >> i & 1 == 1)
            .map(|i| sets[i])
            .collect();
        let union = members.iter().fold(0, |acc, s| acc | s);
        let ok = match mode {
            CoverMode::Partition => {
                let total: u32 = members.iter().map(|s| s.count_ones()).sum();
                members.len() <= bound && union == full && total == n as u32
            }
            CoverMode::Cover => members.len() == bound && union == full,
        };
        if ok {
            count += 1;
        }
    }
    Ok(count)
}

/// `vΦ` with `Φ_{x,y} = (-1)^{x·y}`, by direct matrix application.
pub fn naive_wht(v: &[BigInt]) -> Result<Vec<BigInt>> {
    if !v.len().is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "length {} is not a power of two",
            v.len()
        )));
    }
    gate("transform", v.len().trailing_zeros() as usize, MAX_WHT_BITS)?;
    Ok((0..v.len())
        .map(|y| {
            v.iter().enumerate().fold(BigInt::zero(), |acc, (x, vx)| {
                if (x & y).count_ones() % 2 == 0 {
                    acc + vx
                } else {
                    acc - vx
                }
            })
        })
        .collect())
}

/// Evaluates a circuit gate by gate in an explicit sparse algebra whose
/// product is `combine` on indices.
fn expand<L>(
    circuit: &Circuit<L>,
    mut label: impl FnMut(&L) -> Result<BTreeMap<u64, BigInt>>,
    combine: impl Fn(u64, u64) -> u64,
) -> Result<BTreeMap<u64, BigInt>> {
    let mut values: Vec<Option<BTreeMap<u64, BigInt>>> = vec![None; circuit.len()];
    for &g in circuit.topo_order() {
        let value = match &circuit.gates()[g] {
            Gate::Input(l) => label(l)?,
            Gate::Add(children) => {
                let mut acc = BTreeMap::new();
                for &c in children {
                    for (k, v) in values[c].as_ref().expect("children first") {
                        *acc.entry(*k).or_insert_with(BigInt::zero) += v;
                    }
                }
                acc
            }
            Gate::Mul(children) => {
                let mut acc = BTreeMap::from([(0u64, BigInt::from(1))]);
                for &c in children {
                    let mut next = BTreeMap::new();
                    for (a, x) in &acc {
                        for (b, y) in values[c].as_ref().expect("children first") {
                            *next.entry(combine(*a, *b)).or_insert_with(BigInt::zero) += x * y;
                        }
                    }
                    acc = next;
                }
                acc
            }
        };
        values[g] = Some(value.into_iter().filter(|(_, v)| !v.is_zero()).collect());
    }
    Ok(values[circuit.output()].take().unwrap_or_default())
}

/// Output of a union-product circuit, as mask → coefficient.
pub fn expand_union_circuit(circuit: &Circuit<UnionAlgebraVec>) -> Result<BTreeMap<u64, BigInt>> {
    expand(
        circuit,
        |l| {
            gate("ground set", l.dim(), MAX_EXPANSION_DIM)?;
            Ok(l.iter().map(|(x, v)| (x, v.clone())).collect())
        },
        |a, b| a | b,
    )
}

/// Output of an XOR-product circuit, as packed point → coefficient.
pub fn expand_group_circuit(circuit: &Circuit<GroupAlgebraVec>) -> Result<BTreeMap<u64, BigInt>> {
    expand(
        circuit,
        |l| {
            gate("group dimension", l.dim(), MAX_EXPANSION_DIM)?;
            Ok(l
                .iter()
                .map(|(y, v)| {
                    let packed = (0..y.len()).filter(|&i| y.get(i)).fold(0u64, |acc, i| acc | 1 << i);
                    (packed, v.clone())
                })
                .collect())
        },
        |a, b| a ^ b,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::CircuitBuilder;
    use crate::z2_hash::{Gf2Mat, Gf2Vec};

    #[test]
    fn subset_sum_examples() {
        let s = brute_subset_sums(&[1, 2, 4]).unwrap();
        assert_eq!(s.distinct, 8);
        let mut sorted = s.sums.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..8).collect::<Vec<u128>>());
        let empty = brute_subset_sums(&[]).unwrap();
        assert_eq!((empty.sums.clone(), empty.distinct), (vec![0], 1));
        let dup = brute_subset_sums(&[1, 1]).unwrap();
        assert_eq!((dup.sums.clone(), dup.distinct), (vec![0, 1, 1, 2], 3));
        assert_eq!(dup.count(1), 2);
        assert_eq!(dup.witness(2), Some(vec![0, 1]));
        assert!(brute_subset_sums(&[1; 25]).is_err());
    }

    #[test]
    fn linear_sat_examples() {
        let ident = LinearSatInstance::new(
            Gf2Mat::identity(2),
            Gf2Vec::parse("11").unwrap(),
            vec![1, 1],
            2,
        )
        .unwrap();
        assert_eq!(
            brute_linear_sat(&ident).unwrap(),
            LinearSatTruth { count: 1, witnesses: vec![0b11] }
        );
        let rows = vec![Gf2Vec::parse("10").unwrap(), Gf2Vec::parse("10").unwrap()];
        let inconsistent =
            LinearSatInstance::new(Gf2Mat::new(rows, 2).unwrap(), Gf2Vec::parse("01").unwrap(), vec![1, 1], 5)
                .unwrap();
        assert_eq!(brute_linear_sat(&inconsistent).unwrap().count, 0);
        let zero = LinearSatInstance::new(Gf2Mat::zeros(3, 2), Gf2Vec::zeros(2), vec![1, 2, 3], 6).unwrap();
        assert_eq!(brute_linear_sat(&zero).unwrap().count, 8);
    }

    #[test]
    fn cnf_examples() {
        let phi = CnfFormula::from_literals(2, &[vec![1, 2], vec![-1]]).unwrap();
        let t = brute_cnf(&phi).unwrap();
        assert_eq!(t.projections, BTreeMap::from([(0b10, 1), (0b11, 1), (0b01, 2)]));
        assert_eq!(t.model_count, 1);
        let empty = CnfFormula::from_literals(2, &[]).unwrap();
        assert_eq!(brute_cnf(&empty).unwrap().projections, BTreeMap::from([(0, 4)]));
        let unsat = CnfFormula::from_literals(1, &[vec![1], vec![-1]]).unwrap();
        let t = brute_cnf(&unsat).unwrap();
        assert!(!t.projections.contains_key(&0b11));
        assert_eq!(t.model_count, 0);
    }

    #[test]
    fn cover_partition_examples() {
        // U = {1,2,3}, F = {{1},{2,3},{1,2},{3}}: {1}+{2,3} and {1,2}+{3}.
        let f = [0b001, 0b110, 0b011, 0b100];
        assert_eq!(brute_cover_partition(3, &f, 2, CoverMode::Partition).unwrap(), 2);
        assert_eq!(brute_cover_partition(2, &[0b01, 0b10, 0b11], 2, CoverMode::Cover).unwrap(), 3);
        assert_eq!(brute_cover_partition(0, &[], 0, CoverMode::Partition).unwrap(), 1);
        assert_eq!(brute_cover_partition(0, &[], 0, CoverMode::Cover).unwrap(), 1);
        assert!(brute_cover_partition(3, &[1; 16], 2, CoverMode::Cover).is_err());
    }

    #[test]
    fn wht_examples() {
        assert_eq!(naive_wht(&[BigInt::from(7)]).unwrap(), vec![BigInt::from(7)]);
        let e2: Vec<BigInt> = (0..4).map(|i| BigInt::from(u8::from(i == 2))).collect();
        let row: Vec<BigInt> = [1, 1, -1, -1].into_iter().map(BigInt::from).collect();
        assert_eq!(naive_wht(&e2).unwrap(), row);
        assert!(naive_wht(&vec![BigInt::zero(); 1 << 13]).is_err());
    }

    #[test]
    fn expanders() {
        let mut b = CircuitBuilder::new();
        let x = b.input(UnionAlgebraVec::singleton(3, 1, 0b001));
        let y = b.input(UnionAlgebraVec::singleton(3, 1, 0b010));
        let z = b.input(UnionAlgebraVec::singleton(3, 1, 0b100));
        let l = b.add([x, y]);
        let r = b.add([y, z]);
        let out = b.mul([l, r]);
        let c = b.finish(out).unwrap();
        let one = BigInt::from(1);
        assert_eq!(
            expand_union_circuit(&c).unwrap(),
            BTreeMap::from([(0b011, one.clone()), (0b101, one.clone()), (0b010, one.clone()), (0b110, one)])
        );

        let mut b = CircuitBuilder::new();
        let x = b.input(GroupAlgebraVec::singleton(2, Gf2Vec::parse("10").unwrap()));
        let y = b.input(GroupAlgebraVec::singleton(3, Gf2Vec::parse("10").unwrap()));
        let out = b.mul([x, y]);
        let c = b.finish(out).unwrap();
        assert_eq!(expand_group_circuit(&c).unwrap(), BTreeMap::from([(0, BigInt::from(6))]));
    }
}
