//! Set Partition through XOR hashing of incidence vectors.
//!
//! A subfamily partitions `U` exactly when its incidence vectors XOR to the
//! all-ones vector and its sizes add up to `|U|`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use super::gf2::{EchelonBasis, Gf2Mat, Gf2Vec};
use super::linear_sat::{linear_sat_count, linear_sat_count_amplified, LinearSatInstance};
use super::wht::wht_in_place;
use crate::family::SetFamily;
use crate::{Error, Result};

/// Largest hash dimension for the table-based counter.
pub const MAX_EXPSPACE_BITS: usize = 30;

fn linear_sat_reduction(family: &SetFamily, t: u64) -> Result<LinearSatInstance> {
    let n = family.len() as u64;
    let m = family.universe();
    let rows = family
        .sets()
        .iter()
        .map(|&s| Gf2Vec::from_u64(s, m))
        .collect();
    let weights = family
        .sets()
        .iter()
        .map(|s| u64::from(s.count_ones()) * n + 1)
        .collect();
    // Budgets above |F| admit no extra partitions but would admit overlaps.
    let budget = n * m as u64 + t.min(n);
    LinearSatInstance::new(Gf2Mat::new(rows, m)?, Gf2Vec::ones(m), weights, budget)
}

/// Partitions of `U` by at most `t` members of `F`, via one hashed Linear
/// Sat run with `ω_i = |S_i| · |F| + 1` and budget `|F| · |U| + t`.
///
/// Correct with probability at least 1/2 and never an undercount.
pub fn set_partition_count_polyspace<R: Rng + ?Sized>(
    family: &SetFamily,
    t: u64,
    rng: &mut R,
) -> Result<BigUint> {
    linear_sat_count(&linear_sat_reduction(family, t)?, rng)
}

/// Minimum of `repeats` runs of [`set_partition_count_polyspace`].
pub fn set_partition_polyspace_amplified<R: Rng + ?Sized>(
    family: &SetFamily,
    t: u64,
    repeats: usize,
    rng: &mut R,
) -> Result<BigUint> {
    linear_sat_count_amplified(&linear_sat_reduction(family, t)?, repeats, rng)
}

/// Outcome of one run of the table-based counter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpspaceRun {
    /// `by_size[k]` is the number of partitions with exactly `k` members,
    /// for `k ≤ t`; `None` when a division by `k!` was inexact.
    pub by_size: Option<Vec<BigUint>>,
    /// Whether `H` is injective on the span of the sets and the all-ones
    /// vector, which makes the run exact.
    pub collision_free: bool,
    /// Hash dimension `s`.
    pub s: usize,
    /// Rank of the nonempty incidence vectors.
    pub rank: usize,
}

impl ExpspaceRun {
    pub fn exactly(&self, k: usize) -> Option<&BigUint> {
        self.by_size.as_ref().and_then(|v| v.get(k))
    }

    pub fn at_most(&self, t: usize) -> Option<BigUint> {
        self.by_size
            .as_ref()
            .map(|v| v.iter().take(t + 1).sum())
    }
}

/// Counts partitions of each size `k ≤ t` with tables of size `2^s`.
///
/// With `g[j] = Σ_{|S|=j} ⟨1, S⟩` over the nonempty sets,
/// `f[k, j] = Σ_h f[k-1, h] * g[j-h]` counts ordered `k`-tuples of total
/// size `j`, so `f[k, |U|]` at the all-ones vector is `k!` times the number
/// of `k`-partitions. Each `g[j]` is hashed to `Z_2^s` and transformed once;
/// the recurrence then runs pointwise. Empty members are added afterwards:
/// `e` empty sets contribute `Σ_i C(e, i) · P(k - i)`.
pub fn set_partition_count_expspace<R: Rng + ?Sized>(
    family: &SetFamily,
    t: u64,
    rng: &mut R,
) -> Result<ExpspaceRun> {
    let m = family.universe();
    let nonempty: Vec<u64> = family.sets().iter().copied().filter(|&s| s != 0).collect();
    let empty = family.len() - nonempty.len();
    let rank = rank_of(&nonempty, m);
    let s = rank + 1;
    if s > MAX_EXPSPACE_BITS {
        return Err(Error::TooLarge(format!("hash dimension {s} for table counter")));
    }
    let h: Vec<u64> = (0..m).map(|_| rng.gen_range(0..1u64 << s)).collect();
    let hash = |set: u64| {
        (0..m)
            .filter(|&e| set >> e & 1 == 1)
            .fold(0u64, |acc, e| acc ^ h[e])
    };
    let universe = family.universe_mask();
    let collision_free = injective_on_span(&nonempty, universe, m, &hash, s);
    let t = usize::try_from(t).unwrap_or(usize::MAX).min(family.len());
    let max_parts = t.min(nonempty.len());
    let target = hash(universe);
    let partitions = match table_counts::<i128>(&nonempty, m, s, max_parts, target, &hash) {
        Some(v) => v,
        None => table_counts::<BigInt>(&nonempty, m, s, max_parts, target, &hash)
            .expect("big integers do not overflow"),
    };
    let by_size = partitions.map(|p| {
        (0..=t)
            .map(|k| {
                (0..=k.min(empty))
                    .filter(|&i| k - i < p.len())
                    .map(|i| binomial(empty, i) * &p[k - i])
                    .sum()
            })
            .collect()
    });
    Ok(ExpspaceRun {
        by_size,
        collision_free,
        s,
        rank,
    })
}

fn rank_of(sets: &[u64], m: usize) -> usize {
    let mut basis = EchelonBasis::new(sets.len());
    for &s in sets {
        basis.insert(&Gf2Vec::from_u64(s, m));
    }
    basis.rank()
}

fn injective_on_span(
    sets: &[u64],
    universe: u64,
    m: usize,
    hash: &impl Fn(u64) -> u64,
    s: usize,
) -> bool {
    let mut domain = EchelonBasis::new(sets.len() + 1);
    for &v in sets.iter().chain([&universe]) {
        domain.insert(&Gf2Vec::from_u64(v, m));
    }
    let mut image = EchelonBasis::new(domain.rank());
    let injective = domain.basis_rows().all(|row| {
        let z = hash(row.to_u64().expect("m ≤ 64"));
        image.insert(&Gf2Vec::from_u64(z, s))
    });
    injective
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Exact integer arithmetic that may report overflow.
trait TableInt: Clone + Zero + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self> {
    fn from_u64(x: u64) -> Self;
    fn checked_mul_add(acc: &Self, a: &Self, b: &Self) -> Option<Self>;
    fn checked_add(a: &Self, b: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl TableInt for i128 {
    fn from_u64(x: u64) -> Self {
        i128::from(x)
    }
    fn checked_mul_add(acc: &Self, a: &Self, b: &Self) -> Option<Self> {
        a.checked_mul(*b)?.checked_add(*acc)
    }
    fn checked_add(a: &Self, b: &Self) -> Option<Self> {
        i128::checked_add(*a, *b)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl TableInt for BigInt {
    fn from_u64(x: u64) -> Self {
        BigInt::from(x)
    }
    fn checked_mul_add(acc: &Self, a: &Self, b: &Self) -> Option<Self> {
        Some(acc + a * b)
    }
    fn checked_add(a: &Self, b: &Self) -> Option<Self> {
        Some(a + b)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Partition counts by number of nonempty parts, `k ≤ max_parts`.
///
/// Outer `None` means the integer type overflowed; inner `None` means some
/// division by `k!` was inexact. The butterflies cannot overflow `i128`
/// because transformed `g[j]` entries are bounded by `|F|`.
#[allow(clippy::type_complexity)]
fn table_counts<T: TableInt>(
    sets: &[u64],
    m: usize,
    s: usize,
    max_parts: usize,
    target: u64,
    hash: &impl Fn(u64) -> u64,
) -> Option<Option<Vec<BigUint>>> {
    let len = 1usize << s;
    let mut g = vec![vec![T::zero(); len]; m + 1];
    for &set in sets {
        let j = set.count_ones() as usize;
        let slot = &mut g[j][hash(set) as usize];
        *slot = T::checked_add(slot, &T::from_u64(1))?;
    }
    for row in &mut g {
        wht_in_place(row).expect("power-of-two length");
    }
    let mut f = vec![vec![T::zero(); len]; m + 1];
    f[0] = vec![T::from_u64(1); len];
    let mut counts = vec![BigUint::from(u8::from(m == 0))];
    let mut factorial = BigInt::one();
    for k in 1..=max_parts {
        let mut next = vec![vec![T::zero(); len]; m + 1];
        for j in 1..=m {
            for h in 0..j {
                for x in 0..len {
                    next[j][x] = T::checked_mul_add(&next[j][x], &f[h][x], &g[j - h][x])?;
                }
            }
        }
        f = next;
        factorial *= k;
        let mut total = BigInt::zero();
        for (x, value) in f[m].iter().enumerate() {
            if ((x as u64) & target).count_ones() % 2 == 1 {
                total -= value.to_big();
            } else {
                total += value.to_big();
            }
        }
        let (w, r) = total.div_rem(&(BigInt::one() << s));
        debug_assert!(r.is_zero(), "inverse transform is exact");
        let (count, r) = w.div_rem(&factorial);
        if !r.is_zero() {
            return Some(None);
        }
        match count.to_biguint() {
            Some(c) => counts.push(c),
            None => return Some(None),
        }
    }
    Some(Some(counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn family(universe: usize, sets: &[u64]) -> SetFamily {
        SetFamily::new(universe, sets.to_vec()).unwrap()
    }

    /// Subfamilies that partition `U`, by number of members.
    fn brute(f: &SetFamily) -> Vec<u64> {
        let mut by_size = vec![0u64; f.len() + 1];
        for mask in 0u64..1 << f.len() {
            let chosen: Vec<u64> = (0..f.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| f.sets()[i])
                .collect();
            let union = chosen.iter().fold(0, |a, s| a | s);
            let size: u32 = chosen.iter().map(|s| s.count_ones()).sum();
            if union == f.universe_mask() && size as usize == f.universe() {
                by_size[chosen.len()] += 1;
            }
        }
        by_size
    }

    #[test]
    fn two_element_examples() {
        let f = family(2, &[0b01, 0b10, 0b11]);
        let mut rng = crate::rng::stream(1, "setpart");
        let at2 = set_partition_polyspace_amplified(&f, 2, 20, &mut rng).unwrap();
        assert_eq!(at2, BigUint::from(2u8));
        let at1 = set_partition_polyspace_amplified(&f, 1, 20, &mut rng).unwrap();
        assert_eq!(at1, BigUint::from(1u8));
        let run = loop {
            let run = set_partition_count_expspace(&f, 2, &mut rng).unwrap();
            if run.by_size.is_some() {
                break run;
            }
        };
        assert_eq!(run.exactly(2), Some(&BigUint::from(1u8)));
        assert_eq!(run.exactly(1), Some(&BigUint::from(1u8)));
    }

    #[test]
    fn empty_universe() {
        let mut rng = crate::rng::stream(2, "setpart");
        let f = family(0, &[0, 0]);
        let poly = set_partition_polyspace_amplified(&f, 0, 5, &mut rng).unwrap();
        assert_eq!(poly, BigUint::from(1u8));
        let run = set_partition_count_expspace(&f, 0, &mut rng).unwrap();
        assert_eq!(run.exactly(0), Some(&BigUint::from(1u8)));
        let none = family(0, &[]);
        let run = set_partition_count_expspace(&none, 0, &mut rng).unwrap();
        assert_eq!(run.at_most(0), Some(BigUint::from(1u8)));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigUint::from(10u8));
        assert_eq!(binomial(3, 0), BigUint::from(1u8));
        assert_eq!(binomial(10, 5), BigUint::from(252u16));
    }

    #[test]
    fn collision_free_runs_are_exact() {
        let mut rng = crate::rng::stream(3, "setpart-random");
        for _ in 0..60 {
            let u = rng.gen_range(0..=5);
            let n = rng.gen_range(0..=7);
            let sets = (0..n).map(|_| rng.gen_range(0..1u64 << u)).collect::<Vec<_>>();
            let f = family(u, &sets);
            let truth = brute(&f);
            let t = rng.gen_range(0..=n as u64);
            for _ in 0..4 {
                let run = set_partition_count_expspace(&f, t, &mut rng).unwrap();
                if run.collision_free {
                    let got = run.by_size.expect("collision-free runs divide exactly");
                    for k in 0..=t as usize {
                        assert_eq!(got[k], BigUint::from(truth[k]));
                    }
                }
            }
            let poly = set_partition_polyspace_amplified(&f, t, 20, &mut rng).unwrap();
            let at_most: u64 = truth.iter().take(t as usize + 1).sum();
            assert_eq!(poly, BigUint::from(at_most));
        }
    }
}
