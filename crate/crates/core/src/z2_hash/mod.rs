//! Homomorphic hashing in the group algebra `Z[Z_2^n]`.
//!
//! A random linear map `H: Z_2^n → Z_2^s` induces a ring homomorphism
//! `⟨v, y⟩ ↦ ⟨v, yH⟩` into a `2^s`-dimensional algebra. The hashed output is
//! recovered coefficient by coefficient through the characters
//! `w ↦ Σ_y (-1)^{x·y} w_y`, each of which turns the circuit into a scalar
//! circuit over the integers.

mod algebra;
mod gf2;
mod linear_sat;
mod set_partition;
mod wht;

pub use algebra::{hash_point, GroupAlgebra, GroupAlgebraVec};
pub use gf2::{gf2_rank_solve, Gf2Mat, Gf2Vec, RankSolve};
pub use linear_sat::{
    linear_sat_circuit, linear_sat_count, linear_sat_count_amplified, linear_sat_high_rank,
    linear_sat_winwin, LinearSatInstance, WinWinBranch, WinWinOutcome,
};
pub use set_partition::{
    set_partition_count_expspace, set_partition_count_polyspace,
    set_partition_polyspace_amplified, ExpspaceRun,
};
pub use wht::{wht, wht_in_place, xor_convolution};

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;
use rayon::prelude::*;

use crate::circuits::{CheckedI128, Circuit, Integers};
use crate::subset_sum::ceil_log2;
use crate::{Error, Result};

/// Largest hash dimension `s`; `hash_z2_extract` evaluates `2^s` circuits.
pub const MAX_HASH_BITS: usize = 40;

/// Number of independent runs used when amplifying one-sided estimates.
pub const DEFAULT_REPEATS: usize = 20;

/// Hash dimension for a support bound: `⌈log₂ S̃⌉ + 1`.
pub fn hash_bits(support_bound: u64) -> usize {
    ceil_log2(support_bound.max(1)) as usize + 1
}

/// A uniformly random `n × s` matrix, as rows.
pub fn random_hash_matrix<R: Rng + ?Sized>(n: usize, s: usize, rng: &mut R) -> Vec<Gf2Vec> {
    (0..n)
        .map(|_| Gf2Vec::from_bools(&(0..s).map(|_| rng.gen()).collect::<Vec<_>>()))
        .collect()
}

/// Coefficient `v_t` of the output of a circuit with singleton inputs, with
/// probability at least 1/2 when `S̃ ≥ |supp v|`.
pub fn hash_z2_extract<R: Rng + ?Sized>(
    circuit: &Circuit<GroupAlgebraVec>,
    support_bound: u64,
    t: &Gf2Vec,
    rng: &mut R,
) -> Result<BigInt> {
    let s = hash_bits(support_bound);
    let h = random_hash_matrix(t.len(), s, rng);
    hash_z2_extract_with_matrix(circuit, &h, t)
}

/// [`hash_z2_extract`] for a fixed `H` (given by its `n` rows of length `s`):
/// returns `w_{tH}` where `w` is the hashed output.
pub fn hash_z2_extract_with_matrix(
    circuit: &Circuit<GroupAlgebraVec>,
    h_rows: &[Gf2Vec],
    t: &Gf2Vec,
) -> Result<BigInt> {
    let n = t.len();
    if h_rows.len() != n {
        return Err(Error::InvalidArgument(format!(
            "hash matrix has {} rows for dimension {n}",
            h_rows.len()
        )));
    }
    let s = h_rows.first().map_or(1, Gf2Vec::len);
    if s > MAX_HASH_BITS || h_rows.iter().any(|r| r.len() != s) {
        return Err(Error::TooLarge(format!("hash dimension {s} unsupported")));
    }
    let hashed = circuit.apply_input_homomorphism(|gate, label| {
        let (v, y) = label.as_singleton().ok_or(Error::NonSingleton { gate })?;
        if y.len() != n {
            return Err(Error::InvalidArgument(format!(
                "input {gate} has dimension {} instead of {n}",
                y.len()
            )));
        }
        let z = hash_point(y, h_rows, s).to_u64().expect("s ≤ 64");
        Ok(HashedSingleton { value: v.clone(), point: z })
    })?;
    let th = hash_point(t, h_rows, s).to_u64().expect("s ≤ 64");
    character_inversion(&hashed, s, th)
}

/// A hashed input label `⟨value, point⟩` with `point ∈ Z_2^s` packed.
#[derive(Clone, Debug)]
pub(crate) struct HashedSingleton {
    pub value: BigInt,
    pub point: u64,
}

/// `(1/2^s) Σ_x (-1)^{x·target} sub(C, x)`, where `sub` evaluates the
/// hashed circuit under the character indexed by `x`.
pub(crate) fn character_inversion(
    hashed: &Circuit<HashedSingleton>,
    s: usize,
    target: u64,
) -> Result<BigInt> {
    let small: Option<Vec<(i128, u64)>> = hashed
        .gates()
        .iter()
        .map(|g| match g {
            crate::circuits::Gate::Input(l) => {
                i128::try_from(&l.value).ok().map(|v| (v, l.point))
            }
            _ => Some((0, 0)),
        })
        .collect();
    let total: BigInt = (0u64..1 << s)
        .into_par_iter()
        .map(|x| {
            let value = sub_evaluate(hashed, small.as_deref(), x)?;
            Ok(if parity(x & target) { -value } else { value })
        })
        .try_reduce(BigInt::default, |a, b| Ok(a + b))?;
    let (q, r) = total.div_rem(&(BigInt::from(1) << s));
    if r != BigInt::default() {
        return Err(Error::Arithmetic(format!(
            "character sum {total} not divisible by 2^{s}"
        )));
    }
    Ok(q)
}

fn parity(x: u64) -> bool {
    x.count_ones() % 2 == 1
}

/// One character evaluation, in `i128` when the labels fit and no overflow
/// occurs, else in big integers.
fn sub_evaluate(
    hashed: &Circuit<HashedSingleton>,
    small: Option<&[(i128, u64)]>,
    x: u64,
) -> Result<BigInt> {
    if let Some(small) = small {
        let fast = hashed.evaluate_with(&CheckedI128, |gate, _| {
            let (v, z) = small[gate];
            Ok(if parity(x & z) { -v } else { v })
        });
        match fast {
            Ok(v) => return Ok(BigInt::from(v)),
            Err(Error::Arithmetic(_)) => {}
            Err(e) => return Err(e),
        }
    }
    hashed.evaluate_with(&Integers, |_, l| {
        Ok(if parity(x & l.point) {
            -l.value.clone()
        } else {
            l.value.clone()
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::CircuitBuilder;

    fn single(v: i64, bits: &str) -> GroupAlgebraVec {
        GroupAlgebraVec::singleton(v, Gf2Vec::parse(bits).unwrap())
    }

    fn product_circuit() -> Circuit<GroupAlgebraVec> {
        let mut b = CircuitBuilder::new();
        let x = b.input(single(1, "10"));
        let y = b.input(single(1, "01"));
        let out = b.mul([x, y]);
        b.finish(out).unwrap()
    }

    #[test]
    fn single_point_support_is_exact() {
        let c = product_circuit();
        let mut rng = crate::rng::stream(1, "z2");
        for _ in 0..50 {
            let got = hash_z2_extract(&c, 1, &Gf2Vec::parse("11").unwrap(), &mut rng).unwrap();
            assert_eq!(got, BigInt::from(1));
        }
    }

    #[test]
    fn zero_coefficient_recovered_often() {
        let c = product_circuit();
        let mut rng = crate::rng::stream(2, "z2");
        let zeros = (0..400)
            .filter(|_| {
                hash_z2_extract(&c, 1, &Gf2Vec::parse("10").unwrap(), &mut rng).unwrap()
                    == BigInt::from(0)
            })
            .count();
        assert!(zeros >= 160, "zeros = {zeros}");
    }

    #[test]
    fn constant_circuit() {
        let mut b = CircuitBuilder::new();
        let g = b.input(single(7, "000"));
        let c = b.finish(g).unwrap();
        let mut rng = crate::rng::stream(3, "z2");
        for s in [1, 5, 1000] {
            let got = hash_z2_extract(&c, s, &Gf2Vec::zeros(3), &mut rng).unwrap();
            assert_eq!(got, BigInt::from(7));
        }
    }

    #[test]
    fn non_singleton_input_is_rejected() {
        let mut b = CircuitBuilder::new();
        let g = b.input(single(1, "10").add(&single(1, "01")));
        let c = b.finish(g).unwrap();
        let mut rng = crate::rng::stream(4, "z2");
        let err = hash_z2_extract(&c, 2, &Gf2Vec::zeros(2), &mut rng).unwrap_err();
        assert_eq!(err, Error::NonSingleton { gate: 0 });
    }

    #[test]
    fn exact_whenever_hash_separates_support() {
        use crate::circuits::Ring;
        use rand::Rng as _;
        let mut rng = crate::rng::stream(5, "z2");
        for _ in 0..40 {
            let n = rng.gen_range(1..6);
            let mut b = CircuitBuilder::new();
            let mut gates = Vec::new();
            for _ in 0..4 {
                let x = b.input(GroupAlgebraVec::singleton(
                    rng.gen_range(1i64..4),
                    Gf2Vec::from_u64(rng.gen(), n),
                ));
                let y = b.input(GroupAlgebraVec::one(n));
                gates.push(b.add([x, y]));
            }
            let out = b.mul(gates);
            let c = b.finish(out).unwrap();
            let v = c.evaluate(&GroupAlgebra { n }).unwrap();
            assert_eq!(GroupAlgebra { n }.one().dim(), n);
            let s = rng.gen_range(1..6);
            let h = random_hash_matrix(n, s, &mut rng);
            let t = Gf2Vec::from_u64(rng.gen(), n);
            let th = hash_point(&t, &h, s);
            let separated = v.support().all(|y| *y == t || hash_point(y, &h, s) != th);
            let got = hash_z2_extract_with_matrix(&c, &h, &t).unwrap();
            assert_eq!(got, v.hash(&h, s).coefficient(&th));
            if separated {
                assert_eq!(got, v.coefficient(&t));
            }
        }
    }
}
