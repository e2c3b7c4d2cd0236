//! Zeta and Möbius transforms on set families ordered by inclusion.
//!
//! Every poset here is a family of distinct subsets of a ground set of at
//! most 64 elements, ordered by `⊆`. Elements are kept in a fixed linear
//! extension: by cardinality, then by mask value.

use std::collections::HashMap;
use std::ops::{Add, Sub};

use num_traits::Zero;

use crate::{Error, Result};

/// Largest open interval accepted by [`hall_chain_count`].
pub const MAX_HALL_INTERVAL: usize = 20;

fn subset(x: u64, y: u64) -> bool {
    x & !y == 0
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetOnFamily {
    elements: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl PosetOnFamily {
    /// Sorts and deduplicates `elements` into the canonical linear extension.
    pub fn new(mut elements: Vec<u64>) -> Self {
        elements.sort_unstable_by_key(|&x| (x.count_ones(), x));
        elements.dedup();
        let index = elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        Self { elements, index }
    }

    /// The full subset lattice of `{0, …, n-1}`.
    pub fn full_lattice(n: usize) -> Self {
        assert!(n < 64, "lattice too large");
        Self::new((0..1u64 << n).collect())
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, x: u64) -> Option<usize> {
        self.index.get(&x).copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.index.contains_key(&x)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        subset(self.elements[i], self.elements[j])
    }

    fn require(&self, x: u64) -> Result<usize> {
        self.index_of(x)
            .ok_or_else(|| Error::NotFound(format!("{x:#b} is not in the poset")))
    }
}

/// `μ(x, y)` for all pairs, computed row by row from
/// `μ(x, y) = -Σ_{x ≤ z < y} μ(x, z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusTable {
    rows: Vec<Vec<i128>>,
}

impl MobiusTable {
    pub fn new(poset: &PosetOnFamily) -> Result<Self> {
        let rows = (0..poset.len())
            .map(|i| mobius_row(poset, i))
            .collect::<Result<_>>()?;
        Ok(Self { rows })
    }

    /// `μ(P[i], P[j])`, zero when `P[i] ⊄ P[j]`.
    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.rows[i][j]
    }
}

fn checked_sum(mut values: impl Iterator<Item = i128>) -> Result<i128> {
    values
        .try_fold(0i128, i128::checked_add)
        .ok_or_else(|| Error::Arithmetic("Möbius value exceeds i128".into()))
}

/// `μ(P[i], ·)` over the whole poset.
fn mobius_row(poset: &PosetOnFamily, i: usize) -> Result<Vec<i128>> {
    let el = poset.elements();
    let mut row = vec![0i128; el.len()];
    row[i] = 1;
    for j in i + 1..el.len() {
        if !subset(el[i], el[j]) {
            continue;
        }
        let below = (i..j)
            .filter(|&k| subset(el[k], el[j]))
            .map(|k| row[k]);
        row[j] = checked_sum(below)?
            .checked_neg()
            .ok_or_else(|| Error::Arithmetic("Möbius value exceeds i128".into()))?;
    }
    Ok(row)
}

/// `μ(x, y)` for elements `x, y` of the poset.
pub fn mobius_function(poset: &PosetOnFamily, x: u64, y: u64) -> Result<i128> {
    let i = poset.require(x)?;
    let j = poset.require(y)?;
    if !subset(x, y) {
        return Ok(0);
    }
    Ok(mobius_row(poset, i)?[j])
}

/// `(wζ)_y = Σ_{x ≤ y} w_x`.
pub fn zeta_transform_poset<T>(poset: &PosetOnFamily, w: &[T]) -> Result<Vec<T>>
where
    T: Clone + Zero + Add<Output = T>,
{
    check_len(poset, w.len())?;
    let el = poset.elements();
    Ok((0..el.len())
        .map(|j| {
            (0..=j)
                .filter(|&i| subset(el[i], el[j]))
                .fold(T::zero(), |acc, i| acc + w[i].clone())
        })
        .collect())
}

/// Inverse of [`zeta_transform_poset`]: in linear-extension order,
/// `z_i = w_i - Σ_{P[j] ⊂ P[i]} z_j`.
pub fn mobius_transform_poset<T>(poset: &PosetOnFamily, w: &[T]) -> Result<Vec<T>>
where
    T: Clone + Zero + Add<Output = T> + Sub<Output = T>,
{
    check_len(poset, w.len())?;
    let el = poset.elements();
    let mut z: Vec<T> = Vec::with_capacity(el.len());
    for i in 0..el.len() {
        let below = (0..i)
            .filter(|&j| subset(el[j], el[i]))
            .fold(T::zero(), |acc, j| acc + z[j].clone());
        z.push(w[i].clone() - below);
    }
    Ok(z)
}

fn check_len(poset: &PosetOnFamily, len: usize) -> Result<()> {
    if len != poset.len() {
        return Err(Error::InvalidArgument(format!(
            "vector of length {len} for a poset of size {}",
            poset.len()
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `(vζ)_Y = Σ_{X ⊆ Y} v_X`.
    Zeta,
    /// The inverse, `Σ_{X ⊆ Y} (-1)^{|Y \ X|} v_X`.
    Mobius,
}

/// Subset-lattice zeta or Möbius transform in `n` coordinate passes.
pub fn yates_transform<T>(v: &[T], direction: Direction) -> Result<Vec<T>>
where
    T: Clone + Add<Output = T> + Sub<Output = T>,
{
    let mut out = v.to_vec();
    yates_in_place(&mut out, direction)?;
    Ok(out)
}

pub fn yates_in_place<T>(v: &mut [T], direction: Direction) -> Result<()>
where
    T: Clone + Add<Output = T> + Sub<Output = T>,
{
    if !v.len().is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "length {} is not a power of two",
            v.len()
        )));
    }
    let mut bit = 1;
    while bit < v.len() {
        for y in 0..v.len() {
            if y & bit != 0 {
                let lower = v[y ^ bit].clone();
                let cur = v[y].clone();
                v[y] = match direction {
                    Direction::Zeta => cur + lower,
                    Direction::Mobius => cur - lower,
                };
            }
        }
        bit <<= 1;
    }
    Ok(())
}

/// `μ(∅, S)` and `μ(S, top)` for every element `S`, indexed like the poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremeMobius {
    pub from_bottom: Vec<i128>,
    pub to_top: Vec<i128>,
}

/// Both extreme tables by `g(S) = -Σ_{Y ⊂ S} g(Y)` and its order dual.
pub fn mu_to_extremes(poset: &PosetOnFamily, top: u64) -> Result<ExtremeMobius> {
    let bottom = poset.require(0)?;
    let top_i = poset.require(top)?;
    let from_bottom = mobius_row(poset, bottom)?;
    let el = poset.elements();
    let mut to_top = vec![0i128; el.len()];
    to_top[top_i] = 1;
    for i in (0..top_i).rev() {
        if !subset(el[i], top) {
            continue;
        }
        let above = (i + 1..=top_i)
            .filter(|&k| subset(el[i], el[k]) && subset(el[k], top))
            .map(|k| to_top[k]);
        to_top[i] = checked_sum(above)?
            .checked_neg()
            .ok_or_else(|| Error::Arithmetic("Möbius value exceeds i128".into()))?;
    }
    Ok(ExtremeMobius {
        from_bottom,
        to_top,
    })
}

/// `μ` of a product with a full subset lattice:
/// `μ((p1, q1), (p2, q2)) = μ_P(p1, p2) · (-1)^{|q2 \ q1|}`.
pub fn product_mobius(mu_p: i128, q1: u64, q2: u64) -> i128 {
    if !subset(q1, q2) {
        return 0;
    }
    if (q2 & !q1).count_ones().is_multiple_of(2) {
        mu_p
    } else {
        -mu_p
    }
}

/// Signed chain count `Σ_C (-1)^{len C}` over chains `x = c_0 < … < c_k = y`,
/// found by exhaustive enumeration.
pub fn hall_chain_count(poset: &PosetOnFamily, x: u64, y: u64) -> Result<i128> {
    poset.require(x)?;
    poset.require(y)?;
    if !subset(x, y) {
        return Err(Error::InvalidArgument(format!("{x:#b} is not below {y:#b}")));
    }
    if x == y {
        return Ok(1);
    }
    let interior: Vec<u64> = poset
        .elements()
        .iter()
        .copied()
        .filter(|&z| z != x && z != y && subset(x, z) && subset(z, y))
        .collect();
    if interior.len() > MAX_HALL_INTERVAL {
        return Err(Error::TooLarge(format!(
            "interval with {} interior elements",
            interior.len()
        )));
    }
    // Each chain is a strictly increasing path through the interior.
    fn extend(interior: &[u64], last: u64, steps: u32, total: &mut i128) {
        *total += if (steps + 1).is_multiple_of(2) { 1 } else { -1 };
        for (k, &z) in interior.iter().enumerate() {
            if z != last && subset(last, z) {
                extend(&interior[k + 1..], z, steps + 1, total);
            }
        }
    }
    let mut total = 0;
    extend(&interior, x, 0, &mut total);
    Ok(total)
}
